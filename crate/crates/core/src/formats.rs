//! Line-oriented text formats for points and pseudo-orbits.

use crate::error::TraceError;
use crate::linalg::Vec2;
use crate::shadowing::{Extension, PseudoOrbit};
use crate::systems::{DynamicalSystem, StripPoint, SymbolPoint};

/// A point written on one line and read back exactly.
pub trait PointText: Sized {
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Option<Self>;
}

/// Shortest decimal that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

impl PointText for Vec2 {
    fn to_text(&self) -> String {
        format!("{} {}", num(self[0]), num(self[1]))
    }

    fn from_text(s: &str) -> Option<Self> {
        let mut it = s.split_whitespace().map(str::parse::<f64>);
        let p = [it.next()?.ok()?, it.next()?.ok()?];
        it.next().is_none().then_some(p)
    }
}

impl PointText for usize {
    fn to_text(&self) -> String {
        self.to_string()
    }

    fn from_text(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl PointText for StripPoint {
    fn to_text(&self) -> String {
        format!("{} {}", self.n, num(self.y))
    }

    fn from_text(s: &str) -> Option<Self> {
        let mut it = s.split_whitespace();
        let n = it.next()?.parse().ok()?;
        let y = it.next()?.parse().ok()?;
        it.next().is_none().then_some(StripPoint::new(n, y))
    }
}

fn symbols(v: &[u8]) -> String {
    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(".")
}

fn parse_symbols(s: &str) -> Option<Vec<u8>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split('.').map(|t| t.parse().ok()).collect()
}

/// `left:word:origin:right`, symbols separated by dots; the left tail is
/// listed outward from the word.
impl PointText for SymbolPoint {
    fn to_text(&self) -> String {
        let (left, word, origin, right) = self.parts();
        format!("{}:{}:{}:{}", symbols(left), symbols(word), origin, symbols(right))
    }

    fn from_text(s: &str) -> Option<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 4 {
            return None;
        }
        let left = parse_symbols(parts[0])?;
        let word = parse_symbols(parts[1])?;
        let origin = parts[2].parse().ok()?;
        let right = parse_symbols(parts[3])?;
        if left.is_empty() || right.is_empty() {
            return None;
        }
        Some(SymbolPoint::from_parts(left, word, origin, right))
    }
}

/// A pseudo-orbit with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOrbitFile<P> {
    pub system: String,
    pub delta: f64,
    pub extension: Extension,
    pub seed: u64,
    pub window: Vec<P>,
}

impl<P: PointText + crate::entourage::Point> PseudoOrbitFile<P> {
    pub fn from_pseudo_orbit(system: &str, delta: f64, seed: u64, po: &PseudoOrbit<P>) -> Self {
        PseudoOrbitFile {
            system: system.to_string(),
            delta,
            extension: po.extension,
            seed,
            window: po.window.clone(),
        }
    }

    /// Rebuilds the pseudo-orbit, recomputing its defects under `sys`.
    pub fn to_pseudo_orbit<S: DynamicalSystem<Point = P>>(&self, sys: &S) -> PseudoOrbit<P> {
        PseudoOrbit::new(sys, self.window.clone(), self.extension)
    }

    /// Header `system=<name> delta=<value> extension=<tag> seed=<n>`, then
    /// one point per line.
    pub fn render(&self) -> String {
        let mut out = format!(
            "system={} delta={} extension={} seed={}\n",
            self.system,
            num(self.delta),
            self.extension.tag(),
            self.seed
        );
        for p in &self.window {
            out.push_str(&p.to_text());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TraceError> {
        let bad = |line: usize, reason: &str| TraceError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let (mut system, mut delta, mut extension, mut seed) = (None, None, None, None);
        for field in header.split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(|| bad(1, "header field without `=`"))?;
            match k {
                "system" => system = Some(v.to_string()),
                "delta" => delta = Some(v.parse::<f64>().map_err(|_| bad(1, "bad delta"))?),
                "extension" => extension = Some(Extension::parse(v).ok_or_else(|| bad(1, "bad extension"))?),
                "seed" => seed = Some(v.parse::<u64>().map_err(|_| bad(1, "bad seed"))?),
                _ => return Err(bad(1, &format!("unknown header field `{k}`"))),
            }
        }
        let window = lines
            .map(|(i, l)| P::from_text(l).ok_or_else(|| bad(i + 1, "unreadable point")))
            .collect::<Result<Vec<P>, _>>()?;
        if window.is_empty() {
            return Err(TraceError::EmptyWindow);
        }
        if let Extension::Periodic(p) = extension.unwrap_or(Extension::OrbitTail) {
            if p != window.len() {
                return Err(TraceError::BadPeriod { period: p, len: window.len() });
            }
        }
        Ok(PseudoOrbitFile {
            system: system.ok_or_else(|| bad(1, "missing system"))?,
            delta: delta.ok_or_else(|| bad(1, "missing delta"))?,
            extension: extension.ok_or_else(|| bad(1, "missing extension"))?,
            seed: seed.ok_or_else(|| bad(1, "missing seed"))?,
            window,
        })
    }
}
