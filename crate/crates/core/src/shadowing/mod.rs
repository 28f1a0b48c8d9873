//! Pseudo-orbits, tracing oracles, tracing uniqueness and periodic tracing.

mod finite;
mod linear;
mod perturb;
mod strips;
mod symbolic;
mod unique;

pub use finite::{trace_finite_bruteforce, GridPoint, ModularTorus};
pub use linear::{
    exact_gap, series_constant, trace_linear_hyperbolic, trace_periodic_exact, ExactPeriodic, LinearLift,
};
pub use perturb::{perturbed_periodic, perturbed_pseudo_orbit, Perturb};
pub use strips::{
    drift_pseudo_orbit, harmonic_stall_walk, refute_harmonic_tracing, refute_strip_tracing,
    trace_strips, HarmonicRefutation, StripRefutation,
};
pub use symbolic::trace_sft;
pub use unique::unique_tracing_check;

use crate::entourage::Point;
use crate::systems::DynamicalSystem;

/// How the finite window continues to a bi-infinite sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// `x_{k+p} = x_k`; the window holds exactly one period.
    Periodic(usize),
    /// Outside the window the sequence is the true orbit of the endpoints.
    OrbitTail,
}

impl Extension {
    pub fn tag(&self) -> String {
        match self {
            Extension::Periodic(p) => format!("periodic:{p}"),
            Extension::OrbitTail => "orbit-tail".into(),
        }
    }

    pub fn parse(tag: &str) -> Option<Self> {
        if tag == "orbit-tail" {
            return Some(Extension::OrbitTail);
        }
        tag.strip_prefix("periodic:")?.parse().ok().map(Extension::Periodic)
    }
}

/// A window `x_m, …, x_{m+len-1}` of a pseudo-orbit with its extension.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOrbit<P> {
    pub window: Vec<P>,
    pub extension: Extension,
    /// Largest defect `d(f(x_k), x_{k+1})`, including the seam of a periodic window.
    pub defect_bound: f64,
    /// Index `m` of the first window entry.
    pub start: i64,
}

impl<P: Point> PseudoOrbit<P> {
    /// Wraps a window and computes its defect bound.
    pub fn new<S: DynamicalSystem<Point = P>>(sys: &S, window: Vec<P>, extension: Extension) -> Self {
        let mut po = PseudoOrbit {
            window,
            extension,
            defect_bound: 0.0,
            start: 0,
        };
        po.defect_bound = po.defects(sys).into_iter().fold(0.0, f64::max);
        po
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    /// `d(f(x_k), x_{k+1})` along the window; for periodic windows the
    /// final entry is the seam `d(f(x_{p-1}), x_0)`.
    pub fn defects<S: DynamicalSystem<Point = P>>(&self, sys: &S) -> Vec<f64> {
        let w = &self.window;
        let mut out: Vec<f64> = w
            .windows(2)
            .map(|p| sys.distance(&sys.forward(&p[0]), &p[1]))
            .collect();
        if let (Extension::Periodic(_), Some(last), Some(first)) = (self.extension, w.last(), w.first()) {
            out.push(sys.distance(&sys.forward(last), first));
        }
        out
    }

    /// Tags the window periodic with period equal to its length, closing the
    /// loop `x_N = x_0`; the seam defect enters the bound exactly.
    pub fn closed<S: DynamicalSystem<Point = P>>(self, sys: &S) -> Self {
        let p = self.window.len();
        let mut po = PseudoOrbit::new(sys, self.window, Extension::Periodic(p));
        po.start = self.start;
        po
    }

    /// The entry at absolute index `k`, following the extension outside the window.
    pub fn at<S: DynamicalSystem<Point = P>>(&self, sys: &S, k: i64) -> P {
        let n = self.window.len() as i64;
        let rel = k - self.start;
        match self.extension {
            Extension::Periodic(p) => self.window[rel.rem_euclid(p as i64) as usize].clone(),
            Extension::OrbitTail => {
                if rel < 0 {
                    sys.iterate(&self.window[0], rel)
                } else if rel >= n {
                    sys.iterate(&self.window[(n - 1) as usize], rel - n + 1)
                } else {
                    self.window[rel as usize].clone()
                }
            }
        }
    }
}

/// Three-valued outcome of a uniqueness question.
#[derive(Debug, Clone, PartialEq)]
pub enum Uniqueness<P> {
    Yes,
    /// Two distinct tracers that provably stay together.
    No { witness: (P, P) },
    Undetermined,
}

impl<P> Uniqueness<P> {
    pub fn label(&self) -> &'static str {
        match self {
            Uniqueness::Yes => "yes",
            Uniqueness::No { .. } => "no",
            Uniqueness::Undetermined => "undetermined",
        }
    }
}

/// A tracing orbit for a pseudo-orbit window.
#[derive(Debug, Clone, PartialEq)]
pub struct TracingResult<P> {
    /// The tracing point `y` aligned with the first window entry.
    pub point: P,
    /// `f^k(y)` for every window index, computed by iterating from `anchor`.
    pub orbit: Vec<P>,
    /// Window index from which `orbit` was iterated.
    pub anchor: usize,
    /// Gap `d(f^k(y), x_k)` at every window index.
    pub gaps: Vec<f64>,
    /// Largest entry of `gaps`.
    pub error_bound: f64,
    /// Absolute indices `(first, last)` covered by `gaps`.
    pub indices_checked: (i64, i64),
    pub unique: Uniqueness<P>,
    /// Verified period of the tracing point, for periodic inputs.
    pub period: Option<usize>,
}

impl<P: Point> TracingResult<P> {
    /// Iterates from `anchor_point` at window index `anchor` in both
    /// directions and records the gaps to the window.
    pub fn from_anchor<S: DynamicalSystem<Point = P>>(
        sys: &S,
        po: &PseudoOrbit<P>,
        anchor: usize,
        anchor_point: P,
    ) -> Self {
        let orbit = orbit_from_anchor(sys, po.len(), anchor, anchor_point);
        let gaps: Vec<f64> = orbit
            .iter()
            .zip(&po.window)
            .map(|(y, x)| sys.distance(y, x))
            .collect();
        let error_bound = gaps.iter().copied().fold(0.0, f64::max);
        TracingResult {
            point: orbit[0].clone(),
            orbit,
            anchor,
            gaps,
            error_bound,
            indices_checked: (po.start, po.start + po.len() as i64 - 1),
            unique: Uniqueness::Undetermined,
            period: None,
        }
    }

    /// Recomputes the gaps from the anchor and checks each against
    /// `error_bound`.
    pub fn reverify<S: DynamicalSystem<Point = P>>(&self, sys: &S, po: &PseudoOrbit<P>) -> bool {
        let orbit = orbit_from_anchor(sys, po.len(), self.anchor, self.orbit[self.anchor].clone());
        orbit
            .iter()
            .zip(&po.window)
            .all(|(y, x)| sys.distance(y, x) <= self.error_bound)
    }
}

fn orbit_from_anchor<S: DynamicalSystem>(sys: &S, len: usize, anchor: usize, y: S::Point) -> Vec<S::Point> {
    let mut orbit = vec![y.clone(); len];
    let mut cur = y.clone();
    for item in orbit.iter_mut().skip(anchor + 1) {
        cur = sys.forward(&cur);
        *item = cur.clone();
    }
    cur = y;
    for k in (0..anchor).rev() {
        cur = sys.backward(&cur);
        orbit[k] = cur.clone();
    }
    orbit
}
