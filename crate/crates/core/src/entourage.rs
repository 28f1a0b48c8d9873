//! Neighborhoods of the diagonal and the calculus performed on them.
//!
//! An [`Entourage`] is an immutable relation `U ⊂ X × X` containing the
//! diagonal. It is represented by the rule deciding membership of a pair,
//! together with closed-form information (cross-section radius, wideness)
//! when the kind permits it. Compositions `Uⁿ` are evaluated lazily over a
//! caller-supplied sample set from which intermediate chain points are drawn.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::EntourageError;
use crate::metric::{Metric, Region};

/// Bounds shared by every point type handled by the toolkit.
pub trait Point: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {}
impl<T: Clone + PartialEq + fmt::Debug + Send + Sync + 'static> Point for T {}

type PairFn<P> = Arc<dyn Fn(&P, &P) -> bool + Send + Sync>;
type GaugeFn<P> = Arc<dyn Fn(&P) -> f64 + Send + Sync>;
type MemberFn<P> = Arc<dyn Fn(&P) -> bool + Send + Sync>;

/// Three-valued answer for questions that are only decidable in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    Undecided,
}

/// Finite cover of a sample region by bounded boxes `V_α`.
#[derive(Debug, Clone)]
pub struct CompactWitness<P> {
    pub boxes: Vec<Region<P>>,
}

impl<P: Point> CompactWitness<P> {
    pub fn new(boxes: Vec<Region<P>>) -> Self {
        CompactWitness { boxes }
    }

    pub fn covers(&self, p: &P) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }
}

impl CompactWitness<f64> {
    /// Closed unit-width (or `width`) intervals tiling `[lo, hi]`.
    pub fn tiling(lo: f64, hi: f64, width: f64) -> Self {
        let n = ((hi - lo) / width).ceil() as usize;
        let boxes = (0..n)
            .map(|k| {
                let a = lo + k as f64 * width;
                Region::interval(a, (a + width).min(hi))
            })
            .collect();
        CompactWitness { boxes }
    }
}

enum Kind<P> {
    Diagonal,
    All,
    Ball { radius: f64, metric: Metric<P> },
    Gauge { gauge: GaugeFn<P>, metric: Metric<P> },
    Finite(Arc<Vec<(P, P)>>),
    Predicate(PairFn<P>),
    Transpose(Box<Entourage<P>>),
    Meet(Vec<Entourage<P>>),
    Join(Vec<Entourage<P>>),
    /// `(S×S) ∪ ((X∖S)×X)`
    CoreWide(Region<P>),
    /// `⋃_α V_α × V_α`
    Boxes(Arc<CompactWitness<P>>),
    Composed(Arc<Composition<P>>),
}

impl<P> Clone for Kind<P> {
    fn clone(&self) -> Self {
        match self {
            Kind::Diagonal => Kind::Diagonal,
            Kind::All => Kind::All,
            Kind::Ball { radius, metric } => Kind::Ball {
                radius: *radius,
                metric: metric.clone(),
            },
            Kind::Gauge { gauge, metric } => Kind::Gauge {
                gauge: gauge.clone(),
                metric: metric.clone(),
            },
            Kind::Finite(p) => Kind::Finite(p.clone()),
            Kind::Predicate(f) => Kind::Predicate(f.clone()),
            Kind::Transpose(e) => Kind::Transpose(e.clone()),
            Kind::Meet(v) => Kind::Meet(v.clone()),
            Kind::Join(v) => Kind::Join(v.clone()),
            Kind::CoreWide(r) => Kind::CoreWide(r.clone()),
            Kind::Boxes(w) => Kind::Boxes(w.clone()),
            Kind::Composed(c) => Kind::Composed(c.clone()),
        }
    }
}

struct Composition<P> {
    factor: Entourage<P>,
    power: usize,
    samples: Arc<Vec<P>>,
    adjacency: OnceLock<Vec<Vec<u32>>>,
}

impl<P: Point> Composition<P> {
    /// Adjacency of the factor restricted to the samples; filled once.
    fn adjacency(&self) -> &Vec<Vec<u32>> {
        self.adjacency.get_or_init(|| {
            let s = &self.samples;
            (0..s.len())
                .into_par_iter()
                .map(|i| {
                    (0..s.len())
                        .filter(|&j| self.factor.contains(&s[i], &s[j]))
                        .map(|j| j as u32)
                        .collect()
                })
                .collect()
        })
    }

    fn contains(&self, x: &P, y: &P) -> bool {
        let s = &self.samples;
        let m = s.len();
        let adj = self.adjacency();
        // nodes 0..m are samples, m is x, m+1 is y
        let (ix, iy) = (m, m + 1);
        let f = &self.factor;
        let out_x: Vec<u32> = (0..m).filter(|&j| f.contains(x, &s[j])).map(|j| j as u32).collect();
        let out_y: Vec<u32> = (0..m).filter(|&j| f.contains(y, &s[j])).map(|j| j as u32).collect();
        let into_x: Vec<bool> = (0..m).map(|j| f.contains(&s[j], x)).collect();
        let into_y: Vec<bool> = (0..m).map(|j| f.contains(&s[j], y)).collect();
        let xy = f.contains(x, y);
        let yx = f.contains(y, x);
        let xx = f.contains(x, x);
        let yy = f.contains(y, y);

        let mut frontier = vec![false; m + 2];
        frontier[ix] = true;
        for _ in 0..self.power {
            let mut next = vec![false; m + 2];
            for (v, _) in frontier.iter().enumerate().filter(|(_, &on)| on) {
                if v < m {
                    for &w in &adj[v] {
                        next[w as usize] = true;
                    }
                    if into_x[v] {
                        next[ix] = true;
                    }
                    if into_y[v] {
                        next[iy] = true;
                    }
                } else {
                    let (outs, to_x, to_y) = if v == ix {
                        (&out_x, xx, xy)
                    } else {
                        (&out_y, yx, yy)
                    };
                    for &w in outs {
                        next[w as usize] = true;
                    }
                    next[ix] |= to_x;
                    next[iy] |= to_y;
                }
            }
            frontier = next;
        }
        frontier[iy]
    }
}

/// The cross-section `U[x] = {y : (x, y) ∈ U}`.
pub enum CrossSection<P> {
    Whole,
    Finite(Vec<P>),
    /// Open ball `{y : d(x, y) < radius}`.
    Ball {
        center: P,
        radius: f64,
        metric: Metric<P>,
    },
    Predicate(MemberFn<P>),
}

impl<P: Point> CrossSection<P> {
    pub fn contains(&self, y: &P) -> bool {
        match self {
            CrossSection::Whole => true,
            CrossSection::Finite(v) => v.contains(y),
            CrossSection::Ball {
                center,
                radius,
                metric,
            } => metric.distance(center, y) < *radius,
            CrossSection::Predicate(f) => f(y),
        }
    }

    /// Closed-form radius when the section is a ball.
    pub fn radius(&self) -> Option<f64> {
        match self {
            CrossSection::Ball { radius, .. } => Some(*radius),
            _ => None,
        }
    }
}

/// A neighborhood of the diagonal.
pub struct Entourage<P> {
    space_id: Arc<str>,
    label: Arc<str>,
    kind: Kind<P>,
    symmetric: bool,
    carrier: Option<MemberFn<P>>,
}

impl<P> Clone for Entourage<P> {
    fn clone(&self) -> Self {
        Entourage {
            space_id: self.space_id.clone(),
            label: self.label.clone(),
            kind: self.kind.clone(),
            symmetric: self.symmetric,
            carrier: self.carrier.clone(),
        }
    }
}

impl<P> fmt::Debug for Entourage<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Entourage({} on {})", self.label, self.space_id)
    }
}

impl<P: Point> Entourage<P> {
    fn make(space_id: &str, label: String, kind: Kind<P>, symmetric: bool) -> Self {
        Entourage {
            space_id: space_id.into(),
            label: label.into(),
            kind,
            symmetric,
            carrier: None,
        }
    }

    fn derived(&self, label: String, kind: Kind<P>, symmetric: bool) -> Self {
        Entourage {
            space_id: self.space_id.clone(),
            label: label.into(),
            kind,
            symmetric,
            carrier: self.carrier.clone(),
        }
    }

    /// The diagonal itself: `U[x] = {x}`.
    pub fn diagonal(space_id: &str) -> Self {
        Self::make(space_id, "diagonal".into(), Kind::Diagonal, true)
    }

    /// All of `X × X`.
    pub fn all_pairs(space_id: &str) -> Self {
        Self::make(space_id, "all-pairs".into(), Kind::All, true)
    }

    /// `U_δ = {(x, y) : d(x, y) < δ}`.
    pub fn ball(space_id: &str, metric: Metric<P>, radius: f64) -> Self {
        let label = format!("ball({radius}, {})", metric.name());
        Self::make(space_id, label, Kind::Ball { radius, metric }, true)
    }

    /// `B_δ = {(x, y) : d(x, y) < δ(x)}` for a positive gauge `δ`.
    pub fn gauge(
        space_id: &str,
        label: &str,
        metric: Metric<P>,
        gauge: impl Fn(&P) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::make(
            space_id,
            format!("gauge({label})"),
            Kind::Gauge {
                gauge: Arc::new(gauge),
                metric,
            },
            false,
        )
    }

    /// A finite relation given by its pairs.
    pub fn finite(space_id: &str, pairs: impl IntoIterator<Item = (P, P)>) -> Self {
        let pairs: Vec<(P, P)> = pairs.into_iter().collect();
        let symmetric = pairs.iter().all(|(a, b)| pairs.contains(&(b.clone(), a.clone())));
        Self::make(
            space_id,
            format!("finite({} pairs)", pairs.len()),
            Kind::Finite(Arc::new(pairs)),
            symmetric,
        )
    }

    /// A relation given by an arbitrary decision rule.
    pub fn predicate(
        space_id: &str,
        label: &str,
        rule: impl Fn(&P, &P) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self::make(space_id, label.to_string(), Kind::Predicate(Arc::new(rule)), false)
    }

    /// `(S×S) ∪ ((X∖S)×X)`: the canonical wide neighborhood with core `S`.
    pub fn core_wide(space_id: &str, core: Region<P>) -> Self {
        let label = format!("wide({})", core.label());
        Self::make(space_id, label, Kind::CoreWide(core), false)
    }

    /// Restricts cross-section queries to points accepted by `member`.
    pub fn with_carrier(mut self, member: impl Fn(&P) -> bool + Send + Sync + 'static) -> Self {
        self.carrier = Some(Arc::new(member));
        self
    }

    pub fn space_id(&self) -> &str {
        &self.space_id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_symmetric_flag(&self) -> bool {
        self.symmetric
    }

    pub fn in_carrier(&self, x: &P) -> bool {
        self.carrier.as_ref().is_none_or(|c| c(x))
    }

    /// Decides `(x, y) ∈ U`.
    pub fn contains(&self, x: &P, y: &P) -> bool {
        match &self.kind {
            Kind::Diagonal => x == y,
            Kind::All => true,
            Kind::Ball { radius, metric } => metric.distance(x, y) < *radius,
            Kind::Gauge { gauge, metric } => metric.distance(x, y) < gauge(x),
            Kind::Finite(pairs) => pairs.iter().any(|(a, b)| a == x && b == y),
            Kind::Predicate(f) => f(x, y),
            Kind::Transpose(e) => e.contains(y, x),
            Kind::Meet(v) => v.iter().all(|e| e.contains(x, y)),
            Kind::Join(v) => v.iter().any(|e| e.contains(x, y)),
            Kind::CoreWide(core) => !core.contains(x) || core.contains(y),
            Kind::Boxes(w) => w.boxes.iter().any(|b| b.contains(x) && b.contains(y)),
            Kind::Composed(c) => c.contains(x, y),
        }
    }

    /// `U[x]`, with closed form where the kind admits one.
    pub fn cross_section(&self, x: &P) -> Result<CrossSection<P>, EntourageError> {
        if !self.in_carrier(x) {
            return Err(EntourageError::OutsideCarrier(
                format!("{x:?}"),
                self.space_id.to_string(),
            ));
        }
        Ok(match &self.kind {
            Kind::Diagonal => CrossSection::Finite(vec![x.clone()]),
            Kind::All => CrossSection::Whole,
            Kind::Ball { radius, metric } => CrossSection::Ball {
                center: x.clone(),
                radius: *radius,
                metric: metric.clone(),
            },
            Kind::Gauge { gauge, metric } => CrossSection::Ball {
                center: x.clone(),
                radius: gauge(x),
                metric: metric.clone(),
            },
            Kind::Finite(pairs) => {
                let mut out: Vec<P> = Vec::new();
                for (a, b) in pairs.iter() {
                    if a == x && !out.contains(b) {
                        out.push(b.clone());
                    }
                }
                CrossSection::Finite(out)
            }
            Kind::CoreWide(core) if !core.contains(x) => CrossSection::Whole,
            _ => {
                let me = self.clone();
                let x = x.clone();
                CrossSection::Predicate(Arc::new(move |y: &P| me.contains(&x, y)))
            }
        })
    }

    /// Whether `U[x]` is the whole space; `None` when not decidable in closed form.
    pub fn section_is_whole(&self, x: &P) -> Option<bool> {
        match &self.kind {
            Kind::All => Some(true),
            Kind::Diagonal | Kind::Finite(_) => Some(false),
            Kind::Ball { radius, metric } => Some(metric.diameter().is_some_and(|d| *radius > d)),
            Kind::Gauge { gauge, metric } => {
                Some(metric.diameter().is_some_and(|d| gauge(x) > d))
            }
            Kind::CoreWide(core) => Some(!core.contains(x)),
            Kind::Transpose(e) if e.symmetric => e.section_is_whole(x),
            Kind::Meet(v) => {
                let parts: Vec<Option<bool>> = v.iter().map(|e| e.section_is_whole(x)).collect();
                if parts.contains(&Some(false)) {
                    Some(false)
                } else if parts.iter().all(|p| *p == Some(true)) {
                    Some(true)
                } else {
                    None
                }
            }
            Kind::Join(v) => {
                if v.iter().any(|e| e.section_is_whole(x) == Some(true)) {
                    Some(true)
                } else {
                    None
                }
            }
            Kind::Composed(c) => {
                if c.factor.section_is_whole(x) == Some(true) {
                    Some(true)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// A radius `r` such that every `y ∈ U[x]` satisfies `d(x, y) < r` in the
    /// metric the entourage was built from, when known in closed form.
    pub fn reach(&self, x: &P) -> Option<f64> {
        match &self.kind {
            Kind::Diagonal => Some(0.0),
            Kind::Ball { radius, .. } => Some(*radius),
            Kind::Gauge { gauge, .. } => Some(gauge(x)),
            Kind::Transpose(e) if e.symmetric => e.reach(x),
            Kind::Meet(v) => v.iter().filter_map(|e| e.reach(x)).reduce(f64::min),
            Kind::Join(v) => {
                let r: Option<Vec<f64>> = v.iter().map(|e| e.reach(x)).collect();
                r.map(|r| r.into_iter().fold(0.0, f64::max))
            }
            Kind::Boxes(w) => w
                .boxes
                .iter()
                .filter(|b| b.contains(x))
                .map(|b| b.diameter())
                .reduce(f64::max)
                .or(Some(0.0)),
            _ => None,
        }
    }

    /// `Uᵀ = {(y, x) : (x, y) ∈ U}`.
    pub fn transpose(&self) -> Self {
        if self.symmetric {
            return self.clone();
        }
        let label = format!("transpose({})", self.label);
        match &self.kind {
            Kind::Finite(pairs) => {
                let swapped: Vec<(P, P)> =
                    pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
                self.derived(label, Kind::Finite(Arc::new(swapped)), false)
            }
            Kind::Transpose(inner) => (**inner).clone(),
            _ => self.derived(label, Kind::Transpose(Box::new(self.clone())), false),
        }
    }

    /// `U ∩ Uᵀ`.
    pub fn symmetrize(&self) -> Self {
        if self.symmetric {
            return self.clone();
        }
        let label = format!("sym({})", self.label);
        match &self.kind {
            Kind::Finite(pairs) => {
                let kept: Vec<(P, P)> = pairs
                    .iter()
                    .filter(|(a, b)| pairs.contains(&(b.clone(), a.clone())))
                    .cloned()
                    .collect();
                self.derived(label, Kind::Finite(Arc::new(kept)), true)
            }
            _ => self.derived(label, Kind::Meet(vec![self.clone(), self.transpose()]), true),
        }
    }

    /// `U ∩ V`.
    pub fn intersect(&self, other: &Entourage<P>) -> Self {
        let label = format!("({} ∩ {})", self.label, other.label);
        self.derived(
            label,
            Kind::Meet(vec![self.clone(), other.clone()]),
            self.symmetric && other.symmetric,
        )
    }

    /// `U ∪ V`.
    pub fn union(&self, other: &Entourage<P>) -> Self {
        let label = format!("({} ∪ {})", self.label, other.label);
        self.derived(
            label,
            Kind::Join(vec![self.clone(), other.clone()]),
            self.symmetric && other.symmetric,
        )
    }

    /// `Uⁿ`, with intermediate chain points drawn from `samples ∪ {x, y}`.
    pub fn compose_n(&self, n: usize, samples: &[P]) -> Result<Self, EntourageError> {
        if n == 0 {
            return Err(EntourageError::ZeroPower(n));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let comp = Composition {
            factor: self.clone(),
            power: n,
            samples: Arc::new(samples.to_vec()),
            adjacency: OnceLock::new(),
        };
        Ok(self.derived(
            format!("{}^{n}", self.label),
            Kind::Composed(Arc::new(comp)),
            self.symmetric,
        ))
    }

    /// Wideness relative to `core`, decided on the samples lying outside it.
    pub fn is_wide(&self, core: &Region<P>, samples: &[P]) -> Decision {
        let mut undecided = false;
        for x in samples.iter().filter(|x| !core.contains(x)) {
            match self.section_is_whole(x) {
                Some(false) => return Decision::No,
                None => undecided = true,
                Some(true) => {}
            }
        }
        if undecided {
            Decision::Undecided
        } else {
            Decision::Yes
        }
    }

    /// `A ∩ ⋃_α (V_α × V_α)`.
    pub fn proper_restrict(&self, witness: &CompactWitness<P>) -> Result<Self, EntourageError> {
        if witness.boxes.is_empty() {
            return Err(EntourageError::EmptyWitness);
        }
        let boxes = self.derived(
            format!("boxes({})", witness.boxes.len()),
            Kind::Boxes(Arc::new(witness.clone())),
            true,
        );
        let label = format!("proper({})", self.label);
        Ok(self.derived(label, Kind::Meet(vec![self.clone(), boxes]), self.symmetric))
    }

    /// Transports `U` along a homeomorphism `h`: the result accepts `(a, b)`
    /// iff `(h⁻¹(a), h⁻¹(b)) ∈ U`.
    pub fn transport(&self, h_inv: impl Fn(&P) -> P + Send + Sync + 'static) -> Self {
        let me = self.clone();
        let mut out = Self::make(
            &self.space_id,
            format!("transport({})", self.label),
            Kind::Predicate(Arc::new(move |a: &P, b: &P| me.contains(&h_inv(a), &h_inv(b)))),
            self.symmetric,
        );
        out.carrier = None;
        out
    }

    /// Pulls `U` back along a map `g`: accepts `(a, b)` iff `(g(a), g(b)) ∈ U`.
    pub fn pullback(&self, label: &str, g: impl Fn(&P) -> P + Send + Sync + 'static) -> Self {
        let me = self.clone();
        Self::make(
            &self.space_id,
            format!("{label}({})", self.label),
            Kind::Predicate(Arc::new(move |a: &P, b: &P| me.contains(&g(a), &g(b)))),
            self.symmetric,
        )
    }

    pub fn contains_diagonal_on(&self, samples: &[P]) -> bool {
        samples.iter().all(|x| self.contains(x, x))
    }

    /// Evaluates `U` on every ordered pair of samples.
    pub fn materialize(&self, samples: &[P]) -> Self {
        let pairs: Vec<(P, P)> = samples
            .iter()
            .flat_map(|x| {
                samples
                    .iter()
                    .filter(move |y| self.contains(x, y))
                    .map(move |y| (x.clone(), y.clone()))
            })
            .collect();
        let mut e = Self::finite(&self.space_id, pairs);
        e.carrier = self.carrier.clone();
        e
    }

    /// Explicit pair list for finite relations.
    pub fn finite_pairs(&self) -> Option<&[(P, P)]> {
        match &self.kind {
            Kind::Finite(p) => Some(p),
            _ => None,
        }
    }
}

impl Entourage<usize> {
    /// Line-oriented serialization: one `x y` pair per line, sorted, so that
    /// equal relations serialize to identical text.
    pub fn to_pair_list(&self) -> Option<String> {
        let pairs: BTreeSet<(usize, usize)> = self.finite_pairs()?.iter().copied().collect();
        let mut out = String::new();
        for (a, b) in pairs {
            out.push_str(&format!("{a} {b}\n"));
        }
        Some(out)
    }

    pub fn from_pair_list(space_id: &str, text: &str) -> Result<Self, EntourageError> {
        let mut pairs = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| -> Result<usize, EntourageError> {
                s.ok_or_else(|| EntourageError::Parse {
                    line: i + 1,
                    reason: "expected two ids".into(),
                })?
                .parse()
                .map_err(|e| EntourageError::Parse {
                    line: i + 1,
                    reason: format!("{e}"),
                })
            };
            let mut it = line.split_whitespace();
            let a = parse(it.next())?;
            let b = parse(it.next())?;
            if it.next().is_some() {
                return Err(EntourageError::Parse {
                    line: i + 1,
                    reason: "trailing tokens".into(),
                });
            }
            pairs.insert((a, b));
        }
        Ok(Entourage::finite(space_id, pairs))
    }
}

/// A continuous positive gauge `δ` with `B_δ ⊂ U`, built by inf-convolution
/// of the lower semicontinuous profile `h(x) = d(x, X ∖ U[x])` over samples.
#[derive(Clone)]
pub struct SmoothGauge<P> {
    samples: Arc<Vec<P>>,
    profile: Arc<Vec<f64>>,
    metric: Metric<P>,
}

impl<P: Point> SmoothGauge<P> {
    /// `h` evaluated at each sample.
    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    pub fn samples(&self) -> &[P] {
        &self.samples
    }

    /// `δ(x) = ½ · min_s { h(s) + d(x, s) }`.
    pub fn value(&self, x: &P) -> f64 {
        let m = self
            .samples
            .iter()
            .zip(self.profile.iter())
            .map(|(s, h)| h + self.metric.distance(x, s))
            .fold(f64::INFINITY, f64::min);
        0.5 * m
    }

    /// The entourage `B_δ = {(x, y) : d(x, y) < δ(x)}`.
    pub fn to_entourage(&self, space_id: &str) -> Entourage<P> {
        let g = self.clone();
        Entourage::gauge(space_id, "smooth", self.metric.clone(), move |x| g.value(x))
    }
}

impl<P> fmt::Debug for SmoothGauge<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothGauge({} samples)", self.profile.len())
    }
}

/// Builds the gauge for `U` from its complement distances on `samples`.
pub fn smooth_gauge<P: Point>(
    u: &Entourage<P>,
    samples: &[P],
    metric: &Metric<P>,
) -> Result<SmoothGauge<P>, EntourageError> {
    if samples.is_empty() {
        return Err(EntourageError::NoSamples);
    }
    let profile: Result<Vec<f64>, EntourageError> = samples
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            samples
                .iter()
                .filter(|y| !u.contains(x, y))
                .map(|y| metric.distance(x, y))
                .reduce(f64::min)
                .ok_or(EntourageError::WholeCrossSection { index: i })
        })
        .collect();
    Ok(SmoothGauge {
        samples: Arc::new(samples.to_vec()),
        profile: Arc::new(profile?),
        metric: metric.clone(),
    })
}
