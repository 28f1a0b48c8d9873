use std::sync::Arc;

use crate::entourage::{Entourage, Point};
use crate::error::HyperbolicError;
use crate::linalg::Vec2;
use crate::metric::{nearest_lift, wrap01, Metric};
use crate::shadowing::{Extension, LinearLift, PseudoOrbit};
use crate::systems::{DynamicalSystem, LinearSystem, Shift, SymbolPoint, TorusAutomorphism};

type Rule<P> = Arc<dyn Fn(&P, &P) -> Result<P, HyperbolicError> + Send + Sync>;

/// The local product map `t` with `W^s_B(x) ∩ W^u_B(y) = {t(x, y)}` for
/// `(x, y) ∈ D`.
#[derive(Clone)]
pub struct ProductStructure<P> {
    pub b: Entourage<P>,
    pub d: Entourage<P>,
    rule: Rule<P>,
}

impl<P: Point> ProductStructure<P> {
    pub fn t(&self, x: &P, y: &P) -> Result<P, HyperbolicError> {
        if !self.d.contains(x, y) {
            return Err(HyperbolicError::OutsideDomain(0));
        }
        (self.rule)(x, y)
    }

    /// `t` over a batch of pairs; errors name the offending index.
    pub fn apply_all(&self, pairs: &[(P, P)]) -> Result<Vec<P>, HyperbolicError> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, (x, y))| {
                if !self.d.contains(x, y) {
                    return Err(HyperbolicError::OutsideDomain(i));
                }
                (self.rule)(x, y)
            })
            .collect()
    }
}

impl<P> std::fmt::Debug for ProductStructure<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ProductStructure(B = {:?}, D = {:?})", self.b, self.d)
    }
}

/// `t(x, y) = x + P_s (y − x)`: the stable line through `x` meets the
/// unstable line through `y` there. `D` is shrunk so both displacements
/// stay inside `B = ball(b_radius)`.
pub fn product_map_linear(sys: &LinearSystem, b_radius: f64) -> ProductStructure<Vec2> {
    let split = *sys.splitting();
    let d_radius = b_radius / split.p_s.norm2().max(split.p_u.norm2()).max(1.0);
    ProductStructure {
        b: Entourage::ball("plane", Metric::euclidean(), b_radius),
        d: Entourage::ball("plane", Metric::euclidean(), d_radius),
        rule: Arc::new(move |x: &Vec2, y: &Vec2| {
            let v = split.p_s.apply([y[0] - x[0], y[1] - x[1]]);
            Ok([x[0] + v[0], x[1] + v[1]])
        }),
    }
}

/// The linear product map on the lift, with the displacement `y − x` read
/// through its nearest lift. Pairs at least `1/4` apart have no reliable
/// lift and are rejected.
pub fn product_map_torus(sys: &TorusAutomorphism, b_radius: f64) -> ProductStructure<Vec2> {
    const LIFT_LIMIT: f64 = 0.25;
    let split = *sys.splitting();
    let d_radius = (b_radius / split.p_s.norm2().max(split.p_u.norm2()).max(1.0)).min(LIFT_LIMIT);
    ProductStructure {
        b: Entourage::ball("torus", Metric::torus(), b_radius),
        d: Entourage::ball("torus", Metric::torus(), d_radius),
        rule: Arc::new(move |x: &Vec2, y: &Vec2| {
            let v = nearest_lift([y[0] - x[0], y[1] - x[1]]);
            let len = v[0].hypot(v[1]);
            if len >= LIFT_LIMIT {
                return Err(HyperbolicError::LiftAmbiguity(len, LIFT_LIMIT));
            }
            let s = split.p_s.apply(v);
            Ok([wrap01(x[0] + s[0]), wrap01(x[1] + s[1])])
        }),
    }
}

/// The splice `… y_{-2} y_{-1} . x_0 x_1 …`, admissible when the seam
/// `y_{-1} → x_0` is. `B = ball(1)`; `D = ball(d_radius)`.
pub fn product_map_sft(shift: &Shift, d_radius: f64) -> ProductStructure<SymbolPoint> {
    let sft = shift.clone();
    ProductStructure {
        b: Entourage::ball("shift", shift.metric().clone(), 1.0),
        d: Entourage::ball("shift", shift.metric().clone(), d_radius),
        rule: Arc::new(move |x: &SymbolPoint, y: &SymbolPoint| {
            let (a, b) = (y.at(-1), x.at(0));
            if !sft.transitions().allowed(a, b) {
                return Err(HyperbolicError::InadmissibleSeam(a as usize, b as usize));
            }
            Ok(SymbolPoint::glue(y, &[], x))
        }),
    }
}

/// The pseudo-orbit `f^i(y)` for `-half ≤ i < 0` followed by `f^i(x)` for
/// `0 ≤ i < half`, whose only defect is the seam at index 0.
pub fn glue_pseudo_orbit<S: DynamicalSystem>(sys: &S, x: &S::Point, y: &S::Point, half: usize) -> PseudoOrbit<S::Point> {
    let mut window = sys.orbit(y, -(half as i64), -1);
    window.extend(sys.orbit(x, 0, half as i64 - 1));
    let mut po = PseudoOrbit::new(sys, window, Extension::OrbitTail);
    po.start = -(half as i64);
    po
}

/// `t(x, y)` realized as the tracing point of the glued pseudo-orbit.
pub fn product_by_tracing<S: LinearLift>(sys: &S, x: Vec2, y: Vec2, half: usize) -> Result<Vec2, HyperbolicError> {
    let po = glue_pseudo_orbit(sys, &x, &y, half);
    let r = crate::shadowing::trace_linear_hyperbolic(sys, &po)?;
    Ok(r.orbit[half])
}
