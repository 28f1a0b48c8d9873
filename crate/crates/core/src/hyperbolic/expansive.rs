use rayon::prelude::*;

use crate::entourage::{Entourage, Point};
use crate::error::HyperbolicError;
use crate::linalg::Mat2;
use crate::systems::{DynamicalSystem, LinearSystem};

/// How strongly a trapped pair refutes expansivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refutation {
    /// The pair returns to itself without leaving the neighborhood, so it
    /// stays inside for all times.
    Provable,
    /// The pair stayed inside over the whole search horizon.
    WithinHorizon,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExpansiveVerdict<P> {
    /// Every sampled pair separated within the horizon.
    Consistent,
    Refuted { witness: (P, P), kind: Refutation },
    /// Closed-form separation rates prove the neighborhood expansive.
    Proved { reason: String },
}

impl<P> ExpansiveVerdict<P> {
    pub fn label(&self) -> &'static str {
        match self {
            ExpansiveVerdict::Consistent => "consistent-with-expansive",
            ExpansiveVerdict::Refuted {
                kind: Refutation::Provable,
                ..
            } => "refuted",
            ExpansiveVerdict::Refuted { .. } => "refuted-within-horizon",
            ExpansiveVerdict::Proved { .. } => "proved",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansiveReport<P> {
    pub verdict: ExpansiveVerdict<P>,
    /// Per sampled pair, the signed iterate `n` with `Fⁿ(x, y) ∉ N`, or
    /// `None` when the pair stayed inside (or was a diagonal pair).
    pub separations: Vec<Option<i64>>,
    pub horizon: usize,
}

enum Fate {
    Diagonal,
    Separated(i64),
    Trapped(Refutation),
}

fn fate<S: DynamicalSystem>(sys: &S, n: &Entourage<S::Point>, x: &S::Point, y: &S::Point, horizon: usize) -> Fate {
    if x == y {
        return Fate::Diagonal;
    }
    if !n.contains(x, y) {
        return Fate::Separated(0);
    }
    let (mut fx, mut fy, mut bx, mut by) = (x.clone(), y.clone(), x.clone(), y.clone());
    let mut returned = false;
    for k in 1..=horizon as i64 {
        fx = sys.forward(&fx);
        fy = sys.forward(&fy);
        if !n.contains(&fx, &fy) {
            return Fate::Separated(k);
        }
        returned |= fx == *x && fy == *y;
        bx = sys.backward(&bx);
        by = sys.backward(&by);
        if !n.contains(&bx, &by) {
            return Fate::Separated(-k);
        }
    }
    Fate::Trapped(if returned {
        Refutation::Provable
    } else {
        Refutation::WithinHorizon
    })
}

/// Searches each sampled pair for an iterate `|n| ≤ horizon` that leaves `N`.
pub fn expansive_check<S: DynamicalSystem>(
    sys: &S,
    n: &Entourage<S::Point>,
    pairs: &[(S::Point, S::Point)],
    horizon: usize,
) -> Result<ExpansiveReport<S::Point>, HyperbolicError> {
    if horizon == 0 {
        return Err(HyperbolicError::ZeroHorizon);
    }
    let fates: Vec<Fate> = pairs.par_iter().map(|(x, y)| fate(sys, n, x, y, horizon)).collect();
    let trapped = |want: Refutation| {
        fates
            .iter()
            .position(|f| matches!(f, Fate::Trapped(k) if *k == want))
    };
    let verdict = match trapped(Refutation::Provable).map(|i| (i, Refutation::Provable)).or_else(|| {
        trapped(Refutation::WithinHorizon).map(|i| (i, Refutation::WithinHorizon))
    }) {
        Some((i, kind)) => ExpansiveVerdict::Refuted {
            witness: pairs[i].clone(),
            kind,
        },
        None => ExpansiveVerdict::Consistent,
    };
    let separations = fates
        .iter()
        .map(|f| match f {
            Fate::Separated(k) => Some(*k),
            _ => None,
        })
        .collect();
    Ok(ExpansiveReport {
        verdict,
        separations,
        horizon,
    })
}

/// For a hyperbolic linear map with the Euclidean metric every nonzero
/// difference grows without bound forwards or backwards, so every bounded
/// ball is an expansive neighborhood. Other metrics get no certificate.
pub fn certify_linear_expansive(sys: &LinearSystem, radius: f64) -> ExpansiveVerdict<crate::linalg::Vec2> {
    if sys.metric().name() == "euclidean" && radius.is_finite() && radius > 0.0 {
        ExpansiveVerdict::Proved {
            reason: format!(
                "euclidean ball({radius}); difference components grow at rates {} forward and {} backward",
                sys.splitting().lambda_u,
                1.0 / sys.splitting().lambda_s
            ),
        }
    } else {
        ExpansiveVerdict::Consistent
    }
}

/// Radius `c = 1 / (2 max(‖A‖, ‖A⁻¹‖))` of a ball that is an expansive
/// neighborhood for the torus automorphism with integer lift `a`: while two
/// orbits stay closer than `c`, the nearest lifts of their differences obey
/// the linear recursion exactly, and a bounded linear orbit is zero.
pub fn expansive_radius(a: &Mat2) -> f64 {
    let inv = a.inverse().expect("automorphisms are invertible");
    0.5 / a.norm2().max(inv.norm2())
}

/// `V_N(A) = {(x, y) : Fⁿ(x, y) ∈ A for all |n| ≤ N}`.
pub fn v_n_entourage<S>(sys: &S, a: &Entourage<S::Point>, n: usize) -> Entourage<S::Point>
where
    S: DynamicalSystem + Clone + 'static,
    S::Point: Point,
{
    if n == 0 {
        return a.clone();
    }
    let (sys, inner) = (sys.clone(), a.clone());
    Entourage::predicate(a.space_id(), &format!("V_{n}({})", a.label()), move |x, y| {
        if !inner.contains(x, y) {
            return false;
        }
        let (mut fx, mut fy, mut bx, mut by) = (x.clone(), y.clone(), x.clone(), y.clone());
        for _ in 0..n {
            fx = sys.forward(&fx);
            fy = sys.forward(&fy);
            bx = sys.backward(&bx);
            by = sys.backward(&by);
            if !inner.contains(&fx, &fy) || !inner.contains(&bx, &by) {
                return false;
            }
        }
        true
    })
}
