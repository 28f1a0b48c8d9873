use crate::entourage::Entourage;
use crate::linalg::{norm, Mat2, Vec2};
use crate::metric::{nearest_lift, wrap01};
use crate::shadowing::LinearLift;
use crate::systems::{DynamicalSystem, SymbolPoint};

/// Closed-form description of a local stable or unstable set.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalSet {
    /// `{base + t·direction : |t| < half_length}`, reduced mod 1 on the torus.
    Segment {
        base: Vec2,
        direction: Vec2,
        half_length: f64,
        torus: bool,
    },
    /// Open disc, when the whole neighborhood contracts.
    Disc { center: Vec2, radius: f64, torus: bool },
    /// Sequences agreeing with `point` at every coordinate in `lo..=hi`
    /// (`None` for an unbounded side).
    Cylinder {
        point: SymbolPoint,
        lo: Option<i64>,
        hi: Option<i64>,
    },
}

impl LocalSet {
    /// Membership of a plane or torus point, with tolerance `tol`.
    pub fn contains_vec(&self, p: Vec2, tol: f64) -> bool {
        match self {
            LocalSet::Segment {
                base,
                direction,
                half_length,
                torus,
            } => {
                let mut v = [p[0] - base[0], p[1] - base[1]];
                if *torus {
                    v = nearest_lift(v);
                }
                let t = v[0] * direction[0] + v[1] * direction[1];
                let off = [v[0] - t * direction[0], v[1] - t * direction[1]];
                t.abs() < half_length + tol && norm(off) <= tol
            }
            LocalSet::Disc { center, radius, torus } => {
                let mut v = [p[0] - center[0], p[1] - center[1]];
                if *torus {
                    v = nearest_lift(v);
                }
                norm(v) < radius + tol
            }
            LocalSet::Cylinder { .. } => false,
        }
    }

    pub fn contains_symbol(&self, p: &SymbolPoint) -> bool {
        match self {
            LocalSet::Cylinder { point, lo, hi } => match (lo, hi) {
                (Some(lo), None) => point.agrees_from(p, *lo),
                (None, Some(hi)) => point.agrees_until(p, *hi),
                (Some(lo), Some(hi)) => (*lo..=*hi).all(|i| point.at(i) == p.at(i)),
                (None, None) => point == p,
            },
            _ => false,
        }
    }

    /// `count` evenly spaced points of a segment or disc diameter.
    pub fn sample(&self, count: usize) -> Vec<Vec2> {
        let (base, dir, half, torus) = match self {
            LocalSet::Segment {
                base,
                direction,
                half_length,
                torus,
            } => (*base, *direction, *half_length, *torus),
            LocalSet::Disc { center, radius, torus } => (*center, [1.0, 0.0], *radius, *torus),
            LocalSet::Cylinder { .. } => return Vec::new(),
        };
        (0..count)
            .map(|i| {
                let t = half * (2.0 * (i as f64 + 0.5) / count as f64 - 1.0);
                let q = [base[0] + t * dir[0], base[1] + t * dir[1]];
                if torus {
                    [wrap01(q[0]), wrap01(q[1])]
                } else {
                    q
                }
            })
            .collect()
    }
}

fn unit_range(p: &Mat2) -> Vec2 {
    let c0 = [p.0[0][0], p.0[1][0]];
    let c1 = [p.0[0][1], p.0[1][1]];
    let c = if norm(c0) >= norm(c1) { c0 } else { c1 };
    let n = norm(c);
    [c[0] / n, c[1] / n]
}

fn linear_local<S: LinearLift>(sys: &S, x: Vec2, radius: f64, stable: bool) -> LocalSet {
    let split = sys.lift_splitting();
    let torus = sys.integer_lift().is_some();
    let (own, other) = if stable { (split.p_s, split.p_u) } else { (split.p_u, split.p_s) };
    if other.norm2() == 0.0 {
        return LocalSet::Disc { center: x, radius, torus };
    }
    if own.norm2() == 0.0 {
        return LocalSet::Segment {
            base: x,
            direction: [1.0, 0.0],
            half_length: 0.0,
            torus,
        };
    }
    LocalSet::Segment {
        base: x,
        direction: unit_range(&own),
        half_length: radius,
        torus,
    }
}

/// `W^s_B(x)` for `B = ball(radius)` of a hyperbolic linear map or torus
/// automorphism: the stable segment through `x`. Displacements along an
/// eigenline scale by the eigenvalue, so stable ones never grow and any
/// unstable component eventually leaves `B`.
pub fn local_stable_set<S: LinearLift>(sys: &S, x: Vec2, radius: f64) -> LocalSet {
    linear_local(sys, x, radius, true)
}

/// `W^u_B(x)`, the unstable segment through `x`.
pub fn local_unstable_set<S: LinearLift>(sys: &S, x: Vec2, radius: f64) -> LocalSet {
    linear_local(sys, x, radius, false)
}

/// `W^s_B(x)` in a shift for `B = ball(radius)`: sequences agreeing with
/// `x` at all coordinates `i > -m`, where `2^{-m} < radius`.
pub fn symbolic_stable_set(x: &SymbolPoint, radius: f64) -> LocalSet {
    let m = ((-radius.log2()).floor() as i64 + 1).max(0);
    LocalSet::Cylinder {
        point: x.clone(),
        lo: Some(-(m - 1)),
        hi: None,
    }
}

/// `W^u_B(x)` in a shift: agreement at all coordinates `i < m`.
pub fn symbolic_unstable_set(x: &SymbolPoint, radius: f64) -> LocalSet {
    let m = ((-radius.log2()).floor() as i64 + 1).max(0);
    LocalSet::Cylinder {
        point: x.clone(),
        lo: None,
        hi: Some(m - 1),
    }
}

/// Candidates `y` with `Fⁱ(x, y) ∈ B` for `0 ≤ i ≤ horizon`.
pub fn local_stable_set_sampled<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    b: &Entourage<S::Point>,
    candidates: &[S::Point],
    horizon: usize,
) -> Vec<S::Point> {
    sampled(sys, x, b, candidates, horizon, true)
}

/// Candidates `y` with `F^{-i}(x, y) ∈ B` for `0 ≤ i ≤ horizon`.
pub fn local_unstable_set_sampled<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    b: &Entourage<S::Point>,
    candidates: &[S::Point],
    horizon: usize,
) -> Vec<S::Point> {
    sampled(sys, x, b, candidates, horizon, false)
}

fn sampled<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    b: &Entourage<S::Point>,
    candidates: &[S::Point],
    horizon: usize,
    forward: bool,
) -> Vec<S::Point> {
    let step = |p: &S::Point| if forward { sys.forward(p) } else { sys.backward(p) };
    candidates
        .iter()
        .filter(|y| {
            let (mut a, mut c) = (x.clone(), (*y).clone());
            for i in 0..=horizon {
                if !b.contains(&a, &c) {
                    return false;
                }
                if i < horizon {
                    a = step(&a);
                    c = step(&c);
                }
            }
            true
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Metric;
    use crate::systems::{plane_two_metrics, Shift, TransitionMatrix};

    #[test]
    fn diag_stable_and_unstable_segments() {
        let diag = plane_two_metrics();
        let ws = local_stable_set(&diag, [0.0, 0.0], 0.3);
        assert!(ws.contains_vec([0.0, 0.29], 1e-12));
        assert!(ws.contains_vec([0.0, -0.29], 1e-12));
        assert!(!ws.contains_vec([0.01, 0.0], 1e-12));
        assert!(!ws.contains_vec([0.0, 0.31], 1e-12));
        let wu = local_unstable_set(&diag, [0.0, 0.0], 0.3);
        assert!(wu.contains_vec([0.29, 0.0], 1e-12));
        assert!(!wu.contains_vec([0.0, 0.01], 1e-12));
    }

    #[test]
    fn closed_form_matches_sampling() {
        let diag = plane_two_metrics();
        let b = Entourage::ball("plane", Metric::euclidean(), 0.3);
        let ws = local_stable_set(&diag, [0.0, 0.0], 0.3);
        let mut cands = Vec::new();
        for i in -12..=12 {
            for j in -12..=12 {
                cands.push([i as f64 * 0.025, j as f64 * 0.025]);
            }
        }
        let found = local_stable_set_sampled(&diag, &[0.0, 0.0], &b, &cands, 40);
        for c in &cands {
            assert_eq!(found.contains(c), ws.contains_vec(*c, 0.0), "{c:?}");
        }
        // every stable point converges to the fixed point at rate 1/2
        for p in ws.sample(9) {
            let q = diag.iterate(&p, 30);
            assert!(norm(q) <= norm(p) * 0.5f64.powi(30) + 1e-300);
        }
    }

    #[test]
    fn symbolic_cylinders() {
        let full = Shift::new(TransitionMatrix::full(2));
        let x = full.periodic(&[0, 1]).unwrap();
        let ws = symbolic_stable_set(&x, 0.3);
        // 2^{-2} < 0.3: coordinates i >= -1 are fixed
        let y = x.with_symbol(-2, 1 - x.at(-2));
        assert!(ws.contains_symbol(&y));
        assert!(!ws.contains_symbol(&x.with_symbol(-1, 1 - x.at(-1))));
        let wu = symbolic_unstable_set(&x, 0.3);
        assert!(wu.contains_symbol(&x.with_symbol(2, 1 - x.at(2))));
        assert!(!wu.contains_symbol(&x.with_symbol(1, 1 - x.at(1))));
    }
}
