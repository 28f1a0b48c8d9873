use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::TraceError;
use crate::linalg::{rat_vec, rat_vec_add, rat_vec_sub, rat_vec_to_f64, Mat2, RatMat2, RatVec2, Vec2};
use crate::metric::{nearest_lift, wrap01};
use crate::systems::{DynamicalSystem, LinearSystem, Splitting, TorusAutomorphism};

use super::{Extension, PseudoOrbit, TracingResult};

/// Hyperbolic systems covered by a linear map of the plane.
pub trait LinearLift: DynamicalSystem<Point = Vec2> {
    fn lift(&self) -> Mat2;

    fn lift_splitting(&self) -> &Splitting;

    /// Integer lift matrix for torus automorphisms.
    fn integer_lift(&self) -> Option<[[i64; 2]; 2]>;

    /// The lifted displacement from `from` to `to`.
    fn displacement(&self, from: Vec2, to: Vec2) -> Vec2 {
        let v = [to[0] - from[0], to[1] - from[1]];
        if self.integer_lift().is_some() {
            nearest_lift(v)
        } else {
            v
        }
    }

    /// Maps a lifted point back to the phase space.
    fn project(&self, v: Vec2) -> Vec2 {
        if self.integer_lift().is_some() {
            [wrap01(v[0]), wrap01(v[1])]
        } else {
            v
        }
    }
}

impl LinearLift for LinearSystem {
    fn lift(&self) -> Mat2 {
        self.matrix()
    }

    fn lift_splitting(&self) -> &Splitting {
        self.splitting()
    }

    fn integer_lift(&self) -> Option<[[i64; 2]; 2]> {
        None
    }
}

impl LinearLift for TorusAutomorphism {
    fn lift(&self) -> Mat2 {
        self.lift_matrix()
    }

    fn lift_splitting(&self) -> &Splitting {
        self.splitting()
    }

    fn integer_lift(&self) -> Option<[[i64; 2]; 2]> {
        Some(self.integer_matrix())
    }
}

/// `Σ_{i≥0} ‖Aⁱ P_s‖ + Σ_{i≥1} ‖A⁻ⁱ P_u‖`, the factor by which the tracing
/// error of the series solution is bounded by the defect bound.
pub fn series_constant(a: &Mat2, split: &Splitting) -> f64 {
    // A Pₛ = λₛ Pₛ on each eigenprojection, so both sums are geometric
    let _ = a;
    let stable = if split.lambda_s < 1.0 && split.p_s.norm2() > 0.0 {
        split.p_s.norm2() / (1.0 - split.lambda_s)
    } else {
        0.0
    };
    let unstable = if split.lambda_u.is_finite() && split.p_u.norm2() > 0.0 {
        split.p_u.norm2() / (split.lambda_u - 1.0)
    } else {
        0.0
    };
    stable + unstable
}

/// Tracing orbit for a pseudo-orbit of a hyperbolic linear map of the plane
/// or of a hyperbolic torus automorphism.
///
/// Orbit-tail windows use the bounded solution `e` of
/// `e_{k+1} = A e_k − d_k` with `d_k` the lifted defects: its stable part is
/// summed forward from the start of the window and its unstable part
/// backward from the end. The correction is applied at the middle of the
/// window and the orbit is iterated from there. Periodic windows are solved
/// exactly over the rationals.
pub fn trace_linear_hyperbolic<S: LinearLift>(
    sys: &S,
    po: &PseudoOrbit<Vec2>,
) -> Result<TracingResult<Vec2>, TraceError> {
    if po.is_empty() {
        return Err(TraceError::EmptyWindow);
    }
    if let Extension::Periodic(_) = po.extension {
        let exact = trace_periodic_exact(sys, po)?;
        let orbit: Vec<Vec2> = exact.orbit.iter().map(rat_vec_to_f64).collect();
        let mut r = TracingResult::from_anchor(sys, po, 0, orbit[0]);
        // the exact orbit is authoritative; the float iterate only reports gaps
        r.gaps = orbit.iter().zip(&po.window).map(|(y, x)| sys.distance(y, x)).collect();
        r.error_bound = r.gaps.iter().copied().fold(0.0, f64::max);
        r.orbit = orbit;
        r.point = r.orbit[0];
        r.period = exact.verified.then_some(exact.period);
        return Ok(r);
    }
    let a = sys.lift();
    let inv = a.inverse().expect("hyperbolic maps are invertible");
    let split = sys.lift_splitting();
    let w = &po.window;
    let n = w.len();
    let d: Vec<Vec2> = (0..n - 1).map(|k| sys.displacement(sys.forward(&w[k]), w[k + 1])).collect();
    let mid = n / 2;
    // re-projecting each step keeps rounding out of the expanding direction
    let mut s = [0.0, 0.0];
    for dk in d.iter().take(mid) {
        let as_ = a.apply(s);
        s = split.p_s.apply([as_[0] - dk[0], as_[1] - dk[1]]);
    }
    let mut u = [0.0, 0.0];
    for dk in d[mid..].iter().rev() {
        u = split.p_u.apply(inv.apply([u[0] + dk[0], u[1] + dk[1]]));
    }
    let xm = w[mid];
    let y = sys.project([xm[0] + s[0] + u[0], xm[1] + s[1] + u[1]]);
    Ok(TracingResult::from_anchor(sys, po, mid, y))
}

/// Exact periodic tracing point of a periodic window.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPeriodic {
    /// `y_0, …, y_{p-1}` over the rationals (reduced mod 1 on the torus).
    pub orbit: Vec<RatVec2>,
    pub period: usize,
    /// `A^p y_0 = y_0` holds exactly (modulo ℤ² on the torus).
    pub verified: bool,
}

fn rat_round(x: &BigRational) -> BigRational {
    (x + BigRational::new(1.into(), 2.into())).floor()
}

/// Solves `(A^p − I) e_0 = Σ_k A^{p−1−k} d_k` over the rationals, where `d_k`
/// are the lifted defects of the window including the seam, and returns the
/// periodic orbit `y_k = x_k + e_k`.
pub fn trace_periodic_exact<S: LinearLift>(sys: &S, po: &PseudoOrbit<Vec2>) -> Result<ExactPeriodic, TraceError> {
    let p = match po.extension {
        Extension::Periodic(p) => p,
        Extension::OrbitTail => return Err(TraceError::BadPeriod { period: 0, len: po.len() }),
    };
    if po.is_empty() {
        return Err(TraceError::EmptyWindow);
    }
    if p != po.len() {
        return Err(TraceError::BadPeriod { period: p, len: po.len() });
    }
    let torus = sys.integer_lift();
    let a = match torus {
        Some(m) => RatMat2::from_int(&m),
        None => RatMat2::from_f64(&sys.lift()),
    };
    let x: Vec<RatVec2> = po.window.iter().map(|v| rat_vec(*v)).collect();
    let d: Vec<RatVec2> = (0..p)
        .map(|k| {
            let v = rat_vec_sub(&x[(k + 1) % p], &a.apply(&x[k]));
            match torus {
                Some(_) => [&v[0] - rat_round(&v[0]), &v[1] - rat_round(&v[1])],
                None => v,
            }
        })
        .collect();
    let mut rhs: RatVec2 = [BigRational::zero(), BigRational::zero()];
    for dk in &d {
        rhs = rat_vec_add(&a.apply(&rhs), dk);
    }
    let e0 = a.pow(p as u64).sub_identity().solve(&rhs).ok_or(TraceError::SingularPeriodic)?;
    let mut e = e0;
    let mut orbit = Vec::with_capacity(p);
    for k in 0..p {
        let y = rat_vec_add(&x[k], &e);
        orbit.push(match torus {
            Some(_) => [&y[0] - y[0].floor(), &y[1] - y[1].floor()],
            None => y,
        });
        e = rat_vec_sub(&a.apply(&e), &d[k]);
    }
    let back = a.pow(p as u64).apply(&orbit[0]);
    let diff = rat_vec_sub(&back, &orbit[0]);
    let verified = match torus {
        Some(_) => diff.iter().all(|c| c.is_integer()),
        None => diff.iter().all(|c| c.is_zero()),
    };
    // consecutive exact points must be true iterates
    let chained = (0..p).all(|k| {
        let step = rat_vec_sub(&orbit[(k + 1) % p], &a.apply(&orbit[k]));
        match torus {
            Some(_) => step.iter().all(|c| c.is_integer()),
            None => step.iter().all(|c| c.is_zero()),
        }
    });
    Ok(ExactPeriodic {
        orbit,
        period: p,
        verified: verified && chained,
    })
}

/// Largest coordinate gap between an exact orbit and the window, measured
/// with the nearest lift on the torus.
pub fn exact_gap(exact: &ExactPeriodic, window: &[Vec2], torus: bool) -> BigRational {
    let mut best = BigRational::zero();
    for (y, x) in exact.orbit.iter().zip(window) {
        for (yc, xc) in y.iter().zip(rat_vec(*x).iter()) {
            let mut g = yc - xc;
            if torus {
                g = &g - rat_round(&g);
            }
            let g = g.abs();
            if g > best {
                best = g;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadowing::{perturbed_periodic, perturbed_pseudo_orbit};
    use crate::systems::plane_two_metrics;

    #[test]
    fn series_constants() {
        let cat = TorusAutomorphism::cat_map();
        let c = series_constant(&cat.lift_matrix(), cat.splitting());
        assert!((c - 5f64.sqrt()).abs() < 1e-9, "{c}");
        let diag = plane_two_metrics();
        assert!((series_constant(&diag.matrix(), diag.splitting()) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn diag_tracer_within_bounds() {
        let diag = plane_two_metrics();
        for seed in 0..20 {
            let delta = 1e-3;
            let po = perturbed_pseudo_orbit(&diag, [0.01, 3.0], 41, delta, seed);
            let r = trace_linear_hyperbolic(&diag, &po).unwrap();
            assert!(r.error_bound <= 5f64.sqrt() * delta, "{}", r.error_bound);
            assert!(r.reverify(&diag, &po));
            assert_eq!(r.anchor, 20);
        }
    }

    #[test]
    fn cat_tracer_within_bounds() {
        let cat = TorusAutomorphism::cat_map();
        for seed in 0..20 {
            let delta = 1e-4;
            let po = perturbed_pseudo_orbit(&cat, [0.2, 0.9], 41, delta, seed);
            let r = trace_linear_hyperbolic(&cat, &po).unwrap();
            assert!(r.error_bound <= 5f64.sqrt() * delta, "{}", r.error_bound);
        }
    }

    #[test]
    fn exact_orbit_traces_itself() {
        let cat = TorusAutomorphism::cat_map();
        let cycle = cat.orbit(&[0.0, 0.5], 0, 2);
        let po = PseudoOrbit::new(&cat, cycle.clone(), Extension::Periodic(3));
        let ex = trace_periodic_exact(&cat, &po).unwrap();
        assert!(ex.verified);
        assert!(exact_gap(&ex, &cycle, true).is_zero());
    }

    #[test]
    fn periodic_pseudo_orbit_is_traced_exactly() {
        let cat = TorusAutomorphism::cat_map();
        let cycle = cat.orbit(&[0.5, 0.5], 0, 2);
        let po = perturbed_periodic(&cat, &cycle, 1e-3, 2.62, 9);
        let ex = trace_periodic_exact(&cat, &po).unwrap();
        assert!(ex.verified);
        let r = trace_linear_hyperbolic(&cat, &po).unwrap();
        assert_eq!(r.period, Some(3));
        assert!(r.error_bound <= 5f64.sqrt() * po.defect_bound + 1e-12);

        let diag = plane_two_metrics();
        let po = perturbed_periodic(&diag, &[[0.0, 0.0]; 5], 1e-2, 2.0, 4);
        let r = trace_linear_hyperbolic(&diag, &po).unwrap();
        assert_eq!(r.period, Some(5));
        assert!(r.error_bound <= 5f64.sqrt() * po.defect_bound);
    }

    #[test]
    fn rejects_bad_windows() {
        let cat = TorusAutomorphism::cat_map();
        let po = PseudoOrbit::new(&cat, vec![], Extension::OrbitTail);
        assert_eq!(trace_linear_hyperbolic(&cat, &po).unwrap_err(), TraceError::EmptyWindow);
        let mut po = PseudoOrbit::new(&cat, vec![[0.1, 0.1]; 4], Extension::Periodic(4));
        po.extension = Extension::Periodic(3);
        assert!(matches!(trace_periodic_exact(&cat, &po), Err(TraceError::BadPeriod { .. })));
    }
}
