use rayon::prelude::*;

use crate::entourage::Entourage;
use crate::error::{HyperbolicError, SystemError};
use crate::linalg::Vec2;
use crate::metric::Metric;
use crate::shadowing::{
    series_constant, trace_linear_hyperbolic, trace_sft, unique_tracing_check, Extension, LinearLift, PseudoOrbit,
    Uniqueness,
};
use crate::systems::{DynamicalSystem, Shift, SymbolPoint};

use super::expansive::expansive_radius;

/// Outcome of building `h` with `f ∘ h = h ∘ g` on sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub system: String,
    pub perturbation: String,
    pub window: usize,
    /// Radius of `D`, checked against `(f(x), g(x))` for every sample.
    pub d_radius: f64,
    /// Radius of `B`: the series constant times the largest defect.
    pub b_radius: f64,
    /// Largest defect `d(f(gᵏx), gᵏ⁺¹x)` over all windows.
    pub defect_bound: f64,
    /// Radius of a ball known to be an expansive neighborhood of `f`.
    pub expansive_radius: f64,
    pub samples: Vec<Vec2>,
    pub h: Vec<Vec2>,
    /// `h(g(x))` for each sample.
    pub h_of_g: Vec<Vec2>,
    /// `sup d(f(h(x)), h(g(x)))`.
    pub semiconjugacy_residual: f64,
    /// `sup d(h(x), x)`.
    pub closeness: f64,
    /// `B` is symmetric with `B²` inside the expansive ball, and sampled
    /// rival tracers all separate.
    pub unique: bool,
    /// No two distinct samples share an `h` value within the tolerance.
    pub injective: bool,
    pub injectivity_tolerance: f64,
}

impl StabilityReport {
    /// Recomputes the residual from the stored `h` values.
    pub fn recompute_residual<F: DynamicalSystem<Point = Vec2>>(&self, f: &F) -> f64 {
        self.h
            .iter()
            .zip(&self.h_of_g)
            .map(|(h, hg)| f.distance(&f.forward(h), hg))
            .fold(0.0, f64::max)
    }

    /// Recomputes the closeness from the stored `h` values.
    pub fn recompute_closeness(&self, metric: &Metric<Vec2>) -> f64 {
        self.h
            .iter()
            .zip(&self.samples)
            .map(|(h, x)| metric.distance(h, x))
            .fold(0.0, f64::max)
    }
}

fn centered_window<G: DynamicalSystem<Point = Vec2>>(g: &G, x: &Vec2, window: usize) -> Vec<Vec2> {
    let half = (window / 2) as i64;
    g.orbit(x, -half, window as i64 - half)
}

/// Builds `h(x)` as the tracing point under `f` of the `g`-orbit window
/// centered at `x`, for every sample, and reports the semiconjugacy
/// residual, closeness, uniqueness and injectivity.
pub fn stability_conjugacy_h<F, G>(
    f: &F,
    g: &G,
    d_radius: f64,
    samples: &[Vec2],
    window: usize,
) -> Result<StabilityReport, HyperbolicError>
where
    F: LinearLift,
    G: DynamicalSystem<Point = Vec2>,
{
    if window < 2 {
        return Err(SystemError::Parameter(format!("window {window} must be at least 2")).into());
    }
    if let Some(i) = samples.iter().position(|x| f.distance(&f.forward(x), &g.forward(x)) >= d_radius) {
        return Err(HyperbolicError::OutsideDomain(i));
    }
    let mid = window / 2;
    type Row = (Vec2, Vec2, f64);
    let rows: Result<Vec<Row>, HyperbolicError> = samples
        .par_iter()
        .map(|x| {
            let orbit = centered_window(g, x, window);
            let here = PseudoOrbit::new(f, orbit[..window].to_vec(), Extension::OrbitTail);
            let next = PseudoOrbit::new(f, orbit[1..].to_vec(), Extension::OrbitTail);
            let h = trace_linear_hyperbolic(f, &here)?.orbit[mid];
            let hg = trace_linear_hyperbolic(f, &next)?.orbit[mid];
            Ok((h, hg, here.defect_bound.max(next.defect_bound)))
        })
        .collect();
    let rows = rows?;
    let h: Vec<Vec2> = rows.iter().map(|r| r.0).collect();
    let h_of_g: Vec<Vec2> = rows.iter().map(|r| r.1).collect();
    let defect_bound = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let split = f.lift_splitting();
    let b_radius = series_constant(&f.lift(), split) * defect_bound;
    let exp_radius = if f.integer_lift().is_some() {
        expansive_radius(&f.lift())
    } else {
        f64::INFINITY
    };

    let semiconjugacy_residual = h
        .iter()
        .zip(&h_of_g)
        .map(|(a, b)| f.distance(&f.forward(a), b))
        .fold(0.0, f64::max);
    let closeness = h.iter().zip(samples).map(|(a, x)| f.distance(a, x)).fold(0.0, f64::max);

    // rival tracers displaced inside B along each eigendirection must separate
    let b = Entourage::ball("phase", f.metric().clone(), b_radius);
    let b2 = Entourage::ball("phase", f.metric().clone(), 2.0 * b_radius);
    let dirs = [split.p_s, split.p_u].map(|p| {
        let c = p.apply([1.0, 0.0]);
        let c = if c[0].hypot(c[1]) > 1e-9 { c } else { p.apply([0.0, 1.0]) };
        let n = c[0].hypot(c[1]);
        [c[0] / n, c[1] / n]
    });
    let probe = samples.len().min(100);
    let sampled_unique = (0..probe).into_par_iter().all(|i| {
        let orbit = centered_window(g, &samples[i], window);
        let po = PseudoOrbit::new(f, orbit[..window].to_vec(), Extension::OrbitTail);
        let eta = 0.5 * b_radius;
        let mut cands = vec![h[i]];
        for d in dirs {
            cands.push(f.project([h[i][0] + eta * d[0], h[i][1] + eta * d[1]]));
        }
        unique_tracing_check(f, &po, &cands, &b, &b2, window) == Uniqueness::Yes
    });
    let unique = 2.0 * b_radius < exp_radius && sampled_unique;

    let tol = 1e-8;
    let injective = (0..samples.len()).into_par_iter().all(|i| {
        (i + 1..samples.len()).all(|j| f.distance(&samples[i], &samples[j]) <= tol || f.distance(&h[i], &h[j]) > tol)
    });

    Ok(StabilityReport {
        system: f.name().to_string(),
        perturbation: g.name().to_string(),
        window,
        d_radius,
        b_radius,
        defect_bound,
        expansive_radius: exp_radius,
        samples: samples.to_vec(),
        h,
        h_of_g,
        semiconjugacy_residual,
        closeness,
        unique,
        injective,
        injectivity_tolerance: tol,
    })
}

/// A shift followed by a swap of two symbols at one coordinate; a
/// homeomorphism close to the shift when the coordinate is far from 0.
#[derive(Debug, Clone)]
pub struct RecodedShift {
    shift: Shift,
    coordinate: i64,
    swap: (u8, u8),
    name: String,
}

impl RecodedShift {
    /// Requires every transition to be allowed, so the swap keeps points admissible.
    pub fn new(shift: Shift, coordinate: i64, swap: (u8, u8)) -> Result<Self, SystemError> {
        let tm = shift.transitions();
        let k = tm.size() as u8;
        if (0..k).any(|a| (0..k).any(|b| !tm.allowed(a, b))) {
            return Err(SystemError::Parameter("recoding needs a full shift".into()));
        }
        if swap.0 >= k || swap.1 >= k {
            return Err(SystemError::BadSymbol(swap.0.max(swap.1) as usize, k as usize));
        }
        let name = format!("{}-recoded@{coordinate}", shift.name());
        Ok(RecodedShift {
            shift,
            coordinate,
            swap,
            name,
        })
    }

    fn recode(&self, p: &SymbolPoint) -> SymbolPoint {
        let s = p.at(self.coordinate);
        let t = if s == self.swap.0 {
            self.swap.1
        } else if s == self.swap.1 {
            self.swap.0
        } else {
            return p.clone();
        };
        p.with_symbol(self.coordinate, t)
    }
}

impl DynamicalSystem for RecodedShift {
    type Point = SymbolPoint;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &SymbolPoint) -> SymbolPoint {
        self.recode(&self.shift.forward(p))
    }

    fn backward(&self, p: &SymbolPoint) -> SymbolPoint {
        self.shift.backward(&self.recode(p))
    }

    fn metric(&self) -> &Metric<SymbolPoint> {
        self.shift.metric()
    }
}

/// `h` for a symbolic perturbation of a shift, compared coordinatewise.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicStability {
    pub h: Vec<SymbolPoint>,
    /// Coordinates `|i| ≤ checked_radius` compared between `σ(h(x))` and `h(g(x))`.
    pub checked_radius: usize,
    /// Coordinates in that range where the two disagree.
    pub mismatches: usize,
    /// `sup d(h(x), x)`.
    pub closeness: f64,
}

/// Builds `h(x)` as the diagonal tracer of the `g`-orbit window centered at
/// `x`. Within the window the splice is exact, so `σ ∘ h` and `h ∘ g`
/// agree at every coordinate the two windows share.
pub fn stability_conjugacy_sft<G: DynamicalSystem<Point = SymbolPoint>>(
    shift: &Shift,
    g: &G,
    samples: &[SymbolPoint],
    window: usize,
) -> Result<SymbolicStability, HyperbolicError> {
    if window < 4 {
        return Err(SystemError::Parameter(format!("window {window} must be at least 4")).into());
    }
    let half = window / 2;
    let rows: Result<Vec<(SymbolPoint, usize, f64)>, HyperbolicError> = samples
        .par_iter()
        .map(|x| {
            let orbit = g.orbit(x, -(half as i64), (window - half) as i64);
            let here = PseudoOrbit::new(shift, orbit[..window].to_vec(), Extension::OrbitTail);
            let next = PseudoOrbit::new(shift, orbit[1..].to_vec(), Extension::OrbitTail);
            let h = trace_sft(shift, &here)?.orbit[half].clone();
            let hg = trace_sft(shift, &next)?.orbit[half].clone();
            let fh = shift.forward(&h);
            let r = half as i64 - 2;
            let bad = (-r..=r).filter(|&i| fh.at(i) != hg.at(i)).count();
            let close = shift.distance(&h, x);
            Ok((h, bad, close))
        })
        .collect();
    let rows = rows?;
    Ok(SymbolicStability {
        checked_radius: half - 2,
        mismatches: rows.iter().map(|r| r.1).sum(),
        closeness: rows.iter().map(|r| r.2).fold(0.0, f64::max),
        h: rows.into_iter().map(|r| r.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{PerturbedTorus, TorusAutomorphism, TransitionMatrix};

    fn grid(n: usize) -> Vec<Vec2> {
        (0..n * n)
            .map(|k| [((k / n) as f64 + 0.5) / n as f64, ((k % n) as f64 + 0.5) / n as f64])
            .collect()
    }

    #[test]
    fn identity_perturbation_gives_identity() {
        let cat = TorusAutomorphism::cat_map();
        let r = stability_conjugacy_h(&cat, &cat, 0.01, &grid(10), 40).unwrap();
        assert!(r.semiconjugacy_residual < 1e-12);
        assert!(r.closeness < 1e-12, "{} {}", r.closeness, r.defect_bound);
        assert!(r.injective);
    }

    #[test]
    fn perturbed_cat_map() {
        let cat = TorusAutomorphism::cat_map();
        let g = PerturbedTorus::new(cat.clone(), 0.002).unwrap();
        let r = stability_conjugacy_h(&cat, &g, 0.01, &grid(20), 60).unwrap();
        assert!(r.semiconjugacy_residual <= 1e-9, "{}", r.semiconjugacy_residual);
        assert!(r.closeness <= r.b_radius);
        assert!(r.unique && r.injective);
        assert_eq!(r.recompute_residual(&cat), r.semiconjugacy_residual);
        assert!(matches!(
            stability_conjugacy_h(&cat, &g, 0.001, &grid(4), 60),
            Err(HyperbolicError::OutsideDomain(_))
        ));
    }

    #[test]
    fn symbolic_perturbation_is_exact() {
        let full = Shift::new(TransitionMatrix::full(2));
        let g = RecodedShift::new(full.clone(), 9, (0, 1)).unwrap();
        let samples: Vec<SymbolPoint> = (0..20u8)
            .map(|k| full.extend_word(&[k & 1, (k >> 1) & 1, (k >> 2) & 1, (k >> 3) & 1], 2).unwrap())
            .collect();
        let r = stability_conjugacy_sft(&full, &g, &samples, 40).unwrap();
        assert_eq!(r.mismatches, 0);
        assert!(r.closeness <= 2f64.powi(-9));
        assert!(RecodedShift::new(Shift::new(TransitionMatrix::golden_mean()), 3, (0, 1)).is_err());
    }
}
