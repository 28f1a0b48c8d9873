use std::sync::Arc;

use crate::entourage::{Entourage, Point};
use crate::error::SystemError;
use crate::metric::Metric;

use super::DynamicalSystem;

/// The system `fᵏ` for a nonzero integer `k`.
#[derive(Debug, Clone)]
pub struct Iterated<S> {
    inner: S,
    k: i64,
    name: String,
}

pub fn iterate_system<S: DynamicalSystem>(s: S, k: i64) -> Result<Iterated<S>, SystemError> {
    if k == 0 {
        return Err(SystemError::ZeroIterate);
    }
    let name = format!("{}^{k}", s.name());
    Ok(Iterated { inner: s, k, name })
}

impl<S: DynamicalSystem> Iterated<S> {
    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn exponent(&self) -> i64 {
        self.k
    }
}

impl<S: DynamicalSystem> DynamicalSystem for Iterated<S> {
    type Point = S::Point;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &S::Point) -> S::Point {
        self.inner.iterate(p, self.k)
    }

    fn backward(&self, p: &S::Point) -> S::Point {
        self.inner.iterate(p, -self.k)
    }

    fn metric(&self) -> &Metric<S::Point> {
        self.inner.metric()
    }
}

type MapFn<P> = Arc<dyn Fn(&P) -> P + Send + Sync>;

/// The system `h ∘ f ∘ h⁻¹`.
pub struct Conjugated<S: DynamicalSystem> {
    inner: S,
    h: MapFn<S::Point>,
    h_inv: MapFn<S::Point>,
    metric: Metric<S::Point>,
    name: String,
}

/// Conjugates `s` by `h`, after checking `h⁻¹(h(x)) = x` to within `tol` (in
/// the metric of `s`) at each sample.
pub fn conjugate_system<S: DynamicalSystem>(
    s: S,
    h: impl Fn(&S::Point) -> S::Point + Send + Sync + 'static,
    h_inv: impl Fn(&S::Point) -> S::Point + Send + Sync + 'static,
    samples: &[S::Point],
    tol: f64,
) -> Result<Conjugated<S>, SystemError> {
    for (index, x) in samples.iter().enumerate() {
        let error = s.distance(&h_inv(&h(x)), x);
        if !(error <= tol) {
            return Err(SystemError::InverseCheck { index, error });
        }
    }
    let name = format!("conj({})", s.name());
    let metric = s.metric().clone();
    Ok(Conjugated {
        inner: s,
        h: Arc::new(h),
        h_inv: Arc::new(h_inv),
        metric,
        name,
    })
}

impl<S: DynamicalSystem> Conjugated<S> {
    /// Uses `metric` on the target space instead of the source metric.
    pub fn with_metric(mut self, metric: Metric<S::Point>) -> Self {
        self.metric = metric;
        self
    }

    pub fn h(&self, p: &S::Point) -> S::Point {
        (self.h)(p)
    }

    pub fn h_inv(&self, p: &S::Point) -> S::Point {
        (self.h_inv)(p)
    }

    /// Transports an entourage of the source along `h × h`.
    pub fn transport(&self, u: &Entourage<S::Point>) -> Entourage<S::Point>
    where
        S::Point: Point,
    {
        let h_inv = self.h_inv.clone();
        u.transport(move |p| h_inv(p))
    }
}

impl<S: DynamicalSystem> DynamicalSystem for Conjugated<S> {
    type Point = S::Point;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &S::Point) -> S::Point {
        (self.h)(&self.inner.forward(&(self.h_inv)(p)))
    }

    fn backward(&self, p: &S::Point) -> S::Point {
        (self.h)(&self.inner.backward(&(self.h_inv)(p)))
    }

    fn metric(&self) -> &Metric<S::Point> {
        &self.metric
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat2;
    use crate::systems::{plane_two_metrics, shrinking_intervals, LinearSystem, StripPoint};
    use crate::systems::TorusAutomorphism;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn iterates() {
        let d = plane_two_metrics();
        let d2 = iterate_system(&d, 2).unwrap();
        assert_eq!(d2.forward(&[1.0, 1.0]), [4.0, 0.25]);
        let dm = iterate_system(&d, -1).unwrap();
        assert_eq!(dm.forward(&[1.0, 1.0]), d.backward(&[1.0, 1.0]));
        assert_eq!(dm.backward(&[1.0, 1.0]), d.forward(&[1.0, 1.0]));
        assert_eq!(iterate_system(&d, 0).unwrap_err(), SystemError::ZeroIterate);
        let cat = TorusAutomorphism::cat_map();
        let c2 = iterate_system(&cat, 2).unwrap();
        // [[5,3],[3,2]] on a dyadic point
        let p = [0.25, 0.125];
        assert_eq!(c2.forward(&p), [(5.0f64 * 0.25 + 3.0 * 0.125).fract(), (3.0f64 * 0.25 + 2.0 * 0.125).fract()]);
    }

    #[test]
    fn conjugations() {
        let d = plane_two_metrics();
        let samples: Vec<[f64; 2]> = (0..20).map(|k| [k as f64, -(k as f64) / 3.0]).collect();
        let same = conjugate_system(&d, |p| *p, |p| *p, &samples, 0.0).unwrap();
        for p in &samples {
            assert_eq!(same.forward(p), d.forward(p));
        }
        let swap = conjugate_system(&d, |p| [p[1], p[0]], |p| [p[1], p[0]], &samples, 0.0).unwrap();
        let target = LinearSystem::new(Mat2::diag(0.5, 2.0)).unwrap();
        for p in &samples {
            assert_eq!(swap.forward(p), target.forward(p));
        }
        let bad = conjugate_system(&d, |p| [2.0 * p[0], p[1]], |p| *p, &samples, 1e-9);
        assert!(matches!(bad, Err(SystemError::InverseCheck { index: 1, .. })));
    }

    #[test]
    fn strips_conjugation_matches_unit_system() {
        let (a, b, h) = shrinking_intervals(20);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let samples: Vec<StripPoint> = (0..1000)
            .map(|_| {
                let n = rng.random_range(-20..=20);
                StripPoint::new(n, rng.random_range(0.0..=1.0) * a.height(n))
            })
            .collect();
        let conj = conjugate_system(a, move |p| h.h(p), move |p| h.h_inv(p), &samples, 1e-12).unwrap();
        let image: Vec<StripPoint> = samples.iter().map(|p| conj.h(p)).collect();
        for q in &image {
            let l = conj.forward(q);
            let r = b.forward(q);
            assert_eq!(l.n, r.n);
            assert!((l.y - r.y).abs() < 1e-12);
        }
    }
}
