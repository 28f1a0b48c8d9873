use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Vec2;
use crate::metric::wrap01;
use crate::systems::{
    DynamicalSystem, FiniteSystem, HarmonicPoints, LinearSystem, NorthSouth, PerturbedTorus, Shift,
    StripPoint, Strips, SymbolPoint, TorusAutomorphism,
};

use super::{Extension, PseudoOrbit};

/// Systems that can move a point by a random amount strictly below a radius.
pub trait Perturb: DynamicalSystem {
    /// A random point `q` with `d(p, q) < radius`, up to rounding; callers
    /// recompute the distance and retry with a smaller radius if needed.
    fn perturb(&self, p: &Self::Point, radius: f64, rng: &mut ChaCha8Rng) -> Self::Point;
}

const SHRINK: f64 = 1.0 - 1e-9;

fn disc(rng: &mut ChaCha8Rng, radius: f64) -> Vec2 {
    let r = radius * rng.random::<f64>().sqrt() * SHRINK;
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    [r * t.cos(), r * t.sin()]
}

impl Perturb for LinearSystem {
    fn perturb(&self, p: &Vec2, radius: f64, rng: &mut ChaCha8Rng) -> Vec2 {
        let v = disc(rng, radius);
        [p[0] + v[0], p[1] + v[1]]
    }
}

fn torus_perturb(p: &Vec2, radius: f64, rng: &mut ChaCha8Rng) -> Vec2 {
    let v = disc(rng, radius.min(0.5));
    [wrap01(p[0] + v[0]), wrap01(p[1] + v[1])]
}

impl Perturb for TorusAutomorphism {
    fn perturb(&self, p: &Vec2, radius: f64, rng: &mut ChaCha8Rng) -> Vec2 {
        torus_perturb(p, radius, rng)
    }
}

impl Perturb for PerturbedTorus {
    fn perturb(&self, p: &Vec2, radius: f64, rng: &mut ChaCha8Rng) -> Vec2 {
        torus_perturb(p, radius, rng)
    }
}

impl Perturb for NorthSouth {
    fn perturb(&self, p: &f64, radius: f64, rng: &mut ChaCha8Rng) -> f64 {
        (p + rng.random_range(-1.0..1.0) * radius * SHRINK).clamp(-1.0, 1.0)
    }
}

impl Perturb for Strips {
    fn perturb(&self, p: &StripPoint, radius: f64, rng: &mut ChaCha8Rng) -> StripPoint {
        let y = p.y + rng.random_range(-1.0..1.0) * radius * SHRINK;
        StripPoint::new(p.n, y.clamp(0.0, self.height(p.n)))
    }
}

impl Perturb for FiniteSystem {
    fn perturb(&self, p: &usize, radius: f64, rng: &mut ChaCha8Rng) -> usize {
        let near: Vec<usize> = self
            .points()
            .into_iter()
            .filter(|q| self.distance(p, q) < radius)
            .collect();
        near[rng.random_range(0..near.len())]
    }
}

impl Perturb for HarmonicPoints {
    fn perturb(&self, p: &usize, radius: f64, rng: &mut ChaCha8Rng) -> usize {
        const SCAN: usize = 1 << 20;
        let mut lo = *p;
        while lo > 1 && self.distance(p, &(lo - 1)) < radius && *p - lo < SCAN {
            lo -= 1;
        }
        let mut hi = *p;
        while self.distance(p, &(hi + 1)) < radius && hi - *p < SCAN {
            hi += 1;
        }
        rng.random_range(lo..=hi)
    }
}

impl Perturb for Shift {
    /// Keeps the coordinates `|i| < m` with `2^{-m} < radius` and continues
    /// with a short random admissible walk on each side.
    fn perturb(&self, p: &SymbolPoint, radius: f64, rng: &mut ChaCha8Rng) -> SymbolPoint {
        const WALK: usize = 6;
        if radius <= 2f64.powi(-60) {
            return p.clone();
        }
        let m = ((-radius.log2()).floor() as i64 + 1).max(0);
        let tm = self.transitions();
        let k = tm.size() as u8;
        let mut word: Vec<u8> = if m >= 1 {
            p.slice(-(m - 1), m - 1)
        } else {
            vec![rng.random_range(0..k)]
        };
        let mut center = if m >= 1 { (m - 1) as usize } else { 0 };
        for _ in 0..WALK {
            let last = *word.last().expect("nonempty");
            let next: Vec<u8> = (0..k).filter(|&t| tm.allowed(last, t)).collect();
            word.push(next[rng.random_range(0..next.len())]);
            let first = word[0];
            let prev: Vec<u8> = (0..k).filter(|&t| tm.allowed(t, first)).collect();
            word.insert(0, prev[rng.random_range(0..prev.len())]);
            center += 1;
        }
        self.extend_word(&word, center).expect("random walk is admissible")
    }
}

fn perturb_checked<S: Perturb>(
    sys: &S,
    target: &S::Point,
    radius: f64,
    check: impl Fn(&S::Point) -> bool,
    rng: &mut ChaCha8Rng,
) -> S::Point {
    let mut r = radius;
    for _ in 0..16 {
        let q = sys.perturb(target, r, rng);
        if check(&q) {
            return q;
        }
        r *= 0.5;
    }
    target.clone()
}

/// `x_{k+1}` is a random point strictly within `delta` of `f(x_k)`; the
/// window extends by the true orbits of its endpoints.
pub fn perturbed_pseudo_orbit<S: Perturb>(
    sys: &S,
    x0: S::Point,
    len: usize,
    delta: f64,
    seed: u64,
) -> PseudoOrbit<S::Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut window = Vec::with_capacity(len);
    if len > 0 {
        window.push(x0);
    }
    while window.len() < len {
        let fx = sys.forward(window.last().expect("nonempty"));
        let q = perturb_checked(sys, &fx, delta, |q| sys.distance(&fx, q) < delta, &mut rng);
        window.push(q);
    }
    PseudoOrbit::new(sys, window, Extension::OrbitTail)
}

/// Perturbs every point of a true periodic orbit by less than
/// `delta / (1 + lipschitz)`, so that every defect, the seam included, stays
/// below `delta` when `lipschitz` bounds the Lipschitz constant of `f`.
pub fn perturbed_periodic<S: Perturb>(
    sys: &S,
    cycle: &[S::Point],
    delta: f64,
    lipschitz: f64,
    seed: u64,
) -> PseudoOrbit<S::Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut radius = delta / (1.0 + lipschitz);
    let p = cycle.len();
    loop {
        let window: Vec<S::Point> = cycle
            .iter()
            .map(|z| perturb_checked(sys, z, radius, |q| sys.distance(z, q) < radius, &mut rng))
            .collect();
        let po = PseudoOrbit::new(sys, window, Extension::Periodic(p));
        if po.defect_bound < delta || radius < delta * 1e-12 {
            return po;
        }
        radius *= 0.5;
    }
}
