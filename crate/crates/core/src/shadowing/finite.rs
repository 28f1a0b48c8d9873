use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::entourage::{Entourage, Point};
use crate::error::TraceError;
use crate::linalg::{RatVec2, Vec2};
use crate::metric::{torus_distance, Metric};
use crate::systems::DynamicalSystem;

use super::{Extension, PseudoOrbit};

/// Point `(i, j)` of the grid `(ℤ/M)²`, standing for `(i/M, j/M)` on the torus.
pub type GridPoint = [u32; 2];

/// A torus automorphism restricted to the invariant grid `(1/M)ℤ² mod 1`,
/// computed in exact integer arithmetic.
#[derive(Debug, Clone)]
pub struct ModularTorus {
    m: u32,
    a: [[i64; 2]; 2],
    inv: [[i64; 2]; 2],
    metric: Metric<GridPoint>,
}

fn apply_mod(a: &[[i64; 2]; 2], p: &GridPoint, m: u32) -> GridPoint {
    let m = m as i64;
    let (x, y) = (p[0] as i64, p[1] as i64);
    [
        (a[0][0] * x + a[0][1] * y).rem_euclid(m) as u32,
        (a[1][0] * x + a[1][1] * y).rem_euclid(m) as u32,
    ]
}

impl ModularTorus {
    /// `a` must be unimodular; `inv` is its integer inverse.
    pub fn new(a: [[i64; 2]; 2], inv: [[i64; 2]; 2], m: u32) -> Self {
        let mf = m as f64;
        let metric = Metric::new("torus", Some(0.5f64.sqrt()), move |p: &GridPoint, q: &GridPoint| {
            torus_distance([p[0] as f64 / mf, p[1] as f64 / mf], [q[0] as f64 / mf, q[1] as f64 / mf])
        });
        ModularTorus { m, a, inv, metric }
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn to_torus(&self, p: &GridPoint) -> Vec2 {
        [p[0] as f64 / self.m as f64, p[1] as f64 / self.m as f64]
    }

    /// The grid point equal to a rational point of `[0,1)²`, if its
    /// denominators divide `M`.
    pub fn from_rational(&self, v: &RatVec2) -> Option<GridPoint> {
        let m = BigRational::from_integer(BigInt::from(self.m));
        let mut out = [0u32; 2];
        for (o, c) in out.iter_mut().zip(v.iter()) {
            let s = c * &m;
            if !s.is_integer() {
                return None;
            }
            *o = s.to_integer().to_u32()?;
        }
        Some(out)
    }

    /// The nearest grid point to a torus point.
    pub fn nearest(&self, v: Vec2) -> GridPoint {
        let m = self.m as f64;
        [((v[0] * m).round() as u32) % self.m, ((v[1] * m).round() as u32) % self.m]
    }

    /// All `M²` grid points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.m).flat_map(move |i| (0..self.m).map(move |j| [i, j]))
    }
}

impl DynamicalSystem for ModularTorus {
    type Point = GridPoint;

    fn name(&self) -> &str {
        "modular-torus"
    }

    fn forward(&self, p: &GridPoint) -> GridPoint {
        apply_mod(&self.a, p, self.m)
    }

    fn backward(&self, p: &GridPoint) -> GridPoint {
        apply_mod(&self.inv, p, self.m)
    }

    fn metric(&self) -> &Metric<GridPoint> {
        &self.metric
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Every point of a finite system whose orbit `E`-traces a periodic
/// pseudo-orbit at all integer times, found by testing each candidate
/// over a common period of the candidate and the pseudo-orbit.
pub fn trace_finite_bruteforce<S, I>(
    sys: &S,
    points: I,
    po: &PseudoOrbit<S::Point>,
    e: &Entourage<S::Point>,
) -> Result<Vec<S::Point>, TraceError>
where
    S: DynamicalSystem,
    S::Point: Point,
    I: IntoIterator<Item = S::Point>,
{
    let p = match po.extension {
        Extension::Periodic(p) if p == po.len() && p > 0 => p,
        Extension::Periodic(p) => return Err(TraceError::BadPeriod { period: p, len: po.len() }),
        Extension::OrbitTail => return Err(TraceError::BadPeriod { period: 0, len: po.len() }),
    };
    let w = &po.window;
    let mut out = Vec::new();
    'cand: for y in points {
        if !e.contains(&y, &w[0]) {
            continue;
        }
        let mut q = 0usize;
        let mut cur = y.clone();
        let mut k = 0usize;
        // walk until both the candidate and the window return to their start
        loop {
            if !e.contains(&cur, &w[k % p]) {
                continue 'cand;
            }
            k += 1;
            cur = sys.forward(&cur);
            if q == 0 && cur == y {
                q = k;
            }
            if q > 0 && k.is_multiple_of(q / gcd(q, p) * p) {
                break;
            }
        }
        out.push(y);
    }
    Ok(out)
}
