//! Small dense 2x2 linear algebra, in floating point and exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Vec2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Mat2([[a, 0.0], [0.0, d]])
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let mut r = [[0.0; 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(r)
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let mut r = self.0;
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] += o.0[i][j];
            }
        }
        Mat2(r)
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        let mut r = self.0;
        r.iter_mut().flatten().for_each(|x| *x *= s);
        Mat2(r)
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Mat2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]))
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Option<Mat2> {
        let base = if k < 0 { self.inverse()? } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = Mat2::IDENTITY;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Some(acc)
    }

    /// Spectral (operator 2-) norm.
    pub fn norm2(&self) -> f64 {
        let ata = self.transpose().mul(self);
        let t = ata.trace();
        let d = ata.det();
        let disc = (t * t / 4.0 - d).max(0.0).sqrt();
        (t / 2.0 + disc).max(0.0).sqrt()
    }

    /// Eigenvalues; `None` when they form a complex pair.
    pub fn real_eigenvalues(&self) -> Option<(f64, f64)> {
        let t = self.trace();
        let d = self.det();
        let disc = t * t / 4.0 - d;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        Some((t / 2.0 - s, t / 2.0 + s))
    }

    /// Moduli of the eigenvalues (smaller first).
    pub fn eigen_moduli(&self) -> (f64, f64) {
        match self.real_eigenvalues() {
            Some((a, b)) => {
                let (a, b) = (a.abs(), b.abs());
                (a.min(b), a.max(b))
            }
            None => {
                let m = self.det().abs().sqrt();
                (m, m)
            }
        }
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        m
    }
}

pub fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn norm(v: Vec2) -> f64 {
    v[0].hypot(v[1])
}

/// Projection of `m` onto the eigenline of `lambda` along the other eigenline:
/// `(m - mu I) / (lambda - mu)`.
pub fn eigenprojection(m: &Mat2, lambda: f64, mu: f64) -> Mat2 {
    m.add(&Mat2::IDENTITY.scale(-mu)).scale(1.0 / (lambda - mu))
}

/// Exact 2x2 matrix over the rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct RatMat2(pub [[BigRational; 2]; 2]);

pub type RatVec2 = [BigRational; 2];

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn rat_int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn rat_vec(v: Vec2) -> RatVec2 {
    [rat(v[0]), rat(v[1])]
}

pub fn rat_vec_to_f64(v: &RatVec2) -> Vec2 {
    [rat_to_f64(&v[0]), rat_to_f64(&v[1])]
}

/// Fractional part in `[0, 1)`.
pub fn rat_frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl RatMat2 {
    pub fn from_f64(m: &Mat2) -> Self {
        RatMat2([
            [rat(m.0[0][0]), rat(m.0[0][1])],
            [rat(m.0[1][0]), rat(m.0[1][1])],
        ])
    }

    pub fn from_int(m: &[[i64; 2]; 2]) -> Self {
        RatMat2([
            [rat_int(m[0][0]), rat_int(m[0][1])],
            [rat_int(m[1][0]), rat_int(m[1][1])],
        ])
    }

    pub fn identity() -> Self {
        RatMat2([
            [BigRational::one(), BigRational::zero()],
            [BigRational::zero(), BigRational::one()],
        ])
    }

    pub fn apply(&self, v: &RatVec2) -> RatVec2 {
        let m = &self.0;
        [
            &m[0][0] * &v[0] + &m[0][1] * &v[1],
            &m[1][0] * &v[0] + &m[1][1] * &v[1],
        ]
    }

    pub fn mul(&self, o: &RatMat2) -> RatMat2 {
        let (a, b) = (&self.0, &o.0);
        let cell = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        RatMat2([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }

    pub fn pow(&self, k: u64) -> RatMat2 {
        let mut acc = RatMat2::identity();
        let mut b = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Solves `self * x = rhs`; `None` when singular.
    pub fn solve(&self, rhs: &RatVec2) -> Option<RatVec2> {
        let m = &self.0;
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return None;
        }
        let x0 = (&m[1][1] * &rhs[0] - &m[0][1] * &rhs[1]) / &det;
        let x1 = (&m[0][0] * &rhs[1] - &m[1][0] * &rhs[0]) / &det;
        Some([x0, x1])
    }

    pub fn sub_identity(&self) -> RatMat2 {
        let mut r = self.clone();
        r.0[0][0] -= BigRational::one();
        r.0[1][1] -= BigRational::one();
        r
    }
}

pub fn rat_vec_sub(a: &RatVec2, b: &RatVec2) -> RatVec2 {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

pub fn rat_vec_add(a: &RatVec2, b: &RatVec2) -> RatVec2 {
    [&a[0] + &b[0], &a[1] + &b[1]]
}

pub fn rat_vec_is_zero(a: &RatVec2) -> bool {
    a[0].is_zero() && a[1].is_zero()
}

pub fn rat_abs_max(a: &RatVec2) -> BigRational {
    let x = a[0].abs();
    let y = a[1].abs();
    if x > y {
        x
    } else {
        y
    }
}
