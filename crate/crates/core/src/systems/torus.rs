use std::f64::consts::TAU;

use crate::error::SystemError;
use crate::linalg::{Mat2, Vec2};
use crate::metric::{wrap01, Metric};

use super::linear::{hyperbolic_splitting, Splitting};
use super::DynamicalSystem;

/// A hyperbolic automorphism of the unit torus induced by an integer matrix.
#[derive(Debug, Clone)]
pub struct TorusAutomorphism {
    name: String,
    m: [[i64; 2]; 2],
    inv: [[i64; 2]; 2],
    lift: Mat2,
    split: Splitting,
    metric: Metric<Vec2>,
}

fn apply_int(m: &[[i64; 2]; 2], p: Vec2) -> Vec2 {
    [
        wrap01(m[0][0] as f64 * p[0] + m[0][1] as f64 * p[1]),
        wrap01(m[1][0] as f64 * p[0] + m[1][1] as f64 * p[1]),
    ]
}

impl TorusAutomorphism {
    pub fn new(m: [[i64; 2]; 2]) -> Result<Self, SystemError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(SystemError::NotUnimodular(det));
        }
        let lift = Mat2::new(m[0][0] as f64, m[0][1] as f64, m[1][0] as f64, m[1][1] as f64);
        let split = hyperbolic_splitting(&lift)?;
        let inv = [[det * m[1][1], -det * m[0][1]], [-det * m[1][0], det * m[0][0]]];
        Ok(TorusAutomorphism {
            name: format!("torus[{} {}; {} {}]", m[0][0], m[0][1], m[1][0], m[1][1]),
            m,
            inv,
            lift,
            split,
            metric: Metric::torus(),
        })
    }

    /// The automorphism induced by `[[2, 1], [1, 1]]`.
    pub fn cat_map() -> Self {
        Self::new([[2, 1], [1, 1]]).expect("cat map is hyperbolic").named("cat-map")
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn integer_matrix(&self) -> [[i64; 2]; 2] {
        self.m
    }

    pub fn integer_inverse(&self) -> [[i64; 2]; 2] {
        self.inv
    }

    /// The linear map of the plane covering the automorphism.
    pub fn lift_matrix(&self) -> Mat2 {
        self.lift
    }

    pub fn splitting(&self) -> &Splitting {
        &self.split
    }
}

impl DynamicalSystem for TorusAutomorphism {
    type Point = Vec2;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &Vec2) -> Vec2 {
        apply_int(&self.m, *p)
    }

    fn backward(&self, p: &Vec2) -> Vec2 {
        apply_int(&self.inv, *p)
    }

    fn metric(&self) -> &Metric<Vec2> {
        &self.metric
    }
}

/// `g(x) = A x + ε (sin 2πx₂, sin 2πx₁) mod 1`, a small perturbation of a
/// torus automorphism.
#[derive(Debug, Clone)]
pub struct PerturbedTorus {
    name: String,
    base: TorusAutomorphism,
    eps: f64,
}

impl PerturbedTorus {
    /// Requires `2π ε ‖A⁻¹‖ < 1`, which makes the inverse a contraction
    /// fixed point problem and `g` a homeomorphism.
    pub fn new(base: TorusAutomorphism, eps: f64) -> Result<Self, SystemError> {
        let inv = base.lift_matrix().inverse().ok_or(SystemError::Singular)?;
        if TAU * eps.abs() * inv.norm2() >= 1.0 {
            return Err(SystemError::PerturbationTooLarge(eps));
        }
        Ok(PerturbedTorus {
            name: format!("{}+{eps}", base.name()),
            base,
            eps,
        })
    }

    pub fn base(&self) -> &TorusAutomorphism {
        &self.base
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    /// The perturbation term `ε (sin 2πx₂, sin 2πx₁)`.
    pub fn bump(&self, p: Vec2) -> Vec2 {
        [self.eps * (TAU * p[1]).sin(), self.eps * (TAU * p[0]).sin()]
    }
}

impl DynamicalSystem for PerturbedTorus {
    type Point = Vec2;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &Vec2) -> Vec2 {
        let a = self.base.lift_matrix().apply(*p);
        let b = self.bump(*p);
        [wrap01(a[0] + b[0]), wrap01(a[1] + b[1])]
    }

    fn backward(&self, q: &Vec2) -> Vec2 {
        let inv = self.base.lift_matrix().inverse().expect("invertible");
        let mut x = inv.apply(*q);
        for _ in 0..200 {
            let b = self.bump(x);
            let next = inv.apply([q[0] - b[0], q[1] - b[1]]);
            let done = (next[0] - x[0]).abs().max((next[1] - x[1]).abs()) < 1e-16;
            x = next;
            if done {
                break;
            }
        }
        [wrap01(x[0]), wrap01(x[1])]
    }

    fn metric(&self) -> &Metric<Vec2> {
        self.base.metric()
    }
}
