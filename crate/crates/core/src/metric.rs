//! Distance functions and bounded regions of carrier spaces.

use std::fmt;
use std::sync::Arc;

use crate::linalg::Vec2;

type DistFn<P> = Arc<dyn Fn(&P, &P) -> f64 + Send + Sync>;
type MemberFn<P> = Arc<dyn Fn(&P) -> bool + Send + Sync>;

/// A metric on a carrier space, with an optional known diameter
/// (`None` means the space is unbounded for this metric).
pub struct Metric<P> {
    name: Arc<str>,
    dist: DistFn<P>,
    diameter: Option<f64>,
}

impl<P> Clone for Metric<P> {
    fn clone(&self) -> Self {
        Metric {
            name: self.name.clone(),
            dist: self.dist.clone(),
            diameter: self.diameter,
        }
    }
}

impl<P> fmt::Debug for Metric<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Metric")
            .field("name", &self.name)
            .field("diameter", &self.diameter)
            .finish()
    }
}

impl<P> Metric<P> {
    pub fn new(
        name: &str,
        diameter: Option<f64>,
        dist: impl Fn(&P, &P) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Metric {
            name: name.into(),
            dist: Arc::new(dist),
            diameter,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn diameter(&self) -> Option<f64> {
        self.diameter
    }

    #[inline]
    pub fn distance(&self, a: &P, b: &P) -> f64 {
        (self.dist)(a, b)
    }
}

impl Metric<f64> {
    pub fn real() -> Self {
        Metric::new("real", None, |a: &f64, b: &f64| (a - b).abs())
    }
}

impl Metric<Vec2> {
    pub fn euclidean() -> Self {
        Metric::new("euclidean", None, |a: &Vec2, b: &Vec2| {
            (a[0] - b[0]).hypot(a[1] - b[1])
        })
    }

    /// Chordal distance on the unit sphere pulled back through inverse
    /// stereographic projection: `2|p-q| / sqrt((1+|p|^2)(1+|q|^2))`.
    pub fn chordal() -> Self {
        Metric::new("chordal", Some(2.0), |a: &Vec2, b: &Vec2| chordal_distance(*a, *b))
    }

    /// Quotient metric of the unit torus: minimum over integer translates.
    pub fn torus() -> Self {
        Metric::new("torus", Some(std::f64::consts::FRAC_1_SQRT_2), |a: &Vec2, b: &Vec2| {
            torus_distance(*a, *b)
        })
    }
}

pub fn chordal_distance(p: Vec2, q: Vec2) -> f64 {
    let dp = 1.0 + p[0] * p[0] + p[1] * p[1];
    let dq = 1.0 + q[0] * q[0] + q[1] * q[1];
    if !dp.is_finite() || !dq.is_finite() {
        // both points pushed towards the north pole
        return 0.0;
    }
    2.0 * (p[0] - q[0]).hypot(p[1] - q[1]) / (dp * dq).sqrt()
}

/// Inverse stereographic projection onto the unit sphere from the north pole.
pub fn to_sphere(p: Vec2) -> [f64; 3] {
    let r2 = p[0] * p[0] + p[1] * p[1];
    let d = 1.0 + r2;
    [2.0 * p[0] / d, 2.0 * p[1] / d, (r2 - 1.0) / d]
}

/// Nearest integer translate of `v` into `[-1/2, 1/2]^2`.
pub fn nearest_lift(v: Vec2) -> Vec2 {
    [v[0] - v[0].round(), v[1] - v[1].round()]
}

pub fn torus_distance(a: Vec2, b: Vec2) -> f64 {
    let d = nearest_lift([a[0] - b[0], a[1] - b[1]]);
    d[0].hypot(d[1])
}

/// Reduces a coordinate into `[0, 1)`.
pub fn wrap01(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A bounded region of a carrier space, given by a membership test and a
/// diameter bound.
pub struct Region<P> {
    label: Arc<str>,
    member: MemberFn<P>,
    diameter: f64,
}

impl<P> Clone for Region<P> {
    fn clone(&self) -> Self {
        Region {
            label: self.label.clone(),
            member: self.member.clone(),
            diameter: self.diameter,
        }
    }
}

impl<P> fmt::Debug for Region<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region({}, diam {})", self.label, self.diameter)
    }
}

impl<P> Region<P> {
    pub fn new(
        label: &str,
        diameter: f64,
        member: impl Fn(&P) -> bool + Send + Sync + 'static,
    ) -> Self {
        Region {
            label: label.into(),
            member: Arc::new(member),
            diameter,
        }
    }

    pub fn contains(&self, p: &P) -> bool {
        (self.member)(p)
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl Region<f64> {
    /// Closed interval `[a, b]`.
    pub fn interval(a: f64, b: f64) -> Self {
        Region::new(&format!("[{a}, {b}]"), b - a, move |x: &f64| *x >= a && *x <= b)
    }
}

impl Region<Vec2> {
    /// Closed axis-parallel rectangle.
    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Region::new(
            &format!("[{x0}, {x1}]x[{y0}, {y1}]"),
            (x1 - x0).hypot(y1 - y0),
            move |p: &Vec2| p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1,
        )
    }
}
