//! Computational topological dynamics on non-compact spaces: entourages,
//! chain recurrence, shadowing and hyperbolicity for homeomorphisms.

pub mod chains;
pub mod demo;
pub mod entourage;
pub mod error;
pub mod formats;
pub mod hyperbolic;
pub mod linalg;
pub mod metric;
pub mod report;
pub mod scc;
pub mod shadowing;
pub mod spectral;
pub mod systems;

pub use entourage::{CompactWitness, CrossSection, Decision, Entourage, Point};
pub use error::*;
pub use linalg::{Mat2, Vec2};
pub use metric::{Metric, Region};
