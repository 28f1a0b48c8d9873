//! Expansivity, local stable and unstable sets, the local product map and
//! topological stability of hyperbolic systems.

mod expansive;
mod local;
mod product;
mod stability;

pub use expansive::{
    certify_linear_expansive, expansive_check, expansive_radius, v_n_entourage, ExpansiveReport, ExpansiveVerdict,
    Refutation,
};
pub use local::{
    local_stable_set, local_stable_set_sampled, local_unstable_set, local_unstable_set_sampled, symbolic_stable_set,
    symbolic_unstable_set, LocalSet,
};
pub use product::{
    glue_pseudo_orbit, product_by_tracing, product_map_linear, product_map_sft, product_map_torus, ProductStructure,
};
pub use stability::{
    stability_conjugacy_h, stability_conjugacy_sft, RecodedShift, StabilityReport, SymbolicStability,
};
