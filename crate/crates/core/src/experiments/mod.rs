//! Experiment runners. Each returns an [`ExperimentReport`](crate::report::ExperimentReport)
//! that depends only on its parameters and seed.

pub mod circle;
pub mod high_low;
pub mod improving;
pub mod multifreq;
pub mod number_theory;
pub mod sparse_demo;

pub use number_theory::{
    gauss_product_defect, h_identity_audit, run_gauss_check, run_hsum_identities,
    sqrt_count_audit, support_audit, GaussCheckParams, HsumParams,
};
pub use circle::{
    run_fjk_constant, run_gamma_decay, run_lowpass_scan, run_minor_arc, FjkParams,
    GammaDecayParams, LowpassParams, MinorArcParams,
};
pub use improving::{
    orlicz_psi, run_halfdim, run_improving_ratio, run_orlicz_ratio, run_poly_average, GStrategy,
    HalfdimParams, ImprovingParams, OrliczParams, PolyParams,
};
pub use high_low::{run_high_low, HighLowParams};
pub use multifreq::{run_multifreq, MultifreqParams};
pub use sparse_demo::{run_sparse_demo, SparseDemoParams};
