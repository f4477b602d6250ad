//! Circle-method objects for the average along the squares: the Weyl
//! multiplier, Dirichlet approximants, `gamma_N`, the bump `eta`, and the
//! major-arc decomposition with its splits.

pub mod arcs;
pub mod bump;
pub mod fresnel;
pub mod gamma;
pub mod rational;

pub use arcs::{
    arc_centers, arc_multipliers, fjk_remainder, sample_multiplier, sample_multipliers,
    weyl_grid, weyl_multiplier, ArcDecomposition, FjkRemainder, MultiplierGrid, MultiplierKind,
    Split,
};
pub use bump::{eta, eta_k};
pub use gamma::{gamma_bound, gamma_n, gamma_n_density, gamma_n_fresnel};
pub use rational::{arc_offset, dirichlet_approx, dirichlet_approx_exhaustive, Freq, ReducedRational};
