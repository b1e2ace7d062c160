//! Space-time fractional parabolic operators `(d_t - Laplacian)^s` on periodic
//! grids: the spectral operator and its kernel form, the Caffarelli-Silvestre
//! style extension, exterior Dirichlet problems with a potential, the
//! Dirichlet-to-Neumann map, and constructive inversion.
//!
//! Everything is generic over the scalar (`f32` or `f64`); the aliases below
//! fix the common choices.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod dnmap;
pub mod error;
pub mod extension;
pub mod field;
pub mod forward;
pub mod grid;
pub mod inverse;
pub mod io;
pub mod linalg;
pub mod masks;
pub mod operator;
pub mod scalar;

pub use dnmap::{adjoint_pairing_residual, alessandrini, dn_adjoint_apply, dn_apply, AlessandriniReport, DNRecord};
pub use error::{Error, Result};
pub use extension::{extend, neumann_trace, ExtensionField, TraceReport};
pub use field::{Field, Fourier, SpectralField};
pub use forward::{solve_adjoint, solve_dirichlet, ForwardProblem, ForwardSolution, Potential};
pub use grid::GridConfig;
pub use inverse::{
    potential_gap_functional, recover_potential, runge_control, tikhonov_reconstruct, Penalty, RecoveryResult,
    RungeDirection, TikhonovPath,
};
pub use linalg::SolverOptions;
pub use masks::{make_masks, Geometry, Region, RegionMasks, Shape};
pub use operator::{apply_kernel, apply_symbol, FracOperator, KernelQuadrature, SymbolSpec};
pub use scalar::Real;

pub type Grid64 = GridConfig<f64>;
pub type Grid32 = GridConfig<f32>;
pub type Field64 = Field<f64>;
pub type Field32 = Field<f32>;
pub type Masks64 = RegionMasks<f64>;
pub type Masks32 = RegionMasks<f32>;
pub type Potential64 = Potential<f64>;
pub type Potential32 = Potential<f32>;
pub type Operator64 = FracOperator<f64>;
pub type Operator32 = FracOperator<f32>;
