//! Exact sampling and fast Wigner transforms on the rotation group SO(3).
//!
//! Rotations are zyz Euler angles `(α, β, γ)` and the Wigner functions are
//! `D^ℓ_mn(α, β, γ) = e^{-imα} d^ℓ_mn(β) e^{-inγ}`. A signal band-limited at
//! `(L, M, N)` is recovered exactly from its samples on an equiangular grid
//! of `L(2M-1)(2N-1)` nodes, of which `[(L-1)(2M-1)+1](2N-1)` are distinct
//! points of SO(3).
//!
//! The library is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar to `f64`.

pub mod error;
pub mod fft;
pub mod gauss_legendre;
pub mod grid;
pub mod io;
pub mod quadrature;
pub mod scalar;
pub mod transform;
pub mod wigner_d;

pub use error::{Result, So3Error};
pub use grid::{
    alpha_node, beta_node, coeff_count, coeff_from_index, coeff_index, gamma_node, sample_from_index, sample_index,
    stored_sample_count, theorem_sample_count, BandLimits, Reality, SampleData, So3Samples, WignerCoeffs,
};
pub use io::So3Data;
pub use quadrature::{integrate, QuadratureSamples, QuadratureWeights};
pub use scalar::Real;
pub use transform::{
    forward_naive, inverse_naive, resample_quadrature, spin_sh_value, NaivePlan, So3Transform, TransformOptions,
    TransformPath, WeightMode,
};
pub use wigner_d::{build_delta_table, d_recursion_step, d_via_fourier, DBetaPlane, DeltaMode, DeltaTable};

pub type Coeffs = WignerCoeffs<f64>;
pub type Samples = So3Samples<f64>;
pub type Transform = So3Transform<f64>;
pub type Naive = NaivePlan<f64>;
pub type Deltas = DeltaTable<f64>;
pub type Coeffs32 = WignerCoeffs<f32>;
pub type Samples32 = So3Samples<f32>;
pub type Transform32 = So3Transform<f32>;
