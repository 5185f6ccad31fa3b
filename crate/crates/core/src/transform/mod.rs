//! Forward and inverse Wigner transforms on the sampling-theorem grid.
//!
//! Two fast paths share the same β machinery:
//!
//! * the separation-of-variables path ([`So3Transform::forward_3d`]) does a
//!   2D FFT over `(α, γ)` on every β ring, extends the rings periodically to
//!   `[0, 2π)`, transforms in β, applies the quadrature weights and finally
//!   contracts with `Δ^ℓ_{m'm} Δ^ℓ_{m'n}`;
//! * the per-n path ([`So3Transform::forward_via_spin_sht`]) FFTs over γ and
//!   then runs one spin-`(-n)` spherical harmonic transform per `n`.
//!
//! Both are `O(L²MN)` in the Δ contraction; [`So3Transform::forward`] picks
//! the per-n path when `N <= L/4`. Real signals only touch the `n >= 0` half.
//! The naive direct-summation oracles live in [`naive`].

mod beta;
pub mod naive;
mod per_n;
mod resample;
mod spin;
mod three_d;

use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Result, So3Error};
use crate::fft::FftPair;
use crate::grid::{BandLimits, Reality, So3Samples, WignerCoeffs};
use crate::scalar::Real;
use crate::wigner_d::{build_delta_table, DeltaMode, DeltaSource, DeltaTable};

pub use beta::WeightMode;
pub use naive::{forward_naive, inverse_naive, NaivePlan, NAIVE_SOFT_CAP};
pub use resample::resample_quadrature;
pub use spin::spin_sh_value;

use beta::BetaStage;

/// Symmetry residual tolerated on the input of the real inverse transform.
pub const REAL_SYMMETRY_TOL: f64 = 1e-10;

/// Fast transform algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransformPath {
    /// Separation of variables over the full `(m, n, m')` cube.
    ThreeD,
    /// One spin spherical harmonic transform per `n`.
    PerN,
}

impl TransformPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransformPath::ThreeD => "3d",
            TransformPath::PerN => "per-n",
        }
    }
}

impl FromStr for TransformPath {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "3d" => Ok(TransformPath::ThreeD),
            "per-n" => Ok(TransformPath::PerN),
            other => Err(format!("unknown path '{other}' (expected 3d or per-n)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransformOptions {
    pub delta: DeltaMode,
    pub weights: WeightMode,
    /// Run per-n slices and per-ring FFTs on the rayon pool.
    pub parallel: bool,
}

impl TransformOptions {
    pub fn for_limits(limits: BandLimits) -> Self {
        Self {
            delta: DeltaMode::default_for(limits.l()),
            weights: WeightMode::FourierSpace,
            parallel: false,
        }
    }
}

/// A transform plan: Δ planes, quadrature weights and FFT plans for one set
/// of band-limits. Immutable and shareable across threads; every call
/// allocates its own scratch.
#[derive(Clone, Debug)]
pub struct So3Transform<T: Real> {
    limits: BandLimits,
    options: TransformOptions,
    delta: DeltaSource<T>,
    beta: BetaStage<T>,
    fft_alpha: FftPair<T>,
    fft_gamma: FftPair<T>,
}

impl<T: Real> So3Transform<T> {
    pub fn new(limits: BandLimits) -> Result<Self> {
        Self::with_options(limits, TransformOptions::for_limits(limits))
    }

    pub fn with_options(limits: BandLimits, options: TransformOptions) -> Result<Self> {
        let delta = match options.delta {
            DeltaMode::Stored => DeltaSource::Stored(Arc::new(build_delta_table(limits.l())?)),
            DeltaMode::OnTheFly => DeltaSource::OnTheFly,
        };
        Ok(Self::assemble(limits, options, delta))
    }

    /// Plan reusing an existing Δ-table, which must cover `ℓ < L`.
    pub fn with_delta_table(limits: BandLimits, table: Arc<DeltaTable<T>>, options: TransformOptions) -> Result<Self> {
        if table.ell_max() < limits.l() {
            return Err(So3Error::DeltaTooSmall {
                available: table.ell_max(),
                required: limits.l(),
            });
        }
        let options = TransformOptions {
            delta: DeltaMode::Stored,
            ..options
        };
        Ok(Self::assemble(limits, options, DeltaSource::Stored(table)))
    }

    fn assemble(limits: BandLimits, options: TransformOptions, delta: DeltaSource<T>) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            limits,
            options,
            delta,
            beta: BetaStage::new(&mut planner, limits.l(), options.weights),
            fft_alpha: FftPair::new(&mut planner, limits.alpha_len()),
            fft_gamma: FftPair::new(&mut planner, limits.gamma_len()),
        }
    }

    pub fn limits(&self) -> BandLimits {
        self.limits
    }

    pub fn options(&self) -> TransformOptions {
        self.options
    }

    /// Path used by [`forward`](Self::forward) and [`inverse`](Self::inverse).
    pub fn default_path(&self) -> TransformPath {
        if 4 * self.limits.n() <= self.limits.l() {
            TransformPath::PerN
        } else {
            TransformPath::ThreeD
        }
    }

    /// Forward transform on the default path. Real-typed samples give
    /// real (half-stored) coefficients.
    pub fn forward(&self, f: &So3Samples<T>) -> Result<WignerCoeffs<T>> {
        self.forward_with(self.default_path(), f)
    }

    /// Inverse transform on the default path. Real coefficients give
    /// real-typed samples.
    pub fn inverse(&self, fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
        self.inverse_with(self.default_path(), fhat)
    }

    pub fn forward_with(&self, path: TransformPath, f: &So3Samples<T>) -> Result<WignerCoeffs<T>> {
        self.check_samples(f)?;
        match path {
            TransformPath::ThreeD => self.forward_3d_impl(f, f.reality()),
            TransformPath::PerN => self.forward_per_n_impl(f, f.reality()),
        }
    }

    pub fn inverse_with(&self, path: TransformPath, fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
        let fhat = self.check_coeffs(fhat)?;
        match path {
            TransformPath::ThreeD => self.inverse_3d_impl(&fhat),
            TransformPath::PerN => self.inverse_per_n_impl(&fhat),
        }
    }

    pub fn forward_3d(&self, f: &So3Samples<T>) -> Result<WignerCoeffs<T>> {
        self.forward_with(TransformPath::ThreeD, f)
    }

    pub fn inverse_3d(&self, fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
        self.inverse_with(TransformPath::ThreeD, fhat)
    }

    pub fn forward_via_spin_sht(&self, f: &So3Samples<T>) -> Result<WignerCoeffs<T>> {
        self.forward_with(TransformPath::PerN, f)
    }

    pub fn inverse_via_spin_sht(&self, fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
        self.inverse_with(TransformPath::PerN, fhat)
    }

    /// Forward transform of a real signal; only `n >= 0` is computed.
    pub fn forward_real(&self, f: &So3Samples<T>) -> Result<WignerCoeffs<T>> {
        if f.reality() != Reality::Real {
            return Err(So3Error::RealityMismatch {
                expected: "real",
                found: "complex",
            });
        }
        self.forward(f)
    }

    /// Inverse transform of conjugate-symmetric coefficients to a real
    /// signal. Complex-stored input is accepted when its symmetry residual is
    /// within [`REAL_SYMMETRY_TOL`].
    pub fn inverse_real(&self, fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
        let real = fhat.to_real(REAL_SYMMETRY_TOL)?;
        self.inverse(&real)
    }

    fn check_samples(&self, f: &So3Samples<T>) -> Result<()> {
        if f.limits() != self.limits {
            return Err(So3Error::ShapeMismatch {
                expected: format!("samples for {}", self.limits),
                found: format!("samples for {}", f.limits()),
            });
        }
        Ok(())
    }

    /// Validates limits; real input must have a symmetric `n = 0` row.
    fn check_coeffs<'a>(&self, fhat: &'a WignerCoeffs<T>) -> Result<std::borrow::Cow<'a, WignerCoeffs<T>>> {
        if fhat.limits() != self.limits {
            return Err(So3Error::ShapeMismatch {
                expected: format!("coefficients for {}", self.limits),
                found: format!("coefficients for {}", fhat.limits()),
            });
        }
        if fhat.reality() == Reality::Real {
            let residual = fhat.symmetry_residual().to_f64().unwrap_or(f64::INFINITY);
            if residual > REAL_SYMMETRY_TOL {
                return Err(So3Error::SymmetryViolation {
                    residual,
                    tolerance: REAL_SYMMETRY_TOL,
                });
            }
        }
        Ok(std::borrow::Cow::Borrowed(fhat))
    }

    /// `n` values a transform of the given reality touches.
    fn n_range(&self, reality: Reality) -> std::ops::RangeInclusive<i32> {
        let top = self.limits.n() as i32 - 1;
        match reality {
            Reality::Complex => -top..=top,
            Reality::Real => 0..=top,
        }
    }
}

/// Copies the `n = 0`, `m > 0` entries of a real coefficient set onto
/// `m < 0` so the stored row is exactly conjugate-symmetric.
fn symmetrise_n0_row<T: Real>(c: &mut WignerCoeffs<T>) {
    let limits = c.limits();
    for ell in 0..limits.l() {
        let mm = limits.m_max_at(ell);
        let idx0 = c.layout().index(ell, 0, 0);
        let z = c.data()[idx0];
        c.data_mut()[idx0] = Complex::new(z.re, T::zero());
        for m in 1..=mm {
            let v = c.data()[c.layout().index(ell, m, 0)];
            let sign = crate::scalar::parity_sign::<T>(m as i64);
            let idx = c.layout().index(ell, -m, 0);
            c.data_mut()[idx] = v.conj() * sign;
        }
    }
}

/// Order-preserving map, on the rayon pool when `parallel` is set.
fn par_map<I, R, F>(parallel: bool, items: Vec<I>, f: F) -> Vec<R>
where
    I: Send,
    R: Send,
    F: Fn(I) -> R + Sync + Send,
{
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

/// Concatenates per-ring `(a, g)` blocks into samples; real output keeps the
/// real parts.
fn samples_from_rings<T: Real>(
    limits: BandLimits,
    reality: Reality,
    rings: Vec<Vec<Complex<T>>>,
) -> Result<So3Samples<T>> {
    match reality {
        Reality::Complex => So3Samples::from_complex(limits, rings.into_iter().flatten().collect()),
        Reality::Real => So3Samples::from_real(limits, rings.into_iter().flatten().map(|z| z.re).collect()),
    }
}
