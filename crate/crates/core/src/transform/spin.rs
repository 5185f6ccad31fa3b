use num_complex::Complex;

use crate::error::{Result, So3Error};
use crate::scalar::{parity_sign, Real};
use crate::wigner_d::{d_via_fourier, DeltaTable};

/// `sYℓm(θ, φ) = (-1)^s √((2ℓ+1)/4π) e^{imφ} d^ℓ_{m,-s}(θ)`.
pub fn spin_sh_value<T: Real>(
    ell: usize,
    m: i32,
    s: i32,
    theta: T,
    phi: T,
    delta: &DeltaTable<T>,
) -> Result<Complex<T>> {
    let l = ell as i64;
    for (what, v) in [("m", m), ("s", s)] {
        if (v as i64).abs() > l {
            return Err(So3Error::IndexOutOfRange {
                what,
                index: v as i64,
                lo: -l,
                hi: l,
            });
        }
    }
    let d = d_via_fourier(ell, m, -s, theta, delta)?;
    let norm = (T::of_usize(2 * ell + 1) / (T::of(4.0) * T::PI())).sqrt();
    let phase = T::of_int(m as i64) * phi;
    Ok(Complex::new(phase.cos(), phase.sin()) * (parity_sign::<T>(s as i64) * norm * d))
}
