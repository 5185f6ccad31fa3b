//! DFT conventions.
//!
//! Forward transforms are unnormalised, `X_k = Σ_j x_j e^{-2πi jk/n}`;
//! backward transforms are the plain sum `x_j = Σ_k X_k e^{2πi jk/n}` and
//! callers apply `1/n` (or any other factor) explicitly. Frequency `k` in
//! `(-n/2, n/2]` lives in bin `k mod n`; [`bin`] and [`freq`] convert.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Real;

/// Buffer bin holding signed frequency `k`.
#[inline]
pub fn bin(k: i64, len: usize) -> usize {
    k.rem_euclid(len as i64) as usize
}

/// Signed frequency stored in `bin` for a buffer of odd length `len`.
#[inline]
pub fn freq(bin: usize, len: usize) -> i64 {
    let half = (len / 2) as i64;
    let k = bin as i64;
    if k > half {
        k - len as i64
    } else {
        k
    }
}

/// Centred copy of the low frequencies: `dst[k + h] = src[bin(k)]` for
/// `|k| <= h`, where `dst.len() = 2h + 1 <= src.len()`.
#[inline]
pub(crate) fn gather_centred<C: Copy>(src: &[C], dst: &mut [C]) {
    let h = dst.len() / 2;
    let n = src.len();
    dst[h..].copy_from_slice(&src[..=h]);
    dst[..h].copy_from_slice(&src[n - h..]);
}

/// Inverse of [`gather_centred`]: `dst[bin(k)] = src[k + h]`, with every
/// other bin of `dst` set to `fill`.
#[inline]
pub(crate) fn scatter_centred<C: Copy>(src: &[C], dst: &mut [C], fill: C) {
    let h = src.len() / 2;
    let n = dst.len();
    dst[..=h].copy_from_slice(&src[h..]);
    dst[n - h..].copy_from_slice(&src[..h]);
    dst[h + 1..n - h].fill(fill);
}

/// Smallest `n >= min` of the form `2^a 3^b 5^c`.
pub fn next_smooth(min: usize) -> usize {
    let mut n = min.max(1);
    loop {
        let mut r = n;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return n;
        }
        n += 1;
    }
}

/// Forward and backward plans for one length.
#[derive(Clone)]
pub(crate) struct FftPair<T: Real> {
    pub forward: Arc<dyn Fft<T>>,
    pub backward: Arc<dyn Fft<T>>,
    len: usize,
}

impl<T: Real> FftPair<T> {
    pub(crate) fn new(planner: &mut FftPlanner<T>, len: usize) -> Self {
        Self {
            forward: planner.plan_fft_forward(len),
            backward: planner.plan_fft_inverse(len),
            len,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.backward.get_inplace_scratch_len())
    }
}

impl<T: Real> std::fmt::Debug for FftPair<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPair").field("len", &self.len).finish()
    }
}

#[inline]
pub(crate) fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}
