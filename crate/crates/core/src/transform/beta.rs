//! The β stage shared by every fast path: periodic extension of ring data
//! to `[0, 2π)`, the length-`(2L-1)` DFT, and the weight convolution that
//! turns torus coefficients into `∫_0^π sin β G(β) e^{-i m' β} dβ`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::fft::{bin, gather_centred, next_smooth, scatter_centred, zero, FftPair};
use crate::quadrature::weight_w;
use crate::scalar::Real;

/// How the weight convolution `Σ_{m''} G̃_{m''} w(m'' - m')` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    /// Pointwise product in β space on a zero-padded grid of at least
    /// `4L-3` points. Wrap-around only reaches outputs with `|m'| > L-1`.
    FourierSpace,
    /// Direct `O(L²)` linear convolution.
    ExactConvolution,
}

#[derive(Clone, Debug)]
pub(crate) struct BetaStage<T: Real> {
    l: usize,
    fft: FftPair<T>,
    mode: WeightMode,
    pad: FftPair<T>,
    /// Spatial form of `u(k) = w(-k)` on the padded grid, divided by its length.
    kernel: Vec<Complex<T>>,
    /// `w(k)` for `|k| <= 2L-2`.
    w: Vec<Complex<T>>,
    /// `e^{-i m'' π/(2L-1)} / (2L-1)`.
    shift_fwd: Vec<Complex<T>>,
    /// `e^{i m' π/(2L-1)}`.
    shift_inv: Vec<Complex<T>>,
}

pub(crate) struct BetaScratch<T> {
    ext: Vec<Complex<T>>,
    padded: Vec<Complex<T>>,
    torus: Vec<Complex<T>>,
    fft: Vec<Complex<T>>,
}

impl<T: Real> BetaStage<T> {
    pub(crate) fn new(planner: &mut FftPlanner<T>, l: usize, mode: WeightMode) -> Self {
        let p = 2 * l - 1;
        let fft = FftPair::new(planner, p);
        let pad_len = next_smooth(4 * l - 3);
        let pad = FftPair::new(planner, pad_len);
        let span = 2 * l as i64 - 2;
        let w: Vec<Complex<T>> = (-span..=span).map(weight_w).collect();

        let mut kernel = vec![zero::<T>(); pad_len];
        for k in -span..=span {
            kernel[bin(k, pad_len)] = weight_w(-k);
        }
        pad.backward.process(&mut kernel);
        let inv_pad = T::one() / T::of_usize(pad_len);
        kernel.iter_mut().for_each(|z| *z *= inv_pad);

        let step = T::PI() / T::of_usize(p);
        let inv_p = T::one() / T::of_usize(p);
        let lm = l as i64 - 1;
        let shift_fwd = (-lm..=lm)
            .map(|k| {
                let ph = -T::of_int(k) * step;
                Complex::new(ph.cos(), ph.sin()) * inv_p
            })
            .collect();
        let shift_inv = (-lm..=lm)
            .map(|k| {
                let ph = T::of_int(k) * step;
                Complex::new(ph.cos(), ph.sin())
            })
            .collect();
        Self {
            l,
            fft,
            mode,
            pad,
            kernel,
            w,
            shift_fwd,
            shift_inv,
        }
    }

    /// Number of `m'` values, `2L-1`.
    pub(crate) fn width(&self) -> usize {
        2 * self.l - 1
    }

    pub(crate) fn scratch(&self) -> BetaScratch<T> {
        BetaScratch {
            ext: vec![zero(); self.fft.len()],
            padded: vec![zero(); self.pad.len()],
            torus: vec![zero(); self.width()],
            fft: vec![zero(); self.fft.scratch_len().max(self.pad.scratch_len())],
        }
    }

    #[inline]
    fn w(&self, k: i64) -> Complex<T> {
        self.w[(k + 2 * self.l as i64 - 2) as usize]
    }

    /// Ring values `G(β_b)`, `b < L`, to `G_{m'} = ∫_0^π sin β G(β) e^{-i m' β}`
    /// for `|m'| <= L-1` (`out[m' + L - 1]`). `odd` selects the extension
    /// parity `G̃(2π - β) = -G(β)`.
    pub(crate) fn analyse(&self, rings: &[Complex<T>], odd: bool, out: &mut [Complex<T>], s: &mut BetaScratch<T>) {
        let l = self.l;
        let p = self.fft.len();
        debug_assert_eq!(rings.len(), l);
        debug_assert_eq!(out.len(), p);

        s.ext[..l].copy_from_slice(rings);
        // ext[b] = ±rings[2L - 2 - b] for b >= L.
        for (z, &r) in s.ext[l..].iter_mut().zip(rings[..l - 1].iter().rev()) {
            *z = if odd { -r } else { r };
        }
        self.fft.forward.process_with_scratch(&mut s.ext, &mut s.fft);

        // torus[m'' + L - 1] = t_{m''} with G̃(β) = Σ t_{m''} e^{i m'' β}.
        gather_centred(&s.ext, &mut s.torus);
        for (z, &c) in s.torus.iter_mut().zip(&self.shift_fwd) {
            *z *= c;
        }

        match self.mode {
            WeightMode::FourierSpace => {
                scatter_centred(&s.torus, &mut s.padded, zero());
                self.pad.backward.process_with_scratch(&mut s.padded, &mut s.fft);
                for (z, u) in s.padded.iter_mut().zip(&self.kernel) {
                    *z *= *u;
                }
                self.pad.forward.process_with_scratch(&mut s.padded, &mut s.fft);
                gather_centred(&s.padded, out);
            }
            WeightMode::ExactConvolution => {
                let lm = self.l as i64 - 1;
                for mp in -lm..=lm {
                    let mut acc = zero::<T>();
                    for mpp in -lm..=lm {
                        acc += s.torus[(mpp + lm) as usize] * self.w(mpp - mp);
                    }
                    out[(mp + lm) as usize] = acc;
                }
            }
        }
    }

    /// `F_{m'}` (`coeffs[m' + L - 1]`) to ring values `Σ_{m'} F_{m'} e^{i m' β_b}`
    /// for `b < L`; the rings on `(π, 2π)` are discarded.
    pub(crate) fn synthesise(&self, coeffs: &[Complex<T>], rings: &mut [Complex<T>], s: &mut BetaScratch<T>) {
        for ((z, &c), &sh) in s.torus.iter_mut().zip(coeffs).zip(&self.shift_inv) {
            *z = c * sh;
        }
        scatter_centred(&s.torus, &mut s.ext, zero());
        self.fft.backward.process_with_scratch(&mut s.ext, &mut s.fft);
        rings.copy_from_slice(&s.ext[..self.l]);
    }
}
