//! Per-n path: an FFT over γ followed by one spin-`(-n)` spherical harmonic
//! transform of each `f_n(α, β)` plane.
//!
//! Spin coefficients `sflm` are held per slice as `[ℓ][m]` with
//! `m + M - 1` as the inner index; entries with `|m| > ℓ` or `|s| > ℓ` are 0.

use num_complex::Complex;

use super::{par_map, samples_from_rings, symmetrise_n0_row, So3Transform};
use crate::error::Result;
use crate::fft::{bin, gather_centred, scatter_centred, zero};
use crate::grid::{Reality, So3Samples, WignerCoeffs};
use crate::scalar::{i_pow, parity_sign, Real};

impl<T: Real> So3Transform<T> {
    pub(super) fn forward_per_n_impl(&self, f: &So3Samples<T>, reality: Reality) -> Result<WignerCoeffs<T>> {
        let lim = self.limits;
        let (l, na, ng) = (lim.l(), lim.alpha_len(), lim.gamma_len());
        let wm = na;
        let mm = lim.m() as i32 - 1;

        // f_n(α_a, β_b) = 2π/(2N-1) Σ_g f(α_a, β_b, γ_g) e^{-inγ_g}.
        let mut buf: Vec<Complex<T>> = (0..lim.sample_len()).map(|i| f.value_at(i)).collect();
        let mut scratch = vec![zero(); self.fft_gamma.scratch_len()];
        self.fft_gamma.forward.process_with_scratch(&mut buf, &mut scratch);
        let scale = T::two_pi() / T::of_usize(ng);

        let ns: Vec<i32> = self.n_range(reality).collect();
        let slices = par_map(self.options.parallel, ns.clone(), |n| {
            let gb = bin(n as i64, ng);
            let plane: Vec<Complex<T>> = (0..l * na).map(|ba| buf[ba * ng + gb] * scale).collect();
            let m_lo = if reality == Reality::Real && n == 0 { 0 } else { -mm };
            self.spin_analyse(&plane, -n, m_lo)
        });

        // f̂ℓmn = (-1)^n √(4π/(2ℓ+1)) sflm with s = -n.
        let mut out = WignerCoeffs::zeros(lim, reality);
        let four_pi = T::two_pi() * T::of(2.0);
        for (&n, sflm) in ns.iter().zip(slices) {
            let sflm = sflm?;
            let sign = parity_sign::<T>(n as i64);
            for ell in n.unsigned_abs() as usize..l {
                if n.abs() > lim.n_max_at(ell) {
                    continue;
                }
                let factor = sign * (four_pi / T::of_usize(2 * ell + 1)).sqrt();
                let m_top = lim.m_max_at(ell);
                for m in -m_top..=m_top {
                    let idx = out.layout().index(ell, m, n);
                    out.data_mut()[idx] = sflm[ell * wm + (m + mm) as usize] * factor;
                }
            }
        }
        if reality == Reality::Real {
            symmetrise_n0_row(&mut out);
        }
        Ok(out)
    }

    pub(super) fn inverse_per_n_impl(&self, fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
        let lim = self.limits;
        let reality = fhat.reality();
        let (l, na, ng) = (lim.l(), lim.alpha_len(), lim.gamma_len());
        let wm = na;
        let mm = lim.m() as i32 - 1;
        let ns: Vec<i32> = self.n_range(reality).collect();

        // sflm = (-1)^n √((2ℓ+1)/(16π³)) f̂ℓmn, then f_n = Σ_ℓm sflm sYℓm.
        let sixteen_pi_cubed = T::of(16.0) * T::PI() * T::PI() * T::PI();
        let planes = par_map(self.options.parallel, ns.clone(), |n| {
            let sign = parity_sign::<T>(n as i64);
            let mut sflm = vec![zero::<T>(); l * wm];
            for ell in n.unsigned_abs() as usize..l {
                if n.abs() > lim.n_max_at(ell) {
                    continue;
                }
                let factor = sign * (T::of_usize(2 * ell + 1) / sixteen_pi_cubed).sqrt();
                let m_top = lim.m_max_at(ell);
                for m in -m_top..=m_top {
                    sflm[ell * wm + (m + mm) as usize] = fhat.data()[fhat.layout().index(ell, m, n)] * factor;
                }
            }
            let m_lo = if reality == Reality::Real && n == 0 { 0 } else { -mm };
            self.spin_synthesise(&sflm, -n, m_lo)
        });

        // f(α, β, γ_g) = Σ_n f_n(α, β) e^{inγ_g}.
        let mut buf = vec![zero::<T>(); lim.sample_len()];
        for (&n, plane) in ns.iter().zip(planes) {
            let plane = plane?;
            let gb = bin(n as i64, ng);
            for (ba, z) in plane.iter().enumerate() {
                buf[ba * ng + gb] = *z;
            }
            if reality == Reality::Real && n > 0 {
                let gm = bin(-n as i64, ng);
                for (ba, z) in plane.iter().enumerate() {
                    buf[ba * ng + gm] = z.conj();
                }
            }
        }
        let mut scratch = vec![zero(); self.fft_gamma.scratch_len()];
        self.fft_gamma.backward.process_with_scratch(&mut buf, &mut scratch);
        let ring_len = na * ng;
        samples_from_rings(lim, reality, buf.chunks(ring_len).map(|c| c.to_vec()).collect())
    }

    /// Spin-`s` analysis of a plane sampled at `(α_a, β_b)`, `b < L`, stored
    /// ring-major. With `m_lo = 0` only `m >= 0` is computed.
    fn spin_analyse(&self, plane: &[Complex<T>], s: i32, m_lo: i32) -> Result<Vec<Complex<T>>> {
        let lim = self.limits;
        let (l, na) = (lim.l(), lim.alpha_len());
        let wm = na;
        let mm = lim.m() as i32 - 1;
        let p = self.beta.width();
        let half = l as i32 - 1;

        // G_m(β_b) = 2π/(2M-1) Σ_a f_s(α_a, β_b) e^{-imα_a}, stored [m][b].
        let scale = T::two_pi() / T::of_usize(na);
        let mut rings = vec![zero::<T>(); wm * l];
        let mut col = vec![zero(); na];
        let mut cen = vec![zero(); na];
        let mut scratch = vec![zero(); self.fft_alpha.scratch_len()];
        for b in 0..l {
            col.copy_from_slice(&plane[b * na..(b + 1) * na]);
            self.fft_alpha.forward.process_with_scratch(&mut col, &mut scratch);
            gather_centred(&col, &mut cen);
            for k in (m_lo + mm) as usize..wm {
                rings[k * l + b] = cen[k] * scale;
            }
        }

        let mut spec = vec![zero::<T>(); wm * p];
        let mut bs = self.beta.scratch();
        for m in m_lo..=mm {
            let k = (m + mm) as usize;
            let odd = (m + s).rem_euclid(2) == 1;
            self.beta
                .analyse(&rings[k * l..(k + 1) * l], odd, &mut spec[k * p..(k + 1) * p], &mut bs);
        }

        // sflm = (-1)^s √((2ℓ+1)/4π) i^{m+s} Σ_{m'} Δ_{m'm} Δ_{m',-s} G_mm'
        //      = (-1)^s √((2ℓ+1)/4π) i^{3m-s} Σ_{m'} Δ_{mm'} Δ_{-s,m'} G_mm'.
        let mut sflm = vec![zero::<T>(); l * wm];
        let four_pi = T::two_pi() * T::of(2.0);
        let sign = parity_sign::<T>(s as i64);
        self.delta.for_each_plane(l, |ell, dplane| {
            let e = ell as i32;
            if s.abs() > e {
                return;
            }
            let dim = 2 * ell + 1;
            let hs = &dplane[(e - s) as usize * dim..][..dim];
            let norm = sign * (T::of_usize(dim) / four_pi).sqrt();
            let m_top = lim.m_max_at(ell);
            for m in m_lo.max(-m_top)..=m_top {
                let g = &spec[(m + mm) as usize * p + (half - e) as usize..][..dim];
                let row = &dplane[(m + e) as usize * dim..][..dim];
                let mut re = T::zero();
                let mut im = T::zero();
                for ((&x, &y), z) in row.iter().zip(hs).zip(g) {
                    let w = x * y;
                    re += w * z.re;
                    im += w * z.im;
                }
                sflm[ell * wm + (m + mm) as usize] = i_pow::<T>((3 * m - s) as i64) * Complex::new(re, im) * norm;
            }
        })?;
        Ok(sflm)
    }

    /// Spin-`s` synthesis onto the `(α_a, β_b)` plane, `b < L`. With
    /// `m_lo = 0` (spin 0, real signal) the `m < 0` half is conjugate-filled.
    fn spin_synthesise(&self, sflm: &[Complex<T>], s: i32, m_lo: i32) -> Result<Vec<Complex<T>>> {
        let lim = self.limits;
        let (l, na) = (lim.l(), lim.alpha_len());
        let wm = na;
        let mm = lim.m() as i32 - 1;
        let p = self.beta.width();
        let half = l as i32 - 1;

        // F_mm' = i^{-s-m} Σ_ℓ (-1)^s √((2ℓ+1)/4π) sflm Δ_{m'm} Δ_{m',-s}
        //      = i^{m-3s} Σ_ℓ (-1)^s √((2ℓ+1)/4π) sflm Δ_{mm'} Δ_{-s,m'}.
        let mut spec = vec![zero::<T>(); wm * p];
        let four_pi = T::two_pi() * T::of(2.0);
        let sign = parity_sign::<T>(s as i64);
        self.delta.for_each_plane(l, |ell, dplane| {
            let e = ell as i32;
            if s.abs() > e {
                return;
            }
            let dim = 2 * ell + 1;
            let hs = &dplane[(e - s) as usize * dim..][..dim];
            let norm = sign * (T::of_usize(dim) / four_pi).sqrt();
            let m_top = lim.m_max_at(ell);
            for m in m_lo.max(-m_top)..=m_top {
                let c = sflm[ell * wm + (m + mm) as usize] * norm;
                let row = &dplane[(m + e) as usize * dim..][..dim];
                let start = (m + mm) as usize * p + (half - e) as usize;
                for ((z, &x), &y) in spec[start..start + dim].iter_mut().zip(row).zip(hs) {
                    let w = x * y;
                    z.re += w * c.re;
                    z.im += w * c.im;
                }
            }
        })?;

        let mut rings = vec![zero::<T>(); wm * l];
        let mut bs = self.beta.scratch();
        for m in m_lo..=mm {
            let k = (m + mm) as usize;
            self.beta
                .synthesise(&spec[k * p..(k + 1) * p], &mut rings[k * l..(k + 1) * l], &mut bs);
            let phase = i_pow::<T>((m - 3 * s) as i64);
            rings[k * l..(k + 1) * l].iter_mut().for_each(|z| *z *= phase);
        }
        if m_lo == 0 {
            for m in 1..=mm {
                for b in 0..l {
                    rings[(mm - m) as usize * l + b] = rings[(mm + m) as usize * l + b].conj();
                }
            }
        }

        // f_s(α_a, β_b) = Σ_m G_m(β_b) e^{imα_a}.
        let mut plane = vec![zero::<T>(); l * na];
        let mut col = vec![zero(); na];
        let mut cen = vec![zero(); na];
        let mut scratch = vec![zero(); self.fft_alpha.scratch_len()];
        for b in 0..l {
            for (k, z) in cen.iter_mut().enumerate() {
                *z = rings[k * l + b];
            }
            scatter_centred(&cen, &mut col, zero());
            self.fft_alpha.backward.process_with_scratch(&mut col, &mut scratch);
            plane[b * na..(b + 1) * na].copy_from_slice(&col);
        }
        Ok(plane)
    }
}
