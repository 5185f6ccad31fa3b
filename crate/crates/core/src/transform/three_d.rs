//! Separation-of-variables path over the full `(m, n, m')` cube.
//!
//! Cube layout: slice `(n, m)` lives at `(ni * width_m + m + M - 1)` where
//! `ni` indexes the transform's `n` range; within a slice, `m'` runs over
//! `-(L-1)..=L-1` (forward/inverse β spectra) or `b = 0..L` (ring values).

use num_complex::Complex;

use super::{par_map, samples_from_rings, symmetrise_n0_row, So3Transform};
use crate::error::Result;
use crate::fft::{bin, gather_centred, scatter_centred, zero};
use crate::grid::{Reality, So3Samples, WignerCoeffs};
use crate::scalar::{i_pow, Real};

impl<T: Real> So3Transform<T> {
    pub(super) fn forward_3d_impl(&self, f: &So3Samples<T>, reality: Reality) -> Result<WignerCoeffs<T>> {
        let lim = self.limits;
        let (l, na, ng) = (lim.l(), lim.alpha_len(), lim.gamma_len());
        let mm = lim.m() as i32 - 1;
        let wm = na;
        let ns: Vec<i32> = self.n_range(reality).collect();
        let p = self.beta.width();

        // G_mn(β_b) = (2π)²/[(2M-1)(2N-1)] Σ_{a,g} f e^{-imα_a} e^{-inγ_g}.
        let scale = T::two_pi() * T::two_pi() / T::of_usize(na * ng);
        let ring_len = na * ng;
        let blocks = par_map(self.options.parallel, (0..l).collect(), |b| {
            let mut buf: Vec<Complex<T>> = (0..ring_len).map(|i| f.value_at(b * ring_len + i)).collect();
            let mut scratch = vec![zero(); self.fft_gamma.scratch_len().max(self.fft_alpha.scratch_len())];
            self.fft_gamma.forward.process_with_scratch(&mut buf, &mut scratch);
            let mut col = vec![zero(); na];
            let mut block = vec![zero(); ns.len() * wm];
            for (ni, &n) in ns.iter().enumerate() {
                let gb = bin(n as i64, ng);
                for a in 0..na {
                    col[a] = buf[a * ng + gb];
                }
                self.fft_alpha.forward.process_with_scratch(&mut col, &mut scratch);
                let dst = &mut block[ni * wm..(ni + 1) * wm];
                gather_centred(&col, dst);
                dst.iter_mut().for_each(|z| *z *= scale);
            }
            block
        });

        // β stage on each (n, m) slice, with extension parity (-1)^{m+n}.
        let slices: Vec<(usize, i32, i32)> = ns
            .iter()
            .enumerate()
            .flat_map(|(ni, &n)| (-mm..=mm).map(move |m| (ni, m, n)))
            .collect();
        let cube: Vec<Vec<Complex<T>>> = par_map(self.options.parallel, slices, |(ni, m, n)| {
            let slot = ni * wm + (m + mm) as usize;
            let rings: Vec<Complex<T>> = blocks.iter().map(|blk| blk[slot]).collect();
            let mut out = vec![zero(); p];
            if reality == Reality::Real && n == 0 && m < 0 {
                return out;
            }
            let mut s = self.beta.scratch();
            self.beta.analyse(&rings, (m + n).rem_euclid(2) == 1, &mut out, &mut s);
            out
        });

        // f̂ℓmn = i^{m-n} Σ_{m'} Δ_{m'm} Δ_{m'n} G_mnm'
        //      = i^{3m+n} Σ_{m'} Δ_{mm'} Δ_{nm'} G_mnm', reading rows of the plane.
        let mut out = WignerCoeffs::zeros(lim, reality);
        let half = l as i32 - 1;
        let mut prod = Vec::new();
        self.delta.for_each_plane(l, |ell, plane| {
            let e = ell as i32;
            let dim = 2 * ell + 1;
            let m_top = lim.m_max_at(ell);
            let n_top = lim.n_max_at(ell);
            for (ni, &n) in ns.iter().enumerate() {
                if n.abs() > n_top {
                    continue;
                }
                let hn = &plane[(n + e) as usize * dim..][..dim];
                let m_lo = if reality == Reality::Real && n == 0 { 0 } else { -m_top };
                for m in m_lo..=m_top {
                    let g = &cube[ni * wm + (m + mm) as usize][(half - e) as usize..][..dim];
                    let row = &plane[(m + e) as usize * dim..][..dim];
                    prod.clear();
                    prod.extend(row.iter().zip(hn).map(|(&x, &y)| x * y));
                    let mut re = T::zero();
                    let mut im = T::zero();
                    for (w, z) in prod.iter().zip(g) {
                        re += *w * z.re;
                        im += *w * z.im;
                    }
                    let idx = out.layout().index(ell, m, n);
                    out.data_mut()[idx] = i_pow::<T>((3 * m + n) as i64) * Complex::new(re, im);
                }
            }
        })?;
        if reality == Reality::Real {
            symmetrise_n0_row(&mut out);
        }
        Ok(out)
    }

    pub(super) fn inverse_3d_impl(&self, fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
        let lim = self.limits;
        let reality = fhat.reality();
        let (l, na, ng) = (lim.l(), lim.alpha_len(), lim.gamma_len());
        let mm = lim.m() as i32 - 1;
        let wm = na;
        let ns: Vec<i32> = self.n_range(reality).collect();
        let p = self.beta.width();
        let half = l as i32 - 1;

        // F_mnm' = i^{n-m} Σ_ℓ (2ℓ+1)/(8π²) Δ_{m'm} Δ_{m'n} f̂ℓmn; the sum is
        // accumulated over rows, Δ_{mm'} Δ_{nm'}, and the phase becomes i^{m+3n}.
        let mut cube = vec![zero::<T>(); ns.len() * wm * p];
        let eight_pi_sq = T::two_pi() * T::two_pi() * T::of(2.0);
        self.delta.for_each_plane(l, |ell, plane| {
            let e = ell as i32;
            let dim = 2 * ell + 1;
            let norm = T::of_usize(dim) / eight_pi_sq;
            let m_top = lim.m_max_at(ell);
            let n_top = lim.n_max_at(ell);
            for (ni, &n) in ns.iter().enumerate() {
                if n.abs() > n_top {
                    continue;
                }
                let hn = &plane[(n + e) as usize * dim..][..dim];
                let m_lo = if reality == Reality::Real && n == 0 { 0 } else { -m_top };
                for m in m_lo..=m_top {
                    let c = fhat.data()[fhat.layout().index(ell, m, n)] * norm;
                    let row = &plane[(m + e) as usize * dim..][..dim];
                    let start = (ni * wm + (m + mm) as usize) * p + (half - e) as usize;
                    let dst = &mut cube[start..start + dim];
                    for ((z, &x), &y) in dst.iter_mut().zip(row).zip(hn) {
                        let w = x * y;
                        z.re += w * c.re;
                        z.im += w * c.im;
                    }
                }
            }
        })?;

        // β synthesis per (n, m) slice, then the phase.
        let slices: Vec<(usize, i32, i32)> = ns
            .iter()
            .enumerate()
            .flat_map(|(ni, &n)| (-mm..=mm).map(move |m| (ni, m, n)))
            .collect();
        let mut rings: Vec<Vec<Complex<T>>> = par_map(self.options.parallel, slices, |(ni, m, n)| {
            let mut vals = vec![zero(); l];
            if reality == Reality::Real && n == 0 && m < 0 {
                return vals;
            }
            let slot = ni * wm + (m + mm) as usize;
            let mut s = self.beta.scratch();
            self.beta.synthesise(&cube[slot * p..(slot + 1) * p], &mut vals, &mut s);
            let phase = i_pow::<T>((m + 3 * n) as i64);
            vals.iter_mut().for_each(|z| *z *= phase);
            vals
        });
        if reality == Reality::Real {
            // G_{-m,0}(β) = conj(G_{m,0}(β)) for real signals.
            for m in 1..=mm {
                let src = rings[(m + mm) as usize].clone();
                rings[(mm - m) as usize] = src.iter().map(|z| z.conj()).collect();
            }
        }

        // f(α_a, β_b, γ_g) = Σ_{m,n} G_mn(β_b) e^{imα_a} e^{inγ_g}.
        let ring_len = na * ng;
        let ring_data = par_map(self.options.parallel, (0..l).collect(), |b| {
            let mut buf = vec![zero::<T>(); ring_len];
            let mut scratch = vec![zero(); self.fft_gamma.scratch_len().max(self.fft_alpha.scratch_len())];
            let mut col = vec![zero(); na];
            let mut cen = vec![zero(); na];
            for (ni, &n) in ns.iter().enumerate() {
                for (k, z) in cen.iter_mut().enumerate() {
                    *z = rings[ni * wm + k][b];
                }
                scatter_centred(&cen, &mut col, zero());
                self.fft_alpha.backward.process_with_scratch(&mut col, &mut scratch);
                let gb = bin(n as i64, ng);
                for a in 0..na {
                    buf[a * ng + gb] = col[a];
                }
                if reality == Reality::Real && n > 0 {
                    let gm = bin(-n as i64, ng);
                    for a in 0..na {
                        buf[a * ng + gm] = col[a].conj();
                    }
                }
            }
            self.fft_gamma.backward.process_with_scratch(&mut buf, &mut scratch);
            buf
        });
        samples_from_rings(lim, reality, ring_data)
    }
}
