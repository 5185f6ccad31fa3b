//! Direct-summation transforms, `O(L⁶)`, used as correctness oracles.
//!
//! The inverse evaluates `f = Σ (2ℓ+1)/(8π²) f̂ℓmn e^{imα} d^ℓ_mn(β) e^{inγ}`
//! at every node with `d` from the recursion at each ring.
//!
//! The forward sums every sample against a per-ring kernel. On each ring the
//! `(α, γ)` sums are exact for band-limited `f`; in β the stored rings and
//! their mirrors determine the degree-`(L-1)` trigonometric polynomial
//! `G_mn(β) = Σ_b G_mn(β_b) C_b(β)`, with
//! `C_b(β) = D(β - β_b) + (1 - δ_{b,L-1}) (-1)^{m+n} D(β - β_{2L-2-b})` and
//! `D` the Dirichlet kernel of length `2L-1`. The kernel
//! `K^ℓ_mn(b) = ∫_0^π sin β d^ℓ_mn(β) C_b(β) dβ` is integrated by
//! Gauss-Legendre quadrature, so the oracle never touches Δ or the
//! quadrature weights of the fast paths.

use num_complex::Complex;

use crate::error::{Result, So3Error};
use crate::fft::zero;
use crate::gauss_legendre::gauss_legendre;
use crate::grid::{
    alpha_node, beta_node_extended, gamma_node, BandLimits, CoeffLayout, Reality, So3Samples, WignerCoeffs,
};
use crate::scalar::Real;
use crate::wigner_d::{plane_index, DBetaPlane};

/// Largest `L` a naive plan accepts without the override.
pub const NAIVE_SOFT_CAP: usize = 32;

/// Symmetry tolerance when a real signal's coefficients are stored halved.
const NAIVE_REAL_TOL: f64 = 1e-8;

/// Precomputed kernels, ring d-values and phase tables for one set of
/// band-limits.
#[derive(Clone, Debug)]
pub struct NaivePlan<T> {
    limits: BandLimits,
    layout: CoeffLayout,
    /// `K^ℓ_mn(b)` at `[coeff index * L + b]`, including the `(2π)²/[(2M-1)(2N-1)]` factor.
    kernel: Vec<T>,
    /// `d^ℓ_mn(β_b)` at `[coeff index * L + b]`.
    d_rings: Vec<T>,
    /// `e^{-imα_a}` at `[(m + M - 1) * (2M-1) + a]`.
    alpha_phase: Vec<Complex<T>>,
    /// `e^{-inγ_g}` at `[(n + N - 1) * (2N-1) + g]`.
    gamma_phase: Vec<Complex<T>>,
}

impl<T: Real> NaivePlan<T> {
    pub fn new(limits: BandLimits) -> Result<Self> {
        Self::with_cap_override(limits, false)
    }

    /// As [`new`](Self::new); `override_cap` lifts the [`NAIVE_SOFT_CAP`] limit.
    pub fn with_cap_override(limits: BandLimits, override_cap: bool) -> Result<Self> {
        let l = limits.l();
        if l > NAIVE_SOFT_CAP && !override_cap {
            return Err(So3Error::NaiveCapExceeded { l, cap: NAIVE_SOFT_CAP });
        }
        let layout = CoeffLayout::new(limits, Reality::Complex);
        let triples: Vec<(usize, i32, i32)> = layout.triples().collect();

        let (na, ng) = (limits.alpha_len(), limits.gamma_len());
        let mm = limits.m() as i32 - 1;
        let nn = limits.n() as i32 - 1;
        let mut alpha_phase = Vec::with_capacity(na * na);
        for m in -mm..=mm {
            for a in 0..na {
                let ph = -T::of_int(m as i64) * alpha_node::<T>(a, limits.m())?;
                alpha_phase.push(Complex::new(ph.cos(), ph.sin()));
            }
        }
        let mut gamma_phase = Vec::with_capacity(ng * ng);
        for n in -nn..=nn {
            for g in 0..ng {
                let ph = -T::of_int(n as i64) * gamma_node::<T>(g, limits.n())?;
                gamma_phase.push(Complex::new(ph.cos(), ph.sin()));
            }
        }

        let mut d_rings = vec![T::zero(); triples.len() * l];
        for b in 0..l {
            let mut plane = DBetaPlane::new(l, beta_node_extended::<T>(b, l))?;
            let mut idx = 0;
            for ell in 0..l {
                plane.advance_to(ell)?;
                while idx < triples.len() && triples[idx].0 == ell {
                    let (_, m, n) = triples[idx];
                    d_rings[idx * l + b] = plane.values()[plane_index(ell, m, n)];
                    idx += 1;
                }
            }
        }

        let kernel = Self::kernel(limits, &triples)?;
        Ok(Self {
            limits,
            layout,
            kernel,
            d_rings,
            alpha_phase,
            gamma_phase,
        })
    }

    fn kernel(limits: BandLimits, triples: &[(usize, i32, i32)]) -> Result<Vec<T>> {
        let l = limits.l();
        let p = 2 * l - 1;
        let (x, w) = gauss_legendre(2 * l + 24);
        let betas: Vec<T> = (0..p).map(|b| beta_node_extended::<T>(b, l)).collect();
        let dirichlet = |t: T| {
            let mut s = T::one();
            for k in 1..l {
                s += T::of(2.0) * (T::of_usize(k) * t).cos();
            }
            s / T::of_usize(p)
        };
        let scale = T::two_pi() * T::two_pi() / T::of_usize(limits.alpha_len() * limits.gamma_len());

        let mut kernel = vec![T::zero(); triples.len() * l];
        for (&xq, &wq) in x.iter().zip(&w) {
            let beta = T::FRAC_PI_2() * (T::of(xq) + T::one());
            let weight = T::of(wq) * T::FRAC_PI_2() * beta.sin() * scale;
            // C_b(β) for even and odd extension parity.
            let mut card = [vec![T::zero(); l], vec![T::zero(); l]];
            for b in 0..l {
                let direct = dirichlet(beta - betas[b]);
                let mirror = if b == l - 1 {
                    T::zero()
                } else {
                    dirichlet(beta - betas[2 * l - 2 - b])
                };
                card[0][b] = direct + mirror;
                card[1][b] = direct - mirror;
            }
            let mut plane = DBetaPlane::new(l, beta)?;
            let mut idx = 0;
            for ell in 0..l {
                plane.advance_to(ell)?;
                while idx < triples.len() && triples[idx].0 == ell {
                    let (_, m, n) = triples[idx];
                    let d = plane.values()[plane_index(ell, m, n)] * weight;
                    let c = &card[(m + n).rem_euclid(2) as usize];
                    for (k, &cb) in kernel[idx * l..(idx + 1) * l].iter_mut().zip(c) {
                        *k += d * cb;
                    }
                    idx += 1;
                }
            }
        }
        Ok(kernel)
    }

    pub fn limits(&self) -> BandLimits {
        self.limits
    }

    /// `f̂ℓmn` by direct summation over every sample. Real-typed samples
    /// give real (half-stored) coefficients.
    pub fn forward(&self, f: &So3Samples<T>) -> Result<WignerCoeffs<T>> {
        self.check(f.limits())?;
        let lim = self.limits;
        let (l, na, ng) = (lim.l(), lim.alpha_len(), lim.gamma_len());
        let mm = lim.m() as i32 - 1;
        let nn = lim.n() as i32 - 1;
        let samples: Vec<Complex<T>> = (0..f.len()).map(|i| f.value_at(i)).collect();

        let mut data = Vec::with_capacity(self.layout.len());
        for (idx, (_, m, n)) in self.layout.triples().enumerate() {
            let ea = &self.alpha_phase[(m + mm) as usize * na..][..na];
            let eg = &self.gamma_phase[(n + nn) as usize * ng..][..ng];
            let kern = &self.kernel[idx * l..(idx + 1) * l];
            let mut acc = zero::<T>();
            for (b, &k) in kern.iter().enumerate() {
                for (a, &pa) in ea.iter().enumerate() {
                    let c = pa * k;
                    let row = &samples[(b * na + a) * ng..][..ng];
                    for (&s, &pg) in row.iter().zip(eg) {
                        acc += s * c * pg;
                    }
                }
            }
            data.push(acc);
        }
        let out = WignerCoeffs::from_vec(lim, Reality::Complex, data)?;
        match f.reality() {
            Reality::Complex => Ok(out),
            Reality::Real => out.to_real(NAIVE_REAL_TOL),
        }
    }

    /// Samples by direct summation over every coefficient. Real coefficients
    /// give real-typed samples.
    pub fn inverse(&self, fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
        self.check(fhat.limits())?;
        let lim = self.limits;
        let (l, na, ng) = (lim.l(), lim.alpha_len(), lim.gamma_len());
        let mm = lim.m() as i32 - 1;
        let nn = lim.n() as i32 - 1;
        let eight_pi_sq = T::of(2.0) * T::two_pi() * T::two_pi();

        let mut out = vec![zero::<T>(); lim.sample_len()];
        for (idx, (ell, m, n)) in self.layout.triples().enumerate() {
            let c = fhat.get_unchecked(ell, m, n) * (T::of_usize(2 * ell + 1) / eight_pi_sq);
            let ea = &self.alpha_phase[(m + mm) as usize * na..][..na];
            let eg = &self.gamma_phase[(n + nn) as usize * ng..][..ng];
            let d = &self.d_rings[idx * l..(idx + 1) * l];
            for (b, &db) in d.iter().enumerate() {
                for (a, &pa) in ea.iter().enumerate() {
                    let ca = c * pa.conj() * db;
                    let row = &mut out[(b * na + a) * ng..][..ng];
                    for (z, &pg) in row.iter_mut().zip(eg) {
                        *z += ca * pg.conj();
                    }
                }
            }
        }
        match fhat.reality() {
            Reality::Complex => So3Samples::from_complex(lim, out),
            Reality::Real => So3Samples::from_real(lim, out.into_iter().map(|z| z.re).collect()),
        }
    }

    fn check(&self, limits: BandLimits) -> Result<()> {
        if limits != self.limits {
            return Err(So3Error::ShapeMismatch {
                expected: format!("data for {}", self.limits),
                found: format!("data for {limits}"),
            });
        }
        Ok(())
    }
}

/// One-shot naive forward transform, subject to [`NAIVE_SOFT_CAP`].
pub fn forward_naive<T: Real>(f: &So3Samples<T>) -> Result<WignerCoeffs<T>> {
    NaivePlan::new(f.limits())?.forward(f)
}

/// One-shot naive inverse transform, subject to [`NAIVE_SOFT_CAP`].
pub fn inverse_naive<T: Real>(fhat: &WignerCoeffs<T>) -> Result<So3Samples<T>> {
    NaivePlan::new(fhat.limits())?.inverse(fhat)
}
