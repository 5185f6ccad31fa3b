//! Exact quadrature on SO(3) for band-limited integrands.
//!
//! The rule samples `α'_a = 2πa/M`, the sampling-theorem rings `β_b` and
//! `γ'_g = 2πg/N`, and weights ring `b` by
//! `q(β_b) = (2π)²/(MN) [v(β_b) + (1 - δ_{b,L-1}) v(β_{2L-2-b})]`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Result, So3Error};
use crate::fft::{bin, zero};
use crate::grid::{beta_node_extended, BandLimits};
use crate::scalar::Real;

/// Tolerated imaginary residue of `v(β_b)`.
pub const WEIGHT_RESIDUE_TOL: f64 = 1e-12;

/// `w(m') = ∫_0^π sin β e^{i m' β} dβ` in closed form.
pub fn weight_w<T: Real>(m_prime: i64) -> Complex<T> {
    match m_prime {
        1 => Complex::new(T::zero(), T::FRAC_PI_2()),
        -1 => Complex::new(T::zero(), -T::FRAC_PI_2()),
        k if k % 2 == 0 => {
            let k = T::of_int(k);
            Complex::new(T::of(2.0) / (T::one() - k * k), T::zero())
        }
        _ => zero(),
    }
}

/// `v(β_b)` for all `b` in `0..2L-1`, by one length-`(2L-1)` inverse DFT.
fn v_table<T: Real>(l: usize) -> Result<Vec<T>> {
    let p = 2 * l - 1;
    let mut buf = vec![zero::<T>(); p];
    let shift = T::PI() / T::of_usize(p);
    let lm = l as i64 - 1;
    for mp in -lm..=lm {
        let phase = T::of_int(mp) * shift;
        buf[bin(mp, p)] = weight_w::<T>(-mp) * Complex::new(phase.cos(), phase.sin());
    }
    FftPlanner::new().plan_fft_inverse(p).process(&mut buf);
    let scale = T::one() / T::of_usize(p);
    let mut residue = T::zero();
    let v = buf
        .iter()
        .map(|z| {
            residue = residue.max((z.im * scale).abs());
            z.re * scale
        })
        .collect();
    let residue = residue.to_f64().unwrap_or(f64::INFINITY);
    if residue >= WEIGHT_RESIDUE_TOL {
        return Err(So3Error::ImaginaryResidue {
            what: "quadrature weight v",
            residue,
            tolerance: WEIGHT_RESIDUE_TOL,
        });
    }
    Ok(v)
}

/// `v(β_b) = 1/(2L-1) Σ_{|m'|<L} w(-m') e^{i m' β_b}`, `0 <= b <= 2L-2`.
pub fn weight_v<T: Real>(b: usize, l: usize) -> Result<T> {
    if l == 0 || b > 2 * l - 2 {
        return Err(So3Error::IndexOutOfRange {
            what: "b",
            index: b as i64,
            lo: 0,
            hi: 2 * l as i64 - 2,
        });
    }
    Ok(v_table::<T>(l)?[b])
}

/// Ring weight `q(β_b)`, `0 <= b < L`.
pub fn weight_q<T: Real>(b: usize, limits: BandLimits) -> Result<T> {
    if b >= limits.l() {
        return Err(So3Error::IndexOutOfRange {
            what: "b",
            index: b as i64,
            lo: 0,
            hi: limits.l() as i64 - 1,
        });
    }
    Ok(QuadratureWeights::new(limits)?.q(b))
}

/// Theoretical size `[(L-1)M+1]N` of the quadrature grid.
pub fn quadrature_sample_count(limits: BandLimits) -> u64 {
    let (l, m, n) = (limits.l() as u64, limits.m() as u64, limits.n() as u64);
    ((l - 1) * m + 1) * n
}

/// `α'_a = 2πa/M`.
pub fn quadrature_alpha_node<T: Real>(a: usize, m: usize) -> T {
    T::two_pi() * T::of_usize(a) / T::of_usize(m)
}

/// `γ'_g = 2πg/N`.
pub fn quadrature_gamma_node<T: Real>(g: usize, n: usize) -> T {
    T::two_pi() * T::of_usize(g) / T::of_usize(n)
}

#[derive(Clone, Debug)]
pub struct QuadratureWeights<T> {
    limits: BandLimits,
    q: Vec<T>,
    v: Vec<T>,
    w: Vec<Complex<T>>,
}

impl<T: Real> QuadratureWeights<T> {
    pub fn new(limits: BandLimits) -> Result<Self> {
        let l = limits.l();
        let v = v_table::<T>(l)?;
        let scale = T::two_pi() * T::two_pi() / T::of_usize(limits.m() * limits.n());
        let q = (0..l)
            .map(|b| {
                let mirror = if b == l - 1 { T::zero() } else { v[2 * l - 2 - b] };
                scale * (v[b] + mirror)
            })
            .collect();
        let span = 2 * l as i64 - 2;
        let w = (-span..=span).map(weight_w).collect();
        Ok(Self { limits, q, v, w })
    }

    pub fn limits(&self) -> BandLimits {
        self.limits
    }

    pub fn q(&self, b: usize) -> T {
        self.q[b]
    }

    pub fn q_all(&self) -> &[T] {
        &self.q
    }

    pub fn v(&self, b: usize) -> T {
        self.v[b]
    }

    /// Cached `w(m')` for `|m'| <= 2L-2`.
    pub fn w(&self, m_prime: i64) -> Complex<T> {
        self.w[(m_prime + 2 * self.limits.l() as i64 - 2) as usize]
    }

    /// `Σ_a Σ_b Σ_g f(α'_a, β_b, γ'_g) q(β_b)`.
    pub fn integrate(&self, f: &QuadratureSamples<T>) -> Result<Complex<T>> {
        if f.limits != self.limits {
            return Err(So3Error::ShapeMismatch {
                expected: format!("quadrature grid for {}", self.limits),
                found: format!("quadrature grid for {}", f.limits),
            });
        }
        let ring = self.limits.m() * self.limits.n();
        Ok(f.data
            .chunks_exact(ring)
            .zip(&self.q)
            .map(|(values, &q)| values.iter().fold(zero::<T>(), |acc, &z| acc + z) * q)
            .fold(zero(), |acc, z| acc + z))
    }
}

/// Samples on the reduced quadrature grid: `M` α' nodes, `L` β rings and
/// `N` γ' nodes, stored `g` fastest, then `a`, then `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSamples<T> {
    limits: BandLimits,
    data: Vec<Complex<T>>,
}

impl<T: Real> QuadratureSamples<T> {
    pub fn from_vec(limits: BandLimits, data: Vec<Complex<T>>) -> Result<Self> {
        let len = limits.l() * limits.m() * limits.n();
        if data.len() != len {
            return Err(So3Error::ShapeMismatch {
                expected: format!("{len} quadrature samples for {limits}"),
                found: format!("{}", data.len()),
            });
        }
        Ok(Self { limits, data })
    }

    /// Samples `f(α'_a, β_b, γ'_g)`.
    pub fn from_fn(limits: BandLimits, f: impl Fn(T, T, T) -> Complex<T>) -> Self {
        let (l, m, n) = (limits.l(), limits.m(), limits.n());
        let mut data = Vec::with_capacity(l * m * n);
        for b in 0..l {
            let beta = beta_node_extended::<T>(b, l);
            for a in 0..m {
                let alpha = quadrature_alpha_node::<T>(a, m);
                for g in 0..n {
                    data.push(f(alpha, beta, quadrature_gamma_node(g, n)));
                }
            }
        }
        Self { limits, data }
    }

    pub fn limits(&self) -> BandLimits {
        self.limits
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn get(&self, a: usize, b: usize, g: usize) -> Complex<T> {
        self.data[(b * self.limits.m() + a) * self.limits.n() + g]
    }
}

/// Integral over SO(3) of a function band-limited at `f.limits()`.
pub fn integrate<T: Real>(f: &QuadratureSamples<T>) -> Result<Complex<T>> {
    QuadratureWeights::new(f.limits)?.integrate(f)
}
