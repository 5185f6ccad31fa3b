//! Band-limits, the equiangular sampling grid, and flat storage layouts for
//! Wigner coefficients and samples.
//!
//! Samples are stored `g` fastest, then `a`, then `b`:
//! `index = (b * (2M-1) + a) * (2N-1) + g`.
//!
//! Coefficients are stored ℓ-major, then `n`, then `m`. For each ℓ the block
//! covers `|m| <= min(ℓ, M-1)` and `|n| <= min(ℓ, N-1)` (complex) or
//! `0 <= n <= min(ℓ, N-1)` (real, the `n < 0` half being implied by
//! conjugate symmetry).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Result, So3Error};
use crate::scalar::{parity_sign, Real};

/// Harmonic (`L`), azimuthal (`M`) and directional (`N`) band-limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BandLimits {
    l: usize,
    m: usize,
    n: usize,
}

impl BandLimits {
    pub fn new(l: usize, m: usize, n: usize) -> Result<Self> {
        if l == 0 || m == 0 || n == 0 || m > l || n > l {
            return Err(So3Error::InvalidBandLimits { l, m, n });
        }
        Ok(Self { l, m, n })
    }

    /// `L = M = N`.
    pub fn cube(l: usize) -> Result<Self> {
        Self::new(l, l, l)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest `|m|` present at degree ℓ.
    #[inline]
    pub fn m_max_at(&self, ell: usize) -> i32 {
        ell.min(self.m - 1) as i32
    }

    /// Largest `|n|` present at degree ℓ.
    #[inline]
    pub fn n_max_at(&self, ell: usize) -> i32 {
        ell.min(self.n - 1) as i32
    }

    /// Number of α nodes, `2M - 1`.
    pub fn alpha_len(&self) -> usize {
        2 * self.m - 1
    }

    /// Number of stored β rings, `L`.
    pub fn beta_len(&self) -> usize {
        self.l
    }

    /// Number of γ nodes, `2N - 1`.
    pub fn gamma_len(&self) -> usize {
        2 * self.n - 1
    }

    /// Stored grid size `(2M-1) L (2N-1)`.
    pub fn sample_len(&self) -> usize {
        self.alpha_len() * self.beta_len() * self.gamma_len()
    }
}

impl fmt::Display for BandLimits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L={} M={} N={}", self.l, self.m, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reality {
    Complex,
    Real,
}

impl Reality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reality::Complex => "complex",
            Reality::Real => "real",
        }
    }
}

impl fmt::Display for Reality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Reality {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "complex" => Ok(Reality::Complex),
            "real" => Ok(Reality::Real),
            other => Err(format!("unknown reality '{other}' (expected real or complex)")),
        }
    }
}

fn check_range(what: &'static str, index: i64, lo: i64, hi: i64) -> Result<()> {
    if index < lo || index > hi {
        return Err(So3Error::IndexOutOfRange { what, index, lo, hi });
    }
    Ok(())
}

/// `α_a = 2πa / (2M-1)`.
pub fn alpha_node<T: Real>(a: usize, m: usize) -> Result<T> {
    check_range("a", a as i64, 0, 2 * m as i64 - 2)?;
    Ok(T::two_pi() * T::of_usize(a) / T::of_usize(2 * m - 1))
}

/// `β_b = π(2b+1) / (2L-1)` for the stored rings `0 <= b < L`.
pub fn beta_node<T: Real>(b: usize, l: usize) -> Result<T> {
    check_range("b", b as i64, 0, l as i64 - 1)?;
    Ok(beta_node_extended(b, l))
}

/// β node on the periodically extended domain, `0 <= b <= 2L-2`.
#[inline]
pub(crate) fn beta_node_extended<T: Real>(b: usize, l: usize) -> T {
    T::PI() * T::of_usize(2 * b + 1) / T::of_usize(2 * l - 1)
}

/// `γ_g = 2πg / (2N-1)`.
pub fn gamma_node<T: Real>(g: usize, n: usize) -> Result<T> {
    check_range("g", g as i64, 0, 2 * n as i64 - 2)?;
    Ok(T::two_pi() * T::of_usize(g) / T::of_usize(2 * n - 1))
}

/// Minimal sample count `[(L-1)(2M-1)+1](2N-1)` of the sampling theorem;
/// the β = π ring is a single point in α.
pub fn theorem_sample_count(limits: BandLimits) -> u64 {
    let (l, m, n) = (limits.l as u64, limits.m as u64, limits.n as u64);
    ((l - 1) * (2 * m - 1) + 1) * (2 * n - 1)
}

/// Size of the regular grid actually stored, including the redundant
/// α samples on the β = π ring.
pub fn stored_sample_count(limits: BandLimits) -> usize {
    limits.sample_len()
}

/// `Σ_{ℓ<L} (2 min(ℓ,M-1) + 1)(2 min(ℓ,N-1) + 1)`.
pub fn coeff_count(limits: BandLimits) -> usize {
    (0..limits.l)
        .map(|ell| {
            let (mm, nn) = (limits.m_max_at(ell) as usize, limits.n_max_at(ell) as usize);
            (2 * mm + 1) * (2 * nn + 1)
        })
        .sum()
}

/// Flat coefficient layout for one reality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CoeffLayout {
    limits: BandLimits,
    reality: Reality,
    offsets: Vec<usize>,
}

impl CoeffLayout {
    pub(crate) fn new(limits: BandLimits, reality: Reality) -> Self {
        let mut offsets = Vec::with_capacity(limits.l + 1);
        let mut acc = 0;
        for ell in 0..limits.l {
            offsets.push(acc);
            acc += Self::block_len(limits, reality, ell);
        }
        offsets.push(acc);
        Self {
            limits,
            reality,
            offsets,
        }
    }

    fn block_len(limits: BandLimits, reality: Reality, ell: usize) -> usize {
        let (mm, nn) = (limits.m_max_at(ell) as usize, limits.n_max_at(ell) as usize);
        let rows = match reality {
            Reality::Complex => 2 * nn + 1,
            Reality::Real => nn + 1,
        };
        rows * (2 * mm + 1)
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets[self.limits.l]
    }

    pub(crate) fn lowest_n(&self, ell: usize) -> i32 {
        match self.reality {
            Reality::Complex => -self.limits.n_max_at(ell),
            Reality::Real => 0,
        }
    }

    /// Index of a stored `(ℓ, m, n)`; caller guarantees the ranges.
    #[inline]
    pub(crate) fn index(&self, ell: usize, m: i32, n: i32) -> usize {
        let mm = self.limits.m_max_at(ell);
        let row = (n - self.lowest_n(ell)) as usize;
        self.offsets[ell] + row * (2 * mm + 1) as usize + (m + mm) as usize
    }

    pub(crate) fn check(&self, ell: usize, m: i32, n: i32) -> Result<()> {
        check_range("ℓ", ell as i64, 0, self.limits.l as i64 - 1)?;
        let mm = self.limits.m_max_at(ell) as i64;
        let nn = self.limits.n_max_at(ell) as i64;
        check_range("m", m as i64, -mm, mm)?;
        check_range("n", n as i64, -nn, nn)
    }

    pub(crate) fn unindex(&self, index: usize) -> Result<(usize, i32, i32)> {
        check_range("coefficient index", index as i64, 0, self.len() as i64 - 1)?;
        let ell = self.offsets.partition_point(|&o| o <= index) - 1;
        let mm = self.limits.m_max_at(ell);
        let rel = index - self.offsets[ell];
        let width = (2 * mm + 1) as usize;
        let n = (rel / width) as i32 + self.lowest_n(ell);
        let m = (rel % width) as i32 - mm;
        Ok((ell, m, n))
    }

    /// Stored `(ℓ, m, n)` triples in storage order.
    pub(crate) fn triples(&self) -> impl Iterator<Item = (usize, i32, i32)> + '_ {
        (0..self.limits.l).flat_map(move |ell| {
            let mm = self.limits.m_max_at(ell);
            let nn = self.limits.n_max_at(ell);
            (self.lowest_n(ell)..=nn).flat_map(move |n| (-mm..=mm).map(move |m| (ell, m, n)))
        })
    }
}

/// Flat index of `(ℓ, m, n)` in the complex coefficient layout.
pub fn coeff_index(ell: usize, m: i32, n: i32, limits: BandLimits) -> Result<usize> {
    let layout = CoeffLayout::new(limits, Reality::Complex);
    layout.check(ell, m, n)?;
    Ok(layout.index(ell, m, n))
}

/// Inverse of [`coeff_index`].
pub fn coeff_from_index(index: usize, limits: BandLimits) -> Result<(usize, i32, i32)> {
    CoeffLayout::new(limits, Reality::Complex).unindex(index)
}

pub fn sample_index(a: usize, b: usize, g: usize, limits: BandLimits) -> Result<usize> {
    check_range("a", a as i64, 0, limits.alpha_len() as i64 - 1)?;
    check_range("b", b as i64, 0, limits.beta_len() as i64 - 1)?;
    check_range("g", g as i64, 0, limits.gamma_len() as i64 - 1)?;
    Ok((b * limits.alpha_len() + a) * limits.gamma_len() + g)
}

/// Inverse of [`sample_index`], returning `(a, b, g)`.
pub fn sample_from_index(index: usize, limits: BandLimits) -> Result<(usize, usize, usize)> {
    check_range("sample index", index as i64, 0, limits.sample_len() as i64 - 1)?;
    let g = index % limits.gamma_len();
    let rest = index / limits.gamma_len();
    Ok((rest % limits.alpha_len(), rest / limits.alpha_len(), g))
}

/// Wigner coefficients `f̂ℓmn` of a band-limited signal.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerCoeffs<T> {
    layout: CoeffLayout,
    data: Vec<Complex<T>>,
}

impl<T: Real> WignerCoeffs<T> {
    pub fn zeros(limits: BandLimits, reality: Reality) -> Self {
        let layout = CoeffLayout::new(limits, reality);
        let data = vec![Complex::new(T::zero(), T::zero()); layout.len()];
        Self { layout, data }
    }

    /// Wraps stored data; `data` must follow the layout of `reality`.
    pub fn from_vec(limits: BandLimits, reality: Reality, data: Vec<Complex<T>>) -> Result<Self> {
        let layout = CoeffLayout::new(limits, reality);
        if data.len() != layout.len() {
            return Err(So3Error::ShapeMismatch {
                expected: format!("{} {reality} coefficients for {limits}", layout.len()),
                found: format!("{}", data.len()),
            });
        }
        Ok(Self { layout, data })
    }

    /// Complex coefficients with a single unit entry.
    pub fn impulse(limits: BandLimits, ell: usize, m: i32, n: i32) -> Result<Self> {
        let mut c = Self::zeros(limits, Reality::Complex);
        c.set(ell, m, n, Complex::new(T::one(), T::zero()))?;
        Ok(c)
    }

    pub fn limits(&self) -> BandLimits {
        self.layout.limits
    }

    pub fn reality(&self) -> Reality {
        self.layout.reality
    }

    /// Stored entries; the `n >= 0` half for real signals.
    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub(crate) fn layout(&self) -> &CoeffLayout {
        &self.layout
    }

    /// `f̂ℓmn`, reconstructing the `n < 0` half of real signals.
    pub fn get(&self, ell: usize, m: i32, n: i32) -> Result<Complex<T>> {
        self.layout.check(ell, m, n)?;
        Ok(self.get_unchecked(ell, m, n))
    }

    #[inline]
    pub(crate) fn get_unchecked(&self, ell: usize, m: i32, n: i32) -> Complex<T> {
        if self.layout.reality == Reality::Real && n < 0 {
            let mirror = self.data[self.layout.index(ell, -m, -n)];
            mirror.conj() * parity_sign::<T>((m + n) as i64)
        } else {
            self.data[self.layout.index(ell, m, n)]
        }
    }

    /// Sets `f̂ℓmn`. For real signals an `n < 0` entry is written through
    /// its stored mirror.
    pub fn set(&mut self, ell: usize, m: i32, n: i32, value: Complex<T>) -> Result<()> {
        self.layout.check(ell, m, n)?;
        if self.layout.reality == Reality::Real && n < 0 {
            let idx = self.layout.index(ell, -m, -n);
            self.data[idx] = value.conj() * parity_sign::<T>((m + n) as i64);
        } else {
            let idx = self.layout.index(ell, m, n);
            self.data[idx] = value;
        }
        Ok(())
    }

    /// Stored `(ℓ, m, n, f̂ℓmn)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i32, i32, Complex<T>)> + '_ {
        self.layout
            .triples()
            .zip(self.data.iter())
            .map(|((ell, m, n), &v)| (ell, m, n, v))
    }

    /// Every `(ℓ, m, n)` of the band-limited index set with its value.
    pub fn iter_full(&self) -> impl Iterator<Item = (usize, i32, i32, Complex<T>)> + '_ {
        let full = CoeffLayout::new(self.limits(), Reality::Complex);
        let triples: Vec<_> = full.triples().collect();
        triples
            .into_iter()
            .map(move |(ell, m, n)| (ell, m, n, self.get_unchecked(ell, m, n)))
    }

    pub fn to_complex(&self) -> Self {
        match self.reality() {
            Reality::Complex => self.clone(),
            Reality::Real => {
                let mut out = Self::zeros(self.limits(), Reality::Complex);
                for (ell, m, n, v) in self.iter_full() {
                    let idx = out.layout.index(ell, m, n);
                    out.data[idx] = v;
                }
                out
            }
        }
    }

    /// Largest violation of `f̂ℓmn = (-1)^{m+n} conj(f̂ℓ(-m)(-n))` over the
    /// stored entries.
    pub fn symmetry_residual(&self) -> T {
        let mut worst = T::zero();
        for (ell, m, n, v) in self.iter() {
            let mirror = self.get_unchecked(ell, -m, -n);
            let r = (v - mirror.conj() * parity_sign::<T>((m + n) as i64)).norm();
            worst = worst.max(r);
        }
        worst
    }

    /// Half-storage form after checking conjugate symmetry to `tolerance`.
    pub fn to_real(&self, tolerance: f64) -> Result<Self> {
        let residual = self.symmetry_residual().to_f64().unwrap_or(f64::INFINITY);
        if residual > tolerance {
            return Err(So3Error::SymmetryViolation { residual, tolerance });
        }
        if self.reality() == Reality::Real {
            return Ok(self.clone());
        }
        let mut out = Self::zeros(self.limits(), Reality::Real);
        for (ell, m, n, v) in self.iter() {
            if n >= 0 {
                let idx = out.layout.index(ell, m, n);
                out.data[idx] = v;
            }
        }
        Ok(out)
    }

    /// Maximum absolute difference over the full index set.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.limits() != other.limits() {
            return Err(So3Error::ShapeMismatch {
                expected: self.limits().to_string(),
                found: other.limits().to_string(),
            });
        }
        Ok(self
            .iter_full()
            .map(|(ell, m, n, v)| (v - other.get_unchecked(ell, m, n)).norm())
            .fold(T::zero(), T::max))
    }
}

/// Sample values, complex or real-typed.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleData<T> {
    Complex(Vec<Complex<T>>),
    Real(Vec<T>),
}

/// Signal samples on the sampling-theorem grid.
#[derive(Clone, Debug, PartialEq)]
pub struct So3Samples<T> {
    limits: BandLimits,
    data: SampleData<T>,
}

impl<T: Real> So3Samples<T> {
    pub fn zeros(limits: BandLimits, reality: Reality) -> Self {
        let len = limits.sample_len();
        let data = match reality {
            Reality::Complex => SampleData::Complex(vec![Complex::new(T::zero(), T::zero()); len]),
            Reality::Real => SampleData::Real(vec![T::zero(); len]),
        };
        Self { limits, data }
    }

    fn check_len(limits: BandLimits, len: usize) -> Result<()> {
        if len != limits.sample_len() {
            return Err(So3Error::ShapeMismatch {
                expected: format!("{} samples for {limits}", limits.sample_len()),
                found: format!("{len}"),
            });
        }
        Ok(())
    }

    pub fn from_complex(limits: BandLimits, data: Vec<Complex<T>>) -> Result<Self> {
        Self::check_len(limits, data.len())?;
        Ok(Self {
            limits,
            data: SampleData::Complex(data),
        })
    }

    pub fn from_real(limits: BandLimits, data: Vec<T>) -> Result<Self> {
        Self::check_len(limits, data.len())?;
        Ok(Self {
            limits,
            data: SampleData::Real(data),
        })
    }

    /// Samples `f(α_a, β_b, γ_g)` over the grid.
    pub fn from_fn(limits: BandLimits, f: impl Fn(T, T, T) -> Complex<T>) -> Self {
        let data = Self::grid_points(limits).map(|(al, be, ga)| f(al, be, ga)).collect();
        Self {
            limits,
            data: SampleData::Complex(data),
        }
    }

    pub fn from_real_fn(limits: BandLimits, f: impl Fn(T, T, T) -> T) -> Self {
        let data = Self::grid_points(limits).map(|(al, be, ga)| f(al, be, ga)).collect();
        Self {
            limits,
            data: SampleData::Real(data),
        }
    }

    /// `(α, β, γ)` in storage order.
    pub fn grid_points(limits: BandLimits) -> impl Iterator<Item = (T, T, T)> {
        let alphas: Vec<T> = (0..limits.alpha_len())
            .map(|a| alpha_node(a, limits.m).unwrap())
            .collect();
        let gammas: Vec<T> = (0..limits.gamma_len())
            .map(|g| gamma_node(g, limits.n).unwrap())
            .collect();
        (0..limits.beta_len()).flat_map(move |b| {
            let beta = beta_node_extended::<T>(b, limits.l);
            let alphas = alphas.clone();
            let gammas = gammas.clone();
            (0..alphas.len()).flat_map(move |a| {
                let al = alphas[a];
                gammas.clone().into_iter().map(move |ga| (al, beta, ga))
            })
        })
    }

    pub fn limits(&self) -> BandLimits {
        self.limits
    }

    pub fn reality(&self) -> Reality {
        match self.data {
            SampleData::Complex(_) => Reality::Complex,
            SampleData::Real(_) => Reality::Real,
        }
    }

    pub fn data(&self) -> &SampleData<T> {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.limits.sample_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_complex(&self) -> Option<&[Complex<T>]> {
        match &self.data {
            SampleData::Complex(v) => Some(v),
            SampleData::Real(_) => None,
        }
    }

    pub fn as_real(&self) -> Option<&[T]> {
        match &self.data {
            SampleData::Real(v) => Some(v),
            SampleData::Complex(_) => None,
        }
    }

    #[inline]
    pub(crate) fn value_at(&self, index: usize) -> Complex<T> {
        match &self.data {
            SampleData::Complex(v) => v[index],
            SampleData::Real(v) => Complex::new(v[index], T::zero()),
        }
    }

    pub fn get(&self, a: usize, b: usize, g: usize) -> Result<Complex<T>> {
        Ok(self.value_at(sample_index(a, b, g, self.limits)?))
    }

    pub fn to_complex(&self) -> Self {
        let data = (0..self.len()).map(|i| self.value_at(i)).collect();
        Self {
            limits: self.limits,
            data: SampleData::Complex(data),
        }
    }

    /// Real-typed copy after checking every imaginary part is within
    /// `tolerance`.
    pub fn to_real(&self, tolerance: f64) -> Result<Self> {
        match &self.data {
            SampleData::Real(_) => Ok(self.clone()),
            SampleData::Complex(v) => {
                let residue = v.iter().map(|z| z.im.abs()).fold(T::zero(), T::max);
                let residue = residue.to_f64().unwrap_or(f64::INFINITY);
                if residue > tolerance {
                    return Err(So3Error::ImaginaryResidue {
                        what: "real sample conversion",
                        residue,
                        tolerance,
                    });
                }
                Ok(Self {
                    limits: self.limits,
                    data: SampleData::Real(v.iter().map(|z| z.re).collect()),
                })
            }
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.limits != other.limits {
            return Err(So3Error::ShapeMismatch {
                expected: self.limits.to_string(),
                found: other.limits.to_string(),
            });
        }
        Ok((0..self.len())
            .map(|i| (self.value_at(i) - other.value_at(i)).norm())
            .fold(T::zero(), T::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn bl(l: usize, m: usize, n: usize) -> BandLimits {
        BandLimits::new(l, m, n).unwrap()
    }

    #[test]
    fn band_limit_validation() {
        assert!(BandLimits::new(4, 4, 4).is_ok());
        assert!(BandLimits::new(4, 5, 1).is_err());
        assert!(BandLimits::new(4, 1, 0).is_err());
        assert!(BandLimits::new(0, 1, 1).is_err());
    }

    #[test]
    fn node_examples() {
        assert_eq!(alpha_node::<f64>(0, 4).unwrap(), 0.0);
        assert!((alpha_node::<f64>(1, 2).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((alpha_node::<f64>(4, 3).unwrap() - 8.0 * PI / 5.0).abs() < 1e-15);
        assert!(alpha_node::<f64>(5, 3).is_err());

        assert!((beta_node::<f64>(0, 2).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((beta_node::<f64>(6, 7).unwrap() - PI).abs() < 1e-15);
        assert!((beta_node::<f64>(1, 3).unwrap() - 3.0 * PI / 5.0).abs() < 1e-15);
        assert!(beta_node::<f64>(3, 3).is_err());

        assert_eq!(gamma_node::<f64>(0, 1).unwrap(), 0.0);
        assert!(gamma_node::<f64>(1, 1).is_err());
        assert!((gamma_node::<f64>(3, 4).unwrap() - 6.0 * PI / 7.0).abs() < 1e-15);
    }

    #[test]
    fn nodes_are_strictly_increasing() {
        let lim = bl(9, 6, 4);
        let a: Vec<f64> = (0..lim.alpha_len()).map(|a| alpha_node(a, 6).unwrap()).collect();
        let b: Vec<f64> = (0..lim.beta_len()).map(|b| beta_node(b, 9).unwrap()).collect();
        let g: Vec<f64> = (0..lim.gamma_len()).map(|g| gamma_node(g, 4).unwrap()).collect();
        for v in [a, b, g] {
            assert!(v.windows(2).all(|w| w[0] < w[1]));
            assert!(v[0] >= 0.0);
        }
    }

    #[test]
    fn sample_count_examples() {
        assert_eq!(theorem_sample_count(bl(1, 1, 1)), 1);
        assert_eq!(theorem_sample_count(bl(2, 2, 2)), 12);
        assert_eq!(theorem_sample_count(bl(4, 4, 4)), 154);
        let ratio = theorem_sample_count(bl(64, 64, 64)) as f64 / (4.0 * 64f64.powi(3));
        assert!((0.95..=1.0).contains(&ratio), "{ratio}");
        for l in 1..20 {
            let lim = bl(l, l, l);
            assert!(stored_sample_count(lim) as u64 > theorem_sample_count(lim) || l == 1);
        }
    }

    #[test]
    fn stored_grid_exceeds_minimal_count_unless_alpha_is_trivial() {
        for l in 2..12 {
            for m in 1..=l {
                for n in 1..=l {
                    let lim = bl(l, m, n);
                    let (stored, minimal) = (stored_sample_count(lim) as u64, theorem_sample_count(lim));
                    if m == 1 {
                        assert_eq!(stored, minimal);
                    } else {
                        assert!(stored > minimal);
                    }
                }
            }
        }
    }

    #[test]
    fn coeff_count_examples() {
        assert_eq!(coeff_count(bl(1, 1, 1)), 1);
        assert_eq!(coeff_count(bl(2, 2, 2)), 10);
        assert_eq!(coeff_count(bl(4, 2, 1)), 10);
        for l in 1..30 {
            assert_eq!(coeff_count(bl(l, l, l)), l * (4 * l * l - 1) / 3);
        }
    }

    #[test]
    fn coeff_index_is_a_bijection() {
        let lim = bl(5, 5, 5);
        assert_eq!(coeff_index(0, 0, 0, lim).unwrap(), 0);
        assert_eq!(coeff_index(4, 4, 4, lim).unwrap(), coeff_count(lim) - 1);
        let mut seen = vec![false; coeff_count(lim)];
        for ell in 0..5usize {
            let l = ell as i32;
            for n in -l..=l {
                for m in -l..=l {
                    let i = coeff_index(ell, m, n, lim).unwrap();
                    assert!(!seen[i]);
                    seen[i] = true;
                    assert_eq!(coeff_from_index(i, lim).unwrap(), (ell, m, n));
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert!(coeff_index(2, 3, 0, lim).is_err());
        assert!(coeff_index(5, 0, 0, lim).is_err());
        assert!(coeff_from_index(coeff_count(lim), lim).is_err());
    }

    #[test]
    fn truncated_coeff_index_last_element() {
        let lim = bl(6, 3, 2);
        assert_eq!(coeff_index(5, 2, 1, lim).unwrap(), coeff_count(lim) - 1);
        assert!(coeff_index(5, 3, 0, lim).is_err());
        assert!(coeff_index(5, 0, 2, lim).is_err());
    }

    #[test]
    fn sample_index_round_trip() {
        let lim = bl(4, 3, 2);
        assert_eq!(sample_index(0, 0, 0, lim).unwrap(), 0);
        for i in 0..lim.sample_len() {
            let (a, b, g) = sample_from_index(i, lim).unwrap();
            assert_eq!(sample_index(a, b, g, lim).unwrap(), i);
        }
        assert_eq!(sample_index(0, 0, 1, lim).unwrap(), 1);
        assert_eq!(sample_index(1, 0, 0, lim).unwrap(), 3);
        assert_eq!(sample_index(0, 1, 0, lim).unwrap(), 15);
        assert!(sample_index(5, 0, 0, lim).is_err());
    }

    #[test]
    fn real_coefficients_reconstruct_negative_n() {
        let lim = bl(3, 3, 3);
        let mut c = WignerCoeffs::<f64>::zeros(lim, Reality::Real);
        assert_eq!(c.data().len(), 1 + 3 * 2 + 5 * 3);
        c.set(2, 1, 1, Complex::new(0.5, -0.25)).unwrap();
        // (−1)^{m+n} conj
        assert_eq!(c.get(2, -1, -1).unwrap(), Complex::new(0.5, 0.25));
        c.set(2, 1, -2, Complex::new(1.0, 2.0)).unwrap();
        assert_eq!(c.get(2, -1, 2).unwrap(), Complex::new(-1.0, 2.0));
        let full = c.to_complex();
        assert!(full.symmetry_residual() < 1e-15);
        assert_eq!(
            full.to_real(1e-12).unwrap().get(2, 1, 1).unwrap(),
            Complex::new(0.5, -0.25)
        );
    }

    #[test]
    fn asymmetric_coefficients_refuse_real_conversion() {
        let lim = bl(2, 2, 2);
        let c = WignerCoeffs::<f64>::impulse(lim, 1, 1, 0).unwrap();
        assert!(matches!(c.to_real(1e-10), Err(So3Error::SymmetryViolation { .. })));
    }

    #[test]
    fn samples_shape_is_checked() {
        let lim = bl(2, 2, 2);
        assert!(So3Samples::<f64>::from_real(lim, vec![0.0; 17]).is_err());
        let s = So3Samples::<f64>::from_real_fn(lim, |_, b, _| b);
        assert_eq!(s.len(), 18);
        assert!((s.get(0, 1, 0).unwrap().re - PI).abs() < 1e-15);
        let c = s.to_complex();
        assert_eq!(c.to_real(0.0).unwrap(), s);
    }
}
