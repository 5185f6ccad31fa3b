//! Wigner d-functions: Risbo's recursion, the Δ-table at β = π/2 and the
//! Fourier-series evaluation built on it.
//!
//! Planes are stored densely with row `m' + ℓ` and column `m + ℓ`, so
//! `plane[(m' + ℓ) * (2ℓ + 1) + (m + ℓ)] = d^ℓ_{m'm}(β)`.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Result, So3Error};
use crate::scalar::{i_pow, Real};

/// Imaginary residue tolerated by [`d_via_fourier`] before the table is
/// declared defective.
pub const FOURIER_RESIDUE_TOL: f64 = 1e-10;

/// Full Δ storage is used below this band-limit, on-the-fly planes above.
pub const STORED_DELTA_LIMIT: usize = 1024;

#[inline]
pub(crate) fn plane_index(ell: usize, m_prime: i32, m: i32) -> usize {
    let dim = 2 * ell + 1;
    let l = ell as i64;
    ((m_prime as i64 + l) as usize) * dim + (m as i64 + l) as usize
}

/// `sqrt(k)` for `k` in `0..=len`.
fn sqrt_table<T: Real>(len: usize) -> Vec<T> {
    (0..=len).map(|k| T::of_usize(k).sqrt()).collect()
}

/// All `d^ℓ_{mn}(β)` for one β at the current recursion level ℓ.
#[derive(Clone, Debug)]
pub struct DBetaPlane<T> {
    ell_max: usize,
    beta: T,
    ell: usize,
    values: Vec<T>,
    half: Vec<T>,
    cos_half: T,
    sin_half: T,
    sqrt: Vec<T>,
}

impl<T: Real> DBetaPlane<T> {
    /// Seed plane at ℓ = 0 (`d⁰₀₀ = 1`). The recursion may advance up to
    /// `ell_max - 1`.
    pub fn new(ell_max: usize, beta: T) -> Result<Self> {
        if ell_max == 0 {
            return Err(So3Error::IndexOutOfRange {
                what: "ell_max",
                index: 0,
                lo: 1,
                hi: i64::MAX,
            });
        }
        let half_beta = beta / T::of(2.0);
        Ok(Self {
            ell_max,
            beta,
            ell: 0,
            values: vec![T::one()],
            half: Vec::new(),
            cos_half: half_beta.cos(),
            sin_half: half_beta.sin(),
            sqrt: sqrt_table(2 * ell_max),
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn ell_max(&self) -> usize {
        self.ell_max
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Dense `(2ℓ+1)²` plane, row `m'+ℓ`, column `m+ℓ`.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `d^ℓ_{m'm}(β)` at the current level.
    pub fn get(&self, m_prime: i32, m: i32) -> Result<T> {
        let l = self.ell as i64;
        for (what, v) in [("m'", m_prime), ("m", m)] {
            if (v as i64).abs() > l {
                return Err(So3Error::IndexOutOfRange {
                    what,
                    index: v as i64,
                    lo: -l,
                    hi: l,
                });
            }
        }
        Ok(self.values[plane_index(self.ell, m_prime, m)])
    }

    /// Advance to level ℓ + 1.
    pub fn step(&mut self) -> Result<()> {
        let next = self.ell + 1;
        d_recursion_step(self, next)
    }

    pub fn advance_to(&mut self, ell: usize) -> Result<()> {
        while self.ell < ell {
            self.step()?;
        }
        Ok(())
    }

    /// One half-integer step of Risbo's recursion: the `j × j` matrix of
    /// spin `(j-1)/2` in `src` becomes the `(j+1) × (j+1)` matrix of spin
    /// `j/2` in `dst`.
    fn half_step(src: &[T], dst: &mut Vec<T>, j: usize, sqrt: &[T], cos_half: T, sin_half: T) {
        let out = j + 1;
        dst.clear();
        dst.resize(out * out, T::zero());
        let jr = T::of_usize(j);
        let a = cos_half / jr;
        let b = sin_half / jr;
        for p in 0..j {
            let sp1 = sqrt[p + 1];
            let sjp = sqrt[j - p];
            let row = &src[p * j..(p + 1) * j];
            let (upper, lower) = dst.split_at_mut((p + 1) * out);
            let dst_p = &mut upper[p * out..];
            let dst_p1 = &mut lower[..out];
            for (q, &v) in row.iter().enumerate() {
                let sq1 = sqrt[q + 1];
                let sjq = sqrt[j - q];
                let av = a * v;
                let bv = b * v;
                dst_p1[q + 1] += sp1 * sq1 * av;
                dst_p[q + 1] += sjp * sq1 * bv;
                dst_p1[q] -= sp1 * sjq * bv;
                dst_p[q] += sjp * sjq * av;
            }
        }
    }
}

/// Risbo's ℓ−1 → ℓ−½ → ℓ update. `plane` must hold level `ell - 1`.
pub fn d_recursion_step<T: Real>(plane: &mut DBetaPlane<T>, ell: usize) -> Result<()> {
    if ell >= plane.ell_max {
        return Err(So3Error::IndexOutOfRange {
            what: "ℓ",
            index: ell as i64,
            lo: 1,
            hi: plane.ell_max as i64 - 1,
        });
    }
    if ell == 0 || plane.ell + 1 != ell {
        return Err(So3Error::IndexOutOfRange {
            what: "ℓ (recursion must advance one level at a time)",
            index: ell as i64,
            lo: plane.ell as i64 + 1,
            hi: plane.ell as i64 + 1,
        });
    }
    let j = 2 * ell - 1;
    let mut half = std::mem::take(&mut plane.half);
    DBetaPlane::half_step(&plane.values, &mut half, j, &plane.sqrt, plane.cos_half, plane.sin_half);
    DBetaPlane::half_step(
        &half,
        &mut plane.values,
        j + 1,
        &plane.sqrt,
        plane.cos_half,
        plane.sin_half,
    );
    plane.half = half;
    plane.ell = ell;
    if plane.values.iter().any(|v| !v.is_finite()) {
        return Err(So3Error::NonFinite { ell });
    }
    Ok(())
}

/// `Δ^ℓ_{m'm} = d^ℓ_{m'm}(π/2)` for every ℓ below `ell_max`.
#[derive(Clone, Debug)]
pub struct DeltaTable<T> {
    ell_max: usize,
    planes: Vec<Vec<T>>,
}

impl<T: Real> DeltaTable<T> {
    pub fn ell_max(&self) -> usize {
        self.ell_max
    }

    pub fn plane(&self, ell: usize) -> &[T] {
        &self.planes[ell]
    }

    /// `Δ^ℓ_{m'm}`; `None` outside the stored range.
    pub fn get(&self, ell: usize, m_prime: i32, m: i32) -> Option<T> {
        let l = ell as i32;
        if ell >= self.ell_max || m_prime.abs() > l || m.abs() > l {
            return None;
        }
        Some(self.planes[ell][plane_index(ell, m_prime, m)])
    }
}

/// Number of entries `Σ_{ℓ<ell_max} (2ℓ+1)²` a full table holds.
pub fn delta_table_entries(ell_max: usize) -> u128 {
    let l = ell_max as u128;
    l.checked_mul(l)
        .and_then(|sq| sq.checked_mul(4))
        .and_then(|q| q.checked_mul(l))
        .map_or(u128::MAX, |v| (v - l) / 3)
}

pub fn build_delta_table<T: Real>(ell_max: usize) -> Result<DeltaTable<T>> {
    if ell_max == 0 {
        return Err(So3Error::IndexOutOfRange {
            what: "ell_max",
            index: 0,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let entries = delta_table_entries(ell_max);
    let bytes = entries.saturating_mul(std::mem::size_of::<T>() as u128);
    if bytes > isize::MAX as u128 {
        return Err(So3Error::SizeTooLarge { ell_max, entries });
    }
    let mut planes: Vec<Vec<T>> = Vec::new();
    planes
        .try_reserve_exact(ell_max)
        .map_err(|_| So3Error::SizeTooLarge { ell_max, entries })?;
    let mut plane = DBetaPlane::new(ell_max, T::FRAC_PI_2())?;
    planes.push(plane.values().to_vec());
    for ell in 1..ell_max {
        plane.step()?;
        let mut stored = Vec::new();
        stored
            .try_reserve_exact(plane.values().len())
            .map_err(|_| So3Error::SizeTooLarge { ell_max, entries })?;
        stored.extend_from_slice(plane.values());
        debug_assert_eq!(plane.ell(), ell);
        planes.push(stored);
    }
    Ok(DeltaTable { ell_max, planes })
}

/// `d^ℓ_{mn}(β) = i^{n−m} Σ_{m'} Δ^ℓ_{m'm} Δ^ℓ_{m'n} e^{i m' β}`.
pub fn d_via_fourier<T: Real>(ell: usize, m: i32, n: i32, beta: T, delta: &DeltaTable<T>) -> Result<T> {
    if ell >= delta.ell_max() {
        return Err(So3Error::DeltaTooSmall {
            available: delta.ell_max(),
            required: ell + 1,
        });
    }
    let l = ell as i32;
    for (what, v) in [("m", m), ("n", n)] {
        if v.abs() > l {
            return Err(So3Error::IndexOutOfRange {
                what,
                index: v as i64,
                lo: -(l as i64),
                hi: l as i64,
            });
        }
    }
    let plane = delta.plane(ell);
    let mut sum = Complex::new(T::zero(), T::zero());
    for mp in -l..=l {
        let coeff = plane[plane_index(ell, mp, m)] * plane[plane_index(ell, mp, n)];
        let phase = T::of(mp as f64) * beta;
        sum += Complex::new(phase.cos(), phase.sin()) * coeff;
    }
    let value = i_pow::<T>((n - m) as i64) * sum;
    let residue = value.im.abs().to_f64().unwrap_or(f64::INFINITY);
    if residue >= FOURIER_RESIDUE_TOL {
        return Err(So3Error::ImaginaryResidue {
            what: "Fourier-series d-function",
            residue,
            tolerance: FOURIER_RESIDUE_TOL,
        });
    }
    Ok(value.re)
}

/// How a transform obtains its Δ planes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaMode {
    /// Precompute every plane once; O(L³) memory.
    Stored,
    /// Recompute planes by recursion during each sweep over ℓ.
    OnTheFly,
}

impl DeltaMode {
    pub fn default_for(l: usize) -> Self {
        if l < STORED_DELTA_LIMIT {
            DeltaMode::Stored
        } else {
            DeltaMode::OnTheFly
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum DeltaSource<T> {
    Stored(Arc<DeltaTable<T>>),
    OnTheFly,
}

impl<T: Real> DeltaSource<T> {
    /// Calls `f(ℓ, plane)` for ℓ = 0, 1, …, `ell_end - 1` in order.
    pub(crate) fn for_each_plane(&self, ell_end: usize, mut f: impl FnMut(usize, &[T])) -> Result<()> {
        match self {
            DeltaSource::Stored(table) => {
                for ell in 0..ell_end {
                    f(ell, table.plane(ell));
                }
            }
            DeltaSource::OnTheFly => {
                let mut plane = DBetaPlane::new(ell_end.max(1), T::FRAC_PI_2())?;
                for ell in 0..ell_end {
                    if ell > 0 {
                        plane.step()?;
                    }
                    f(ell, plane.values());
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss_legendre::gauss_legendre;
    use std::f64::consts::PI;

    /// Explicit finite-sum formula for d^j_{m'm}(β), valid for small ℓ.
    fn d_explicit(ell: i64, mp: i64, m: i64, beta: f64) -> f64 {
        let fact = |n: i64| (1..=n).fold(1.0f64, |acc, k| acc * k as f64);
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        let norm = (fact(ell + mp) * fact(ell - mp) * fact(ell + m) * fact(ell - m)).sqrt();
        let mut sum = 0.0;
        for k in 0..=2 * ell {
            let dens = [ell + m - k, k, mp - m + k, ell - mp - k];
            if dens.iter().any(|&d| d < 0) {
                continue;
            }
            let sign = if (mp - m + k) % 2 == 0 { 1.0 } else { -1.0 };
            let denom: f64 = dens.iter().map(|&d| fact(d)).product();
            sum += sign / denom * c.powi((2 * ell + m - mp - 2 * k) as i32) * s.powi((mp - m + 2 * k) as i32);
        }
        norm * sum
    }

    fn plane_at(ell: usize, beta: f64) -> DBetaPlane<f64> {
        let mut p = DBetaPlane::new(ell + 1, beta).unwrap();
        p.advance_to(ell).unwrap();
        p
    }

    #[test]
    fn seed_is_identity() {
        let p = DBetaPlane::new(3, 1.234f64).unwrap();
        assert_eq!(p.get(0, 0).unwrap(), 1.0);
    }

    #[test]
    fn level_one_matches_closed_form() {
        for &beta in &[0.0, 0.3, PI / 3.0, PI / 2.0, 2.5, PI] {
            let p = plane_at(1, beta);
            let (c, s) = (beta.cos(), beta.sin());
            let closed = [
                [(1.0 + c) / 2.0, -s / 2f64.sqrt(), (1.0 - c) / 2.0],
                [s / 2f64.sqrt(), c, -s / 2f64.sqrt()],
                [(1.0 - c) / 2.0, s / 2f64.sqrt(), (1.0 + c) / 2.0],
            ];
            // rows m' = 1, 0, -1; columns m = 1, 0, -1
            for (i, mp) in [1, 0, -1].into_iter().enumerate() {
                for (k, m) in [1, 0, -1].into_iter().enumerate() {
                    assert!((p.get(mp, m).unwrap() - closed[i][k]).abs() < 1e-15);
                }
            }
        }
        assert!((plane_at(1, PI / 2.0).get(1, 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn recursion_matches_explicit_formula() {
        for &beta in &[0.1, 0.7, 1.3, PI / 2.0, 2.2, 3.0] {
            let mut p = DBetaPlane::new(9, beta).unwrap();
            for ell in 0..9usize {
                if ell > 0 {
                    p.step().unwrap();
                }
                let l = ell as i32;
                for mp in -l..=l {
                    for m in -l..=l {
                        let want = d_explicit(ell as i64, mp as i64, m as i64, beta);
                        let got = p.get(mp, m).unwrap();
                        assert!(
                            (got - want).abs() < 1e-13,
                            "ℓ={ell} m'={mp} m={m} β={beta}: {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn endpoint_values() {
        for ell in [0usize, 1, 5, 17, 40] {
            let zero = plane_at(ell, 0.0);
            let pi = plane_at(ell, PI);
            let l = ell as i32;
            for m in -l..=l {
                for n in -l..=l {
                    let id = if m == n { 1.0 } else { 0.0 };
                    assert!((zero.get(m, n).unwrap() - id).abs() < 1e-14);
                    let flip = if m == -n {
                        if (ell as i32 + m) % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        }
                    } else {
                        0.0
                    };
                    assert!((pi.get(m, n).unwrap() - flip).abs() < 1e-13, "ℓ={ell} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn plane_symmetry_under_index_negation() {
        for ell in [3usize, 12, 31] {
            let p = plane_at(ell, 1.1);
            let l = ell as i32;
            for m in -l..=l {
                for n in -l..=l {
                    let s = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((p.get(m, n).unwrap() - s * p.get(-m, -n).unwrap()).abs() < 1e-12);
                }
            }
        }
    }

    // The transform contractions read plane rows in place of columns on the
    // strength of this identity.
    #[test]
    fn plane_symmetry_under_transpose() {
        for (ell, beta) in [(3usize, 0.3), (12, 1.1), (31, PI / 2.0)] {
            let p = plane_at(ell, beta);
            let l = ell as i32;
            for m in -l..=l {
                for n in -l..=l {
                    let s = if (m - n) % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((p.get(m, n).unwrap() - s * p.get(n, m).unwrap()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_ell_beyond_max_and_skipped_levels() {
        let mut p = DBetaPlane::new(2, 0.4f64).unwrap();
        assert!(d_recursion_step(&mut p, 2).is_err());
        p.step().unwrap();
        assert!(p.step().is_err());
        let mut q = DBetaPlane::new(5, 0.4f64).unwrap();
        assert!(d_recursion_step(&mut q, 3).is_err());
    }

    #[test]
    fn nan_beta_signals_instability() {
        let mut p = DBetaPlane::new(3, f64::NAN).unwrap();
        assert!(matches!(p.step(), Err(So3Error::NonFinite { ell: 1 })));
    }

    #[test]
    fn delta_table_examples() {
        let t = build_delta_table::<f64>(3).unwrap();
        assert_eq!(t.get(0, 0, 0), Some(1.0));
        assert!(t.get(1, 0, 0).unwrap().abs() < 1e-15);
        assert!((t.get(2, 0, 0).unwrap() + 0.5).abs() < 1e-15);
        assert_eq!(t.get(3, 0, 0), None);
        assert!(build_delta_table::<f64>(0).is_err());
    }

    #[test]
    fn delta_table_matches_direct_recursion_and_is_symmetric() {
        let t = build_delta_table::<f64>(40).unwrap();
        let direct = plane_at(39, PI / 2.0);
        for (a, b) in t.plane(39).iter().zip(direct.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        for ell in 0..40usize {
            let l = ell as i32;
            for mp in -l..=l {
                for m in -l..=l {
                    let s = if (mp + m) % 2 == 0 { 1.0 } else { -1.0 };
                    let lhs = t.get(ell, mp, m).unwrap();
                    let rhs = s * t.get(ell, -mp, -m).unwrap();
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn oversized_table_is_rejected_before_allocation() {
        let err = build_delta_table::<f64>(usize::MAX / 4).unwrap_err();
        assert!(matches!(err, So3Error::SizeTooLarge { .. }));
    }

    #[test]
    fn fourier_series_examples() {
        let t = build_delta_table::<f64>(9).unwrap();
        assert!((d_via_fourier(0, 0, 0, 2.1, &t).unwrap() - 1.0).abs() < 1e-15);
        assert!((d_via_fourier(1, 0, 0, PI / 3.0, &t).unwrap() - 0.5).abs() < 1e-15);
        assert!(d_via_fourier(9, 0, 0, 0.1, &t).is_err());
        assert!(d_via_fourier(2, 3, 0, 0.1, &t).is_err());
    }

    #[test]
    fn fourier_series_matches_recursion_small_ell() {
        let t = build_delta_table::<f64>(9).unwrap();
        for &beta in &[0.05, 0.9, 1.7, 2.9] {
            let mut p = DBetaPlane::new(9, beta).unwrap();
            for ell in 0..9usize {
                if ell > 0 {
                    p.step().unwrap();
                }
                let l = ell as i32;
                for m in -l..=l {
                    for n in -l..=l {
                        let f = d_via_fourier(ell, m, n, beta, &t).unwrap();
                        assert!((f - p.get(m, n).unwrap()).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_by_quadrature() {
        // ∫ d^ℓ_{mn} d^ℓ'_{mn} sin β dβ = 2/(2ℓ+1) δ_{ℓℓ'}
        let (x, w) = gauss_legendre(64);
        let planes: Vec<Vec<DBetaPlane<f64>>> = x
            .iter()
            .map(|&xi| {
                let beta = xi.acos();
                let mut p = DBetaPlane::new(8, beta).unwrap();
                let mut out = vec![p.clone()];
                for _ in 1..8 {
                    p.step().unwrap();
                    out.push(p.clone());
                }
                out
            })
            .collect();
        for m in -7i32..=7 {
            for n in -7i32..=7 {
                let lo = m.abs().max(n.abs()) as usize;
                for l1 in lo..8 {
                    for l2 in lo..8 {
                        let integral: f64 = planes
                            .iter()
                            .zip(&w)
                            .map(|(p, wi)| wi * p[l1].get(m, n).unwrap() * p[l2].get(m, n).unwrap())
                            .sum();
                        let scaled = (2 * l1 + 1) as f64 / 2.0 * integral;
                        let want = if l1 == l2 { 1.0 } else { 0.0 };
                        assert!((scaled - want).abs() < 1e-10, "ℓ={l1},{l2} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn on_the_fly_source_matches_stored() {
        let t = Arc::new(build_delta_table::<f64>(12).unwrap());
        let mut stored = Vec::new();
        DeltaSource::Stored(t)
            .for_each_plane(12, |_, p| stored.push(p.to_vec()))
            .unwrap();
        let mut fly = Vec::new();
        DeltaSource::<f64>::OnTheFly
            .for_each_plane(12, |_, p| fly.push(p.to_vec()))
            .unwrap();
        assert_eq!(stored, fly);
    }

    #[test]
    fn single_precision_recursion_runs() {
        let mut p = DBetaPlane::new(4, std::f32::consts::FRAC_PI_3).unwrap();
        p.advance_to(1).unwrap();
        assert!((p.get(0, 0).unwrap() - 0.5).abs() < 1e-6);
    }
}
