use num_complex::Complex;

use crate::error::Result;
use crate::fft::zero;
use crate::grid::{beta_node_extended, BandLimits, WignerCoeffs};
use crate::quadrature::{quadrature_alpha_node, quadrature_gamma_node, QuadratureSamples};
use crate::scalar::Real;
use crate::wigner_d::{plane_index, DBetaPlane};

/// Evaluates the signal with coefficients `fhat` on the quadrature grid of
/// `target`. Choose `target` at least as large as the band-limit of the
/// integrand, e.g. `2L-1` to integrate `|f|²`.
pub fn resample_quadrature<T: Real>(fhat: &WignerCoeffs<T>, target: BandLimits) -> Result<QuadratureSamples<T>> {
    let src = fhat.limits();
    let l = src.l();
    let mm = src.m() as i32 - 1;
    let nn = src.n() as i32 - 1;
    let (tm, tn) = (target.m(), target.n());
    let wm = 2 * mm as usize + 1;
    let eight_pi_sq = T::of(2.0) * T::two_pi() * T::two_pi();

    let alpha_phase: Vec<Complex<T>> = (-mm..=mm)
        .flat_map(|m| {
            (0..tm).map(move |a| {
                let ph = T::of_int(m as i64) * quadrature_alpha_node::<T>(a, tm);
                Complex::new(ph.cos(), ph.sin())
            })
        })
        .collect();
    let gamma_phase: Vec<Complex<T>> = (-nn..=nn)
        .flat_map(|n| {
            (0..tn).map(move |g| {
                let ph = T::of_int(n as i64) * quadrature_gamma_node::<T>(g, tn);
                Complex::new(ph.cos(), ph.sin())
            })
        })
        .collect();

    let mut data = Vec::with_capacity(target.l() * tm * tn);
    let mut ring = vec![zero::<T>(); wm * (2 * nn as usize + 1)];
    for b in 0..target.l() {
        // G_mn(β_b) = Σ_ℓ (2ℓ+1)/(8π²) f̂ℓmn d^ℓ_mn(β_b).
        ring.iter_mut().for_each(|z| *z = zero());
        let mut plane = DBetaPlane::new(l, beta_node_extended::<T>(b, target.l()))?;
        for ell in 0..l {
            plane.advance_to(ell)?;
            let norm = T::of_usize(2 * ell + 1) / eight_pi_sq;
            let (mt, nt) = (src.m_max_at(ell), src.n_max_at(ell));
            for n in -nt..=nt {
                for m in -mt..=mt {
                    let d = plane.values()[plane_index(ell, m, n)];
                    ring[(n + nn) as usize * wm + (m + mm) as usize] += fhat.get_unchecked(ell, m, n) * (norm * d);
                }
            }
        }
        for a in 0..tm {
            for g in 0..tn {
                let mut acc = zero::<T>();
                for n in -nn..=nn {
                    let pg = gamma_phase[(n + nn) as usize * tn + g];
                    for m in -mm..=mm {
                        acc += ring[(n + nn) as usize * wm + (m + mm) as usize]
                            * alpha_phase[(m + mm) as usize * tm + a]
                            * pg;
                    }
                }
                data.push(acc);
            }
        }
    }
    QuadratureSamples::from_vec(target, data)
}
