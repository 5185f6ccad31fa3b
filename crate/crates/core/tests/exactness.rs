//! End-to-end exactness through the public API on truncated band-limits.

use num_complex::Complex;
use so3::{BandLimits, NaivePlan, Reality, So3Samples, So3Transform, TransformPath, WignerCoeffs};

fn pseudo_random(limits: BandLimits, reality: Reality, seed: u64) -> WignerCoeffs<f64> {
    // A fixed linear congruential stream keeps this oracle independent of
    // the harness generator.
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let mut c = WignerCoeffs::zeros(limits, Reality::Complex);
    let keys: Vec<(usize, i32, i32)> = c.iter().map(|(l, m, n, _)| (l, m, n)).collect();
    for (ell, m, n) in keys {
        c.set(ell, m, n, Complex::new(next(), next())).unwrap();
    }
    if reality == Reality::Complex {
        return c;
    }
    // Impose f̂ℓ(-m)(-n) = (-1)^{m+n} conj(f̂ℓmn).
    let keys: Vec<(usize, i32, i32)> = c.iter().map(|(l, m, n, _)| (l, m, n)).collect();
    for (ell, m, n) in keys {
        if n > 0 || (n == 0 && m > 0) {
            let sign = if (m + n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let v = c.get(ell, m, n).unwrap().conj() * sign;
            c.set(ell, -m, -n, v).unwrap();
        } else if n == 0 && m == 0 {
            let v = c.get(ell, 0, 0).unwrap();
            c.set(ell, 0, 0, Complex::new(v.re, 0.0)).unwrap();
        }
    }
    c.to_real(0.0).unwrap()
}

#[test]
fn truncated_limits_round_trip_on_both_paths() {
    for (l, m, n) in [(9, 3, 2), (10, 10, 1), (7, 1, 7), (12, 5, 3), (6, 6, 6)] {
        let lim = BandLimits::new(l, m, n).unwrap();
        let t = So3Transform::<f64>::new(lim).unwrap();
        let c = pseudo_random(lim, Reality::Complex, l as u64);
        for path in [TransformPath::ThreeD, TransformPath::PerN] {
            let back = t.forward_with(path, &t.inverse_with(path, &c).unwrap()).unwrap();
            let err = back.max_abs_diff(&c).unwrap();
            assert!(err < 1e-12, "{lim} {path:?}: {err:e}");
        }
    }
}

#[test]
fn fast_paths_match_naive_on_truncated_limits() {
    for (l, m, n) in [(5, 2, 3), (6, 4, 1), (4, 4, 4)] {
        let lim = BandLimits::new(l, m, n).unwrap();
        let t = So3Transform::<f64>::new(lim).unwrap();
        let naive = NaivePlan::<f64>::new(lim).unwrap();
        let c = pseudo_random(lim, Reality::Complex, 99);
        let f = naive.inverse(&c).unwrap();
        for path in [TransformPath::ThreeD, TransformPath::PerN] {
            assert!(t.inverse_with(path, &c).unwrap().max_abs_diff(&f).unwrap() < 1e-12);
            assert!(t.forward_with(path, &f).unwrap().max_abs_diff(&c).unwrap() < 1e-12);
        }
    }
}

#[test]
fn real_signals_stay_real_and_round_trip() {
    for (l, m, n) in [(8, 8, 8), (16, 16, 4), (9, 4, 3)] {
        let lim = BandLimits::new(l, m, n).unwrap();
        let t = So3Transform::<f64>::new(lim).unwrap();
        let c = pseudo_random(lim, Reality::Real, 5);
        let f = t.inverse_real(&c).unwrap();
        assert_eq!(f.reality(), Reality::Real);
        let back = t.forward_real(&f).unwrap();
        assert!(back.max_abs_diff(&c).unwrap() < 1e-12, "{lim}");
        let complex = t.inverse(&c.to_complex()).unwrap();
        assert!(f.to_complex().max_abs_diff(&complex).unwrap() < 1e-12, "{lim}");
    }
}

#[test]
fn sampled_wigner_function_has_a_single_coefficient() {
    // f = D^2_{1,-1}*(α, β, γ) = e^{i(α - γ)} d^2_{1,-1}(β), with the closed
    // form d^2_{1,-1}(β) = (1 - cos β)(1 + 2 cos β)/2. It vanishes at β = 0
    // and equals (-1)^{ℓ+m} = -1 at β = π.
    let lim = BandLimits::cube(4).unwrap();
    let d = |b: f64| (1.0 - b.cos()) * (1.0 + 2.0 * b.cos()) / 2.0;
    let f = So3Samples::from_fn(lim, |a, b, g| Complex::new(0.0, a - g).exp() * d(b));
    let c = So3Transform::<f64>::new(lim).unwrap().forward(&f).unwrap();
    let norm = 8.0 * std::f64::consts::PI.powi(2) / 5.0;
    for (ell, m, n, v) in c.iter() {
        let expect = if (ell, m, n) == (2, 1, -1) { norm } else { 0.0 };
        assert!((v - Complex::new(expect, 0.0)).norm() < 1e-12, "({ell},{m},{n}) = {v}");
    }
}
