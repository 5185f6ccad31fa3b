//! Round-trip accuracy, timing scaling and quadrature experiments.
//!
//! Random coefficients come from `ChaCha8Rng` seeded with the run seed; trial
//! `k` draws from stream `k`, so error columns are reproducible across
//! platforms and independent of the number of trials.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use so3::quadrature::{QuadratureSamples, QuadratureWeights};
use so3::{
    resample_quadrature, BandLimits, DBetaPlane, NaivePlan, Reality, So3Samples, So3Transform, TransformOptions,
    TransformPath, WignerCoeffs,
};

/// Timings per direction are the minimum over this many repetitions.
pub const TIMING_REPEATS: usize = 3;

/// Algorithm exercised by a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    ThreeD,
    PerN,
    Naive,
    /// Whatever the fast plan picks for the limits.
    Default,
}

impl Path {
    pub fn as_str(&self) -> &'static str {
        match self {
            Path::ThreeD => "3d",
            Path::PerN => "per-n",
            Path::Naive => "naive",
            Path::Default => "default",
        }
    }

    /// The path that actually runs for `limits`.
    pub fn resolve(self, limits: BandLimits) -> Path {
        match self {
            Path::Default => {
                if 4 * limits.n() <= limits.l() {
                    Path::PerN
                } else {
                    Path::ThreeD
                }
            }
            other => other,
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Path {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3d" => Ok(Path::ThreeD),
            "per-n" => Ok(Path::PerN),
            "naive" => Ok(Path::Naive),
            "default" => Ok(Path::Default),
            other => Err(format!("unknown path '{other}' (expected 3d, per-n, naive or default)")),
        }
    }
}

/// One CSV row. Column order is fixed by field order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub reality: String,
    /// Resolved path, suffixed `+par` when internal parallelism was on.
    pub path: String,
    pub max_abs_error: f64,
    pub forward_s: f64,
    pub inverse_s: f64,
    pub seed: u64,
    pub trials: usize,
}

impl RunReport {
    pub fn total_s(&self) -> f64 {
        self.forward_s + self.inverse_s
    }
}

/// Uniform coefficients with real and imaginary parts in `[-1, 1]` from
/// stream `stream` of the generator seeded with `seed`. Real output draws
/// the `n >= 0` half (and `m >= 0` on `n = 0`) and reflects the rest.
pub fn random_coeffs_stream(limits: BandLimits, seed: u64, stream: u64, reality: Reality) -> WignerCoeffs<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut c = WignerCoeffs::zeros(limits, reality);
    let triples: Vec<(usize, i32, i32)> = c.iter().map(|(ell, m, n, _)| (ell, m, n)).collect();
    for (slot, &(ell, m, n)) in triples.iter().enumerate() {
        if reality == Reality::Real && n == 0 && m < 0 {
            continue;
        }
        let re = rng.random_range(-1.0..=1.0);
        let im = if reality == Reality::Real && n == 0 && m == 0 {
            0.0
        } else {
            rng.random_range(-1.0..=1.0)
        };
        c.data_mut()[slot] = Complex::new(re, im);
        if reality == Reality::Real && n == 0 && m > 0 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            c.set(ell, -m, 0, Complex::new(re, -im) * sign)
                .expect("mirror index is in range");
        }
    }
    c
}

pub fn random_coeffs(limits: BandLimits, seed: u64, reality: Reality) -> WignerCoeffs<f64> {
    random_coeffs_stream(limits, seed, 0, reality)
}

#[derive(Clone, Copy, Debug)]
pub struct RoundtripConfig {
    pub limits: BandLimits,
    pub seed: u64,
    pub reality: Reality,
    pub path: Path,
    pub trials: usize,
    pub parallel: bool,
    /// Lifts the naive soft cap.
    pub allow_large_naive: bool,
}

impl RoundtripConfig {
    pub fn new(limits: BandLimits, reality: Reality, path: Path) -> Self {
        Self {
            limits,
            seed: 0,
            reality,
            path,
            trials: 1,
            parallel: false,
            allow_large_naive: false,
        }
    }
}

/// A prepared fast or naive plan.
enum Engine {
    Fast(So3Transform<f64>, TransformPath),
    Naive(NaivePlan<f64>),
}

impl Engine {
    fn new(cfg: &RoundtripConfig) -> so3::Result<Self> {
        let path = cfg.path.resolve(cfg.limits);
        Ok(match path {
            Path::Naive => Engine::Naive(NaivePlan::with_cap_override(cfg.limits, cfg.allow_large_naive)?),
            _ => {
                let opts = TransformOptions {
                    parallel: cfg.parallel,
                    ..TransformOptions::for_limits(cfg.limits)
                };
                let tp = if path == Path::PerN {
                    TransformPath::PerN
                } else {
                    TransformPath::ThreeD
                };
                Engine::Fast(So3Transform::with_options(cfg.limits, opts)?, tp)
            }
        })
    }

    fn inverse(&self, c: &WignerCoeffs<f64>) -> so3::Result<So3Samples<f64>> {
        match self {
            Engine::Fast(t, p) => t.inverse_with(*p, c),
            Engine::Naive(n) => n.inverse(c),
        }
    }

    fn forward(&self, f: &So3Samples<f64>) -> so3::Result<WignerCoeffs<f64>> {
        match self {
            Engine::Fast(t, p) => t.forward_with(*p, f),
            Engine::Naive(n) => n.forward(f),
        }
    }
}

fn min_time<R>(repeats: usize, mut f: impl FnMut() -> so3::Result<R>) -> so3::Result<(R, f64)> {
    let mut best = f64::INFINITY;
    let mut out = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let r = f()?;
        best = best.min(start.elapsed().as_secs_f64());
        out = Some(r);
    }
    Ok((out.expect("at least one repetition"), best))
}

/// Inverse then forward transform of `trials` random coefficient sets.
/// Error is the maximum over trials; times are per-trial minima of
/// [`TIMING_REPEATS`] runs, averaged over trials.
pub fn roundtrip(cfg: &RoundtripConfig) -> so3::Result<RunReport> {
    let trials = cfg.trials.max(1);
    let engine = Engine::new(cfg)?;
    let (mut err, mut fwd, mut inv) = (0.0f64, 0.0, 0.0);
    for trial in 0..trials {
        let c = random_coeffs_stream(cfg.limits, cfg.seed, trial as u64, cfg.reality);
        let (f, ti) = min_time(TIMING_REPEATS, || engine.inverse(&c))?;
        let (back, tf) = min_time(TIMING_REPEATS, || engine.forward(&f))?;
        err = err.max(back.max_abs_diff(&c)?);
        fwd += tf;
        inv += ti;
    }
    let mut path = cfg.path.resolve(cfg.limits).as_str().to_string();
    if cfg.parallel && cfg.path != Path::Naive {
        path.push_str("+par");
    }
    Ok(RunReport {
        l: cfg.limits.l(),
        m: cfg.limits.m(),
        n: cfg.limits.n(),
        reality: cfg.reality.to_string(),
        path,
        max_abs_error: err,
        forward_s: fwd / trials as f64,
        inverse_s: inv / trials as f64,
        seed: cfg.seed,
        trials,
    })
}

/// How `N` follows `L` in a scaling run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NMode {
    Equal,
    Fixed(usize),
}

impl FromStr for NMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "equal" {
            return Ok(NMode::Equal);
        }
        s.parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .map(NMode::Fixed)
            .ok_or_else(|| format!("invalid N mode '{s}' (expected 'equal' or a positive integer)"))
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub l_list: Vec<usize>,
    pub n_mode: NMode,
    pub reality: Reality,
    pub path: Path,
    pub seed: u64,
    pub trials: usize,
    pub parallel: bool,
}

#[derive(Clone, Debug)]
pub struct BenchResult {
    pub reports: Vec<RunReport>,
    /// `(L, 2L, time(2L)/time(L))` for consecutive entries of the list,
    /// using forward plus inverse time.
    pub ratios: Vec<(usize, usize, f64)>,
}

/// Round trips at every `L` of an ascending list of powers of two, with
/// `M = L`.
pub fn bench_scaling(cfg: &BenchConfig) -> so3::Result<BenchResult> {
    for w in cfg.l_list.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(so3::So3Error::ShapeMismatch {
                expected: "ascending powers of two".into(),
                found: format!("{} followed by {}", w[0], w[1]),
            });
        }
    }
    let mut reports = Vec::new();
    for &l in &cfg.l_list {
        let n = match cfg.n_mode {
            NMode::Equal => l,
            NMode::Fixed(n) => n,
        };
        let limits = BandLimits::new(l, l, n)?;
        let rc = RoundtripConfig {
            limits,
            seed: cfg.seed,
            reality: cfg.reality,
            path: cfg.path,
            trials: cfg.trials,
            parallel: cfg.parallel,
            allow_large_naive: false,
        };
        reports.push(roundtrip(&rc)?);
    }
    let ratios = reports
        .windows(2)
        .map(|w| (w[0].l, w[1].l, w[1].total_s() / w[0].total_s()))
        .collect();
    Ok(BenchResult { reports, ratios })
}

pub fn write_csv<W: Write>(w: W, reports: &[RunReport]) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    for r in reports {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

/// Two whitespace-separated columns, `L seconds`, one row per report.
pub fn write_dat<W: Write>(mut w: W, reports: &[RunReport]) -> std::io::Result<()> {
    writeln!(w, "# L seconds")?;
    for r in reports {
        writeln!(w, "{} {:.6e}", r.l, r.total_s())?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureReport {
    pub limits: BandLimits,
    pub seed: u64,
    /// Relative error of the integral of `f ≡ 1` against `8π²`.
    pub constant_rel_error: f64,
    /// Relative error of the integral of a random band-limited signal
    /// against its `f̂⁰₀₀`.
    pub random_rel_error: f64,
    /// Largest `|∫ D^ℓ*_mn|` over `0 < ℓ < min(L, 8)`.
    pub wigner_max_abs: f64,
}

pub fn quadrature_check(limits: BandLimits, seed: u64) -> so3::Result<QuadratureReport> {
    let weights = QuadratureWeights::<f64>::new(limits)?;
    let eight_pi_sq = 8.0 * PI * PI;

    let ones = QuadratureSamples::from_fn(limits, |_, _, _| Complex::new(1.0, 0.0));
    let constant_rel_error = (weights.integrate(&ones)? - Complex::new(eight_pi_sq, 0.0)).norm() / eight_pi_sq;

    let c = random_coeffs(limits, seed, Reality::Complex);
    let samples = resample_quadrature(&c, limits)?;
    let f00 = c.get(0, 0, 0)?;
    let random_rel_error = (weights.integrate(&samples)? - f00).norm() / f00.norm();

    // d^ℓ_mn(β_b) for every ring and ℓ < min(L, 8).
    let top = limits.l().min(8);
    let mut rings: Vec<Vec<Vec<f64>>> = Vec::with_capacity(limits.l());
    for b in 0..limits.l() {
        let mut plane = DBetaPlane::new(top, so3::beta_node(b, limits.l())?)?;
        let mut levels = vec![plane.values().to_vec()];
        for _ in 1..top {
            plane.step()?;
            levels.push(plane.values().to_vec());
        }
        rings.push(levels);
    }
    let mut wigner_max_abs = 0.0f64;
    for (ell, m, n, _) in c.iter() {
        if ell == 0 || ell >= top {
            continue;
        }
        let dim = 2 * ell + 1;
        let at = (m + ell as i32) as usize * dim + (n + ell as i32) as usize;
        let mut data = Vec::with_capacity(limits.l() * limits.m() * limits.n());
        for ring in &rings {
            let d = ring[ell][at];
            for a in 0..limits.m() {
                let alpha = so3::quadrature::quadrature_alpha_node::<f64>(a, limits.m());
                for g in 0..limits.n() {
                    let gamma = so3::quadrature::quadrature_gamma_node::<f64>(g, limits.n());
                    data.push(Complex::new(0.0, m as f64 * alpha + n as f64 * gamma).exp() * d);
                }
            }
        }
        let f = QuadratureSamples::from_vec(limits, data)?;
        wigner_max_abs = wigner_max_abs.max(weights.integrate(&f)?.norm());
    }
    Ok(QuadratureReport {
        limits,
        seed,
        constant_rel_error,
        random_rel_error,
        wigner_max_abs,
    })
}
