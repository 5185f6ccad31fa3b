use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use so3::io::{load, save_coeffs, save_samples, So3Data};
use so3::{BandLimits, Reality, So3Transform, TransformPath};
use so3_harness::{
    bench_scaling, quadrature_check, roundtrip, write_csv, write_dat, BenchConfig, NMode, Path, RoundtripConfig,
};

#[derive(Parser)]
#[command(
    name = "so3",
    version,
    about = "Wigner transform accuracy, timing and quadrature experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RealityArg {
    Real,
    Complex,
}

impl From<RealityArg> for Reality {
    fn from(r: RealityArg) -> Self {
        match r {
            RealityArg::Real => Reality::Real,
            RealityArg::Complex => Reality::Complex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Forward,
    Inverse,
}

#[derive(Subcommand)]
enum Command {
    /// Random coefficients through inverse then forward transform.
    Roundtrip {
        #[arg(long = "L")]
        l: usize,
        /// Defaults to L.
        #[arg(long = "M")]
        m: Option<usize>,
        /// Defaults to L.
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "complex")]
        reality: RealityArg,
        /// 3d, per-n, naive or default.
        #[arg(long, default_value = "default")]
        path: Path,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Enable the transforms' internal parallelism.
        #[arg(long)]
        parallel: bool,
        /// Allow the naive path above its soft cap.
        #[arg(long)]
        allow_large_naive: bool,
    },
    /// Timing scaling over an ascending list of band-limits.
    Bench {
        #[arg(long = "L-list", value_delimiter = ',', required = true)]
        l_list: Vec<usize>,
        /// `equal` (N = L) or a fixed N.
        #[arg(long = "N", default_value = "equal")]
        n: NMode,
        #[arg(long, value_enum, default_value = "complex")]
        reality: RealityArg,
        #[arg(long, default_value = "default")]
        path: Path,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Two-column `L seconds` plot data.
        #[arg(long)]
        dat: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Exact quadrature checks on random and analytic integrands.
    Quadrature {
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "M")]
        m: Option<usize>,
        #[arg(long = "N")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Transform a sample file to coefficients or back.
    Transform {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// 3d, per-n or default.
        #[arg(long, default_value = "default")]
        path: Path,
    },
}

fn limits(l: usize, m: Option<usize>, n: Option<usize>) -> Result<BandLimits> {
    Ok(BandLimits::new(l, m.unwrap_or(l), n.unwrap_or(l))?)
}

fn csv_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Roundtrip {
            l,
            m,
            n,
            reality,
            path,
            seed,
            trials,
            out,
            parallel,
            allow_large_naive,
        } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let cfg = RoundtripConfig {
                limits: limits(l, m, n)?,
                seed,
                reality: reality.into(),
                path,
                trials,
                parallel,
                allow_large_naive,
            };
            let report = roundtrip(&cfg)?;
            write_csv(csv_sink(&out)?, std::slice::from_ref(&report))?;
            if out.is_some() {
                eprintln!(
                    "{} {} {}: max_abs_error {:.3e}, forward {:.3e} s, inverse {:.3e} s",
                    cfg.limits, report.reality, report.path, report.max_abs_error, report.forward_s, report.inverse_s
                );
            }
        }
        Command::Bench {
            l_list,
            n,
            reality,
            path,
            seed,
            trials,
            out,
            dat,
            parallel,
        } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let result = bench_scaling(&BenchConfig {
                l_list,
                n_mode: n,
                reality: reality.into(),
                path,
                seed,
                trials,
                parallel,
            })?;
            write_csv(csv_sink(&out)?, &result.reports)?;
            if let Some(p) = dat {
                write_dat(
                    BufWriter::new(File::create(&p).with_context(|| format!("creating {}", p.display()))?),
                    &result.reports,
                )?;
            }
            for (a, b, ratio) in &result.ratios {
                eprintln!("time(L={b})/time(L={a}) = {ratio:.2}");
            }
        }
        Command::Quadrature { l, m, n, seed } => {
            let r = quadrature_check(limits(l, m, n)?, seed)?;
            println!("limits {}", r.limits);
            println!("constant relative error {:.3e}", r.constant_rel_error);
            println!("random signal relative error {:.3e}", r.random_rel_error);
            println!("max |integral of D*| for 0 < ell < 8 {:.3e}", r.wigner_max_abs);
        }
        Command::Transform {
            direction,
            input,
            out,
            path,
        } => {
            let data = load::<f64>(&input).with_context(|| format!("reading {}", input.display()))?;
            let tpath = |lim: BandLimits| match path {
                Path::ThreeD => Ok(TransformPath::ThreeD),
                Path::PerN => Ok(TransformPath::PerN),
                Path::Default => Ok(if path.resolve(lim) == Path::PerN {
                    TransformPath::PerN
                } else {
                    TransformPath::ThreeD
                }),
                Path::Naive => Err(anyhow::anyhow!("the transform subcommand runs the fast paths only")),
            };
            match (direction, data) {
                (Direction::Forward, So3Data::Samples(f)) => {
                    let t = So3Transform::new(f.limits())?;
                    let c = t.forward_with(tpath(f.limits())?, &f)?;
                    save_coeffs(&out, &c).with_context(|| format!("writing {}", out.display()))?;
                }
                (Direction::Inverse, So3Data::Coeffs(c)) => {
                    let t = So3Transform::new(c.limits())?;
                    let f = t.inverse_with(tpath(c.limits())?, &c)?;
                    save_samples(&out, &f).with_context(|| format!("writing {}", out.display()))?;
                }
                (Direction::Forward, So3Data::Coeffs(_)) => {
                    bail!("forward transform needs a sample file, got coefficients")
                }
                (Direction::Inverse, So3Data::Samples(_)) => {
                    bail!("inverse transform needs a coefficient file, got samples")
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("so3: {e:#}");
            ExitCode::FAILURE
        }
    }
}
