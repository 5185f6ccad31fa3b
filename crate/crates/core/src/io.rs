//! Plain-text formats for coefficients and samples.
//!
//! Coefficients:
//!
//! ```text
//! so3-coeffs v1 <L> <M> <N> <complex|real>
//! <ℓ> <m> <n> <re> <im>        one row per stored entry, in storage order
//! ```
//!
//! Samples:
//!
//! ```text
//! so3-samples v1 <L> <M> <N> <complex|real> order=gab
//! <re> <im>                     complex: one row per sample, g fastest, then a, then b
//! <re>                          real
//! ```
//!
//! Values are written with enough significant digits (17 for `f64`, 9 for
//! `f32`) that reading them back is bit-identical.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Result, So3Error};
use crate::grid::{BandLimits, Reality, SampleData, So3Samples, WignerCoeffs};
use crate::scalar::Real;

const COEFFS_MAGIC: &str = "so3-coeffs";
const SAMPLES_MAGIC: &str = "so3-samples";
const VERSION: &str = "v1";
const SAMPLE_ORDER: &str = "order=gab";

/// Either kind of file.
#[derive(Clone, Debug, PartialEq)]
pub enum So3Data<T> {
    Coeffs(WignerCoeffs<T>),
    Samples(So3Samples<T>),
}

fn fmt<T: Real>(x: T) -> String {
    format!("{:.*e}", T::ROUNDTRIP_DIGITS - 1, x)
}

fn parse_err(line: usize, message: impl Into<String>) -> So3Error {
    So3Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<V: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<V> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

pub fn write_coeffs<T: Real, W: Write>(mut w: W, c: &WignerCoeffs<T>) -> Result<()> {
    let lim = c.limits();
    writeln!(
        w,
        "{COEFFS_MAGIC} {VERSION} {} {} {} {}",
        lim.l(),
        lim.m(),
        lim.n(),
        c.reality()
    )?;
    for (ell, m, n, v) in c.iter() {
        writeln!(w, "{ell} {m} {n} {} {}", fmt(v.re), fmt(v.im))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_samples<T: Real, W: Write>(mut w: W, f: &So3Samples<T>) -> Result<()> {
    let lim = f.limits();
    writeln!(
        w,
        "{SAMPLES_MAGIC} {VERSION} {} {} {} {} {SAMPLE_ORDER}",
        lim.l(),
        lim.m(),
        lim.n(),
        f.reality()
    )?;
    match f.data() {
        SampleData::Complex(v) => {
            for z in v {
                writeln!(w, "{} {}", fmt(z.re), fmt(z.im))?;
            }
        }
        SampleData::Real(v) => {
            for x in v {
                writeln!(w, "{}", fmt(*x))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads either format, dispatching on the header.
pub fn read_data<T: Real, R: BufRead>(r: R) -> Result<So3Data<T>> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let header = header?;
    let mut toks = header.split_whitespace();
    let magic = toks.next().unwrap_or("");
    if magic != COEFFS_MAGIC && magic != SAMPLES_MAGIC {
        return Err(parse_err(1, format!("unknown header '{magic}'")));
    }
    let version: String = field(toks.next(), 1, "version")?;
    if version != VERSION {
        return Err(parse_err(1, format!("unsupported version '{version}'")));
    }
    let l: usize = field(toks.next(), 1, "L")?;
    let m: usize = field(toks.next(), 1, "M")?;
    let n: usize = field(toks.next(), 1, "N")?;
    let limits = BandLimits::new(l, m, n)?;
    let reality: Reality = field(toks.next(), 1, "reality")?;

    let mut body = lines.filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i, other)),
    });

    if magic == COEFFS_MAGIC {
        if let Some(extra) = toks.next() {
            return Err(parse_err(1, format!("unexpected header field '{extra}'")));
        }
        let mut out = WignerCoeffs::zeros(limits, reality);
        let expected: Vec<(usize, i32, i32)> = out.iter().map(|(e, m, n, _)| (e, m, n)).collect();
        for (slot, &(ell, mm, nn)) in expected.iter().enumerate() {
            let (line, text) = body
                .next()
                .ok_or_else(|| parse_err(0, format!("expected {} rows, got {slot}", expected.len())))?;
            let text = text?;
            let mut t = text.split_whitespace();
            let got: (usize, i32, i32) = (
                field(t.next(), line, "ℓ")?,
                field(t.next(), line, "m")?,
                field(t.next(), line, "n")?,
            );
            if got != (ell, mm, nn) {
                return Err(parse_err(
                    line,
                    format!("expected (ℓ, m, n) = ({ell}, {mm}, {nn}), got {got:?}"),
                ));
            }
            let re: T = field(t.next(), line, "real part")?;
            let im: T = field(t.next(), line, "imaginary part")?;
            if t.next().is_some() {
                return Err(parse_err(line, "trailing fields"));
            }
            out.data_mut()[slot] = Complex::new(re, im);
        }
        if let Some((line, _)) = body.next() {
            return Err(parse_err(line, "rows beyond the coefficient count"));
        }
        Ok(So3Data::Coeffs(out))
    } else {
        let order: String = field(toks.next(), 1, "sample order")?;
        if order != SAMPLE_ORDER {
            return Err(parse_err(1, format!("unsupported sample order '{order}'")));
        }
        let len = limits.sample_len();
        let mut rows = Vec::with_capacity(len);
        for slot in 0..len {
            let (line, text) = body
                .next()
                .ok_or_else(|| parse_err(0, format!("expected {len} samples, got {slot}")))?;
            let text = text?;
            let mut t = text.split_whitespace();
            let re: T = field(t.next(), line, "real part")?;
            let im: T = match reality {
                Reality::Complex => field(t.next(), line, "imaginary part")?,
                Reality::Real => T::zero(),
            };
            if t.next().is_some() {
                return Err(parse_err(line, "trailing fields"));
            }
            rows.push(Complex::new(re, im));
        }
        if let Some((line, _)) = body.next() {
            return Err(parse_err(line, "rows beyond the sample count"));
        }
        let samples = match reality {
            Reality::Complex => So3Samples::from_complex(limits, rows)?,
            Reality::Real => So3Samples::from_real(limits, rows.into_iter().map(|z| z.re).collect())?,
        };
        Ok(So3Data::Samples(samples))
    }
}

pub fn read_coeffs<T: Real, R: BufRead>(r: R) -> Result<WignerCoeffs<T>> {
    match read_data(r)? {
        So3Data::Coeffs(c) => Ok(c),
        So3Data::Samples(_) => Err(parse_err(1, "expected a coefficient file, found samples")),
    }
}

pub fn read_samples<T: Real, R: BufRead>(r: R) -> Result<So3Samples<T>> {
    match read_data(r)? {
        So3Data::Samples(s) => Ok(s),
        So3Data::Coeffs(_) => Err(parse_err(1, "expected a sample file, found coefficients")),
    }
}

pub fn save_coeffs<T: Real>(path: impl AsRef<Path>, c: &WignerCoeffs<T>) -> Result<()> {
    write_coeffs(BufWriter::new(File::create(path)?), c)
}

pub fn save_samples<T: Real>(path: impl AsRef<Path>, f: &So3Samples<T>) -> Result<()> {
    write_samples(BufWriter::new(File::create(path)?), f)
}

pub fn load<T: Real>(path: impl AsRef<Path>) -> Result<So3Data<T>> {
    read_data(BufReader::new(File::open(path)?))
}

pub fn load_coeffs<T: Real>(path: impl AsRef<Path>) -> Result<WignerCoeffs<T>> {
    read_coeffs(BufReader::new(File::open(path)?))
}

pub fn load_samples<T: Real>(path: impl AsRef<Path>) -> Result<So3Samples<T>> {
    read_samples(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bl(l: usize, m: usize, n: usize) -> BandLimits {
        BandLimits::new(l, m, n).unwrap()
    }

    fn awkward(k: usize) -> f64 {
        // Values whose shortest decimal form needs all 17 digits.
        (k as f64 + 0.1).sqrt() * std::f64::consts::PI / 3.0 - 1e-300 * k as f64
    }

    #[test]
    fn coefficients_round_trip_bit_identically() {
        for reality in [Reality::Complex, Reality::Real] {
            let lim = bl(4, 3, 2);
            let mut c = WignerCoeffs::<f64>::zeros(lim, reality);
            for (k, z) in c.data_mut().iter_mut().enumerate() {
                *z = Complex::new(awkward(k), -awkward(k + 7) * 1e-5);
            }
            let mut buf = Vec::new();
            write_coeffs(&mut buf, &c).unwrap();
            let back: WignerCoeffs<f64> = read_coeffs(buf.as_slice()).unwrap();
            assert_eq!(back.reality(), reality);
            for (a, b) in c.data().iter().zip(back.data()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn samples_round_trip_bit_identically() {
        let lim = bl(3, 2, 2);
        let complex = So3Samples::from_complex(
            lim,
            (0..lim.sample_len())
                .map(|k| Complex::new(awkward(k), awkward(k * 3)))
                .collect(),
        )
        .unwrap();
        let real = So3Samples::from_real(lim, (0..lim.sample_len()).map(|k| -awkward(k) * 1e12).collect()).unwrap();
        for f in [complex, real] {
            let mut buf = Vec::new();
            write_samples(&mut buf, &f).unwrap();
            let back: So3Samples<f64> = read_samples(buf.as_slice()).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn single_precision_round_trips() {
        let lim = bl(2, 2, 1);
        let f = So3Samples::from_real(lim, (0..lim.sample_len()).map(|k| (k as f32 + 0.3).ln()).collect()).unwrap();
        let mut buf = Vec::new();
        write_samples(&mut buf, &f).unwrap();
        let back: So3Samples<f32> = read_samples(buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn malformed_input_reports_the_line() {
        let text = "so3-coeffs v1 2 2 1 complex\n0 0 0 1.0 0.0\n1 -1 0 oops 0.0\n";
        match read_coeffs::<f64, _>(text.as_bytes()) {
            Err(So3Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let wrong_order = "so3-coeffs v1 2 2 1 complex\n1 0 0 1.0 0.0\n";
        assert!(matches!(
            read_coeffs::<f64, _>(wrong_order.as_bytes()),
            Err(So3Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_coeffs::<f64, _>("nonsense".as_bytes()),
            Err(So3Error::Parse { line: 1, .. })
        ));
        let bad_limits = "so3-samples v1 2 3 1 real order=gab\n";
        assert!(matches!(
            read_samples::<f64, _>(bad_limits.as_bytes()),
            Err(So3Error::InvalidBandLimits { .. })
        ));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let lim = bl(2, 1, 1);
        let mut buf = Vec::new();
        write_samples(&mut buf, &So3Samples::<f64>::zeros(lim, Reality::Real)).unwrap();
        assert!(read_coeffs::<f64, _>(buf.as_slice()).is_err());
        assert!(matches!(
            read_data::<f64, _>(buf.as_slice()).unwrap(),
            So3Data::Samples(_)
        ));
    }
}
