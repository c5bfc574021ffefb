//! JSON state and mask files.
//!
//! A state file holds `n`, `format` (`hermitian` or `stokes`) and either
//! `re`/`im` as row-major nested arrays or `values` in base-4 row-major
//! multi-index order. An optional `seed` records how a fixture was drawn.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::error::{dim, Error, Result};
use crate::repr::{check_qubits, from_stokes, to_stokes, HermitianOperator, StokesTensor};
use crate::{CMatrix, SignMask, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateFormat {
    Hermitian,
    Stokes,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub format: StateFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl StateFile {
    pub fn from_operator(rho: &HermitianOperator, format: StateFormat, seed: Option<u64>) -> Self {
        let n = rho.n();
        match format {
            StateFormat::Hermitian => {
                let m = rho.matrix();
                let rows = |f: fn(&C64) -> f64| {
                    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect()
                };
                Self {
                    n,
                    format,
                    re: Some(rows(|z| z.re)),
                    im: Some(rows(|z| z.im)),
                    values: None,
                    seed,
                }
            }
            StateFormat::Stokes => Self {
                n,
                format,
                re: None,
                im: None,
                values: Some(to_stokes(rho).values().to_vec()),
                seed,
            },
        }
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        check_qubits(self.n)?;
        match self.format {
            StateFormat::Hermitian => {
                let (re, im) = match (&self.re, &self.im, &self.values) {
                    (Some(re), Some(im), None) => (re, im),
                    _ => return format_err("hermitian format needs 're' and 'im' and no 'values'"),
                };
                let d = 1usize << self.n;
                for (label, rows) in [("re", re), ("im", im)] {
                    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                        return dim(format!("'{label}' must be {d}x{d} for n = {}", self.n));
                    }
                }
                let m = CMatrix::from_fn(d, d, |i, j| C64::new(re[i][j], im[i][j]));
                HermitianOperator::new(m)
            }
            StateFormat::Stokes => {
                let values = match (&self.re, &self.im, &self.values) {
                    (None, None, Some(v)) => v,
                    _ => return format_err("stokes format needs 'values' and no 're'/'im'"),
                };
                if values.len() != 1 << (2 * self.n) {
                    return dim(format!(
                        "'values' has {} entries, expected {} for n = {}",
                        values.len(),
                        1usize << (2 * self.n),
                        self.n
                    ));
                }
                Ok(from_stokes(&StokesTensor::new(self.n, values.clone())?))
            }
        }
    }
}

fn format_err<T>(msg: &str) -> Result<T> {
    Err(Error::Format(msg.into()))
}

/// Pretty JSON with every float in 17-significant-digit exponent form.
struct Precise<'a>(PrettyFormatter<'a>);

impl Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes any value as pretty JSON with full-precision floats.
pub fn to_json_precise<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Precise(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn write_state(rho: &HermitianOperator, format: StateFormat, seed: Option<u64>) -> String {
    to_json_precise(&StateFile::from_operator(rho, format, seed))
}

/// Parses a state file. Syntax and schema problems are `Format` errors;
/// array sizes inconsistent with `n` are `Dimension` errors.
pub fn read_state(text: &str) -> Result<(HermitianOperator, Option<u64>)> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    Ok((file.to_operator()?, file.seed))
}

pub fn write_mask(mask: &SignMask) -> String {
    serde_json::to_string_pretty(mask).expect("in-memory serialization")
}

pub fn read_mask(text: &str) -> Result<SignMask> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}
