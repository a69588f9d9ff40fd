//! On-disk formats: subspace and state files in, certificate files out.

use std::io::{Read, Write};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use entcert_core::linalg::Scalar;
use entcert_core::{Certificate, GaussianRational, MixedState, Mode, Subspace, TensorSpace, C64};
use num_complex::Complex;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// One complex amplitude: `[re, im]` as numbers in float files, as `"p/q"`
/// strings in rational files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Float([f64; 2]),
    Rational([String; 2]),
}

/// A subspace basis or a density matrix. Exactly one of `basis` and `matrix`
/// is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceFile {
    pub schema_version: u32,
    pub dims: Vec<usize>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Entry>>>,
}

/// Conversion between a scalar type and its file representation.
pub trait FileScalar: Scalar {
    fn encode(&self) -> Entry;
    fn decode(entry: &Entry) -> Result<Self>;
}

impl FileScalar for C64 {
    fn encode(&self) -> Entry {
        Entry::Float([self.re, self.im])
    }

    fn decode(entry: &Entry) -> Result<Self> {
        match entry {
            Entry::Float([re, im]) if re.is_finite() && im.is_finite() => Ok(C64::new(*re, *im)),
            Entry::Float(_) => bail!("non-finite amplitude"),
            Entry::Rational(_) => bail!("float file contains a rational entry"),
        }
    }
}

impl FileScalar for GaussianRational {
    fn encode(&self) -> Entry {
        Entry::Rational([self.re.to_string(), self.im.to_string()])
    }

    fn decode(entry: &Entry) -> Result<Self> {
        match entry {
            Entry::Rational([re, im]) => Ok(Complex::new(parse_rational(re)?, parse_rational(im)?)),
            Entry::Float(_) => bail!("rational file contains a float entry; write amplitudes as \"p/q\" strings"),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|e| anyhow!("bad rational '{s}': {e}"))
}

/// Either mode of a loaded object.
pub enum Loaded<F, R> {
    Float(F),
    Rational(R),
}

impl SubspaceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: SubspaceFile = serde_json::from_str(text).context("malformed input file")?;
        if file.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema_version {} (expected {SCHEMA_VERSION})", file.schema_version);
        }
        if file.basis.is_some() == file.matrix.is_some() {
            bail!("input must contain exactly one of \"basis\" and \"matrix\"");
        }
        let n = file.space()?.total_dim();
        let rows = file.basis.as_ref().or(file.matrix.as_ref()).expect("checked above");
        if file.matrix.is_some() && rows.len() != n {
            bail!("matrix has {} rows, expected {n}", rows.len());
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                bail!("row {i} has length {}, expected {n}", row.len());
            }
        }
        Ok(file)
    }

    pub fn space(&self) -> Result<TensorSpace> {
        Ok(TensorSpace::new(self.dims.clone())?)
    }

    pub fn from_subspace<T: FileScalar>(s: &Subspace<T>, description: Option<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dims: s.space().dims().to_vec(),
            mode: T::MODE,
            description,
            basis: Some(encode_rows(s.basis())),
            matrix: None,
        }
    }

    pub fn from_state<T: FileScalar>(rho: &MixedState<T>, description: Option<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dims: rho.space().dims().to_vec(),
            mode: T::MODE,
            description,
            basis: None,
            matrix: Some(encode_rows(rho.matrix())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    fn basis_rows(&self) -> Result<&[Vec<Entry>]> {
        self.basis.as_deref().ok_or_else(|| anyhow!("expected a subspace file with a \"basis\" field"))
    }

    fn matrix_rows(&self) -> Result<&[Vec<Entry>]> {
        self.matrix.as_deref().ok_or_else(|| anyhow!("expected a state file with a \"matrix\" field"))
    }

    /// The subspace in the requested arithmetic mode. Rational files can be
    /// run in float mode; float files cannot be run in rational mode.
    pub fn subspace(&self, mode: Mode) -> Result<Loaded<Subspace<C64>, Subspace<GaussianRational>>> {
        let rows = self.basis_rows()?;
        let space = self.space()?;
        Ok(match (self.mode, mode) {
            (Mode::Float, Mode::Float) => Loaded::Float(Subspace::new(space, decode_rows(rows)?)?),
            (Mode::Rational, Mode::Rational) => Loaded::Rational(Subspace::new(space, decode_rows(rows)?)?),
            (Mode::Rational, Mode::Float) => {
                Loaded::Float(Subspace::<GaussianRational>::new(space, decode_rows(rows)?)?.to_float())
            }
            (Mode::Float, Mode::Rational) => return refuse_rational(),
        })
    }

    /// The density matrix in the requested arithmetic mode.
    pub fn state(&self, mode: Mode) -> Result<Loaded<MixedState<C64>, MixedState<GaussianRational>>> {
        let rows = self.matrix_rows()?;
        let space = self.space()?;
        Ok(match (self.mode, mode) {
            (Mode::Float, Mode::Float) => Loaded::Float(MixedState::new(space, decode_rows(rows)?)?),
            (Mode::Rational, Mode::Rational) => Loaded::Rational(MixedState::new(space, decode_rows(rows)?)?),
            (Mode::Rational, Mode::Float) => {
                let exact: Vec<Vec<GaussianRational>> = decode_rows(rows)?;
                let float = exact.iter().map(|r| r.iter().map(Scalar::to_c64).collect()).collect();
                Loaded::Float(MixedState::new(space, float)?)
            }
            (Mode::Float, Mode::Rational) => return refuse_rational(),
        })
    }
}

fn refuse_rational<T>() -> Result<T> {
    bail!("--mode rational needs a rational input file; this file stores float amplitudes")
}

fn encode_rows<T: FileScalar>(rows: &[Vec<T>]) -> Vec<Vec<Entry>> {
    rows.iter().map(|r| r.iter().map(FileScalar::encode).collect()).collect()
}

fn decode_rows<T: FileScalar>(rows: &[Vec<Entry>]) -> Result<Vec<Vec<T>>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter().enumerate().map(|(j, e)| T::decode(e).with_context(|| format!("entry [{i}][{j}]"))).collect()
        })
        .collect()
}

/// A certificate with provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub input: String,
    pub input_sha256: String,
    pub dims: Vec<usize>,
    pub elapsed_seconds: f64,
    pub certificate: Certificate,
}

impl CertificateFile {
    pub fn new(
        command: &str,
        input: &str,
        bytes: &[u8],
        dims: &[usize],
        elapsed: f64,
        certificate: Certificate,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: "entcert".to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input: input.to_string(),
            input_sha256: sha256_hex(bytes),
            dims: dims.to_vec(),
            elapsed_seconds: elapsed,
            certificate,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed certificate file")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads a path, or stdin for `-`.
pub fn read_input(path: &str) -> Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        std::fs::read(path).with_context(|| format!("reading {path}"))
    }
}

/// Writes to a path, or stdout for `-`.
pub fn write_output(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
        Ok(())
    } else {
        std::fs::write(path, text).with_context(|| format!("writing {path}"))
    }
}
