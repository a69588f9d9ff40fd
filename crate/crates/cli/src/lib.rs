//! Command-line front end for `entcert-core`: reads subspace and state files,
//! runs the certification hierarchies and writes certificate files.
//!
//! Exit codes: 0 certified, 2 not certified at the levels tried, 3 system too
//! large, 1 usage, parse or validation error.

pub mod bench;
pub mod files;

use std::ffi::OsString;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use entcert_core::constructions::{named_construction, random_subspace, NamedObject, CONSTRUCTION_NAMES};
use entcert_core::hierarchy::{
    certify_bipartite, certify_bipartite_auto, certify_ces, certify_ces_auto, certify_ges, certify_ges_auto,
    schmidt_number_bound, Target, DEFAULT_GUARDRAIL_ROWS, RANGE_CUTOFF,
};
use entcert_core::linalg::Scalar;
use entcert_core::{
    Certificate, CertifyOptions, GaussianRational, MixedState, Mode, Subspace, TensorSpace, TolPolicy, Verdict, C64,
};

use files::{read_input, write_output, CertificateFile, Loaded, SubspaceFile};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "entcert", version, about = "Certify entanglement of subspaces and Schmidt numbers of states")]
pub struct Cli {
    /// Worker threads for column generation and factorization.
    #[arg(long, global = true, env = "ENTCERT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify that every vector of a bipartite subspace has Schmidt rank > r.
    Certify {
        #[command(flatten)]
        run: RunArgs,
        /// Schmidt-rank bound to exclude.
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Certify that a bipartite density matrix has Schmidt number >= r + 1.
    SchmidtNumber {
        #[command(flatten)]
        run: RunArgs,
        /// Schmidt-rank bound to exclude.
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Eigenvalues below this fraction of the largest one are dropped
        /// from the range.
        #[arg(long, default_value_t = RANGE_CUTOFF)]
        range_cutoff: f64,
    },
    /// Certify that a multipartite subspace contains no fully product vector.
    Ces {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Certify that a multipartite subspace contains no biseparable vector.
    Ges {
        #[command(flatten)]
        run: RunArgs,
        /// Stop at the first bipartition that fails.
        #[arg(long)]
        short_circuit: bool,
    },
    /// Run a benchmark table and compare it with the reference values.
    Bench {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        /// Largest local dimension (tables 1, 2) or total dimension (table 3).
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_GUARDRAIL_ROWS)]
        guardrail_rows: u64,
    },
    /// Write a seeded Haar-random subspace file.
    Random {
        /// Local dimensions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Subspace dimension.
        #[arg(long)]
        dsub: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short, default_value = "-")]
        out: String,
    },
    /// Write a built-in construction to a file.
    Export {
        /// Construction name; see --list.
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long, short, default_value = "-")]
        out: String,
    },
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Input file, or "-" for stdin.
    pub input: String,
    /// Level of the hierarchy to test.
    #[arg(long, conflicts_with = "k_max")]
    pub k: Option<usize>,
    /// Try levels 1, 2, ... up to this one, stopping at the first conclusive level.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Arithmetic: floating point, or exact Gaussian rationals.
    #[arg(long, value_enum, default_value_t = ModeArg::Float)]
    pub mode: ModeArg,
    /// Singular-value cutoff relative to the largest singular value (float mode).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Refuse systems with more rows than this.
    #[arg(long, default_value_t = DEFAULT_GUARDRAIL_ROWS)]
    pub guardrail_rows: u64,
    /// Certificate destination, or "-" for stdout.
    #[arg(long, short, default_value = "-")]
    pub out: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Float,
    Rational,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Rational => Mode::Rational,
        }
    }
}

#[derive(Copy, Clone, Debug)]
enum Level {
    Fixed(usize),
    UpTo(usize),
}

impl RunArgs {
    fn level(&self) -> Result<Level> {
        match (self.k, self.k_max) {
            (Some(0), _) | (_, Some(0)) => bail!("levels start at 1"),
            (_, Some(k)) => Ok(Level::UpTo(k)),
            (k, None) => Ok(Level::Fixed(k.unwrap_or(1))),
        }
    }

    fn options(&self, short_circuit: bool) -> Result<CertifyOptions> {
        let tol = match self.tol {
            None => TolPolicy::Default,
            Some(t) if t.is_finite() && t > 0.0 => TolPolicy::Relative(t),
            Some(t) => bail!("--tol must be a positive number, got {t}"),
        };
        Ok(CertifyOptions { tol, guardrail_rows: self.guardrail_rows, short_circuit })
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_CERTIFIED };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_ERROR;
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Certify { run, r } => run_subspace("certify", &run, false, |s, level, opts| match s {
            Loaded::Float(s) => bipartite(s, r, level, opts),
            Loaded::Rational(s) => bipartite(s, r, level, opts),
        }),
        Command::SchmidtNumber { run, r, range_cutoff } => run_state(&run, r, range_cutoff),
        Command::Ces { run } => run_subspace("ces", &run, false, |s, level, opts| match s {
            Loaded::Float(s) => ces(s, level, opts),
            Loaded::Rational(s) => ces(s, level, opts),
        }),
        Command::Ges { run, short_circuit } => run_subspace("ges", &run, short_circuit, |s, level, opts| match s {
            Loaded::Float(s) => ges(s, level, opts),
            Loaded::Rational(s) => ges(s, level, opts),
        }),
        Command::Bench { table, max_dim, trials, seed, guardrail_rows } => {
            let cfg = bench::BenchConfig {
                table,
                max_dim: max_dim.unwrap_or_else(|| bench::default_max_dim(table)),
                trials,
                seed,
                opts: CertifyOptions { guardrail_rows, ..Default::default() },
            };
            let rows = bench::run(&cfg)?;
            print!("{}", bench::render(&rows));
            let diff = bench::diff(&rows);
            for line in &diff {
                eprintln!("mismatch: {line}");
            }
            Ok(if diff.is_empty() { EXIT_CERTIFIED } else { EXIT_NOT_CERTIFIED })
        }
        Command::Random { dims, dsub, seed, out } => {
            let space = TensorSpace::new(dims)?;
            let s = random_subspace(&space, dsub, seed)?;
            let file = SubspaceFile::from_subspace(&s, Some(format!("Haar-random subspace, seed {seed}")));
            write_output(&out, &file.to_json())?;
            Ok(EXIT_CERTIFIED)
        }
        Command::Export { name, list, out } => {
            if list {
                let mut text = String::new();
                for n in CONSTRUCTION_NAMES {
                    text += &format!("{n:<18} {}\n", named_construction(n)?.description);
                }
                write_output(&out, &text)?;
                return Ok(EXIT_CERTIFIED);
            }
            let c = named_construction(name.as_deref().expect("required by clap"))?;
            let description = Some(c.description.to_string());
            let file = match &c.object {
                NamedObject::Subspace(s) => SubspaceFile::from_subspace(s, description),
                NamedObject::State(rho) => SubspaceFile::from_state(rho, description),
                NamedObject::FloatState(rho) => SubspaceFile::from_state(rho, description),
            };
            write_output(&out, &file.to_json())?;
            Ok(EXIT_CERTIFIED)
        }
    }
}

type AnySubspace = Loaded<Subspace<C64>, Subspace<GaussianRational>>;

fn run_subspace<F>(command: &str, args: &RunArgs, short_circuit: bool, f: F) -> Result<i32>
where
    F: FnOnce(&AnySubspace, Level, &CertifyOptions) -> Result<Certificate>,
{
    let level = args.level()?;
    let opts = args.options(short_circuit)?;
    let bytes = read_input(&args.input)?;
    let file = SubspaceFile::parse(std::str::from_utf8(&bytes)?)?;
    let s = file.subspace(args.mode.into())?;
    let start = Instant::now();
    let cert = f(&s, level, &opts)?;
    finish(command, args, &bytes, &file.dims, start, cert)
}

fn run_state(args: &RunArgs, r: usize, range_cutoff: f64) -> Result<i32> {
    let level = args.level()?;
    let opts = args.options(false)?;
    let bytes = read_input(&args.input)?;
    let file = SubspaceFile::parse(std::str::from_utf8(&bytes)?)?;
    let rho = file.state(args.mode.into())?;
    let start = Instant::now();
    let cert = match &rho {
        Loaded::Float(rho) => schmidt(rho, r, level, range_cutoff, &opts)?,
        Loaded::Rational(rho) => schmidt(rho, r, level, range_cutoff, &opts)?,
    };
    finish("schmidt-number", args, &bytes, &file.dims, start, cert)
}

fn finish(
    command: &str,
    args: &RunArgs,
    bytes: &[u8],
    dims: &[usize],
    start: Instant,
    cert: Certificate,
) -> Result<i32> {
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("{}", summary(&cert));
    let code = exit_code(&cert.verdict);
    let file = CertificateFile::new(command, &args.input, bytes, dims, elapsed, cert);
    write_output(&args.out, &file.to_json())?;
    Ok(code)
}

pub fn exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Certified => EXIT_CERTIFIED,
        Verdict::NotCertifiedAtLevel { .. } => EXIT_NOT_CERTIFIED,
        Verdict::SystemTooLarge => EXIT_TOO_LARGE,
    }
}

fn summary(cert: &Certificate) -> String {
    let target = match &cert.target {
        Target::REntangled { r } => format!("{r}-entangled"),
        Target::SchmidtNumberAtLeast { bound } => format!("Schmidt number >= {bound}"),
        Target::CompletelyEntangled => "completely entangled".into(),
        Target::GenuinelyEntangled => "genuinely entangled".into(),
    };
    let level = cert.level_used.map_or("-".into(), |k| k.to_string());
    let systems = cert
        .systems
        .iter()
        .map(|s| {
            let rank = s.rank.as_ref().map_or("skipped".into(), |r| format!("rank {}", r.rank));
            format!("{} {}x{} {}", s.label, s.rows, s.cols, rank)
        })
        .collect::<Vec<_>>()
        .join("; ");
    let verdict = match cert.verdict {
        Verdict::Certified => "certified",
        Verdict::NotCertifiedAtLevel { .. } => "not certified",
        Verdict::SystemTooLarge => "system too large",
    };
    format!("{target}: {verdict} at level {level} [{systems}]")
}

fn bipartite<T: Scalar>(s: &Subspace<T>, r: usize, level: Level, opts: &CertifyOptions) -> Result<Certificate> {
    Ok(match level {
        Level::Fixed(k) => certify_bipartite(s, r, k, opts)?,
        Level::UpTo(k) => certify_bipartite_auto(s, r, k, opts)?,
    })
}

fn ces<T: Scalar>(s: &Subspace<T>, level: Level, opts: &CertifyOptions) -> Result<Certificate> {
    Ok(match level {
        Level::Fixed(k) => certify_ces(s, k, opts)?,
        Level::UpTo(k) => certify_ces_auto(s, k, opts)?,
    })
}

fn ges<T: Scalar>(s: &Subspace<T>, level: Level, opts: &CertifyOptions) -> Result<Certificate> {
    Ok(match level {
        Level::Fixed(k) => certify_ges(s, k, opts)?,
        Level::UpTo(k) => certify_ges_auto(s, k, opts)?,
    })
}

fn schmidt<T: Scalar>(
    rho: &MixedState<T>,
    r: usize,
    level: Level,
    range_cutoff: f64,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    match level {
        Level::Fixed(k) => Ok(schmidt_number_bound(rho, r, k, range_cutoff, opts)?),
        Level::UpTo(k_max) => {
            let mut tried = Vec::new();
            let mut cert = None;
            for k in 1..=k_max {
                let c = schmidt_number_bound(rho, r, k, range_cutoff, opts)?;
                tried.push(k);
                let stop = matches!(c.verdict, Verdict::Certified | Verdict::SystemTooLarge);
                cert = Some(c);
                if stop {
                    break;
                }
            }
            let mut cert = cert.expect("k_max >= 1");
            cert.levels_tried = tried;
            Ok(cert)
        }
    }
}
