//! Command-line driver for the `cqstar` certifier.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check
//! fails, 2 on input errors (unreadable or malformed files, bad flags,
//! invalid generator parameters).

pub mod commands;
pub mod report;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqstar::gallery::{FORMS, GALLERY};
use cqstar::io;
use cqstar::{Complex64, Settings64};

use crate::commands::{FormSource, GenRequest};
use crate::report::{Entry, InputDigest, Report, Status};

#[derive(Debug, Parser)]
#[command(
    name = "cqstar",
    version,
    about = "Certifier for finite-dimensional CQ*-algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Relative tolerance for equalities.
    #[arg(long, global = true, value_parser = positive_real)]
    pub tol_eq: Option<f64>,
    /// Singular-value cutoff for numerical rank.
    #[arg(long, global = true, value_parser = positive_real)]
    pub tol_rank: Option<f64>,
    /// Smallest eigenvalue accepted as positive definite.
    #[arg(long, global = true, value_parser = positive_real)]
    pub tol_pd: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    /// Write the report (or the generated file) here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate algebra files and certify the Banach, left Hilbert, HCQ* and
    /// strict CQ* conditions.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Modular data, Tomita checks, standardness, quasi-unit and flow.
    Modular {
        file: PathBuf,
        /// Real times t for the Δ^{it} checks.
        #[arg(long = "t", value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        t: Vec<f64>,
        /// Complex exponents for the flow identities, e.g. `0.5,1+1i,2i`.
        #[arg(long, value_delimiter = ',', value_parser = parse_complex,
              default_value = "0.5,1+1i,0.5i,1i,2i")]
        alpha: Vec<Complex64>,
    },
    /// GNS construction for a form; without FORM the inner product is used.
    Gns {
        algebra: PathBuf,
        form: Option<PathBuf>,
        /// Write the quotient algebra to this file.
        #[arg(long)]
        quotient_out: Option<PathBuf>,
    },
    /// Generate algebra files.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Standardness and Δ spectrum of M_n with ρ_i ∝ r^i over a grid of r.
    Sweep {
        /// Matrix size, at most 4.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0.1, value_parser = positive_real)]
        r_min: f64,
        #[arg(long, default_value_t = 1.0, value_parser = positive_real)]
        r_max: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// M_n with the faithful state ρ = diag(rho).
    MatrixState {
        #[arg(long)]
        n: usize,
        /// Comma-separated weights; `2/3` is accepted.
        #[arg(long)]
        rho: String,
    },
    /// Pointwise C^k with weights and an optional star twist.
    Commutative {
        #[arg(long)]
        weights: String,
        /// `none`, `swap` (reversal) or a permutation such as `2,1,0`.
        #[arg(long)]
        twist: Option<String>,
    },
    /// Algebra generated by matrices acting on a cyclic separating vector.
    FromCyclicVector {
        /// JSON file `{"generators": [...], "omega": [...]}`.
        #[arg(long)]
        input: PathBuf,
    },
    /// Write every gallery algebra and form into a directory.
    Gallery {
        #[arg(long)]
        dir: PathBuf,
    },
}

/// The commutant solve is quartic in the dimension n².
const MAX_SWEEP_N: usize = 4;

fn positive_real(text: &str) -> Result<f64, String> {
    let v = io::parse_real(text).map_err(|e| e.to_string())?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive: {text}"))
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`; `i` alone means `1i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: {text:?}");
    let real = |s: &str| -> Result<f64, String> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(bad),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return io::parse_real(&t)
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // the sign that separates the parts is not the leading one and does not
    // belong to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let z = match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Complex64::new(re, real(&body[k..])?)
        }
        None => Complex64::new(0.0, real(body)?),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

fn settings(g: &GlobalArgs) -> Settings64 {
    let mut s = Settings64::default();
    if let Some(v) = g.tol_eq {
        s.tol.eq = v;
    }
    if let Some(v) = g.tol_rank {
        s.tol.rank = v;
    }
    if let Some(v) = g.tol_pd {
        s.tol.pd = v;
    }
    s
}

fn digests(paths: &[&Path]) -> Vec<InputDigest> {
    paths.iter().filter_map(|p| InputDigest::of(p)).collect()
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not worth a non-zero exit
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

/// Sweep rows as a whitespace-separated table.
fn sweep_table(report: &Report) -> String {
    let mut out = String::from("r\tstandard\tstatus\trho\tdelta_spectrum\n");
    for e in &report.results {
        let get = |k: &str| {
            e.data
                .get(k)
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into())
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{:?}\t{}\t{}",
            get("r"),
            get("standard"),
            e.status,
            get("rho"),
            get("delta_spectrum"),
        );
    }
    out
}

fn render(report: &Report, output: Output, sweep: bool) -> String {
    match output {
        Output::Json => report.to_json(),
        Output::Text if sweep => sweep_table(report),
        Output::Text => report.to_text(),
    }
}

fn finish(report: Report, g: &GlobalArgs, sweep: bool) -> i32 {
    let text = render(&report, g.output, sweep);
    match emit(&text, g.out.as_deref()) {
        Ok(()) => report.status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            Status::Error.code()
        }
    }
}

fn input_error(message: impl std::fmt::Display) -> i32 {
    eprintln!("error: {message}");
    Status::Error.code()
}

fn run_gen(kind: &GenKind, g: &GlobalArgs, s: &Settings64) -> i32 {
    let req = match kind {
        GenKind::Gallery { dir } => return write_gallery(dir),
        GenKind::MatrixState { n, rho } => match io::parse_real_list(rho) {
            Ok(rho) => GenRequest::MatrixState { n: *n, rho },
            Err(e) => return input_error(e),
        },
        GenKind::Commutative { weights, twist } => {
            let weights = match io::parse_real_list(weights) {
                Ok(w) => w,
                Err(e) => return input_error(e),
            };
            match commands::parse_twist(twist.as_deref(), weights.len()) {
                Ok(twist) => GenRequest::Commutative { weights, twist },
                Err(e) => return input_error(e),
            }
        }
        GenKind::FromCyclicVector { input } => GenRequest::FromCyclicVector {
            input: input.clone(),
        },
    };
    match commands::cmd_gen(&req, s) {
        Ok(spec) => match emit(&io::algebra_to_json(&spec), g.out.as_deref()) {
            Ok(()) => Status::Pass.code(),
            Err(e) => input_error(e),
        },
        Err(e) => input_error(e),
    }
}

fn write_gallery(dir: &Path) -> i32 {
    if let Err(e) = std::fs::create_dir_all(dir) {
        return input_error(format!("{}: {e}", dir.display()));
    }
    let files = GALLERY
        .iter()
        .map(|e| (format!("{}.json", e.name), io::algebra_to_json(&e.spec())))
        .chain(FORMS.iter().map(|f| {
            (
                format!("{}.form.json", f.name),
                io::form_to_json(&(f.build)()),
            )
        }));
    for (name, text) in files {
        let path = dir.join(name);
        if let Err(e) = std::fs::write(&path, text) {
            return input_error(format!("{}: {e}", path.display()));
        }
    }
    Status::Pass.code()
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_from<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Status::Error.code()
            } else {
                0
            };
        }
    };
    let g = &cli.global;
    let s = settings(g);
    match &cli.command {
        Command::Check { files } => {
            let results = commands::cmd_check(files, &s);
            let paths: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
            finish(
                Report::new("check", &s.tol, digests(&paths), results),
                g,
                false,
            )
        }
        Command::Modular { file, t, alpha } => {
            if t.iter().any(|x| !x.is_finite()) {
                return input_error("--t values must be finite");
            }
            let entry = commands::cmd_modular(file, &s, t, alpha);
            finish(
                Report::new("modular", &s.tol, digests(&[file]), vec![entry]),
                g,
                false,
            )
        }
        Command::Gns {
            algebra,
            form,
            quotient_out,
        } => {
            let source = match form {
                Some(p) => FormSource::File(p),
                None => FormSource::InnerProduct,
            };
            let entry = commands::cmd_gns(algebra, source, &s, quotient_out.as_deref());
            let mut paths = vec![algebra.as_path()];
            paths.extend(form.as_deref());
            finish(
                Report::new("gns", &s.tol, digests(&paths), vec![entry]),
                g,
                false,
            )
        }
        Command::Gen { kind } => run_gen(kind, g, &s),
        Command::Sweep {
            n,
            r_min,
            r_max,
            steps,
        } => {
            if !(1..=MAX_SWEEP_N).contains(n) || *steps == 0 || r_min > r_max {
                return input_error(format!(
                    "sweep needs 1 <= n <= {MAX_SWEEP_N}, steps >= 1 and r-min <= r-max"
                ));
            }
            let grid = commands::linear_grid(*r_min, *r_max, *steps);
            let results: Vec<Entry> = commands::cmd_sweep(*n, &grid, &s);
            finish(Report::new("sweep", &s.tol, Vec::new(), results), g, true)
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
