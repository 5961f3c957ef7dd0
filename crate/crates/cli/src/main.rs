//! `lqb`: load algebra spec files, run residual suites, evaluate ℓcan, compute duals.
//!
//! Exit codes: 0 all checks pass, 1 a residual check failed, 2 parse or usage
//! error, 3 domain error (point outside U, preconditions, failed evaluation).

/// println! that exits quietly when stdout is closed, e.g. piped into `head`.
macro_rules! outln {
    ($($t:tt)*) => {
        $crate::output::write_out(&format!("{}\n", format_args!($($t)*)))
    };
}

mod output;
mod suite;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lqb::catalog;
use lqb::specfile::{self, LoadedSpec};
use lqb::{Error, Report};

use output::{print_report, Meta};

#[derive(Parser)]
#[command(name = "lqb", version, about = "Lie quasi-bialgebra workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the quasi-bialgebra, double, compatibility and ℓcan suites on a spec.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Replace the tolerance of a check, `name=value` (spaces in names may be written as `_`).
        #[arg(long = "tol-override", value_name = "KEY=VALUE")]
        tol_override: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print ℓcan at a point of 𝔩* with a domain report.
    Lcan {
        spec: PathBuf,
        /// Comma-separated coordinates of p in the dual basis of 𝔩.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        point: Vec<f64>,
        /// Append CDYBE and equivariance residuals at the point.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write the dual quasi-bialgebra G★ as a spec file and certify it.
    Dual {
        spec: PathBuf,
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the built-in examples or emit one as a spec file.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Emit {
        name: String,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Failure categories mapped to exit codes.
enum Fail {
    Parse(String),
    Domain(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::UnknownEntry(_) => Fail::Parse(e.to_string()),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<LoadedSpec, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))?;
    specfile::parse(&text).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| Fail::Parse(format!("{}: {e}", path.display())))
}

fn apply_overrides(report: &mut Report, overrides: &[String]) -> Result<(), Fail> {
    let norm = |s: &str| s.replace(' ', "_");
    for o in overrides {
        let (key, value) = o.rsplit_once('=').ok_or_else(|| Fail::Parse(format!("--tol-override `{o}`: expected KEY=VALUE")))?;
        let tol: f64 = value.parse().map_err(|_| Fail::Parse(format!("--tol-override `{o}`: bad value")))?;
        let mut hit = false;
        for c in report.checks.iter_mut().filter(|c| norm(&c.name) == norm(key)) {
            *c = c.with_tolerance(tol);
            hit = true;
        }
        if !hit {
            return Err(Fail::Parse(format!("--tol-override: no check named `{key}`")));
        }
    }
    Ok(())
}

fn verdict(r: &Report) -> u8 {
    if r.pass() {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<u8, Fail> {
    match cli.cmd {
        Cmd::Verify { spec, seed, samples, tol_override, json } => {
            let s = load(&spec)?;
            let mut r = suite::verify(&s, seed, samples)?;
            apply_overrides(&mut r, &tol_override)?;
            let meta = Meta::new("verify", &spec).seed(seed, samples);
            print_report(&meta, &r, json, None);
            Ok(verdict(&r))
        }
        Cmd::Lcan { spec, point, check, json } => {
            let s = load(&spec)?;
            let out = suite::lcan_at(&s, &point, check)?;
            let meta = Meta::new("lcan", &spec);
            print_report(&meta, &out.report, json, Some(&out));
            Ok(verdict(&out.report))
        }
        Cmd::Dual { spec, out, json } => {
            let s = load(&spec)?;
            let d = s.decomp.clone().ok_or_else(|| Fail::Parse("dual needs a decomposition".into()))?;
            let q = s.structure()?;
            let name = if s.name.is_empty() { "dual".to_string() } else { format!("{}-dual", s.name) };
            let doc = specfile::dual_spec(&q, &d, &name)?;
            let text = doc.to_json();
            write(&out, &text)?;
            let r = suite::dual_report(&q, &d, &text)?;
            print_report(&Meta::new("dual", &spec), &r, json, None);
            Ok(verdict(&r))
        }
        Cmd::Catalog { action: CatalogCmd::List } => {
            for (name, about) in catalog::ENTRIES {
                outln!("{name:16} {about}");
            }
            Ok(0)
        }
        Cmd::Catalog { action: CatalogCmd::Emit { name, out } } => {
            let e = catalog::build(&name)?;
            let text = e.spec().to_json();
            match out {
                Some(p) => write(&p, &text)?,
                None => output::write_out(&text),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Domain(m)) => {
            eprintln!("domain error: {m}");
            ExitCode::from(3)
        }
    }
}
