use std::io::Write;
use std::path::Path;

use lqb::Report;
use serde::Serialize;

use crate::suite::LcanOutput;

pub fn write_out(s: &str) {
    let mut out = std::io::stdout().lock();
    if out.write_all(s.as_bytes()).and_then(|_| out.flush()).is_err() {
        std::process::exit(0);
    }
}

#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl Meta {
    pub fn new(command: &'static str, input: &Path) -> Self {
        Self { tool: "lqb", version: env!("CARGO_PKG_VERSION"), command, input: input.display().to_string(), seed: None, samples: None }
    }

    pub fn seed(mut self, seed: u64, samples: usize) -> Self {
        self.seed = Some(seed);
        self.samples = Some(samples);
        self
    }
}

#[derive(Serialize)]
struct LcanJson<'a> {
    point: &'a [f64],
    inside: bool,
    spectral_distance: f64,
    double_spectral_distance: f64,
    condition: f64,
    matrix: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct Doc<'a> {
    #[serde(flatten)]
    meta: &'a Meta,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lcan: Option<LcanJson<'a>>,
    checks: &'a [lqb::Check],
}

pub fn print_report(meta: &Meta, r: &Report, json: bool, lcan: Option<&LcanOutput>) {
    if json {
        let doc = Doc {
            meta,
            pass: r.pass(),
            lcan: lcan.map(|o| LcanJson {
                point: &o.point,
                inside: o.inside,
                spectral_distance: o.spectral_distance,
                double_spectral_distance: o.double_spectral_distance,
                condition: o.condition,
                matrix: o.matrix.to_f64_rows(),
            }),
            checks: &r.checks,
        };
        outln!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
        return;
    }
    let mut head = format!("{} {} {} {}", meta.tool, meta.version, meta.command, meta.input);
    if let (Some(s), Some(n)) = (meta.seed, meta.samples) {
        head.push_str(&format!(" seed={s} samples={n}"));
    }
    outln!("{head}");
    if let Some(o) = lcan {
        outln!(
            "domain: inside={} spectral_distance={:.6e} double_spectral_distance={:.6e} condition={:.6e}",
            o.inside, o.spectral_distance, o.double_spectral_distance, o.condition
        );
        outln!("lcan_p ({}x{}):", o.matrix.rows(), o.matrix.cols());
        for row in o.matrix.to_f64_rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("{:24.16e}", x + 0.0)).collect();
            outln!("{}", cells.join(" "));
        }
    }
    for c in &r.checks {
        let bound = if c.lower_bound { ">" } else { "<=" };
        outln!(
            "{} {:50} residual={:.3e} {bound} {:.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.tolerance
        );
    }
    if !r.checks.is_empty() {
        let failed = r.failures().len();
        outln!("result: {} ({} checks, {} failed)", if r.pass() { "PASS" } else { "FAIL" }, r.checks.len(), failed);
    }
}
