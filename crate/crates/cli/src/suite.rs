use lqb::dynamics::{cdybe_residual, equivariance_max, sample_domain, LMatrixField};
use lqb::duality::{certify_dual, double_dual_check};
use lqb::lie::ReductiveDecomposition;
use lqb::qbia::{build_double, check_compatibility, check_quasi_bialgebra, compatibility_flags, QuasiBialgebra, STRUCT_TOL};
use lqb::specfile::{self, FieldChoice, LoadedSpec};
use lqb::twist::moduli_membership;
use lqb::{Check, Error, LinearMap, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Fail;

const SWEEP_TOL: f64 = 1e-8;
const SAMPLE_RADIUS: f64 = 1.0;

fn field_for(s: &LoadedSpec, q: &QuasiBialgebra<f64>) -> Result<Option<LMatrixField<f64>>, Error> {
    match (s.field, &s.decomp) {
        (FieldChoice::Ram, _) => LMatrixField::ram(q).map(Some),
        (FieldChoice::Lcan, Some(d)) => LMatrixField::lcan(q, d).map(Some),
        _ => Ok(None),
    }
}

/// Keep the largest residual per check name, preserving first-seen order.
fn merge_max(acc: &mut Vec<Check>, r: Report) {
    for c in r.checks {
        match acc.iter_mut().find(|a| a.name == c.name) {
            Some(a) if c.residual > a.residual || c.residual.is_nan() => *a = c,
            Some(_) => {}
            None => acc.push(c),
        }
    }
}

fn sweep(field: &LMatrixField<f64>, seed: u64, samples: usize) -> Result<Report, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = sample_domain(field, &mut rng, samples, SAMPLE_RADIUS);
    let mut acc = Vec::new();
    let mut eq = 0.0f64;
    for p in &pts {
        merge_max(&mut acc, cdybe_residual(field, p, SWEEP_TOL)?);
        eq = eq.max(equivariance_max(field, p)?);
    }
    let mut r = Report { checks: acc };
    r.push(Check::at_most("equivariance", eq, SWEEP_TOL));
    r.push(Check::at_most("points sampled in U", (samples - pts.len()) as f64, 0.0));
    Ok(r.prefixed("sweep: "))
}

/// Quasi-bialgebra axioms, double Jacobi, compatibility and, when canonical,
/// CDYBE and equivariance sweeps over seeded samples of U.
pub fn verify(s: &LoadedSpec, seed: u64, samples: usize) -> Result<Report, Fail> {
    let q = s.structure()?;
    let mut r = check_quasi_bialgebra(&q).prefixed("structure: ");
    let dbl = build_double(&q);
    r.push(Check::at_most("double: jacobi", dbl.lie_residual(), STRUCT_TOL));
    r.push(Check::at_most("double: pairing invariance", dbl.pairing_invariance_residual(), STRUCT_TOL));
    if let (Some(t), Some(d)) = (&s.twist, &s.decomp) {
        r.extend(moduli_membership(&s.base, d, t).prefixed("twist in moduli: "));
    }
    let canonical = match &s.decomp {
        Some(d) => {
            r.extend(check_compatibility(&q, d).prefixed("compatibility: "));
            compatibility_flags(&q, d).1
        }
        None => false,
    };
    let want_field = match s.field {
        FieldChoice::Lcan => canonical && r.pass(),
        FieldChoice::Ram => r.pass(),
        FieldChoice::None => false,
    };
    if want_field {
        if let Some(f) = field_for(s, &q)? {
            r.extend(sweep(&f, seed, samples)?);
        }
    }
    Ok(r)
}

pub struct LcanOutput {
    pub point: Vec<f64>,
    pub matrix: LinearMap,
    pub inside: bool,
    pub spectral_distance: f64,
    pub double_spectral_distance: f64,
    pub condition: f64,
    pub report: Report,
}

pub fn lcan_at(s: &LoadedSpec, p: &[f64], check: bool) -> Result<LcanOutput, Fail> {
    let q = s.structure()?;
    let f = match field_for(s, &q)? {
        Some(f) => f,
        None => return Err(Fail::Parse("spec selects no field".into())),
    };
    if p.len() != f.p_dim() {
        return Err(Fail::Parse(format!("--point has {} coordinates, dim l = {}", p.len(), f.p_dim())));
    }
    let st = f.status(p);
    if !st.inside {
        let m = f.margins;
        let why = if st.spectral_distance <= m.spectral {
            format!("spectral distance {:.3e} <= margin {:.1e}", st.spectral_distance, m.spectral)
        } else {
            format!("block condition {:.3e} >= limit {:.1e}", st.condition, m.cond_max)
        };
        return Err(Fail::Domain(format!("point outside U: {why}")));
    }
    let matrix = f.eval(p)?;
    let mut report = Report::new();
    if check {
        report.extend(cdybe_residual(&f, p, SWEEP_TOL)?);
        report.push(Check::at_most("equivariance", equivariance_max(&f, p)?, SWEEP_TOL));
    }
    Ok(LcanOutput {
        point: p.to_vec(),
        matrix,
        inside: st.inside,
        spectral_distance: st.spectral_distance,
        double_spectral_distance: st.double_spectral_distance,
        condition: st.condition,
        report,
    })
}

/// Certification of G★, the double-dual round trip and re-parsing of the written file.
pub fn dual_report(q: &QuasiBialgebra<f64>, d: &ReductiveDecomposition, written: &str) -> Result<Report, Fail> {
    let mut r = certify_dual(q, d)?.prefixed("dual: ");
    r.push(Check::at_most("double dual = op", double_dual_check(q, d)?, 1e-10));
    let back = specfile::parse(written)?;
    let (s, _) = lqb::duality::dual_qbia(q, d)?;
    r.push(Check::at_most("written file re-parses to G*", back.structure()?.max_diff(&s), 0.0));
    Ok(r)
}
