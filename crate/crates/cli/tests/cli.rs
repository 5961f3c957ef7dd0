use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lqb::catalog::{build, sl_n_root_basis};
use lqb::dynamics::lcan_closed_form;
use lqb::specfile;
use serde_json::Value;
use tempfile::TempDir;

fn lqb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lqb")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn emit(dir: &TempDir, name: &str) -> PathBuf {
    let p = dir.path().join(format!("{name}.json"));
    let o = lqb(&["catalog", "emit", name, "-o", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn catalog_list_and_unknown() {
    let o = lqb(&["catalog", "list"]);
    assert_eq!(code(&o), 0);
    for n in ["abelian", "sl2-cartan", "ev-sl2", "symmetric-sl2"] {
        assert!(stdout(&o).lines().any(|l| l.starts_with(n)), "{n}");
    }
    let o = lqb(&["catalog", "emit", "no-such-entry"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no-such-entry"));
}

#[test]
fn emitted_entries_verify() {
    let dir = TempDir::new().unwrap();
    for n in ["abelian", "sl2-cartan", "ev-sl2", "symmetric-sl2"] {
        let p = emit(&dir, n);
        let o = lqb(&["verify", s(&p), "--samples", "20"]);
        assert_eq!(code(&o), 0, "{n}: {}", stdout(&o));
        assert!(stdout(&o).contains("result: PASS"));
    }
    // the ℓcan sweep ran on the canonical entries
    let o = lqb(&["verify", s(&emit(&dir, "ev-sl2")), "--samples", "5"]);
    assert!(stdout(&o).contains("sweep: cdybe cyclic"));
}

#[test]
fn emit_to_stdout_matches_file() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "ev-sl2");
    let o = lqb(&["catalog", "emit", "ev-sl2"]);
    assert_eq!(stdout(&o), std::fs::read_to_string(p).unwrap());
}

#[test]
fn corrupted_structure_constants_fail_jacobi() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "sl2-cartan");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    v["brackets"][0][3] = Value::from(2.5);
    std::fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = lqb(&["verify", s(&p)]);
    assert_eq!(code(&o), 1);
    let line = stdout(&o).lines().find(|l| l.contains("structure: g jacobi")).unwrap().to_string();
    assert!(line.starts_with("FAIL"), "{line}");
}

#[test]
fn parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"format\": \"lqb-spec\",\n  \"version\": 1,\n  \"dim\": [\n}").unwrap();
    let o = lqb(&["verify", s(&p)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    let o = lqb(&["verify", s(&dir.path().join("missing.json"))]);
    assert_eq!(code(&o), 2);
    let o = lqb(&["verify"]);
    assert_eq!(code(&o), 2);
}

fn lcan_json(p: &Path, point: &str) -> (i32, Value) {
    let o = lqb(&["lcan", s(p), &format!("--point={point}"), "--json", "--check"]);
    let v = if code(&o) == 0 { serde_json::from_str(&stdout(&o)).unwrap() } else { Value::Null };
    (code(&o), v)
}

#[test]
fn lcan_values() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "sl2-cartan");
    let (c, v) = lcan_json(&p, "0");
    assert_eq!(c, 0);
    for row in v["lcan"]["matrix"].as_array().unwrap() {
        assert!(row.as_array().unwrap().iter().all(|x| x.as_f64().unwrap() == 0.0));
    }
    let (c, v) = lcan_json(&p, "0.3");
    assert_eq!(c, 0);
    assert_eq!(v["pass"], Value::Bool(true));
    let e = build("sl2-cartan").unwrap();
    let want = lcan_closed_form(&e.q, &e.decomp, &[0.3]).unwrap();
    for (i, row) in v["lcan"]["matrix"].as_array().unwrap().iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            assert!((x.as_f64().unwrap() - want[(i, j)]).abs() <= 1e-10);
        }
    }
    // text output carries 17 significant digits
    let o = lqb(&["lcan", s(&p), "--point", "0.3"]);
    assert!(stdout(&o).contains("4.6853039696338099e-3"), "{}", stdout(&o));
}

#[test]
fn lcan_outside_domain_names_predicate() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "sl2-compact");
    // cosh ad_{sp} is singular at p = 2π
    let o = lqb(&["lcan", s(&p), "--point", "6.283185307179586"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("block condition"), "{}", stderr(&o));
    let p = emit(&dir, "so3");
    // ad^𝔡_{sp} has eigenvalues ±i|p|/4, which meet iπ at |p| = 4π
    let o = lqb(&["lcan", s(&p), "--point", "12.566370614359172,0,0"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("spectral distance"), "{}", stderr(&o));
    let o = lqb(&["lcan", s(&p), "--point", "0.1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn dual_of_abelian_is_abelian() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "abelian");
    let out = dir.path().join("dual.json");
    let o = lqb(&["dual", s(&p), s(&out)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let d = specfile::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let q = d.structure().unwrap();
    assert_eq!(q.g.structure().norm_max() + q.varpi.norm_max() + q.phi.norm_max(), 0.0);
}

#[test]
fn dual_of_ev_matches_closed_form_brackets() {
    let dir = TempDir::new().unwrap();
    let (g, _) = sl_n_root_basis(2).unwrap();
    // basis (x, e, f); 𝔤★ = (x, e^e, e^f) ≅ (x, f, e) through B
    let hx = g.bracket(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0])[1];
    let ef = g.bracket(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0])[0];
    for (name, phi) in [("ev-sl2", 0.5), ("ev-sl2-gamma", 0.5 / (-0.5f64).tanh())] {
        let p = emit(&dir, name);
        let out = dir.path().join(format!("{name}-dual.json"));
        let o = lqb(&["dual", s(&p), s(&out)]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).lines().any(|l| l.starts_with("PASS double dual = op")));
        let q = specfile::parse(&std::fs::read_to_string(&out).unwrap()).unwrap().structure().unwrap();
        // [e_α, e_{−α}]★ = (¼ − φ_α²)[e_α, e_{−α}]: e_α ↦ coordinate 2, e_{−α} ↦ coordinate 1
        let v = q.g.bracket(&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]);
        assert!((v[0] - (0.25 - phi * phi) * ef).abs() <= 1e-10, "{name}: {v:?}");
        // [z, u]★ = [z, u]: [x, e_α] = hx e_α
        let v = q.g.bracket(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]);
        assert!((v[2] - hx).abs() <= 1e-12);
        let o = lqb(&["verify", s(&out), "--samples", "10"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
}

#[test]
fn dual_precondition_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("mmm.json");
    std::fs::write(
        &p,
        r#"{"format": "lqb-spec", "version": 1, "dim": 3, "basis": ["a", "b", "c"],
            "phi": [[0, 1, 2, 1.0]], "decomposition": {"l": [], "m": [0, 1, 2]}, "field": "none"}"#,
    )
    .unwrap();
    let o = lqb(&["dual", s(&p), s(&dir.path().join("o.json"))]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let o = lqb(&["verify", s(&p)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "ev-sl3");
    let a = lqb(&["verify", s(&p), "--seed", "7", "--samples", "10", "--json"]);
    let b = lqb(&["verify", s(&p), "--seed", "7", "--samples", "10", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["seed"], Value::from(7));
    assert_eq!(v["tool"], Value::from("lqb"));
    assert!(v["version"].is_string());
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == Value::Bool(true)));
}

#[test]
fn tolerance_overrides() {
    let dir = TempDir::new().unwrap();
    let p = emit(&dir, "ev-sl3");
    let o = lqb(&["verify", s(&p), "--samples", "3", "--tol-override", "structure:_g_jacobi=1e-30"]);
    assert_eq!(code(&o), 1);
    let o = lqb(&["verify", s(&p), "--samples", "3", "--tol-override", "structure: g jacobi=1"]);
    assert_eq!(code(&o), 0);
    let o = lqb(&["verify", s(&p), "--tol-override", "nonsense=1"]);
    assert_eq!(code(&o), 2);
}
