//! Algebra spec files: a versioned JSON document holding structure constants,
//! cocycle and associator entries, a decomposition and an optional twist.
//!
//! ```json
//! {
//!   "format": "lqb-spec", "version": 1, "name": "sl2-cartan",
//!   "dim": 3, "basis": ["h", "e", "f"],
//!   "brackets": [[0, 1, 1, 2.0], [0, 2, 2, -2.0], [1, 2, 0, 1.0]],
//!   "cocycle": [], "phi": [[0, 1, 2, 0.5]],
//!   "decomposition": {"l": [0], "m": [1, 2]}
//! }
//! ```
//!
//! `brackets` entries (i, j, k, c) mean c_{ij}^k = c = −c_{ji}^k; `cocycle`
//! entries (i, j, k, v) are (ϖ_{e_i})_{jk} = v = −(ϖ_{e_i})_{kj}; `phi`
//! entries are alternating components; `twist` entries (i, j, v) give the
//! skew map t with t_{ij} = v. When a twist is present the described
//! structure is G^t.

use serde::{Deserialize, Serialize};

use crate::duality::dual_qbia;
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, ReductiveDecomposition};
use crate::linalg::{LinearMap, Tensor3};
use crate::qbia::QuasiBialgebra;
use crate::twist::apply_twist;

pub const FORMAT: &str = "lqb-spec";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    pub l: Vec<usize>,
    pub m: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub format: String,
    pub version: u32,
    #[serde(default)]
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, f64)>,
    #[serde(default)]
    pub cocycle: Vec<(usize, usize, usize, f64)>,
    #[serde(default)]
    pub phi: Vec<(usize, usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twist: Vec<(usize, usize, f64)>,
    /// "lcan" (default when a decomposition is given), "ram" or "none".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Lcan,
    Ram,
    None,
}

/// A parsed spec: the untwisted structure, the decomposition and the twist.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub name: String,
    pub base: QuasiBialgebra<f64>,
    pub decomp: Option<ReductiveDecomposition>,
    pub twist: Option<LinearMap<f64>>,
    pub field: FieldChoice,
}

impl LoadedSpec {
    /// The described structure: G, or G^t when a twist is present.
    pub fn structure(&self) -> Result<QuasiBialgebra<f64>> {
        let q = match &self.twist {
            Some(t) => apply_twist(&self.base, t)?,
            None => self.base.clone(),
        };
        Ok(match &self.decomp {
            Some(d) => q.with_decomp(d.clone()),
            None => q,
        })
    }
}

fn perr(field: &str, i: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("field `{field}[{i}]`: {msg}"))
}

fn check_idx(field: &str, i: usize, idx: &[usize], n: usize) -> Result<()> {
    for &x in idx {
        if x >= n {
            return Err(perr(field, i, format!("index {x} out of range for dim {n}")));
        }
    }
    Ok(())
}

fn check_value(field: &str, i: usize, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(perr(field, i, "non-finite value"))
    }
}

/// Parse spec text; JSON errors end with "at line L column C", semantic errors the field.
pub fn parse(text: &str) -> Result<LoadedSpec> {
    let doc: SpecDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(e.to_string()))?;
    load(&doc)
}

pub fn load(doc: &SpecDoc) -> Result<LoadedSpec> {
    if doc.format != FORMAT {
        return Err(Error::Parse(format!("field `format`: expected \"{FORMAT}\", found \"{}\"", doc.format)));
    }
    if doc.version != VERSION {
        return Err(Error::Parse(format!("field `version`: unsupported version {}", doc.version)));
    }
    let n = doc.dim;
    if doc.basis.len() != n {
        return Err(Error::Parse(format!("field `basis`: {} names for dim {n}", doc.basis.len())));
    }
    let mut c = Tensor3::cube(n);
    let mut seen = std::collections::HashSet::new();
    for (i, &(a, b, k, v)) in doc.brackets.iter().enumerate() {
        check_idx("brackets", i, &[a, b, k], n)?;
        check_value("brackets", i, v)?;
        if a == b {
            return Err(perr("brackets", i, "[e_i, e_i] is zero by antisymmetry"));
        }
        if !seen.insert((a.min(b), a.max(b), k)) {
            return Err(perr("brackets", i, "duplicate entry"));
        }
        c[(a, b, k)] = v;
        c[(b, a, k)] = -v;
    }
    let mut w = Tensor3::cube(n);
    seen.clear();
    for (i, &(x, a, b, v)) in doc.cocycle.iter().enumerate() {
        check_idx("cocycle", i, &[x, a, b], n)?;
        check_value("cocycle", i, v)?;
        if a == b {
            return Err(perr("cocycle", i, "diagonal entry of a skew map"));
        }
        if !seen.insert((x, a.min(b), a.max(b))) {
            return Err(perr("cocycle", i, "duplicate entry"));
        }
        w[(x, a, b)] = v;
        w[(x, b, a)] = -v;
    }
    let mut phi = Tensor3::cube(n);
    seen.clear();
    for (i, &(a, b, k, v)) in doc.phi.iter().enumerate() {
        check_idx("phi", i, &[a, b, k], n)?;
        check_value("phi", i, v)?;
        if a == b || b == k || a == k {
            return Err(perr("phi", i, "repeated index in an alternating tensor"));
        }
        let mut s = [a, b, k];
        s.sort_unstable();
        if !seen.insert((s[0], s[1], s[2])) {
            return Err(perr("phi", i, "duplicate entry"));
        }
        phi.set_alternating(a, b, k, v);
    }
    let g = LieAlgebra::from_tensor_raw(doc.basis.clone(), c);
    let base = QuasiBialgebra::new(g, w, phi)?;
    let decomp = match &doc.decomposition {
        Some(d) => Some(
            ReductiveDecomposition::new(n, d.l.clone(), d.m.clone())
                .map_err(|e| Error::Parse(format!("field `decomposition`: {e}")))?,
        ),
        None => None,
    };
    let twist = if doc.twist.is_empty() {
        None
    } else {
        let mut t = LinearMap::zeros(n, n);
        for (i, &(a, b, v)) in doc.twist.iter().enumerate() {
            check_idx("twist", i, &[a, b], n)?;
            check_value("twist", i, v)?;
            if a == b {
                return Err(perr("twist", i, "diagonal entry of a skew map"));
            }
            t[(a, b)] = v;
            t[(b, a)] = -v;
        }
        Some(t)
    };
    let field = match doc.field.as_deref() {
        None if decomp.is_some() => FieldChoice::Lcan,
        None => FieldChoice::None,
        Some("lcan") => FieldChoice::Lcan,
        Some("ram") => FieldChoice::Ram,
        Some("none") => FieldChoice::None,
        Some(other) => return Err(Error::Parse(format!("field `field`: unknown field kind \"{other}\""))),
    };
    if field == FieldChoice::Lcan && decomp.is_none() {
        return Err(Error::Parse("field `field`: lcan needs a decomposition".into()));
    }
    let mut base = base;
    base.decomp = decomp.clone();
    Ok(LoadedSpec { name: doc.name.clone(), base, decomp, twist, field })
}

impl SpecDoc {
    /// Document for G (and optionally the twist t, so that the file describes G^t).
    pub fn from_parts(name: &str, q: &QuasiBialgebra<f64>, decomp: Option<&ReductiveDecomposition>, twist: Option<&LinearMap<f64>>) -> Self {
        let n = q.dim();
        let c = q.g.structure();
        let mut brackets = Vec::new();
        let mut cocycle = Vec::new();
        let mut phi = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i < j && c[(i, j, k)] != 0.0 {
                        brackets.push((i, j, k, c[(i, j, k)]));
                    }
                    if j < k && q.varpi[(i, j, k)] != 0.0 {
                        cocycle.push((i, j, k, q.varpi[(i, j, k)]));
                    }
                    if i < j && j < k && q.phi[(i, j, k)] != 0.0 {
                        phi.push((i, j, k, q.phi[(i, j, k)]));
                    }
                }
            }
        }
        let twist = twist
            .map(|t| (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| t[(i, j)] != 0.0).map(|(i, j)| (i, j, t[(i, j)])).collect())
            .unwrap_or_default();
        Self {
            format: FORMAT.into(),
            version: VERSION,
            name: name.into(),
            dim: n,
            basis: q.g.names().to_vec(),
            brackets,
            cocycle,
            phi,
            decomposition: decomp.map(|d| DecompositionDoc { l: d.l().to_vec(), m: d.m().to_vec() }),
            twist,
            field: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec documents always serialize");
        s.push('\n');
        s
    }
}

/// The dual G★ with its decomposition, as a spec document.
pub fn dual_spec(q: &QuasiBialgebra<f64>, d: &ReductiveDecomposition, name: &str) -> Result<SpecDoc> {
    let (s, ds) = dual_qbia(q, d)?;
    Ok(SpecDoc::from_parts(name, &s, Some(&ds), None))
}
