//! Brent equation systems for 3×3 matrix multiplication.
//!
//! Generic mode has one equation per basis index of M⊗M⊗M in the 27·r
//! unknown factor entries. Invariant mode has one equation per γ-coordinate
//! in the parameters of a type multiset; member k of the multiset uses
//! parameter slot k (`a1`, `b1`, `a2`, ...).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::Cyclotomic;
use crate::catalog::{family, matmul_tensor};
use crate::error::{Error, Result};
use crate::grammar::{parse_cyclotomic, parse_polynomial, parse_var};
use crate::group::{enumerate_group, Which};
use crate::invariants::{orbit_sum, project, CLASS_COUNT};
use crate::poly::{FactorSlot, Monomial, Polynomial, Var};
use crate::prover::TypeMultiset;
use crate::tensor::{tensor_from_factors, BasisIndex, FactorMatrix, Tensor};

const SLOTS: [FactorSlot; 3] = [FactorSlot::X, FactorSlot::Y, FactorSlot::Z];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemKind {
    Generic { rank: usize },
    Invariant { multiset: TypeMultiset },
}

/// `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Polynomial,
    pub rhs: Cyclotomic,
}

impl Equation {
    pub fn holds(&self, assignment: &BTreeMap<Var, Cyclotomic>) -> Option<bool> {
        self.lhs.evaluate(assignment).map(|v| v == self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrentSystem {
    pub kind: SystemKind,
    pub variables: Vec<Var>,
    pub equations: Vec<Equation>,
}

pub fn factor_var(term: u32, slot: FactorSlot, row: u8, col: u8) -> Var {
    Var::Factor { term, slot, row, col }
}

/// Σ_j x^(j) y^(j) z^(j) = 𝒯 coordinate-wise, for `rank` rank-one terms.
pub fn generic_system(rank: usize) -> Result<BrentSystem> {
    if rank == 0 {
        return Err(Error::Invalid("rank must be at least 1".into()));
    }
    let rank32 = u32::try_from(rank).map_err(|_| Error::Invalid(format!("rank {rank} too large")))?;
    let mut variables = Vec::with_capacity(27 * rank);
    for term in 1..=rank32 {
        for slot in SLOTS {
            for row in 1..=3 {
                for col in 1..=3 {
                    variables.push(factor_var(term, slot, row, col));
                }
            }
        }
    }
    let t = matmul_tensor();
    let equations = BasisIndex::all()
        .map(|alpha| {
            let [(i1, j1), (i2, j2), (i3, j3)] = alpha.pairs();
            let mut lhs = Polynomial::zero();
            for term in 1..=rank32 {
                let m = Monomial::from_powers([
                    (factor_var(term, FactorSlot::X, i1, j1), 1),
                    (factor_var(term, FactorSlot::Y, i2, j2), 1),
                    (factor_var(term, FactorSlot::Z, i3, j3), 1),
                ]);
                lhs.add_term(m, &Cyclotomic::one());
            }
            let rhs = t.get(alpha).as_constant().expect("numeric tensor");
            Equation { lhs, rhs }
        })
        .collect();
    Ok(BrentSystem {
        kind: SystemKind::Generic { rank },
        variables,
        equations,
    })
}

/// Σ_k l_k·p(w_k) = p(𝒯) in γ-coordinates, member k in parameter slot k.
pub fn invariant_system(multiset: &TypeMultiset) -> Result<BrentSystem> {
    let mut variables = Vec::new();
    let mut sums: [Polynomial; CLASS_COUNT] = Default::default();
    for (k, &id) in multiset.ids().iter().enumerate() {
        let fam = family(id)?;
        let slot = k as u32 + 1;
        variables.extend(fam.params.iter().map(|&l| Var::param(slot, l)));
        let v = orbit_sum(&fam.symbolic(slot), fam.length);
        for (acc, c) in sums.iter_mut().zip(v.coords()) {
            acc.add_assign_ref(c);
        }
    }
    let t = project(&matmul_tensor());
    let equations = sums
        .into_iter()
        .zip(t.coords())
        .map(|(lhs, r)| Equation {
            lhs,
            rhs: r.as_constant().expect("numeric projection"),
        })
        .collect();
    Ok(BrentSystem {
        kind: SystemKind::Invariant {
            multiset: multiset.clone(),
        },
        variables,
        equations,
    })
}

/// Outcome of substituting an assignment into every equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    /// 0-based indices of violated equations, ascending.
    pub failing: Vec<usize>,
}

impl CheckOutcome {
    pub fn holds(&self) -> bool {
        self.failing.is_empty()
    }
}

pub type Assignment = BTreeMap<Var, Cyclotomic>;

pub fn check_solution(system: &BrentSystem, sol: &Assignment) -> Result<CheckOutcome> {
    if let Some(v) = system.variables.iter().find(|v| !sol.contains_key(v)) {
        return Err(Error::MissingVariable(v.to_string()));
    }
    let failing = system
        .equations
        .par_iter()
        .enumerate()
        .filter_map(|(k, eq)| match eq.holds(sol) {
            Some(true) => None,
            _ => Some(k),
        })
        .collect();
    Ok(CheckOutcome { failing })
}

impl BrentSystem {
    /// Row label: the basis index for generic systems, `g<i>` otherwise.
    pub fn label(&self, k: usize) -> String {
        match self.kind {
            SystemKind::Generic { .. } => BasisIndex::from_code(k as u16).to_string(),
            SystemKind::Invariant { .. } => format!("g{}", k + 1),
        }
    }

    pub fn to_json(&self) -> String {
        let file = SystemFile {
            mode: match self.kind {
                SystemKind::Generic { .. } => "generic".into(),
                SystemKind::Invariant { .. } => "invariant".into(),
            },
            rank: match self.kind {
                SystemKind::Generic { rank } => Some(rank),
                _ => None,
            },
            multiset: match &self.kind {
                SystemKind::Invariant { multiset } => Some(multiset.ids().to_vec()),
                _ => None,
            },
            variables: self.variables.iter().map(Var::to_string).collect(),
            equations: self
                .equations
                .iter()
                .map(|e| EquationFile {
                    lhs: e.lhs.to_string(),
                    rhs: e.rhs.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("system serializes")
    }

    pub fn from_json(src: &str) -> Result<BrentSystem> {
        let file: SystemFile = serde_json::from_str(src)?;
        let kind = match (file.mode.as_str(), file.rank, file.multiset) {
            ("generic", Some(rank), None) => SystemKind::Generic { rank },
            ("invariant", None, Some(ids)) => SystemKind::Invariant {
                multiset: TypeMultiset::new(ids)?,
            },
            (mode, _, _) => {
                return Err(Error::Invalid(format!(
                    "mode {mode:?} needs exactly one of rank (generic) or multiset (invariant)"
                )))
            }
        };
        let variables = file
            .variables
            .iter()
            .map(|s| parse_var(s).ok_or_else(|| Error::Invalid(format!("bad variable name {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let equations = file
            .equations
            .iter()
            .map(|e| {
                Ok(Equation {
                    lhs: parse_polynomial(&e.lhs)?,
                    rhs: parse_cyclotomic(&e.rhs)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BrentSystem {
            kind,
            variables,
            equations,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.equations {
            s.push_str(&format!("{} = {}\n", e.lhs, e.rhs));
        }
        s
    }

    /// A Macaulay2-style script: coefficient field, ring and ideal.
    pub fn to_m2(&self) -> String {
        let var = |v: &Var| match v {
            Var::Param(p) => format!("{}_{}", p.letter.as_char(), p.slot),
            Var::Factor { term, slot, row, col } => format!("{}_({term},{row},{col})", slot.as_char()),
        };
        let coeff = |c: &Cyclotomic| m2_coeff(c);
        let mut s = String::new();
        s.push_str("-- w is a primitive 12th root of unity\n");
        s.push_str("K = toField(QQ[w]/(w^4 - w^2 + 1));\n");
        let vars: Vec<String> = self.variables.iter().map(var).collect();
        s.push_str(&format!("R = K[{}];\n", vars.join(", ")));
        s.push_str("I = ideal(\n");
        let n = self.equations.len();
        for (k, e) in self.equations.iter().enumerate() {
            let lhs = e.lhs.render_with(&var, &coeff);
            let sep = if k + 1 < n { "," } else { "" };
            if e.rhs.is_zero() {
                s.push_str(&format!("  {lhs}{sep}\n"));
            } else {
                s.push_str(&format!("  {lhs} - {}{sep}\n", m2_number(&e.rhs)));
            }
        }
        s.push_str(");\n");
        s
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Json => self.to_json(),
            ExportFormat::Text => self.to_text(),
            ExportFormat::M2 => self.to_m2(),
        }
    }
}

/// A field element in the power basis of w, parenthesized unless it is a
/// nonnegative integer.
fn m2_number(c: &Cyclotomic) -> String {
    let mut parts = Vec::new();
    for (k, q) in c.coords().iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        let w = match k {
            0 => String::new(),
            1 => "*w".to_string(),
            _ => format!("*w^{k}"),
        };
        parts.push(format!("{q}{w}"));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let body = parts.join(" + ").replace("+ -", "- ");
    match c.as_rational() {
        Some(q) if q.is_integer() && !q.is_negative() => body,
        _ => format!("({body})"),
    }
}

/// Coefficient prefix for a term; empty for 1.
fn m2_coeff(c: &Cyclotomic) -> String {
    if c.is_one() {
        String::new()
    } else {
        m2_number(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Text,
    M2,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "text" => Ok(ExportFormat::Text),
            "m2" => Ok(ExportFormat::M2),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::Json => "json",
            ExportFormat::Text => "text",
            ExportFormat::M2 => "m2",
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    multiset: Option<Vec<u8>>,
    variables: Vec<String>,
    equations: Vec<EquationFile>,
}

#[derive(Serialize, Deserialize)]
struct EquationFile {
    lhs: String,
    rhs: String,
}

/// Parses `{"x1_11": "1", "a1": "-1 + z", ...}`.
pub fn assignment_from_json(src: &str) -> Result<Assignment> {
    let raw: BTreeMap<String, String> = serde_json::from_str(src)?;
    raw.iter()
        .map(|(k, v)| {
            let var = parse_var(k).ok_or_else(|| Error::Invalid(format!("bad variable name {k:?}")))?;
            Ok((var, parse_cyclotomic(v)?))
        })
        .collect()
}

pub fn assignment_to_json(sol: &Assignment) -> String {
    let raw: BTreeMap<String, String> = sol.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    serde_json::to_string_pretty(&raw).expect("assignment serializes")
}

/// Assigns rank-one terms 1, 2, ... to the given factor triples.
pub fn assignment_from_terms(terms: &[[FactorMatrix; 3]]) -> Result<Assignment> {
    let mut out = Assignment::new();
    for (j, triple) in terms.iter().enumerate() {
        for (slot, m) in SLOTS.iter().zip(triple) {
            for row in 1..=3 {
                for col in 1..=3 {
                    let v = m
                        .get(row, col)
                        .as_constant()
                        .ok_or_else(|| Error::Invalid(format!("term {} has a non-numeric entry", j + 1)))?;
                    out.insert(factor_var(j as u32 + 1, *slot, row, col), v);
                }
            }
        }
    }
    Ok(out)
}

fn unit(i: u8, j: u8) -> FactorMatrix {
    let mut m = FactorMatrix::zero();
    m.set(i, j, Polynomial::one());
    m
}

/// The 27 terms e_ij⊗e_jk⊗e_ki in (i, j, k) lexicographic order.
pub fn trivial_decomposition() -> Vec<[FactorMatrix; 3]> {
    let mut out = Vec::with_capacity(27);
    for i in 1..=3 {
        for j in 1..=3 {
            for k in 1..=3 {
                out.push([unit(i, j), unit(j, k), unit(k, i)]);
            }
        }
    }
    out
}

/// The distinct G-images of each member's concrete instance, as factor
/// triples, ordered member by member.
pub fn expand_orbits(multiset: &TypeMultiset, params: &[Vec<Cyclotomic>]) -> Result<Vec<[FactorMatrix; 3]>> {
    if params.len() != multiset.ids().len() {
        return Err(Error::Invalid(format!(
            "{} parameter lists for {} orbits",
            params.len(),
            multiset.ids().len()
        )));
    }
    let group = enumerate_group(Which::G);
    let mut out = Vec::new();
    for (&id, vals) in multiset.ids().iter().zip(params) {
        let fam = family(id)?;
        let w = fam.concrete(vals)?;
        let scale = fam.scale.compose(
            &fam.params
                .iter()
                .zip(vals)
                .map(|(&l, v)| (Var::param(0, l), Polynomial::from(v.clone())))
                .collect(),
        );
        let sub: BTreeMap<Var, Cyclotomic> = fam
            .params
            .iter()
            .zip(vals)
            .map(|(&l, v)| (Var::param(0, l), v.clone()))
            .collect();
        let [x, y, z] = fam.factor_triple().map(|m| m.map(|p| p.substitute(&sub)));
        let x = x.scale(&scale);
        debug_assert_eq!(tensor_from_factors(&x, &y, &z), w);
        let mut seen: BTreeSet<Tensor> = BTreeSet::new();
        for g in &group {
            let img = g.act_on_factors(&[x.clone(), y.clone(), z.clone()]);
            let t = tensor_from_factors(&img[0], &img[1], &img[2]);
            if seen.insert(t) {
                out.push(img);
            }
        }
        if seen.len() != fam.length {
            return Err(Error::OrbitSumMismatch(format!(
                "family {id} instance has an orbit of {} elements, not {}",
                seen.len(),
                fam.length
            )));
        }
    }
    Ok(out)
}
