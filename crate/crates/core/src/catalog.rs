//! The special tensors and the 44 orbit families of length ≤ 18.
//!
//! Family data lives in `catalog.json` next to this crate's manifest. Each
//! record stores its factor matrices as polynomial strings in the bare
//! letters `a..g`; instantiation renames or substitutes those letters.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::Cyclotomic;
use crate::error::{Error, Result};
use crate::grammar::parse_polynomial;
use crate::group::{orbit_of, stabilizer_order, FactorPerm};
use crate::poly::{Letter, Polynomial, Var};
use crate::tensor::{tensor_from_factors, BasisIndex, FactorMatrix, Tensor};

pub const FAMILY_COUNT: u8 = 44;
pub const GROUP_ORDER: usize = 144;

/// Families whose tensor is linear in the parameters.
pub const LINEAR_FAMILIES: [u8; 8] = [6, 7, 17, 18, 19, 20, 39, 41];

const CATALOG_JSON: &str = include_str!("../catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// w⊗w⊗w
    Cube,
    /// u⊗u⊗v
    Square,
    /// u⊗v⊗w
    Triple,
}

impl Shape {
    pub fn factor_count(self) -> usize {
        match self {
            Shape::Cube => 1,
            Shape::Square => 2,
            Shape::Triple => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub id: u8,
    pub length: usize,
    pub params: Vec<char>,
    pub shape: Shape,
    pub scale: String,
    pub factors: Vec<[[String; 3]; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogFile {
    pub families: Vec<FamilyRecord>,
}

/// One row of the table: a tensor template and its orbit length.
#[derive(Clone, Debug)]
pub struct OrbitFamily {
    pub id: u8,
    pub length: usize,
    pub params: Vec<Letter>,
    pub shape: Shape,
    /// Scalar prefactor (a for the linear rows built from fixed matrices).
    pub scale: Polynomial,
    /// Templates in the slot-0 parameters.
    pub factors: Vec<FactorMatrix>,
}

impl OrbitFamily {
    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    fn from_record(rec: &FamilyRecord) -> Result<Self> {
        let bad = |msg: String| Error::CatalogIntegrity { family: rec.id, msg };
        let params = rec
            .params
            .iter()
            .map(|&c| Letter::from_char(c).ok_or_else(|| bad(format!("bad parameter letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if rec.factors.len() != rec.shape.factor_count() {
            return Err(bad(format!(
                "{:?} shape needs {} factors, found {}",
                rec.shape,
                rec.shape.factor_count(),
                rec.factors.len()
            )));
        }
        let factors = rec
            .factors
            .iter()
            .map(FactorMatrix::parse_rows)
            .collect::<Result<Vec<_>>>()?;
        let scale = parse_polynomial(&rec.scale)?;
        let fam = OrbitFamily {
            id: rec.id,
            length: rec.length,
            params,
            shape: rec.shape,
            scale,
            factors,
        };
        let mut used = fam.scale.vars();
        for f in &fam.factors {
            for row in f.rows() {
                for p in row {
                    used.extend(p.vars());
                }
            }
        }
        let declared: std::collections::BTreeSet<Var> = fam.params.iter().map(|&l| Var::param(0, l)).collect();
        if used != declared {
            return Err(bad(format!(
                "declared parameters {:?} differ from the letters used",
                rec.params
            )));
        }
        Ok(fam)
    }

    /// The three tensor factors x, y, z.
    pub fn factor_triple(&self) -> [&FactorMatrix; 3] {
        match self.shape {
            Shape::Cube => [&self.factors[0], &self.factors[0], &self.factors[0]],
            Shape::Square => [&self.factors[0], &self.factors[0], &self.factors[1]],
            Shape::Triple => [&self.factors[0], &self.factors[1], &self.factors[2]],
        }
    }

    /// Expands the family with each parameter replaced by a polynomial.
    pub fn instantiate(&self, values: &[Polynomial]) -> Result<Tensor> {
        if values.len() != self.params.len() {
            return Err(Error::Arity {
                family: self.id,
                expected: self.params.len(),
                got: values.len(),
            });
        }
        let map: BTreeMap<Var, Polynomial> = self
            .params
            .iter()
            .zip(values)
            .map(|(&l, v)| (Var::param(0, l), v.clone()))
            .collect();
        let sub = |m: &FactorMatrix| m.map(|p| p.compose(&map));
        let [x, y, z] = self.factor_triple().map(sub);
        let scale = self.scale.compose(&map);
        let t = tensor_from_factors(&x, &y, &z);
        Ok(if scale.as_constant().is_some_and(|c| c.is_one()) {
            t
        } else {
            t.scale(&scale)
        })
    }

    /// Fresh symbolic parameters tagged with `slot`.
    pub fn symbolic(&self, slot: u32) -> Tensor {
        let vals = self.symbolic_params(slot);
        self.instantiate(&vals).expect("arity matches by construction")
    }

    pub fn symbolic_params(&self, slot: u32) -> Vec<Polynomial> {
        self.params.iter().map(|&l| Polynomial::param(slot, l)).collect()
    }

    pub fn concrete(&self, values: &[Cyclotomic]) -> Result<Tensor> {
        let vals: Vec<Polynomial> = values.iter().cloned().map(Polynomial::from).collect();
        self.instantiate(&vals)
    }
}

pub struct Catalog {
    families: Vec<OrbitFamily>,
}

impl Catalog {
    pub fn from_json(src: &str) -> Result<Catalog> {
        let file: CatalogFile = serde_json::from_str(src)?;
        let families = file
            .families
            .iter()
            .map(OrbitFamily::from_record)
            .collect::<Result<Vec<_>>>()?;
        for (k, f) in families.iter().enumerate() {
            if usize::from(f.id) != k + 1 {
                return Err(Error::CatalogIntegrity {
                    family: f.id,
                    msg: format!("expected id {} at position {k}", k + 1),
                });
            }
        }
        if families.len() != usize::from(FAMILY_COUNT) {
            return Err(Error::Invalid(format!(
                "catalog has {} families, expected {FAMILY_COUNT}",
                families.len()
            )));
        }
        Ok(Catalog { families })
    }

    pub fn get(&self, id: u8) -> Result<&OrbitFamily> {
        id.checked_sub(1)
            .and_then(|k| self.families.get(usize::from(k)))
            .ok_or(Error::UnknownFamily(id))
    }

    pub fn families(&self) -> &[OrbitFamily] {
        &self.families
    }
}

static CATALOG: LazyLock<Catalog> =
    LazyLock::new(|| Catalog::from_json(CATALOG_JSON).expect("bundled catalog.json is well formed"));

pub fn catalog() -> &'static Catalog {
    &CATALOG
}

pub fn family(id: u8) -> Result<&'static OrbitFamily> {
    catalog().get(id)
}

/// w_id(params) for concrete field values.
pub fn family_tensor(id: u8, params: &[Cyclotomic]) -> Result<Tensor> {
    family(id)?.concrete(params)
}

pub fn family_tensor_symbolic(id: u8, slot: u32) -> Result<Tensor> {
    Ok(family(id)?.symbolic(slot))
}

fn matrix(entries: &[((u8, u8), Cyclotomic)]) -> FactorMatrix {
    let mut m = FactorMatrix::zero();
    for ((r, c), v) in entries {
        m.set(*r, *c, v.clone().into());
    }
    m
}

fn one() -> Cyclotomic {
    Cyclotomic::one()
}

pub fn delta() -> FactorMatrix {
    FactorMatrix::identity()
}

pub fn kappa() -> FactorMatrix {
    let mut m = FactorMatrix::zero();
    for r in 1..=3 {
        for c in 1..=3 {
            if r != c {
                m.set(r, c, Polynomial::one());
            }
        }
    }
    m
}

pub fn eta() -> FactorMatrix {
    matrix(&[
        ((1, 1), one()),
        ((2, 2), Cyclotomic::zeta()),
        ((3, 3), Cyclotomic::zeta_bar()),
    ])
}

pub fn eta_bar() -> FactorMatrix {
    eta().map(|p| p.as_constant().expect("constant").conj().into())
}

pub fn tau() -> FactorMatrix {
    let m1 = -Cyclotomic::one();
    matrix(&[
        ((1, 2), one()),
        ((2, 3), one()),
        ((3, 1), one()),
        ((2, 1), m1.clone()),
        ((3, 2), m1.clone()),
        ((1, 3), m1),
    ])
}

/// 𝒯 = Σ e_ij⊗e_jk⊗e_ki.
pub fn matmul_tensor() -> Tensor {
    let mut t = Tensor::zero();
    for i in 1..=3 {
        for j in 1..=3 {
            for k in 1..=3 {
                t.insert(BasisIndex::from_pairs([(i, j), (j, k), (k, i)]), Polynomial::one());
            }
        }
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialTensor {
    Delta,
    Kappa,
    Eta,
    EtaBar,
    Tau,
    T,
}

impl SpecialTensor {
    pub const ALL: [SpecialTensor; 6] = [
        SpecialTensor::Delta,
        SpecialTensor::Kappa,
        SpecialTensor::Eta,
        SpecialTensor::EtaBar,
        SpecialTensor::Tau,
        SpecialTensor::T,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialTensor::Delta => "delta",
            SpecialTensor::Kappa => "kappa",
            SpecialTensor::Eta => "eta",
            SpecialTensor::EtaBar => "eta_bar",
            SpecialTensor::Tau => "tau",
            SpecialTensor::T => "T",
        }
    }

    /// The matrix for δ, ϰ, η, η̄, τ; `None` for 𝒯.
    pub fn matrix(self) -> Option<FactorMatrix> {
        match self {
            SpecialTensor::Delta => Some(delta()),
            SpecialTensor::Kappa => Some(kappa()),
            SpecialTensor::Eta => Some(eta()),
            SpecialTensor::EtaBar => Some(eta_bar()),
            SpecialTensor::Tau => Some(tau()),
            SpecialTensor::T => None,
        }
    }
}

/// What `verify_catalog` established for one family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub id: u8,
    pub length: usize,
    pub params: usize,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub shape: Shape,
    /// True when pi12 fixes the symbolic tensor.
    pub pi12_fixed: bool,
    /// (z, z′) with z·w(p) = w(z′·p).
    pub scaling: (i64, i64),
}

fn scaling_pair(id: u8) -> (i64, i64) {
    if LINEAR_FAMILIES.contains(&id) {
        (5, 5)
    } else {
        (8, 2)
    }
}

fn check_family(fam: &OrbitFamily) -> Result<FamilyCheck> {
    let bad = |msg: String| Error::CatalogIntegrity { family: fam.id, msg };
    let w = fam.symbolic(1);
    let orbit_size = orbit_of(&w).len();
    let stab = stabilizer_order(&w);
    if orbit_size != fam.length {
        return Err(bad(format!(
            "orbit has {orbit_size} elements, table says {}",
            fam.length
        )));
    }
    if orbit_size * stab != GROUP_ORDER {
        return Err(bad(format!(
            "orbit {orbit_size} times stabilizer {stab} is not {GROUP_ORDER}"
        )));
    }
    let pi12_fixed = w.pi12() == w;
    match fam.shape {
        Shape::Cube => {
            let sigma = FactorPerm::sigma();
            let mut cyc = Tensor::zero();
            for (alpha, p) in w.entries() {
                cyc.insert(sigma.act_on_index(alpha), p.clone());
            }
            if !pi12_fixed || cyc != w {
                return Err(bad("cube is not symmetric under factor permutations".into()));
            }
        }
        Shape::Square if !pi12_fixed => {
            return Err(bad("u⊗u⊗v is not fixed by pi12".into()));
        }
        _ => {}
    }
    let (z, zp) = scaling_pair(fam.id);
    let scaled_params: Vec<Polynomial> = fam
        .symbolic_params(1)
        .iter()
        .map(|p| p.scale(&Cyclotomic::from_int(zp)))
        .collect();
    let lhs = w.scale(&Polynomial::from_int(z));
    let rhs = fam.instantiate(&scaled_params)?;
    if lhs != rhs {
        return Err(bad(format!("{z}·w(p) differs from w({zp}·p)")));
    }
    Ok(FamilyCheck {
        id: fam.id,
        length: fam.length,
        params: fam.param_count(),
        orbit_size,
        stabilizer_order: stab,
        shape: fam.shape,
        pi12_fixed,
        scaling: (z, zp),
    })
}

/// Recomputes orbit length, stabilizer order, shape symmetry and the
/// scaling law for every family with fresh symbolic parameters.
pub fn verify_catalog() -> Result<Vec<FamilyCheck>> {
    catalog().families().par_iter().map(check_family).collect()
}
