//! Elimination of every orbit type of total length ≤ 23.
//!
//! The prover first re-derives, symbolically, each polynomial identity the
//! argument relies on and records it as a [`Fact`]. Each type multiset is
//! then matched against five rules in a fixed order; a certificate lists
//! the facts the matching rule used. The combinatorial glue between facts
//! is the rule logic in [`Prover::certify`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Cyclotomic, Rational};
use crate::catalog::{catalog, family, family_tensor, matmul_tensor, verify_catalog, FAMILY_COUNT, GROUP_ORDER};
use crate::error::{Error, Result};
use crate::grammar::parse_polynomial;
use crate::group::orbit_of;
use crate::invariants::{class_table, orbit_sum, orbit_sum_checked, project, GammaVector};
use crate::poly::{Letter, Polynomial, Var};
use crate::tensor::{BasisIndex, Tensor};

/// Largest length for which the catalog lists every possible orbit type:
/// no orbit of G has length 19..23, and length 24 is the next divisor of 144.
pub const MAX_SUPPORTED_LENGTH: usize = 23;

/// Types whose orbit sums lie in ⟨γ1, γ2, γ6⟩ and can be swapped for
/// orbits of types 5, 6 and 7.
pub const REDUCIBLE: [u8; 9] = [16, 18, 21, 25, 33, 42, 4, 39, 43];
/// Length-18 types with zero γ9..γ12.
pub const GAMMA_9_12_TYPES: [u8; 10] = [17, 22, 23, 26, 27, 28, 30, 31, 36, 37];
/// Length-18 types with the γ9..γ12 table.
pub const GAMMA_TABLE_TYPES: [u8; 4] = [24, 29, 32, 38];
pub const E_11_12_21_TYPES: [u8; 1] = [35];
/// Types handled by the γ3 = γ5 argument.
pub const REMAINING: [u8; 20] = [1, 2, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 19, 20, 34, 40, 41, 44];

/// Budget of the replacement set σ′, σ″, σ‴ (orbits of types 7, 6, 5).
/// γ9..γ12 of the orbit sums of types 24, 29, 32, 38.
pub const GAMMA_TABLE: [(u8, [&str; 4]); 4] = [
    (24, ["6*a^2*d", "2*a^2*d + 4*a*b*d", "2*b^2*d + 4*a*b*d", "6*b^2*d"]),
    (
        29,
        [
            "6*i*a^2*d",
            "2*i*a^2*d + 4*i*a*b*d",
            "2*i*b^2*d + 4*i*a*b*d",
            "6*i*b^2*d",
        ],
    ),
    (32, ["6*a^2*d", "-2*a^2*d + 4*a*b*d", "2*b^2*d - 4*a*b*d", "-6*b^2*d"]),
    (
        38,
        [
            "6*i*a^2*d",
            "-2*i*a^2*d + 4*i*a*b*d",
            "2*i*b^2*d - 4*i*a*b*d",
            "-6*i*b^2*d",
        ],
    ),
];

const SIGMA_TYPES: [(u8, &[i64]); 3] = [(7, &[1]), (6, &[1]), (5, &[0, 1])];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TypeMultiset {
    /// Family ids, ascending.
    ids: Vec<u8>,
}

impl TypeMultiset {
    pub fn new(mut ids: Vec<u8>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::Invalid("empty type multiset".into()));
        }
        for &id in &ids {
            family(id)?;
        }
        ids.sort_unstable();
        Ok(TypeMultiset { ids })
    }

    /// Parses `9,9,5`.
    pub fn parse(s: &str) -> Result<Self> {
        let ids = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::Invalid(format!("bad family id {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        TypeMultiset::new(ids)
    }

    pub fn ids(&self) -> &[u8] {
        &self.ids
    }

    pub fn counts(&self) -> BTreeMap<u8, usize> {
        let mut m = BTreeMap::new();
        for &id in &self.ids {
            *m.entry(id).or_insert(0) += 1;
        }
        m
    }

    pub fn contains(&self, id: u8) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn total_length(&self) -> usize {
        self.ids.iter().map(|&id| family(id).expect("validated").length).sum()
    }
}

impl fmt::Display for TypeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ids.iter().map(u8::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All multisets of family ids with total orbit length in 1..=max_length,
/// ordered by total length and then lexicographically.
pub fn enumerate_multisets(max_length: usize) -> Vec<TypeMultiset> {
    let lengths: Vec<(u8, usize)> = catalog().families().iter().map(|f| (f.id, f.length)).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(
        lengths: &[(u8, usize)],
        start: usize,
        budget: usize,
        current: &mut Vec<u8>,
        out: &mut Vec<(usize, Vec<u8>)>,
        used: usize,
    ) {
        for k in start..lengths.len() {
            let (id, l) = lengths[k];
            if l > budget {
                continue;
            }
            current.push(id);
            out.push((used + l, current.clone()));
            walk(lengths, k, budget - l, current, out, used + l);
            current.pop();
        }
    }
    walk(&lengths, 0, max_length, &mut current, &mut out, 0);
    out.sort();
    out.into_iter().map(|(_, ids)| TypeMultiset { ids }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    ReducibleTypes,
    #[serde(rename = "GAMMA_9_12")]
    Gamma912,
    DiagonalOrGammaTable,
    #[serde(rename = "E_11_12_21")]
    E111221,
    #[serde(rename = "GAMMA_3_EQ_5")]
    Gamma3Eq5,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::ReducibleTypes,
        Rule::Gamma912,
        Rule::DiagonalOrGammaTable,
        Rule::E111221,
        Rule::Gamma3Eq5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::ReducibleTypes => "REDUCIBLE_TYPES",
            Rule::Gamma912 => "GAMMA_9_12",
            Rule::DiagonalOrGammaTable => "DIAGONAL_OR_GAMMA_TABLE",
            Rule::E111221 => "E_11_12_21",
            Rule::Gamma3Eq5 => "GAMMA_3_EQ_5",
        }
    }

    /// One-paragraph statement of the argument behind the rule.
    pub fn explanation(self) -> &'static str {
        match self {
            Rule::ReducibleTypes => {
                "the orbit sum of a reducible type lies in <g1,g2,g6>, which the orbit sums of \
                 w7(1), w6(1), w5(0,1) span with 1+2+3 = 6 tensors; replacing the orbit gives a \
                 shorter decomposition (or an equally long one free of types 4, 39, 43)"
            }
            Rule::Gamma912 => "every member has g9 = g10 = g11 = g12 identically, but T has g9 = 1 and g10 = 0",
            Rule::DiagonalOrGammaTable => {
                "with type 9 present every member has equal coefficients at all diagonal triples \
                 (g1 = g2) while T has g1 = 1, g2 = 0; otherwise the companions have zero \
                 g9..g12, so g12 = 0 forces b = 0, after which g10 is a nonzero multiple of g9"
            }
            Rule::E111221 => {
                "with type 9 present the diagonal argument applies; otherwise no member involves \
                 the class of e_{11,12,21} (g3 = 0) while T has g3 = 1"
            }
            Rule::Gamma3Eq5 => {
                "every member has g3 = g5 identically (u⊗u⊗v shapes are fixed by pi12, type 44 \
                 has neither), while T has g3 = 1, g5 = 0"
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A symbolically verified statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub key: String,
    pub statement: String,
}

fn fact(key: impl Into<String>, statement: impl Into<String>) -> Fact {
    Fact {
        key: key.into(),
        statement: statement.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationCertificate {
    pub multiset: TypeMultiset,
    pub rule: Rule,
    /// Keys of the facts the rule relied on.
    pub identities: Vec<String>,
}

/// Per-family consequences of the γ table, each a polynomial identity.
#[derive(Clone, Copy, Debug, Default)]
struct Props {
    diag_support: bool,
    g9_12_equal: bool,
    g9_12_zero: bool,
    g1_eq_g2: bool,
    g3_zero: bool,
    g3_eq_g5: bool,
}

fn props(v: &GammaVector) -> Props {
    let g = |i| v.get(i);
    Props {
        diag_support: v.support().iter().all(|i| [1, 2, 6].contains(i)),
        g9_12_equal: g(9) == g(10) && g(9) == g(11) && g(9) == g(12),
        g9_12_zero: (9..=12).all(|i| g(i).is_zero()),
        g1_eq_g2: g(1) == g(2),
        g3_zero: g(3).is_zero(),
        g3_eq_g5: g(3) == g(5),
    }
}

fn step_err(step: &'static str, msg: impl Into<String>) -> Error {
    Error::ProofStep { step, msg: msg.into() }
}

fn param(l: Letter) -> Polynomial {
    Polynomial::param(0, l)
}

/// Orbit-sum γ-coordinates of every family with fresh parameters in slot 0.
/// Each entry is cross-checked against the explicit sum over the orbit.
pub fn gamma_table() -> Result<BTreeMap<u8, GammaVector>> {
    catalog()
        .families()
        .par_iter()
        .map(|f| Ok((f.id, orbit_sum_checked(&f.symbolic(0), f.length)?)))
        .collect()
}

/// Verified facts and per-family properties for one proof run.
pub struct Prover {
    max_length: usize,
    gammas: BTreeMap<u8, GammaVector>,
    props: BTreeMap<u8, Props>,
    t_gamma: GammaVector,
    facts: Vec<Fact>,
}

fn ids(set: &[u8]) -> String {
    set.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
}

impl Prover {
    pub fn new(max_length: usize) -> Result<Prover> {
        if max_length == 0 || max_length > MAX_SUPPORTED_LENGTH {
            return Err(Error::Invalid(format!(
                "max length must be in 1..={MAX_SUPPORTED_LENGTH}, got {max_length}"
            )));
        }
        let checks = verify_catalog()?;
        let mut facts = vec![fact(
            "catalog",
            format!(
                "all {} families: orbit of fresh symbolic instance has the tabulated length, \
                 orbit length times stabilizer order is {GROUP_ORDER}, shapes and scaling laws hold",
                checks.len()
            ),
        )];
        facts.push(fact(
            "catalog-completeness",
            "assumed: the catalog lists every orbit type of length <= 18; G has no orbits of \
             length 19..23 since 144 has no divisor there",
        ));
        let gammas = gamma_table()?;
        let props = gammas.iter().map(|(&id, v)| (id, props(v))).collect();
        let t_gamma = project(&matmul_tensor());
        if t_gamma != GammaVector::from_ints([1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0]) {
            return Err(step_err("projection of T", format!("p(T) = {t_gamma}")));
        }
        facts.push(fact("p(T)", format!("p(T) = {t_gamma}")));
        Ok(Prover {
            max_length,
            gammas,
            props,
            t_gamma,
            facts,
        })
    }

    pub fn gammas(&self) -> &BTreeMap<u8, GammaVector> {
        &self.gammas
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    fn gamma(&self, id: u8) -> &GammaVector {
        &self.gammas[&id]
    }

    fn prop(&self, id: u8) -> Props {
        self.props[&id]
    }

    fn length(id: u8) -> usize {
        family(id).expect("catalog id").length
    }

    /// Diagonal support of the reducible types, the three replacement
    /// orbit sums, their span, and the length budget.
    pub fn check_reducible(&self) -> Result<Vec<Fact>> {
        const STEP: &str = "reducible types";
        let mut out = Vec::new();
        for id in REDUCIBLE {
            let v = self.gamma(id);
            if !self.prop(id).diag_support {
                return Err(step_err(STEP, format!("family {id}: orbit sum {v} leaves <g1,g2,g6>")));
            }
            out.push(fact(format!("diag-support[{id}]"), format!("orbit sum of w{id} = {v}")));
        }
        let expected = [
            GammaVector::from_ints([1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
            GammaVector::from_ints([2, -1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0]),
            GammaVector::from_ints([1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
        ];
        let mut rows = Vec::new();
        let mut budget = 0;
        for ((id, vals), want) in SIGMA_TYPES.iter().zip(&expected) {
            let params: Vec<Cyclotomic> = vals.iter().map(|&v| Cyclotomic::from_int(v)).collect();
            let l = Self::length(*id);
            let s = orbit_sum_checked(&family_tensor(*id, &params)?, l)?;
            if &s != want {
                return Err(step_err(
                    STEP,
                    format!("orbit sum of w{id}{vals:?} is {s}, expected {want}"),
                ));
            }
            budget += l;
            rows.push([1, 2, 6].map(|i| s.get(i).as_constant().expect("constant")));
            out.push(fact(
                format!("sigma[{id}]"),
                format!("orbit sum of w{id}{vals:?} = {s}"),
            ));
        }
        let det = det3(&rows);
        if det.is_zero() {
            return Err(step_err(STEP, "replacement orbit sums do not span <g1,g2,g6>"));
        }
        out.push(fact(
            "sigma-span",
            format!("det of the three orbit sums on (g1,g2,g6) = {det}"),
        ));
        for id in REDUCIBLE {
            let l = Self::length(id);
            let ok = if [4, 39, 43].contains(&id) {
                l >= budget
            } else {
                l > budget
            };
            if !ok {
                return Err(step_err(STEP, format!("family {id} has length {l}, budget {budget}")));
            }
        }
        out.push(fact(
            "replacement-budget",
            format!(
                "replacement uses <= {budget} tensors; types {} have length > {budget}, types 4,39,43 length {budget}",
                ids(&REDUCIBLE[..6])
            ),
        ));
        Ok(out)
    }

    /// Types in `GAMMA_9_12_TYPES` plus every family short enough to share
    /// a decomposition with one have g9 = g10 = g11 = g12.
    pub fn check_gamma_9_12(&self) -> Result<Vec<Fact>> {
        const STEP: &str = "equal g9..g12";
        let mut out = Vec::new();
        for id in GAMMA_9_12_TYPES {
            if Self::length(id) != 18 || !self.prop(id).g9_12_zero {
                return Err(step_err(STEP, format!("family {id}: {}", self.gamma(id))));
            }
            out.push(fact(
                format!("g9..g12=0[{id}]"),
                format!("orbit sum of w{id} has g9 = g10 = g11 = g12 = 0"),
            ));
        }
        let residual = self.max_length.saturating_sub(18);
        let companions: Vec<u8> = catalog()
            .families()
            .iter()
            .filter(|f| f.length <= residual)
            .map(|f| f.id)
            .collect();
        out.push(fact(
            "residual-budget",
            format!(
                "a length-18 orbit leaves {residual} tensors; families that fit: {{{}}}",
                ids(&companions)
            ),
        ));
        for &id in &companions {
            let p = self.prop(id);
            if !p.g9_12_equal {
                return Err(step_err(STEP, format!("companion {id}: {}", self.gamma(id))));
            }
            let what = if p.g9_12_zero {
                "g9 = g10 = g11 = g12 = 0".to_string()
            } else {
                format!("g9 = g10 = g11 = g12 = {}", self.gamma(id).get(9))
            };
            out.push(fact(
                format!("g9..g12-equal[{id}]"),
                format!("orbit sum of w{id} has {what}"),
            ));
        }
        let b = param(Letter::B);
        let four_b3 = b.pow(3).scale(&Cyclotomic::from_int(4));
        if (9..=12).any(|i| self.gamma(9).get(i) != &four_b3) {
            return Err(step_err(STEP, format!("family 9: {}", self.gamma(9))));
        }
        out.push(fact(
            "w9-g9..g12",
            "orbit sum of w9(a,b) has g9 = g10 = g11 = g12 = 4*b^3",
        ));
        if self.t_gamma.get(9) == self.t_gamma.get(10) {
            return Err(step_err(STEP, "T has equal g9 and g10"));
        }
        out.push(fact("T-g9-g10", "T has (g9, g10) = (1, 0)"));
        Ok(out)
    }

    fn check_diagonal_case(&self, step: &'static str, types: &[u8], out: &mut Vec<Fact>) -> Result<()> {
        for &id in types {
            let w = family(id)?.symbolic(0);
            if let Some((alpha, _)) = w.entries().find(|(a, _)| a.is_diagonal_triple()) {
                return Err(step_err(step, format!("w{id} has a term at {alpha}")));
            }
            if !self.prop(id).g1_eq_g2 {
                return Err(step_err(step, format!("family {id}: g1 != g2")));
            }
            out.push(fact(
                format!("no-diagonal[{id}]"),
                format!("w{id} has no term e_(ii,jj,kk)"),
            ));
        }
        Ok(())
    }

    /// Shared diagonal facts: type 9's orbit sum and T on diagonal triples.
    fn check_diagonal_common(&self, step: &'static str, out: &mut Vec<Fact>) -> Result<()> {
        if out.iter().any(|f| f.key == "w9-diagonal") {
            return Ok(());
        }
        let w9 = family(9)?.symbolic(0);
        let mut direct = Tensor::zero();
        for t in orbit_of(&w9) {
            direct.add_assign(&t);
        }
        let a3 = param(Letter::A).pow(3).scale(&Cyclotomic::from_int(4));
        for alpha in BasisIndex::all().filter(|a| a.is_diagonal_triple()) {
            if direct.get(alpha) != a3 {
                return Err(step_err(
                    step,
                    format!("orbit sum of w9 at {alpha} is {}", direct.get(alpha)),
                ));
            }
        }
        out.push(fact(
            "w9-diagonal",
            "orbit sum of w9(a,b) is 4*a^3 at every e_(ii,jj,kk)",
        ));
        for id in [7u8, 9] {
            if !self.prop(id).g1_eq_g2 {
                return Err(step_err(step, format!("family {id}: g1 != g2")));
            }
            out.push(fact(
                format!("g1=g2[{id}]"),
                format!("orbit sum of w{id} has g1 = g2 = {}", self.gamma(id).get(1)),
            ));
        }
        let t = matmul_tensor();
        let (d1, d2) = (
            BasisIndex::parse_short("11,11,11")?,
            BasisIndex::parse_short("11,11,22")?,
        );
        if t.get(d1) != Polynomial::one() || !t.get(d2).is_zero() {
            return Err(step_err(step, "T on diagonal triples"));
        }
        out.push(fact("T-diagonal", "T has coefficient 1 at 11,11,11 and 0 at 11,11,22"));
        Ok(())
    }

    /// Diagonal case and the γ9..γ12 table case for types 24, 29, 32, 38.
    pub fn check_gamma_table(&self) -> Result<Vec<Fact>> {
        const STEP: &str = "gamma table";
        let mut out = Vec::new();
        self.check_diagonal_case(STEP, &GAMMA_TABLE_TYPES, &mut out)?;
        self.check_diagonal_common(STEP, &mut out)?;
        for id in [5u8, 6, 7] {
            if !self.prop(id).g9_12_zero {
                return Err(step_err(STEP, format!("family {id} involves g9..g12")));
            }
            out.push(fact(
                format!("g9..g12=0[{id}]"),
                format!("orbit sum of w{id} has g9 = g10 = g11 = g12 = 0"),
            ));
        }
        let (a, b, d) = (param(Letter::A), param(Letter::B), param(Letter::D));
        let a2d = &(&a * &a) * &d;
        let b2d = &(&b * &b) * &d;
        for (id, cells) in GAMMA_TABLE {
            let v = self.gamma(id);
            for (k, cell) in cells.iter().enumerate() {
                let want = parse_polynomial(cell)?;
                if v.get(9 + k) != &want {
                    return Err(step_err(
                        STEP,
                        format!("family {id}: g{} = {}, expected {cell}", 9 + k, v.get(9 + k)),
                    ));
                }
            }
            out.push(fact(
                format!("g9..g12[{id}]"),
                format!(
                    "orbit sum of w{id}: g9 = {}, g10 = {}, g11 = {}, g12 = {}",
                    v.get(9),
                    v.get(10),
                    v.get(11),
                    v.get(12)
                ),
            ));
            let c12 = scalar_multiple(v.get(12), &b2d)
                .ok_or_else(|| step_err(STEP, format!("family {id}: g12 = {} is not c*b^2*d", v.get(12))))?;
            let c9 = scalar_multiple(v.get(9), &a2d)
                .ok_or_else(|| step_err(STEP, format!("family {id}: g9 = {} is not c*a^2*d", v.get(9))))?;
            let zero_b = BTreeMap::from([(Var::param(0, Letter::B), Cyclotomic::zero())]);
            let g10_b0 = v.get(10).substitute(&zero_b);
            let lambda = scalar_multiple(&g10_b0, v.get(9))
                .and_then(|c| c.as_rational().cloned())
                .filter(|q| !q.is_zero())
                .ok_or_else(|| step_err(STEP, format!("family {id}: g10 at b = 0 is {g10_b0}")))?;
            out.push(fact(
                format!("chain[{id}]"),
                format!(
                    "g12 = ({c12})*b^2*d, g9 = ({c9})*a^2*d, and at b = 0: g10 = {} * g9 with the factor nonzero",
                    fmt_q(&lambda)
                ),
            ));
        }
        Ok(out)
    }

    /// Type 35: diagonal case, else nothing reaches the class of e_{11,12,21}.
    pub fn check_e_11_12_21(&self) -> Result<Vec<Fact>> {
        const STEP: &str = "class of e_11,12,21";
        let mut out = Vec::new();
        self.check_diagonal_case(STEP, &E_11_12_21_TYPES, &mut out)?;
        self.check_diagonal_common(STEP, &mut out)?;
        for id in [35u8, 5, 6, 7] {
            if !self.prop(id).g3_zero {
                return Err(step_err(STEP, format!("family {id}: g3 = {}", self.gamma(id).get(3))));
            }
            out.push(fact(format!("g3=0[{id}]"), format!("orbit sum of w{id} has g3 = 0")));
        }
        if self.t_gamma.get(3).is_zero() {
            return Err(step_err(STEP, "T has g3 = 0"));
        }
        out.push(fact("T-g3", "T has g3 = 1"));
        Ok(out)
    }

    /// The leftover types all have g3 = g5.
    pub fn check_final(&self) -> Result<Vec<Fact>> {
        const STEP: &str = "g3 = g5";
        let mut out = Vec::new();
        let groups: [&[u8]; 5] = [
            &REDUCIBLE,
            &GAMMA_9_12_TYPES,
            &GAMMA_TABLE_TYPES,
            &E_11_12_21_TYPES,
            &REMAINING,
        ];
        let mut seen = BTreeSet::new();
        for g in groups {
            for &id in g {
                if !seen.insert(id) {
                    return Err(step_err(STEP, format!("family {id} appears in two rule sets")));
                }
            }
        }
        if seen != (1..=FAMILY_COUNT).collect() {
            return Err(step_err(STEP, "rule sets do not cover all families"));
        }
        out.push(fact(
            "partition",
            format!(
                "rule sets partition 1..{FAMILY_COUNT}; remaining = {{{}}}",
                ids(&REMAINING)
            ),
        ));
        let q3 = BasisIndex::parse_short("11,12,21")?;
        let q5 = BasisIndex::parse_short("11,21,12")?;
        let classes = class_table();
        for id in REMAINING {
            let w = family(id)?.symbolic(0);
            let v = self.gamma(id);
            if id == 44 {
                let bad = w.entries().any(|(alpha, _)| {
                    let c = classes.class_of(alpha);
                    c == classes.class_of(q3) || c == classes.class_of(q5)
                });
                if bad || !v.get(3).is_zero() || !v.get(5).is_zero() {
                    return Err(step_err(STEP, "w44 touches classes 3 or 5"));
                }
                out.push(fact(
                    "g3=g5=0[44]",
                    "w44 has no term in classes 3 and 5, so g3 = g5 = 0",
                ));
                continue;
            }
            if w.pi12() != w {
                return Err(step_err(STEP, format!("w{id} is not fixed by pi12")));
            }
            if !self.prop(id).g3_eq_g5 {
                return Err(step_err(
                    STEP,
                    format!("family {id}: g3 = {}, g5 = {}", v.get(3), v.get(5)),
                ));
            }
            out.push(fact(
                format!("g3=g5[{id}]"),
                format!("pi12 fixes w{id}; orbit sum has g3 = g5 = {}", v.get(3)),
            ));
        }
        if self.t_gamma.get(3) == self.t_gamma.get(5) {
            return Err(step_err(STEP, "T has g3 = g5"));
        }
        out.push(fact("T-g3-g5", "T has (g3, g5) = (1, 0)"));
        Ok(out)
    }

    /// Runs every check and stores the resulting facts.
    pub fn check_all(&mut self) -> Result<()> {
        let mut all = Vec::new();
        all.extend(self.check_reducible()?);
        all.extend(self.check_gamma_9_12()?);
        all.extend(self.check_gamma_table()?);
        all.extend(self.check_e_11_12_21()?);
        all.extend(self.check_final()?);
        for f in all {
            if !self.facts.iter().any(|g| g.key == f.key) {
                self.facts.push(f);
            }
        }
        Ok(())
    }

    fn all_members(&self, m: &TypeMultiset, test: impl Fn(Props) -> bool) -> bool {
        m.ids().iter().all(|&id| test(self.prop(id)))
    }

    fn diagonal_keys(&self, m: &TypeMultiset, keys: &mut Vec<String>) -> bool {
        if !self.all_members(m, |p| p.g1_eq_g2) {
            return false;
        }
        keys.extend(["w9-diagonal".to_string(), "T-diagonal".to_string()]);
        for id in m.counts().into_keys() {
            keys.push(if [7, 9].contains(&id) {
                format!("g1=g2[{id}]")
            } else {
                format!("no-diagonal[{id}]")
            });
        }
        true
    }

    /// The first rule that eliminates `m`, or `None` for a survivor.
    pub fn certify(&self, m: &TypeMultiset) -> Option<EliminationCertificate> {
        let cert = |rule, identities| {
            Some(EliminationCertificate {
                multiset: m.clone(),
                rule,
                identities,
            })
        };
        let distinct: Vec<u8> = m.counts().into_keys().collect();
        let any_in = |set: &[u8]| distinct.iter().copied().find(|id| set.contains(id));

        if let Some(id) = any_in(&REDUCIBLE) {
            let mut keys = vec![format!("diag-support[{id}]")];
            keys.extend(SIGMA_TYPES.iter().map(|(s, _)| format!("sigma[{s}]")));
            keys.extend(["sigma-span".to_string(), "replacement-budget".to_string()]);
            return cert(Rule::ReducibleTypes, keys);
        }
        if any_in(&GAMMA_9_12_TYPES).is_some() && self.all_members(m, |p| p.g9_12_equal) {
            let mut keys = vec![
                "p(T)".to_string(),
                "T-g9-g10".to_string(),
                "residual-budget".to_string(),
            ];
            for &id in &distinct {
                keys.push(if GAMMA_9_12_TYPES.contains(&id) {
                    format!("g9..g12=0[{id}]")
                } else {
                    format!("g9..g12-equal[{id}]")
                });
            }
            if m.contains(9) {
                keys.push("w9-g9..g12".into());
            }
            return cert(Rule::Gamma912, keys);
        }
        if let Some(id) = any_in(&GAMMA_TABLE_TYPES) {
            let mut keys = Vec::new();
            if m.contains(9) {
                if self.diagonal_keys(m, &mut keys) {
                    return cert(Rule::DiagonalOrGammaTable, keys);
                }
            } else {
                let table_members = m.ids().iter().filter(|x| GAMMA_TABLE_TYPES.contains(x)).count();
                let rest_zero = m
                    .ids()
                    .iter()
                    .filter(|x| !GAMMA_TABLE_TYPES.contains(x))
                    .all(|&x| self.prop(x).g9_12_zero);
                if table_members == 1 && rest_zero {
                    keys.extend(["p(T)".to_string(), format!("g9..g12[{id}]"), format!("chain[{id}]")]);
                    for &x in distinct.iter().filter(|&&x| x != id) {
                        keys.push(format!("g9..g12=0[{x}]"));
                    }
                    return cert(Rule::DiagonalOrGammaTable, keys);
                }
            }
            return None;
        }
        if any_in(&E_11_12_21_TYPES).is_some() {
            let mut keys = Vec::new();
            if m.contains(9) {
                if self.diagonal_keys(m, &mut keys) {
                    return cert(Rule::E111221, keys);
                }
            } else if self.all_members(m, |p| p.g3_zero) {
                keys.push("T-g3".to_string());
                keys.extend(distinct.iter().map(|x| format!("g3=0[{x}]")));
                return cert(Rule::E111221, keys);
            }
            return None;
        }
        if distinct.iter().all(|id| REMAINING.contains(id)) && self.all_members(m, |p| p.g3_eq_g5) {
            let mut keys = vec!["partition".to_string(), "T-g3-g5".to_string()];
            keys.extend(distinct.iter().map(|&x| {
                if x == 44 {
                    "g3=g5=0[44]".into()
                } else {
                    format!("g3=g5[{x}]")
                }
            }));
            return cert(Rule::Gamma3Eq5, keys);
        }
        None
    }

    /// Runs all checks, then certifies every multiset up to the max length.
    pub fn run(mut self) -> Result<TheoremReport> {
        self.check_all()?;
        let multisets = enumerate_multisets(self.max_length);
        let results: Vec<(TypeMultiset, Option<EliminationCertificate>)> = multisets
            .into_par_iter()
            .map(|m| {
                let c = self.certify(&m);
                (m, c)
            })
            .collect();
        let mut certificates = Vec::new();
        let mut survivors = Vec::new();
        for (m, c) in results {
            match c {
                Some(c) => certificates.push(c),
                None => survivors.push(m),
            }
        }
        let known: BTreeSet<&str> = self.facts.iter().map(|f| f.key.as_str()).collect();
        for c in &certificates {
            if let Some(k) = c.identities.iter().find(|k| !known.contains(k.as_str())) {
                return Err(step_err(
                    "certificate",
                    format!("{} cites unverified fact {k}", c.multiset),
                ));
            }
        }
        Ok(TheoremReport {
            max_length: self.max_length,
            multiset_count: certificates.len() + survivors.len(),
            certificates,
            survivors,
            facts: self.facts,
        })
    }
}

/// c with p = c·q for a constant c, if such a c exists.
fn scalar_multiple(p: &Polynomial, q: &Polynomial) -> Option<Cyclotomic> {
    let (m, c) = q.terms().next()?;
    let ratio = &p.coeff(m) * &c.inv().ok()?;
    (q.scale(&ratio) == *p).then_some(ratio)
}

fn det3(rows: &[[Cyclotomic; 3]]) -> Cyclotomic {
    let m = |r: usize, c: usize| &rows[r][c];
    let minor = |c1: usize, c2: usize| &(m(1, c1) * m(2, c2)) - &(m(1, c2) * m(2, c1));
    &(&(m(0, 0) * &minor(1, 2)) - &(m(0, 1) * &minor(0, 2))) + &(m(0, 2) * &minor(0, 1))
}

fn fmt_q(q: &Rational) -> String {
    if q.is_integer() {
        q.to_string()
    } else {
        format!("({q})")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub max_length: usize,
    pub multiset_count: usize,
    pub certificates: Vec<EliminationCertificate>,
    pub survivors: Vec<TypeMultiset>,
    pub facts: Vec<Fact>,
}

impl TheoremReport {
    pub fn verified(&self) -> bool {
        self.survivors.is_empty()
    }

    pub fn summary_line(&self) -> String {
        let head = if self.verified() { "VERIFIED" } else { "NOT VERIFIED" };
        format!(
            "{head}: {} survivors of {} multisets at max length {}",
            self.survivors.len(),
            self.multiset_count,
            self.max_length
        )
    }

    pub fn rule_counts(&self) -> BTreeMap<Rule, usize> {
        let mut m: BTreeMap<Rule, usize> = Rule::ALL.iter().map(|&r| (r, 0)).collect();
        for c in &self.certificates {
            *m.entry(c.rule).or_insert(0) += 1;
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("verified identities:\n");
        for f in &self.facts {
            s.push_str(&format!("  [{}] {}\n", f.key, f.statement));
        }
        s.push_str("\nrules, applied in this order:\n");
        for r in Rule::ALL {
            s.push_str(&format!("  {}: {}\n", r.name(), r.explanation()));
        }
        s.push_str(
            "\nparameter values making an orbit shorter than its family's length give a decomposition \
             of another type, which the enumeration covers at that smaller length.\n",
        );
        s.push_str("\ncertificates:\n");
        for c in &self.certificates {
            s.push_str(&format!("  {} -> {}\n", c.multiset, c.rule));
        }
        for m in &self.survivors {
            s.push_str(&format!("  {m} -> SURVIVOR\n"));
        }
        s.push_str("\nrule counts:\n");
        for (r, n) in self.rule_counts() {
            s.push_str(&format!("  {r}: {n}\n"));
        }
        s.push('\n');
        s.push_str(&self.summary_line());
        s.push('\n');
        s
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            summary: String,
            max_length: usize,
            multiset_count: usize,
            survivors: &'a [TypeMultiset],
            facts: &'a [Fact],
            certificates: &'a [EliminationCertificate],
        }
        serde_json::to_string_pretty(&Out {
            summary: self.summary_line(),
            max_length: self.max_length,
            multiset_count: self.multiset_count,
            survivors: &self.survivors,
            facts: &self.facts,
            certificates: &self.certificates,
        })
        .expect("report serializes")
    }
}

/// Full pipeline: catalog, identities, enumeration and certification.
pub fn verify_theorem(max_length: usize) -> Result<TheoremReport> {
    Prover::new(max_length)?.run()
}

/// Σ over the multiset of l·p(w) for the given concrete parameters.
pub fn instantiated_gamma(m: &TypeMultiset, params: &[Vec<Cyclotomic>]) -> Result<GammaVector> {
    let mut acc = GammaVector::zero();
    for (&id, vals) in m.ids().iter().zip(params) {
        let fam = family(id)?;
        acc = acc.add(&orbit_sum(&fam.concrete(vals)?, fam.length));
    }
    Ok(acc)
}

pub fn gamma_of_t() -> GammaVector {
    project(&matmul_tensor())
}
