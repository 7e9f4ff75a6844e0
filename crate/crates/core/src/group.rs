//! The symmetry groups G = A×B ≅ S₄×S₃ and G₁ = A₁×B acting on N.
//!
//! A₁ is the group of signed 3×3 permutation matrices, A its determinant-one
//! subgroup, acting by conjugation on every tensor factor. B = ⟨ρ, σ⟩ ≅ S₃
//! permutes the factors: σ(x⊗y⊗z) = z⊗x⊗y and ρ(x⊗y⊗z) = yᵗ⊗xᵗ⊗zᵗ.
//! Every element maps a basis tensor e_α to ±e_β.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::LazyLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::tensor::{BasisIndex, FactorMatrix, Tensor, BASIS_SIZE};

/// Permutation of {0, 1, 2}, stored as the image of each point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm3([u8; 3]);

impl Perm3 {
    pub const IDENTITY: Perm3 = Perm3([0, 1, 2]);

    pub fn new(images: [u8; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &x in &images {
            if x > 2 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm3(images))
    }

    /// All six permutations in lexicographic order of their image arrays.
    pub fn all() -> [Perm3; 6] {
        [
            Perm3([0, 1, 2]),
            Perm3([0, 2, 1]),
            Perm3([1, 0, 2]),
            Perm3([1, 2, 0]),
            Perm3([2, 0, 1]),
            Perm3([2, 1, 0]),
        ]
    }

    pub fn apply(self, k: u8) -> u8 {
        self.0[k as usize]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm3) -> Perm3 {
        Perm3(other.0.map(|k| self.0[k as usize]))
    }

    pub fn inverse(self) -> Perm3 {
        let mut out = [0u8; 3];
        for (k, &img) in self.0.iter().enumerate() {
            out[img as usize] = k as u8;
        }
        Perm3(out)
    }

    pub fn is_odd(self) -> bool {
        let mut inversions = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }

    pub fn sign(self) -> i8 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    /// Parses cycle notation on 1..=3, e.g. `(123)`, `(13)(2)` or `()`.
    pub fn parse_cycles(s: &str) -> Result<Perm3> {
        let bad = |m: &str| Error::Invalid(format!("bad permutation {s:?}: {m}"));
        let mut images = [0u8, 1, 2];
        let mut used = [false; 3];
        let mut rest = s.trim();
        if rest.is_empty() {
            return Err(bad("empty"));
        }
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(|| bad("unclosed cycle"))?;
            if !rest.starts_with('(') {
                return Err(bad("expected '('"));
            }
            let body = &rest[1..body_end];
            let pts: Vec<u8> = body
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '1'..='3' => Ok(c as u8 - b'1'),
                    _ => Err(bad("points must be 1, 2 or 3")),
                })
                .collect::<Result<_>>()?;
            for &p in &pts {
                if used[p as usize] {
                    return Err(bad("point repeated"));
                }
                used[p as usize] = true;
            }
            for k in 0..pts.len() {
                images[pts[k] as usize] = pts[(k + 1) % pts.len()];
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Perm3::new(images).ok_or_else(|| bad("not a permutation"))
    }
}

impl fmt::Display for Perm3 {
    /// Cycle notation on 1..=3 without fixed points; `()` is the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = [false; 3];
        let mut wrote = false;
        for start in 0..3u8 {
            if seen[start as usize] || self.apply(start) == start {
                continue;
            }
            f.write_str("(")?;
            let mut k = start;
            while !seen[k as usize] {
                seen[k as usize] = true;
                write!(f, "{}", k + 1)?;
                k = self.apply(k);
            }
            f.write_str(")")?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// The matrix c·π̂ with c = diag(ε₁, ε₂, ε₃) and π̂e_k = e_{π(k)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialMatrix {
    pub perm: Perm3,
    pub signs: [i8; 3],
}

impl MonomialMatrix {
    pub const IDENTITY: MonomialMatrix = MonomialMatrix {
        perm: Perm3::IDENTITY,
        signs: [1, 1, 1],
    };

    pub fn new(perm: Perm3, signs: [i8; 3]) -> Self {
        assert!(signs.iter().all(|s| s.abs() == 1));
        MonomialMatrix { perm, signs }
    }

    pub fn diagonal(signs: [i8; 3]) -> Self {
        Self::new(Perm3::IDENTITY, signs)
    }

    pub fn det(&self) -> i8 {
        self.perm.sign() * self.signs.iter().product::<i8>()
    }

    pub fn to_dense(&self) -> [[i8; 3]; 3] {
        let mut m = [[0i8; 3]; 3];
        for k in 0..3u8 {
            let r = self.perm.apply(k);
            m[r as usize][k as usize] = self.signs[r as usize];
        }
        m
    }

    pub fn from_dense(m: [[i8; 3]; 3]) -> Option<Self> {
        let mut images = [0u8; 3];
        let mut signs = [0i8; 3];
        for k in 0..3 {
            let rows: Vec<usize> = (0..3).filter(|&r| m[r][k] != 0).collect();
            if rows.len() != 1 || m[rows[0]][k].abs() != 1 {
                return None;
            }
            images[k] = rows[0] as u8;
            signs[rows[0]] = m[rows[0]][k];
        }
        Some(MonomialMatrix {
            perm: Perm3::new(images)?,
            signs,
        })
    }

    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let (a, b) = (self.to_dense(), other.to_dense());
        let mut m = [[0i8; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| a[r][k] * b[k][c]).sum();
            }
        }
        MonomialMatrix::from_dense(m).expect("monomial matrices are closed under products")
    }

    /// a·e_ij·a⁻¹ = ε_{π(i)}ε_{π(j)}·e_{π(i)π(j)}; indices 1-based.
    fn conjugate_unit(&self, (i, j): (u8, u8)) -> ((u8, u8), i8) {
        let pi = self.perm.apply(i - 1);
        let pj = self.perm.apply(j - 1);
        ((pi + 1, pj + 1), self.signs[pi as usize] * self.signs[pj as usize])
    }

    /// a·x·a⁻¹ for a symbolic matrix x (a⁻¹ = aᵗ).
    pub fn conjugate_matrix(&self, x: &FactorMatrix) -> FactorMatrix {
        let a = dense_as_factor(self.to_dense());
        a.matmul(x).matmul(&a.transpose())
    }
}

fn dense_as_factor(m: [[i8; 3]; 3]) -> FactorMatrix {
    FactorMatrix::from_rows(m.map(|row| row.map(|x| Polynomial::from_int(x as i64))))
}

/// Generators of B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Rho,
    Sigma,
}

impl Gen {
    /// Position map on the three tensor factors.
    fn perm(self) -> Perm3 {
        match self {
            Gen::Sigma => Perm3([1, 2, 0]),
            Gen::Rho => Perm3([1, 0, 2]),
        }
    }

    fn act_on_index(self, alpha: BasisIndex) -> BasisIndex {
        let [p1, p2, p3] = alpha.pairs();
        let t = |(i, j): (u8, u8)| (j, i);
        match self {
            Gen::Sigma => BasisIndex::from_pairs([p3, p1, p2]),
            Gen::Rho => BasisIndex::from_pairs([t(p2), t(p1), t(p3)]),
        }
    }

    fn act_on_factors(self, [x, y, z]: [FactorMatrix; 3]) -> [FactorMatrix; 3] {
        match self {
            Gen::Sigma => [z, x, y],
            Gen::Rho => [y.transpose(), x.transpose(), z.transpose()],
        }
    }
}

/// Element of B ≅ S₃, identified with its permutation of factor positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorPerm {
    perm: Perm3,
}

const NORMAL_FORMS: [&[Gen]; 6] = [
    &[],
    &[Gen::Sigma],
    &[Gen::Sigma, Gen::Sigma],
    &[Gen::Rho],
    &[Gen::Rho, Gen::Sigma],
    &[Gen::Rho, Gen::Sigma, Gen::Sigma],
];

impl FactorPerm {
    pub const IDENTITY: FactorPerm = FactorPerm { perm: Perm3::IDENTITY };

    pub fn sigma() -> Self {
        FactorPerm {
            perm: Gen::Sigma.perm(),
        }
    }

    pub fn rho() -> Self {
        FactorPerm { perm: Gen::Rho.perm() }
    }

    /// Product g₁g₂⋯gₙ (gₙ acts first).
    pub fn from_word(word: &[Gen]) -> Self {
        let perm = word.iter().fold(Perm3::IDENTITY, |acc, g| acc.compose(g.perm()));
        FactorPerm { perm }
    }

    /// The six elements in normal-form order 1, σ, σ², ρ, ρσ, ρσ².
    pub fn all() -> [FactorPerm; 6] {
        NORMAL_FORMS.map(FactorPerm::from_word)
    }

    pub fn word(&self) -> &'static [Gen] {
        NORMAL_FORMS
            .iter()
            .find(|w| FactorPerm::from_word(w) == *self)
            .expect("every element of S3 has a normal form")
    }

    pub fn perm(&self) -> Perm3 {
        self.perm
    }

    pub fn mul(&self, other: &FactorPerm) -> FactorPerm {
        FactorPerm {
            perm: self.perm.compose(other.perm),
        }
    }

    /// Index action evaluated generator by generator.
    pub fn act_on_index(&self, alpha: BasisIndex) -> BasisIndex {
        self.word().iter().rev().fold(alpha, |acc, g| g.act_on_index(acc))
    }

    pub fn act_on_factors(&self, factors: [FactorMatrix; 3]) -> [FactorMatrix; 3] {
        self.word().iter().rev().fold(factors, |acc, g| g.act_on_factors(acc))
    }

    pub fn parse_word(s: &str) -> Result<FactorPerm> {
        let s = s.trim();
        if matches!(s, "1" | "e" | "id") {
            return Ok(FactorPerm::IDENTITY);
        }
        let mut word = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Invalid(format!("bad exponent in {s:?}")))?,
                ),
                None => (factor, 1),
            };
            let g = match name {
                "rho" => Gen::Rho,
                "sigma" => Gen::Sigma,
                _ => return Err(Error::Invalid(format!("unknown generator {name:?}"))),
            };
            word.extend(std::iter::repeat_n(g, exp));
        }
        Ok(FactorPerm::from_word(&word))
    }
}

impl fmt::Display for FactorPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.word() {
            [] => "1",
            [Gen::Sigma] => "sigma",
            [Gen::Sigma, Gen::Sigma] => "sigma^2",
            [Gen::Rho] => "rho",
            [Gen::Rho, Gen::Sigma] => "rho*sigma",
            _ => "rho*sigma^2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub a: MonomialMatrix,
    pub b: FactorPerm,
}

/// Image of a basis index together with its sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedIndexMap {
    pub image: BasisIndex,
    pub sign: i8,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        a: MonomialMatrix::IDENTITY,
        b: FactorPerm::IDENTITY,
    };

    pub fn new(a: MonomialMatrix, b: FactorPerm) -> Self {
        GroupElement { a, b }
    }

    pub fn in_g(&self) -> bool {
        self.a.det() == 1
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a.mul(&other.a),
            b: self.b.mul(&other.b),
        }
    }

    /// The pair (line permutation of a, factor permutation of b).
    pub fn phi(&self) -> (Perm3, Perm3) {
        (self.a.perm, self.b.perm)
    }

    pub fn act_on_index(&self, alpha: BasisIndex) -> SignedIndexMap {
        let mut sign = 1i8;
        let pairs = alpha.pairs().map(|p| {
            let (q, s) = self.a.conjugate_unit(p);
            sign *= s;
            q
        });
        let image = self.b.act_on_index(BasisIndex::from_pairs(pairs));
        SignedIndexMap { image, sign }
    }

    /// Matrix-level action on a factor triple (x, y, z).
    pub fn act_on_factors(&self, factors: &[FactorMatrix; 3]) -> [FactorMatrix; 3] {
        let conj = factors.clone().map(|m| self.a.conjugate_matrix(&m));
        self.b.act_on_factors(conj)
    }

    pub fn parse(s: &str) -> Result<GroupElement> {
        let bad = |m: &str| Error::Invalid(format!("bad group element {s:?}: {m}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (a_part, b_part) = compact.split_once(";b=").ok_or_else(|| bad("expected ';b='"))?;
        let a_body = a_part
            .strip_prefix("a=(perm=")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad("expected a=(perm=...,signs=...)"))?;
        let (perm_s, signs_s) = a_body.rsplit_once(",signs=").ok_or_else(|| bad("missing signs"))?;
        let perm = Perm3::parse_cycles(perm_s)?;
        let signs: Vec<i8> = signs_s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(bad("signs must be + or -")),
            })
            .collect::<Result<_>>()?;
        let signs: [i8; 3] = signs.try_into().map_err(|_| bad("need three signs"))?;
        Ok(GroupElement {
            a: MonomialMatrix::new(perm, signs),
            b: FactorPerm::parse_word(b_part)?,
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs: String = self.a.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        write!(f, "a=(perm={},signs={});b={}", self.a.perm, signs, self.b)
    }
}

/// Which group to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    G,
    G1,
}

const SIGN_VECTORS: [[i8; 3]; 8] = [
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [1, -1, -1],
    [-1, 1, 1],
    [-1, 1, -1],
    [-1, -1, 1],
    [-1, -1, -1],
];

/// All elements in a fixed order: permutation, then signs, then b.
pub fn enumerate_group(which: Which) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for perm in Perm3::all() {
        for signs in SIGN_VECTORS {
            let a = MonomialMatrix::new(perm, signs);
            if which == Which::G && a.det() != 1 {
                continue;
            }
            for b in FactorPerm::all() {
                out.push(GroupElement { a, b });
            }
        }
    }
    out
}

/// The diagonal subgroup C = {diag(ε) : ε₁ε₂ε₃ = 1}.
pub fn diagonal_subgroup() -> Vec<MonomialMatrix> {
    SIGN_VECTORS
        .iter()
        .filter(|s| s.iter().product::<i8>() == 1)
        .map(|&s| MonomialMatrix::diagonal(s))
        .collect()
}

/// Action of (π, q) ∈ S₃×S₃ on F: relabel entries by π, move pair k to
/// position q(k), transposing each pair when q is odd.
pub fn s3xs3_act(pi: Perm3, q: Perm3, alpha: BasisIndex) -> BasisIndex {
    let relabeled = alpha.pairs().map(|(i, j)| (pi.apply(i - 1) + 1, pi.apply(j - 1) + 1));
    let mut out = [(0, 0); 3];
    for (k, &(i, j)) in relabeled.iter().enumerate() {
        out[q.apply(k as u8) as usize] = if q.is_odd() { (j, i) } else { (i, j) };
    }
    BasisIndex::from_pairs(out)
}

/// Precomputed signed index permutations for every element of G.
pub struct GroupTable {
    pub elements: Vec<GroupElement>,
    maps: Vec<Vec<(BasisIndex, i8)>>,
}

impl GroupTable {
    fn build(which: Which) -> Self {
        let elements = enumerate_group(which);
        let maps = elements
            .iter()
            .map(|g| {
                BasisIndex::all()
                    .map(|alpha| {
                        let m = g.act_on_index(alpha);
                        (m.image, m.sign)
                    })
                    .collect()
            })
            .collect();
        GroupTable { elements, maps }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn act(&self, k: usize, t: &Tensor) -> Tensor {
        let map = &self.maps[k];
        let mut out = Tensor::zero();
        for (alpha, p) in t.entries() {
            let (beta, sign) = map[alpha.code() as usize];
            out.insert(beta, if sign > 0 { p.clone() } else { -p });
        }
        out
    }

    pub fn index_map(&self, k: usize) -> &[(BasisIndex, i8)] {
        debug_assert_eq!(self.maps[k].len(), BASIS_SIZE);
        &self.maps[k]
    }
}

static TABLE_G: LazyLock<GroupTable> = LazyLock::new(|| GroupTable::build(Which::G));

/// The 144 elements of G with their basis actions.
pub fn group_g() -> &'static GroupTable {
    &TABLE_G
}

pub fn act_on_index(g: &GroupElement, alpha: BasisIndex) -> SignedIndexMap {
    g.act_on_index(alpha)
}

pub fn act_on_tensor(g: &GroupElement, t: &Tensor) -> Tensor {
    let mut out = Tensor::zero();
    for (alpha, p) in t.entries() {
        let m = g.act_on_index(alpha);
        out.insert(m.image, if m.sign > 0 { p.clone() } else { -p });
    }
    out
}

/// {g·t : g ∈ G}, deduplicated by structural equality.
pub fn orbit_of(t: &Tensor) -> BTreeSet<Tensor> {
    let table = group_g();
    (0..table.len())
        .into_par_iter()
        .map(|k| table.act(k, t))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

pub fn stabilizer_order(t: &Tensor) -> usize {
    let table = group_g();
    (0..table.len())
        .into_par_iter()
        .filter(|&k| table.act(k, t) == *t)
        .count()
}

/// Σ_{g∈G} g·t.
pub fn group_sum(t: &Tensor) -> Tensor {
    let table = group_g();
    let mut acc = Tensor::zero();
    for k in 0..table.len() {
        acc.add_assign(&table.act(k, t));
    }
    acc
}
