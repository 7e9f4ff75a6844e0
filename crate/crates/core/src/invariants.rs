//! The invariant subspace N^G.
//!
//! S₃×S₃ has twelve orbits Q₁..Q₁₂ on the even basis indices; their class
//! sums γ₁..γ₁₂ form a basis of N^G, and the Reynolds projection is
//! p(w) = Σ_i r_i(w)/|Q_i| · γ_i, where r_i(w) sums the coefficients of w
//! over Q_i. Odd indices project to zero.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::LazyLock;

use crate::arith::{rational, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::{orbit_of, s3xs3_act, Perm3};
use crate::poly::Polynomial;
use crate::tensor::{BasisIndex, Tensor, BASIS_SIZE};

pub const CLASS_COUNT: usize = 12;

/// Representatives and sizes of Q₁..Q₁₂ in their reference order.
pub const REFERENCE_CLASSES: [(&str, usize); CLASS_COUNT] = [
    ("11,11,11", 3),
    ("11,11,22", 18),
    ("11,12,21", 18),
    ("11,12,12", 36),
    ("11,21,12", 18),
    ("11,22,33", 6),
    ("11,23,23", 18),
    ("11,23,32", 18),
    ("12,23,31", 6),
    ("12,23,13", 18),
    ("12,32,13", 18),
    ("12,31,23", 6),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitClass {
    /// 1-based class number.
    pub id: usize,
    pub members: BTreeSet<BasisIndex>,
    pub representative: BasisIndex,
}

impl OrbitClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

fn s3xs3_generators() -> [(Perm3, Perm3); 4] {
    let id = Perm3::IDENTITY;
    let swap = Perm3::parse_cycles("(12)").expect("literal");
    let cycle = Perm3::parse_cycles("(123)").expect("literal");
    [(swap, id), (cycle, id), (id, swap), (id, cycle)]
}

/// Orbits of S₃×S₃ on the even indices, numbered to match the reference
/// table; fails if the computed partition disagrees with it.
pub fn compute_classes() -> Result<Vec<OrbitClass>> {
    let gens = s3xs3_generators();
    let mut seen = [false; BASIS_SIZE];
    let mut orbits: Vec<BTreeSet<BasisIndex>> = Vec::new();
    for start in BasisIndex::all().filter(|a| a.is_even()) {
        if seen[start.code() as usize] {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen[start.code() as usize] = true;
        while let Some(alpha) = queue.pop_front() {
            orbit.insert(alpha);
            for &(p, q) in &gens {
                let beta = s3xs3_act(p, q, alpha);
                if !seen[beta.code() as usize] {
                    seen[beta.code() as usize] = true;
                    queue.push_back(beta);
                }
            }
        }
        orbits.push(orbit);
    }
    if orbits.len() != CLASS_COUNT {
        return Err(Error::ClassIntegrity(format!(
            "found {} orbits on even indices, expected {CLASS_COUNT}",
            orbits.len()
        )));
    }
    let mut classes = Vec::with_capacity(CLASS_COUNT);
    for (k, (rep, size)) in REFERENCE_CLASSES.iter().enumerate() {
        let rep = BasisIndex::parse_short(rep)?;
        let members = orbits
            .iter()
            .find(|o| o.contains(&rep))
            .ok_or_else(|| Error::ClassIntegrity(format!("representative {rep} is not even")))?
            .clone();
        if members.len() != *size {
            return Err(Error::ClassIntegrity(format!(
                "class {} of {rep} has {} members, expected {size}",
                k + 1,
                members.len()
            )));
        }
        if classes.iter().any(|c: &OrbitClass| c.members == members) {
            return Err(Error::ClassIntegrity(format!("representative {rep} repeats a class")));
        }
        classes.push(OrbitClass {
            id: k + 1,
            members,
            representative: rep,
        });
    }
    Ok(classes)
}

pub struct ClassTable {
    pub classes: Vec<OrbitClass>,
    class_of: [u8; BASIS_SIZE],
}

impl ClassTable {
    /// Class number (1-based) of an even index.
    pub fn class_of(&self, alpha: BasisIndex) -> Option<usize> {
        match self.class_of[alpha.code() as usize] {
            0 => None,
            k => Some(k as usize),
        }
    }

    pub fn size(&self, id: usize) -> usize {
        self.classes[id - 1].size()
    }
}

static CLASSES: LazyLock<ClassTable> = LazyLock::new(|| {
    let classes = compute_classes().expect("class table verified by tests");
    let mut class_of = [0u8; BASIS_SIZE];
    for c in &classes {
        for m in &c.members {
            class_of[m.code() as usize] = c.id as u8;
        }
    }
    ClassTable { classes, class_of }
});

pub fn class_table() -> &'static ClassTable {
    &CLASSES
}

/// Coordinates of an element of N^G in the basis γ₁..γ₁₂.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GammaVector {
    coords: [Polynomial; CLASS_COUNT],
}

impl GammaVector {
    pub fn zero() -> Self {
        GammaVector::default()
    }

    pub fn from_coords(coords: [Polynomial; CLASS_COUNT]) -> Self {
        GammaVector { coords }
    }

    pub fn from_ints(v: [i64; CLASS_COUNT]) -> Self {
        GammaVector {
            coords: v.map(Polynomial::from_int),
        }
    }

    /// Coordinate at γ_i, 1-based.
    pub fn get(&self, i: usize) -> &Polynomial {
        &self.coords[i - 1]
    }

    pub fn coords(&self) -> &[Polynomial; CLASS_COUNT] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Polynomial::is_zero)
    }

    /// 1-based indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (1..=CLASS_COUNT).filter(|&i| !self.get(i).is_zero()).collect()
    }

    pub fn add(&self, other: &GammaVector) -> GammaVector {
        GammaVector {
            coords: std::array::from_fn(|k| &self.coords[k] + &other.coords[k]),
        }
    }

    pub fn scale(&self, c: &Polynomial) -> GammaVector {
        GammaVector {
            coords: std::array::from_fn(|k| &self.coords[k] * c),
        }
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> GammaVector {
        GammaVector {
            coords: std::array::from_fn(|k| f(&self.coords[k])),
        }
    }
}

/// `318*g1 + 214*g2 - 32*g4 + (2*a^2*d + 4*a*b*d)*g10`.
impl fmt::Display for GammaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = format!("g{}", k + 1);
            let (neg, body) = if c.printed_term_count() == 1 {
                let s = c.to_string();
                match s.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, s),
                }
            } else {
                (false, format!("({c})"))
            };
            let term = if body == "1" { basis } else { format!("{body}*{basis}") };
            match (first, neg) {
                (true, true) => write!(f, "-{term}")?,
                (true, false) => write!(f, "{term}")?,
                (false, true) => write!(f, " - {term}")?,
                (false, false) => write!(f, " + {term}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Sum of the coefficients of `w` over the class Q_i.
pub fn r_sum(w: &Tensor, i: usize) -> Polynomial {
    let table = class_table();
    let mut acc = Polynomial::zero();
    for alpha in &table.classes[i - 1].members {
        if let Some(p) = w.entry(*alpha) {
            acc.add_assign_ref(p);
        }
    }
    acc
}

/// Reynolds projection onto N^G in γ-coordinates.
pub fn project(w: &Tensor) -> GammaVector {
    let table = class_table();
    let mut sums: [Polynomial; CLASS_COUNT] = Default::default();
    for (alpha, p) in w.entries() {
        if let Some(k) = table.class_of(alpha) {
            sums[k - 1].add_assign_ref(p);
        }
    }
    GammaVector {
        coords: std::array::from_fn(|k| sums[k].scale_rational(&rational(1, table.size(k + 1) as i64))),
    }
}

/// Orbit sum l·p(w) for an orbit of length l.
pub fn orbit_sum(w: &Tensor, l: usize) -> GammaVector {
    project(w).scale(&Polynomial::from_int(l as i64))
}

/// l·p(w), cross-checked against the explicit sum over the distinct
/// elements of w's orbit. A mismatch means the instance is degenerate (its
/// orbit is shorter than `l`).
pub fn orbit_sum_checked(w: &Tensor, l: usize) -> Result<GammaVector> {
    let formula = orbit_sum(w, l);
    let orbit = orbit_of(w);
    let mut direct = Tensor::zero();
    for t in &orbit {
        direct.add_assign(t);
    }
    if direct != gamma_to_tensor(&formula) {
        return Err(Error::OrbitSumMismatch(format!(
            "orbit has {} elements, declared length {l}",
            orbit.len()
        )));
    }
    Ok(formula)
}

/// Σ v_i·γ_i as an explicit tensor.
pub fn gamma_to_tensor(v: &GammaVector) -> Tensor {
    let table = class_table();
    let mut out = Tensor::zero();
    for class in &table.classes {
        let c = v.get(class.id);
        if c.is_zero() {
            continue;
        }
        for alpha in &class.members {
            out.insert(*alpha, c.clone());
        }
    }
    out
}

/// (1/|G|)·Σ_g g·w computed by brute force over the group.
pub fn group_average(w: &Tensor) -> Tensor {
    let sum = crate::group::group_sum(w);
    let inv = Cyclotomic::from_rational(rational(1, 144));
    sum.map_coeffs(|p| p.scale(&inv))
}

/// The γ-vector of a tensor already known to lie in N^G: reads the
/// coefficient at each class representative.
pub fn invariant_coords(t: &Tensor) -> GammaVector {
    let table = class_table();
    GammaVector {
        coords: std::array::from_fn(|k| t.get(table.classes[k].representative)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_polynomial;

    fn idx(s: &str) -> BasisIndex {
        BasisIndex::parse_short(s).unwrap()
    }

    #[test]
    fn classes_match_reference_table() {
        let classes = compute_classes().unwrap();
        let sizes: Vec<usize> = classes.iter().map(OrbitClass::size).collect();
        assert_eq!(sizes, vec![3, 18, 18, 36, 18, 6, 18, 18, 6, 18, 18, 6]);
        assert_eq!(sizes.iter().sum::<usize>(), 183);
        let t = class_table();
        assert_eq!(t.class_of(idx("11,11,11")), Some(1));
        assert_eq!(t.class_of(idx("11,12,12")), Some(4));
        assert_eq!(t.class_of(idx("12,31,23")), Some(12));
        assert_eq!(t.class_of(idx("13,23,31")), None);
    }

    #[test]
    fn projection_of_basis_vectors() {
        let p = project(&Tensor::basis(idx("11,11,11")));
        let mut expected: [Polynomial; 12] = Default::default();
        expected[0] = parse_polynomial("1/3").unwrap();
        assert_eq!(p, GammaVector::from_coords(expected));
        assert!(project(&Tensor::basis(idx("12,11,11"))).is_zero());
    }

    #[test]
    fn gamma_round_trip() {
        let v = GammaVector::from_ints([1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let t = gamma_to_tensor(&v);
        assert_eq!(t.len(), 3);
        assert!(t
            .entries()
            .all(|(a, p)| a.is_diagonal_triple() && *p == Polynomial::one()));
        assert!(gamma_to_tensor(&GammaVector::zero()).is_empty());
    }

    #[test]
    fn gamma_display() {
        let v = GammaVector::from_ints([318, 214, 32, -32, 32, 174, -40, 40, 0, 0, 0, 0]);
        assert_eq!(
            v.to_string(),
            "318*g1 + 214*g2 + 32*g3 - 32*g4 + 32*g5 + 174*g6 - 40*g7 + 40*g8"
        );
        let mut coords: [Polynomial; 12] = Default::default();
        coords[0] = Polynomial::one();
        coords[9] = parse_polynomial("2*a^2*d + 4*a*b*d").unwrap();
        coords[11] = parse_polynomial("-6*i*b^2*d").unwrap();
        assert_eq!(
            GammaVector::from_coords(coords).to_string(),
            "g1 + (2*a^2*d + 4*a*b*d)*g10 - 6*i*b^2*d*g12"
        );
        assert_eq!(GammaVector::zero().to_string(), "0");
    }

    #[test]
    fn pi12_permutes_classes_and_swaps_three_with_five() {
        let t = class_table();
        let mut image = Vec::new();
        for c in &t.classes {
            let targets: BTreeSet<usize> = c.members.iter().map(|a| t.class_of(a.swap12()).unwrap()).collect();
            assert_eq!(targets.len(), 1);
            image.push(*targets.iter().next().unwrap());
        }
        assert_eq!(image, vec![1, 2, 5, 4, 3, 6, 7, 8, 12, 11, 10, 9]);
    }
}
