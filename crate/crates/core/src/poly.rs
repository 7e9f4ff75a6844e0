//! Sparse multivariate polynomials over Q(ζ₁₂).
//!
//! Variables are either orbit parameters (`a`, `b2`, ...) or factor
//! coordinates of a generic rank decomposition (`x3_12`, ...). Terms are kept
//! in a `BTreeMap` keyed by graded-lexicographic monomial order, so two
//! polynomials are equal iff their term maps are equal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{fmt_term, Cyclotomic, Rational};

/// Parameter letters of the orbit families. `e` is skipped since it names
/// matrix units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    C,
    D,
    F,
    G,
}

impl Letter {
    pub const ALL: [Letter; 6] = [Letter::A, Letter::B, Letter::C, Letter::D, Letter::F, Letter::G];

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
            Letter::F => 'f',
            Letter::G => 'g',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        Letter::ALL.into_iter().find(|l| l.as_char() == c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId {
    pub slot: u32,
    pub letter: Letter,
}

impl ParamId {
    pub fn new(slot: u32, letter: Letter) -> Self {
        ParamId { slot, letter }
    }
}

/// Which tensor factor a generic Brent unknown belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorSlot {
    X,
    Y,
    Z,
}

impl FactorSlot {
    pub fn as_char(self) -> char {
        match self {
            FactorSlot::X => 'x',
            FactorSlot::Y => 'y',
            FactorSlot::Z => 'z',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Param(ParamId),
    /// Entry (row, col) of factor `slot` in rank-one term `term`; all 1-based.
    Factor {
        term: u32,
        slot: FactorSlot,
        row: u8,
        col: u8,
    },
}

impl Var {
    pub fn param(slot: u32, letter: Letter) -> Self {
        Var::Param(ParamId::new(slot, letter))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Param(p) if p.slot == 0 => write!(f, "{}", p.letter.as_char()),
            Var::Param(p) => write!(f, "{}{}", p.letter.as_char(), p.slot),
            Var::Factor { term, slot, row, col } => write!(f, "{}{}_{}{}", slot.as_char(), term, row, col),
        }
    }
}

/// Power product; sorted by variable, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order; the smallest variable is the most
    /// significant, so `a^2*d > a*b*d`.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Cyclotomic>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Cyclotomic::one())
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Polynomial::constant(Cyclotomic::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Cyclotomic::one(), Monomial::var(v))
    }

    pub fn param(slot: u32, letter: Letter) -> Self {
        Polynomial::var(Var::param(slot, letter))
    }

    pub fn term(c: Cyclotomic, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        match self.terms.len() {
            0 => Some(Cyclotomic::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Cyclotomic {
        self.terms.get(m).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect()
    }

    /// Total degrees of the terms present.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(Monomial::degree).collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Polynomial {
        self.scale(&Cyclotomic::from_rational(q.clone()))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces the assigned variables by field values; others stay symbolic.
    pub fn substitute(&self, assignment: &BTreeMap<Var, Cyclotomic>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in &m.0 {
                match assignment.get(&v) {
                    Some(val) => coeff = &coeff * &val.pow(e),
                    None => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), &coeff);
        }
        out
    }

    /// Replaces the mapped variables by polynomials.
    pub fn compose(&self, assignment: &BTreeMap<Var, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut acc = Polynomial::constant(c.clone());
            let mut rest = Vec::new();
            for &(v, e) in &m.0 {
                match assignment.get(&v) {
                    Some(p) => acc = &acc * &p.pow(e),
                    None => rest.push((v, e)),
                }
            }
            let rest = Polynomial::term(Cyclotomic::one(), Monomial(rest));
            out.add_assign_ref(&(&acc * &rest));
        }
        out
    }

    /// Renames variables through `f`; `f` must be injective on `vars()`.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let m = Monomial::from_powers(m.0.iter().map(|&(v, e)| (f(v), e)));
            out.add_term(m, c);
        }
        out
    }

    /// Full evaluation; `None` if a variable is unassigned.
    pub fn evaluate(&self, assignment: &BTreeMap<Var, Cyclotomic>) -> Option<Cyclotomic> {
        self.substitute(assignment).as_constant()
    }

    /// Signed printed terms, highest monomial first.
    fn printed_terms(&self) -> Vec<(bool, String)> {
        let mut out = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let rest = m.to_string();
            for (unit, q) in c.nonzero_components() {
                out.push(fmt_term(&q, unit, &rest));
            }
        }
        out
    }

    /// Number of terms once coefficients are split over {1, z, i, i*z}.
    pub fn printed_term_count(&self) -> usize {
        self.terms.values().map(|c| c.nonzero_components().len()).sum()
    }

    /// True iff `self - other` is the zero polynomial.
    pub fn coeff_diff_is_zero(&self, other: &Polynomial) -> bool {
        (self - other).is_zero()
    }

    /// Renders with a custom variable printer and coefficient printer; used
    /// by solver-script exports. An empty coefficient string is omitted.
    pub fn render_with(&self, var: &dyn Fn(&Var) -> String, coeff: &dyn Fn(&Cyclotomic) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let head = coeff(c);
                let mut factors = if head.is_empty() { Vec::new() } else { vec![head] };
                for (v, e) in &m.0 {
                    if *e == 1 {
                        factors.push(var(v));
                    } else {
                        factors.push(format!("{}^{}", var(v), e));
                    }
                }
                if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

pub fn poly_coeff_diff_is_zero(p: &Polynomial, q: &Polynomial) -> bool {
    p.coeff_diff_is_zero(q)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.printed_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (neg, body)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl From<Cyclotomic> for Polynomial {
    fn from(c: Cyclotomic) -> Self {
        Polynomial::constant(c)
    }
}
