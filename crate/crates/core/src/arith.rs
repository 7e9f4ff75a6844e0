//! Exact arithmetic in Q and in the cyclotomic field Q(ζ₁₂).
//!
//! Elements of Q(ζ₁₂) are stored by their coordinates in the power basis
//! {1, w, w², w³}, where w = e^{iπ/6} satisfies w⁴ = w² − 1 (the 12th
//! cyclotomic polynomial is x⁴ − x² + 1). Every element therefore has a
//! unique representation and structural equality is field equality.
//!
//! The primitive cube root of unity is ζ = w⁴ = w² − 1 and i = w³.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Element of Q(ζ₁₂) in the basis {1, w, w², w³}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclotomic {
    coords: [Rational; 4],
}

/// Named constructors for the constants the catalog and the grammar use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CyclotomicKind {
    Rational(Rational),
    Zeta,
    ZetaBar,
    Imag,
    Root12,
}

/// Printing basis {1, ζ, i, iζ}; every coefficient in this crate is shown as
/// a rational combination of these four units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Unit {
    One,
    Zeta,
    Imag,
    ImagZeta,
}

impl Unit {
    pub fn symbol(self) -> &'static str {
        match self {
            Unit::One => "1",
            Unit::Zeta => "z",
            Unit::Imag => "i",
            Unit::ImagZeta => "i*z",
        }
    }
}

impl Cyclotomic {
    pub fn from_coords(coords: [Rational; 4]) -> Self {
        Cyclotomic { coords }
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.coords
    }

    pub fn make(kind: CyclotomicKind) -> Self {
        match kind {
            CyclotomicKind::Rational(q) => Self::from_rational(q),
            CyclotomicKind::Zeta => Self::from_ints([-1, 0, 1, 0]),
            CyclotomicKind::ZetaBar => Self::from_ints([0, 0, -1, 0]),
            CyclotomicKind::Imag => Self::from_ints([0, 0, 0, 1]),
            CyclotomicKind::Root12 => Self::from_ints([0, 1, 0, 0]),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints([0, 0, 0, 0])
    }

    pub fn one() -> Self {
        Self::from_ints([1, 0, 0, 0])
    }

    pub fn zeta() -> Self {
        Self::make(CyclotomicKind::Zeta)
    }

    pub fn zeta_bar() -> Self {
        Self::make(CyclotomicKind::ZetaBar)
    }

    pub fn imag() -> Self {
        Self::make(CyclotomicKind::Imag)
    }

    pub fn root12() -> Self {
        Self::make(CyclotomicKind::Root12)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(integer(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic {
            coords: [q, Rational::zero(), Rational::zero(), Rational::zero()],
        }
    }

    fn from_ints(c: [i64; 4]) -> Self {
        Cyclotomic { coords: c.map(integer) }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic {
            coords: [
                &self.coords[0] * q,
                &self.coords[1] * q,
                &self.coords[2] * q,
                &self.coords[3] * q,
            ],
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the automorphism w ↦ w^k (k coprime to 12).
    fn galois(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out += &root_power(j * k).scale(c);
        }
        out
    }

    pub fn conj(&self) -> Self {
        self.galois(11)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Rational {
        let n = self * &self.galois(5) * self.galois(7) * self.galois(11);
        debug_assert!(n.as_rational().is_some());
        n.coords[0].clone()
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let cofactor = self.galois(5) * self.galois(7) * self.galois(11);
        let n = (self * &cofactor).coords[0].clone();
        Ok(cofactor.scale(&n.recip()))
    }

    /// Coordinates in the printing basis {1, ζ, i, iζ}.
    ///
    /// With w² = 1 + ζ, w³ = i and w = −iζ:
    /// c₀ + c₁w + c₂w² + c₃w³ = (c₀ + c₂) + c₂ζ + c₃i − c₁iζ.
    pub fn components(&self) -> [(Unit, Rational); 4] {
        let [c0, c1, c2, c3] = &self.coords;
        [
            (Unit::One, c0 + c2),
            (Unit::Zeta, c2.clone()),
            (Unit::Imag, c3.clone()),
            (Unit::ImagZeta, -c1),
        ]
    }

    pub fn from_components(one: Rational, zeta: Rational, imag: Rational, imag_zeta: Rational) -> Self {
        Cyclotomic {
            coords: [&one - &zeta, -imag_zeta, zeta, imag],
        }
    }

    /// Nonzero printing-basis components, in basis order.
    pub fn nonzero_components(&self) -> Vec<(Unit, Rational)> {
        self.components().into_iter().filter(|(_, q)| !q.is_zero()).collect()
    }

    /// Approximate complex value; used only for diagnostics.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let s3 = 3f64.sqrt() / 2.0;
        let w = [(1.0, 0.0), (s3, 0.5), (0.5, s3), (0.0, 1.0)];
        let mut re = 0.0;
        let mut im = 0.0;
        for (c, (wr, wi)) in self.coords.iter().zip(w) {
            let c = rational_to_f64(c);
            re += c * wr;
            im += c * wi;
        }
        (re, im)
    }
}

fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// w^m reduced into the basis, using w⁶ = −1.
fn root_power(m: usize) -> Cyclotomic {
    let m = m % 12;
    let (m, sign) = if m >= 6 { (m - 6, -1) } else { (m, 1) };
    let c = match m {
        0 => [1, 0, 0, 0],
        1 => [0, 1, 0, 0],
        2 => [0, 0, 1, 0],
        3 => [0, 0, 0, 1],
        4 => [-1, 0, 1, 0],
        5 => [0, -1, 0, 1],
        _ => unreachable!(),
    };
    Cyclotomic::from_ints(c.map(|x| x * sign))
}

fn add_coords(x: &Cyclotomic, y: &Cyclotomic) -> Cyclotomic {
    Cyclotomic {
        coords: [
            &x.coords[0] + &y.coords[0],
            &x.coords[1] + &y.coords[1],
            &x.coords[2] + &y.coords[2],
            &x.coords[3] + &y.coords[3],
        ],
    }
}

fn mul_coords(x: &Cyclotomic, y: &Cyclotomic) -> Cyclotomic {
    if let Some(q) = x.as_rational() {
        return y.scale(q);
    }
    if let Some(q) = y.as_rational() {
        return x.scale(q);
    }
    let mut prod: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
    for (i, a) in x.coords.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.coords.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            prod[i + j] += a * b;
        }
    }
    // w^k = w^{k-2} - w^{k-4} for k >= 4
    for k in (4..7).rev() {
        let top = std::mem::take(&mut prod[k]);
        if top.is_zero() {
            continue;
        }
        prod[k - 2] += &top;
        prod[k - 4] -= &top;
    }
    let [p0, p1, p2, p3, ..] = prod;
    Cyclotomic {
        coords: [p0, p1, p2, p3],
    }
}

impl Add<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        add_coords(self, rhs)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        add_coords(&self, &rhs)
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl Sub<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        add_coords(self, &-rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            coords: [-&self.coords[0], -&self.coords[1], -&self.coords[2], -&self.coords[3]],
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Mul<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        mul_coords(self, rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        mul_coords(&self, &rhs)
    }
}

impl Mul<Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        mul_coords(self, &rhs)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders a signed product `coefficient * unit * rest` as (negative, body).
///
/// `rest` is the already-formatted monomial, empty for a constant term.
pub(crate) fn fmt_term(q: &Rational, unit: Unit, rest: &str) -> (bool, String) {
    let negative = q.is_negative();
    let mag = q.abs();
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_one() || (unit == Unit::One && rest.is_empty()) {
        parts.push(fmt_rational(&mag));
    }
    if unit != Unit::One {
        parts.push(unit.symbol().to_string());
    }
    if !rest.is_empty() {
        parts.push(rest.to_string());
    }
    (negative, parts.join("*"))
}

/// Literal syntax: a sum over the units {1, z, i, i*z} with rational
/// coefficients, e.g. `-3/2`, `z`, `1 + 2*i`, `-i*z`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.nonzero_components();
        if parts.is_empty() {
            return f.write_str("0");
        }
        for (k, (unit, q)) in parts.iter().enumerate() {
            let (neg, body) = fmt_term(q, *unit, "");
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
