use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive); keeps products inside `u64`.
const MODULUS_BOUND: u64 = 1 << 31;

/// The exact coefficient field: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u32),
}

/// A canonical field element. Rationals are kept in lowest terms with a
/// positive denominator; residues lie in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Residue(u32),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !(2..MODULUS_BOUND).contains(&p) {
            return Err(Error::InvalidField(format!("modulus {p} outside [2, 2^31)")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("modulus {p} is not prime")));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::zero()),
            Field::Prime(_) => FieldElement::Residue(0),
        }
    }

    pub fn one(&self) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::one()),
            Field::Prime(_) => FieldElement::Residue(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor_u(*p);
                FieldElement::Residue(r)
            }
        }
    }

    /// `num / den`; `None` when the denominator vanishes in this field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<FieldElement> {
        let d = self.from_bigint(den);
        let inv = self.inv(&d)?;
        Some(self.mul(&self.from_bigint(num), &inv))
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (Field::Prime(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            (Field::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x + y)
            }
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (Field::Prime(p), FieldElement::Residue(x)) => {
                FieldElement::Residue(if *x == 0 { 0 } else { p - x })
            }
            (Field::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(-x),
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (Field::Prime(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            (Field::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x * y)
            }
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    /// Multiplicative inverse; exists exactly for nonzero elements.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        Some(match (self, a) {
            (Field::Prime(p), FieldElement::Residue(x)) => {
                FieldElement::Residue(pow_mod(*x as u64, *p as u64 - 2, *p as u64) as u32)
            }
            (Field::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(x.recip()),
            _ => panic!("field element does not belong to {self:?}"),
        })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        match (self, a) {
            (Field::Prime(p), FieldElement::Residue(x)) => x < p,
            (Field::Rationals, FieldElement::Rational(_)) => true,
            _ => false,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

trait ModFloorU {
    fn mod_floor_u(&self, p: u32) -> u32;
}

impl ModFloorU for BigInt {
    fn mod_floor_u(&self, p: u32) -> u32 {
        let m = BigInt::from(p);
        let mut r = self % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_u32().expect("residue fits in u32")
    }
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(x) => x.is_zero(),
            FieldElement::Residue(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(x) => x.is_one(),
            FieldElement::Residue(x) => *x == 1,
        }
    }

    /// True for rationals with a negative value; residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, FieldElement::Rational(x) if x.is_negative())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Residue(x) => write!(f, "{x}"),
            FieldElement::Rational(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
        }
    }
}
