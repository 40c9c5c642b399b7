//! Exact coefficient rings: the integers, the rationals and prime fields.
//!
//! Elements carry no reference to their ring; every arithmetic operation goes
//! through a [`RingSpec`], which knows the modulus for prime fields. Mixing
//! elements of different rings is a programming error and panics.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Largest admissible prime-field modulus (exclusive).
pub const MAX_MODULUS: u32 = 1 << 31;

/// The ground ring of a complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u32),
}

/// A scalar in canonical form. Structural equality is ring equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Int(BigInt),
    Rat(BigRational),
    Mod(u32),
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Int(n) => n.is_zero(),
            RingElement::Rat(q) => q.is_zero(),
            RingElement::Mod(v) => *v == 0,
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingSpec {
    /// Prime field with modulus `p`, checked for primality by trial division.
    pub fn prime_field(p: u32) -> Result<Self, Error> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::Parse(format!("field modulus {p} is not a prime below 2^31")));
        }
        Ok(RingSpec::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn zero(&self) -> RingElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        match self {
            RingSpec::Integers => RingElement::Int(n.clone()),
            RingSpec::Rationals => RingElement::Rat(BigRational::from_integer(n.clone())),
            RingSpec::PrimeField(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                RingElement::Mod(r.to_u32().expect("residue below modulus"))
            }
        }
    }

    /// Image of an integer-valued element under the canonical map from ℤ.
    pub fn coerce_integer(&self, x: &RingElement) -> Result<RingElement, Error> {
        match x {
            RingElement::Int(n) => Ok(self.from_bigint(n)),
            other => Err(Error::RingMismatch(format!("{other:?} is not an integer"))),
        }
    }

    /// Whether `x` is a canonical element of this ring.
    pub fn contains(&self, x: &RingElement) -> bool {
        match (self, x) {
            (RingSpec::Integers, RingElement::Int(_)) => true,
            (RingSpec::Rationals, RingElement::Rat(_)) => true,
            (RingSpec::PrimeField(p), RingElement::Mod(v)) => v < p,
            _ => false,
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        match (self, a, b) {
            (RingSpec::Integers, RingElement::Int(x), RingElement::Int(y)) => RingElement::Int(x + y),
            (RingSpec::Rationals, RingElement::Rat(x), RingElement::Rat(y)) => RingElement::Rat(x + y),
            (RingSpec::PrimeField(p), RingElement::Mod(x), RingElement::Mod(y)) => {
                RingElement::Mod(((*x as u64 + *y as u64) % *p as u64) as u32)
            }
            _ => panic!("ring element mismatch: {a:?} + {b:?} in {self}"),
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        match (self, a) {
            (RingSpec::Integers, RingElement::Int(x)) => RingElement::Int(-x),
            (RingSpec::Rationals, RingElement::Rat(x)) => RingElement::Rat(-x),
            (RingSpec::PrimeField(p), RingElement::Mod(x)) => RingElement::Mod((p - x) % p),
            _ => panic!("ring element mismatch: -{a:?} in {self}"),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        match (self, a, b) {
            (RingSpec::Integers, RingElement::Int(x), RingElement::Int(y)) => RingElement::Int(x * y),
            (RingSpec::Rationals, RingElement::Rat(x), RingElement::Rat(y)) => RingElement::Rat(x * y),
            (RingSpec::PrimeField(p), RingElement::Mod(x), RingElement::Mod(y)) => {
                RingElement::Mod(((*x as u64 * *y as u64) % *p as u64) as u32)
            }
            _ => panic!("ring element mismatch: {a:?} * {b:?} in {self}"),
        }
    }

    pub fn is_unit(&self, x: &RingElement) -> bool {
        match (self, x) {
            (RingSpec::Integers, RingElement::Int(n)) => n.abs().is_one(),
            (RingSpec::Rationals, RingElement::Rat(q)) => !q.is_zero(),
            (RingSpec::PrimeField(_), RingElement::Mod(v)) => *v != 0,
            _ => false,
        }
    }

    pub fn invert(&self, x: &RingElement) -> Result<RingElement, Error> {
        if !self.is_unit(x) {
            return Err(Error::NotInvertible(self.format(x)));
        }
        Ok(match (self, x) {
            (RingSpec::Integers, RingElement::Int(n)) => RingElement::Int(n.clone()),
            (RingSpec::Rationals, RingElement::Rat(q)) => RingElement::Rat(q.recip()),
            (RingSpec::PrimeField(p), RingElement::Mod(v)) => {
                // Fermat: v^(p-2).
                let (mut base, mut exp, mut acc) = (*v as u64, *p as u64 - 2, 1u64);
                let m = *p as u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                RingElement::Mod(acc as u32)
            }
            _ => unreachable!(),
        })
    }

    /// Parses an element using the ring's textual grammar.
    pub fn parse(&self, s: &str) -> Result<RingElement, Error> {
        let bad = || Error::Parse(format!("malformed {self} element {s:?}"));
        match self {
            RingSpec::Integers => parse_int(s).map(RingElement::Int).ok_or_else(bad),
            RingSpec::Rationals => match s.split_once('/') {
                None => parse_int(s).map(|n| RingElement::Rat(BigRational::from_integer(n))).ok_or_else(bad),
                Some((num, den)) => {
                    let num = parse_int(num).ok_or_else(bad)?;
                    if den.bytes().all(|b| b == b'0') && !den.is_empty() {
                        return Err(Error::Parse(format!("zero denominator in {s:?}")));
                    }
                    // denominator grammar: [1-9][0-9]*
                    if !den.starts_with(|c: char| ('1'..='9').contains(&c)) {
                        return Err(bad());
                    }
                    let den = parse_int(den).ok_or_else(bad)?;
                    Ok(RingElement::Rat(BigRational::new(num, den)))
                }
            },
            RingSpec::PrimeField(_) => {
                if s.starts_with('-') {
                    return Err(bad());
                }
                parse_int(s).map(|n| self.from_bigint(&n)).ok_or_else(bad)
            }
        }
    }

    pub fn format(&self, x: &RingElement) -> String {
        match x {
            RingElement::Int(n) => n.to_string(),
            RingElement::Rat(q) if q.denom().is_one() => q.numer().to_string(),
            RingElement::Rat(q) => format!("{}/{}", q.numer(), q.denom()),
            RingElement::Mod(v) => v.to_string(),
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "Z" => Ok(RingSpec::Integers),
            "Q" => Ok(RingSpec::Rationals),
            _ => {
                let p = s
                    .strip_prefix('F')
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|d| d.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown ring {s:?}")))?;
                RingSpec::prime_field(p)
            }
        }
    }
}
