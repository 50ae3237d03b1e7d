use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Ground field of a run. Every scalar of a computation lives in one field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// GF(p); the modulus is kept below 2^31 so products fit in a `u64`.
    Prime(u32),
    /// Arbitrary-precision rationals.
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^31)")]
    TooLarge(u64),
    #[error("unrecognised field `{0}` (expected `q` or `gf:P`)")]
    Unrecognised(String),
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    pub const DEFAULT_PRIME: u32 = 32003;

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    /// Parses the command-line spelling: `q` or `gf:P`.
    pub fn parse(text: &str) -> Result<Field, FieldError> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        if let Some(rest) = t.strip_prefix("gf:") {
            let p: u64 = rest.parse().map_err(|_| FieldError::Unrecognised(text.to_string()))?;
            return Field::prime(p);
        }
        Err(FieldError::Unrecognised(text.to_string()))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Mod { value: v.rem_euclid(p as i64) as u32, modulus: p },
            Field::Rational => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(v)))),
        }
    }

    /// Maps the rational `num/den` into the field; `None` when the denominator vanishes there.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        match *self {
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = x % &pb;
                    let r = if r.is_negative() { r + &pb } else { r };
                    r.to_u32().unwrap_or(0)
                };
                let n = Scalar::Mod { value: reduce(num), modulus: p };
                let d = Scalar::Mod { value: reduce(den), modulus: p };
                d.inv().map(|di| &n * &di)
            }
            Field::Rational => {
                if den.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(Box::new(BigRational::new(num.clone(), den.clone()))))
                }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "gf:{p}"),
            Field::Rational => write!(f, "q"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An exact field element. GF(p) values are canonical representatives in `[0, p)`;
/// rationals are kept in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u32, modulus: u32 },
    Rat(Box<BigRational>),
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

pub(crate) fn mod_inv(v: u64, p: u64) -> u64 {
    mod_pow(v, p - 2, p)
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, modulus } => {
                Scalar::Mod { value: mod_inv(*value as u64, *modulus as u64) as u32, modulus: *modulus }
            }
            Scalar::Rat(r) => Scalar::Rat(Box::new(r.recip())),
        })
    }

    /// Raw residue for GF(p) scalars.
    pub(crate) fn residue(&self) -> u64 {
        match self {
            Scalar::Mod { value, .. } => *value as u64,
            Scalar::Rat(_) => panic!("residue requested for a rational scalar"),
        }
    }

    fn mismatch(a: &Scalar, b: &Scalar) -> ! {
        panic!("scalars from different fields combined: {} and {}", a.field(), b.field())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: ((*a as u64 + *b as u64) % *p as u64) as u32, modulus: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() + b.as_ref())),
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32, modulus: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() - b.as_ref())),
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: ((*a as u64 * *b as u64) % *p as u64) as u32, modulus: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() * b.as_ref())),
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => {
                Scalar::Mod { value: ((*modulus - *value) % *modulus), modulus: *modulus }
            }
            Scalar::Rat(r) => Scalar::Rat(Box::new(-r.as_ref())),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
