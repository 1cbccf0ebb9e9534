//! Exact scalars: prime fields `F_p` and arbitrary-precision rationals.
//!
//! A [`Field`] is a small copyable tag; a [`Scalar`] carries its own field so
//! that values from different fields can be told apart when a matrix is
//! assembled. Arithmetic between scalars assumes a common field; the checked
//! entry points live on [`Field`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// `F_p` for a prime `p`.
    Prime(u64),
    /// The rationals.
    Rational,
}

/// An element of a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { value: u64, modulus: u64 },
    Q(BigRational),
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field {
    /// `F_p`, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 63 {
            Err(Error::Parse(format!("modulus {p} exceeds 2^63")))
        } else if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::Parse(format!("modulus {p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Fp {
                value: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// `(-1)^e`.
    pub fn sign(&self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Whether `s` is an element of this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Prime(p), Scalar::Fp { value, modulus }) => p == modulus && value < p,
            (Field::Rational, Scalar::Q(_)) => true,
            _ => false,
        }
    }

    pub fn check(&self, s: &Scalar) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                expected: *self,
                found: s.field(),
            })
        }
    }

    /// Parses a decimal scalar such as `"42"`, `"-3"` or `"3/7"`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad scalar `{text}`")))?;
        let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad scalar `{text}`")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        match *self {
            Field::Rational => Ok(Scalar::Q(BigRational::new(num, den))),
            Field::Prime(p) => {
                let reduce = |v: &BigInt| -> u64 {
                    let m = BigInt::from(p);
                    let r = ((v % &m) + &m) % &m;
                    r.to_u64().expect("reduced residue fits in u64")
                };
                let n = reduce(&num);
                let d = reduce(&den);
                if d == 0 {
                    return Err(Error::Parse(format!("denominator of `{text}` vanishes modulo {p}")));
                }
                let d_inv = pow_mod(d, p - 2, p);
                Ok(Scalar::Fp {
                    value: mul_mod(n, d_inv, p),
                    modulus: p,
                })
            }
        }
    }

    /// Parses `fp:<p>` or `q`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        if let Some(p) = spec.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad field spec `{spec}`")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!(
            "bad field spec `{spec}` (expected `fp:<p>` or `q`)"
        )))
    }

    pub fn spec(&self) -> String {
        match self {
            Field::Prime(p) => format!("fp:{p}"),
            Field::Rational => "q".to_string(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
            Scalar::Q(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => {
                let s = a + b;
                Scalar::Fp {
                    value: if s >= *p { s - p } else { s },
                    modulus: *p,
                }
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => panic!("scalar field mismatch: {self:?} + {other:?}"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Scalar::Q(q) => Scalar::Q(-q),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: mul_mod(*a, *b, *p),
                modulus: *p,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => panic!("scalar field mismatch: {self:?} * {other:?}"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Q(q) => Scalar::Q(q.recip()),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// `self^e` for a non-negative exponent.
    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { value, .. } => write!(f, "{value}"),
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl Scalar {
    /// Signed display for prime fields: residues above `p/2` print as negatives.
    pub fn to_signed_string(&self) -> String {
        match self {
            Scalar::Fp { value, modulus } if *value > modulus / 2 => {
                format!("-{}", modulus - value)
            }
            Scalar::Q(q) if q.is_negative() => self.to_string(),
            _ => self.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(101));
        assert!(is_prime(65537));
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(1));
        assert!(!is_prime(65535));
        assert!(!is_prime(3_215_031_751));
        assert!(Field::prime(100).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Prime(101);
        let a = f.from_i64(-1);
        assert_eq!(
            a,
            Scalar::Fp {
                value: 100,
                modulus: 101
            }
        );
        assert!(a.add(&f.one()).is_zero());
        let b = f.from_i64(7);
        assert!(b.mul(&b.inv()).is_one());
        assert_eq!(f.parse("3/7").unwrap().mul(&b), f.from_i64(3));
        assert_eq!(f.parse("-2").unwrap(), f.from_i64(99));
        assert!(f.parse("1/101").is_err());
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let a = q.parse("6/14").unwrap();
        assert_eq!(a.to_string(), "3/7");
        let b = q.parse("-4/2").unwrap();
        assert_eq!(b.to_string(), "-2");
        assert_eq!(a.mul(&b).to_string(), "-6/7");
        assert!(q.parse("1/0").is_err());
    }

    #[test]
    fn field_specs() {
        assert_eq!(Field::parse_spec("fp:101").unwrap(), Field::Prime(101));
        assert_eq!(Field::parse_spec("q").unwrap(), Field::Rational);
        assert!(Field::parse_spec("fp:12").is_err());
        assert!(Field::parse_spec("gf").is_err());
        assert!(!Field::Prime(5).contains(&Field::Prime(7).one()));
        assert!(Field::Rational.check(&Field::Prime(7).one()).is_err());
    }
}
