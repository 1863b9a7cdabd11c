//! Exact scalar fields: arbitrary-precision rationals and prime fields GF(p).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus for prime-field computations.
pub const DEFAULT_PRIME: u64 = 1_000_003;

/// Three distinct primes > 3 used for multi-prime evidence on large blocks.
pub const EVIDENCE_PRIMES: [u64; 3] = [1_000_003, 1_000_033, 1_000_037];

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// A prime field with `p > 3`; smaller primes need [`FieldSpec::prime_unchecked`].
    pub fn prime(p: u64) -> Result<Self> {
        let spec = Self::prime_unchecked(p)?;
        if p <= 3 {
            return Err(Error::InvalidField(format!(
                "GF({p}) has characteristic <= 3; use an explicit override"
            )));
        }
        Ok(spec)
    }

    /// A prime field of any prime order below 2^32, including 2 and 3.
    pub fn prime_unchecked(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::InvalidField(format!("modulus {p} must be < 2^32")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Modulus as written in the sparse-matrix text header (0 for rationals).
    pub fn modulus(&self) -> u64 {
        self.characteristic()
    }

    pub fn from_modulus(m: u64) -> Result<Self> {
        if m == 0 {
            Ok(FieldSpec::Rational)
        } else {
            Self::prime_unchecked(m)
        }
    }

    /// Slug used in cache keys and file names.
    pub fn slug(&self) -> String {
        match self {
            FieldSpec::Rational => "q".to_string(),
            FieldSpec::Prime(p) => format!("p{p}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `rational`, `q`, `prime` (default modulus) and `prime:P`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rational" | "q" | "Q" => Ok(FieldSpec::Rational),
            "prime" => FieldSpec::prime(DEFAULT_PRIME),
            other => {
                let p = other
                    .strip_prefix("prime:")
                    .ok_or_else(|| Error::InvalidField(format!("unrecognised field '{other}'")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::InvalidField(format!("bad modulus '{p}'")))?;
                FieldSpec::prime_unchecked(p)
            }
        }
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Deterministic primality test for the moduli accepted here (< 2^32).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Field operations on an associated element type.
///
/// Implementations are cheap to clone and carry whatever runtime data the
/// field needs (the modulus for GF(p)).
pub trait Field: Clone + Send + Sync + fmt::Debug + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of a rational; fails when the denominator vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    /// Decimal rendering: an integer, or `a/b` for proper fractions.
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }

    /// `a - c * b`, the elimination kernel.
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
}

/// GF(p) with `p < 2^32`, so products of reduced residues fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        FieldSpec::prime(p)?;
        Ok(PrimeField { p })
    }

    /// Allows characteristic 2 and 3.
    pub fn new_unchecked(p: u64) -> Result<Self> {
        FieldSpec::prime_unchecked(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((v % &p) + &p) % &p;
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn from_i64(&self, v: i64) -> u64 {
        let p = self.p as i64;
        (((v % p) + p) % p) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let den = self.reduce_bigint(q.denom());
        if den == 0 {
            return Err(Error::InvalidField(format!(
                "denominator of {} vanishes in GF({})",
                format_rational(q),
                self.p
            )));
        }
        let num = self.reduce_bigint(q.numer());
        Ok(self.mul(&num, &self.inv(&den)))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a` or `a/b` with optional leading sign.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse {
        line: 0,
        message: format!("malformed scalar '{s}'"),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    let mut q = BigRational::new(num, den);
    if q.denom().is_negative() {
        q = BigRational::new(-q.numer().clone(), -q.denom().clone());
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("prime:5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert_eq!(
            "prime".parse::<FieldSpec>().unwrap(),
            FieldSpec::Prime(DEFAULT_PRIME)
        );
        assert!("prime:6".parse::<FieldSpec>().is_err());
        assert!("real".parse::<FieldSpec>().is_err());
        // explicit override allowed through the text form
        assert_eq!("prime:2".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(2));
        assert!(FieldSpec::prime(3).is_err());
        assert!(FieldSpec::prime_unchecked(3).is_ok());
    }

    #[test]
    fn evidence_primes_are_distinct_primes_above_three() {
        for p in EVIDENCE_PRIMES {
            assert!(is_prime(p) && p > 3);
        }
        assert!(is_prime(DEFAULT_PRIME));
        assert_ne!(EVIDENCE_PRIMES[0], EVIDENCE_PRIMES[1]);
        assert_ne!(EVIDENCE_PRIMES[1], EVIDENCE_PRIMES[2]);
    }

    #[test]
    fn fermat_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [5u64, 7, 1_000_003, 4_294_967_291] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..200 {
                let a = rng.gen_range(1..p);
                assert_eq!(f.mul(&a, &f.pow(a, p - 2)), 1);
                assert_eq!(f.mul(&a, &f.inv(&a)), 1);
            }
        }
    }

    #[test]
    fn rational_images_in_prime_field() {
        let f = PrimeField::new(7).unwrap();
        let half = parse_rational("1/2").unwrap();
        assert_eq!(f.from_rational(&half).unwrap(), 4);
        assert_eq!(f.from_rational(&parse_rational("-3").unwrap()).unwrap(), 4);
        assert!(f.from_rational(&parse_rational("1/14").unwrap()).is_err());
    }

    #[test]
    fn rational_formatting() {
        for s in ["0", "-4", "3/7", "-12/5"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("6/-4").unwrap()), "-3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
