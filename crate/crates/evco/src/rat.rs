//! Exact rational scalars and coordinate vectors.
//!
//! Every quantity in this crate is a `Rat` (arbitrary-precision rational in
//! canonical form) or a vector of them. There is no floating point anywhere;
//! strict-vs-weak classifications depend on exact comparisons.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational scalar. Canonical form (gcd 1, positive denominator) is
/// maintained by the underlying `BigRational`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rat(self.0.recip())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// 2^-k, used by segment-density and epsilon-approach checks.
    pub fn pow2_neg(k: u32) -> Self {
        Rat(BigRational::new(BigInt::one(), BigInt::from(2i64.pow(k))))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rat {
    type Err = String;

    /// Accepts "p/q" or a bare integer "p".
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Rat(BigRational::new(n, d)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! arith_impls {
    ($Op:ident $op:ident, $OpAssign:ident $op_assign:ident) => {
        impl $Op for Rat {
            type Output = Rat;
            fn $op(self, rhs: Rat) -> Rat {
                Rat((self.0).$op(rhs.0))
            }
        }
        impl $Op<&Rat> for &Rat {
            type Output = Rat;
            fn $op(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$op(&rhs.0))
            }
        }
        impl $Op<&Rat> for Rat {
            type Output = Rat;
            fn $op(self, rhs: &Rat) -> Rat {
                Rat((self.0).$op(&rhs.0))
            }
        }
        impl $Op<Rat> for &Rat {
            type Output = Rat;
            fn $op(self, rhs: Rat) -> Rat {
                Rat((&self.0).$op(rhs.0))
            }
        }
        impl $OpAssign<Rat> for Rat {
            fn $op_assign(&mut self, rhs: Rat) {
                *self = (&*self).$op(&rhs);
            }
        }
        impl $OpAssign<&Rat> for Rat {
            fn $op_assign(&mut self, rhs: &Rat) {
                *self = (&*self).$op(rhs);
            }
        }
    };
}

arith_impls!(Add add, AddAssign add_assign);
arith_impls!(Sub sub, SubAssign sub_assign);
arith_impls!(Mul mul, MulAssign mul_assign);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// Shorthand for literal rationals in tests and fixtures.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Exact coordinate vector over the rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVector {
    coords: Vec<Rat>,
}

impl RatVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVector { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector {
            coords: vec![Rat::zero(); dim],
        }
    }

    /// Standard basis vector e_i.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut v = Self::zeros(dim);
        v.coords[i] = Rat::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVector {
            coords: coords.iter().map(|&n| Rat::from_int(n)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    pub fn set_coord(&mut self, i: usize, v: Rat) {
        self.coords[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        assert_eq!(self.dim(), other.dim(), "dot product dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scale(&self, s: &Rat) -> RatVector {
        RatVector {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> RatVector {
        RatVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Concatenation, used to assemble product-space points (x, z).
    pub fn concat(&self, other: &RatVector) -> RatVector {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        RatVector { coords }
    }

    /// Sub-vector of coordinates `range`.
    pub fn slice(&self, start: usize, len: usize) -> RatVector {
        RatVector {
            coords: self.coords[start..start + len].to_vec(),
        }
    }

    /// Copy with coordinate `i` removed (projection bookkeeping).
    pub fn without_coord(&self, i: usize) -> RatVector {
        let mut coords = self.coords.clone();
        coords.remove(i);
        RatVector { coords }
    }

    /// Scale to a primitive integer vector, preserving orientation.
    /// Empty and zero vectors are returned unchanged.
    pub fn primitive(&self) -> RatVector {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm_den = BigInt::one();
        for c in &self.coords {
            lcm_den = lcm_den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| c.numer() * (&lcm_den / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for n in &ints {
            g = g.gcd(n);
        }
        RatVector {
            coords: ints
                .into_iter()
                .map(|n| Rat(BigRational::from_integer(n / &g)))
                .collect(),
        }
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Extended rational: the value lattice of suprema over possibly empty or
/// unbounded feasible sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum ExtRat {
    MinusInfinity,
    Finite(Rat),
    PlusInfinity,
}

impl ExtRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        use ExtRat::*;
        match (self, other) {
            (MinusInfinity, MinusInfinity) | (PlusInfinity, PlusInfinity) => Equal,
            (MinusInfinity, _) | (_, PlusInfinity) => Less,
            (_, MinusInfinity) | (PlusInfinity, _) => Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::MinusInfinity => write!(f, "-inf"),
            ExtRat::Finite(r) => write!(f, "{r}"),
            ExtRat::PlusInfinity => write!(f, "+inf"),
        }
    }
}
