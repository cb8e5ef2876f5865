//! Exact scalar substrate: arbitrary-precision rationals and residues modulo a prime.
//!
//! Every set element in the crate is one of these two types, both of which
//! implement [`Ground`]. Nothing in here rounds.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroundError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("cannot parse {0:?} as a ground element")]
    Parse(String),
}

/// Which additive universe an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Universe {
    Rational,
    /// Residues modulo `modulus` (a prime, or `p^2` for the dedicated ring type).
    Residue { modulus: u64 },
}

impl Universe {
    pub fn modulus(&self) -> Option<u64> {
        match self {
            Universe::Rational => None,
            Universe::Residue { modulus } => Some(*modulus),
        }
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Universe::Rational => write!(f, "rational"),
            Universe::Residue { modulus } => write!(f, "modp p={modulus}"),
        }
    }
}

/// An exact commutative-ring element usable as a set element.
///
/// Equality and hashing are on canonical forms, so two equal values always
/// land in the same hash bucket.
pub trait Ground: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn try_quotient(&self, rhs: &Self) -> Result<Self, GroundError>;
    fn is_zero(&self) -> bool;
    /// The additive identity of the universe `self` lives in.
    fn zero_like(&self) -> Self;
    fn universe(&self) -> Universe;
}

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

/// Exact rational number in lowest terms with positive denominator.
///
/// Values whose numerator and denominator both fit in an `i64` are stored
/// inline; anything larger spills to a heap-backed `BigRational`. The choice
/// of representation is a function of the value alone, so derived equality
/// and hashing are canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: i64, den: i64 },
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rational {
    /// Reduces `num/den` to canonical form.
    pub fn normalize(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, GroundError> {
        let den = den.into();
        if den.is_zero() {
            return Err(GroundError::ZeroDenominator);
        }
        Ok(Self::from_big(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small { num: n, den: 1 })
    }

    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Rational(Repr::Small { num, den }),
            _ => Rational(Repr::Big(r)),
        }
    }

    // `den` must be positive; the pair need not be reduced.
    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den > 0);
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        let (num, den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Rational(Repr::Small { num, den }),
            _ => Rational(Repr::Big(BigRational::new_raw(BigInt::from(num), BigInt::from(den)))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// Returns the value as an `i64` when it is an integer that fits.
    pub fn as_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small { num, den: 1 } => Some(*num),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(r) => big_ratio_to_f64(r),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn recip(&self) -> Result<Self, GroundError> {
        Rational::one().checked_div(self)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, GroundError> {
        if rhs.is_zero_value() {
            return Err(GroundError::NotInvertible(rhs.to_string()));
        }
        Ok(match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let mut n = *a as i128 * *d as i128;
                let mut m = *b as i128 * *c as i128;
                if m < 0 {
                    n = -n;
                    m = -m;
                }
                Rational::from_i128(n, m)
            }
            _ => Rational::from_big(self.to_big() / rhs.to_big()),
        })
    }

    /// Integer power with a non-negative exponent.
    pub fn pow(&self, e: u32) -> Self {
        Rational::from_big(num_traits::pow::Pow::pow(self.to_big(), e))
    }

    fn is_zero_value(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }
}

fn big_ratio_to_f64(r: &BigRational) -> f64 {
    // Shift both parts down to ~64 significant bits before dividing so huge
    // values do not overflow to infinity.
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let nf = (n >> ns as usize).to_f64().unwrap_or(f64::NAN);
    let df = (d >> ds as usize).to_f64().unwrap_or(f64::NAN);
    nf / df * 2f64.powi((ns - ds) as i32)
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = GroundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || GroundError::Parse(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::normalize(n, d)
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational::from_big(BigRational::from_integer(n)))
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_big(BigRational::from_integer(n))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: 1 }, Repr::Small { num: c, den: 1 }) => match a.checked_add(*c) {
                Some(s) => Rational::from_integer(s),
                None => Rational::from_i128(*a as i128 + *c as i128, 1),
            },
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(a * d + c * b, b * d)
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn sub(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: 1 }, Repr::Small { num: c, den: 1 }) => match a.checked_sub(*c) {
                Some(s) => Rational::from_integer(s),
                None => Rational::from_i128(*a as i128 - *c as i128, 1),
            },
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Rational::from_i128(a * d - c * b, b * d)
            }
            _ => Rational::from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;

    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                Rational::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;

    /// Panics on division by zero; use [`Rational::checked_div`] otherwise.
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small { num, den } if *num != i64::MIN => Rational(Repr::Small { num: -num, den: *den }),
            _ => Rational::from_big(-self.to_big()),
        }
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl std::ops::Rem for Rational {
    type Output = Rational;

    /// Rational remainder is always zero in a field; kept for `num_traits::Num`.
    fn rem(self, rhs: Rational) -> Rational {
        if rhs.is_zero_value() {
            panic!("division by zero");
        }
        Rational::zero()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::from_integer(0)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::from_integer(1)
    }
}

impl num_traits::Num for Rational {
    type FromStrRadixErr = GroundError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(GroundError::Parse(s.to_string()));
        }
        s.parse()
    }
}

impl Ground for Rational {
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn try_quotient(&self, rhs: &Self) -> Result<Self, GroundError> {
        self.checked_div(rhs)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn universe(&self) -> Universe {
        Universe::Rational
    }
}

// ---------------------------------------------------------------------------
// Residues modulo a prime
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` (not necessarily prime), if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
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

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q.saturating_mul(q) <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root of the prime `p`.
pub fn primitive_root(p: u64) -> Result<u64, GroundError> {
    if !is_prime(p) {
        return Err(GroundError::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or(GroundError::NotPrime(p))
}

/// Residue modulo a prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModP {
    value: u64,
    p: u64,
}

impl ModP {
    /// Builds `value mod p` after checking that `p` is prime.
    pub fn new(value: i64, p: u64) -> Result<Self, GroundError> {
        if !is_prime(p) {
            return Err(GroundError::NotPrime(p));
        }
        Ok(Self::reduce(value, p))
    }

    /// Builds `value mod p` for a modulus the caller has already validated.
    pub fn reduce(value: i64, p: u64) -> Self {
        ModP { value: (value as i128).rem_euclid(p as i128) as u64, p }
    }

    pub(crate) fn from_canonical(value: u64, p: u64) -> Self {
        debug_assert!(value < p);
        ModP { value, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Balanced representative in `(-p/2, p/2]`.
    pub fn centered(&self) -> i64 {
        if self.value > self.p / 2 {
            self.value as i64 - self.p as i64
        } else {
            self.value as i64
        }
    }

    #[inline]
    fn check(&self, rhs: &Self) {
        assert_eq!(self.p, rhs.p, "mixed moduli in residue arithmetic");
    }
}

/// Multiplicative inverse of a nonzero residue.
pub fn mod_inverse(x: ModP) -> Result<ModP, GroundError> {
    if x.value == 0 {
        return Err(GroundError::NotInvertible(x.to_string()));
    }
    let inv = inv_mod(x.value, x.p).ok_or_else(|| GroundError::NotInvertible(x.to_string()))?;
    Ok(ModP::from_canonical(inv, x.p))
}

/// `base^e` by square-and-multiply; `e = 0` gives 1.
pub fn mod_pow(base: ModP, e: u64) -> ModP {
    ModP::from_canonical(pow_mod(base.value, e, base.p), base.p)
}

impl fmt::Display for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.p)
    }
}

impl fmt::Debug for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ModP {
    type Err = GroundError;

    /// Parses `"v mod p"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroundError::Parse(s.to_string());
        let (v, p) = s.split_once("mod").ok_or_else(bad)?;
        let v: i64 = v.trim().parse().map_err(|_| bad())?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        ModP::new(v, p)
    }
}

impl Ground for ModP {
    fn plus(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let s = self.value + rhs.value;
        ModP::from_canonical(if s >= self.p { s - self.p } else { s }, self.p)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let v = if self.value >= rhs.value { self.value - rhs.value } else { self.value + self.p - rhs.value };
        ModP::from_canonical(v, self.p)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.check(rhs);
        ModP::from_canonical(mul_mod(self.value, rhs.value, self.p), self.p)
    }
    fn negated(&self) -> Self {
        ModP::from_canonical(if self.value == 0 { 0 } else { self.p - self.value }, self.p)
    }
    fn try_quotient(&self, rhs: &Self) -> Result<Self, GroundError> {
        if self.p != rhs.p {
            return Err(GroundError::ModulusMismatch(self.p, rhs.p));
        }
        Ok(self.times(&mod_inverse(*rhs)?))
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn zero_like(&self) -> Self {
        ModP::from_canonical(0, self.p)
    }
    fn universe(&self) -> Universe {
        Universe::Residue { modulus: self.p }
    }
}

/// Either kind of ground element, for text input where the kind is only known at run time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundElement {
    Rational(Rational),
    ModP(ModP),
}

impl fmt::Display for GroundElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundElement::Rational(r) => r.fmt(f),
            GroundElement::ModP(x) => x.fmt(f),
        }
    }
}

impl FromStr for GroundElement {
    type Err = GroundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.contains("mod") {
            s.parse().map(GroundElement::ModP)
        } else {
            s.parse().map(GroundElement::Rational)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::normalize(n, d).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(q(2, 4).to_string(), "1/2");
        assert_eq!(q(-3, -6).to_string(), "1/2");
        assert_eq!(q(0, 7).to_string(), "0");
        assert_eq!(q(0, 7).denom(), BigInt::from(1));
        assert_eq!(Rational::normalize(1, 0), Err(GroundError::ZeroDenominator));
    }

    #[test]
    fn small_and_big_paths_agree() {
        let big = Rational::from(BigInt::from(i64::MAX) * 4);
        let x = Rational::from_integer(i64::MAX);
        let y = &(&x + &x) + &(&x + &x);
        assert_eq!(y, big);
        let back = &y - &Rational::from_integer(i64::MAX).times(&Rational::from_integer(3));
        assert_eq!(back, x);
        // Spilled values come back to the small representation when they fit.
        assert!(matches!(back.0, Repr::Small { .. }));
        assert_eq!(-&Rational::from_integer(i64::MIN), Rational::from(-BigInt::from(i64::MIN)));
    }

    #[test]
    fn rational_ordering_matches_cross_multiplication() {
        let xs = [q(1, 3), q(-2, 7), q(5, 2), q(0, 1), q(7, 3), q(-1, 1)];
        for a in &xs {
            for b in &xs {
                let cross = (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()));
                assert_eq!(a.cmp(b), cross);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("6/-4".parse::<Rational>().unwrap().to_string(), "-3/2");
        assert_eq!("12".parse::<Rational>().unwrap(), Rational::from_integer(12));
        assert!("1/0".parse::<Rational>().is_err());
        let x: ModP = "10 mod 7".parse().unwrap();
        assert_eq!(x.to_string(), "3 mod 7");
        assert!("3 mod 8".parse::<ModP>().is_err());
        assert!(matches!("3 mod 7".parse::<GroundElement>().unwrap(), GroundElement::ModP(_)));
    }

    #[test]
    fn inverse_examples() {
        let p = 7;
        assert_eq!(mod_inverse(ModP::reduce(2, p)).unwrap().value(), 4);
        assert_eq!(mod_inverse(ModP::reduce(1, 101)).unwrap().value(), 1);
        // Exhaustive search oracle.
        let brute = (1..p).find(|y| (3 * y) % p == 1).unwrap();
        assert_eq!(brute, 5);
        assert_eq!(mod_inverse(ModP::reduce(3, p)).unwrap().value(), brute);
        assert!(mod_inverse(ModP::reduce(0, p)).is_err());
    }

    #[test]
    fn pow_examples() {
        let three = ModP::reduce(3, 7);
        assert_eq!(mod_pow(three, 0).value(), 1);
        assert_eq!(mod_pow(three, 6).value(), 1);
        let repeated = (0..2).fold(1u64, |acc, _| acc * 3 % 7);
        assert_eq!(mod_pow(three, 2).value(), repeated);
        assert_eq!(repeated, 2);
    }

    #[test]
    fn primes_and_roots() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(1009).unwrap(), 11);
        assert_eq!(prime_factors(1008), vec![2, 3, 7]);
        assert!(primitive_root(9).is_err());
    }
}
