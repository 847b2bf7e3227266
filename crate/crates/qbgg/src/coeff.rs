//! Coefficient rings: exact rationals, Laurent polynomials in a scaling
//! parameter `t`, and an `f64` backend used only as a numerical oracle.
//!
//! Every algebraic structure in the crate is generic over [`Scalar`]; the
//! Fock trace and linear algebra additionally need division and use
//! [`FieldScalar`].

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{QbggError, Result};

/// Exact rational scalar used by every acceptance-grade computation.
pub type ExactScalar = BigRational;

/// Floating-point scalar; only ever used as an independent oracle.
pub type FloatScalar = f64;

/// Commutative ring of coefficients.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    /// Additive identity.
    fn zero() -> Self;
    /// Multiplicative identity.
    fn one() -> Self;
    /// Exact (or, for floats, literal) test for zero.
    fn is_zero(&self) -> bool;
    /// Embedding of the integers.
    fn from_int(n: i64) -> Self;
    /// Embedding of the rationals.
    fn from_rational(q: &BigRational) -> Self;
    /// Ring addition.
    fn add(&self, other: &Self) -> Self;
    /// Ring subtraction.
    fn sub(&self, other: &Self) -> Self;
    /// Ring multiplication.
    fn mul(&self, other: &Self) -> Self;
    /// Additive inverse.
    fn neg(&self) -> Self;

    /// In-place addition.
    fn add_assign(&mut self, other: &Self) {
        *self = Scalar::add(self, other);
    }
    /// Integer power.
    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// A [`Scalar`] ring that is a field.
pub trait FieldScalar: Scalar {
    /// Multiplicative inverse; fails with [`QbggError::DivisionByZero`] on zero.
    fn inv(&self) -> Result<Self>;
    /// Division; fails on a zero divisor.
    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn pow(&self, e: u32) -> Self {
        num::pow::pow(self.clone(), e as usize)
    }
}

impl FieldScalar for BigRational {
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(QbggError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl FieldScalar for f64 {
    fn inv(&self) -> Result<Self> {
        if *self == 0.0 {
            Err(QbggError::DivisionByZero)
        } else {
            Ok(1.0 / self)
        }
    }
}

/// Converts an exact rational to the nearest `f64`.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Builds the rational `p/q`; panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats a rational as `"p/q"`, always including the denominator.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"`, `"p"` or a decimal-free signed integer into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| QbggError::Parse(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (parse_int(p)?, parse_int(q)?);
            if q.is_zero() {
                return Err(QbggError::DivisionByZero);
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// The four field operations, for callers that dispatch on an operation tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    /// `a + b`
    Add,
    /// `a - b`
    Sub,
    /// `a * b`
    Mul,
    /// `a / b`
    Div,
}

/// Applies a field operation, reporting division by zero explicitly.
pub fn field_op<S: FieldScalar>(op: FieldOp, a: &S, b: &S) -> Result<S> {
    match op {
        FieldOp::Add => Ok(a.add(b)),
        FieldOp::Sub => Ok(a.sub(b)),
        FieldOp::Mul => Ok(a.mul(b)),
        FieldOp::Div => a.div(b),
    }
}

/// Exact `q`-th root of a non-negative rational, if it exists.
pub fn exact_root(x: &BigRational, q: u32) -> Option<BigRational> {
    if q == 0 {
        return None;
    }
    if q == 1 {
        return Some(x.clone());
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        if n.is_negative() {
            if q.is_multiple_of(2) {
                return None;
            }
            let r = (-n).nth_root(q);
            return (num::pow::pow(r.clone(), q as usize) == -n).then(|| -r);
        }
        let r = n.nth_root(q);
        (num::pow::pow(r.clone(), q as usize) == *n).then_some(r)
    };
    Some(BigRational::new(root_int(x.numer())?, root_int(x.denom())?))
}

/// Exact rational power `x^e` for rational `e`, using exact roots.
///
/// Fails with [`QbggError::InexactRoot`] if the root is irrational and with
/// [`QbggError::DivisionByZero`] for a negative power of zero.
pub fn rational_pow(x: &BigRational, e: &BigRational) -> Result<BigRational> {
    let den = e
        .denom()
        .to_u32()
        .ok_or_else(|| QbggError::InvalidParameter("exponent denominator too large".into()))?;
    let base = exact_root(x, den).ok_or_else(|| {
        QbggError::InexactRoot(format!(
            "{} has no exact rational root of order {den}",
            format_rational(x)
        ))
    })?;
    let num = e.numer();
    let mag = num
        .abs()
        .to_u32()
        .ok_or_else(|| QbggError::InvalidParameter("exponent too large".into()))?;
    let p = num::pow::pow(base, mag as usize);
    if num.sign() == Sign::Minus {
        p.inv()
    } else {
        Ok(p)
    }
}

/// Integer power with a possibly negative exponent.
pub fn int_pow<S: FieldScalar>(x: &S, e: i64) -> Result<S> {
    let p = x.pow(e.unsigned_abs() as u32);
    if e < 0 {
        p.inv()
    } else {
        Ok(p)
    }
}

/// Laurent polynomial in a scaling parameter `t` with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i32, BigRational>,
}

impl LaurentScalar {
    /// The monomial `c t^e`.
    pub fn monomial(c: BigRational, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(e, c);
        }
        LaurentScalar { terms }
    }

    /// The parameter `t` itself.
    pub fn t() -> Self {
        Self::monomial(One::one(), 1)
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i32) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(Zero::zero)
    }

    /// Iterates over non-zero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i32, &BigRational)> {
        self.terms.iter()
    }

    /// Largest exponent with a non-zero coefficient.
    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Inverse of a monomial; other Laurent polynomials are not invertible.
    pub fn inv_monomial(&self) -> Result<Self> {
        match self.terms.len() {
            0 => Err(QbggError::DivisionByZero),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                Ok(Self::monomial(c.recip(), -e))
            }
            _ => Err(QbggError::InvalidParameter(
                "only Laurent monomials are invertible".into(),
            )),
        }
    }

    /// Serialises to a JSON object mapping exponents to `"p/q"` strings.
    pub fn to_json(&self) -> Value {
        let map = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_string(), Value::String(format_rational(c))))
            .collect();
        Value::Object(map)
    }

    /// Parses the JSON produced by [`LaurentScalar::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| QbggError::Parse("Laurent scalar must be an object".into()))?;
        let mut out = LaurentScalar::default();
        for (k, c) in obj {
            let e: i32 = k
                .parse()
                .map_err(|_| QbggError::Parse(format!("bad exponent {k:?}")))?;
            let c = c
                .as_str()
                .ok_or_else(|| QbggError::Parse("coefficient must be a string".into()))?;
            out = Scalar::add(&out, &Self::monomial(parse_rational(c)?, e));
        }
        Ok(out)
    }
}

impl Scalar for LaurentScalar {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::monomial(One::one(), 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_int(n: i64) -> Self {
        Self::monomial(int(n), 0)
    }
    fn from_rational(q: &BigRational) -> Self {
        Self::monomial(q.clone(), 0)
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_insert_with(Zero::zero);
            *entry += c;
            if Zero::is_zero(entry) {
                terms.remove(e);
            }
        }
        LaurentScalar { terms }
    }
    fn sub(&self, other: &Self) -> Self {
        Scalar::add(self, &other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i32, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                *terms.entry(e1 + e2).or_insert_with(Zero::zero) += c1 * c2;
            }
        }
        terms.retain(|_, c| !Zero::is_zero(c));
        LaurentScalar { terms }
    }
    fn neg(&self) -> Self {
        LaurentScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({})t^{}", format_rational(c), e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Limit `t → ∞` of a Laurent polynomial: the `t^0` coefficient, provided no
/// positive power of `t` survives.
pub fn laurent_limit_at_infinity(x: &LaurentScalar) -> Result<BigRational> {
    match x.max_exponent() {
        Some(e) if e > 0 => Err(QbggError::DivergentLimit(e)),
        _ => Ok(x.coeff(0)),
    }
}

/// Default sampling seed when neither a flag nor `QBGG_SEED` is given.
pub const DEFAULT_SEED: u64 = 20240601;

/// Reads the sampling seed from `QBGG_SEED`, falling back to `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("QBGG_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

/// Deterministic sampler of random rationals; the seed is kept for reports.
#[derive(Debug, Clone)]
pub struct Sampler {
    seed: u64,
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Creates a sampler from an explicit seed.
    pub fn new(seed: u64) -> Self {
        Sampler {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The seed this sampler was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Random rational `p/q` with numerator and denominator drawn uniformly from `[1, 997]`.
    pub fn rational(&mut self) -> BigRational {
        let p: i64 = self.rng.gen_range(1..=997);
        let q: i64 = self.rng.gen_range(1..=997);
        rat(p, q)
    }

    /// Random rational with an independent random sign.
    pub fn signed_rational(&mut self) -> BigRational {
        let r = self.rational();
        if self.rng.gen_bool(0.5) {
            -r
        } else {
            r
        }
    }

    /// Uniform integer in an inclusive range.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Draws `n` rationals, resampling until `accept` holds for the whole vector.
    ///
    /// The predicate encodes the caller's distinctness/genericity constraints.
    pub fn rationals_where(
        &mut self,
        n: usize,
        accept: impl Fn(&[BigRational]) -> bool,
    ) -> Vec<BigRational> {
        loop {
            let v: Vec<BigRational> = (0..n).map(|_| self.rational()).collect();
            if accept(&v) {
                return v;
            }
        }
    }

    /// Access to the underlying generator for custom sampling.
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(format_rational(&rat(7, 7)), "1/1");
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(0)), "0/1");
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), int(-4));
        assert_eq!(parse_rational("1/0"), Err(QbggError::DivisionByZero));
        assert!(matches!(parse_rational("x"), Err(QbggError::Parse(_))));
    }

    #[test]
    fn division_by_zero_is_explicit() {
        assert_eq!(
            field_op(FieldOp::Div, &int(1), &int(0)),
            Err(QbggError::DivisionByZero)
        );
        assert_eq!(field_op(FieldOp::Div, &int(1), &int(4)).unwrap(), rat(1, 4));
        assert_eq!(field_op(FieldOp::Div, &1.0f64, &0.0f64), Err(QbggError::DivisionByZero));
    }

    #[test]
    fn laurent_pruning_and_json() {
        let t = LaurentScalar::t();
        let tinv = t.inv_monomial().unwrap();
        let x = Scalar::sub(&Scalar::add(&t, &tinv), &t);
        assert_eq!(x, LaurentScalar::monomial(int(1), -1));
        assert_eq!(x.to_json().to_string(), r#"{"-1":"1/1"}"#);
        assert_eq!(LaurentScalar::from_json(&x.to_json()).unwrap(), x);
        assert!(Scalar::is_zero(&Scalar::sub(&t, &t)));
    }

    #[test]
    fn laurent_limit() {
        let t = LaurentScalar::t();
        let x = Scalar::add(&LaurentScalar::from_int(3), &t.inv_monomial().unwrap());
        assert_eq!(laurent_limit_at_infinity(&x).unwrap(), int(3));
        assert_eq!(
            laurent_limit_at_infinity(&Scalar::add(&x, &t)),
            Err(QbggError::DivergentLimit(1))
        );
        assert_eq!(laurent_limit_at_infinity(&LaurentScalar::zero()).unwrap(), int(0));
    }

    #[test]
    fn exact_roots_and_powers() {
        assert_eq!(exact_root(&rat(4, 9), 2), Some(rat(2, 3)));
        assert_eq!(exact_root(&rat(2, 1), 2), None);
        assert_eq!(exact_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_pow(&rat(4, 9), &rat(-3, 2)).unwrap(), rat(27, 8));
        assert!(matches!(
            rational_pow(&int(2), &rat(1, 2)),
            Err(QbggError::InexactRoot(_))
        ));
        assert_eq!(int_pow(&rat(2, 3), -2).unwrap(), rat(9, 4));
    }

    #[test]
    fn sampler_is_deterministic_and_in_range() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..50 {
            let (x, y) = (a.rational(), b.rational());
            assert_eq!(x, y);
            assert!(x.numer() >= &BigInt::from(1) && x.numer() <= &BigInt::from(997));
            assert!(x.denom() <= &BigInt::from(997));
        }
        let v = a.rationals_where(3, |v| v[0] != v[1] && v[1] != v[2] && v[0] != v[2]);
        assert_eq!(v.len(), 3);
    }
}
