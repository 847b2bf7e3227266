//! Normal-ordered polynomials in the oscillator algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, BigRational, One};
use serde_json::{json, Value};

use crate::coeff::{format_rational, parse_rational, Scalar};
use crate::error::{QbggError, Result};

/// An ordered list of oscillator-pair labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OscSpace {
    labels: Vec<String>,
}

impl OscSpace {
    /// Creates a shared space from pair labels; labels must be distinct.
    pub fn new<I, L>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = L>,
        L: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(QbggError::InvalidParameter(format!(
                "oscillator labels must be distinct: {labels:?}"
            )));
        }
        Ok(Arc::new(OscSpace { labels }))
    }

    /// Number of oscillator pairs.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True for the space without oscillators.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Pair labels in order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Position of a label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Position of a label, as an error if missing.
    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| QbggError::InvalidParameter(format!("unknown oscillator label {label}")))
    }
}

/// Checks whether two shared spaces are the same space.
pub(crate) fn same_space(a: &Arc<OscSpace>, b: &Arc<OscSpace>) -> bool {
    Arc::ptr_eq(a, b) || a.labels == b.labels
}

/// A normal-ordered monomial `∏ ā_p^{c_p} ∏ a_p^{k_p}` stored densely.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalMonomial {
    /// Creation exponents `c_p`.
    pub creation: Vec<u32>,
    /// Annihilation exponents `k_p`.
    pub annihilation: Vec<u32>,
}

impl NormalMonomial {
    /// The unit monomial over `n` pairs.
    pub fn one(n: usize) -> Self {
        NormalMonomial {
            creation: vec![0; n],
            annihilation: vec![0; n],
        }
    }

    /// True if every pair has equal creation and annihilation exponents,
    /// i.e. the monomial is diagonal in the occupation basis.
    pub fn is_balanced(&self) -> bool {
        self.creation == self.annihilation
    }

    /// True for the unit monomial.
    pub fn is_one(&self) -> bool {
        self.creation.iter().all(|&c| c == 0) && self.annihilation.iter().all(|&k| k == 0)
    }

    /// Total number of generators.
    pub fn degree(&self) -> u32 {
        self.creation.iter().sum::<u32>() + self.annihilation.iter().sum::<u32>()
    }
}

/// A normal-ordered polynomial with coefficients in `S` over a fixed oscillator space.
#[derive(Debug, Clone)]
pub struct NormalPoly<S> {
    space: Arc<OscSpace>,
    terms: BTreeMap<NormalMonomial, S>,
}

impl<S: Scalar> PartialEq for NormalPoly<S> {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl<S: Scalar> NormalPoly<S> {
    /// The zero polynomial.
    pub fn zero(space: &Arc<OscSpace>) -> Self {
        NormalPoly {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// A scalar multiple of the identity.
    pub fn scalar(space: &Arc<OscSpace>, c: S) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(NormalMonomial::one(space.len()), c);
        }
        p
    }

    /// An integer multiple of the identity.
    pub fn int(space: &Arc<OscSpace>, n: i64) -> Self {
        Self::scalar(space, S::from_int(n))
    }

    /// A single monomial with coefficient.
    pub fn monomial(space: &Arc<OscSpace>, m: NormalMonomial, c: S) -> Result<Self> {
        if m.creation.len() != space.len() || m.annihilation.len() != space.len() {
            return Err(QbggError::InvalidParameter(
                "monomial length does not match the oscillator space".into(),
            ));
        }
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        Ok(p)
    }

    /// The creation operator `ā_p`.
    pub fn creation(space: &Arc<OscSpace>, p: usize) -> Self {
        let mut m = NormalMonomial::one(space.len());
        m.creation[p] = 1;
        Self::monomial(space, m, S::one()).expect("monomial matches space")
    }

    /// The annihilation operator `a_p`.
    pub fn annihilation(space: &Arc<OscSpace>, p: usize) -> Self {
        let mut m = NormalMonomial::one(space.len());
        m.annihilation[p] = 1;
        Self::monomial(space, m, S::one()).expect("monomial matches space")
    }

    /// The number operator `ā_p a_p`.
    pub fn number(space: &Arc<OscSpace>, p: usize) -> Self {
        let mut m = NormalMonomial::one(space.len());
        m.creation[p] = 1;
        m.annihilation[p] = 1;
        Self::monomial(space, m, S::one()).expect("monomial matches space")
    }

    /// `ā` for a labelled pair.
    pub fn cre(space: &Arc<OscSpace>, label: &str) -> Result<Self> {
        Ok(Self::creation(space, space.require(label)?))
    }

    /// `a` for a labelled pair.
    pub fn ann(space: &Arc<OscSpace>, label: &str) -> Result<Self> {
        Ok(Self::annihilation(space, space.require(label)?))
    }

    /// The oscillator space.
    pub fn space(&self) -> &Arc<OscSpace> {
        &self.space
    }

    /// Terms keyed by monomial.
    pub fn terms(&self) -> &BTreeMap<NormalMonomial, S> {
        &self.terms
    }

    /// Number of non-zero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> S {
        self.terms
            .get(&NormalMonomial::one(self.space.len()))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// True if the polynomial is a scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(NormalMonomial::is_one)
    }

    /// Adds `c · m` in place, pruning zeros.
    pub fn add_term(&mut self, m: NormalMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                e.add_assign(&c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(QbggError::MismatchedSpaces(format!(
                "{:?} vs {:?}",
                self.space.labels, other.space.labels
            )))
        }
    }

    /// Sum, failing on mismatched spaces.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Difference, failing on mismatched spaces.
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_poly())
    }

    fn neg_poly(&self) -> Self {
        NormalPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        NormalPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// Adds a scalar multiple of the identity.
    pub fn add_scalar(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.add_term(NormalMonomial::one(self.space.len()), c.clone());
        out
    }

    /// Product in the oscillator algebra, failing on mismatched spaces.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = Self::zero(&self.space);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                mul_monomials(m1, m2, &c1.mul(c2), &mut out);
            }
        }
        Ok(out)
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::scalar(&self.space, S::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `f` to every coefficient, pruning zeros.
    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> NormalPoly<T> {
        NormalPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Like [`NormalPoly::map_coeffs`] with a fallible map.
    pub fn try_map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<NormalPoly<T>> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Ok(NormalPoly {
            space: self.space.clone(),
            terms,
        })
    }

    /// Re-expresses the polynomial over a space containing all of its labels.
    pub fn embed(&self, target: &Arc<OscSpace>) -> Result<Self> {
        if same_space(&self.space, target) {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .space
            .labels
            .iter()
            .map(|l| target.require(l))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut nm = NormalMonomial::one(target.len());
            for (i, &j) in map.iter().enumerate() {
                nm.creation[j] = m.creation[i];
                nm.annihilation[j] = m.annihilation[i];
            }
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }
}

/// Multiplies two monomials and accumulates `coeff ·` (normal-ordered product) into `out`.
///
/// Uses, pair by pair, `a^k ā^l = Σ_j C(k,j) C(l,j) j! ā^{l-j} a^{k-j}`.
fn mul_monomials<S: Scalar>(
    m1: &NormalMonomial,
    m2: &NormalMonomial,
    coeff: &S,
    out: &mut NormalPoly<S>,
) {
    let n = m1.creation.len();
    let mut base = NormalMonomial::one(n);
    let mut contractible = Vec::new();
    for p in 0..n {
        base.creation[p] = m1.creation[p] + m2.creation[p];
        base.annihilation[p] = m1.annihilation[p] + m2.annihilation[p];
        let jmax = m1.annihilation[p].min(m2.creation[p]);
        if jmax > 0 {
            contractible.push((p, m1.annihilation[p], m2.creation[p], jmax));
        }
    }
    if contractible.is_empty() {
        out.add_term(base, coeff.clone());
        return;
    }
    // Enumerate all contraction patterns j_p ∈ [0, jmax_p].
    let mut js = vec![0u32; contractible.len()];
    loop {
        let mut m = base.clone();
        let mut w = BigInt::one();
        for (slot, &(p, k, l, _)) in contractible.iter().enumerate() {
            let j = js[slot];
            m.creation[p] -= j;
            m.annihilation[p] -= j;
            w *= binomial(k, j) * binomial(l, j) * factorial(j);
        }
        let c = coeff.mul(&S::from_rational(&BigRational::from_integer(w)));
        out.add_term(m, c);
        // Advance the mixed-radix counter.
        let mut slot = 0;
        loop {
            if slot == js.len() {
                return;
            }
            if js[slot] < contractible[slot].3 {
                js[slot] += 1;
                break;
            }
            js[slot] = 0;
            slot += 1;
        }
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Normal-ordered product of two polynomials over the same space.
pub fn normal_mul<S: Scalar>(x: &NormalPoly<S>, y: &NormalPoly<S>) -> Result<NormalPoly<S>> {
    x.try_mul(y)
}

impl<S: Scalar> Add for &NormalPoly<S> {
    type Output = NormalPoly<S>;
    /// Panics on mismatched spaces; use [`NormalPoly::try_add`] to handle that case.
    fn add(self, rhs: Self) -> NormalPoly<S> {
        self.try_add(rhs).expect("oscillator spaces must match")
    }
}

impl<S: Scalar> Sub for &NormalPoly<S> {
    type Output = NormalPoly<S>;
    /// Panics on mismatched spaces; use [`NormalPoly::try_sub`] to handle that case.
    fn sub(self, rhs: Self) -> NormalPoly<S> {
        self.try_sub(rhs).expect("oscillator spaces must match")
    }
}

impl<S: Scalar> Mul for &NormalPoly<S> {
    type Output = NormalPoly<S>;
    /// Panics on mismatched spaces; use [`normal_mul`] to handle that case.
    fn mul(self, rhs: Self) -> NormalPoly<S> {
        self.try_mul(rhs).expect("oscillator spaces must match")
    }
}

impl<S: Scalar> Neg for &NormalPoly<S> {
    type Output = NormalPoly<S>;
    fn neg(self) -> NormalPoly<S> {
        self.neg_poly()
    }
}

impl NormalPoly<BigRational> {
    /// Serialises as a list of `{creation, annihilation, coeff}` records.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    json!({
                        "creation": m.creation,
                        "annihilation": m.annihilation,
                        "coeff": format_rational(c),
                    })
                })
                .collect(),
        )
    }

    /// Parses the JSON produced by [`NormalPoly::to_json`] over a given space.
    pub fn from_json(space: &Arc<OscSpace>, v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| QbggError::Parse("polynomial must be a JSON array".into()))?;
        let exps = |t: &Value, key: &str| -> Result<Vec<u32>> {
            t.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| QbggError::Parse(format!("missing {key}")))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|e| e as u32)
                        .ok_or_else(|| QbggError::Parse("exponent must be a non-negative integer".into()))
                })
                .collect()
        };
        let mut out = Self::zero(space);
        for t in arr {
            let m = NormalMonomial {
                creation: exps(t, "creation")?,
                annihilation: exps(t, "annihilation")?,
            };
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| QbggError::Parse("missing coeff".into()))?;
            let single = Self::monomial(space, m, parse_rational(c)?)?;
            out = out.try_add(&single)?;
        }
        Ok(out)
    }
}

impl<S: Scalar + fmt::Debug> fmt::Display for NormalPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for (p, &e) in m.creation.iter().enumerate() {
                if e > 0 {
                    write!(f, " ā{}^{}", self.space.labels[p], e)?;
                }
            }
            for (p, &e) in m.annihilation.iter().enumerate() {
                if e > 0 {
                    write!(f, " a{}^{}", self.space.labels[p], e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;

    type P = NormalPoly<BigRational>;

    fn one_pair() -> Arc<OscSpace> {
        OscSpace::new(["1"]).unwrap()
    }

    #[test]
    fn a_times_abar_is_normal_ordered() {
        let s = one_pair();
        let a = P::annihilation(&s, 0);
        let ab = P::creation(&s, 0);
        let expected = &P::number(&s, 0) + &P::int(&s, 1);
        assert_eq!(normal_mul(&a, &ab).unwrap(), expected);
    }

    #[test]
    fn a_abar_squared() {
        // (a ā)(a ā) = ā²a² + 3āa + 1.
        let s = one_pair();
        let mut sq = NormalMonomial::one(1);
        sq.creation[0] = 2;
        sq.annihilation[0] = 2;
        let expected =
            &(&P::monomial(&s, sq, int(1)).unwrap() + &P::number(&s, 0).scale(&int(3))) + &P::int(&s, 1);
        let aab = &P::annihilation(&s, 0) * &P::creation(&s, 0);
        assert_eq!(normal_mul(&aab, &aab).unwrap(), expected);
    }

    #[test]
    fn mismatched_spaces_error() {
        let s1 = one_pair();
        let s2 = OscSpace::new(["2"]).unwrap();
        let r = normal_mul(&P::creation(&s1, 0), &P::creation(&s2, 0));
        assert!(matches!(r, Err(QbggError::MismatchedSpaces(_))));
    }

    #[test]
    fn distinct_labels_required() {
        assert!(OscSpace::new(["x", "x"]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = OscSpace::new(["1", "2"]).unwrap();
        let x = &(&P::creation(&s, 0) * &P::annihilation(&s, 1)).scale(&crate::coeff::rat(3, 7))
            + &P::int(&s, -2);
        let v = x.to_json();
        assert_eq!(P::from_json(&s, &v).unwrap(), x);
        assert!(v.to_string().contains("\"coeff\":\"3/7\""));
    }

    #[test]
    fn embedding_follows_labels() {
        let s1 = OscSpace::new(["b"]).unwrap();
        let s2 = OscSpace::new(["a", "b"]).unwrap();
        let x = P::creation(&s1, 0).embed(&s2).unwrap();
        assert_eq!(x, P::creation(&s2, 1));
        assert!(P::creation(&s2, 0).embed(&s1).is_err());
    }
}
