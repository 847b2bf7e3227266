//! Formal sums `Σ_c τ^c · V_c` with rational exponent classes.
//!
//! Twisted traces carry prefactors `τ^e` whose exponents depend on the
//! continuous parameter `t`. For non-integral exponents these powers are not
//! rational numbers, so they are kept formal: each exponent vector is split into
//! its fractional part (the *class*, in `[0,1)^rank`) and its integer part,
//! which is evaluated exactly and absorbed into the coefficient. Distinct
//! classes are linearly independent over rational functions of `τ`, so an
//! identity between twisted sums holds iff it holds class by class.

use std::collections::BTreeMap;

use num::{BigRational, Signed, Zero};
use serde_json::{json, Value};

use crate::coeff::{format_rational, int_pow};
use crate::error::{QbggError, Result};
use crate::transfer::tensor::TensorOperator;

type Q = BigRational;

/// Coefficient types of twisted sums.
pub trait Linear: Clone + PartialEq {
    /// `self + other`.
    fn plus(&self, other: &Self) -> Result<Self>;
    /// `c · self`.
    fn times(&self, c: &Q) -> Self;
    /// True for zero.
    fn is_null(&self) -> bool;
}

impl Linear for Q {
    fn plus(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn times(&self, c: &Q) -> Self {
        self * c
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
}

impl Linear for TensorOperator {
    fn plus(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn times(&self, c: &Q) -> Self {
        self.scale(c)
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
}

/// Formal sum `Σ_c τ^c V_c` over exponent classes `c ∈ [0,1)^rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct Twisted<V> {
    tau: Vec<Q>,
    terms: BTreeMap<Vec<Q>, V>,
}

fn split(e: &Q) -> (Q, i64) {
    let fl = e.floor();
    let i = fl.to_integer();
    let i: i64 = i64::try_from(i).unwrap_or(if e.is_negative() { i64::MIN } else { i64::MAX });
    (e - fl, i)
}

impl<V: Linear> Twisted<V> {
    /// The empty sum.
    pub fn zero(tau: &[Q]) -> Self {
        Twisted {
            tau: tau.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    /// `τ^e · v`.
    pub fn monomial(tau: &[Q], exponent: &[Q], v: V) -> Result<Self> {
        if exponent.len() != tau.len() {
            return Err(QbggError::DimensionMismatch {
                expected: tau.len(),
                found: exponent.len(),
            });
        }
        let mut class = Vec::with_capacity(tau.len());
        let mut factor = Q::from_integer(1.into());
        for (t, e) in tau.iter().zip(exponent) {
            let (frac, whole) = split(e);
            if whole != 0 {
                factor *= int_pow(t, whole)?;
            }
            class.push(frac);
        }
        let mut out = Self::zero(tau);
        let v = v.times(&factor);
        if !v.is_null() {
            out.terms.insert(class, v);
        }
        Ok(out)
    }

    /// `v` with trivial exponent.
    pub fn plain(tau: &[Q], v: V) -> Self {
        let mut out = Self::zero(tau);
        if !v.is_null() {
            out.terms.insert(vec![Q::zero(); tau.len()], v);
        }
        out
    }

    /// The twist parameters.
    pub fn tau(&self) -> &[Q] {
        &self.tau
    }

    /// Classes and coefficients.
    pub fn terms(&self) -> &BTreeMap<Vec<Q>, V> {
        &self.terms
    }

    /// True for the empty sum.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient when the sum has integral exponents only.
    pub fn as_plain(&self) -> Option<&V> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.iter().next().filter(|(c, _)| c.iter().all(Q::is_zero)).map(|(_, v)| v),
            _ => None,
        }
    }

    fn add_class(&mut self, class: Vec<Q>, v: V) -> Result<()> {
        match self.terms.remove(&class) {
            Some(old) => {
                let s = old.plus(&v)?;
                if !s.is_null() {
                    self.terms.insert(class, s);
                }
            }
            None => {
                if !v.is_null() {
                    self.terms.insert(class, v);
                }
            }
        }
        Ok(())
    }

    fn check_tau(&self, other: &Self) -> Result<()> {
        if self.tau != other.tau {
            return Err(QbggError::InvalidParameter("twisted sums over different twists".into()));
        }
        Ok(())
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_tau(other)?;
        let mut out = self.clone();
        for (c, v) in &other.terms {
            out.add_class(c.clone(), v.clone())?;
        }
        Ok(out)
    }

    /// `c · self`.
    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(&self.tau);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v.times(c));
        }
        out
    }

    /// `self − other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Q::from_integer((-1).into())))
    }

    /// Applies a linear map to every coefficient.
    pub fn map<W: Linear>(&self, f: impl Fn(&V) -> Result<W>) -> Result<Twisted<W>> {
        let mut out = Twisted::zero(&self.tau);
        for (c, v) in &self.terms {
            out.add_class(c.clone(), f(v)?)?;
        }
        Ok(out)
    }

    /// Classes on which `self` and `other` differ, described by `describe`.
    pub fn differing_classes(&self, other: &Self) -> Vec<Vec<Q>> {
        let mut keys: Vec<&Vec<Q>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter(|k| self.terms.get(*k) != other.terms.get(*k))
            .cloned()
            .collect()
    }
}

impl Twisted<Q> {
    /// Product of two scalar sums.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_tau(other)?;
        let mut out = Self::zero(&self.tau);
        for (c1, v1) in &self.terms {
            for (c2, v2) in &other.terms {
                let e: Vec<Q> = c1.iter().zip(c2).map(|(a, b)| a + b).collect();
                for (c, v) in Twisted::monomial(&self.tau, &e, v1 * v2)?.terms {
                    out.add_class(c, v)?;
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for a coefficient `v` with trivial exponent.
    pub fn times_value<V: Linear>(&self, v: &V) -> Twisted<V> {
        let mut out = Twisted::zero(&self.tau);
        for (c, s) in &self.terms {
            let w = v.times(s);
            if !w.is_null() {
                out.terms.insert(c.clone(), w);
            }
        }
        out
    }

    /// Numerical value `Σ_c τ^c v_c`; fails with [`QbggError::InexactRoot`]
    /// when some fractional power of `τ` is irrational.
    pub fn evaluate(&self) -> Result<Q> {
        let mut total = Q::zero();
        for (c, v) in &self.terms {
            total += crate::weyl::tau_power(&self.tau, c)? * v;
        }
        Ok(total)
    }

    /// JSON: list of `{"class": [..], "value": "p/q"}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(c, v)| json!({"class": c.iter().map(format_rational).collect::<Vec<_>>(), "value": format_rational(v)}))
                .collect(),
        )
    }
}

impl Twisted<TensorOperator> {
    /// JSON: list of `{"class": [..], "operator": {...}}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(c, v)| json!({"class": c.iter().map(format_rational).collect::<Vec<_>>(), "operator": v.to_json()}))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    #[test]
    fn integer_parts_are_absorbed() {
        let tau = vec![int(2), int(3)];
        let a = Twisted::monomial(&tau, &[rat(5, 2), int(-1)], int(1)).unwrap();
        let b = Twisted::monomial(&tau, &[rat(1, 2), int(0)], rat(4, 3)).unwrap();
        assert_eq!(a, b);
        assert!(a.as_plain().is_none());
        let c = Twisted::monomial(&tau, &[int(2), int(1)], int(1)).unwrap();
        assert_eq!(c.as_plain(), Some(&int(12)));
    }

    #[test]
    fn products_combine_classes() {
        let tau = vec![int(4)];
        let half = Twisted::monomial(&tau, &[rat(1, 2)], int(1)).unwrap();
        assert_eq!(half.mul(&half).unwrap().as_plain(), Some(&int(4)));
        let zero = half.sub(&half).unwrap();
        assert!(zero.is_zero());
        assert_eq!(half.evaluate().unwrap(), int(2));
        let irrational = Twisted::monomial(&[int(2)], &[rat(1, 2)], int(1)).unwrap();
        assert!(irrational.evaluate().is_err());
    }
}
