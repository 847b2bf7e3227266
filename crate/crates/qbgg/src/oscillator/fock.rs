//! The Fock module, its truncations, and closed-form twisted traces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::BigRational;

use super::poly::{factorial, same_space, NormalPoly, OscSpace};
use crate::coeff::{FieldScalar, Scalar};
use crate::error::{QbggError, Result};

/// A sparse vector in the unnormalised occupation basis `|m⟩ = ∏ ā_p^{m_p} |0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<S> {
    space: Arc<OscSpace>,
    components: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> FockVector<S> {
    /// The zero vector.
    pub fn zero(space: &Arc<OscSpace>) -> Self {
        FockVector {
            space: space.clone(),
            components: BTreeMap::new(),
        }
    }

    /// A basis vector `|m⟩`.
    pub fn basis(space: &Arc<OscSpace>, occupation: Vec<u32>) -> Result<Self> {
        if occupation.len() != space.len() {
            return Err(QbggError::InvalidParameter(
                "occupation vector length does not match the oscillator space".into(),
            ));
        }
        let mut v = Self::zero(space);
        v.components.insert(occupation, S::one());
        Ok(v)
    }

    /// The vacuum `|0⟩`.
    pub fn vacuum(space: &Arc<OscSpace>) -> Self {
        Self::basis(space, vec![0; space.len()]).expect("vacuum matches space")
    }

    /// The oscillator space.
    pub fn space(&self) -> &Arc<OscSpace> {
        &self.space
    }

    /// Non-zero components keyed by occupation vector.
    pub fn components(&self) -> &BTreeMap<Vec<u32>, S> {
        &self.components
    }

    /// Component along `|m⟩`.
    pub fn component(&self, occupation: &[u32]) -> S {
        self.components.get(occupation).cloned().unwrap_or_else(S::zero)
    }

    /// True for the zero vector.
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Adds `c |m⟩` in place.
    pub fn add_component(&mut self, occupation: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        let e = self.components.entry(occupation.clone()).or_insert_with(S::zero);
        e.add_assign(&c);
        if e.is_zero() {
            self.components.remove(&occupation);
        }
    }
}

/// Applies an oscillator polynomial to a Fock vector:
/// `ā_p |m⟩ = |m + e_p⟩`, `a_p |m⟩ = m_p |m − e_p⟩`.
pub fn apply_to_fock<S: Scalar>(x: &NormalPoly<S>, v: &FockVector<S>) -> Result<FockVector<S>> {
    if !same_space(x.space(), &v.space) {
        return Err(QbggError::MismatchedSpaces(
            "polynomial and Fock vector live over different spaces".into(),
        ));
    }
    let mut out = FockVector::zero(&v.space);
    for (occ, vc) in &v.components {
        'terms: for (m, c) in x.terms() {
            // Annihilators act first: a^k |n⟩ = n(n-1)…(n-k+1) |n-k⟩.
            let mut weight = c.mul(vc);
            let mut target = occ.clone();
            for p in 0..occ.len() {
                let k = m.annihilation[p];
                if k > target[p] {
                    continue 'terms;
                }
                for i in 0..k {
                    weight = weight.mul(&S::from_int((target[p] - i) as i64));
                }
                target[p] = target[p] - k + m.creation[p];
            }
            out.add_component(target, weight);
        }
    }
    Ok(out)
}

/// Matrix of `x` on the truncation of the Fock space to occupations `≤ cutoff`
/// in every pair; rows and columns follow the lexicographic order of
/// occupation vectors (first pair most significant). Entry `(r, c)` is the
/// coefficient of basis vector `r` in `x |c⟩`.
pub fn truncated_matrix<S: Scalar>(x: &NormalPoly<S>, cutoff: u32) -> Result<Vec<Vec<S>>> {
    let n = x.space().len();
    let basis = occupations(n, cutoff);
    let index: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let dim = basis.len();
    let mut mat = vec![vec![S::zero(); dim]; dim];
    for (col, occ) in basis.iter().enumerate() {
        let image = apply_to_fock(x, &FockVector::basis(x.space(), occ.clone())?)?;
        for (target, c) in image.components() {
            if let Some(&row) = index.get(target) {
                mat[row][col] = c.clone();
            }
        }
    }
    Ok(mat)
}

/// All occupation vectors with entries in `[0, cutoff]`, lexicographically ordered.
pub(crate) fn occupations(n: usize, cutoff: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=cutoff).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

/// Diagonal twist `prefactor · ∏_p q_p^{N_p}` acting on the Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistWeights<S> {
    /// Per-pair weights `q_p`.
    pub weights: Vec<S>,
    /// Overall scalar prefactor.
    pub prefactor: S,
}

impl<S: Scalar> TwistWeights<S> {
    /// A twist with unit prefactor.
    pub fn new(weights: Vec<S>) -> Self {
        TwistWeights {
            weights,
            prefactor: S::one(),
        }
    }
}

/// Twisted trace `tr(prefactor · ∏ q_p^{N_p} · x)` over the Fock space, in closed form:
/// each balanced monomial `∏ ā_p^{k_p} a_p^{k_p}` contributes `∏ k_p! q_p^{k_p} / (1 − q_p)^{k_p+1}`,
/// unbalanced monomials contribute zero.
pub fn fock_trace<S: FieldScalar>(x: &NormalPoly<S>, twist: &TwistWeights<S>) -> Result<S> {
    let space = x.space();
    if twist.weights.len() != space.len() {
        return Err(QbggError::InvalidParameter(format!(
            "twist has {} weights for {} oscillator pairs",
            twist.weights.len(),
            space.len()
        )));
    }
    let mut inv_one_minus = Vec::with_capacity(space.len());
    for (p, q) in twist.weights.iter().enumerate() {
        let d = S::one().sub(q);
        if d.is_zero() {
            return Err(QbggError::DivergentTrace(space.labels()[p].clone()));
        }
        inv_one_minus.push(d.inv()?);
    }
    // Per pair, cache k! q^k / (1-q)^{k+1}.
    let mut cache: Vec<Vec<S>> = inv_one_minus.iter().map(|g| vec![g.clone()]).collect();
    let mut total = S::zero();
    for (m, c) in x.terms() {
        if !m.is_balanced() {
            continue;
        }
        let mut term = c.clone();
        for (p, &k) in m.creation.iter().enumerate() {
            let k = k as usize;
            while cache[p].len() <= k {
                let j = cache[p].len();
                let prev = cache[p][j - 1].clone();
                let factor = S::from_int(j as i64)
                    .mul(&twist.weights[p])
                    .mul(&inv_one_minus[p]);
                cache[p].push(prev.mul(&factor));
            }
            term = term.mul(&cache[p][k]);
        }
        total.add_assign(&term);
    }
    Ok(total.mul(&twist.prefactor))
}

/// Partial-sum oracle for [`fock_trace`]: sums the diagonal matrix elements of
/// `x` weighted by `∏ q_p^{m_p}` over occupations `m_p ≤ cutoff`.
pub fn fock_trace_partial<S: FieldScalar>(
    x: &NormalPoly<S>,
    twist: &TwistWeights<S>,
    cutoff: u32,
) -> Result<S> {
    let mut total = S::zero();
    for (m, c) in x.terms() {
        if !m.is_balanced() {
            continue;
        }
        // ⟨n| ā^k a^k |n⟩ = n!/(n-k)! in the unnormalised basis (diagonal coefficient).
        let mut term = c.clone();
        for (p, &k) in m.creation.iter().enumerate() {
            let q = &twist.weights[p];
            let mut sum = S::zero();
            let mut qn = S::one();
            for n in 0..=cutoff {
                if n >= k {
                    let ff = factorial(n) / factorial(n - k);
                    sum.add_assign(&qn.mul(&S::from_rational(&BigRational::from_integer(ff))));
                }
                qn = qn.mul(q);
            }
            term = term.mul(&sum);
        }
        total.add_assign(&term);
    }
    Ok(total.mul(&twist.prefactor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::oscillator::NormalMonomial;

    type P = NormalPoly<BigRational>;

    #[test]
    fn fock_trace_examples() {
        let s = OscSpace::new(["1"]).unwrap();
        let tw = TwistWeights::new(vec![rat(1, 2)]);
        assert_eq!(fock_trace(&P::int(&s, 1), &tw).unwrap(), int(2));
        assert_eq!(fock_trace(&P::number(&s, 0), &tw).unwrap(), int(2));
        assert_eq!(fock_trace(&P::creation(&s, 0), &tw).unwrap(), int(0));
        let div = TwistWeights::new(vec![int(1)]);
        assert!(matches!(
            fock_trace(&P::int(&s, 1), &div),
            Err(QbggError::DivergentTrace(_))
        ));
    }

    #[test]
    fn apply_examples() {
        let s = OscSpace::new(["1"]).unwrap();
        let mut a2 = NormalMonomial::one(1);
        a2.annihilation[0] = 2;
        let a2 = P::monomial(&s, a2, int(1)).unwrap();
        let v = apply_to_fock(&a2, &FockVector::basis(&s, vec![3]).unwrap()).unwrap();
        assert_eq!(v, {
            let mut w = FockVector::zero(&s);
            w.add_component(vec![1], int(6));
            w
        });
        let up = apply_to_fock(&P::creation(&s, 0), &FockVector::vacuum(&s)).unwrap();
        assert_eq!(up.component(&[1]), int(1));
        assert!(apply_to_fock(&P::annihilation(&s, 0), &FockVector::vacuum(&s))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn truncated_number_operator() {
        let s = OscSpace::new(["1"]).unwrap();
        let m = truncated_matrix(&P::number(&s, 0), 2).unwrap();
        assert_eq!(
            m,
            vec![
                vec![int(0), int(0), int(0)],
                vec![int(0), int(1), int(0)],
                vec![int(0), int(0), int(2)]
            ]
        );
    }

    #[test]
    fn partial_sums_approach_closed_form() {
        let s = OscSpace::new(["1", "2"]).unwrap();
        let x = &(&P::number(&s, 0) * &P::number(&s, 1)) + &P::int(&s, 3);
        let tw = TwistWeights::new(vec![1.0 / 3.0, 0.25]);
        let xf = x.map_coeffs(crate::coeff::rational_to_f64);
        let exact = fock_trace(&xf, &tw).unwrap();
        let approx = fock_trace_partial(&xf, &tw, 60).unwrap();
        assert!(((exact - approx) / exact).abs() < 1e-9);
    }
}
