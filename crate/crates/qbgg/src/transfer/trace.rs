//! Monodromies over the Fock space and their twisted traces: the
//! infinite-dimensional transfer matrices `T⁺` and the Q-operators.

use std::sync::Arc;

use num::{BigRational, One, Zero};
use rayon::prelude::*;

use crate::coeff::FieldScalar;
use crate::error::{QbggError, Result};
use crate::lax::{LaxMatrix, OpPoly};
use crate::oscillator::{fock_trace, NormalPoly, OscSpace, TwistWeights};
use crate::transfer::tensor::{SparseMatrix, TensorOperator};
use crate::transfer::twist::{cartan_twist, conjugation_twist, twist_conjugation_check, TwistSpec};
use crate::transfer::twisted::Twisted;

type Q = BigRational;

/// The monodromy `L(x) ⊗ … ⊗ L(x)`: for quantum multi-indices
/// `(i_1..i_N), (j_1..j_N)` the auxiliary-space product `L_{i_1j_1}(x) ⋯ L_{i_Nj_N}(x)`.
/// Only non-zero entries are stored, keyed by row-major flat indices.
#[derive(Debug, Clone)]
pub struct Monodromy {
    sites: usize,
    local_dim: usize,
    space: Arc<OscSpace>,
    entries: Vec<((usize, usize), OpPoly<Q>)>,
}

impl Monodromy {
    /// Chain length `N`.
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Local dimension `K`.
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// The auxiliary oscillator space.
    pub fn space(&self) -> &Arc<OscSpace> {
        &self.space
    }

    /// Non-zero entries, sorted by `(row, col)`.
    pub fn entries(&self) -> &[((usize, usize), OpPoly<Q>)] {
        &self.entries
    }

    /// Entry at flat indices (zero when absent).
    pub fn entry(&self, row: usize, col: usize) -> OpPoly<Q> {
        match self.entries.binary_search_by(|(k, _)| k.cmp(&(row, col))) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => OpPoly::zero(&self.space),
        }
    }

    /// Applies a scalar functional coefficient-wise in `x` to every entry,
    /// in parallel over entries.
    pub fn trace_with<F>(&self, f: F) -> Result<TensorOperator>
    where
        F: Fn(&NormalPoly<Q>) -> Result<Q> + Sync,
    {
        let traced: Vec<((usize, usize), Vec<Q>)> = self
            .entries
            .par_iter()
            .map(|(key, p)| Ok((*key, p.coeffs().iter().map(&f).collect::<Result<Vec<Q>>>()?)))
            .collect::<Result<_>>()?;
        let degree = traced.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
        let mut coeffs: Vec<SparseMatrix> = vec![SparseMatrix::new(); degree];
        for (key, cs) in traced {
            for (j, c) in cs.into_iter().enumerate() {
                if !c.is_zero() {
                    coeffs[j].insert(key, c);
                }
            }
        }
        Ok(TensorOperator::from_coeffs(self.sites, self.local_dim, coeffs))
    }
}

fn multi_index(mut flat: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = flat % k;
        flat /= k;
    }
    out
}

/// Builds the monodromy of `N` copies of `L`; `N = 0` gives the auxiliary identity.
pub fn monodromy(lax: &LaxMatrix<Q>, n: usize) -> Result<Monodromy> {
    let k = lax.matrix().rows();
    let space = lax.space().clone();
    let dim = k.checked_pow(n as u32).ok_or_else(|| QbggError::InvalidParameter("chain too long".into()))?;
    let keys: Vec<(usize, usize)> = (0..dim).flat_map(|r| (0..dim).map(move |c| (r, c))).collect();
    let mut entries: Vec<((usize, usize), OpPoly<Q>)> = keys
        .par_iter()
        .filter_map(|&(row, col)| {
            let ri = multi_index(row, k, n);
            let ci = multi_index(col, k, n);
            let mut acc = OpPoly::scalar(&space, Q::one());
            for (&i, &j) in ri.iter().zip(&ci) {
                let e = lax.matrix().get(i, j);
                if e.is_zero() {
                    return None;
                }
                acc = acc.mul(e);
                if acc.is_zero() {
                    return None;
                }
            }
            Some(((row, col), acc))
        })
        .collect();
    entries.sort_by_key(|a| a.0);
    Ok(Monodromy {
        sites: n,
        local_dim: k,
        space,
        entries,
    })
}

/// `T⁺(x) = tr ∏_i τ_i^{E_ii} L(x) ⊗ … ⊗ L(x)` for a nondegenerate Lax matrix,
/// with the twist read off its Cartan generators. The prefactor `τ^c` (vacuum
/// weight `c`) is kept formal.
pub fn transfer_plus(lax: &LaxMatrix<Q>, twist: &TwistSpec, n: usize) -> Result<Twisted<TensorOperator>> {
    check_alg(lax, twist)?;
    let cartan = cartan_twist(lax)?;
    let weights = twist.weights(&cartan.exponents)?;
    let op = monodromy(lax, n)?.trace_with(|p| fock_trace(p, &weights))?;
    Ok(cartan.prefactor(twist)?.times_value(&op))
}

/// `ch⁺ = tr ∏_i τ_i^{E_ii}`, the length-zero transfer matrix as a scalar.
pub fn character_plus(lax: &LaxMatrix<Q>, twist: &TwistSpec) -> Result<Twisted<Q>> {
    check_alg(lax, twist)?;
    let cartan = cartan_twist(lax)?;
    let weights = twist.weights(&cartan.exponents)?;
    let value = fock_trace(&NormalPoly::scalar(lax.space(), Q::one()), &weights)?;
    Ok(cartan.prefactor(twist)?.times_value(&value))
}

/// Normalized twisted trace `tr(Y X) / tr(Y)` of a monodromy for the twist
/// `Y = prefactor · ∏ q_p^{N_p}`.
pub fn normalized_trace(mono: &Monodromy, weights: &TwistWeights<Q>) -> Result<TensorOperator> {
    let norm = fock_trace(&NormalPoly::scalar(mono.space(), Q::one()), weights)?;
    let inv = norm.inv()?;
    let op = mono.trace_with(|p| fock_trace(p, weights))?;
    Ok(op.scale(&inv))
}

/// Fock twist weights `q_p` of a degenerate Lax matrix, derived from the
/// conjugation condition and verified on every entry.
pub fn q_twist_weights(ldeg: &LaxMatrix<Q>, twist: &TwistSpec) -> Result<TwistWeights<Q>> {
    check_alg(ldeg, twist)?;
    let exponents = conjugation_twist(ldeg)?;
    let report = twist_conjugation_check(ldeg, &exponents);
    if !report.passed() {
        return Err(QbggError::InvalidParameter(format!(
            "twist of {} violates the conjugation condition: {:?}",
            ldeg.family(),
            report.defect_sample
        )));
    }
    twist.weights(&exponents)
}

/// The Q-operator: normalized twisted trace of the degenerate monodromy.
pub fn q_operator(ldeg: &LaxMatrix<Q>, twist: &TwistSpec, n: usize) -> Result<TensorOperator> {
    let weights = q_twist_weights(ldeg, twist)?;
    normalized_trace(&monodromy(ldeg, n)?, &weights)
}

/// [`q_operator`] with an explicit scalar prefactor in the twist; the
/// normalization makes the result independent of it.
pub fn q_operator_with_prefactor(
    ldeg: &LaxMatrix<Q>,
    twist: &TwistSpec,
    n: usize,
    prefactor: &Q,
) -> Result<TensorOperator> {
    let mut weights = q_twist_weights(ldeg, twist)?;
    weights.prefactor = prefactor.clone();
    normalized_trace(&monodromy(ldeg, n)?, &weights)
}

fn check_alg(lax: &LaxMatrix<Q>, twist: &TwistSpec) -> Result<()> {
    if lax.alg() != twist.alg() {
        return Err(QbggError::InvalidParameter(format!(
            "twist for {} applied to a {} Lax matrix",
            twist.alg(),
            lax.alg()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::lax::families;
    use crate::weyl::AlgebraType;

    #[test]
    fn monodromy_small_cases() {
        let l = families::a_verma::<Q>(2, &[int(0), int(0)]).unwrap();
        let m0 = monodromy(&l, 0).unwrap();
        assert_eq!(m0.entries().len(), 1);
        assert_eq!(m0.entry(0, 0), OpPoly::scalar(l.space(), int(1)));
        let m1 = monodromy(&l, 1).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m1.entry(i, j), l.matrix().get(i, j).clone());
            }
        }
        let m2 = monodromy(&l, 2).unwrap();
        let l11 = l.matrix().get(0, 0);
        assert_eq!(m2.entry(0, 0), l11.mul(l11));
        assert_eq!(m2.entry(0, 0).degree(), Some(2));
    }

    #[test]
    fn degenerate_twist_guard() {
        let twist = TwistSpec::new(AlgebraType::A(2), vec![int(2), int(3)]).unwrap();
        let l = families::a_partonic::<Q>(2, 1).unwrap();
        let q0 = q_operator(&l, &twist, 0).unwrap();
        assert_eq!(q0, TensorOperator::identity(0, 2));
        let q1 = q_operator(&l, &twist, 1).unwrap();
        let doubled = q_operator_with_prefactor(&l, &twist, 1, &int(2)).unwrap();
        assert_eq!(q1, doubled);
        assert!(TwistSpec::new(AlgebraType::A(2), vec![rat(3, 2), rat(3, 2)]).is_err());
    }

    #[test]
    fn verma_length_zero_is_the_character() {
        let twist = TwistSpec::new(AlgebraType::A(2), vec![int(2), int(5)]).unwrap();
        let l = families::a_verma::<Q>(2, &[int(1), int(0)]).unwrap();
        let ch = character_plus(&l, &twist).unwrap();
        // τ₁^{λ₁} τ₂^{λ₂} · τ₁/(τ₁ − τ₂) = 2 · 2/(2 − 5).
        assert_eq!(ch.as_plain(), Some(&rat(-4, 3)));
        let t0 = transfer_plus(&l, &twist, 0).unwrap();
        assert_eq!(t0.as_plain().unwrap().entry(0, 0, 0), rat(-4, 3));
    }
}
