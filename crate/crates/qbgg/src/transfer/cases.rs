//! The families of modules, cosets and Q-operators used by the transfer-level
//! identities, per algebra type.

use num::BigRational;

use crate::coeff::int;
use crate::error::{QbggError, Result};
use crate::lax::families::{self, SubsetTransform};
use crate::lax::LaxMatrix;
use crate::transfer::tensor::TensorOperator;
use crate::transfer::trace::{character_plus, q_operator, transfer_plus};
use crate::transfer::twist::TwistSpec;
use crate::transfer::twisted::Twisted;
use crate::weyl::{enumerate_cosets, AlgebraType, CosetElement, CosetTag, ModuleCase};

type Q = BigRational;

/// The nondegenerate Lax matrix whose vacuum generates the module `L_{tω}`.
pub fn module_lax(alg: &AlgebraType, case: &ModuleCase, t: &Q) -> Result<LaxMatrix<Q>> {
    case.validate(alg)?;
    match (case, alg) {
        (ModuleCase::Rect { a }, AlgebraType::A(n)) => families::a_rect(*n, *a, t),
        (ModuleCase::Symplectic, _) => families::cd_nondegenerate(alg, t),
        (ModuleCase::Spinor { odd: false }, _) => families::cd_nondegenerate(alg, t),
        (ModuleCase::Spinor { odd: true }, _) => {
            let mut mu = vec![1i8; alg.rank()];
            mu[alg.rank() - 1] = -1;
            families::cd_mu(alg, t, &mu)
        }
        (ModuleCase::Vector, _) => families::bd_nondegenerate(alg.dim_k(), t),
        _ => Err(QbggError::InvalidParameter(format!("{case:?} is not available for {alg}"))),
    }
}

/// The Lax matrix realising the parabolic Verma-type module of a coset.
pub fn coset_lax(alg: &AlgebraType, case: &ModuleCase, coset: &CosetElement, t: &Q) -> Result<LaxMatrix<Q>> {
    match (&coset.tag, case, alg) {
        (CosetTag::SubsetI(subset), ModuleCase::Rect { a }, AlgebraType::A(n)) => {
            families::a_rect_conjugated(*n, *a, t, subset, SubsetTransform::ParticleHole)
        }
        (CosetTag::SignVector { mu, .. }, _, _) => families::cd_mu(alg, t, mu),
        (CosetTag::BDIndex(k), ModuleCase::Vector, _) => families::bd_k(alg.dim_k(), t, *k),
        _ => Err(QbggError::InvalidParameter(format!("coset {} does not fit {case:?}", coset.tag))),
    }
}

/// `T_{tω}(x)` continued to arbitrary `t`: `Σ_w (−1)^{l(w)} T⁺_{w,t}(x)` over the cosets.
pub fn continued_transfer(
    alg: &AlgebraType,
    case: &ModuleCase,
    t: &Q,
    n: usize,
    twist: &TwistSpec,
) -> Result<Twisted<TensorOperator>> {
    let mut acc = Twisted::zero(twist.tau());
    for coset in enumerate_cosets(alg, case)? {
        let lax = coset_lax(alg, case, &coset, t)?;
        let term = transfer_plus(&lax, twist, n)?;
        acc = acc.add(&term.scale(&int(coset.sign)))?;
    }
    Ok(acc)
}

/// The length-zero version of [`continued_transfer`]: `Σ_w (−1)^{l(w)} ch⁺_{w,t}`.
pub fn continued_character(alg: &AlgebraType, case: &ModuleCase, t: &Q, twist: &TwistSpec) -> Result<Twisted<Q>> {
    let mut acc = Twisted::zero(twist.tau());
    for coset in enumerate_cosets(alg, case)? {
        let lax = coset_lax(alg, case, &coset, t)?;
        acc = acc.add(&character_plus(&lax, twist)?.scale(&int(coset.sign)))?;
    }
    Ok(acc)
}

/// Q-operator `Q_I` of `gl_n` built from the degenerate Lax matrix `L_I`
/// (for `|I| = 1` this is the single-index `Q_i`).
pub fn q_subset(n: usize, subset: &[usize], twist: &TwistSpec, sites: usize) -> Result<TensorOperator> {
    let lax = if subset.len() == 1 {
        families::a_partonic(n, subset[0])?
    } else {
        families::a_degenerate(n, subset)?
    };
    q_operator(&lax, twist, sites)
}

/// Complement of a subset of `{1..n}`.
pub fn complement(n: usize, subset: &[usize]) -> Vec<usize> {
    (1..=n).filter(|i| !subset.contains(i)).collect()
}

/// `Q_μ` of types C/D from `B_μ L_± B_μ^{-1}`: `plus` selects `L_+`
/// (giving `Q_μ`) or `L_−` (giving `Q_{μ̄}`, with `μ̄ = −μ`).
pub fn q_sign_vector(alg: &AlgebraType, mu: &[i8], plus: bool, twist: &TwistSpec, sites: usize) -> Result<TensorOperator> {
    q_operator(&sign_vector_lax(alg, mu, plus)?, twist, sites)
}

/// `B_μ L_± B_μ^{-1}`.
pub fn sign_vector_lax(alg: &AlgebraType, mu: &[i8], plus: bool) -> Result<LaxMatrix<Q>> {
    let base = families::cd_degenerate::<Q>(alg, plus)?;
    let b = families::b_mu(alg, mu)?;
    Ok(base.with_matrix(base.matrix().conjugate(&b)?))
}

/// `Q_μ` for types C/D, labelled by the sign vector of the module it factorises:
/// `B_μ L_+ B_μ^{-1}` traced.
pub fn q_mu(alg: &AlgebraType, mu: &[i8], twist: &TwistSpec, sites: usize) -> Result<TensorOperator> {
    q_sign_vector(alg, mu, true, twist, sites)
}

/// `Q_{μ̄}` from `B_μ L_− B_μ^{-1}`.
pub fn q_mu_bar(alg: &AlgebraType, mu: &[i8], twist: &TwistSpec, sites: usize) -> Result<TensorOperator> {
    q_sign_vector(alg, mu, false, twist, sites)
}

/// Orthogonal Q-operators: `Q_k` from `B̂_k L_1 B̂_k^{-1}` and `Q_{k'}` from
/// `B̂_k L_K B̂_k^{-1}` (1-based `k ∈ {1..r} ∪ {r'..1'}`).
pub fn bd_q_lax(kk: usize, k: usize, first: bool) -> Result<LaxMatrix<Q>> {
    let base = families::bd_degenerate::<Q>(kk, first)?;
    let b = families::b_hat(base.alg(), k)?;
    Ok(base.with_matrix(base.matrix().conjugate(&b)?))
}

/// `Q_k` for the orthogonal vector family (any `k`, primed values `> K/2`).
pub fn q_bd(kk: usize, k: usize, twist: &TwistSpec, sites: usize) -> Result<TensorOperator> {
    q_operator(&bd_q_lax(kk, k, true)?, twist, sites)
}

/// `Q_{k'}` for the orthogonal vector family, from `B̂_k L_K B̂_k^{-1}`.
pub fn q_bd_primed(kk: usize, k: usize, twist: &TwistSpec, sites: usize) -> Result<TensorOperator> {
    q_operator(&bd_q_lax(kk, k, false)?, twist, sites)
}

/// `k' = K + 1 − k` for 1-based `k ∈ 1..=K`.
pub fn bd_prime(kk: usize, k: usize) -> usize {
    kk + 1 - k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn coset_laxes_have_highest_weight_vacua() {
        let t = rat(2, 3);
        for (alg, case) in [
            (AlgebraType::A(3), ModuleCase::Rect { a: 2 }),
            (AlgebraType::C(2), ModuleCase::Symplectic),
            (AlgebraType::D(3), ModuleCase::Spinor { odd: true }),
            (AlgebraType::B(2), ModuleCase::Vector),
        ] {
            for coset in enumerate_cosets(&alg, &case).unwrap() {
                let l = coset_lax(&alg, &case, &coset, &t).unwrap();
                let w = families::vacuum_weight(&l).unwrap();
                assert_eq!(w, coset.highest_weight(&t), "{alg} {}", coset.tag);
            }
        }
    }

    #[test]
    fn odd_spinor_module_lax_has_odd_highest_weight() {
        let alg = AlgebraType::D(3);
        let l = module_lax(&alg, &ModuleCase::Spinor { odd: true }, &rat(1, 2)).unwrap();
        assert_eq!(families::vacuum_weight(&l).unwrap(), vec![rat(1, 2), rat(1, 2), rat(-1, 2)]);
    }
}
