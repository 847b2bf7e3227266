//! Closed-form characters of the parabolic Verma-type modules and their
//! alternating sums, kept formal in the module parameter `t`.
//!
//! The closed forms are independent of the oscillator construction: they are
//! compared against the length-zero traces of the Lax matrices, and their
//! alternating sums against the Weyl character.

use num::{BigRational, One};

use crate::coeff::{int, FieldScalar};
use crate::error::{QbggError, Result};
use crate::transfer::twist::TwistSpec;
use crate::transfer::twisted::Twisted;
use crate::weyl::{enumerate_cosets, is_positive, tau_power, AlgebraType, CosetElement, CosetTag, ModuleCase, Weight};

type Q = BigRational;

fn inv(q: Q) -> Result<Q> {
    q.inv()
}

/// `ch⁺_λ = ∏_i τ_i^{λ_i} ∏_{i<j} τ_i/(τ_i − τ_j)` for the full-flag `gl_n` module.
pub fn verma_character(lambda: &[Q], twist: &TwistSpec) -> Result<Twisted<Q>> {
    let tau = twist.tau();
    let mut den = Q::one();
    for i in 0..tau.len() {
        for j in i + 1..tau.len() {
            den *= inv(&tau[i] - &tau[j])? * &tau[i];
        }
    }
    Twisted::monomial(tau, lambda, den)
}

/// `ch⁺_{I,t} = ∏_{i∈I} τ_i^t ∏_{i∈I, j∉I} (−1)^{δ_{i>j}} τ_i/(τ_i − τ_j)`.
pub fn rect_character(subset: &[usize], t: &Q, twist: &TwistSpec) -> Result<Twisted<Q>> {
    let tau = twist.tau();
    let n = tau.len();
    let mut value = Q::one();
    let mut exponent = vec![int(0); n];
    for &i in subset {
        exponent[i - 1] = t.clone();
        for j in (1..=n).filter(|j| !subset.contains(j)) {
            let f = &tau[i - 1] * inv(&tau[i - 1] - &tau[j - 1])?;
            value *= if i > j { -f } else { f };
        }
    }
    Twisted::monomial(tau, &exponent, value)
}

/// `ch⁺_{μ,t}` of types C and D:
/// `∏_i τ_i^{μ_i(t + (r − i ± 1)δ⁻_{μ_i} + Σ_{k≤i} δ⁻_{μ_k})} / ∏ (1 − τ_i^{-1} τ_j^{−μ_iμ_j})`
/// with `+1` and `i ≤ j` for C, `−1` and `i < j` for D.
pub fn sign_vector_character(mu: &[i8], t: &Q, twist: &TwistSpec) -> Result<Twisted<Q>> {
    let tau = twist.tau();
    let r = tau.len();
    let (offset, diagonal) = match twist.alg() {
        AlgebraType::C(_) => (1i64, true),
        AlgebraType::D(_) => (-1i64, false),
        other => return Err(QbggError::InvalidParameter(format!("sign vectors need type C or D, not {other}"))),
    };
    if mu.len() != r {
        return Err(QbggError::DimensionMismatch { expected: r, found: mu.len() });
    }
    let minus = |i: usize| i64::from(mu[i] < 0);
    let mut exponent = Vec::with_capacity(r);
    let mut running = 0;
    for i in 0..r {
        running += minus(i);
        let inner = t + int((r as i64 - (i as i64 + 1) + offset) * minus(i) + running);
        exponent.push(int(mu[i] as i64) * inner);
    }
    let mut value = Q::one();
    for i in 0..r {
        for j in i..r {
            if i == j && !diagonal {
                continue;
            }
            let e = -(mu[i] as i64) * (mu[j] as i64);
            let d = Q::one() - tau[i].inv()? * crate::coeff::int_pow(&tau[j], e)?;
            value *= inv(d)?;
        }
    }
    Twisted::monomial(tau, &exponent, value)
}

/// `ch⁺_{k,t}` of the orthogonal vector family for a 1-based index `k ∈ {1..r} ∪ {r'..1'}`.
pub fn orthogonal_character(index: usize, t: &Q, twist: &TwistSpec) -> Result<Twisted<Q>> {
    let tau = twist.tau();
    let r = tau.len();
    let (kk, odd) = match twist.alg() {
        AlgebraType::B(_) => (2 * r + 1, true),
        AlgebraType::D(_) => (2 * r, false),
        other => return Err(QbggError::InvalidParameter(format!("vector family needs type B or D, not {other}"))),
    };
    let (k, primed) = if index <= r {
        (index, false)
    } else if index > kk - r && index <= kk {
        (kk + 1 - index, true)
    } else {
        return Err(QbggError::InvalidParameter(format!("index {index} outside 1..={r} ∪ {}..={kk}", kk + 1 - r)));
    };
    let kq = int(k as i64);
    let rq = int(r as i64);
    let top = match (primed, odd) {
        (false, _) => t + &kq - int(1),
        (true, false) => &kq + int(1) - int(2) * &rq - t,
        (true, true) => &kq - int(2) * &rq - t,
    };
    let mut exponent: Vec<Q> = (0..r).map(|l| if l + 1 < k { int(-1) } else { int(0) }).collect();
    exponent[k - 1] = top;
    let tk = &tau[k - 1];
    let mut den = Q::one();
    if odd {
        den *= Q::one() - tk.inv()?;
    }
    for (l, tl) in tau.iter().enumerate() {
        let l1 = l + 1;
        if l1 < k {
            den *= Q::one() - tk / tl;
        } else if l1 > k {
            den *= Q::one() - tl / tk;
        }
        if l1 != k {
            den *= Q::one() - (tk * tl).inv()?;
        }
    }
    Twisted::monomial(tau, &exponent, inv(den)?)
}

/// Closed form of `ch⁺` for a coset of a module family.
pub fn closed_form_character(case: &ModuleCase, coset: &CosetElement, t: &Q, twist: &TwistSpec) -> Result<Twisted<Q>> {
    match (&coset.tag, case) {
        (CosetTag::SubsetI(subset), ModuleCase::Rect { .. }) => rect_character(subset, t, twist),
        (CosetTag::SignVector { mu, .. }, ModuleCase::Symplectic | ModuleCase::Spinor { .. }) => sign_vector_character(mu, t, twist),
        (CosetTag::BDIndex(k), ModuleCase::Vector) => orthogonal_character(*k, t, twist),
        _ => Err(QbggError::InvalidParameter(format!("coset {} does not fit {case:?}", coset.tag))),
    }
}

/// Formal coset character `τ^{w·tω} / ∏_{β ∈ Δ(𝔲)} (1 − τ^{−|wβ|})`,
/// the τ-class-valued version of [`crate::weyl::coset_character`].
pub fn formal_coset_character(
    alg: &AlgebraType,
    case: &ModuleCase,
    coset: &CosetElement,
    t: &Q,
    twist: &TwistSpec,
) -> Result<Twisted<Q>> {
    let tau = twist.tau();
    let omega: Weight = case.omega(alg).into_iter().map(int).collect();
    let mut value = Q::one();
    for (beta, _) in alg.positive_roots() {
        let pairing: Q = beta.iter().zip(&omega).map(|(b, o)| b * o).sum();
        if pairing == int(0) {
            continue;
        }
        let mut g = coset.w.apply(&beta);
        if !is_positive(&g) {
            g = g.iter().map(|x| -x).collect();
        }
        let neg: Weight = g.iter().map(|x| -x).collect();
        value *= inv(Q::one() - tau_power(tau, &neg)?)?;
    }
    Twisted::monomial(tau, &coset.highest_weight(t), value)
}

/// `Σ_w (−1)^{l(w)} ch⁺_w(t)` from the formal coset characters.
pub fn formal_bgg_character(alg: &AlgebraType, case: &ModuleCase, t: &Q, twist: &TwistSpec) -> Result<Twisted<Q>> {
    let mut acc = Twisted::zero(twist.tau());
    for coset in enumerate_cosets(alg, case)? {
        acc = acc.add(&formal_coset_character(alg, case, &coset, t, twist)?.scale(&int(coset.sign)))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Sampler};
    use crate::weyl::{truncated_bgg_character, weyl_character};

    #[test]
    fn formal_sum_matches_scalar_version_at_integral_t() {
        let mut s = Sampler::new(3);
        for (alg, case) in [
            (AlgebraType::A(3), ModuleCase::Rect { a: 1 }),
            (AlgebraType::C(2), ModuleCase::Symplectic),
            (AlgebraType::B(2), ModuleCase::Vector),
        ] {
            let tw = TwistSpec::random(alg, &mut s);
            let t = int(2);
            let formal = formal_bgg_character(&alg, &case, &t, &tw).unwrap();
            let scalar = truncated_bgg_character(&alg, &case, &t, tw.tau()).unwrap();
            assert_eq!(formal.as_plain(), Some(&scalar));
            let hw = case.highest_weight(&alg, &t);
            assert_eq!(scalar, weyl_character(&alg, &hw, tw.tau()).unwrap());
        }
    }

    #[test]
    fn half_integral_spinor_character_is_formal() {
        let alg = AlgebraType::D(2);
        let tw = TwistSpec::new(alg, vec![int(2), int(3)]).unwrap();
        let c = formal_bgg_character(&alg, &ModuleCase::Spinor { odd: false }, &rat(1, 2), &tw).unwrap();
        // The even spinor of so_4 at t = 1/2 has weights ±(1/2, 1/2): one class.
        assert_eq!(c.terms().len(), 1);
        let (class, v) = c.terms().iter().next().unwrap();
        assert_eq!(class, &vec![rat(1, 2), rat(1, 2)]);
        // τ^{(1/2,1/2)} (1 + τ₁^{-1}τ₂^{-1}) = τ^{(1/2,1/2)} · 7/6.
        assert_eq!(v, &rat(7, 6));
    }

    #[test]
    fn closed_forms_match_length_zero_traces() {
        use crate::transfer::cases::coset_lax;
        use crate::transfer::trace::character_plus;
        let mut s = Sampler::new(5);
        let t = rat(2, 7);
        for (alg, case) in [
            (AlgebraType::A(3), ModuleCase::Rect { a: 1 }),
            (AlgebraType::C(2), ModuleCase::Symplectic),
            (AlgebraType::D(3), ModuleCase::Spinor { odd: true }),
            (AlgebraType::B(2), ModuleCase::Vector),
            (AlgebraType::D(3), ModuleCase::Vector),
        ] {
            let tw = TwistSpec::random(alg, &mut s);
            for coset in enumerate_cosets(&alg, &case).unwrap() {
                let trace = character_plus(&coset_lax(&alg, &case, &coset, &t).unwrap(), &tw).unwrap();
                let closed = closed_form_character(&case, &coset, &t, &tw).unwrap();
                let formal = formal_coset_character(&alg, &case, &coset, &t, &tw).unwrap();
                assert_eq!(trace, closed, "{alg} {}", coset.tag);
                assert_eq!(trace, formal, "{alg} {}", coset.tag);
            }
        }
    }

    #[test]
    fn closed_form_rejects_foreign_cosets() {
        let alg = AlgebraType::C(2);
        let tw = TwistSpec::new(alg, vec![int(2), int(3)]).unwrap();
        let cosets = enumerate_cosets(&alg, &ModuleCase::Symplectic).unwrap();
        assert!(closed_form_character(&ModuleCase::Vector, &cosets[0], &int(1), &tw).is_err());
        assert!(orthogonal_character(3, &int(1), &TwistSpec::new(AlgebraType::B(2), vec![int(2), int(3)]).unwrap()).is_err());
    }
}
