//! Independent oracles for the oscillator layer: the normal-ordered product
//! against products of truncated Fock-space matrices, and the closed-form
//! twisted trace against floating-point partial sums.

use std::sync::Arc;

use num::{BigRational, Signed, Zero};

use super::fock::occupations;
use super::{fock_trace, fock_trace_partial, normal_mul, truncated_matrix, NormalMonomial, NormalPoly, OscSpace, TwistWeights};
use crate::coeff::{format_rational, rat, rational_to_f64, Sampler};
use crate::error::Result;
use crate::report::CheckReport;

type Q = BigRational;

/// Random normal-ordered polynomial with `terms` monomials whose creation and
/// annihilation powers are at most `max_power` per pair, and signed random
/// rational coefficients.
pub fn random_normal_poly(space: &Arc<OscSpace>, sampler: &mut Sampler, terms: usize, max_power: u32) -> NormalPoly<Q> {
    let n = space.len();
    let mut out = NormalPoly::zero(space);
    for _ in 0..terms {
        let mut m = NormalMonomial::one(n);
        for p in 0..n {
            m.creation[p] = sampler.int_in(0, max_power as i64) as u32;
            m.annihilation[p] = sampler.int_in(0, max_power as i64) as u32;
        }
        out.add_term(m, sampler.signed_rational());
    }
    out
}

/// Largest creation power of each pair in a polynomial.
fn max_creation(x: &NormalPoly<Q>) -> Vec<u32> {
    let mut out = vec![0; x.space().len()];
    for m in x.terms().keys() {
        for (o, &c) in out.iter_mut().zip(&m.creation) {
            *o = (*o).max(c);
        }
    }
    out
}

/// `normal_mul(x, y)` against `X · Y` for the truncated Fock matrices, on
/// every column whose image under `y` stays inside the truncation.
pub fn normal_mul_oracle_check(sampler: &mut Sampler, cases: usize) -> Result<CheckReport> {
    let cutoff = 5;
    let mut report = CheckReport::new("oracle-mul", "normal-product-vs-truncated-matrices")
        .param("cases", cases)
        .param("cutoff", cutoff)
        .with_seed(sampler.seed());
    for case in 0..cases {
        let pairs = sampler.int_in(1, 2) as usize;
        let space = OscSpace::new((1..=pairs).map(|p| format!("{p},{}", p + 1)))?;
        let x = random_normal_poly(&space, sampler, 3, 2);
        let y = random_normal_poly(&space, sampler, 3, 2);
        let xy = truncated_matrix(&normal_mul(&x, &y)?, cutoff)?;
        let mx = truncated_matrix(&x, cutoff)?;
        let my = truncated_matrix(&y, cutoff)?;
        let raise = max_creation(&y);
        let basis = occupations(pairs, cutoff);
        for (col, occ) in basis.iter().enumerate() {
            if occ.iter().zip(&raise).any(|(&o, &r)| o + r > cutoff) {
                continue;
            }
            for row in 0..basis.len() {
                let product: Q = (0..basis.len()).map(|m| &mx[row][m] * &my[m][col]).sum();
                if product != xy[row][col] {
                    report.defect(|| format!("case {case}: entry ({row},{col})"));
                }
            }
        }
    }
    Ok(report)
}

/// The closed-form twisted trace against `f64` partial sums over occupations
/// `≤ cutoff`, with weights `|q| < 1/2`; the tolerance is relative to the
/// trace of the polynomial with absolute-valued coefficients.
pub fn fock_trace_oracle_check(sampler: &mut Sampler, cases: usize, rel_tol: f64) -> Result<CheckReport> {
    let cutoff = 120;
    let mut report = CheckReport::new("oracle-trace", "fock-trace-vs-float-partial-sums")
        .param("cases", cases)
        .param("cutoff", cutoff)
        .param("rel_tol", rel_tol)
        .with_seed(sampler.seed());
    let mut worst = 0f64;
    for case in 0..cases {
        let pairs = sampler.int_in(1, 3) as usize;
        let space = OscSpace::new((1..=pairs).map(|p| format!("{p},{}", p + 1)))?;
        let x = random_normal_poly(&space, sampler, 4, 3);
        // Balanced terms are the only ones that contribute; make sure there are some.
        let x = x.try_add(&random_normal_poly(&space, sampler, 2, 3).try_mul(&NormalPoly::number(&space, 0))?)?;
        let weights: Vec<Q> = (0..pairs)
            .map(|_| {
                let q = rat(sampler.int_in(1, 5), sampler.int_in(11, 20));
                if sampler.int_in(0, 1) == 0 {
                    q
                } else {
                    -q
                }
            })
            .collect();
        let mut twist = TwistWeights::new(weights.clone());
        twist.prefactor = sampler.rational();
        let exact = fock_trace(&x, &twist)?;
        let mut ftwist = TwistWeights::new(weights.iter().map(rational_to_f64).collect());
        ftwist.prefactor = rational_to_f64(&twist.prefactor);
        let float = fock_trace_partial(&x.map_coeffs(rational_to_f64), &ftwist, cutoff)?;
        let mut abs_twist = ftwist.clone();
        abs_twist.weights = abs_twist.weights.iter().map(|w| w.abs()).collect();
        let scale = fock_trace_partial(&x.map_coeffs(|c| rational_to_f64(&c.abs())), &abs_twist, cutoff)?.abs();
        let err = (float - rational_to_f64(&exact)).abs() / scale.max(f64::MIN_POSITIVE);
        worst = worst.max(err);
        if !(err <= rel_tol) || (scale.is_zero() && !exact.is_zero()) {
            report.defect(|| format!("case {case}: exact {} vs float {float:e} (rel {err:e})", format_rational(&exact)));
        }
    }
    report.note(format!("largest relative deviation {worst:e}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles_agree_on_a_few_cases() {
        let mut s = Sampler::new(21);
        assert!(normal_mul_oracle_check(&mut s, 5).unwrap().passed());
        assert!(fock_trace_oracle_check(&mut s, 5, 1e-9).unwrap().passed());
    }

    #[test]
    fn random_polynomials_respect_the_power_bound() {
        let space = OscSpace::new(["1,2"]).unwrap();
        let x = random_normal_poly(&space, &mut Sampler::new(1), 6, 2);
        assert!(x.terms().keys().all(|m| m.creation[0] <= 2 && m.annihilation[0] <= 2));
        assert_eq!(max_creation(&NormalPoly::<Q>::creation(&space, 0)), vec![1]);
    }
}
