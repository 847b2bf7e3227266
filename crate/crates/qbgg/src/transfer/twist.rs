//! Diagonal twists: the twist parameters `τ`, the Fock-space twists of the
//! oscillator Lax matrices and the conjugation condition that fixes them.
//!
//! A Fock-space twist `∏_p q_p^{N_p}` is recorded through integer exponent
//! vectors `v_p` with `q_p = ∏_i τ_i^{(v_p)_i}`. For nondegenerate Lax matrices
//! the twist `∏ τ_i^{E_ii}` is read off the Cartan generators; for degenerate
//! ones it is the unique solution (up to a scalar) of
//! `D L(x) D^{-1} = D_Q^{-1} L(x) D_Q` with `D` the defining-representation twist.

use num::{BigRational, One, Zero};

use crate::coeff::{int, int_pow, rat, FieldScalar, Sampler};
use crate::error::{QbggError, Result};
use crate::lax::rmatrix::{twist_diagonal, twist_exponents};
use crate::lax::LaxMatrix;
use crate::oscillator::TwistWeights;
use crate::report::CheckReport;
use crate::transfer::twisted::Twisted;
use crate::weyl::{check_twist, AlgebraType};

type Q = BigRational;

/// Twist parameters `τ_1..τ_rank` for an algebra, validated for genericity.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistSpec {
    alg: AlgebraType,
    tau: Vec<Q>,
}

impl TwistSpec {
    /// Validates `τ`: non-zero entries and `τ^α ≠ 1` for all positive roots
    /// (distinct `τ_i` in type A; additionally `τ_iτ_j ≠ 1`, and `τ_i² ≠ 1` in type C
    /// or `τ_i ≠ 1` in type B).
    pub fn new(alg: AlgebraType, tau: Vec<Q>) -> Result<Self> {
        check_twist(&alg, &tau)?;
        Ok(TwistSpec { alg, tau })
    }

    /// Random generic twist with small numerators and denominators.
    pub fn random(alg: AlgebraType, sampler: &mut Sampler) -> Self {
        loop {
            let tau: Vec<Q> = (0..alg.rank())
                .map(|_| {
                    let p = sampler.int_in(1, 29);
                    let q = sampler.int_in(1, 7);
                    rat(p, q)
                })
                .collect();
            if let Ok(twist) = Self::new(alg, tau) {
                return twist;
            }
        }
    }

    /// Random generic twist whose entries are perfect squares, so that
    /// half-integral powers of `τ` stay rational.
    pub fn random_squares(alg: AlgebraType, sampler: &mut Sampler) -> Self {
        loop {
            let tau: Vec<Q> = (0..alg.rank())
                .map(|_| {
                    let p = sampler.int_in(1, 9);
                    let q = sampler.int_in(1, 5);
                    rat(p * p, q * q)
                })
                .collect();
            if let Ok(twist) = Self::new(alg, tau) {
                return twist;
            }
        }
    }

    /// The algebra.
    pub fn alg(&self) -> &AlgebraType {
        &self.alg
    }

    /// `τ_1..τ_rank`.
    pub fn tau(&self) -> &[Q] {
        &self.tau
    }

    /// Same algebra, other parameters (validated).
    pub fn with_tau(&self, tau: Vec<Q>) -> Result<Self> {
        Self::new(self.alg, tau)
    }

    /// Diagonal of the defining-representation twist `D`.
    pub fn diagonal(&self) -> Vec<Q> {
        twist_diagonal(&self.alg, &self.tau)
    }

    /// `τ^v` for an integer exponent vector.
    pub fn power(&self, v: &[i64]) -> Result<Q> {
        let mut acc = Q::one();
        for (t, &e) in self.tau.iter().zip(v) {
            if e != 0 {
                acc *= int_pow(t, e)?;
            }
        }
        Ok(acc)
    }

    /// Fock twist weights `q_p = τ^{v_p}` with unit prefactor.
    pub fn weights(&self, exponents: &[Vec<i64>]) -> Result<TwistWeights<Q>> {
        Ok(TwistWeights::new(
            exponents.iter().map(|v| self.power(v)).collect::<Result<Vec<_>>>()?,
        ))
    }
}

/// The twist `∏_i τ_i^{E_ii} = τ^c ∏_p q_p^{N_p}` of a nondegenerate Lax matrix,
/// with `E_ii = c_i + Σ_p (v_p)_i N_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanTwist {
    /// Vacuum eigenvalues `c_i` of the Cartan generators.
    pub constant: Vec<Q>,
    /// Per oscillator pair, the exponent vector `v_p`.
    pub exponents: Vec<Vec<i64>>,
}

impl CartanTwist {
    /// The scalar prefactor `τ^c` as a formal power.
    pub fn prefactor(&self, twist: &TwistSpec) -> Result<Twisted<Q>> {
        Twisted::monomial(twist.tau(), &self.constant, Q::one())
    }
}

/// Reads `E_ii = c_i + Σ_p s_ip ā_p a_p` off the Cartan generators `i = 1..rank`.
///
/// Fails unless every Cartan generator is a constant plus an integer
/// combination of number operators.
pub fn cartan_twist(lax: &LaxMatrix<Q>) -> Result<CartanTwist> {
    let rank = lax.alg().rank();
    let pairs = lax.space().len();
    let mut constant = Vec::with_capacity(rank);
    let mut exponents = vec![vec![0i64; rank]; pairs];
    for i in 0..rank {
        let e = lax.generator(i, i);
        let mut c = Q::zero();
        for (m, v) in e.terms() {
            if m.is_one() {
                c = v.clone();
                continue;
            }
            let single = m.is_balanced() && m.degree() == 2;
            let p = m.creation.iter().position(|&k| k == 1);
            match (single, p, v.is_integer()) {
                (true, Some(p), true) => {
                    exponents[p][i] = i64::try_from(v.to_integer()).map_err(|_| {
                        QbggError::InvalidParameter("Cartan coefficient too large".into())
                    })?;
                }
                _ => {
                    return Err(QbggError::InvalidParameter(format!(
                        "E_{{{0},{0}}} = {e} is not a constant plus integer number operators",
                        i + 1
                    )))
                }
            }
        }
        constant.push(c);
    }
    Ok(CartanTwist { constant, exponents })
}

/// One equation `Σ_p (a_p − c_p) v_p = e_i − e_j` per monomial of `L_ij`.
fn conjugation_equations(lax: &LaxMatrix<Q>) -> Vec<(Vec<i64>, Vec<i64>)> {
    let k = lax.matrix().rows();
    let e = twist_exponents(lax.alg());
    let mut rows: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let rhs: Vec<i64> = e[i].iter().zip(&e[j]).map(|(a, b)| a - b).collect();
            for coeff in lax.matrix().get(i, j).coeffs() {
                for m in coeff.terms().keys() {
                    let lhs: Vec<i64> = m
                        .annihilation
                        .iter()
                        .zip(&m.creation)
                        .map(|(&a, &c)| a as i64 - c as i64)
                        .collect();
                    rows.push((lhs, rhs.clone()));
                }
            }
        }
    }
    rows.sort();
    rows.dedup();
    rows
}

/// Verifies `D L(x) D^{-1} = D_Q^{-1} L(x) D_Q` for `D_Q = ∏ q_p^{N_p}`,
/// `q_p = τ^{v_p}`: conjugation by `D_Q` scales a monomial
/// `∏ ā_p^{c_p} a_p^{a_p}` by `∏ q_p^{a_p − c_p}`, so the identity holds
/// entrywise iff every monomial of `L_ij` satisfies `Σ_p (a_p − c_p) v_p = e_i − e_j`.
pub fn twist_conjugation_check(lax: &LaxMatrix<Q>, exponents: &[Vec<i64>]) -> CheckReport {
    let mut report = CheckReport::new("twistconj", lax.family());
    for (key, value) in lax.params() {
        report = report.param(key, value);
    }
    if exponents.len() != lax.space().len() {
        report.defect(|| format!("{} exponent vectors for {} pairs", exponents.len(), lax.space().len()));
        return report;
    }
    let rank = lax.alg().rank();
    for (lhs, rhs) in conjugation_equations(lax) {
        for (i, target) in rhs.iter().enumerate().take(rank) {
            let got: i64 = lhs.iter().zip(exponents).map(|(d, v)| d * v[i]).sum();
            if got != *target {
                report.defect(|| format!("monomial shift {lhs:?}: τ_{} exponent {got} ≠ {target}", i + 1));
            }
        }
    }
    report
}

/// Solves the conjugation condition for the Fock twist of `lax`: the unique
/// exponent vectors `v_p` with `D L D^{-1} = D_Q^{-1} L D_Q`.
///
/// Errors when the solution is not unique, inconsistent or non-integral.
pub fn conjugation_twist(lax: &LaxMatrix<Q>) -> Result<Vec<Vec<i64>>> {
    let pairs = lax.space().len();
    let rank = lax.alg().rank();
    let eqs = conjugation_equations(lax);
    // Augmented rows [lhs | rhs] over Q, reduced to row echelon form.
    let mut rows: Vec<Vec<Q>> = eqs
        .iter()
        .map(|(l, r)| l.iter().chain(r.iter().take(rank)).map(|&v| int(v)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..pairs {
        let Some(p) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].inv()?;
        for v in rows[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[row].clone();
                for (v, pv) in rows[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &(&f * pv);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() != pairs {
        return Err(QbggError::InvalidParameter(format!(
            "twist conjugation condition for {} leaves {} pair weights undetermined",
            lax.family(),
            pairs - pivots.len()
        )));
    }
    if rows[row..].iter().any(|r| r[pairs..].iter().any(|v| !v.is_zero())) {
        return Err(QbggError::InvalidParameter(format!(
            "twist conjugation condition for {} is inconsistent",
            lax.family()
        )));
    }
    let mut out = vec![vec![0i64; rank]; pairs];
    for (r, &p) in pivots.iter().enumerate() {
        for i in 0..rank {
            let v = &rows[r][pairs + i];
            if !v.is_integer() {
                return Err(QbggError::InvalidParameter(format!(
                    "twist exponent of pair {} is not integral",
                    lax.space().labels()[p]
                )));
            }
            out[p][i] = i64::try_from(v.to_integer())
                .map_err(|_| QbggError::InvalidParameter("twist exponent too large".into()))?;
        }
    }
    Ok(out)
}

/// `τ^v` exponent vectors compared up to sign, for diagnostics.
pub fn describe_exponent(v: &[i64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, e)| if *e == 1 { format!("τ{}", i + 1) } else { format!("τ{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::families;

    #[test]
    fn genericity_guard() {
        assert!(TwistSpec::new(AlgebraType::A(2), vec![int(2), int(2)]).is_err());
        assert!(TwistSpec::new(AlgebraType::C(2), vec![int(2), rat(1, 2)]).is_err());
        assert!(TwistSpec::new(AlgebraType::B(2), vec![int(1), int(3)]).is_err());
        assert!(TwistSpec::new(AlgebraType::D(2), vec![int(2), int(3)]).is_ok());
    }

    #[test]
    fn partonic_twist_matches_expected_weights() {
        // Pair "i,j" of L_i carries q = τ_j/τ_i for j > i and τ_i/τ_j for j < i.
        for n in 2..=4 {
            for i in 1..=n {
                let l = families::a_partonic::<Q>(n, i).unwrap();
                let v = conjugation_twist(&l).unwrap();
                for (p, label) in l.space().labels().iter().enumerate() {
                    let j: usize = label.split(',').nth(1).unwrap().parse().unwrap();
                    let mut expected = vec![0i64; n];
                    if j > i {
                        expected[j - 1] = 1;
                        expected[i - 1] = -1;
                    } else {
                        expected[i - 1] = 1;
                        expected[j - 1] = -1;
                    }
                    assert_eq!(v[p], expected, "n={n} i={i} pair {label}");
                }
            }
        }
    }

    #[test]
    fn symplectic_plus_twist_matches_expected_weights() {
        // D_+ = ∏_{i≤j} (τ_iτ_j)^{−ā_{i,j'} a_{j',i}}.
        let alg = AlgebraType::C(2);
        let l = families::cd_degenerate::<Q>(&alg, true).unwrap();
        let v = conjugation_twist(&l).unwrap();
        for (p, label) in l.space().labels().iter().enumerate() {
            let mut parts = label.split(',').map(|s| s.parse::<usize>().unwrap());
            let (i, jp) = (parts.next().unwrap(), parts.next().unwrap());
            let j = 5 - jp;
            let mut expected = vec![0i64; 2];
            expected[i - 1] -= 1;
            expected[j - 1] -= 1;
            assert_eq!(v[p], expected, "pair {label}");
        }
    }

    #[test]
    fn cartan_twist_satisfies_conjugation_condition() {
        let t = rat(3, 7);
        let laxes = vec![
            families::a_verma::<Q>(3, &[rat(1, 3), int(2), rat(-5, 2)]).unwrap(),
            families::a_rect::<Q>(4, 2, &t).unwrap(),
            families::cd_nondegenerate::<Q>(&AlgebraType::C(2), &t).unwrap(),
            families::cd_mu::<Q>(&AlgebraType::D(3), &t, &[1, -1, -1]).unwrap(),
            families::bd_k::<Q>(5, &t, 4).unwrap(),
        ];
        for l in laxes {
            let c = cartan_twist(&l).unwrap();
            let rep = twist_conjugation_check(&l, &c.exponents);
            assert!(rep.passed(), "{}: {:?}", l.family(), rep.defect_sample);
            assert_eq!(conjugation_twist(&l).unwrap(), c.exponents, "{}", l.family());
        }
    }

    #[test]
    fn corrupted_twist_fails_condition() {
        let l = families::a_partonic::<Q>(3, 2).unwrap();
        let mut v = conjugation_twist(&l).unwrap();
        v[0][0] += 1;
        assert!(!twist_conjugation_check(&l, &v).passed());
    }
}
