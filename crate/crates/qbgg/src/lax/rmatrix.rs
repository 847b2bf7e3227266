//! Rational R-matrices of the classical Lie algebras and their basic properties.

use std::collections::BTreeMap;

use num::{BigRational, Zero};

use crate::coeff::{int, Sampler};
use crate::error::Result;
use crate::lax::matrix::SignedPermMatrix;
use crate::report::CheckReport;
use crate::weyl::AlgebraType;

/// Sparse scalar matrix on `ℂ^K ⊗ ℂ^K`, keyed by `(row, col)` with `row = a·K + b`.
pub type SparseScalarMatrix = BTreeMap<(usize, usize), BigRational>;

/// `R(u) = Σ_j u^j R_j` with exact sparse coefficients.
///
/// Type A: `R(u) = u I + P`. Types B, C, D: `R(u) = u(u+κ) I + (u+κ) P − u Q`,
/// `Q = Σ ε_i ε_j e_ij ⊗ e_{i'j'}` with `i' = K+1−i`, `ε ≡ 1` for orthogonal and
/// `ε_i = ±1` (`i ≤ r` / `i > r`) for symplectic algebras.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    alg: AlgebraType,
    k: usize,
    coeffs: Vec<SparseScalarMatrix>,
}

/// The sign `ε_i` (0-based index) of the invariant form.
pub fn epsilon(alg: &AlgebraType, i: usize) -> i64 {
    match alg {
        AlgebraType::C(r) if i >= *r => -1,
        _ => 1,
    }
}

/// The primed index `i' = K + 1 − i`, 0-based.
pub fn prime(k: usize, i: usize) -> usize {
    k - 1 - i
}

fn add_entry(m: &mut SparseScalarMatrix, key: (usize, usize), v: BigRational) {
    let e = m.entry(key).or_insert_with(BigRational::zero);
    *e += v;
    if e.is_zero() {
        m.remove(&key);
    }
}

impl RMatrix {
    /// Builds the R-matrix of an algebra.
    pub fn new(alg: &AlgebraType) -> Result<Self> {
        alg.validate()?;
        let k = alg.dim_k();
        let idx = |a: usize, b: usize| a * k + b;
        let mut identity = SparseScalarMatrix::new();
        let mut perm = SparseScalarMatrix::new();
        let mut q = SparseScalarMatrix::new();
        for a in 0..k {
            for b in 0..k {
                identity.insert((idx(a, b), idx(a, b)), int(1));
                perm.insert((idx(a, b), idx(b, a)), int(1));
            }
        }
        for i in 0..k {
            for j in 0..k {
                let v = epsilon(alg, i) * epsilon(alg, j);
                q.insert((idx(i, prime(k, i)), idx(j, prime(k, j))), int(v));
            }
        }
        let coeffs = match alg {
            AlgebraType::A(_) => vec![perm, identity],
            _ => {
                let kappa = alg.kappa();
                // u^0: κ P;  u^1: κ I + P − Q;  u^2: I.
                let c0: SparseScalarMatrix = perm.iter().map(|(key, v)| (*key, v * &kappa)).collect();
                let mut c1 = SparseScalarMatrix::new();
                for (key, v) in &identity {
                    add_entry(&mut c1, *key, v * &kappa);
                }
                for (key, v) in &perm {
                    add_entry(&mut c1, *key, v.clone());
                }
                for (key, v) in &q {
                    add_entry(&mut c1, *key, -v);
                }
                vec![c0, c1, identity]
            }
        };
        Ok(RMatrix { alg: *alg, k, coeffs })
    }

    /// The algebra.
    pub fn alg(&self) -> &AlgebraType {
        &self.alg
    }

    /// Dimension `K` of one tensor factor.
    pub fn dim_k(&self) -> usize {
        self.k
    }

    /// Coefficients of `u^j`, lowest first.
    pub fn coeffs(&self) -> &[SparseScalarMatrix] {
        &self.coeffs
    }

    /// Degree in `u`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Polynomial in `(z, w)` with rational coefficients.
pub(crate) type Poly2 = BTreeMap<(u32, u32), BigRational>;

pub(crate) fn poly2_add(p: &mut Poly2, key: (u32, u32), v: &BigRational) {
    if v.is_zero() {
        return;
    }
    let e = p.entry(key).or_insert_with(BigRational::zero);
    *e += v;
    if e.is_zero() {
        p.remove(&key);
    }
}

/// `(αz + βw)^j` expanded.
pub(crate) fn linear_power(alpha: i64, beta: i64, j: u32) -> Poly2 {
    let mut p = Poly2::new();
    for i in 0..=j {
        let c = BigRational::from_integer(crate::oscillator::binomial(j, i)) * num::pow::pow(int(alpha), i as usize) * num::pow::pow(int(beta), (j - i) as usize);
        poly2_add(&mut p, (i, j - i), &c);
    }
    p
}

pub(crate) fn poly2_mul(a: &Poly2, b: &Poly2) -> Poly2 {
    let mut out = Poly2::new();
    for ((i1, j1), c1) in a {
        for ((i2, j2), c2) in b {
            poly2_add(&mut out, (i1 + i2, j1 + j2), &(c1 * c2));
        }
    }
    out
}

type PolyMatrix = BTreeMap<(usize, usize), Poly2>;

fn polymat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let mut by_row: BTreeMap<usize, Vec<(usize, &Poly2)>> = BTreeMap::new();
    for ((r, c), p) in b {
        by_row.entry(*r).or_default().push((*c, p));
    }
    let mut out = PolyMatrix::new();
    for ((r, k), p) in a {
        if let Some(row) = by_row.get(k) {
            for (c, q) in row {
                let prod = poly2_mul(p, q);
                let e = out.entry((*r, *c)).or_default();
                for (key, v) in prod {
                    poly2_add(e, key, &v);
                }
            }
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

/// `R` acting on the tensor factors `(s1, s2)` of `(ℂ^K)^{⊗3}` with argument `αz + βw`.
fn embed3(r: &RMatrix, s1: usize, s2: usize, alpha: i64, beta: i64) -> PolyMatrix {
    let k = r.k;
    let mut out = PolyMatrix::new();
    let powers: Vec<Poly2> = (0..=r.degree() as u32).map(|j| linear_power(alpha, beta, j)).collect();
    let third = 3 - s1 - s2;
    for (j, coeff) in r.coeffs.iter().enumerate() {
        for (&(row, col), v) in coeff {
            let (a, b) = (row / k, row % k);
            let (c, d) = (col / k, col % k);
            for e in 0..k {
                let mut ri = [0usize; 3];
                let mut ci = [0usize; 3];
                ri[s1] = a;
                ri[s2] = b;
                ri[third] = e;
                ci[s1] = c;
                ci[s2] = d;
                ci[third] = e;
                let key = (ri[0] * k * k + ri[1] * k + ri[2], ci[0] * k * k + ci[1] * k + ci[2]);
                let entry = out.entry(key).or_default();
                for (pk, pv) in &powers[j] {
                    poly2_add(entry, *pk, &(pv * v));
                }
            }
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

/// Signed permutation matrices under which the R-matrix is invariant: the
/// Weyl-symmetry matrices of the relevant family.
pub fn symmetry_generators(alg: &AlgebraType) -> Result<Vec<SignedPermMatrix>> {
    use crate::lax::families::{b_hat, b_mu, b_subset};
    let mut out = Vec::new();
    match *alg {
        AlgebraType::A(n) => {
            for bits in 0..(1usize << n) {
                let subset: Vec<usize> = (1..=n).filter(|i| bits >> (i - 1) & 1 == 1).collect();
                out.push(b_subset(n, &subset)?);
            }
        }
        AlgebraType::C(r) | AlgebraType::D(r) => {
            for bits in 0..(1usize << r) {
                let mu: Vec<i8> = (0..r).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
                out.push(b_mu(alg, &mu)?);
            }
        }
        AlgebraType::B(_) => {
            for k in 1..=alg.dim_k() {
                if 2 * k == alg.dim_k() + 1 {
                    continue;
                }
                out.push(b_hat(alg, k)?);
            }
        }
    }
    Ok(out)
}

/// Checks the Yang–Baxter equation, invariance under the Weyl-symmetry
/// matrices and a random diagonal twist, and (type A) unitarity.
pub fn r_matrix_properties(alg: &AlgebraType, seed: u64) -> Result<CheckReport> {
    let r = RMatrix::new(alg)?;
    let k = r.k;
    let mut report = CheckReport::new("r-matrix", alg.to_string()).param("K", k).with_seed(seed);

    // Yang–Baxter: R12(z−w) R13(z) R23(w) = R23(w) R13(z) R12(z−w).
    let r12 = embed3(&r, 0, 1, 1, -1);
    let r13 = embed3(&r, 0, 2, 1, 0);
    let r23 = embed3(&r, 1, 2, 0, 1);
    let lhs = polymat_mul(&polymat_mul(&r12, &r13), &r23);
    let rhs = polymat_mul(&polymat_mul(&r23, &r13), &r12);
    compare_polymats(&lhs, &rhs, "yang-baxter", &mut report);

    // Invariance [R(u), G ⊗ G] = 0.
    let mut gens: Vec<Vec<Vec<BigRational>>> = symmetry_generators(alg)?.iter().map(|b| b.to_dense()).collect();
    let mut sampler = Sampler::new(seed);
    let tau: Vec<BigRational> = (0..alg.rank()).map(|_| sampler.rational()).collect();
    gens.push(twist_matrix(alg, &tau));
    for (gi, g) in gens.iter().enumerate() {
        for (j, coeff) in r.coeffs.iter().enumerate() {
            let gg = |row: usize, col: usize| &g[row / k][col / k] * &g[row % k][col % k];
            for row in 0..k * k {
                for col in 0..k * k {
                    let mut lhs = BigRational::zero();
                    let mut rhs = BigRational::zero();
                    for m in 0..k * k {
                        if let Some(v) = coeff.get(&(row, m)) {
                            lhs += v * gg(m, col);
                        }
                        if let Some(v) = coeff.get(&(m, col)) {
                            rhs += gg(row, m) * v;
                        }
                    }
                    if lhs != rhs {
                        report.defect(|| format!("invariance: generator {gi}, u^{j}, entry ({row},{col})"));
                    }
                }
            }
        }
    }

    // Unitarity R(x) R(−x) = (1 − x²) I in type A.
    if let AlgebraType::A(_) = alg {
        let rz = embed2(&r, 1);
        let rmz = embed2(&r, -1);
        let prod = polymat_mul(&rz, &rmz);
        let mut expected = PolyMatrix::new();
        for i in 0..k * k {
            let mut p = Poly2::new();
            poly2_add(&mut p, (0, 0), &int(1));
            poly2_add(&mut p, (2, 0), &int(-1));
            expected.insert((i, i), p);
        }
        compare_polymats(&prod, &expected, "unitarity", &mut report);
    }
    Ok(report)
}

/// `R(±z)` on `ℂ^K ⊗ ℂ^K` as a polynomial matrix in `z`.
fn embed2(r: &RMatrix, sign: i64) -> PolyMatrix {
    let mut out = PolyMatrix::new();
    for (j, coeff) in r.coeffs.iter().enumerate() {
        let c = num::pow::pow(int(sign), j);
        for (key, v) in coeff {
            poly2_add(out.entry(*key).or_default(), (j as u32, 0), &(v * &c));
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

fn compare_polymats(a: &PolyMatrix, b: &PolyMatrix, what: &str, report: &mut CheckReport) {
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
    let empty = Poly2::new();
    for key in keys {
        let pa = a.get(key).unwrap_or(&empty);
        let pb = b.get(key).unwrap_or(&empty);
        if pa != pb {
            report.defect(|| format!("{what}: entry {key:?} differs"));
        }
    }
}

/// The diagonal twist matrix of the defining representation:
/// `diag(τ)` (A), `diag(τ_1..τ_r, τ_r^{-1}..τ_1^{-1})` (C, D),
/// `diag(τ_1..τ_r, 1, τ_r^{-1}..τ_1^{-1})` (B).
pub fn twist_matrix(alg: &AlgebraType, tau: &[BigRational]) -> Vec<Vec<BigRational>> {
    let d = twist_diagonal(alg, tau);
    let k = d.len();
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { d[i].clone() } else { int(0) }).collect())
        .collect()
}

/// Diagonal of [`twist_matrix`].
pub fn twist_diagonal(alg: &AlgebraType, tau: &[BigRational]) -> Vec<BigRational> {
    match alg {
        AlgebraType::A(_) => tau.to_vec(),
        _ => {
            let mut d: Vec<BigRational> = tau.to_vec();
            if let AlgebraType::B(_) = alg {
                d.push(int(1));
            }
            d.extend(tau.iter().rev().map(|t| t.recip()));
            d
        }
    }
}

/// Exponent vectors `e_i` with `twist_diagonal_i = τ^{e_i}`.
pub fn twist_exponents(alg: &AlgebraType) -> Vec<Vec<i64>> {
    let m = alg.rank();
    let unit = |i: usize, s: i64| -> Vec<i64> { (0..m).map(|j| if j == i { s } else { 0 }).collect() };
    match alg {
        AlgebraType::A(_) => (0..m).map(|i| unit(i, 1)).collect(),
        _ => {
            let mut out: Vec<Vec<i64>> = (0..m).map(|i| unit(i, 1)).collect();
            if let AlgebraType::B(_) = alg {
                out.push(vec![0; m]);
            }
            out.extend((0..m).rev().map(|i| unit(i, -1)));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_a_r_matrix_is_u_plus_p() {
        let r = RMatrix::new(&AlgebraType::A(2)).unwrap();
        assert_eq!(r.degree(), 1);
        assert_eq!(r.coeffs()[0].get(&(1, 2)), Some(&int(1)));
        assert_eq!(r.coeffs()[1].len(), 4);
    }

    #[test]
    fn symplectic_q_has_signs() {
        let alg = AlgebraType::C(1);
        let r = RMatrix::new(&alg).unwrap();
        // Row (1,2), column (2,1): P contributes 1 and −Q contributes −ε_1ε_2 = 1.
        assert_eq!(r.coeffs()[1].get(&(1, 2)), Some(&int(2)));
    }

    #[test]
    fn properties_hold_small() {
        for alg in [AlgebraType::A(2), AlgebraType::C(1), AlgebraType::C(2), AlgebraType::D(2), AlgebraType::B(2)] {
            let rep = r_matrix_properties(&alg, 1).unwrap();
            assert!(rep.passed(), "{alg}: {:?}", rep.defect_sample);
        }
    }
}
