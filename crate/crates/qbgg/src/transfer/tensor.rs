//! Operators on the quantum space `(C^K)^{⊗N}`, polynomial in the spectral parameter.

use std::collections::BTreeMap;

use num::{BigRational, Zero};
use serde_json::{json, Map, Value};

use crate::coeff::{format_rational, parse_rational};
use crate::error::{QbggError, Result};
use crate::lax::SignedPermMatrix;
use crate::oscillator::binomial;

type Q = BigRational;

/// Sparse scalar matrix keyed by flat `(row, column)` indices; zeros are never stored.
pub type SparseMatrix = BTreeMap<(usize, usize), Q>;

fn sparse_add(acc: &mut SparseMatrix, key: (usize, usize), v: Q) {
    if v.is_zero() {
        return;
    }
    match acc.get_mut(&key) {
        Some(e) => {
            *e += v;
            if e.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            acc.insert(key, v);
        }
    }
}

/// An operator on `(C^K)^{⊗N}` whose entries are polynomials in `x` with exact
/// rational coefficients. Multi-indices are flattened row-major: site 1 is the
/// most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorOperator {
    sites: usize,
    local_dim: usize,
    /// `coeffs[j]` is the coefficient of `x^j`; trailing zero coefficients are trimmed.
    coeffs: Vec<SparseMatrix>,
}

impl TensorOperator {
    /// The zero operator.
    pub fn zero(sites: usize, local_dim: usize) -> Self {
        TensorOperator {
            sites,
            local_dim,
            coeffs: Vec::new(),
        }
    }

    /// `c · 1`.
    pub fn scalar(sites: usize, local_dim: usize, c: &Q) -> Self {
        let dim = local_dim.pow(sites as u32);
        let m: SparseMatrix = if c.is_zero() {
            SparseMatrix::new()
        } else {
            (0..dim).map(|i| ((i, i), c.clone())).collect()
        };
        Self::from_coeffs(sites, local_dim, vec![m])
    }

    /// The identity.
    pub fn identity(sites: usize, local_dim: usize) -> Self {
        Self::scalar(sites, local_dim, &Q::from_integer(1.into()))
    }

    /// Builds an operator from coefficient matrices, dropping zeros.
    pub fn from_coeffs(sites: usize, local_dim: usize, coeffs: Vec<SparseMatrix>) -> Self {
        let mut out = TensorOperator {
            sites,
            local_dim,
            coeffs: coeffs
                .into_iter()
                .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|m| m.is_empty()) {
            self.coeffs.pop();
        }
    }

    /// Chain length `N`.
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Local dimension `K`.
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// Total dimension `K^N`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.sites as u32)
    }

    /// Coefficient matrices, lowest power first.
    pub fn coeffs(&self) -> &[SparseMatrix] {
        &self.coeffs
    }

    /// Coefficient of `x^j`.
    pub fn coeff(&self, j: usize) -> SparseMatrix {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// Entry `(row, col)` of the coefficient of `x^j`.
    pub fn entry(&self, j: usize, row: usize, col: usize) -> Q {
        self.coeffs
            .get(j)
            .and_then(|m| m.get(&(row, col)))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Degree in `x`; `None` for the zero operator.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the zero operator.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored non-zero scalar coefficients.
    pub fn nnz(&self) -> usize {
        self.coeffs.iter().map(|m| m.len()).sum()
    }

    /// Flat index of a multi-index.
    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().fold(0, |acc, &i| acc * self.local_dim + i)
    }

    /// Multi-index of a flat index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.sites];
        for s in (0..self.sites).rev() {
            out[s] = flat % self.local_dim;
            flat /= self.local_dim;
        }
        out
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.sites != other.sites || self.local_dim != other.local_dim {
            return Err(QbggError::InvalidParameter(format!(
                "operators on (C^{})^⊗{} and (C^{})^⊗{} cannot be combined",
                self.local_dim, self.sites, other.local_dim, other.sites
            )));
        }
        Ok(())
    }

    /// `self + other`.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![SparseMatrix::new(); n];
        for (j, m) in self.coeffs.iter().enumerate() {
            coeffs[j] = m.clone();
        }
        for (j, m) in other.coeffs.iter().enumerate() {
            for (k, v) in m {
                sparse_add(&mut coeffs[j], *k, v.clone());
            }
        }
        Ok(Self::from_coeffs(self.sites, self.local_dim, coeffs))
    }

    /// `self − other`.
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// `−self`.
    pub fn neg(&self) -> Self {
        self.scale(&-Q::from_integer(1.into()))
    }

    /// `c · self`.
    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.sites, self.local_dim);
        }
        TensorOperator {
            sites: self.sites,
            local_dim: self.local_dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|m| m.iter().map(|(k, v)| (*k, v * c)).collect())
                .collect(),
        }
    }

    /// Operator product `self · other` (polynomial product in `x`).
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.sites, self.local_dim));
        }
        // Row-indexed view of the right factor.
        let by_row: Vec<BTreeMap<usize, Vec<(usize, &Q)>>> = other
            .coeffs
            .iter()
            .map(|m| {
                let mut rows: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
                for ((r, c), v) in m {
                    rows.entry(*r).or_default().push((*c, v));
                }
                rows
            })
            .collect();
        let mut coeffs = vec![SparseMatrix::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in by_row.iter().enumerate() {
                for ((r, k), va) in a {
                    if let Some(row) = b.get(k) {
                        for (c, vb) in row {
                            sparse_add(&mut coeffs[i + j], (*r, *c), va * *vb);
                        }
                    }
                }
            }
        }
        Ok(Self::from_coeffs(self.sites, self.local_dim, coeffs))
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// True when every `x`-coefficient of `self` commutes with every
    /// `x`-coefficient of `other`, i.e. `[A(x), B(y)] = 0` identically.
    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        self.check_shape(other)?;
        for a in &self.coeffs {
            let a = Self::from_coeffs(self.sites, self.local_dim, vec![a.clone()]);
            for b in &other.coeffs {
                let b = Self::from_coeffs(self.sites, self.local_dim, vec![b.clone()]);
                if !a.commutator(&b)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `X(x + c)`.
    pub fn shift(&self, c: &Q) -> Self {
        if c.is_zero() || self.coeffs.len() < 2 {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut powers = vec![Q::from_integer(1.into())];
        for k in 1..n {
            powers.push(&powers[k - 1] * c);
        }
        let mut coeffs = vec![SparseMatrix::new(); n];
        for (j, m) in self.coeffs.iter().enumerate() {
            // x^j ↦ Σ_k C(j,k) c^{j−k} x^k
            for k in 0..=j {
                let f = Q::from_integer(binomial(j as u32, k as u32)) * &powers[j - k];
                for (key, v) in m {
                    sparse_add(&mut coeffs[k], *key, v * &f);
                }
            }
        }
        Self::from_coeffs(self.sites, self.local_dim, coeffs)
    }

    /// Value at a rational point `x`.
    pub fn evaluate(&self, x: &Q) -> SparseMatrix {
        let mut out = SparseMatrix::new();
        let mut power = Q::from_integer(1.into());
        for m in &self.coeffs {
            for (k, v) in m {
                sparse_add(&mut out, *k, v * &power);
            }
            power *= x;
        }
        out
    }

    /// Conjugation `B^{⊗N} X (B^{⊗N})^{-1}` by a signed permutation matrix.
    pub fn conjugate(&self, b: &SignedPermMatrix) -> Result<Self> {
        if b.dim() != self.local_dim {
            return Err(QbggError::DimensionMismatch {
                expected: self.local_dim,
                found: b.dim(),
            });
        }
        let map = |flat: usize| -> (usize, i8) {
            let multi = self.multi_index(flat);
            let mut sign = 1i8;
            let image: Vec<usize> = multi
                .iter()
                .map(|&i| {
                    sign *= b.signs()[i];
                    b.image()[i]
                })
                .collect();
            (self.flat_index(&image), sign)
        };
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| {
                m.iter()
                    .map(|((r, c), v)| {
                        let (r2, s1) = map(*r);
                        let (c2, s2) = map(*c);
                        ((r2, c2), if s1 * s2 < 0 { -v } else { v.clone() })
                    })
                    .collect()
            })
            .collect();
        Ok(Self::from_coeffs(self.sites, self.local_dim, coeffs))
    }

    /// Short descriptions of the entries in which `self` and `other` differ.
    pub fn differences(&self, other: &Self, limit: usize) -> (usize, Vec<String>) {
        let mut count = 0;
        let mut sample = Vec::new();
        let n = self.coeffs.len().max(other.coeffs.len());
        for j in 0..n {
            let a = self.coeff(j);
            let b = other.coeff(j);
            let keys: std::collections::BTreeSet<&(usize, usize)> = a.keys().chain(b.keys()).collect();
            for key in keys {
                let va = a.get(key).cloned().unwrap_or_else(Q::zero);
                let vb = b.get(key).cloned().unwrap_or_else(Q::zero);
                if va != vb {
                    count += 1;
                    if sample.len() < limit {
                        sample.push(format!(
                            "x^{j} {:?},{:?}: {} vs {}",
                            self.multi_index(key.0),
                            self.multi_index(key.1),
                            format_rational(&va),
                            format_rational(&vb)
                        ));
                    }
                }
            }
        }
        (count, sample)
    }

    /// `{"N": n, "K": k, "coeffs": {"x^j": [{"row": [..], "col": [..], "val": "p/q"}]}}`,
    /// entries listed in row-major order of the flattened multi-indices.
    pub fn to_json(&self) -> Value {
        let mut coeffs = Map::new();
        for (j, m) in self.coeffs.iter().enumerate() {
            if m.is_empty() {
                continue;
            }
            let entries: Vec<Value> = m
                .iter()
                .map(|((r, c), v)| {
                    json!({
                        "row": self.multi_index(*r),
                        "col": self.multi_index(*c),
                        "val": format_rational(v),
                    })
                })
                .collect();
            coeffs.insert(format!("x^{j}"), Value::Array(entries));
        }
        json!({"N": self.sites, "K": self.local_dim, "coeffs": Value::Object(coeffs)})
    }

    /// Inverse of [`TensorOperator::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| QbggError::Parse(format!("tensor operator: {what}"));
        let sites = v["N"].as_u64().ok_or_else(|| bad("missing N"))? as usize;
        let local_dim = v["K"].as_u64().ok_or_else(|| bad("missing K"))? as usize;
        let shell = Self::zero(sites, local_dim);
        let obj = v["coeffs"].as_object().ok_or_else(|| bad("missing coeffs"))?;
        let mut coeffs: Vec<SparseMatrix> = Vec::new();
        for (key, entries) in obj {
            let j: usize = key
                .strip_prefix("x^")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("coefficient keys must read x^j"))?;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, SparseMatrix::new());
            }
            for e in entries.as_array().ok_or_else(|| bad("entries must be a list"))? {
                let idx = |name: &str| -> Result<usize> {
                    let multi: Vec<usize> = e[name]
                        .as_array()
                        .ok_or_else(|| bad("multi-index must be a list"))?
                        .iter()
                        .map(|i| i.as_u64().map(|i| i as usize).filter(|&i| i < local_dim))
                        .collect::<Option<_>>()
                        .ok_or_else(|| bad("multi-index out of range"))?;
                    if multi.len() != sites {
                        return Err(bad("multi-index has the wrong length"));
                    }
                    Ok(shell.flat_index(&multi))
                };
                let val = parse_rational(e["val"].as_str().ok_or_else(|| bad("val must be a string"))?)?;
                sparse_add(&mut coeffs[j], (idx("row")?, idx("col")?), val);
            }
        }
        Ok(Self::from_coeffs(sites, local_dim, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    fn permutation_n1(k: usize) -> TensorOperator {
        // P on C^k ⊗ C^k.
        let mut m = SparseMatrix::new();
        for i in 0..k {
            for j in 0..k {
                m.insert((i * k + j, j * k + i), int(1));
            }
        }
        TensorOperator::from_coeffs(2, k, vec![m])
    }

    #[test]
    fn indices_are_row_major() {
        let t = TensorOperator::zero(3, 4);
        assert_eq!(t.flat_index(&[1, 2, 3]), 16 + 8 + 3);
        assert_eq!(t.multi_index(27), vec![1, 2, 3]);
    }

    #[test]
    fn permutation_squares_to_identity() {
        let p = permutation_n1(3);
        assert_eq!(p.try_mul(&p).unwrap(), TensorOperator::identity(2, 3));
    }

    #[test]
    fn shift_and_evaluate_agree() {
        let mut lin = TensorOperator::identity(1, 2);
        lin.coeffs.insert(0, {
            let mut m = SparseMatrix::new();
            m.insert((0, 1), int(3));
            m
        });
        // lin = 3 e_12 + x·1
        let shifted = lin.shift(&rat(1, 2));
        assert_eq!(shifted.evaluate(&int(2)), lin.evaluate(&rat(5, 2)));
    }

    #[test]
    fn json_round_trip() {
        let p = permutation_n1(2).scale(&rat(-3, 5)).try_add(&TensorOperator::identity(2, 2)).unwrap();
        let back = TensorOperator::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        let first = &p.to_json()["coeffs"]["x^0"][0];
        assert_eq!(first["row"], json!([0, 0]));
    }

    #[test]
    fn conjugation_by_swap_fixes_permutation() {
        let b = SignedPermMatrix::new(vec![1, 0], vec![-1, 1]).unwrap();
        let p = permutation_n1(2);
        assert_eq!(p.conjugate(&b).unwrap(), p);
        let id = TensorOperator::identity(2, 2);
        assert!(p.commutes_with(&id).unwrap());
    }
}
