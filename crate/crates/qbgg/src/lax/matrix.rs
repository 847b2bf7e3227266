//! Polynomials in the spectral parameter with oscillator-valued coefficients,
//! matrices of such polynomials, and signed permutation matrices.

use std::sync::Arc;

use num::BigRational;

use crate::coeff::Scalar;
use crate::error::{QbggError, Result};
use crate::oscillator::{substitute_generators, NormalPoly, OscSpace, Substitution};

/// `Σ_j x^j p_j` with `p_j` normal-ordered oscillator polynomials.
#[derive(Debug, Clone)]
pub struct OpPoly<S> {
    space: Arc<OscSpace>,
    coeffs: Vec<NormalPoly<S>>,
}

impl<S: Scalar> PartialEq for OpPoly<S> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<S: Scalar> OpPoly<S> {
    /// The zero polynomial.
    pub fn zero(space: &Arc<OscSpace>) -> Self {
        OpPoly {
            space: space.clone(),
            coeffs: Vec::new(),
        }
    }

    /// A polynomial from its coefficients (lowest power first); trailing zeros are trimmed.
    pub fn from_coeffs(space: &Arc<OscSpace>, coeffs: Vec<NormalPoly<S>>) -> Self {
        let mut p = OpPoly {
            space: space.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    /// An `x`-independent polynomial.
    pub fn constant(p: NormalPoly<S>) -> Self {
        let space = p.space().clone();
        Self::from_coeffs(&space, vec![p])
    }

    /// A scalar constant.
    pub fn scalar(space: &Arc<OscSpace>, c: S) -> Self {
        Self::constant(NormalPoly::scalar(space, c))
    }

    /// The spectral parameter `x`.
    pub fn x(space: &Arc<OscSpace>) -> Self {
        Self::from_coeffs(space, vec![NormalPoly::zero(space), NormalPoly::int(space, 1)])
    }

    /// `x + c`.
    pub fn x_plus(space: &Arc<OscSpace>, c: S) -> Self {
        Self::from_coeffs(space, vec![NormalPoly::scalar(space, c), NormalPoly::int(space, 1)])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(NormalPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    /// The oscillator space.
    pub fn space(&self) -> &Arc<OscSpace> {
        &self.space
    }

    /// Coefficients, lowest power first.
    pub fn coeffs(&self) -> &[NormalPoly<S>] {
        &self.coeffs
    }

    /// Coefficient of `x^j`.
    pub fn coeff(&self, j: usize) -> NormalPoly<S> {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| NormalPoly::zero(&self.space))
    }

    /// Degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|j| &self.coeff(j) + &other.coeff(j)).collect();
        Self::from_coeffs(&self.space, coeffs)
    }

    /// Difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        OpPoly {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Product (`x` is central).
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.space);
        }
        let mut coeffs = vec![NormalPoly::zero(&self.space); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(&self.space, coeffs)
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(&self.space, self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// Substitutes `x ↦ x + c`.
    pub fn shift(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.space);
        let xc = Self::x_plus(&self.space, c.clone());
        let mut power = Self::scalar(&self.space, S::one());
        for p in &self.coeffs {
            out = out.add(&power.mul(&Self::constant(p.clone())));
            power = power.mul(&xc);
        }
        out
    }

    /// Applies a generator substitution coefficient-wise.
    pub fn substitute(&self, subst: &Substitution<S>) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| substitute_generators(p, subst))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(subst.target(), coeffs))
    }

    /// Maps every scalar coefficient.
    pub fn map_scalars<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> OpPoly<T> {
        OpPoly::from_coeffs(&self.space, self.coeffs.iter().map(|p| p.map_coeffs(f)).collect())
    }

    /// Re-expresses the polynomial over a larger oscillator space.
    pub fn embed(&self, target: &Arc<OscSpace>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|p| p.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(target, coeffs))
    }
}

/// A rectangular matrix of [`OpPoly`] entries over one oscillator space.
#[derive(Debug, Clone)]
pub struct OpMatrix<S> {
    space: Arc<OscSpace>,
    rows: usize,
    cols: usize,
    entries: Vec<OpPoly<S>>,
}

impl<S: Scalar> PartialEq for OpMatrix<S> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl<S: Scalar> OpMatrix<S> {
    /// The zero matrix.
    pub fn zeros(space: &Arc<OscSpace>, rows: usize, cols: usize) -> Self {
        OpMatrix {
            space: space.clone(),
            rows,
            cols,
            entries: vec![OpPoly::zero(space); rows * cols],
        }
    }

    /// The identity matrix.
    pub fn identity(space: &Arc<OscSpace>, n: usize) -> Self {
        Self::scalar_diag(space, &vec![S::one(); n])
    }

    /// A diagonal matrix of scalars.
    pub fn scalar_diag(space: &Arc<OscSpace>, d: &[S]) -> Self {
        let mut m = Self::zeros(space, d.len(), d.len());
        for (i, c) in d.iter().enumerate() {
            m.set(i, i, OpPoly::scalar(space, c.clone()));
        }
        m
    }

    /// `x` times the identity.
    pub fn x_identity(space: &Arc<OscSpace>, n: usize) -> Self {
        let mut m = Self::zeros(space, n, n);
        for i in 0..n {
            m.set(i, i, OpPoly::x(space));
        }
        m
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(
        space: &Arc<OscSpace>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> OpPoly<S>,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        OpMatrix {
            space: space.clone(),
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix of constant (`x`-independent) oscillator entries.
    pub fn from_consts(
        space: &Arc<OscSpace>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> NormalPoly<S>,
    ) -> Self {
        Self::from_fn(space, rows, cols, |i, j| OpPoly::constant(f(i, j)))
    }

    /// Assembles a block matrix; blocks in one block-row share their row count
    /// and blocks in one block-column share their column count.
    pub fn blocks(blocks: &[Vec<OpMatrix<S>>]) -> Result<Self> {
        let space = blocks[0][0].space.clone();
        let row_sizes: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let col_sizes: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        for (bi, row) in blocks.iter().enumerate() {
            if row.len() != col_sizes.len() {
                return Err(QbggError::InvalidParameter("ragged block matrix".into()));
            }
            for (bj, b) in row.iter().enumerate() {
                if b.rows != row_sizes[bi] || b.cols != col_sizes[bj] {
                    return Err(QbggError::InvalidParameter(format!(
                        "block ({bi},{bj}) has shape {}x{}, expected {}x{}",
                        b.rows, b.cols, row_sizes[bi], col_sizes[bj]
                    )));
                }
            }
        }
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Self::zeros(&space, rows, cols);
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
                c0 += col_sizes[bj];
            }
            r0 += row_sizes[bi];
        }
        Ok(out)
    }

    /// The oscillator space.
    pub fn space(&self) -> &Arc<OscSpace> {
        &self.space
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)` (0-based).
    pub fn get(&self, i: usize, j: usize) -> &OpPoly<S> {
        &self.entries[i * self.cols + j]
    }

    /// Sets entry `(i, j)` (0-based).
    pub fn set(&mut self, i: usize, j: usize, v: OpPoly<S>) {
        self.entries[i * self.cols + j] = v;
    }

    /// Maximal degree in `x` over all entries.
    pub fn degree(&self) -> usize {
        self.entries.iter().filter_map(OpPoly::degree).max().unwrap_or(0)
    }

    /// Coefficient matrix of `x^j` as rows of oscillator polynomials.
    pub fn coeff_matrix(&self, j: usize) -> Vec<Vec<NormalPoly<S>>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).coeff(j)).collect())
            .collect()
    }

    /// Matrix sum.
    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(&self.space, self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    /// Matrix difference.
    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(&self.space, self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    /// Entrywise negation.
    pub fn neg(&self) -> Self {
        Self::from_fn(&self.space, self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    /// Matrix product with entries multiplied in order (`self` entry on the left).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes must be compatible");
        Self::from_fn(&self.space, self.rows, other.cols, |i, j| {
            let mut acc = OpPoly::zero(&self.space);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    /// Multiplies every entry by a scalar.
    pub fn scale(&self, c: &S) -> Self {
        Self::from_fn(&self.space, self.rows, self.cols, |i, j| self.get(i, j).scale(c))
    }

    /// Multiplies every entry by `x`.
    pub fn times_x(&self) -> Self {
        let x = OpPoly::x(&self.space);
        Self::from_fn(&self.space, self.rows, self.cols, |i, j| self.get(i, j).mul(&x))
    }

    /// Substitutes `x ↦ x + c` in every entry.
    pub fn shift(&self, c: &S) -> Self {
        Self::from_fn(&self.space, self.rows, self.cols, |i, j| self.get(i, j).shift(c))
    }

    /// Applies a generator substitution to every entry.
    pub fn substitute(&self, subst: &Substitution<S>) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.substitute(subst)?);
        }
        Ok(OpMatrix {
            space: subst.target().clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Re-expresses the matrix over a larger oscillator space.
    pub fn embed(&self, target: &Arc<OscSpace>) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(OpMatrix {
            space: target.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Maps every scalar coefficient.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> OpMatrix<T> {
        OpMatrix {
            space: self.space.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.map_scalars(&f)).collect(),
        }
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.space, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Left multiplication by a diagonal scalar matrix.
    pub fn left_diag(&self, d: &[S]) -> Self {
        Self::from_fn(&self.space, self.rows, self.cols, |i, j| self.get(i, j).scale(&d[i]))
    }

    /// Right multiplication by a diagonal scalar matrix.
    pub fn right_diag(&self, d: &[S]) -> Self {
        Self::from_fn(&self.space, self.rows, self.cols, |i, j| self.get(i, j).scale(&d[j]))
    }

    /// Conjugation `B M B^{-1}` by a signed permutation matrix.
    pub fn conjugate(&self, b: &SignedPermMatrix) -> Result<Self> {
        if b.dim() != self.rows || self.rows != self.cols {
            return Err(QbggError::InvalidParameter(
                "conjugation needs a square matrix of the permutation's size".into(),
            ));
        }
        let mut out = Self::zeros(&self.space, self.rows, self.cols);
        for c in 0..self.rows {
            for d in 0..self.cols {
                let sign = b.signs[c] * b.signs[d];
                let v = self.get(c, d);
                out.set(b.image[c], b.image[d], if sign < 0 { v.neg() } else { v.clone() });
            }
        }
        Ok(out)
    }

    /// Sub-matrix of rows `r0..r1` and columns `c0..c1`.
    pub fn slice(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(&self.space, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }
}

/// A monomial matrix with entries in `{0, ±1}`: column `j` has its single
/// non-zero entry `signs[j]` in row `image[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermMatrix {
    image: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermMatrix {
    /// Builds and validates a signed permutation matrix.
    pub fn new(image: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(QbggError::InvalidParameter(format!(
                    "not a permutation: {image:?}"
                )));
            }
            seen[i] = true;
        }
        if signs.len() != n || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(QbggError::InvalidParameter("signs must be ±1".into()));
        }
        Ok(SignedPermMatrix { image, signs })
    }

    /// The identity.
    pub fn identity(n: usize) -> Self {
        SignedPermMatrix {
            image: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Size.
    pub fn dim(&self) -> usize {
        self.image.len()
    }

    /// Row index of the non-zero entry of column `j`.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Sign of the non-zero entry of column `j`.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &SignedPermMatrix) -> SignedPermMatrix {
        let image = other.image.iter().map(|&k| self.image[k]).collect();
        let signs = (0..other.dim())
            .map(|j| other.signs[j] * self.signs[other.image[j]])
            .collect();
        SignedPermMatrix { image, signs }
    }

    /// Inverse (equal to the transpose).
    pub fn inverse(&self) -> SignedPermMatrix {
        let n = self.dim();
        let mut image = vec![0; n];
        let mut signs = vec![1; n];
        for j in 0..n {
            image[self.image[j]] = j;
            signs[self.image[j]] = self.signs[j];
        }
        SignedPermMatrix { image, signs }
    }

    /// Dense scalar matrix.
    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        let n = self.dim();
        let mut m = vec![vec![crate::coeff::int(0); n]; n];
        for j in 0..n {
            m[self.image[j]][j] = crate::coeff::int(self.signs[j] as i64);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;

    type Q = BigRational;

    #[test]
    fn shift_expands_binomially() {
        let s = OscSpace::new(["1"]).unwrap();
        let x = OpPoly::<Q>::x(&s);
        let x2 = x.mul(&x);
        let shifted = x2.shift(&int(2));
        // (x+2)^2 = x^2 + 4x + 4
        assert_eq!(shifted.coeff(0), NormalPoly::int(&s, 4));
        assert_eq!(shifted.coeff(1), NormalPoly::int(&s, 4));
        assert_eq!(shifted.coeff(2), NormalPoly::int(&s, 1));
    }

    #[test]
    fn signed_permutation_algebra() {
        let b = SignedPermMatrix::new(vec![1, 0], vec![-1, 1]).unwrap();
        assert_eq!(b.compose(&b.inverse()), SignedPermMatrix::identity(2));
        assert!(SignedPermMatrix::new(vec![0, 0], vec![1, 1]).is_err());
        let dense = b.to_dense();
        assert_eq!(dense[1][0], int(-1));
        assert_eq!(dense[0][1], int(1));
    }

    #[test]
    fn conjugation_matches_dense_product() {
        let s = OscSpace::new(["1"]).unwrap();
        let m = OpMatrix::<Q>::from_fn(&s, 2, 2, |i, j| OpPoly::scalar(&s, int((3 * i + j) as i64 + 1)));
        let b = SignedPermMatrix::new(vec![1, 0], vec![-1, 1]).unwrap();
        let dense = |p: &SignedPermMatrix| {
            OpMatrix::<Q>::from_fn(&s, 2, 2, |i, j| OpPoly::scalar(&s, p.to_dense()[i][j].clone()))
        };
        let expected = dense(&b).mul(&m).mul(&dense(&b.inverse()));
        assert_eq!(m.conjugate(&b).unwrap(), expected);
    }
}
