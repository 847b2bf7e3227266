//! Finite-dimensional highest-weight modules generated by the Fock vacuum,
//! and transfer matrices traced over them.
//!
//! For special values of the module parameter the vacuum of a nondegenerate
//! Lax matrix generates a finite-dimensional irreducible submodule of the Fock
//! space. It is built as the closure of the vacuum under the lowering
//! generators, with exact row reduction; every Lax coefficient then acts on it
//! by an exact square matrix.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigRational, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::coeff::{format_rational, FieldScalar};
use crate::error::{QbggError, Result};
use crate::lax::families::vacuum_weight;
use crate::lax::LaxMatrix;
use crate::oscillator::{apply_to_fock, FockVector, NormalPoly, OscSpace};
use crate::transfer::tensor::{SparseMatrix, TensorOperator};
use crate::transfer::twist::TwistSpec;
use crate::transfer::twisted::Twisted;
use crate::weyl::{weyl_dimension, Weight};

type Q = BigRational;

/// Dense square matrix over the rationals.
pub type DenseMatrix = Vec<Vec<Q>>;

/// Row-reduced span of Fock vectors, remembering how each reduced vector is
/// combined from the original basis vectors.
#[derive(Debug, Clone)]
struct Echelon {
    pivots: BTreeMap<Vec<u32>, usize>,
    rows: Vec<(FockVector<Q>, Vec<Q>)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
            rows: Vec::new(),
        }
    }

    /// Reduces `v` against the stored rows; returns the residual and the
    /// multiples of the reduced rows that were subtracted.
    fn reduce(&self, v: &FockVector<Q>) -> Result<(FockVector<Q>, Vec<(usize, Q)>)> {
        let mut residual = v.clone();
        let mut used = Vec::new();
        loop {
            let hit = residual
                .components()
                .iter()
                .rev()
                .find_map(|(k, c)| self.pivots.get(k).map(|&r| (k.clone(), c.clone(), r)));
            let Some((key, c, r)) = hit else { break };
            let row = &self.rows[r].0;
            let f = c.div(&row.component(&key))?;
            for (k, x) in row.components() {
                residual.add_component(k.clone(), -(&f * x));
            }
            used.push((r, f));
        }
        Ok((residual, used))
    }

    /// Coordinates of `v` in the original basis of size `dim`, if `v` lies in the span.
    fn coordinates(&self, v: &FockVector<Q>, dim: usize) -> Result<Option<Vec<Q>>> {
        let (residual, used) = self.reduce(v)?;
        if !residual.is_zero() {
            return Ok(None);
        }
        let mut out = vec![Q::zero(); dim];
        for (r, f) in used {
            for (slot, c) in out.iter_mut().zip(&self.rows[r].1) {
                *slot += &f * c;
            }
        }
        Ok(Some(out))
    }

    /// Adds the `index`-th basis vector `v` if it is independent; returns whether it was.
    fn insert(&mut self, v: &FockVector<Q>, index: usize) -> Result<bool> {
        let (residual, used) = self.reduce(v)?;
        let Some(pivot) = residual.components().keys().next_back().cloned() else {
            return Ok(false);
        };
        let mut combo = vec![Q::zero(); index + 1];
        combo[index] = Q::from_integer(1.into());
        for (r, f) in used {
            for (slot, c) in combo.iter_mut().zip(&self.rows[r].1) {
                *slot -= &f * c;
            }
        }
        for row in &mut self.rows {
            row.1.resize(index + 1, Q::zero());
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push((residual, combo));
        Ok(true)
    }
}

/// A finite-dimensional module inside the Fock space of a Lax matrix.
#[derive(Debug, Clone)]
pub struct FiniteModule {
    lax: LaxMatrix<Q>,
    basis: Vec<FockVector<Q>>,
    weights: Vec<Weight>,
    highest_weight: Weight,
    echelon: Echelon,
    generators: BTreeMap<(usize, usize), DenseMatrix>,
}

impl FiniteModule {
    /// The Lax matrix whose Fock space hosts the module.
    pub fn lax(&self) -> &LaxMatrix<Q> {
        &self.lax
    }

    /// Basis; `basis[0]` is the vacuum.
    pub fn basis(&self) -> &[FockVector<Q>] {
        &self.basis
    }

    /// Weight of each basis vector (`E_ii` eigenvalues, `i = 1..rank`).
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Highest weight (the vacuum weight).
    pub fn highest_weight(&self) -> &Weight {
        &self.highest_weight
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Matrix of the generator `E_ij` (0-based) in the basis.
    pub fn generator(&self, i: usize, j: usize) -> &DenseMatrix {
        &self.generators[&(i, j)]
    }

    /// Matrix of an oscillator polynomial preserving the module.
    pub fn matrix_of(&self, x: &NormalPoly<Q>) -> Result<DenseMatrix> {
        let d = self.dim();
        let mut m = vec![vec![Q::zero(); d]; d];
        for (c, b) in self.basis.iter().enumerate() {
            let image = apply_to_fock(x, b)?;
            let coords = self.echelon.coordinates(&image, d)?.ok_or_else(|| {
                QbggError::InvalidParameter(format!("operator {x} leaves the finite module"))
            })?;
            for (r, v) in coords.into_iter().enumerate() {
                m[r][c] = v;
            }
        }
        Ok(m)
    }

    /// Twisted character `Σ_b τ^{wt(b)}`.
    pub fn character(&self, twist: &TwistSpec) -> Result<Twisted<Q>> {
        let mut acc = Twisted::zero(twist.tau());
        for w in &self.weights {
            acc = acc.add(&Twisted::monomial(twist.tau(), w, Q::from_integer(1.into()))?)?;
        }
        Ok(acc)
    }

    /// JSON summary (dimension, highest weight, weights).
    pub fn to_json(&self) -> serde_json::Value {
        let fmt = |w: &Weight| w.iter().map(format_rational).collect::<Vec<_>>();
        serde_json::json!({
            "dim": self.dim(),
            "highest_weight": fmt(&self.highest_weight),
            "weights": self.weights.iter().map(fmt).collect::<Vec<_>>(),
        })
    }
}

fn weight_of(lax: &LaxMatrix<Q>, v: &FockVector<Q>) -> Result<Weight> {
    let (key, c) = v
        .components()
        .iter()
        .next_back()
        .ok_or_else(|| QbggError::InvalidParameter("zero vector has no weight".into()))?;
    (0..lax.alg().rank())
        .map(|i| {
            let image = apply_to_fock(&lax.generator(i, i), v)?;
            let ev = image.component(key).div(c)?;
            let mut rest = image.clone();
            for (k, x) in v.components() {
                rest.add_component(k.clone(), -(&ev * x));
            }
            if rest.is_zero() {
                Ok(ev)
            } else {
                Err(QbggError::NotHighestWeight(format!(
                    "module vector is not an eigenvector of E_{{{0},{0}}}",
                    i + 1
                )))
            }
        })
        .collect()
}

/// Closure of the Fock vacuum under the lowering generators `E_ij`, `i > j`.
///
/// Fails when the span exceeds twice the Weyl dimension of the vacuum weight,
/// when its dimension differs from that Weyl dimension, or when some
/// generator does not preserve it.
pub fn build_finite_module(lax: &LaxMatrix<Q>) -> Result<FiniteModule> {
    let hw = vacuum_weight(lax)?;
    let expected = weyl_dimension(lax.alg(), &hw)?;
    let expected = expected
        .to_integer()
        .to_usize()
        .ok_or_else(|| QbggError::InvalidParameter("Weyl dimension out of range".into()))?;
    let bound = 2 * expected;
    let k = lax.matrix().rows();
    let lowering: Vec<NormalPoly<Q>> = (0..k)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| lax.generator(i, j))
        .filter(|g| !g.is_zero())
        .collect();
    let mut echelon = Echelon::new();
    let vacuum = FockVector::vacuum(lax.space());
    echelon.insert(&vacuum, 0)?;
    let mut basis = vec![vacuum];
    let mut next = 0;
    while next < basis.len() {
        let v = basis[next].clone();
        next += 1;
        for g in &lowering {
            let w = apply_to_fock(g, &v)?;
            if w.is_zero() {
                continue;
            }
            if echelon.insert(&w, basis.len())? {
                basis.push(w);
                if basis.len() > bound {
                    return Err(QbggError::DimensionMismatch {
                        expected,
                        found: basis.len(),
                    });
                }
            }
        }
    }
    if basis.len() != expected {
        return Err(QbggError::DimensionMismatch {
            expected,
            found: basis.len(),
        });
    }
    let weights = basis.iter().map(|b| weight_of(lax, b)).collect::<Result<Vec<_>>>()?;
    let mut module = FiniteModule {
        lax: lax.clone(),
        basis,
        weights,
        highest_weight: hw,
        echelon,
        generators: BTreeMap::new(),
    };
    let generators = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| Ok(((i, j), module.matrix_of(&lax.generator(i, j))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    module.generators = generators;
    Ok(module)
}

fn dense_mul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = a.len();
    let mut out = vec![vec![Q::zero(); n]; n];
    for (i, row) in a.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[l].iter().enumerate() {
                if !y.is_zero() {
                    out[i][j] += x * y;
                }
            }
        }
    }
    out
}

fn dense_add_assign(a: &mut DenseMatrix, b: &DenseMatrix) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y;
        }
    }
}

/// Matrix polynomial in `x`: coefficient `j` acts as `x^j`.
type MatrixPoly = Vec<DenseMatrix>;

fn poly_mul(a: &MatrixPoly, b: &MatrixPoly, d: usize) -> MatrixPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![vec![vec![Q::zero(); d]; d]; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            dense_add_assign(&mut out[i + j], &dense_mul(x, y));
        }
    }
    out
}

/// Transfer matrix of `N` sites with the auxiliary space the finite module:
/// `Σ_b τ^{wt(b)} ⟨b| L_{i_1j_1}(x) ⋯ L_{i_Nj_N}(x) |b⟩`, every Lax coefficient
/// acting through its exact matrix on the module.
pub fn transfer_finite(module: &FiniteModule, twist: &TwistSpec, n: usize) -> Result<Twisted<TensorOperator>> {
    let lax = module.lax();
    if lax.alg() != twist.alg() {
        return Err(QbggError::InvalidParameter("twist and module belong to different algebras".into()));
    }
    let k = lax.matrix().rows();
    let d = module.dim();
    let entry_polys: Vec<Vec<MatrixPoly>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let p = lax.matrix().get(i, j);
                    if p.is_zero() {
                        Ok(Vec::new())
                    } else {
                        p.coeffs().iter().map(|c| module.matrix_of(c)).collect()
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    // Group basis vectors by weight class with their integral τ-factor.
    let mut classes: BTreeMap<Vec<Q>, Vec<(usize, Q)>> = BTreeMap::new();
    for (b, w) in module.weights().iter().enumerate() {
        for (class, factor) in Twisted::monomial(twist.tau(), w, Q::from_integer(1.into()))?.terms() {
            classes.entry(class.clone()).or_default().push((b, factor.clone()));
        }
    }
    let dim = k.pow(n as u32);
    let keys: Vec<(usize, usize)> = (0..dim).flat_map(|r| (0..dim).map(move |c| (r, c))).collect();
    let traced: Vec<((usize, usize), Vec<(Vec<Q>, Vec<Q>)>)> = keys
        .par_iter()
        .filter_map(|&(row, col)| {
            let ri = split_index(row, k, n);
            let ci = split_index(col, k, n);
            let identity: DenseMatrix = (0..d)
                .map(|a| (0..d).map(|b| if a == b { Q::from_integer(1.into()) } else { Q::zero() }).collect())
                .collect();
            let mut acc: MatrixPoly = vec![identity];
            for (&i, &j) in ri.iter().zip(&ci) {
                acc = poly_mul(&acc, &entry_polys[i][j], d);
                if acc.is_empty() {
                    return None;
                }
            }
            let per_class = classes
                .iter()
                .map(|(class, members)| {
                    let coeffs = acc
                        .iter()
                        .map(|m| members.iter().map(|(b, f)| f * &m[*b][*b]).sum::<Q>())
                        .collect();
                    (class.clone(), coeffs)
                })
                .collect();
            Some(((row, col), per_class))
        })
        .collect();
    let mut per_class: BTreeMap<Vec<Q>, Vec<SparseMatrix>> = BTreeMap::new();
    for (key, parts) in traced {
        for (class, coeffs) in parts {
            let slot = per_class.entry(class).or_default();
            for (j, c) in coeffs.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if slot.len() <= j {
                    slot.resize(j + 1, SparseMatrix::new());
                }
                slot[j].insert(key, c);
            }
        }
    }
    let mut out = Twisted::zero(twist.tau());
    for (class, coeffs) in per_class {
        let op = TensorOperator::from_coeffs(n, k, coeffs);
        out = out.add(&Twisted::monomial(twist.tau(), &class, op)?)?;
    }
    Ok(out)
}

fn split_index(mut flat: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = flat % k;
        flat /= k;
    }
    out
}

/// The oscillator space a module lives in.
pub fn module_space(module: &FiniteModule) -> &Arc<OscSpace> {
    module.lax.space()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::lax::families;
    use crate::weyl::{weyl_character, AlgebraType};

    #[test]
    fn small_module_dimensions() {
        let a = families::a_rect::<Q>(2, 1, &int(1)).unwrap();
        assert_eq!(build_finite_module(&a).unwrap().dim(), 2);
        let c = families::cd_nondegenerate::<Q>(&AlgebraType::C(2), &int(1)).unwrap();
        assert_eq!(build_finite_module(&c).unwrap().dim(), 5);
        let d = families::cd_nondegenerate::<Q>(&AlgebraType::D(3), &rat(1, 2)).unwrap();
        assert_eq!(build_finite_module(&d).unwrap().dim(), 4);
    }

    #[test]
    fn non_special_parameter_is_rejected() {
        let a = families::a_rect::<Q>(2, 1, &rat(1, 2)).unwrap();
        assert!(build_finite_module(&a).is_err());
    }

    #[test]
    fn length_zero_trace_is_the_weyl_character() {
        let alg = AlgebraType::C(2);
        let twist = TwistSpec::new(alg, vec![int(3), rat(2, 5)]).unwrap();
        let l = families::cd_nondegenerate::<Q>(&alg, &int(2)).unwrap();
        let m = build_finite_module(&l).unwrap();
        let ch = m.character(&twist).unwrap();
        let expected = weyl_character(&alg, m.highest_weight(), twist.tau()).unwrap();
        assert_eq!(ch.as_plain(), Some(&expected));
        let t0 = transfer_finite(&m, &twist, 0).unwrap();
        assert_eq!(t0.as_plain().unwrap().entry(0, 0, 0), expected);
    }

    #[test]
    fn defining_representation_transfer() {
        // gl_2 defining module: L(x) = x + 1 + P-type term, traced with diag(τ₁, τ₂).
        let l = families::a_rect::<Q>(2, 1, &int(1)).unwrap();
        let m = build_finite_module(&l).unwrap();
        let twist = TwistSpec::new(AlgebraType::A(2), vec![int(2), int(7)]).unwrap();
        let t = transfer_finite(&m, &twist, 1).unwrap();
        let op = t.as_plain().unwrap();
        assert_eq!(op.entry(1, 0, 0), int(9));
        assert_eq!(op.entry(1, 1, 1), int(9));
        assert_eq!(op.entry(1, 0, 1), int(0));
        // Off-diagonal of x-constant part: E_ji twisted traces vanish.
        assert_eq!(op.entry(0, 0, 1), int(0));
    }
}
