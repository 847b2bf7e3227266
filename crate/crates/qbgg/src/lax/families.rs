//! Oscillator Lax matrices of types A, B, C and D.
//!
//! Every constructor is generic over the coefficient ring, so the same code
//! builds exact Lax matrices (`BigRational`) and matrices whose parameter `t`
//! is kept formal ([`crate::coeff::LaurentScalar`]) for renormalised limits.
//!
//! Indices are 1-based in labels and documentation, 0-based in code. The
//! primed index is `i' = K + 1 − i`. Oscillator pairs are labelled `"i,j"`
//! for the pair `(a_{j,i}, ā_{i,j})` (creation operator `ā_{i,j}`), and `"i"`
//! for the single-index pairs `(a_i, ā_i)` of the orthogonal quadratic family.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::coeff::Scalar;
use crate::error::{QbggError, Result};
use crate::lax::matrix::{OpMatrix, OpPoly, SignedPermMatrix};
use crate::oscillator::{apply_to_fock, FockVector, NormalPoly, OscSpace, Substitution};
use crate::weyl::AlgebraType;

/// A Lax matrix together with its algebra and provenance.
#[derive(Debug, Clone)]
pub struct LaxMatrix<S> {
    alg: AlgebraType,
    family: String,
    params: BTreeMap<String, String>,
    matrix: OpMatrix<S>,
}

impl<S: Scalar> PartialEq for LaxMatrix<S> {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.matrix == other.matrix
    }
}

impl<S: Scalar> LaxMatrix<S> {
    /// Wraps a matrix; it must be `K × K` for the algebra.
    pub fn new(alg: AlgebraType, family: impl Into<String>, matrix: OpMatrix<S>) -> Result<Self> {
        let k = alg.dim_k();
        if matrix.rows() != k || matrix.cols() != k {
            return Err(QbggError::DimensionMismatch {
                expected: k,
                found: matrix.rows(),
            });
        }
        Ok(LaxMatrix {
            alg,
            family: family.into(),
            params: BTreeMap::new(),
            matrix,
        })
    }

    /// Adds a descriptive parameter.
    pub fn with_param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// The algebra.
    pub fn alg(&self) -> &AlgebraType {
        &self.alg
    }

    /// Family name.
    pub fn family(&self) -> &str {
        &self.family
    }

    /// Descriptive parameters.
    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    /// The matrix.
    pub fn matrix(&self) -> &OpMatrix<S> {
        &self.matrix
    }

    /// The oscillator space.
    pub fn space(&self) -> &Arc<OscSpace> {
        self.matrix.space()
    }

    /// Degree in the spectral parameter.
    pub fn degree(&self) -> usize {
        self.matrix.degree()
    }

    /// Replaces the matrix, keeping algebra and provenance.
    pub fn with_matrix(&self, matrix: OpMatrix<S>) -> Self {
        LaxMatrix {
            alg: self.alg,
            family: self.family.clone(),
            params: self.params.clone(),
            matrix,
        }
    }

    /// `L(x + c)`.
    pub fn shift(&self, c: &S) -> Self {
        self.with_matrix(self.matrix.shift(c))
    }

    /// Applies a generator substitution.
    pub fn substitute(&self, subst: &Substitution<S>) -> Result<Self> {
        Ok(self.with_matrix(self.matrix.substitute(subst)?))
    }

    /// The generators `E_ij = L^{(d−1)}_{ji}` read off the subleading coefficient.
    pub fn generator(&self, i: usize, j: usize) -> NormalPoly<S> {
        let d = self.degree();
        self.matrix.get(j, i).coeff(d.saturating_sub(1))
    }

    /// True when the leading coefficient is the identity matrix.
    pub fn is_monic(&self) -> bool {
        let d = self.degree();
        let k = self.matrix.rows();
        (0..k).all(|i| {
            (0..k).all(|j| {
                let c = self.matrix.get(i, j).coeff(d);
                if i == j {
                    c == NormalPoly::int(self.space(), 1)
                } else {
                    c.is_zero()
                }
            })
        })
    }
}

/// Label of the pair with creation operator `ā_{i,j}` (1-based K-indices).
pub fn pair_label(i: usize, j: usize) -> String {
    format!("{i},{j}")
}

/// 1-based primed index `i' = K + 1 − i`.
fn primed(k: usize, i: usize) -> usize {
    k + 1 - i
}

/// Generator access over one space. Labels are produced by the constructors
/// themselves, so a missing label is a programming error.
struct Gens<S> {
    space: Arc<OscSpace>,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> Gens<S> {
    fn new(space: &Arc<OscSpace>) -> Self {
        Gens {
            space: space.clone(),
            _scalar: PhantomData,
        }
    }

    /// `ā_{i,j}`.
    fn abar(&self, i: usize, j: usize) -> NormalPoly<S> {
        NormalPoly::cre(&self.space, &pair_label(i, j)).expect("constructor label")
    }

    /// `a_{j,i}`: the partner of `ā_{i,j}`.
    fn a(&self, j: usize, i: usize) -> NormalPoly<S> {
        NormalPoly::ann(&self.space, &pair_label(i, j)).expect("constructor label")
    }

    fn abar1(&self, i: usize) -> NormalPoly<S> {
        NormalPoly::cre(&self.space, &i.to_string()).expect("constructor label")
    }

    fn a1(&self, i: usize) -> NormalPoly<S> {
        NormalPoly::ann(&self.space, &i.to_string()).expect("constructor label")
    }

    fn zero(&self) -> NormalPoly<S> {
        NormalPoly::zero(&self.space)
    }

    fn int(&self, n: i64) -> NormalPoly<S> {
        NormalPoly::int(&self.space, n)
    }

    fn consts(&self, rows: usize, cols: usize, f: impl FnMut(usize, usize) -> NormalPoly<S>) -> OpMatrix<S> {
        OpMatrix::from_consts(&self.space, rows, cols, f)
    }

    fn id(&self, n: usize) -> OpMatrix<S> {
        OpMatrix::identity(&self.space, n)
    }

    fn scalar_id(&self, n: usize, c: &S) -> OpMatrix<S> {
        OpMatrix::scalar_diag(&self.space, &vec![c.clone(); n])
    }

    /// `(x + c) I_n`.
    fn x_id(&self, n: usize, c: &S) -> OpMatrix<S> {
        OpMatrix::x_identity(&self.space, n).add(&self.scalar_id(n, c))
    }

    fn zeros(&self, rows: usize, cols: usize) -> OpMatrix<S> {
        OpMatrix::zeros(&self.space, rows, cols)
    }
}

fn int_s<S: Scalar>(n: i64) -> S {
    S::from_int(n)
}

fn half<S: Scalar>() -> S {
    S::from_rational(&crate::coeff::rat(1, 2))
}

/// The generic rectangular shape
/// `[[(x+α) − ĀA, −Ā(β − AĀ)], [−A, (x+γ) + AĀ]]`.
fn rect_shape<S: Scalar>(
    g: &Gens<S>,
    abar: &OpMatrix<S>,
    a: &OpMatrix<S>,
    alpha: &S,
    beta: &S,
    gamma: &S,
) -> Result<OpMatrix<S>> {
    let (p, q) = (abar.rows(), abar.cols());
    let abar_a = abar.mul(a);
    let a_abar = a.mul(abar);
    OpMatrix::blocks(&[
        vec![g.x_id(p, alpha).sub(&abar_a), abar.mul(&g.scalar_id(q, beta).sub(&a_abar)).neg()],
        vec![a.neg(), g.x_id(q, gamma).add(&a_abar)],
    ])
}

/// The degenerate shapes `[[x − ĀA, Ā], [−A, I]]` and `[[I, Ā], [A, x + AĀ]]`.
fn degenerate_shape<S: Scalar>(g: &Gens<S>, abar: &OpMatrix<S>, a: &OpMatrix<S>, plus: bool) -> Result<OpMatrix<S>> {
    let (p, q) = (abar.rows(), abar.cols());
    let zero = S::zero();
    if plus {
        OpMatrix::blocks(&[
            vec![g.x_id(p, &zero).sub(&abar.mul(a)), abar.clone()],
            vec![a.neg(), g.id(q)],
        ])
    } else {
        OpMatrix::blocks(&[
            vec![g.id(p), abar.clone()],
            vec![a.clone(), g.x_id(q, &zero).add(&a.mul(abar))],
        ])
    }
}

// ---------------------------------------------------------------------------
// Type A
// ---------------------------------------------------------------------------

/// Pairs `"i,j"`, `i < j`, of the Verma-module realisation of `gl_n`.
pub fn a_verma_space(n: usize) -> Result<Arc<OscSpace>> {
    let mut labels = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            labels.push(pair_label(i, j));
        }
    }
    OscSpace::new(labels)
}

/// Pairs `"i,j"`, `i ∈ I`, `j ∉ I`.
pub fn a_subset_space(n: usize, subset: &[usize]) -> Result<Arc<OscSpace>> {
    let subset = normalise_subset(n, subset)?;
    let mut labels = Vec::new();
    for &i in &subset {
        for j in 1..=n {
            if !subset.contains(&j) {
                labels.push(pair_label(i, j));
            }
        }
    }
    OscSpace::new(labels)
}

fn normalise_subset(n: usize, subset: &[usize]) -> Result<Vec<usize>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() || s.iter().any(|&i| i == 0 || i > n) {
        return Err(QbggError::InvalidParameter(format!(
            "subset {subset:?} must consist of distinct indices in 1..={n}"
        )));
    }
    Ok(s)
}

fn require_a(n: usize) -> Result<AlgebraType> {
    let alg = AlgebraType::A(n);
    alg.validate()?;
    Ok(alg)
}

/// The `gl_n` Lax matrix on the Verma module of highest weight `λ`:
/// `L = U^{-1} (x + D_λ) U`, with `U` unit upper triangular, `U_{ij} = −ā_{i,j}`,
/// and `D_λ` lower triangular with diagonal `λ_i − i + 1` and entries
/// `−a_{j,i} + Σ_{k>j} ā_{j,k} a_{k,i}` below it.
pub fn a_verma<S: Scalar>(n: usize, lambda: &[S]) -> Result<LaxMatrix<S>> {
    let alg = require_a(n)?;
    if lambda.len() != n {
        return Err(QbggError::DimensionMismatch {
            expected: n,
            found: lambda.len(),
        });
    }
    let space = a_verma_space(n)?;
    let g = Gens::<S>::new(&space);
    // 1-based helpers inside closures.
    let nil = g.consts(n, n, |i, j| if i < j { g.abar(i + 1, j + 1) } else { g.zero() });
    let u = g.id(n).sub(&nil);
    let mut u_inv = g.id(n);
    let mut power = g.id(n);
    for _ in 1..n {
        power = power.mul(&nil);
        u_inv = u_inv.add(&power);
    }
    let mut d = OpMatrix::x_identity(&space, n);
    for i in 0..n {
        let diag = lambda[i].sub(&int_s(i as i64));
        d.set(i, i, OpPoly::x_plus(&space, diag));
        for j in i + 1..n {
            // Entry (j, i), j > i (0-based), i.e. 1-based (j+1, i+1).
            let mut e = -&g.a(j + 1, i + 1);
            for k in j + 1..n {
                e = &e + &(&g.abar(j + 1, k + 1) * &g.a(k + 1, i + 1));
            }
            d.set(j, i, OpPoly::constant(e));
        }
    }
    let m = u_inv.mul(&d).mul(&u);
    Ok(LaxMatrix::new(alg, "A-Verma", m)?.with_param("n", n))
}

/// Pairs `"i,j"`, `i ≤ a < j`, of the rectangular `gl_n` family.
pub fn a_rect_space(n: usize, a: usize) -> Result<Arc<OscSpace>> {
    a_subset_space(n, &(1..=a).collect::<Vec<_>>())
}

fn a_rect_blocks<S: Scalar>(g: &Gens<S>, n: usize, a: usize) -> (OpMatrix<S>, OpMatrix<S>) {
    let abar = g.consts(a, n - a, |i, j| g.abar(i + 1, a + j + 1));
    let amat = g.consts(n - a, a, |j, i| g.a(a + j + 1, i + 1));
    (abar, amat)
}

fn check_rect(n: usize, a: usize) -> Result<()> {
    if a == 0 || a >= n {
        return Err(QbggError::InvalidParameter(format!("need 0 < a < n, got a = {a}, n = {n}")));
    }
    Ok(())
}

/// The nondegenerate `gl_n` Lax matrix with `a(n−a)` oscillator pairs:
/// `[[(x+t) − ĀA, −Ā(t + a − AĀ)], [−A, (x−a) + AĀ]]`.
pub fn a_rect<S: Scalar>(n: usize, a: usize, t: &S) -> Result<LaxMatrix<S>> {
    let alg = require_a(n)?;
    check_rect(n, a)?;
    let space = a_rect_space(n, a)?;
    let g = Gens::<S>::new(&space);
    let (abar, amat) = a_rect_blocks(&g, n, a);
    let beta = t.add(&int_s(a as i64));
    let m = rect_shape(&g, &abar, &amat, t, &beta, &int_s(-(a as i64)))?;
    Ok(LaxMatrix::new(alg, "A-rect", m)?.with_param("n", n).with_param("a", a))
}

/// The degenerate `gl_n` Lax matrix
/// `L_I = (1 + Σ f_{ij} e_{ij}) (x Σ_{i∈I} e_{ii} + Σ_{j∉I} e_{jj}) (1 + Σ g_{ji} e_{ji})`
/// with `f_{ij} = ā_{i,j}` (`i<j`) or `a_{j,i}` (`i>j`), and
/// `g_{ji} = ā_{i,j}` (`j<i`) or `−a_{j,i}` (`j>i`), for `i ∈ I`, `j ∉ I`.
pub fn a_degenerate<S: Scalar>(n: usize, subset: &[usize]) -> Result<LaxMatrix<S>> {
    let alg = require_a(n)?;
    let subset = normalise_subset(n, subset)?;
    let space = a_subset_space(n, &subset)?;
    let g = Gens::<S>::new(&space);
    let inside = |i: usize| subset.contains(&(i + 1));
    let left = g.consts(n, n, |i, j| {
        if i == j {
            g.int(1)
        } else if inside(i) && !inside(j) {
            if i < j {
                g.abar(i + 1, j + 1)
            } else {
                g.a(j + 1, i + 1)
            }
        } else {
            g.zero()
        }
    });
    let right = g.consts(n, n, |j, i| {
        if i == j {
            g.int(1)
        } else if inside(i) && !inside(j) {
            if j < i {
                g.abar(i + 1, j + 1)
            } else {
                -&g.a(j + 1, i + 1)
            }
        } else {
            g.zero()
        }
    });
    let mut middle = g.zeros(n, n);
    for i in 0..n {
        middle.set(
            i,
            i,
            if inside(i) {
                OpPoly::x(&space)
            } else {
                OpPoly::scalar(&space, S::one())
            },
        );
    }
    let m = left.mul(&middle).mul(&right);
    let label = subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    Ok(LaxMatrix::new(alg, "A-degenerate", m)?
        .with_param("n", n)
        .with_param("I", format!("{{{label}}}")))
}

/// The single-index degenerate Lax matrix `L_{{i}}` written out entry by entry:
/// row `i` is `(a_{1,i}, …, a_{i−1,i}, x + (i−1) + Σ_{j<i} N_{ij} − Σ_{j>i} N_{ij}, ā_{i,i+1}, …)`,
/// column `i` carries `ā_{i,j}` above and `−a_{j,i}` below the diagonal, and the
/// remaining block is the identity (`N_{ij} = ā_{i,j} a_{j,i}`).
pub fn a_partonic<S: Scalar>(n: usize, i: usize) -> Result<LaxMatrix<S>> {
    let alg = require_a(n)?;
    if i == 0 || i > n {
        return Err(QbggError::InvalidParameter(format!("index {i} outside 1..={n}")));
    }
    let space = a_subset_space(n, &[i])?;
    let g = Gens::<S>::new(&space);
    let mut diag = g.int(i as i64 - 1);
    for j in 1..=n {
        if j < i {
            diag = &diag + &(&g.abar(i, j) * &g.a(j, i));
        } else if j > i {
            diag = &diag - &(&g.abar(i, j) * &g.a(j, i));
        }
    }
    let mut m = g.consts(n, n, |r, c| {
        let (r, c) = (r + 1, c + 1);
        if r == i && c == i {
            diag.clone()
        } else if r == i {
            if c < i {
                g.a(c, i)
            } else {
                g.abar(i, c)
            }
        } else if c == i {
            if r < i {
                g.abar(i, r)
            } else {
                -&g.a(r, i)
            }
        } else if r == c {
            g.int(1)
        } else {
            g.zero()
        }
    });
    let entry = m.get(i - 1, i - 1).add(&OpPoly::x(&space));
    m.set(i - 1, i - 1, entry);
    Ok(LaxMatrix::new(alg, "A-partonic", m)?.with_param("n", n).with_param("i", i))
}

/// The Weyl-symmetry matrix `B_I = Σ_i e_{σ(i), i}` of `gl_n`, where `σ` lists
/// the elements of `I` and then those of its complement, each increasingly.
pub fn b_subset(n: usize, subset: &[usize]) -> Result<SignedPermMatrix> {
    let sigma = subset_sigma(n, subset)?;
    SignedPermMatrix::new(sigma.iter().map(|s| s - 1).collect(), vec![1; n])
}

/// The permutation `σ` (1-based values) attached to a subset.
pub fn subset_sigma(n: usize, subset: &[usize]) -> Result<Vec<usize>> {
    let s = normalise_subset(n, subset)?;
    let mut sigma = s.clone();
    sigma.extend((1..=n).filter(|i| !s.contains(i)));
    Ok(sigma)
}

/// Which automorphism accompanies the conjugation of the rectangular family by `B_I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetTransform {
    /// Particle–hole on the pairs with `σ(j) < σ(i)`, labels unchanged.
    ParticleHole,
    /// Relabelling onto the degenerate pair set of `I`, with `ā ↦ a`, `a ↦ −ā`
    /// on the pairs with `σ(j) < σ(i)`.
    Relabel,
}

/// The rectangular Lax matrix conjugated by `B_I`, `|I| = a`, followed by the
/// automorphism that keeps the Fock vacuum a highest-weight vector.
pub fn a_rect_conjugated<S: Scalar>(
    n: usize,
    a: usize,
    t: &S,
    subset: &[usize],
    transform: SubsetTransform,
) -> Result<LaxMatrix<S>> {
    let base = a_rect(n, a, t)?;
    let subset = normalise_subset(n, subset)?;
    if subset.len() != a {
        return Err(QbggError::InvalidParameter(format!(
            "subset {subset:?} must have a = {a} elements"
        )));
    }
    let sigma = subset_sigma(n, &subset)?;
    let b = b_subset(n, &subset)?;
    let conj = base.matrix().conjugate(&b)?;
    let source = base.space().clone();
    let subst = match transform {
        SubsetTransform::ParticleHole => {
            let pairs: Vec<usize> = source
                .labels()
                .iter()
                .enumerate()
                .filter(|(_, l)| {
                    let (i, j) = parse_pair(l);
                    sigma[j - 1] < sigma[i - 1]
                })
                .map(|(p, _)| p)
                .collect();
            Substitution::particle_hole(&source, &pairs)?
        }
        SubsetTransform::Relabel => {
            let target = a_subset_space(n, &subset)?;
            let mut builder = Substitution::builder(&source, &target)?;
            for l in source.labels() {
                let (i, j) = parse_pair(l);
                let (si, sj) = (sigma[i - 1], sigma[j - 1]);
                let tl = pair_label(si, sj);
                let cre = NormalPoly::cre(&target, &tl)?;
                let ann = NormalPoly::ann(&target, &tl)?;
                builder = if sj < si {
                    builder.creation(l, ann)?.annihilation(l, -&cre)?
                } else {
                    builder.creation(l, cre)?.annihilation(l, ann)?
                };
            }
            builder.build()?
        }
    };
    let m = conj.substitute(&subst)?;
    let label = subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    let lax = LaxMatrix::new(*base.alg(), "A-rect-conjugated", m)?
        .with_param("n", n)
        .with_param("a", a)
        .with_param("I", format!("{{{label}}}"));
    check_highest_weight(&lax)?;
    Ok(lax)
}

fn parse_pair(label: &str) -> (usize, usize) {
    let mut it = label.split(',').map(|s| s.parse::<usize>().expect("numeric pair label"));
    (it.next().expect("pair label"), it.next().expect("pair label"))
}

/// Both sides of a Lax-level factorisation, plus the gauge matrix `G`.
#[derive(Debug, Clone)]
pub struct FactorisationSides<S> {
    /// Product of the two degenerate Lax matrices at shifted arguments.
    pub lhs: OpMatrix<S>,
    /// The substituted product `S(𝓛(x) G)`.
    pub rhs: OpMatrix<S>,
    /// The gauge matrix `G` before substitution.
    pub gauge: OpMatrix<S>,
}

/// Both sides of `L_{{1..a}}(x + t) L_{{a+1..n}}(x − a) = S(𝓛_a(x) G)` over all
/// `2a(n−a)` pairs, with `G = [[I, Ā₂], [0, I]]` and `S: A₁ ↦ A₁ − A₂`, `Ā₂ ↦ Ā₂ + Ā₁`
/// (`Ā₁ = (ā_{i,j})`, `A₁ = (a_{j,i})`, `Ā₂ = (ā_{j,i})`, `A₂ = (a_{i,j})`, `i ≤ a < j`).
pub fn a_factorisation_sides<S: Scalar>(n: usize, a: usize, t: &S) -> Result<FactorisationSides<S>> {
    require_a(n)?;
    check_rect(n, a)?;
    let first = a_rect_space(n, a)?;
    let second = a_subset_space(n, &(a + 1..=n).collect::<Vec<_>>())?;
    let space = OscSpace::new(first.labels().iter().chain(second.labels()).cloned())?;
    let g = Gens::<S>::new(&space);
    let (abar1, a1) = a_rect_blocks(&g, n, a);
    let abar2 = g.consts(a, n - a, |i, j| g.abar(a + j + 1, i + 1));
    let a2 = g.consts(n - a, a, |j, i| g.a(i + 1, a + j + 1));
    let lhs = degenerate_shape(&g, &abar1, &a1, true)?
        .shift(t)
        .mul(&degenerate_shape(&g, &abar2, &a2, false)?.shift(&int_s(-(a as i64))));
    let beta = t.add(&int_s(a as i64));
    let big = rect_shape(&g, &abar1, &a1, t, &beta, &int_s(-(a as i64)))?;
    let gauge = OpMatrix::blocks(&[vec![g.id(a), abar2], vec![g.zeros(n - a, a), g.id(n - a)]])?;
    let mut builder = Substitution::builder(&space, &space)?;
    for i in 1..=a {
        for j in a + 1..=n {
            let l1 = pair_label(i, j);
            let l2 = pair_label(j, i);
            builder = builder
                .annihilation(&l1, &NormalPoly::ann(&space, &l1)? - &NormalPoly::ann(&space, &l2)?)?
                .creation(&l2, &NormalPoly::cre(&space, &l2)? + &NormalPoly::cre(&space, &l1)?)?;
        }
    }
    let rhs = big.mul(&gauge).substitute(&builder.build()?)?;
    Ok(FactorisationSides { lhs, rhs, gauge })
}

// ---------------------------------------------------------------------------
// Types C and D
// ---------------------------------------------------------------------------

fn require_cd(alg: AlgebraType) -> Result<usize> {
    alg.validate()?;
    match alg {
        AlgebraType::C(r) | AlgebraType::D(r) => Ok(r),
        _ => Err(QbggError::InvalidParameter(format!("{alg} is not of type C or D"))),
    }
}

/// Pairs `(i, j)` (1-based, `i ≤ j ≤ r` for C, `i < j ≤ r` for D) of the
/// nondegenerate symplectic / even-orthogonal families.
fn cd_pairs(alg: &AlgebraType) -> Vec<(usize, usize)> {
    let r = alg.rank();
    let strict = matches!(alg, AlgebraType::D(_));
    let mut out = Vec::new();
    for i in 1..=r {
        for j in i..=r {
            if !(strict && i == j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Labels `"i,j'"` of the `+` pairs `(a_{j',i}, ā_{i,j'})`.
pub fn cd_plus_space(alg: &AlgebraType) -> Result<Arc<OscSpace>> {
    require_cd(*alg)?;
    let k = alg.dim_k();
    OscSpace::new(cd_pairs(alg).into_iter().map(|(i, j)| pair_label(i, primed(k, j))))
}

/// Labels `"j',i"` of the `−` pairs `(a_{i,j'}, ā_{j',i})`.
pub fn cd_minus_space(alg: &AlgebraType) -> Result<Arc<OscSpace>> {
    require_cd(*alg)?;
    let k = alg.dim_k();
    OscSpace::new(cd_pairs(alg).into_iter().map(|(i, j)| pair_label(primed(k, j), i)))
}

/// Union of the `+` and `−` pair sets.
pub fn cd_combined_space(alg: &AlgebraType) -> Result<Arc<OscSpace>> {
    let plus = cd_plus_space(alg)?;
    let minus = cd_minus_space(alg)?;
    OscSpace::new(plus.labels().iter().chain(minus.labels()).cloned())
}

/// The `r × r` blocks `(Ā, A)` of the `+` pairs. Column `c` of `Ā` belongs to
/// the K-index `r + 1 + c` (0-based `c`), i.e. to `k'` with `k = r − c`.
///
/// C: `Ā_{ik'} = c_{ik} ā_{min,max'}`, `A_{k'i} = a_{max',min}`, `c_{ik} = 2` if `i = k`.
/// D: `Ā_{ik'} = ā_{i,k'}` (`i<k`), `−ā_{k,i'}` (`k<i`), zero on the diagonal; `A` likewise.
fn cd_plus_blocks<S: Scalar>(g: &Gens<S>, alg: &AlgebraType) -> (OpMatrix<S>, OpMatrix<S>) {
    let r = alg.rank();
    let kk = alg.dim_k();
    let p = |x: usize| primed(kk, x);
    let col_k = |c: usize| r - c;
    let symplectic = matches!(alg, AlgebraType::C(_));
    let abar = g.consts(r, r, |i, c| {
        let (i, k) = (i + 1, col_k(c));
        if symplectic {
            let (lo, hi) = (i.min(k), i.max(k));
            let e = g.abar(lo, p(hi));
            if i == k {
                e.scale(&int_s(2))
            } else {
                e
            }
        } else if i < k {
            g.abar(i, p(k))
        } else if k < i {
            -&g.abar(k, p(i))
        } else {
            g.zero()
        }
    });
    let amat = g.consts(r, r, |c, i| {
        let (i, k) = (i + 1, col_k(c));
        if symplectic {
            let (lo, hi) = (i.min(k), i.max(k));
            g.a(p(hi), lo)
        } else if i < k {
            g.a(p(k), i)
        } else if k < i {
            -&g.a(p(i), k)
        } else {
            g.zero()
        }
    });
    (abar, amat)
}

/// The blocks `(Ā₂, A₂)` of the `−` pairs.
///
/// C: `Ā₂_{ik'} = ā_{max',min}`, `A₂_{k'i} = c_{ik} a_{min,max'}`.
/// D: `Ā₂_{ik'} = ā_{k',i}` (`i<k`), `−ā_{i',k}` (`k<i`); `A₂_{k'i} = a_{i,k'}` (`i<k`), `−a_{k,i'}` (`k<i`).
fn cd_minus_blocks<S: Scalar>(g: &Gens<S>, alg: &AlgebraType) -> (OpMatrix<S>, OpMatrix<S>) {
    let r = alg.rank();
    let kk = alg.dim_k();
    let p = |x: usize| primed(kk, x);
    let col_k = |c: usize| r - c;
    let symplectic = matches!(alg, AlgebraType::C(_));
    let abar = g.consts(r, r, |i, c| {
        let (i, k) = (i + 1, col_k(c));
        if symplectic {
            let (lo, hi) = (i.min(k), i.max(k));
            g.abar(p(hi), lo)
        } else if i < k {
            g.abar(p(k), i)
        } else if k < i {
            -&g.abar(p(i), k)
        } else {
            g.zero()
        }
    });
    let amat = g.consts(r, r, |c, i| {
        let (i, k) = (i + 1, col_k(c));
        if symplectic {
            let (lo, hi) = (i.min(k), i.max(k));
            let e = g.a(lo, p(hi));
            if i == k {
                e.scale(&int_s(2))
            } else {
                e
            }
        } else if i < k {
            g.a(i, p(k))
        } else if k < i {
            -&g.a(k, p(i))
        } else {
            g.zero()
        }
    });
    (abar, amat)
}

/// The shift `s` in `(x − t − s)` of the lower-right block: `r + 1` (C), `r − 1` (D).
pub fn cd_shift(alg: &AlgebraType) -> i64 {
    match alg {
        AlgebraType::C(r) => *r as i64 + 1,
        AlgebraType::D(r) => *r as i64 - 1,
        _ => 0,
    }
}

fn cd_nondegenerate_on<S: Scalar>(g: &Gens<S>, alg: &AlgebraType, t: &S, abar: &OpMatrix<S>, a: &OpMatrix<S>) -> Result<OpMatrix<S>> {
    let s = int_s::<S>(cd_shift(alg));
    let beta = t.add(t).add(&s);
    let gamma = t.neg().sub(&s);
    rect_shape(g, abar, a, t, &beta, &gamma)
}

/// The nondegenerate Lax matrix of `sp_{2r}` / `so_{2r}`:
/// `[[(x+t) − ĀA, −Ā(2t + s − AĀ)], [−A, (x − t − s) + AĀ]]`, `s` = [`cd_shift`].
pub fn cd_nondegenerate<S: Scalar>(alg: &AlgebraType, t: &S) -> Result<LaxMatrix<S>> {
    let r = require_cd(*alg)?;
    let space = cd_plus_space(alg)?;
    let g = Gens::<S>::new(&space);
    let (abar, a) = cd_plus_blocks(&g, alg);
    let m = cd_nondegenerate_on(&g, alg, t, &abar, &a)?;
    Ok(LaxMatrix::new(*alg, format!("{}-nondegenerate", letter(alg)), m)?.with_param("r", r))
}

fn letter(alg: &AlgebraType) -> &'static str {
    match alg {
        AlgebraType::A(_) => "A",
        AlgebraType::B(_) => "B",
        AlgebraType::C(_) => "C",
        AlgebraType::D(_) => "D",
    }
}

/// The degenerate Lax matrices `L_±` of types C and D:
/// `L_+ = [[x − Ā₁A₁, Ā₁], [−A₁, I]]`, `L_− = [[I, Ā₂], [A₂, x + A₂Ā₂]]`.
pub fn cd_degenerate<S: Scalar>(alg: &AlgebraType, plus: bool) -> Result<LaxMatrix<S>> {
    let r = require_cd(*alg)?;
    let space = if plus { cd_plus_space(alg)? } else { cd_minus_space(alg)? };
    let g = Gens::<S>::new(&space);
    let (abar, a) = if plus { cd_plus_blocks(&g, alg) } else { cd_minus_blocks(&g, alg) };
    let m = degenerate_shape(&g, &abar, &a, plus)?;
    let sign = if plus { "+" } else { "-" };
    Ok(LaxMatrix::new(*alg, format!("{}-degenerate", letter(alg)), m)?
        .with_param("r", r)
        .with_param("sign", sign))
}

/// `B_i`: `e_{ii'} − e_{i'i}` (C) or `e_{ii'} + e_{i'i}` (D) on the `(i, i')` plane,
/// identity elsewhere. `B_μ = ∏_{μ_i = −1} B_i`.
pub fn b_mu(alg: &AlgebraType, mu: &[i8]) -> Result<SignedPermMatrix> {
    let r = require_cd(*alg)?;
    if mu.len() != r || mu.iter().any(|&m| m != 1 && m != -1) {
        return Err(QbggError::InvalidParameter(format!(
            "sign vector must have {r} entries ±1"
        )));
    }
    let k = alg.dim_k();
    let mut out = SignedPermMatrix::identity(k);
    for (i, &m) in mu.iter().enumerate() {
        if m == -1 {
            let ip = k - 1 - i;
            let mut image: Vec<usize> = (0..k).collect();
            let mut signs = vec![1i8; k];
            image[i] = ip;
            image[ip] = i;
            if matches!(alg, AlgebraType::C(_)) {
                signs[i] = -1;
            }
            out = out.compose(&SignedPermMatrix::new(image, signs)?);
        }
    }
    Ok(out)
}

/// Nondegenerate Lax matrix conjugated by `B_μ`, followed by particle–hole on
/// the pairs `(i, j')` whose smaller index has `μ_i = −1`.
pub fn cd_mu<S: Scalar>(alg: &AlgebraType, t: &S, mu: &[i8]) -> Result<LaxMatrix<S>> {
    let base = cd_nondegenerate(alg, t)?;
    let b = b_mu(alg, mu)?;
    let space = base.space().clone();
    let pairs: Vec<usize> = cd_pairs(alg)
        .iter()
        .enumerate()
        .filter(|(_, (i, _))| mu[i - 1] == -1)
        .map(|(p, _)| p)
        .collect();
    let ph = Substitution::particle_hole(&space, &pairs)?;
    let base = LaxMatrix::new(*alg, format!("{}-mu", letter(alg)), base.matrix().clone())?
        .with_param("r", alg.rank())
        .with_param("mu", sign_string(mu));
    conjugate_and_ph(&base, &b, &ph)
}

/// `"+-+"`-style rendering of a sign vector.
pub fn sign_string(mu: &[i8]) -> String {
    mu.iter().map(|&m| if m < 0 { '-' } else { '+' }).collect()
}

/// The degenerate `L_−` obtained from `L_+` by conjugation with `B_{(−…−)}` and
/// the total particle–hole map `ā_{i,j'} ↦ −a_{i,j'}`, `a_{j',i} ↦ ā_{j',i}`
/// onto the `−` pairs.
pub fn cd_minus_via_symmetry<S: Scalar>(alg: &AlgebraType) -> Result<LaxMatrix<S>> {
    let plus = cd_degenerate::<S>(alg, true)?;
    let r = alg.rank();
    let k = alg.dim_k();
    let b = b_mu(alg, &vec![-1; r])?;
    let source = plus.space().clone();
    let target = cd_minus_space(alg)?;
    let mut builder = Substitution::builder(&source, &target)?;
    for (i, j) in cd_pairs(alg) {
        let label = pair_label(i, primed(k, j));
        let partner = pair_label(primed(k, j), i);
        builder = builder
            .creation(&label, -&NormalPoly::ann(&target, &partner)?)?
            .annihilation(&label, NormalPoly::cre(&target, &partner)?)?;
    }
    let m = plus.matrix().conjugate(&b)?.substitute(&builder.build()?)?;
    Ok(LaxMatrix::new(*alg, format!("{}-degenerate", letter(alg)), m)?
        .with_param("r", r)
        .with_param("sign", "-"))
}

/// Both sides of the linear factorisation `L_+(x + t) L_−(x − t − s) = S(𝓛(x) G)`
/// over the combined pair space, where `G = [[I, Ā₂], [0, I]]` and `S` is the
/// substitution `a_{j',i} ↦ a_{j',i} − c a_{i,j'}`, `ā_{j',i} ↦ ā_{j',i} + c ā_{i,j'}`
/// (`c = 2` on the symplectic diagonal, `1` otherwise).
pub fn cd_factorisation_sides<S: Scalar>(alg: &AlgebraType, t: &S) -> Result<FactorisationSides<S>> {
    let r = require_cd(*alg)?;
    let kk = alg.dim_k();
    let space = cd_combined_space(alg)?;
    let g = Gens::<S>::new(&space);
    let (abar1, a1) = cd_plus_blocks(&g, alg);
    let (abar2, a2) = cd_minus_blocks(&g, alg);
    let lp = degenerate_shape(&g, &abar1, &a1, true)?.shift(t);
    let lm = degenerate_shape(&g, &abar2, &a2, false)?.shift(&t.neg().sub(&int_s(cd_shift(alg))));
    let lhs = lp.mul(&lm);
    let big = cd_nondegenerate_on(&g, alg, t, &abar1, &a1)?;
    let gauge = OpMatrix::blocks(&[vec![g.id(r), abar2], vec![g.zeros(r, r), g.id(r)]])?;
    let mut builder = Substitution::builder(&space, &space)?;
    let symplectic = matches!(alg, AlgebraType::C(_));
    for (i, j) in cd_pairs(alg) {
        let c = if symplectic && i == j { 2 } else { 1 };
        let plus = pair_label(i, primed(kk, j));
        let minus = pair_label(primed(kk, j), i);
        let a_plus = NormalPoly::ann(&space, &plus)?;
        let a_minus = NormalPoly::ann(&space, &minus)?;
        let c_plus = NormalPoly::cre(&space, &plus)?;
        let c_minus = NormalPoly::cre(&space, &minus)?;
        builder = builder
            .annihilation(&plus, &a_plus - &a_minus.scale(&int_s(c)))?
            .creation(&minus, &c_minus + &c_plus.scale(&int_s(c)))?;
    }
    let rhs = big.mul(&gauge).substitute(&builder.build()?)?;
    Ok(FactorisationSides { lhs, rhs, gauge })
}

// ---------------------------------------------------------------------------
// Types B and D: quadratic family
// ---------------------------------------------------------------------------

fn require_bd(k: usize) -> Result<AlgebraType> {
    let alg = if k.is_multiple_of(2) {
        AlgebraType::D(k / 2)
    } else {
        AlgebraType::B((k - 1) / 2)
    };
    alg.validate()?;
    Ok(alg)
}

/// The orthogonal algebra acting on `ℂ^K`.
pub fn orthogonal_of_dim(k: usize) -> Result<AlgebraType> {
    require_bd(k)
}

/// Pairs `"2" … "K−1"` of the quadratic orthogonal family.
pub fn bd_space(k: usize) -> Result<Arc<OscSpace>> {
    OscSpace::new((2..k).map(|i| i.to_string()))
}

/// Row vector `℘`, column vector `w` and anti-diagonal `J` of size `K − 2`.
struct BdVectors<S> {
    wp: OpMatrix<S>,
    w: OpMatrix<S>,
    j: OpMatrix<S>,
}

fn bd_vectors<S: Scalar>(g: &Gens<S>, k: usize, cre: impl Fn(usize) -> NormalPoly<S>, ann: impl Fn(usize) -> NormalPoly<S>) -> BdVectors<S> {
    let m = k - 2;
    BdVectors {
        wp: g.consts(1, m, |_, c| cre(c + 2)),
        w: g.consts(m, 1, |r, _| ann(r + 2)),
        j: g.consts(m, m, |r, c| if r + c + 1 == m { g.int(1) } else { g.zero() }),
    }
}

/// `𝔏_{x₁,x₂}(x) = U₁ D U₂` with
/// `U₁ = [[1, ℘, −½℘J℘ᵀ], [0, I, −J℘ᵀ], [0, 0, 1]]`,
/// `D = [[(x−x₁)(x−x₁−K/2+2), 0, 0], [−w(x−x₁), (x−x₁)(x−x₂), 0], [−½wᵀJw, wᵀJ(x−x₂), (x−x₂)(x−x₂−K/2+2)]]`,
/// `U₂ = [[1, −℘, −½℘J℘ᵀ], [0, I, J℘ᵀ], [0, 0, 1]]`.
fn bd_factorised<S: Scalar>(g: &Gens<S>, k: usize, v: &BdVectors<S>, x1: &S, x2: &S) -> Result<OpMatrix<S>> {
    let m = k - 2;
    let h = half::<S>();
    let space = &g.space;
    let wp_t = v.wp.transpose();
    let w_t = v.w.transpose();
    let quad_c = v.wp.mul(&v.j).mul(&wp_t).scale(&h); // ½℘J℘ᵀ
    let quad_a = w_t.mul(&v.j).mul(&v.w).scale(&h); // ½wᵀJw
    let j_wp_t = v.j.mul(&wp_t);
    let wt_j = w_t.mul(&v.j);
    let one = g.id(1);
    let u1 = OpMatrix::blocks(&[
        vec![one.clone(), v.wp.clone(), quad_c.neg()],
        vec![g.zeros(m, 1), g.id(m), j_wp_t.neg()],
        vec![g.zeros(1, 1), g.zeros(1, m), one.clone()],
    ])?;
    let u2 = OpMatrix::blocks(&[
        vec![one.clone(), v.wp.neg(), quad_c.neg()],
        vec![g.zeros(m, 1), g.id(m), j_wp_t.clone()],
        vec![g.zeros(1, 1), g.zeros(1, m), one],
    ])?;
    let lin = |c: &S| OpPoly::x_plus(space, c.neg());
    let x_x1 = lin(x1);
    let x_x2 = lin(x2);
    let kh = S::from_rational(&crate::coeff::rat(k as i64, 2)).sub(&int_s(2));
    let corner1 = x_x1.mul(&lin(&x1.add(&kh)));
    let corner2 = x_x2.mul(&lin(&x2.add(&kh)));
    let mid = x_x1.mul(&x_x2);
    let scalar_block = |p: &OpPoly<S>, n: usize| {
        OpMatrix::from_fn(space, n, n, |r, c| if r == c { p.clone() } else { OpPoly::zero(space) })
    };
    let d = OpMatrix::blocks(&[
        vec![scalar_block(&corner1, 1), g.zeros(1, m), g.zeros(1, 1)],
        vec![v.w.neg().mul(&scalar_block(&x_x1, 1)), scalar_block(&mid, m), g.zeros(m, 1)],
        vec![quad_a.neg(), wt_j.mul(&scalar_block(&x_x2, m)), scalar_block(&corner2, 1)],
    ])?;
    Ok(u1.mul(&d).mul(&u2))
}

/// The quadratic orthogonal Lax matrix `L_{x₁₂}(x) = 𝔏_{x₁₂,0}(x + (x₁₂ − 1)/2)`.
pub fn bd_quadratic<S: Scalar>(k: usize, x12: &S) -> Result<LaxMatrix<S>> {
    let alg = require_bd(k)?;
    let space = bd_space(k)?;
    let g = Gens::<S>::new(&space);
    let v = bd_vectors(&g, k, |i| g.abar1(i), |i| g.a1(i));
    let m = bd_quadratic_on(&g, k, &v, x12)?;
    Ok(LaxMatrix::new(alg, "BD-quadratic", m)?.with_param("K", k))
}

fn bd_quadratic_on<S: Scalar>(g: &Gens<S>, k: usize, v: &BdVectors<S>, x12: &S) -> Result<OpMatrix<S>> {
    let c = x12.sub(&S::one()).mul(&half());
    Ok(bd_factorised(g, k, v, x12, &S::zero())?.shift(&c))
}

/// `x₁₂ = 1 − t − K/2`, the value giving the nondegenerate orthogonal family.
pub fn bd_x12_for_t<S: Scalar>(k: usize, t: &S) -> S {
    S::one().sub(t).sub(&S::from_rational(&crate::coeff::rat(k as i64, 2)))
}

/// The nondegenerate orthogonal Lax matrix at parameter `t`.
pub fn bd_nondegenerate<S: Scalar>(k: usize, t: &S) -> Result<LaxMatrix<S>> {
    let lax = bd_quadratic(k, &bd_x12_for_t(k, t))?;
    Ok(LaxMatrix::new(*lax.alg(), "BD-nondegenerate", lax.matrix().clone())?.with_param("K", k))
}

/// The linear coefficient `M` of the quadratic Lax matrix written out:
/// `M = [[−x₁₂−K/2+1−℘w, (x₁₂+K/2−2+℘w)℘ − ½℘J℘ᵀwᵀJ, 0],
///       [−w, w℘ − J℘ᵀwᵀJ − I, −(x₁₂+K/2−2+℘w)J℘ᵀ + ½℘J℘ᵀ w],
///       [0, wᵀJ, x₁₂+K/2−1+℘w]]`.
pub fn bd_linear_coefficient<S: Scalar>(k: usize, x12: &S) -> Result<OpMatrix<S>> {
    require_bd(k)?;
    let m = k - 2;
    let space = bd_space(k)?;
    let g = Gens::<S>::new(&space);
    let v = bd_vectors(&g, k, |i| g.abar1(i), |i| g.a1(i));
    let h = half::<S>();
    let kh = S::from_rational(&crate::coeff::rat(k as i64, 2));
    let wp_t = v.wp.transpose();
    let w_t = v.w.transpose();
    let pw = v.wp.mul(&v.w); // 1×1: ℘w
    let quad_c = v.wp.mul(&v.j).mul(&wp_t).scale(&h);
    let j_wp_t = v.j.mul(&wp_t);
    let wt_j = w_t.mul(&v.j);
    let s1 = |c: S| g.scalar_id(1, &c);
    let shifted = s1(x12.add(&kh).sub(&int_s(2))).add(&pw); // x₁₂+K/2−2+℘w
    let m11 = s1(x12.neg().sub(&kh).add(&S::one())).sub(&pw);
    let m12 = shifted.mul(&v.wp).sub(&quad_c.mul(&wt_j));
    let m22 = v.w.mul(&v.wp).sub(&j_wp_t.mul(&wt_j)).sub(&g.id(m));
    let m23 = m23_entries(&j_wp_t, &shifted, &quad_c, &v.w);
    let m33 = s1(x12.add(&kh).sub(&S::one())).add(&pw);
    OpMatrix::blocks(&[
        vec![m11, m12, g.zeros(1, 1)],
        vec![v.w.neg(), m22, m23],
        vec![g.zeros(1, 1), wt_j, m33],
    ])
}

/// `−(x₁₂+K/2−2+℘w) J℘ᵀ + ½℘J℘ᵀ w`, with the scalar operator factors on the left.
fn m23_entries<S: Scalar>(j_wp_t: &OpMatrix<S>, shifted: &OpMatrix<S>, quad_c: &OpMatrix<S>, w: &OpMatrix<S>) -> OpMatrix<S> {
    // `shifted` and `quad_c` are 1×1; multiply each column entry on the left.
    let s = shifted.get(0, 0).clone();
    let q = quad_c.get(0, 0).clone();
    OpMatrix::from_fn(j_wp_t.space(), j_wp_t.rows(), 1, |r, _| {
        q.mul(w.get(r, 0)).sub(&s.mul(j_wp_t.get(r, 0)))
    })
}

/// `B̂_k` (1-based `k ∈ {1..r} ∪ {r'..1'}`): the identity for `k = 1`; the
/// transpositions `1 ↔ k`, `1' ↔ k'` for `1 < k ≤ r`; those transpositions
/// combined with `j ↔ j'` on all other indices for `r' ≤ k < 1'`; and the
/// anti-diagonal `J_K` for `k = 1'`.
pub fn b_hat(alg: &AlgebraType, k: usize) -> Result<SignedPermMatrix> {
    alg.validate()?;
    let (r, kk) = match alg {
        AlgebraType::B(r) | AlgebraType::D(r) => (*r, alg.dim_k()),
        _ => return Err(QbggError::InvalidParameter(format!("{alg} is not orthogonal"))),
    };
    let lower = k >= 1 && k <= r;
    let upper = k >= primed(kk, r) && k <= kk;
    if !(lower || upper) {
        return Err(QbggError::InvalidParameter(format!(
            "index {k} is not in 1..={r} or {}..={kk}",
            primed(kk, r)
        )));
    }
    let mut image: Vec<usize> = (1..=kk).collect();
    if upper {
        for (j, img) in image.iter_mut().enumerate() {
            *img = primed(kk, j + 1);
        }
    }
    if k != 1 && k != kk {
        let (a, b) = (1, k);
        let (ap, bp) = (kk, primed(kk, k));
        image[a - 1] = b;
        image[b - 1] = a;
        image[ap - 1] = bp;
        image[bp - 1] = ap;
    }
    SignedPermMatrix::new(image.iter().map(|i| i - 1).collect(), vec![1; kk])
}

/// `𝓛_k = B̂_k L B̂_k^{-1}` followed by particle–hole on the pairs `j` with
/// `1 < j ≤ k` (`k ≤ r`) or `k' < j < 1'` (`k ≥ r'`).
pub fn bd_k<S: Scalar>(kk: usize, t: &S, k: usize) -> Result<LaxMatrix<S>> {
    let base = bd_nondegenerate(kk, t)?;
    let alg = *base.alg();
    let b = b_hat(&alg, k)?;
    let r = alg.rank();
    let space = base.space().clone();
    let pairs: Vec<usize> = (2..kk)
        .filter(|&j| if k <= r { j <= k } else { j > primed(kk, k) })
        .map(|j| j - 2)
        .collect();
    let ph = Substitution::particle_hole(&space, &pairs)?;
    let base = LaxMatrix::new(alg, "BD-k", base.matrix().clone())?.with_param("K", kk).with_param("k", k);
    conjugate_and_ph(&base, &b, &ph)
}

/// Labels `"1,ℓ"` (pairs `(a_{ℓ,1}, ā_{1,ℓ})`) or `"ℓ,1"` (pairs `(a_{1,ℓ}, ā_{ℓ,1})`), `1 < ℓ < K`.
pub fn bd_degenerate_space(k: usize, first: bool) -> Result<Arc<OscSpace>> {
    OscSpace::new((2..k).map(|l| if first { pair_label(1, l) } else { pair_label(l, 1) }))
}

/// Combined space of both degenerate orthogonal pair sets.
pub fn bd_degenerate_combined_space(k: usize) -> Result<Arc<OscSpace>> {
    let a = bd_degenerate_space(k, true)?;
    let b = bd_degenerate_space(k, false)?;
    OscSpace::new(a.labels().iter().chain(b.labels()).cloned())
}

fn bd_first_vectors<S: Scalar>(g: &Gens<S>, k: usize) -> BdVectors<S> {
    bd_vectors(g, k, |l| g.abar(1, l), |l| g.a(l, 1))
}

fn bd_last_vectors<S: Scalar>(g: &Gens<S>, k: usize) -> BdVectors<S> {
    bd_vectors(g, k, |l| g.abar(l, 1), |l| g.a(1, l))
}

fn bd_first_on<S: Scalar>(g: &Gens<S>, k: usize, v: &BdVectors<S>) -> Result<OpMatrix<S>> {
    let m = k - 2;
    let space = &g.space;
    let h = half::<S>();
    let x = OpMatrix::x_identity(space, 1);
    let xm = OpMatrix::x_identity(space, m);
    let wp_t = v.wp.transpose();
    let w_t = v.w.transpose();
    let quad_c = v.wp.mul(&v.j).mul(&wp_t).scale(&h); // ½℘₁J℘₁ᵀ
    let quad_a = w_t.mul(&v.j).mul(&v.w).scale(&h); // ½w₁ᵀJw₁
    let j_wp_t = v.j.mul(&wp_t);
    let wt_j = w_t.mul(&v.j);
    let kh = S::from_rational(&crate::coeff::rat(k as i64, 2));
    let lin = g.scalar_id(1, &int_s::<S>(2).sub(&kh)).sub(&v.wp.mul(&v.w));
    let e11 = x.mul(&x).add(&x.mul(&lin)).add(&quad_c.mul(&quad_a));
    let e12 = x.mul(&v.wp).sub(&quad_c.mul(&wt_j));
    let e21 = v.w.mul(&x).neg().add(&j_wp_t.mul(&quad_a));
    let e22 = xm.sub(&j_wp_t.mul(&wt_j));
    OpMatrix::blocks(&[
        vec![e11, e12, quad_c.neg()],
        vec![e21, e22, j_wp_t.neg()],
        vec![quad_a.neg(), wt_j, g.id(1)],
    ])
}

fn bd_last_on<S: Scalar>(g: &Gens<S>, k: usize, v: &BdVectors<S>) -> Result<OpMatrix<S>> {
    let m = k - 2;
    let space = &g.space;
    let h = half::<S>();
    let y = OpMatrix::x_identity(space, 1);
    let ym = OpMatrix::x_identity(space, m);
    let wp_t = v.wp.transpose();
    let w_t = v.w.transpose();
    let quad_c = v.wp.mul(&v.j).mul(&wp_t).scale(&h); // ½℘₂J℘₂ᵀ
    let quad_a = w_t.mul(&v.j).mul(&v.w).scale(&h); // ½w₂ᵀJw₂
    let j_wp_t = v.j.mul(&wp_t);
    let wt_j = w_t.mul(&v.j);
    let kh = S::from_rational(&crate::coeff::rat(k as i64, 2));
    let w_p = v.w.mul(&v.wp);
    let lin = g.scalar_id(1, &int_s::<S>(2).sub(&kh)).add(&w_t.mul(&wp_t));
    let e22 = ym.add(&w_p);
    let e23 = ym.mul(&j_wp_t).add(&v.w.mul(&quad_c)).neg();
    let e32 = y.mul(&wt_j).add(&quad_a.mul(&v.wp)).neg();
    let e33 = y.mul(&y).add(&y.mul(&lin)).add(&quad_a.mul(&quad_c));
    OpMatrix::blocks(&[
        vec![g.id(1), v.wp.clone(), quad_c.neg()],
        vec![v.w.clone(), e22, e23],
        vec![quad_a.neg(), e32, e33],
    ])
}

/// The degenerate orthogonal Lax matrices: `L_1` (pairs `"1,ℓ"`) or `L_K` (pairs `"ℓ,1"`).
pub fn bd_degenerate<S: Scalar>(k: usize, first: bool) -> Result<LaxMatrix<S>> {
    let alg = require_bd(k)?;
    let space = bd_degenerate_space(k, first)?;
    let g = Gens::<S>::new(&space);
    let m = if first {
        bd_first_on(&g, k, &bd_first_vectors(&g, k))?
    } else {
        bd_last_on(&g, k, &bd_last_vectors(&g, k))?
    };
    Ok(LaxMatrix::new(alg, "BD-degenerate", m)?
        .with_param("K", k)
        .with_param("index", if first { "1".to_string() } else { k.to_string() }))
}

/// `L_K` obtained as `J_K L_1 J_K` followed by `℘₁ ↦ −w₂ᵀ`, `w₁ ↦ ℘₂ᵀ`.
pub fn bd_last_via_symmetry<S: Scalar>(k: usize) -> Result<LaxMatrix<S>> {
    let first = bd_degenerate::<S>(k, true)?;
    let alg = *first.alg();
    let b = b_hat(&alg, k)?;
    let source = first.space().clone();
    let target = bd_degenerate_space(k, false)?;
    let mut builder = Substitution::builder(&source, &target)?;
    for l in 2..k {
        let partner = pair_label(l, 1);
        builder = builder
            .creation(&pair_label(1, l), -&NormalPoly::ann(&target, &partner)?)?
            .annihilation(&pair_label(1, l), NormalPoly::cre(&target, &partner)?)?;
    }
    let m = first.matrix().conjugate(&b)?.substitute(&builder.build()?)?;
    Ok(LaxMatrix::new(alg, "BD-degenerate", m)?
        .with_param("K", k)
        .with_param("index", k))
}

/// Both sides of `L_1(x − 1 + t/2 + K/4) L_K(x − t/2 − K/4) = S(𝓛(x) G)` over the
/// combined pair space, with `𝓛` the nondegenerate family built on `(℘₁, w₁)`,
/// `G = [[1, ℘₂, −½℘₂J℘₂ᵀ], [0, I, −J℘₂ᵀ], [0, 0, 1]]` and `S: w₁ ↦ w₁ − w₂`, `℘₂ ↦ ℘₂ + ℘₁`.
pub fn bd_factorisation_sides<S: Scalar>(k: usize, t: &S) -> Result<FactorisationSides<S>> {
    require_bd(k)?;
    let m = k - 2;
    let space = bd_degenerate_combined_space(k)?;
    let g = Gens::<S>::new(&space);
    let v1 = bd_first_vectors(&g, k);
    let v2 = bd_last_vectors(&g, k);
    let h = half::<S>();
    let kq = S::from_rational(&crate::coeff::rat(k as i64, 4));
    let th = t.mul(&h);
    let l1 = bd_first_on(&g, k, &v1)?.shift(&th.add(&kq).sub(&S::one()));
    let lk = bd_last_on(&g, k, &v2)?.shift(&th.neg().sub(&kq));
    let lhs = l1.mul(&lk);
    let big = bd_quadratic_on(&g, k, &v1, &bd_x12_for_t(k, t))?;
    let wp2_t = v2.wp.transpose();
    let gauge = OpMatrix::blocks(&[
        vec![g.id(1), v2.wp.clone(), v2.wp.mul(&v2.j).mul(&wp2_t).scale(&h).neg()],
        vec![g.zeros(m, 1), g.id(m), v2.j.mul(&wp2_t).neg()],
        vec![g.zeros(1, 1), g.zeros(1, m), g.id(1)],
    ])?;
    let mut builder = Substitution::builder(&space, &space)?;
    for l in 2..k {
        let first = pair_label(1, l);
        let last = pair_label(l, 1);
        builder = builder
            .annihilation(&first, &NormalPoly::ann(&space, &first)? - &NormalPoly::ann(&space, &last)?)?
            .creation(&last, &NormalPoly::cre(&space, &last)? + &NormalPoly::cre(&space, &first)?)?;
    }
    let rhs = big.mul(&gauge).substitute(&builder.build()?)?;
    Ok(FactorisationSides { lhs, rhs, gauge })
}

// ---------------------------------------------------------------------------
// Highest-weight data
// ---------------------------------------------------------------------------

/// `B L B^{-1}` followed by a generator automorphism, with the highest-weight
/// property of the Fock vacuum verified on the result.
pub fn conjugate_and_ph<S: Scalar>(
    lax: &LaxMatrix<S>,
    b: &SignedPermMatrix,
    ph: &Substitution<S>,
) -> Result<LaxMatrix<S>> {
    let m = lax.matrix().conjugate(b)?.substitute(ph)?;
    let out = lax.with_matrix(m);
    check_highest_weight(&out)?;
    Ok(out)
}

/// Verifies that the Fock vacuum is annihilated by every raising generator
/// `E_ij`, `i < j`.
pub fn check_highest_weight<S: Scalar>(lax: &LaxMatrix<S>) -> Result<()> {
    let k = lax.matrix().rows();
    let vacuum = FockVector::vacuum(lax.space());
    for i in 0..k {
        for j in i + 1..k {
            let e = lax.generator(i, j);
            if !apply_to_fock(&e, &vacuum)?.is_zero() {
                return Err(QbggError::NotHighestWeight(format!(
                    "E_{{{},{}}} = {e} does not annihilate the vacuum",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// The weight of the Fock vacuum: eigenvalues of `E_ii`, `i = 1..rank`.
pub fn vacuum_weight<S: Scalar>(lax: &LaxMatrix<S>) -> Result<Vec<S>> {
    let vacuum = FockVector::vacuum(lax.space());
    let zero_occ = vec![0u32; lax.space().len()];
    (0..lax.alg().rank())
        .map(|i| {
            let e = lax.generator(i, i);
            let image = apply_to_fock(&e, &vacuum)?;
            let c = image.component(&zero_occ);
            let mut rest = image.clone();
            rest.add_component(zero_occ.clone(), c.neg());
            if rest.is_zero() {
                Ok(c)
            } else {
                Err(QbggError::NotHighestWeight(format!(
                    "vacuum is not an eigenvector of E_{{{},{}}}",
                    i + 1,
                    i + 1
                )))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use num::BigRational;

    type Q = BigRational;

    #[test]
    fn verma_two_by_two_matches_hand_computation() {
        let l = a_verma::<Q>(2, &[int(3), int(5)]).unwrap();
        let s = l.space().clone();
        let g = Gens::<Q>::new(&s);
        // L_11 = x + λ₁ − ā₁₂a₂₁, L_22 = x + λ₂ + ā₁₂a₂₁.
        let n = &g.abar(1, 2) * &g.a(2, 1);
        assert_eq!(l.matrix().get(0, 0).coeff(0), &g.int(3) - &n);
        assert_eq!(l.matrix().get(1, 1).coeff(0), &g.int(5) + &n);
        assert_eq!(l.matrix().get(1, 0).coeff(0), -&g.a(2, 1));
        assert_eq!(vacuum_weight(&l).unwrap(), vec![int(3), int(5)]);
    }

    #[test]
    fn partonic_agrees_with_product_formula() {
        for n in 2..=4 {
            for i in 1..=n {
                let a = a_partonic::<Q>(n, i).unwrap();
                let b = a_degenerate::<Q>(n, &[i]).unwrap();
                assert_eq!(a.matrix(), b.matrix(), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn rect_vacuum_weight() {
        let t = rat(2, 7);
        let l = a_rect::<Q>(3, 1, &t).unwrap();
        check_highest_weight(&l).unwrap();
        assert_eq!(vacuum_weight(&l).unwrap(), vec![t.clone(), int(0), int(0)]);
    }

    #[test]
    fn symplectic_rank_one() {
        let t = rat(1, 3);
        let l = cd_nondegenerate::<Q>(&AlgebraType::C(1), &t).unwrap();
        let g = Gens::<Q>::new(l.space());
        let n = &g.abar(1, 2) * &g.a(2, 1);
        assert_eq!(l.matrix().get(0, 0).coeff(0), &g.int(0).add_scalar(&t) - &n.scale(&int(2)));
        assert!(l.is_monic());
    }

    #[test]
    fn degenerate_minus_via_symmetry() {
        for alg in [AlgebraType::C(1), AlgebraType::C(2), AlgebraType::D(2), AlgebraType::D(3)] {
            let direct = cd_degenerate::<Q>(&alg, false).unwrap();
            let via = cd_minus_via_symmetry::<Q>(&alg).unwrap();
            assert_eq!(direct.matrix(), via.matrix(), "{alg}");
        }
    }

    #[test]
    fn quadratic_linear_term_matches_closed_form() {
        for k in [4usize, 5, 6] {
            let x12 = rat(3, 5);
            let l = bd_quadratic::<Q>(k, &x12).unwrap();
            assert!(l.is_monic());
            let m = bd_linear_coefficient::<Q>(k, &x12).unwrap();
            for i in 0..k {
                for j in 0..k {
                    assert_eq!(l.matrix().get(i, j).coeff(1), m.get(i, j).coeff(0), "K={k} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn last_degenerate_via_symmetry() {
        for k in [4usize, 5] {
            let direct = bd_degenerate::<Q>(k, false).unwrap();
            let via = bd_last_via_symmetry::<Q>(k).unwrap();
            assert_eq!(direct.matrix(), via.matrix(), "K={k}");
        }
    }

    #[test]
    fn trivial_conjugation_is_identity() {
        let l = a_rect::<Q>(3, 1, &rat(1, 4)).unwrap();
        let same = conjugate_and_ph(&l, &SignedPermMatrix::identity(3), &Substitution::identity(l.space())).unwrap();
        assert_eq!(same, l);
    }

    #[test]
    fn conjugated_vacuum_weights_match_cosets() {
        use crate::weyl::{enumerate_cosets, CosetTag, ModuleCase};
        let t = rat(2, 7);
        for (n, a) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2)] {
            let alg = AlgebraType::A(n);
            for coset in enumerate_cosets(&alg, &ModuleCase::Rect { a }).unwrap() {
                let CosetTag::SubsetI(subset) = &coset.tag else { unreachable!() };
                for tr in [SubsetTransform::ParticleHole, SubsetTransform::Relabel] {
                    let l = a_rect_conjugated::<Q>(n, a, &t, subset, tr).unwrap();
                    assert_eq!(vacuum_weight(&l).unwrap(), coset.highest_weight(&t), "n={n} I={subset:?}");
                }
            }
        }
        for (alg, case) in [
            (AlgebraType::C(1), ModuleCase::Symplectic),
            (AlgebraType::C(2), ModuleCase::Symplectic),
            (AlgebraType::D(2), ModuleCase::Spinor { odd: false }),
            (AlgebraType::D(2), ModuleCase::Spinor { odd: true }),
            (AlgebraType::D(3), ModuleCase::Spinor { odd: false }),
            (AlgebraType::D(3), ModuleCase::Spinor { odd: true }),
        ] {
            for coset in enumerate_cosets(&alg, &case).unwrap() {
                let CosetTag::SignVector { mu, .. } = &coset.tag else { unreachable!() };
                let l = cd_mu::<Q>(&alg, &t, mu).unwrap();
                assert_eq!(vacuum_weight(&l).unwrap(), coset.highest_weight(&t), "{alg} mu={mu:?}");
            }
        }
        for k in [4usize, 5, 6] {
            let alg = orthogonal_of_dim(k).unwrap();
            for coset in enumerate_cosets(&alg, &ModuleCase::Vector).unwrap() {
                let CosetTag::BDIndex(idx) = coset.tag else { unreachable!() };
                let l = bd_k::<Q>(k, &t, idx).unwrap();
                assert_eq!(vacuum_weight(&l).unwrap(), coset.highest_weight(&t), "K={k} k={idx}");
            }
        }
    }

    #[test]
    fn b_hat_is_involutive() {
        for alg in [AlgebraType::B(2), AlgebraType::D(3)] {
            let kk = alg.dim_k();
            let r = alg.rank();
            for k in (1..=r).chain(kk + 1 - r..=kk) {
                let b = b_hat(&alg, k).unwrap();
                assert_eq!(b.compose(&b), SignedPermMatrix::identity(kk), "{alg} k={k}");
            }
        }
    }
}
