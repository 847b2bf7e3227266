//! Root data of the classical Lie algebras, their Weyl groups, shortest coset
//! representatives, the dot action and characters.
//!
//! Weights are written in the orthonormal basis `ε_1, …, ε_m` (`m = n` for
//! `gl_n`, `m = r` otherwise). A Weyl group element `w = (μ, σ)` is a signed
//! permutation acting by `(w v)_{σ(i)} = μ_{σ(i)} v_i`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Signed, Zero};
use serde_json::{json, Value};

use crate::coeff::{format_rational, int, rat, rational_pow, FieldScalar};
use crate::error::{QbggError, Result};

/// A weight vector in the `ε` basis.
pub type Weight = Vec<BigRational>;

/// Classical Lie algebra type with its rank parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraType {
    /// `gl_n`, `n ≥ 2`.
    A(usize),
    /// `so_{2r+1}`, `r ≥ 2`.
    B(usize),
    /// `sp_{2r}`, `r ≥ 1`.
    C(usize),
    /// `so_{2r}`, `r ≥ 2`.
    D(usize),
}

impl AlgebraType {
    /// Checks the admissible rank range.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            AlgebraType::A(n) => n >= 2,
            AlgebraType::B(r) => r >= 2,
            AlgebraType::C(r) => r >= 1,
            AlgebraType::D(r) => r >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(QbggError::InvalidParameter(format!(
                "{self} is outside the admissible range (A: n ≥ 2, B: r ≥ 2, C: r ≥ 1, D: r ≥ 2)"
            )))
        }
    }

    /// Builds a type from a letter and a size parameter; for B and D the size
    /// may be given either as rank or, with `by_dimension`, as `K`.
    pub fn from_letter(letter: &str, size: usize, by_dimension: bool) -> Result<Self> {
        let alg = match (letter.to_ascii_uppercase().as_str(), by_dimension) {
            ("A", _) => AlgebraType::A(size),
            ("C", false) => AlgebraType::C(size),
            ("C", true) if size.is_multiple_of(2) => AlgebraType::C(size / 2),
            ("B", false) => AlgebraType::B(size),
            ("B", true) if size % 2 == 1 => AlgebraType::B(size / 2),
            ("D", false) => AlgebraType::D(size),
            ("D", true) if size.is_multiple_of(2) => AlgebraType::D(size / 2),
            ("BD", true) if size % 2 == 1 => AlgebraType::B(size / 2),
            ("BD", true) => AlgebraType::D(size / 2),
            _ => {
                return Err(QbggError::InvalidParameter(format!(
                    "cannot build an algebra from {letter} with size {size}"
                )))
            }
        };
        alg.validate()?;
        Ok(alg)
    }

    /// Number of `ε` coordinates of a weight (`n` for `gl_n`, the rank otherwise).
    pub fn rank(&self) -> usize {
        match *self {
            AlgebraType::A(n) => n,
            AlgebraType::B(r) | AlgebraType::C(r) | AlgebraType::D(r) => r,
        }
    }

    /// Dimension `K` of the defining representation.
    pub fn dim_k(&self) -> usize {
        match *self {
            AlgebraType::A(n) => n,
            AlgebraType::B(r) => 2 * r + 1,
            AlgebraType::C(r) | AlgebraType::D(r) => 2 * r,
        }
    }

    /// The shift `κ` of the orthosymplectic R-matrix (`K/2 ∓ 1`); zero for type A.
    pub fn kappa(&self) -> BigRational {
        match *self {
            AlgebraType::A(_) => int(0),
            AlgebraType::B(r) => rat(2 * r as i64 - 1, 2),
            AlgebraType::C(r) => int(r as i64 + 1),
            AlgebraType::D(r) => int(r as i64 - 1),
        }
    }

    /// Positive roots in the `ε` basis, with their display names.
    pub fn positive_roots(&self) -> Vec<(Weight, String)> {
        let m = self.rank();
        let e = |coeffs: &[(usize, i64)]| -> Weight {
            let mut v = vec![int(0); m];
            for &(i, c) in coeffs {
                v[i] += int(c);
            }
            v
        };
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                out.push((e(&[(i, 1), (j, -1)]), format!("e{}-e{}", i + 1, j + 1)));
                if !matches!(self, AlgebraType::A(_)) {
                    out.push((e(&[(i, 1), (j, 1)]), format!("e{}+e{}", i + 1, j + 1)));
                }
            }
            match self {
                AlgebraType::B(_) => out.push((e(&[(i, 1)]), format!("e{}", i + 1))),
                AlgebraType::C(_) => out.push((e(&[(i, 2)]), format!("2e{}", i + 1))),
                _ => {}
            }
        }
        out
    }

    /// Simple roots `α_1, …, α_rank`.
    pub fn simple_roots(&self) -> Vec<Weight> {
        let m = self.rank();
        let mut out = Vec::new();
        for i in 0..m.saturating_sub(1) {
            let mut v = vec![int(0); m];
            v[i] = int(1);
            v[i + 1] = int(-1);
            out.push(v);
        }
        let mut last = vec![int(0); m];
        match self {
            AlgebraType::A(_) => return out,
            AlgebraType::B(_) => last[m - 1] = int(1),
            AlgebraType::C(_) => last[m - 1] = int(2),
            AlgebraType::D(_) => {
                last[m - 2] = int(1);
                last[m - 1] = int(1);
            }
        }
        out.push(last);
        out
    }

    /// Half-sum of positive roots (for `gl_n` the shifted `(n−1, …, 0)`).
    pub fn rho(&self) -> Weight {
        let m = self.rank() as i64;
        (0..m)
            .map(|i| match self {
                AlgebraType::A(_) | AlgebraType::D(_) => int(m - 1 - i),
                AlgebraType::B(_) => rat(2 * (m - i) - 1, 2),
                AlgebraType::C(_) => int(m - i),
            })
            .collect()
    }

    /// All Weyl group elements in a fixed deterministic order.
    pub fn weyl_group(&self) -> Vec<WeylElement> {
        let m = self.rank();
        let perms = permutations(m);
        let signs: Vec<Vec<i8>> = match self {
            AlgebraType::A(_) => vec![vec![1; m]],
            AlgebraType::B(_) | AlgebraType::C(_) => sign_vectors(m),
            AlgebraType::D(_) => sign_vectors(m)
                .into_iter()
                .filter(|s| s.iter().filter(|&&x| x < 0).count() % 2 == 0)
                .collect(),
        };
        let mut out = Vec::with_capacity(perms.len() * signs.len());
        for p in &perms {
            for s in &signs {
                out.push(WeylElement {
                    signs: s.clone(),
                    perm: p.clone(),
                });
            }
        }
        out
    }
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraType::A(n) => write!(f, "A(n={n})"),
            AlgebraType::B(r) => write!(f, "B(r={r})"),
            AlgebraType::C(r) => write!(f, "C(r={r})"),
            AlgebraType::D(r) => write!(f, "D(r={r})"),
        }
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for pos in 0..m {
            let mut p: Vec<usize> = rest.clone();
            p.insert(pos, m - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

fn sign_vectors(m: usize) -> Vec<Vec<i8>> {
    (0..1usize << m)
        .map(|bits| (0..m).map(|i| if bits >> (m - 1 - i) & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

/// A signed permutation `w = (μ, σ)` with `(w v)_{σ(i)} = μ_{σ(i)} v_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    /// Signs `μ_k ∈ {±1}` applied after permuting.
    pub signs: Vec<i8>,
    /// The permutation `σ` as `perm[i] = σ(i)` (0-based).
    pub perm: Vec<usize>,
}

impl WeylElement {
    /// The identity of rank `m`.
    pub fn identity(m: usize) -> Self {
        WeylElement {
            signs: vec![1; m],
            perm: (0..m).collect(),
        }
    }

    /// Action on a weight.
    pub fn apply(&self, v: &[BigRational]) -> Weight {
        let mut out = vec![int(0); v.len()];
        for (i, x) in v.iter().enumerate() {
            let k = self.perm[i];
            out[k] = if self.signs[k] < 0 { -x } else { x.clone() };
        }
        out
    }

    /// Action on integer vectors (used for exponent bookkeeping).
    pub fn apply_int(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (i, x) in v.iter().enumerate() {
            let k = self.perm[i];
            out[k] = self.signs[k] as i64 * x;
        }
        out
    }

    /// Length: the number of positive roots sent to negative roots.
    pub fn length(&self, alg: &AlgebraType) -> usize {
        alg.positive_roots()
            .iter()
            .filter(|(alpha, _)| !is_positive(&self.apply(alpha)))
            .count()
    }
}

/// A non-zero vector is positive when its first non-zero coordinate is positive.
pub fn is_positive(v: &[BigRational]) -> bool {
    v.iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_positive())
        .unwrap_or(false)
}

/// The ρ-shifted action `w · λ = w(λ + ρ) − ρ`.
pub fn dot_action(alg: &AlgebraType, w: &WeylElement, lambda: &[BigRational]) -> Result<Weight> {
    check_len(alg, lambda)?;
    let rho = alg.rho();
    let shifted: Weight = lambda.iter().zip(&rho).map(|(l, r)| l + r).collect();
    Ok(w.apply(&shifted).iter().zip(&rho).map(|(x, r)| x - r).collect())
}

fn check_len(alg: &AlgebraType, v: &[BigRational]) -> Result<()> {
    if v.len() != alg.rank() {
        return Err(QbggError::InvalidParameter(format!(
            "{alg} needs vectors of length {}, got {}",
            alg.rank(),
            v.len()
        )));
    }
    Ok(())
}

/// Which finite-dimensional family of modules a coset enumeration describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleCase {
    /// Type A rectangular weight `t ω_a`.
    Rect {
        /// Height `a ∈ [1, n−1]` of the rectangle.
        a: usize,
    },
    /// Type C weight `t ω_r`.
    Symplectic,
    /// Type D spinor weights `2t ω_r` (`odd = false`) or `2t ω_{r−1}` (`odd = true`).
    Spinor {
        /// Parity sector: `false` for an even number of minus signs.
        odd: bool,
    },
    /// Types B/D vector weight `t ω_1`.
    Vector,
}

impl ModuleCase {
    /// Checks that the case is available for the algebra.
    pub fn validate(&self, alg: &AlgebraType) -> Result<()> {
        alg.validate()?;
        let ok = match (self, alg) {
            (ModuleCase::Rect { a }, AlgebraType::A(n)) => *a >= 1 && *a < *n,
            (ModuleCase::Symplectic, AlgebraType::C(_)) => true,
            (ModuleCase::Spinor { .. }, AlgebraType::D(_)) => true,
            (ModuleCase::Vector, AlgebraType::B(_) | AlgebraType::D(_)) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(QbggError::InvalidParameter(format!(
                "module case {self:?} is not admissible for {alg}"
            )))
        }
    }

    /// The weight `ω` with highest weight `t ω` (`ε`-coordinates).
    pub fn omega(&self, alg: &AlgebraType) -> Vec<i64> {
        let m = alg.rank();
        match self {
            ModuleCase::Rect { a } => (0..m).map(|i| i64::from(i < *a)).collect(),
            ModuleCase::Symplectic => vec![1; m],
            ModuleCase::Spinor { odd } => {
                let mut v = vec![1; m];
                if *odd {
                    v[m - 1] = -1;
                }
                v
            }
            ModuleCase::Vector => (0..m).map(|i| i64::from(i == 0)).collect(),
        }
    }

    /// Highest weight `t ω`.
    pub fn highest_weight(&self, alg: &AlgebraType, t: &BigRational) -> Weight {
        self.omega(alg).iter().map(|&c| int(c) * t).collect()
    }
}

/// Index of a coset `W / W_𝔩`, per type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CosetTag {
    /// Type A: the subset `I` (1-based, sorted) carrying the first block.
    SubsetI(Vec<usize>),
    /// Types C/D: the sign vector `μ`; for D the parity sector is recorded.
    SignVector {
        /// Signs `μ_i`.
        mu: Vec<i8>,
        /// `Some(odd)` for type D spinor sectors.
        odd: Option<bool>,
    },
    /// Types B/D vector case: `k ∈ [1, K]`, where `k > K/2` stands for the primed index `(K+1−k)'`.
    BDIndex(usize),
}

impl fmt::Display for CosetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetTag::SubsetI(i) => write!(
                f,
                "I={{{}}}",
                i.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
            CosetTag::SignVector { mu, .. } => write!(
                f,
                "mu=({})",
                mu.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect::<String>()
            ),
            CosetTag::BDIndex(k) => write!(f, "k={k}"),
        }
    }
}

/// A shortest coset representative with its data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetElement {
    /// Index of the coset.
    pub tag: CosetTag,
    /// Shortest representative.
    pub w: WeylElement,
    /// Length `l(w)`.
    pub length: usize,
    /// Sign `(−1)^{l(w)}`.
    pub sign: i64,
    /// `w(ω)`, the `t`-slope of the shifted highest weight.
    pub omega_image: Vec<i64>,
    /// `w · 0`, the `t`-independent part of the shifted highest weight.
    pub shift: Weight,
}

impl CosetElement {
    /// Shifted highest weight `w · (t ω) = t w(ω) + w · 0`.
    pub fn highest_weight(&self, t: &BigRational) -> Weight {
        self.omega_image
            .iter()
            .zip(&self.shift)
            .map(|(&c, s)| int(c) * t + s)
            .collect()
    }

    /// JSON record `{"tag", "length", "hw"}` at a given `t`.
    pub fn to_json(&self, t: &BigRational) -> Value {
        json!({
            "tag": self.tag.to_string(),
            "length": self.length,
            "hw": self.highest_weight(t).iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

/// Shortest representatives of `W / W_𝔩`, where `W_𝔩` is the stabiliser of
/// `ω` for the given module case, ordered by length and then by tag.
pub fn enumerate_cosets(alg: &AlgebraType, case: &ModuleCase) -> Result<Vec<CosetElement>> {
    case.validate(alg)?;
    let omega = case.omega(alg);
    let zero = vec![int(0); alg.rank()];
    let mut best: BTreeMap<Vec<i64>, (usize, WeylElement)> = BTreeMap::new();
    for w in alg.weyl_group() {
        let image = w.apply_int(&omega);
        let len = w.length(alg);
        match best.get(&image) {
            Some((l, _)) if *l <= len => {}
            _ => {
                best.insert(image, (len, w));
            }
        }
    }
    let k = alg.dim_k();
    let mut out = Vec::with_capacity(best.len());
    for (image, (length, w)) in best {
        let tag = match case {
            ModuleCase::Rect { .. } => CosetTag::SubsetI(
                image
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == 1)
                    .map(|(i, _)| i + 1)
                    .collect(),
            ),
            ModuleCase::Symplectic => CosetTag::SignVector {
                mu: image.iter().map(|&c| c as i8).collect(),
                odd: None,
            },
            ModuleCase::Spinor { odd } => CosetTag::SignVector {
                mu: image.iter().map(|&c| c as i8).collect(),
                odd: Some(*odd),
            },
            ModuleCase::Vector => {
                let i = image.iter().position(|&c| c != 0).expect("vector weight is non-zero");
                CosetTag::BDIndex(if image[i] > 0 { i + 1 } else { k - i })
            }
        };
        let shift = dot_action(alg, &w, &zero)?;
        out.push(CosetElement {
            tag,
            length,
            sign: if length % 2 == 0 { 1 } else { -1 },
            omega_image: image,
            shift,
            w,
        });
    }
    out.sort_by(|a, b| (a.length, &a.tag).cmp(&(b.length, &b.tag)));
    Ok(out)
}

/// Evaluates `τ^v = ∏ τ_i^{v_i}` exactly (exact roots for fractional exponents).
pub fn tau_power(tau: &[BigRational], v: &[BigRational]) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for (t, e) in tau.iter().zip(v) {
        if e.is_zero() {
            continue;
        }
        acc *= rational_pow(t, e)?;
    }
    Ok(acc)
}

/// Genericity of a twist: non-zero entries and `τ^α ≠ 1` for every positive root `α`.
pub fn check_twist(alg: &AlgebraType, tau: &[BigRational]) -> Result<()> {
    check_len(alg, tau)?;
    for (i, t) in tau.iter().enumerate() {
        if t.is_zero() {
            return Err(QbggError::InvalidParameter(format!("tau_{} is zero", i + 1)));
        }
    }
    for (alpha, name) in alg.positive_roots() {
        if tau_power(tau, &alpha)? == BigRational::one() {
            return Err(QbggError::DegenerateTwist(name));
        }
    }
    Ok(())
}

/// Weyl character of the irreducible module with highest weight `λ`,
/// evaluated at the twist `τ` as the full alternating sum
/// `Σ_w ε(w) τ^{w·λ} / Σ_w ε(w) τ^{w·0}`.
pub fn weyl_character(alg: &AlgebraType, lambda: &[BigRational], tau: &[BigRational]) -> Result<BigRational> {
    alg.validate()?;
    check_len(alg, lambda)?;
    check_twist(alg, tau)?;
    let zero = vec![int(0); alg.rank()];
    let mut num = BigRational::zero();
    let mut den = BigRational::zero();
    for w in alg.weyl_group() {
        let sign = if w.length(alg) % 2 == 0 { int(1) } else { int(-1) };
        num += &sign * tau_power(tau, &dot_action(alg, &w, lambda)?)?;
        den += &sign * tau_power(tau, &dot_action(alg, &w, &zero)?)?;
    }
    num.div(&den)
}

/// Weyl denominator as a product `∏_{α>0} (1 − τ^{−α})`.
pub fn weyl_denominator_product(alg: &AlgebraType, tau: &[BigRational]) -> Result<BigRational> {
    check_len(alg, tau)?;
    let mut acc = BigRational::one();
    for (alpha, _) in alg.positive_roots() {
        let neg: Weight = alpha.iter().map(|x| -x).collect();
        acc *= BigRational::one() - tau_power(tau, &neg)?;
    }
    Ok(acc)
}

/// Weyl denominator as the alternating sum `Σ_w ε(w) τ^{w·0}`.
pub fn weyl_denominator_sum(alg: &AlgebraType, tau: &[BigRational]) -> Result<BigRational> {
    check_len(alg, tau)?;
    let zero = vec![int(0); alg.rank()];
    let mut den = BigRational::zero();
    for w in alg.weyl_group() {
        let sign = if w.length(alg) % 2 == 0 { int(1) } else { int(-1) };
        den += sign * tau_power(tau, &dot_action(alg, &w, &zero)?)?;
    }
    Ok(den)
}

/// Character of the twisted Fock module attached to a coset:
/// `τ^{w·tω} / ∏_{β ∈ Δ(𝔲)} (1 − τ^{−|wβ|})`, where `Δ(𝔲)` are the positive
/// roots outside the Levi subalgebra stabilising `ω` and `|γ|` is the
/// positive one of `±γ`.
pub fn coset_character(
    alg: &AlgebraType,
    case: &ModuleCase,
    coset: &CosetElement,
    t: &BigRational,
    tau: &[BigRational],
) -> Result<BigRational> {
    let omega: Weight = case.omega(alg).into_iter().map(int).collect();
    let mut value = tau_power(tau, &coset.highest_weight(t))?;
    for (beta, _) in alg.positive_roots() {
        let pairing: BigRational = beta.iter().zip(&omega).map(|(b, o)| b * o).sum();
        if pairing.is_zero() {
            continue;
        }
        let mut g = coset.w.apply(&beta);
        if !is_positive(&g) {
            g = g.iter().map(|x| -x).collect();
        }
        let neg: Weight = g.iter().map(|x| -x).collect();
        let d = BigRational::one() - tau_power(tau, &neg)?;
        value = value.div(&d)?;
    }
    Ok(value)
}

/// Alternating sum of twisted Fock-module characters over the shortest coset
/// representatives: `Σ_w (−1)^{l(w)} ch⁺_w(t; τ)`. For the finite-dimensional
/// values of `t` this equals the Weyl character of `t ω`; for other `t` it is
/// the analytic continuation of that character.
pub fn truncated_bgg_character(
    alg: &AlgebraType,
    case: &ModuleCase,
    t: &BigRational,
    tau: &[BigRational],
) -> Result<BigRational> {
    check_twist(alg, tau)?;
    let mut total = BigRational::zero();
    for coset in enumerate_cosets(alg, case)? {
        total += int(coset.sign) * coset_character(alg, case, &coset, t, tau)?;
    }
    Ok(total)
}

/// Checks that `λ` is dominant integral (for `gl_n` only differences matter).
pub fn check_dominant(alg: &AlgebraType, lambda: &[BigRational]) -> Result<()> {
    check_len(alg, lambda)?;
    for alpha in alg.simple_roots() {
        let norm: BigRational = alpha.iter().map(|x| x * x).sum();
        let pairing: BigRational = alpha.iter().zip(lambda).map(|(a, l)| a * l).sum();
        let coroot = int(2) * pairing / norm;
        if !coroot.is_integer() || coroot.is_negative() {
            return Err(QbggError::NotDominant(format!(
                "({}) pairs to {} with a simple coroot",
                lambda.iter().map(format_rational).collect::<Vec<_>>().join(", "),
                format_rational(&coroot)
            )));
        }
    }
    Ok(())
}

/// Weyl dimension formula `∏_{α>0} (λ+ρ, α) / (ρ, α)` for dominant integral `λ`.
pub fn weyl_dimension(alg: &AlgebraType, lambda: &[BigRational]) -> Result<BigRational> {
    alg.validate()?;
    check_dominant(alg, lambda)?;
    let rho = alg.rho();
    let mut acc = BigRational::one();
    for (alpha, _) in alg.positive_roots() {
        let a: BigRational = alpha.iter().zip(lambda.iter().zip(&rho)).map(|(x, (l, r))| x * (l + r)).sum();
        let b: BigRational = alpha.iter().zip(&rho).map(|(x, r)| x * r).sum();
        acc *= a / b;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Weight {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn lengths(alg: AlgebraType, case: ModuleCase) -> Vec<(String, usize)> {
        enumerate_cosets(&alg, &case)
            .unwrap()
            .into_iter()
            .map(|c| (c.tag.to_string(), c.length))
            .collect()
    }

    #[test]
    fn coset_sizes() {
        assert_eq!(enumerate_cosets(&AlgebraType::A(4), &ModuleCase::Rect { a: 2 }).unwrap().len(), 6);
        assert_eq!(enumerate_cosets(&AlgebraType::C(3), &ModuleCase::Symplectic).unwrap().len(), 8);
        for odd in [false, true] {
            assert_eq!(
                enumerate_cosets(&AlgebraType::D(3), &ModuleCase::Spinor { odd }).unwrap().len(),
                4
            );
        }
        assert_eq!(enumerate_cosets(&AlgebraType::B(2), &ModuleCase::Vector).unwrap().len(), 4);
        assert_eq!(enumerate_cosets(&AlgebraType::D(3), &ModuleCase::Vector).unwrap().len(), 6);
    }

    #[test]
    fn type_a_lengths() {
        assert_eq!(
            lengths(AlgebraType::A(3), ModuleCase::Rect { a: 1 }),
            vec![("I={1}".into(), 0), ("I={2}".into(), 1), ("I={3}".into(), 2)]
        );
    }

    #[test]
    fn type_c_lengths() {
        let l: BTreeMap<String, usize> = lengths(AlgebraType::C(2), ModuleCase::Symplectic).into_iter().collect();
        assert_eq!(l["mu=(++)"], 0);
        assert_eq!(l["mu=(+-)"], 1);
        assert_eq!(l["mu=(-+)"], 2);
        assert_eq!(l["mu=(--)"], 3);
    }

    #[test]
    fn type_d_even_lengths() {
        assert_eq!(
            lengths(AlgebraType::D(2), ModuleCase::Spinor { odd: false }),
            vec![("mu=(++)".into(), 0), ("mu=(--)".into(), 1)]
        );
    }

    #[test]
    fn dot_action_examples() {
        let a2 = AlgebraType::A(2);
        let s1 = WeylElement { signs: vec![1, 1], perm: vec![1, 0] };
        assert_eq!(dot_action(&a2, &s1, &v(&[1, 0])).unwrap(), v(&[-1, 2]));
        // Pure sign flip in C_2 on (t, t) at t = 5 gives (−t−4, −t−2).
        let c2 = AlgebraType::C(2);
        let flip = WeylElement { signs: vec![-1, -1], perm: vec![0, 1] };
        assert_eq!(dot_action(&c2, &flip, &v(&[5, 5])).unwrap(), v(&[-9, -7]));
    }

    #[test]
    fn weyl_character_examples() {
        let a2 = AlgebraType::A(2);
        assert_eq!(weyl_character(&a2, &v(&[2, 0]), &v(&[2, 3])).unwrap(), int(19));
        let c2 = AlgebraType::C(2);
        let expected = int(6) + rat(2, 3) + rat(3, 2) + rat(1, 6) + int(1);
        assert_eq!(weyl_character(&c2, &v(&[1, 1]), &v(&[2, 3])).unwrap(), expected);
        assert_eq!(weyl_character(&c2, &v(&[0, 0]), &v(&[2, 3])).unwrap(), int(1));
        assert_eq!(
            weyl_character(&a2, &v(&[1, 0]), &v(&[3, 3])),
            Err(QbggError::DegenerateTwist("e1-e2".into()))
        );
    }

    #[test]
    fn truncated_examples() {
        let a2 = AlgebraType::A(2);
        let rect = ModuleCase::Rect { a: 1 };
        assert_eq!(truncated_bgg_character(&a2, &rect, &int(2), &v(&[2, 3])).unwrap(), int(19));
        let c2 = AlgebraType::C(2);
        assert_eq!(
            truncated_bgg_character(&c2, &ModuleCase::Symplectic, &int(-1), &v(&[2, 3])).unwrap(),
            int(0)
        );
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(weyl_dimension(&AlgebraType::A(3), &v(&[1, 0, 0])).unwrap(), int(3));
        assert_eq!(weyl_dimension(&AlgebraType::C(2), &v(&[1, 1])).unwrap(), int(5));
        assert_eq!(weyl_dimension(&AlgebraType::B(2), &v(&[1, 0])).unwrap(), int(5));
        assert!(matches!(
            weyl_dimension(&AlgebraType::A(2), &v(&[0, 1])),
            Err(QbggError::NotDominant(_))
        ));
    }

    #[test]
    fn degenerate_twist_names_root() {
        let c2 = AlgebraType::C(2);
        assert_eq!(
            weyl_character(&c2, &v(&[1, 1]), &[int(2), rat(1, 2)]),
            Err(QbggError::DegenerateTwist("e1+e2".into()))
        );
    }

    #[test]
    fn admissibility() {
        assert!(AlgebraType::A(1).validate().is_err());
        assert!(AlgebraType::C(1).validate().is_ok());
        assert!(ModuleCase::Vector.validate(&AlgebraType::C(2)).is_err());
        assert!(ModuleCase::Rect { a: 2 }.validate(&AlgebraType::A(2)).is_err());
    }
}
