//! Exact algebra-level checks: RTT relation, Lie-algebra relations of the
//! generators, Lax-level factorisations and renormalised limits.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::BigRational;
use rayon::prelude::*;

use crate::coeff::{format_rational, int, rat, LaurentScalar, Scalar};
use crate::error::{QbggError, Result};
use crate::lax::families::{self, FactorisationSides, LaxMatrix};
use crate::lax::matrix::{OpMatrix, OpPoly};
use crate::lax::rmatrix::{epsilon, linear_power, Poly2, RMatrix};
use crate::oscillator::{NormalPoly, OscSpace, Substitution};
use crate::report::CheckReport;
use crate::weyl::AlgebraType;

type Q = BigRational;

/// Polynomial in `(z, w)` with oscillator-valued coefficients.
type BiOp = BTreeMap<(u32, u32), NormalPoly<Q>>;

fn biop_add(acc: &mut BiOp, key: (u32, u32), v: NormalPoly<Q>) {
    match acc.get_mut(&key) {
        Some(e) => {
            *e = &*e + &v;
            if e.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            if !v.is_zero() {
                acc.insert(key, v);
            }
        }
    }
}

/// `left(var) · right(other var)`; `left_is_z` selects which variable `left` depends on.
fn bi_product(left: &OpPoly<Q>, left_is_z: bool, right: &OpPoly<Q>) -> BiOp {
    let mut out = BiOp::new();
    for (i, p) in left.coeffs().iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (j, q) in right.coeffs().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let key = if left_is_z { (i as u32, j as u32) } else { (j as u32, i as u32) };
            biop_add(&mut out, key, p * q);
        }
    }
    out
}

fn scale_biop(acc: &mut BiOp, poly: &Poly2, x: &BiOp) {
    for ((i1, j1), c) in poly {
        for ((i2, j2), v) in x {
            biop_add(acc, (i1 + i2, j1 + j2), v.scale(c));
        }
    }
}

/// `R(z − w)` as sparse rows and columns of bivariate scalar polynomials.
struct RShifted {
    rows: Vec<Vec<(usize, Poly2)>>,
    cols: Vec<Vec<(usize, Poly2)>>,
}

fn r_shifted(r: &RMatrix) -> RShifted {
    let k2 = r.dim_k() * r.dim_k();
    let mut entries: BTreeMap<(usize, usize), Poly2> = BTreeMap::new();
    for (j, coeff) in r.coeffs().iter().enumerate() {
        let power = linear_power(1, -1, j as u32);
        for (key, v) in coeff {
            let e = entries.entry(*key).or_default();
            for (pk, pv) in &power {
                crate::lax::rmatrix::poly2_add(e, *pk, &(pv * v));
            }
        }
    }
    let mut rows = vec![Vec::new(); k2];
    let mut cols = vec![Vec::new(); k2];
    for ((row, col), p) in entries {
        if p.is_empty() {
            continue;
        }
        rows[row].push((col, p.clone()));
        cols[col].push((row, p));
    }
    RShifted { rows, cols }
}

/// Checks `R₁₂(z−w) L₁(z) L₂(w) = L₂(w) L₁(z) R₁₂(z−w)` as an identity of
/// bivariate polynomials with normal-ordered oscillator coefficients.
pub fn rtt_check(l1: &LaxMatrix<Q>, l2: &LaxMatrix<Q>) -> Result<CheckReport> {
    if l1.alg() != l2.alg() {
        return Err(QbggError::InvalidParameter(format!(
            "Lax matrices of {} and {} cannot be compared",
            l1.alg(),
            l2.alg()
        )));
    }
    if !Arc::ptr_eq(l1.space(), l2.space()) && l1.space().labels() != l2.space().labels() {
        return Err(QbggError::MismatchedSpaces("RTT needs one oscillator space".into()));
    }
    let l2m = l2.matrix().embed(l1.space())?;
    let l1m = l1.matrix();
    let r = RMatrix::new(l1.alg())?;
    let k = r.dim_k();
    let rs = r_shifted(&r);
    let idx4 = |a: usize, b: usize, c: usize, d: usize| ((a * k + b) * k + c) * k + d;
    // front[(e,c,f,d)] = L1_ec(z) L2_fd(w); back[(b,f,a,e)] = L2_bf(w) L1_ae(z).
    let quads: Vec<(usize, usize, usize, usize)> = (0..k)
        .flat_map(|a| (0..k).flat_map(move |b| (0..k).flat_map(move |c| (0..k).map(move |d| (a, b, c, d)))))
        .collect();
    let front: Vec<BiOp> = quads
        .par_iter()
        .map(|&(e, c, f, d)| bi_product(l1m.get(e, c), true, l2m.get(f, d)))
        .collect();
    let back: Vec<BiOp> = quads
        .par_iter()
        .map(|&(b, f, a, e)| bi_product(l2m.get(b, f), false, l1m.get(a, e)))
        .collect();
    let cells: Vec<(usize, usize)> = (0..k * k).flat_map(|row| (0..k * k).map(move |col| (row, col))).collect();
    let defects: Vec<(usize, usize, usize)> = cells
        .par_iter()
        .filter_map(|&(row, col)| {
            let (a, b) = (row / k, row % k);
            let (c, d) = (col / k, col % k);
            let mut diff = BiOp::new();
            for (ef, p) in &rs.rows[row] {
                let (e, f) = (ef / k, ef % k);
                scale_biop(&mut diff, p, &front[idx4(e, c, f, d)]);
            }
            let neg: Vec<(usize, Poly2)> = rs.cols[col]
                .iter()
                .map(|(ef, p)| (*ef, p.iter().map(|(key, v)| (*key, -v)).collect()))
                .collect();
            for (ef, p) in &neg {
                let (e, f) = (ef / k, ef % k);
                scale_biop(&mut diff, p, &back[idx4(b, f, a, e)]);
            }
            let terms: usize = diff.values().map(NormalPoly::len).sum();
            (terms > 0).then_some((row, col, terms))
        })
        .collect();
    let mut report = CheckReport::new("rtt", l1.family());
    for (key, value) in l1.params() {
        report = report.param(key, value);
    }
    for (row, col, terms) in defects {
        report.defect(|| {
            format!(
                "entry (({},{}),({},{})): {terms} non-zero terms",
                row / k + 1,
                row % k + 1,
                col / k + 1,
                col % k + 1
            )
        });
    }
    Ok(report)
}

fn coefficient_matrix(l: &LaxMatrix<Q>, j: usize) -> Vec<Vec<NormalPoly<Q>>> {
    l.matrix().coeff_matrix(j)
}

fn scalar_matrix(m: &[Vec<NormalPoly<Q>>]) -> Option<Vec<Vec<Q>>> {
    m.iter()
        .map(|row| row.iter().map(|p| p.is_scalar().then(|| p.constant_term())).collect())
        .collect()
}

/// Checks `[X₁, Y₂] = Y₂C₁P − PC₁Y₂ − Y₂C₁Q + QC₁Y₂` entrywise (`Q = 0` in type A).
fn bracket_relation(
    alg: &AlgebraType,
    c: &[Vec<Q>],
    x: &[Vec<NormalPoly<Q>>],
    y: &[Vec<NormalPoly<Q>>],
    what: &str,
    report: &mut CheckReport,
) -> Result<()> {
    let k = c.len();
    let orthosymplectic = !matches!(alg, AlgebraType::A(_));
    let space = x[0][0].space().clone();
    let eps = |i: usize| int(epsilon(alg, i));
    let cells: Vec<(usize, usize, usize, usize)> = (0..k)
        .flat_map(|a| (0..k).flat_map(move |b| (0..k).flat_map(move |cc| (0..k).map(move |d| (a, b, cc, d)))))
        .collect();
    let results: Vec<Result<Option<((usize, usize, usize, usize), usize)>>> = cells
        .par_iter()
        .map(|&(a, b, cc, d)| {
            let lhs = x[a][cc].commutator(&y[b][d])?;
            let mut rhs = &y[b][cc].scale(&c[a][d]) - &y[a][d].scale(&c[b][cc]);
            if orthosymplectic {
                let p = |i: usize| k - 1 - i;
                if d == p(cc) {
                    let mut acc = NormalPoly::zero(&space);
                    for e in 0..k {
                        acc = &acc + &y[b][p(e)].scale(&(&eps(e) * &c[a][e]));
                    }
                    rhs = &rhs - &acc.scale(&eps(cc));
                }
                if b == p(a) {
                    let mut acc = NormalPoly::zero(&space);
                    for e in 0..k {
                        acc = &acc + &y[p(e)][d].scale(&(&eps(e) * &c[e][cc]));
                    }
                    rhs = &rhs + &acc.scale(&eps(a));
                }
            }
            let diff = &lhs - &rhs;
            Ok((!diff.is_zero()).then_some(((a, b, cc, d), diff.len())))
        })
        .collect();
    for r in results {
        if let Some(((a, b, cc, d), n)) = r? {
            report.defect(|| format!("{what}: (({},{}),({},{})) has {n} non-zero terms", a + 1, b + 1, cc + 1, d + 1));
        }
    }
    Ok(())
}

/// Checks the commutation relations of the generators read off a Lax matrix.
///
/// For `L = xC + F`: `[F₁, F₂] = F₂C₁P − PC₁F₂ − F₂C₁Q + QC₁F₂`, which for `C = I`
/// are the `gl_n` (resp. `so`/`sp`) brackets. For `L = x²C + xM + G`: the same
/// relation between `M₁` and `G₂`, and, when `C = I`, between `M₁` and `M₂`.
/// For monic orthosymplectic matrices the generators satisfy
/// `F_ij = −ε_iε_j F_{j'i'}`, and for the quadratic orthogonal family the free
/// term is `G = ½M² + ¼(K−2)M + ¼(K−3−x₁₂²)I`.
pub fn lie_algebra_check(l: &LaxMatrix<Q>) -> Result<CheckReport> {
    let alg = *l.alg();
    let deg = l.degree();
    let mut report = CheckReport::new("lie", l.family());
    for (key, value) in l.params() {
        report = report.param(key, value);
    }
    if deg == 0 || deg > 2 {
        report.defect(|| format!("unsupported degree {deg}"));
        return Ok(report);
    }
    let Some(c) = scalar_matrix(&coefficient_matrix(l, deg)) else {
        report.defect(|| "leading coefficient is not a scalar matrix".into());
        return Ok(report);
    };
    let k = c.len();
    let monic = (0..k).all(|i| (0..k).all(|j| c[i][j] == if i == j { int(1) } else { int(0) }));
    let sub = coefficient_matrix(l, deg - 1);
    if deg == 1 {
        bracket_relation(&alg, &c, &sub, &sub, "[F1,F2]", &mut report)?;
    } else {
        let free = coefficient_matrix(l, 0);
        bracket_relation(&alg, &c, &sub, &free, "[M1,G2]", &mut report)?;
        if monic {
            bracket_relation(&alg, &c, &sub, &sub, "[M1,M2]", &mut report)?;
        }
    }
    if monic && !matches!(alg, AlgebraType::A(_)) {
        for i in 0..k {
            for j in 0..k {
                let (ip, jp) = (k - 1 - i, k - 1 - j);
                let sign = epsilon(&alg, i) * epsilon(&alg, j);
                let expected = sub[jp][ip].scale(&int(-sign));
                if sub[i][j] != expected {
                    report.defect(|| format!("symmetry: F_({},{}) ≠ −ε ε F_({},{})", i + 1, j + 1, jp + 1, ip + 1));
                }
            }
        }
    }
    if deg == 2 && monic && matches!(l.family(), "BD-quadratic" | "BD-nondegenerate") {
        free_term_identity(l, &sub, &mut report);
    }
    Ok(report)
}

/// `G = ½M² + ¼(K−2)M + ¼(K−3−x₁₂²)I` with `x₁₂` read off `M₁₁ = 1 − x₁₂ − K/2 − ℘w`.
fn free_term_identity(l: &LaxMatrix<Q>, m: &[Vec<NormalPoly<Q>>], report: &mut CheckReport) {
    let k = m.len();
    let space = l.space();
    let kq = int(k as i64);
    let x12 = int(1) - &kq / int(2) - m[0][0].constant_term();
    let mm = OpMatrix::from_consts(space, k, k, |i, j| m[i][j].clone());
    let rhs = mm
        .mul(&mm)
        .scale(&rat(1, 2))
        .add(&mm.scale(&((&kq - int(2)) / int(4))))
        .add(&OpMatrix::scalar_diag(space, &vec![(&kq - int(3) - &x12 * &x12) / int(4); k]));
    let g = coefficient_matrix(l, 0);
    for i in 0..k {
        for j in 0..k {
            if rhs.get(i, j).coeff(0) != g[i][j] {
                report.defect(|| format!("free term: G_({},{}) differs", i + 1, j + 1));
            }
        }
    }
    report.note(format!("x12 = {}", format_rational(&x12)));
}

/// Compares two operator matrices coefficient-wise, recording differing entries.
pub fn compare_matrices<S: Scalar>(lhs: &OpMatrix<S>, rhs: &OpMatrix<S>, report: &mut CheckReport) {
    if lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() {
        report.defect(|| "shape mismatch".into());
        return;
    }
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            let d = lhs.get(i, j).sub(rhs.get(i, j));
            for (p, c) in d.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let n = c.len();
                    report.defect(|| format!("entry ({},{}), x^{p}: {n} non-zero terms", i + 1, j + 1));
                }
            }
        }
    }
}

/// The Lax-level factorisations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorisationCase {
    /// `gl_n` with an `a`-element first block.
    A { n: usize, a: usize },
    /// `sp_{2r}`.
    C { r: usize },
    /// `so_{2r}`.
    D { r: usize },
    /// `so_K`, quadratic Lax matrices.
    BD { k: usize },
}

impl FactorisationCase {
    fn family(&self) -> &'static str {
        match self {
            FactorisationCase::A { .. } => "A",
            FactorisationCase::C { .. } => "C",
            FactorisationCase::D { .. } => "D",
            FactorisationCase::BD { .. } => "BD",
        }
    }
}

/// Checks the factorisation of a nondegenerate Lax matrix (times the gauge
/// matrix `G`, after the generator substitution) into two degenerate ones, and
/// that `G` is unipotent with creation operators only.
pub fn lax_factorisation_check(case: FactorisationCase, t: &Q) -> Result<CheckReport> {
    let (sides, mut report): (FactorisationSides<Q>, CheckReport) = match case {
        FactorisationCase::A { n, a } => (
            families::a_factorisation_sides(n, a, t)?,
            CheckReport::new("laxfac", case.family()).param("n", n).param("a", a),
        ),
        FactorisationCase::C { r } => (
            families::cd_factorisation_sides(&AlgebraType::C(r), t)?,
            CheckReport::new("laxfac", case.family()).param("r", r),
        ),
        FactorisationCase::D { r } => (
            families::cd_factorisation_sides(&AlgebraType::D(r), t)?,
            CheckReport::new("laxfac", case.family()).param("r", r),
        ),
        FactorisationCase::BD { k } => (
            families::bd_factorisation_sides(k, t)?,
            CheckReport::new("laxfac", case.family()).param("K", k),
        ),
    };
    report = report.param("t", format_rational(t));
    compare_matrices(&sides.lhs, &sides.rhs, &mut report);
    gauge_is_creation_only(&sides.gauge, &mut report);
    Ok(report)
}

fn gauge_is_creation_only<S: Scalar>(g: &OpMatrix<S>, report: &mut CheckReport) {
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let e = g.get(i, j);
            if e.degree().unwrap_or(0) > 0 {
                report.defect(|| format!("gauge entry ({},{}) depends on x", i + 1, j + 1));
                continue;
            }
            let c = e.coeff(0);
            let ok = if i == j {
                c == NormalPoly::int(g.space(), 1)
            } else {
                c.terms().keys().all(|m| m.annihilation.iter().all(|&k| k == 0) && !m.is_one())
            };
            if !ok {
                report.defect(|| format!("gauge entry ({},{}) is not of creation type", i + 1, j + 1));
            }
        }
    }
}

/// The renormalised limits producing degenerate Lax matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitCase {
    /// `L_{{1..a}}` (`first`) or `L_{{a+1..n}}`.
    A { n: usize, a: usize, first: bool },
    /// `L_+` (`plus`) or `L_−` of `sp_{2r}`.
    C { r: usize, plus: bool },
    /// `L_+` or `L_−` of `so_{2r}`.
    D { r: usize, plus: bool },
    /// `L_1` (`first`) or `L_K` of `so_K`.
    BD { k: usize, first: bool },
}

type L = LaurentScalar;

fn laurent(c: i64, e: i32) -> L {
    L::monomial(int(c), e)
}

fn laurent_q(c: Q, e: i32) -> L {
    L::monomial(c, e)
}

/// The `t⁰` part of a Laurent-valued matrix; positive powers of `t` are defects.
fn limit_part(m: &OpMatrix<L>, report: &mut CheckReport) -> OpMatrix<Q> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for p in m.get(i, j).coeffs() {
                for c in p.terms().values() {
                    if c.max_exponent().is_some_and(|e| e > 0) {
                        let e = c.max_exponent().unwrap_or(0);
                        report.defect(|| format!("entry ({},{}) grows like t^{e}", i + 1, j + 1));
                    }
                }
            }
        }
    }
    m.map_scalars(|c| c.coeff(0))
}

/// Substitution from one space to another given label-to-image rules.
fn relabel(
    source: &Arc<OscSpace>,
    target: &Arc<OscSpace>,
    rule: impl Fn(&str) -> Result<(NormalPoly<Q>, NormalPoly<Q>)>,
) -> Result<Substitution<Q>> {
    let mut builder = Substitution::builder(source, target)?;
    for label in source.labels() {
        let (cre, ann) = rule(label)?;
        builder = builder.creation(label, cre)?.annihilation(label, ann)?;
    }
    builder.build()
}

fn split_pair(label: &str) -> Result<(usize, usize)> {
    let mut it = label.split(',');
    let parse = |s: Option<&str>| -> Result<usize> {
        s.and_then(|s| s.parse().ok())
            .ok_or_else(|| QbggError::Parse(format!("bad pair label {label}")))
    };
    Ok((parse(it.next())?, parse(it.next())?))
}

/// Checks that a scaled, shifted nondegenerate Lax matrix with formal `t` has
/// no positive powers of `t` and that its `t⁰` part is the degenerate Lax matrix.
pub fn renormalized_limit_check(case: LimitCase) -> Result<CheckReport> {
    let t = L::t();
    let (limit, expected, mut report) = match case {
        LimitCase::A { n, a, first } => {
            let big = families::a_rect::<L>(n, a, &t)?;
            let report = CheckReport::new("limit", "A").param("n", n).param("a", a).param("first", first);
            if first {
                let d: Vec<L> = (0..n).map(|i| if i < a { laurent(1, 0) } else { laurent(-1, -1) }).collect();
                let m = big.matrix().shift(&t.neg()).right_diag(&d);
                let expected = families::a_degenerate::<Q>(n, &(1..=a).collect::<Vec<_>>())?;
                (m, expected, report)
            } else {
                let d: Vec<L> = (0..n).map(|i| if i < a { laurent(1, -1) } else { laurent(1, 0) }).collect();
                let m = big.matrix().shift(&laurent(a as i64, 0)).left_diag(&d);
                let expected = families::a_degenerate::<Q>(n, &(a + 1..=n).collect::<Vec<_>>())?;
                (m, expected, report)
            }
        }
        LimitCase::C { r, plus } | LimitCase::D { r, plus } => {
            let alg = if matches!(case, LimitCase::C { .. }) { AlgebraType::C(r) } else { AlgebraType::D(r) };
            let big = families::cd_nondegenerate::<L>(&alg, &t)?;
            let report = CheckReport::new("limit", alg.to_string().chars().next().unwrap_or('?').to_string())
                .param("r", r)
                .param("sign", if plus { "+" } else { "-" });
            let k = 2 * r;
            let expected = families::cd_degenerate::<Q>(&alg, plus)?;
            if plus {
                let d: Vec<L> = (0..k).map(|i| if i < r { laurent(1, 0) } else { laurent_q(rat(-1, 2), -1) }).collect();
                (big.matrix().shift(&t.neg()).right_diag(&d), expected, report)
            } else {
                let d: Vec<L> = (0..k).map(|i| if i < r { laurent_q(rat(1, 2), -1) } else { laurent(1, 0) }).collect();
                let shift = t.add(&laurent(families::cd_shift(&alg), 0));
                (big.matrix().shift(&shift).left_diag(&d), expected, report)
            }
        }
        LimitCase::BD { k, first } => {
            let big = families::bd_nondegenerate::<L>(k, &t)?;
            let report = CheckReport::new("limit", "BD").param("K", k).param("first", first);
            let expected = families::bd_degenerate::<Q>(k, first)?;
            let half_t = laurent_q(rat(1, 2), 1);
            let kq = laurent_q(rat(k as i64, 4), 0);
            if first {
                let d: Vec<L> = (0..k)
                    .map(|i| {
                        if i == 0 {
                            laurent(1, 0)
                        } else if i == k - 1 {
                            laurent(1, -2)
                        } else {
                            laurent(-1, -1)
                        }
                    })
                    .collect();
                let shift = laurent(1, 0).sub(&half_t).sub(&kq);
                (big.matrix().shift(&shift).right_diag(&d), expected, report)
            } else {
                let d: Vec<L> = (0..k)
                    .map(|i| {
                        if i == 0 {
                            laurent(1, -2)
                        } else if i == k - 1 {
                            laurent(1, 0)
                        } else {
                            laurent(1, -1)
                        }
                    })
                    .collect();
                (big.matrix().shift(&half_t.add(&kq)).left_diag(&d), expected, report)
            }
        }
    };
    let rational = limit_part(&limit, &mut report);
    let source = rational.space().clone();
    let target = expected.space().clone();
    let subst = match case {
        LimitCase::A { first: true, .. } | LimitCase::C { plus: true, .. } | LimitCase::D { plus: true, .. } => {
            relabel(&source, &target, |l| Ok((NormalPoly::cre(&target, l)?, NormalPoly::ann(&target, l)?)))?
        }
        LimitCase::A { first: false, .. } => relabel(&source, &target, |l| {
            // ā_{ij} ↦ −ā_{ji}, a_{ji} ↦ −a_{ij}.
            let (i, j) = split_pair(l)?;
            let tl = families::pair_label(j, i);
            Ok((-&NormalPoly::cre(&target, &tl)?, -&NormalPoly::ann(&target, &tl)?))
        })?,
        LimitCase::C { .. } | LimitCase::D { .. } => {
            let symplectic = matches!(case, LimitCase::C { .. });
            relabel(&source, &target, |l| {
                // ā_{i,j'} ↦ −ā_{j',i}/c, a_{j',i} ↦ −c a_{i,j'}.
                let (i, jp) = split_pair(l)?;
                let k = source_k(&case);
                let c = if symplectic && jp == k + 1 - i { int(2) } else { int(1) };
                let tl = families::pair_label(jp, i);
                Ok((
                    NormalPoly::cre(&target, &tl)?.scale(&(-c.recip())),
                    NormalPoly::ann(&target, &tl)?.scale(&(-c)),
                ))
            })?
        }
        LimitCase::BD { first, .. } => relabel(&source, &target, |l| {
            let ell: usize = l.parse().map_err(|_| QbggError::Parse(format!("bad label {l}")))?;
            if first {
                Ok((
                    NormalPoly::cre(&target, &families::pair_label(1, ell))?,
                    NormalPoly::ann(&target, &families::pair_label(1, ell))?,
                ))
            } else {
                let tl = families::pair_label(ell, 1);
                Ok((-&NormalPoly::cre(&target, &tl)?, -&NormalPoly::ann(&target, &tl)?))
            }
        })?,
    };
    let limit = rational.substitute(&subst)?;
    compare_matrices(&limit, expected.matrix(), &mut report);
    Ok(report)
}

fn source_k(case: &LimitCase) -> usize {
    match case {
        LimitCase::C { r, .. } | LimitCase::D { r, .. } => 2 * r,
        LimitCase::A { n, .. } => *n,
        LimitCase::BD { k, .. } => *k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::families::*;

    fn assert_pass(r: &CheckReport) {
        assert!(r.passed(), "{}", r.to_json_line());
    }

    #[test]
    fn rtt_small_families() {
        let t = rat(3, 7);
        assert_pass(&{
            let l = a_verma::<Q>(2, &[rat(1, 3), rat(-2, 5)]).unwrap();
            rtt_check(&l, &l).unwrap()
        });
        let l = a_rect::<Q>(3, 1, &t).unwrap();
        assert_pass(&rtt_check(&l, &l).unwrap());
        let l = cd_nondegenerate::<Q>(&AlgebraType::C(1), &t).unwrap();
        assert_pass(&rtt_check(&l, &l).unwrap());
        let l = cd_nondegenerate::<Q>(&AlgebraType::D(2), &t).unwrap();
        assert_pass(&rtt_check(&l, &l).unwrap());
        let l = bd_nondegenerate::<Q>(5, &t).unwrap();
        assert_pass(&rtt_check(&l, &l).unwrap());
    }

    #[test]
    fn corrupted_lax_fails_rtt() {
        let l = a_rect::<Q>(2, 1, &rat(1, 2)).unwrap();
        let mut m = l.matrix().clone();
        let bumped = m.get(0, 1).add(&OpPoly::scalar(l.space(), int(1)));
        m.set(0, 1, bumped);
        let bad = l.with_matrix(m);
        assert!(!rtt_check(&bad, &bad).unwrap().passed());
    }

    #[test]
    fn lie_small_families() {
        let t = rat(5, 3);
        assert_pass(&lie_algebra_check(&a_rect::<Q>(3, 1, &t).unwrap()).unwrap());
        assert_pass(&lie_algebra_check(&a_degenerate::<Q>(3, &[2]).unwrap()).unwrap());
        assert_pass(&lie_algebra_check(&cd_nondegenerate::<Q>(&AlgebraType::C(2), &t).unwrap()).unwrap());
        assert_pass(&lie_algebra_check(&cd_degenerate::<Q>(&AlgebraType::D(2), false).unwrap()).unwrap());
        assert_pass(&lie_algebra_check(&bd_nondegenerate::<Q>(5, &t).unwrap()).unwrap());
        assert_pass(&lie_algebra_check(&bd_degenerate::<Q>(5, true).unwrap()).unwrap());
    }

    #[test]
    fn factorisations_small() {
        let t = rat(2, 9);
        for case in [
            FactorisationCase::A { n: 2, a: 1 },
            FactorisationCase::A { n: 3, a: 2 },
            FactorisationCase::C { r: 1 },
            FactorisationCase::C { r: 2 },
            FactorisationCase::D { r: 2 },
            FactorisationCase::BD { k: 5 },
        ] {
            assert_pass(&lax_factorisation_check(case, &t).unwrap());
        }
    }

    #[test]
    fn limits_small() {
        for case in [
            LimitCase::A { n: 2, a: 1, first: true },
            LimitCase::A { n: 3, a: 1, first: false },
            LimitCase::C { r: 1, plus: true },
            LimitCase::C { r: 2, plus: false },
            LimitCase::D { r: 2, plus: true },
            LimitCase::D { r: 3, plus: false },
            LimitCase::BD { k: 5, first: true },
            LimitCase::BD { k: 5, first: false },
        ] {
            assert_pass(&renormalized_limit_check(case).unwrap());
        }
    }
}
