//! Randomised invariants of every module, as exact properties.
//!
//! Inputs come from `proptest` strategies or from a seeded [`Sampler`] whose
//! seed is the generated value, so every failure is reproducible.

use num::{BigRational, One, Signed, Zero};
use proptest::prelude::*;

use qbgg::coeff::{int, rat, rational_to_f64, FieldScalar, Sampler};
use qbgg::lax::checks::rtt_check;
use qbgg::lax::families;
use qbgg::lax::LaxMatrix;
use qbgg::oscillator::oracle::random_normal_poly;
use qbgg::oscillator::{
    fock_trace, fock_trace_partial, normal_mul, substitute_generators, NormalMonomial, NormalPoly, OscSpace,
    Substitution, TwistWeights,
};
use qbgg::transfer::cases::{coset_lax, module_lax, q_subset};
use qbgg::transfer::characters::closed_form_character;
use qbgg::transfer::checks::{degenerate_twist_checks, determinant_identity_check, DeterminantKind};
use qbgg::transfer::finite::build_finite_module;
use qbgg::transfer::trace::{character_plus, q_operator, q_operator_with_prefactor, q_twist_weights};
use qbgg::transfer::twist::TwistSpec;
use qbgg::weyl::{
    dot_action, enumerate_cosets, truncated_bgg_character, weyl_character, weyl_denominator_product,
    weyl_denominator_sum, AlgebraType, CosetTag, ModuleCase,
};

type Q = BigRational;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// Every admissible module case of an algebra.
fn module_cases(alg: &AlgebraType) -> Vec<ModuleCase> {
    let candidates = match alg {
        AlgebraType::A(n) => (1..*n).map(|a| ModuleCase::Rect { a }).collect(),
        AlgebraType::B(_) => vec![ModuleCase::Vector],
        AlgebraType::C(_) => vec![ModuleCase::Symplectic],
        AlgebraType::D(_) => {
            vec![ModuleCase::Spinor { odd: false }, ModuleCase::Spinor { odd: true }, ModuleCase::Vector]
        }
    };
    candidates.into_iter().filter(|c| c.validate(alg).is_ok()).collect()
}

fn algebras_up_to_rank(max: usize) -> Vec<AlgebraType> {
    let mut out = Vec::new();
    for r in 1..=max {
        if r >= 2 {
            out.push(AlgebraType::A(r));
            out.push(AlgebraType::B(r));
            out.push(AlgebraType::D(r));
        }
        out.push(AlgebraType::C(r));
    }
    out
}

fn rational() -> impl Strategy<Value = Q> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(p, q)| rat(p, q))
}

// ---------------------------------------------------------------- coeff

#[derive(Debug, Clone)]
enum Expr {
    Leaf(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division by a nonzero leaf, so that no cancellation reaches a denominator.
    Div(Box<Expr>, i64, i64),
}

fn leaf() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=16).prop_flat_map(|q| (-10 * q..=10 * q, Just(q)))
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_map(|(p, q)| Expr::Leaf(p, q)).prop_recursive(10, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, leaf().prop_filter("nonzero divisor", |(p, _)| *p != 0))
                .prop_map(|(a, (p, q))| Expr::Div(Box::new(a), p, q)),
        ]
    })
}

/// Evaluates with any field scalar; `abs` evaluates the magnitude bound
/// (absolute values at the leaves, sums for differences).
fn eval<S: FieldScalar>(e: &Expr, abs: bool) -> S {
    let leaf = |p: i64, q: i64| {
        let p = if abs { p.abs() } else { p };
        S::from_rational(&rat(p, q))
    };
    match e {
        Expr::Leaf(p, q) => leaf(*p, *q),
        Expr::Add(a, b) => eval::<S>(a, abs).add(&eval::<S>(b, abs)),
        Expr::Sub(a, b) if abs => eval::<S>(a, abs).add(&eval::<S>(b, abs)),
        Expr::Sub(a, b) => eval::<S>(a, abs).sub(&eval::<S>(b, abs)),
        Expr::Mul(a, b) => eval::<S>(a, abs).mul(&eval::<S>(b, abs)),
        Expr::Div(a, p, q) => eval::<S>(a, abs).div(&leaf(*p, *q)).expect("nonzero divisor"),
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn exact_scalars_satisfy_the_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * a.inv().unwrap()).is_one());
        } else {
            prop_assert!(a.inv().is_err());
        }
        // Lowest terms with a positive denominator.
        let s = &a * &b + &c;
        prop_assert!(s.denom().is_positive());
        prop_assert!(num::Integer::gcd(s.numer(), s.denom()).is_one());
    }

    #[test]
    fn float_scalars_track_exact_ones(e in expr()) {
        let exact: Q = eval(&e, false);
        let float: f64 = eval(&e, false);
        let scale: f64 = eval(&e, true);
        let err = (float - rational_to_f64(&exact)).abs();
        prop_assert!(err <= 1e-12 * scale.max(f64::MIN_POSITIVE), "{e:?}: {float} vs {exact} (scale {scale})");
    }
}

// ---------------------------------------------------------------- oscillator

fn space(pairs: usize) -> std::sync::Arc<OscSpace> {
    OscSpace::new((1..=pairs).map(|p| format!("{p},{}", p + 1))).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn normal_product_is_associative_and_distributive(seed in any::<u64>(), pairs in 1usize..=2) {
        let s = space(pairs);
        let mut sampler = Sampler::new(seed);
        let degree = if pairs == 1 { 3 } else { 2 };
        let [x, y, z] = [0, 1, 2].map(|_| random_normal_poly(&s, &mut sampler, 3, degree));
        let left = normal_mul(&normal_mul(&x, &y).unwrap(), &z).unwrap();
        let right = normal_mul(&x, &normal_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let yz = y.try_add(&z).unwrap();
        prop_assert_eq!(
            normal_mul(&x, &yz).unwrap(),
            normal_mul(&x, &y).unwrap().try_add(&normal_mul(&x, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(
            normal_mul(&yz, &x).unwrap(),
            normal_mul(&y, &x).unwrap().try_add(&normal_mul(&z, &x).unwrap()).unwrap()
        );
    }

    #[test]
    fn fock_trace_is_the_limit_of_partial_sums(seed in any::<u64>()) {
        let s = space(1);
        let x = random_normal_poly(&s, &mut Sampler::new(seed), 5, 3);
        let exact = fock_trace(&x, &TwistWeights::new(vec![rat(1, 3)])).unwrap();
        let ftwist = TwistWeights::new(vec![1.0 / 3.0]);
        let float = fock_trace_partial(&x.map_coeffs(rational_to_f64), &ftwist, 60).unwrap();
        let scale = fock_trace_partial(&x.map_coeffs(|c| rational_to_f64(&c.abs())), &ftwist, 60).unwrap();
        prop_assert!((float - rational_to_f64(&exact)).abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn fock_trace_is_linear_and_kills_unbalanced_terms(
        seed in any::<u64>(),
        a in rational(),
        b in rational(),
        pairs in 1usize..=3,
    ) {
        let s = space(pairs);
        let mut sampler = Sampler::new(seed);
        let x = random_normal_poly(&s, &mut sampler, 4, 2);
        let y = random_normal_poly(&s, &mut sampler, 4, 2);
        let weights: Vec<Q> = (0..pairs).map(|_| rat(sampler.int_in(-9, 9), 10)).filter(|q| !q.is_one()).collect();
        prop_assume!(weights.len() == pairs);
        let tw = TwistWeights::new(weights);
        let combo = x.scale(&a).try_add(&y.scale(&b)).unwrap();
        prop_assert_eq!(
            fock_trace(&combo, &tw).unwrap(),
            &a * fock_trace(&x, &tw).unwrap() + &b * fock_trace(&y, &tw).unwrap()
        );
        let mut m = NormalMonomial::one(pairs);
        let p = sampler.int_in(0, pairs as i64 - 1) as usize;
        m.creation[p] = sampler.int_in(0, 3) as u32;
        m.annihilation[p] = m.creation[p] + sampler.int_in(1, 3) as u32;
        if sampler.int_in(0, 1) == 1 {
            std::mem::swap(&mut m.creation[p], &mut m.annihilation[p]);
        }
        let unbalanced = NormalPoly::monomial(&s, m, sampler.signed_rational()).unwrap();
        prop_assert!(fock_trace(&unbalanced, &tw).unwrap().is_zero());
    }

    #[test]
    fn particle_hole_twice_negates_the_transformed_pairs(seed in any::<u64>(), mask in 1u8..8) {
        let s = space(3);
        let chosen: Vec<usize> = (0..3).filter(|p| mask & (1 << p) != 0).collect();
        let ph = Substitution::particle_hole(&s, &chosen).unwrap();
        let x = random_normal_poly(&s, &mut Sampler::new(seed), 4, 2);
        let twice = substitute_generators(&substitute_generators(&x, &ph).unwrap(), &ph).unwrap();
        let mut expected = NormalPoly::zero(&s);
        for (m, c) in x.terms() {
            let flips: u32 = chosen.iter().map(|&p| m.creation[p] + m.annihilation[p]).sum();
            expected.add_term(m.clone(), if flips.is_multiple_of(2) { c.clone() } else { -c.clone() });
        }
        prop_assert_eq!(twice, expected);
    }
}

// ---------------------------------------------------------------- weyl

#[test]
fn weyl_denominator_identity_at_random_twists() {
    let mut s = Sampler::new(101);
    for alg in algebras_up_to_rank(3) {
        for _ in 0..20 {
            let tw = TwistSpec::random(alg, &mut s);
            assert_eq!(
                weyl_denominator_sum(&alg, tw.tau()).unwrap(),
                weyl_denominator_product(&alg, tw.tau()).unwrap(),
                "{alg}"
            );
        }
    }
}

#[test]
fn truncated_alternating_sum_is_the_weyl_character() {
    let mut s = Sampler::new(102);
    for alg in algebras_up_to_rank(3) {
        for case in module_cases(&alg) {
            let ts = match case {
                ModuleCase::Spinor { .. } => vec![rat(1, 2), int(1), rat(3, 2)],
                _ => vec![int(1), int(2), int(3)],
            };
            for t in ts {
                for _ in 0..10 {
                    let tw = TwistSpec::random_squares(alg, &mut s);
                    let hw = case.highest_weight(&alg, &t);
                    assert_eq!(
                        truncated_bgg_character(&alg, &case, &t, tw.tau()).unwrap(),
                        weyl_character(&alg, &hw, tw.tau()).unwrap(),
                        "{alg} {case:?} t={t}"
                    );
                }
            }
        }
    }
}

#[test]
fn coset_lengths_pair_up() {
    for r in 1..=4usize {
        let c = AlgebraType::C(r);
        let cosets = enumerate_cosets(&c, &ModuleCase::Symplectic).unwrap();
        for x in &cosets {
            let CosetTag::SignVector { mu, .. } = &x.tag else { panic!("sign vector expected") };
            let bar: Vec<i8> = mu.iter().map(|m| -m).collect();
            let y = cosets.iter().find(|y| matches!(&y.tag, CosetTag::SignVector { mu, .. } if *mu == bar)).unwrap();
            assert_eq!(x.length + y.length, r * (r + 1) / 2, "C{r} {}", x.tag);
        }
    }
    for r in 2..=4usize {
        let d = AlgebraType::D(r);
        let mut cosets = enumerate_cosets(&d, &ModuleCase::Spinor { odd: false }).unwrap();
        cosets.extend(enumerate_cosets(&d, &ModuleCase::Spinor { odd: true }).unwrap());
        for x in &cosets {
            let CosetTag::SignVector { mu, .. } = &x.tag else { panic!("sign vector expected") };
            let bar: Vec<i8> = mu.iter().map(|m| -m).collect();
            let y = cosets.iter().find(|y| matches!(&y.tag, CosetTag::SignVector { mu, .. } if *mu == bar)).unwrap();
            assert_eq!(x.length + y.length, r * (r - 1) / 2, "D{r} {}", x.tag);
        }
    }
    for kk in 5..=9usize {
        let alg = families::orthogonal_of_dim(kk).unwrap();
        let cosets = enumerate_cosets(&alg, &ModuleCase::Vector).unwrap();
        for x in &cosets {
            let CosetTag::BDIndex(k) = x.tag else { panic!("index expected") };
            let y = cosets.iter().find(|y| y.tag == CosetTag::BDIndex(kk + 1 - k)).unwrap();
            // l(w_k) = k − 1 below the middle and (K + 1 − k') − 2 for primed indices.
            assert_eq!(x.length, if 2 * k <= kk { k - 1 } else { k - 2 }, "K={kk} k={k}");
            assert_eq!(x.length + y.length, kk - 2, "K={kk} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn coset_highest_weights_are_dot_actions(t in rational()) {
        for alg in algebras_up_to_rank(4) {
            for case in module_cases(&alg) {
                let t_omega: Vec<Q> = case.omega(&alg).into_iter().map(|o| int(o) * &t).collect();
                for coset in enumerate_cosets(&alg, &case).unwrap() {
                    prop_assert_eq!(
                        coset.highest_weight(&t),
                        dot_action(&alg, &coset.w, &t_omega).unwrap(),
                        "{} {:?} {}", alg, case, coset.tag
                    );
                }
            }
        }
    }
}

// ---------------------------------------------------------------- lax

/// Algebras and cases of the Lax-level grid: A n ≤ 4, C r ≤ 2, D r ≤ 3, B r = 2.
fn lax_grid() -> Vec<(AlgebraType, ModuleCase)> {
    let algs = [
        AlgebraType::A(2),
        AlgebraType::A(3),
        AlgebraType::A(4),
        AlgebraType::C(1),
        AlgebraType::C(2),
        AlgebraType::D(2),
        AlgebraType::D(3),
        AlgebraType::B(2),
    ];
    algs.iter().flat_map(|alg| module_cases(alg).into_iter().map(move |c| (*alg, c))).collect()
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("generic t", |t| !t.is_integer())
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn vacuum_is_a_highest_weight_state(t in nonzero_rational()) {
        for (alg, case) in lax_grid() {
            for coset in enumerate_cosets(&alg, &case).unwrap() {
                let lax = coset_lax(&alg, &case, &coset, &t).unwrap();
                prop_assert!(families::check_highest_weight(&lax).is_ok(), "{} {}", alg, coset.tag);
                prop_assert_eq!(families::vacuum_weight(&lax).unwrap(), coset.highest_weight(&t));
            }
        }
    }

    #[test]
    fn nondegenerate_families_satisfy_rtt_at_random_t(t in nonzero_rational(), seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let mut laxes: Vec<LaxMatrix<Q>> = vec![
            families::a_rect(3, 1, &t).unwrap(),
            families::a_rect(4, 2, &t).unwrap(),
            families::cd_nondegenerate(&AlgebraType::C(2), &t).unwrap(),
            families::cd_nondegenerate(&AlgebraType::D(3), &t).unwrap(),
            families::bd_nondegenerate(5, &t).unwrap(),
        ];
        let mu: Vec<i8> = (0..2).map(|_| if s.int_in(0, 1) == 0 { 1 } else { -1 }).collect();
        laxes.push(families::cd_mu(&AlgebraType::C(2), &t, &mu).unwrap());
        let k = [1, 2, 4, 5][s.int_in(0, 3) as usize];
        laxes.push(families::bd_k(5, &t, k).unwrap());
        for lax in &laxes {
            let report = rtt_check(lax, lax).unwrap();
            prop_assert!(report.passed(), "{}", report.to_json_line());
        }
    }

    #[test]
    fn gauge_matrices_are_unipotent_in_creation_operators(t in nonzero_rational()) {
        let mut sides = vec![
            families::a_factorisation_sides(2, 1, &t).unwrap(),
            families::a_factorisation_sides(3, 1, &t).unwrap(),
            families::a_factorisation_sides(3, 2, &t).unwrap(),
        ];
        for alg in [AlgebraType::C(1), AlgebraType::C(2), AlgebraType::D(2), AlgebraType::D(3)] {
            sides.push(families::cd_factorisation_sides(&alg, &t).unwrap());
        }
        for kk in [5, 6] {
            sides.push(families::bd_factorisation_sides(kk, &t).unwrap());
        }
        for side in &sides {
            let g = &side.gauge;
            for i in 0..g.rows() {
                for j in 0..g.cols() {
                    let entry = g.get(i, j);
                    for c in entry.coeffs() {
                        for m in c.terms().keys() {
                            prop_assert!(m.annihilation.iter().all(|&a| a == 0), "annihilator in G[{},{}]", i, j);
                        }
                    }
                    if i == j {
                        let one = qbgg::lax::OpPoly::scalar(g.space(), Q::one());
                        prop_assert_eq!(entry, &one, "diagonal of G at {}", i);
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------- transfer

#[test]
fn length_zero_traces_are_the_closed_characters() {
    let mut s = Sampler::new(103);
    let t = rat(3, 11);
    for alg in algebras_up_to_rank(3) {
        for case in module_cases(&alg) {
            let cosets = enumerate_cosets(&alg, &case).unwrap();
            for _ in 0..10 {
                let tw = TwistSpec::random(alg, &mut s);
                for coset in &cosets {
                    let lax = coset_lax(&alg, &case, coset, &t).unwrap();
                    assert_eq!(
                        character_plus(&lax, &tw).unwrap(),
                        closed_form_character(&case, coset, &t, &tw).unwrap(),
                        "{alg} {}",
                        coset.tag
                    );
                }
            }
        }
    }
}

#[test]
fn finite_module_traces_are_weyl_characters() {
    let mut s = Sampler::new(104);
    for alg in algebras_up_to_rank(3) {
        for case in module_cases(&alg) {
            let t = match case {
                ModuleCase::Spinor { .. } => rat(1, 2),
                _ => int(1),
            };
            let module = build_finite_module(&module_lax(&alg, &case, &t).unwrap()).unwrap();
            let hw = case.highest_weight(&alg, &t);
            for _ in 0..10 {
                let tw = TwistSpec::random_squares(alg, &mut s);
                assert_eq!(
                    module.character(&tw).unwrap().evaluate().unwrap(),
                    weyl_character(&alg, &hw, tw.tau()).unwrap(),
                    "{alg} {case:?}"
                );
            }
        }
    }
}

#[test]
fn q_operators_ignore_the_twist_prefactor() {
    let mut s = Sampler::new(105);
    let laxes: Vec<LaxMatrix<Q>> = vec![
        families::a_partonic(3, 2).unwrap(),
        families::a_degenerate(3, &[1, 3]).unwrap(),
        families::cd_degenerate(&AlgebraType::C(2), true).unwrap(),
        families::cd_degenerate(&AlgebraType::D(2), false).unwrap(),
        families::bd_degenerate(5, true).unwrap(),
    ];
    for lax in &laxes {
        let tw = TwistSpec::random(*lax.alg(), &mut s);
        let prefactor = q_twist_weights(lax, &tw).unwrap().prefactor;
        let plain = q_operator(lax, &tw, 1).unwrap();
        let doubled = q_operator_with_prefactor(lax, &tw, 1, &(int(2) * &prefactor)).unwrap();
        let random = q_operator_with_prefactor(lax, &tw, 1, &s.rational()).unwrap();
        assert_eq!(plain, doubled, "{}", lax.family());
        assert_eq!(plain, random, "{}", lax.family());
    }
}

#[test]
fn subset_q_operators_are_determinants_at_two_sites() {
    let mut s = Sampler::new(106);
    for (n, subsets) in [(2, vec![vec![1], vec![2]]), (3, vec![vec![1, 2], vec![1, 3], vec![2, 3]])] {
        let tw = TwistSpec::random(AlgebraType::A(n), &mut s);
        for subset in subsets {
            for sites in [1, 2] {
                let report = determinant_identity_check(&DeterminantKind::Subset { n, subset: subset.clone() }, sites, &tw);
                assert!(report.passed(), "{}", report.to_json_line());
            }
        }
    }
}

#[test]
fn every_degenerate_family_satisfies_its_twist_condition() {
    for alg in [
        AlgebraType::A(2),
        AlgebraType::A(3),
        AlgebraType::A(4),
        AlgebraType::C(1),
        AlgebraType::C(2),
        AlgebraType::D(2),
        AlgebraType::D(3),
        AlgebraType::B(2),
    ] {
        for report in degenerate_twist_checks(&alg).unwrap() {
            assert!(report.passed(), "{}", report.to_json_line());
        }
    }
}

/// The single-index Q-operator of `gl_2` at one site, entry by entry and
/// coefficient by coefficient in `x`, against floating-point partial sums of
/// the twisted Fock series (all twist weights inside the unit disc).
#[test]
fn single_index_q_matches_the_float_series() {
    let lax = families::a_partonic::<Q>(2, 1).unwrap();
    let tw = [(int(2), int(7)), (int(7), int(2)), (rat(1, 5), int(3)), (int(3), rat(1, 5))]
        .into_iter()
        .map(|(a, b)| TwistSpec::new(AlgebraType::A(2), vec![a, b]).unwrap())
        .find(|tw| q_twist_weights(&lax, tw).unwrap().weights.iter().all(|q| q.abs() < rat(1, 2)))
        .expect("a twist with weights inside the unit disc");
    let weights = q_twist_weights(&lax, &tw).unwrap();
    let fweights = TwistWeights::new(weights.weights.iter().map(rational_to_f64).collect());
    let exact = q_subset(2, &[1], &tw, 1).unwrap();
    let one = NormalPoly::<f64>::scalar(lax.space(), 1.0);
    let norm = fock_trace_partial(&one, &fweights, 200).unwrap();
    for row in 0..2 {
        for col in 0..2 {
            let entry = lax.matrix().get(row, col);
            for (j, c) in entry.coeffs().iter().enumerate() {
                let float = fock_trace_partial(&c.map_coeffs(rational_to_f64), &fweights, 200).unwrap() / norm;
                let value = rational_to_f64(&exact.entry(j, row, col));
                assert!((float - value).abs() <= 1e-9 * value.abs().max(1.0), "({row},{col}) x^{j}: {float} vs {value}");
            }
        }
    }
    // In this labelling the twist-weighted correction sits in entry (1,1) (one-based);
    // entry (2,2) is exactly 1.
    assert_eq!(exact.entry(0, 1, 1), Q::one());
    assert!(exact.entry(1, 1, 1).is_zero());
    assert!(!exact.entry(0, 0, 0).is_one() && !exact.entry(0, 0, 0).is_zero());
}
