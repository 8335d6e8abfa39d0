use std::sync::Arc;

use equivar::actions::{skew_group_algebra, SkewAlgebra};
use equivar::algebras::{endo_algebra, hom_space, is_projective, stable_hom, Algebra};
use equivar::equivariant::{adjunction_check, forget, hom_decomposition, hom_g_action, phi, phi_inv};
use equivar::fixtures::{self, random_combination, random_invertible, random_skew_module, random_vec, test_complexes};
use equivar::groups::{characters, commutator_subgroup, irreducibles, quotient_group, reynolds, FiniteGroup, Rep};
use equivar::homotopy::{equivariant_homotopy_check, homotopy_boundary, null_homotopy, truncation_check, Complex};
use equivar::scenario::{run_scenario, Scenario};
use equivar::{Fp, Mat, Prime};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn prime_strategy() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 101]).prop_map(|p| Prime::new(p).unwrap())
}

fn random_mat(p: Prime, rows: usize, cols: usize, r: &mut ChaCha8Rng) -> Mat {
    // Sparse-ish entries so that rank deficiency actually shows up.
    Mat::from_fn(p, rows, cols, |_, _| if r.gen_bool(0.4) { 0 } else { r.gen_range(0..p.get()) })
}

fn c2() -> SkewAlgebra {
    skew_group_algebra(&fixtures::c2_dual_numbers()).unwrap()
}

fn c4() -> SkewAlgebra {
    skew_group_algebra(&fixtures::c4_dual_numbers()).unwrap()
}

fn s3_sign() -> SkewAlgebra {
    skew_group_algebra(&fixtures::s3_sign_dual_numbers()).unwrap()
}

fn fixture(k: usize) -> SkewAlgebra {
    match k % 3 {
        0 => c2(),
        1 => c4(),
        _ => s3_sign(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nonzero_elements_are_invertible(p in prime_strategy(), v in 1i64..1000) {
        let a = Fp::new(p, v);
        prop_assume!(!a.is_zero());
        prop_assert_eq!((a * a.inv().unwrap()).value(), 1);
    }

    #[test]
    fn rref_is_idempotent(p in prime_strategy(), rows in 0usize..7, cols in 0usize..7, seed: u64) {
        let m = random_mat(p, rows, cols, &mut rng(seed));
        let once = m.rref().reduced;
        prop_assert_eq!(once.rref().reduced, once.clone());
        prop_assert_eq!(once.rank(), m.rank());
    }

    #[test]
    fn solutions_and_kernels_are_exact(p in prime_strategy(), rows in 1usize..7, cols in 1usize..7, seed: u64) {
        let mut r = rng(seed);
        let a = random_mat(p, rows, cols, &mut r);
        let b = if r.gen_bool(0.5) { &a * &random_mat(p, cols, 1, &mut r) } else { random_mat(p, rows, 1, &mut r) };
        if let Some(sol) = a.solve(&b).unwrap() {
            prop_assert_eq!(&a * &sol.particular, b);
        }
        let kernel = a.nullspace();
        prop_assert_eq!(kernel.len(), cols - a.rank());
        for v in kernel {
            prop_assert!((&a * &v).is_zero());
        }
        let left = a.left_kernel();
        prop_assert!((&left * &a).is_zero());
        prop_assert_eq!(left.rows(), rows - a.rank());
    }

    #[test]
    fn kronecker_rank_is_multiplicative(p in prime_strategy(), shape in (1usize..7, 1usize..7, 1usize..7, 1usize..7), seed: u64) {
        let mut r = rng(seed);
        let a = random_mat(p, shape.0, shape.1, &mut r);
        let b = random_mat(p, shape.2, shape.3, &mut r);
        prop_assert_eq!(a.kron(&b).unwrap().rank(), a.rank() * b.rank());
    }

    #[test]
    fn matrices_round_trip_through_json(p in prime_strategy(), rows in 0usize..5, cols in 0usize..5, seed: u64) {
        let m = random_mat(p, rows, cols, &mut rng(seed));
        let back: Mat = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn averaging_is_an_invariant_projection(which in 0usize..4, seed: u64) {
        let (g, p) = match which {
            0 => (FiniteGroup::cyclic(2), 5),
            1 => (FiniteGroup::cyclic(3), 7),
            2 => (FiniteGroup::symmetric(3), 7),
            _ => (FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)), 3),
        };
        let g = Arc::new(g);
        let p = Prime::new(p).unwrap();
        let reg = Rep::regular(g.clone(), p);
        let t = random_invertible(p, g.order(), &mut rng(seed));
        let ti = t.inverse().unwrap();
        let conj = Rep::new(g.clone(), p, g.elements().map(|h| &(&ti * reg.matrix(h)) * &t).collect()).unwrap();
        let e = reynolds(&conj).unwrap();
        prop_assert_eq!(&e * &e, e.clone());
        for h in g.elements() {
            prop_assert_eq!(&e * conj.matrix(h), e.clone());
        }
        prop_assert_eq!(e.rank(), 1);
    }

    #[test]
    fn random_permutation_groups_are_groups(gens in prop::collection::vec(Just((0..5).collect::<Vec<usize>>()).prop_shuffle(), 1..3)) {
        let g = FiniteGroup::from_permutations(5, &gens).unwrap();
        prop_assert_eq!(120 % g.order(), 0);
        let table: Vec<Vec<usize>> = g.table().to_vec();
        prop_assert!(FiniteGroup::from_table(g.names().to_vec(), table).is_ok());
        let g = Arc::new(g);
        let q = quotient_group(&commutator_subgroup(&g)).unwrap();
        for a in g.elements() {
            for b in g.elements() {
                prop_assert_eq!(q.projection[g.mul(a, b)], q.group.mul(q.projection[a], q.projection[b]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn actions_compose_on_the_right(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let act = &s.action;
        let g = act.group();
        let a = random_vec(act.p(), act.algebra().dim(), &mut rng(seed));
        for x in g.elements() {
            for y in g.elements() {
                prop_assert_eq!(act.apply(&act.apply(&a, x), y), act.apply(&a, g.mul(x, y)));
            }
        }
    }

    #[test]
    fn group_elements_conjugate_by_the_action(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let a = random_vec(s.algebra.p(), s.base_dim(), &mut rng(seed));
        let g = s.group();
        for x in g.elements() {
            let lhs = s.algebra.mul(&s.algebra.mul(&s.group_element(x), &s.embed_base(&a)), &s.group_element(g.inv(x)));
            prop_assert_eq!(lhs, s.embed_base(&s.action.apply(&a, g.inv(x))));
        }
    }

    #[test]
    fn twisting_composes(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let m = phi(&s, &random_skew_module(&s, 6, &mut rng(seed)).unwrap()).unwrap();
        let g = s.group();
        for x in g.elements() {
            let mx = s.action.twist_module(m.base(), x).unwrap();
            for y in g.elements() {
                prop_assert_eq!(s.action.twist_module(&mx, y).unwrap(), s.action.twist_module(m.base(), g.mul(x, y)).unwrap());
            }
        }
    }

    #[test]
    fn dictionary_round_trips_exactly(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let m = random_skew_module(&s, 8, &mut rng(seed)).unwrap();
        let x = phi(&s, &m).unwrap();
        x.validate().unwrap();
        prop_assert_eq!(phi_inv(&s, &x).unwrap(), m);
        let again = phi(&s, &phi_inv(&s, &x).unwrap()).unwrap();
        prop_assert_eq!(again.lambdas(), x.lambdas());
    }

    #[test]
    fn invariant_homs_are_skew_homs(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let mut r = rng(seed);
        let m = random_skew_module(&s, 6, &mut r).unwrap();
        let n = random_skew_module(&s, 6, &mut r).unwrap();
        let skew_homs = hom_space(&m, &n).unwrap();
        for h in &skew_homs {
            prop_assert!(m.is_hom_to(&n, h));
        }
        let fixed = hom_g_action(&phi(&s, &m).unwrap(), &phi(&s, &n).unwrap()).unwrap().fixed;
        prop_assert_eq!(fixed.len(), skew_homs.len());
    }

    #[test]
    fn adjunction_scalar_is_the_group_order(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let x = phi(&s, &random_skew_module(&s, 6, &mut rng(seed)).unwrap()).unwrap();
        let r = adjunction_check(&x).unwrap();
        prop_assert_eq!(r.scalar, s.algebra.p().residue(s.group().order()));
        prop_assert!(r.omega_identity);
    }

    #[test]
    fn hom_decomposition_totals(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let mut r = rng(seed);
        let x = phi(&s, &random_skew_module(&s, 6, &mut r).unwrap()).unwrap();
        let y = phi(&s, &random_skew_module(&s, 6, &mut r).unwrap()).unwrap();
        let irreps = irreducibles(s.group(), s.algebra.p(), 0).unwrap();
        let d = hom_decomposition(&x, &y, &irreps).unwrap();
        let total: usize = d.multiplicities.iter().zip(&d.irrep_dims).map(|(m, n)| m * n).sum();
        prop_assert_eq!(total, hom_space(x.base(), y.base()).unwrap().len());
    }

    #[test]
    fn projectivity_matches_on_both_sides(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let m = random_skew_module(&s, 8, &mut rng(seed)).unwrap();
        prop_assert_eq!(is_projective(&m).projective, is_projective(&forget(&phi(&s, &m).unwrap())).projective);
    }

    #[test]
    fn projectivity_of_sums(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let mut r = rng(seed);
        let m = random_skew_module(&s, 6, &mut r).unwrap();
        let n = random_skew_module(&s, 6, &mut r).unwrap();
        let sum = m.direct_sum(&n).unwrap();
        prop_assert_eq!(is_projective(&sum).projective, is_projective(&m).projective && is_projective(&n).projective);
        prop_assert!(is_projective(&s.algebra.free_module(1 + (seed % 3) as usize)).projective);
    }

    #[test]
    fn projectives_vanish_stably(seed: u64) {
        let alg = Arc::new(Algebra::truncated_poly(fixtures::prime(5), 2 + (seed % 2) as usize));
        let s = c2();
        let m = phi(&s, &random_skew_module(&s, 6, &mut rng(seed)).unwrap()).unwrap();
        let free = s.algebra.free_module(1);
        prop_assert_eq!(stable_hom(&forget(&m), &forget(&phi(&s, &free).unwrap())).unwrap().stable_dim, 0);
        let p = alg.free_module(2);
        let aug = fixtures::augmentation(&alg).unwrap();
        prop_assert_eq!(stable_hom(&aug, &p).unwrap().stable_dim, 0);
        prop_assert_eq!(stable_hom(&p, &aug).unwrap().stable_dim, 0);
        prop_assert_eq!(stable_hom(&aug, &aug).unwrap().stable_dim, 1);
    }

    #[test]
    fn endomorphism_algebras_validate(k in 0usize..3, seed: u64) {
        let s = fixture(k);
        let m = random_skew_module(&s, 6, &mut rng(seed)).unwrap();
        let (e, basis) = endo_algebra(&m).unwrap();
        prop_assert_eq!(e.dim(), basis.len());
        prop_assert_eq!(e.dim(), hom_space(&m, &m).unwrap().len());
    }

    #[test]
    fn characters_form_a_group(which in 0usize..3) {
        let (g, p) = [(FiniteGroup::cyclic(4), 5u64), (FiniteGroup::symmetric(3), 7), (FiniteGroup::cyclic(6), 7)][which].clone();
        let g = Arc::new(g);
        let chars = characters(&g, Prime::new(p).unwrap()).unwrap();
        prop_assert!(chars[0].is_trivial());
        for a in &chars {
            prop_assert!(a.is_homomorphism());
            for b in &chars {
                prop_assert!(chars.contains(&a.product(b)));
            }
        }
    }
}

fn random_two_term(s: &SkewAlgebra, r: &mut ChaCha8Rng) -> Complex {
    loop {
        let m = random_skew_module(s, 4, r).unwrap();
        let n = random_skew_module(s, 4, r).unwrap();
        let homs = hom_space(&m, &n).unwrap();
        let d = random_combination(s.algebra.p(), m.dim(), n.dim(), &homs, r);
        if let Ok(c) = Complex::new(s.algebra.clone(), r.gen_range(-1..=1), vec![m, n], vec![d]) {
            return c;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn null_homotopies_are_sound(seed: u64) {
        let s = c2();
        let mut r = rng(seed);
        let x = random_two_term(&s, &mut r);
        let y = random_two_term(&s, &mut r);
        let mut h = Vec::new();
        for n in x.lo().min(y.lo())..=x.end().max(y.end()) {
            let homs = hom_space(&x.term(n), &y.term(n - 1)).unwrap();
            h.push((n, random_combination(s.algebra.p(), x.dim(n), y.dim(n - 1), &homs, &mut r)));
        }
        let f = homotopy_boundary(&x, &y, &h).unwrap();
        let found = null_homotopy(&f).unwrap();
        prop_assert!(found.is_some());
        prop_assert_eq!(homotopy_boundary(&x, &y, &found.unwrap()).unwrap(), f);
    }

    #[test]
    fn homotopy_and_truncation_checks_hold(k in 0usize..2, seed: u64) {
        let s = fixture(k);
        let mut r = rng(seed);
        let x = random_two_term(&s, &mut r);
        let y = random_two_term(&s, &mut r);
        let report = equivariant_homotopy_check(&s, &x, &y).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
        for n in x.lo() - 1..=x.end() {
            let t = truncation_check(&s, &x, n).unwrap();
            prop_assert!(t.passed(), "{:?}", t);
        }
    }

    #[test]
    fn reports_are_deterministic(seed in 0u64..1000) {
        let text = include_str!("../scenarios/c2-trivial.json");
        let scenario = Scenario::from_json(text).unwrap();
        let a = run_scenario(&scenario, seed, false).unwrap().to_json();
        let b = run_scenario(&scenario, seed, false).unwrap().to_json();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn fixture_complexes_pass_the_homotopy_comparison() {
    let s = c2();
    let cs = test_complexes(&s, &mut rng(3)).unwrap();
    for x in &cs {
        for y in &cs {
            assert!(equivariant_homotopy_check(&s, x, y).unwrap().passed());
        }
    }
}
