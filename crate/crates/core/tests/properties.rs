use pairs_core::derivations::{der_module, ilog_generators, pdim_bounds};
use pairs_core::field::{Field, PrimeField, Rationals};
use pairs_core::fixtures;
use pairs_core::graded::GradedEngine;
use pairs_core::groebner::ideal::Ideal;
use pairs_core::groebner::resolution::pairs_betti;
use pairs_core::linalg::ExactMatrix;
use pairs_core::matroid::{full_set, Realization};
use pairs_core::pairs::{LoopPolicy, PairsIdeal};
use pairs_core::primes::{associated_primes, codim_check, uniform_checks};
use proptest::prelude::*;

fn build(rows: &[Vec<i64>]) -> Option<PairsIdeal<Rationals>> {
    let m = ExactMatrix::from_i64(&Rationals, rows).ok()?;
    let re = Realization::new("random", m).ok()?;
    PairsIdeal::build(&re, LoopPolicy::Reject).ok()
}

fn matrix(r: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), r)
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3, 0usize..=2).prop_flat_map(|(r, extra)| matrix(r, r + 1 + extra))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_slice_has_dimension_kappa(rows in small_matrix()) {
        let pi = build(&rows);
        prop_assume!(pi.is_some());
        let pi = pi.unwrap();
        let e = GradedEngine::new(&pi);
        prop_assert_eq!(e.derivation_slice_dim(1), pi.kappa());
        for c in pi.euler_vectors() {
            prop_assert!(pi.combination(&c).is_zero());
        }
    }

    #[test]
    fn koszul_and_resolution_agree(rows in small_matrix()) {
        let pi = build(&rows);
        prop_assume!(pi.is_some());
        let pi = pi.unwrap();
        let (res, pdim) = pairs_betti(&pi);
        let w = res.entries().map(|((_, i, j), _)| i + j).max().unwrap_or(0);
        let kos = GradedEngine::new(&pi).koszul_betti(w);
        let a: Vec<_> = kos.entries().filter(|e| e.1 > 0).collect();
        let b: Vec<_> = res.entries().filter(|e| e.1 > 0).collect();
        prop_assert_eq!(a, b);
        prop_assert!(pdim_bounds(&pi).cyclic_flat_bound <= pdim);
        prop_assert!(pdim <= pi.nvars());
    }

    #[test]
    fn dual_table_is_the_transpose(rows in small_matrix()) {
        let pi = build(&rows);
        prop_assume!(pi.as_ref().is_some_and(|p| p.matroid().coloops() == 0));
        let pi = pi.unwrap();
        let (a, _) = pairs_betti(&pi);
        let (b, _) = pairs_betti(&pi.swap_roles().unwrap());
        prop_assert!(a.transpose().same_numbers(&b));
    }

    #[test]
    fn minimal_primes_have_the_predicted_codimension(rows in small_matrix()) {
        let pi = build(&rows);
        prop_assume!(pi.is_some());
        for (_, got, want) in codim_check(&pi.unwrap()) {
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn reduced_basis_ignores_generator_order(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
        let pi = build(&fixtures::a3().rows).unwrap();
        let gens = pi.generator_polys();
        let shuffled: Vec<_> = perm.iter().map(|&i| gens[i].clone()).collect();
        let a = Ideal::new(&Rationals, pi.nvars(), gens).basis();
        let b = Ideal::new(&Rationals, pi.nvars(), shuffled).basis();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn uniform_products_and_primes(r in 1usize..=3, extra in 1usize..=2) {
        let n = r + extra;
        let pi = build(&fixtures::uniform(r, n).rows).unwrap();
        let u = uniform_checks(&pi);
        prop_assert!(u.uniform && u.lemma_holds());
        prop_assert!(u.basis_failures.is_empty());
        let full = full_set(n);
        let got: Vec<_> = associated_primes(&pi, false).unwrap().iter().map(|p| (p.i, p.j)).collect();
        let allowed = [(full, 0), (0, full), (full, full)];
        prop_assert!(got.iter().all(|p| allowed.contains(p)), "{:?}", got);
        prop_assert!(got.contains(&(full, 0)) && got.contains(&(0, full)));
    }
}

#[test]
fn a_degree_one_agrees_with_derivations() {
    for f in [fixtures::a3(), fixtures::seven(), fixtures::uniform(3, 5)] {
        let pi = build(&f.rows).unwrap();
        let e = GradedEngine::new(&pi);
        let d = der_module(&pi).unwrap();
        let il = ilog_generators(&pi, &d).unwrap();
        for x in 0..5 {
            let ix = e.ix_slice(x, 1).unwrap();
            let lg = e.ilog_slice(x, 1, &il).unwrap();
            assert!(ix.contains(&Rationals, &lg), "{} x = {x}", f.name);
            assert_eq!(ix.dim(), lg.dim(), "{} x = {x}", f.name);
            assert_eq!(ix.dim(), pairs_core::derivations::der_dim_direct(&pi, x), "{} x = {x}", f.name);
        }
    }
}

#[test]
fn a3_has_no_new_relations_in_bidegree_two_two() {
    let pi = build(&fixtures::a3().rows).unwrap();
    let e = GradedEngine::new(&pi);
    let d = der_module(&pi).unwrap();
    let il = ilog_generators(&pi, &d).unwrap();
    assert_eq!(e.ix_new_generators(2, 2).unwrap(), 0);
    assert_eq!(e.ix_slice(2, 2).unwrap().dim(), 56);
    assert_eq!(e.ilog_slice(2, 2, &il).unwrap().dim(), 56);
}

#[test]
fn bracelet_relation_in_bidegree_two_two() {
    let pi = build(&fixtures::bracelet9().rows).unwrap();
    let e = GradedEngine::new(&pi);
    let d = der_module(&pi).unwrap();
    let il = ilog_generators(&pi, &d).unwrap();
    assert_eq!(e.ix_new_generators(2, 2).unwrap(), 1);
    assert_eq!(e.ix_slice(2, 2).unwrap().dim(), 123);
    assert_eq!(e.ilog_slice(2, 2, &il).unwrap().dim(), 122);
}

#[test]
fn linear_type_verdicts() {
    let a3 = build(&fixtures::a3().rows).unwrap();
    let v = GradedEngine::new(&a3).linear_type_check(3).unwrap();
    assert!(v.equal_up_to_bound());
    assert!(v.checked.iter().all(|c| c.3 == c.4));
    let br = build(&fixtures::bracelet9().rows).unwrap();
    let v = GradedEngine::new(&br).linear_type_check(3).unwrap();
    assert_eq!(v.first_failure, Some((2, 0, 2)));
}

#[test]
fn prime_field_matches_rationals_on_a3() {
    let k = PrimeField::new(32003).unwrap();
    let re = fixtures::a3().realization(&k).unwrap();
    let pf = PairsIdeal::build(&re, LoopPolicy::Reject).unwrap();
    let q = build(&fixtures::a3().rows).unwrap();
    let (a, pa) = pairs_betti(&pf);
    let (b, pb) = pairs_betti(&q);
    assert_eq!(pa, pb);
    assert_eq!(a.entries().collect::<Vec<_>>(), b.entries().collect::<Vec<_>>());
    assert_eq!(k.characteristic(), 32003);
}
