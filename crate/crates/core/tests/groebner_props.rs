mod support;

use jetram_core::groebner::{
    buchberger_reduced, ideal_intersection, ideal_membership, ideal_quotient, ideals_equal, IdealPresentation,
    MonomialOrder,
};
use jetram_core::polyring::VariableTable;
use jetram_core::{CapKind, Config, Error, Field, PolyRing, Polynomial};
use proptest::prelude::*;
use rand::Rng;
use support::*;

fn random_ring(rng: &mut rand_chacha::ChaCha8Rng, field: Field) -> std::sync::Arc<PolyRing> {
    let n = rng.gen_range(1..=3);
    let names = ["x", "y", "z"];
    PolyRing::from_names(field, &names[..n]).unwrap()
}

#[test]
fn membership_matches_linear_algebra_on_homogeneous_ideals() {
    let mut rng = rng(11);
    for case in 0..50 {
        let field = if case % 2 == 0 { gf(7) } else { Field::Rationals };
        let ring = random_ring(&mut rng, field);
        let k = rng.gen_range(1..=3);
        let gens: Vec<Polynomial> = (0..k)
            .map(|_| {
                let d = rng.gen_range(1..=3);
                random_form(&mut rng, &ring, d, 3)
            })
            .collect();
        let ideal = IdealPresentation::new(&ring, gens.clone()).unwrap();
        for _ in 0..4 {
            let d = rng.gen_range(1..=4);
            let f = random_form(&mut rng, &ring, d, 4);
            let expect = bounded_membership(&f, ideal.generators(), d);
            assert_eq!(ideal_membership(&f, &ideal).unwrap(), expect, "case {case}: {f} in {ideal}");
        }
        // a combination of generators with form multipliers is a member
        let d = 4;
        let mut f = Polynomial::zero(&ring);
        for g in ideal.generators() {
            let h = random_form(&mut rng, &ring, d - g.total_degree().unwrap(), 3);
            f = &f + &(&h * g);
        }
        assert!(ideal_membership(&f, &ideal).unwrap());
        assert!(bounded_membership(&f, ideal.generators(), d));
    }
}

#[test]
fn membership_is_consistent_on_inhomogeneous_ideals() {
    let mut rng = rng(12);
    for case in 0..50 {
        let field = if case % 2 == 0 { gf(32003) } else { Field::Rationals };
        let ring = random_ring(&mut rng, field);
        let k = rng.gen_range(1..=3);
        let gens: Vec<Polynomial> = (0..k).map(|_| random_poly(&mut rng, &ring, 3, 3)).collect();
        let ideal = IdealPresentation::new(&ring, gens).unwrap();
        let mut f = Polynomial::zero(&ring);
        for g in ideal.generators() {
            f = &f + &(&random_poly(&mut rng, &ring, 2, 3) * g);
        }
        assert!(ideal_membership(&f, &ideal).unwrap(), "case {case}");
        for _ in 0..3 {
            let f = random_poly(&mut rng, &ring, 3, 4);
            if bounded_membership(&f, ideal.generators(), 6) {
                assert!(ideal_membership(&f, &ideal).unwrap(), "case {case}: {f}");
            }
        }
    }
}

#[test]
fn spec_basis_example_certified_by_oracle() {
    let ring = PolyRing::from_names(Field::Rationals, &["x", "y"]).unwrap();
    let v = vars(&ring);
    let one = Polynomial::one(&ring);
    let gens = vec![&(&v[0] * &v[0]) - &v[1], &(&v[0] * &v[1]) - &one];
    let basis = buchberger_reduced(&IdealPresentation::new(&ring, gens.clone()).unwrap(), &MonomialOrder::Grevlex).unwrap();
    let target = &(&v[1] * &v[1]) - &v[0];
    assert!(basis.polynomials().contains(&target));
    for g in basis.polynomials() {
        assert!(bounded_membership(&g, &gens, 6), "{g}");
    }
}

fn ring_with_seed(seed: Option<u64>) -> std::sync::Arc<PolyRing> {
    let cfg = Config { shuffle_seed: seed, ..Config::default() };
    PolyRing::with_config(gf(101), VariableTable::from_names(&["x", "y", "z"]).unwrap(), cfg)
}

#[test]
fn reduced_bases_do_not_depend_on_generator_order() {
    let mut rng = rng(13);
    for _ in 0..20 {
        let base = ring_with_seed(None);
        let gens: Vec<Polynomial> = (0..3).map(|_| random_poly(&mut rng, &base, 3, 3)).collect();
        let reference = IdealPresentation::new(&base, gens.clone()).unwrap().basis().unwrap().polynomials();
        for seed in 0..4 {
            let ring = ring_with_seed(Some(seed));
            let moved: Vec<Polynomial> = gens.iter().map(|g| Polynomial::from_terms(&ring, g.terms().to_vec())).collect();
            let basis = IdealPresentation::new(&ring, moved).unwrap().basis().unwrap().polynomials();
            let a: Vec<String> = basis.iter().map(ToString::to_string).collect();
            let b: Vec<String> = reference.iter().map(ToString::to_string).collect();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn normal_forms_are_idempotent_and_quotients_contain_the_ideal() {
    let mut rng = rng(14);
    for _ in 0..30 {
        let ring = PolyRing::from_names(gf(5), &["x", "y"]).unwrap();
        let gens: Vec<Polynomial> = (0..2).map(|_| random_poly(&mut rng, &ring, 2, 3)).collect();
        let j = IdealPresentation::new(&ring, gens).unwrap();
        let basis = j.basis().unwrap();
        let f = random_poly(&mut rng, &ring, 4, 5);
        let nf = basis.normal_form(&f).unwrap();
        assert_eq!(basis.normal_form(&nf).unwrap(), nf);
        assert!(ideal_membership(&(&f - &nf), &j).unwrap());

        let g = random_poly(&mut rng, &ring, 2, 2);
        if g.is_zero() {
            continue;
        }
        let q = ideal_quotient(&j, &g).unwrap();
        for h in q.generators() {
            assert!(ideal_membership(&(h * &g), &j).unwrap());
        }
        for h in j.generators() {
            assert!(ideal_membership(h, &q).unwrap());
        }
        let qq = ideal_quotient(&q, &g).unwrap();
        for h in q.generators() {
            assert!(ideal_membership(h, &qq).unwrap());
        }
        let meet = ideal_intersection(&j, &q).unwrap();
        assert!(ideals_equal(&meet, &j).unwrap());
    }
}

#[test]
fn pair_cap_aborts_with_a_cap_error() {
    let cfg = Config { max_pairs: 2, ..Config::default() };
    let ring = PolyRing::with_config(Field::Rationals, VariableTable::from_names(&["x", "y", "z"]).unwrap(), cfg);
    let v = vars(&ring);
    let one = Polynomial::one(&ring);
    let gens = vec![&(&v[0] * &v[1]) - &one, &(&v[1] * &v[2]) - &v[0], &(&v[2] * &v[0]) - &v[1]];
    let err = IdealPresentation::new(&ring, gens).unwrap().basis().unwrap_err();
    assert!(matches!(err, Error::ResourceCap(CapKind::Pairs(2))));
}

#[test]
fn degree_cap_aborts_with_a_cap_error() {
    let cfg = Config { max_degree: 3, ..Config::default() };
    let ring = PolyRing::with_config(Field::Rationals, VariableTable::from_names(&["x", "y"]).unwrap(), cfg);
    let v = vars(&ring);
    let gens = vec![&(&v[0].pow(3) * &v[1]) - &v[1], &v[1].pow(3) - &v[0]];
    let err = IdealPresentation::new(&ring, gens).unwrap().basis().unwrap_err();
    assert!(matches!(err, Error::ResourceCap(CapKind::Degree(3))));
}

fn arb_poly() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..4, 2), -5i64..=5), 0..6)
}

fn build(terms: &[(Vec<u32>, i64)], ring: &std::sync::Arc<PolyRing>) -> Polynomial {
    let field = ring.field();
    Polynomial::from_terms(
        ring,
        terms.iter().map(|(e, c)| (jetram_core::Monomial::from_exponents(e.clone()), field.from_i64(*c))),
    )
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly(), p in prop::sample::select(vec![0u32, 2, 3, 7])) {
        let field = if p == 0 { Field::Rationals } else { gf(p) };
        let ring = PolyRing::from_names(field, &["x", "y"]).unwrap();
        let (a, b, c) = (build(&a, &ring), build(&b, &ring), build(&c, &ring));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(a.partial_derivative(0).unwrap().try_mul(&b).unwrap().try_add(&a.try_mul(&b.partial_derivative(0).unwrap()).unwrap()).unwrap(),
            (&a * &b).partial_derivative(0).unwrap());
    }

    #[test]
    fn normal_form_decides_membership_of_combinations(a in arb_poly(), b in arb_poly()) {
        let ring = PolyRing::from_names(gf(5), &["x", "y"]).unwrap();
        let v = vars(&ring);
        let g = &(&v[0] * &v[0]) - &v[1];
        let j = IdealPresentation::new(&ring, [g.clone()]).unwrap();
        let f = &(&build(&a, &ring) * &g) + &build(&b, &ring);
        let basis = j.basis().unwrap();
        prop_assert_eq!(basis.normal_form(&f).unwrap(), basis.normal_form(&build(&b, &ring)).unwrap());
    }
}
