use hdisc::classify::{multiplicity_pattern, random_form_with_pattern, MultiplicityPattern};
use hdisc::coincidence::{integer_partitions, DegeneracyPartition};
use hdisc::generator::{discriminant, run_pipeline, Capacity, CoefficientVector};
use hdisc::polyring::{MultiPoly, VariableId};
use hdisc::sl2::{act_on_form, UnimodularMatrix};
use hdisc::symmetric::is_symmetric;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn nontrivial(k: usize) -> Vec<DegeneracyPartition> {
    integer_partitions(k).into_iter().filter(|p| !p.is_trivial()).collect()
}

/// `sum position * exponent` over the coefficient variables of `m`.
fn weights(p: &MultiPoly) -> Vec<u32> {
    p.terms()
        .map(|(m, _)| {
            m.factors()
                .iter()
                .map(|&(v, e)| match v {
                    VariableId::Coeff(i) => i * e,
                    other => panic!("unexpected {other}"),
                })
                .sum()
        })
        .collect()
}

#[test]
fn every_stage_is_consistent_up_to_degree_four() {
    for k in 2..=4 {
        for part in nontrivial(k) {
            let pipe = run_pipeline(&part, &Capacity::default()).unwrap();
            for s in &pipe.symmetrized {
                assert!(is_symmetric(s, k).unwrap(), "{part}: {s}");
            }
            for (e, s) in pipe.unpruned.equations.iter().zip(&pipe.symmetrized) {
                assert!(e.poly.is_homogeneous(), "{part}: {}", e.poly);
                assert_eq!(e.poly.degree(), Some(e.cleared_power), "{part}");
                let lambda_degree = s.degree().unwrap();
                assert!(
                    weights(&e.poly).iter().all(|&w| w == lambda_degree),
                    "{part}: {}",
                    e.poly
                );
                // minimal clearing: some term is free of the leading coefficient
                assert!(e.poly.terms().any(|(m, _)| m.exponent(VariableId::Coeff(0)) == 0));
                assert!(e.poly.terms().all(|(_, c)| c.is_integer()));
            }
            assert_eq!(
                pipe.system.equations.len() + pipe.system.pruned.len(),
                pipe.unpruned.equations.len()
            );
        }
    }
}

#[test]
fn discriminant_degree_law() {
    for k in 2..=5 {
        let d = discriminant(k).unwrap();
        assert_eq!(d.degree(), Some(2 * k as u32 - 2));
        assert!(weights(&d).iter().all(|&w| w == (k * (k - 1)) as u32));
    }
}

#[test]
fn quartic_stage_listings() {
    let part = DegeneracyPartition::parse(4, "3").unwrap();
    let pipe = run_pipeline(&part, &Capacity::default()).unwrap();
    let expected: Vec<MultiPoly> = [
        "(l1 - l2)^2*(l3 - l4)^2",
        "(l1 - l3)^2*(l2 - l4)^2",
        "(l1 - l4)^2*(l2 - l3)^2",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let key = |v: &[MultiPoly]| {
        let mut t: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        t.sort();
        t
    };
    assert_eq!(key(&pipe.root_system.polys), key(&expected));
    let [p1, p2, p3] = [&expected[0], &expected[1], &expected[2]];
    assert_eq!(pipe.symmetrized[0], &(p1 + p2) + p3);
    assert_eq!(pipe.symmetrized[1], &(&(p1 * p2) + &(p1 * p3)) + &(p2 * p3));
    assert_eq!(pipe.symmetrized[2], &(p1 * p2) * p3);
}

#[test]
fn extended_degree_five_systems_match_the_oracle() {
    for shape_str in ["5", "3,2"] {
        let part = DegeneracyPartition::parse(5, shape_str).unwrap();
        let sys = run_pipeline(&part, &Capacity::default()).unwrap().system;
        for shape in integer_partitions(5) {
            let pattern = MultiplicityPattern::affine(shape.parts()).unwrap();
            let expected = hdisc::coincidence::pattern_matches(&part, &pattern.to_coincidence_pattern());
            for seed in 0..10 {
                let f = random_form_with_pattern(&pattern, seed).unwrap();
                let got = hdisc::classify::satisfies_system(&sys, &f).unwrap();
                assert_eq!(got, expected, "{part} on {f}");
            }
        }
    }
}

fn quartic() -> impl Strategy<Value = CoefficientVector> {
    prop::collection::vec(-9i64..=9, 5)
        .prop_filter("nonzero leading", |c| c[0] != 0)
        .prop_map(|c| CoefficientVector::from_integers(&c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn systems_are_constant_on_orbits(f in quartic(), seed: u64) {
        let g = UnimodularMatrix::random(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let image = act_on_form(&g, &f);
        prop_assume!(!num_traits::Zero::is_zero(image.leading()));
        for part in nontrivial(4) {
            let sys = run_pipeline(&part, &Capacity::default()).unwrap().system;
            let before = hdisc::classify::satisfies_system(&sys, &f).unwrap();
            let after = hdisc::classify::satisfies_system(&sys, &image).unwrap();
            prop_assert_eq!(before, after);
        }
        let (before, after) = (multiplicity_pattern(&f).unwrap(), multiplicity_pattern(&image).unwrap());
        prop_assert_eq!(before.multiplicities(), after.multiplicities());
    }
}
