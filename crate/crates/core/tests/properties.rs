//! Property suites for the structural invariants.

use proptest::collection::vec;
use proptest::prelude::*;

use monoreg::betti::multigraded_betti;
use monoreg::classify::{
    self, is_stable, is_strongly_stable, stable_closure, strongly_stable_closure,
};
use monoreg::homology::Field;
use monoreg::ideal::{ExponentVector, MonomialIdeal};
use monoreg::newton::{closure_membership_oracle, integral_closure, np_membership};

fn raw_gens(n: usize, max_entry: u64, max_gens: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    vec(vec(0..=max_entry, n), 1..=max_gens)
}

/// Proper, nonzero ideals in `n` variables with entries up to `max_entry`.
fn proper_ideal(n: usize, max_entry: u64, max_gens: usize) -> impl Strategy<Value = MonomialIdeal> {
    raw_gens(n, max_entry, max_gens).prop_filter_map("proper nonzero", move |gens| {
        let gens: Vec<ExponentVector> = gens
            .into_iter()
            .filter(|g| g.iter().any(|&e| e > 0))
            .map(ExponentVector::new)
            .collect();
        if gens.is_empty() {
            return None;
        }
        MonomialIdeal::new(n, gens).ok()
    })
}

proptest! {
    #[test]
    fn minimalization_is_idempotent_and_presentation_free(gens in raw_gens(3, 4, 5)) {
        let vectors: Vec<ExponentVector> = gens.into_iter().map(ExponentVector::new).collect();
        let ideal = MonomialIdeal::new(3, vectors.clone()).unwrap();
        let again = MonomialIdeal::new(3, ideal.gens().to_vec()).unwrap();
        prop_assert_eq!(&again, &ideal);

        // adding redundant multiples never changes the ideal
        let mut padded = vectors.clone();
        for v in &vectors {
            padded.push(v.checked_add(v).unwrap());
        }
        prop_assert_eq!(&MonomialIdeal::new(3, padded).unwrap(), &ideal);
    }

    #[test]
    fn power_membership_at_one_is_membership(
        ideal in proper_ideal(3, 4, 4),
        point in vec(0u64..=6, 3),
    ) {
        let b = ExponentVector::new(point);
        prop_assert_eq!(
            ideal.power_contains(&b, 1).unwrap(),
            ideal.contains(&b).unwrap()
        );
    }

    #[test]
    fn height_is_invariant_under_variable_permutations(ideal in proper_ideal(4, 3, 4)) {
        let h = ideal.height().unwrap();
        let rotated: Vec<ExponentVector> = ideal
            .gens()
            .iter()
            .map(|g| {
                let e = g.entries();
                ExponentVector::new(vec![e[3], e[0], e[1], e[2]])
            })
            .collect();
        let permuted = MonomialIdeal::new(4, rotated).unwrap();
        prop_assert_eq!(permuted.height().unwrap(), h);
    }

    #[test]
    fn json_round_trip_is_byte_identical(ideal in proper_ideal(3, 5, 5)) {
        let printed = ideal.to_canonical_json();
        let reparsed = MonomialIdeal::parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &ideal);
        prop_assert_eq!(reparsed.to_canonical_json(), printed);
    }

    #[test]
    fn power_additivity_small(ideal in proper_ideal(2, 3, 3)) {
        let a = ideal.power(1).unwrap();
        let b = ideal.power(2).unwrap();
        let mut sums = Vec::new();
        for g in a.gens() {
            for h in b.gens() {
                sums.push(g.checked_add(h).unwrap());
            }
        }
        let combined = MonomialIdeal::new(2, sums).unwrap();
        prop_assert_eq!(combined, ideal.power(3).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_extensive_idempotent_and_certifiable(ideal in proper_ideal(3, 3, 4)) {
        let closure = integral_closure(&ideal).unwrap();
        prop_assert!(closure.contains_ideal(&ideal).unwrap());
        prop_assert_eq!(&integral_closure(&closure).unwrap(), &closure);

        for g in closure.gens() {
            let cert = np_membership(g, &ideal).unwrap().expect("generators are members");
            prop_assert!(cert.verify(&ideal, g));
            let r = cert.sufficient_power().expect("small denominators");
            prop_assert!(closure_membership_oracle(g, &ideal, r).unwrap());
        }
    }

    #[test]
    fn exchange_saturations_produce_their_classes(gens in raw_gens(3, 4, 3)) {
        let vectors: Vec<ExponentVector> = gens
            .into_iter()
            .filter(|g| g.iter().any(|&e| e > 0))
            .map(ExponentVector::new)
            .collect();
        prop_assume!(!vectors.is_empty());

        let stable = stable_closure(3, &vectors).unwrap();
        prop_assert!(is_stable(&stable).unwrap());
        for v in &vectors {
            prop_assert!(stable.contains(v).unwrap());
        }
        prop_assert_eq!(&stable_closure(3, stable.gens()).unwrap(), &stable);

        let strong = strongly_stable_closure(3, &vectors).unwrap();
        prop_assert!(is_strongly_stable(&strong).unwrap());
        prop_assert!(strong.contains_ideal(&stable).unwrap());
    }

    #[test]
    fn betti_tables_respect_global_bounds(ideal in proper_ideal(3, 4, 4)) {
        let table = multigraded_betti(&ideal, Field::Q).unwrap();
        let height = ideal.height().unwrap();
        let lcm = ideal.lcm_exponent().unwrap();

        prop_assert!(table.quotient_pdim() <= ideal.dimension());
        for (i, c, rank) in table.entries() {
            prop_assert!(rank >= 1);
            prop_assert!(c.divides(&lcm).unwrap(), "entry ({}, {:?})", i, c);
        }
        let mut last = None;
        for i in 0..=height {
            let shift = table.max_shift(i).expect("entries up to the height");
            if let Some(prev) = last {
                prop_assert!(shift > prev);
            }
            last = Some(shift);
        }
        // beta_0(S/I) is exactly the unit in degree zero
        prop_assert_eq!(table.total(0), 1);
        prop_assert_eq!(table.rank(0, &ExponentVector::zero(3)), 1);
        // beta_1 counts minimal generators
        prop_assert_eq!(table.total(1), ideal.num_gens() as u64);
    }

    #[test]
    fn sampled_families_hold_their_invariants(seed in 0u64..200) {
        use monoreg::classify::{Family, FamilySpec};
        let spec = FamilySpec::new(Family::Gorenstein3, 5, 5, seed);
        let ideal = classify::sample(&spec, 0).unwrap();
        prop_assert_eq!(ideal.height().unwrap(), 3);
        prop_assert_eq!(ideal.num_gens() % 2, 1);
        // every generator of a block-form Gorenstein ideal is a minimal
        // generator of its closure
        let closure = integral_closure(&ideal).unwrap();
        for g in ideal.gens() {
            prop_assert!(closure.gens().contains(g));
        }
    }
}
