mod common;

use common::*;
use cubeforms::cli::{from_json, to_canonical_json, CertificateDocument, SystemDocument};
use cubeforms::density::{components, joint_distribution, satisfying_density, DEFAULT_BUDGET};
use cubeforms::forms::{distance, meets_main_assumption, separation};
use cubeforms::fp::{compute_l, compute_translated_l, iterated_sumset, l_upper_bound, sumset, ResidueSet};
use cubeforms::structure::{
    certify_density_bound, extract_sunflower, extraction_threshold, verify_certificate, Parameters,
};
use cubeforms::{Alphabet, ConditionSystem, LinearForm, Modulus, TargetSet, DEFAULT_ENUMERATION_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5, 7])
}

fn residues(p: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::btree_set(0..p, 0..=p as usize).prop_map(|s| s.into_iter().collect())
}

/// Random system drawn through a seeded generator; proptest shrinks the seed.
fn system(max_k: usize, n: usize) -> impl Strategy<Value = ConditionSystem> {
    (prime(), 1..=max_k, any::<u64>()).prop_map(move |(p, k, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = m(p);
        let alphabet = random_alphabet(&mut rng, p);
        random_system(&mut rng, p, alphabet, k, n, 4)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sumset_is_pairwise_sums_and_obeys_cauchy_davenport(p in prime(), a in residues(7), b in residues(7)) {
        let p_mod = m(p);
        let a: Vec<u32> = a.into_iter().filter(|&v| v < p).collect();
        let b: Vec<u32> = b.into_iter().filter(|&v| v < p).collect();
        prop_assume!(!a.is_empty() && !b.is_empty());
        let sa = ResidueSet::from_members(p_mod, a.clone()).unwrap();
        let sb = ResidueSet::from_members(p_mod, b.clone()).unwrap();
        let got = sumset(&sa, &sb).unwrap().to_vec();
        let mut want: Vec<u32> = a.iter().flat_map(|x| b.iter().map(move |y| (x + y) % p)).collect();
        want.sort_unstable();
        want.dedup();
        prop_assert_eq!(&got, &want);
        prop_assert!(got.len() >= (a.len() + b.len() - 1).min(p as usize));
    }

    #[test]
    fn iterated_sumset_matches_enumeration(p in prime(), s in residues(7), coeffs in prop::collection::vec(1u32..7, 0..5)) {
        let s: Vec<u32> = s.into_iter().filter(|&v| v < p).collect();
        prop_assume!(s.len() >= 2);
        let coeffs: Vec<u32> = coeffs.into_iter().map(|c| 1 + (c - 1) % (p - 1)).collect();
        let alphabet = Alphabet::new(m(p), s.clone()).unwrap();
        let got = iterated_sumset(&alphabet, &coeffs).to_vec();
        let mask = sumset_mask(p, &s, &coeffs);
        let want: Vec<u32> = (0..p).filter(|v| mask >> v & 1 == 1).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn escape_lengths_match_enumeration(p in prop::sample::select(vec![3u32, 5]), s in residues(5), e in residues(5)) {
        let s: Vec<u32> = s.into_iter().filter(|&v| v < p).collect();
        let e: Vec<u32> = e.into_iter().filter(|&v| v < p).collect();
        prop_assume!(s.len() >= 2 && e.len() < p as usize);
        let alphabet = Alphabet::new(m(p), s.clone()).unwrap();
        let target = TargetSet::new(m(p), e.clone()).unwrap();
        let literal = compute_l(&alphabet, &target);
        let translated = compute_translated_l(&alphabet, &target);
        prop_assert_eq!(literal.l, brute_l(p, &s, &e));
        prop_assert_eq!(translated.l, brute_translated_l(p, &s, &e));
        prop_assert!(literal.l <= translated.l);
        prop_assert!(translated.l <= l_upper_bound(s.len(), e.len()));
    }

    #[test]
    fn exact_density_matches_enumeration(sys in system(5, 7)) {
        let exact = satisfying_density(&sys, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(exact, brute_density(&sys));
    }

    #[test]
    fn joint_distribution_matches_enumeration(sys in system(3, 6)) {
        let joint = joint_distribution(&sys, DEFAULT_BUDGET).unwrap();
        let (counts, total) = brute_joint(&sys.forms(), &sys.alphabet().members());
        for (values, count) in counts {
            prop_assert_eq!(joint.probability(&values), ratio(count, total));
        }
    }

    #[test]
    fn density_factorises_over_components(sys in system(6, 10)) {
        let comps = components(&sys);
        let mut covered: Vec<usize> = comps.iter().flatten().copied().collect();
        covered.sort_unstable();
        prop_assert_eq!(covered, (0..sys.len()).collect::<Vec<_>>());
        let exact = satisfying_density(&sys, DEFAULT_BUDGET).unwrap();
        if cube_size(&sys) <= 1 << 18 {
            prop_assert_eq!(&exact, &brute_density(&sys));
        }
        let product: BigRational = comps
            .iter()
            .map(|c| {
                let sub = sys.subsystem(c);
                if cube_size(&sub) <= 1 << 18 { brute_density(&sub) } else { satisfying_density(&sub, DEFAULT_BUDGET).unwrap() }
            })
            .product();
        prop_assert_eq!(product, exact);
    }

    #[test]
    fn separation_and_distance_match_enumeration(sys in system(4, 6)) {
        let forms = sys.forms();
        prop_assert_eq!(separation(&forms, DEFAULT_ENUMERATION_CAP).unwrap(), brute_separation(&forms));
        for a in &forms {
            for b in &forms {
                prop_assert_eq!(distance(a, b), support_distance(a, b));
            }
        }
        let report = meets_main_assumption(&sys);
        prop_assert_eq!(report.min_distance, brute_min_distance(&forms));
    }

    #[test]
    fn system_documents_round_trip(sys in system(5, 8)) {
        let doc = SystemDocument::from_system(&sys);
        let text = to_canonical_json(&doc);
        let back: SystemDocument = from_json(&text).unwrap();
        prop_assert_eq!(back.to_system().unwrap(), sys);
        prop_assert_eq!(to_canonical_json(&back), text);
    }

    #[test]
    fn extraction_reaches_t_at_threshold(r in 1usize..=2, t in 2usize..=3, seed in any::<u64>()) {
        let p = m(3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = extraction_threshold(p, r, t) as usize;
        let pool: Vec<usize> = (0..3 * r + 2).collect();
        let petals: Vec<LinearForm> = (0..k)
            .map(|i| random_form(&mut rng, p, &pool, 1 + i % r))
            .collect();
        let ex = extract_sunflower(p, &petals, r, t).unwrap();
        prop_assert!(ex.guaranteed);
        prop_assert!(ex.indices.len() >= t);
        let shifted: Vec<LinearForm> = ex.indices.iter().map(|&i| petals[i].sub(&ex.offset)).collect();
        for (i, a) in shifted.iter().enumerate() {
            for b in &shifted[i + 1..] {
                prop_assert!(a.support().is_disjoint(&b.support()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certified_bounds_are_sound_and_verifiable(sys in system(8, 10), u in 1usize..=4, r in 1usize..=5) {
        prop_assume!(meets_main_assumption(&sys).holds);
        let report = certify_density_bound(&sys, Parameters { u, r }, DEFAULT_BUDGET, DEFAULT_ENUMERATION_CAP).unwrap();
        let exact = if cube_size(&sys) <= 1 << 18 { brute_density(&sys) } else { satisfying_density(&sys, DEFAULT_BUDGET).unwrap() };
        prop_assert!(exact <= report.bound_exact);
        let verdict = verify_certificate(&report.certificate, &sys, DEFAULT_ENUMERATION_CAP);
        prop_assert!(verdict.valid, "{:?}", verdict.reasons);

        let doc = CertificateDocument::from_certificate(&report.certificate);
        let back: CertificateDocument = from_json(&to_canonical_json(&doc)).unwrap();
        prop_assert_eq!(back.to_certificate(sys.modulus()).unwrap(), report.certificate);
    }
}

#[test]
fn empty_target_has_zero_escape_length() {
    let p = Modulus::new(5).unwrap();
    let alphabet = Alphabet::boolean(p);
    let empty = TargetSet::new(p, []).unwrap();
    assert_eq!(compute_l(&alphabet, &empty).l, 0);
    assert_eq!(compute_translated_l(&alphabet, &empty).l, 0);
}

#[test]
fn single_coordinate_density_is_target_fraction() {
    let p = m(7);
    let alphabet = Alphabet::new(p, [0, 2, 3, 6]).unwrap();
    let target = TargetSet::new(p, [0, 3, 5]).unwrap();
    let sys = system_of(alphabet, vec![(LinearForm::coordinate(p, 0), target)]);
    let want = BigRational::new(BigInt::from(2), BigInt::from(4));
    assert_eq!(satisfying_density(&sys, DEFAULT_BUDGET).unwrap(), want);
}
