mod common;

use cs4kit::formula::parse;
use cs4kit::hilbert::{catalog, check_proof, parse_proof, Verdict};
use cs4kit::kripke::Logic;
use cs4kit::search::{check_validity_upto, random_instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{mutate_at, mutation_sites, sample_proofs};

#[test]
fn samples_are_accepted_and_sound() {
    for s in sample_proofs() {
        assert_eq!(
            check_proof(s.logic, &s.proof),
            Verdict::Accepted,
            "{}",
            s.name
        );
        assert!(
            check_validity_upto(s.proof.conclusion().unwrap(), s.logic, 3),
            "{}",
            s.name
        );
        assert_eq!(parse_proof(&s.proof.to_text()).unwrap(), s.proof);
    }
}

#[test]
fn every_mutation_site_breaks_the_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for schema in catalog() {
        for _ in 0..5 {
            let inst = random_instance(&mut rng, schema, 2, 2);
            for site in mutation_sites(&schema.pattern, &inst) {
                let mutated = mutate_at(&inst, &site);
                assert!(
                    cs4kit::hilbert::match_pattern(&schema.pattern, &mutated).is_none(),
                    "{} {inst} -> {mutated}",
                    schema.name
                );
            }
        }
    }
}

#[test]
fn a1_has_benign_mutations() {
    // psi occurs once in A1, so changing it yields another instance
    let inst = parse("p -> (q -> p)").unwrap();
    let a1 = cs4kit::hilbert::schema("A1").unwrap();
    let sites = mutation_sites(&a1.pattern, &inst);
    assert!(!sites.contains(&vec![1, 0]));
    let benign = mutate_at(&inst, &[1, 0]);
    assert!(cs4kit::hilbert::match_pattern(&a1.pattern, &benign).is_some());
}

#[test]
fn gd_is_not_derivable_in_is4_by_axiom() {
    let p = parse_proof("1. (p -> q) | (q -> p) ; axiom GD").unwrap();
    assert!(check_proof(Logic::GS4, &p).is_accepted());
    assert!(!check_proof(Logic::IS4, &p).is_accepted());
}
