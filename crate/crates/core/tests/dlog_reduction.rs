use std::sync::Arc;

use deepball::dlog::{
    collect_relation, dlog, dlog_bruteforce, relations_from_text, relations_to_text, solve_congruences, DlogError,
    DlogInstance, Relation,
};
use deepball::factor_oracle::count_all_dp;
use deepball::field::standard_tower;
use deepball::rs_code::BruteForceDecoder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(p: u64, g: usize, seed: u64) -> DlogInstance {
    let e = standard_tower(p, 1, Some(2)).unwrap();
    DlogInstance::new(&e, g, Arc::new(BruteForceDecoder::default()), seed).unwrap()
}

#[test]
fn relation_exists_exactly_when_a_factorization_exists() {
    for (p, g) in [(5u64, 3usize), (7, 4), (7, 5)] {
        let inst = instance(p, g, 0);
        let table = count_all_dp(inst.field(), g).unwrap();
        for i in 0..inst.modulus() {
            let rel = collect_relation(&inst, i).unwrap();
            let beta = inst.base().pow(i as u128);
            assert_eq!(rel.is_some(), table.get(&beta) > 0, "p={p} g={g} i={i}");
        }
    }
}

#[test]
fn every_target_of_f25_and_f49() {
    for (p, g, seed) in [(5u64, 3usize, 0u64), (7, 5, 1)] {
        let inst = instance(p, g, seed);
        for t in inst.field().elements().skip(1) {
            let run = dlog(&inst, &t).unwrap();
            assert_eq!(run.answer, dlog_bruteforce(inst.base(), &t).unwrap());
        }
    }
}

#[test]
fn solved_table_matches_bruteforce_over_f49() {
    let inst = instance(7, 4, 5);
    let rels: Vec<Relation> = (0..inst.modulus()).filter_map(|i| collect_relation(&inst, i).unwrap()).collect();
    let t = solve_congruences(&inst, &rels).unwrap();
    assert!(t.verify(&inst));
    let text = relations_to_text(&rels);
    assert_eq!(relations_from_text(&inst, &text).unwrap(), rels);
}

#[test]
fn same_seed_same_run() {
    let inst = instance(7, 5, 42);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let t = inst.field().elem(rng.gen_range(1..49)).unwrap();
        assert_eq!(dlog(&inst, &t).unwrap(), dlog(&inst, &t).unwrap());
    }
}

#[test]
fn forged_relation_is_rejected() {
    let inst = instance(5, 3, 0);
    let rels: Vec<Relation> = (0..24).filter_map(|i| collect_relation(&inst, i).unwrap()).collect();
    let line = rels[0].to_line();
    let mut parts: Vec<u64> = line.split(' ').map(|s| s.parse().unwrap()).collect();
    parts[0] = (parts[0] + 12) % 24;
    let forged = parts.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    assert!(matches!(Relation::from_line(&inst, &forged), Err(DlogError::Malformed(_))));
}
