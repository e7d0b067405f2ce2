mod oracles;

use std::collections::HashSet;

use oracles::Order;
use rand::seq::SliceRandom;
use rand::Rng;
use stable_couples::constructions::{example1, example2, example3};
use stable_couples::random::{random_capacities, random_market, seeded, CoupleOrderKind, MarketSpec, RankingKind};
use stable_couples::*;

const KINDS: [(CoupleOrderKind, RankingKind); 4] = [
    (CoupleOrderKind::Responsive, RankingKind::Independent),
    (CoupleOrderKind::Rvt, RankingKind::Common),
    (CoupleOrderKind::RvtRf, RankingKind::CoupleConsistent),
    (CoupleOrderKind::Unrestricted, RankingKind::CommonAboveF),
];

fn small_market<R: Rng>(rng: &mut R, i: usize, max_doctors: usize) -> MarketInstance {
    let caps = random_capacities(rng, 3, max_doctors);
    let nd: usize = caps.iter().sum();
    let (couples, rankings) = KINDS[i % KINDS.len()];
    let spec = MarketSpec { n_couples: rng.gen_range(0..=nd / 2), capacities: caps, couples, rankings };
    random_market(rng, &spec)
}

fn random_matching<R: Rng>(rng: &mut R, inst: &MarketInstance) -> Matching {
    loop {
        let slots = inst.slots();
        let a: Vec<Slot> = (0..inst.n_doctors()).map(|_| *slots.choose(rng).unwrap()).collect();
        if let Ok(m) = Matching::from_assignment(inst, a) {
            return m;
        }
    }
}

fn to_set(v: Vec<Matching>) -> HashSet<Vec<Slot>> {
    v.into_iter().map(|m| m.assignment().to_vec()).collect()
}

#[test]
fn blocking_counts_match_the_reference_on_random_matchings() {
    let mut rng = seeded(11);
    for i in 0..600 {
        let inst = small_market(&mut rng, i, 7);
        let mu = random_matching(&mut rng, &inst);
        let lex = find_blocking_pairs(&inst, &mu, Semantics::RankVectorLex).unwrap();
        assert_eq!(lex.len(), oracles::blocking(&inst, &mu, Order::Lex).len(), "{}", serialize_instance(&inst));
        let forced = find_blocking_pairs(&inst, &mu, Semantics::ForcedOnly).unwrap();
        assert_eq!(forced.len(), oracles::blocking(&inst, &mu, Order::Forced).len());
        let verdict = is_stable(&inst, &mu, Semantics::ForcedOnly).unwrap();
        let possible = oracles::blocking_possible(&inst, &mu);
        let expected = if !forced.is_empty() {
            StabilityStatus::UnstableForAllResponsiveExtensions
        } else if !possible.is_empty() {
            StabilityStatus::ExtensionDependent
        } else {
            StabilityStatus::StableForAllResponsiveExtensions
        };
        assert_eq!(verdict.status, expected);
    }
}

#[test]
fn forced_witnesses_also_block_under_rank_lex() {
    let mut rng = seeded(12);
    for i in 0..300 {
        let inst = small_market(&mut rng, i, 7);
        let mu = random_matching(&mut rng, &inst);
        let forced = find_blocking_pairs(&inst, &mu, Semantics::ForcedOnly).unwrap();
        let lex = find_blocking_pairs(&inst, &mu, Semantics::RankVectorLex).unwrap();
        for w in forced {
            assert!(lex.iter().any(|l| l.kind == w.kind), "forced coalition missing under rank-lex");
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    let mut rng = seeded(13);
    for i in 0..120 {
        let inst = small_market(&mut rng, i, 6);
        let lex = to_set(enumerate_stable(&inst, Semantics::RankVectorLex, DEFAULT_MAX_CANDIDATES).unwrap());
        assert_eq!(lex, oracles::stable_set(&inst, Order::Lex), "{}", serialize_instance(&inst));
        let all = to_set(enumerate_stable(&inst, Semantics::ForcedOnly, DEFAULT_MAX_CANDIDATES).unwrap());
        assert_eq!(all, oracles::stable_for_all(&inst));
        assert!(all.is_subset(&lex));
    }
}

#[test]
fn worked_examples_have_no_stable_matching_by_brute_force() {
    for inst in [example1(), example2(), example3()] {
        assert!(oracles::stable_set(&inst, Order::Lex).is_empty());
        assert!(oracles::stable_for_all(&inst).is_empty());
    }
}
