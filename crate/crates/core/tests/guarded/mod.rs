//! Random markets meeting each solver's preconditions.
#![allow(dead_code)]

use rand::Rng;
use stable_couples::axioms::{check_cpc, check_cpi, check_rf, check_rvt_all, check_scpc, check_srf};
use stable_couples::random::{
    random_capacities, random_market, random_scpi_market, CoupleOrderKind, MarketSpec, RankingKind,
};
use stable_couples::{Algorithm, MarketInstance};

const ATTEMPTS: usize = 500;

fn sample<R: Rng>(
    rng: &mut R,
    max_hospitals: usize,
    max_doctors: usize,
    rankings: RankingKind,
    accept: impl Fn(&MarketInstance) -> bool,
) -> MarketInstance {
    for _ in 0..ATTEMPTS {
        let caps = random_capacities(rng, max_hospitals, max_doctors);
        let nd: usize = caps.iter().sum();
        let spec = MarketSpec {
            n_couples: rng.gen_range(1..=nd / 2),
            capacities: caps,
            couples: CoupleOrderKind::RvtRf,
            rankings,
        };
        let inst = random_market(rng, &spec);
        if accept(&inst) {
            return inst;
        }
    }
    panic!("no guarded market after {ATTEMPTS} attempts");
}

/// CPI + RVT + RF.
pub fn alg1_market<R: Rng>(rng: &mut R, max_hospitals: usize, max_doctors: usize) -> MarketInstance {
    sample(rng, max_hospitals, max_doctors, RankingKind::Common, |i| {
        check_cpi(i).verdict.holds && check_rvt_all(i).holds && check_rf(i).holds
    })
}

/// SCPI with unrestricted couple orders; `terminal` puts a single between
/// the members of the worst couple with m ranked last.
pub fn alg2_market<R: Rng>(rng: &mut R, max_hospitals: usize, max_doctors: usize, terminal: bool) -> MarketInstance {
    for _ in 0..ATTEMPTS {
        let caps = random_capacities(rng, max_hospitals, max_doctors);
        let nd: usize = caps.iter().sum();
        let max_couples = if terminal { (nd - 1) / 2 } else { nd / 2 };
        if max_couples == 0 {
            continue;
        }
        let nc = rng.gen_range(1..=max_couples);
        if let Some(inst) = random_scpi_market(rng, &caps, nc, terminal) {
            return inst;
        }
    }
    panic!("no SCPI market after {ATTEMPTS} attempts");
}

/// CPC + RVT + RF + SRF.
pub fn alg3_market<R: Rng>(rng: &mut R, max_hospitals: usize, max_doctors: usize) -> MarketInstance {
    sample(rng, max_hospitals, max_doctors, RankingKind::CoupleConsistent, |i| {
        check_cpc(i).holds && check_rvt_all(i).holds && check_rf(i).holds && check_srf(i).is_ok_and(|v| v.holds)
    })
}

/// SCPC + RVT + RF.
pub fn alg4_market<R: Rng>(rng: &mut R, max_hospitals: usize, max_doctors: usize) -> MarketInstance {
    sample(rng, max_hospitals, max_doctors, RankingKind::CommonAboveF, |i| {
        check_scpc(i).is_ok_and(|v| v.holds) && check_rvt_all(i).holds && check_rf(i).holds
    })
}

pub fn market_for<R: Rng>(rng: &mut R, alg: Algorithm, max_hospitals: usize, max_doctors: usize) -> MarketInstance {
    match alg {
        Algorithm::Alg1 => alg1_market(rng, max_hospitals, max_doctors),
        Algorithm::Alg2 => alg2_market(rng, max_hospitals, max_doctors, false),
        Algorithm::Alg3 => alg3_market(rng, max_hospitals, max_doctors),
        Algorithm::Alg4 => alg4_market(rng, max_hospitals, max_doctors),
        other => panic!("{} has no preconditions to sample for", other.name()),
    }
}
