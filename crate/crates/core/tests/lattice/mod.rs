//! Implications between the preference axioms, checked on one market.
#![allow(dead_code)]

use rand::Rng;
use stable_couples::axioms::{
    check_couple_responsive, check_cpc, check_cpi, check_rf, check_rvt, check_scpc, check_scpi, check_srf,
    couple_preference_is_valid,
};
use stable_couples::random::{random_capacities, random_market, random_scpi_market, CoupleOrderKind, MarketSpec, RankingKind};
use stable_couples::MarketInstance;

pub const KINDS: [(CoupleOrderKind, RankingKind); 6] = [
    (CoupleOrderKind::Responsive, RankingKind::Independent),
    (CoupleOrderKind::Responsive, RankingKind::Common),
    (CoupleOrderKind::Rvt, RankingKind::Common),
    (CoupleOrderKind::RvtRf, RankingKind::CoupleConsistent),
    (CoupleOrderKind::RvtRf, RankingKind::CommonAboveF),
    (CoupleOrderKind::Unrestricted, RankingKind::Independent),
];

/// Mixes the generator kinds; every seventh draw is an SCPI market.
pub fn lattice_market<R: Rng>(rng: &mut R, i: usize) -> MarketInstance {
    let caps = random_capacities(rng, 3, 8);
    let nd: usize = caps.iter().sum();
    let n_couples = rng.gen_range(0..=nd / 2);
    if i % 7 == 6 {
        if let Some(inst) = random_scpi_market(rng, &caps, n_couples, false) {
            return inst;
        }
    }
    let (couples, rankings) = KINDS[i % KINDS.len()];
    random_market(rng, &MarketSpec { capacities: caps, n_couples, couples, rankings })
}

/// Names of the implications that fail on `inst`.
pub fn violations(inst: &MarketInstance) -> Vec<&'static str> {
    let mut out = Vec::new();
    let nh = inst.n_hospitals();
    let mut all_responsive = true;
    for (ci, c) in inst.couples().iter().enumerate() {
        let (cp, pf, pm) = (inst.couple_pref(ci), inst.doctor_pref(c.f), inst.doctor_pref(c.m));
        let responsive = check_couple_responsive(cp, pf, pm).holds;
        let rvt = check_rvt(cp, pf, pm).holds;
        all_responsive &= responsive;
        if responsive && !rvt {
            out.push("responsive => rvt");
        }
        if rvt && !couple_preference_is_valid(cp, nh) {
            out.push("rvt => valid");
        }
    }
    let rf = check_rf(inst).holds;
    let srf = check_srf(inst).is_ok_and(|v| v.holds);
    if all_responsive && !(rf && srf) {
        out.push("responsive => rf and srf");
    }
    if nh == 2 && rf && !srf {
        out.push("two hospitals and rf => srf");
    }
    let cpi = check_cpi(inst);
    if let Some(norm) = &cpi.normalized {
        let n = &norm.instance;
        if !(check_cpc(n).holds && check_scpc(n).is_ok_and(|v| v.holds)) {
            out.push("cpi => cpc and scpc");
        }
    }
    if check_scpi(inst).is_ok_and(|v| v.holds) && !cpi.verdict.holds {
        out.push("scpi => cpi");
    }
    out
}
