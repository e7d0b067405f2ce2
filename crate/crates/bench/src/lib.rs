//! Fixed market samples shared by the benchmarks.

use stable_couples::random::{random_market, random_scpi_market, seeded, CoupleOrderKind, MarketSpec, RankingKind};
use stable_couples::MarketInstance;

/// `count` markets with RF couples over `capacities`, hospitals ranking by `rankings`.
pub fn rf_markets(capacities: &[usize], n_couples: usize, rankings: RankingKind, count: usize) -> Vec<MarketInstance> {
    let mut rng = seeded(0x5eed);
    let spec = MarketSpec { capacities: capacities.to_vec(), n_couples, couples: CoupleOrderKind::RvtRf, rankings };
    (0..count).map(|_| random_market(&mut rng, &spec)).collect()
}

/// `count` SCPI markets with unrestricted couple orders.
pub fn scpi_markets(capacities: &[usize], n_couples: usize, count: usize) -> Vec<MarketInstance> {
    let mut rng = seeded(0x5eed);
    (0..count)
        .map(|_| random_scpi_market(&mut rng, capacities, n_couples, false).expect("no terminal shape requested"))
        .collect()
}
