//! Seeded random markets for property tests, benchmarks and the acceptance suite.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::axioms::{check_rvt, scpi_witness};
use crate::market::{
    Couple, CouplePreference, DoctorIx, DoctorPreference, Hospital, HospitalIx, HospitalPreference, MarketInstance,
    Ranking, SetExtension, SlotPair,
};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// How couple orders over matched pairs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoupleOrderKind {
    /// A random linear extension of the product of the members' orders.
    Responsive,
    /// A responsive order with some same-hospital pairs moved up.
    Rvt,
    /// Like `Rvt`, moving `(h, h)` above `(h', h)` only when f prefers `h`.
    RvtRf,
    /// Any order of the matched pairs.
    Unrestricted,
}

/// How hospital rankings over doctors are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankingKind {
    /// One ranking shared by all hospitals, each couple's f above its m.
    Common,
    /// Independent rankings with each couple's f above its m everywhere.
    CoupleConsistent,
    /// Independent within blocks ending at each f, so every hospital puts
    /// the same doctors above each f.
    CommonAboveF,
    /// Independent rankings.
    Independent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketSpec {
    pub capacities: Vec<usize>,
    pub n_couples: usize,
    pub couples: CoupleOrderKind,
    pub rankings: RankingKind,
}

/// Capacities of at least 2 for 2..=`max_hospitals` hospitals, summing to
/// at most `max_doctors`. Panics if no such shape exists.
pub fn random_capacities<R: Rng>(rng: &mut R, max_hospitals: usize, max_doctors: usize) -> Vec<usize> {
    let mut shapes = Vec::new();
    for n in 2..=max_hospitals {
        collect_shapes(n, max_doctors, &mut Vec::new(), &mut shapes);
    }
    shapes.choose(rng).expect("some shape fits").clone()
}

fn collect_shapes(n: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == n {
        out.push(prefix.clone());
        return;
    }
    let rest = n - prefix.len() - 1;
    for k in 2..=budget.saturating_sub(2 * rest) {
        prefix.push(k);
        collect_shapes(n, budget - k, prefix, out);
        prefix.pop();
    }
}

fn random_doctor_pref<R: Rng>(rng: &mut R, n: usize) -> DoctorPreference {
    let mut hs: Vec<HospitalIx> = (0..n).map(HospitalIx).collect();
    hs.shuffle(rng);
    DoctorPreference::from_hospitals(hs).expect("permutation")
}

fn rank_of(p: &DoctorPreference, h: HospitalIx) -> usize {
    p.rank(Some(h)).expect("complete preference")
}

/// Matched pairs in a uniformly chosen order among minimal remaining
/// elements of the product order.
fn random_product_extension<R: Rng>(rng: &mut R, n: usize, pf: &DoctorPreference, pm: &DoctorPreference) -> Vec<SlotPair> {
    let mut rest: Vec<(HospitalIx, HospitalIx)> =
        (0..n).flat_map(|a| (0..n).map(move |b| (HospitalIx(a), HospitalIx(b)))).collect();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let minimal: Vec<usize> = (0..rest.len())
            .filter(|&i| {
                let (a, b) = rest[i];
                !rest.iter().any(|&(c, d)| {
                    (c, d) != (a, b) && rank_of(pf, c) <= rank_of(pf, a) && rank_of(pm, d) <= rank_of(pm, b)
                })
            })
            .collect();
        let pick = *minimal.choose(rng).expect("finite poset has a minimal element");
        let (a, b) = rest.remove(pick);
        out.push((Some(a), Some(b)));
    }
    out
}

fn rf_ok(cp: &CouplePreference, pf: &DoctorPreference, n: usize) -> bool {
    (0..n).all(|h| {
        (0..n).all(|g| {
            let (a, b) = (Some(HospitalIx(h)), Some(HospitalIx(g)));
            h == g || !cp.prefers((a, a), (b, a)) || pf.prefers(a, b)
        })
    })
}

pub fn random_couple_preference<R: Rng>(
    rng: &mut R,
    n: usize,
    pf: &DoctorPreference,
    pm: &DoctorPreference,
    kind: CoupleOrderKind,
) -> CouplePreference {
    let build = |order: Vec<SlotPair>| {
        CouplePreference::with_canonical_none_pairs(order, n, pf, pm).expect("distinct pairs")
    };
    match kind {
        CoupleOrderKind::Unrestricted => {
            let mut order: Vec<SlotPair> =
                (0..n).flat_map(|a| (0..n).map(move |b| (Some(HospitalIx(a)), Some(HospitalIx(b))))).collect();
            order.shuffle(rng);
            build(order)
        }
        CoupleOrderKind::Responsive => build(random_product_extension(rng, n, pf, pm)),
        CoupleOrderKind::Rvt | CoupleOrderKind::RvtRf => {
            let mut order = random_product_extension(rng, n, pf, pm);
            let attempts = rng.gen_range(0..=n + 1);
            for _ in 0..attempts {
                let h = Some(HospitalIx(rng.gen_range(0..n)));
                let from = order.iter().position(|&p| p == (h, h)).expect("diagonal present");
                if from == 0 {
                    continue;
                }
                let to = rng.gen_range(0..from);
                let mut next = order.clone();
                let p = next.remove(from);
                next.insert(to, p);
                let cp = build(next.clone());
                let ok = check_rvt(&cp, pf, pm).holds && (kind == CoupleOrderKind::Rvt || rf_ok(&cp, pf, n));
                if ok {
                    order = next;
                }
            }
            build(order)
        }
    }
}

/// Puts each couple's f above its m in `order` by swapping their places.
fn couples_in_order(order: &mut [DoctorIx], couples: &[Couple]) {
    for c in couples {
        let pf = order.iter().position(|&d| d == c.f).expect("present");
        let pm = order.iter().position(|&d| d == c.m).expect("present");
        if pm < pf {
            order.swap(pf, pm);
        }
    }
}

fn random_rankings<R: Rng>(rng: &mut R, n: usize, nd: usize, couples: &[Couple], kind: RankingKind) -> Vec<Vec<DoctorIx>> {
    let mut base: Vec<DoctorIx> = (0..nd).map(DoctorIx).collect();
    base.shuffle(rng);
    match kind {
        RankingKind::Common => {
            couples_in_order(&mut base, couples);
            vec![base; n]
        }
        RankingKind::Independent => (0..n)
            .map(|_| {
                let mut r = base.clone();
                r.shuffle(rng);
                r
            })
            .collect(),
        RankingKind::CoupleConsistent => (0..n)
            .map(|_| {
                let mut r = base.clone();
                r.shuffle(rng);
                couples_in_order(&mut r, couples);
                r
            })
            .collect(),
        RankingKind::CommonAboveF => {
            couples_in_order(&mut base, couples);
            let is_f = |d: DoctorIx| couples.iter().any(|c| c.f == d);
            let mut blocks: Vec<Vec<DoctorIx>> = vec![Vec::new()];
            for &d in &base {
                blocks.last_mut().expect("non-empty").push(d);
                if is_f(d) {
                    blocks.push(Vec::new());
                }
            }
            (0..n)
                .map(|_| {
                    let mut r = Vec::with_capacity(nd);
                    for b in &blocks {
                        let mut b = b.clone();
                        let keep_last = b.last().is_some_and(|&d| is_f(d));
                        let end = if keep_last { b.len() - 1 } else { b.len() };
                        b[..end].shuffle(rng);
                        r.extend(b);
                    }
                    r
                })
                .collect()
        }
    }
}

/// Assembles a market: singles `s1, …` then couples `f1, m1, …`, each
/// hospital `h1, …` comparing sets by rank vectors.
pub fn assemble(
    capacities: &[usize],
    n_couples: usize,
    doctor_prefs: Vec<DoctorPreference>,
    couple_prefs: Vec<CouplePreference>,
    rankings: Vec<Vec<DoctorIx>>,
) -> MarketInstance {
    let nd = doctor_prefs.len();
    let ns = nd - 2 * n_couples;
    let mut ids: Vec<String> = (1..=ns).map(|i| format!("s{i}")).collect();
    for k in 1..=n_couples {
        ids.push(format!("f{k}"));
        ids.push(format!("m{k}"));
    }
    let hospitals = capacities.iter().enumerate().map(|(i, &k)| Hospital { id: format!("h{}", i + 1), capacity: k }).collect();
    let hospital_prefs = rankings
        .into_iter()
        .map(|r| HospitalPreference::new(r, SetExtension::RankVectorLex).expect("permutation"))
        .collect();
    MarketInstance::new(
        hospitals,
        ids,
        (0..ns).map(DoctorIx).collect(),
        couple_list(ns, n_couples),
        doctor_prefs,
        couple_prefs,
        hospital_prefs,
    )
    .expect("generated market is well formed")
}

fn couple_list(ns: usize, n_couples: usize) -> Vec<Couple> {
    (0..n_couples).map(|k| Couple { f: DoctorIx(ns + 2 * k), m: DoctorIx(ns + 2 * k + 1) }).collect()
}

/// A market with `Σκ` doctors, `n_couples` of them paired.
pub fn random_market<R: Rng>(rng: &mut R, spec: &MarketSpec) -> MarketInstance {
    let n = spec.capacities.len();
    let nd: usize = spec.capacities.iter().sum();
    assert!(2 * spec.n_couples <= nd, "too many couples for the capacities");
    let ns = nd - 2 * spec.n_couples;
    let couples = couple_list(ns, spec.n_couples);
    let doctor_prefs: Vec<DoctorPreference> = (0..nd).map(|_| random_doctor_pref(rng, n)).collect();
    let couple_prefs = couples
        .iter()
        .map(|c| random_couple_preference(rng, n, &doctor_prefs[c.f.0], &doctor_prefs[c.m.0], spec.couples))
        .collect();
    let rankings = random_rankings(rng, n, nd, &couples, spec.rankings);
    assemble(&spec.capacities, spec.n_couples, doctor_prefs, couple_prefs, rankings)
}

/// A common-ranking market satisfying SCPI with unrestricted couple orders.
/// With `terminal_single`, the worst couple has its m ranked last with
/// exactly one single doctor between its members. `None` when that shape
/// has no couple or no single to use.
pub fn random_scpi_market<R: Rng>(
    rng: &mut R,
    capacities: &[usize],
    n_couples: usize,
    terminal_single: bool,
) -> Option<MarketInstance> {
    let n = capacities.len();
    let nd: usize = capacities.iter().sum();
    let ns = nd - 2 * n_couples;
    if terminal_single && (n_couples == 0 || ns == 0) {
        return None;
    }
    let couples = couple_list(ns, n_couples);
    for attempt in 0.. {
        let mut order: Vec<DoctorIx> = if attempt < 100 {
            let mut order: Vec<DoctorIx> = (0..nd).map(DoctorIx).collect();
            order.shuffle(rng);
            order
        } else {
            // couples as adjacent units always satisfy SCPI
            let mut units: Vec<Vec<DoctorIx>> = (0..ns).map(|s| vec![DoctorIx(s)]).collect();
            units.extend(couples.iter().map(|c| vec![c.f, c.m]));
            units.shuffle(rng);
            units.concat()
        };
        if terminal_single {
            let c = *couples.last().expect("some couple");
            let s = DoctorIx(rng.gen_range(0..ns));
            order.retain(|&d| d != c.f && d != c.m && d != s);
            order.extend([c.f, s, c.m]);
        }
        couples_in_order(&mut order, &couples);
        let doctor_prefs: Vec<DoctorPreference> = (0..nd).map(|_| random_doctor_pref(rng, n)).collect();
        let couple_prefs = couples
            .iter()
            .map(|c| {
                random_couple_preference(rng, n, &doctor_prefs[c.f.0], &doctor_prefs[c.m.0], CoupleOrderKind::Unrestricted)
            })
            .collect();
        let inst = assemble(capacities, n_couples, doctor_prefs, couple_prefs, vec![order.clone(); n]);
        let ranking = Ranking::new(order).expect("permutation");
        let normalized = crate::axioms::normalize_by(&inst, &ranking);
        if scpi_witness(&normalized, &ranking).is_none() {
            return Some(inst);
        }
    }
    unreachable!("adjacent couples satisfy SCPI")
}
