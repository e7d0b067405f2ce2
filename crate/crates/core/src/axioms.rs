//! Preference axioms with falsifying witnesses.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::market::{
    all_pairs, CouplePreference, DoctorIx, DoctorPreference, HospitalIx, MarketInstance, Member, Ranking, Slot,
    SlotPair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    Responsive,
    Cpi,
    CoupleResponsive,
    Rvt,
    Rf,
    Srf,
    Scpi,
    Cpc,
    Scpc,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Responsive,
        Axiom::Cpi,
        Axiom::CoupleResponsive,
        Axiom::Rvt,
        Axiom::Rf,
        Axiom::Srf,
        Axiom::Scpi,
        Axiom::Cpc,
        Axiom::Scpc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Responsive => "responsive",
            Axiom::Cpi => "cpi",
            Axiom::CoupleResponsive => "couple-responsive",
            Axiom::Rvt => "rvt",
            Axiom::Rf => "rf",
            Axiom::Srf => "srf",
            Axiom::Scpi => "scpi",
            Axiom::Cpc => "cpc",
            Axiom::Scpc => "scpc",
        }
    }

    pub fn from_name(s: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScpiClause {
    /// m is not last: doctors sit between f and m and m is not shielded by capacity.
    MemberNotLast,
    /// m is last and more than one doctor sits between f and m.
    MemberLast,
}

/// A concrete counterexample to an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A set order disagreeing with responsiveness: `kept ∪ first` is ranked
    /// above `kept ∪ second` while `second` beats `first` (clause (ii)), or
    /// with `kept` empty and singletons, the individual ranking (clause (i)).
    SetOrder { clause: u8, hospital: Option<HospitalIx>, kept: Vec<DoctorIx>, first: Vec<DoctorIx>, second: Vec<DoctorIx> },
    /// Two hospitals whose individual rankings first differ at `position` (1-based).
    RankingMismatch { first: HospitalIx, second: HospitalIx, position: usize, first_doctor: DoctorIx, second_doctor: DoctorIx },
    /// The couple ranks `preferred` above `over` although `member`'s own
    /// preference orders the differing coordinate the other way.
    PairOrder { couple: Option<usize>, preferred: SlotPair, over: SlotPair, member: Member },
    /// `dominating` beats `dominated` in every responsive order, yet no
    /// responsive order can be turned into the given one by lifting
    /// same-hospital pairs; the given order ranks `dominated` first.
    Togetherness { couple: Option<usize>, dominating: SlotPair, dominated: SlotPair },
    /// `(together, together)` precedes `(other, together)` (RF) or
    /// `(together, other)` (SRF) while f's preference does not allow it.
    LiftedPair { couple: usize, together: HospitalIx, other: HospitalIx },
    Scpi { couple: usize, clause: ScpiClause, between: usize, above_m: usize },
    /// `hospital` ranks the couple's m above its f.
    CoupleOrder { hospital: HospitalIx, couple: usize },
    /// `doctor` is above the couple's f at `above_at` and below it at `below_at`.
    SplitAboveSet { couple: usize, doctor: DoctorIx, above_at: HospitalIx, below_at: HospitalIx },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    fn pass(axiom: Axiom) -> Self {
        AxiomVerdict { axiom, holds: true, witness: None }
    }

    fn fail(axiom: Axiom, w: Witness) -> Self {
        AxiomVerdict { axiom, holds: false, witness: Some(w) }
    }

    fn from(axiom: Axiom, w: Option<Witness>) -> Self {
        match w {
            None => Self::pass(axiom),
            Some(w) => Self::fail(axiom, w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("set order is not a total order over the feasible sets: {0}")]
    NotTotal(String),
    #[error("{axiom} is only defined when {requires} holds")]
    Precondition { axiom: &'static str, requires: &'static str },
}

/// All subsets of `0..n` with at most `capacity` members, by size then
/// lexicographically.
pub fn feasible_sets(n: usize, capacity: usize) -> Vec<Vec<DoctorIx>> {
    let universe: Vec<DoctorIx> = (0..n).map(DoctorIx).collect();
    feasible_sets_of(&universe, capacity)
}

pub fn feasible_sets_of(universe: &[DoctorIx], capacity: usize) -> Vec<Vec<DoctorIx>> {
    let mut sorted = universe.to_vec();
    sorted.sort();
    let mut out = vec![Vec::new()];
    for k in 1..=capacity.min(sorted.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.iter().map(|&i| sorted[i]).collect());
            let mut i = k;
            while i > 0 && idx[i - 1] == sorted.len() - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Responsiveness of an explicit set order with respect to `individual`.
pub fn check_responsive_hospital(
    order: &[Vec<DoctorIx>],
    individual: &Ranking<DoctorIx>,
    capacity: usize,
) -> Result<AxiomVerdict, AxiomError> {
    let universe: Vec<DoctorIx> = individual.as_slice().to_vec();
    let feasible = feasible_sets_of(&universe, capacity);
    let mut pos: HashMap<Vec<DoctorIx>, usize> = HashMap::with_capacity(order.len());
    for (i, s) in order.iter().enumerate() {
        let mut key = s.clone();
        key.sort();
        if pos.insert(key.clone(), i).is_some() {
            return Err(AxiomError::NotTotal(format!("set {key:?} listed twice")));
        }
    }
    if pos.len() != feasible.len() || feasible.iter().any(|s| !pos.contains_key(s)) {
        return Err(AxiomError::NotTotal(format!(
            "{} sets listed, {} feasible sets exist",
            pos.len(),
            feasible.len()
        )));
    }
    let at = |s: &[DoctorIx]| pos[s];

    // clause (i): singletons (and the empty set as ∅) follow the ranking
    let mut singles: Vec<Vec<DoctorIx>> = individual.iter().map(|&d| vec![d]).collect();
    singles.push(Vec::new());
    for i in 0..singles.len() {
        for j in (i + 1)..singles.len() {
            if at(&singles[j]) < at(&singles[i]) {
                return Ok(AxiomVerdict::fail(
                    Axiom::Responsive,
                    Witness::SetOrder {
                        clause: 1,
                        hospital: None,
                        kept: Vec::new(),
                        first: singles[j].clone(),
                        second: singles[i].clone(),
                    },
                ));
            }
        }
    }

    // clause (ii)
    for kept in &feasible {
        if kept.is_empty() || kept.len() >= capacity {
            continue;
        }
        let rest: Vec<&Vec<DoctorIx>> =
            feasible.iter().filter(|s| s.len() + kept.len() <= capacity && disjoint(s, kept)).collect();
        for a in &rest {
            for b in &rest {
                if a == b {
                    continue;
                }
                let ka = union(kept, a);
                let kb = union(kept, b);
                if (at(&ka) < at(&kb)) != (at(a) < at(b)) {
                    let (first, second) = if at(&ka) < at(&kb) { (a, b) } else { (b, a) };
                    return Ok(AxiomVerdict::fail(
                        Axiom::Responsive,
                        Witness::SetOrder {
                            clause: 2,
                            hospital: None,
                            kept: kept.clone(),
                            first: (*first).clone(),
                            second: (*second).clone(),
                        },
                    ));
                }
            }
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Responsive))
}

fn disjoint(a: &[DoctorIx], b: &[DoctorIx]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

fn union(a: &[DoctorIx], b: &[DoctorIx]) -> Vec<DoctorIx> {
    let mut v: Vec<DoctorIx> = a.iter().chain(b).copied().collect();
    v.sort();
    v.dedup();
    v
}

/// Result of the common-ranking check. When the ranking is common,
/// `normalized` relabels couples so that f is ranked above m and sorts
/// couples by the rank of m.
#[derive(Debug, Clone)]
pub struct CpiCheck {
    pub verdict: AxiomVerdict,
    pub normalized: Option<Normalized>,
}

#[derive(Debug, Clone)]
pub struct Normalized {
    pub ranking: Ranking<DoctorIx>,
    pub instance: MarketInstance,
}

pub fn check_cpi(inst: &MarketInstance) -> CpiCheck {
    let mut hs = inst.hospital_ixs();
    let Some(first) = hs.next() else {
        return CpiCheck { verdict: AxiomVerdict::pass(Axiom::Cpi), normalized: None };
    };
    let base = inst.hospital_pref(first).individual.as_slice();
    for h in hs {
        let other = inst.hospital_pref(h).individual.as_slice();
        if other != base {
            let k = base.iter().zip(other).position(|(a, b)| a != b).unwrap_or(base.len().min(other.len()));
            let w = Witness::RankingMismatch {
                first,
                second: h,
                position: k + 1,
                first_doctor: base.get(k).copied().unwrap_or(DoctorIx(usize::MAX)),
                second_doctor: other.get(k).copied().unwrap_or(DoctorIx(usize::MAX)),
            };
            return CpiCheck { verdict: AxiomVerdict::fail(Axiom::Cpi, w), normalized: None };
        }
    }
    let ranking = inst.hospital_pref(first).individual.clone();
    let instance = normalize_by(inst, &ranking);
    CpiCheck { verdict: AxiomVerdict::pass(Axiom::Cpi), normalized: Some(Normalized { ranking, instance }) }
}

/// Relabels couples so f is above m in `ranking`, couples sorted by m's rank.
pub fn normalize_by(inst: &MarketInstance, ranking: &Ranking<DoctorIx>) -> MarketInstance {
    let rank = |d: DoctorIx| ranking.rank(&d).unwrap_or(usize::MAX);
    let swap: Vec<bool> = inst.couples().iter().map(|c| rank(c.m) < rank(c.f)).collect();
    let mut order: Vec<usize> = (0..inst.couples().len()).collect();
    order.sort_by_key(|&i| {
        let c = inst.couples()[i];
        rank(c.f).max(rank(c.m))
    });
    inst.relabel_couples(&swap, &order)
}

/// Responsiveness of a couple preference: same-first-coordinate comparisons
/// follow `pm`, same-second-coordinate comparisons follow `pf`.
pub fn check_couple_responsive(cp: &CouplePreference, pf: &DoctorPreference, pm: &DoctorPreference) -> AxiomVerdict {
    AxiomVerdict::from(Axiom::CoupleResponsive, couple_responsive_witness(cp, pf, pm, None))
}

fn couple_responsive_witness(
    cp: &CouplePreference,
    pf: &DoctorPreference,
    pm: &DoctorPreference,
    couple: Option<usize>,
) -> Option<Witness> {
    let order = cp.order();
    for (member, pref) in [(Member::M, pm), (Member::F, pf)] {
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[i + 1..] {
                let shared = member.other();
                if shared.of(x) != shared.of(y) {
                    continue;
                }
                if !pref.prefers(member.of(x), member.of(y)) {
                    return Some(Witness::PairOrder { couple, preferred: x, over: y, member });
                }
            }
        }
    }
    None
}

/// Decides whether `cp` arises from some responsive order by lifting
/// same-hospital pairs only.
///
/// The conditions amount to a set of "must precede" constraints on a
/// responsive order: the product order of (`pf`, `pm`), the given relative
/// order of all pairs with distinct coordinates, and, for every pair
/// `(h, h)` with `h` a hospital, every pair the given order puts above it.
/// A suitable order exists exactly when these constraints are acyclic.
pub fn check_rvt(cp: &CouplePreference, pf: &DoctorPreference, pm: &DoctorPreference) -> AxiomVerdict {
    AxiomVerdict::from(Axiom::Rvt, rvt_witness(cp, pf, pm, None))
}

fn rvt_witness(cp: &CouplePreference, pf: &DoctorPreference, pm: &DoctorPreference, couple: Option<usize>) -> Option<Witness> {
    let pairs: Vec<SlotPair> = cp.order().to_vec();
    let n = pairs.len();
    let rf = |s: Slot| pf.rank(s).unwrap_or(usize::MAX);
    let rm = |s: Slot| pm.rank(s).unwrap_or(usize::MAX);
    let dominates = |x: SlotPair, y: SlotPair| x != y && rf(x.0) <= rf(y.0) && rm(x.1) <= rm(y.1);
    let off_diagonal = |x: SlotPair| x.0 != x.1;
    let lifted = |x: SlotPair| x.0 == x.1 && x.0.is_some();

    // direct inversions first, in the given order
    for (j, &y) in pairs.iter().enumerate() {
        for &x in &pairs[j + 1..] {
            // y is ranked above x
            if dominates(x, y) && ((off_diagonal(x) && off_diagonal(y)) || lifted(x)) {
                return Some(Witness::Togetherness { couple, dominating: x, dominated: y });
            }
        }
    }

    // constraint graph over positions in the given order: edge u -> v means u must precede v
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let (x, y) = (pairs[u], pairs[v]);
            let product = dominates(x, y);
            let given = u < v && ((off_diagonal(x) && off_diagonal(y)) || lifted(y));
            if product || given {
                succ[u].push(v);
            }
        }
    }
    let cycle = find_cycle(&succ)?;
    // a cycle needs an edge the given order reverses; such an edge is a product edge
    let k = cycle.len();
    for i in 0..k {
        let (u, v) = (cycle[i], cycle[(i + 1) % k]);
        if v < u {
            return Some(Witness::Togetherness { couple, dominating: pairs[u], dominated: pairs[v] });
        }
    }
    unreachable!("every cycle contains an edge against the given order")
}

fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = succ.len();
    let mut mark = vec![Mark::New; n];
    let mut parent = vec![usize::MAX; n];
    for start in 0..n {
        if mark[start] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        mark[start] = Mark::Active;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < succ[u].len() {
                let v = succ[u][*next];
                *next += 1;
                match mark[v] {
                    Mark::New => {
                        mark[v] = Mark::Active;
                        parent[v] = u;
                        stack.push((v, 0));
                    }
                    Mark::Active => {
                        let mut cycle = vec![u];
                        let mut w = u;
                        while w != v {
                            w = parent[w];
                            cycle.push(w);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[u] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

fn couple_prefs(inst: &MarketInstance, ci: usize) -> (&CouplePreference, &DoctorPreference, &DoctorPreference) {
    let c = inst.couples()[ci];
    (inst.couple_pref(ci), inst.doctor_pref(c.f), inst.doctor_pref(c.m))
}

/// Couple responsiveness for every couple of the market.
pub fn check_couples_responsive(inst: &MarketInstance) -> AxiomVerdict {
    let w = (0..inst.couples().len()).find_map(|ci| {
        let (cp, pf, pm) = couple_prefs(inst, ci);
        couple_responsive_witness(cp, pf, pm, Some(ci))
    });
    AxiomVerdict::from(Axiom::CoupleResponsive, w)
}

/// [`check_rvt`] for every couple of the market.
pub fn check_rvt_all(inst: &MarketInstance) -> AxiomVerdict {
    let w = (0..inst.couples().len()).find_map(|ci| {
        let (cp, pf, pm) = couple_prefs(inst, ci);
        rvt_witness(cp, pf, pm, Some(ci))
    });
    AxiomVerdict::from(Axiom::Rvt, w)
}

/// Togetherness is only ever paid for by m: `(h, h)` may precede `(h', h)`
/// only when f prefers `h` to `h'`.
pub fn check_rf(inst: &MarketInstance) -> AxiomVerdict {
    AxiomVerdict::from(Axiom::Rf, rf_witness(inst))
}

fn rf_witness(inst: &MarketInstance) -> Option<Witness> {
    for ci in 0..inst.couples().len() {
        let (cp, pf, _) = couple_prefs(inst, ci);
        for h in inst.hospital_ixs() {
            for h2 in inst.hospital_ixs() {
                if h == h2 {
                    continue;
                }
                let (a, b) = (Some(h), Some(h2));
                if cp.prefers((a, a), (b, a)) && !pf.prefers(a, b) {
                    return Some(Witness::LiftedPair { couple: ci, together: h, other: h2 });
                }
            }
        }
    }
    None
}

/// Strong RF. Only defined on markets satisfying RF.
pub fn check_srf(inst: &MarketInstance) -> Result<AxiomVerdict, AxiomError> {
    if rf_witness(inst).is_some() {
        return Err(AxiomError::Precondition { axiom: "srf", requires: "rf" });
    }
    for ci in 0..inst.couples().len() {
        let (cp, pf, pm) = couple_prefs(inst, ci);
        let top = pf.top();
        for h in inst.hospital_ixs() {
            if Some(h) == top {
                continue;
            }
            for h2 in inst.hospital_ixs() {
                if h == h2 {
                    continue;
                }
                let (a, b) = (Some(h), Some(h2));
                if cp.prefers((a, a), (a, b)) && pm.prefers(b, a) && !pf.prefers(b, a) {
                    return Ok(AxiomVerdict::fail(Axiom::Srf, Witness::LiftedPair { couple: ci, together: h, other: h2 }));
                }
            }
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Srf))
}

/// Strong CPI, evaluated with each couple's better-ranked member as f.
pub fn check_scpi(inst: &MarketInstance) -> Result<AxiomVerdict, AxiomError> {
    let cpi = check_cpi(inst);
    let Some(norm) = cpi.normalized else {
        return Err(AxiomError::Precondition { axiom: "scpi", requires: "cpi" });
    };
    let w = scpi_witness(&norm.instance, &norm.ranking).map(|w| match w {
        Witness::Scpi { couple, clause, between, above_m } => {
            let f = norm.instance.couples()[couple].f;
            let original = inst.couples().iter().position(|c| c.f == f || c.m == f).expect("same doctors");
            Witness::Scpi { couple: original, clause, between, above_m }
        }
        other => other,
    });
    Ok(AxiomVerdict::from(Axiom::Scpi, w))
}

pub(crate) fn scpi_witness(inst: &MarketInstance, ranking: &Ranking<DoctorIx>) -> Option<Witness> {
    let nd = inst.n_doctors();
    for (ci, c) in inst.couples().iter().enumerate() {
        let rf = ranking.rank(&c.f).unwrap_or(usize::MAX);
        let rm = ranking.rank(&c.m).unwrap_or(usize::MAX);
        let above_m = rm - 1;
        let between = rm - rf - 1;
        if rm != nd {
            let shielded = inst.hospital_ixs().all(|h| above_m < inst.capacity(h));
            if between > 0 && !shielded {
                return Some(Witness::Scpi { couple: ci, clause: ScpiClause::MemberNotLast, between, above_m });
            }
        } else if between > 1 {
            return Some(Witness::Scpi { couple: ci, clause: ScpiClause::MemberLast, between, above_m });
        }
    }
    None
}

/// Every hospital ranks each couple's f above its m (labels as given).
pub fn check_cpc(inst: &MarketInstance) -> AxiomVerdict {
    AxiomVerdict::from(Axiom::Cpc, cpc_witness(inst))
}

fn cpc_witness(inst: &MarketInstance) -> Option<Witness> {
    for h in inst.hospital_ixs() {
        let p = inst.hospital_pref(h);
        for (ci, c) in inst.couples().iter().enumerate() {
            if !p.prefers(c.f, c.m) {
                return Some(Witness::CoupleOrder { hospital: h, couple: ci });
            }
        }
    }
    None
}

/// Hospitals agree on who is ranked above each couple's f. Only defined on
/// markets satisfying CPC.
pub fn check_scpc(inst: &MarketInstance) -> Result<AxiomVerdict, AxiomError> {
    if cpc_witness(inst).is_some() {
        return Err(AxiomError::Precondition { axiom: "scpc", requires: "cpc" });
    }
    for (ci, c) in inst.couples().iter().enumerate() {
        for d in inst.doctor_ixs() {
            if d == c.f {
                continue;
            }
            let above: Vec<HospitalIx> = inst.hospital_ixs().filter(|&h| inst.hospital_pref(h).prefers(d, c.f)).collect();
            if !above.is_empty() && above.len() != inst.n_hospitals() {
                let below_at = inst.hospital_ixs().find(|h| !above.contains(h)).expect("some hospital disagrees");
                return Ok(AxiomVerdict::fail(
                    Axiom::Scpc,
                    Witness::SplitAboveSet { couple: ci, doctor: d, above_at: above[0], below_at },
                ));
            }
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Scpc))
}

/// A couple preference is well formed: it lists each pair of H̄² once,
/// matched pairs come first, and every conditional projection ends with ∅.
pub fn couple_preference_is_valid(cp: &CouplePreference, n_hospitals: usize) -> bool {
    let every = all_pairs(n_hospitals);
    if cp.order().len() != every.len() || every.iter().any(|p| !cp.ranking().contains(p)) {
        return false;
    }
    let first_none = cp.order().iter().position(|(a, b)| a.is_none() || b.is_none()).unwrap_or(every.len());
    if cp.order()[first_none..].iter().any(|(a, b)| a.is_some() && b.is_some()) {
        return false;
    }
    crate::market::all_slots(n_hospitals).into_iter().all(|at| {
        [Member::F, Member::M].into_iter().all(|fixed| cp.conditional(fixed, at).last() == Some(&None))
    })
}

/// [`check_responsive_hospital`] for every hospital with an explicit set
/// order; the built-in extensions are responsive by construction.
pub fn check_hospitals_responsive(inst: &MarketInstance) -> Result<AxiomVerdict, AxiomError> {
    for h in inst.hospital_ixs() {
        let p = inst.hospital_pref(h);
        if let crate::market::SetExtension::Explicit(order) = &p.set_extension {
            let mut v = check_responsive_hospital(order.sets(), &p.individual, inst.capacity(h))?;
            if let Some(Witness::SetOrder { hospital, .. }) = &mut v.witness {
                *hospital = Some(h);
            }
            if !v.holds {
                return Ok(v);
            }
        }
    }
    Ok(AxiomVerdict::pass(Axiom::Responsive))
}

/// Evaluates one axiom on the whole market.
pub fn check_axiom(inst: &MarketInstance, axiom: Axiom) -> Result<AxiomVerdict, AxiomError> {
    match axiom {
        Axiom::Responsive => check_hospitals_responsive(inst),
        Axiom::Cpi => Ok(check_cpi(inst).verdict),
        Axiom::CoupleResponsive => Ok(check_couples_responsive(inst)),
        Axiom::Rvt => Ok(check_rvt_all(inst)),
        Axiom::Rf => Ok(check_rf(inst)),
        Axiom::Srf => check_srf(inst),
        Axiom::Scpi => check_scpi(inst),
        Axiom::Cpc => Ok(check_cpc(inst)),
        Axiom::Scpc => check_scpc(inst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example1, example2, example3};
    use crate::market::HospitalIx;

    fn h(i: usize) -> Slot {
        Some(HospitalIx(i))
    }

    #[test]
    fn feasible_set_count() {
        assert_eq!(feasible_sets(4, 2).len(), 1 + 4 + 6);
        assert_eq!(feasible_sets(5, 5).len(), 32);
    }

    #[test]
    fn swapped_pair_violates_clause_two() {
        let ranking = Ranking::new((0..4).map(DoctorIx).collect()).unwrap();
        let mut order = feasible_sets(4, 2);
        let p = crate::market::HospitalPreference::new(
            ranking.as_slice().to_vec(),
            crate::market::SetExtension::RankVectorLex,
        )
        .unwrap();
        order.sort_by_key(|s| crate::set_order::rank_vector(&p, s, 2));
        let i = order.iter().position(|s| s == &[DoctorIx(0), DoctorIx(3)]).unwrap();
        let j = order.iter().position(|s| s == &[DoctorIx(0), DoctorIx(2)]).unwrap();
        order.swap(i, j);
        let v = check_responsive_hospital(&order, &ranking, 2).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::SetOrder {
                clause: 2,
                hospital: None,
                kept: vec![DoctorIx(0)],
                first: vec![DoctorIx(3)],
                second: vec![DoctorIx(2)],
            })
        );
    }

    #[test]
    fn unit_capacity_matching_ranking_is_responsive() {
        let ranking = Ranking::new(vec![DoctorIx(2), DoctorIx(0), DoctorIx(1)]).unwrap();
        let order = vec![vec![DoctorIx(2)], vec![DoctorIx(0)], vec![DoctorIx(1)], vec![]];
        assert!(check_responsive_hospital(&order, &ranking, 1).unwrap().holds);
    }

    #[test]
    fn incomplete_set_order_is_an_error() {
        let ranking = Ranking::new(vec![DoctorIx(0), DoctorIx(1)]).unwrap();
        let order = vec![vec![DoctorIx(0)], vec![DoctorIx(1)]];
        assert!(check_responsive_hospital(&order, &ranking, 1).is_err());
    }

    #[test]
    fn example_one_profile() {
        let inst = example1();
        let cpi = check_cpi(&inst);
        assert!(cpi.verdict.holds);
        assert_eq!(cpi.normalized.unwrap().instance, inst);
        assert!(check_rvt_all(&inst).holds);
        let rf = check_rf(&inst);
        assert_eq!(rf.witness, Some(Witness::LiftedPair { couple: 0, together: HospitalIx(0), other: HospitalIx(1) }));
        let cr = check_couples_responsive(&inst);
        assert_eq!(
            cr.witness,
            Some(Witness::PairOrder { couple: Some(0), preferred: (h(0), h(0)), over: (h(1), h(0)), member: Member::F })
        );
        let scpi = check_scpi(&inst).unwrap();
        assert!(matches!(scpi.witness, Some(Witness::Scpi { clause: ScpiClause::MemberLast, between: 2, .. })));
    }

    #[test]
    fn example_two_profile() {
        let inst = example2();
        let cpi = check_cpi(&inst);
        assert!(!cpi.verdict.holds);
        assert!(check_rf(&inst).holds);
        let srf = check_srf(&inst).unwrap();
        assert_eq!(srf.witness, Some(Witness::LiftedPair { couple: 0, together: HospitalIx(2), other: HospitalIx(1) }));
        assert_eq!(check_cpc(&inst).witness, Some(Witness::CoupleOrder { hospital: HospitalIx(2), couple: 0 }));
        assert!(check_scpc(&inst).is_err());
    }

    #[test]
    fn example_three_profile() {
        let inst = example3();
        assert!(check_cpc(&inst).holds);
        let s1 = inst.doctor_by_id("s1").unwrap();
        assert_eq!(
            check_scpc(&inst).unwrap().witness,
            Some(Witness::SplitAboveSet { couple: 0, doctor: s1, above_at: HospitalIx(0), below_at: HospitalIx(1) })
        );
    }

    #[test]
    fn scpi_small_cases() {
        use crate::market::{MarketBuilder, SetExtensionSpec};
        let build = |ranking: &[&str]| {
            MarketBuilder::new()
                .hospital("h1", 2)
                .hospital("h2", 2)
                .single("s1", &["h1", "h2"])
                .single("s2", &["h1", "h2"])
                .couple("f", "m", &["h1", "h2"], &["h1", "h2"], None)
                .common_ranking(ranking, SetExtensionSpec::RankLex)
                .build()
                .unwrap()
        };
        assert!(check_scpi(&build(&["f", "m", "s1", "s2"])).unwrap().holds);
        let v = check_scpi(&build(&["f", "s1", "m", "s2"])).unwrap();
        assert!(matches!(v.witness, Some(Witness::Scpi { clause: ScpiClause::MemberNotLast, between: 1, above_m: 2, .. })));
    }

    #[test]
    fn responsive_product_passes_everything() {
        let pf = DoctorPreference::new(vec![h(1), h(0), h(2)]).unwrap();
        let pm = DoctorPreference::new(vec![h(2), h(1), h(0)]).unwrap();
        let cp = CouplePreference::responsive_product(3, &pf, &pm);
        assert!(check_couple_responsive(&cp, &pf, &pm).holds);
        assert!(check_rvt(&cp, &pf, &pm).holds);
        assert!(couple_preference_is_valid(&cp, 3));
    }

    #[test]
    fn diagonal_below_dominated_pair_fails_rvt() {
        let pf = DoctorPreference::new(vec![h(0), h(1)]).unwrap();
        let pm = DoctorPreference::new(vec![h(0), h(1)]).unwrap();
        let cp = CouplePreference::with_canonical_none_pairs(
            vec![(h(0), h(1)), (h(0), h(0)), (h(1), h(0)), (h(1), h(1))],
            2,
            &pf,
            &pm,
        )
        .unwrap();
        let v = check_rvt(&cp, &pf, &pm);
        assert_eq!(v.witness, Some(Witness::Togetherness { couple: None, dominating: (h(0), h(0)), dominated: (h(0), h(1)) }));
    }

    #[test]
    fn table_one_lift_is_rvt() {
        let inst = example1();
        let (cp, pf, pm) = couple_prefs(&inst, 0);
        assert!(check_rvt(cp, pf, pm).holds);
        assert!(!check_couple_responsive(cp, pf, pm).holds);
    }
}
