//! Reference implementations written straight from the definitions, used to
//! cross-check the library. Slow on purpose: no pruning beyond what the
//! definitions themselves force.
#![allow(dead_code)]

use std::collections::HashSet;

use stable_couples::{
    CouplePreference, DoctorIx, DoctorPreference, HospitalIx, MarketInstance, Matching, Slot, SlotPair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Better in every responsive extension.
    Forced,
    /// Lexicographic on best-first rank vectors padded with vacancies.
    Lex,
}

fn ranks(inst: &MarketInstance, h: HospitalIx, set: &[DoctorIx]) -> Vec<usize> {
    let pref = inst.hospital_pref(h);
    let vacancy = pref.none_rank();
    let mut r: Vec<usize> = set.iter().map(|&d| pref.rank(d)).collect();
    r.sort_unstable();
    r.resize(inst.capacity(h), vacancy);
    r
}

/// Is `a` strictly better than `b` for `h`?
pub fn better(inst: &MarketInstance, h: HospitalIx, a: &[DoctorIx], b: &[DoctorIx], order: Order) -> bool {
    let (ra, rb) = (ranks(inst, h, a), ranks(inst, h, b));
    match order {
        // pointwise dominance of sorted vectors characterises the
        // comparisons every responsive order must make
        Order::Forced => ra != rb && ra.iter().zip(&rb).all(|(x, y)| x <= y),
        Order::Lex => ra < rb,
    }
}

/// Some `D'' ⊆ μ(h) ∖ keep` with `(μ(h) ∖ D'') ∪ incoming` better than `μ(h)`.
pub fn interested(
    inst: &MarketInstance,
    mu: &Matching,
    h: HospitalIx,
    incoming: &[DoctorIx],
    keep: &[DoctorIx],
    order: Order,
) -> bool {
    let current = mu.members(h).to_vec();
    let releasable: Vec<DoctorIx> = current.iter().copied().filter(|d| !keep.contains(d)).collect();
    (0u32..1 << releasable.len()).any(|mask| {
        let mut cand: Vec<DoctorIx> = current
            .iter()
            .copied()
            .filter(|d| !(0..releasable.len()).any(|i| mask & (1 << i) != 0 && releasable[i] == *d))
            .collect();
        cand.extend_from_slice(incoming);
        cand.len() <= inst.capacity(h) && better(inst, h, &cand, &current, order)
    })
}

/// Every blocking coalition, described as text.
pub fn blocking(inst: &MarketInstance, mu: &Matching, order: Order) -> Vec<String> {
    let mut out = Vec::new();
    for &s in inst.singles() {
        let pref = inst.doctor_pref(s);
        for h in inst.hospital_ixs() {
            if pref.prefers(Some(h), mu.of(s)) && interested(inst, mu, h, &[s], &[], order) {
                out.push(format!("{} with {}", inst.doctor_id(s), inst.hospital_id(h)));
            }
        }
    }
    let all_seated = inst.total_capacity() == inst.n_doctors();
    for (ci, c) in inst.couples().iter().enumerate() {
        let cp = inst.couple_pref(ci);
        let here = (mu.of(c.f), mu.of(c.m));
        for &(a, b) in cp.order() {
            if !cp.prefers((a, b), here) || (all_seated && (a.is_none() || b.is_none())) {
                continue;
            }
            let ok = if a == b {
                let h = a.expect("couple prefers (∅,∅) to nothing");
                if here.0 == a {
                    interested(inst, mu, h, &[c.m], &[c.f], order)
                } else if here.1 == a {
                    interested(inst, mu, h, &[c.f], &[c.m], order)
                } else {
                    interested(inst, mu, h, &[c.f, c.m], &[], order)
                }
            } else {
                let f_ok = here.0 == a || a.is_none_or(|h| interested(inst, mu, h, &[c.f], &[], order));
                let m_ok = here.1 == b || b.is_none_or(|h| interested(inst, mu, h, &[c.m], &[], order));
                f_ok && m_ok
            };
            if ok {
                out.push(format!(
                    "({},{}) with ({},{})",
                    inst.doctor_id(c.f),
                    inst.doctor_id(c.m),
                    inst.slot_id(a),
                    inst.slot_id(b)
                ));
            }
        }
    }
    out
}

/// All capacity-feasible assignments of doctors to H̄.
pub fn all_matchings(inst: &MarketInstance) -> Vec<Matching> {
    let slots: Vec<Slot> = inst.slots();
    let nd = inst.n_doctors();
    let mut out = Vec::new();
    let mut cur: Vec<Slot> = vec![None; nd];
    fn rec(inst: &MarketInstance, slots: &[Slot], d: usize, cur: &mut Vec<Slot>, out: &mut Vec<Matching>) {
        if d == cur.len() {
            if let Ok(m) = Matching::from_assignment(inst, cur.clone()) {
                out.push(m);
            }
            return;
        }
        for &s in slots {
            cur[d] = s;
            rec(inst, slots, d + 1, cur, out);
        }
    }
    rec(inst, &slots, 0, &mut cur, &mut out);
    out
}

/// Matchings with no blocking coalition under `order`. With `Order::Forced`
/// this is "not blocked in every extension"; see [`stable_for_all`] for the
/// stronger notion.
pub fn stable_set(inst: &MarketInstance, order: Order) -> HashSet<Vec<Slot>> {
    all_matchings(inst)
        .into_iter()
        .filter(|m| blocking(inst, m, order).is_empty())
        .map(|m| m.assignment().to_vec())
        .collect()
}

/// Matchings that no coalition blocks in any responsive extension: every
/// hospital swap the doctor side wants must be forced-worse or equal.
pub fn stable_for_all(inst: &MarketInstance) -> HashSet<Vec<Slot>> {
    all_matchings(inst)
        .into_iter()
        .filter(|m| blocking_possible(inst, m).is_empty())
        .map(|m| m.assignment().to_vec())
        .collect()
}

fn not_forced_worse(inst: &MarketInstance, mu: &Matching, h: HospitalIx, incoming: &[DoctorIx], keep: &[DoctorIx]) -> bool {
    let current = mu.members(h).to_vec();
    let releasable: Vec<DoctorIx> = current.iter().copied().filter(|d| !keep.contains(d)).collect();
    (0u32..1 << releasable.len()).any(|mask| {
        let mut cand: Vec<DoctorIx> = current
            .iter()
            .copied()
            .filter(|d| !(0..releasable.len()).any(|i| mask & (1 << i) != 0 && releasable[i] == *d))
            .collect();
        cand.extend_from_slice(incoming);
        cand.len() <= inst.capacity(h)
            && !better(inst, h, &current, &cand, Order::Forced)
            && ranks(inst, h, &current) != ranks(inst, h, &cand)
    })
}

/// Coalitions that block in at least one responsive extension.
pub fn blocking_possible(inst: &MarketInstance, mu: &Matching) -> Vec<String> {
    let mut out = Vec::new();
    for &s in inst.singles() {
        let pref = inst.doctor_pref(s);
        for h in inst.hospital_ixs() {
            if pref.prefers(Some(h), mu.of(s)) && not_forced_worse(inst, mu, h, &[s], &[]) {
                out.push(format!("{} with {}", inst.doctor_id(s), inst.hospital_id(h)));
            }
        }
    }
    let all_seated = inst.total_capacity() == inst.n_doctors();
    for (ci, c) in inst.couples().iter().enumerate() {
        let cp = inst.couple_pref(ci);
        let here = (mu.of(c.f), mu.of(c.m));
        for &(a, b) in cp.order() {
            if !cp.prefers((a, b), here) || (all_seated && (a.is_none() || b.is_none())) {
                continue;
            }
            // hospitals extend independently, so per-hospital checks combine exactly
            let ok = if a == b {
                let h = a.expect("couple prefers (∅,∅) to nothing");
                if here.0 == a {
                    not_forced_worse(inst, mu, h, &[c.m], &[c.f])
                } else if here.1 == a {
                    not_forced_worse(inst, mu, h, &[c.f], &[c.m])
                } else {
                    not_forced_worse(inst, mu, h, &[c.f, c.m], &[])
                }
            } else {
                let f_ok = here.0 == a || a.is_none_or(|h| not_forced_worse(inst, mu, h, &[c.f], &[]));
                let m_ok = here.1 == b || b.is_none_or(|h| not_forced_worse(inst, mu, h, &[c.m], &[]));
                f_ok && m_ok
            };
            if ok {
                out.push(format!("({},{}) with ({},{})", inst.doctor_id(c.f), inst.doctor_id(c.m), inst.slot_id(a), inst.slot_id(b)));
            }
        }
    }
    out
}

/// RVT straight from its definition: search for a responsive order over
/// H̄² (a linear extension of the product of the members' orders) that
/// agrees with `cp` on every pair of split placements and never puts a
/// same-hospital placement above something `cp` puts above it.
///
/// With `prune` the search places split pairs only in `cp`'s order and
/// checks each same-hospital pair when it is placed; without it every
/// responsive order is generated and checked in full.
pub fn rvt_by_definition(cp: &CouplePreference, pf: &DoctorPreference, pm: &DoctorPreference, n_hospitals: usize, prune: bool) -> bool {
    let slots: Vec<Slot> = (0..n_hospitals).map(|h| Some(HospitalIx(h))).chain(std::iter::once(None)).collect();
    let pairs: Vec<SlotPair> = slots.iter().flat_map(|&a| slots.iter().map(move |&b| (a, b))).collect();
    let rf = |s: Slot| pf.rank(s).expect("complete");
    let rm = |s: Slot| pm.rank(s).expect("complete");
    // predecessors in the product order
    let preds: Vec<Vec<usize>> = pairs
        .iter()
        .map(|&(a, b)| {
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(x, y))| (x, y) != (a, b) && rf(x) <= rf(a) && rm(y) <= rm(b))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let split: Vec<usize> = {
        let mut v: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].0 != pairs[i].1).collect();
        v.sort_by_key(|&i| cp.rank(pairs[i]).expect("complete"));
        v
    };
    let cp_rank: Vec<usize> = pairs.iter().map(|&p| cp.rank(p).expect("complete")).collect();

    struct Search<'a> {
        pairs: &'a [SlotPair],
        preds: &'a [Vec<usize>],
        split: &'a [usize],
        cp_rank: &'a [usize],
        prune: bool,
        placed: Vec<bool>,
        seq: Vec<usize>,
    }
    impl Search<'_> {
        fn diag_ok(&self, i: usize) -> bool {
            // (h,h) above everything still unplaced: cp must agree
            self.pairs[i].0.is_none()
                || (0..self.pairs.len()).all(|j| self.placed[j] || j == i || self.cp_rank[i] < self.cp_rank[j])
        }
        fn full_check(&self) -> bool {
            let pos: Vec<usize> = {
                let mut p = vec![0; self.pairs.len()];
                for (k, &i) in self.seq.iter().enumerate() {
                    p[i] = k;
                }
                p
            };
            let n = self.pairs.len();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let (pi, pj) = (self.pairs[i], self.pairs[j]);
                    let resp_above = pos[i] < pos[j];
                    let cp_above = self.cp_rank[i] < self.cp_rank[j];
                    if pi.0 == pi.1 && pi.0.is_some() && resp_above && !cp_above {
                        return false;
                    }
                    if pi.0 != pi.1 && pj.0 != pj.1 && resp_above != cp_above {
                        return false;
                    }
                }
            }
            true
        }
        fn go(&mut self, next_split: usize) -> bool {
            if self.seq.len() == self.pairs.len() {
                return self.prune || self.full_check();
            }
            for i in 0..self.pairs.len() {
                if self.placed[i] || !self.preds[i].iter().all(|&p| self.placed[p]) {
                    continue;
                }
                let is_split = self.pairs[i].0 != self.pairs[i].1;
                let mut ns = next_split;
                if self.prune {
                    if is_split {
                        if self.split.get(next_split) != Some(&i) {
                            continue;
                        }
                        ns += 1;
                    } else if !self.diag_ok(i) {
                        continue;
                    }
                }
                self.placed[i] = true;
                self.seq.push(i);
                let found = self.go(ns);
                self.seq.pop();
                self.placed[i] = false;
                if found {
                    return true;
                }
            }
            false
        }
    }
    let mut s = Search {
        pairs: &pairs,
        preds: &preds,
        split: &split,
        cp_rank: &cp_rank,
        prune,
        placed: vec![false; pairs.len()],
        seq: Vec::new(),
    };
    s.go(0)
}
