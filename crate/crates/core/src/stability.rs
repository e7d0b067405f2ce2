//! Blocking coalitions, stability verdicts and brute-force enumeration.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::market::{DoctorIx, HospitalIx, MarketInstance, Matching, SetExtension, Slot, SlotPair};
use crate::set_order::{compare_forced, compare_rank_lex, SetComparison};

/// Default cap on `|H̄|^|D|` for exhaustive enumeration.
pub const DEFAULT_MAX_CANDIDATES: u64 = 10_000_000;

/// How hospitals compare feasible sets when deciding interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Semantics {
    /// Only comparisons shared by every responsive extension.
    ForcedOnly,
    /// The canonical rank-vector completion.
    RankVectorLex,
    /// Each hospital's explicit set order.
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Interest {
    Yes,
    No,
    Undetermined,
}

impl Interest {
    fn and(self, other: Interest) -> Interest {
        match (self, other) {
            (Interest::No, _) | (_, Interest::No) => Interest::No,
            (Interest::Yes, Interest::Yes) => Interest::Yes,
            _ => Interest::Undetermined,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("hospital {0} has no explicit set order")]
    NoExplicitOrder(String),
    #[error("explicit set order of hospital {0} lacks a compared set")]
    IncompleteExplicitOrder(String),
    #[error("{estimate} candidate assignments exceed the enumeration bound {bound}")]
    TooLarge { estimate: u128, bound: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvidenceStatus {
    /// Every responsive extension agrees.
    Forced,
    /// Holds under the chosen total set order.
    ByCanonical,
    /// Responsive extensions disagree.
    Undetermined,
}

/// A hospital's side of a coalition: it takes `incoming`, releases
/// `released`, and prefers the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HospitalEvidence {
    pub hospital: HospitalIx,
    pub incoming: Vec<DoctorIx>,
    pub released: Vec<DoctorIx>,
    pub status: EvidenceStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoupleCase {
    /// Both members move to new hospitals.
    BothMove,
    /// One member already sits at its target.
    OneAnchored,
    /// Both members target the same hospital.
    SameHospital,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    Single { hospital: HospitalIx, doctor: DoctorIx },
    Couple { couple: usize, target: SlotPair, case: CoupleCase },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingWitness {
    pub kind: BlockKind,
    pub evidence: Vec<HospitalEvidence>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityStatus {
    StableForAllResponsiveExtensions,
    UnstableForAllResponsiveExtensions,
    ExtensionDependent,
    StableUnderCanonical,
    UnstableUnderCanonical,
}

impl StabilityStatus {
    pub fn is_stable(self) -> bool {
        matches!(self, StabilityStatus::StableForAllResponsiveExtensions | StabilityStatus::StableUnderCanonical)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    /// Blocking coalitions; for [`StabilityStatus::ExtensionDependent`] the
    /// coalitions whose hospital side is undetermined.
    pub witnesses: Vec<BlockingWitness>,
}

/// Interest of `h` in `incoming` at `mu`, with the set it would release.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterestOutcome {
    pub interest: Interest,
    pub released: Vec<DoctorIx>,
}

/// Does `h` prefer `(μ(h) ∖ D'') ∪ incoming` to `μ(h)` for some `D''`?
pub fn hospital_interested(
    inst: &MarketInstance,
    h: HospitalIx,
    mu: &Matching,
    incoming: &[DoctorIx],
    semantics: Semantics,
) -> Result<InterestOutcome, StabilityError> {
    interest_keeping(inst, h, mu, incoming, &[], semantics)
}

/// As [`hospital_interested`], with `keep ⊆ μ(h)` never released. A couple
/// member already at the hospital it shares with its partner is kept this way.
fn interest_keeping(
    inst: &MarketInstance,
    h: HospitalIx,
    mu: &Matching,
    incoming: &[DoctorIx],
    keep: &[DoctorIx],
    semantics: Semantics,
) -> Result<InterestOutcome, StabilityError> {
    let pref = inst.hospital_pref(h);
    let cap = inst.capacity(h);
    let current = mu.members(h);
    let no = InterestOutcome { interest: Interest::No, released: Vec::new() };
    if keep.len() + incoming.len() > cap {
        return Ok(no);
    }
    match semantics {
        Semantics::ForcedOnly | Semantics::RankVectorLex => {
            // Releasing the worst releasable members, only as many as needed,
            // gives a set that dominates every other admissible swap.
            let mut releasable: Vec<DoctorIx> = current.iter().copied().filter(|d| !keep.contains(d)).collect();
            releasable.sort_by_key(|&d| pref.rank(d));
            let excess = (current.len() + incoming.len()).saturating_sub(cap);
            let released: Vec<DoctorIx> = releasable[releasable.len() - excess..].to_vec();
            let candidate: Vec<DoctorIx> =
                current.iter().copied().filter(|d| !released.contains(d)).chain(incoming.iter().copied()).collect();
            let cmp = match semantics {
                Semantics::ForcedOnly => compare_forced(pref, &candidate, current, cap),
                _ => compare_rank_lex(pref, &candidate, current, cap),
            };
            let interest = match cmp {
                SetComparison::Better => Interest::Yes,
                SetComparison::Worse | SetComparison::Equal => Interest::No,
                SetComparison::Incomparable => Interest::Undetermined,
            };
            Ok(InterestOutcome { interest, released })
        }
        Semantics::Explicit => {
            let SetExtension::Explicit(order) = &pref.set_extension else {
                return Err(StabilityError::NoExplicitOrder(inst.hospital_id(h).to_string()));
            };
            let missing = || StabilityError::IncompleteExplicitOrder(inst.hospital_id(h).to_string());
            let here = order.position(current).ok_or_else(missing)?;
            let releasable: Vec<DoctorIx> = current.iter().copied().filter(|d| !keep.contains(d)).collect();
            let mut best: Option<(usize, Vec<DoctorIx>)> = None;
            for mask in 0u32..(1 << releasable.len()) {
                let released: Vec<DoctorIx> =
                    (0..releasable.len()).filter(|i| mask & (1 << i) != 0).map(|i| releasable[i]).collect();
                if current.len() - released.len() + incoming.len() > cap {
                    continue;
                }
                let candidate: Vec<DoctorIx> = current
                    .iter()
                    .copied()
                    .filter(|d| !released.contains(d))
                    .chain(incoming.iter().copied())
                    .collect();
                let pos = order.position(&candidate).ok_or_else(missing)?;
                if best.as_ref().is_none_or(|(b, _)| pos < *b) {
                    best = Some((pos, released));
                }
            }
            Ok(match best {
                Some((pos, released)) if pos < here => InterestOutcome { interest: Interest::Yes, released },
                _ => no,
            })
        }
    }
}

fn evidence_status(semantics: Semantics, interest: Interest) -> EvidenceStatus {
    match (semantics, interest) {
        (_, Interest::Undetermined) => EvidenceStatus::Undetermined,
        (Semantics::ForcedOnly, _) => EvidenceStatus::Forced,
        _ => EvidenceStatus::ByCanonical,
    }
}

/// Visits every coalition in which the doctor side is interested and the
/// hospital side is not ruled out, with the combined hospital interest.
fn visit_coalitions(
    inst: &MarketInstance,
    mu: &Matching,
    semantics: Semantics,
    visit: &mut dyn FnMut(BlockingWitness, Interest) -> ControlFlow<()>,
) -> Result<(), StabilityError> {
    // singles
    for &s in inst.singles() {
        let pref = inst.doctor_pref(s);
        let here = mu.of(s);
        for h in pref.hospitals() {
            if !pref.prefers(Some(h), here) {
                break;
            }
            let out = hospital_interested(inst, h, mu, &[s], semantics)?;
            if out.interest == Interest::No {
                continue;
            }
            let w = BlockingWitness {
                kind: BlockKind::Single { hospital: h, doctor: s },
                evidence: vec![HospitalEvidence {
                    hospital: h,
                    incoming: vec![s],
                    released: out.released,
                    status: evidence_status(semantics, out.interest),
                }],
            };
            if visit(w, out.interest).is_break() {
                return Ok(());
            }
        }
    }

    // couples
    let padded = inst.total_capacity() != inst.n_doctors();
    for (ci, c) in inst.couples().iter().enumerate() {
        let cp = inst.couple_pref(ci);
        let here = (mu.of(c.f), mu.of(c.m));
        for &target in cp.order() {
            if target == here {
                break;
            }
            let (a, b) = target;
            if !padded && (a.is_none() || b.is_none()) {
                continue;
            }
            // (hospital, incoming, kept) requirements
            let mut needs: Vec<(HospitalIx, Vec<DoctorIx>, Vec<DoctorIx>)> = Vec::new();
            let case;
            if a == b {
                case = CoupleCase::SameHospital;
                if let Some(h) = a {
                    if here.0 == a {
                        needs.push((h, vec![c.m], vec![c.f]));
                    } else if here.1 == a {
                        needs.push((h, vec![c.f], vec![c.m]));
                    } else {
                        needs.push((h, vec![c.f, c.m], Vec::new()));
                    }
                }
            } else if here.0 == a || here.1 == b {
                case = CoupleCase::OneAnchored;
                let (slot, d) = if here.0 == a { (b, c.m) } else { (a, c.f) };
                if let Some(h) = slot {
                    needs.push((h, vec![d], Vec::new()));
                }
            } else {
                case = CoupleCase::BothMove;
                if let Some(h) = a {
                    needs.push((h, vec![c.f], Vec::new()));
                }
                if let Some(h) = b {
                    needs.push((h, vec![c.m], Vec::new()));
                }
            }
            let mut interest = Interest::Yes;
            let mut evidence = Vec::new();
            for (h, incoming, keep) in needs {
                let out = interest_keeping(inst, h, mu, &incoming, &keep, semantics)?;
                interest = interest.and(out.interest);
                if interest == Interest::No {
                    break;
                }
                evidence.push(HospitalEvidence {
                    hospital: h,
                    incoming,
                    released: out.released,
                    status: evidence_status(semantics, out.interest),
                });
            }
            if interest == Interest::No {
                continue;
            }
            let w = BlockingWitness { kind: BlockKind::Couple { couple: ci, target, case }, evidence };
            if visit(w, interest).is_break() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Every coalition that blocks `mu` under `semantics`. Under
/// [`Semantics::ForcedOnly`] only coalitions blocking in every responsive
/// extension are returned.
pub fn find_blocking_pairs(
    inst: &MarketInstance,
    mu: &Matching,
    semantics: Semantics,
) -> Result<Vec<BlockingWitness>, StabilityError> {
    let mut out = Vec::new();
    visit_coalitions(inst, mu, semantics, &mut |w, i| {
        if i == Interest::Yes {
            out.push(w);
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn is_stable(inst: &MarketInstance, mu: &Matching, semantics: Semantics) -> Result<StabilityVerdict, StabilityError> {
    let mut blocking = Vec::new();
    let mut undetermined = Vec::new();
    visit_coalitions(inst, mu, semantics, &mut |w, i| {
        match i {
            Interest::Yes => blocking.push(w),
            Interest::Undetermined => undetermined.push(w),
            Interest::No => {}
        }
        ControlFlow::Continue(())
    })?;
    let (status, witnesses) = match semantics {
        Semantics::ForcedOnly if !blocking.is_empty() => (StabilityStatus::UnstableForAllResponsiveExtensions, blocking),
        Semantics::ForcedOnly if !undetermined.is_empty() => (StabilityStatus::ExtensionDependent, undetermined),
        Semantics::ForcedOnly => (StabilityStatus::StableForAllResponsiveExtensions, Vec::new()),
        _ if !blocking.is_empty() => (StabilityStatus::UnstableUnderCanonical, blocking),
        _ => (StabilityStatus::StableUnderCanonical, Vec::new()),
    };
    Ok(StabilityVerdict { status, witnesses })
}

/// Stable in the sense used by enumeration: under [`Semantics::ForcedOnly`]
/// no coalition may block in any responsive extension.
pub fn is_stable_fast(inst: &MarketInstance, mu: &Matching, semantics: Semantics) -> Result<bool, StabilityError> {
    let mut stable = true;
    visit_coalitions(inst, mu, semantics, &mut |_, i| {
        if i == Interest::No {
            ControlFlow::Continue(())
        } else {
            stable = false;
            ControlFlow::Break(())
        }
    })?;
    Ok(stable)
}

/// `|H̄|^|D|`, saturating.
pub fn candidate_count(inst: &MarketInstance) -> u128 {
    let base = (inst.n_hospitals() + 1) as u128;
    let mut total: u128 = 1;
    for _ in 0..inst.n_doctors() {
        total = total.saturating_mul(base);
    }
    total
}

fn guard(inst: &MarketInstance, bound: u64) -> Result<(), StabilityError> {
    let estimate = candidate_count(inst);
    if estimate > bound as u128 {
        Err(StabilityError::TooLarge { estimate, bound })
    } else {
        Ok(())
    }
}

/// Depth-first walk over capacity-feasible assignments extending `prefix`.
fn walk(inst: &MarketInstance, assignment: &mut Vec<Slot>, load: &mut [usize], f: &mut dyn FnMut(&[Slot])) {
    let d = assignment.len();
    if d == inst.n_doctors() {
        f(assignment);
        return;
    }
    for h in inst.hospital_ixs() {
        if load[h.0] < inst.capacity(h) {
            load[h.0] += 1;
            assignment.push(Some(h));
            walk(inst, assignment, load, f);
            assignment.pop();
            load[h.0] -= 1;
        }
    }
    assignment.push(None);
    walk(inst, assignment, load, f);
    assignment.pop();
}

/// Capacity-feasible prefixes of length `depth` for parallel fan-out.
fn prefixes(inst: &MarketInstance, depth: usize) -> Vec<Vec<Slot>> {
    let mut out = Vec::new();
    let sub = depth.min(inst.n_doctors());
    let mut assignment = Vec::new();
    let mut load = vec![0; inst.n_hospitals()];
    fn rec(inst: &MarketInstance, sub: usize, a: &mut Vec<Slot>, load: &mut [usize], out: &mut Vec<Vec<Slot>>) {
        if a.len() == sub {
            out.push(a.clone());
            return;
        }
        for s in inst.slots() {
            if let Some(h) = s {
                if load[h.0] >= inst.capacity(h) {
                    continue;
                }
                load[h.0] += 1;
            }
            a.push(s);
            rec(inst, sub, a, load, out);
            a.pop();
            if let Some(h) = s {
                load[h.0] -= 1;
            }
        }
    }
    rec(inst, sub, &mut assignment, &mut load, &mut out);
    out
}

fn walk_from(inst: &MarketInstance, prefix: &[Slot], f: &mut dyn FnMut(&[Slot])) {
    let mut load = vec![0; inst.n_hospitals()];
    for s in prefix.iter().flatten() {
        load[s.0] += 1;
    }
    let mut assignment = prefix.to_vec();
    walk(inst, &mut assignment, &mut load, f);
}

/// All capacity-feasible matchings, in canonical order.
pub fn enumerate_matchings(inst: &MarketInstance, bound: u64) -> Result<Vec<Matching>, StabilityError> {
    guard(inst, bound)?;
    let mut out = Vec::new();
    walk_from(inst, &[], &mut |a| out.push(Matching::from_assignment_unchecked(inst.n_hospitals(), a.to_vec())));
    out.sort_by(|x, y| x.assignment().cmp(y.assignment()));
    Ok(out)
}

/// Every stable matching, canonically sorted. Under
/// [`Semantics::ForcedOnly`] these are the matchings stable in every
/// responsive extension.
pub fn enumerate_stable(inst: &MarketInstance, semantics: Semantics, bound: u64) -> Result<Vec<Matching>, StabilityError> {
    guard(inst, bound)?;
    let nh = inst.n_hospitals();
    let chunks: Vec<Result<Vec<Matching>, StabilityError>> = prefixes(inst, 2)
        .into_par_iter()
        .map(|prefix| {
            let mut found = Vec::new();
            let mut err = None;
            walk_from(inst, &prefix, &mut |a| {
                if err.is_some() {
                    return;
                }
                let mu = Matching::from_assignment_unchecked(nh, a.to_vec());
                match is_stable_fast(inst, &mu, semantics) {
                    Ok(true) => found.push(mu),
                    Ok(false) => {}
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(found),
            }
        })
        .collect();
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    out.sort_by(|x, y| x.assignment().cmp(y.assignment()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::example1;
    use crate::market::{MarketBuilder, SetExtensionSpec};

    fn at(inst: &MarketInstance, pairs: &[(&str, &str)]) -> Matching {
        let mut a = vec![None; inst.n_doctors()];
        for (d, h) in pairs {
            a[inst.doctor_by_id(d).unwrap().0] = inst.hospital_by_id(h);
        }
        Matching::from_assignment(inst, a).unwrap()
    }

    #[test]
    fn example_one_single_displaces_couple_member() {
        let inst = example1();
        let mu = at(&inst, &[("f", "h1"), ("m", "h1"), ("s1", "h2"), ("s2", "h2")]);
        let s2 = inst.doctor_by_id("s2").unwrap();
        let out = hospital_interested(&inst, HospitalIx(0), &mu, &[s2], Semantics::ForcedOnly).unwrap();
        assert_eq!(out.interest, Interest::Yes);
        assert_eq!(out.released, vec![inst.doctor_by_id("m").unwrap()]);
    }

    #[test]
    fn vacancy_means_interest() {
        let inst = example1();
        let mu = at(&inst, &[("f", "h1")]);
        let m = inst.doctor_by_id("m").unwrap();
        let out = hospital_interested(&inst, HospitalIx(0), &mu, &[m], Semantics::ForcedOnly).unwrap();
        assert_eq!(out.interest, Interest::Yes);
        assert!(out.released.is_empty());
    }

    fn four_doctor_hospital() -> MarketInstance {
        MarketBuilder::new()
            .hospital("h", 2)
            .hospital("g", 2)
            .single("d1", &["h", "g"])
            .single("d4", &["h", "g"])
            .couple("d2", "d3", &["h", "g"], &["h", "g"], Some(&[("h", "h"), ("g", "g"), ("h", "g"), ("g", "h")]))
            .common_ranking(&["d1", "d2", "d3", "d4"], SetExtensionSpec::RankLex)
            .build()
            .unwrap()
    }

    #[test]
    fn pair_swap_is_extension_dependent() {
        let inst = four_doctor_hospital();
        let mu = at(&inst, &[("d1", "h"), ("d4", "h"), ("d2", "g"), ("d3", "g")]);
        let incoming = [inst.doctor_by_id("d2").unwrap(), inst.doctor_by_id("d3").unwrap()];
        let h = HospitalIx(0);
        let forced = hospital_interested(&inst, h, &mu, &incoming, Semantics::ForcedOnly).unwrap();
        assert_eq!(forced.interest, Interest::Undetermined);
        let lex = hospital_interested(&inst, h, &mu, &incoming, Semantics::RankVectorLex).unwrap();
        assert_eq!(lex.interest, Interest::No);
        let v = is_stable(&inst, &mu, Semantics::ForcedOnly).unwrap();
        assert_eq!(v.status, StabilityStatus::ExtensionDependent);
    }

    #[test]
    fn explicit_semantics_requires_lists() {
        let inst = example1();
        let mu = Matching::empty(&inst);
        let err = hospital_interested(&inst, HospitalIx(0), &mu, &[DoctorIx(0)], Semantics::Explicit).unwrap_err();
        assert!(matches!(err, StabilityError::NoExplicitOrder(_)));
    }

    #[test]
    fn example_one_couple_apart_is_blocked_together() {
        let inst = example1();
        let mu = at(&inst, &[("f", "h2"), ("m", "h1"), ("s1", "h2"), ("s2", "h1")]);
        let ws = find_blocking_pairs(&inst, &mu, Semantics::ForcedOnly).unwrap();
        assert!(ws.iter().any(|w| w.kind
            == BlockKind::Couple {
                couple: 0,
                target: (Some(HospitalIx(0)), Some(HospitalIx(0))),
                case: CoupleCase::SameHospital
            }));
    }

    #[test]
    fn example_one_has_no_stable_matching() {
        let inst = example1();
        for sem in [Semantics::ForcedOnly, Semantics::RankVectorLex] {
            assert!(enumerate_stable(&inst, sem, DEFAULT_MAX_CANDIDATES).unwrap().is_empty());
        }
    }

    #[test]
    fn guard_reports_estimate() {
        let inst = example1();
        let err = enumerate_matchings(&inst, 10).unwrap_err();
        assert_eq!(err, StabilityError::TooLarge { estimate: 81, bound: 10 });
    }

    #[test]
    fn enumeration_respects_capacity() {
        let inst = example1();
        let all = enumerate_matchings(&inst, DEFAULT_MAX_CANDIDATES).unwrap();
        // 3^4 assignments minus those putting three or more doctors at one hospital
        let over = 2 * (4 * 2 + 1);
        assert_eq!(all.len(), 81 - over);
    }
}
