//! Deferred acceptance and serial dictatorship with pluggable proposal streams.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::market::{DoctorIx, HospitalIx, MarketInstance, Matching, Member, Role, Slot};

/// Where a doctor's proposal list comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamSource {
    /// A fixed list, best first.
    Static(Vec<HospitalIx>),
    /// The couple's conditional order for this doctor given where the partner
    /// (`fixed` member of `couple`) currently sits. Re-materialized whenever
    /// the partner's seat changes.
    ConditionalOnPartner { couple: usize, fixed: Member },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProposalStream {
    pub owner: DoctorIx,
    pub source: StreamSource,
}

impl ProposalStream {
    pub fn fixed(owner: DoctorIx, list: Vec<HospitalIx>) -> Self {
        ProposalStream { owner, source: StreamSource::Static(list) }
    }

    /// The doctor's own preference over hospitals.
    pub fn individual(inst: &MarketInstance, owner: DoctorIx) -> Self {
        Self::fixed(owner, inst.doctor_pref(owner).hospitals())
    }

    /// The couple member `owner` follows the couple's order conditional on its partner.
    pub fn conditional(inst: &MarketInstance, owner: DoctorIx) -> Option<Self> {
        match inst.role(owner) {
            Role::Single => None,
            Role::Partner { couple, member } => Some(ProposalStream {
                owner,
                source: StreamSource::ConditionalOnPartner { couple, fixed: member.other() },
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEvent {
    Propose { doctor: DoctorIx, hospital: HospitalIx },
    TentativeAccept { hospital: HospitalIx, doctor: DoctorIx },
    Reject { hospital: HospitalIx, doctor: DoctorIx },
    /// A dependent doctor's seat is withdrawn because its partner lost the
    /// seat the dependent's list was conditioned on.
    Retract { hospital: HospitalIx, doctor: DoctorIx },
    /// A conditional stream is re-materialized against the partner's new seat.
    StreamRebase { doctor: DoctorIx, anchor: Slot },
    /// The doctor has no hospital left to propose to and stays unmatched.
    Exhaust { doctor: DoctorIx },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineTrace {
    pub events: Vec<TraceEvent>,
}

impl EngineTrace {
    /// One tab-separated event per line: kind, then ids.
    pub fn to_lines(&self, inst: &MarketInstance) -> String {
        let mut out = String::new();
        for e in &self.events {
            let _ = match *e {
                TraceEvent::Propose { doctor, hospital } => {
                    writeln!(out, "propose\t{}\t{}", inst.doctor_id(doctor), inst.hospital_id(hospital))
                }
                TraceEvent::TentativeAccept { hospital, doctor } => {
                    writeln!(out, "accept\t{}\t{}", inst.hospital_id(hospital), inst.doctor_id(doctor))
                }
                TraceEvent::Reject { hospital, doctor } => {
                    writeln!(out, "reject\t{}\t{}", inst.hospital_id(hospital), inst.doctor_id(doctor))
                }
                TraceEvent::Retract { hospital, doctor } => {
                    writeln!(out, "retract\t{}\t{}", inst.hospital_id(hospital), inst.doctor_id(doctor))
                }
                TraceEvent::StreamRebase { doctor, anchor } => {
                    writeln!(out, "rebase\t{}\t{}", inst.doctor_id(doctor), inst.slot_id(anchor))
                }
                TraceEvent::Exhaust { doctor } => writeln!(out, "exhaust\t{}", inst.doctor_id(doctor)),
            };
        }
        out
    }

    /// Rebuilds the final matching from `frozen` and the seat events.
    pub fn replay(&self, inst: &MarketInstance, frozen: &Matching) -> Matching {
        let mut seats: Vec<Slot> = frozen.assignment().to_vec();
        for e in &self.events {
            match *e {
                TraceEvent::TentativeAccept { hospital, doctor } => seats[doctor.0] = Some(hospital),
                TraceEvent::Reject { hospital, doctor } | TraceEvent::Retract { hospital, doctor }
                    if seats[doctor.0] == Some(hospital) =>
                {
                    seats[doctor.0] = None;
                }
                _ => {}
            }
        }
        Matching::from_assignment_unchecked(inst.n_hospitals(), seats)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("doctor {0} has more than one stream")]
    DuplicateStream(String),
    #[error("doctor {0} is both frozen and a participant")]
    FrozenParticipant(String),
    #[error("doctor {0} is not a couple member but has a conditional stream")]
    NotACouple(String),
    #[error("stream re-materialized {rebases} times, exceeding the guard of {limit}")]
    RebaseGuard { rebases: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Anchor {
    /// The partner is a participant without a seat yet.
    Waiting,
    At(Slot),
}

struct Engine<'a> {
    inst: &'a MarketInstance,
    frozen: &'a Matching,
    /// per doctor: index into `streams`
    stream_of: Vec<Option<usize>>,
    streams: &'a [ProposalStream],
    lists: Vec<Vec<HospitalIx>>,
    cursor: Vec<usize>,
    anchor: Vec<Option<Anchor>>,
    seat: Vec<Slot>,
    done: Vec<bool>,
    tentative: Vec<Vec<DoctorIx>>,
    trace: EngineTrace,
}

impl<'a> Engine<'a> {
    fn new(inst: &'a MarketInstance, streams: &'a [ProposalStream], frozen: &'a Matching) -> Result<Self, EngineError> {
        let nd = inst.n_doctors();
        let mut stream_of = vec![None; nd];
        for (i, s) in streams.iter().enumerate() {
            let d = s.owner;
            if stream_of[d.0].is_some() {
                return Err(EngineError::DuplicateStream(inst.doctor_id(d).to_string()));
            }
            if frozen.of(d).is_some() {
                return Err(EngineError::FrozenParticipant(inst.doctor_id(d).to_string()));
            }
            if let StreamSource::ConditionalOnPartner { couple, .. } = s.source {
                if couple >= inst.couples().len() {
                    return Err(EngineError::NotACouple(inst.doctor_id(d).to_string()));
                }
            }
            stream_of[d.0] = Some(i);
        }
        Ok(Engine {
            inst,
            frozen,
            stream_of,
            streams,
            lists: vec![Vec::new(); nd],
            cursor: vec![0; nd],
            anchor: vec![None; nd],
            seat: vec![None; nd],
            done: vec![false; nd],
            tentative: vec![Vec::new(); inst.n_hospitals()],
            trace: EngineTrace::default(),
        })
    }

    fn partner_of_stream(&self, d: DoctorIx) -> Option<(usize, Member, DoctorIx)> {
        let i = self.stream_of[d.0]?;
        match self.streams[i].source {
            StreamSource::ConditionalOnPartner { couple, fixed } => {
                Some((couple, fixed, self.inst.couples()[couple].member(fixed)))
            }
            StreamSource::Static(_) => None,
        }
    }

    /// Current anchor of `d`'s conditional stream.
    fn current_anchor(&self, partner: DoctorIx) -> Anchor {
        if self.stream_of[partner.0].is_some() {
            if let Some(h) = self.seat[partner.0] {
                Anchor::At(Some(h))
            } else if self.done[partner.0] {
                Anchor::At(None)
            } else {
                Anchor::Waiting
            }
        } else {
            Anchor::At(self.frozen.of(partner))
        }
    }

    fn materialize(&mut self, d: DoctorIx, anchor: Anchor) {
        let i = self.stream_of[d.0].expect("participant");
        let list = match (&self.streams[i].source, anchor) {
            (StreamSource::Static(list), _) => dedup(list),
            (StreamSource::ConditionalOnPartner { .. }, Anchor::Waiting) => Vec::new(),
            (StreamSource::ConditionalOnPartner { couple, fixed }, Anchor::At(at)) => {
                self.inst.couple_pref(*couple).conditional(*fixed, at).into_iter().flatten().collect()
            }
        };
        self.lists[d.0] = list;
        self.cursor[d.0] = 0;
        self.anchor[d.0] = Some(anchor);
    }

    fn held(&self, h: HospitalIx) -> usize {
        self.frozen.members(h).len() + self.tentative[h.0].len()
    }

    fn unseat(&mut self, d: DoctorIx) -> Option<HospitalIx> {
        let h = self.seat[d.0].take()?;
        self.tentative[h.0].retain(|&x| x != d);
        Some(h)
    }

    fn dependents_of(&self, partner: DoctorIx) -> Vec<DoctorIx> {
        let mut out = Vec::new();
        if let Some(p) = self.inst.partner(partner) {
            if let Some((_, _, anchor_doc)) = self.partner_of_stream(p) {
                if anchor_doc == partner {
                    out.push(p);
                }
            }
        }
        out
    }
}

fn dedup(list: &[HospitalIx]) -> Vec<HospitalIx> {
    let mut seen = Vec::new();
    for &h in list {
        if !seen.contains(&h) {
            seen.push(h);
        }
    }
    seen
}

/// Doctor-proposing deferred acceptance on top of `frozen` seats.
///
/// Participants are the owners of `streams`, seeded into the proposal queue
/// in the given order. A hospital over capacity rejects its worst tentative
/// doctor by its individual ranking; frozen doctors are never rejected.
/// A doctor whose stream is conditional on a participating partner waits
/// until the partner holds a seat; when the partner loses the seat the
/// dependent's seat is retracted, and when the partner is seated again the
/// stream restarts from the top of the new conditional list.
pub fn run_dpda(
    inst: &MarketInstance,
    streams: &[ProposalStream],
    frozen: &Matching,
) -> Result<(Matching, EngineTrace), EngineError> {
    let mut e = Engine::new(inst, streams, frozen)?;
    let nd = inst.n_doctors();
    let limit = nd * (inst.n_hospitals() + 1) * (nd + 1);
    let mut rebases = 0usize;
    let mut queue: VecDeque<DoctorIx> = VecDeque::new();

    for s in streams {
        let d = s.owner;
        let anchor = match e.partner_of_stream(d) {
            Some((_, _, partner)) => e.current_anchor(partner),
            None => Anchor::At(None),
        };
        e.materialize(d, anchor);
        if anchor != Anchor::Waiting {
            queue.push_back(d);
        }
    }

    while let Some(d) = queue.pop_front() {
        if e.seat[d.0].is_some() || e.done[d.0] || e.anchor[d.0] == Some(Anchor::Waiting) {
            continue;
        }
        let Some(&h) = e.lists[d.0].get(e.cursor[d.0]) else {
            e.done[d.0] = true;
            e.trace.events.push(TraceEvent::Exhaust { doctor: d });
            // a dependent anchored on d learns that d stays unmatched
            for dep in e.dependents_of(d) {
                if e.anchor[dep.0] != Some(Anchor::At(None)) {
                    rebases += 1;
                    if rebases > limit {
                        return Err(EngineError::RebaseGuard { rebases, limit });
                    }
                    if let Some(old) = e.unseat(dep) {
                        e.trace.events.push(TraceEvent::Retract { hospital: old, doctor: dep });
                    }
                    e.done[dep.0] = false;
                    e.materialize(dep, Anchor::At(None));
                    e.trace.events.push(TraceEvent::StreamRebase { doctor: dep, anchor: None });
                    queue.push_back(dep);
                }
            }
            continue;
        };
        e.cursor[d.0] += 1;
        e.trace.events.push(TraceEvent::Propose { doctor: d, hospital: h });
        let pref = inst.hospital_pref(h);
        let mut rejected: Option<DoctorIx> = None;
        if e.held(h) < inst.capacity(h) {
            e.tentative[h.0].push(d);
            e.seat[d.0] = Some(h);
            e.trace.events.push(TraceEvent::TentativeAccept { hospital: h, doctor: d });
        } else {
            let worst = e.tentative[h.0].iter().copied().max_by_key(|&x| pref.rank(x));
            match worst {
                Some(w) if pref.prefers(d, w) => {
                    e.unseat(w);
                    e.tentative[h.0].push(d);
                    e.seat[d.0] = Some(h);
                    e.trace.events.push(TraceEvent::Reject { hospital: h, doctor: w });
                    e.trace.events.push(TraceEvent::TentativeAccept { hospital: h, doctor: d });
                    rejected = Some(w);
                }
                _ => {
                    e.trace.events.push(TraceEvent::Reject { hospital: h, doctor: d });
                    rejected = Some(d);
                }
            }
        }
        if e.seat[d.0] == Some(h) {
            // d is seated: dependents re-anchor on h
            for dep in e.dependents_of(d) {
                if e.anchor[dep.0] != Some(Anchor::At(Some(h))) {
                    rebases += 1;
                    if rebases > limit {
                        return Err(EngineError::RebaseGuard { rebases, limit });
                    }
                    if let Some(old) = e.unseat(dep) {
                        e.trace.events.push(TraceEvent::Retract { hospital: old, doctor: dep });
                    }
                    e.done[dep.0] = false;
                    e.materialize(dep, Anchor::At(Some(h)));
                    e.trace.events.push(TraceEvent::StreamRebase { doctor: dep, anchor: Some(h) });
                    queue.push_back(dep);
                }
            }
        }
        if let Some(r) = rejected {
            queue.push_back(r);
            if r != d {
                // r lost its seat: its dependents wait for r's next seat
                for dep in e.dependents_of(r) {
                    if let Some(old) = e.unseat(dep) {
                        e.trace.events.push(TraceEvent::Retract { hospital: old, doctor: dep });
                    }
                    e.done[dep.0] = false;
                    e.anchor[dep.0] = Some(Anchor::Waiting);
                }
            }
        }
    }

    let mut seats = frozen.assignment().to_vec();
    for s in streams {
        seats[s.owner.0] = e.seat[s.owner.0];
    }
    Ok((Matching::from_assignment_unchecked(inst.n_hospitals(), seats), e.trace))
}

/// Serial dictatorship: doctors in `streams` order each take the first
/// hospital on their list with a free seat, on top of `frozen`. A
/// conditional stream is read against the partner's seat at the time of the
/// pick (∅ when the partner has not picked yet).
pub fn run_sda(
    inst: &MarketInstance,
    streams: &[ProposalStream],
    frozen: &Matching,
) -> Result<(Matching, EngineTrace), EngineError> {
    let mut e = Engine::new(inst, streams, frozen)?;
    let mut seats = frozen.assignment().to_vec();
    for s in streams {
        let d = s.owner;
        let list: Vec<HospitalIx> = match &s.source {
            StreamSource::Static(list) => dedup(list),
            StreamSource::ConditionalOnPartner { couple, fixed } => {
                let partner = inst.couples()[*couple].member(*fixed);
                let at = seats[partner.0];
                e.trace.events.push(TraceEvent::StreamRebase { doctor: d, anchor: at });
                inst.couple_pref(*couple).conditional(*fixed, at).into_iter().flatten().collect()
            }
        };
        let mut placed = false;
        for h in list {
            e.trace.events.push(TraceEvent::Propose { doctor: d, hospital: h });
            if e.held(h) < inst.capacity(h) {
                e.tentative[h.0].push(d);
                seats[d.0] = Some(h);
                e.trace.events.push(TraceEvent::TentativeAccept { hospital: h, doctor: d });
                placed = true;
                break;
            }
            e.trace.events.push(TraceEvent::Reject { hospital: h, doctor: d });
        }
        if !placed {
            e.trace.events.push(TraceEvent::Exhaust { doctor: d });
        }
    }
    Ok((Matching::from_assignment_unchecked(inst.n_hospitals(), seats), e.trace))
}

/// Static individual-preference streams for `doctors`, in the given order.
pub fn individual_streams(inst: &MarketInstance, doctors: &[DoctorIx]) -> Vec<ProposalStream> {
    doctors.iter().map(|&d| ProposalStream::individual(inst, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example1, example2};
    use crate::market::{MarketBuilder, SetExtensionSpec};

    fn id(inst: &MarketInstance, s: &str) -> DoctorIx {
        inst.doctor_by_id(s).unwrap()
    }

    #[test]
    fn singles_alone_get_first_choices() {
        let inst = example1();
        let ds = [id(&inst, "s1"), id(&inst, "s2")];
        let (mu, trace) = run_dpda(&inst, &individual_streams(&inst, &ds), &Matching::empty(&inst)).unwrap();
        assert_eq!(mu.of(ds[0]), inst.hospital_by_id("h2"));
        assert_eq!(mu.of(ds[1]), inst.hospital_by_id("h1"));
        assert_eq!(trace.replay(&inst, &Matching::empty(&inst)), mu);
    }

    #[test]
    fn capacity_rule_keeps_best_two() {
        let inst = MarketBuilder::new()
            .hospital("h", 2)
            .single("a", &["h"])
            .single("b", &["h"])
            .single("c", &["h"])
            .common_ranking(&["b", "c", "a"], SetExtensionSpec::RankLex)
            .build()
            .unwrap();
        let ds: Vec<DoctorIx> = inst.doctor_ixs().collect();
        let (mu, trace) = run_dpda(&inst, &individual_streams(&inst, &ds), &Matching::empty(&inst)).unwrap();
        assert_eq!(mu.of(id(&inst, "a")), None);
        assert!(mu.of(id(&inst, "b")).is_some() && mu.of(id(&inst, "c")).is_some());
        assert!(trace.events.contains(&TraceEvent::Exhaust { doctor: id(&inst, "a") }));
    }

    #[test]
    fn sda_example_one_order() {
        let inst = example1();
        let order: Vec<DoctorIx> = ["f", "s1", "s2", "m"].iter().map(|s| id(&inst, s)).collect();
        let (mu, _) = run_sda(&inst, &individual_streams(&inst, &order), &Matching::empty(&inst)).unwrap();
        let h = |s| inst.hospital_by_id(s);
        assert_eq!(mu.of(order[0]), h("h2"));
        assert_eq!(mu.of(order[1]), h("h2"));
        assert_eq!(mu.of(order[2]), h("h1"));
        assert_eq!(mu.of(order[3]), h("h1"));
    }

    #[test]
    fn frozen_doctors_are_never_rejected() {
        let inst = example1();
        let f = id(&inst, "f");
        let s2 = id(&inst, "s2");
        let mut a = vec![None; 4];
        a[s2.0] = inst.hospital_by_id("h2");
        a[id(&inst, "m").0] = inst.hospital_by_id("h2");
        let frozen = Matching::from_assignment(&inst, a).unwrap();
        let (mu, _) = run_dpda(&inst, &individual_streams(&inst, &[f]), &frozen).unwrap();
        assert_eq!(mu.of(f), inst.hospital_by_id("h1"));
        assert_eq!(mu.of(s2), inst.hospital_by_id("h2"));
    }

    #[test]
    fn frozen_participant_rejected() {
        let inst = example1();
        let f = id(&inst, "f");
        let mut a = vec![None; 4];
        a[f.0] = inst.hospital_by_id("h1");
        let frozen = Matching::from_assignment(&inst, a).unwrap();
        assert!(matches!(
            run_dpda(&inst, &individual_streams(&inst, &[f]), &frozen),
            Err(EngineError::FrozenParticipant(_))
        ));
    }

    #[test]
    fn conditional_stream_follows_partner() {
        let inst = example1();
        let (f, m) = (id(&inst, "f"), id(&inst, "m"));
        let streams = vec![ProposalStream::individual(&inst, f), ProposalStream::conditional(&inst, m).unwrap()];
        let (mu, trace) = run_dpda(&inst, &streams, &Matching::empty(&inst)).unwrap();
        // f takes h2; given f at h2 the couple ranks (h2,h1) above (h2,h2)
        assert_eq!(mu.of(f), inst.hospital_by_id("h2"));
        assert_eq!(mu.of(m), inst.hospital_by_id("h1"));
        assert!(trace.events.contains(&TraceEvent::StreamRebase { doctor: m, anchor: inst.hospital_by_id("h2") }));
        assert_eq!(trace.replay(&inst, &Matching::empty(&inst)), mu);
    }

    #[test]
    fn trace_lines_are_tab_separated() {
        let inst = example2();
        let ds: Vec<DoctorIx> = inst.doctor_ixs().collect();
        let (_, trace) = run_dpda(&inst, &individual_streams(&inst, &ds), &Matching::empty(&inst)).unwrap();
        let text = trace.to_lines(&inst);
        assert!(text.lines().all(|l| l.split('\t').count() >= 2));
        assert!(text.starts_with("propose\t"));
    }
}
