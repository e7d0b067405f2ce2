//! Constructive algorithms, each guarded by the axioms under which its
//! output is stable.

use serde::Serialize;
use thiserror::Error;

use crate::axioms::{
    check_cpc, check_cpi, check_rf, check_rvt_all, check_scpc, check_scpi, check_srf, Axiom,
    AxiomError, AxiomVerdict,
};
use crate::engine::{run_dpda, run_sda, EngineError, EngineTrace, ProposalStream, TraceEvent};
use crate::market::{DoctorIx, HospitalIx, MarketInstance, Matching, Member, Ranking, Role, Slot};
use crate::stability::{is_stable, Semantics, StabilityError, StabilityVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Dpda,
    Sda,
    Alg1,
    Alg2,
    Alg3,
    Alg4,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] =
        [Algorithm::Dpda, Algorithm::Sda, Algorithm::Alg1, Algorithm::Alg2, Algorithm::Alg3, Algorithm::Alg4];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dpda => "dpda",
            Algorithm::Sda => "sda",
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
            Algorithm::Alg3 => "alg3",
            Algorithm::Alg4 => "alg4",
        }
    }

    pub fn from_name(s: &str) -> Option<Algorithm> {
        Self::ALL.into_iter().find(|a| a.name() == s)
    }
}

/// Post-hoc stability of a solver's output under both built-in semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityNote {
    pub forced: StabilityVerdict,
    pub rank_lex: StabilityVerdict,
}

impl StabilityNote {
    pub fn compute(inst: &MarketInstance, mu: &Matching) -> Result<StabilityNote, StabilityError> {
        Ok(StabilityNote {
            forced: is_stable(inst, mu, Semantics::ForcedOnly)?,
            rank_lex: is_stable(inst, mu, Semantics::RankVectorLex)?,
        })
    }

    /// No coalition blocks in any responsive extension.
    pub fn is_stable(&self) -> bool {
        self.forced.status.is_stable() && self.rank_lex.status.is_stable()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverReport {
    pub algorithm: Algorithm,
    pub matching: Matching,
    pub preconditions: Vec<AxiomVerdict>,
    pub trace: EngineTrace,
    pub stability: StabilityNote,
    /// `alg2` only: whether the last couple was placed by the rule
    /// for a single doctor ranked between its members.
    pub terminal_rule: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("precondition {} does not hold", .failed.name())]
    Refused { failed: Axiom, preconditions: Vec<AxiomVerdict> },
    #[error("{source}")]
    Engine { source: EngineError, preconditions: Vec<AxiomVerdict> },
    #[error("stability check failed: {0}")]
    Stability(#[from] StabilityError),
}

impl SolveError {
    pub fn preconditions(&self) -> &[AxiomVerdict] {
        match self {
            SolveError::Refused { preconditions, .. } | SolveError::Engine { preconditions, .. } => preconditions,
            SolveError::Stability(_) => &[],
        }
    }
}

/// Collects verdicts in order and stops at the first failure.
struct Gate {
    verdicts: Vec<AxiomVerdict>,
}

impl Gate {
    fn new() -> Self {
        Gate { verdicts: Vec::new() }
    }

    fn require(&mut self, v: AxiomVerdict) -> Result<(), SolveError> {
        let failed = (!v.holds).then_some(v.axiom);
        self.verdicts.push(v);
        match failed {
            Some(failed) => Err(SolveError::Refused { failed, preconditions: self.verdicts.clone() }),
            None => Ok(()),
        }
    }

    fn require_defined(&mut self, v: Result<AxiomVerdict, AxiomError>, axiom: Axiom) -> Result<(), SolveError> {
        match v {
            Ok(v) => self.require(v),
            Err(_) => Err(SolveError::Refused { failed: axiom, preconditions: self.verdicts.clone() }),
        }
    }

    fn engine(&self, source: EngineError) -> SolveError {
        SolveError::Engine { source, preconditions: self.verdicts.clone() }
    }
}

fn finish(
    inst: &MarketInstance,
    algorithm: Algorithm,
    gate: Gate,
    matching: Matching,
    trace: EngineTrace,
    terminal_rule: bool,
) -> Result<SolverReport, SolveError> {
    let stability = StabilityNote::compute(inst, &matching)?;
    Ok(SolverReport { algorithm, matching, preconditions: gate.verdicts, trace, stability, terminal_rule })
}

/// Streams for every doctor in `order`: singles and f members follow their
/// own lists, m members follow the couple's order given f's seat.
fn couple_streams(inst: &MarketInstance, order: &[DoctorIx]) -> Vec<ProposalStream> {
    order
        .iter()
        .map(|&d| match inst.role(d) {
            Role::Partner { member: Member::M, .. } => ProposalStream::conditional(inst, d).expect("couple member"),
            _ => ProposalStream::individual(inst, d),
        })
        .collect()
}

/// Couples relabeled so the first hospital ranks f above m. Hospitals
/// ranking every couple alike then makes f the better-ranked member
/// everywhere.
fn normalize_by_first_hospital(inst: &MarketInstance) -> MarketInstance {
    match inst.hospital_ixs().next() {
        Some(h) => {
            let ranking = inst.hospital_pref(h).individual.clone();
            let swap: Vec<bool> = inst.couples().iter().map(|c| ranking.prefers(&c.m, &c.f)).collect();
            let order: Vec<usize> = (0..inst.couples().len()).collect();
            inst.relabel_couples(&swap, &order)
        }
        None => inst.clone(),
    }
}

/// Plain deferred acceptance: singles and f members propose along their
/// own lists, m members along the couple's order given f's current seat.
pub fn solve_dpda(inst: &MarketInstance) -> Result<SolverReport, SolveError> {
    let gate = Gate::new();
    let order: Vec<DoctorIx> = inst.doctor_ixs().collect();
    let (mu, trace) =
        run_dpda(inst, &couple_streams(inst, &order), &Matching::empty(inst)).map_err(|e| gate.engine(e))?;
    finish(inst, Algorithm::Dpda, gate, mu, trace, false)
}

/// Serial dictatorship in the first hospital's ranking.
pub fn solve_sda(inst: &MarketInstance) -> Result<SolverReport, SolveError> {
    let gate = Gate::new();
    let order: Vec<DoctorIx> = match inst.hospital_ixs().next() {
        Some(h) => inst.hospital_pref(h).individual.iter().copied().collect(),
        None => inst.doctor_ixs().collect(),
    };
    let (mu, trace) =
        run_sda(inst, &couple_streams(inst, &order), &Matching::empty(inst)).map_err(|e| gate.engine(e))?;
    finish(inst, Algorithm::Sda, gate, mu, trace, false)
}

/// Serial dictatorship in the common ranking; each m picks along the
/// couple's order given where f already sits.
pub fn solve_alg1(inst: &MarketInstance) -> Result<SolverReport, SolveError> {
    let mut gate = Gate::new();
    let cpi = check_cpi(inst);
    gate.require(cpi.verdict)?;
    let norm = cpi.normalized.expect("common ranking");
    gate.require(check_rvt_all(&norm.instance))?;
    gate.require(check_rf(&norm.instance))?;
    let order: Vec<DoctorIx> = norm.ranking.iter().copied().collect();
    let (mu, trace) = run_sda(&norm.instance, &couple_streams(&norm.instance, &order), &Matching::empty(inst))
        .map_err(|e| gate.engine(e))?;
    finish(inst, Algorithm::Alg1, gate, mu, trace, false)
}

/// Serial placement in the common ranking for arbitrary couple orders.
///
/// Couples whose m has fewer doctors above it than any capacity let f pick
/// along the first coordinates of the couple's order and m along the
/// conditional order at its own turn. Every other couple takes, at f's
/// turn, the first pair of its order with room for both. When a single
/// doctor sits between the members of the last such couple, the couple
/// and that single share the remaining seats by the terminal rule.
pub fn solve_alg2(inst: &MarketInstance) -> Result<SolverReport, SolveError> {
    let mut gate = Gate::new();
    let cpi = check_cpi(inst);
    gate.require(cpi.verdict)?;
    gate.require_defined(check_scpi(inst), Axiom::Scpi)?;
    let norm = cpi.normalized.expect("common ranking");
    let (mu, trace, terminal) = alg2_run(&norm.instance, &norm.ranking);
    finish(inst, Algorithm::Alg2, gate, mu, trace, terminal)
}

struct Seats<'a> {
    inst: &'a MarketInstance,
    seat: Vec<Slot>,
    vacancies: Vec<usize>,
    trace: EngineTrace,
}

impl<'a> Seats<'a> {
    fn new(inst: &'a MarketInstance) -> Self {
        Seats {
            inst,
            seat: vec![None; inst.n_doctors()],
            vacancies: inst.hospital_ixs().map(|h| inst.capacity(h)).collect(),
            trace: EngineTrace::default(),
        }
    }

    fn take(&mut self, d: DoctorIx, h: HospitalIx) {
        self.vacancies[h.0] -= 1;
        self.seat[d.0] = Some(h);
        self.trace.events.push(TraceEvent::TentativeAccept { hospital: h, doctor: d });
    }

    /// Takes the first hospital of `list` with a vacancy.
    fn pick(&mut self, d: DoctorIx, list: impl IntoIterator<Item = HospitalIx>) {
        for h in list {
            self.trace.events.push(TraceEvent::Propose { doctor: d, hospital: h });
            if self.vacancies[h.0] > 0 {
                self.take(d, h);
                return;
            }
            self.trace.events.push(TraceEvent::Reject { hospital: h, doctor: d });
        }
        self.trace.events.push(TraceEvent::Exhaust { doctor: d });
    }

    fn fits(&self, a: Slot, b: Slot) -> bool {
        match (a, b) {
            (Some(x), Some(y)) if x == y => self.vacancies[x.0] >= 2,
            _ => [a, b].into_iter().flatten().all(|h| self.vacancies[h.0] >= 1),
        }
    }

    fn place_pair(&mut self, f: DoctorIx, m: DoctorIx, (a, b): (Slot, Slot)) {
        for (d, s) in [(f, a), (m, b)] {
            match s {
                Some(h) => self.take(d, h),
                None => self.trace.events.push(TraceEvent::Exhaust { doctor: d }),
            }
        }
    }

    /// Proposes down the couple's order until both members fit.
    fn joint(&mut self, ci: usize) {
        let c = self.inst.couples()[ci];
        let order = self.inst.couple_pref(ci).order().to_vec();
        for (a, b) in order {
            for (d, s) in [(c.f, a), (c.m, b)] {
                if let Some(h) = s {
                    self.trace.events.push(TraceEvent::Propose { doctor: d, hospital: h });
                }
            }
            if self.fits(a, b) {
                self.place_pair(c.f, c.m, (a, b));
                return;
            }
            for (d, s) in [(c.f, a), (c.m, b)] {
                if let Some(h) = s {
                    self.trace.events.push(TraceEvent::Reject { hospital: h, doctor: d });
                }
            }
        }
    }
}

fn alg2_run(inst: &MarketInstance, ranking: &Ranking<DoctorIx>) -> (Matching, EngineTrace, bool) {
    let order: Vec<DoctorIx> = ranking.iter().copied().collect();
    let pos = |d: DoctorIx| ranking.position(&d).expect("ranked");
    let min_cap = inst.hospital_ixs().map(|h| inst.capacity(h)).min().unwrap_or(0);
    // shielded couples: fewer doctors above m than any capacity
    let shielded: Vec<bool> = inst.couples().iter().map(|c| pos(c.m) < min_cap).collect();
    let last_joint = (0..inst.couples().len()).filter(|&ci| !shielded[ci]).max_by_key(|&ci| pos(inst.couples()[ci].m));
    let terminal = last_joint.and_then(|ci| {
        let c = inst.couples()[ci];
        order[pos(c.f) + 1..pos(c.m)].iter().copied().find(|&d| inst.is_single(d)).map(|s| (ci, s))
    });

    let mut seats = Seats::new(inst);
    let mut done = vec![false; inst.n_doctors()];
    for &d in &order {
        if done[d.0] {
            continue;
        }
        done[d.0] = true;
        match inst.role(d) {
            Role::Single => seats.pick(d, inst.doctor_pref(d).hospitals()),
            Role::Partner { couple, member: Member::F } if shielded[couple] => {
                seats.pick(d, inst.couple_pref(couple).first_coordinate_order());
            }
            Role::Partner { couple, member: Member::M } if shielded[couple] => {
                let at = seats.seat[inst.couples()[couple].f.0];
                let list: Vec<HospitalIx> =
                    inst.couple_pref(couple).conditional(Member::F, at).into_iter().flatten().collect();
                seats.pick(d, list);
            }
            Role::Partner { couple, member: Member::F } => match terminal {
                Some((ci, s)) if ci == couple => {
                    terminal_rule(&mut seats, couple, s);
                    let c = inst.couples()[couple];
                    done[c.m.0] = true;
                    done[s.0] = true;
                }
                _ => {
                    seats.joint(couple);
                    done[inst.couples()[couple].m.0] = true;
                }
            },
            Role::Partner { member: Member::M, .. } => {}
        }
    }
    let mu = Matching::from_assignment_unchecked(inst.n_hospitals(), seats.seat);
    (mu, seats.trace, terminal.is_some())
}

/// The last joint couple and the single `s` between its members split the
/// remaining seats: m goes to the worst open hospital for `s`, f to the
/// couple's best open partner hospital for it, and `s` to what is left.
fn terminal_rule(seats: &mut Seats, ci: usize, s: DoctorIx) {
    let inst = seats.inst;
    let c = inst.couples()[ci];
    let open: Vec<HospitalIx> = inst.hospital_ixs().filter(|h| seats.vacancies[h.0] > 0).collect();
    let ps = inst.doctor_pref(s);
    let worst = open.iter().copied().max_by_key(|&h| ps.rank(Some(h)).unwrap_or(usize::MAX));
    match worst {
        Some(hm) => {
            let cp = inst.couple_pref(ci);
            let best_f = open
                .iter()
                .copied()
                .filter(|&hf| seats.fits(Some(hf), Some(hm)))
                .min_by_key(|&hf| cp.rank((Some(hf), Some(hm))).unwrap_or(usize::MAX));
            match best_f {
                Some(hf) => seats.place_pair(c.f, c.m, (Some(hf), Some(hm))),
                None => seats.joint(ci),
            }
        }
        None => seats.joint(ci),
    }
    seats.pick(s, ps.hospitals());
}

/// One deferred-acceptance run: f members follow their own lists and m
/// members the couple's order given f's current seat.
pub fn solve_alg3(inst: &MarketInstance) -> Result<SolverReport, SolveError> {
    let mut gate = Gate::new();
    let norm = normalize_by_first_hospital(inst);
    gate.require(check_cpc(&norm))?;
    gate.require(check_rvt_all(&norm))?;
    gate.require(check_rf(&norm))?;
    gate.require_defined(check_srf(&norm), Axiom::Srf)?;
    let order: Vec<DoctorIx> = norm.doctor_ixs().collect();
    let (mu, trace) =
        run_dpda(&norm, &couple_streams(&norm, &order), &Matching::empty(inst)).map_err(|e| gate.engine(e))?;
    finish(inst, Algorithm::Alg3, gate, mu, trace, false)
}

/// Doctors grouped by the couples' f members: block `i` holds those ranked
/// below `f_{i-1}` and weakly above `f_i` (the same at every hospital), the
/// last block the rest. Blocks run deferred acceptance in turn on top of
/// the seats fixed by earlier blocks.
pub fn solve_alg4(inst: &MarketInstance) -> Result<SolverReport, SolveError> {
    let mut gate = Gate::new();
    let norm = normalize_by_first_hospital(inst);
    gate.require(check_cpc(&norm))?;
    gate.require_defined(check_scpc(&norm), Axiom::Scpc)?;
    gate.require(check_rvt_all(&norm))?;
    gate.require(check_rf(&norm))?;
    let mut frozen = Matching::empty(inst);
    let mut trace = EngineTrace::default();
    for block in alg4_blocks(&norm) {
        let (mu, t) = run_dpda(&norm, &couple_streams(&norm, &block), &frozen).map_err(|e| gate.engine(e))?;
        frozen = mu;
        trace.events.extend(t.events);
    }
    finish(inst, Algorithm::Alg4, gate, frozen, trace, false)
}

fn alg4_blocks(inst: &MarketInstance) -> Vec<Vec<DoctorIx>> {
    let Some(h) = inst.hospital_ixs().next() else {
        return vec![inst.doctor_ixs().collect()];
    };
    let ranking = &inst.hospital_pref(h).individual;
    let pos = |d: DoctorIx| ranking.position(&d).unwrap_or(usize::MAX);
    let mut cuts: Vec<usize> = inst.couples().iter().map(|c| pos(c.f)).collect();
    cuts.sort_unstable();
    let order: Vec<DoctorIx> = ranking.iter().copied().collect();
    let mut blocks = Vec::new();
    let mut start = 0;
    for cut in cuts {
        blocks.push(order[start..=cut].to_vec());
        start = cut + 1;
    }
    blocks.push(order[start..].to_vec());
    blocks.retain(|b| !b.is_empty());
    blocks
}

pub fn solve(inst: &MarketInstance, algorithm: Algorithm) -> Result<SolverReport, SolveError> {
    match algorithm {
        Algorithm::Dpda => solve_dpda(inst),
        Algorithm::Sda => solve_sda(inst),
        Algorithm::Alg1 => solve_alg1(inst),
        Algorithm::Alg2 => solve_alg2(inst),
        Algorithm::Alg3 => solve_alg3(inst),
        Algorithm::Alg4 => solve_alg4(inst),
    }
}
