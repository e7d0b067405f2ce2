//! JSON renderings of verdicts, witnesses and solver reports, using ids.

use serde_json::{json, Value};

use crate::axioms::{AxiomVerdict, ScpiClause, Witness};
use crate::market::{DoctorIx, HospitalIx, MarketInstance, Member, Slot, SlotPair, ValidationReport};
use crate::solvers::{SolveError, SolverReport};
use crate::stability::{BlockKind, BlockingWitness, CoupleCase, EvidenceStatus, StabilityVerdict};

fn doctor(inst: &MarketInstance, d: DoctorIx) -> Value {
    if d.0 < inst.n_doctors() {
        json!(inst.doctor_id(d))
    } else {
        Value::Null
    }
}

fn doctors(inst: &MarketInstance, ds: &[DoctorIx]) -> Value {
    Value::Array(ds.iter().map(|&d| doctor(inst, d)).collect())
}

fn hospital(inst: &MarketInstance, h: HospitalIx) -> Value {
    json!(inst.hospital_id(h))
}

fn slot(inst: &MarketInstance, s: Slot) -> Value {
    json!(inst.slot_id(s))
}

fn pair(inst: &MarketInstance, (a, b): SlotPair) -> Value {
    json!([inst.slot_id(a), inst.slot_id(b)])
}

fn couple(inst: &MarketInstance, ci: usize) -> Value {
    match inst.couples().get(ci) {
        Some(c) => json!([inst.doctor_id(c.f), inst.doctor_id(c.m)]),
        None => Value::Null,
    }
}

fn member(m: Member) -> &'static str {
    match m {
        Member::F => "f",
        Member::M => "m",
    }
}

pub fn witness_json(inst: &MarketInstance, w: &Witness) -> Value {
    match w {
        Witness::SetOrder { clause, hospital: h, kept, first, second } => json!({
            "kind": "set-order",
            "clause": clause,
            "hospital": h.map(|h| hospital(inst, h)),
            "kept": doctors(inst, kept),
            "first": doctors(inst, first),
            "second": doctors(inst, second),
        }),
        Witness::RankingMismatch { first, second, position, first_doctor, second_doctor } => json!({
            "kind": "ranking-mismatch",
            "hospitals": [hospital(inst, *first), hospital(inst, *second)],
            "position": position,
            "doctors": [doctor(inst, *first_doctor), doctor(inst, *second_doctor)],
        }),
        Witness::PairOrder { couple: c, preferred, over, member: m } => json!({
            "kind": "pair-order",
            "couple": c.map(|c| couple(inst, c)),
            "preferred": pair(inst, *preferred),
            "over": pair(inst, *over),
            "member": member(*m),
        }),
        Witness::Togetherness { couple: c, dominating, dominated } => json!({
            "kind": "togetherness",
            "couple": c.map(|c| couple(inst, c)),
            "dominating": pair(inst, *dominating),
            "dominated": pair(inst, *dominated),
        }),
        Witness::LiftedPair { couple: c, together, other } => json!({
            "kind": "lifted-pair",
            "couple": couple(inst, *c),
            "together": hospital(inst, *together),
            "other": hospital(inst, *other),
        }),
        Witness::Scpi { couple: c, clause, between, above_m } => json!({
            "kind": "scpi",
            "couple": couple(inst, *c),
            "clause": match clause {
                ScpiClause::MemberNotLast => "member-not-last",
                ScpiClause::MemberLast => "member-last",
            },
            "between": between,
            "above_m": above_m,
        }),
        Witness::CoupleOrder { hospital: h, couple: c } => json!({
            "kind": "couple-order",
            "hospital": hospital(inst, *h),
            "couple": couple(inst, *c),
        }),
        Witness::SplitAboveSet { couple: c, doctor: d, above_at, below_at } => json!({
            "kind": "split-above-set",
            "couple": couple(inst, *c),
            "doctor": doctor(inst, *d),
            "above_at": hospital(inst, *above_at),
            "below_at": hospital(inst, *below_at),
        }),
    }
}

pub fn axiom_verdict_json(inst: &MarketInstance, v: &AxiomVerdict) -> Value {
    json!({
        "axiom": v.axiom.name(),
        "holds": v.holds,
        "witness": v.witness.as_ref().map(|w| witness_json(inst, w)),
    })
}

pub fn blocking_witness_json(inst: &MarketInstance, w: &BlockingWitness) -> Value {
    let evidence: Vec<Value> = w
        .evidence
        .iter()
        .map(|e| {
            json!({
                "hospital": hospital(inst, e.hospital),
                "incoming": doctors(inst, &e.incoming),
                "released": doctors(inst, &e.released),
                "status": match e.status {
                    EvidenceStatus::Forced => "forced",
                    EvidenceStatus::ByCanonical => "by-canonical",
                    EvidenceStatus::Undetermined => "undetermined",
                },
            })
        })
        .collect();
    match &w.kind {
        BlockKind::Single { hospital: h, doctor: d } => json!({
            "kind": "single",
            "hospital": hospital(inst, *h),
            "doctor": doctor(inst, *d),
            "evidence": evidence,
        }),
        BlockKind::Couple { couple: c, target, case } => json!({
            "kind": "couple",
            "couple": couple(inst, *c),
            "target": pair(inst, *target),
            "case": match case {
                CoupleCase::BothMove => "both-move",
                CoupleCase::OneAnchored => "one-anchored",
                CoupleCase::SameHospital => "same-hospital",
            },
            "evidence": evidence,
        }),
    }
}

pub fn stability_verdict_json(inst: &MarketInstance, v: &StabilityVerdict) -> Value {
    json!({
        "status": v.status,
        "witnesses": v.witnesses.iter().map(|w| blocking_witness_json(inst, w)).collect::<Vec<_>>(),
    })
}

pub fn solver_report_json(inst: &MarketInstance, r: &SolverReport, with_trace: bool) -> Value {
    let mut v = json!({
        "algorithm": r.algorithm,
        "matching": crate::market::matching_to_json(inst, &r.matching),
        "preconditions": r.preconditions.iter().map(|p| axiom_verdict_json(inst, p)).collect::<Vec<_>>(),
        "stability": {
            "forced": stability_verdict_json(inst, &r.stability.forced),
            "rank_lex": stability_verdict_json(inst, &r.stability.rank_lex),
        },
    });
    if r.terminal_rule {
        v["terminal_rule"] = json!(true);
    }
    if with_trace {
        v["trace"] = json!(r.trace.to_lines(inst).lines().collect::<Vec<_>>());
    }
    v
}

pub fn solve_error_json(inst: &MarketInstance, e: &SolveError) -> Value {
    json!({
        "error": e.to_string(),
        "preconditions": e.preconditions().iter().map(|p| axiom_verdict_json(inst, p)).collect::<Vec<_>>(),
    })
}

pub fn validation_json(r: &ValidationReport) -> Value {
    json!({
        "valid": r.is_valid(),
        "issues": r.issues.iter().map(|i| json!({
            "code": i.code,
            "severity": format!("{:?}", i.severity).to_lowercase(),
            "message": i.message,
        })).collect::<Vec<_>>(),
    })
}

/// Renders a slot list (used for doctor-facing output).
pub fn slots_json(inst: &MarketInstance, slots: &[Slot]) -> Value {
    Value::Array(slots.iter().map(|&s| slot(inst, s)).collect())
}
