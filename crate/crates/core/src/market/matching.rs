use thiserror::Error;

use super::instance::MarketInstance;
use super::prefs::{DoctorIx, HospitalIx, Slot, SlotPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("assignment covers {found} doctors, market has {expected}")]
    WrongSize { expected: usize, found: usize },
    #[error("hospital {hospital} holds {held} doctors, capacity {capacity}")]
    OverCapacity { hospital: String, held: usize, capacity: usize },
    #[error("doctor {0} is assigned to more than one hospital")]
    DoubleAssignment(String),
    #[error("index {0} out of range")]
    OutOfRange(usize),
}

/// An assignment of doctors to H̄ together with its inverse view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    assignment: Vec<Slot>,
    members: Vec<Vec<DoctorIx>>,
}

impl Matching {
    /// Everyone unmatched.
    pub fn empty(inst: &MarketInstance) -> Matching {
        Matching { assignment: vec![None; inst.n_doctors()], members: vec![Vec::new(); inst.n_hospitals()] }
    }

    pub fn from_assignment(inst: &MarketInstance, assignment: Vec<Slot>) -> Result<Matching, MatchingError> {
        if assignment.len() != inst.n_doctors() {
            return Err(MatchingError::WrongSize { expected: inst.n_doctors(), found: assignment.len() });
        }
        let mut members = vec![Vec::new(); inst.n_hospitals()];
        for (d, s) in assignment.iter().enumerate() {
            if let Some(h) = s {
                members.get_mut(h.0).ok_or(MatchingError::OutOfRange(h.0))?.push(DoctorIx(d));
            }
        }
        let m = Matching { assignment, members };
        m.check_capacity(inst)?;
        Ok(m)
    }

    pub fn from_members(inst: &MarketInstance, members: Vec<Vec<DoctorIx>>) -> Result<Matching, MatchingError> {
        if members.len() != inst.n_hospitals() {
            return Err(MatchingError::OutOfRange(members.len()));
        }
        let mut assignment = vec![None; inst.n_doctors()];
        for (h, ds) in members.iter().enumerate() {
            for d in ds {
                let slot = assignment.get_mut(d.0).ok_or(MatchingError::OutOfRange(d.0))?;
                if slot.is_some() {
                    return Err(MatchingError::DoubleAssignment(inst.doctor_id(*d).to_string()));
                }
                *slot = Some(HospitalIx(h));
            }
        }
        Matching::from_assignment(inst, assignment)
    }

    /// Assignment without the capacity check; used by search code that
    /// maintains capacities itself.
    pub(crate) fn from_assignment_unchecked(n_hospitals: usize, assignment: Vec<Slot>) -> Matching {
        let mut members = vec![Vec::new(); n_hospitals];
        for (d, s) in assignment.iter().enumerate() {
            if let Some(h) = s {
                members[h.0].push(DoctorIx(d));
            }
        }
        Matching { assignment, members }
    }

    fn check_capacity(&self, inst: &MarketInstance) -> Result<(), MatchingError> {
        for h in inst.hospital_ixs() {
            let held = self.members[h.0].len();
            if held > inst.capacity(h) {
                return Err(MatchingError::OverCapacity {
                    hospital: inst.hospital_id(h).to_string(),
                    held,
                    capacity: inst.capacity(h),
                });
            }
        }
        Ok(())
    }

    pub fn of(&self, d: DoctorIx) -> Slot {
        self.assignment[d.0]
    }

    /// Doctors at `h`, in index order.
    pub fn members(&self, h: HospitalIx) -> &[DoctorIx] {
        &self.members[h.0]
    }

    pub fn assignment(&self) -> &[Slot] {
        &self.assignment
    }

    pub fn couple_slots(&self, inst: &MarketInstance, couple: usize) -> SlotPair {
        let c = inst.couples()[couple];
        (self.of(c.f), self.of(c.m))
    }

    pub fn vacancies(&self, inst: &MarketInstance, h: HospitalIx) -> usize {
        inst.capacity(h).saturating_sub(self.members[h.0].len())
    }
}
