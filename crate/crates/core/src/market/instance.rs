use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::prefs::{
    all_slots, CouplePreference, DoctorIx, DoctorPreference, HospitalIx, HospitalPreference, Member,
    SetExtension, Slot, SlotPair, NONE_TOKEN,
};
use super::ranking::RankError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hospital {
    pub id: String,
    pub capacity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Couple {
    pub f: DoctorIx,
    pub m: DoctorIx,
}

impl Couple {
    pub fn member(&self, which: Member) -> DoctorIx {
        match which {
            Member::F => self.f,
            Member::M => self.m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Single,
    Partner { couple: usize, member: Member },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("id {0:?} is reserved for the unmatched outcome")]
    ReservedId(String),
    #[error("unknown {kind} {id:?}")]
    UnknownId { kind: &'static str, id: String },
    #[error("doctor {0:?} appears in more than one role")]
    RoleConflict(String),
    #[error("doctor {0:?} is neither a single nor a couple member")]
    Unassigned(String),
    #[error("{what}: expected {expected} entries, found {found}")]
    Shape { what: &'static str, expected: usize, found: usize },
    #[error("index {index} out of range in {what}")]
    OutOfRange { what: &'static str, index: usize },
    #[error("{context}: {source}")]
    Ranking { context: String, source: RankError },
}

/// A hospital–doctor market with couples.
///
/// Doctors are addressed by [`DoctorIx`] and hospitals by [`HospitalIx`];
/// string ids are kept for I/O. Preference lists may be incomplete here;
/// [`crate::market::validate_instance`] reports such defects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketInstance {
    hospitals: Vec<Hospital>,
    doctor_ids: Vec<String>,
    roles: Vec<Role>,
    singles: Vec<DoctorIx>,
    couples: Vec<Couple>,
    doctor_prefs: Vec<DoctorPreference>,
    couple_prefs: Vec<CouplePreference>,
    hospital_prefs: Vec<HospitalPreference>,
}

impl MarketInstance {
    pub fn new(
        hospitals: Vec<Hospital>,
        doctor_ids: Vec<String>,
        singles: Vec<DoctorIx>,
        couples: Vec<Couple>,
        doctor_prefs: Vec<DoctorPreference>,
        couple_prefs: Vec<CouplePreference>,
        hospital_prefs: Vec<HospitalPreference>,
    ) -> Result<Self, InstanceError> {
        check_ids(hospitals.iter().map(|h| h.id.as_str()))?;
        check_ids(doctor_ids.iter().map(String::as_str))?;
        let nd = doctor_ids.len();
        let nh = hospitals.len();
        let mut roles: Vec<Option<Role>> = vec![None; nd];
        let mut claim = |d: DoctorIx, role: Role| -> Result<(), InstanceError> {
            let slot = roles.get_mut(d.0).ok_or(InstanceError::OutOfRange { what: "doctor roles", index: d.0 })?;
            if slot.is_some() {
                return Err(InstanceError::RoleConflict(doctor_ids[d.0].clone()));
            }
            *slot = Some(role);
            Ok(())
        };
        for &s in &singles {
            claim(s, Role::Single)?;
        }
        for (ci, c) in couples.iter().enumerate() {
            claim(c.f, Role::Partner { couple: ci, member: Member::F })?;
            claim(c.m, Role::Partner { couple: ci, member: Member::M })?;
        }
        let roles: Vec<Role> = roles
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| InstanceError::Unassigned(doctor_ids[i].clone())))
            .collect::<Result<_, _>>()?;
        shape("doctor_prefs", nd, doctor_prefs.len())?;
        shape("couple_prefs", couples.len(), couple_prefs.len())?;
        shape("hospital_prefs", nh, hospital_prefs.len())?;
        for p in &doctor_prefs {
            for s in p.order() {
                slot_in_range(*s, nh, "doctor preference")?;
            }
        }
        for p in &couple_prefs {
            for (a, b) in p.order() {
                slot_in_range(*a, nh, "couple preference")?;
                slot_in_range(*b, nh, "couple preference")?;
            }
        }
        for p in &hospital_prefs {
            for d in p.individual.iter() {
                if d.0 >= nd {
                    return Err(InstanceError::OutOfRange { what: "hospital preference", index: d.0 });
                }
            }
            if let SetExtension::Explicit(order) = &p.set_extension {
                for set in order.sets() {
                    for d in set {
                        if d.0 >= nd {
                            return Err(InstanceError::OutOfRange { what: "explicit set order", index: d.0 });
                        }
                    }
                }
            }
        }
        Ok(MarketInstance { hospitals, doctor_ids, roles, singles, couples, doctor_prefs, couple_prefs, hospital_prefs })
    }

    pub fn hospitals(&self) -> &[Hospital] {
        &self.hospitals
    }

    pub fn n_hospitals(&self) -> usize {
        self.hospitals.len()
    }

    pub fn n_doctors(&self) -> usize {
        self.doctor_ids.len()
    }

    pub fn hospital_ixs(&self) -> impl Iterator<Item = HospitalIx> {
        (0..self.hospitals.len()).map(HospitalIx)
    }

    pub fn doctor_ixs(&self) -> impl Iterator<Item = DoctorIx> {
        (0..self.doctor_ids.len()).map(DoctorIx)
    }

    /// H̄: every hospital, then ∅.
    pub fn slots(&self) -> Vec<Slot> {
        all_slots(self.hospitals.len())
    }

    pub fn capacity(&self, h: HospitalIx) -> usize {
        self.hospitals[h.0].capacity
    }

    pub fn total_capacity(&self) -> usize {
        self.hospitals.iter().map(|h| h.capacity).sum()
    }

    pub fn hospital_id(&self, h: HospitalIx) -> &str {
        &self.hospitals[h.0].id
    }

    pub fn slot_id(&self, s: Slot) -> &str {
        match s {
            Some(h) => self.hospital_id(h),
            None => NONE_TOKEN,
        }
    }

    pub fn doctor_id(&self, d: DoctorIx) -> &str {
        &self.doctor_ids[d.0]
    }

    pub fn doctor_ids(&self) -> &[String] {
        &self.doctor_ids
    }

    pub fn hospital_by_id(&self, id: &str) -> Option<HospitalIx> {
        self.hospitals.iter().position(|h| h.id == id).map(HospitalIx)
    }

    pub fn doctor_by_id(&self, id: &str) -> Option<DoctorIx> {
        self.doctor_ids.iter().position(|d| d == id).map(DoctorIx)
    }

    pub fn role(&self, d: DoctorIx) -> Role {
        self.roles[d.0]
    }

    pub fn is_single(&self, d: DoctorIx) -> bool {
        self.roles[d.0] == Role::Single
    }

    pub fn singles(&self) -> &[DoctorIx] {
        &self.singles
    }

    pub fn couples(&self) -> &[Couple] {
        &self.couples
    }

    /// The other member of `d`'s couple, if any.
    pub fn partner(&self, d: DoctorIx) -> Option<DoctorIx> {
        match self.roles[d.0] {
            Role::Single => None,
            Role::Partner { couple, member } => Some(self.couples[couple].member(member.other())),
        }
    }

    pub fn doctor_pref(&self, d: DoctorIx) -> &DoctorPreference {
        &self.doctor_prefs[d.0]
    }

    pub fn couple_pref(&self, c: usize) -> &CouplePreference {
        &self.couple_prefs[c]
    }

    pub fn hospital_pref(&self, h: HospitalIx) -> &HospitalPreference {
        &self.hospital_prefs[h.0]
    }

    pub fn hospital_prefs(&self) -> &[HospitalPreference] {
        &self.hospital_prefs
    }

    /// The same market with every hospital using `ext` to compare sets.
    pub fn with_set_extension(&self, ext: SetExtension) -> MarketInstance {
        let mut out = self.clone();
        for p in &mut out.hospital_prefs {
            p.set_extension = ext.clone();
        }
        out
    }

    /// Relabels couples: `swap[i]` exchanges the roles of f and m in couple
    /// `i` (transposing its preference), then couples are reordered so that
    /// new couple `k` is old couple `order[k]`. Doctor indices are unchanged,
    /// so matchings remain valid across the relabeling.
    pub fn relabel_couples(&self, swap: &[bool], order: &[usize]) -> MarketInstance {
        assert_eq!(swap.len(), self.couples.len());
        assert_eq!(order.len(), self.couples.len());
        let mut couples = Vec::with_capacity(order.len());
        let mut couple_prefs = Vec::with_capacity(order.len());
        for &old in order {
            let c = self.couples[old];
            if swap[old] {
                couples.push(Couple { f: c.m, m: c.f });
                couple_prefs.push(self.couple_prefs[old].transposed());
            } else {
                couples.push(c);
                couple_prefs.push(self.couple_prefs[old].clone());
            }
        }
        MarketInstance::new(
            self.hospitals.clone(),
            self.doctor_ids.clone(),
            self.singles.clone(),
            couples,
            self.doctor_prefs.clone(),
            couple_prefs,
            self.hospital_prefs.clone(),
        )
        .expect("relabeling preserves structure")
    }

    /// The same market with every couple dissolved into two singles using
    /// their individual preferences.
    pub fn dissolve_couples(&self) -> MarketInstance {
        let singles: Vec<DoctorIx> = self.doctor_ixs().collect();
        MarketInstance::new(
            self.hospitals.clone(),
            self.doctor_ids.clone(),
            singles,
            Vec::new(),
            self.doctor_prefs.clone(),
            Vec::new(),
            self.hospital_prefs.clone(),
        )
        .expect("dissolving couples preserves structure")
    }
}

fn check_ids<'a>(ids: impl Iterator<Item = &'a str>) -> Result<(), InstanceError> {
    let mut seen = HashSet::new();
    for id in ids {
        if id == NONE_TOKEN {
            return Err(InstanceError::ReservedId(id.to_string()));
        }
        if !seen.insert(id) {
            return Err(InstanceError::DuplicateId(id.to_string()));
        }
    }
    Ok(())
}

fn shape(what: &'static str, expected: usize, found: usize) -> Result<(), InstanceError> {
    if expected == found {
        Ok(())
    } else {
        Err(InstanceError::Shape { what, expected, found })
    }
}

fn slot_in_range(s: Slot, nh: usize, what: &'static str) -> Result<(), InstanceError> {
    match s {
        Some(h) if h.0 >= nh => Err(InstanceError::OutOfRange { what, index: h.0 }),
        _ => Ok(()),
    }
}

/// String-keyed builder, convenient for hand-written markets.
///
/// Doctors are indexed in insertion order. Couple preferences given as
/// `None` become the responsive product of the members' preferences; given
/// lists get missing ∅-pairs appended canonically.
#[derive(Debug, Default, Clone)]
pub struct MarketBuilder {
    hospitals: Vec<Hospital>,
    doctors: Vec<String>,
    singles: Vec<(String, Vec<String>)>,
    couples: Vec<CoupleSpec>,
    rankings: HashMap<String, (Vec<String>, SetExtensionSpec)>,
}

#[derive(Debug, Clone)]
struct CoupleSpec {
    f: String,
    m: String,
    pf: Vec<String>,
    pm: Vec<String>,
    pc: Option<Vec<(String, String)>>,
}

/// Set extension named without doctor indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExtensionSpec {
    Forced,
    RankLex,
    Explicit(Vec<Vec<String>>),
}

impl MarketBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hospital(mut self, id: &str, capacity: usize) -> Self {
        self.hospitals.push(Hospital { id: id.to_string(), capacity });
        self
    }

    pub fn single(mut self, id: &str, prefs: &[&str]) -> Self {
        self.doctors.push(id.to_string());
        self.singles.push((id.to_string(), strings(prefs)));
        self
    }

    pub fn couple(mut self, f: &str, m: &str, pf: &[&str], pm: &[&str], pc: Option<&[(&str, &str)]>) -> Self {
        self.doctors.push(f.to_string());
        self.doctors.push(m.to_string());
        self.couples.push(CoupleSpec {
            f: f.to_string(),
            m: m.to_string(),
            pf: strings(pf),
            pm: strings(pm),
            pc: pc.map(|v| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()),
        });
        self
    }

    pub fn ranking(mut self, hospital: &str, order: &[&str], ext: SetExtensionSpec) -> Self {
        self.rankings.insert(hospital.to_string(), (strings(order), ext));
        self
    }

    /// Gives every hospital without its own ranking the ranking `order`.
    pub fn common_ranking(mut self, order: &[&str], ext: SetExtensionSpec) -> Self {
        for h in &self.hospitals {
            self.rankings.entry(h.id.clone()).or_insert_with(|| (strings(order), ext.clone()));
        }
        self
    }

    pub fn build(self) -> Result<MarketInstance, InstanceError> {
        let hix = |id: &str| -> Result<Slot, InstanceError> {
            if id == NONE_TOKEN {
                return Ok(None);
            }
            self.hospitals
                .iter()
                .position(|h| h.id == id)
                .map(|i| Some(HospitalIx(i)))
                .ok_or_else(|| InstanceError::UnknownId { kind: "hospital", id: id.to_string() })
        };
        let dix = |id: &str| -> Result<DoctorIx, InstanceError> {
            self.doctors
                .iter()
                .position(|d| d == id)
                .map(DoctorIx)
                .ok_or_else(|| InstanceError::UnknownId { kind: "doctor", id: id.to_string() })
        };
        let dpref = |ctx: &str, list: &[String]| -> Result<DoctorPreference, InstanceError> {
            let order = list.iter().map(|s| hix(s)).collect::<Result<Vec<_>, _>>()?;
            DoctorPreference::new(order).map_err(|source| InstanceError::Ranking { context: ctx.to_string(), source })
        };
        let nd = self.doctors.len();
        let mut doctor_prefs: Vec<Option<DoctorPreference>> = vec![None; nd];
        let mut singles = Vec::new();
        for (id, prefs) in &self.singles {
            let d = dix(id)?;
            singles.push(d);
            doctor_prefs[d.0] = Some(dpref(id, prefs)?);
        }
        let mut couples = Vec::new();
        let mut couple_prefs = Vec::new();
        for spec in &self.couples {
            let (f, m) = (dix(&spec.f)?, dix(&spec.m)?);
            let pf = dpref(&spec.f, &spec.pf)?;
            let pm = dpref(&spec.m, &spec.pm)?;
            let cp = match &spec.pc {
                None => CouplePreference::responsive_product(self.hospitals.len(), &pf, &pm),
                Some(list) => {
                    let order: Vec<SlotPair> =
                        list.iter().map(|(a, b)| Ok((hix(a)?, hix(b)?))).collect::<Result<_, InstanceError>>()?;
                    CouplePreference::with_canonical_none_pairs(order, self.hospitals.len(), &pf, &pm).map_err(
                        |source| InstanceError::Ranking { context: format!("couple ({}, {})", spec.f, spec.m), source },
                    )?
                }
            };
            doctor_prefs[f.0] = Some(pf);
            doctor_prefs[m.0] = Some(pm);
            couples.push(Couple { f, m });
            couple_prefs.push(cp);
        }
        let doctor_prefs: Vec<DoctorPreference> = doctor_prefs
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| InstanceError::Unassigned(self.doctors[i].clone())))
            .collect::<Result<_, _>>()?;
        let mut hospital_prefs = Vec::new();
        for h in &self.hospitals {
            let (order, ext) = self
                .rankings
                .get(&h.id)
                .ok_or_else(|| InstanceError::UnknownId { kind: "hospital ranking for", id: h.id.clone() })?;
            let individual = order.iter().map(|d| dix(d)).collect::<Result<Vec<_>, _>>()?;
            let set_extension = match ext {
                SetExtensionSpec::Forced => SetExtension::ForcedOnly,
                SetExtensionSpec::RankLex => SetExtension::RankVectorLex,
                SetExtensionSpec::Explicit(sets) => {
                    let sets = sets
                        .iter()
                        .map(|s| s.iter().map(|d| dix(d)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    let order = super::prefs::ExplicitSetOrder::new(sets).map_err(|i| InstanceError::Ranking {
                        context: format!("explicit set order of {}", h.id),
                        source: RankError::Duplicate(format!("set #{i}")),
                    })?;
                    SetExtension::Explicit(order)
                }
            };
            let pref = HospitalPreference::new(individual, set_extension)
                .map_err(|source| InstanceError::Ranking { context: h.id.clone(), source })?;
            hospital_prefs.push(pref);
        }
        MarketInstance::new(self.hospitals, self.doctors, singles, couples, doctor_prefs, couple_prefs, hospital_prefs)
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}
