use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ranking::{RankError, Ranking};

/// Reserved token for the unmatched outcome.
pub const NONE_TOKEN: &str = "@none";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HospitalIx(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DoctorIx(pub usize);

/// A hospital or the unmatched outcome (`None`).
pub type Slot = Option<HospitalIx>;

/// Allocation of a couple: (hospital of f, hospital of m).
pub type SlotPair = (Slot, Slot);

impl fmt::Display for HospitalIx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h#{}", self.0)
    }
}

impl fmt::Display for DoctorIx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d#{}", self.0)
    }
}

/// Which member of a couple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Member {
    F,
    M,
}

impl Member {
    pub fn other(self) -> Member {
        match self {
            Member::F => Member::M,
            Member::M => Member::F,
        }
    }

    pub fn of(self, pair: SlotPair) -> Slot {
        match self {
            Member::F => pair.0,
            Member::M => pair.1,
        }
    }
}

/// Every element of H̄ = H ∪ {∅}, hospitals first.
pub fn all_slots(n_hospitals: usize) -> Vec<Slot> {
    (0..n_hospitals)
        .map(|h| Some(HospitalIx(h)))
        .chain(std::iter::once(None))
        .collect()
}

/// A doctor's strict order over H̄. Valid preferences rank ∅ last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoctorPreference(Ranking<Slot>);

impl DoctorPreference {
    /// Hospitals best first; ∅ is appended when absent.
    pub fn new(mut order: Vec<Slot>) -> Result<Self, RankError> {
        if !order.contains(&None) {
            order.push(None);
        }
        Ranking::new(order).map(DoctorPreference)
    }

    pub fn from_hospitals(order: impl IntoIterator<Item = HospitalIx>) -> Result<Self, RankError> {
        Self::new(order.into_iter().map(Some).collect())
    }

    pub fn ranking(&self) -> &Ranking<Slot> {
        &self.0
    }

    pub fn rank(&self, s: Slot) -> Result<usize, RankError> {
        self.0.rank(&s)
    }

    pub fn prefers(&self, a: Slot, b: Slot) -> bool {
        self.0.prefers(&a, &b)
    }

    /// `a` weakly above `b`.
    pub fn weakly_prefers(&self, a: Slot, b: Slot) -> bool {
        a == b || self.prefers(a, b)
    }

    pub fn top(&self) -> Slot {
        self.0.top().flatten()
    }

    /// Hospitals only, best first, stopping at ∅.
    pub fn hospitals(&self) -> Vec<HospitalIx> {
        self.0.iter().map_while(|s| *s).collect()
    }

    pub fn order(&self) -> &[Slot] {
        self.0.as_slice()
    }
}

/// A couple's strict order over H̄².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplePreference(Ranking<SlotPair>);

impl CouplePreference {
    pub fn new(order: Vec<SlotPair>) -> Result<Self, RankError> {
        Ranking::new(order).map(CouplePreference)
    }

    /// Matched pairs as given, followed by any missing ∅-pairs in canonical
    /// order: by the f-coordinate's rank in `pf`, then the m-coordinate's rank in `pm`.
    pub fn with_canonical_none_pairs(
        mut order: Vec<SlotPair>,
        n_hospitals: usize,
        pf: &DoctorPreference,
        pm: &DoctorPreference,
    ) -> Result<Self, RankError> {
        let mut missing: Vec<SlotPair> = none_pairs(n_hospitals)
            .into_iter()
            .filter(|p| !order.contains(p))
            .collect();
        missing.sort_by_key(|&(a, b)| (slot_rank_or_max(pf, a), slot_rank_or_max(pm, b)));
        order.extend(missing);
        Self::new(order)
    }

    /// Responsive product of two individual preferences: matched pairs
    /// lexicographically by f's rank then m's rank, then the ∅-pairs the same way.
    pub fn responsive_product(n_hospitals: usize, pf: &DoctorPreference, pm: &DoctorPreference) -> Self {
        let mut matched: Vec<SlotPair> = Vec::new();
        for a in pf.hospitals() {
            for b in pm.hospitals() {
                matched.push((Some(a), Some(b)));
            }
        }
        Self::with_canonical_none_pairs(matched, n_hospitals, pf, pm)
            .expect("product order has no duplicates")
    }

    pub fn ranking(&self) -> &Ranking<SlotPair> {
        &self.0
    }

    pub fn order(&self) -> &[SlotPair] {
        self.0.as_slice()
    }

    pub fn rank(&self, p: SlotPair) -> Result<usize, RankError> {
        self.0.rank(&p)
    }

    pub fn prefers(&self, a: SlotPair, b: SlotPair) -> bool {
        self.0.prefers(&a, &b)
    }

    /// The conditional order of the non-fixed member over H̄ when the
    /// `fixed` member is held at `at`: `x` above `y` exactly when the pair
    /// with `x` precedes the pair with `y`.
    pub fn conditional(&self, fixed: Member, at: Slot) -> Vec<Slot> {
        self.0
            .iter()
            .filter(|p| fixed.of(**p) == at)
            .map(|p| fixed.other().of(*p))
            .collect()
    }

    /// Same as [`conditional`](Self::conditional) with the result checked to be an order over H̄.
    pub fn conditional_preference(
        &self,
        fixed: Member,
        at: Slot,
        n_hospitals: usize,
    ) -> Result<Vec<Slot>, ConditionalError> {
        if let Some(h) = at {
            if h.0 >= n_hospitals {
                return Err(ConditionalError::UnknownHospital(h));
            }
        }
        let order = self.conditional(fixed, at);
        if order.len() != n_hospitals + 1 {
            return Err(ConditionalError::Incomplete { found: order.len(), expected: n_hospitals + 1 });
        }
        Ok(order)
    }

    /// Hospitals in order of first appearance as the f-coordinate.
    pub fn first_coordinate_order(&self) -> Vec<HospitalIx> {
        let mut seen = Vec::new();
        for (a, _) in self.0.iter() {
            if let Some(h) = a {
                if !seen.contains(h) {
                    seen.push(*h);
                }
            }
        }
        seen
    }

    /// The same preference with the roles of the members exchanged.
    pub fn transposed(&self) -> CouplePreference {
        CouplePreference::new(self.0.iter().map(|&(a, b)| (b, a)).collect())
            .expect("transposition preserves distinctness")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConditionalError {
    #[error("hospital {0} is not part of the market")]
    UnknownHospital(HospitalIx),
    #[error("couple preference is incomplete: projection has {found} entries, expected {expected}")]
    Incomplete { found: usize, expected: usize },
}

fn slot_rank_or_max(p: &DoctorPreference, s: Slot) -> usize {
    p.rank(s).unwrap_or(usize::MAX)
}

/// Every pair of H̄² with at least one ∅ coordinate.
pub fn none_pairs(n_hospitals: usize) -> Vec<SlotPair> {
    let slots = all_slots(n_hospitals);
    let mut out = Vec::new();
    for &a in &slots {
        for &b in &slots {
            if a.is_none() || b.is_none() {
                out.push((a, b));
            }
        }
    }
    out
}

/// Every pair of H̄².
pub fn all_pairs(n_hospitals: usize) -> Vec<SlotPair> {
    let slots = all_slots(n_hospitals);
    slots.iter().flat_map(|&a| slots.iter().map(move |&b| (a, b))).collect()
}

/// How a hospital's individual ranking extends to feasible sets of doctors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExtension {
    /// Only the comparisons every responsive extension agrees on.
    ForcedOnly,
    /// Sorted rank vectors (∅-padded to capacity) compared lexicographically.
    RankVectorLex,
    /// An explicit order over all feasible sets, best first.
    Explicit(ExplicitSetOrder),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSetOrder {
    sets: Vec<Vec<DoctorIx>>,
    index: HashMap<Vec<DoctorIx>, usize>,
}

impl ExplicitSetOrder {
    /// Sets are normalized (sorted); duplicates are reported by index.
    pub fn new(sets: Vec<Vec<DoctorIx>>) -> Result<Self, usize> {
        let sets: Vec<Vec<DoctorIx>> = sets
            .into_iter()
            .map(|mut s| {
                s.sort();
                s
            })
            .collect();
        let mut index = HashMap::with_capacity(sets.len());
        for (i, s) in sets.iter().enumerate() {
            if s.windows(2).any(|w| w[0] == w[1]) || index.insert(s.clone(), i).is_some() {
                return Err(i);
            }
        }
        Ok(ExplicitSetOrder { sets, index })
    }

    pub fn sets(&self) -> &[Vec<DoctorIx>] {
        &self.sets
    }

    /// 0-based position of a (sorted) set.
    pub fn position(&self, set: &[DoctorIx]) -> Option<usize> {
        let mut key = set.to_vec();
        key.sort();
        self.index.get(&key).copied()
    }
}

/// A hospital's ranking over individual doctors (∅ implicitly last) plus its
/// extension to feasible sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HospitalPreference {
    pub individual: Ranking<DoctorIx>,
    pub set_extension: SetExtension,
}

impl HospitalPreference {
    pub fn new(individual: Vec<DoctorIx>, set_extension: SetExtension) -> Result<Self, RankError> {
        Ok(HospitalPreference { individual: Ranking::new(individual)?, set_extension })
    }

    pub fn prefers(&self, a: DoctorIx, b: DoctorIx) -> bool {
        self.individual.prefers(&a, &b)
    }

    /// 1-based rank; doctors missing from the ranking share the ∅ rank.
    pub fn rank(&self, d: DoctorIx) -> usize {
        self.individual.rank(&d).unwrap_or(self.individual.len() + 1)
    }

    pub fn none_rank(&self) -> usize {
        self.individual.len() + 1
    }
}
