//! Comparisons between feasible doctor sets at one hospital.

use std::cmp::Ordering;

use crate::market::{DoctorIx, HospitalPreference, SetExtension};

/// Outcome of comparing set `a` against set `b` from the hospital's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetComparison {
    Better,
    Worse,
    Equal,
    /// Responsive extensions disagree on the pair.
    Incomparable,
}

/// Ranks of the members, best first, padded with the ∅ rank up to `capacity`.
pub fn rank_vector(pref: &HospitalPreference, set: &[DoctorIx], capacity: usize) -> Vec<usize> {
    let mut v: Vec<usize> = set.iter().map(|&d| pref.rank(d)).collect();
    v.sort_unstable();
    let pad = capacity.max(set.len());
    v.resize(pad, pref.none_rank());
    v
}

/// The canonical responsive completion: padded rank vectors compared
/// lexicographically, smaller ranks being better.
pub fn compare_rank_lex(pref: &HospitalPreference, a: &[DoctorIx], b: &[DoctorIx], capacity: usize) -> SetComparison {
    let va = rank_vector(pref, a, capacity);
    let vb = rank_vector(pref, b, capacity);
    match va.cmp(&vb) {
        Ordering::Less => SetComparison::Better,
        Ordering::Greater => SetComparison::Worse,
        Ordering::Equal => SetComparison::Equal,
    }
}

/// The comparison shared by every responsive extension: `a` beats `b` in all
/// of them exactly when its padded rank vector is componentwise no worse and
/// differs somewhere.
pub fn compare_forced(pref: &HospitalPreference, a: &[DoctorIx], b: &[DoctorIx], capacity: usize) -> SetComparison {
    let va = rank_vector(pref, a, capacity);
    let vb = rank_vector(pref, b, capacity);
    let (va, vb) = pad_equal(va, vb, pref.none_rank());
    let a_le = va.iter().zip(&vb).all(|(x, y)| x <= y);
    let b_le = va.iter().zip(&vb).all(|(x, y)| y <= x);
    match (a_le, b_le) {
        (true, true) => SetComparison::Equal,
        (true, false) => SetComparison::Better,
        (false, true) => SetComparison::Worse,
        (false, false) => SetComparison::Incomparable,
    }
}

fn pad_equal(mut a: Vec<usize>, mut b: Vec<usize>, none: usize) -> (Vec<usize>, Vec<usize>) {
    let n = a.len().max(b.len());
    a.resize(n, none);
    b.resize(n, none);
    (a, b)
}

/// Compares under the hospital's own set extension. `None` when the
/// explicit order lacks one of the sets.
pub fn compare_sets(pref: &HospitalPreference, a: &[DoctorIx], b: &[DoctorIx], capacity: usize) -> Option<SetComparison> {
    match &pref.set_extension {
        SetExtension::ForcedOnly => Some(compare_forced(pref, a, b, capacity)),
        SetExtension::RankVectorLex => Some(compare_rank_lex(pref, a, b, capacity)),
        SetExtension::Explicit(order) => {
            let pa = order.position(a)?;
            let pb = order.position(b)?;
            Some(match pa.cmp(&pb) {
                Ordering::Less => SetComparison::Better,
                Ordering::Greater => SetComparison::Worse,
                Ordering::Equal => SetComparison::Equal,
            })
        }
    }
}
