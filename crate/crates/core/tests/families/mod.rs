//! Parameter sets for the non-existence builders.
#![allow(dead_code)]

use stable_couples::constructions::{CoupleBundle, RfViolationSpec, ScpiViolationSpec, SrfViolationSpec};

fn names(v: &[usize]) -> Vec<String> {
    v.iter().map(|h| format!("h{}", h + 1)).collect()
}

/// Product order of the two lists, f's choice first, with the listed
/// same-hospital pairs moved to the top.
fn lifted(f: &[usize], m: &[usize], lift: &[usize]) -> CoupleBundle {
    let mut pairs: Vec<(usize, usize)> = f.iter().flat_map(|&a| m.iter().map(move |&b| (a, b))).collect();
    for &h in lift.iter().rev() {
        pairs.retain(|&p| p != (h, h));
        pairs.insert(0, (h, h));
    }
    CoupleBundle {
        f_prefs: names(f),
        m_prefs: names(m),
        pairs: pairs.into_iter().map(|(a, b)| (format!("h{}", a + 1), format!("h{}", b + 1))).collect(),
    }
}

fn relabel(c: &CoupleBundle, perm: &[usize]) -> CoupleBundle {
    let map = |s: &String| -> String {
        let i: usize = s[1..].parse().expect("hospital id h<k>");
        format!("h{}", perm[i - 1] + 1)
    };
    CoupleBundle {
        f_prefs: c.f_prefs.iter().map(map).collect(),
        m_prefs: c.m_prefs.iter().map(map).collect(),
        pairs: c.pairs.iter().map(|(a, b)| (map(a), map(b))).collect(),
    }
}

pub fn rf_specs() -> Vec<RfViolationSpec> {
    let table = RfViolationSpec::default().couple;
    let mirrored = relabel(&table, &[1, 0]);
    let both_lifted = CoupleBundle::new(
        &["h2", "h1"],
        &["h1", "h2"],
        &[("h1", "h1"), ("h2", "h2"), ("h2", "h1"), ("h1", "h2")],
    );
    let three_a = lifted(&[2, 0, 1], &[0, 1, 2], &[0]);
    let three_b = lifted(&[1, 2, 0], &[2, 0, 1], &[2]);
    let spec = |caps: &[usize], couple: &CoupleBundle, filler_couples: usize| RfViolationSpec {
        capacities: caps.to_vec(),
        couple: couple.clone(),
        filler_couples,
    };
    vec![
        spec(&[2, 2], &table, 0),
        spec(&[3, 2], &table, 0),
        spec(&[2, 3], &table, 0),
        spec(&[3, 3], &table, 0),
        spec(&[4, 2], &table, 1),
        spec(&[3, 3], &table, 1),
        spec(&[2, 2], &mirrored, 0),
        spec(&[3, 2], &mirrored, 0),
        spec(&[2, 2], &both_lifted, 0),
        spec(&[2, 3], &both_lifted, 0),
        spec(&[2, 2, 2], &three_a, 0),
        spec(&[3, 2, 2], &three_a, 0),
        spec(&[2, 2, 2], &three_b, 0),
        spec(&[2, 2, 3], &three_b, 1),
    ]
}

/// `(spec, expected to be the member-last shape)`.
pub fn scpi_specs() -> Vec<(ScpiViolationSpec, bool)> {
    let spec = |caps: &[usize], ranking: &str| ScpiViolationSpec {
        capacities: caps.to_vec(),
        ranking: ranking.split_whitespace().map(String::from).collect(),
    };
    vec![
        (spec(&[2, 2], "c0 s s c0"), true),
        (spec(&[3, 2], "s c0 s s c0"), true),
        (spec(&[2, 3], "c0 s s s c0"), true),
        (spec(&[3, 3], "s s c0 s s c0"), true),
        (spec(&[3, 3], "c1 c1 c0 s s c0"), true),
        (spec(&[2, 2, 2], "s s c0 s s c0"), true),
        (spec(&[2, 2], "c0 s c0 s"), false),
        (spec(&[3, 2], "c0 s c0 s s"), false),
        (spec(&[2, 3], "s c0 s c0 s"), false),
        (spec(&[3, 3], "s c0 s s c0 s"), false),
        (spec(&[2, 4], "c0 s c0 s s s"), false),
        (spec(&[2, 2, 2], "c0 s c0 s s s"), false),
        (spec(&[3, 4], "s c0 s c0 s c1 c1"), false),
    ]
}

pub fn srf_specs() -> Vec<SrfViolationSpec> {
    let table = SrfViolationSpec::default().couple;
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out: Vec<SrfViolationSpec> = perms
        .iter()
        .map(|p| SrfViolationSpec { capacities: vec![2, 2, 2], couple: relabel(&table, p), filler_couples: 0 })
        .collect();
    for (caps, p, fc) in [
        (vec![3, 2, 2], [0, 1, 2], 0),
        (vec![2, 3, 2], [1, 2, 0], 0),
        (vec![2, 2, 3], [2, 0, 1], 0),
        (vec![4, 2, 2], [0, 1, 2], 1),
        (vec![2, 4, 2], [2, 1, 0], 1),
    ] {
        out.push(SrfViolationSpec { capacities: caps, couple: relabel(&table, &p), filler_couples: fc });
    }
    out
}
