mod oracles;

use rand::seq::SliceRandom;
use stable_couples::axioms::check_rvt;
use stable_couples::random::{random_couple_preference, seeded, CoupleOrderKind};
use stable_couples::{CouplePreference, DoctorPreference, HospitalIx, SlotPair};

fn h(i: usize) -> Option<HospitalIx> {
    Some(HospitalIx(i))
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

fn two_hospital_prefs() -> Vec<DoctorPreference> {
    vec![
        DoctorPreference::new(vec![h(0), h(1)]).unwrap(),
        DoctorPreference::new(vec![h(1), h(0)]).unwrap(),
    ]
}

#[test]
fn pruned_search_agrees_with_full_enumeration_on_two_hospitals() {
    let matched: Vec<SlotPair> = vec![(h(0), h(0)), (h(0), h(1)), (h(1), h(0)), (h(1), h(1))];
    for pf in two_hospital_prefs() {
        for pm in two_hospital_prefs() {
            for order in permutations(&matched) {
                let cp = CouplePreference::with_canonical_none_pairs(order, 2, &pf, &pm).unwrap();
                let full = oracles::rvt_by_definition(&cp, &pf, &pm, 2, false);
                let pruned = oracles::rvt_by_definition(&cp, &pf, &pm, 2, true);
                assert_eq!(full, pruned, "{:?}", cp.order());
            }
        }
    }
}

#[test]
fn check_agrees_with_definition_on_two_hospitals() {
    let matched: Vec<SlotPair> = vec![(h(0), h(0)), (h(0), h(1)), (h(1), h(0)), (h(1), h(1))];
    let none: Vec<SlotPair> = vec![(h(0), None), (h(1), None), (None, h(0)), (None, h(1)), (None, None)];
    let none_orders = permutations(&none);
    let mut holds = 0;
    for pf in two_hospital_prefs() {
        for pm in two_hospital_prefs() {
            for order in permutations(&matched) {
                for tail in none_orders.iter().step_by(7) {
                    let cp = CouplePreference::new(order.iter().chain(tail).copied().collect()).unwrap();
                    let expected = oracles::rvt_by_definition(&cp, &pf, &pm, 2, true);
                    assert_eq!(check_rvt(&cp, &pf, &pm).holds, expected, "{:?}", cp.order());
                    holds += expected as usize;
                }
            }
        }
    }
    assert!(holds > 0);
}

#[test]
fn check_agrees_with_definition_on_three_hospitals() {
    let mut rng = seeded(21);
    let hs: Vec<HospitalIx> = (0..3).map(HospitalIx).collect();
    for i in 0..600 {
        let mut a = hs.clone();
        a.shuffle(&mut rng);
        let mut b = hs.clone();
        b.shuffle(&mut rng);
        let pf = DoctorPreference::from_hospitals(a).unwrap();
        let pm = DoctorPreference::from_hospitals(b).unwrap();
        let kind = [CoupleOrderKind::Rvt, CoupleOrderKind::Responsive, CoupleOrderKind::Unrestricted][i % 3];
        let mut order = random_couple_preference(&mut rng, 3, &pf, &pm, kind).order().to_vec();
        if i % 2 == 1 {
            // near misses: one adjacent swap among matched pairs
            let k = i % 8;
            order.swap(k, k + 1);
        }
        let cp = CouplePreference::new(order).unwrap();
        let expected = oracles::rvt_by_definition(&cp, &pf, &pm, 3, true);
        assert_eq!(check_rvt(&cp, &pf, &pm).holds, expected, "{:?}", cp.order());
    }
}
