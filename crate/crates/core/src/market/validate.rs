use std::collections::HashSet;

use serde::Serialize;

use super::instance::MarketInstance;
use super::prefs::{all_pairs, SetExtension};
use crate::axioms::{check_responsive_hospital, feasible_sets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Permissive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Fatal,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub code: &'static str,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.iter().all(|i| i.severity != Severity::Fatal)
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }

    fn fatal(&mut self, code: &'static str, message: String) {
        self.issues.push(Issue { code, severity: Severity::Fatal, message });
    }

    fn cardinality(&mut self, mode: Mode, code: &'static str, message: String) {
        let severity = match mode {
            Mode::Strict => Severity::Fatal,
            Mode::Permissive => Severity::Warning,
        };
        self.issues.push(Issue { code, severity, message });
    }
}

/// Structural checks are always fatal; the market-size assumptions are fatal
/// in strict mode and warnings in permissive mode.
pub fn validate_instance(inst: &MarketInstance, mode: Mode) -> ValidationReport {
    let mut r = ValidationReport::default();
    let nh = inst.n_hospitals();
    let slots = inst.slots();

    for h in inst.hospital_ixs() {
        if inst.capacity(h) == 0 {
            r.fatal("zero-capacity", format!("hospital {} has capacity 0", inst.hospital_id(h)));
        }
    }

    for d in inst.doctor_ixs() {
        let p = inst.doctor_pref(d);
        let order = p.order();
        if order.len() != slots.len() || slots.iter().any(|s| !p.ranking().contains(s)) {
            r.fatal(
                "doctor-pref-incomplete",
                format!("preference of {} does not rank every hospital", inst.doctor_id(d)),
            );
        } else if order.last() != Some(&None) {
            r.fatal("doctor-pref-none-not-last", format!("preference of {} ranks a hospital below @none", inst.doctor_id(d)));
        }
    }

    for (ci, c) in inst.couples().iter().enumerate() {
        let cp = inst.couple_pref(ci);
        let name = format!("({}, {})", inst.doctor_id(c.f), inst.doctor_id(c.m));
        let every = all_pairs(nh);
        if cp.order().len() != every.len() || every.iter().any(|p| !cp.ranking().contains(p)) {
            r.fatal("couple-pref-incomplete", format!("preference of couple {name} does not list every hospital pair"));
            continue;
        }
        let first_none = cp.order().iter().position(|(a, b)| a.is_none() || b.is_none());
        if let Some(k) = first_none {
            if cp.order()[k..].iter().any(|(a, b)| a.is_some() && b.is_some()) {
                r.fatal(
                    "couple-pref-matched-after-none",
                    format!("couple {name} ranks a pair with @none above a fully matched pair"),
                );
            }
        }
    }

    let all_doctors: HashSet<_> = inst.doctor_ixs().collect();
    for h in inst.hospital_ixs() {
        let p = inst.hospital_pref(h);
        let listed: HashSet<_> = p.individual.iter().copied().collect();
        if listed != all_doctors {
            r.fatal("hospital-pref-incomplete", format!("ranking of {} does not list every doctor", inst.hospital_id(h)));
            continue;
        }
        if let SetExtension::Explicit(order) = &p.set_extension {
            let cap = inst.capacity(h);
            let feasible = feasible_sets(inst.n_doctors(), cap);
            let listed_ok = order.sets().len() == feasible.len()
                && order.sets().iter().all(|s| s.len() <= cap)
                && feasible.iter().all(|s| order.position(s).is_some());
            if !listed_ok {
                r.fatal(
                    "explicit-order-invalid",
                    format!("explicit set order of {} is not a total order over its feasible sets", inst.hospital_id(h)),
                );
            } else {
                match check_responsive_hospital(order.sets(), &p.individual, cap) {
                    Ok(v) if v.holds => {}
                    Ok(_) | Err(_) => r.fatal(
                        "explicit-order-not-responsive",
                        format!("explicit set order of {} is not responsive to its ranking", inst.hospital_id(h)),
                    ),
                }
            }
        }
    }

    let nd = inst.n_doctors();
    if inst.total_capacity() != nd {
        r.cardinality(
            mode,
            "capacity-sum-mismatch",
            format!("total capacity {} differs from the number of doctors {nd}", inst.total_capacity()),
        );
    }
    for h in inst.hospital_ixs() {
        if inst.capacity(h) == 1 {
            r.cardinality(mode, "capacity-below-two", format!("hospital {} has capacity 1", inst.hospital_id(h)));
        }
    }
    if nh < 2 {
        r.cardinality(mode, "too-few-hospitals", format!("{nh} hospitals, at least 2 expected"));
    }
    if nd < 4 {
        r.cardinality(mode, "too-few-doctors", format!("{nd} doctors, at least 4 expected"));
    }
    if inst.couples().is_empty() {
        r.cardinality(mode, "no-couples", "market has no couples".to_string());
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{MarketBuilder, SetExtensionSpec};

    fn table1(cap1: usize) -> MarketBuilder {
        MarketBuilder::new()
            .hospital("h1", cap1)
            .hospital("h2", 2)
            .single("s1", &["h2", "h1"])
            .single("s2", &["h1", "h2"])
            .couple(
                "f",
                "m",
                &["h2", "h1"],
                &["h1", "h2"],
                Some(&[("h1", "h1"), ("h2", "h1"), ("h2", "h2"), ("h1", "h2")]),
            )
            .common_ranking(&["f", "s1", "s2", "m"], SetExtensionSpec::RankLex)
    }

    #[test]
    fn example_one_is_clean() {
        let r = validate_instance(&table1(2).build().unwrap(), Mode::Strict);
        assert!(r.issues.is_empty(), "{r:?}");
    }

    #[test]
    fn missing_couple_entry_is_fatal() {
        let inst = MarketBuilder::new()
            .hospital("h1", 2)
            .hospital("h2", 2)
            .single("s1", &["h2", "h1"])
            .single("s2", &["h1", "h2"])
            .couple("f", "m", &["h2", "h1"], &["h1", "h2"], Some(&[("h1", "h1"), ("h2", "h1"), ("h2", "h2")]))
            .common_ranking(&["f", "s1", "s2", "m"], SetExtensionSpec::RankLex)
            .build()
            .unwrap();
        let r = validate_instance(&inst, Mode::Strict);
        assert!(!r.is_valid());
        assert!(r.has_code("couple-pref-incomplete"));
    }

    #[test]
    fn capacity_sum_depends_on_mode() {
        let inst = table1(3).build().unwrap();
        let strict = validate_instance(&inst, Mode::Strict);
        assert!(!strict.is_valid());
        assert!(strict.has_code("capacity-sum-mismatch"));
        let permissive = validate_instance(&inst, Mode::Permissive);
        assert!(permissive.is_valid());
        assert_eq!(permissive.warnings().count(), 1);
    }

    #[test]
    fn matched_pair_after_none_pair_is_fatal() {
        let inst = MarketBuilder::new()
            .hospital("h1", 2)
            .hospital("h2", 2)
            .single("s1", &["h2", "h1"])
            .single("s2", &["h1", "h2"])
            .couple(
                "f",
                "m",
                &["h2", "h1"],
                &["h1", "h2"],
                Some(&[("h1", "h1"), ("h1", "@none"), ("h2", "h1"), ("h2", "h2"), ("h1", "h2")]),
            )
            .common_ranking(&["f", "s1", "s2", "m"], SetExtensionSpec::RankLex)
            .build()
            .unwrap();
        let r = validate_instance(&inst, Mode::Strict);
        assert!(r.has_code("couple-pref-matched-after-none"));
    }
}
