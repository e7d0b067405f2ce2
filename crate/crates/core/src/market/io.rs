//! JSON instance and matching files.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::instance::{Couple, Hospital, InstanceError, MarketInstance};
use super::matching::Matching;
use super::prefs::{
    CouplePreference, DoctorIx, DoctorPreference, ExplicitSetOrder, HospitalIx, HospitalPreference, SetExtension,
    Slot, SlotPair, NONE_TOKEN,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct ParseError {
    /// Dotted path to the offending field; empty for document-level errors.
    pub path: String,
    pub message: String,
}

impl ParseError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    couple_prefs: BTreeMap<String, Vec<[String; 2]>>,
    couples: Vec<CoupleDoc>,
    doctor_prefs: BTreeMap<String, Vec<String>>,
    hospital_prefs: BTreeMap<String, HospitalPrefDoc>,
    hospitals: Vec<HospitalDoc>,
    singles: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HospitalDoc {
    capacity: usize,
    id: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoupleDoc {
    f: String,
    m: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HospitalPrefDoc {
    individual: Vec<String>,
    set_extension: SetExtensionDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SetExtensionDoc {
    Forced,
    RankLex,
    Explicit(Vec<Vec<String>>),
}

pub fn parse_instance(text: &str) -> Result<MarketInstance, ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: InstanceDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ParseError::at(if path == "." { String::new() } else { path }, e.inner().to_string())
    })?;
    from_doc(doc)
}

fn from_doc(doc: InstanceDoc) -> Result<MarketInstance, ParseError> {
    let mut seen = HashSet::new();
    for (i, h) in doc.hospitals.iter().enumerate() {
        let path = format!("hospitals[{i}].id");
        if h.id == NONE_TOKEN {
            return Err(ParseError::at(path, format!("reserved id {NONE_TOKEN:?}")));
        }
        if !seen.insert(h.id.as_str()) {
            return Err(ParseError::at(path, format!("duplicate id {:?}", h.id)));
        }
    }
    let mut doctor_ids: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    let mut add_doctor = |id: &str, path: String| -> Result<DoctorIx, ParseError> {
        if id == NONE_TOKEN {
            return Err(ParseError::at(path, format!("reserved id {NONE_TOKEN:?}")));
        }
        if !seen.insert(id.to_string()) {
            return Err(ParseError::at(path, format!("duplicate id {id:?}")));
        }
        doctor_ids.push(id.to_string());
        Ok(DoctorIx(doctor_ids.len() - 1))
    };
    let mut singles = Vec::new();
    for (i, s) in doc.singles.iter().enumerate() {
        singles.push(add_doctor(s, format!("singles[{i}]"))?);
    }
    let mut couples = Vec::new();
    for (i, c) in doc.couples.iter().enumerate() {
        let f = add_doctor(&c.f, format!("couples[{i}].f"))?;
        let m = add_doctor(&c.m, format!("couples[{i}].m"))?;
        couples.push(Couple { f, m });
    }

    let hospital_ix = |id: &str, path: &str| -> Result<Slot, ParseError> {
        if id == NONE_TOKEN {
            return Ok(None);
        }
        doc.hospitals
            .iter()
            .position(|h| h.id == id)
            .map(|i| Some(HospitalIx(i)))
            .ok_or_else(|| ParseError::at(path, format!("unknown hospital {id:?}")))
    };
    let doctor_ix = |id: &str, path: &str| -> Result<DoctorIx, ParseError> {
        doctor_ids
            .iter()
            .position(|d| d == id)
            .map(DoctorIx)
            .ok_or_else(|| ParseError::at(path, format!("unknown doctor {id:?}")))
    };

    for key in doc.doctor_prefs.keys() {
        doctor_ix(key, &format!("doctor_prefs.{key}"))?;
    }
    let mut doctor_prefs = Vec::with_capacity(doctor_ids.len());
    for id in &doctor_ids {
        let path = format!("doctor_prefs.{id}");
        let list = doc.doctor_prefs.get(id).ok_or_else(|| ParseError::at(&path, "missing preference"))?;
        let order = list
            .iter()
            .enumerate()
            .map(|(k, h)| hospital_ix(h, &format!("{path}[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        doctor_prefs.push(DoctorPreference::new(order).map_err(|e| ParseError::at(&path, e.to_string()))?);
    }

    let mut couple_lists: Vec<Option<Vec<SlotPair>>> = vec![None; couples.len()];
    for (key, list) in &doc.couple_prefs {
        let path = format!("couple_prefs.{key}");
        let ci: usize = key
            .parse()
            .ok()
            .filter(|&i| i < couples.len())
            .ok_or_else(|| ParseError::at(&path, format!("no couple with index {key:?}")))?;
        let pairs = list
            .iter()
            .enumerate()
            .map(|(k, [a, b])| {
                Ok((hospital_ix(a, &format!("{path}[{k}][0]"))?, hospital_ix(b, &format!("{path}[{k}][1]"))?))
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        couple_lists[ci] = Some(pairs);
    }
    let mut couple_prefs = Vec::with_capacity(couples.len());
    for (ci, list) in couple_lists.into_iter().enumerate() {
        let path = format!("couple_prefs.{ci}");
        let list = list.ok_or_else(|| ParseError::at(&path, "missing preference"))?;
        let c = couples[ci];
        let cp = CouplePreference::with_canonical_none_pairs(
            list,
            doc.hospitals.len(),
            &doctor_prefs[c.f.0],
            &doctor_prefs[c.m.0],
        )
        .map_err(|e| ParseError::at(&path, e.to_string()))?;
        couple_prefs.push(cp);
    }

    for key in doc.hospital_prefs.keys() {
        hospital_ix(key, &format!("hospital_prefs.{key}"))?
            .ok_or_else(|| ParseError::at(format!("hospital_prefs.{key}"), "@none has no preference"))?;
    }
    let mut hospital_prefs = Vec::with_capacity(doc.hospitals.len());
    for h in &doc.hospitals {
        let path = format!("hospital_prefs.{}", h.id);
        let p = doc.hospital_prefs.get(&h.id).ok_or_else(|| ParseError::at(&path, "missing preference"))?;
        let individual = p
            .individual
            .iter()
            .enumerate()
            .map(|(k, d)| doctor_ix(d, &format!("{path}.individual[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let set_extension = match &p.set_extension {
            SetExtensionDoc::Forced => SetExtension::ForcedOnly,
            SetExtensionDoc::RankLex => SetExtension::RankVectorLex,
            SetExtensionDoc::Explicit(sets) => {
                let sets = sets
                    .iter()
                    .enumerate()
                    .map(|(k, s)| {
                        s.iter()
                            .map(|d| doctor_ix(d, &format!("{path}.set_extension.explicit[{k}]")))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let order = ExplicitSetOrder::new(sets).map_err(|k| {
                    ParseError::at(format!("{path}.set_extension.explicit[{k}]"), "duplicate set or repeated doctor")
                })?;
                SetExtension::Explicit(order)
            }
        };
        hospital_prefs.push(
            HospitalPreference::new(individual, set_extension)
                .map_err(|e| ParseError::at(format!("{path}.individual"), e.to_string()))?,
        );
    }

    let hospitals = doc.hospitals.iter().map(|h| Hospital { id: h.id.clone(), capacity: h.capacity }).collect();
    MarketInstance::new(hospitals, doctor_ids, singles, couples, doctor_prefs, couple_prefs, hospital_prefs)
        .map_err(|e: InstanceError| ParseError::at("", e.to_string()))
}

fn to_doc(inst: &MarketInstance) -> InstanceDoc {
    let hospitals =
        inst.hospitals().iter().map(|h| HospitalDoc { id: h.id.clone(), capacity: h.capacity }).collect();
    let singles = inst.singles().iter().map(|&d| inst.doctor_id(d).to_string()).collect();
    let couples = inst
        .couples()
        .iter()
        .map(|c| CoupleDoc { f: inst.doctor_id(c.f).to_string(), m: inst.doctor_id(c.m).to_string() })
        .collect();
    let mut doctor_prefs = BTreeMap::new();
    for d in inst.doctor_ixs() {
        let mut order: Vec<Slot> = inst.doctor_pref(d).order().to_vec();
        if order.last() == Some(&None) {
            order.pop();
        }
        doctor_prefs.insert(
            inst.doctor_id(d).to_string(),
            order.iter().map(|&s| inst.slot_id(s).to_string()).collect(),
        );
    }
    let mut couple_prefs = BTreeMap::new();
    for ci in 0..inst.couples().len() {
        let list = inst
            .couple_pref(ci)
            .order()
            .iter()
            .map(|&(a, b)| [inst.slot_id(a).to_string(), inst.slot_id(b).to_string()])
            .collect();
        couple_prefs.insert(ci.to_string(), list);
    }
    let mut hospital_prefs = BTreeMap::new();
    for h in inst.hospital_ixs() {
        let p = inst.hospital_pref(h);
        let names = |ds: &[DoctorIx]| ds.iter().map(|&d| inst.doctor_id(d).to_string()).collect::<Vec<_>>();
        let set_extension = match &p.set_extension {
            SetExtension::ForcedOnly => SetExtensionDoc::Forced,
            SetExtension::RankVectorLex => SetExtensionDoc::RankLex,
            SetExtension::Explicit(o) => SetExtensionDoc::Explicit(o.sets().iter().map(|s| names(s)).collect()),
        };
        hospital_prefs.insert(
            inst.hospital_id(h).to_string(),
            HospitalPrefDoc { individual: names(p.individual.as_slice()), set_extension },
        );
    }
    InstanceDoc { couple_prefs, couples, doctor_prefs, hospital_prefs, hospitals, singles }
}

/// Canonical form: sorted keys, two-space indentation, every couple
/// preference listed in full (including the ∅-pairs), trailing newline.
pub fn serialize_instance(inst: &MarketInstance) -> String {
    let value = serde_json::to_value(to_doc(inst)).expect("instance documents are plain data");
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    text
}

/// Reads `{doctor id: hospital id | "@none"}`. Doctors not listed are unmatched.
pub fn parse_matching(inst: &MarketInstance, text: &str) -> Result<Matching, ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let map: BTreeMap<String, String> = serde_path_to_error::deserialize(de)
        .map_err(|e| ParseError::at(e.path().to_string(), e.inner().to_string()))?;
    let mut assignment = vec![None; inst.n_doctors()];
    for (d, h) in &map {
        let di = inst.doctor_by_id(d).ok_or_else(|| ParseError::at(d.clone(), format!("unknown doctor {d:?}")))?;
        assignment[di.0] = if h == NONE_TOKEN {
            None
        } else {
            Some(inst.hospital_by_id(h).ok_or_else(|| ParseError::at(d.clone(), format!("unknown hospital {h:?}")))?)
        };
    }
    Matching::from_assignment(inst, assignment).map_err(|e| ParseError::at("", e.to_string()))
}

pub fn matching_to_json(inst: &MarketInstance, mu: &Matching) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = inst
        .doctor_ixs()
        .map(|d| (inst.doctor_id(d).to_string(), serde_json::Value::from(inst.slot_id(mu.of(d)))))
        .collect();
    serde_json::Value::Object(map)
}

pub fn serialize_matching(inst: &MarketInstance, mu: &Matching) -> String {
    let mut text = serde_json::to_string_pretty(&matching_to_json(inst, mu)).expect("values serialize");
    text.push('\n');
    text
}
