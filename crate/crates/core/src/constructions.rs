//! The three worked examples and builders for the non-existence families.
//!
//! Every builder emits a complete market with `Σκ = |D|`, hospitals named
//! `h1, h2, …` and rank-vector set extensions. Doctors that only pad the
//! market are named `filler-1, filler-2, …`; their lists start with their
//! assigned top hospital and continue by hospital index.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{check_rf, check_rvt_all, check_srf, couple_preference_is_valid, Witness};
use crate::market::{HospitalIx, InstanceError, MarketBuilder, MarketInstance, SetExtensionSpec, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unrealizable shape: {0}")]
    Shape(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

pub fn example1() -> MarketInstance {
    MarketBuilder::new()
        .hospital("h1", 2)
        .hospital("h2", 2)
        .single("s1", &["h2", "h1"])
        .single("s2", &["h1", "h2"])
        .couple("f", "m", &["h2", "h1"], &["h1", "h2"], Some(&[("h1", "h1"), ("h2", "h1"), ("h2", "h2"), ("h1", "h2")]))
        .common_ranking(&["f", "s1", "s2", "m"], SetExtensionSpec::RankLex)
        .build()
        .expect("example 1 is well formed")
}

const TABLE_PAIRS: [(&str, &str); 9] = [
    ("h1", "h2"),
    ("h1", "h1"),
    ("h1", "h3"),
    ("h3", "h3"),
    ("h3", "h2"),
    ("h3", "h1"),
    ("h2", "h2"),
    ("h2", "h1"),
    ("h2", "h3"),
];

fn examples_two_three(h3_ranking: &[&str]) -> MarketInstance {
    MarketBuilder::new()
        .hospital("h1", 2)
        .hospital("h2", 2)
        .hospital("h3", 2)
        .single("s1", &["h2", "h1", "h3"])
        .single("s2", &["h3", "h1", "h2"])
        .single("s3", &["h1", "h2", "h3"])
        .single("s4", &["h2", "h1", "h3"])
        .couple("f", "m", &["h1", "h3", "h2"], &["h2", "h1", "h3"], Some(&TABLE_PAIRS))
        .ranking("h1", &["s3", "s4", "s1", "f", "m", "s2"], SetExtensionSpec::RankLex)
        .ranking("h2", &["s4", "s3", "f", "m", "s1", "s2"], SetExtensionSpec::RankLex)
        .ranking("h3", h3_ranking, SetExtensionSpec::RankLex)
        .build()
        .expect("examples 2 and 3 are well formed")
}

pub fn example2() -> MarketInstance {
    examples_two_three(&["s3", "s4", "m", "f", "s1", "s2"])
}

/// Example 2 with `h3` ranking f above m.
pub fn example3() -> MarketInstance {
    examples_two_three(&["s3", "s4", "f", "m", "s1", "s2"])
}

/// A couple's individual lists and its order over matched pairs, by
/// hospital id. Pairs with `@none` may be omitted; they are appended in the
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupleBundle {
    pub f_prefs: Vec<String>,
    pub m_prefs: Vec<String>,
    pub pairs: Vec<(String, String)>,
}

impl CoupleBundle {
    pub fn new(f_prefs: &[&str], m_prefs: &[&str], pairs: &[(&str, &str)]) -> Self {
        CoupleBundle {
            f_prefs: f_prefs.iter().map(|s| s.to_string()).collect(),
            m_prefs: m_prefs.iter().map(|s| s.to_string()).collect(),
            pairs: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }

    /// The couple alone in a market with the given capacities.
    fn probe(&self, capacities: &[usize]) -> Result<MarketInstance, ConstructionError> {
        let ids = hospital_ids(capacities.len());
        let mut b = MarketBuilder::new();
        for (id, &k) in ids.iter().zip(capacities) {
            b = b.hospital(id, k);
        }
        let pairs = str_pairs(&self.pairs);
        let inst = b
            .couple("f", "m", &strs(&self.f_prefs), &strs(&self.m_prefs), Some(&pairs))
            .common_ranking(&["f", "m"], SetExtensionSpec::RankLex)
            .build()?;
        if !couple_preference_is_valid(inst.couple_pref(0), inst.n_hospitals()) {
            return Err(ConstructionError::Precondition(
                "the couple order must list every matched pair before any pair with @none".into(),
            ));
        }
        Ok(inst)
    }
}

fn hospital_ids(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("h{i}")).collect()
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn str_pairs(v: &[(String, String)]) -> Vec<(&str, &str)> {
    v.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
}

fn check_capacities(capacities: &[usize], min_hospitals: usize) -> Result<(), ConstructionError> {
    if capacities.len() < min_hospitals {
        return Err(ConstructionError::Shape(format!("need at least {min_hospitals} hospitals")));
    }
    if capacities.iter().any(|&k| k < 2) {
        return Err(ConstructionError::Shape("every capacity must be at least 2".into()));
    }
    Ok(())
}

/// `first`, then `second` if given, then the remaining hospitals by index.
fn list_from(n: usize, first: usize, second: Option<usize>) -> Vec<String> {
    let mut order = vec![first];
    order.extend(second);
    let rest: Vec<usize> = (0..n).filter(|h| !order.contains(h)).collect();
    order.extend(rest);
    order.into_iter().map(|h| format!("h{}", h + 1)).collect()
}

/// Top hospitals for fillers: `counts[h]` fillers per hospital, by index.
fn filler_tops(counts: &[usize]) -> Vec<usize> {
    counts.iter().enumerate().flat_map(|(h, &c)| std::iter::repeat_n(h, c)).collect()
}

struct Doctor {
    id: String,
    prefs: Vec<String>,
}

type PairOrder = Option<Vec<(String, String)>>;

/// Collects doctors and couples, then hands them to [`MarketBuilder`].
#[derive(Default)]
struct Assembly {
    singles: Vec<Doctor>,
    couples: Vec<(Doctor, Doctor, PairOrder)>,
}

impl Assembly {
    fn build(
        self,
        capacities: &[usize],
        rankings: &[Vec<String>],
    ) -> Result<MarketInstance, ConstructionError> {
        let ids = hospital_ids(capacities.len());
        let mut b = MarketBuilder::new();
        for (id, &k) in ids.iter().zip(capacities) {
            b = b.hospital(id, k);
        }
        for d in &self.singles {
            b = b.single(&d.id, &strs(&d.prefs));
        }
        for (f, m, pairs) in &self.couples {
            let pairs = pairs.as_ref().map(|p| str_pairs(p));
            b = b.couple(&f.id, &m.id, &strs(&f.prefs), &strs(&m.prefs), pairs.as_deref());
        }
        for (id, order) in ids.iter().zip(rankings) {
            b = b.ranking(id, &strs(order), SetExtensionSpec::RankLex);
        }
        Ok(b.build()?)
    }
}

fn filler_name(k: usize) -> String {
    format!("filler-{k}")
}

/// Parameters for [`build_rf_violation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RfViolationSpec {
    pub capacities: Vec<usize>,
    /// Must satisfy RVT and violate RF.
    pub couple: CoupleBundle,
    /// How many pairs of consecutive fillers are joined into responsive couples.
    #[serde(default)]
    pub filler_couples: usize,
}

impl Default for RfViolationSpec {
    fn default() -> Self {
        RfViolationSpec {
            capacities: vec![2, 2],
            couple: CoupleBundle::new(
                &["h2", "h1"],
                &["h1", "h2"],
                &[("h1", "h1"), ("h2", "h1"), ("h2", "h2"), ("h1", "h2")],
            ),
            filler_couples: 0,
        }
    }
}

/// Builds a market with a common ranking in which the given couple is
/// pinned at the bottom together with two singles that compete for the
/// hospitals of its RF violation. The market has no stable matching.
pub fn build_rf_violation(spec: &RfViolationSpec) -> Result<MarketInstance, ConstructionError> {
    check_capacities(&spec.capacities, 2)?;
    let probe = spec.couple.probe(&spec.capacities)?;
    if !check_rvt_all(&probe).holds {
        return Err(ConstructionError::Precondition("the couple order must satisfy RVT".into()));
    }
    let (h1, h2) = match check_rf(&probe).witness {
        Some(Witness::LiftedPair { together, other, .. }) => (together.0, other.0),
        _ => return Err(ConstructionError::Precondition("the couple order must violate RF".into())),
    };
    let n = spec.capacities.len();
    let mut counts = spec.capacities.clone();
    counts[h1] -= 2;
    counts[h2] -= 2;
    let tops = filler_tops(&counts);
    let fillers = fillers_with_couples(&tops, n, spec.filler_couples)?;

    let mut asm = Assembly::default();
    let mut ranking: Vec<String> = Vec::new();
    fillers.place(&mut asm, &mut ranking);
    asm.singles.push(Doctor { id: "d1".into(), prefs: list_from(n, h1, None) });
    asm.singles.push(Doctor { id: "d2".into(), prefs: list_from(n, h2, None) });
    asm.couples.push((
        Doctor { id: "f".into(), prefs: spec.couple.f_prefs.clone() },
        Doctor { id: "m".into(), prefs: spec.couple.m_prefs.clone() },
        Some(spec.couple.pairs.clone()),
    ));
    ranking.extend(["f", "d1", "d2", "m"].map(String::from));
    asm.build(&spec.capacities, &vec![ranking; n])
}

/// Filler doctors in ranking order; consecutive pairs may be couples.
struct Fillers {
    doctors: Vec<Doctor>,
    couples: usize,
}

impl Fillers {
    fn place(self, asm: &mut Assembly, ranking: &mut Vec<String>) {
        ranking.extend(self.doctors.iter().map(|d| d.id.clone()));
        let mut it = self.doctors.into_iter();
        for _ in 0..self.couples {
            let f = it.next().expect("counted");
            let m = it.next().expect("counted");
            asm.couples.push((f, m, None));
        }
        asm.singles.extend(it);
    }
}

fn fillers_with_couples(tops: &[usize], n: usize, couples: usize) -> Result<Fillers, ConstructionError> {
    if 2 * couples > tops.len() {
        return Err(ConstructionError::Shape(format!(
            "{couples} filler couples need {} fillers, the capacities leave {}",
            2 * couples,
            tops.len()
        )));
    }
    let doctors = tops
        .iter()
        .enumerate()
        .map(|(i, &h)| Doctor { id: filler_name(i + 1), prefs: list_from(n, h, None) })
        .collect();
    Ok(Fillers { doctors, couples })
}

/// Parameters for [`build_scpi_violation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScpiViolationSpec {
    pub capacities: Vec<usize>,
    /// The common ranking, best first: `"s"` for a single doctor, `"c<k>"`
    /// for a member of couple `k` (its first occurrence is the couple's f).
    pub ranking: Vec<String>,
}

impl Default for ScpiViolationSpec {
    fn default() -> Self {
        ScpiViolationSpec { capacities: vec![2, 2], ranking: ["c0", "s", "s", "c0"].map(String::from).to_vec() }
    }
}

/// Which shape of SCPI failure a ranking skeleton exhibits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScpiShape {
    /// m is not last, someone sits between f and m, and some hospital has
    /// no more seats than there are doctors above m.
    MemberNotLast,
    /// m is last with at least two doctors between f and m.
    MemberLast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Single,
    Couple(usize),
}

fn parse_skeleton(ranking: &[String]) -> Result<Vec<Token>, ConstructionError> {
    let tokens: Vec<Token> = ranking
        .iter()
        .map(|t| match t.as_str() {
            "s" => Ok(Token::Single),
            _ => t
                .strip_prefix('c')
                .and_then(|k| k.parse().ok())
                .map(Token::Couple)
                .ok_or_else(|| ConstructionError::Shape(format!("ranking entry {t:?} is neither \"s\" nor \"c<k>\""))),
        })
        .collect::<Result<_, _>>()?;
    let mut seen: Vec<usize> = tokens.iter().filter_map(|t| if let Token::Couple(k) = t { Some(*k) } else { None }).collect();
    seen.sort_unstable();
    for chunk in seen.chunk_by(|a, b| a == b) {
        if chunk.len() != 2 {
            return Err(ConstructionError::Shape(format!("couple c{} must appear exactly twice", chunk[0])));
        }
    }
    Ok(tokens)
}

/// Positions `(f, m)` of each couple in the skeleton, ordered by m.
fn couple_positions(tokens: &[Token]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if let Token::Couple(k) = t {
            if let Some(j) = tokens[..i].iter().position(|u| u == &Token::Couple(*k)) {
                out.push((j, i));
            }
        }
    }
    out
}

/// Finds the first couple (by m's position) violating SCPI and its shape.
pub fn scpi_shape(spec: &ScpiViolationSpec) -> Result<Option<(ScpiShape, usize, usize)>, ConstructionError> {
    let tokens = parse_skeleton(&spec.ranking)?;
    let nd = tokens.len();
    for (f, m) in couple_positions(&tokens) {
        let between = m - f - 1;
        if m + 1 != nd {
            if between > 0 && spec.capacities.iter().any(|&k| m >= k) {
                return Ok(Some((ScpiShape::MemberNotLast, f, m)));
            }
        } else if between > 1 {
            return Ok(Some((ScpiShape::MemberLast, f, m)));
        }
    }
    Ok(None)
}

/// Builds an RVT market over the given common-ranking skeleton with no
/// stable matching. The violating couple tops the two hospitals `h1`, `h2`
/// crosswise, ranks `(h1, h1)` first and is otherwise responsive; two
/// singles mirror the couple's top choices.
pub fn build_scpi_violation(spec: &ScpiViolationSpec) -> Result<MarketInstance, ConstructionError> {
    check_capacities(&spec.capacities, 2)?;
    let tokens = parse_skeleton(&spec.ranking)?;
    let total: usize = spec.capacities.iter().sum();
    if total != tokens.len() {
        return Err(ConstructionError::Shape(format!(
            "the ranking has {} doctors but the capacities sum to {total}",
            tokens.len()
        )));
    }
    let n = spec.capacities.len();
    let Some((shape, fpos, mpos)) = scpi_shape(spec)? else {
        return Err(ConstructionError::Precondition("the ranking satisfies SCPI".into()));
    };
    let singles_in = |range: std::ops::Range<usize>| -> Vec<usize> {
        range.filter(|&i| tokens[i] == Token::Single).collect()
    };
    let (d1, d2, h1) = match shape {
        ScpiShape::MemberNotLast => {
            let d1 = *singles_in(fpos + 1..mpos)
                .first()
                .ok_or_else(|| ConstructionError::Shape("no single doctor between f and m".into()))?;
            let d2 = *singles_in(mpos + 1..tokens.len())
                .first()
                .ok_or_else(|| ConstructionError::Shape("no single doctor below m".into()))?;
            let h1 = spec.capacities.iter().position(|&k| mpos >= k).expect("shape requires such a hospital");
            (d1, d2, h1)
        }
        ScpiShape::MemberLast => {
            if tokens[fpos + 1] != Token::Single || tokens[fpos + 2] != Token::Single {
                return Err(ConstructionError::Shape("the two doctors right below f must be singles".into()));
            }
            (fpos + 1, fpos + 2, 0)
        }
    };
    let h2 = (0..n).find(|&h| h != h1).expect("at least two hospitals");

    let mut counts = spec.capacities.clone();
    counts[h1] -= 2;
    counts[h2] -= 2;
    let mut tops = filler_tops(&counts).into_iter();
    let mut names = vec![String::new(); tokens.len()];
    let mut prefs = vec![Vec::new(); tokens.len()];
    let mut next_filler = 0;
    for i in 0..tokens.len() {
        let (name, top, second) = if i == fpos {
            ("f".to_string(), h2, Some(h1))
        } else if i == mpos {
            ("m".to_string(), h1, Some(h2))
        } else if i == d1 {
            ("d1".to_string(), h1, Some(h2))
        } else if i == d2 {
            ("d2".to_string(), h2, Some(h1))
        } else {
            next_filler += 1;
            (filler_name(next_filler), tops.next().expect("counted"), None)
        };
        names[i] = name;
        prefs[i] = list_from(n, top, second);
    }

    let mut asm = Assembly::default();
    for (i, t) in tokens.iter().enumerate() {
        match *t {
            Token::Single => asm.singles.push(Doctor { id: names[i].clone(), prefs: prefs[i].clone() }),
            Token::Couple(_) => {}
        }
    }
    for (f, m) in couple_positions(&tokens) {
        let pairs = (f == fpos).then(|| lifted_responsive(n, h1, h2));
        asm.couples.push((
            Doctor { id: names[f].clone(), prefs: prefs[f].clone() },
            Doctor { id: names[m].clone(), prefs: prefs[m].clone() },
            pairs,
        ));
    }
    asm.build(&spec.capacities, &vec![names; n])
}

/// Matched pairs for f listing `h2, h1, …` and m listing `h1, h2, …`, in a
/// responsive order with `(h1, h1)` moved to the top.
fn lifted_responsive(n: usize, h1: usize, h2: usize) -> Vec<(String, String)> {
    let rank_of = |list: &[String], h: usize| list.iter().position(|x| *x == format!("h{}", h + 1)).unwrap() + 1;
    let pf = list_from(n, h2, Some(h1));
    let pm = list_from(n, h1, Some(h2));
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    pairs.sort_by_key(|&(a, b)| {
        let (ra, rb) = (rank_of(&pf, a), rank_of(&pm, b));
        (ra.max(rb), ra + rb, ra)
    });
    pairs.retain(|&p| p != (h1, h1));
    pairs.insert(0, (h1, h1));
    pairs.into_iter().map(|(a, b)| (format!("h{}", a + 1), format!("h{}", b + 1))).collect()
}

/// Parameters for [`build_srf_violation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrfViolationSpec {
    pub capacities: Vec<usize>,
    /// Must satisfy RF and violate SRF; restricted to the three hospitals
    /// of its SRF witness, its order must follow the nine-pair pattern of
    /// [`example3`].
    pub couple: CoupleBundle,
    /// How many pairs of consecutive fillers with the same top hospital
    /// are joined into responsive couples.
    #[serde(default)]
    pub filler_couples: usize,
}

impl Default for SrfViolationSpec {
    fn default() -> Self {
        SrfViolationSpec {
            capacities: vec![2, 2, 2],
            couple: CoupleBundle::new(&["h1", "h3", "h2"], &["h2", "h1", "h3"], &TABLE_PAIRS),
            filler_couples: 0,
        }
    }
}

/// Embeds the [`example3`] pattern on the three hospitals of the couple's
/// SRF violation. Every other seat goes to a filler ranked above the
/// pattern doctors that tops the seat's hospital.
pub fn build_srf_violation(spec: &SrfViolationSpec) -> Result<MarketInstance, ConstructionError> {
    check_capacities(&spec.capacities, 3)?;
    let probe = spec.couple.probe(&spec.capacities)?;
    if !check_rvt_all(&probe).holds {
        return Err(ConstructionError::Precondition("the couple order must satisfy RVT".into()));
    }
    let srf = check_srf(&probe).map_err(|_| ConstructionError::Precondition("the couple order must satisfy RF".into()))?;
    let (h3, h2) = match srf.witness {
        Some(Witness::LiftedPair { together, other, .. }) => (together.0, other.0),
        _ => return Err(ConstructionError::Precondition("the couple order must violate SRF".into())),
    };
    let pf = probe.doctor_pref(probe.couples()[0].f);
    let h1 = pf.top().expect("non-empty").0;
    let cp = probe.couple_pref(0);
    let map = |s: &str| -> Slot {
        Some(HospitalIx(match s {
            "h1" => h1,
            "h2" => h2,
            _ => h3,
        }))
    };
    let want: Vec<_> = TABLE_PAIRS.iter().map(|(a, b)| (map(a), map(b))).collect();
    let three = [h1, h2, h3];
    let got: Vec<_> = cp
        .order()
        .iter()
        .copied()
        .filter(|(a, b)| {
            let inside = |s: &Slot| s.is_some_and(|h| three.contains(&h.0));
            inside(a) && inside(b)
        })
        .collect();
    if got != want {
        return Err(ConstructionError::Shape(
            "restricted to its witness hospitals the couple order must follow the example pattern".into(),
        ));
    }

    let n = spec.capacities.len();
    let mut counts = spec.capacities.clone();
    for h in three {
        counts[h] -= 2;
    }
    let tops = filler_tops(&counts);
    // filler couples pair consecutive fillers sharing a top hospital
    let mut pairable = Vec::new();
    let mut i = 0;
    while i + 1 < tops.len() {
        if tops[i] == tops[i + 1] {
            pairable.push(i);
            i += 2;
        } else {
            i += 1;
        }
    }
    if spec.filler_couples > pairable.len() {
        return Err(ConstructionError::Shape(format!(
            "only {} filler couples with a shared top hospital fit these capacities",
            pairable.len()
        )));
    }
    let coupled: Vec<usize> = pairable[..spec.filler_couples].to_vec();

    let hname = |h: usize| format!("h{}", h + 1);
    let with_rest = |order: &[usize]| -> Vec<String> {
        let mut v: Vec<usize> = order.to_vec();
        v.extend((0..n).filter(|h| !order.contains(h)));
        v.into_iter().map(hname).collect()
    };
    let fillers: Vec<Doctor> =
        tops.iter().enumerate().map(|(i, &h)| Doctor { id: filler_name(i + 1), prefs: list_from(n, h, None) }).collect();

    let mut asm = Assembly::default();
    let mut skip = vec![false; fillers.len()];
    for &i in &coupled {
        skip[i] = true;
        skip[i + 1] = true;
    }
    let mut pool: Vec<Option<Doctor>> = fillers.into_iter().map(Some).collect();
    for (i, slot) in pool.iter_mut().enumerate() {
        if !skip[i] {
            asm.singles.push(slot.take().expect("present"));
        }
    }
    let pattern_singles = [
        ("d1", [h2, h1, h3]),
        ("d2", [h3, h1, h2]),
        ("d3", [h1, h2, h3]),
        ("d4", [h2, h1, h3]),
    ];
    for (id, order) in pattern_singles {
        asm.singles.push(Doctor { id: id.into(), prefs: with_rest(&order) });
    }
    for &i in &coupled {
        let f = pool[i].take().expect("present");
        let m = pool[i + 1].take().expect("present");
        asm.couples.push((f, m, None));
    }
    asm.couples.push((
        Doctor { id: "f".into(), prefs: spec.couple.f_prefs.clone() },
        Doctor { id: "m".into(), prefs: spec.couple.m_prefs.clone() },
        Some(spec.couple.pairs.clone()),
    ));

    let pattern_at = |h: usize| -> Vec<&str> {
        if h == h1 {
            vec!["d3", "d4", "d1", "f", "m", "d2"]
        } else if h == h2 {
            vec!["d4", "d3", "f", "m", "d1", "d2"]
        } else if h == h3 {
            vec!["d3", "d4", "f", "m", "d1", "d2"]
        } else {
            vec!["f", "m", "d1", "d2", "d3", "d4"]
        }
    };
    let rankings: Vec<Vec<String>> = (0..n)
        .map(|h| {
            let own = tops.iter().enumerate().filter(|&(_, &t)| t == h).map(|(i, _)| filler_name(i + 1));
            let others = tops.iter().enumerate().filter(|&(_, &t)| t != h).map(|(i, _)| filler_name(i + 1));
            own.chain(others).chain(pattern_at(h).into_iter().map(String::from)).collect()
        })
        .collect();
    asm.build(&spec.capacities, &rankings)
}

/// A named family with its parameters, for the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionSpec {
    Example1,
    Example2,
    Example3,
    RfViolation(RfViolationSpec),
    ScpiViolation(ScpiViolationSpec),
    SrfViolation(SrfViolationSpec),
}

impl ConstructionSpec {
    pub const FAMILIES: [&'static str; 6] =
        ["example1", "example2", "example3", "rf-violation", "scpi-violation", "srf-violation"];

    /// The family with its default parameters, or parsed from `params`.
    pub fn from_family(family: &str, params: Option<serde_json::Value>) -> Result<Self, String> {
        fn parse<T: for<'de> Deserialize<'de> + Default>(p: Option<serde_json::Value>) -> Result<T, String> {
            match p {
                None => Ok(T::default()),
                Some(v) => serde_json::from_value(v).map_err(|e| e.to_string()),
            }
        }
        match family {
            "example1" => Ok(ConstructionSpec::Example1),
            "example2" => Ok(ConstructionSpec::Example2),
            "example3" => Ok(ConstructionSpec::Example3),
            "rf-violation" => parse(params).map(ConstructionSpec::RfViolation),
            "scpi-violation" => parse(params).map(ConstructionSpec::ScpiViolation),
            "srf-violation" => parse(params).map(ConstructionSpec::SrfViolation),
            other => Err(format!("unknown family {other:?}; expected one of {}", Self::FAMILIES.join(", "))),
        }
    }

    pub fn build(&self) -> Result<MarketInstance, ConstructionError> {
        match self {
            ConstructionSpec::Example1 => Ok(example1()),
            ConstructionSpec::Example2 => Ok(example2()),
            ConstructionSpec::Example3 => Ok(example3()),
            ConstructionSpec::RfViolation(s) => build_rf_violation(s),
            ConstructionSpec::ScpiViolation(s) => build_scpi_violation(s),
            ConstructionSpec::SrfViolation(s) => build_srf_violation(s),
        }
    }
}
