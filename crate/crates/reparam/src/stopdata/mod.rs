//! Stop families, stop maps, the condition checker, and stop-data
//! extraction.
//!
//! A *stop family* is a finite ordered family of disjoint nondegenerate
//! closed subintervals of `[0, 1]`; a *stop map* pairs it with strictly
//! increasing stop values. [`check_conditions`] decides whether a finite stop
//! map arises from a reparametrization; [`stop_data_of_reparam`] reads the
//! stop data off a piecewise-linear reparametrization. Countable families
//! presented by a generator are handled in refutation-only mode by
//! [`check_conditions_lazy`].

mod generator;
mod report;

pub use generator::{
    catalog, check_conditions_lazy, Accumulation, AccumulationSide, GeneratorStopFamily,
    LazyCheckError,
};
pub use report::{Condition, ConditionReport, Location, Relation, Verdict, Witness};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::PLReparam;
use crate::exactnum::{interval_order, ClosedInterval, IntervalOrder, Rational};

/// A finite ordered family Δ of disjoint nondegenerate closed intervals.
///
/// "Disjoint" is strict set-disjointness: intervals sharing an endpoint
/// overlap. The union of the members is the stop set D; since the members
/// are disjoint and sorted, the family itself is D's canonical
/// decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StopFamilyDoc", into = "StopFamilyDoc")]
pub struct StopFamily {
    intervals: Vec<ClosedInterval>,
}

#[derive(Serialize, Deserialize)]
struct StopFamilyDoc {
    intervals: Vec<ClosedInterval>,
}

impl From<StopFamily> for StopFamilyDoc {
    fn from(f: StopFamily) -> Self {
        StopFamilyDoc {
            intervals: f.intervals,
        }
    }
}

impl TryFrom<StopFamilyDoc> for StopFamily {
    type Error = StopFamilyError;
    fn try_from(doc: StopFamilyDoc) -> Result<Self, StopFamilyError> {
        StopFamily::new(doc.intervals)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StopFamilyError {
    #[error("degenerate interval {0} in stop family")]
    DegenerateInterval(ClosedInterval),
    #[error("intervals {0} and {1} are not strictly separated")]
    Overlap(ClosedInterval, ClosedInterval),
}

impl StopFamily {
    /// Sorts the input and validates disjointness; the spec's
    /// `make_stop_family`.
    pub fn new(mut raw: Vec<ClosedInterval>) -> Result<Self, StopFamilyError> {
        for j in &raw {
            if !j.nondegenerate() {
                return Err(StopFamilyError::DegenerateInterval(j.clone()));
            }
        }
        raw.sort_by(|a, b| a.lo().cmp(b.lo()).then_with(|| a.hi().cmp(b.hi())));
        for w in raw.windows(2) {
            if interval_order(&w[0], &w[1]) != IntervalOrder::Less {
                return Err(StopFamilyError::Overlap(w[0].clone(), w[1].clone()));
            }
        }
        Ok(StopFamily { intervals: raw })
    }

    pub fn empty() -> Self {
        StopFamily {
            intervals: Vec::new(),
        }
    }

    pub fn intervals(&self) -> &[ClosedInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// The stop set D as its canonical decomposition into disjoint closed
    /// intervals.
    pub fn stop_set(&self) -> impl Iterator<Item = &ClosedInterval> {
        self.intervals.iter()
    }

    /// Point membership in the stop set D.
    pub fn stop_set_contains(&self, t: &Rational) -> bool {
        self.intervals.iter().any(|j| j.contains(t))
    }

    /// True iff the family is exactly `{[0, 1]}`, the one family no
    /// reparametrization can realize.
    pub fn is_full_interval(&self) -> bool {
        self.intervals.len() == 1 && self.intervals[0].is_unit()
    }
}

/// A stop map F: an ordered stop family paired with strictly increasing stop
/// values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StopMapDoc", into = "StopMapDoc")]
pub struct StopMap {
    family: StopFamily,
    values: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct StopMapDoc {
    intervals: Vec<ClosedInterval>,
    values: Vec<Rational>,
}

impl From<StopMap> for StopMapDoc {
    fn from(f: StopMap) -> Self {
        StopMapDoc {
            intervals: f.family.intervals,
            values: f.values,
        }
    }
}

impl TryFrom<StopMapDoc> for StopMap {
    type Error = String;
    fn try_from(doc: StopMapDoc) -> Result<Self, String> {
        let family = StopFamily::new(doc.intervals).map_err(|e| e.to_string())?;
        StopMap::new(family, doc.values).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StopMapError {
    #[error("family has {family} intervals but {values} values")]
    LengthMismatch { family: usize, values: usize },
    #[error("values not strictly increasing at position {0}")]
    ValuesNotIncreasing(usize),
    #[error("stop value {0} lies outside [0, 1]")]
    ValueOutsideUnit(Rational),
}

impl StopMap {
    pub fn new(family: StopFamily, values: Vec<Rational>) -> Result<Self, StopMapError> {
        if family.len() != values.len() {
            return Err(StopMapError::LengthMismatch {
                family: family.len(),
                values: values.len(),
            });
        }
        for v in &values {
            if v.is_negative() || *v > Rational::one() {
                return Err(StopMapError::ValueOutsideUnit(v.clone()));
            }
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(StopMapError::ValuesNotIncreasing(i + 1));
            }
        }
        Ok(StopMap { family, values })
    }

    pub fn empty() -> Self {
        StopMap {
            family: StopFamily::empty(),
            values: Vec::new(),
        }
    }

    pub fn family(&self) -> &StopFamily {
        &self.family
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClosedInterval, &Rational)> {
        self.family.intervals.iter().zip(self.values.iter())
    }
}

/// Decides whether a finite stop map arises from a reparametrization.
///
/// For a strictly separated finite family the limit conditions 1, 2, 3, 5
/// and 7 have unsatisfiable antecedents and are reported `Vacuous`; condition
/// 4 is guaranteed by the strict increase of the values and reported
/// `Satisfied`. What remains decidable from the data: condition 6 (no
/// interval containing 0 ⇒ least value positive), condition 8 (no interval
/// containing 1 ⇒ greatest value below 1), and the endpoint conditions E0 and
/// E1. Empty sup/inf conventions: `sup ∅ = 0`, `inf ∅ = 1`.
pub fn check_conditions(map: &StopMap) -> ConditionReport {
    let mut report = ConditionReport::with_default(Verdict::Vacuous);
    report.set(Condition::C4, Verdict::Satisfied);

    let first = map.family().intervals().first();
    let last = map.family().intervals().last();
    let contains0 = first.map_or(false, |j| j.lo().is_zero());
    let contains1 = last.map_or(false, |j| j.hi().is_one());

    // Condition 6: with an interval containing 0 the remaining values are
    // forced positive by strict increase; otherwise the least value decides.
    let c6 = if contains0 {
        Verdict::Satisfied
    } else {
        match map.values().first() {
            Some(v) if v.is_zero() => Verdict::Violated(Witness::new(
                None,
                "inf F",
                Rational::zero(),
                Relation::Gt,
                Rational::zero(),
            )),
            _ => Verdict::Satisfied,
        }
    };
    report.set(Condition::C6, c6);

    let c8 = if contains1 {
        Verdict::Satisfied
    } else {
        match map.values().last() {
            Some(v) if v.is_one() => Verdict::Violated(Witness::new(
                None,
                "sup F",
                Rational::one(),
                Relation::Lt,
                Rational::one(),
            )),
            _ => Verdict::Satisfied,
        }
    };
    report.set(Condition::C8, c8);

    let e0 = match (contains0, map.values().first()) {
        (true, Some(v)) if !v.is_zero() => Verdict::Violated(Witness::new(
            Some(Location::Interval(first.unwrap().clone())),
            "F(J)",
            v.clone(),
            Relation::Eq,
            Rational::zero(),
        )),
        _ => Verdict::Satisfied,
    };
    report.set(Condition::E0, e0);

    let e1 = match (contains1, map.values().last()) {
        (true, Some(v)) if !v.is_one() => Verdict::Violated(Witness::new(
            Some(Location::Interval(last.unwrap().clone())),
            "F(J)",
            v.clone(),
            Relation::Eq,
            Rational::one(),
        )),
        _ => Verdict::Satisfied,
    };
    report.set(Condition::E1, e1);

    report
}

/// Reads the stop data off a reparametrization: the maximal nondegenerate
/// intervals on which it is constant, paired with their values.
pub fn stop_data_of_reparam(phi: &PLReparam) -> StopMap {
    let bps = phi.breakpoints();
    let mut intervals = Vec::new();
    let mut values = Vec::new();
    // Canonical form merges adjacent collinear segments, so every maximal
    // constant run is a single segment with equal y at both ends.
    for w in bps.windows(2) {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        if y0 == y1 {
            intervals.push(
                ClosedInterval::new(x0.clone(), x1.clone()).expect("breakpoints ordered in [0,1]"),
            );
            values.push(y0.clone());
        }
    }
    let family = StopFamily::new(intervals).expect("runs of a monotone map are separated");
    StopMap::new(family, values).expect("values of distinct maximal runs strictly increase")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::PLReparam;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> ClosedInterval {
        ClosedInterval::new(r(lo), r(hi)).unwrap()
    }

    fn reparam(pts: &[(&str, &str)]) -> PLReparam {
        PLReparam::new(
            pts.iter()
                .map(|(x, y)| (r(x), r(y)))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn family_sorts_input() {
        let f = StopFamily::new(vec![iv("1/2", "3/4"), iv("1/8", "1/4")]).unwrap();
        assert_eq!(f.intervals(), &[iv("1/8", "1/4"), iv("1/2", "3/4")]);
    }

    #[test]
    fn family_accepts_empty_and_unit() {
        assert!(StopFamily::new(vec![]).unwrap().is_empty());
        let f = StopFamily::new(vec![ClosedInterval::unit()]).unwrap();
        assert!(f.is_full_interval());
    }

    #[test]
    fn family_rejects_shared_endpoint() {
        let err = StopFamily::new(vec![iv("0", "1/2"), iv("1/2", "1")]).unwrap_err();
        assert_eq!(err, StopFamilyError::Overlap(iv("0", "1/2"), iv("1/2", "1")));
    }

    #[test]
    fn family_rejects_degenerate() {
        let err = StopFamily::new(vec![iv("1/3", "1/3")]).unwrap_err();
        assert_eq!(err, StopFamilyError::DegenerateInterval(iv("1/3", "1/3")));
    }

    #[test]
    fn stopmap_invariants() {
        let fam = StopFamily::new(vec![iv("1/8", "1/4"), iv("1/2", "3/4")]).unwrap();
        assert!(StopMap::new(fam.clone(), vec![r("1/2")]).is_err());
        assert!(StopMap::new(fam.clone(), vec![r("1/2"), r("1/2")]).is_err());
        assert!(StopMap::new(fam.clone(), vec![r("1/2"), r("5/4")]).is_err());
        assert!(StopMap::new(fam, vec![r("1/4"), r("1/2")]).is_ok());
    }

    #[test]
    fn check_all_clean() {
        let map = StopMap::new(
            StopFamily::new(vec![iv("1/4", "1/2")]).unwrap(),
            vec![r("1/2")],
        )
        .unwrap();
        let rep = check_conditions(&map);
        assert!(rep.ok());
        for c in [Condition::C1, Condition::C2, Condition::C3, Condition::C5, Condition::C7] {
            assert_eq!(rep.verdict(c), &Verdict::Vacuous);
        }
        for c in [Condition::C4, Condition::C6, Condition::C8, Condition::E0, Condition::E1] {
            assert_eq!(rep.verdict(c), &Verdict::Satisfied);
        }
    }

    #[test]
    fn check_condition8_violation() {
        let map = StopMap::new(
            StopFamily::new(vec![iv("1/4", "1/2")]).unwrap(),
            vec![r("1")],
        )
        .unwrap();
        let rep = check_conditions(&map);
        assert!(!rep.ok());
        match rep.verdict(Condition::C8) {
            Verdict::Violated(w) => {
                assert_eq!(w.quantity, "sup F");
                assert_eq!(w.actual, r("1"));
                assert_eq!(w.relation, Relation::Lt);
                assert_eq!(w.required, r("1"));
            }
            v => panic!("expected violation, got {v:?}"),
        }
    }

    #[test]
    fn check_condition6_violation() {
        let map = StopMap::new(
            StopFamily::new(vec![iv("1/4", "1/2")]).unwrap(),
            vec![r("0")],
        )
        .unwrap();
        let rep = check_conditions(&map);
        assert!(rep.verdict(Condition::C6).is_violated());
    }

    #[test]
    fn check_endpoint_violation() {
        let map = StopMap::new(
            StopFamily::new(vec![iv("0", "1/2")]).unwrap(),
            vec![r("1/4")],
        )
        .unwrap();
        let rep = check_conditions(&map);
        match rep.verdict(Condition::E0) {
            Verdict::Violated(w) => {
                assert_eq!(w.location, Some(Location::Interval(iv("0", "1/2"))));
                assert_eq!(w.actual, r("1/4"));
            }
            v => panic!("expected violation, got {v:?}"),
        }
        // condition 6 itself is fine: an interval contains 0
        assert_eq!(rep.verdict(Condition::C6), &Verdict::Satisfied);
    }

    #[test]
    fn check_full_interval_family_never_clean() {
        let map = StopMap::new(
            StopFamily::new(vec![ClosedInterval::unit()]).unwrap(),
            vec![r("1/2")],
        )
        .unwrap();
        let rep = check_conditions(&map);
        assert!(rep.verdict(Condition::E0).is_violated());
        assert!(rep.verdict(Condition::E1).is_violated());
    }

    #[test]
    fn check_empty_map_clean() {
        assert!(check_conditions(&StopMap::empty()).ok());
    }

    #[test]
    fn extraction_reads_constant_runs() {
        let phi = reparam(&[("0", "0"), ("1/4", "1/2"), ("1/2", "1/2"), ("1", "1")]);
        let data = stop_data_of_reparam(&phi);
        assert_eq!(data.family().intervals(), &[iv("1/4", "1/2")]);
        assert_eq!(data.values(), &[r("1/2")]);
    }

    #[test]
    fn extraction_of_identity_is_empty() {
        let phi = PLReparam::identity();
        assert!(stop_data_of_reparam(&phi).is_empty());
    }

    #[test]
    fn extraction_merges_adjacent_constant_segments() {
        let phi = reparam(&[
            ("0", "0"),
            ("1/4", "1/4"),
            ("1/2", "1/4"),
            ("3/4", "1/4"),
            ("1", "1"),
        ]);
        let data = stop_data_of_reparam(&phi);
        assert_eq!(data.family().intervals(), &[iv("1/4", "3/4")]);
        assert_eq!(data.values(), &[r("1/4")]);
    }

    #[test]
    fn extraction_passes_checker() {
        let phi = reparam(&[
            ("0", "0"),
            ("1/8", "1/4"),
            ("1/4", "1/4"),
            ("1/2", "3/8"),
            ("5/8", "3/8"),
            ("1", "1"),
        ]);
        assert!(check_conditions(&stop_data_of_reparam(&phi)).ok());
    }

    #[test]
    fn stopmap_document_round_trip() {
        let map = StopMap::new(
            StopFamily::new(vec![iv("1/4", "1/2")]).unwrap(),
            vec![r("1/2")],
        )
        .unwrap();
        let js = serde_json::to_string(&map).unwrap();
        assert_eq!(js, r#"{"intervals":[["1/4","1/2"]],"values":["1/2"]}"#);
        let back: StopMap = serde_json::from_str(&js).unwrap();
        assert_eq!(back, map);
        // invalid documents are rejected on parse
        assert!(serde_json::from_str::<StopMap>(
            r#"{"intervals":[["1/2","1/4"]],"values":["1/2"]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<StopMap>(
            r#"{"intervals":[["0","1/2"],["1/2","1"]],"values":["1/4","3/4"]}"#
        )
        .is_err());
    }
}
