//! Countable stop families presented by a generator, checked by refutation.
//!
//! A finite prefix can never certify conditions that quantify over limits, so
//! the checker here only ever answers `Violated` (with a witness) or
//! `ConsistentUpToDepth(N)`. Limit antecedents and consequents are evaluated
//! against *declared accumulations*, which are trusted inputs whose numeric
//! plausibility is sanity-checked against the generated prefix.
//!
//! The endpoint conditions `E0`/`E1` are specific to the finite constructive
//! route and are not evaluated for generator families; they always report
//! `ConsistentUpToDepth`.

use std::fmt;

use thiserror::Error;

use super::report::{Condition, ConditionReport, Location, Relation, Verdict, Witness};
use super::{StopFamily, StopFamilyError};
use crate::exactnum::{ClosedInterval, Rational};

/// Which side(s) of the declared point the intervals accumulate on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccumulationSide {
    Left,
    Right,
    Both,
}

impl AccumulationSide {
    fn has_left(self) -> bool {
        matches!(self, AccumulationSide::Left | AccumulationSide::Both)
    }

    fn has_right(self) -> bool {
        matches!(self, AccumulationSide::Right | AccumulationSide::Both)
    }
}

impl fmt::Display for AccumulationSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccumulationSide::Left => write!(f, "left"),
            AccumulationSide::Right => write!(f, "right"),
            AccumulationSide::Both => write!(f, "both"),
        }
    }
}

/// A declared accumulation of intervals at `point`, with the limit of the
/// stop values along the approach when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accumulation {
    pub point: Rational,
    pub side: AccumulationSide,
    pub value_limit: Option<Rational>,
}

/// A countable stop family given by an index-to-interval rule (1-based) plus
/// declared accumulation data.
///
/// Generators backing a finite family return `None` past the end; infinite
/// generators always return `Some`. Nothing beyond the queried prefix is ever
/// assumed.
pub struct GeneratorStopFamily {
    generator: Box<dyn Fn(u64) -> Option<ClosedInterval> + Send + Sync>,
    accumulations: Vec<Accumulation>,
}

impl GeneratorStopFamily {
    pub fn new(
        generator: impl Fn(u64) -> Option<ClosedInterval> + Send + Sync + 'static,
        accumulations: Vec<Accumulation>,
    ) -> Self {
        GeneratorStopFamily {
            generator: Box::new(generator),
            accumulations,
        }
    }

    /// Wraps a finite family, enumerated positionally; no accumulations.
    pub fn from_family(family: &StopFamily) -> Self {
        let intervals: Vec<ClosedInterval> = family.intervals().to_vec();
        GeneratorStopFamily::new(
            move |idx| intervals.get(idx as usize - 1).cloned(),
            Vec::new(),
        )
    }

    /// The interval with enumeration index `idx >= 1`, if defined.
    pub fn interval(&self, idx: u64) -> Option<ClosedInterval> {
        assert!(idx >= 1, "enumeration indices are 1-based");
        (self.generator)(idx)
    }

    pub fn accumulations(&self) -> &[Accumulation] {
        &self.accumulations
    }
}

impl fmt::Debug for GeneratorStopFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorStopFamily")
            .field("accumulations", &self.accumulations)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LazyCheckError {
    #[error(transparent)]
    Family(#[from] StopFamilyError),
    #[error("value {value} of interval {index} lies outside [0, 1]")]
    ValueOutsideUnit { index: u64, value: Rational },
    #[error("declared accumulation at {point} ({side}) contradicted within depth {depth}: {detail}")]
    InconsistentDeclaration {
        point: Rational,
        side: AccumulationSide,
        depth: u32,
        detail: String,
    },
}

struct Item {
    index: u64,
    interval: ClosedInterval,
    value: Rational,
}

/// Checks a generator family against the stop-map conditions using the first
/// `depth` generated intervals, refutation-only.
///
/// `values` maps enumeration index to stop value. Verdicts are `Violated`
/// or `ConsistentUpToDepth(depth)`; nothing is ever certified.
pub fn check_conditions_lazy(
    g: &GeneratorStopFamily,
    values: impl Fn(u64) -> Rational,
    depth: u32,
) -> Result<ConditionReport, LazyCheckError> {
    assert!(depth >= 1, "depth must be at least 1");

    let mut items: Vec<Item> = Vec::new();
    for idx in 1..=u64::from(depth) {
        if let Some(interval) = g.interval(idx) {
            let value = values(idx);
            if value.is_negative() || value > Rational::one() {
                return Err(LazyCheckError::ValueOutsideUnit { index: idx, value });
            }
            items.push(Item {
                index: idx,
                interval,
                value,
            });
        }
    }

    // The prefix must itself be a valid stop family.
    StopFamily::new(items.iter().map(|it| it.interval.clone()).collect())?;

    let mut report = ConditionReport::with_default(Verdict::ConsistentUpToDepth(depth));

    // Spatially sorted view for the order checks.
    let mut spatial: Vec<&Item> = items.iter().collect();
    spatial.sort_by(|a, b| a.interval.lo().cmp(b.interval.lo()));

    // Condition 4 across the finite cuts: values must strictly increase.
    for w in spatial.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.value >= b.value {
            let cut = Rational::midpoint(a.interval.hi(), b.interval.lo());
            report.violate(
                Condition::C4,
                Witness::new(
                    Some(Location::Cut(cut)),
                    "sup F",
                    a.value.clone(),
                    Relation::Lt,
                    b.value.clone(),
                ),
            );
            break;
        }
    }

    // Conditions 6 and 8: a stop value of 0 (resp. 1) on an interval missing
    // the endpoint leaves no room for any later interval on the far side, so
    // the violation is already decided by the prefix.
    for it in &items {
        if it.value.is_zero() && !it.interval.contains(&Rational::zero()) {
            report.violate(
                Condition::C6,
                Witness::new(
                    Some(Location::Interval(it.interval.clone())),
                    "inf F",
                    Rational::zero(),
                    Relation::Gt,
                    Rational::zero(),
                ),
            );
        }
        if it.value.is_one() && !it.interval.contains(&Rational::one()) {
            report.violate(
                Condition::C8,
                Witness::new(
                    Some(Location::Interval(it.interval.clone())),
                    "sup F",
                    Rational::one(),
                    Relation::Lt,
                    Rational::one(),
                ),
            );
        }
    }

    // Plausibility of each declaration, then the limit conditions it powers.
    for acc in g.accumulations() {
        check_accumulation(acc, &items, depth)?;

        let left_corroborated = items
            .iter()
            .any(|it| it.interval.hi() < &acc.point);
        let right_corroborated = items
            .iter()
            .any(|it| it.interval.lo() > &acc.point);

        if let Some(limit) = &acc.value_limit {
            // Condition 1: an interval starting exactly at a left
            // accumulation point has its value forced to the declared sup.
            if acc.side.has_left() && left_corroborated {
                if let Some(j) = items.iter().find(|it| it.interval.lo() == &acc.point) {
                    if &j.value != limit {
                        report.violate(
                            Condition::C1,
                            Witness::new(
                                Some(Location::Interval(j.interval.clone())),
                                "F(J)",
                                j.value.clone(),
                                Relation::Eq,
                                limit.clone(),
                            ),
                        );
                    }
                }
            }
            // Condition 2, mirrored.
            if acc.side.has_right() && right_corroborated {
                if let Some(j) = items.iter().find(|it| it.interval.hi() == &acc.point) {
                    if &j.value != limit {
                        report.violate(
                            Condition::C2,
                            Witness::new(
                                Some(Location::Interval(j.interval.clone())),
                                "F(J)",
                                j.value.clone(),
                                Relation::Eq,
                                limit.clone(),
                            ),
                        );
                    }
                }
            }
            // Condition 5: accumulation at 0 forces the value limit to 0.
            if acc.point.is_zero() && acc.side.has_right() && right_corroborated {
                if !limit.is_zero() {
                    report.violate(
                        Condition::C5,
                        Witness::new(
                            None,
                            "inf F",
                            limit.clone(),
                            Relation::Eq,
                            Rational::zero(),
                        ),
                    );
                }
            }
            // Condition 7: accumulation at 1 forces the value limit to 1.
            if acc.point.is_one() && acc.side.has_left() && left_corroborated {
                if !limit.is_one() {
                    report.violate(
                        Condition::C7,
                        Witness::new(
                            None,
                            "sup F",
                            limit.clone(),
                            Relation::Eq,
                            Rational::one(),
                        ),
                    );
                }
            }
        }
    }

    // Condition 3: a two-sided accumulation at a free cut forces the left
    // and right value limits to agree. A single `Both` declaration carries
    // one limit and is trivially consistent; a conflict needs a left and a
    // right declaration at the same point.
    let accs = g.accumulations();
    for (i, a) in accs.iter().enumerate() {
        for b in &accs[i + 1..] {
            if a.point != b.point {
                continue;
            }
            let (left, right) = match (a.side, b.side) {
                (AccumulationSide::Left, AccumulationSide::Right) => (a, b),
                (AccumulationSide::Right, AccumulationSide::Left) => (b, a),
                _ => continue,
            };
            let touched = items.iter().any(|it| {
                it.interval.lo() == &a.point || it.interval.hi() == &a.point
            });
            let left_ok = items.iter().any(|it| it.interval.hi() < &a.point);
            let right_ok = items.iter().any(|it| it.interval.lo() > &a.point);
            if touched || !left_ok || !right_ok {
                continue;
            }
            if let (Some(vl), Some(vr)) = (&left.value_limit, &right.value_limit) {
                if vl != vr {
                    report.violate(
                        Condition::C3,
                        Witness::new(
                            Some(Location::Cut(a.point.clone())),
                            "sup F",
                            vl.clone(),
                            Relation::Eq,
                            vr.clone(),
                        ),
                    );
                }
            }
        }
    }

    Ok(report)
}

/// Sanity checks one declaration against the generated prefix: no interval
/// may cover a neighborhood of the point on the declared side, intervals on
/// that side must approach the point monotonically in enumeration order, and
/// their values must stay on the correct side of the declared limit.
fn check_accumulation(acc: &Accumulation, items: &[Item], depth: u32) -> Result<(), LazyCheckError> {
    let p = &acc.point;
    let fail = |detail: String| LazyCheckError::InconsistentDeclaration {
        point: p.clone(),
        side: acc.side,
        depth,
        detail,
    };

    for it in items {
        if acc.side.has_left() && it.interval.lo() < p && it.interval.hi() >= p {
            return Err(fail(format!(
                "interval {} (index {}) covers a left neighborhood of the point",
                it.interval, it.index
            )));
        }
        if acc.side.has_right() && it.interval.lo() <= p && it.interval.hi() > p {
            return Err(fail(format!(
                "interval {} (index {}) covers a right neighborhood of the point",
                it.interval, it.index
            )));
        }
    }

    for (is_left, dist, keep) in [
        (
            true,
            Box::new(|it: &Item| p - it.interval.hi()) as Box<dyn Fn(&Item) -> Rational>,
            acc.side.has_left(),
        ),
        (
            false,
            Box::new(|it: &Item| it.interval.lo() - p),
            acc.side.has_right(),
        ),
    ] {
        if !keep {
            continue;
        }
        let side_items: Vec<&Item> = items
            .iter()
            .filter(|it| {
                if is_left {
                    it.interval.hi() < p
                } else {
                    it.interval.lo() > p
                }
            })
            .collect();

        // Monotone approach: along the enumeration, later intervals on the
        // declared side must not be farther from the point.
        let mut last: Option<Rational> = None;
        for it in &side_items {
            let d = dist(it);
            if let Some(prev) = &last {
                if &d > prev {
                    return Err(fail(format!(
                        "interval {} (index {}) is farther from the point than its predecessor",
                        it.interval, it.index
                    )));
                }
            }
            last = Some(d);
        }

        // Values on the approach side must stay strictly below (left) or
        // above (right) the declared limit.
        if let Some(limit) = &acc.value_limit {
            for it in &side_items {
                let bad = if is_left {
                    &it.value >= limit
                } else {
                    &it.value <= limit
                };
                if bad {
                    return Err(fail(format!(
                        "value {} of interval {} (index {}) is not beyond the declared limit {}",
                        it.value, it.interval, it.index, limit
                    )));
                }
            }
        }
    }

    Ok(())
}

/// Built-in generator families.
pub mod catalog {
    use super::*;

    /// The family behind the midpoint-map counterexample: intervals
    /// accumulating at `1/2` from the left, followed by `[1/2, 3/4]`.
    ///
    /// Index 1 is `[1/2, 3/4]`; index `m >= 2` is
    /// `[1/2 - 1/2^n, 1/2 - 3/2^(n+2)]` with `n = m - 1`.
    pub fn grandis() -> GeneratorStopFamily {
        let half = Rational::ratio(1, 2);
        GeneratorStopFamily::new(
            |idx| {
                let half = Rational::ratio(1, 2);
                if idx == 1 {
                    return Some(
                        ClosedInterval::new(half, Rational::ratio(3, 4)).expect("static interval"),
                    );
                }
                let n = (idx - 2) as u32 + 1;
                let lo = &half - &Rational::inv_pow2(n);
                let hi = &half - &(&Rational::from_int(3) * &Rational::inv_pow2(n + 2));
                Some(ClosedInterval::new(lo, hi).expect("family intervals are valid"))
            },
            vec![Accumulation {
                point: half.clone(),
                side: AccumulationSide::Left,
                value_limit: Some(half),
            }],
        )
    }

    /// Stop values for [`grandis`] under the midpoint map, the assignment
    /// that fails condition 1.
    pub fn grandis_midpoint_values(idx: u64) -> Rational {
        grandis()
            .interval(idx)
            .expect("grandis is total")
            .midpoint()
    }

    /// Stop values for [`grandis`] with the limit interval corrected to the
    /// declared sup `1/2`; all other values stay midpoints.
    pub fn grandis_corrected_values(idx: u64) -> Rational {
        if idx == 1 {
            Rational::ratio(1, 2)
        } else {
            grandis_midpoint_values(idx)
        }
    }

    /// Intervals `[r^(2n), c * r^(2n)]` with `c = (1 + 1/r) / 2`,
    /// accumulating at 0 from the right; requires `0 < r < 1`.
    ///
    /// For `r = 1/2` this is `[1/2^(2n), 3/2^(2n+1)]`.
    pub fn geometric_left(r: Rational) -> Option<GeneratorStopFamily> {
        if r <= Rational::zero() || r >= Rational::one() {
            return None;
        }
        let c = Rational::midpoint(&Rational::one(), &r.recip());
        Some(GeneratorStopFamily::new(
            move |idx| {
                let mut scale = Rational::one();
                for _ in 0..2 * idx {
                    scale = &scale * &r;
                }
                let hi = &c * &scale;
                Some(ClosedInterval::new(scale, hi).expect("geometric intervals are valid"))
            },
            vec![Accumulation {
                point: Rational::zero(),
                side: AccumulationSide::Right,
                value_limit: Some(Rational::zero()),
            }],
        ))
    }

    /// Looks a family up by its catalog name with default parameters.
    pub fn by_name(name: &str) -> Option<GeneratorStopFamily> {
        match name {
            "grandis" => Some(grandis()),
            "geometric-left" => geometric_left(Rational::ratio(1, 2)),
            _ => None,
        }
    }
}
