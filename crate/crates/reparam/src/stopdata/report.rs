//! Verdict reporting for the stop-map conditions.

use std::fmt;

use crate::exactnum::{ClosedInterval, Rational};

/// The eight order/limit conditions plus the two endpoint conditions.
///
/// `E0` (`0 ∈ J ⇒ F(J) = 0`) and `E1` (`1 ∈ J ⇒ F(J) = 1`) are checked in
/// addition to conditions 1-8: endpoint preservation forces them, but they do
/// not follow from 1-8 under the quantifier reading used here (an interval
/// containing an endpoint is excluded from the sets the endpoint conditions
/// quantify over).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    E0,
    E1,
}

impl Condition {
    pub const ALL: [Condition; 10] = [
        Condition::C1,
        Condition::C2,
        Condition::C3,
        Condition::C4,
        Condition::C5,
        Condition::C6,
        Condition::C7,
        Condition::C8,
        Condition::E0,
        Condition::E1,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Condition::C1 => "1",
            Condition::C2 => "2",
            Condition::C3 => "3",
            Condition::C4 => "4",
            Condition::C5 => "5",
            Condition::C6 => "6",
            Condition::C7 => "7",
            Condition::C8 => "8",
            Condition::E0 => "E0",
            Condition::E1 => "E1",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}", self.label())
    }
}

/// Where a violation was observed: at an interval of the family or at a cut
/// point of the complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Interval(ClosedInterval),
    Cut(Rational),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Interval(j) => write!(f, "J={j}"),
            Location::Cut(z) => write!(f, "z={z}"),
        }
    }
}

/// Required relation between the observed and required quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Lt,
    Gt,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Gt => ">",
        }
    }
}

/// Both sides of a failed implication: the quantity that came out wrong, the
/// value it took, and the value/relation the condition demanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub location: Option<Location>,
    pub quantity: &'static str,
    pub actual: Rational,
    pub relation: Relation,
    pub required: Rational,
}

impl Witness {
    pub fn new(
        location: Option<Location>,
        quantity: &'static str,
        actual: Rational,
        relation: Relation,
        required: Rational,
    ) -> Self {
        Witness {
            location,
            quantity,
            actual,
            relation,
            required,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(loc) = &self.location {
            write!(f, "at {loc} ")?;
        }
        write!(
            f,
            "{} = {}, expected {} {}",
            self.quantity,
            self.actual,
            self.relation.symbol(),
            self.required
        )
    }
}

/// Per-condition verdict.
///
/// `Vacuous` marks conditions whose antecedent cannot hold for the input
/// class (a strictly separated finite family has no accumulation, so the
/// limit conditions never fire). `ConsistentUpToDepth` is the strongest
/// positive verdict a generator family can earn: the first `N` intervals
/// refute nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Vacuous,
    Violated(Witness),
    ConsistentUpToDepth(u32),
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Satisfied => write!(f, "OK"),
            Verdict::Vacuous => write!(f, "VACUOUS"),
            Verdict::Violated(w) => write!(f, "VIOLATED {w}"),
            Verdict::ConsistentUpToDepth(n) => write!(f, "CONSISTENT up to depth {n}"),
        }
    }
}

/// Verdicts for conditions 1-8, E0, E1, in that fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    verdicts: Vec<(Condition, Verdict)>,
}

impl ConditionReport {
    pub(crate) fn with_default(default: Verdict) -> Self {
        ConditionReport {
            verdicts: Condition::ALL
                .iter()
                .map(|c| (*c, default.clone()))
                .collect(),
        }
    }

    pub(crate) fn set(&mut self, c: Condition, v: Verdict) {
        let slot = self
            .verdicts
            .iter_mut()
            .find(|(cc, _)| *cc == c)
            .expect("all conditions present");
        slot.1 = v;
    }

    /// Records a violation unless one is already present for `c`; the first
    /// witness found is kept, so reports are deterministic.
    pub(crate) fn violate(&mut self, c: Condition, w: Witness) {
        if !self.verdict(c).is_violated() {
            self.set(c, Verdict::Violated(w));
        }
    }

    pub fn verdict(&self, c: Condition) -> &Verdict {
        &self
            .verdicts
            .iter()
            .find(|(cc, _)| *cc == c)
            .expect("all conditions present")
            .1
    }

    pub fn iter(&self) -> impl Iterator<Item = (Condition, &Verdict)> {
        self.verdicts.iter().map(|(c, v)| (*c, v))
    }

    pub fn violations(&self) -> impl Iterator<Item = (Condition, &Witness)> {
        self.verdicts.iter().filter_map(|(c, v)| match v {
            Verdict::Violated(w) => Some((*c, w)),
            _ => None,
        })
    }

    /// True iff no condition is violated.
    pub fn ok(&self) -> bool {
        !self.verdicts.iter().any(|(_, v)| v.is_violated())
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, v) in self.iter() {
            writeln!(f, "{c}: {v}")?;
        }
        Ok(())
    }
}
