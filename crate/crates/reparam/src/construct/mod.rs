//! Construction of piecewise-linear reparametrizations.
//!
//! [`build_from_stopmap`] realizes a validated finite stop map directly:
//! constant on each stop interval, linear on each gap. [`dyadic_build`]
//! realizes a bare stop family by the dyadic induction, assigning each
//! interval a stop value of the form `l / 2^k`; its approximants
//! [`phi_k`] form a uniformly Cauchy sequence with
//! `sup |φ_k − φ_{k+1}| < 1/2^k`, and for a finite family the limit is
//! reached exactly at a finite depth.

mod dyadic;
mod lazy;

pub use dyadic::{
    dyadic_assignment, dyadic_build, dyadic_build_with_trace, phi_k, AssignedObject,
    AssignmentRecord, DyadicAssignment,
};
pub use lazy::{evaluate_lazy, FiniteFamilyOracle, GapOracle, LazyEvalError, OracleAnswer};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::Rational;
use crate::stopdata::{check_conditions, ConditionReport, StopMap};

/// A piecewise-linear reparametrization: a weakly increasing continuous
/// self-map of `[0, 1]` fixing the endpoints, held in canonical form (no
/// breakpoint is collinear with its neighbours), so function equality is
/// breakpoint-sequence equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PLReparamDoc", into = "PLReparamDoc")]
pub struct PLReparam {
    breakpoints: Vec<(Rational, Rational)>,
}

#[derive(Serialize, Deserialize)]
struct PLReparamDoc {
    breakpoints: Vec<(Rational, Rational)>,
}

impl From<PLReparam> for PLReparamDoc {
    fn from(phi: PLReparam) -> Self {
        PLReparamDoc {
            breakpoints: phi.breakpoints,
        }
    }
}

impl TryFrom<PLReparamDoc> for PLReparam {
    type Error = ReparamError;
    fn try_from(doc: PLReparamDoc) -> Result<Self, ReparamError> {
        PLReparam::new(doc.breakpoints)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReparamError {
    #[error("a reparametrization needs at least the two endpoint breakpoints")]
    TooFewBreakpoints,
    #[error("breakpoints must start at (0,0) and end at (1,1)")]
    EndpointsNotPreserved,
    #[error("breakpoint x-coordinates must increase strictly at position {0}")]
    XNotIncreasing(usize),
    #[error("breakpoint y-coordinates must not decrease at position {0}")]
    YDecreasing(usize),
}

impl PLReparam {
    /// Validates and canonicalizes a breakpoint sequence.
    pub fn new(breakpoints: Vec<(Rational, Rational)>) -> Result<Self, ReparamError> {
        if breakpoints.len() < 2 {
            return Err(ReparamError::TooFewBreakpoints);
        }
        let first = breakpoints.first().unwrap();
        let last = breakpoints.last().unwrap();
        if !(first.0.is_zero() && first.1.is_zero() && last.0.is_one() && last.1.is_one()) {
            return Err(ReparamError::EndpointsNotPreserved);
        }
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(ReparamError::XNotIncreasing(i + 1));
            }
            if w[0].1 > w[1].1 {
                return Err(ReparamError::YDecreasing(i + 1));
            }
        }
        Ok(PLReparam {
            breakpoints: canonicalize(breakpoints),
        })
    }

    pub fn identity() -> Self {
        PLReparam {
            breakpoints: vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one()),
            ],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.breakpoints.len() == 2 && self.breakpoints[0].1.is_zero()
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    /// Exact evaluation by linear interpolation between the bracketing
    /// breakpoints.
    pub fn evaluate(&self, t: &Rational) -> Result<Rational, EvalError> {
        if t.is_negative() || *t > Rational::one() {
            return Err(EvalError::OutOfDomain(t.clone()));
        }
        // last i with x_i <= t
        let i = self.breakpoints.partition_point(|(x, _)| x <= t) - 1;
        let (x0, y0) = &self.breakpoints[i];
        if x0 == t {
            return Ok(y0.clone());
        }
        let (x1, y1) = &self.breakpoints[i + 1];
        Ok(y0 + &(&(&(y1 - y0) * &(t - x0)) / &(x1 - x0)))
    }

    /// Leftmost preimage: the minimal `x` with `φ(x) = u`.
    pub(crate) fn invert_left(&self, u: &Rational) -> Rational {
        debug_assert!(!u.is_negative() && *u <= Rational::one());
        // first breakpoint reaching u, if any
        if let Some((x, _)) = self.breakpoints.iter().find(|(_, y)| y == u) {
            return x.clone();
        }
        let i = self.breakpoints.partition_point(|(_, y)| y < u) - 1;
        let (x0, y0) = &self.breakpoints[i];
        let (x1, y1) = &self.breakpoints[i + 1];
        x0 + &(&(&(x1 - x0) * &(u - y0)) / &(y1 - y0))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation point {0} lies outside [0, 1]")]
    OutOfDomain(Rational),
}

/// Removes breakpoints collinear with their neighbours (exact test, no
/// division).
fn canonicalize(points: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let b = &out[out.len() - 1];
            let a = &out[out.len() - 2];
            let lhs = &(&b.1 - &a.1) * &(&p.0 - &b.0);
            let rhs = &(&p.1 - &b.1) * &(&b.0 - &a.0);
            if lhs == rhs {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// An enumeration `j` of a stop family: a bijection from `1..=n` onto the
/// family, stored as 0-based positions into the sorted interval sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration(Vec<usize>);

impl Enumeration {
    /// Left-to-right enumeration, the default.
    pub fn positional(n: usize) -> Self {
        Enumeration((0..n).collect())
    }

    /// From 0-based positions; must be a permutation of `0..n`.
    pub fn new(positions: Vec<usize>) -> Result<Self, ConstructError> {
        let n = positions.len();
        let mut seen = vec![false; n];
        for &p in &positions {
            if p >= n || seen[p] {
                return Err(ConstructError::InvalidEnumeration(n));
            }
            seen[p] = true;
        }
        Ok(Enumeration(positions))
    }

    /// From 1-based positions, as written in documents and on the command
    /// line.
    pub fn from_one_based(positions: Vec<usize>) -> Result<Self, ConstructError> {
        let n = positions.len();
        let shifted: Vec<usize> = positions
            .into_iter()
            .map(|p| p.wrapping_sub(1))
            .collect();
        if shifted.iter().any(|&p| p >= n) {
            return Err(ConstructError::InvalidEnumeration(n));
        }
        Enumeration::new(shifted)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 0-based family position of `j(m)` for the 1-based index `m`.
    pub fn position(&self, m: u64) -> usize {
        self.0[(m - 1) as usize]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("stop map violates conditions: {}", format_violations(.0))]
    InvalidStopMap(Box<ConditionReport>),
    #[error("the family {{[0,1]}} admits no reparametrization")]
    FullIntervalFamily,
    #[error("enumeration is not a permutation of 1..={0}")]
    InvalidEnumeration(usize),
    #[error("enumeration has {got} entries for a family of {want} intervals")]
    EnumerationLength { got: usize, want: usize },
    #[error("dyadic induction exceeded the depth bound {bound}")]
    DepthBoundExceeded { bound: usize },
    #[error("assignment depth {0} is too large to materialize")]
    DepthTooLarge(u32),
}

fn format_violations(report: &ConditionReport) -> String {
    report
        .violations()
        .map(|(c, w)| format!("{c}: {w}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Realizes a validated stop map: constant with value `F(J)` on each stop
/// interval `J`, strictly linear on every complementary gap.
///
/// The result's stop data is exactly the input, field for field.
pub fn build_from_stopmap(map: &StopMap) -> Result<PLReparam, ConstructError> {
    let report = check_conditions(map);
    if !report.ok() {
        return Err(ConstructError::InvalidStopMap(Box::new(report)));
    }
    let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(2 * map.len() + 2);
    pts.push((Rational::zero(), Rational::zero()));
    for (j, v) in map.iter() {
        pts.push((j.lo().clone(), v.clone()));
        pts.push((j.hi().clone(), v.clone()));
    }
    pts.push((Rational::one(), Rational::one()));
    // an interval containing 0 (or 1) duplicates the endpoint breakpoint
    pts.dedup();
    PLReparam::new(pts).map_err(|e| unreachable!("validated stop map yields a reparametrization: {e}"))
}

/// Exact sup-norm distance of two piecewise-linear reparametrizations.
///
/// The difference is piecewise linear, so its extrema sit at breakpoints of
/// either argument; the maximum over the union of the x-coordinates is
/// exact.
pub fn sup_distance(a: &PLReparam, b: &PLReparam) -> Rational {
    let mut xs: Vec<&Rational> = a
        .breakpoints()
        .iter()
        .chain(b.breakpoints().iter())
        .map(|(x, _)| x)
        .collect();
    xs.sort();
    xs.dedup();
    let mut best = Rational::zero();
    for x in xs {
        let d = (&a.evaluate(x).expect("x within [0,1]") - &b.evaluate(x).expect("x within [0,1]"))
            .abs();
        if d > best {
            best = d;
        }
    }
    best
}
