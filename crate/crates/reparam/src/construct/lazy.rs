//! Approximate evaluation for generator families.
//!
//! A countable family may have a stop set whose closure is all of `[0, 1]`;
//! there is then no finite exact representation of the limit
//! reparametrization, and the only access is through the approximants. Since
//! "the unassigned interval of minimal index strictly inside a gap" is an
//! unbounded search over an infinite enumeration, the caller supplies a
//! [`GapOracle`] that answers it (or admits it cannot).
//!
//! [`evaluate_lazy`] refines only the chain of gaps containing the query
//! point, which determines the approximant there; the tail bound
//! `sup |φ_k − φ| <= 1/2^(k-1)` gives the returned error bound.

use thiserror::Error;

use super::Enumeration;
use crate::exactnum::{ClosedInterval, Rational};
use crate::stopdata::{GeneratorStopFamily, StopFamily};

/// Answer to an oracle query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    /// The minimal enumeration index satisfying the query.
    Found(u64),
    /// Certified: no index satisfies it.
    Empty,
    /// The oracle cannot decide.
    Undecided,
}

/// Search oracle over an enumerated interval family.
pub trait GapOracle {
    /// Minimal enumeration index `m` with `j(m)` strictly inside the open
    /// gap `(lo, hi)`, or a certificate that none exists.
    fn min_index_in_gap(&self, lo: &Rational, hi: &Rational) -> OracleAnswer;

    /// Index of the interval containing `t`, queried only for the endpoints
    /// `t = 0` and `t = 1`.
    fn index_containing(&self, t: &Rational) -> OracleAnswer;
}

/// Exact oracle for a finite family under a chosen enumeration.
#[derive(Debug, Clone)]
pub struct FiniteFamilyOracle {
    family: StopFamily,
    enumeration: Enumeration,
}

impl FiniteFamilyOracle {
    pub fn new(family: StopFamily, enumeration: Enumeration) -> Result<Self, super::ConstructError> {
        if enumeration.len() != family.len() {
            return Err(super::ConstructError::EnumerationLength {
                got: enumeration.len(),
                want: family.len(),
            });
        }
        Ok(FiniteFamilyOracle {
            family,
            enumeration,
        })
    }

    /// Positional enumeration.
    pub fn positional(family: StopFamily) -> Self {
        let n = family.len();
        FiniteFamilyOracle {
            family,
            enumeration: Enumeration::positional(n),
        }
    }

    fn interval(&self, m: u64) -> &ClosedInterval {
        &self.family.intervals()[self.enumeration.position(m)]
    }
}

impl GapOracle for FiniteFamilyOracle {
    fn min_index_in_gap(&self, lo: &Rational, hi: &Rational) -> OracleAnswer {
        for m in 1..=self.family.len() as u64 {
            let j = self.interval(m);
            if j.lo() > lo && j.hi() < hi {
                return OracleAnswer::Found(m);
            }
        }
        OracleAnswer::Empty
    }

    fn index_containing(&self, t: &Rational) -> OracleAnswer {
        for m in 1..=self.family.len() as u64 {
            if self.interval(m).contains(t) {
                return OracleAnswer::Found(m);
            }
        }
        OracleAnswer::Empty
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LazyEvalError {
    #[error("epsilon must be positive")]
    NonpositiveEpsilon,
    #[error("evaluation point {0} lies outside [0, 1]")]
    OutOfDomain(Rational),
    #[error("oracle cannot certify emptiness of the gap ({lo}, {hi})")]
    OracleUndecided { lo: Rational, hi: Rational },
    #[error("oracle answer inconsistent with the generator: {0}")]
    InconsistentOracle(String),
    #[error("the family {{[0,1]}} admits no reparametrization")]
    FullIntervalFamily,
}

/// Evaluates the limit reparametrization of a generator family at `t` to
/// within `eps`: returns `(φ_k(t), 1/2^(k-1))` for the smallest depth `k`
/// with `1/2^(k-1) < eps`; the true value lies within the returned bound.
pub fn evaluate_lazy(
    g: &GeneratorStopFamily,
    oracle: &dyn GapOracle,
    t: &Rational,
    eps: &Rational,
) -> Result<(Rational, Rational), LazyEvalError> {
    if *eps <= Rational::zero() {
        return Err(LazyEvalError::NonpositiveEpsilon);
    }
    if t.is_negative() || *t > Rational::one() {
        return Err(LazyEvalError::OutOfDomain(t.clone()));
    }
    let mut k = 1u32;
    while Rational::inv_pow2(k - 1) >= *eps {
        k += 1;
    }
    let bound = Rational::inv_pow2(k - 1);

    let fetch = |m: u64| -> Result<ClosedInterval, LazyEvalError> {
        g.interval(m).ok_or_else(|| {
            LazyEvalError::InconsistentOracle(format!("oracle returned undefined index {m}"))
        })
    };
    let endpoint_object = |t0: &Rational| -> Result<ClosedInterval, LazyEvalError> {
        match oracle.index_containing(t0) {
            OracleAnswer::Found(m) => {
                let j = fetch(m)?;
                if !j.contains(t0) {
                    return Err(LazyEvalError::InconsistentOracle(format!(
                        "interval {j} (index {m}) does not contain {t0}"
                    )));
                }
                Ok(j)
            }
            OracleAnswer::Empty => {
                Ok(ClosedInterval::point(t0.clone()).expect("endpoints lie in [0,1]"))
            }
            OracleAnswer::Undecided => Err(LazyEvalError::OracleUndecided {
                lo: t0.clone(),
                hi: t0.clone(),
            }),
        }
    };

    let i0 = endpoint_object(&Rational::zero())?;
    let i1 = endpoint_object(&Rational::one())?;
    if i0.is_unit() {
        return Err(LazyEvalError::FullIntervalFamily);
    }

    // The value at t is pinned once t lands in an assigned object; until
    // then we track the bracketing gap, whose refinement is independent of
    // the rest of the grid.
    let mut pinned: Option<Rational> = None;
    if i0.contains(t) {
        pinned = Some(Rational::zero());
    } else if i1.contains(t) {
        pinned = Some(Rational::one());
    }
    let mut gap_lo = (i0.hi().clone(), Rational::zero());
    let mut gap_hi = (i1.lo().clone(), Rational::one());

    for _ in 0..k {
        if pinned.is_some() {
            break;
        }
        let (a, va) = &gap_lo;
        let (b, vb) = &gap_hi;
        let z = Rational::midpoint(va, vb);
        match oracle.min_index_in_gap(a, b) {
            OracleAnswer::Found(m) => {
                let j = fetch(m)?;
                if !(j.lo() > a && j.hi() < b) {
                    return Err(LazyEvalError::InconsistentOracle(format!(
                        "interval {j} (index {m}) is not strictly inside ({a}, {b})"
                    )));
                }
                if j.contains(t) {
                    pinned = Some(z);
                } else if t < j.lo() {
                    gap_hi = (j.lo().clone(), z);
                } else {
                    gap_lo = (j.hi().clone(), z);
                }
            }
            OracleAnswer::Empty => {
                let p = Rational::midpoint(a, b);
                match t.cmp(&p) {
                    std::cmp::Ordering::Equal => pinned = Some(z),
                    std::cmp::Ordering::Less => gap_hi = (p, z),
                    std::cmp::Ordering::Greater => gap_lo = (p, z),
                }
            }
            OracleAnswer::Undecided => {
                return Err(LazyEvalError::OracleUndecided {
                    lo: a.clone(),
                    hi: b.clone(),
                })
            }
        }
    }

    let value = match pinned {
        Some(v) => v,
        None => {
            let (a, va) = &gap_lo;
            let (b, vb) = &gap_hi;
            va + &(&(&(vb - va) * &(t - a)) / &(b - a))
        }
    };
    Ok((value, bound))
}
