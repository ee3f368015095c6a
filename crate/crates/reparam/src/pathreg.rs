//! Piecewise-linear paths into rational d-space and the factorization of a
//! path through a regular one.
//!
//! A path is *regular* if it is constant or not constant on any
//! nondegenerate subinterval. [`regularize`] factors any path `p` as
//! `q ∘ φ` with `q` regular and `φ` the reparametrization built dyadically
//! from `p`'s own stop intervals; the factorization is exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{dyadic_build, Enumeration, EvalError, PLReparam};
use crate::exactnum::{ClosedInterval, Rational};
use crate::stopdata::StopFamily;

/// A piecewise-linear path `[0, 1] -> Q^d` in canonical form: no breakpoint
/// is the affine interpolation of its neighbours, which keeps exactly two
/// breakpoints per maximal constant run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PLPathDoc", into = "PLPathDoc")]
pub struct PLPath {
    dim: usize,
    breakpoints: Vec<(Rational, Vec<Rational>)>,
}

#[derive(Serialize, Deserialize)]
struct PLPathDoc {
    dim: usize,
    breakpoints: Vec<(Rational, Vec<Rational>)>,
}

impl From<PLPath> for PLPathDoc {
    fn from(p: PLPath) -> Self {
        PLPathDoc {
            dim: p.dim,
            breakpoints: p.breakpoints,
        }
    }
}

impl TryFrom<PLPathDoc> for PLPath {
    type Error = PathError;
    fn try_from(doc: PLPathDoc) -> Result<Self, PathError> {
        PLPath::new(doc.dim, doc.breakpoints)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("paths must map into a space of dimension at least 1")]
    ZeroDimension,
    #[error("a path needs at least two breakpoints")]
    TooFewBreakpoints,
    #[error("breakpoint {at} has {got} coordinates, expected {want}")]
    WrongPointDimension { at: usize, got: usize, want: usize },
    #[error("breakpoint times must increase strictly at position {0}")]
    TimesNotIncreasing(usize),
    #[error("breakpoint times must run from 0 to 1")]
    BadDomain,
    #[error("dimension mismatch: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
}

impl PLPath {
    pub fn new(
        dim: usize,
        breakpoints: Vec<(Rational, Vec<Rational>)>,
    ) -> Result<Self, PathError> {
        if dim == 0 {
            return Err(PathError::ZeroDimension);
        }
        if breakpoints.len() < 2 {
            return Err(PathError::TooFewBreakpoints);
        }
        for (i, (_, pt)) in breakpoints.iter().enumerate() {
            if pt.len() != dim {
                return Err(PathError::WrongPointDimension {
                    at: i,
                    got: pt.len(),
                    want: dim,
                });
            }
        }
        if !breakpoints.first().unwrap().0.is_zero() || !breakpoints.last().unwrap().0.is_one() {
            return Err(PathError::BadDomain);
        }
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[0].0 >= w[1].0 {
                return Err(PathError::TimesNotIncreasing(i + 1));
            }
        }
        Ok(PLPath {
            dim,
            breakpoints: canonicalize(breakpoints),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[(Rational, Vec<Rational>)] {
        &self.breakpoints
    }

    pub fn is_constant(&self) -> bool {
        self.breakpoints.len() == 2 && self.breakpoints[0].1 == self.breakpoints[1].1
    }

    /// Exact componentwise linear interpolation.
    pub fn evaluate(&self, t: &Rational) -> Result<Vec<Rational>, EvalError> {
        if t.is_negative() || *t > Rational::one() {
            return Err(EvalError::OutOfDomain(t.clone()));
        }
        let i = self.breakpoints.partition_point(|(x, _)| x <= t) - 1;
        let (t0, p0) = &self.breakpoints[i];
        if t0 == t {
            return Ok(p0.clone());
        }
        let (t1, p1) = &self.breakpoints[i + 1];
        let lambda = &(t - t0) / &(t1 - t0);
        Ok(p0
            .iter()
            .zip(p1.iter())
            .map(|(a, b)| a + &(&lambda * &(b - a)))
            .collect())
    }
}

/// Drops interior breakpoints that are the affine interpolation of their
/// neighbours (cross-multiplied, no division).
fn canonicalize(points: Vec<(Rational, Vec<Rational>)>) -> Vec<(Rational, Vec<Rational>)> {
    let mut out: Vec<(Rational, Vec<Rational>)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let b = &out[out.len() - 1];
            let a = &out[out.len() - 2];
            let db = &b.0 - &a.0;
            let dp = &p.0 - &b.0;
            let redundant = b
                .1
                .iter()
                .zip(a.1.iter().zip(p.1.iter()))
                .all(|(bv, (av, pv))| &(&(bv - av) * &dp) == &(&(pv - bv) * &db));
            if redundant {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// The maximal nondegenerate intervals on which the path is constant. A
/// globally constant path yields `{[0, 1]}`.
pub fn stop_intervals_of_path(p: &PLPath) -> StopFamily {
    let mut intervals = Vec::new();
    // canonical form keeps each maximal constant run as a single segment
    for w in p.breakpoints().windows(2) {
        let ((t0, p0), (t1, p1)) = (&w[0], &w[1]);
        if p0 == p1 {
            intervals.push(
                ClosedInterval::new(t0.clone(), t1.clone()).expect("times ordered in [0,1]"),
            );
        }
    }
    StopFamily::new(intervals).expect("runs of a path are separated")
}

/// Constant, or non-constant on every nondegenerate subinterval.
pub fn is_regular(q: &PLPath) -> bool {
    q.is_constant() || stop_intervals_of_path(q).is_empty()
}

/// Factors `p = q ∘ φ` with `q` regular: `φ` is the dyadic realization of
/// `p`'s stop intervals (positional enumeration) and `q(u) = p(t)` for the
/// leftmost `t` with `φ(t) = u`. Exact; a regular `p` returns
/// `(p, identity)` and a constant `p` short-circuits to the same.
pub fn regularize(p: &PLPath) -> (PLPath, PLReparam) {
    if p.is_constant() {
        return (p.clone(), PLReparam::identity());
    }
    let delta = stop_intervals_of_path(p);
    let j = Enumeration::positional(delta.len());
    let phi = dyadic_build(&delta, &j).expect("a non-constant path never has stop family {[0,1]}");

    let mut us: Vec<Rational> = p
        .breakpoints()
        .iter()
        .map(|(t, _)| phi.evaluate(t).expect("breakpoints lie in [0,1]"))
        .chain(phi.breakpoints().iter().map(|(_, y)| y.clone()))
        .collect();
    us.sort();
    us.dedup();
    let pts: Vec<(Rational, Vec<Rational>)> = us
        .into_iter()
        .map(|u| {
            let t = phi.invert_left(&u);
            let point = p.evaluate(&t).expect("preimages lie in [0,1]");
            (u, point)
        })
        .collect();
    let q = PLPath::new(p.dim(), pts).expect("images of a valid path form a valid path");
    (q, phi)
}

/// Exact piecewise-linear composition `q ∘ φ`. Breakpoints are φ's own plus
/// the φ-preimages of q's; a q-breakpoint value met by a constant run of φ
/// contributes the run's endpoints, which are already breakpoints of φ.
pub fn compose(q: &PLPath, phi: &PLReparam) -> PLPath {
    let mut xs: Vec<Rational> = phi.breakpoints().iter().map(|(x, _)| x.clone()).collect();
    for w in phi.breakpoints().windows(2) {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        if y0 < y1 {
            for (u, _) in q.breakpoints() {
                if u > y0 && u < y1 {
                    xs.push(x0 + &(&(&(x1 - x0) * &(u - y0)) / &(y1 - y0)));
                }
            }
        }
    }
    xs.sort();
    xs.dedup();
    let pts: Vec<(Rational, Vec<Rational>)> = xs
        .into_iter()
        .map(|x| {
            let u = phi.evaluate(&x).expect("x within [0,1]");
            let point = q.evaluate(&u).expect("φ maps into [0,1]");
            (x, point)
        })
        .collect();
    PLPath::new(q.dim(), pts).expect("composition along a reparametrization is a valid path")
}

/// Function equality via canonical forms.
pub fn paths_equal(a: &PLPath, b: &PLPath) -> Result<bool, PathError> {
    if a.dim() != b.dim() {
        return Err(PathError::DimensionMismatch {
            a: a.dim(),
            b: b.dim(),
        });
    }
    Ok(a == b)
}
