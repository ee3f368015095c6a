//! Exact-arithmetic reparametrizations of the unit interval with prescribed
//! stop data.
//!
//! A reparametrization is a weakly increasing continuous self-map of
//! `[0, 1]` fixing the endpoints. Where it is constant it has *stop
//! intervals*, each with a *stop value*; the order-preserving bijection from
//! stop intervals to stop values is the *stop map*. This crate validates
//! which stop maps arise from reparametrizations, constructs piecewise-linear
//! reparametrizations realizing a given stop map or a bare stop family (the
//! dyadic induction), and factors a piecewise-linear path `p` through a
//! regular path `q` as `p = q ∘ φ`.
//!
//! All arithmetic is exact over arbitrary-precision rationals; results are
//! bit-reproducible.

pub mod construct;
pub mod exactnum;
pub mod pathreg;
pub mod stopdata;

pub use construct::{
    build_from_stopmap, dyadic_assignment, dyadic_build, dyadic_build_with_trace, evaluate_lazy,
    phi_k, sup_distance, AssignedObject, AssignmentRecord, ConstructError, DyadicAssignment,
    Enumeration, EvalError, FiniteFamilyOracle, GapOracle, LazyEvalError, OracleAnswer, PLReparam,
    ReparamError,
};
pub use exactnum::{
    dyadic_level, interval_order, simplest_rational_in, ClosedInterval, DyadicLevel,
    IntervalError, IntervalOrder, ParseRationalError, Rational,
};
pub use pathreg::{
    compose, is_regular, paths_equal, regularize, stop_intervals_of_path, PLPath, PathError,
};
pub use stopdata::{
    catalog, check_conditions, check_conditions_lazy, stop_data_of_reparam, Accumulation,
    AccumulationSide, Condition, ConditionReport, GeneratorStopFamily, LazyCheckError, Location,
    Relation, StopFamily, StopFamilyError, StopMap, StopMapError, Verdict, Witness,
};
