//! The dyadic induction: assigns to every dyadic rational `z = l / 2^k`
//! either a real interval of the family or a degenerate one-point interval,
//! order-preservingly, so that every real interval is eventually hit.
//!
//! Level 0 assigns `0` and `1` (the intervals containing them, or the
//! degenerate points). At level `k`, each new odd `z = l / 2^k` looks at the
//! gap between its already-assigned neighbours `z ± 1/2^k`: the unassigned
//! interval with minimal enumeration index strictly inside the gap is taken;
//! if none exists, the midpoint of the gap becomes a degenerate point.
//!
//! [`DyadicAssignment`] materializes the full grid (exponential in the
//! depth, for inspection and the approximants [`phi_k`]); [`dyadic_build`]
//! runs the same induction sparsely, refining only gaps that still house
//! unassigned intervals, and returns the exact limit reparametrization.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{ConstructError, Enumeration, PLReparam};
use crate::exactnum::{ClosedInterval, Rational};
use crate::stopdata::StopFamily;

/// Deepest full-grid materialization allowed; the grid has `2^depth + 1`
/// entries.
pub const MAX_MATERIALIZED_DEPTH: u32 = 24;

/// What a dyadic rational is mapped to: a real interval of the family
/// (identified by its 1-based enumeration index) or a degenerate point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssignedObject {
    Real { index: u64 },
    Degenerate { t: Rational },
}

/// One real-interval assignment made by the induction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentRecord {
    /// 1-based enumeration index of the interval.
    pub index: u64,
    /// Level at which it was assigned.
    pub depth: u32,
    /// The dyadic rational it was assigned to, which becomes its stop value.
    pub z: Rational,
}

/// The full order-preserving map `z -> I_z` on the level-`depth` dyadic
/// grid, refinable level by level.
#[derive(Debug, Clone)]
pub struct DyadicAssignment {
    family: StopFamily,
    enumeration: Enumeration,
    depth: u32,
    entries: BTreeMap<Rational, AssignedObject>,
    // unassigned enumeration indices, keyed by the left grid point of the
    // gap strictly containing them
    residents: BTreeMap<Rational, Vec<u64>>,
    assigned_depth: BTreeMap<u64, u32>,
}

impl DyadicAssignment {
    /// The level-0 assignment: `0` and `1` only.
    pub fn initial(family: &StopFamily, j: &Enumeration) -> Result<Self, ConstructError> {
        if family.is_full_interval() {
            return Err(ConstructError::FullIntervalFamily);
        }
        if j.len() != family.len() {
            return Err(ConstructError::EnumerationLength {
                got: j.len(),
                want: family.len(),
            });
        }
        let n = family.len();
        // inverse of the enumeration: family position -> 1-based index
        let mut index_of_position = vec![0u64; n];
        for m in 1..=n as u64 {
            index_of_position[j.position(m)] = m;
        }

        let mut entries = BTreeMap::new();
        let mut assigned_depth = BTreeMap::new();
        let mut taken = Vec::new();

        let i0 = match family.intervals().first() {
            Some(first) if first.lo().is_zero() => {
                let m = index_of_position[0];
                taken.push(m);
                assigned_depth.insert(m, 0);
                AssignedObject::Real { index: m }
            }
            _ => AssignedObject::Degenerate {
                t: Rational::zero(),
            },
        };
        let i1 = match family.intervals().last() {
            Some(last) if last.hi().is_one() => {
                let m = index_of_position[n - 1];
                taken.push(m);
                assigned_depth.insert(m, 0);
                AssignedObject::Real { index: m }
            }
            _ => AssignedObject::Degenerate { t: Rational::one() },
        };
        entries.insert(Rational::zero(), i0);
        entries.insert(Rational::one(), i1);

        let unassigned: Vec<u64> = (1..=n as u64).filter(|m| !taken.contains(m)).collect();
        let mut residents = BTreeMap::new();
        if !unassigned.is_empty() {
            residents.insert(Rational::zero(), unassigned);
        }

        Ok(DyadicAssignment {
            family: family.clone(),
            enumeration: j.clone(),
            depth: 0,
            entries,
            residents,
            assigned_depth,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// True once every interval of the family is assigned.
    pub fn is_complete(&self) -> bool {
        self.residents.is_empty()
    }

    /// Level at which enumeration index `m` was assigned, if it has been.
    pub fn assigned_depth(&self, m: u64) -> Option<u32> {
        self.assigned_depth.get(&m).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Rational, &AssignedObject)> {
        self.entries.iter()
    }

    /// The interval or point assigned to the grid value `z`, if `z` is on
    /// the current grid.
    pub fn object_at(&self, z: &Rational) -> Option<&AssignedObject> {
        self.entries.get(z)
    }

    /// Resolves an assigned object to the closed interval it occupies.
    pub fn span(&self, obj: &AssignedObject) -> ClosedInterval {
        match obj {
            AssignedObject::Real { index } => {
                self.family.intervals()[self.enumeration.position(*index)].clone()
            }
            AssignedObject::Degenerate { t } => {
                ClosedInterval::point(t.clone()).expect("grid points lie in [0,1]")
            }
        }
    }

    /// Advances the induction by one level, assigning every odd
    /// `l / 2^(depth+1)`.
    pub fn refine(&mut self) {
        // one ordered pass: grid value plus the occupied span of each object
        let snapshot: Vec<(Rational, Rational, Rational)> = self
            .entries
            .iter()
            .map(|(z, obj)| {
                let span = self.span(obj);
                let (lo, hi) = (span.lo().clone(), span.hi().clone());
                (z.clone(), lo, hi)
            })
            .collect();
        let next_depth = self.depth + 1;
        let mut inserts: Vec<(Rational, AssignedObject)> = Vec::new();
        for w in snapshot.windows(2) {
            let (z0, _, hi0) = &w[0];
            let (z1, lo1, _) = &w[1];
            let z_new = Rational::midpoint(z0, z1);
            let residents = self.residents.remove(z0).unwrap_or_default();
            if residents.is_empty() {
                inserts.push((
                    z_new,
                    AssignedObject::Degenerate {
                        t: Rational::midpoint(hi0, lo1),
                    },
                ));
            } else {
                let m = *residents.iter().min().unwrap();
                let mpos = self.enumeration.position(m);
                let (mut left, mut right) = (Vec::new(), Vec::new());
                for &x in &residents {
                    if x == m {
                        continue;
                    }
                    if self.enumeration.position(x) < mpos {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                self.assigned_depth.insert(m, next_depth);
                if !left.is_empty() {
                    self.residents.insert(z0.clone(), left);
                }
                if !right.is_empty() {
                    self.residents.insert(z_new.clone(), right);
                }
                inserts.push((z_new, AssignedObject::Real { index: m }));
            }
        }
        for (z, obj) in inserts {
            self.entries.insert(z, obj);
        }
        self.depth = next_depth;
    }

    /// The approximant: constant `z` on each assigned object, linear in
    /// between.
    pub fn phi(&self) -> PLReparam {
        let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(2 * self.entries.len());
        for (z, obj) in &self.entries {
            match obj {
                AssignedObject::Real { .. } => {
                    let j = self.span(obj);
                    pts.push((j.lo().clone(), z.clone()));
                    pts.push((j.hi().clone(), z.clone()));
                }
                AssignedObject::Degenerate { t } => pts.push((t.clone(), z.clone())),
            }
        }
        PLReparam::new(pts).expect("the assignment is an ordered map")
    }
}

impl Serialize for DyadicAssignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "lowercase")]
        enum ObjDoc<'a> {
            Real { index: u64 },
            Degenerate { t: &'a Rational },
        }
        #[derive(Serialize)]
        struct EntryDoc<'a> {
            z: &'a Rational,
            #[serde(flatten)]
            obj: ObjDoc<'a>,
        }
        let entries: Vec<EntryDoc<'_>> = self
            .entries
            .iter()
            .map(|(z, obj)| EntryDoc {
                z,
                obj: match obj {
                    AssignedObject::Real { index } => ObjDoc::Real { index: *index },
                    AssignedObject::Degenerate { t } => ObjDoc::Degenerate { t },
                },
            })
            .collect();
        let mut s = serializer.serialize_struct("DyadicAssignment", 2)?;
        s.serialize_field("depth", &self.depth)?;
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

/// Runs the induction through depth `k` on the full grid.
pub fn dyadic_assignment(
    delta: &StopFamily,
    j: &Enumeration,
    k: u32,
) -> Result<DyadicAssignment, ConstructError> {
    if k > MAX_MATERIALIZED_DEPTH {
        return Err(ConstructError::DepthTooLarge(k));
    }
    let mut a = DyadicAssignment::initial(delta, j)?;
    for _ in 0..k {
        a.refine();
    }
    Ok(a)
}

/// The depth-`k` approximant `φ_k`.
pub fn phi_k(delta: &StopFamily, j: &Enumeration, k: u32) -> Result<PLReparam, ConstructError> {
    Ok(dyadic_assignment(delta, j, k)?.phi())
}

/// Realizes a stop family exactly: the uniform limit of the approximants.
///
/// Once every interval is assigned (at depth at most the family size), all
/// later refinements place degenerate points on existing linear segments, so
/// the limit is the approximant at the completion depth, exactly. Stop
/// values are dyadic by construction.
pub fn dyadic_build(delta: &StopFamily, j: &Enumeration) -> Result<PLReparam, ConstructError> {
    Ok(dyadic_build_with_trace(delta, j)?.0)
}

struct Gap {
    lo_val: Rational,
    hi_val: Rational,
    residents: Vec<u64>,
}

/// As [`dyadic_build`], also reporting which interval was assigned at which
/// depth and to which stop value.
///
/// This runs the induction sparsely: gaps housing no unassigned interval
/// stay linear forever and are dropped, so the cost is polynomial in the
/// family size rather than exponential in the depth.
pub fn dyadic_build_with_trace(
    delta: &StopFamily,
    j: &Enumeration,
) -> Result<(PLReparam, Vec<AssignmentRecord>), ConstructError> {
    if delta.is_full_interval() {
        return Err(ConstructError::FullIntervalFamily);
    }
    if j.len() != delta.len() {
        return Err(ConstructError::EnumerationLength {
            got: j.len(),
            want: delta.len(),
        });
    }
    let n = delta.len();
    let mut index_of_position = vec![0u64; n];
    for m in 1..=n as u64 {
        index_of_position[j.position(m)] = m;
    }
    let resolve = |m: u64| &delta.intervals()[j.position(m)];

    let mut records: Vec<AssignmentRecord> = Vec::with_capacity(n);
    let mut taken = Vec::new();
    let zero_real = delta
        .intervals()
        .first()
        .map_or(false, |first| first.lo().is_zero());
    if zero_real {
        let m = index_of_position[0];
        taken.push(m);
        records.push(AssignmentRecord {
            index: m,
            depth: 0,
            z: Rational::zero(),
        });
    }
    let one_real = delta
        .intervals()
        .last()
        .map_or(false, |last| last.hi().is_one());
    if one_real {
        let m = index_of_position[n - 1];
        taken.push(m);
        records.push(AssignmentRecord {
            index: m,
            depth: 0,
            z: Rational::one(),
        });
    }

    let unassigned: Vec<u64> = (1..=n as u64).filter(|m| !taken.contains(m)).collect();
    let mut gaps: Vec<Gap> = Vec::new();
    if !unassigned.is_empty() {
        gaps.push(Gap {
            lo_val: Rational::zero(),
            hi_val: Rational::one(),
            residents: unassigned,
        });
    }

    let mut depth = 0u32;
    while !gaps.is_empty() {
        depth += 1;
        if depth as usize > n {
            // the surjectivity argument bounds the depth by the family size
            return Err(ConstructError::DepthBoundExceeded { bound: n });
        }
        let mut next = Vec::with_capacity(gaps.len() + 1);
        for gap in gaps {
            let z = Rational::midpoint(&gap.lo_val, &gap.hi_val);
            let m = *gap.residents.iter().min().unwrap();
            let mpos = j.position(m);
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for &x in &gap.residents {
                if x == m {
                    continue;
                }
                if j.position(x) < mpos {
                    left.push(x);
                } else {
                    right.push(x);
                }
            }
            records.push(AssignmentRecord {
                index: m,
                depth,
                z: z.clone(),
            });
            if !left.is_empty() {
                next.push(Gap {
                    lo_val: gap.lo_val,
                    hi_val: z.clone(),
                    residents: left,
                });
            }
            if !right.is_empty() {
                next.push(Gap {
                    lo_val: z,
                    hi_val: gap.hi_val,
                    residents: right,
                });
            }
        }
        gaps = next;
    }

    let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(2 * n + 2);
    if !zero_real {
        pts.push((Rational::zero(), Rational::zero()));
    }
    for rec in &records {
        let interval = resolve(rec.index);
        pts.push((interval.lo().clone(), rec.z.clone()));
        pts.push((interval.hi().clone(), rec.z.clone()));
    }
    if !one_real {
        pts.push((Rational::one(), Rational::one()));
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    let phi = PLReparam::new(pts).expect("the sparse induction is order-preserving");
    Ok((phi, records))
}
