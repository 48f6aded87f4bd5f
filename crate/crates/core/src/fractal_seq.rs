//! Bracket expansions of integer sequences, the towers [n]^d, and coherent
//! fractal growths.
//!
//! [a] is the tuple (1, 2, ..., a); the bracket of a sequence concatenates
//! the ranges of its entries, and [n]^d iterates that d times starting from
//! (n). A coherent fractal growth is a list of prefixes of successive
//! bracket levels; its level lengths are exactly the sequences accepted by
//! [`crate::binomial::is_o_sequence`].

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binomial::{binomial_u64, OSeq};
use crate::error::{Error, Result};
use crate::fractal_decomp::fractal_decompose;
use crate::limits::Limits;

/// A finite, materialized sequence of positive integers.
///
/// A zero entry is tolerated and expands to the empty range, matching the
/// convention that [0] is the empty sequence; it only ever appears as the
/// root level (n) of a degenerate growth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sequence(Vec<u64>);

impl Sequence {
    pub fn new(entries: Vec<u64>) -> Self {
        Sequence(entries)
    }

    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the entries, which is also the length of the bracket.
    pub fn sum(&self) -> u128 {
        self.0.iter().map(|&v| v as u128).sum()
    }
}

impl From<Vec<u64>> for Sequence {
    fn from(v: Vec<u64>) -> Self {
        Sequence(v)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The range (1, 2, ..., a); empty when a = 0.
pub fn range_seq(a: u64) -> Sequence {
    Sequence((1..=a).collect())
}

/// Concatenation [s_1] ++ [s_2] ++ ...; the output has sum(s) entries.
pub fn bracket(s: &Sequence) -> Sequence {
    let mut out = Vec::new();
    for &v in s.entries() {
        out.extend(1..=v);
    }
    Sequence(out)
}

/// First `max_len` entries of the bracket, without materializing the rest.
pub(crate) fn bracket_truncated(s: &Sequence, max_len: usize) -> Sequence {
    let mut out = Vec::with_capacity(max_len);
    'outer: for &v in s.entries() {
        for x in 1..=v {
            if out.len() == max_len {
                break 'outer;
            }
            out.push(x);
        }
        if out.len() == max_len {
            break;
        }
    }
    Sequence(out)
}

/// Number of entries of [a]^d, i.e. C(d + a - 1, d), without materializing.
/// [0]^d is the empty sequence for every d.
pub fn bracket_power_len(a: u64, d: usize) -> BigUint {
    if a == 0 {
        return BigUint::zero();
    }
    binomial_u64(d as u64 + a - 1, d)
}

/// Sum of the entries of [a]^d, i.e. C(d + a, d + 1), without materializing.
pub fn bracket_power_sum(a: u64, d: usize) -> BigUint {
    binomial_u64(d as u64 + a, d + 1)
}

/// Materializes [a]^d. Refuses to allocate more than `limits.max_entries`
/// entries; for single entries of huge levels use [`fractal_entry`], which
/// needs no materialization.
pub fn bracket_power(a: u64, d: usize, limits: &Limits) -> Result<Sequence> {
    if a == 0 {
        return Ok(Sequence::empty());
    }
    let len = bracket_power_len(a, d);
    let cap = BigUint::from(limits.max_entries);
    if len > cap {
        return Err(Error::ResourceLimit(format!(
            "[{a}]^{d} has {len} entries, limit is {}; use fractal_entry for single entries",
            limits.max_entries
        )));
    }
    Ok(Sequence(bracket_power_iter(a, d).collect()))
}

/// Lazy iterator over the entries of [a]^d, O(d) memory.
///
/// Uses the splitting [v]^k = [1]^{k-1} ++ [2]^{k-1} ++ ... ++ [v]^{k-1}
/// as a stack of range cursors.
pub struct BracketPowerIter {
    /// Frames (next_child, max_child, depth): iterating [max_child]^depth.
    stack: Vec<(u64, u64, usize)>,
    /// Depth-0 case yields the single value directly.
    root: Option<u64>,
}

pub fn bracket_power_iter(a: u64, d: usize) -> BracketPowerIter {
    if d == 0 {
        BracketPowerIter {
            stack: Vec::new(),
            root: if a > 0 { Some(a) } else { None },
        }
    } else {
        BracketPowerIter {
            stack: if a > 0 { vec![(1, a, d)] } else { Vec::new() },
            root: None,
        }
    }
}

impl Iterator for BracketPowerIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if let Some(v) = self.root.take() {
            return Some(v);
        }
        loop {
            let &(j, max, depth) = self.stack.last()?;
            if j > max {
                self.stack.pop();
                continue;
            }
            self.stack.last_mut().unwrap().0 += 1;
            if depth == 1 {
                return Some(j);
            }
            self.stack.push((1, j, depth - 1));
        }
    }
}

/// Lazy iterator over [N] = [1] ++ [2] ++ [3] ++ ...
pub fn natural_bracket_iter() -> impl Iterator<Item = u64> {
    (1u64..).flat_map(|k| 1..=k)
}

/// The a-th entry of [N]^{d-1} (equivalently of [n]^d for any n large
/// enough), computed from the d-fractal decomposition instead of
/// materializing the tower: it is the final coefficient k_1.
pub fn fractal_entry(d: usize, a: &BigUint) -> Result<BigUint> {
    Ok(fractal_decompose(a, d)?.last_coeff().clone())
}

/// True iff t has at most as many entries as s and agrees with s on all of
/// them.
pub fn is_truncation(t: &Sequence, s: &Sequence) -> bool {
    t.len() <= s.len() && t.entries() == &s.entries()[..t.len()]
}

/// t is a prefix of the bracket of s, checked by streaming the bracket.
fn is_truncation_of_bracket(t: &Sequence, s: &Sequence) -> bool {
    if t.len() as u128 > s.sum() {
        return false;
    }
    let mut expanded = s.entries().iter().flat_map(|&v| 1..=v);
    t.entries().iter().all(|&x| expanded.next() == Some(x))
}

/// The lazy tower ((n), [n], [n]^2, ...); levels and prefixes are produced
/// on demand only.
#[derive(Debug, Clone, Copy)]
pub struct FractalExpansion {
    n: u64,
}

impl FractalExpansion {
    pub fn new(n: u64) -> Self {
        FractalExpansion { n }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn level(&self, d: usize, limits: &Limits) -> Result<Sequence> {
        bracket_power(self.n, d, limits)
    }

    pub fn iter_level(&self, d: usize) -> BracketPowerIter {
        bracket_power_iter(self.n, d)
    }

    /// First `len` entries of level d; errors if the level is shorter.
    pub fn prefix(&self, d: usize, len: usize) -> Result<Sequence> {
        let got: Vec<u64> = self.iter_level(d).take(len).collect();
        if got.len() < len {
            return Err(Error::InvalidInput(format!(
                "level {d} of the expansion of {} has only {} entries, {len} requested",
                self.n,
                got.len()
            )));
        }
        Ok(Sequence(got))
    }
}

/// A list of truncations (tau_0, ..., tau_s) of successive bracket levels,
/// rooted at tau_0 = (n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentGrowth {
    n: u64,
    levels: Vec<Sequence>,
}

impl CoherentGrowth {
    /// Raw construction; validity is decided by [`validate_growth`].
    pub fn new(n: u64, levels: Vec<Sequence>) -> Self {
        CoherentGrowth { n, levels }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn levels(&self) -> &[Sequence] {
        &self.levels
    }

    /// Level lengths (|tau_0|, |tau_1|, ...), the candidate O-sequence.
    pub fn lengths(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.len() as u64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthViolation {
    /// No levels at all; the root level (n) is mandatory.
    EmptyLevels,
    /// tau_0 differs from (n).
    RootMismatch,
    /// The level is longer than the bracket of its predecessor.
    ExceedsCapacity { capacity: u128 },
    /// Right length, but the entries are not a prefix of the tower level.
    NotAPrefix,
}

impl fmt::Display for GrowthViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthViolation::EmptyLevels => write!(f, "no levels given"),
            GrowthViolation::RootMismatch => write!(f, "level 0 must equal (n)"),
            GrowthViolation::ExceedsCapacity { capacity } => write!(
                f,
                "level is longer than the expansion of its predecessor ({capacity} entries)"
            ),
            GrowthViolation::NotAPrefix => {
                write!(f, "level is not a truncation of the tower level")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthVerdict {
    Accepted,
    Rejected {
        level: usize,
        reason: GrowthViolation,
    },
}

impl GrowthVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, GrowthVerdict::Accepted)
    }
}

/// Checks that every level is a truncation of the bracket of its
/// predecessor. Each level is then automatically a prefix of the
/// corresponding tower level [n]^d.
pub fn validate_growth(t: &CoherentGrowth) -> GrowthVerdict {
    let levels = t.levels();
    if levels.is_empty() {
        return GrowthVerdict::Rejected {
            level: 0,
            reason: GrowthViolation::EmptyLevels,
        };
    }
    if levels[0].entries() != [t.n()] {
        return GrowthVerdict::Rejected {
            level: 0,
            reason: GrowthViolation::RootMismatch,
        };
    }
    for d in 1..levels.len() {
        let capacity = levels[d - 1].sum();
        if levels[d].len() as u128 > capacity {
            return GrowthVerdict::Rejected {
                level: d,
                reason: GrowthViolation::ExceedsCapacity { capacity },
            };
        }
        if !is_truncation_of_bracket(&levels[d], &levels[d - 1]) {
            return GrowthVerdict::Rejected {
                level: d,
                reason: GrowthViolation::NotAPrefix,
            };
        }
    }
    GrowthVerdict::Accepted
}

/// Result of building a growth from prescribed level lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowthOutcome {
    Growth(CoherentGrowth),
    /// The lengths are not an O-sequence: the first offending index and the
    /// bound it violated, mirroring [`crate::binomial::is_o_sequence`].
    NotOSequence {
        index: usize,
        bound: BigUint,
    },
}

impl GrowthOutcome {
    pub fn growth(self) -> Option<CoherentGrowth> {
        match self {
            GrowthOutcome::Growth(g) => Some(g),
            GrowthOutcome::NotOSequence { .. } => None,
        }
    }
}

/// Builds the canonical coherent growth with level lengths h: n := h_1 and
/// tau_d := the first h_d entries of [n]^d. Succeeds exactly when h is an
/// O-sequence; this is an independent route to the Macaulay bound, since
/// capacities are measured by materialized sums rather than binomial
/// shifts.
pub fn growth_from_lengths(h: &OSeq, limits: &Limits) -> Result<GrowthOutcome> {
    let vals = h.values();
    if vals.is_empty() || !vals[0].is_one() {
        return Ok(GrowthOutcome::NotOSequence {
            index: 0,
            bound: BigUint::one(),
        });
    }
    let n: u64 = if vals.len() == 1 {
        1
    } else {
        limits.checked_len("growth level 1", &vals[1])? as u64
    };
    let mut levels = vec![Sequence(vec![n])];
    for d in 1..vals.len() {
        let want = limits.checked_len(&format!("growth level {d}"), &vals[d])?;
        let prev = &levels[d - 1];
        let capacity = prev.sum();
        if want as u128 > capacity {
            return Ok(GrowthOutcome::NotOSequence {
                index: d,
                bound: BigUint::from(capacity),
            });
        }
        let level = bracket_truncated(prev, want);
        levels.push(level);
    }
    Ok(GrowthOutcome::Growth(CoherentGrowth { n, levels }))
}
