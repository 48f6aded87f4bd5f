//! Exact binomial arithmetic, Macaulay binomial expansions, the growth
//! operator `h^<i>`, and validation of O-sequences.
//!
//! Every quantity is an arbitrary-precision integer; nothing here can
//! silently wrap.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// C(n, k), with the convention that C(n, k) = 0 whenever n < k.
pub fn binomial(n: &BigUint, k: usize) -> BigUint {
    let k_big = BigUint::from(k);
    if *n < k_big {
        return BigUint::zero();
    }
    // prod_{t=1..=k} (n - k + t) / t; each intermediate division is exact.
    let base = n - &k_big;
    let mut acc = BigUint::one();
    for t in 1..=k {
        acc = acc * (&base + BigUint::from(t)) / BigUint::from(t);
    }
    acc
}

/// Convenience wrapper for machine-word arguments.
pub fn binomial_u64(n: u64, k: usize) -> BigUint {
    binomial(&BigUint::from(n), k)
}

/// Largest m with C(m, k) <= bound, for k >= 1.
///
/// Starts from m = k - 1 (where the binomial is 0) and gallops upward with
/// exact binomials before binary-searching the final interval, so arbitrary
/// precision inputs stay fast while the arithmetic stays exact.
pub(crate) fn max_binomial_arg_leq(k: usize, bound: &BigUint) -> BigUint {
    debug_assert!(k >= 1);
    let mut lo = BigUint::from(k - 1); // C(k-1, k) = 0 <= bound
    if binomial(&(&lo + 1u32), k) > *bound {
        return lo;
    }
    let mut step = BigUint::one();
    loop {
        let cand = &lo + &step;
        if binomial(&cand, k) <= *bound {
            lo = cand;
            step *= 2u32;
        } else {
            break;
        }
    }
    // invariant: C(lo, k) <= bound < C(lo + step, k)
    let mut hi = &lo + &step;
    while &lo + 1u32 < hi {
        let mid = (&lo + &hi) / 2u32;
        if binomial(&mid, k) <= *bound {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// The i-binomial expansion of a positive integer h:
/// h = C(m_i, i) + C(m_{i-1}, i-1) + ... + C(m_j, j) with
/// m_i > m_{i-1} > ... > m_j >= j >= 1. The decomposition is unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacaulayExpansion {
    pub h: BigUint,
    pub i: usize,
    /// Pairs (m_t, t) with t strictly decreasing from i.
    pub terms: Vec<(BigUint, usize)>,
}

impl MacaulayExpansion {
    /// Re-evaluates the sum of binomials; equals `h` by construction.
    pub fn value(&self) -> BigUint {
        self.terms.iter().map(|(m, t)| binomial(m, *t)).sum()
    }
}

impl fmt::Display for MacaulayExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, t)| format!("C({m},{t})"))
            .collect();
        write!(f, "{} = {}", self.h, parts.join(" + "))
    }
}

/// Greedy i-binomial expansion of h >= 1.
pub fn macaulay_expansion(h: &BigUint, i: usize) -> Result<MacaulayExpansion> {
    if h.is_zero() {
        return Err(Error::InvalidInput(
            "binomial expansion is defined for positive integers only".into(),
        ));
    }
    if i == 0 {
        return Err(Error::InvalidInput(
            "binomial expansion needs a positive degree".into(),
        ));
    }
    let mut terms = Vec::new();
    let mut rem = h.clone();
    let mut t = i;
    while !rem.is_zero() {
        debug_assert!(t >= 1);
        let m = max_binomial_arg_leq(t, &rem);
        rem -= binomial(&m, t);
        terms.push((m, t));
        t -= 1;
    }
    Ok(MacaulayExpansion {
        h: h.clone(),
        i,
        terms,
    })
}

/// Macaulay's upper bound h^<i> for the growth from degree i to i + 1:
/// shift every binomial of the i-binomial expansion up by one.
/// By convention 0^<i> = 0.
pub fn macaulay_upper(h: &BigUint, i: usize) -> BigUint {
    if h.is_zero() {
        return BigUint::zero();
    }
    let exp = macaulay_expansion(h, i).expect("h > 0");
    exp.terms
        .iter()
        .map(|(m, t)| binomial(&(m + 1u32), t + 1))
        .sum()
}

/// A finite prefix of a numerical sequence (h_0, h_1, ...).
///
/// The raw type admits any list; whether it satisfies Macaulay's growth
/// bound is decided by [`is_o_sequence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OSeq {
    values: Vec<BigUint>,
}

impl OSeq {
    pub fn new(values: Vec<BigUint>) -> Self {
        OSeq { values }
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl From<Vec<u64>> for OSeq {
    fn from(v: Vec<u64>) -> Self {
        OSeq::new(v.into_iter().map(BigUint::from).collect())
    }
}

impl From<&[u64]> for OSeq {
    fn from(v: &[u64]) -> Self {
        OSeq::from(v.to_vec())
    }
}

impl FromStr for OSeq {
    type Err = Error;

    /// Parses a comma-separated list of non-negative integers.
    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let v = BigUint::from_str(tok).map_err(|_| {
                Error::InvalidInput(format!("`{tok}` is not a non-negative integer"))
            })?;
            values.push(v);
        }
        Ok(OSeq { values })
    }
}

impl fmt::Display for OSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Outcome of the O-sequence check. On rejection, `index` is the first
/// offending position and `bound` the value it was allowed to reach
/// (for index 0 the bound is 1, since h_0 must equal 1 exactly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OSeqVerdict {
    Accepted,
    Rejected { index: usize, bound: BigUint },
}

impl OSeqVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, OSeqVerdict::Accepted)
    }
}

/// Checks a finite prefix against Macaulay's bound: h_0 = 1 and
/// h_{d+1} <= h_d^<d> for every d >= 1. A valid prefix always extends
/// (by zeros if nothing else), so no look-ahead is needed.
pub fn is_o_sequence(seq: &OSeq) -> OSeqVerdict {
    let vals = seq.values();
    if vals.is_empty() || !vals[0].is_one() {
        return OSeqVerdict::Rejected {
            index: 0,
            bound: BigUint::one(),
        };
    }
    for d in 1..vals.len().saturating_sub(1) {
        let bound = macaulay_upper(&vals[d], d);
        if vals[d + 1] > bound {
            return OSeqVerdict::Rejected {
                index: d + 1,
                bound,
            };
        }
    }
    OSeqVerdict::Accepted
}
