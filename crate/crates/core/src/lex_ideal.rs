//! Monomials addressed by their rank in lexicographic order, lex segment
//! ideals built from coherent growths, minimal generators, and graded Betti
//! tables: the Eliahou-Kervaire closed form on one side and an exact Koszul
//! homology oracle on the other.
//!
//! Variable precedence is x_n > ... > x_1 throughout. Ranks are 1-based and
//! increase with the lex order, so rank 1 is x_1^d and rank C(n+d-1, d) is
//! x_n^d.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binomial::binomial_u64;
use crate::error::{Error, Result};
use crate::fractal_decomp::fractal_decompose;
use crate::fractal_seq::{validate_growth, CoherentGrowth};
use crate::limits::Limits;

/// A monomial as an exponent vector of fixed length n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    /// Smallest variable index (1-based) dividing the monomial.
    pub fn smallest_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0).map(|i| i + 1)
    }

    /// Multiplies by the variable with 1-based index v.
    pub fn mul_var(&self, v: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[v - 1] += 1;
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() == other.exps.len()
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Lexicographic comparison under x_n > ... > x_1: the most significant
    /// variable is x_n.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        for i in (0..self.exps.len()).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.iter().all(|&e| e == 0) {
            return write!(f, "1");
        }
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "x{}", i + 1)?,
                _ => write!(f, "x{}^{}", i + 1, e)?,
            }
        }
        Ok(())
    }
}

/// All monomials of the given degree, in increasing lex order: ascending
/// exponent of the most significant variable first, then recurse.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Monomial> {
    fn go(vars_left: usize, d: usize, acc: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if vars_left == 0 {
            if d == 0 {
                let mut exps = acc.clone();
                exps.reverse();
                out.push(Monomial { exps });
            }
            return;
        }
        for e in 0..=d {
            acc.push(e as u32);
            go(vars_left - 1, d - e, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, d, &mut Vec::new(), &mut out);
    out
}

/// Number of degree-d monomials in n variables.
pub fn monomial_count(n: usize, d: usize) -> BigUint {
    if d == 0 {
        return BigUint::one();
    }
    if n == 0 {
        return BigUint::zero();
    }
    binomial_u64((n + d - 1) as u64, d)
}

/// The rank-a monomial of degree d in n variables: x_{c_1} x_{c_2} ... x_{c_d}
/// where (c_d, ..., c_1) are the d-fractal coefficients of a.
pub fn monomial_unrank(a: &BigUint, d: usize, n: usize) -> Result<Monomial> {
    let count = monomial_count(n, d);
    if a.is_zero() || *a > count {
        return Err(Error::RankOutOfRange {
            rank: a.clone(),
            count,
            degree: d,
            vars: n,
        });
    }
    if d == 0 {
        return Ok(Monomial::one(n));
    }
    let dec = fractal_decompose(a, d)?;
    let mut exps = vec![0u32; n];
    for c in &dec.coeffs {
        let idx: usize = c.try_into().map_err(|_| {
            Error::Internal(format!("coefficient {c} exceeds the variable count {n}"))
        })?;
        debug_assert!(1 <= idx && idx <= n);
        exps[idx - 1] += 1;
    }
    Ok(Monomial { exps })
}

/// Inverse of [`monomial_unrank`]: reads the sorted variable indices as
/// fractal coefficients and sums the corresponding binomials.
pub fn monomial_rank(u: &Monomial) -> BigUint {
    let d = u.degree();
    if d == 0 {
        return BigUint::one();
    }
    // indices with multiplicity, ascending: c_1 <= c_2 <= ... <= c_d
    let mut rank = BigUint::zero();
    let mut t = 0usize;
    for (i, &e) in u.exps.iter().enumerate() {
        for _ in 0..e {
            t += 1;
            let c = i + 1;
            if t == 1 {
                rank += BigUint::from(c); // k_1 = c_1
            } else {
                rank += binomial_u64((c + t - 2) as u64, t); // k_t = c_t + t - 2
            }
        }
    }
    rank
}

/// A lex segment ideal, one cutoff per degree: in degree d the ideal is
/// spanned by the monomials of rank greater than t_d, so t_d is also the
/// Hilbert function of the quotient. Beyond the last specified degree the
/// ideal has no new generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMonomialIdeal {
    n: usize,
    /// t_d = |tau_d| for d = 0..=top_degree.
    cutoffs: Vec<u64>,
    /// sum of tau_d for d = 0..=top_degree; the complement size of the
    /// variable multiples of degree-d members inside degree d + 1.
    level_sums: Vec<u128>,
}

impl GradedMonomialIdeal {
    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn top_degree(&self) -> usize {
        self.cutoffs.len() - 1
    }

    /// Hilbert function of the quotient at a specified degree.
    pub fn hilbert(&self, d: usize) -> Option<u64> {
        self.cutoffs.get(d).copied()
    }

    pub fn cutoffs(&self) -> &[u64] {
        &self.cutoffs
    }

    /// Membership of a monomial of degree <= top_degree.
    pub fn contains(&self, u: &Monomial) -> Result<bool> {
        let d = u.degree();
        if u.n_vars() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "monomial in {} variables, ideal in {}",
                u.n_vars(),
                self.n
            )));
        }
        let Some(&t) = self.cutoffs.get(d) else {
            return Err(Error::InvalidInput(format!(
                "degree {d} is beyond the specified top degree {}",
                self.top_degree()
            )));
        };
        Ok(monomial_rank(u) > BigUint::from(t))
    }

    /// Minimal generators per degree, as ascending rank windows: in degree 1
    /// the window is (t_1, n]; in degree j >= 2 it is (t_j, sum tau_{j-1}].
    pub fn minimal_generators(&self, limits: &Limits) -> Result<BTreeMap<usize, Vec<BigUint>>> {
        let mut out = BTreeMap::new();
        let mut total: u128 = 0;
        for j in 1..=self.top_degree() {
            let lo = self.cutoffs[j] as u128;
            let hi = if j == 1 {
                self.n as u128
            } else {
                self.level_sums[j - 1]
            };
            if hi <= lo {
                continue;
            }
            total += hi - lo;
            if total > limits.max_entries as u128 {
                return Err(Error::ResourceLimit(format!(
                    "generator list needs more than {} entries",
                    limits.max_entries
                )));
            }
            let ranks: Vec<BigUint> = ((lo + 1)..=hi).map(BigUint::from).collect();
            out.insert(j, ranks);
        }
        Ok(out)
    }

    /// Minimal generators as monomials.
    pub fn generator_monomials(&self, limits: &Limits) -> Result<Vec<Monomial>> {
        let mut out = Vec::new();
        for (j, ranks) in self.minimal_generators(limits)? {
            for a in ranks {
                out.push(monomial_unrank(&a, j, self.n)?);
            }
        }
        Ok(out)
    }
}

/// Builds the lex segment ideal of a coherent growth in a ring with
/// `n_vars` variables: cutoff t_d = |tau_d| in every specified degree.
/// The ideal-closure invariant is verified constructively: the smallest
/// member of each degree, multiplied by the smallest variable, must land
/// strictly above the next cutoff (multiplication by variables is
/// rank-monotone, so this single product bounds all of them).
pub fn build_lex_ideal(t: &CoherentGrowth, n_vars: usize) -> Result<GradedMonomialIdeal> {
    let verdict = validate_growth(t);
    if let crate::fractal_seq::GrowthVerdict::Rejected { level, reason } = verdict {
        return Err(Error::InvalidGrowth { level, reason });
    }
    let cutoffs: Vec<u64> = t.lengths();
    let level_sums: Vec<u128> = t.levels().iter().map(|l| l.sum()).collect();
    for (d, &td) in cutoffs.iter().enumerate() {
        if BigUint::from(td) > monomial_count(n_vars, d) {
            return Err(Error::InvalidInput(format!(
                "level {d} has {td} entries but degree {d} in {n_vars} variables has only {} monomials",
                monomial_count(n_vars, d)
            )));
        }
    }
    let ideal = GradedMonomialIdeal {
        n: n_vars,
        cutoffs,
        level_sums,
    };
    for d in 0..ideal.top_degree() {
        let td = BigUint::from(ideal.cutoffs[d]);
        if td == monomial_count(n_vars, d) {
            continue; // empty in degree d
        }
        let least = monomial_unrank(&(&td + 1u32), d, n_vars)?;
        let product_rank = monomial_rank(&least.mul_var(1));
        if product_rank <= BigUint::from(ideal.cutoffs[d + 1]) {
            return Err(Error::Internal(format!(
                "lex segment not closed under multiplication between degrees {d} and {}",
                d + 1
            )));
        }
    }
    Ok(ideal)
}

/// Graded Betti numbers beta_{i, D} of a quotient S/I, keyed by
/// (homological index i >= 1, internal degree D). `gen_stats` is the
/// histogram, per generator degree j, of the smallest variable index of
/// the minimal generators (only filled by [`ek_betti`]).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), BigUint>,
    gen_stats: BTreeMap<(usize, usize), u64>,
}

impl BettiTable {
    pub fn new() -> Self {
        BettiTable::default()
    }

    pub fn add(&mut self, i: usize, degree: usize, amount: BigUint) {
        if amount.is_zero() {
            return;
        }
        *self
            .entries
            .entry((i, degree))
            .or_insert_with(BigUint::zero) += amount;
    }

    pub fn get(&self, i: usize, degree: usize) -> BigUint {
        self.entries
            .get(&(i, degree))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), BigUint> {
        &self.entries
    }

    /// Histogram (generator degree j, smallest variable k) -> count.
    pub fn gen_stats(&self) -> &BTreeMap<(usize, usize), u64> {
        &self.gen_stats
    }

    /// Equality of the rank entries, ignoring generator statistics.
    pub fn same_ranks(&self, other: &BettiTable) -> bool {
        self.entries == other.entries
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "(zero)");
        }
        for (idx, ((i, d), r)) in self.entries.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "beta_{{{i},{d}}} = {r}")?;
        }
        Ok(())
    }
}

/// Eliahou-Kervaire Betti table of a lex segment ideal: a minimal generator
/// of degree D whose smallest dividing variable is x_k contributes
/// C(n - k, i - 1) to beta_{i, D + i - 1}, for i = 1..=n.
pub fn ek_betti(ideal: &GradedMonomialIdeal, limits: &Limits) -> Result<BettiTable> {
    let n = ideal.n_vars();
    let mut table = BettiTable::new();
    for (j, ranks) in ideal.minimal_generators(limits)? {
        for a in ranks {
            let c1: usize = crate::fractal_seq::fractal_entry(j, &a)?
                .try_into()
                .map_err(|_| Error::Internal("smallest variable index out of range".into()))?;
            debug_assert!(1 <= c1 && c1 <= n);
            *table.gen_stats.entry((j, c1)).or_insert(0) += 1;
            for i in 1..=(n - c1 + 1) {
                table.add(i, j + i - 1, binomial_u64((n - c1) as u64, i - 1));
            }
        }
    }
    Ok(table)
}

/// Fraction-free Gaussian elimination (one-step Bareiss) over the integers;
/// returns the rank. Every division is exact, no floating point anywhere.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let num = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        rank += 1;
        r += 1;
        if r == rows {
            break;
        }
    }
    rank
}

const ORACLE_MAX_VARS: usize = 4;
const ORACLE_MAX_MONOMIALS_PER_DEGREE: usize = 200;

/// Betti numbers of S/I via Koszul homology, independent of the
/// Eliahou-Kervaire path: tensor the exterior-algebra complex on the n
/// variables with the monomial basis of S/I per internal degree and take
/// ranks by exact fraction-free elimination. Small instances only.
pub fn koszul_betti_oracle(
    n: usize,
    gens: &[Monomial],
    up_to_hom: usize,
    up_to_deg: usize,
) -> Result<BettiTable> {
    if n > ORACLE_MAX_VARS {
        return Err(Error::ResourceLimit(format!(
            "homology oracle supports at most {ORACLE_MAX_VARS} variables, got {n}"
        )));
    }
    for g in gens {
        if g.n_vars() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator {g} has {} variables, expected {n}",
                g.n_vars()
            )));
        }
    }
    for e in 0..=up_to_deg {
        let count = monomial_count(n, e);
        if count > BigUint::from(ORACLE_MAX_MONOMIALS_PER_DEGREE) {
            return Err(Error::ResourceLimit(format!(
                "degree {e} has {count} monomials; the homology oracle caps at {ORACLE_MAX_MONOMIALS_PER_DEGREE} per degree"
            )));
        }
    }

    // monomial basis of (S/I)_e and index maps
    let mut qbasis: Vec<Vec<Monomial>> = Vec::with_capacity(up_to_deg + 1);
    let mut qindex: Vec<HashMap<Vec<u32>, usize>> = Vec::with_capacity(up_to_deg + 1);
    for e in 0..=up_to_deg {
        let basis: Vec<Monomial> = monomials_of_degree(n, e)
            .into_iter()
            .filter(|u| !gens.iter().any(|g| g.divides(u)))
            .collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(k, u)| (u.exps.clone(), k))
            .collect();
        qbasis.push(basis);
        qindex.push(index);
    }

    // subsets of {1..n} by popcount, ascending mask order
    let mut masks: Vec<Vec<u32>> = vec![Vec::new(); n + 2];
    for mask in 0u32..(1 << n) {
        masks[mask.count_ones() as usize].push(mask);
    }
    let mask_pos: Vec<HashMap<u32, usize>> = masks
        .iter()
        .map(|ms| ms.iter().enumerate().map(|(p, &m)| (m, p)).collect())
        .collect();

    let dim = |i: usize, deg: usize| -> usize {
        if i > n || deg < i {
            return 0;
        }
        masks[i].len() * qbasis[deg - i].len()
    };

    // matrix of the differential at (i, D): columns indexed by
    // (mask, quotient monomial of degree D - i)
    let boundary = |i: usize, deg: usize| -> Vec<Vec<BigInt>> {
        let rows = dim(i - 1, deg);
        let cols = dim(i, deg);
        let mut m = vec![vec![BigInt::zero(); cols]; rows];
        if rows == 0 || cols == 0 {
            return m;
        }
        let wlen = qbasis[deg - i].len();
        let wlen_out = qbasis[deg - i + 1].len();
        for (mpos, &mask) in masks[i].iter().enumerate() {
            let bits: Vec<usize> = (0..n).filter(|b| mask & (1 << b) != 0).collect();
            for (wpos, w) in qbasis[deg - i].iter().enumerate() {
                let col = mpos * wlen + wpos;
                for (t, &b) in bits.iter().enumerate() {
                    let product = w.mul_var(b + 1);
                    let Some(&wpos_out) = qindex[deg - i + 1].get(&product.exps) else {
                        continue; // product lies in the ideal
                    };
                    let sub_mask = mask & !(1 << b);
                    let sub_pos = mask_pos[i - 1][&sub_mask];
                    let row = sub_pos * wlen_out + wpos_out;
                    let sign = if t % 2 == 0 { 1 } else { -1 };
                    m[row][col] += BigInt::from(sign);
                }
            }
        }
        m
    };

    let mut table = BettiTable::new();
    let top_hom = up_to_hom.min(n);
    for deg in 0..=up_to_deg {
        let mut ranks = vec![0usize; n + 2];
        for i in 1..=(top_hom + 1).min(n) {
            ranks[i] = bareiss_rank(boundary(i, deg));
        }
        // zeroth homology of the tensored complex is k in degree 0 only
        let h0 = qbasis[deg].len() - ranks[1];
        let expected = usize::from(deg == 0);
        if h0 != expected {
            return Err(Error::Internal(format!(
                "zeroth homology has dimension {h0} in degree {deg}, expected {expected}"
            )));
        }
        for i in 1..=top_hom {
            let d = dim(i, deg);
            if d == 0 {
                continue;
            }
            if ranks[i] + ranks[i + 1] > d {
                return Err(Error::Internal(format!(
                    "rank bookkeeping violated at homological index {i}, degree {deg}"
                )));
            }
            let beta = d - ranks[i] - ranks[i + 1];
            table.add(i, deg, BigUint::from(beta));
        }
    }
    Ok(table)
}

/// Hilbert function of S/<gens> per degree, by counting the monomials not
/// divisible by any generator. Valid for monomial ideals.
pub fn hilbert_by_enumeration(
    n: usize,
    gens: &[Monomial],
    up_to_deg: usize,
    limits: &Limits,
) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(up_to_deg + 1);
    for e in 0..=up_to_deg {
        limits.checked_len(
            &format!("degree-{e} monomial enumeration"),
            &monomial_count(n, e),
        )?;
        let count = monomials_of_degree(n, e)
            .into_iter()
            .filter(|u| !gens.iter().any(|g| g.divides(u)))
            .count();
        out.push(count as u64);
    }
    Ok(out)
}
