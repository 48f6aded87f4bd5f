//! The d-fractal decomposition of a positive integer: the unique way of
//! writing a = C(k_d, d) + ... + C(k_2, 2) + C(k_1, 1) with
//! k_d > ... > k_2 >= k_1 >= 1 (zero binomials allowed, since k_t >= t - 1
//! is all that is guaranteed for t >= 2).
//!
//! The shifted coefficient vector (c_d, ..., c_1) with c_t = k_t - t + 2
//! for t >= 2 and c_1 = k_1 is weakly decreasing and positive; it is the
//! combinatorial address used by sequence indexing and monomial ranking.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::binomial::{binomial, max_binomial_arg_leq};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractalDecomposition {
    pub a: BigUint,
    pub d: usize,
    /// (k_d, k_{d-1}, ..., k_1), read left to right.
    pub ks: Vec<BigUint>,
    /// (c_d, c_{d-1}, ..., c_1); weakly decreasing, all >= 1.
    pub coeffs: Vec<BigUint>,
}

impl FractalDecomposition {
    /// Re-evaluates sum of C(k_t, t); equals `a` by construction.
    pub fn value(&self) -> BigUint {
        let d = self.d;
        self.ks
            .iter()
            .enumerate()
            .map(|(idx, k)| binomial(k, d - idx))
            .sum()
    }

    /// c_1 = k_1, the last coefficient.
    pub fn last_coeff(&self) -> &BigUint {
        self.coeffs.last().expect("d >= 1")
    }
}

/// Computes the d-fractal decomposition of a >= 1 greedily: k_t is the
/// largest integer with C(k_t, t) < remainder, then recurse; k_1 is the
/// final remainder itself.
pub fn fractal_decompose(a: &BigUint, d: usize) -> Result<FractalDecomposition> {
    if a.is_zero() {
        return Err(Error::InvalidInput(
            "fractal decomposition is defined for positive integers only".into(),
        ));
    }
    if d == 0 {
        return Err(Error::InvalidInput(
            "fractal decomposition needs a positive degree".into(),
        ));
    }
    let mut ks = Vec::with_capacity(d);
    let mut rem = a.clone();
    for t in (2..=d).rev() {
        // largest k with C(k, t) < rem, i.e. C(k, t) <= rem - 1
        let k = max_binomial_arg_leq(t, &(&rem - 1u32));
        rem -= binomial(&k, t);
        ks.push(k);
    }
    debug_assert!(!rem.is_zero());
    ks.push(rem); // k_1
    let mut coeffs = Vec::with_capacity(d);
    for (idx, k) in ks.iter().enumerate() {
        let t = d - idx;
        if t >= 2 {
            // c_t = k_t - t + 2; k_t >= t - 1 makes this >= 1
            coeffs.push(k + 2u32 - BigUint::from(t));
        } else {
            coeffs.push(k.clone());
        }
    }
    debug_assert!(coeffs.windows(2).all(|w| w[0] >= w[1]));
    Ok(FractalDecomposition {
        a: a.clone(),
        d,
        ks,
        coeffs,
    })
}

/// Compares a and b through the lexicographic order of their d-fractal
/// coefficient vectors; this always agrees with the integer order.
pub fn compare_by_coeffs(a: &BigUint, b: &BigUint, d: usize) -> Result<Ordering> {
    let ca = fractal_decompose(a, d)?.coeffs;
    let cb = fractal_decompose(b, d)?.coeffs;
    Ok(ca.cmp(&cb))
}

/// The (d+1)-fractal coefficients of a^<d>, obtained from those of a by
/// duplicating the last coefficient: (c_d, ..., c_2, c_1, c_1).
pub fn growth_coeffs(a: &BigUint, d: usize) -> Result<Vec<BigUint>> {
    let dec = fractal_decompose(a, d)?;
    let mut coeffs = dec.coeffs;
    let c1 = coeffs.last().expect("d >= 1").clone();
    coeffs.push(c1);
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::{binomial_u64, macaulay_upper};

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn ks_u64(dec: &FractalDecomposition) -> Vec<u64> {
        dec.ks.iter().map(|k| k.try_into().unwrap()).collect()
    }

    fn coeffs_u64(dec: &FractalDecomposition) -> Vec<u64> {
        dec.coeffs.iter().map(|k| k.try_into().unwrap()).collect()
    }

    #[test]
    fn decompose_one() {
        // 1 = C(d-1,d) + ... + C(1,2) + C(1,1): all coefficients are 1
        for d in 1..=8 {
            let dec = fractal_decompose(&big(1), d).unwrap();
            assert_eq!(coeffs_u64(&dec), vec![1; d]);
            assert_eq!(dec.value(), big(1));
        }
    }

    #[test]
    fn decompose_examples() {
        let dec = fractal_decompose(&big(7), 3).unwrap();
        assert_eq!(ks_u64(&dec), vec![4, 2, 2]);
        assert_eq!(coeffs_u64(&dec), vec![3, 2, 2]);
        assert_eq!(
            binomial_u64(4, 3) + binomial_u64(2, 2) + binomial_u64(2, 1),
            big(7)
        );

        let dec = fractal_decompose(&big(4), 3).unwrap();
        assert_eq!(ks_u64(&dec), vec![3, 2, 2]);
        assert_eq!(coeffs_u64(&dec), vec![2, 2, 2]);
    }

    #[test]
    fn decompose_rejects_degenerate_input() {
        assert!(fractal_decompose(&BigUint::zero(), 3).is_err());
        assert!(fractal_decompose(&big(5), 0).is_err());
    }

    /// Exhaustive enumeration of admissible tuples k_d > ... > k_2 >= k_1 >= 1
    /// (with k_t >= t - 1 so zero binomials are allowed) summing to a;
    /// certifies uniqueness. `cap` is exclusive for t >= 2 and inclusive for
    /// the final k_1.
    fn all_decompositions(a: u64, d: usize) -> Vec<Vec<u64>> {
        fn go(rem: i64, t: usize, cap: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if t == 1 {
                if rem >= 1 && (rem as u64) <= cap {
                    acc.push(rem as u64);
                    out.push(acc.clone());
                    acc.pop();
                }
                return;
            }
            let lo = (t - 1) as u64;
            for k in lo..cap {
                let c: u64 = binomial_u64(k, t).try_into().unwrap();
                if c as i64 >= rem {
                    break;
                }
                acc.push(k);
                go(rem - c as i64, t - 1, k, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        go(a as i64, d, u64::MAX, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn decomposition_unique_by_exhaustion() {
        for a in 1..=60u64 {
            for d in 1..=4usize {
                let all = all_decompositions(a, d);
                assert_eq!(all.len(), 1, "a={a} d={d}: {all:?}");
                let dec = fractal_decompose(&big(a), d).unwrap();
                assert_eq!(ks_u64(&dec), all[0], "a={a} d={d}");
            }
        }
    }

    #[test]
    fn round_trip_on_grid() {
        for a in 1..=10_000u64 {
            for d in 1..=8usize {
                let dec = fractal_decompose(&big(a), d).unwrap();
                assert_eq!(dec.value(), big(a), "a={a} d={d}");
            }
        }
    }

    #[test]
    fn invariants_on_grid() {
        for a in 1..=2_000u64 {
            for d in 1..=6usize {
                let dec = fractal_decompose(&big(a), d).unwrap();
                // k_d > ... > k_2 >= k_1 >= 1 and coefficients weakly decreasing
                for (idx, w) in dec.ks.windows(2).enumerate() {
                    let t = d - idx;
                    if t > 2 {
                        assert!(w[0] > w[1], "a={a} d={d}");
                    } else {
                        assert!(w[0] >= w[1], "a={a} d={d}");
                    }
                }
                assert!(dec.ks.last().unwrap() >= &big(1));
                assert!(dec.coeffs.windows(2).all(|w| w[0] >= w[1]));
                assert!(dec.coeffs.iter().all(|c| c >= &big(1)));
            }
        }
    }

    #[test]
    fn coeff_order_matches_integer_order() {
        assert_eq!(
            compare_by_coeffs(&big(4), &big(7), 3).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            compare_by_coeffs(&big(9), &big(9), 5).unwrap(),
            Ordering::Equal
        );
        for d in 1..=5usize {
            let coeffs: Vec<Vec<BigUint>> = (1..=500u64)
                .map(|a| fractal_decompose(&big(a), d).unwrap().coeffs)
                .collect();
            for a in 0..coeffs.len() {
                for b in 0..coeffs.len() {
                    assert_eq!(
                        coeffs[a].cmp(&coeffs[b]),
                        (a + 1).cmp(&(b + 1)),
                        "a={} b={} d={d}",
                        a + 1,
                        b + 1
                    );
                }
            }
        }
    }

    #[test]
    fn growth_coeffs_examples() {
        assert_eq!(macaulay_upper(&big(7), 3), big(9));
        let grown = growth_coeffs(&big(7), 3).unwrap();
        assert_eq!(grown, vec![big(3), big(2), big(2), big(2)]);
        let direct = fractal_decompose(&big(9), 4).unwrap();
        assert_eq!(ks_u64(&direct), vec![5, 3, 2, 2]);
        assert_eq!(direct.coeffs, grown);

        // 6 = C(4,2), 6^<2> = C(5,3) = 10
        assert_eq!(macaulay_upper(&big(6), 2), big(10));
        let grown = growth_coeffs(&big(6), 2).unwrap();
        assert_eq!(grown, vec![big(3), big(3), big(3)]);
        let direct = fractal_decompose(&big(10), 3).unwrap();
        assert_eq!(ks_u64(&direct), vec![4, 3, 3]);
        assert_eq!(direct.coeffs, grown);

        for d in 1..=6 {
            let grown = growth_coeffs(&big(1), d).unwrap();
            assert_eq!(grown, vec![big(1); d + 1]);
        }
    }

    #[test]
    fn growth_identity_on_grid() {
        for a in 1..=1_000u64 {
            for d in 1..=6usize {
                let grown = growth_coeffs(&big(a), d).unwrap();
                let upper = macaulay_upper(&big(a), d);
                let direct = fractal_decompose(&upper, d + 1).unwrap();
                assert_eq!(grown, direct.coeffs, "a={a} d={d}");
            }
        }
    }
}
