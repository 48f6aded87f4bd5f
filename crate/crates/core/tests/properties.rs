//! Cross-module property checks that go beyond the per-module unit tests:
//! Euler-characteristic bookkeeping for Betti tables, staircase stability
//! of expansions, the bilex correspondence in both directions, and
//! certification of tables coming from arbitrary monomial ideals.

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hilfrac_core::bigraded::{
    bigraded_hilbert, certify_fractal, certify_fractal_jobs, is_bilex_set, lambda, mu,
    BigradedMonomial, BigradedMonomialIdeal, BigradedTable, FerrersMatrix, SearchMode,
};
use hilfrac_core::binomial::{binomial_u64, macaulay_upper, OSeq};
use hilfrac_core::fractal_seq::{bracket, bracket_power, growth_from_lengths, Sequence};
use hilfrac_core::lex_ideal::{
    build_lex_ideal, ek_betti, hilbert_by_enumeration, monomial_count, monomial_rank,
    monomial_unrank, Monomial,
};
use hilfrac_core::Limits;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn random_ferrers(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> FerrersMatrix {
    let mut lengths = Vec::with_capacity(rows);
    let mut cap = cols;
    for _ in 0..rows {
        let l = rng.gen_range(0..=cap);
        lengths.push(l);
        cap = l;
    }
    FerrersMatrix::new(rows, cols, lengths).unwrap()
}

#[test]
fn expansions_preserve_the_staircase() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFE44E45);
    for _ in 0..1000 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let m = random_ferrers(&mut rng, rows, cols);
        let v: Vec<u64> = (0..rows).map(|_| rng.gen_range(0..=3)).collect();
        let w: Vec<u64> = (0..cols).map(|_| rng.gen_range(0..=3)).collect();
        let by_rows = m.row_expand(&Sequence::new(v.clone())).unwrap();
        let by_cols = m.col_expand(&Sequence::new(w.clone())).unwrap();
        // re-validating through the constructor enforces the invariant
        FerrersMatrix::new(
            by_rows.rows(),
            by_rows.cols(),
            by_rows.row_lengths().to_vec(),
        )
        .unwrap();
        FerrersMatrix::new(
            by_cols.rows(),
            by_cols.cols(),
            by_cols.row_lengths().to_vec(),
        )
        .unwrap();
        assert_eq!(by_rows.rows() as u64, v.iter().sum::<u64>());
        assert_eq!(by_cols.cols() as u64, w.iter().sum::<u64>());
    }
}

#[test]
fn expansion_dimension_bookkeeping() {
    // expanding a degree-(i-1) matrix by [n]^{i-1} lands on alpha_i rows
    let limits = Limits::default();
    for n in 1..=3usize {
        for i in 1..=5usize {
            let rows_before: usize = monomial_count(n, i - 1).try_into().unwrap();
            let rows_after: usize = monomial_count(n, i).try_into().unwrap();
            let v = bracket_power(n as u64, i - 1, &limits).unwrap();
            assert_eq!(v.len(), rows_before);
            let m = FerrersMatrix::full(rows_before, 2);
            assert_eq!(m.row_expand(&v).unwrap().rows(), rows_after, "n={n} i={i}");
        }
    }
}

#[test]
fn lambda_of_any_staircase_is_bilex() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB11E);
    for _ in 0..300 {
        let n = rng.gen_range(1..=3);
        let m_vars = rng.gen_range(1..=3);
        let i = rng.gen_range(0..=3);
        let j = rng.gen_range(0..=3);
        let rows: usize = monomial_count(n, i).try_into().unwrap();
        let cols: usize = monomial_count(m_vars, j).try_into().unwrap();
        let mat = random_ferrers(&mut rng, rows, cols);
        let set = lambda(&mat, i, j, n, m_vars).unwrap();
        assert!(
            is_bilex_set(&set, i, j, n, m_vars).unwrap(),
            "n={n} m={m_vars} i={i} j={j} mat={mat}"
        );
        // the other direction of the bijection
        let back = lambda(&mu(&set, i, j, n, m_vars).unwrap(), i, j, n, m_vars).unwrap();
        assert_eq!(back, set);
    }
}

#[test]
fn betti_alternating_sums_match_the_hilbert_series() {
    // sum_i (-1)^i beta_{i,D} equals the D-th coefficient of
    // H(t) * (1 - t)^n, with beta_{0,0} = 1 for the cyclic quotient
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA17E);
    let mut cases = vec![vec![1u64, 3, 3, 4], vec![1, 3, 4, 5], vec![1, 2, 2]];
    while cases.len() < 20 {
        let mut vals = vec![1u64, rng.gen_range(0..=3)];
        for d in 1..rng.gen_range(2..=4) {
            let bound: u64 = macaulay_upper(&big(vals[d]), d).try_into().unwrap();
            vals.push(rng.gen_range(0..=bound));
        }
        cases.push(vals);
    }
    for vals in cases {
        let growth = growth_from_lengths(&OSeq::from(vals.clone()), &limits)
            .unwrap()
            .growth()
            .unwrap();
        let n = vals[1] as usize;
        let ideal = build_lex_ideal(&growth, n).unwrap();
        let betti = ek_betti(&ideal, &limits).unwrap();
        let gens = ideal.generator_monomials(&limits).unwrap();
        let max_deg = ideal.top_degree() + n;
        let hilbert = hilbert_by_enumeration(n, &gens, max_deg, &limits).unwrap();
        for degree in 0..=max_deg {
            let mut lhs = BigInt::from(i32::from(degree == 0));
            for i in 1..=n {
                let term = BigInt::from(betti.get(i, degree));
                lhs += if i % 2 == 0 { term } else { -term };
            }
            let mut rhs = BigInt::from(0);
            for (e, &h) in hilbert.iter().enumerate().take(degree + 1) {
                let k = degree - e;
                if k > n {
                    continue;
                }
                let term = BigInt::from(binomial_u64(n as u64, k)) * BigInt::from(h);
                rhs += if k % 2 == 0 { term } else { -term };
            }
            assert_eq!(lhs, rhs, "vals={vals:?} degree={degree}");
        }
    }
}

#[test]
fn generator_histogram_counts_window_values() {
    // the per-degree histogram of smallest dividing variables equals the
    // value counts in the bracket window between the cutoff and the
    // expansion of the previous level
    let limits = Limits::default();
    for vals in [
        vec![1u64, 3, 3, 4],
        vec![1, 3, 4, 5],
        vec![1, 3, 2, 2],
        vec![1, 2, 3, 4],
    ] {
        let growth = growth_from_lengths(&OSeq::from(vals.clone()), &limits)
            .unwrap()
            .growth()
            .unwrap();
        let n = vals[1] as usize;
        let ideal = build_lex_ideal(&growth, n).unwrap();
        let betti = ek_betti(&ideal, &limits).unwrap();
        for j in 1..growth.levels().len() {
            let expanded = bracket(&growth.levels()[j - 1]);
            let window = &expanded.entries()[growth.levels()[j].len()..];
            for k in 1..=n {
                let expected = window.iter().filter(|&&v| v == k as u64).count() as u64;
                let got = betti.gen_stats().get(&(j, k)).copied().unwrap_or(0);
                assert_eq!(got, expected, "vals={vals:?} degree={j} variable {k}");
            }
        }
    }
}

#[test]
fn arbitrary_monomial_ideals_certify() {
    // tables of arbitrary bigraded monomial ideals, not only bilex ones,
    // must be accepted: some bilex ideal shares each Hilbert function
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACD);
    for case in 0..100 {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=2);
        let gen_count = rng.gen_range(0..=4);
        let gens: Vec<BigradedMonomial> = (0..gen_count)
            .map(|_| {
                let i = rng.gen_range(0..=3usize);
                let j = rng.gen_range(0..=3usize);
                let all_x = hilfrac_core::lex_ideal::monomials_of_degree(n, i);
                let all_y = hilfrac_core::lex_ideal::monomials_of_degree(m, j);
                let x = &all_x[rng.gen_range(0..all_x.len())];
                let y = &all_y[rng.gen_range(0..all_y.len())];
                BigradedMonomial::new(x.exps.clone(), y.exps.clone())
            })
            .filter(|g| g.bidegree() != (0, 0)) // the unit would kill H(0,0)
            .collect();
        let ideal = BigradedMonomialIdeal::from_generators(n, m, 4, 4, &gens, &limits).unwrap();
        let table = bigraded_hilbert(&ideal, &limits).unwrap();
        let verdict = certify_fractal(&table, SearchMode::First, &limits).unwrap();
        assert!(
            verdict.is_accepted(),
            "case {case}: gens {gens:?} gave a rejected table {table:?}"
        );
    }
}

#[test]
fn parallel_counts_are_scheduling_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6063);
    for _ in 0..10 {
        let mut values = vec![vec![0u64; 4]; 4];
        values[0][0] = 1;
        // random monotone-ish fill below the dimension bound
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) == (0, 0) {
                    continue;
                }
                let cap = ((i + 1) * (j + 1)) as u64;
                values[i][j] = rng.gen_range(0..=cap);
            }
        }
        let table = BigradedTable::new(2, 2, values).unwrap();
        let limits = Limits::default();
        let sequential = certify_fractal(&table, SearchMode::Count, &limits).unwrap();
        for jobs in [2, 3, 8] {
            let parallel = certify_fractal_jobs(&table, SearchMode::Count, jobs, &limits).unwrap();
            assert_eq!(sequential, parallel, "jobs={jobs}");
        }
    }
}

#[test]
fn serialized_shapes_match_the_wire_contract() {
    // monomial: {"exps":[...]}
    let u = Monomial::new(vec![1, 0, 1]);
    assert_eq!(
        serde_json::to_value(&u).unwrap(),
        serde_json::json!({"exps": [1, 0, 1]})
    );
    let back: Monomial = serde_json::from_value(serde_json::json!({"exps": [0, 3]})).unwrap();
    assert_eq!(back, Monomial::new(vec![0, 3]));

    // bigraded monomial: {"x":[...],"y":[...]}
    let b = BigradedMonomial::new(vec![1, 0], vec![2]);
    assert_eq!(
        serde_json::to_value(&b).unwrap(),
        serde_json::json!({"x": [1, 0], "y": [2]})
    );

    // table: {"n":..,"m":..,"rows":..,"cols":..,"values":[[..]]}
    let table = BigradedTable::new(2, 2, vec![vec![1, 2], vec![2, 4]]).unwrap();
    assert_eq!(
        serde_json::to_value(&table).unwrap(),
        serde_json::json!({
            "n": 2, "m": 2, "rows": 2, "cols": 2,
            "values": [[1, 2], [2, 4]]
        })
    );
    let parsed: BigradedTable = serde_json::from_str(
        r#"{"n":2,"m":2,"rows":4,"cols":4,"values":[[1,2,3,0],[2,4,3,0],[3,3,3,0],[0,0,0,0]]}"#,
    )
    .unwrap();
    parsed.validate().unwrap();
    assert_eq!(parsed.value(1, 1), 4);
}

#[test]
fn rank_monotone_under_variable_multiplication() {
    // multiplying by any single variable is rank-monotone; the smallest
    // variable gives the smallest product
    for n in 1..=3usize {
        for d in 1..=3usize {
            let count: u64 = monomial_count(n, d).try_into().unwrap();
            for a in 1..count {
                let u = monomial_unrank(&big(a), d, n).unwrap();
                let u_next = monomial_unrank(&big(a + 1), d, n).unwrap();
                for v in 1..=n {
                    assert!(
                        monomial_rank(&u.mul_var(v)) < monomial_rank(&u_next.mul_var(v)),
                        "n={n} d={d} a={a} v={v}"
                    );
                    if v > 1 {
                        assert!(
                            monomial_rank(&u.mul_var(v)) >= monomial_rank(&u.mul_var(v - 1)),
                            "n={n} d={d} a={a} v={v}"
                        );
                    }
                }
            }
        }
    }
}
