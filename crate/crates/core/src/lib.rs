//! Combinatorics of Hilbert function growth: Macaulay binomial expansions
//! and O-sequence validation, bracket-expansion towers and coherent
//! growths, monomial rank/unrank, lex segment ideals with
//! Eliahou-Kervaire Betti tables (cross-checked by an exact Koszul
//! homology oracle), and a certificate search deciding whether a bigraded
//! table is the Hilbert function of a bigraded algebra.
//!
//! All arithmetic on sequence values, ranks, and bounds is arbitrary
//! precision; nothing silently wraps. Everything that materializes data
//! checks a [`Limits`] cap first.

pub mod bigraded;
pub mod binomial;
pub mod error;
pub mod fractal_decomp;
pub mod fractal_seq;
pub mod lex_ideal;
pub mod limits;

pub use error::{Error, Result};
pub use limits::Limits;
pub use num_bigint::BigUint;

pub use binomial::{
    binomial, is_o_sequence, macaulay_expansion, macaulay_upper, OSeq, OSeqVerdict,
};
pub use fractal_decomp::{
    compare_by_coeffs, fractal_decompose, growth_coeffs, FractalDecomposition,
};
pub use fractal_seq::{
    bracket, bracket_power, fractal_entry, growth_from_lengths, is_truncation, range_seq,
    validate_growth, CoherentGrowth, FractalExpansion, GrowthOutcome, GrowthVerdict, Sequence,
};
pub use lex_ideal::{
    build_lex_ideal, ek_betti, hilbert_by_enumeration, koszul_betti_oracle, monomial_rank,
    monomial_unrank, BettiTable, GradedMonomialIdeal, Monomial,
};

pub use bigraded::{
    bigraded_hilbert, certificate_to_ideal, certify_fractal, certify_fractal_jobs, is_bilex_set,
    lambda, mu, verify_certificate, BigradedMonomial, BigradedMonomialIdeal, BigradedTable,
    Certificate, CertifyVerdict, FerrersMatrix, SearchMode, WindowScope,
};
