//! Command-line front end. Exit codes are a stable contract:
//! 0 accepted / ok, 1 rejected (or failed cross-check), 2 usage or format
//! error, 3 resource limit. `HILFRAC_LIMIT` overrides the default size
//! caps.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use hilfrac_core::bigraded::{
    bigraded_hilbert, certificate_to_ideal, certify_fractal_jobs, verify_certificate,
    BigradedTable, CertEntry, Certificate, CertifyVerdict, SearchMode,
};
use hilfrac_core::binomial::{is_o_sequence, OSeq, OSeqVerdict};
use hilfrac_core::fractal_seq::{
    bracket_power, bracket_power_iter, bracket_power_len, fractal_entry, growth_from_lengths,
    CoherentGrowth, GrowthOutcome,
};
use hilfrac_core::lex_ideal::{
    build_lex_ideal, ek_betti, koszul_betti_oracle, monomial_unrank, BettiTable,
};
use hilfrac_core::{Error as CoreError, Limits};

#[derive(Parser)]
#[command(
    name = "hilfrac",
    version,
    about = "Growth bounds for Hilbert functions, lex segment ideals, and bigraded certificates"
)]
struct Cli {
    /// Emit JSON instead of human-readable text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a comma-separated sequence against the Macaulay growth bound
    Osequence {
        /// The sequence, e.g. 1,3,3,4
        seq: String,
        /// Also print the coherent growth realizing the sequence
        #[arg(long)]
        growth: bool,
    },
    /// Materialize the tower [n]^d, or query entries without materializing
    Fractal {
        n: u64,
        d: usize,
        /// Print only the a-th entry (1-based), computed in closed form
        #[arg(long, conflicts_with = "prefix")]
        entry: Option<String>,
        /// Print only the first L entries
        #[arg(long)]
        prefix: Option<usize>,
    },
    /// Build the lex segment ideal with the given Hilbert function
    Lex {
        /// The Hilbert function, e.g. 1,3,3,4
        seq: String,
        /// Number of variables of the ambient ring
        #[arg(long)]
        n: usize,
        /// List the minimal generators
        #[arg(long)]
        gens: bool,
        /// Print the graded Betti table of the quotient
        #[arg(long)]
        betti: bool,
        /// Cross-check the Betti table against the exact homology oracle
        #[arg(long, requires = "betti")]
        oracle: bool,
    },
    /// Decide whether a bigraded table (JSON file) admits a certificate
    Bigraded {
        table: PathBuf,
        /// first: stop at one certificate; count/enumerate: exhaust the tree
        #[arg(long, value_enum, default_value_t = ModeArg::First)]
        mode: ModeArg,
        /// Worker threads for the search
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the found certificate(s) as JSON
        #[arg(long)]
        cert_out: Option<PathBuf>,
        /// Write the ideal of the first certificate as JSON
        #[arg(long)]
        ideal_out: Option<PathBuf>,
        /// Validate a certificate file against the table instead of searching
        #[arg(long, conflicts_with_all = ["cert_out", "ideal_out"])]
        verify: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    First,
    Count,
    Enumerate,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> SearchMode {
        match m {
            ModeArg::First => SearchMode::First,
            ModeArg::Count => SearchMode::Count,
            ModeArg::Enumerate => SearchMode::Enumerate,
        }
    }
}

const EXIT_OK: u8 = 0;
const EXIT_REJECTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::ResourceLimit(_) => EXIT_RESOURCE,
            CoreError::Internal(_) => EXIT_REJECTED,
            _ => EXIT_USAGE,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::usage(format!("json: {e}"))
    }
}

type CliResult = Result<u8, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = match limits_from_env() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code);
        }
    };
    let outcome = match cli.command {
        Command::Osequence { ref seq, growth } => cmd_osequence(seq, growth, cli.json, &limits),
        Command::Fractal {
            n,
            d,
            ref entry,
            prefix,
        } => cmd_fractal(n, d, entry.as_deref(), prefix, cli.json, &limits),
        Command::Lex {
            ref seq,
            n,
            gens,
            betti,
            oracle,
        } => cmd_lex(seq, n, gens, betti, oracle, cli.json, &limits),
        Command::Bigraded {
            ref table,
            mode,
            jobs,
            ref cert_out,
            ref ideal_out,
            ref verify,
        } => cmd_bigraded(
            table,
            mode,
            jobs,
            cert_out.as_deref(),
            ideal_out.as_deref(),
            verify.as_deref(),
            cli.json,
            &limits,
        ),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn limits_from_env() -> Result<Limits, CliError> {
    match std::env::var("HILFRAC_LIMIT") {
        Ok(v) => {
            let cap: usize = v.parse().map_err(|_| {
                CliError::usage(format!("HILFRAC_LIMIT must be an integer, got `{v}`"))
            })?;
            Ok(Limits::uniform(cap))
        }
        Err(_) => Ok(Limits::default()),
    }
}

/// Arbitrary-precision integer as a JSON number.
fn big_number(b: &BigUint) -> serde_json::Number {
    b.to_string().parse().expect("decimal digits")
}

fn growth_json(g: &CoherentGrowth) -> serde_json::Value {
    serde_json::json!({
        "n": g.n(),
        "levels": g.levels().iter().map(|l| l.entries().to_vec()).collect::<Vec<_>>(),
    })
}

fn cmd_osequence(seq: &str, want_growth: bool, json: bool, limits: &Limits) -> CliResult {
    let parsed = OSeq::from_str(seq)?;
    match is_o_sequence(&parsed) {
        OSeqVerdict::Accepted => {
            let growth = if want_growth {
                match growth_from_lengths(&parsed, limits)? {
                    GrowthOutcome::Growth(g) => Some(g),
                    GrowthOutcome::NotOSequence { .. } => {
                        return Err(CliError {
                            message: "internal: accepted sequence failed to grow".into(),
                            code: EXIT_REJECTED,
                        })
                    }
                }
            } else {
                None
            };
            if json {
                let mut obj = serde_json::json!({"verdict": "accepted"});
                if let Some(g) = &growth {
                    obj["growth"] = growth_json(g);
                }
                println!("{obj}");
            } else {
                println!("accepted");
                if let Some(g) = &growth {
                    println!("growth:");
                    for (d, level) in g.levels().iter().enumerate() {
                        println!("  level {d}: {level}");
                    }
                }
            }
            Ok(EXIT_OK)
        }
        OSeqVerdict::Rejected { index, bound } => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "verdict": "rejected",
                        "index": index,
                        "bound": big_number(&bound),
                    })
                );
            } else {
                println!("rejected at index {index}: allowed at most {bound}");
            }
            Ok(EXIT_REJECTED)
        }
    }
}

fn cmd_fractal(
    n: u64,
    d: usize,
    entry: Option<&str>,
    prefix: Option<usize>,
    json: bool,
    limits: &Limits,
) -> CliResult {
    if let Some(raw) = entry {
        let a = BigUint::from_str(raw)
            .map_err(|_| CliError::usage(format!("`{raw}` is not a positive integer")))?;
        let len = bracket_power_len(n, d);
        if a < BigUint::from(1u32) || a > len {
            return Err(CliError::usage(format!(
                "entry {a} is out of range: [{n}]^{d} has {len} entries"
            )));
        }
        let value = fractal_entry(d, &a)?;
        if json {
            println!(
                "{}",
                serde_json::json!({
                    "n": n, "d": d,
                    "entry": big_number(&a),
                    "value": big_number(&value),
                })
            );
        } else {
            println!("{value}");
        }
        return Ok(EXIT_OK);
    }
    let entries: Vec<u64> = if let Some(len) = prefix {
        if len > limits.max_entries {
            return Err(CliError {
                message: format!(
                    "prefix of {len} entries exceeds the limit {}",
                    limits.max_entries
                ),
                code: EXIT_RESOURCE,
            });
        }
        let got: Vec<u64> = bracket_power_iter(n, d).take(len).collect();
        if got.len() < len {
            return Err(CliError::usage(format!(
                "[{n}]^{d} has only {} entries, {len} requested",
                got.len()
            )));
        }
        got
    } else {
        bracket_power(n, d, limits)?.entries().to_vec()
    };
    if json {
        println!(
            "{}",
            serde_json::json!({"n": n, "d": d, "entries": entries})
        );
    } else {
        let parts: Vec<String> = entries.iter().map(|v| v.to_string()).collect();
        println!("({})", parts.join(", "));
    }
    Ok(EXIT_OK)
}

fn betti_json(t: &BettiTable) -> serde_json::Value {
    let entries: Vec<serde_json::Value> = t
        .entries()
        .iter()
        .map(|(&(i, degree), rank)| {
            serde_json::json!({"i": i, "degree": degree, "rank": big_number(rank)})
        })
        .collect();
    serde_json::json!({ "entries": entries })
}

#[allow(clippy::too_many_arguments)]
fn cmd_lex(
    seq: &str,
    n: usize,
    want_gens: bool,
    want_betti: bool,
    want_oracle: bool,
    json: bool,
    limits: &Limits,
) -> CliResult {
    let parsed = OSeq::from_str(seq)?;
    if let OSeqVerdict::Rejected { index, bound } = is_o_sequence(&parsed) {
        if json {
            println!(
                "{}",
                serde_json::json!({
                    "verdict": "rejected",
                    "index": index,
                    "bound": big_number(&bound),
                })
            );
        } else {
            println!("rejected at index {index}: allowed at most {bound} (not an O-sequence)");
        }
        return Ok(EXIT_REJECTED);
    }
    let growth = match growth_from_lengths(&parsed, limits)? {
        GrowthOutcome::Growth(g) => g,
        GrowthOutcome::NotOSequence { .. } => unreachable!("accepted above"),
    };
    let ideal = build_lex_ideal(&growth, n)?;

    let gens = if want_gens || want_oracle {
        Some(ideal.minimal_generators(limits)?)
    } else {
        None
    };
    let betti = if want_betti {
        Some(ek_betti(&ideal, limits)?)
    } else {
        None
    };
    let oracle_agrees = if want_oracle {
        let monomials = ideal.generator_monomials(limits)?;
        let reference = koszul_betti_oracle(n, &monomials, n, ideal.top_degree() + n)?;
        let ek = betti.as_ref().expect("--oracle requires --betti");
        if !ek.same_ranks(&reference) {
            return Err(CliError {
                message: format!(
                    "Betti cross-check failed:\nclosed form:\n{ek}\nhomology oracle:\n{reference}"
                ),
                code: EXIT_REJECTED,
            });
        }
        Some(true)
    } else {
        None
    };

    if json {
        let mut obj = serde_json::json!({
            "n": n,
            "hilbert": ideal.cutoffs().to_vec(),
        });
        if want_gens {
            let gens = gens.as_ref().expect("computed for --gens");
            let mut list = Vec::new();
            for (&degree, ranks) in gens {
                for a in ranks {
                    let u = monomial_unrank(a, degree, n)?;
                    list.push(serde_json::json!({"exps": u.exps}));
                }
            }
            obj["generators"] = serde_json::Value::Array(list);
        }
        if let Some(b) = &betti {
            obj["betti"] = betti_json(b);
        }
        if oracle_agrees == Some(true) {
            obj["oracle"] = "agreement".into();
        }
        println!("{obj}");
    } else {
        println!("variables: {n}");
        let h: Vec<String> = ideal.cutoffs().iter().map(|v| v.to_string()).collect();
        println!("hilbert:   {}", h.join(", "));
        if let Some(gens) = &gens {
            if want_gens {
                if gens.is_empty() {
                    println!("no minimal generators");
                }
                for (&degree, ranks) in gens {
                    let mut names = Vec::new();
                    for a in ranks {
                        names.push(monomial_unrank(a, degree, n)?.to_string());
                    }
                    println!("degree {degree} generators: {}", names.join(" "));
                }
            }
        }
        if let Some(b) = &betti {
            if b.entries().is_empty() {
                println!("betti: (zero)");
            } else {
                println!("betti:");
                for ((i, d), r) in b.entries() {
                    println!("  beta_{{{i},{d}}} = {r}");
                }
            }
        }
        if oracle_agrees == Some(true) {
            println!("oracle: agreement");
        }
    }
    Ok(EXIT_OK)
}

fn read_table(path: &Path) -> Result<BigradedTable, CliError> {
    let raw = std::fs::read_to_string(path)?;
    let table: BigradedTable = serde_json::from_str(&raw)?;
    table.validate()?;
    Ok(table)
}

fn cert_entries_json(cert: &Certificate) -> serde_json::Value {
    serde_json::to_value(cert.to_entries()).expect("serializable")
}

fn ideal_json(ideal: &hilfrac_core::bigraded::BigradedMonomialIdeal) -> serde_json::Value {
    let (rows, cols) = ideal.window();
    let mut pieces = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let monomials: Vec<serde_json::Value> = ideal
                .piece(i, j)
                .iter()
                .map(|u| serde_json::json!({"x": u.x, "y": u.y}))
                .collect();
            pieces.push(serde_json::json!({"i": i, "j": j, "monomials": monomials}));
        }
    }
    serde_json::json!({
        "n": ideal.n(),
        "m": ideal.m(),
        "rows": rows,
        "cols": cols,
        "pieces": pieces,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_bigraded(
    table_path: &Path,
    mode: ModeArg,
    jobs: usize,
    cert_out: Option<&Path>,
    ideal_out: Option<&Path>,
    verify: Option<&Path>,
    json: bool,
    limits: &Limits,
) -> CliResult {
    let table = read_table(table_path)?;

    if let Some(cert_path) = verify {
        let raw = std::fs::read_to_string(cert_path)?;
        let entries: Vec<CertEntry> = serde_json::from_str(&raw)?;
        let outcome = Certificate::from_entries(&table, &entries, limits)
            .and_then(|cert| verify_certificate(&table, &cert, limits));
        return match outcome {
            Ok(()) => {
                if json {
                    println!("{}", serde_json::json!({"verdict": "valid"}));
                } else {
                    println!("certificate valid");
                }
                Ok(EXIT_OK)
            }
            Err(CoreError::ResourceLimit(msg)) => Err(CliError {
                message: msg,
                code: EXIT_RESOURCE,
            }),
            Err(e) => {
                if json {
                    println!(
                        "{}",
                        serde_json::json!({"verdict": "invalid", "reason": e.to_string()})
                    );
                } else {
                    println!("certificate invalid: {e}");
                }
                Ok(EXIT_REJECTED)
            }
        };
    }

    if matches!(mode, ModeArg::Count) && (cert_out.is_some() || ideal_out.is_some()) {
        return Err(CliError::usage(
            "count mode retains no certificates; use --mode first or enumerate",
        ));
    }

    let verdict = certify_fractal_jobs(&table, mode.into(), jobs, limits)?;
    match verdict {
        CertifyVerdict::Accepted {
            scope,
            count,
            certificates,
        } => {
            if let Some(path) = cert_out {
                let value = match mode {
                    ModeArg::First => cert_entries_json(&certificates[0]),
                    _ => serde_json::Value::Array(
                        certificates.iter().map(cert_entries_json).collect(),
                    ),
                };
                std::fs::write(path, serde_json::to_string_pretty(&value)?)?;
            }
            if let Some(path) = ideal_out {
                let ideal = certificate_to_ideal(&certificates[0])?;
                let recomputed = bigraded_hilbert(&ideal, limits)?;
                if recomputed != table {
                    return Err(CliError {
                        message: "internal: certificate ideal does not reproduce the table".into(),
                        code: EXIT_REJECTED,
                    });
                }
                std::fs::write(path, serde_json::to_string_pretty(&ideal_json(&ideal))?)?;
            }
            if json {
                let mut obj = serde_json::json!({
                    "verdict": "accepted",
                    "scope": scope.to_string(),
                });
                if let Some(c) = count {
                    obj["count"] = c.into();
                }
                if !certificates.is_empty() {
                    obj["certificates"] = serde_json::Value::Array(
                        certificates.iter().map(cert_entries_json).collect(),
                    );
                }
                println!("{obj}");
            } else {
                match count {
                    Some(c) => println!("accepted ({scope}); certificates: {c}"),
                    None => println!("accepted ({scope})"),
                }
                for cert in &certificates {
                    for e in cert.to_entries() {
                        let parts: Vec<String> =
                            e.row_lengths.iter().map(|v| v.to_string()).collect();
                        println!("  M[{}][{}] rows [{}]", e.i, e.j, parts.join(","));
                    }
                }
            }
            Ok(EXIT_OK)
        }
        CertifyVerdict::Rejected { scope, witness } => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "verdict": "rejected",
                        "scope": scope.to_string(),
                        "witness": [witness.0, witness.1],
                    })
                );
            } else {
                println!(
                    "rejected ({scope}): no certificate at position ({}, {})",
                    witness.0, witness.1
                );
            }
            Ok(EXIT_REJECTED)
        }
    }
}
