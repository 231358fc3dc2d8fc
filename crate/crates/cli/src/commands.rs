//! Command definitions and dispatch.
//!
//! Exit codes: 0 on success or a positive verification, 1 on a verification
//! failure (a witness half fails, a sweep collides, a chain is rejected, a
//! comparison is undecided, a flatness search is inconclusive, a
//! decomposition falls outside the image shape), 2 on usage or parse errors,
//! which are reported on stderr. Results are JSON on stdout; `--pretty`
//! pretty-prints them.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use amalg_core::coproduct::{decompose_by_support, SupportDecomposition};
use amalg_core::freegroup::{
    fox_derivative, magnus, order_compare, reduced_words, GroupRingElement, OrderResult,
    SweepReport,
};
use amalg_core::modlab::{
    flatness_check, matrix_chain_check, ChainCondition, ChainOutcome, FlatnessVerdict,
    DEFAULT_BUDGET,
};
use amalg_core::witnesses::{
    ideal_tensor_witness, idempotent_family_witness, monomial_family_witness,
    square_zero_refutation_report, IdealTensorVariant, WitnessReport, DEFAULT_CANDIDATES,
    DEFAULT_EMBED_DEGREE, DEFAULT_IDEMPOTENT_WINDOW, DEFAULT_SQUARE_ZERO_WINDOW,
};
use amalg_core::{Alphabet, NcSeries, RingSpec};

use crate::expr::{parse_series, render_series};
use crate::json::{
    coproduct_from_json, coproduct_to_json, matrix_from_json, matrix_to_json,
    presentation_from_json, sweep_report_to_json, witness_report_to_json,
};
use crate::ringspec::parse_ring_spec;
use crate::words::{parse_group_ring, parse_word, render_group_ring, render_word};

/// Exact-arithmetic workbench for truncated noncommutative power series,
/// free-group rings, ring coproducts, and finite flatness checkers.
#[derive(Parser)]
#[command(name = "amalg", version, max_term_width = 100)]
pub struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Expand a group-ring expression through the embedding g ↦ 1 + letter.
    Expand {
        #[arg(long, default_value = "z")]
        ring: String,
        /// Truncation degree of the series image.
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// Word or group-ring expression, e.g. `hkHK` or `2*hk - 3*H + 1`.
        #[arg(long)]
        word: String,
    },
    /// Compare two words in the series-induced bi-ordering over Z.
    Order {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Largest truncation degree tried (default: 4 × the maximum letter
        /// length).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Fox derivative of a group-ring expression.
    Fox {
        #[arg(long, default_value = "z")]
        ring: String,
        /// Group-ring expression, e.g. `hk`.
        #[arg(long)]
        expr: String,
        /// Generator to differentiate by: h, k, 1, or 2.
        #[arg(long)]
        gen: String,
    },
    /// Check that expansions of all short words are pairwise distinct.
    Sweep {
        #[arg(long, default_value = "z")]
        ring: String,
        /// Maximum letter length enumerated.
        #[arg(long = "max-len", default_value_t = 3)]
        max_len: usize,
        /// Truncation degree (default: max(4, max-len); must be ≥ max-len).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Operations on coproduct elements in alternating-tensor form.
    Coproduct {
        #[command(subcommand)]
        op: CoproductOp,
    },
    /// Run the built-in non-injectivity witnesses.
    Witness {
        #[command(subcommand)]
        op: WitnessOp,
    },
    /// Search for the flatness certificate of a finitely presented module.
    FlatCheck {
        #[arg(long, default_value = "z")]
        ring: String,
        /// Presentation file: {"n": 1, "gens": [["2"]]}.
        #[arg(long)]
        presentation: PathBuf,
        /// Bound on candidate matrices examined.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check the matrix chain condition y_k·y_{k+1} = y_k, y_{k+1}·y_k ≠ y_{k+1}.
    SahaevCheck {
        /// Sequence file: an array of matrices, entries as ring-element
        /// strings.
        seq: PathBuf,
        #[arg(long, default_value = "z")]
        ring: String,
    },
}

#[derive(Subcommand)]
pub enum CoproductOp {
    /// Multiply two elements (files or `-` for stdin).
    Mul { lhs: PathBuf, rhs: PathBuf },
    /// Evaluate an element into the two-letter series ring.
    Eval { input: PathBuf },
    /// Partition a two-letter series by the alternating block structure of
    /// its support.
    Decompose {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// Series expression over letters a and b.
        #[arg(long)]
        expr: String,
        /// Patterns may have at most 2·ncap + 1 blocks.
        #[arg(long)]
        ncap: usize,
    },
}

#[derive(Subcommand)]
pub enum WitnessOp {
    /// Run one witness by name, or `all`.
    Run {
        /// One of wd2-zp2, wd2-qxy, mu-idempotent, gmb2, beta2-domain, all.
        name: String,
        /// Window size (embedding degree for the wd2 witnesses).
        #[arg(long)]
        window: Option<usize>,
        /// Number of random candidate decompositions to refute.
        #[arg(long, default_value_t = DEFAULT_CANDIDATES)]
        candidates: usize,
    },
}

/// A usage or input error; always exits with code 2.
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> UsageError {
        UsageError(e.to_string())
    }
}

struct Outcome {
    value: Value,
    exit: i32,
}

fn ok(value: Value) -> Result<Outcome, UsageError> {
    Ok(Outcome { value, exit: 0 })
}

fn verdict(value: Value, verified: bool) -> Result<Outcome, UsageError> {
    Ok(Outcome { value, exit: if verified { 0 } else { 1 } })
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pretty = cli.pretty;
    match dispatch(cli.command) {
        Ok(outcome) => {
            let rendered = if pretty {
                serde_json::to_string_pretty(&outcome.value)
            } else {
                serde_json::to_string(&outcome.value)
            }
            .expect("serializable value");
            println!("{rendered}");
            outcome.exit
        }
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn read_input(path: &Path) -> Result<String, UsageError> {
    if path.as_os_str() == "-" {
        let mut buffer = String::new();
        std::io::stdin().read_to_string(&mut buffer).map_err(|e| UsageError(e.to_string()))?;
        Ok(buffer)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))
    }
}

fn read_json(path: &Path) -> Result<Value, UsageError> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn dispatch(command: Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Expand { ring, degree, word } => {
            let ring = parse_ring_spec(&ring)?;
            let element = parse_group_ring(&word, &ring)?;
            let image = magnus(&element, &Alphabet::ab(), degree)?;
            ok(json!({
                "ring": ring.to_string(),
                "degree": degree,
                "word": render_group_ring(&element),
                "series": render_series(&image),
            }))
        }
        Command::Order { u, v, cap } => {
            let u = parse_word(&u)?;
            let v = parse_word(&v)?;
            let cap = cap.unwrap_or_else(|| 4 * u.letter_len().max(v.letter_len()).max(1) as usize);
            let result = order_compare(&u, &v, cap);
            let rendered = match result {
                OrderResult::Lt => "LT",
                OrderResult::Eq => "EQ",
                OrderResult::Gt => "GT",
                OrderResult::Undecided { .. } => "UNDECIDED",
            };
            verdict(
                json!({
                    "u": render_word(&u),
                    "v": render_word(&v),
                    "cap": cap,
                    "order": rendered,
                }),
                !matches!(result, OrderResult::Undecided { .. }),
            )
        }
        Command::Fox { ring, expr, gen } => {
            let ring = parse_ring_spec(&ring)?;
            let element = parse_group_ring(&expr, &ring)?;
            let gen_index = match gen.as_str() {
                "h" | "1" => 0,
                "k" | "2" => 1,
                other => return Err(UsageError(format!("unknown generator `{other}`"))),
            };
            let derivative = fox_derivative(&element, gen_index);
            ok(json!({
                "ring": ring.to_string(),
                "gen": if gen_index == 0 { "h" } else { "k" },
                "input": render_group_ring(&element),
                "derivative": render_group_ring(&derivative),
            }))
        }
        Command::Sweep { ring, max_len, degree } => {
            let ring = parse_ring_spec(&ring)?;
            let degree = degree.unwrap_or(max_len.max(4));
            let workers = worker_count();
            let report = parallel_sweep(&ring, max_len, degree, workers)?;
            let all_distinct = report.all_distinct();
            verdict(sweep_report_to_json(&ring, max_len, degree, &report), all_distinct)
        }
        Command::Coproduct { op } => match op {
            CoproductOp::Mul { lhs, rhs } => {
                let lhs = coproduct_from_json(&read_json(&lhs)?)?;
                let rhs = coproduct_from_json(&read_json(&rhs)?)?;
                let product = lhs.mul(&rhs)?;
                ok(coproduct_to_json(&product))
            }
            CoproductOp::Eval { input } => {
                let element = coproduct_from_json(&read_json(&input)?)?;
                let series = element.evaluate();
                ok(json!({
                    "ring": element.ring().to_string(),
                    "degree": element.degree(),
                    "series": render_series(&series),
                }))
            }
            CoproductOp::Decompose { ring, degree, expr, ncap } => {
                let ring = parse_ring_spec(&ring)?;
                let series = parse_series(&expr, &ring, &Alphabet::ab(), degree)?;
                match decompose_by_support(&series, ncap) {
                    SupportDecomposition::Components(parts) => {
                        let mut components = serde_json::Map::new();
                        for (t, part) in &parts {
                            components.insert(t.to_string(), Value::String(render_series(part)));
                        }
                        ok(json!({
                            "ring": ring.to_string(),
                            "degree": degree,
                            "ncap": ncap,
                            "components": Value::Object(components),
                        }))
                    }
                    SupportDecomposition::NotInImage { word } => verdict(
                        json!({
                            "ring": ring.to_string(),
                            "degree": degree,
                            "ncap": ncap,
                            "not_in_image": word.to_string(),
                        }),
                        false,
                    ),
                }
            }
        },
        Command::Witness { op } => {
            let WitnessOp::Run { name, window, candidates } = op;
            let reports = run_witnesses(&name, window, candidates)?;
            let all_passed = reports.iter().all(WitnessReport::passed);
            let value = if reports.len() == 1 {
                witness_report_to_json(&reports[0])
            } else {
                json!({
                    "reports": reports.iter().map(witness_report_to_json).collect::<Vec<_>>(),
                    "all_passed": all_passed,
                })
            };
            verdict(value, all_passed)
        }
        Command::FlatCheck { ring, presentation, budget } => {
            let ring = parse_ring_spec(&ring)?;
            let p = presentation_from_json(&read_json(&presentation)?, &ring)?;
            match flatness_check(&p, budget)? {
                FlatnessVerdict::Flat { witness } => ok(json!({
                    "verdict": "flat",
                    "witness": matrix_to_json(&witness),
                })),
                FlatnessVerdict::NotFlat { witness } => ok(json!({
                    "verdict": "not-flat",
                    "witness": matrix_to_json(&witness),
                })),
                FlatnessVerdict::Inconclusive => {
                    verdict(json!({"verdict": "inconclusive"}), false)
                }
            }
        }
        Command::SahaevCheck { seq, ring } => {
            let ring = parse_ring_spec(&ring)?;
            let value = read_json(&seq)?;
            let matrices_json =
                value.as_array().ok_or(UsageError("expected an array of matrices".into()))?;
            let mut matrices = Vec::with_capacity(matrices_json.len());
            for m in matrices_json {
                matrices.push(matrix_from_json(m, &ring)?);
            }
            match matrix_chain_check(&matrices)? {
                ChainOutcome::ValidPrefix => ok(json!({"outcome": "valid-prefix", "length": matrices.len()})),
                ChainOutcome::Violation { index, condition } => {
                    let condition = match condition {
                        ChainCondition::ForwardAbsorption => "forward-absorption",
                        ChainCondition::ReverseSeparation => "reverse-separation",
                    };
                    verdict(
                        json!({
                            "outcome": "violation",
                            "index": index,
                            "condition": condition,
                        }),
                        false,
                    )
                }
            }
        }
    }
}

fn run_witnesses(
    name: &str,
    window: Option<usize>,
    candidates: usize,
) -> Result<Vec<WitnessReport>, UsageError> {
    let one = |report: Result<WitnessReport, amalg_core::Error>| -> Result<Vec<WitnessReport>, UsageError> {
        Ok(vec![report?])
    };
    match name {
        "wd2-zp2" => one(ideal_tensor_witness(
            &IdealTensorVariant::ModPrimeSquare { p: 2 },
            window.unwrap_or(DEFAULT_EMBED_DEGREE),
        )),
        "wd2-qxy" => one(ideal_tensor_witness(
            &IdealTensorVariant::SquareZeroPair,
            window.unwrap_or(DEFAULT_EMBED_DEGREE),
        )),
        "mu-idempotent" => one(idempotent_family_witness(
            window.unwrap_or(DEFAULT_IDEMPOTENT_WINDOW),
            candidates,
        )),
        "gmb2" => one(square_zero_refutation_report(
            window.unwrap_or(DEFAULT_SQUARE_ZERO_WINDOW),
            candidates,
        )),
        "beta2-domain" => one(monomial_family_witness(
            window.unwrap_or(DEFAULT_SQUARE_ZERO_WINDOW),
            candidates,
        )),
        "all" => Ok(vec![
            ideal_tensor_witness(
                &IdealTensorVariant::ModPrimeSquare { p: 2 },
                window.unwrap_or(DEFAULT_EMBED_DEGREE),
            )?,
            ideal_tensor_witness(
                &IdealTensorVariant::SquareZeroPair,
                window.unwrap_or(DEFAULT_EMBED_DEGREE),
            )?,
            idempotent_family_witness(window.unwrap_or(DEFAULT_IDEMPOTENT_WINDOW), candidates)?,
            square_zero_refutation_report(
                window.unwrap_or(DEFAULT_SQUARE_ZERO_WINDOW),
                candidates,
            )?,
            monomial_family_witness(window.unwrap_or(DEFAULT_SQUARE_ZERO_WINDOW), candidates)?,
        ]),
        other => Err(UsageError(format!(
            "unknown witness `{other}` (expected wd2-zp2, wd2-qxy, mu-idempotent, gmb2, beta2-domain, all)"
        ))),
    }
}

/// Worker count for the sweep, from `AMALG_WORKERS` (default 1).
fn worker_count() -> usize {
    std::env::var("AMALG_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|v| *v >= 1)
        .unwrap_or(1)
}

/// The sweep partitions its enumeration across worker threads; results are
/// order-independent because the per-word images are merged into one sorted
/// map afterwards.
fn parallel_sweep(
    ring: &RingSpec,
    max_len: usize,
    degree: usize,
    workers: usize,
) -> Result<SweepReport, UsageError> {
    if degree < max_len {
        return Err(UsageError("sweep degree must be at least max-len".into()));
    }
    let words = reduced_words(2, max_len);
    let alphabet = Alphabet::ab();
    let chunk_size = words.len().div_ceil(workers.max(1));
    let images: Vec<(NcSeries, amalg_core::freegroup::GroupWord)> = std::thread::scope(|scope| {
        let alphabet = &alphabet;
        let handles: Vec<_> = words
            .chunks(chunk_size)
            .map(|chunk| {
                scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|word| {
                            let f = GroupRingElement::from_word(ring, word.clone());
                            let image =
                                magnus(&f, alphabet, degree).expect("two-letter alphabet");
                            (image, word.clone())
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut seen: std::collections::BTreeMap<NcSeries, amalg_core::freegroup::GroupWord> =
        std::collections::BTreeMap::new();
    let mut collisions = Vec::new();
    for (image, word) in images {
        if let Some(previous) = seen.get(&image) {
            collisions.push((previous.clone(), word));
        } else {
            seen.insert(image, word);
        }
    }
    Ok(SweepReport { words: words.len(), distinct: seen.len(), collisions })
}
