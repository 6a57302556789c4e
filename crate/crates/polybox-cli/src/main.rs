//! Command-line surface: verification, censuses, the two-level cover
//! pipeline, clique search, rigidity verdicts, and tilings.
//!
//! Reports are byte-reproducible given identical inputs and budgets: no
//! timestamps in result payloads. Every run emits a manifest (command,
//! parameters, digests, timing) on stderr as a single JSON line.
//!
//! Exit codes: 0 success/verified, 1 mismatch, 2 budget exceeded,
//! 3 input error.

mod manifest;
mod report;

use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use polybox::census::{census, pipeline_over};
use polybox::enumeration::{
    enumerate_q_equivalent_pairs, pair_canonical, CoverWordOpts,
};
use polybox::error::{Budget, Error};
use polybox::fileio;
use polybox::iso::{apply, Stabilizer};
use polybox::keller::{max_clique, partition_code_search};
use polybox::rigidity::{find_equivalent_codes, SuitSearchOpts, Verdict};
use polybox::tables;
use polybox::tiling::{
    realize_tiling, tiling_r_stats, tiling_twin_pairs, validate_tiling,
    IntervalMap,
};
use polybox::{Alphabet, PolyboxCode};

use manifest::RunManifest;
use report::{Format, Record, Report};

#[derive(Parser)]
#[command(name = "polybox", version, about = "Exact combinatorics of polybox codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Search-node budget (default: POLYBOX_BUDGET_NODES, else unlimited).
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Wall-clock budget in seconds (default: POLYBOX_BUDGET_SECONDS).
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    JsonLines,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Regenerate the embedded cover and pair tables and diff them.
    VerifyTables,
    /// Census of twin-pair-free covers of the all-b word.
    Census {
        #[arg(long)]
        dim: usize,
        /// Cover sizes, e.g. 5..11 (inclusive).
        #[arg(long, value_parser = parse_range)]
        sizes: RangeInclusive<usize>,
        /// Alphabet class count.
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        /// List every cover class with its orbit size.
        #[arg(long)]
        expand_orbits: bool,
    },
    /// Two-level cover-closure pipeline over the census classes.
    PipelineKe2 {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        /// Largest cover of a code considered (default 16).
        #[arg(long, default_value_t = 16)]
        max_cover_words: usize,
    },
    /// Maximum clique of the Keller graph (twin-pair-free code size).
    Clique {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        classes: usize,
        /// Search for a partition code (2^d-clique) instead.
        #[arg(long)]
        partition: bool,
    },
    /// Rigidity verdict for a code file.
    Rigidity {
        #[arg(long, value_name = "FILE")]
        r#in: std::path::PathBuf,
        /// Keep only witnesses disjoint from the input code.
        #[arg(long)]
        disjoint: bool,
    },
    /// Tiling realization, validation, and r-statistics.
    Tiling {
        #[command(subcommand)]
        action: TilingAction,
    },
}

#[derive(Subcommand, Clone)]
enum TilingAction {
    /// Realize a partition code file as a 2-periodic tiling.
    Realize {
        #[arg(long, value_name = "FILE")]
        r#in: std::path::PathBuf,
        /// Per-class offsets, e.g. 0,1/3,1/2 (same at every coordinate).
        #[arg(long)]
        offsets: String,
    },
    /// Validate a tiling file as an exact torus tiling.
    Validate {
        #[arg(long, value_name = "FILE")]
        r#in: std::path::PathBuf,
    },
    /// Twin pairs and r-statistics of a tiling file.
    Stats {
        #[arg(long, value_name = "FILE")]
        r#in: std::path::PathBuf,
        #[arg(long, default_value_t = 2)]
        sample_denominator: u64,
    },
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {text:?}"))?;
    let lo: usize = lo.parse().map_err(|_| format!("bad bound {lo:?}"))?;
    let hi: usize = hi.parse().map_err(|_| format!("bad bound {hi:?}"))?;
    Ok(lo..=hi)
}

fn budget_from(common: &Common) -> Budget {
    let env_nodes = std::env::var("POLYBOX_BUDGET_NODES")
        .ok()
        .and_then(|v| v.parse().ok());
    let env_seconds = std::env::var("POLYBOX_BUDGET_SECONDS")
        .ok()
        .and_then(|v| v.parse().ok());
    Budget {
        max_nodes: common.budget_nodes.or(env_nodes),
        max_seconds: common.budget_seconds.or(env_seconds),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let budget = budget_from(&cli.common);
    let mut manifest = RunManifest::start(&cli.common, budget);
    let outcome = run(&cli.command, budget, &mut manifest);
    match outcome {
        Ok((report, verified)) => {
            let format = match cli.common.format {
                OutputFormat::Text => Format::Text,
                OutputFormat::JsonLines => Format::JsonLines,
            };
            let rendered = report.render(format);
            manifest.finish(&rendered);
            if let Some(path) = &cli.common.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            } else {
                print!("{rendered}");
            }
            eprintln!("{}", manifest.to_json());
            if verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BudgetExceeded { .. } => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

/// Run a command; `Ok((report, verified))` where `verified` is false for
/// verification mismatches (exit code 1).
fn run(
    command: &Command,
    budget: Budget,
    manifest: &mut RunManifest,
) -> Result<(Report, bool), Error> {
    match command {
        Command::VerifyTables => verify_tables(budget),
        Command::Census { dim, sizes, alphabet, expand_orbits } => {
            manifest.param("dim", dim);
            manifest.param("sizes", &format!("{}..{}", sizes.start(), sizes.end()));
            let r = census(*dim, *alphabet, sizes.clone(), budget)?;
            let mut report = Report::new();
            let ab = Alphabet::with_classes(*alphabet);
            let mut head = Record::new("census");
            head.push("dim", r.dim);
            head.push("alphabet-classes", r.alphabet_classes);
            head.push("sizes", format!("{}..{}", r.sizes.0, r.sizes.1));
            head.push("total-covers", r.total_covers);
            head.push("classes", r.class_count);
            report.push(head);
            for line in &r.per_size {
                let mut rec = Record::new("size");
                rec.push("size", line.size);
                rec.push("covers", line.covers);
                rec.push("classes", line.classes);
                report.push(rec);
            }
            if *expand_orbits {
                for class in &r.classes {
                    let mut rec = Record::new("class");
                    rec.push(
                        "representative",
                        report::format_code(&class.representative, &ab),
                    );
                    rec.push("orbit-size", class.orbit_size);
                    report.push(rec);
                }
            }
            Ok((report, true))
        }
        Command::PipelineKe2 { dim, alphabet, max_cover_words } => {
            manifest.param("dim", dim);
            let sizes = census_sizes(*dim)?;
            let c = census(*dim, *alphabet, sizes, budget)?;
            let p = pipeline_over(&c, *max_cover_words, budget)?;
            let mut report = Report::new();
            let mut head = Record::new("pipeline");
            head.push("dim", p.dim);
            head.push("max-cover-words", p.max_cover_words);
            head.push("census-classes", c.class_count);
            head.push(
                "second-levels-all-empty",
                p.all_second_levels_empty(),
            );
            report.push(head);
            for line in p.lines.iter().filter(|l| l.first_level > 0) {
                let mut rec = Record::new("class");
                rec.push("seed-words", line.seed_size);
                rec.push("first-level-covers", line.first_level);
                rec.push("second-level-covers", line.second_level);
                report.push(rec);
            }
            Ok((report, true))
        }
        Command::Clique { dim, classes, partition } => {
            manifest.param("dim", dim);
            let mut report = Report::new();
            let mut rec = Record::new("clique");
            rec.push("dim", *dim);
            rec.push("alphabet-classes", *classes);
            let ab = Alphabet::with_classes(*classes);
            if *partition {
                let found = partition_code_search(*classes, *dim, true, budget)?;
                rec.push("partition-code-exists", found.is_some());
                if let Some(code) = found {
                    rec.push("witness", report::format_code(&code, &ab));
                }
            } else {
                let w = max_clique(*classes, *dim, budget)?;
                if !w.certified {
                    return Err(Error::BudgetExceeded { nodes: w.nodes });
                }
                rec.push("max-clique", w.clique.len());
                rec.push("witness", report::format_code(&w.clique, &ab));
            }
            report.push(rec);
            Ok((report, true))
        }
        Command::Rigidity { r#in, disjoint } => {
            let text = std::fs::read_to_string(r#in)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", r#in.display())))?;
            manifest.input(&text);
            let (code, ab) = fileio::read_code(&text)?;
            let opts = SuitSearchOpts {
                disjoint: *disjoint,
                budget,
                // A verdict needs one witness; cap the listing so huge
                // witness families do not flood the report.
                limit: Some(16),
                ..SuitSearchOpts::new(ab.classes())
            };
            let result = find_equivalent_codes(&code, &opts)?;
            if result.verdict == Verdict::Inconclusive {
                return Err(Error::BudgetExceeded { nodes: result.nodes });
            }
            let mut report = Report::new();
            let mut rec = Record::new("rigidity");
            rec.push("words", code.len());
            rec.push(
                "verdict",
                match result.verdict {
                    Verdict::Rigid => "rigid",
                    Verdict::NotRigid => "not-rigid",
                    Verdict::Inconclusive => unreachable!(),
                },
            );
            rec.push("witnesses", result.witnesses.len());
            report.push(rec);
            for w in &result.witnesses {
                let mut rec = Record::new("witness");
                rec.push("code", report::format_code(w, &ab));
                report.push(rec);
            }
            Ok((report, true))
        }
        Command::Tiling { action } => tiling_command(action, manifest),
    }
}

fn census_sizes(dim: usize) -> Result<RangeInclusive<usize>, Error> {
    match dim {
        5 => Ok(5..=11),
        6 => Ok(5..=10),
        d if d <= 4 => Ok(2..=(1 << d)),
        other => Err(Error::InvalidInput(format!(
            "no default census size range for dimension {other}"
        ))),
    }
}

fn verify_tables(budget: Budget) -> Result<(Report, bool), Error> {
    let ab = tables::table_alphabet();
    let mut report = Report::new();
    let mut ok = true;

    // Covers of bbbbb with five and six words: regenerate, and check each
    // embedded cover is found verbatim in the regenerated family.
    let u = polybox::parse_word("bbbbb", &ab)?;
    for (size, golden) in
        [(5, tables::five_word_cover()), (6, tables::six_word_cover())]
    {
        let opts = CoverWordOpts { budget, ..CoverWordOpts::new(2) };
        let family = polybox::enumeration::cover_word(&u, size, &opts)?;
        let found = family.contains(&golden);
        let mut rec = Record::new("cover-table");
        rec.push("size", size);
        rec.push("family-covers", family.members.len());
        rec.push("embedded-cover-found", found);
        report.push(rec);
        ok &= found;
    }

    // Pair classification: regenerate the classes of disjoint
    // twin-pair-free bbb-equivalent pairs and match every embedded row to
    // a distinct class.
    let q = tables::equivalent_pair_target();
    let classes = enumerate_q_equivalent_pairs(&q, 2, None, budget)?;
    let stab = Stabilizer::of_word(&q, 2);
    let mut matched: Vec<Option<usize>> = Vec::new();
    for (k_side, m_side) in tables::equivalent_pair_table() {
        let canon = pair_canonical(k_side.words(), m_side.words(), &stab);
        let hit = classes.iter().position(|c| {
            (c.first.words().to_vec(), c.second.words().to_vec()) == canon
        });
        matched.push(hit);
    }
    // Completeness: every enumerated class matches some row directly or
    // with its sides swapped.
    let rows = tables::equivalent_pair_table();
    let unmatched_classes = classes
        .iter()
        .filter(|c| {
            !rows.iter().any(|(k_side, m_side)| {
                isomorphic_pair(&c.first, &c.second, k_side, m_side, &stab)
                    || isomorphic_pair(&c.first, &c.second, m_side, k_side, &stab)
            })
        })
        .count();
    let distinct: std::collections::BTreeSet<_> =
        matched.iter().flatten().collect();
    let rows_matched = matched.iter().flatten().count();
    let mut rec = Record::new("pair-table");
    rec.push("rows", matched.len());
    rec.push("rows-matched", rows_matched);
    rec.push("distinct-classes-matched", distinct.len());
    rec.push("enumerated-ordered-classes", classes.len());
    rec.push("classes-outside-table", unmatched_classes);
    report.push(rec);
    for (row, hit) in matched.iter().enumerate() {
        if hit.is_none() {
            let mut rec = Record::new("mismatch");
            rec.push("row", row + 1);
            report.push(rec);
            ok = false;
        }
    }
    ok &= rows_matched == 17 && distinct.len() == 17 && unmatched_classes == 0;
    Ok((report, ok))
}

/// Ordered pairs `(a1, a2)` and `(b1, b2)` are in the same class when one
/// reference-fixing map sends both sides over simultaneously.
fn isomorphic_pair(
    a1: &PolyboxCode,
    a2: &PolyboxCode,
    b1: &PolyboxCode,
    b2: &PolyboxCode,
    stab: &Stabilizer,
) -> bool {
    if a1.len() != b1.len() || a2.len() != b2.len() {
        return false;
    }
    stab.elements
        .iter()
        .any(|f| &apply(f, a1) == b1 && &apply(f, a2) == b2)
}

fn tiling_command(
    action: &TilingAction,
    manifest: &mut RunManifest,
) -> Result<(Report, bool), Error> {
    match action {
        TilingAction::Realize { r#in, offsets } => {
            let text = std::fs::read_to_string(r#in)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", r#in.display())))?;
            manifest.input(&text);
            let (code, _ab) = fileio::read_code(&text)?;
            let offsets: Vec<Ratio<i64>> = offsets
                .split(',')
                .map(parse_fraction)
                .collect::<Result<_, Error>>()?;
            let map = IntervalMap::uniform(code.dim(), &offsets)?;
            let tiling = realize_tiling(&code, &map)?;
            let mut report = Report::new();
            let mut rec = Record::new("tiling");
            rec.push("cubes", tiling.translations().len());
            rec.push("valid", true);
            report.push(rec);
            let mut body = Record::new("translations");
            body.push("file", fileio::write_tiling(&tiling).trim_end());
            report.push(body);
            Ok((report, true))
        }
        TilingAction::Validate { r#in } => {
            let text = std::fs::read_to_string(r#in)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", r#in.display())))?;
            manifest.input(&text);
            let tiling = fileio::read_tiling(&text)?;
            let valid = validate_tiling(&tiling)?;
            let mut report = Report::new();
            let mut rec = Record::new("tiling");
            rec.push("cubes", tiling.translations().len());
            rec.push("valid", valid);
            report.push(rec);
            Ok((report, valid))
        }
        TilingAction::Stats { r#in, sample_denominator } => {
            let text = std::fs::read_to_string(r#in)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", r#in.display())))?;
            manifest.input(&text);
            let tiling = fileio::read_tiling(&text)?;
            if !validate_tiling(&tiling)? {
                return Err(Error::InvalidInput(
                    "not a tiling; statistics need a valid tiling".into(),
                ));
            }
            let (r_minus, r_plus) = tiling_r_stats(&tiling, *sample_denominator)?;
            let mut report = Report::new();
            let mut rec = Record::new("tiling-stats");
            rec.push("cubes", tiling.translations().len());
            rec.push("twin-pairs", tiling_twin_pairs(&tiling).len());
            rec.push("r-minus", r_minus);
            rec.push("r-plus", r_plus);
            rec.push("sample-denominator", *sample_denominator);
            report.push(rec);
            Ok((report, true))
        }
    }
}

fn parse_fraction(text: &str) -> Result<Ratio<i64>, Error> {
    let bad = || Error::InvalidInput(format!("expected a fraction: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(n, d))
        }
        None => Ok(Ratio::from_integer(
            text.trim().parse().map_err(|_| bad())?,
        )),
    }
}
