use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use circuit_codes::canon::{canonical_circuit, classify_inversion};
use circuit_codes::corpus::{corpus_entry, CORPUS};
use circuit_codes::direct::{direct_search, direct_search_parallel, DirectSummary, PruneLevel, SearchConfig};
use circuit_codes::extended::{build_extended_graph, circuit_chain, symmetry_orbits, EXTENDED_MAX_DIM};
use circuit_codes::joiner::{join_pool, parse_pool, JoinLimits};
use circuit_codes::permuted::{expand, PermutedCode, PermutedSearch, SearchLimits, SkeletonPolicy};
use circuit_codes::record::Record;
use circuit_codes::spread::{verify_spread, SpreadCheck};
use circuit_codes::structure::{detect_permuted, is_natural};
use circuit_codes::{Code, CodeKind, Error, Permutation, TransitionSequence, MAX_DIM};

#[derive(Parser)]
#[command(name = "circuit-codes", version, about = "Snakes and coils in the hypercube")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check sequences, record files or corpus entries.
    Verify(VerifyArgs),
    /// Expand an initial sequence by a permutation.
    Expand(ExpandArgs),
    /// Search for codes.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Report symmetries and structure of a coil.
    Classify(ClassifyArgs),
    /// List the built-in corpus.
    Corpus,
}

#[derive(Args)]
struct CodeArgs {
    /// Dimension; inferred from the largest coordinate if omitted.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 2)]
    spread: usize,
    #[arg(long, default_value = "coil")]
    kind: CodeKind,
}

#[derive(Args)]
struct Input {
    /// Corpus id or file (one sequence or JSON record per line; `-` for stdin).
    target: Option<String>,
    /// Sequence given inline.
    #[arg(long)]
    seq: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    code: CodeArgs,
    /// Verify every corpus entry.
    #[arg(long)]
    all_corpus: bool,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long)]
    initial: String,
    /// Permutation in cycle notation, e.g. `(123450)(786)9`.
    #[arg(long)]
    perm: String,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    period: usize,
    /// Keep only changes `0..=i` of the final segment.
    #[arg(long)]
    truncation: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 2)]
    spread: usize,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 2)]
    spread: usize,
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Print only a summary line.
    #[arg(long)]
    summary_only: bool,
    /// Worker threads; 1 streams results as they are found.
    #[arg(long, default_value_t = 1)]
    tasks: usize,
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Permuted codes over all cycle types and initial leaps.
    Permuted {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        min_period: usize,
        #[arg(long)]
        max_period: Option<usize>,
        /// Restrict to cycle types, e.g. `6,3` (repeatable).
        #[arg(long, value_parser = parse_cycle_type)]
        cycle_type: Vec<Vec<usize>>,
        /// Longest initial sequence.
        #[arg(long)]
        max_len: Option<usize>,
        /// Emit every result rather than the longest per skeleton.
        #[arg(long)]
        exhaustive: bool,
        /// Also allow a truncated final segment.
        #[arg(long)]
        truncated: bool,
        /// Require distance at least k between segment starts.
        #[arg(long)]
        strict: bool,
    },
    /// Natural codes: identity permutation, period 2.
    Natural {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        exhaustive: bool,
    },
    /// Direct backtracking search.
    Direct {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "coil")]
        kind: CodeKind,
        /// Disable subsequence pruning.
        #[arg(long)]
        no_prune: bool,
        /// Also print every code at least this long as it is found.
        #[arg(long)]
        min_length: Option<usize>,
        /// Depth at which the tree is split into parallel tasks.
        #[arg(long, default_value_t = 8)]
        split_depth: usize,
    },
    /// Join pairs of snakes from a pool into (d+1)-snakes or coils.
    Join {
        #[command(flatten)]
        common: Common,
        /// File with one d-snake per line.
        #[arg(long)]
        pool: PathBuf,
        #[arg(long, default_value = "coil")]
        kind: CodeKind,
        /// Results per pair.
        #[arg(long)]
        max_results: Option<usize>,
    },
}

fn parse_cycle_type(s: &str) -> Result<Vec<usize>, String> {
    let parts: Result<Vec<usize>, _> = s.split([',', '+']).map(|p| p.trim().parse::<usize>()).collect();
    let mut parts = parts.map_err(|e| e.to_string())?;
    if parts.contains(&0) {
        return Err("cycle lengths must be positive".into());
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(parts)
}

/// Failure modes mapped to exit codes.
enum Failure {
    /// Checked and found invalid, or nothing found.
    Negative,
    /// Bad flags or unreadable input.
    Usage(String),
    /// Stdout was closed by the reader.
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Expand(args) => expand_cmd(args),
        Command::Search(cmd) => search(cmd),
        Command::Classify(args) => classify(args),
        Command::Corpus => list_corpus(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// One sequence to check, with the parameters it claims.
struct Item {
    label: String,
    seq: TransitionSequence,
    kind: CodeKind,
    spread: usize,
    expected: Option<usize>,
}

fn parse_seq(text: &str, dim: Option<usize>) -> Result<TransitionSequence, Error> {
    let seq = TransitionSequence::parse(text, dim.unwrap_or(MAX_DIM))?;
    match dim {
        Some(_) => Ok(seq),
        None => seq.with_dim(seq.min_dim().max(1)),
    }
}

fn read_input(input: &Input, dim: Option<usize>, kind: CodeKind, spread: usize) -> Result<Vec<Item>, Failure> {
    if let Some(text) = &input.seq {
        return Ok(vec![Item {
            label: "sequence".into(),
            seq: parse_seq(text, dim)?,
            kind,
            spread,
            expected: None,
        }]);
    }
    let Some(target) = &input.target else {
        return Err(Failure::Usage("give a corpus id, a file, or --seq".into()));
    };
    if let Some(entry) = corpus_entry(target) {
        return Ok(vec![Item {
            label: entry.id.into(),
            seq: entry.sequence()?,
            kind: entry.kind,
            spread: entry.spread,
            expected: Some(entry.expected_len),
        }]);
    }
    let text = if target == "-" {
        io::read_to_string(io::stdin())?
    } else {
        std::fs::read_to_string(target).map_err(|e| Failure::Usage(format!("{target}: {e}")))?
    };
    let mut items = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let label = format!("{target}:{}", no + 1);
        if line.starts_with('{') {
            let rec: Record = serde_json::from_str(line).map_err(|e| Failure::Usage(format!("{label}: {e}")))?;
            items.push(Item {
                seq: parse_seq(&rec.transitions, Some(rec.d)).map_err(|e| Failure::Usage(format!("{label}: {e}")))?,
                label,
                kind: rec.kind,
                spread: rec.k,
                expected: Some(rec.n),
            });
        } else {
            let seq = parse_seq(line, dim).map_err(|e| Failure::Usage(format!("{target}: line {}: {e}", no + 1)))?;
            items.push(Item {
                label,
                seq,
                kind,
                spread,
                expected: None,
            });
        }
    }
    Ok(items)
}

fn verify(args: VerifyArgs) -> Outcome {
    let items = if args.all_corpus {
        CORPUS
            .iter()
            .map(|e| {
                Ok(Item {
                    label: e.id.into(),
                    seq: e.sequence()?,
                    kind: e.kind,
                    spread: e.spread,
                    expected: Some(e.expected_len),
                })
            })
            .collect::<Result<Vec<_>, Error>>()?
    } else {
        read_input(&args.input, args.code.dim, args.code.kind, args.code.spread)?
    };
    let mut all_ok = true;
    for Item {
        label,
        seq,
        kind,
        spread,
        expected,
    } in items
    {
        let n = seq.len();
        let check = verify_spread(kind, spread, &seq)?;
        let mut line = format!("{label}: {kind} d={} k={spread} N={n}: ", seq.dim());
        let ok = match check {
            SpreadCheck::Valid => {
                line.push_str("valid");
                true
            }
            SpreadCheck::Violated(v) => {
                line.push_str(&format!(
                    "invalid: x_{} and x_{} at distance {}",
                    v.i, v.j, v.distance
                ));
                false
            }
            SpreadCheck::NotClosed => {
                line.push_str("invalid: does not close");
                false
            }
            SpreadCheck::TooShort => {
                line.push_str("invalid: shorter than 4");
                false
            }
        };
        let len_ok = expected.is_none_or(|e| e == n);
        if !len_ok {
            line.push_str(&format!(" (expected N={})", expected.unwrap()));
        }
        writeln!(io::stdout(), "{line}")?;
        all_ok &= ok && len_ok;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn expand_cmd(args: ExpandArgs) -> Outcome {
    let initial = TransitionSequence::parse(&args.initial, args.dim)?;
    let perm = Permutation::parse_cycles(&args.perm, args.dim)?;
    let seq = expand(&initial, &perm, args.period, args.truncation)?;
    writeln!(io::stdout(), "{seq}")?;
    Ok(())
}

fn pool(tasks: usize) -> Result<rayon::ThreadPool, Failure> {
    if tasks == 0 {
        return Err(Failure::Usage("--tasks must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(tasks)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn check_common(c: &Common) -> Outcome {
    if c.dim < 1 || c.dim > MAX_DIM {
        return Err(Failure::Usage(format!("--dim must be in 1..={MAX_DIM}")));
    }
    if c.spread < 1 {
        return Err(Failure::Usage("--spread must be at least 1".into()));
    }
    Ok(())
}

fn search(cmd: SearchCommand) -> Outcome {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cmd {
        SearchCommand::Permuted {
            common,
            min_period,
            max_period,
            cycle_type,
            max_len,
            exhaustive,
            truncated,
            strict,
        } => {
            check_common(&common)?;
            for t in &cycle_type {
                if t.iter().sum::<usize>() != common.dim {
                    return Err(Failure::Usage(format!("cycle type {t:?} does not sum to {}", common.dim)));
                }
            }
            let cfg = PermutedSearch {
                min_period,
                max_period,
                cycle_types: cycle_type,
                truncated,
                policy: if strict {
                    SkeletonPolicy::Strict
                } else {
                    SkeletonPolicy::Default
                },
                limits: SearchLimits {
                    max_initial_len: max_len,
                    max_nodes: common.max_nodes,
                    exhaustive,
                },
                ..PermutedSearch::new(common.dim, common.spread)
            };
            run_permuted(&common, &mut out, |sink| {
                if common.tasks == 1 {
                    let stats = cfg.run(&mut |c| sink(c));
                    Ok(stats.complete)
                } else {
                    let (codes, stats) = pool(common.tasks)?.install(|| cfg.run_parallel());
                    codes.into_iter().for_each(sink);
                    Ok(stats.complete)
                }
            })
        }
        SearchCommand::Natural {
            common,
            max_len,
            exhaustive,
        } => {
            check_common(&common)?;
            let cfg = PermutedSearch {
                min_period: 2,
                max_period: Some(2),
                cycle_types: vec![vec![1; common.dim]],
                limits: SearchLimits {
                    max_initial_len: max_len,
                    max_nodes: common.max_nodes,
                    exhaustive,
                },
                ..PermutedSearch::new(common.dim, common.spread)
            };
            run_permuted(&common, &mut out, |sink| {
                let (codes, stats) = pool(common.tasks)?.install(|| cfg.run_parallel());
                codes.into_iter().for_each(sink);
                Ok(stats.complete)
            })
        }
        SearchCommand::Direct {
            common,
            kind,
            no_prune,
            min_length,
            split_depth,
        } => {
            check_common(&common)?;
            if common.dim < 2 {
                return Err(Failure::Usage("direct search needs --dim >= 2".into()));
            }
            let cfg = SearchConfig {
                max_nodes: common.max_nodes,
                min_report_length: if common.summary_only { None } else { min_length },
                prune: if no_prune { PruneLevel::None } else { PruneLevel::Subsequence },
                ..SearchConfig::new(common.dim, common.spread, kind)
            };
            let summary: DirectSummary = if common.tasks == 1 {
                let mut err = None;
                let s = direct_search(&cfg, &mut |c| {
                    if let Err(e) = writeln!(out, "{}", Record::from_code(&c).to_line()) {
                        err.get_or_insert(e);
                    }
                })?;
                if let Some(e) = err {
                    return Err(e.into());
                }
                s
            } else {
                let (codes, s) = pool(common.tasks)?.install(|| direct_search_parallel(&cfg, split_depth))?;
                for c in codes {
                    writeln!(out, "{}", Record::from_code(&c).to_line())?;
                }
                s
            };
            let line = json!({
                "max_length": summary.max_length,
                "classes": summary.class_count(),
                "nodes": summary.nodes,
                "complete": summary.complete,
            });
            if common.summary_only {
                writeln!(out, "{line}")?;
            } else {
                if min_length.is_none() {
                    for code in summary.maximal.values() {
                        writeln!(out, "{}", Record::from_code(code).to_line())?;
                    }
                }
                eprintln!("{line}");
            }
            out.flush()?;
            if summary.max_length > 0 {
                Ok(())
            } else {
                Err(Failure::Negative)
            }
        }
        SearchCommand::Join {
            common,
            pool: path,
            kind,
            max_results,
        } => {
            check_common(&common)?;
            let text = std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let snakes = parse_pool(&text, common.dim, common.spread)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let limits = JoinLimits {
                max_nodes: common.max_nodes,
                max_results,
            };
            let (results, stats) = pool(common.tasks)?.install(|| join_pool(snakes, kind, &limits))?;
            let longest = results.iter().map(|r| r.code.len()).max().unwrap_or(0);
            if !common.summary_only {
                for r in &results {
                    writeln!(out, "{}", Record::from_code(&r.code).to_line())?;
                }
            }
            let line = json!({
                "results": results.len(),
                "max_length": longest,
                "nodes": stats.nodes,
                "complete": stats.complete,
            });
            if common.summary_only {
                writeln!(out, "{line}")?;
            } else {
                eprintln!("{line}");
            }
            out.flush()?;
            if results.is_empty() {
                Err(Failure::Negative)
            } else {
                Ok(())
            }
        }
    }
}

/// Streams permuted results as records (unless summary-only) and prints a
/// summary line.
fn run_permuted(
    common: &Common,
    out: &mut impl Write,
    run: impl FnOnce(&mut dyn FnMut(PermutedCode)) -> Result<bool, Failure>,
) -> Outcome {
    let mut count = 0usize;
    let mut longest = 0usize;
    let mut err = None;
    let complete = run(&mut |c: PermutedCode| {
        count += 1;
        longest = longest.max(c.len());
        if !common.summary_only {
            if let Err(e) = writeln!(out, "{}", Record::from_permuted(&c).to_line()) {
                err.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    let line = json!({ "results": count, "max_length": longest, "complete": complete });
    if common.summary_only {
        writeln!(out, "{line}")?;
    } else {
        eprintln!("{line}");
    }
    out.flush()?;
    if count > 0 {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn classify(args: ClassifyArgs) -> Outcome {
    let items = read_input(&args.input, args.dim, CodeKind::Coil, args.spread)?;
    let mut all_ok = true;
    for Item { label, seq, spread, .. } in items {
        let code = match Code::new(CodeKind::Coil, spread, seq) {
            Ok(c) => c,
            Err(e) => {
                writeln!(io::stdout(), "{}", json!({ "input": label, "error": e.to_string() }))?;
                all_ok = false;
                continue;
            }
        };
        let inv = classify_inversion(&code)?;
        let permuted: Vec<_> = detect_permuted(code.seq())
            .into_iter()
            .map(|p| json!({ "L": p.segment_len, "P": p.period, "perm": p.perm.cycle_notation(), "offset": p.offset }))
            .collect();
        let mut report = json!({
            "input": label,
            "d": code.dim(),
            "k": spread,
            "N": code.len(),
            "key": canonical_circuit(code.seq())?.to_hex(),
            "invertible": inv.invertible,
            "vertex_fixed": inv.vertex_fixed,
            "change_fixed": inv.change_fixed,
            "natural": is_natural(code.seq()),
            "permuted": permuted,
        });
        if code.dim() <= EXTENDED_MAX_DIM {
            let g = build_extended_graph(code.dim(), &[circuit_chain(code.seq())])?;
            let on_coil: std::collections::HashSet<u64> = circuit_codes::walk(
                circuit_codes::Vertex::zero(code.dim())?,
                code.seq(),
            )?
            .into_iter()
            .map(|v| v.bits())
            .collect();
            let sizes: Vec<usize> = symmetry_orbits(&g)?
                .into_iter()
                .filter(|o| o.iter().any(|v| on_coil.contains(&v.bits())))
                .map(|o| o.len())
                .collect();
            report["orbits"] = json!(sizes);
        }
        writeln!(io::stdout(), "{report}")?;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn list_corpus() -> Outcome {
    for e in CORPUS {
        writeln!(
            io::stdout(),
            "{}\t{} d={} k={} N={}\t{}",
            e.id,
            e.kind,
            e.dim,
            e.spread,
            e.expected_len,
            e.source
        )?;
    }
    Ok(())
}
