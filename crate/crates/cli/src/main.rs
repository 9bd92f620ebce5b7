//! `collatz`: stopping counts, trajectories, decompositions, family
//! tables, seed searches, and desk-scale verification sweeps, with
//! text, JSON, and CSV output.
//!
//! Exit codes: 0 success, 1 domain error (overflow, exhausted budget,
//! bad memo file), 2 usage error (bad flags or violated preconditions).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use collatz_core::{
    check_partition, check_step_identities, decomposition_consistency, family_term,
    general_term, parametric_term, predicted_steps, seed_search, seed_search_chain,
    stopping_count_with, syracuse_decompose, trajectory, verify_range, CollatzInt, Convention,
    Error, FamilyName, FamilySpec, MemoTable, ParametricName, VerifyConfig, VerifyReport,
    DEFAULT_BUDGET, DEFAULT_CHUNK_SIZE,
};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "collatz",
    version,
    about = "Collatz trajectories, stopping counts, odd-number families, and range verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Stopping-count convention: N(1) = 3 under paper, 0 under standard
    #[arg(long, global = true, default_value = "paper", value_parser = parse_convention)]
    convention: Convention,

    /// Maximum f-applications per seed
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u32,

    /// Memo table file produced by memo-build
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Worker threads for sweeps (default: host parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seeds per work chunk during sweeps
    #[arg(long, global = true, default_value_t = DEFAULT_CHUNK_SIZE)]
    chunk_size: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stopping count N(n)
    Steps {
        #[arg(value_parser = parse_cint)]
        n: CollatzInt,
    },
    /// Trajectory of a seed down to 1 (or until the budget runs out)
    Traj {
        #[arg(value_parser = parse_cint)]
        n: CollatzInt,
    },
    /// Syracuse decomposition of one odd n, or a --max-odd consistency sweep
    Decompose {
        #[arg(value_parser = parse_cint, required_unless_present = "max_odd", conflicts_with = "max_odd")]
        n: Option<CollatzInt>,
        /// Check sum(s_i) + k = N(n) for every odd n up to this bound
        #[arg(long)]
        max_odd: Option<u64>,
    },
    /// Terms of a registry family (a..g) with predicted and oracle steps
    Family {
        #[arg(value_parser = parse_family)]
        name: FamilyName,
        #[arg(long, default_value_t = 5)]
        count: u32,
    },
    /// Terms of a parametric family D|J|M|K|S at parameter k
    Parametric {
        #[arg(value_parser = parse_parametric)]
        name: ParametricName,
        k: u64,
        #[arg(long, default_value_t = 5)]
        count: u32,
    },
    /// Orbit of an odd root under the general term
    General {
        #[arg(value_parser = parse_biguint)]
        n: BigUint,
        #[arg(long, default_value_t = 5)]
        count: u32,
    },
    /// Replay the family discovery chain, or search a single family
    Seedsearch {
        /// Search only this registry family instead of walking the chain
        #[arg(long, value_parser = parse_family)]
        family: Option<FamilyName>,
        /// Family terms scanned per search
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Chain length when no --family is given
        #[arg(long, default_value_t = 6)]
        rounds: usize,
    },
    /// Family root and index of an odd integer
    Roots {
        #[arg(value_parser = parse_biguint)]
        n: BigUint,
    },
    /// Scan [start, end) for convergence and extremal statistics
    Verify {
        #[arg(long, value_parser = parse_u128)]
        start: u128,
        #[arg(long, value_parser = parse_u128)]
        end: u128,
    },
    /// Sweep the step-count identities for k = 1..=max-k
    Identities {
        #[arg(long, default_value_t = 100_000)]
        max_k: u64,
    },
    /// Check the family-root partition of the odds up to a bound
    Partition {
        #[arg(long, default_value_t = 1_000_000)]
        max_odd: u64,
    },
    /// Build and save a stopping-count memo table
    MemoBuild {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse()
}

fn parse_cint(s: &str) -> Result<CollatzInt, String> {
    s.parse()
}

fn parse_family(s: &str) -> Result<FamilyName, String> {
    s.parse()
}

fn parse_parametric(s: &str) -> Result<ParametricName, String> {
    s.parse()
}

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    BigUint::from_str(s).map_err(|e| format!("not an unsigned integer: {e}"))
}

fn parse_u128(s: &str) -> Result<u128, String> {
    s.parse()
        .map_err(|e| format!("not an unsigned 128-bit integer: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::Precondition(_) | Error::InvalidConfig(_) => 2u8,
                _ => 1u8,
            })
        }
    }
}

/// Everything the global flags resolve to.
struct Ctx {
    format: OutputFormat,
    convention: Convention,
    budget: u32,
    cache: Option<MemoTable>,
    workers: usize,
    chunk_size: u64,
}

impl Ctx {
    fn from(cli: &Cli) -> Result<Ctx, Error> {
        let cache = match &cli.cache {
            Some(path) => Some(MemoTable::load_expecting(path, cli.convention)?),
            None => None,
        };
        let workers = cli.workers.unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |p| p.get())
        });
        Ok(Ctx {
            format: cli.format,
            convention: cli.convention,
            budget: cli.budget,
            cache,
            workers,
            chunk_size: cli.chunk_size,
        })
    }

    fn verify_config(&self, start: u128, end: u128) -> VerifyConfig<'_> {
        VerifyConfig {
            start,
            end,
            step_budget: self.budget,
            workers: self.workers,
            chunk_size: self.chunk_size,
            convention: self.convention,
            cache: self.cache.as_ref(),
        }
    }

    /// Stopping count through the cache when one is loaded.
    fn count(&self, n: u128) -> Result<u32, Error> {
        match &self.cache {
            Some(memo) => memo.stopping_count(n, self.budget),
            None => Ok(stopping_count_with(self.convention, CollatzInt::new(n)?, self.budget)?.count),
        }
    }

    /// Count of an arbitrary-precision value; None when it exceeds the
    /// 128-bit kernel or fails to converge within budget.
    fn count_big(&self, value: &BigUint) -> Option<u32> {
        let v = u128::try_from(value).ok()?;
        self.count(v).ok()
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let ctx = Ctx::from(&cli)?;
    match &cli.command {
        Cmd::Steps { n } => cmd_steps(&ctx, *n),
        Cmd::Traj { n } => cmd_traj(&ctx, *n),
        Cmd::Decompose { n: Some(n), .. } => cmd_decompose(&ctx, *n),
        Cmd::Decompose { n: None, max_odd } => {
            let max_odd = max_odd.expect("clap enforces n xor max-odd");
            let report = decomposition_consistency(max_odd, &ctx.verify_config(1, 2))?;
            render_report(&ctx, &report)
        }
        Cmd::Family { name, count } => cmd_family(&ctx, *name, *count),
        Cmd::Parametric { name, k, count } => cmd_parametric(&ctx, *name, *k, *count),
        Cmd::General { n, count } => cmd_general(&ctx, n, *count),
        Cmd::Seedsearch {
            family,
            depth,
            rounds,
        } => cmd_seedsearch(&ctx, *family, *depth, *rounds),
        Cmd::Roots { n } => cmd_roots(&ctx, n),
        Cmd::Verify { start, end } => {
            let report = verify_range(&ctx.verify_config(*start, *end))?;
            render_report(&ctx, &report)
        }
        Cmd::Identities { max_k } => {
            let report = check_step_identities(*max_k, &ctx.verify_config(1, 2))?;
            render_report(&ctx, &report)
        }
        Cmd::Partition { max_odd } => {
            let report = check_partition(*max_odd)?;
            render_report(&ctx, &report)
        }
        Cmd::MemoBuild { limit, out } => cmd_memo_build(&ctx, *limit, out),
    }
}

fn cmd_steps(ctx: &Ctx, n: CollatzInt) -> Result<(), Error> {
    let count = ctx.count(n.get())?;
    match ctx.format {
        OutputFormat::Text => println!("{count}"),
        OutputFormat::Json => print_json(&json!({
            "n": n.to_string(),
            "steps": count,
            "convention": ctx.convention.to_string(),
        })),
        OutputFormat::Csv => {
            println!("n,steps,convention");
            println!("{n},{count},{}", ctx.convention);
        }
    }
    Ok(())
}

fn cmd_traj(ctx: &Ctx, n: CollatzInt) -> Result<(), Error> {
    let t = trajectory(n, ctx.budget)?;
    match ctx.format {
        OutputFormat::Text => {
            let mut line = t.seed.to_string();
            for v in &t.values {
                line.push(' ');
                line.push_str(&v.to_string());
            }
            println!("{line}");
            println!(
                "steps={} peak={} converged={}",
                t.steps, t.peak, t.converged
            );
        }
        OutputFormat::Json => print_json(&json!({
            "n": t.seed.to_string(),
            "values": t.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "steps": t.steps,
            "peak": t.peak.to_string(),
            "converged": t.converged,
            "convention": ctx.convention.to_string(),
        })),
        OutputFormat::Csv => {
            println!("index,value");
            for (i, v) in t.values.iter().enumerate() {
                println!("{},{v}", i + 1);
            }
        }
    }
    Ok(())
}

fn cmd_decompose(ctx: &Ctx, n: CollatzInt) -> Result<(), Error> {
    let d = syracuse_decompose(n, ctx.budget)?;
    match ctx.format {
        OutputFormat::Text => {
            let pairs: Vec<String> = d.pairs.iter().map(|(s, b)| format!("({s},{b})")).collect();
            println!("pairs: {}", pairs.join(" "));
            println!(
                "valuation_sum={} k={} total_steps={}",
                d.valuation_sum(),
                d.k(),
                d.total_steps()
            );
        }
        OutputFormat::Json => print_json(&json!({
            "n": d.n.to_string(),
            "pairs": d.pairs.iter()
                .map(|(s, b)| json!({"s": s, "b": b.to_string()}))
                .collect::<Vec<_>>(),
            "k": d.k(),
            "valuation_sum": d.valuation_sum(),
            "total_steps": d.total_steps(),
        })),
        OutputFormat::Csv => {
            println!("i,s,b");
            for (i, (s, b)) in d.pairs.iter().enumerate() {
                println!("{},{s},{b}", i + 1);
            }
        }
    }
    Ok(())
}

/// One rendered term row shared by family/parametric/general output.
struct TermRow {
    index: u32,
    term: BigUint,
    predicted: Option<u32>,
    oracle: Option<u32>,
}

fn render_terms(
    ctx: &Ctx,
    headline: String,
    index_name: &str,
    rows: Vec<TermRow>,
    extra: Value,
) {
    match ctx.format {
        OutputFormat::Text => {
            println!("{headline}");
            for row in &rows {
                println!(
                    "{index_name}={} term={} predicted={} oracle={}",
                    row.index,
                    row.term,
                    opt(row.predicted),
                    opt(row.oracle)
                );
            }
        }
        OutputFormat::Json => {
            let mut object = extra;
            object["terms"] = rows
                .iter()
                .map(|row| {
                    json!({
                        index_name: row.index,
                        "term": row.term.to_string(),
                        "predicted_steps": row.predicted,
                        "oracle_steps": row.oracle,
                    })
                })
                .collect();
            object["convention"] = ctx.convention.to_string().into();
            print_json(&object);
        }
        OutputFormat::Csv => {
            println!("{index_name},term,predicted_steps,oracle_steps");
            for row in &rows {
                println!(
                    "{},{},{},{}",
                    row.index,
                    row.term,
                    opt(row.predicted),
                    opt(row.oracle)
                );
            }
        }
    }
}

fn opt(v: Option<u32>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn cmd_family(ctx: &Ctx, name: FamilyName, count: u32) -> Result<(), Error> {
    if count == 0 {
        return Err(Error::Precondition("--count must be at least 1".into()));
    }
    let spec = FamilySpec::by_name(name);
    let rows: Vec<TermRow> = (0..count)
        .map(|n| {
            let term = family_term(spec, n);
            TermRow {
                index: n,
                predicted: Some(predicted_steps(spec, n)),
                oracle: ctx.count_big(&term),
                term,
            }
        })
        .collect();
    let headline = format!(
        "family {name}: coefficient={} parity={} seed={} base_steps={}",
        spec.coefficient, spec.parity, spec.seed, spec.base_steps
    );
    let extra = json!({
        "family": name.to_string(),
        "coefficient": spec.coefficient.to_string(),
        "parity": spec.parity,
        "seed": spec.seed.to_string(),
        "base_steps": spec.base_steps,
    });
    render_terms(ctx, headline, "n", rows, extra);
    Ok(())
}

fn cmd_parametric(ctx: &Ctx, name: ParametricName, k: u64, count: u32) -> Result<(), Error> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if count == 0 {
        return Err(Error::Precondition("--count must be at least 1".into()));
    }
    let seed = name.seed(k);
    let seed_steps = ctx.count_big(&seed);
    let rows: Vec<TermRow> = (0..count)
        .map(|n| {
            let term = parametric_term(name, k, n);
            TermRow {
                index: n,
                predicted: seed_steps.map(|s| s + 2 * n),
                oracle: ctx.count_big(&term),
                term,
            }
        })
        .collect();
    let headline = format!(
        "parametric {name} k={k}: coefficient={} parity={} seed={seed}",
        name.coefficient(k),
        name.parity()
    );
    let extra = json!({
        "family": name.to_string(),
        "k": k,
        "coefficient": name.coefficient(k).to_string(),
        "parity": name.parity(),
        "seed": seed.to_string(),
    });
    render_terms(ctx, headline, "n", rows, extra);
    Ok(())
}

fn cmd_general(ctx: &Ctx, n: &BigUint, count: u32) -> Result<(), Error> {
    if n.bits() == 0 || !n.bit(0) {
        return Err(Error::Precondition(format!(
            "the general term is rooted at odd positive integers, got {n}"
        )));
    }
    if count == 0 {
        return Err(Error::Precondition("--count must be at least 1".into()));
    }
    let base = ctx.count_big(n);
    let rows: Vec<TermRow> = (0..count)
        .map(|m| {
            let term = general_term(n, m);
            TermRow {
                index: m,
                predicted: base.map(|b| b + 2 * m),
                oracle: ctx.count_big(&term),
                term,
            }
        })
        .collect();
    let headline = format!("general-term orbit of {n}");
    let extra = json!({ "root": n.to_string() });
    render_terms(ctx, headline, "m", rows, extra);
    Ok(())
}

fn cmd_seedsearch(
    ctx: &Ctx,
    family: Option<FamilyName>,
    depth: usize,
    rounds: usize,
) -> Result<(), Error> {
    struct Row {
        round: usize,
        family: String,
        beta: BigUint,
        source_term: BigUint,
        exponent: u32,
        next_seed: BigUint,
    }
    let rows: Vec<Row> = match family {
        Some(name) => {
            let hit = seed_search(FamilySpec::by_name(name), depth)?;
            vec![Row {
                round: 1,
                family: name.to_string(),
                beta: hit.beta,
                source_term: hit.source_term,
                exponent: hit.exponent,
                next_seed: hit.next_seed,
            }]
        }
        None => seed_search_chain(rounds, depth)?
            .into_iter()
            .enumerate()
            .map(|(i, round)| Row {
                round: i + 1,
                family: round
                    .family
                    .name
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| format!("root{}", round.family.seed)),
                beta: round.hit.beta,
                source_term: round.hit.source_term,
                exponent: round.hit.exponent,
                next_seed: round.hit.next_seed,
            })
            .collect(),
    };
    match ctx.format {
        OutputFormat::Text => {
            for r in &rows {
                println!(
                    "round={} family={} beta={} source_term={} exponent={} next_seed={}",
                    r.round, r.family, r.beta, r.source_term, r.exponent, r.next_seed
                );
            }
        }
        OutputFormat::Json => print_json(&json!({
            "depth": depth,
            "rounds": rows.iter().map(|r| json!({
                "round": r.round,
                "family": r.family,
                "beta": r.beta.to_string(),
                "source_term": r.source_term.to_string(),
                "exponent": r.exponent,
                "next_seed": r.next_seed.to_string(),
            })).collect::<Vec<_>>(),
        })),
        OutputFormat::Csv => {
            println!("round,family,beta,source_term,exponent,next_seed");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    r.round, r.family, r.beta, r.source_term, r.exponent, r.next_seed
                );
            }
        }
    }
    Ok(())
}

fn cmd_roots(ctx: &Ctx, n: &BigUint) -> Result<(), Error> {
    let root = collatz_core::family_root(n)?;
    match ctx.format {
        OutputFormat::Text => {
            println!("value={} root={} index={}", root.value, root.root, root.index)
        }
        OutputFormat::Json => print_json(&json!({
            "value": root.value.to_string(),
            "root": root.root.to_string(),
            "index": root.index,
        })),
        OutputFormat::Csv => {
            println!("value,root,index");
            println!("{},{},{}", root.value, root.root, root.index);
        }
    }
    Ok(())
}

fn cmd_memo_build(ctx: &Ctx, limit: u64, out: &Path) -> Result<(), Error> {
    let table = MemoTable::build(limit, ctx.convention, ctx.budget)?;
    table.save(out)?;
    match ctx.format {
        OutputFormat::Text => println!(
            "built memo: limit={limit} convention={} path={}",
            ctx.convention,
            out.display()
        ),
        OutputFormat::Json => print_json(&json!({
            "limit": limit,
            "convention": ctx.convention.to_string(),
            "path": out.display().to_string(),
        })),
        OutputFormat::Csv => {
            println!("limit,convention,path");
            println!("{limit},{},{}", ctx.convention, out.display());
        }
    }
    Ok(())
}

fn render_report(ctx: &Ctx, report: &VerifyReport) -> Result<(), Error> {
    let s = &report.stats;
    match ctx.format {
        OutputFormat::Text => {
            println!("range: [{}, {})", s.start, s.end);
            println!("convention: {}", s.convention);
            println!("seeds checked: {}", s.seeds_checked);
            println!("all converged: {}", s.all_converged);
            println!("nonconverged: {}", s.nonconverged.len());
            for nc in &s.nonconverged {
                println!("  n={} reason={:?}", nc.n, nc.reason);
            }
            match s.max_steps {
                Some(m) => println!("max steps: n={} steps={}", m.n, m.steps),
                None => println!("max steps: none"),
            }
            match s.max_excursion {
                Some(m) => println!("max excursion: n={} peak={}", m.n, m.peak),
                None => println!("max excursion: none"),
            }
            println!("identity failures: {}", s.identity_failures.len());
            for f in &s.identity_failures {
                println!("  {}: {}", f.identity, f.witness);
            }
            if let Some(r) = s.root_residues {
                println!(
                    "roots by residue mod 8: 1 -> {}, 3 -> {}, 7 -> {}",
                    r.residue_1, r.residue_3, r.residue_7
                );
            }
            println!("duration: {} ms", report.duration_ms);
        }
        OutputFormat::Json => {
            let mut object = json!({
                "range": [s.start.to_string(), s.end.to_string()],
                "convention": s.convention.to_string(),
                "seeds_checked": s.seeds_checked,
                "all_converged": s.all_converged,
                "nonconverged": s.nonconverged.iter().map(|nc| json!({
                    "n": nc.n.to_string(),
                    "reason": match nc.reason {
                        collatz_core::NonConvergence::BudgetExhausted => "budget-exhausted",
                        collatz_core::NonConvergence::Overflow => "overflow",
                    },
                })).collect::<Vec<_>>(),
                "max_steps": s.max_steps.map(|m| json!({
                    "n": m.n.to_string(),
                    "steps": m.steps,
                })),
                "max_excursion": s.max_excursion.map(|m| json!({
                    "n": m.n.to_string(),
                    "peak": m.peak.to_string(),
                })),
                "identity_failures": s.identity_failures.iter().map(|f| json!({
                    "identity": f.identity,
                    "witness": f.witness,
                })).collect::<Vec<_>>(),
                "duration_ms": report.duration_ms,
            });
            if let Some(r) = s.root_residues {
                object["root_residues"] = json!({
                    "residue_1": r.residue_1,
                    "residue_3": r.residue_3,
                    "residue_7": r.residue_7,
                });
            }
            print_json(&object);
        }
        OutputFormat::Csv => {
            let mut header = String::from(
                "start,end,convention,seeds_checked,all_converged,nonconverged_count,\
                 max_steps_n,max_steps,max_excursion_n,max_excursion_peak,identity_failure_count",
            );
            let mut row = format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                s.start,
                s.end,
                s.convention,
                s.seeds_checked,
                s.all_converged,
                s.nonconverged.len(),
                s.max_steps.map_or_else(String::new, |m| m.n.to_string()),
                s.max_steps.map_or_else(String::new, |m| m.steps.to_string()),
                s.max_excursion.map_or_else(String::new, |m| m.n.to_string()),
                s.max_excursion.map_or_else(String::new, |m| m.peak.to_string()),
                s.identity_failures.len(),
            );
            if let Some(r) = s.root_residues {
                header.push_str(",residue_1,residue_3,residue_7");
                row.push_str(&format!(",{},{},{}", r.residue_1, r.residue_3, r.residue_7));
            }
            header.push_str(",duration_ms");
            row.push_str(&format!(",{}", report.duration_ms));
            println!("{header}");
            println!("{row}");
        }
    }
    Ok(())
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string(value).expect("json output"));
}
