//! `gw`: evaluate genus-zero invariants, apply and verify the blow-up
//! identities, print recursion tables and manage the memo cache.

mod parse;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gw_core::lattice::LocusKind;
use gw_core::oracle::ZeroReason;
use gw_core::rules::{self, plan, Case, ReportRow, VerifyParams};
use gw_core::{Evaluation, InvariantQuery, MemoTable, Oracle, Rule, RuleApplication};
use serde_json::json;

const CLASS_HELP: &str = "Classes are whitespace-free signed sums of basis letters: \
`3l` on P2, `3f-1e` or `-e` on BlP2, `2a` on M<n>. A missing coefficient means 1. \
Insertions: `1`, `pt`, `H^k`, a divisor (`H` on P<n>; `h`, `E`, `2h-E` on BlP<n>; \
`c1` on M<n>), `PD(E)`, \
`p*<insertion>` for a pullback to a blow-up, and `a<deg>` for a class known \
only by its real degree (`a2*` when supported away from the blow-up centre).";

#[derive(Parser, Debug)]
#[command(name = "gw", version, about = "Genus-zero Gromov-Witten invariants and blow-up identities", after_help = CLASS_HELP)]
struct Cli {
    /// Memo cache file.
    #[arg(long, global = true, env = "GW_CACHE", default_value = "gw_cache.json")]
    cache: PathBuf,
    /// Worker threads for `verify`.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    /// Emit JSON (one object per line for reports).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Largest plane-curve degree swept by `verify` and `table`.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..))]
    max_degree: i64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one invariant.
    Invariant(QueryArgs),
    /// Apply an identity to one invariant.
    Transform {
        /// lemma1-1, thm1-2, thm1-3, thm1-4, thm1-5, thm1-6 or corollary-e.
        rule: String,
        #[command(flatten)]
        query: QueryArgs,
        /// Blow-up centre: point, curve:g0=G,c1=C, or surface:product|k3|torus|other.
        #[arg(long, default_value = "point")]
        locus: String,
    },
    /// Run the verification sweep of one identity, or of all of them.
    Verify {
        /// A rule token or `all`.
        rule: String,
        /// Range of multiples `r` for lemma1-1, as `a..b`.
        #[arg(long, default_value = "1..5")]
        r: String,
    },
    /// Print a table of recursion values up to --max-degree.
    Table { which: TableKind },
    /// Manage the memo cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
struct QueryArgs {
    /// P<n>, BlP<n>, or M<n> (with --ambient-c1).
    manifold: String,
    /// Curve class, e.g. 3l or 3f-1e.
    #[arg(allow_hyphen_values = true)]
    class: String,
    #[arg(long, default_value_t = 0)]
    genus: u32,
    /// Number of point insertions appended after --insert.
    #[arg(long, default_value_t = 0)]
    points: usize,
    /// One insertion; repeatable.
    #[arg(long = "insert", allow_hyphen_values = true)]
    inserts: Vec<String>,
    /// `C_1(a)` for an M<n> manifold.
    #[arg(long, allow_hyphen_values = true)]
    ambient_c1: Option<i64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    /// Rational plane curves through 3d - 1 points.
    Kontsevich,
    /// Blown-up plane, classes a·f + b·e.
    Blp2,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Write the cache as JSON to FILE, or to standard output.
    Export {
        file: Option<PathBuf>,
    },
    /// Merge the entries of FILE into the cache.
    Import {
        file: PathBuf,
    },
    Info,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

impl Cli {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) if closed_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn closed_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if let Command::Cache { action } = &cli.command {
        return cache_command(cli, action).map(|()| ExitCode::SUCCESS);
    }
    let memo = open_cache(&cli.cache);
    let oracle = Oracle::with_memo(memo);
    let mut out = io::stdout().lock();
    let code = match &cli.command {
        Command::Invariant(args) => {
            let q = build_query(args)?;
            let eval = oracle.evaluate(&q)?;
            print_evaluation(&mut out, cli.format(), &q, &eval)?;
            ExitCode::SUCCESS
        }
        Command::Transform { rule, query, locus } => {
            let rule: Rule = rule.parse()?;
            let q = build_query(query)?;
            let app = transform(rule, &q, locus, &oracle)?;
            print_application(&mut out, cli.format(), &app)?;
            ExitCode::SUCCESS
        }
        Command::Verify { rule, r } => {
            let rules: Vec<Rule> = if rule == "all" {
                Rule::ALL.to_vec()
            } else {
                vec![rule.parse()?]
            };
            let params = VerifyParams {
                max_degree: cli.max_degree,
                r_range: parse::range(r)?,
            };
            let cases: Vec<Case> = rules.iter().flat_map(|&r| plan(r, &params)).collect();
            let rows = run_cases(&cases, &oracle, cli.jobs as usize)?;
            print_report(&mut out, cli.format(), &rows)?;
            if rows.iter().all(|r| r.ok) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Command::Table { which } => {
            print_table(&mut out, cli.format(), *which, cli.max_degree, &oracle)?;
            ExitCode::SUCCESS
        }
        Command::Cache { .. } => unreachable!("handled above"),
    };
    out.flush()?;
    let memo = oracle.into_memo();
    if memo.is_dirty() {
        if let Err(e) = memo.save() {
            eprintln!("warning: could not save cache {}: {e}", cli.cache.display());
        }
    }
    Ok(code)
}

fn open_cache(path: &Path) -> MemoTable {
    MemoTable::open(path).unwrap_or_else(|e| {
        eprintln!("warning: ignoring cache {}: {e}; starting cold", path.display());
        MemoTable::cold(path)
    })
}

fn build_query(args: &QueryArgs) -> Result<InvariantQuery> {
    let m = parse::manifold(&args.manifold, args.ambient_c1)?;
    let class = parse::class(&args.class, &m)?;
    let mut insertions = args
        .inserts
        .iter()
        .map(|t| parse::insertion(t, &m))
        .collect::<Result<Vec<_>>>()?;
    insertions.extend(std::iter::repeat_n(gw_core::Insertion::Point, args.points));
    Ok(InvariantQuery::new(m, class, args.genus, insertions))
}

fn transform(rule: Rule, q: &InvariantQuery, locus: &str, oracle: &Oracle) -> Result<RuleApplication> {
    let locus = parse::locus(locus, q.manifold.n())?;
    let wrong_locus = |want: &str| anyhow!("{rule} needs a {want} locus");
    let app = match rule {
        Rule::ExceptionalVanishing => rules::check_exceptional_vanishing(q, oracle)?,
        Rule::PointBlowup | Rule::LowDimensionBlowup | Rule::PointConstraint => {
            if locus.kind != LocusKind::Point {
                return Err(wrong_locus("point"));
            }
            match rule {
                Rule::PointBlowup => rules::transform_point_blowup(q, oracle)?,
                Rule::LowDimensionBlowup => rules::transform_low_dimension(q, oracle)?,
                _ => rules::transform_point_constraint(q, oracle)?,
            }
        }
        Rule::CurveBlowup => {
            if !matches!(locus.kind, LocusKind::Curve { .. }) {
                return Err(wrong_locus("curve"));
            }
            rules::transform_curve_blowup(q, &locus, oracle)?
        }
        Rule::SurfaceBlowup => {
            if !matches!(locus.kind, LocusKind::Surface { .. }) {
                return Err(wrong_locus("surface"));
            }
            rules::transform_surface_blowup(q, &locus, oracle)?
        }
        Rule::ExceptionalTwoPoint => {
            if !q.manifold.is_blowup_point() {
                bail!("{rule} applies to BlP<n>");
            }
            rules::exceptional_two_point(q.manifold.n(), oracle)?
        }
    };
    Ok(app)
}

/// Runs `cases` on `jobs` workers, each with a private copy of the memo
/// table; the copies are merged back once every worker has finished.
fn run_cases(cases: &[Case], oracle: &Oracle, jobs: usize) -> Result<Vec<ReportRow>> {
    if jobs <= 1 || cases.len() <= 1 {
        return cases
            .iter()
            .map(|c| c.report(oracle).map_err(Into::into))
            .collect();
    }
    let jobs = jobs.min(cases.len());
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let worker = Oracle::with_memo(oracle.memo().clone());
                s.spawn(move || {
                    let rows: Vec<(usize, rules::Result<ReportRow>)> = cases
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(jobs)
                        .map(|(i, c)| (i, c.report(&worker)))
                        .collect();
                    (rows, worker.into_memo())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut rows = Vec::with_capacity(cases.len());
    for (worker_rows, memo) in results {
        oracle.memo().merge(&memo)?;
        rows.extend(worker_rows);
    }
    rows.sort_by_key(|(i, _)| *i);
    rows.into_iter().map(|(_, r)| r.map_err(Into::into)).collect()
}

fn zero_text(reason: Option<ZeroReason>) -> String {
    match reason {
        Some(r) => format!("0 ({})", r.as_str()),
        None => "0".into(),
    }
}

fn print_evaluation(
    out: &mut impl Write,
    format: Format,
    q: &InvariantQuery,
    eval: &Evaluation,
) -> Result<()> {
    match format {
        Format::Text => match eval {
            Evaluation::Zero { reason } => writeln!(out, "{}", zero_text(Some(*reason)))?,
            other => writeln!(out, "{other}")?,
        },
        Format::Json => {
            let v = json!({ "query": q.to_string(), "evaluation": eval });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["query", "status", "value", "reason"])?;
            let (status, value, reason) = match eval {
                Evaluation::Exact { value } => ("exact", value.to_string(), String::new()),
                Evaluation::Zero { reason } => ("zero", "0".to_string(), reason.as_str().to_string()),
                Evaluation::Symbolic { .. } => ("symbolic", eval.to_string(), String::new()),
            };
            w.write_record([q.to_string().as_str(), status, &value, &reason])?;
            w.flush()?;
        }
    }
    Ok(())
}

fn print_application(out: &mut impl Write, format: Format, app: &RuleApplication) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(app)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "rule",
                "source",
                "target",
                "source_value",
                "target_value",
                "verdict",
            ])?;
            let opt =
                |v: &Option<gw_core::ExactRational>| v.as_ref().map(ToString::to_string).unwrap_or_default();
            w.write_record([
                app.rule.token().to_string(),
                app.source.to_string(),
                app.target.as_ref().map(|t| t.describe()).unwrap_or_default(),
                opt(&app.source_value),
                opt(&app.target_value),
                app.verdict.to_string(),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "rule:    {}", app.rule)?;
            writeln!(out, "source:  {}", app.source)?;
            for g in &app.gates {
                writeln!(out, "gate:    [{}] {}", mark(g.passed), g.name)?;
            }
            if let Some(t) = &app.target {
                writeln!(out, "target:  {}", t.describe())?;
            }
            for c in &app.checks {
                writeln!(out, "check:   [{}] {}", mark(c.passed), c.name)?;
            }
            if let Some(a) = &app.audit {
                writeln!(
                    out,
                    "audit:   {} profiles, {} not excluded",
                    a.profiles, a.survivors
                )?;
            }
            if let Some(v) = &app.source_value {
                writeln!(out, "source value: {v}")?;
            }
            if let Some(v) = &app.target_value {
                writeln!(out, "target value: {v}")?;
            }
            if let Some(n) = &app.note {
                writeln!(out, "note:    {n}")?;
            }
            writeln!(out, "verdict: {}", app.verdict)?;
        }
    }
    Ok(())
}

fn mark(passed: bool) -> &'static str {
    if passed {
        "x"
    } else {
        " "
    }
}

fn print_report(out: &mut impl Write, format: Format, rows: &[ReportRow]) -> Result<()> {
    match format {
        Format::Json => {
            for row in rows {
                writeln!(out, "{}", serde_json::to_string(row)?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "rule",
                "params",
                "gates",
                "source_value",
                "target_value",
                "verdict",
                "expected",
                "ok",
            ])?;
            for row in rows {
                let gates = row.gates.iter().filter(|g| g.passed).count();
                w.write_record([
                    row.rule.as_str(),
                    &row.params,
                    &format!("{gates}/{}", row.gates.len()),
                    row.source_value.as_deref().unwrap_or(""),
                    row.target_value.as_deref().unwrap_or(""),
                    &row.verdict,
                    &row.expected,
                    if row.ok { "true" } else { "false" },
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for row in rows {
                writeln!(
                    out,
                    "{} {} {:<24} {}",
                    if row.ok { "ok  " } else { "FAIL" },
                    row.rule,
                    row.params,
                    row.verdict
                )?;
            }
            let ok = rows.iter().filter(|r| r.ok).count();
            writeln!(out, "{ok}/{} rows ok", rows.len())?;
        }
    }
    Ok(())
}

fn print_table(
    out: &mut impl Write,
    format: Format,
    which: TableKind,
    max: i64,
    oracle: &Oracle,
) -> Result<()> {
    let rows: Vec<(String, String)> = match which {
        TableKind::Kontsevich => (1..=max)
            .map(|d| Ok((format!("{d}"), oracle.kontsevich_p2(d)?.to_string())))
            .collect::<Result<_>>()?,
        TableKind::Blp2 => {
            let mut v = Vec::new();
            for a in 0..=max {
                for b in -a..=1 {
                    if 3 * a + b < 1 {
                        continue;
                    }
                    v.push((format!("{a}f{b:+}e"), oracle.wdvv_f1(a, b)?.to_string()));
                }
            }
            v
        }
    };
    let key = match which {
        TableKind::Kontsevich => "d",
        TableKind::Blp2 => "class",
    };
    match format {
        Format::Text => {
            for (k, v) in rows {
                writeln!(out, "{k:>8}  {v}")?;
            }
        }
        Format::Json => {
            for (k, v) in rows {
                writeln!(out, "{}", json!({ key: k, "value": v }))?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([key, "value"])?;
            for (k, v) in rows {
                w.write_record([k, v])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cache_command(cli: &Cli, action: &CacheAction) -> Result<()> {
    let path = &cli.cache;
    match action {
        CacheAction::Export { file } => {
            let memo = open_cache(path);
            let text = memo.to_json() + "\n";
            match file {
                Some(f) => std::fs::write(f, text).with_context(|| format!("writing {}", f.display()))?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
        }
        CacheAction::Import { file } => {
            let text =
                std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let incoming =
                MemoTable::from_json(&text).with_context(|| format!("parsing {}", file.display()))?;
            let memo = open_cache(path);
            memo.merge(&incoming)?;
            memo.save()?;
            println!("imported {} entries; {} total", incoming.len(), memo.len());
        }
        CacheAction::Info => {
            let memo = open_cache(path);
            match cli.format() {
                Format::Json => println!(
                    "{}",
                    json!({ "path": path.display().to_string(), "entries": memo.len() })
                ),
                Format::Csv => println!("path,entries\n{},{}", path.display(), memo.len()),
                Format::Text => println!("path: {}\nentries: {}", path.display(), memo.len()),
            }
        }
        CacheAction::Clear => match std::fs::remove_file(path) {
            Ok(()) => println!("removed {}", path.display()),
            Err(e) if e.kind() == io::ErrorKind::NotFound => println!("no cache at {}", path.display()),
            Err(e) => return Err(e).with_context(|| format!("removing {}", path.display())),
        },
    }
    Ok(())
}
