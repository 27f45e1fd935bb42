//! Command-line front end: generate, verify and measure instances.
//!
//! Exit codes: 0 when the checked property holds, 1 when it is refuted (the
//! witness goes to stdout), 2 when a search is inconclusive or the input is bad.

/// `println!` that reports write errors instead of panicking.
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        writeln!(std::io::stdout(), $($t)*)?
    }};
}

macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        write!(std::io::stdout(), $($t)*)?
    }};
}

mod gen;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tempo_ncg::harness::{
    optimum, poa_record, sweep_ownership, Instance, SweepConfig, POA_COLUMNS,
};
use tempo_ncg::{
    greedy_dynamics, is_greedy_equilibrium, is_nash_equilibrium, realized_graph, EquilibriumKind,
    Setting, SpannerSearchConfig, StrategyProfile, Verdict,
};

#[derive(Parser)]
#[command(
    name = "tempo-ncg",
    version,
    about = "Temporal network creation games with terminals"
)]
struct Cli {
    /// Output format; each command picks a sensible default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Search budget per agent for exact Nash checks.
    #[arg(long, global = true, default_value_t = 20_000_000)]
    budget: u64,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Ne,
    Ge,
}

impl From<Kind> for EquilibriumKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Ne => EquilibriumKind::Nash,
            Kind::Ge => EquilibriumKind::Greedy,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Local,
    Global,
}

impl From<Mode> for Setting {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Local => Setting::Local,
            Mode::Global => Setting::Global,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a constructed instance with its equilibrium profile.
    Gen(gen::GenArgs),
    /// Check whether the instance's profile is an equilibrium.
    Verify {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "ne")]
        kind: Kind,
    },
    /// Verify every ownership of the profile's realized graph.
    Sweep(SweepArgs),
    /// Run round-robin greedy best-response dynamics.
    Dynamics {
        instance: PathBuf,
        /// Setting used when the instance has no profile (start from empty).
        #[arg(long, value_enum, default_value = "local")]
        setting: Mode,
        #[arg(long, default_value_t = 1000)]
        max_rounds: usize,
    },
    /// Minimum terminal spanner size, exact or as an interval.
    Optimum {
        instance: PathBuf,
        #[command(flatten)]
        limits: SpannerArgs,
    },
    /// Price-of-anarchy table over verified equilibria.
    Poa {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "ne")]
        kind: Kind,
        #[command(flatten)]
        limits: SpannerArgs,
    },
}

#[derive(Args)]
struct SweepArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, value_enum, default_value = "ne")]
    kind: Kind,
    /// Skip owners that could sell the edge without losing a terminal.
    #[arg(long)]
    prefilter: bool,
    /// Exit 0 only if exactly this many equilibria are found.
    #[arg(long)]
    expected: Option<u64>,
    #[arg(long, default_value_t = 50_000_000)]
    max_assignments: u64,
}

#[derive(Args)]
struct SpannerArgs {
    /// Hosts with more time edges only get bounds.
    #[arg(long, default_value_t = 64)]
    max_candidate_edges: usize,
    #[arg(long, default_value_t = 200_000_000)]
    max_subsets: u64,
}

impl From<&SpannerArgs> for SpannerSearchConfig {
    fn from(a: &SpannerArgs) -> Self {
        SpannerSearchConfig {
            max_candidate_edges: a.max_candidate_edges,
            max_subsets: a.max_subsets,
        }
    }
}

/// Outcome of a command, mapped onto the exit code.
enum Status {
    Holds,
    Refuted,
    Inconclusive,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Status::Holds) => ExitCode::SUCCESS,
        Ok(Status::Refuted) => ExitCode::from(1),
        Ok(Status::Inconclusive) => ExitCode::from(2),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn load(path: &Path) -> Result<Instance> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn profile(inst: &Instance) -> Result<&StrategyProfile> {
    inst.profile
        .as_ref()
        .with_context(|| format!("instance {} has no profile", inst.name()))
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = cli.format.unwrap_or(default);
    if !allowed.contains(&f) {
        let name = f.to_possible_value().expect("not skipped");
        bail!(
            "--format {} is not supported by this command",
            name.get_name()
        );
    }
    Ok(f)
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    outln!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Gen(args) => {
            format_or(cli, Format::Json, &[Format::Json])?;
            let inst = gen::generate(args)?;
            match &args.out {
                Some(path) => std::fs::write(path, inst.to_json())
                    .with_context(|| format!("writing {}", path.display()))?,
                None => out!("{}", inst.to_json()),
            }
            Ok(Status::Holds)
        }
        Command::Verify { instance, kind } => verify(cli, &load(instance)?, (*kind).into()),
        Command::Sweep(args) => sweep(cli, args),
        Command::Dynamics {
            instance,
            setting,
            max_rounds,
        } => {
            let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
            let mut inst = load(instance)?;
            let start = match &inst.profile {
                Some(s) => s.clone(),
                None => StrategyProfile::empty((*setting).into(), &inst.host),
            };
            let out = greedy_dynamics(&start, &inst.host, *max_rounds)?;
            let edges = realized_graph(&out.profile, &inst.host)?.time_edge_count();
            match format {
                Format::Text => outln!(
                    "converged: {}, rounds: {}, moves: {}, edges: {edges}",
                    out.converged,
                    out.rounds,
                    out.moves
                ),
                _ => {
                    inst.profile = Some(out.profile.clone());
                    out!("{}", inst.to_json());
                }
            }
            Ok(if out.converged {
                Status::Holds
            } else {
                Status::Inconclusive
            })
        }
        Command::Optimum { instance, limits } => {
            let format = format_or(cli, Format::Text, &[Format::Json, Format::Text])?;
            let inst = load(instance)?;
            let opt = optimum(&inst.host, limits.into())?;
            let edges: Vec<_> = opt.witness.time_edges().collect();
            match format {
                Format::Text => {
                    if opt.is_exact() {
                        outln!("optimum: {} (exact)", opt.upper);
                    } else {
                        outln!("optimum: [{}, {}] (bounds)", opt.lower, opt.upper);
                    }
                    let list: Vec<String> = edges.iter().map(ToString::to_string).collect();
                    outln!("witness: {}", list.join(" "));
                }
                _ => print_json(&json!({
                    "name": inst.name(),
                    "lower": opt.lower,
                    "upper": opt.upper,
                    "exact": opt.is_exact(),
                    "witness": edges,
                }))?,
            }
            Ok(Status::Holds)
        }
        Command::Poa {
            instances,
            kind,
            limits,
        } => {
            let format = format_or(cli, Format::Csv, &[Format::Csv, Format::Json])?;
            let mut records = Vec::new();
            for path in instances {
                let inst = load(path)?;
                match poa_record(&inst, (*kind).into(), cli.budget, limits.into())? {
                    Some(r) => records.push(r),
                    None => eprintln!(
                        "warning: skipping {}: no verified {} profile",
                        path.display(),
                        EquilibriumKind::from(*kind)
                    ),
                }
            }
            records.sort_by(|a, b| a.name.cmp(&b.name));
            if format == Format::Json {
                print_json(&records)?;
            } else {
                let mut w = csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(std::io::stdout());
                w.write_record(POA_COLUMNS)?;
                for r in &records {
                    w.serialize(r)?;
                }
                w.flush()?;
            }
            Ok(Status::Holds)
        }
    }
}

fn verify(cli: &Cli, inst: &Instance, kind: EquilibriumKind) -> Result<Status> {
    let format = format_or(cli, Format::Text, &[Format::Json, Format::Text])?;
    let s = profile(inst)?;
    let report = match kind {
        EquilibriumKind::Nash => is_nash_equilibrium(s, &inst.host, cli.budget)?,
        EquilibriumKind::Greedy => is_greedy_equilibrium(s, &inst.host)?,
    };
    if format == Format::Json {
        print_json(&report)?;
    } else {
        let verdict = match report.verdict {
            Verdict::Equilibrium => "equilibrium",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive (budget exhausted)",
        };
        outln!("{}: {kind} ({}): {verdict}", inst.name(), report.setting);
        if let Some(w) = &report.witness {
            outln!("witness: {w}");
        }
        for (name, c) in &report.certificates {
            let op = if c.strict { "<" } else { "<=" };
            let status = if c.holds { "holds" } else { "violated" };
            outln!(
                "certificate {name}: {} {op} {:.2} {status}",
                c.value,
                c.bound
            );
        }
    }
    Ok(match report.verdict {
        Verdict::Equilibrium => Status::Holds,
        Verdict::Refuted => Status::Refuted,
        Verdict::Inconclusive => Status::Inconclusive,
    })
}

fn sweep(cli: &Cli, args: &SweepArgs) -> Result<Status> {
    let format = format_or(cli, Format::Text, &[Format::Json, Format::Text])?;
    let inst = load(&args.instance)?;
    let target = realized_graph(profile(&inst)?, &inst.host)?;
    let config = SweepConfig {
        kind: args.kind.into(),
        prefilter: args.prefilter,
        max_assignments: args.max_assignments,
        budget: cli.budget,
    };
    let report = sweep_ownership(&inst.host, &target, args.mode.into(), config)?;
    if format == Format::Json {
        print_json(&report)?;
    } else {
        outln!(
            "{}: {} sweep ({}): {} assignments, {} checked, {} equilibria, {} inconclusive",
            inst.name(),
            report.setting,
            report.kind,
            report.assignments,
            report.checked,
            report.equilibria,
            report.inconclusive
        );
        if let Some(first) = &report.first {
            let list: Vec<String> = first.iter().map(|(v, e)| format!("{v}:{e}")).collect();
            outln!("first: {}", list.join(" "));
        }
    }
    Ok(match args.expected {
        _ if report.inconclusive > 0 => Status::Inconclusive,
        Some(n) if n != report.equilibria => Status::Refuted,
        _ => Status::Holds,
    })
}
