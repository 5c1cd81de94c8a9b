//! Command-line front end: `enumerate`, `verify`, `invariants` and `bounds`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use rayon::prelude::*;
use serde::Serialize;

use isoprod_core::census::{self, bounds, CensusError, CensusMode};
use isoprod_core::constructions::{
    self, ConstructionReport, CriterionOutcome, LinearConstraintSystem,
};
use isoprod_core::group::{make_group, pair_count, StructureTensor};
use isoprod_core::invariants;
use isoprod_core::json::sig12;

#[derive(Parser)]
#[command(
    name = "isoprod",
    version,
    about = "Census of Frattini-class-2 2-groups and their product-quotient surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count tensors, classify groups up to isomorphism, bound components.
    Enumerate(EnumerateArgs),
    /// Check the explicit generating vectors on tensors of the family.
    Verify(VerifyArgs),
    /// Tabulate surface invariants over an (s, q) grid.
    Invariants(InvariantsArgs),
    /// Tabulate the leading-term bounds.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct Common {
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Selection {
    #[arg(long)]
    s: usize,
    /// Enumerate the whole family (s <= 2).
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Number of sampled tensors.
    #[arg(long, value_name = "N")]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    selection: Selection,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    selection: Selection,
    #[arg(long, default_value_t = 0)]
    q: usize,
    /// Sample uniformly among independent tensors instead of from the
    /// order-2 constraint space.
    #[arg(long)]
    unconstrained: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct InvariantsArgs {
    /// `N`, `A-B` or `A..=B` (inclusive), or `A..B` (exclusive).
    #[arg(long, value_parser = parse_range)]
    s: RangeInclusive<u32>,
    /// Same syntax; defaults to every q with a construction.
    #[arg(long, value_parser = parse_range)]
    q: Option<RangeInclusive<u32>>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_parser = parse_range, default_value = "2..=40")]
    s: RangeInclusive<u32>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((a, b)) = text.split_once("..=") {
        Ok(num(a)?..=num(b)?)
    } else if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        // an empty exclusive range keeps start > end
        Ok(if b == 0 { 1..=0 } else { a..=b - 1 })
    } else if let Some((a, b)) = text.split_once('-') {
        Ok(num(a)?..=num(b)?)
    } else {
        let n = num(text)?;
        Ok(n..=n)
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(format!("write failed: {e}"))
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::ExhaustiveTooLarge(_) | CensusError::ZeroRank => {
                Failure::Usage(e.to_string())
            }
            CensusError::InvariantViolation(_) => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn open<'a>(
    out: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            Failure::Usage(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(stdout)),
    })
}

fn json_line<T: Serialize>(w: &mut dyn Write, value: &T) -> Outcome {
    serde_json::to_writer(&mut *w, value).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    if jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Internal(e.to_string()))
}

enum Plan {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

fn plan(sel: &Selection) -> Result<Plan, Failure> {
    if sel.s == 0 {
        return Err(Failure::Usage("--s must be at least 1".into()));
    }
    match (sel.exhaustive, sel.sample) {
        (_, Some(0)) => Err(Failure::Usage("--sample must be at least 1".into())),
        (_, Some(count)) => Ok(Plan::Sample {
            count,
            seed: sel.seed,
        }),
        (_, None) if sel.s <= census::EXHAUSTIVE_MAX_S => Ok(Plan::Exhaustive),
        (true, None) => Err(Failure::Usage(format!(
            "--exhaustive is limited to s <= {}",
            census::EXHAUSTIVE_MAX_S
        ))),
        (false, None) => Err(Failure::Usage(format!("s = {} needs --sample N", sel.s))),
    }
}

fn enumerate(args: EnumerateArgs, stdout: &mut dyn Write) -> Outcome {
    if args.format != Format::Json {
        return Err(Failure::Usage("enumerate writes JSON only".into()));
    }
    let mode = match plan(&args.selection)? {
        Plan::Exhaustive => CensusMode::Exhaustive,
        Plan::Sample { count, seed } => CensusMode::Sample { count, seed },
    };
    let s = args.selection.s;
    info!("census at s={s}");
    let report = pool(args.common.jobs)?.install(|| census::census(s, mode))?;
    let mut w = open(&args.common.out, stdout)?;
    let text =
        serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(())
}

#[derive(Default, Serialize)]
struct VerifySummary {
    examined: usize,
    order_2_ok: usize,
    generation_ok: usize,
    relation_ok: usize,
    disjointness_ok: usize,
    criterion_holds: usize,
    criterion_fails: usize,
    criterion_inapplicable: usize,
    admissible_ok: usize,
    all_ok: usize,
    /// Criterion holds but the stabilizer sets meet.
    criterion_violations: usize,
    undefined: Vec<String>,
}

impl VerifySummary {
    fn add(&mut self, r: &ConstructionReport) {
        self.examined += 1;
        let both = |f: &dyn Fn(&constructions::SystemReport) -> bool| r.systems.iter().all(f);
        self.order_2_ok += both(&|x| x.defined && x.order_2_ok.iter().all(|&b| b)) as usize;
        self.generation_ok += both(&|x| x.generation_ok) as usize;
        self.relation_ok += both(&|x| x.relation_ok) as usize;
        self.disjointness_ok += r.disjointness_ok as usize;
        match r.criterion {
            CriterionOutcome::Holds => self.criterion_holds += 1,
            CriterionOutcome::Fails => self.criterion_fails += 1,
            CriterionOutcome::Inapplicable => self.criterion_inapplicable += 1,
            CriterionOutcome::NotRun => {}
        }
        self.criterion_violations +=
            (r.criterion == CriterionOutcome::Holds && !r.disjointness_ok) as usize;
        self.admissible_ok += r.admissible_ok as usize;
        self.all_ok += r.all_ok as usize;
        for sys in &r.systems {
            if let Some(e) = &sys.error {
                if !self.undefined.contains(e) {
                    self.undefined.push(e.clone());
                }
            }
        }
    }
}

const VERIFY_CSV_HEADER: &str =
    "tensor,s,q,order_2_ok,generation_ok,relation_ok,disjointness_ok,criterion,admissible_ok,all_ok";

fn verify_csv_line(r: &ConstructionReport) -> String {
    let both = |f: &dyn Fn(&constructions::SystemReport) -> bool| r.systems.iter().all(f);
    let criterion = serde_json::to_value(r.criterion).expect("unit enum");
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.tensor,
        r.s,
        r.q,
        both(&|x| x.defined && x.order_2_ok.iter().all(|&b| b)),
        both(&|x| x.generation_ok),
        both(&|x| x.relation_ok),
        r.disjointness_ok,
        criterion.as_str().unwrap_or_default(),
        r.admissible_ok,
        r.all_ok
    )
}

fn verify(args: VerifyArgs, stdout: &mut dyn Write) -> Outcome {
    let s = args.selection.s;
    let q = args.q;
    let workers = pool(args.common.jobs)?;
    let tensors: Vec<StructureTensor> = match plan(&args.selection)? {
        Plan::Exhaustive => {
            let bits = s * pair_count(s);
            (0..1u64 << bits)
                .map(|k| StructureTensor::from_index(s, k).expect("index in range"))
                .filter(StructureTensor::is_independent)
                .collect()
        }
        Plan::Sample { count, seed } => {
            let (system, pool_id) = if args.unconstrained {
                (LinearConstraintSystem::unconstrained(s), 0)
            } else {
                (
                    constructions::pair_constraints(s, q),
                    census::constrained_pool(q),
                )
            };
            workers.install(|| census::sample_tensors(&system, count, seed, pool_id))
        }
    };
    info!("verifying {} tensors at s={s}, q={q}", tensors.len());
    let mut w = open(&args.common.out, stdout)?;
    if args.format == Format::Csv {
        writeln!(w, "{VERIFY_CSV_HEADER}")?;
    }
    let mut summary = VerifySummary::default();
    for chunk in tensors.chunks(256) {
        let reports: Vec<ConstructionReport> = workers.install(|| {
            chunk
                .par_iter()
                .map(|t| constructions::construction_validity(&make_group(t.clone()), q))
                .collect()
        });
        for r in &reports {
            summary.add(r);
            match args.format {
                Format::Json => json_line(&mut *w, r)?,
                Format::Csv => writeln!(w, "{}", verify_csv_line(r))?,
            }
        }
        debug!("{} reports written", summary.examined);
    }
    if args.format == Format::Json {
        #[derive(Serialize)]
        struct Wrapped<'a> {
            summary: &'a VerifySummary,
        }
        json_line(&mut *w, &Wrapped { summary: &summary })?;
    }
    w.flush()?;
    if summary.criterion_violations > 0 {
        return Err(Failure::Internal(format!(
            "disjointness criterion held on {} non-disjoint pairs",
            summary.criterion_violations
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct InvariantsRow {
    s: u32,
    q: u32,
    #[serde(flatten)]
    invariants: invariants::SurfaceInvariants,
    chi_closed_form: String,
    matches_closed_form: bool,
}

fn invariants_cmd(args: InvariantsArgs, stdout: &mut dyn Write) -> Outcome {
    pool(args.common.jobs)?;
    let mut rows = Vec::new();
    for s in args.s.clone().filter(|&s| s >= 2) {
        let qs: Vec<u32> = census::q_range(s as usize)
            .map(|q| q as u32)
            .filter(|q| args.q.as_ref().is_none_or(|r| r.contains(q)))
            .collect();
        for q in qs {
            let inv = invariants::family_invariants(s, q)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            let closed =
                invariants::closed_form_chi(s, q).map_err(|e| Failure::Internal(e.to_string()))?;
            rows.push(InvariantsRow {
                s,
                q,
                matches_closed_form: inv.chi == closed,
                chi_closed_form: closed.to_string(),
                invariants: inv,
            });
        }
    }
    let mut w = open(&args.common.out, stdout)?;
    match args.format {
        Format::Csv => {
            writeln!(
                w,
                "s,q,group_order,g1,g2,chi,K2,e,chi_closed_form,matches_closed_form"
            )?;
            for r in &rows {
                let i = &r.invariants;
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.s,
                    r.q,
                    i.group_order,
                    i.g1,
                    i.g2,
                    i.chi,
                    i.k2,
                    i.e,
                    r.chi_closed_form,
                    r.matches_closed_form
                )?;
            }
        }
        Format::Json => {
            for r in &rows {
                json_line(&mut *w, r)?;
            }
        }
    }
    w.flush()?;
    if let Some(r) = rows.iter().find(|r| !r.matches_closed_form) {
        return Err(Failure::Internal(format!(
            "chi at s={}, q={} disagrees with the closed form",
            r.s, r.q
        )));
    }
    Ok(())
}

fn bounds_cmd(args: BoundsArgs, stdout: &mut dyn Write) -> Outcome {
    pool(args.common.jobs)?;
    let report = bounds::bounds_report(args.s.clone());
    let mut w = open(&args.common.out, stdout)?;
    match args.format {
        Format::Csv => {
            writeln!(w, "{}", bounds::CSV_HEADER)?;
            for row in &report.rows {
                writeln!(w, "{}", row.csv_line())?;
            }
            writeln!(w)?;
            writeln!(w, "check,value,lower,upper,bound,pass")?;
            for c in &report.constants {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    c.label,
                    c.value,
                    sig12(c.lower),
                    sig12(c.upper),
                    c.bound,
                    c.pass
                )?;
            }
        }
        Format::Json => {
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            writeln!(w, "{text}")?;
        }
    }
    w.flush()?;
    if report.constants.iter().any(|c| !c.pass) || !report.x_strictly_increasing {
        return Err(Failure::Internal("bound arithmetic check failed".into()));
    }
    Ok(())
}

/// Exit code for success.
pub const EXIT_OK: u8 = 0;
/// Exit code for an internal invariant violation.
pub const EXIT_INTERNAL: u8 = 1;
/// Exit code for a usage error.
pub const EXIT_USAGE: u8 = 2;

/// Runs one command line (program name first), writing results to `stdout`
/// unless `--out` is given. Diagnostics go to standard error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Enumerate(a) => enumerate(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Invariants(a) => invariants_cmd(a, stdout),
        Command::Bounds(a) => bounds_cmd(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            EXIT_INTERNAL
        }
    }
}
