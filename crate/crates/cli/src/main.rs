//! `fimi`: command-line entry point for generation, mining, sampling,
//! planning, simulated parallel runs and database statistics.
//!
//! Exit codes: 0 success, 1 parameter error, 2 I/O or input-format error,
//! 3 verification failure or internal contract violation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fimi::cluster::{gather_db_sample, run_parallel_fimi, RunParams, SimNet, Variant};
use fimi::datagen::{generate_db, partition_db, read_fimi, write_fimi, GenParams};
use fimi::itemset::{abs_minsup, Itemset};
use fimi::miners::{self, eclat, generate_rules, mfi_mine, EclatOpts, MineStats};
use fimi::sampling::{self, reservoir, ReservoirAlgo, SampleParams};
use fimi::scheduler::{plan_phase2, Scheduler};
use fimi::stats::{self, MfiGraph};
use fimi::{Error, FiRecord};

#[derive(Parser, Debug)]
#[command(name = "fimi", version, about = "Frequent itemset mining toolkit with a simulated Parallel-FIMI cluster")]
struct Cli {
    /// key=value file supplying defaults for the command's flags (flags win).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a synthetic FIMI database.
    Gen(GenArgs),
    /// Mine frequent (or maximal frequent) itemsets.
    Mine(MineArgs),
    /// Generate association rules from an FI listing.
    Rules(RulesArgs),
    /// Report sample sizes and optionally draw an FI sample.
    Sample(SampleArgs),
    /// Build a Phase-2 PBEC plan from a database sample and an FI sample.
    Plan(PlanArgs),
    /// Run the simulated Parallel-FIMI cluster.
    Run(RunArgs),
    /// Database characteristics as CSV.
    Stats(StatsArgs),
}

#[derive(clap::Args, Debug)]
#[command(args_override_self = true)]
struct GenArgs {
    #[arg(long, default_value_t = 1000)]
    n_items: usize,
    #[arg(long, default_value_t = 2000)]
    n_patterns: usize,
    #[arg(long, default_value_t = 4.0)]
    avg_pattern_len: f64,
    #[arg(long, default_value_t = 10.0)]
    avg_txn_len: f64,
    #[arg(long, default_value_t = 10_000)]
    n_txns: usize,
    #[arg(long, default_value_t = 0.5)]
    corruption_mean: f64,
    #[arg(long, default_value_t = 1.0)]
    weight_mean: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    Apriori,
    Eclat,
    Fpgrowth,
    Mfi,
}

#[derive(clap::Args, Debug)]
#[command(args_override_self = true)]
struct MineArgs {
    file: PathBuf,
    /// Absolute minimum support.
    #[arg(long)]
    minsup: usize,
    #[arg(long, value_enum, default_value_t = Algo::Eclat)]
    algo: Algo,
    #[arg(long)]
    no_diffsets: bool,
    #[arg(long)]
    no_closure: bool,
    #[arg(long)]
    no_dynamic_order: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
#[command(args_override_self = true)]
struct RulesArgs {
    /// FI listing (`items:support` per line).
    file: PathBuf,
    #[arg(long)]
    minconf: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Modified coverage (multiset-weighted).
    Coverage,
    /// Exact coverage (uniform over the union of powersets).
    CoverageExact,
    Reservoir,
}

#[derive(clap::Args, Debug)]
#[command(args_override_self = true)]
struct SampleArgs {
    /// Database to sample; without it only the sample sizes are reported.
    file: Option<PathBuf>,
    /// Absolute minimum support on the database.
    #[arg(long)]
    minsup: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Reservoir)]
    method: Method,
    /// FI-sample error.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// FI-sample failure probability.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0.001)]
    rho: f64,
    #[arg(long, default_value_t = 0.01)]
    eps_db: f64,
    #[arg(long, default_value_t = 0.05)]
    delta_db: f64,
    /// Database-sample size (default: the Chernoff bound).
    #[arg(long)]
    n_db: Option<usize>,
    /// FI-sample size (default: the bound for the chosen method).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = AlgoR::Vitter)]
    reservoir_algo: AlgoR,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoR {
    Simple,
    Vitter,
}

impl From<AlgoR> for ReservoirAlgo {
    fn from(a: AlgoR) -> Self {
        match a {
            AlgoR::Simple => ReservoirAlgo::Simple,
            AlgoR::Vitter => ReservoirAlgo::Vitter,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sched {
    Lpt,
    Qkp,
}

impl From<Sched> for Scheduler {
    fn from(s: Sched) -> Self {
        match s {
            Sched::Lpt => Scheduler::Lpt,
            Sched::Qkp => Scheduler::Qkp,
        }
    }
}

#[derive(clap::Args, Debug)]
#[command(args_override_self = true)]
struct PlanArgs {
    /// Database sample (FIMI).
    #[arg(long)]
    db_sample: PathBuf,
    /// FI sample (FIMI lines, `#` comments allowed).
    #[arg(long)]
    fi_sample: PathBuf,
    /// Items to cover: those with at least this support in the database sample.
    #[arg(long, default_value_t = 1)]
    minsup: usize,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[arg(short = 'P', long = "procs", default_value_t = 4)]
    procs: usize,
    #[arg(long, value_enum, default_value_t = Sched::Lpt)]
    scheduler: Sched,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Seq,
    Par,
    Reservoir,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Seq => Variant::Seq,
            VariantArg::Par => Variant::Par,
            VariantArg::Reservoir => Variant::Reservoir,
        }
    }
}

#[derive(clap::Args, Debug)]
#[command(args_override_self = true)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::Reservoir)]
    variant: VariantArg,
    #[arg(short = 'P', long = "procs", default_value_t = 4)]
    procs: usize,
    /// Absolute minimum support on the whole database.
    #[arg(long)]
    minsup: usize,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = Sched::Lpt)]
    scheduler: Sched,
    #[arg(long, default_value_t = 10_000)]
    n_db: usize,
    #[arg(long, default_value_t = 19_869)]
    n_fi: usize,
    /// Use the closed-form sample sizes instead of --n-db/--n-fi.
    #[arg(long)]
    formula_sizes: bool,
    #[arg(long, default_value_t = 0.01)]
    eps_db: f64,
    #[arg(long, default_value_t = 0.05)]
    delta_db: f64,
    #[arg(long, default_value_t = 0.1)]
    eps_fi: f64,
    #[arg(long, default_value_t = 0.05)]
    delta_fi: f64,
    #[arg(long, default_value_t = 0.001)]
    rho: f64,
    #[arg(long)]
    no_dynamic_lb: bool,
    #[arg(long, value_enum, default_value_t = AlgoR::Vitter)]
    reservoir_algo: AlgoR,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Compare the output with sequential Eclat; exit 3 on mismatch.
    #[arg(long)]
    verify: bool,
    /// FI output file (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Metrics CSV file (stderr if omitted).
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Fi,
    Mfi,
    Ci,
    Isect,
    Pagerank,
    PagerankDist,
}

#[derive(clap::Args, Debug)]
#[command(args_override_self = true)]
struct StatsArgs {
    file: PathBuf,
    /// Absolute minimum support(s), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    minsup: Vec<usize>,
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long, default_value_t = stats::PAGERANK_DAMPING)]
    d: f64,
    #[arg(long, default_value_t = stats::MIN_EDGE_WEIGHT)]
    min_edge_weight: f64,
    #[arg(long, default_value_t = stats::PAGERANK_TOL)]
    tol: f64,
    #[arg(long, default_value_t = stats::PAGERANK_MAX_ITER)]
    max_iter: usize,
    /// Number of MFIs sampled for the pagerank graph (all if omitted).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::io("<stdout>", e)),
            _ => Ok(()),
        },
    }
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn listing(fis: &mut [FiRecord]) -> String {
    miners::sort_canonical(fis);
    let mut s = String::new();
    for r in fis.iter() {
        let _ = writeln!(s, "{r}");
    }
    s
}

fn counters(st: &MineStats) -> String {
    format!(
        "# intersections={} support_counts={} fis_visited={} nodes={} work={}",
        st.intersections,
        st.support_counts,
        st.fis_visited,
        st.nodes,
        st.work()
    )
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let p = GenParams {
        n_items: a.n_items,
        n_patterns: a.n_patterns,
        avg_pattern_len: a.avg_pattern_len,
        avg_txn_len: a.avg_txn_len,
        n_txns: a.n_txns,
        corruption_mean: a.corruption_mean,
        weight_mean: a.weight_mean,
        seed: a.seed,
    };
    eprintln!("# seed={}", a.seed);
    let db = generate_db(&p)?;
    match &a.output {
        Some(path) => write_fimi(&db, path)?,
        None => emit(None, &fimi::datagen::format_fimi(&db))?,
    }
    Ok(())
}

fn cmd_mine(a: MineArgs) -> CmdResult {
    if a.minsup == 0 {
        return Err(Error::param("minsup must be >= 1").into());
    }
    let db = read_fimi(&a.file)?;
    let opts = EclatOpts {
        use_diffsets: !a.no_diffsets,
        dynamic_order: !a.no_dynamic_order,
        closure_opt: !a.no_closure,
    };
    let (text, st) = match a.algo {
        Algo::Apriori => {
            let mut fis = Vec::new();
            let st = miners::apriori_visit(&db, a.minsup, &mut |itemset, support| fis.push(FiRecord { itemset, support }));
            (listing(&mut fis), st)
        }
        Algo::Eclat => {
            let (mut fis, st) = eclat(&db, a.minsup, opts);
            (listing(&mut fis), st)
        }
        Algo::Fpgrowth => {
            let mut fis = Vec::new();
            let st = miners::fpgrowth_visit(&db, a.minsup, &mut |itemset, support| fis.push(FiRecord { itemset, support }));
            (listing(&mut fis), st)
        }
        Algo::Mfi => {
            let (mut m, st) = mfi_mine(&db, a.minsup, &db.frequent_items(a.minsup));
            m.sort();
            let mut s = String::new();
            for u in &m {
                let _ = writeln!(s, "{u}:{}", fimi::itemset::support(&db, u));
            }
            (s, st)
        }
    };
    emit(a.output.as_deref(), &text)?;
    eprintln!("{}", counters(&st));
    Ok(())
}

fn csv_items(u: &Itemset) -> String {
    u.to_string()
}

fn cmd_rules(a: RulesArgs) -> CmdResult {
    if !(0.0..=1.0).contains(&a.minconf) {
        return Err(Error::param(format!("minconf must be in [0,1], got {}", a.minconf)).into());
    }
    let fis = miners::parse_fi_records(&read_text(&a.file)?)?;
    let mut rules = generate_rules(&fis, a.minconf)?;
    rules.sort_by(|x, y| (&x.antecedent, &x.consequent).cmp(&(&y.antecedent, &y.consequent)));
    let mut s = String::from("antecedent,consequent,support,confidence\n");
    for r in &rules {
        let _ = writeln!(
            s,
            "{},{},{},{:.6}",
            csv_items(&r.antecedent),
            csv_items(&r.consequent),
            r.support,
            r.confidence
        );
    }
    emit(a.output.as_deref(), &s)?;
    Ok(())
}

fn cmd_sample(a: SampleArgs) -> CmdResult {
    let sp = SampleParams {
        eps_db: a.eps_db,
        delta_db: a.delta_db,
        eps_fi: a.eps,
        delta_fi: a.delta,
        rho: a.rho,
    };
    let n_db_formula = sampling::db_sample_size(sp.eps_db, sp.delta_db)?;
    let n_fi_formula = match a.method {
        Method::Reservoir => sampling::reservoir_sample_size(sp.eps_fi, sp.delta_fi, sp.rho)?,
        _ => sampling::coverage_sample_size(sp.eps_fi, sp.delta_fi, sp.rho)?,
    };
    let formula = match a.method {
        Method::Reservoir => "reservoir_sample_size",
        _ => "coverage_sample_size",
    };
    let mut out = String::new();
    let _ = writeln!(out, "# db_sample_size={n_db_formula} (eps_db={}, delta_db={})", sp.eps_db, sp.delta_db);
    let _ = writeln!(
        out,
        "# {formula}={n_fi_formula} (eps={}, delta={}, rho={})",
        sp.eps_fi, sp.delta_fi, sp.rho
    );
    let Some(file) = &a.file else {
        emit(a.output.as_deref(), &out)?;
        return Ok(());
    };
    let minsup = a.minsup.ok_or_else(|| Error::param("--minsup is required when sampling a database"))?;
    if minsup == 0 {
        return Err(Error::param("minsup must be >= 1").into());
    }
    let db = read_fimi(file)?;
    let n_db = a.n_db.unwrap_or(n_db_formula as usize);
    let n_fi = a.n.unwrap_or(n_fi_formula as usize);
    if n_fi == 0 {
        return Err(Error::param("FI-sample size must be >= 1").into());
    }
    let mut net = SimNet::new(1);
    let db_sample = gather_db_sample(std::slice::from_ref(&db), n_db, a.seed, &mut net);
    let sminsup = abs_minsup(minsup as f64 / db.len().max(1) as f64, db_sample.len()).max(1);
    let mut rng = fimi::worker_rng(a.seed, 0);
    let sample = match a.method {
        Method::Reservoir => {
            let (fis, _) = eclat(&db_sample, sminsup, EclatOpts::default());
            reservoir(fis.into_iter().map(|r| r.itemset), n_fi, rng, a.reservoir_algo.into())
        }
        m => {
            let (mfis, _) = mfi_mine(&db_sample, sminsup, &db_sample.frequent_items(sminsup));
            if mfis.is_empty() {
                return Err(Error::param("no frequent itemsets in the database sample").into());
            }
            sampling::coverage_sample(&mfis, n_fi, &mut rng, m == Method::CoverageExact)?
        }
    };
    let _ = writeln!(out, "# db_sample_drawn={} sample_minsup={sminsup}", db_sample.len());
    if sample.short {
        let _ = writeln!(out, "# short: stream had only {} itemsets", sample.total_seen);
    }
    out.push_str(&sample.dump(a.seed));
    emit(a.output.as_deref(), &out)?;
    Ok(())
}

fn cmd_plan(a: PlanArgs) -> CmdResult {
    let db_sample = read_fimi(&a.db_sample)?;
    let fi = fimi::datagen::parse_fimi(&read_text(&a.fi_sample)?)?;
    let fi_sample: Vec<Itemset> = fi.transactions.into_iter().map(|t| t.items).collect();
    let items = db_sample.frequent_items(a.minsup.max(1));
    let plan = plan_phase2(&fi_sample, &db_sample, &items, a.alpha, a.procs, a.scheduler.into())?;
    emit(a.output.as_deref(), &(plan.to_json() + "\n"))?;
    eprintln!(
        "# pbecs={} predicted_balance={:.4} est_loads={:?}",
        plan.pbecs.len(),
        plan.predicted_balance(),
        plan.est_loads()
    );
    Ok(())
}

fn cmd_run(a: RunArgs) -> CmdResult {
    let db = read_fimi(&a.file)?;
    let params = RunParams {
        alpha: a.alpha,
        sample: SampleParams {
            eps_db: a.eps_db,
            delta_db: a.delta_db,
            eps_fi: a.eps_fi,
            delta_fi: a.delta_fi,
            rho: a.rho,
        },
        n_db: (!a.formula_sizes).then_some(a.n_db),
        n_fi: (!a.formula_sizes).then_some(a.n_fi),
        scheduler: a.scheduler.into(),
        dynamic_lb: !a.no_dynamic_lb,
        reservoir_algo: a.reservoir_algo.into(),
        seed: a.seed,
        ..RunParams::new(a.variant.into(), a.procs, a.minsup)
    };
    if a.procs == 0 {
        return Err(Error::param("P must be >= 1").into());
    }
    let parts = partition_db(&db, a.procs)?;
    let r = run_parallel_fimi(&parts, &params)?;
    let mut fis = r.all_fis();
    emit(a.output.as_deref(), &listing(&mut fis))?;
    let mut report = String::new();
    for line in params.manifest().lines() {
        let _ = writeln!(report, "# {line}");
    }
    report.push_str(&r.metrics.to_csv());
    match &a.metrics {
        Some(p) => fs::write(p, &report).map_err(|e| Error::io(p, e))?,
        None => eprint!("{report}"),
    }
    if a.verify {
        let (seq, _) = eclat(&db, a.minsup, EclatOpts::default());
        let want: BTreeMap<Itemset, usize> = seq.into_iter().map(|f| (f.itemset, f.support)).collect();
        let got: BTreeMap<Itemset, usize> = fis.iter().map(|f| (f.itemset.clone(), f.support)).collect();
        if got.len() != fis.len() {
            return Err(Failure::Verify(format!("{} duplicate FI records", fis.len() - got.len())));
        }
        if got != want {
            let missing = want.iter().filter(|(u, s)| got.get(*u) != Some(*s)).count();
            let extra = got.iter().filter(|(u, s)| want.get(*u) != Some(*s)).count();
            return Err(Failure::Verify(format!(
                "parallel output differs from sequential: {missing} missing or wrong, {extra} unexpected"
            )));
        }
        eprintln!("VERIFY: OK ({} itemsets)", want.len());
    }
    Ok(())
}

fn cmd_stats(a: StatsArgs) -> CmdResult {
    if a.minsup.contains(&0) {
        return Err(Error::param("minsup must be >= 1").into());
    }
    let db = read_fimi(&a.file)?;
    let ms = a.minsup[0];
    let one = || -> Result<(), Error> {
        if a.minsup.len() > 1 {
            return Err(Error::param("this characteristic takes a single --minsup"));
        }
        Ok(())
    };
    let text = match a.which {
        Which::Fi => {
            one()?;
            stats::fi_characteristic(&db, ms).to_csv()
        }
        Which::Mfi => {
            let mut s = String::from("minsup,length,count\n");
            for (m, row) in stats::mfi_characteristic(&db, &a.minsup) {
                for (l, c) in row {
                    let _ = writeln!(s, "{m},{l},{c}");
                }
            }
            s
        }
        Which::Ci => {
            one()?;
            let ci = stats::ci_extension_stats(&db, ms);
            let mut s = stats::hist_csv("w", &ci.w_hist);
            s.push_str("w,closed_len,count\n");
            for (w, h) in &ci.closed_by_w {
                for (l, c) in h {
                    let _ = writeln!(s, "{w},{l},{c}");
                }
            }
            s
        }
        Which::Isect => {
            one()?;
            let (m, _) = mfi_mine(&db, ms, &db.frequent_items(ms));
            stats::hist_csv("intersection", &stats::mfi_intersection_hist(&m))
        }
        Which::Pagerank | Which::PagerankDist => {
            one()?;
            if !(a.d > 0.0 && a.d < 1.0) || !(a.tol > 0.0) {
                return Err(Error::param("need d in (0,1) and tol > 0").into());
            }
            let (mut m, _) = mfi_mine(&db, ms, &db.frequent_items(ms));
            m.sort();
            if let Some(k) = a.k {
                eprintln!("# seed={}", a.seed);
                m = stats::sample_mfis_for_graph(&m, k, fimi::rng(a.seed));
                m.sort();
            }
            let g = MfiGraph::build(&m, a.min_edge_weight);
            let r = stats::pagerank(&g, a.d, a.tol, a.max_iter);
            let diverged = !r.converged && r.iterations < a.max_iter;
            eprintln!(
                "# nodes={} edges={} iterations={} converged={} diverged={diverged}",
                g.n,
                g.edges.len(),
                r.iterations,
                r.converged
            );
            let mut s = String::new();
            if matches!(a.which, Which::Pagerank) {
                s.push_str("node,mfi,pagerank\n");
                for (i, (u, v)) in m.iter().zip(&r.values).enumerate() {
                    let _ = writeln!(s, "{i},{u},{v:.6}");
                }
            } else {
                s.push_str("x,D\n");
                for (x, d) in stats::support_distribution(&r.values) {
                    let _ = writeln!(s, "{x:.6},{d:.6}");
                }
            }
            s
        }
    };
    emit(a.output.as_deref(), &text)?;
    Ok(())
}

/// Reads `key=value` lines into `--key value` arguments (underscores in keys
/// become dashes; `true`/`false` toggle boolean flags).
fn config_args(path: &Path) -> Result<Vec<String>, Error> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: n + 1,
            msg: format!("expected key=value, got {line:?}"),
        })?;
        let flag = format!("--{}", k.trim().replace('_', "-"));
        match v.trim() {
            "true" => out.push(flag),
            "false" => {}
            v => {
                out.push(flag);
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}

/// Splices config-file arguments in right after the subcommand name, so that
/// flags given on the command line (which come later) override them.
fn expand_args(raw: Vec<String>) -> Result<Vec<String>, Error> {
    let mut args = Vec::with_capacity(raw.len());
    let mut config = None;
    let mut it = raw.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = it.next();
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            args.push(a);
        }
    }
    let Some(path) = config else { return Ok(args) };
    let extra = config_args(Path::new(&path))?;
    let sub = args.iter().skip(1).position(|a| !a.starts_with('-')).map(|k| k + 1);
    match sub {
        Some(k) => {
            args.splice(k + 1..k + 1, extra);
        }
        None => args.extend(extra),
    }
    Ok(args)
}

fn report(f: Failure) -> ExitCode {
    let (tag, msg, code) = match f {
        Failure::Lib(e) => match e {
            Error::Param(m) => ("param", m, 1),
            Error::Io { path, source } => ("io", format!("{}: {source}", path.display()), 2),
            Error::Parse { line, msg } => ("parse", format!("line {line}: {msg}"), 2),
            Error::Contract(m) => ("contract", m, 3),
            Error::Worker { worker, msg } => ("worker", format!("worker {worker}: {msg}"), 3),
        },
        Failure::Verify(m) => {
            eprintln!("VERIFY: FAILED");
            ("verify", m, 3)
        }
    };
    eprintln!("error[{tag}]: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args = match expand_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => return report(e.into()),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[param]: {first}");
            eprintln!("{}", text.lines().skip(1).collect::<Vec<_>>().join("\n"));
            return ExitCode::from(1);
        }
    };
    let _ = cli.config;
    let res = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Mine(a) => cmd_mine(a),
        Cmd::Rules(a) => cmd_rules(a),
        Cmd::Sample(a) => cmd_sample(a),
        Cmd::Plan(a) => cmd_plan(a),
        Cmd::Run(a) => cmd_run(a),
        Cmd::Stats(a) => cmd_stats(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}
