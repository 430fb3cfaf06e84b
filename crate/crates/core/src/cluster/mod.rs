//! Deterministic simulated message-passing cluster running the four-phase
//! Parallel-FIMI method (sampling, planning, database exchange, mining).
//!
//! Workers are simulated one after another on the calling thread. They share
//! no mutable state; every interaction goes through [`SimNet`].

mod balance;
mod exchange;
mod net;
mod phase1;
mod phase4;

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::itemset::{Pbec, TransactionDb};
use crate::miners::{EclatOpts, FiRecord};
use crate::sampling::{self, FiSample, ReservoirAlgo, SampleParams};
use crate::scheduler::{self, PbecPlan, Scheduler};

pub use balance::{run_balanced, static_split, BalanceStats};
pub use exchange::{phase3_exchange, ExchangeSchedule};
pub use net::{Msg, NetCounters, SimNet};
pub use phase1::{
    gather_db_sample, parallel_mfi, parallel_mfi_sim, phase1, phase1_coverage_par, phase1_coverage_seq,
    phase1_reservoir, proportional_split, ParMfiResult, Phase1Input, Phase1Report,
};
pub use phase4::{exec_eclat, phase4_prefix_supports, ExecReport, TidlistCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Worker 0 mines MFIs of the db sample and runs Modified-Coverage.
    Seq,
    /// Parallel MFI mining and per-worker Modified-Coverage.
    Par,
    /// Per-worker reservoirs over a balanced FI enumeration of the db sample.
    Reservoir,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Seq, Variant::Par, Variant::Reservoir];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Seq => "seq",
            Variant::Par => "par",
            Variant::Reservoir => "reservoir",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seq" => Ok(Variant::Seq),
            "par" => Ok(Variant::Par),
            "reservoir" => Ok(Variant::Reservoir),
            _ => Err(Error::param(format!("unknown variant {s:?} (seq|par|reservoir)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub variant: Variant,
    pub p: usize,
    /// Absolute minimum support on the whole database.
    pub minsup: usize,
    pub alpha: f64,
    pub sample: SampleParams,
    /// Database-sample size; defaults to the Chernoff bound.
    pub n_db: Option<usize>,
    /// FI-sample size; defaults to the coverage or reservoir bound.
    pub n_fi: Option<usize>,
    pub scheduler: Scheduler,
    pub dynamic_lb: bool,
    pub reservoir_algo: ReservoirAlgo,
    pub eclat: EclatOpts,
    pub seed: u64,
}

impl RunParams {
    pub fn new(variant: Variant, p: usize, minsup: usize) -> Self {
        RunParams {
            variant,
            p,
            minsup,
            alpha: 0.3,
            sample: SampleParams::default(),
            n_db: None,
            n_fi: None,
            scheduler: Scheduler::Lpt,
            dynamic_lb: true,
            reservoir_algo: ReservoirAlgo::Vitter,
            eclat: EclatOpts::default(),
            seed: 1,
        }
    }

    pub fn resolved_n_db(&self) -> Result<usize> {
        match self.n_db {
            Some(n) => Ok(n),
            None => Ok(sampling::db_sample_size(self.sample.eps_db, self.sample.delta_db)? as usize),
        }
    }

    pub fn resolved_n_fi(&self) -> Result<usize> {
        if let Some(n) = self.n_fi {
            return Ok(n);
        }
        let s = &self.sample;
        let n = match self.variant {
            Variant::Reservoir => sampling::reservoir_sample_size(s.eps_fi, s.delta_fi, s.rho)?,
            _ => sampling::coverage_sample_size(s.eps_fi, s.delta_fi, s.rho)?,
        };
        Ok(n as usize)
    }

    /// `key=value` manifest of the run.
    pub fn manifest(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "variant={}", self.variant.name());
        let _ = writeln!(s, "P={}", self.p);
        let _ = writeln!(s, "minsup={}", self.minsup);
        let _ = writeln!(s, "alpha={}", self.alpha);
        let _ = writeln!(s, "eps_db={}", self.sample.eps_db);
        let _ = writeln!(s, "delta_db={}", self.sample.delta_db);
        let _ = writeln!(s, "eps_fi={}", self.sample.eps_fi);
        let _ = writeln!(s, "delta_fi={}", self.sample.delta_fi);
        let _ = writeln!(s, "rho={}", self.sample.rho);
        let _ = writeln!(s, "n_db={}", self.resolved_n_db().map_or("invalid".into(), |n| n.to_string()));
        let _ = writeln!(s, "n_fi={}", self.resolved_n_fi().map_or("invalid".into(), |n| n.to_string()));
        let _ = writeln!(s, "scheduler={:?}", self.scheduler);
        let _ = writeln!(s, "dynamic_lb={}", self.dynamic_lb);
        let _ = writeln!(s, "seed={}", self.seed);
        s
    }

    fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::param("P must be >= 1"));
        }
        if self.minsup == 0 {
            return Err(Error::param("minsup must be >= 1"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::param("alpha must be in (0,1]"));
        }
        self.sample.validate()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub variant: String,
    pub p: usize,
    pub phase1: Phase1Report,
    pub n_pbecs: usize,
    pub predicted_balance: f64,
    pub replication_factor: f64,
    /// Phase-4 work counter per worker.
    pub work: Vec<u64>,
    pub fis_per_worker: Vec<usize>,
    pub cache_reused: Vec<u64>,
    pub net: NetCounters,
    pub rounds: u64,
    pub wall_ms: f64,
}

impl RunMetrics {
    /// `max_i(work_i) / mean(work_i)`.
    pub fn balance(&self) -> f64 {
        balance_ratio(&self.work)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "variant,P,worker,work,fis,bytes_sent,messages_sent,cache_reused,replication_factor,balance,wall_ms\n",
        );
        for w in 0..self.p {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{:.6},{:.6},{:.3}",
                self.variant,
                self.p,
                w,
                self.work[w],
                self.fis_per_worker[w],
                self.net.bytes_sent[w],
                self.net.messages_sent[w],
                self.cache_reused[w],
                self.replication_factor,
                self.balance(),
                self.wall_ms
            );
        }
        s
    }
}

/// `max / mean`, or 1 for all-zero input.
pub fn balance_ratio(work: &[u64]) -> f64 {
    let total: u64 = work.iter().sum();
    if total == 0 {
        return 1.0;
    }
    *work.iter().max().unwrap() as f64 / (total as f64 / work.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// FIs reported by each worker (worker 0 also reports the prefix itemsets).
    pub per_worker: Vec<Vec<FiRecord>>,
    pub plan: PbecPlan,
    pub fi_sample: FiSample,
    pub metrics: RunMetrics,
}

impl RunResult {
    /// Union of the worker outputs in canonical order.
    pub fn all_fis(&self) -> Vec<FiRecord> {
        let mut v: Vec<FiRecord> = self.per_worker.concat();
        v.sort();
        v
    }
}

fn on_worker<T>(id: usize, f: impl FnOnce() -> T) -> Result<T> {
    catch_unwind(AssertUnwindSafe(f)).map_err(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Error::Worker { worker: id, msg }
    })
}

/// Runs Parallel-FIMI over the partitions `parts` (one per worker).
pub fn run_parallel_fimi(parts: &[TransactionDb], params: &RunParams) -> Result<RunResult> {
    params.validate()?;
    if parts.len() != params.p {
        return Err(Error::param(format!("{} partitions for P={}", parts.len(), params.p)));
    }
    let start = Instant::now();
    let p = params.p;
    let mut net = SimNet::new(p);
    let n_total: usize = parts.iter().map(|d| d.len()).sum();
    let n_items = parts.iter().map(|d| d.n_items).max().unwrap_or(0);

    // Global single-item supports, gathered at worker 0.
    for (i, d) in parts.iter().enumerate() {
        let mut c: Vec<u64> = d.item_supports().into_iter().map(|x| x as u64).collect();
        c.resize(n_items, 0);
        net.send(i, 0, Msg::Counts(c));
    }
    let mut global = vec![0u64; n_items];
    for _ in 0..p {
        if let (_, Msg::Counts(c)) = net.expect(0) {
            for (g, x) in global.iter_mut().zip(c) {
                *g += x;
            }
        }
    }
    let frequent: Vec<u32> = (0..n_items)
        .filter(|&i| global[i] >= params.minsup as u64)
        .map(|i| i as u32)
        .collect();

    // Phase 1
    let inp = Phase1Input {
        parts,
        n_total,
        minsup: params.minsup,
        n_db: params.resolved_n_db()?,
        n_fi: params.resolved_n_fi()?,
        seed: params.seed,
        dynamic_lb: params.dynamic_lb,
        reservoir_algo: params.reservoir_algo,
    };
    let (db_sample, fi_sample, p1) = match on_worker(0, || phase1(params.variant, &inp, &mut net)) {
        Ok(r) => r?,
        Err(e) => return Err(e),
    };

    // Phase 2 on worker 0, then broadcast.
    let plan = on_worker(0, || {
        scheduler::plan_phase2(&fi_sample.itemsets, &db_sample, &frequent, params.alpha, p, params.scheduler)
    })??;
    for to in 1..p {
        net.send(0, to, Msg::Plan(Box::new(plan.clone())));
        net.expect(to);
    }

    // Phase 3
    let dprime = on_worker(0, || phase3_exchange(&plan, parts, &mut net))?;

    // Phase 4
    let prefix_fis = on_worker(0, || phase4_prefix_supports(&plan, parts, params.minsup, &mut net))?;
    let mut per_worker = Vec::with_capacity(p);
    let mut work = Vec::with_capacity(p);
    let mut reuse = Vec::with_capacity(p);
    for q in 0..p {
        let mine: Vec<Pbec> = plan.assignment[q].iter().map(|&k| plan.pbecs[k].clone()).collect();
        let (fis, rep) = on_worker(q, || exec_eclat(&mine, &dprime[q], params.minsup, params.eclat))?;
        work.push(rep.work());
        reuse.push(rep.cache_reused);
        per_worker.push(fis);
    }
    per_worker[0].extend(prefix_fis);

    let prefixes: Vec<_> = plan.pbecs.iter().map(|b| b.prefix.clone()).collect();
    let full = TransactionDb::new(parts.iter().flat_map(|d| d.transactions.iter().cloned()).collect());
    let replication = scheduler::replication_factor(&plan.assignment, &prefixes, &full);
    if !net.quiet() {
        return Err(Error::Contract("messages left undelivered".into()));
    }
    let metrics = RunMetrics {
        variant: params.variant.name().into(),
        p,
        phase1: p1,
        n_pbecs: plan.pbecs.len(),
        predicted_balance: plan.predicted_balance(),
        replication_factor: replication,
        work,
        fis_per_worker: per_worker.iter().map(|v| v.len()).collect(),
        cache_reused: reuse,
        rounds: net.rounds,
        net: net.counters.clone(),
        wall_ms: start.elapsed().as_secs_f64() * 1000.0,
    };
    Ok(RunResult {
        per_worker,
        plan,
        fi_sample,
        metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_panic_names_the_worker() {
        match on_worker(3, || -> u32 { panic!("boom") }) {
            Err(Error::Worker { worker, msg }) => assert_eq!((worker, msg.as_str()), (3, "boom")),
            other => panic!("{other:?}"),
        }
        assert_eq!(on_worker(0, || 5).unwrap(), 5);
    }

    #[test]
    fn balance_of_zero_work_is_one() {
        assert_eq!(balance_ratio(&[0, 0]), 1.0);
        assert_eq!(balance_ratio(&[3, 1]), 1.5);
    }
}
