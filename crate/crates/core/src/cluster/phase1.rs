use rand::seq::index::sample as index_sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::balance::{run_balanced, static_split, BalanceStats};
use super::net::{Msg, SimNet};
use super::Variant;
use crate::error::Result;
use crate::itemset::{abs_minsup, intersect, Item, Itemset, Tid, Transaction, TransactionDb};
use crate::miners::{self, EclatOpts, MfiMiner, MineStats};
use crate::sampling::{self, FiSample, Reservoir, ReservoirAlgo, SampleSource};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Phase1Report {
    pub db_sample_size: usize,
    pub sample_minsup: usize,
    pub fi_sample_size: usize,
    /// Size of the candidate-MFI set M (coverage variants).
    pub m_size: usize,
    /// Per-worker sample counts requested (parallel coverage) or drawn (reservoir).
    pub per_worker_samples: Vec<u64>,
    /// Per-worker FI counts (reservoir).
    pub per_worker_fis: Vec<u64>,
    pub balance: Option<BalanceStats>,
}

/// Each worker draws `max(1, ceil(n_db/P))` transactions of its partition
/// uniformly with replacement; worker 0 concatenates them (tids renumbered).
pub fn gather_db_sample(parts: &[TransactionDb], n_db: usize, seed: u64, net: &mut SimNet) -> TransactionDb {
    let p = parts.len();
    let per = n_db.div_ceil(p).max(1);
    for (i, d) in parts.iter().enumerate() {
        let mut rng = crate::worker_rng(seed, i);
        let draws: Vec<Transaction> = if d.is_empty() {
            Vec::new()
        } else {
            (0..per)
                .map(|_| d.transactions[rng.random_range(0..d.len())].clone())
                .collect()
        };
        net.send(i, 0, Msg::Transactions(draws));
    }
    let mut rows = Vec::new();
    for _ in 0..p {
        match net.expect(0) {
            (_, Msg::Transactions(ts)) => rows.extend(ts.into_iter().map(|t| t.items)),
            (from, m) => panic!("worker 0: unexpected {m:?} from {from}"),
        }
    }
    let mut s = TransactionDb::from_rows(rows);
    s.n_items = parts.iter().map(|d| d.n_items).max().unwrap_or(0);
    s
}

/// Broadcast from worker 0 (counted once per receiver).
fn broadcast_sample(db_sample: &TransactionDb, net: &mut SimNet) {
    for to in 1..net.p() {
        net.send(0, to, Msg::Transactions(db_sample.transactions.clone()));
        net.expect(to);
    }
}

/// Largest-remainder split of `n` proportional to `w` (sums to `n` exactly).
pub fn proportional_split(w: &[f64], n: u64) -> Vec<u64> {
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        let mut out = vec![0; w.len()];
        if let Some(first) = out.first_mut() {
            *first = n;
        }
        return out;
    }
    let exact: Vec<f64> = w.iter().map(|x| n as f64 * x / total).collect();
    let mut out: Vec<u64> = exact.iter().map(|x| x.floor() as u64).collect();
    let mut left = n - out.iter().sum::<u64>().min(n);
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
    for k in order {
        if left == 0 {
            break;
        }
        out[k] += 1;
        left -= 1;
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParMfiResult {
    /// M_i per worker.
    pub per_worker: Vec<Vec<Itemset>>,
    pub balance: BalanceStats,
    pub stats: MineStats,
}

impl ParMfiResult {
    /// M = ⋃ M_i.
    pub fn m(&self) -> Vec<Itemset> {
        let mut v: Vec<Itemset> = self.per_worker.concat();
        v.sort();
        v.dedup();
        v
    }
}

/// Parallel-DFS-MFI-Schema on a replicated database: each worker mines its
/// 1-item-prefix PBECs, checking candidates only against its own M_i.
pub fn parallel_mfi(db_sample: &TransactionDb, minsup: usize, p: usize, dynamic_lb: bool, net: &mut SimNet) -> ParMfiResult {
    let miner = MfiMiner::new(db_sample, minsup);
    let items = miner.frequent_items().to_vec();
    let mut per_worker = vec![Vec::new(); p];
    let mut stats = MineStats::default();
    let balance = run_balanced(net, static_split(&items, p), dynamic_lb, |w, root| {
        miner.mine_root(root, &mut per_worker[w], &mut stats);
    });
    ParMfiResult {
        per_worker,
        balance,
        stats,
    }
}

/// Standalone form of [`parallel_mfi`] on a fresh simulated network.
pub fn parallel_mfi_sim(db_sample: &TransactionDb, minsup: usize, p: usize, dynamic_lb: bool) -> ParMfiResult {
    let mut net = SimNet::new(p);
    parallel_mfi(db_sample, minsup, p, dynamic_lb, &mut net)
}

fn recv_itemsets(net: &mut SimNet, to: usize, n: usize) -> Vec<Itemset> {
    let mut out = Vec::new();
    let mut parts: Vec<(usize, Vec<Itemset>)> = (0..n)
        .map(|_| match net.expect(to) {
            (from, Msg::Itemsets(v)) => (from, v),
            (from, m) => panic!("worker {to}: unexpected {m:?} from {from}"),
        })
        .collect();
    parts.sort_by_key(|x| x.0);
    for (_, v) in parts {
        out.extend(v);
    }
    out
}

pub struct Phase1Input<'a> {
    pub parts: &'a [TransactionDb],
    pub n_total: usize,
    pub minsup: usize,
    pub n_db: usize,
    pub n_fi: usize,
    pub seed: u64,
    pub dynamic_lb: bool,
    pub reservoir_algo: ReservoirAlgo,
}

pub fn phase1(variant: Variant, inp: &Phase1Input, net: &mut SimNet) -> Result<(TransactionDb, FiSample, Phase1Report)> {
    let db_sample = gather_db_sample(inp.parts, inp.n_db, inp.seed, net);
    let rel = inp.minsup as f64 / inp.n_total.max(1) as f64;
    let sminsup = abs_minsup(rel, db_sample.len()).max(1);
    let mut report = Phase1Report {
        db_sample_size: db_sample.len(),
        sample_minsup: sminsup,
        ..Phase1Report::default()
    };
    let fi_sample = match variant {
        Variant::Seq => phase1_coverage_seq(&db_sample, sminsup, inp, &mut report)?,
        Variant::Par => {
            broadcast_sample(&db_sample, net);
            phase1_coverage_par(&db_sample, sminsup, inp, net, &mut report)?
        }
        Variant::Reservoir => {
            broadcast_sample(&db_sample, net);
            phase1_reservoir(&db_sample, sminsup, inp, net, &mut report)?
        }
    };
    report.fi_sample_size = fi_sample.len();
    Ok((db_sample, fi_sample, report))
}

/// Worker 0 mines the MFIs of the database sample and runs Modified-Coverage.
pub fn phase1_coverage_seq(db_sample: &TransactionDb, sminsup: usize, inp: &Phase1Input, report: &mut Phase1Report) -> Result<FiSample> {
    let roots = db_sample.frequent_items(sminsup);
    let (mfis, _) = miners::mfi_mine(db_sample, sminsup, &roots);
    report.m_size = mfis.len();
    if mfis.is_empty() {
        return Ok(empty_sample(SampleSource::CoverageModified));
    }
    let mut rng = crate::worker_rng(inp.seed ^ 0x5eed, 0);
    sampling::coverage_sample(&mfis, inp.n_fi, &mut rng, false)
}

/// Parallel-DFS-MFI-Schema, then each worker samples `N·s_i/Σs_j` itemsets
/// from its own M_i with Modified-Coverage.
pub fn phase1_coverage_par(
    db_sample: &TransactionDb,
    sminsup: usize,
    inp: &Phase1Input,
    net: &mut SimNet,
    report: &mut Phase1Report,
) -> Result<FiSample> {
    let p = inp.parts.len();
    let par = parallel_mfi(db_sample, sminsup, p, inp.dynamic_lb, net);
    report.m_size = par.per_worker.iter().map(|m| m.len()).sum();
    report.balance = Some(par.balance.clone());
    let s: Vec<f64> = par
        .per_worker
        .iter()
        .map(|m| m.iter().map(|u| (u.len() as f64).exp2()).sum())
        .collect();
    // All-to-all exchange of s_i.
    for i in 0..p {
        for j in 0..p {
            if i != j {
                net.send(i, j, Msg::Weight(s[i]));
            }
        }
    }
    for j in 0..p {
        for _ in 0..p - 1 {
            net.expect(j);
        }
    }
    let counts = proportional_split(&s, inp.n_fi as u64);
    report.per_worker_samples = counts.clone();
    for i in 0..p {
        let mine = if counts[i] == 0 || par.per_worker[i].is_empty() {
            Vec::new()
        } else {
            let mut rng = crate::worker_rng(inp.seed ^ 0x5eed, i);
            sampling::coverage_sample(&par.per_worker[i], counts[i] as usize, &mut rng, false)?.itemsets
        };
        net.send(i, 0, Msg::Itemsets(mine));
    }
    Ok(FiSample {
        itemsets: recv_itemsets(net, 0, p),
        source: SampleSource::CoverageModified,
        total_seen: 0,
        short: false,
    })
}

/// Per-worker reservoirs over the FIs of dynamically balanced 1-item-prefix
/// PBECs, then a multivariate-hypergeometric split of the final sample.
pub fn phase1_reservoir(
    db_sample: &TransactionDb,
    sminsup: usize,
    inp: &Phase1Input,
    net: &mut SimNet,
    report: &mut Phase1Report,
) -> Result<FiSample> {
    let p = inp.parts.len();
    let vertical = db_sample.vertical();
    let items: Vec<Item> = (0..vertical.len())
        .filter(|&i| vertical[i].len() >= sminsup)
        .map(|i| i as Item)
        .collect();
    let mut res: Vec<Reservoir<Itemset>> = (0..p)
        .map(|i| Reservoir::new(inp.n_fi, inp.reservoir_algo, crate::worker_rng(inp.seed ^ 0x5eed, i)))
        .collect();
    let opts = EclatOpts::default();
    let balance = run_balanced(net, static_split(&items, p), inp.dynamic_lb, |w, b| {
        let t: &[Tid] = &vertical[b as usize];
        let ext: Vec<(Item, Vec<Tid>)> = items
            .iter()
            .filter(|&&e| e > b)
            .map(|&e| (e, intersect(t, &vertical[e as usize])))
            .collect();
        let r = &mut res[w];
        r.push(Itemset::from_sorted(vec![b]));
        miners::eclat_pbec(&Itemset::from_sorted(vec![b]), ext, sminsup, opts, &mut |u, _| r.push(u));
    });
    report.balance = Some(balance);
    let f: Vec<u64> = res.iter().map(|r| r.seen()).collect();
    report.per_worker_fis = f.clone();
    for (i, &fi) in f.iter().enumerate() {
        net.send(i, 0, Msg::Counts(vec![fi]));
    }
    for _ in 0..p {
        net.expect(0);
    }
    let total: u64 = f.iter().sum();
    let n = (inp.n_fi as u64).min(total);
    let mut rng0 = crate::worker_rng(inp.seed ^ 0xd1ce, 0);
    let x = sampling::multivariate_hypergeom(&f, n, &mut rng0)?;
    report.per_worker_samples = x.clone();
    for (i, &xi) in x.iter().enumerate() {
        net.send(0, i, Msg::Counts(vec![xi]));
    }
    for (i, r) in res.into_iter().enumerate() {
        let xi = match net.expect(i) {
            (_, Msg::Counts(c)) => c[0] as usize,
            (from, m) => panic!("worker {i}: unexpected {m:?} from {from}"),
        };
        let items = r.into_items();
        let mut rng = crate::worker_rng(inp.seed ^ 0xd1ce, i + 1);
        let mut keep: Vec<usize> = index_sample(&mut rng, items.len(), xi.min(items.len())).into_vec();
        keep.sort_unstable();
        net.send(i, 0, Msg::Itemsets(keep.into_iter().map(|k| items[k].clone()).collect()));
    }
    Ok(FiSample {
        itemsets: recv_itemsets(net, 0, p),
        source: SampleSource::Reservoir,
        total_seen: total,
        short: total < inp.n_fi as u64,
    })
}

fn empty_sample(source: SampleSource) -> FiSample {
    FiSample {
        itemsets: Vec::new(),
        source,
        total_seen: 0,
        short: false,
    }
}
