//! Phase-2 planning: recursive PBEC partitioning driven by the FI sample, LPT
//! scheduling, and the replication-reducing quadratic-knapsack alternative.

mod lpt;
mod qkp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::itemset::{intersect, tidlist_vertical, Item, Itemset, Pbec, Tid, Tidlist, TransactionDb};

pub use lpt::{loads, lpt_schedule, makespan};
pub use qkp::{db_repl_min, share_matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheduler {
    Lpt,
    Qkp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PbecPlan {
    /// Final (leaf) PBECs.
    pub pbecs: Vec<Pbec>,
    /// Prefixes of the PBECs that were split. Together with the leaf prefixes
    /// these are the itemsets no PBEC contains; Phase 4 counts them directly.
    pub internal_prefixes: Vec<Itemset>,
    /// Per-processor PBEC indices (L_i).
    pub assignment: Vec<Vec<usize>>,
    pub alpha: f64,
    pub p: usize,
    pub sample_size: usize,
}

impl PbecPlan {
    pub fn est_loads(&self) -> Vec<u64> {
        let sizes: Vec<u64> = self.pbecs.iter().map(|b| b.est_count as u64).collect();
        loads(&sizes, &self.assignment)
    }

    /// Predicted max/mean of the estimated loads (1.0 = perfect).
    pub fn predicted_balance(&self) -> f64 {
        let l = self.est_loads();
        let total: u64 = l.iter().sum();
        if total == 0 {
            return 1.0;
        }
        *l.iter().max().unwrap() as f64 / (total as f64 / l.len() as f64)
    }

    /// Leaf prefixes followed by internal prefixes.
    pub fn node_prefixes(&self) -> Vec<Itemset> {
        let mut v: Vec<Itemset> = self.pbecs.iter().map(|b| b.prefix.clone()).collect();
        v.extend(self.internal_prefixes.iter().cloned());
        v
    }

    pub fn prefixes_of(&self, proc: usize) -> Vec<Itemset> {
        self.assignment[proc].iter().map(|&k| self.pbecs[k].prefix.clone()).collect()
    }

    /// Every PBEC assigned exactly once and index sets disjoint.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.pbecs.len()];
        for l in &self.assignment {
            for &k in l {
                if k >= seen.len() || seen[k] {
                    return Err(Error::Contract(format!("PBEC index {k} assigned twice or out of range")));
                }
                seen[k] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Contract("unassigned PBEC".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json(s: &str) -> Result<PbecPlan> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

/// Vertical view of the database sample, built once per planning run.
pub struct SampleIndex {
    vertical: Vec<Tidlist>,
    all: Vec<Tid>,
}

impl SampleIndex {
    pub fn new(db: &TransactionDb) -> Self {
        SampleIndex {
            vertical: db.vertical(),
            all: db.tids(),
        }
    }

    pub fn tidlist(&self, u: &Itemset) -> Tidlist {
        tidlist_vertical(&self.vertical, &self.all, u)
    }

    /// Extensions sorted by ascending `supp(prefix ∪ {b})`, ties by id.
    pub fn order_extensions(&self, prefix: &Itemset, extensions: &[Item]) -> Vec<Item> {
        let t = self.tidlist(prefix);
        let mut keyed: Vec<(usize, Item)> = extensions
            .iter()
            .map(|&b| {
                let s = match self.vertical.get(b as usize) {
                    Some(tb) => intersect(&t, tb).len(),
                    None => 0,
                };
                (s, b)
            })
            .collect();
        keyed.sort_unstable();
        keyed.into_iter().map(|(_, b)| b).collect()
    }
}

/// Children of `[prefix | extensions]` with their sample members (indices into `fi_sample`).
fn split_members(
    prefix: &Itemset,
    extensions: &[Item],
    index: &SampleIndex,
    fi_sample: &[Itemset],
    members: &[usize],
) -> Vec<(Pbec, Vec<usize>)> {
    let order = index.order_extensions(prefix, extensions);
    let mut kids: Vec<(Pbec, Vec<usize>)> = (0..order.len())
        .map(|k| (Pbec::new(prefix.with(order[k]), order[k + 1..].to_vec()), Vec::new()))
        .collect();
    let pos = |b: Item| order.iter().position(|&x| x == b);
    for &m in members {
        let x = &fi_sample[m];
        // The member belongs to the child of its earliest extension item.
        let first = x
            .items()
            .iter()
            .filter(|i| !prefix.contains(**i))
            .filter_map(|&i| pos(i))
            .min();
        if let Some(k) = first {
            if kids[k].0.contains(x) {
                kids[k].1.push(m);
            }
        }
    }
    for (b, m) in &mut kids {
        b.est_count = m.len();
    }
    kids
}

/// Partition: one child per extension `b`, `[prefix ∪ {b} | items after b]` in
/// ascending support order on `db_sample`, with `est` = sample hits.
pub fn partition_pbec(prefix: &Itemset, extensions: &[Item], db_sample: &TransactionDb, fi_sample: &[Itemset]) -> Vec<Pbec> {
    let index = SampleIndex::new(db_sample);
    let parent = Pbec::new(prefix.clone(), extensions.to_vec());
    let members: Vec<usize> = (0..fi_sample.len()).filter(|&k| parent.contains(&fi_sample[k])).collect();
    split_members(prefix, extensions, &index, fi_sample, &members)
        .into_iter()
        .map(|(b, _)| b)
        .collect()
}

/// Phase-2 FI partitioning. Starts from `[∅ | items]`, repeatedly splits the
/// PBEC with the largest estimate above `alpha·|S|/P` (ties: smallest prefix),
/// then schedules the leaves with the chosen scheduler.
pub fn plan_phase2(
    fi_sample: &[Itemset],
    db_sample: &TransactionDb,
    items: &[Item],
    alpha: f64,
    p: usize,
    scheduler: Scheduler,
) -> Result<PbecPlan> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param(format!("alpha must be in (0,1], got {alpha}")));
    }
    if p == 0 {
        return Err(Error::param("P must be >= 1"));
    }
    let index = SampleIndex::new(db_sample);
    let mut items = items.to_vec();
    items.sort_unstable();
    items.dedup();
    let root = Pbec::new(Itemset::empty(), items.clone());
    let members: Vec<usize> = (0..fi_sample.len()).filter(|&k| root.contains(&fi_sample[k])).collect();
    let mut work = split_members(&root.prefix, &items, &index, fi_sample, &members);
    let mut internal = Vec::new();
    let limit = alpha * fi_sample.len() as f64 / p as f64;
    loop {
        let pick = work
            .iter()
            .enumerate()
            .filter(|(_, (b, _))| b.est_count as f64 > limit && !b.extensions.is_empty())
            .max_by(|(_, (a, _)), (_, (b, _))| a.est_count.cmp(&b.est_count).then(b.prefix.cmp(&a.prefix)))
            .map(|(k, _)| k);
        let Some(k) = pick else { break };
        let (b, m) = work.swap_remove(k);
        let kids = split_members(&b.prefix, &b.extensions, &index, fi_sample, &m);
        internal.push(b.prefix);
        work.extend(kids);
    }
    work.sort_by(|a, b| a.0.prefix.cmp(&b.0.prefix));
    let pbecs: Vec<Pbec> = work.into_iter().map(|(b, _)| b).collect();
    internal.sort();
    let assignment = match scheduler {
        Scheduler::Lpt => lpt_schedule(&pbecs.iter().map(|b| b.est_count as u64).collect::<Vec<_>>(), p),
        Scheduler::Qkp => {
            let prefixes: Vec<Itemset> = pbecs.iter().map(|b| b.prefix.clone()).collect();
            let w: Vec<u64> = pbecs.iter().map(|b| b.est_count as u64).collect();
            db_repl_min(&w, &share_matrix(&prefixes, db_sample), p)
        }
    };
    Ok(PbecPlan {
        pbecs,
        internal_prefixes: internal,
        assignment,
        alpha,
        p,
        sample_size: fi_sample.len(),
    })
}

/// `D'_i`: the transactions of `db` containing at least one of `prefixes`.
pub fn covering_tids(prefixes: &[Itemset], db: &TransactionDb) -> Vec<Tid> {
    db.transactions
        .iter()
        .filter(|t| prefixes.iter().any(|u| u.is_subset_of(&t.items)))
        .map(|t| t.tid)
        .collect()
}

/// `Σ_i |D'_i| / |D|` for the per-processor prefix lists.
pub fn replication_factor(assignment: &[Vec<usize>], prefixes: &[Itemset], db: &TransactionDb) -> f64 {
    if db.is_empty() {
        return 0.0;
    }
    let total: usize = assignment
        .iter()
        .map(|l| {
            let mine: Vec<Itemset> = l.iter().map(|&k| prefixes[k].clone()).collect();
            covering_tids(&mine, db).len()
        })
        .sum();
    total as f64 / db.len() as f64
}
