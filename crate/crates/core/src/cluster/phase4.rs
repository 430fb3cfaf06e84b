use serde::{Deserialize, Serialize};

use super::net::{Msg, SimNet};
use crate::itemset::{intersect, Item, Itemset, Pbec, Tid, Tidlist, TransactionDb};
use crate::miners::{self, EclatOpts, FiRecord, MineStats};
use crate::scheduler::PbecPlan;

/// Tidlists of the current prefix's leading items: entry `k` holds the first
/// `k+1` items' tidlist. Moving to the next prefix reuses the longest common prefix.
#[derive(Clone, Debug, Default)]
pub struct TidlistCache {
    entries: Vec<(Item, Tidlist)>,
    pub reused: u64,
    pub computed: u64,
}

impl TidlistCache {
    /// Tidlist of `prefix`; `all` is returned for the empty prefix.
    pub fn advance(&mut self, prefix: &Itemset, vertical: &[Tidlist], all: &[Tid]) -> Tidlist {
        let items = prefix.items();
        let lcp = self
            .entries
            .iter()
            .zip(items)
            .take_while(|((a, _), b)| a == *b)
            .count();
        self.reused += lcp as u64;
        self.entries.truncate(lcp);
        for &i in &items[lcp..] {
            let ti: &[Tid] = vertical.get(i as usize).map_or(&[], |v| v.as_slice());
            let t = match self.entries.last() {
                Some((_, prev)) => intersect(prev, ti),
                None => ti.to_vec(),
            };
            self.computed += 1;
            self.entries.push((i, t));
        }
        match self.entries.last() {
            Some((_, t)) => t.clone(),
            None => all.to_vec(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExecReport {
    pub stats: MineStats,
    pub cache_reused: u64,
    /// Work counter per executed PBEC, in execution order.
    pub per_pbec_work: Vec<u64>,
}

impl ExecReport {
    pub fn work(&self) -> u64 {
        self.stats.work()
    }
}

/// Exec-Eclat: sorts the PBECs lexicographically by prefix, then enumerates
/// the frequent members of each using the tidlist cache on `db`.
pub fn exec_eclat(pbecs: &[Pbec], db: &TransactionDb, minsup: usize, opts: EclatOpts) -> (Vec<FiRecord>, ExecReport) {
    let mut order: Vec<&Pbec> = pbecs.iter().collect();
    order.sort_by(|a, b| a.prefix.cmp(&b.prefix));
    let vertical = db.vertical();
    let all = db.tids();
    let mut cache = TidlistCache::default();
    let mut out = Vec::new();
    let mut report = ExecReport::default();
    for b in order {
        let t = cache.advance(&b.prefix, &vertical, &all);
        let mut st = MineStats {
            intersections: (b.prefix.len() as u64).saturating_sub(1),
            ..MineStats::default()
        };
        if t.len() >= minsup.max(1) {
            let ext: Vec<(Item, Vec<Tid>)> = b
                .extensions
                .iter()
                .map(|&e| (e, vertical.get(e as usize).map_or(Vec::new(), |v| intersect(&t, v))))
                .collect();
            st.intersections += ext.len() as u64;
            let inner = miners::eclat_pbec(&b.prefix, ext, minsup, opts, &mut |itemset, support| {
                out.push(FiRecord { itemset, support })
            });
            st.absorb(inner);
        }
        report.per_pbec_work.push(st.work());
        report.stats.absorb(st);
    }
    report.cache_reused = cache.reused;
    (out, report)
}

/// Phase-4 prefix pass: every worker counts the supports of all node prefixes
/// of the plan on its original partition; worker 0 sums them and reports those
/// reaching `minsup`.
pub fn phase4_prefix_supports(plan: &PbecPlan, parts: &[TransactionDb], minsup: usize, net: &mut SimNet) -> Vec<FiRecord> {
    let mut prefixes = plan.node_prefixes();
    prefixes.sort();
    prefixes.dedup();
    prefixes.retain(|u| !u.is_empty());
    if prefixes.is_empty() {
        return Vec::new();
    }
    for (i, d) in parts.iter().enumerate() {
        let counts: Vec<u64> = prefixes
            .iter()
            .map(|u| d.transactions.iter().filter(|t| u.is_subset_of(&t.items)).count() as u64)
            .collect();
        net.send(i, 0, Msg::Counts(counts));
    }
    let mut total = vec![0u64; prefixes.len()];
    for _ in 0..parts.len() {
        match net.expect(0) {
            (_, Msg::Counts(c)) => {
                for (t, x) in total.iter_mut().zip(c) {
                    *t += x;
                }
            }
            (from, m) => panic!("worker 0: unexpected {m:?} from {from}"),
        }
    }
    prefixes
        .into_iter()
        .zip(total)
        .filter(|&(_, s)| s as usize >= minsup.max(1))
        .map(|(itemset, s)| FiRecord {
            itemset,
            support: s as usize,
        })
        .collect()
}
