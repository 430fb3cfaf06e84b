use serde::{Deserialize, Serialize};

use super::net::{Msg, SimNet};
use crate::itemset::{Itemset, Transaction, TransactionDb};
use crate::scheduler::PbecPlan;

/// Round-robin tournament pairings (0-based worker ids).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeSchedule {
    pub rounds: Vec<Vec<(usize, usize)>>,
}

impl ExchangeSchedule {
    /// Circle method: worker 0 fixed, the others rotate one place per round.
    /// Odd `p` adds a dummy, so one worker idles in each of the `p` rounds.
    pub fn round_robin(p: usize) -> Self {
        if p < 2 {
            return ExchangeSchedule { rounds: Vec::new() };
        }
        let n = p + p % 2;
        let mut a: Vec<usize> = (0..n).collect();
        let mut rounds = Vec::with_capacity(n - 1);
        for _ in 0..n - 1 {
            let pairs = (0..n / 2)
                .map(|k| (a[k], a[n - 1 - k]))
                .filter(|&(x, y)| x < p && y < p)
                .collect();
            rounds.push(pairs);
            a[1..].rotate_right(1);
        }
        ExchangeSchedule { rounds }
    }
}

fn relevant(db: &TransactionDb, prefixes: &[Itemset]) -> Vec<Transaction> {
    db.transactions
        .iter()
        .filter(|t| prefixes.iter().any(|u| u.is_subset_of(&t.items)))
        .cloned()
        .collect()
}

/// Phase 3: every worker ends up with `D'_j = {t ∈ D : some assigned prefix ⊆ t}`.
/// Within each pair the lower id sends first.
pub fn phase3_exchange(plan: &PbecPlan, parts: &[TransactionDb], net: &mut SimNet) -> Vec<TransactionDb> {
    let p = parts.len();
    let wanted: Vec<Vec<Itemset>> = (0..p).map(|j| plan.prefixes_of(j)).collect();
    let mut out: Vec<Vec<Transaction>> = (0..p).map(|j| relevant(&parts[j], &wanted[j])).collect();
    for round in ExchangeSchedule::round_robin(p).rounds {
        for (x, y) in round {
            let (lo, hi) = (x.min(y), x.max(y));
            net.send(lo, hi, Msg::Transactions(relevant(&parts[lo], &wanted[hi])));
            net.send(hi, lo, Msg::Transactions(relevant(&parts[hi], &wanted[lo])));
            for to in [hi, lo] {
                match net.expect(to) {
                    (_, Msg::Transactions(ts)) => out[to].extend(ts),
                    (from, m) => panic!("worker {to}: unexpected message from {from}: {m:?}"),
                }
            }
        }
        net.rounds += 1;
    }
    out.into_iter()
        .map(|mut ts| {
            ts.sort_by_key(|t| t.tid);
            let mut db = TransactionDb::new(ts);
            db.n_items = parts.iter().map(|d| d.n_items).max().unwrap_or(0);
            db
        })
        .collect()
}
