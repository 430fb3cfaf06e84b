use super::MineStats;
use crate::itemset::{intersect, Item, Itemset, Tid, Tidlist, TransactionDb};

/// DFS-MFI-Schema over a fixed database. Each root item `r` spans the PBEC
/// `[{r} | frequent items > r]`; a candidate (no frequent single-item
/// extension) enters the result iff no superset is already there.
pub struct MfiMiner {
    vertical: Vec<Tidlist>,
    frequent: Vec<Item>,
    minsup: usize,
}

impl MfiMiner {
    pub fn new(db: &TransactionDb, minsup: usize) -> Self {
        let minsup = minsup.max(1);
        let vertical = db.vertical();
        let frequent = (0..vertical.len())
            .filter(|&i| vertical[i].len() >= minsup)
            .map(|i| i as Item)
            .collect();
        MfiMiner {
            vertical,
            frequent,
            minsup,
        }
    }

    pub fn frequent_items(&self) -> &[Item] {
        &self.frequent
    }

    /// Mines the PBEC rooted at `root` into `result`.
    pub fn mine_root(&self, root: Item, result: &mut Vec<Itemset>, stats: &mut MineStats) {
        let Some(t) = self.vertical.get(root as usize) else { return };
        if t.len() < self.minsup {
            return;
        }
        let ext: Vec<Item> = self.frequent.iter().copied().filter(|&e| e > root).collect();
        let mut core = vec![root];
        self.dfs(&mut core, t, &ext, result, stats);
    }

    fn dfs(&self, core: &mut Vec<Item>, t: &[Tid], ext: &[Item], result: &mut Vec<Itemset>, stats: &mut MineStats) {
        stats.fis_visited += 1;
        let mut kids: Vec<(Item, Tidlist)> = Vec::new();
        for &e in ext {
            stats.intersections += 1;
            let te = intersect(t, &self.vertical[e as usize]);
            if te.len() >= self.minsup {
                kids.push((e, te));
            }
        }
        if kids.is_empty() {
            let cand = Itemset::from_sorted(core.clone());
            if !result.iter().any(|m| cand.is_subset_of(m)) {
                result.push(cand);
            }
            return;
        }
        let items: Vec<Item> = kids.iter().map(|k| k.0).collect();
        for (k, (e, te)) in kids.iter().enumerate() {
            core.push(*e);
            self.dfs(core, te, &items[k + 1..], result, stats);
            core.pop();
        }
    }
}

/// MFIs reachable from `roots` (processed in ascending order). With all
/// frequent items as roots the result is exactly the MFI set.
pub fn mfi_mine(db: &TransactionDb, minsup: usize, roots: &[Item]) -> (Vec<Itemset>, MineStats) {
    let miner = MfiMiner::new(db, minsup);
    let mut roots = roots.to_vec();
    roots.sort_unstable();
    roots.dedup();
    let mut result = Vec::new();
    let mut stats = MineStats::default();
    for r in roots {
        miner.mine_root(r, &mut result, &mut stats);
    }
    (result, stats)
}
