use serde::{Deserialize, Serialize};

use super::{FiRecord, MineStats};
use crate::itemset::{difference, intersect, Item, Itemset, Tid, TransactionDb};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EclatOpts {
    /// Below the first level, carry diffsets instead of tidlists.
    pub use_diffsets: bool,
    /// Process the extensions of each prefix in ascending support order.
    pub dynamic_order: bool,
    /// Absorb extensions with the prefix's own support into the prefix.
    pub closure_opt: bool,
}

impl Default for EclatOpts {
    fn default() -> Self {
        EclatOpts {
            use_diffsets: true,
            dynamic_order: true,
            closure_opt: true,
        }
    }
}

struct Node {
    item: Item,
    /// Tidlist of `core ∪ {item}`, or its diffset against `core` in diffset mode.
    set: Vec<Tid>,
    supp: usize,
}

struct Dfs<'a> {
    minsup: usize,
    opts: EclatOpts,
    stats: &'a mut MineStats,
    sink: &'a mut dyn FnMut(Itemset, usize),
}

impl Dfs<'_> {
    /// Emits `core ∪ A` for every `A ⊆ free`.
    fn emit(&mut self, core: &[Item], free: &[Item], supp: usize) {
        assert!(free.len() < 63, "too many absorbed items");
        for mask in 0u64..(1u64 << free.len()) {
            let mut v = core.to_vec();
            v.extend((0..free.len()).filter(|k| mask >> k & 1 == 1).map(|k| free[k]));
            self.stats.fis_visited += 1;
            (self.sink)(Itemset::new(v), supp);
        }
    }

    fn order(&self, nodes: &mut [Node]) {
        if self.opts.dynamic_order {
            nodes.sort_by_key(|n| (n.supp, n.item));
        }
    }

    /// `nodes` are the frequent extensions of `core ∪ free`; `diff` says whether
    /// their sets are diffsets.
    fn expand(&mut self, core: &mut Vec<Item>, free: &mut Vec<Item>, nodes: &[Node], diff: bool) {
        for a in 0..nodes.len() {
            let n = &nodes[a];
            core.push(n.item);
            self.stats.nodes += 1;
            let mut kids = Vec::new();
            for m in &nodes[a + 1..] {
                self.stats.intersections += 1;
                let (set, supp) = if !self.opts.use_diffsets {
                    let t = intersect(&n.set, &m.set);
                    let s = t.len();
                    (t, s)
                } else if !diff {
                    let d = difference(&n.set, &m.set);
                    let s = n.supp - d.len();
                    (d, s)
                } else {
                    let d = difference(&m.set, &n.set);
                    let s = n.supp - d.len();
                    (d, s)
                };
                if supp >= self.minsup {
                    kids.push(Node { item: m.item, set, supp });
                }
            }
            let mut absorbed = 0;
            if self.opts.closure_opt {
                let (same, rest): (Vec<Node>, Vec<Node>) = kids.into_iter().partition(|k| k.supp == n.supp);
                if !same.is_empty() {
                    let mut pre = core.clone();
                    pre.extend_from_slice(free);
                    let w: Vec<Item> = same.iter().map(|k| k.item).collect();
                    self.stats.closures.push((Itemset::new(pre), Itemset::new(w.clone())));
                    absorbed = w.len();
                    free.extend(w);
                }
                kids = rest;
            }
            self.emit(core, free, n.supp);
            self.order(&mut kids);
            if !kids.is_empty() {
                self.expand(core, free, &kids, self.opts.use_diffsets);
            }
            for _ in 0..absorbed {
                free.pop();
            }
            core.pop();
        }
    }
}

/// Enumerates the frequent members of `[prefix | ext]`, where `ext` pairs each
/// extension item with the tidlist of `prefix ∪ {item}`. The prefix itself is
/// not emitted. Extensions are used in the given order unless dynamic ordering is on.
pub fn eclat_pbec(
    prefix: &Itemset,
    ext: Vec<(Item, Vec<Tid>)>,
    minsup: usize,
    opts: EclatOpts,
    sink: &mut dyn FnMut(Itemset, usize),
) -> MineStats {
    let mut stats = MineStats::default();
    let minsup = minsup.max(1);
    let mut nodes: Vec<Node> = ext
        .into_iter()
        .filter(|(_, t)| t.len() >= minsup)
        .map(|(item, set)| Node {
            item,
            supp: set.len(),
            set,
        })
        .collect();
    let mut dfs = Dfs {
        minsup,
        opts,
        stats: &mut stats,
        sink,
    };
    dfs.order(&mut nodes);
    let mut core = prefix.items().to_vec();
    dfs.expand(&mut core, &mut Vec::new(), &nodes, false);
    stats
}

pub fn eclat_visit(db: &TransactionDb, minsup: usize, opts: EclatOpts, sink: &mut dyn FnMut(Itemset, usize)) -> MineStats {
    let minsup = minsup.max(1);
    let ext: Vec<(Item, Vec<Tid>)> = db
        .vertical()
        .into_iter()
        .enumerate()
        .filter(|(_, t)| t.len() >= minsup)
        .map(|(i, t)| (i as Item, t))
        .collect();
    eclat_pbec(&Itemset::empty(), ext, minsup, opts, sink)
}

/// Depth-first Eclat over prefix-based equivalence classes.
pub fn eclat(db: &TransactionDb, minsup: usize, opts: EclatOpts) -> (Vec<FiRecord>, MineStats) {
    let mut out = Vec::new();
    let stats = eclat_visit(db, minsup, opts, &mut |itemset, support| out.push(FiRecord { itemset, support }));
    (out, stats)
}
