use std::collections::HashMap;

use super::{FiRecord, MineStats};
use crate::itemset::{Item, Itemset, TransactionDb};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct FpNode {
    pub item: Item,
    pub count: usize,
    pub parent: usize,
    /// Next node carrying the same item (header list link).
    pub next: usize,
    pub children: Vec<usize>,
}

/// FP-tree. Node `0` is the root; `header` lists (item, first node, total
/// support) in descending support order.
#[derive(Clone, Debug)]
pub struct FpTree {
    pub nodes: Vec<FpNode>,
    pub header: Vec<(Item, usize, usize)>,
}

impl FpTree {
    /// Two passes over weighted transactions: count, then insert the frequent
    /// items of each transaction in descending-support order.
    pub fn build(txns: &[(Vec<Item>, usize)], minsup: usize) -> FpTree {
        let mut counts: HashMap<Item, usize> = HashMap::new();
        for (t, w) in txns {
            for &i in t {
                *counts.entry(i).or_default() += w;
            }
        }
        let mut order: Vec<(Item, usize)> = counts.into_iter().filter(|&(_, c)| c >= minsup).collect();
        order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let rank: HashMap<Item, usize> = order.iter().enumerate().map(|(r, &(i, _))| (i, r)).collect();

        let mut tree = FpTree {
            nodes: vec![FpNode {
                item: Item::MAX,
                count: 0,
                parent: NONE,
                next: NONE,
                children: Vec::new(),
            }],
            header: order.iter().map(|&(i, c)| (i, NONE, c)).collect(),
        };
        let mut tail = vec![NONE; order.len()];
        for (t, w) in txns {
            let mut path: Vec<usize> = t.iter().filter_map(|i| rank.get(i).copied()).collect();
            path.sort_unstable();
            let mut cur = 0;
            for r in path {
                let item = order[r].0;
                let found = tree.nodes[cur].children.iter().copied().find(|&c| tree.nodes[c].item == item);
                cur = match found {
                    Some(c) => {
                        tree.nodes[c].count += w;
                        c
                    }
                    None => {
                        let id = tree.nodes.len();
                        tree.nodes.push(FpNode {
                            item,
                            count: *w,
                            parent: cur,
                            next: NONE,
                            children: Vec::new(),
                        });
                        tree.nodes[cur].children.push(id);
                        if tail[r] == NONE {
                            tree.header[r].1 = id;
                        } else {
                            tree.nodes[tail[r]].next = id;
                        }
                        tail[r] = id;
                        id
                    }
                };
            }
        }
        tree
    }

    pub fn is_empty(&self) -> bool {
        self.header.is_empty()
    }

    /// The node chain when every node has at most one child.
    fn single_path(&self) -> Option<Vec<usize>> {
        let mut path = Vec::new();
        let mut cur = 0;
        loop {
            match self.nodes[cur].children.len() {
                0 => return Some(path),
                1 => {
                    cur = self.nodes[cur].children[0];
                    path.push(cur);
                }
                _ => return None,
            }
        }
    }
}

fn mine(tree: &FpTree, suffix: &[Item], minsup: usize, stats: &mut MineStats, sink: &mut dyn FnMut(Itemset, usize)) {
    if let Some(path) = tree.single_path() {
        // Every combination of path nodes; support is the count of the deepest chosen node.
        assert!(path.len() < 63, "single path too long");
        for mask in 1u64..(1u64 << path.len()) {
            let mut v = suffix.to_vec();
            let mut deepest = 0;
            for (k, &n) in path.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    v.push(tree.nodes[n].item);
                    deepest = n;
                }
            }
            stats.fis_visited += 1;
            sink(Itemset::new(v), tree.nodes[deepest].count);
        }
        return;
    }
    for &(item, head, total) in tree.header.iter().rev() {
        let mut suf = suffix.to_vec();
        suf.push(item);
        stats.fis_visited += 1;
        sink(Itemset::new(suf.clone()), total);
        let mut base = Vec::new();
        let mut n = head;
        while n != NONE {
            let mut path = Vec::new();
            let mut p = tree.nodes[n].parent;
            while p != 0 {
                path.push(tree.nodes[p].item);
                p = tree.nodes[p].parent;
            }
            if !path.is_empty() {
                base.push((path, tree.nodes[n].count));
            }
            n = tree.nodes[n].next;
        }
        let cond = FpTree::build(&base, minsup);
        stats.intersections += 1;
        if !cond.is_empty() {
            mine(&cond, &suf, minsup, stats, sink);
        }
    }
}

pub fn fpgrowth_visit(db: &TransactionDb, minsup: usize, sink: &mut dyn FnMut(Itemset, usize)) -> MineStats {
    let mut stats = MineStats::default();
    let minsup = minsup.max(1);
    let txns: Vec<(Vec<Item>, usize)> = db.transactions.iter().map(|t| (t.items.items().to_vec(), 1)).collect();
    let tree = FpTree::build(&txns, minsup);
    if !tree.is_empty() {
        mine(&tree, &[], minsup, &mut stats, sink);
    }
    stats
}

/// FP-tree based pattern growth.
pub fn fpgrowth(db: &TransactionDb, minsup: usize) -> Vec<FiRecord> {
    let mut out = Vec::new();
    fpgrowth_visit(db, minsup, &mut |itemset, support| out.push(FiRecord { itemset, support }));
    out
}
