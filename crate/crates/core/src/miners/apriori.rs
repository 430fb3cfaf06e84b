use std::collections::BTreeMap;

use super::{FiRecord, MineStats};
use crate::itemset::{Item, Itemset, TransactionDb};

#[derive(Clone, Debug)]
pub struct TrieNode {
    pub item: Item,
    pub depth: usize,
    pub support: usize,
    pub children: BTreeMap<Item, usize>,
}

/// Prefix trie over sorted itemsets; node `0` is the root (the empty prefix).
#[derive(Clone, Debug)]
pub struct PrefixTrie {
    pub nodes: Vec<TrieNode>,
    pub max_depth: usize,
}

impl Default for PrefixTrie {
    fn default() -> Self {
        Self::new()
    }
}

impl PrefixTrie {
    pub fn new() -> Self {
        PrefixTrie {
            nodes: vec![TrieNode {
                item: Item::MAX,
                depth: 0,
                support: 0,
                children: BTreeMap::new(),
            }],
            max_depth: 0,
        }
    }

    pub fn insert(&mut self, items: &[Item]) -> usize {
        let mut cur = 0;
        for (d, &i) in items.iter().enumerate() {
            cur = match self.nodes[cur].children.get(&i) {
                Some(&c) => c,
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(TrieNode {
                        item: i,
                        depth: d + 1,
                        support: 0,
                        children: BTreeMap::new(),
                    });
                    self.nodes[cur].children.insert(i, id);
                    id
                }
            };
        }
        self.max_depth = self.max_depth.max(items.len());
        cur
    }

    pub fn get(&self, items: &[Item]) -> Option<usize> {
        let mut cur = 0;
        for i in items {
            cur = *self.nodes[cur].children.get(i)?;
        }
        Some(cur)
    }

    /// Increment-Support: bumps every depth-`k` node whose path is a subset of `t`.
    pub fn count_transaction(&mut self, t: &[Item], k: usize) {
        self.count_rec(0, t, 0, k);
    }

    fn count_rec(&mut self, node: usize, t: &[Item], start: usize, k: usize) {
        let depth = self.nodes[node].depth;
        if depth == k {
            self.nodes[node].support += 1;
            return;
        }
        let need = k - depth;
        if t.len() < start + need {
            return;
        }
        // Walk whichever side is smaller.
        if self.nodes[node].children.len() < t.len() - start {
            let kids: Vec<(Item, usize)> = self.nodes[node].children.iter().map(|(&i, &c)| (i, c)).collect();
            for (i, c) in kids {
                if let Ok(pos) = t[start..].binary_search(&i) {
                    self.count_rec(c, t, start + pos + 1, k);
                }
            }
        } else {
            for pos in start..=t.len() - need {
                if let Some(&c) = self.nodes[node].children.get(&t[pos]) {
                    self.count_rec(c, t, pos + 1, k);
                }
            }
        }
    }

    /// All (itemset, node) pairs at depth `k`, in lexicographic order.
    pub fn level(&self, k: usize) -> Vec<(Vec<Item>, usize)> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.level_rec(0, k, &mut path, &mut out);
        out
    }

    fn level_rec(&self, node: usize, k: usize, path: &mut Vec<Item>, out: &mut Vec<(Vec<Item>, usize)>) {
        if self.nodes[node].depth == k {
            out.push((path.clone(), node));
            return;
        }
        for (&i, &c) in &self.nodes[node].children {
            path.push(i);
            self.level_rec(c, k, path, out);
            path.pop();
        }
    }

    /// Unlinks the given depth-`k` nodes (their arena slots stay allocated).
    fn remove(&mut self, paths: &[Vec<Item>]) {
        for p in paths {
            if let Some((last, init)) = p.split_last() {
                if let Some(parent) = self.get(init) {
                    self.nodes[parent].children.remove(last);
                }
            }
        }
    }
}

/// Join step plus subset prune over the sorted frequent (k-1)-itemsets.
fn generate_candidates(prev: &[Vec<Item>], trie: &PrefixTrie) -> Vec<Vec<Item>> {
    let mut out = Vec::new();
    let mut a = 0;
    while a < prev.len() {
        let head = &prev[a][..prev[a].len() - 1];
        let mut b = a;
        while b < prev.len() && &prev[b][..prev[b].len() - 1] == head {
            b += 1;
        }
        for x in a..b {
            for y in x + 1..b {
                let mut cand = prev[x].clone();
                cand.push(*prev[y].last().unwrap());
                let pruned = (0..cand.len() - 2).any(|skip| {
                    let sub: Vec<Item> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &i)| i)
                        .collect();
                    trie.get(&sub).is_none()
                });
                if !pruned {
                    out.push(cand);
                }
            }
        }
        a = b;
    }
    out
}

pub fn apriori_visit(db: &TransactionDb, minsup: usize, sink: &mut dyn FnMut(Itemset, usize)) -> MineStats {
    let mut stats = MineStats::default();
    let minsup = minsup.max(1);
    let sup = db.item_supports();
    stats.support_counts += sup.len() as u64;
    let freq: Vec<bool> = sup.iter().map(|&s| s >= minsup).collect();
    let txns: Vec<Vec<Item>> = db
        .transactions
        .iter()
        .map(|t| t.items.items().iter().copied().filter(|&i| freq[i as usize]).collect())
        .collect();

    let mut trie = PrefixTrie::new();
    let mut prev = Vec::new();
    for (i, &s) in sup.iter().enumerate() {
        if s >= minsup {
            let n = trie.insert(&[i as Item]);
            trie.nodes[n].support = s;
            prev.push(vec![i as Item]);
            stats.fis_visited += 1;
            sink(Itemset::from_sorted(vec![i as Item]), s);
        }
    }
    let mut k = 2;
    while prev.len() >= 2 {
        let cands = generate_candidates(&prev, &trie);
        if cands.is_empty() {
            break;
        }
        for c in &cands {
            trie.insert(c);
        }
        stats.support_counts += cands.len() as u64;
        for t in &txns {
            if t.len() >= k {
                trie.count_transaction(t, k);
            }
        }
        let mut next = Vec::new();
        let mut dead = Vec::new();
        for (path, node) in trie.level(k) {
            let s = trie.nodes[node].support;
            if s >= minsup {
                stats.fis_visited += 1;
                sink(Itemset::from_sorted(path.clone()), s);
                next.push(path);
            } else {
                dead.push(path);
            }
        }
        trie.remove(&dead);
        prev = next;
        k += 1;
    }
    stats
}

/// Level-wise Apriori with prefix-trie support counting.
pub fn apriori(db: &TransactionDb, minsup: usize) -> Vec<FiRecord> {
    let mut out = Vec::new();
    apriori_visit(db, minsup, &mut |itemset, support| out.push(FiRecord { itemset, support }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trie_counts() {
        let mut t = PrefixTrie::new();
        t.insert(&[1, 2]);
        t.insert(&[1, 3]);
        t.insert(&[2, 3]);
        t.count_transaction(&[1, 2, 3], 2);
        t.count_transaction(&[1, 3], 2);
        let lv: Vec<(Vec<Item>, usize)> = t.level(2).into_iter().map(|(p, n)| (p, t.nodes[n].support)).collect();
        assert_eq!(lv, vec![(vec![1, 2], 1), (vec![1, 3], 2), (vec![2, 3], 1)]);
        assert_eq!(t.max_depth, 2);
    }

    #[test]
    fn join_and_prune() {
        let mut t = PrefixTrie::new();
        let prev = vec![vec![1, 2], vec![1, 3], vec![1, 5], vec![2, 3]];
        for p in &prev {
            t.insert(p);
        }
        // {1,2,5} pruned: {2,5} missing; {1,3,5} pruned: {3,5} missing.
        assert_eq!(generate_candidates(&prev, &t), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn minsup_above_db() {
        let db = TransactionDb::from_rows(vec![vec![1, 2], vec![2]]);
        assert!(apriori(&db, 3).is_empty());
    }
}
