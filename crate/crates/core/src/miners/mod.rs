//! Sequential miners. Each has a visitor form that streams `(itemset, support)`
//! pairs into a sink and returns work counters, plus a collecting wrapper.

mod apriori;
mod eclat;
mod fpgrowth;
mod mfi;
mod rules;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::itemset::{Item, Itemset};

pub use apriori::{apriori, apriori_visit, PrefixTrie, TrieNode};
pub use eclat::{eclat, eclat_pbec, eclat_visit, EclatOpts};
pub use fpgrowth::{fpgrowth, fpgrowth_visit, FpNode, FpTree};
pub use mfi::{mfi_mine, MfiMiner};
pub use rules::{generate_rules, Rule};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiRecord {
    pub itemset: Itemset,
    pub support: usize,
}

impl fmt::Display for FiRecord {
    /// Stream format: `items...:support`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.itemset, self.support)
    }
}

/// Parses `items...:support` lines; blank lines and `#` comments are skipped.
pub fn parse_fi_records(text: &str) -> Result<Vec<FiRecord>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: n + 1, msg };
        let (items, supp) = line
            .rsplit_once(':')
            .ok_or_else(|| bad(format!("expected items:support, got {line:?}")))?;
        let support = supp.trim().parse().map_err(|e| bad(format!("support {supp:?}: {e}")))?;
        let items = items
            .split_whitespace()
            .map(|t| t.parse::<Item>().map_err(|e| bad(format!("item {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        out.push(FiRecord {
            itemset: Itemset::new(items),
            support,
        });
    }
    Ok(out)
}

/// Work counters; the desk-scale stand-in for per-PBEC running time.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MineStats {
    /// Tidlist/diffset set operations (Eclat, MFI) or conditional trees built (FPGrowth).
    pub intersections: u64,
    /// Candidate supports computed (Apriori).
    pub support_counts: u64,
    pub fis_visited: u64,
    /// DFS nodes expanded (Eclat).
    pub nodes: u64,
    /// Closure-optimization events: (prefix, absorbed extensions W).
    pub closures: Vec<(Itemset, Itemset)>,
}

impl MineStats {
    pub fn work(&self) -> u64 {
        self.intersections + self.support_counts + self.fis_visited
    }

    pub fn absorb(&mut self, other: MineStats) {
        self.intersections += other.intersections;
        self.support_counts += other.support_counts;
        self.fis_visited += other.fis_visited;
        self.nodes += other.nodes;
        self.closures.extend(other.closures);
    }
}

/// Canonical report order: lexicographic by itemset.
pub fn sort_canonical(fis: &mut [FiRecord]) {
    fis.sort();
}
