//! Database characteristics: FI/MFI histograms, closure-extension statistics,
//! MFI intersection sizes and the modified pagerank over MFIs.

mod pagerank;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::itemset::{Itemset, TransactionDb};
use crate::miners::{self, EclatOpts};
use crate::sampling::{Reservoir, ReservoirAlgo};

pub use pagerank::{pagerank, support_distribution, MfiGraph, PagerankResult};

pub const SUPPORT_BINS: usize = 1000;
pub const PAGERANK_DAMPING: f64 = 0.8;
pub const MIN_EDGE_WEIGHT: f64 = 0.6;
pub const PAGERANK_TOL: f64 = 0.01;
pub const PAGERANK_MAX_ITER: usize = 10_000;

/// Bin of a relative support `s ∈ [0,1]`: `floor(s·1000)`, with `s = 1` in bin 999.
pub fn support_bin(s: f64) -> usize {
    ((s * SUPPORT_BINS as f64).floor() as usize).min(SUPPORT_BINS - 1)
}

/// Counts over (itemset length, support bin). Sparse.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Histogram2D {
    pub cells: BTreeMap<(usize, usize), u64>,
}

impl Histogram2D {
    pub fn add(&mut self, len: usize, bin: usize) {
        *self.cells.entry((len, bin)).or_default() += 1;
    }

    pub fn total(&self) -> u64 {
        self.cells.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Totals per itemset length.
    pub fn by_length(&self) -> BTreeMap<usize, u64> {
        let mut m = BTreeMap::new();
        for (&(l, _), &c) in &self.cells {
            *m.entry(l).or_default() += c;
        }
        m
    }

    /// `length,bin,count,log10_count` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("length,support_bin,count,log10_count\n");
        for (&(l, b), &c) in &self.cells {
            let _ = writeln!(s, "{l},{b},{c},{:.6}", (c as f64).log10());
        }
        s
    }

    /// Dense matrix for gnuplot `matrix` plots: one line per support bin that
    /// has data, columns are lengths `0..=max_len`, values log10(count) or 0.
    pub fn to_gnuplot_matrix(&self) -> String {
        let max_len = self.cells.keys().map(|k| k.0).max().unwrap_or(0);
        let mut rows: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (&(l, b), &c) in &self.cells {
            rows.entry(b).or_insert_with(|| vec![0.0; max_len + 1])[l] = (c as f64).log10();
        }
        let mut s = String::new();
        for (b, r) in rows {
            let _ = write!(s, "{b}");
            for v in r {
                let _ = write!(s, " {v:.4}");
            }
            s.push('\n');
        }
        s
    }
}

/// Histogram of every FI by (length, relative support bin).
pub fn fi_characteristic(db: &TransactionDb, minsup: usize) -> Histogram2D {
    let mut h = Histogram2D::default();
    if db.is_empty() {
        return h;
    }
    let n = db.len() as f64;
    miners::eclat_visit(db, minsup, EclatOpts::default(), &mut |u, s| h.add(u.len(), support_bin(s as f64 / n)));
    h
}

/// For each minsup, the histogram of MFI lengths.
pub fn mfi_characteristic(db: &TransactionDb, minsups: &[usize]) -> Vec<(usize, BTreeMap<usize, u64>)> {
    minsups
        .iter()
        .map(|&ms| {
            let mut row = BTreeMap::new();
            if ms <= db.len() {
                let roots = db.frequent_items(ms.max(1));
                for m in miners::mfi_mine(db, ms, &roots).0 {
                    *row.entry(m.len()).or_default() += 1;
                }
            }
            (ms, row)
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CiStats {
    /// Histogram of |W| over the prefixes visited by the closure-optimized Eclat
    /// (prefixes with nothing absorbed count under 0).
    pub w_hist: BTreeMap<usize, u64>,
    /// For each |W| ≥ 1, the histogram of |prefix ∪ W|.
    pub closed_by_w: BTreeMap<usize, BTreeMap<usize, u64>>,
    /// The absorption events: (prefix, W).
    pub events: Vec<(Itemset, Itemset)>,
}

/// Runs the closure-optimized Eclat and tabulates what it absorbed.
pub fn ci_extension_stats(db: &TransactionDb, minsup: usize) -> CiStats {
    let opts = EclatOpts {
        use_diffsets: true,
        dynamic_order: true,
        closure_opt: true,
    };
    let (_, st) = miners::eclat(db, minsup, opts);
    let mut out = CiStats::default();
    let plain = st.nodes - st.closures.len() as u64;
    if plain > 0 {
        out.w_hist.insert(0, plain);
    }
    for (pre, w) in &st.closures {
        *out.w_hist.entry(w.len()).or_default() += 1;
        *out.closed_by_w.entry(w.len()).or_default().entry(pre.len() + w.len()).or_default() += 1;
    }
    out.events = st.closures;
    out
}

/// Histogram of `|m_i ∩ m_j|` over unordered MFI pairs.
pub fn mfi_intersection_hist(mfis: &[Itemset]) -> BTreeMap<usize, u64> {
    let mut h = BTreeMap::new();
    for i in 0..mfis.len() {
        for j in i + 1..mfis.len() {
            *h.entry(mfis[i].intersection(&mfis[j]).len()).or_default() += 1;
        }
    }
    h
}

/// Uniform without-replacement subset of `min(k, |mfis|)` MFIs.
pub fn sample_mfis_for_graph(mfis: &[Itemset], k: usize, rng: crate::Rng) -> Vec<Itemset> {
    let mut r = Reservoir::new(k, ReservoirAlgo::Simple, rng);
    for m in mfis {
        r.push(m.clone());
    }
    r.into_items()
}

/// `key,count` CSV for a one-dimensional histogram.
pub fn hist_csv(header: &str, h: &BTreeMap<usize, u64>) -> String {
    let mut s = format!("{header},count\n");
    for (k, c) in h {
        let _ = writeln!(s, "{k},{c}");
    }
    s
}
