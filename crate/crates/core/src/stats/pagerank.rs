use serde::{Deserialize, Serialize};

use crate::itemset::Itemset;

/// Directed weighted graph over MFIs, `w_ij = |m_i ∩ m_j| / |m_i|` on edge i→j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MfiGraph {
    pub n: usize,
    /// (from, to, weight)
    pub edges: Vec<(usize, usize, f64)>,
}

impl MfiGraph {
    /// Keeps edge i→j iff `w_ij ≥ min_edge_weight`; no self loops.
    pub fn build(mfis: &[Itemset], min_edge_weight: f64) -> MfiGraph {
        let mut edges = Vec::new();
        for (i, a) in mfis.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            for (j, b) in mfis.iter().enumerate() {
                if i == j {
                    continue;
                }
                let w = a.intersection(b).len() as f64 / a.len() as f64;
                if w >= min_edge_weight {
                    edges.push((i, j, w));
                }
            }
        }
        MfiGraph { n: mfis.len(), edges }
    }

    pub fn from_edges(n: usize, edges: Vec<(usize, usize, f64)>) -> MfiGraph {
        MfiGraph { n, edges }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PagerankResult {
    pub values: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Fixed point of `PR(v_i) = (1-d) + d · Σ_{j→i} PR(v_j) · w_ji` (weights used
/// as given, not row-normalized). Iterates from all-ones until the largest
/// per-node change is below `tol`, for at most `max_iter` sweeps.
pub fn pagerank(g: &MfiGraph, d: f64, tol: f64, max_iter: usize) -> PagerankResult {
    let mut pr = vec![1.0; g.n];
    for it in 1..=max_iter {
        let mut next = vec![1.0 - d; g.n];
        for &(j, i, w) in &g.edges {
            next[i] += d * pr[j] * w;
        }
        let delta = pr.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        pr = next;
        if delta < tol || !delta.is_finite() {
            return PagerankResult {
                values: pr,
                iterations: it,
                converged: delta.is_finite(),
            };
        }
    }
    PagerankResult {
        values: pr,
        iterations: max_iter,
        converged: false,
    }
}

/// `D(x)` = fraction of values `≤ x`, as (x, D(x)) at each distinct value.
pub fn support_distribution(values: &[f64]) -> Vec<(f64, f64)> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (k, &x) in v.iter().enumerate() {
        let f = (k + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 = f,
            _ => out.push((x, f)),
        }
    }
    out
}
