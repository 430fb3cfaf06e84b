use std::collections::BTreeSet;

use crate::itemset::{intersect, tidlist_vertical, Itemset, TransactionDb};

/// `S_ij = |tidlist(U_i ∪ U_j)|`, the number of transactions shared by the
/// prefixes `U_i` and `U_j`; the diagonal is zero.
pub fn share_matrix(prefixes: &[Itemset], db: &TransactionDb) -> Vec<Vec<u64>> {
    let vertical = db.vertical();
    let all = db.tids();
    let tl: Vec<_> = prefixes.iter().map(|u| tidlist_vertical(&vertical, &all, u)).collect();
    let n = prefixes.len();
    let mut s = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = intersect(&tl[i], &tl[j]).len() as u64;
            s[i][j] = v;
            s[j][i] = v;
        }
    }
    s
}

fn profit(sel: &[usize], share: &[Vec<u64>]) -> u64 {
    let mut p = 0;
    for (k, &a) in sel.iter().enumerate() {
        for &b in &sel[k + 1..] {
            p += share[a][b];
        }
    }
    p
}

/// One knapsack of capacity `cap` over `remaining`, maximizing pairwise profit.
fn fill(remaining: &BTreeSet<usize>, w: &[u64], share: &[Vec<u64>], cap: f64) -> Vec<usize> {
    let fits = |load: u64, add: u64| (load + add) as f64 <= cap + 1e-9;
    let rem: Vec<usize> = remaining.iter().copied().collect();
    let mut sel: Vec<usize> = Vec::new();

    let mut best: Option<(f64, usize, usize)> = None;
    for (x, &i) in rem.iter().enumerate() {
        for &j in &rem[x + 1..] {
            if share[i][j] == 0 || !fits(w[i], w[j]) {
                continue;
            }
            let d = share[i][j] as f64 / (w[i] + w[j]).max(1) as f64;
            if best.is_none_or(|(bd, _, _)| d > bd) {
                best = Some((d, i, j));
            }
        }
    }
    match best {
        Some((_, i, j)) => sel.extend([i, j]),
        None => {
            let single = rem
                .iter()
                .copied()
                .filter(|&i| fits(0, w[i]))
                .max_by_key(|&i| (w[i], std::cmp::Reverse(i)))
                .or_else(|| rem.iter().copied().max_by_key(|&i| (w[i], std::cmp::Reverse(i))));
            match single {
                Some(i) => sel.push(i),
                None => return sel,
            }
            if !fits(0, w[sel[0]]) {
                return sel;
            }
        }
    }
    let mut load: u64 = sel.iter().map(|&i| w[i]).sum();

    loop {
        let mut pick: Option<(f64, u64, usize)> = None;
        for &j in &rem {
            if sel.contains(&j) || !fits(load, w[j]) {
                continue;
            }
            let marginal: u64 = sel.iter().map(|&k| share[j][k]).sum();
            let d = marginal as f64 / w[j].max(1) as f64;
            let better = match pick {
                None => true,
                Some((bd, bw, _)) => d > bd || (d == bd && w[j] > bw),
            };
            if better {
                pick = Some((d, w[j], j));
            }
        }
        match pick {
            Some((_, _, j)) => {
                sel.push(j);
                load += w[j];
            }
            None => break,
        }
    }

    // Single-swap local improvement.
    for _ in 0..100 {
        let base = profit(&sel, share);
        let mut improved = false;
        'outer: for a in 0..sel.len() {
            for &b in &rem {
                if sel.contains(&b) || !fits(load - w[sel[a]], w[b]) {
                    continue;
                }
                let mut trial = sel.clone();
                trial[a] = b;
                if profit(&trial, share) > base {
                    load = load - w[sel[a]] + w[b];
                    sel = trial;
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            break;
        }
    }
    sel
}

/// DB-Repl-Min: P sequential quadratic-knapsack fills of capacity `Σw/P` that
/// co-locate PBECs sharing many transactions. Greedy heuristic (seed pair by
/// profit density, then marginal profit density, then single swaps); the last
/// processor takes whatever is left.
pub fn db_repl_min(weights: &[u64], share: &[Vec<u64>], p: usize) -> Vec<Vec<usize>> {
    assert!(p >= 1, "P must be >= 1");
    assert_eq!(weights.len(), share.len(), "share matrix size");
    let cap = weights.iter().sum::<u64>() as f64 / p as f64;
    let mut remaining: BTreeSet<usize> = (0..weights.len()).collect();
    let mut out = vec![Vec::new(); p];
    for slot in out.iter_mut().take(p - 1) {
        if remaining.is_empty() {
            break;
        }
        let mut sel = fill(&remaining, weights, share, cap);
        sel.sort_unstable();
        for i in &sel {
            remaining.remove(i);
        }
        *slot = sel;
    }
    out[p - 1].extend(remaining);
    out
}
