//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fimi::itemset::{Item, Itemset, TransactionDb};
use fimi::FiRecord;
use rand::{Rng, SeedableRng};

/// The 15-transaction running example (tids 1..15).
pub fn example15() -> TransactionDb {
    TransactionDb::from_rows(vec![
        vec![2, 3, 4, 6],
        vec![3, 5, 6],
        vec![1, 3, 4],
        vec![1, 2, 6],
        vec![1, 3, 4, 5, 6],
        vec![1, 2, 3, 4, 5],
        vec![2, 4, 5],
        vec![2, 3, 4, 5, 6],
        vec![3, 4, 5, 6],
        vec![2, 3, 4, 5],
        vec![1, 2, 3, 4, 5, 6],
        vec![4, 5, 6],
        vec![4, 5, 6],
        vec![4, 5, 6],
        vec![1, 3, 4, 5, 6],
    ])
}

pub fn example15_mfis() -> BTreeSet<Itemset> {
    [vec![1, 3, 4], vec![2, 3, 4], vec![2, 4, 5], vec![3, 4, 5, 6]]
        .into_iter()
        .map(Itemset::from)
        .collect()
}

/// Apriori appendix database.
pub fn apriori_db() -> TransactionDb {
    TransactionDb::from_rows(vec![vec![1, 2, 5], vec![1, 3, 5], vec![2, 4, 5], vec![1, 2, 3, 5]])
}

/// Eclat appendix database (6 transactions).
pub fn eclat_db() -> TransactionDb {
    TransactionDb::from_rows(vec![
        vec![1, 2, 3, 4],
        vec![3, 5],
        vec![1, 3, 4],
        vec![1, 2],
        vec![1, 3, 4, 5],
        vec![1, 2, 3, 4, 5],
    ])
}

/// FP-tree figure database.
pub fn fptree_db() -> TransactionDb {
    TransactionDb::from_rows(vec![vec![1, 3, 4], vec![5, 4, 6], vec![1, 3, 5, 6], vec![1, 3, 2]])
}

pub fn random_db(seed: u64, n_items: u32, max_txns: usize) -> TransactionDb {
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = r.random_range(1..=max_txns);
    let density = r.random_range(0.2..0.7);
    TransactionDb::from_rows((0..n).map(|_| {
        (0..n_items).filter(|_| r.random_bool(density)).collect::<Vec<Item>>()
    }))
}

/// Every nonempty subset of the item universe, counted by a full scan.
pub fn brute_force(db: &TransactionDb, minsup: usize) -> BTreeMap<Itemset, usize> {
    let items: Vec<Item> = (0..db.n_items as Item).collect();
    assert!(items.len() <= 16, "brute force universe too large");
    let mut out = BTreeMap::new();
    for mask in 1u32..(1u32 << items.len()) {
        let u: Vec<Item> = (0..items.len()).filter(|k| mask >> k & 1 == 1).map(|k| items[k]).collect();
        let s = db
            .transactions
            .iter()
            .filter(|t| u.iter().all(|i| t.items.items().contains(i)))
            .count();
        if s >= minsup.max(1) {
            out.insert(Itemset::from(u), s);
        }
    }
    out
}

pub fn as_map(fis: &[FiRecord]) -> BTreeMap<Itemset, usize> {
    let mut m = BTreeMap::new();
    for r in fis {
        assert!(m.insert(r.itemset.clone(), r.support).is_none(), "duplicate {}", r.itemset);
    }
    m
}

/// Maximal elements of a set family.
pub fn maximal(sets: impl IntoIterator<Item = Itemset>) -> BTreeSet<Itemset> {
    let v: Vec<Itemset> = sets.into_iter().collect();
    v.iter()
        .filter(|a| !v.iter().any(|b| a.is_proper_subset_of(b)))
        .cloned()
        .collect()
}

/// Pearson chi-square p-value of `observed` counts against `expected` probabilities.
pub fn chi_square_p(observed: &[u64], expected: &[f64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let n: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = (observed.len() - 1) as f64;
    1.0 - ChiSquared::new(df).unwrap().cdf(stat)
}

/// All subsets of `u`.
pub fn powerset(u: &Itemset) -> Vec<Itemset> {
    let it = u.items();
    (0u64..1 << it.len())
        .map(|mask| Itemset::from((0..it.len()).filter(|k| mask >> k & 1 == 1).map(|k| it[k]).collect::<Vec<Item>>()))
        .collect()
}

/// Clustered database: items `0..k·w` form `k` blocks of `w`; each transaction
/// picks a block (block `c` with weight `k - c`), takes each of its items with
/// probability 0.5 and every other item with probability 0.02.
pub fn clustered_db(seed: u64, k: u32, w: u32, n_txns: usize) -> TransactionDb {
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let total: u32 = (1..=k).sum();
    let rows: Vec<Vec<Item>> = (0..n_txns)
        .map(|_| {
            let mut x = r.random_range(0..total);
            let mut c = 0;
            while x >= k - c {
                x -= k - c;
                c += 1;
            }
            (0..k * w)
                .filter(|&i| {
                    let p = if i / w == c { 0.5 } else { 0.02 };
                    r.random_bool(p)
                })
                .collect()
        })
        .collect();
    TransactionDb::from_rows(rows)
}
