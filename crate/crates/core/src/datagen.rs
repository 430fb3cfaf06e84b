//! IBM-style synthetic transaction generator, FIMI text I/O and database
//! partitioning.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::Rng as _;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Distribution, Exp, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::itemset::{Item, Itemset, Transaction, TransactionDb};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    /// N
    pub n_items: usize,
    /// |L|
    pub n_patterns: usize,
    /// E(|I|)
    pub avg_pattern_len: f64,
    /// E(|T|)
    pub avg_txn_len: f64,
    /// |D|
    pub n_txns: usize,
    pub corruption_mean: f64,
    pub weight_mean: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_items: 1000,
            n_patterns: 2000,
            avg_pattern_len: 4.0,
            avg_txn_len: 10.0,
            n_txns: 10_000,
            corruption_mean: 0.5,
            weight_mean: 1.0,
            seed: 1,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_items == 0 || self.n_patterns == 0 || self.n_txns == 0 {
            return Err(Error::param("n_items, n_patterns and n_txns must be >= 1"));
        }
        for (name, v) in [
            ("avg_pattern_len", self.avg_pattern_len),
            ("avg_txn_len", self.avg_txn_len),
            ("weight_mean", self.weight_mean),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(format!("{name} must be > 0")));
            }
        }
        if !(0.0..=1.0).contains(&self.corruption_mean) {
            return Err(Error::param("corruption_mean must be in [0,1]"));
        }
        Ok(())
    }

    /// Applies `key=value` lines (blank lines and `#` comments ignored).
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: n + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |e: String| Error::Parse {
                line: n + 1,
                msg: format!("{k}: {e}"),
            };
            match k {
                "n_items" => self.n_items = v.parse().map_err(|e| bad(format!("{e}")))?,
                "n_patterns" => self.n_patterns = v.parse().map_err(|e| bad(format!("{e}")))?,
                "avg_pattern_len" => self.avg_pattern_len = v.parse().map_err(|e| bad(format!("{e}")))?,
                "avg_txn_len" => self.avg_txn_len = v.parse().map_err(|e| bad(format!("{e}")))?,
                "n_txns" => self.n_txns = v.parse().map_err(|e| bad(format!("{e}")))?,
                "corruption_mean" => self.corruption_mean = v.parse().map_err(|e| bad(format!("{e}")))?,
                "weight_mean" => self.weight_mean = v.parse().map_err(|e| bad(format!("{e}")))?,
                "seed" => self.seed = v.parse().map_err(|e| bad(format!("{e}")))?,
                _ => return Err(bad("unknown key".into())),
            }
        }
        Ok(())
    }
}

/// A potentially frequent itemset with its selection weight and corruption level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    pub items: Itemset,
    pub weight: f64,
    pub corruption: f64,
}

fn poisson_at_least(rng: &mut crate::Rng, mean: f64, min: usize) -> usize {
    let d = Poisson::new(mean).expect("mean > 0");
    loop {
        let x: f64 = d.sample(rng);
        if x as usize >= min {
            return x as usize;
        }
    }
}

fn gen_patterns_with(p: &GenParams, rng: &mut crate::Rng) -> Vec<Pattern> {
    let reuse = Exp::new(2.0).unwrap(); // mean 0.5
    let weight = Exp::new(1.0 / p.weight_mean).unwrap();
    let mut out: Vec<Pattern> = Vec::with_capacity(p.n_patterns);
    let mut prev: Vec<Item> = Vec::new();
    for _ in 0..p.n_patterns {
        let len = poisson_at_least(rng, p.avg_pattern_len, 1).min(p.n_items);
        let mut items: Vec<Item> = Vec::with_capacity(len);
        if !prev.is_empty() {
            let f: f64 = reuse.sample(rng);
            let take = ((f.min(1.0) * len as f64).floor() as usize).min(prev.len());
            let mut pool = prev.clone();
            for _ in 0..take {
                let k = rng.random_range(0..pool.len());
                items.push(pool.swap_remove(k));
            }
        }
        while items.len() < len {
            let i = rng.random_range(0..p.n_items) as Item;
            if !items.contains(&i) {
                items.push(i);
            }
        }
        let w: f64 = weight.sample(rng);
        let c_hi = (2.0 * p.corruption_mean).min(1.0);
        let c = if c_hi > 0.0 { rng.random_range(0.0..=c_hi) } else { 0.0 };
        prev = items.clone();
        out.push(Pattern {
            items: Itemset::new(items),
            weight: w,
            corruption: c,
        });
    }
    let total: f64 = out.iter().map(|p| p.weight).sum();
    if out.len() == 1 {
        out[0].weight = 1.0;
    } else {
        for p in &mut out {
            p.weight /= total;
        }
    }
    out
}

/// The potentially frequent itemsets of a run, with normalized weights.
pub fn generate_patterns(p: &GenParams) -> Result<Vec<Pattern>> {
    p.validate()?;
    Ok(gen_patterns_with(p, &mut crate::rng(p.seed)))
}

/// Drops items of a chosen pattern while a fresh uniform draw falls below
/// its corruption level.
fn corrupt(pattern: &Pattern, rng: &mut crate::Rng) -> Vec<Item> {
    let mut items = pattern.items.items().to_vec();
    while !items.is_empty() && rng.random::<f64>() < pattern.corruption {
        let k = rng.random_range(0..items.len());
        items.swap_remove(k);
    }
    items
}

pub fn generate_db(p: &GenParams) -> Result<TransactionDb> {
    p.validate()?;
    let mut rng = crate::rng(p.seed);
    let patterns = gen_patterns_with(p, &mut rng);
    let pick = WeightedIndex::new(patterns.iter().map(|p| p.weight)).map_err(|e| Error::param(e.to_string()))?;
    let mut deferred: Option<Vec<Item>> = None;
    let mut txns = Vec::with_capacity(p.n_txns);
    for t in 0..p.n_txns {
        let target = poisson_at_least(&mut rng, p.avg_txn_len, 1);
        let mut items: Vec<Item> = Vec::with_capacity(target + 8);
        let mut attempts = 0;
        while items.len() < target && attempts < 64 * (target + 1) {
            attempts += 1;
            let chosen = match deferred.take() {
                Some(d) => d,
                None => corrupt(&patterns[pick.sample(&mut rng)], &mut rng),
            };
            let new: Vec<Item> = chosen.iter().copied().filter(|i| !items.contains(i)).collect();
            if new.is_empty() {
                continue;
            }
            if items.len() + new.len() > target && !items.is_empty() {
                if rng.random_bool(0.5) {
                    items.extend(new);
                } else {
                    deferred = Some(chosen);
                }
                break;
            }
            items.extend(new);
        }
        txns.push(Transaction {
            tid: t as u32 + 1,
            items: Itemset::new(items),
        });
    }
    Ok(TransactionDb::new(txns))
}

/// Parses FIMI text: one transaction per line, whitespace-separated item ids.
/// Lines starting with `#` are comments; empty lines are empty transactions.
pub fn parse_fimi(text: &str) -> Result<TransactionDb> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.starts_with('#') {
            continue;
        }
        let mut items = Vec::new();
        for tok in line.split_whitespace() {
            items.push(tok.parse::<Item>().map_err(|e| Error::Parse {
                line: n + 1,
                msg: format!("bad item {tok:?}: {e}"),
            })?);
        }
        rows.push(Itemset::new(items));
    }
    Ok(TransactionDb::from_rows(rows))
}

pub fn read_fimi(path: impl AsRef<Path>) -> Result<TransactionDb> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_fimi(&text)
}

pub fn format_fimi(db: &TransactionDb) -> String {
    let mut s = String::new();
    for t in &db.transactions {
        s.push_str(&t.items.to_string());
        s.push('\n');
    }
    s
}

pub fn write_fimi(db: &TransactionDb, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    for t in &db.transactions {
        writeln!(w, "{}", t.items).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Splits `db` into `p` contiguous blocks whose sizes differ by at most one.
/// Tids are preserved; with `p > |db|` some blocks are empty.
pub fn partition_db(db: &TransactionDb, p: usize) -> Result<Vec<TransactionDb>> {
    if p == 0 {
        return Err(Error::param("P must be >= 1"));
    }
    let n = db.len();
    let (base, extra) = (n / p, n % p);
    let mut out = Vec::with_capacity(p);
    let mut start = 0;
    for i in 0..p {
        let len = base + usize::from(i < extra);
        let mut part = TransactionDb::new(db.transactions[start..start + len].to_vec());
        part.n_items = db.n_items;
        out.push(part);
        start += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GenParams {
        GenParams {
            n_items: 50,
            n_patterns: 20,
            avg_pattern_len: 4.0,
            avg_txn_len: 8.0,
            n_txns: 300,
            seed: 7,
            ..GenParams::default()
        }
    }

    #[test]
    fn weights_normalized() {
        let pats = generate_patterns(&small()).unwrap();
        assert_eq!(pats.len(), 20);
        let s: f64 = pats.iter().map(|p| p.weight).sum();
        assert!((s - 1.0).abs() < 1e-9);
        assert!(pats.iter().all(|p| !p.items.is_empty() && (0.0..=1.0).contains(&p.corruption)));
    }

    #[test]
    fn single_pattern_weight_one() {
        let pats = generate_patterns(&GenParams { n_patterns: 1, ..small() }).unwrap();
        assert_eq!(pats.len(), 1);
        assert_eq!(pats[0].weight, 1.0);
    }

    #[test]
    fn deterministic() {
        assert_eq!(generate_patterns(&small()).unwrap(), generate_patterns(&small()).unwrap());
        let a = format_fimi(&generate_db(&small()).unwrap());
        let b = format_fimi(&generate_db(&small()).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn uncorrupted_single_pattern_in_every_txn() {
        let p = GenParams {
            n_patterns: 1,
            corruption_mean: 0.0,
            avg_pattern_len: 3.0,
            avg_txn_len: 12.0,
            ..small()
        };
        let pat = generate_patterns(&p).unwrap().remove(0);
        let db = generate_db(&p).unwrap();
        assert!(db.transactions.iter().all(|t| pat.items.is_subset_of(&t.items)));
    }

    #[test]
    fn bad_params() {
        assert!(generate_db(&GenParams { n_txns: 0, ..small() }).is_err());
        assert!(generate_db(&GenParams { avg_txn_len: 0.0, ..small() }).is_err());
    }

    #[test]
    fn fimi_parse() {
        let db = parse_fimi("1 3 4\n\n4 3 3\n").unwrap();
        assert_eq!(db.len(), 3);
        assert_eq!(db.transactions[0].items, Itemset::from([1, 3, 4]));
        assert!(db.transactions[1].items.is_empty());
        assert_eq!(db.transactions[2].items, Itemset::from([3, 4]));
        match parse_fimi("1 2\n3 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kv_config() {
        let mut p = GenParams::default();
        p.apply_kv("# c\nn_items = 10\nseed=3\n").unwrap();
        assert_eq!((p.n_items, p.seed), (10, 3));
        assert!(p.apply_kv("bogus=1").is_err());
    }

    #[test]
    fn partition_sizes() {
        let db = TransactionDb::from_rows((0..15).map(|i| vec![i % 4]));
        let parts = partition_db(&db, 3).unwrap();
        assert_eq!(parts.iter().map(|d| d.len()).collect::<Vec<_>>(), vec![5, 5, 5]);
        let parts = partition_db(&db, 4).unwrap();
        assert_eq!(parts.iter().map(|d| d.len()).collect::<Vec<_>>(), vec![4, 4, 4, 3]);
        assert_eq!(partition_db(&db, 1).unwrap()[0], db);
        assert!(partition_db(&db, 0).is_err());
    }
}
