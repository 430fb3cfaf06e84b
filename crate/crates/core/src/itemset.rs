//! Items, itemsets, transactions, databases and prefix-based equivalence classes.

use std::fmt;

use serde::{Deserialize, Serialize};

pub type Item = u32;
pub type Tid = u32;

/// Ascending transaction ids. `len()` of the tidlist of `U` is `supp(U)`.
pub type Tidlist = Vec<Tid>;

/// Ascending transaction ids: the tids of the parent prefix missing from the child.
pub type Diffset = Vec<Tid>;

/// Strictly ascending set of items. The derived `Ord` is the lexicographic
/// order of itemsets (a proper prefix sorts first).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    pub fn empty() -> Self {
        Itemset(Vec::new())
    }

    /// Sorts and deduplicates.
    pub fn new(mut items: Vec<Item>) -> Self {
        items.sort_unstable();
        items.dedup();
        Itemset(items)
    }

    /// Caller guarantees strictly ascending input.
    pub fn from_sorted(items: Vec<Item>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]), "not strictly ascending");
        Itemset(items)
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Item> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: Item) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn is_proper_subset_of(&self, other: &Itemset) -> bool {
        self.len() < other.len() && self.is_subset_of(other)
    }

    pub fn with(&self, item: Item) -> Itemset {
        match self.0.binary_search(&item) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, item);
                Itemset(v)
            }
        }
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    v.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    v.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    v.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        v.extend_from_slice(&a[i..]);
        v.extend_from_slice(&b[j..]);
        Itemset(v)
    }

    pub fn difference(&self, other: &Itemset) -> Itemset {
        Itemset(difference(&self.0, &other.0))
    }

    pub fn intersection(&self, other: &Itemset) -> Itemset {
        Itemset(intersect(&self.0, &other.0))
    }
}

impl From<Vec<Item>> for Itemset {
    fn from(v: Vec<Item>) -> Self {
        Itemset::new(v)
    }
}

impl<const N: usize> From<[Item; N]> for Itemset {
    fn from(v: [Item; N]) -> Self {
        Itemset::new(v.to_vec())
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

pub fn is_sorted_subset<T: Ord>(a: &[T], b: &[T]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Intersection of two ascending slices.
pub fn intersect<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `a \ b` for ascending slices.
pub fn difference<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j < b.len() && b[j] == x {
            j += 1;
        } else {
            out.push(x);
        }
    }
    out
}

/// `d(P ∪ {i,j}) = d(P ∪ {j}) \ d(P ∪ {i})`. Both arguments must be diffsets
/// against the same prefix `P`; the child's support is `supp(P ∪ {i}) - |result|`.
pub fn diffset_from_parent(d_pi: &[Tid], d_pj: &[Tid]) -> Diffset {
    difference(d_pj, d_pi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub tid: Tid,
    pub items: Itemset,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionDb {
    pub transactions: Vec<Transaction>,
    /// Size of the item universe: one more than the largest item id seen.
    pub n_items: usize,
}

impl TransactionDb {
    pub fn new(transactions: Vec<Transaction>) -> Self {
        let n_items = transactions
            .iter()
            .filter_map(|t| t.items.items().last())
            .max()
            .map_or(0, |&m| m as usize + 1);
        TransactionDb {
            transactions,
            n_items,
        }
    }

    /// Builds a database from item rows; tids are the 1-based row positions.
    pub fn from_rows<I, R>(rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: Into<Itemset>,
    {
        let transactions = rows
            .into_iter()
            .enumerate()
            .map(|(k, r)| Transaction {
                tid: k as Tid + 1,
                items: r.into(),
            })
            .collect();
        TransactionDb::new(transactions)
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn tids(&self) -> Tidlist {
        let mut t: Vec<Tid> = self.transactions.iter().map(|t| t.tid).collect();
        t.sort_unstable();
        t
    }

    /// Per-item tidlists, indexed by item id.
    pub fn vertical(&self) -> Vec<Tidlist> {
        let mut v = vec![Vec::new(); self.n_items];
        for t in &self.transactions {
            for &i in t.items.items() {
                v[i as usize].push(t.tid);
            }
        }
        for l in &mut v {
            l.sort_unstable();
        }
        v
    }

    /// Single-item supports, indexed by item id.
    pub fn item_supports(&self) -> Vec<usize> {
        let mut s = vec![0; self.n_items];
        for t in &self.transactions {
            for &i in t.items.items() {
                s[i as usize] += 1;
            }
        }
        s
    }

    pub fn frequent_items(&self, minsup: usize) -> Vec<Item> {
        self.item_supports()
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s >= minsup && s > 0)
            .map(|(i, _)| i as Item)
            .collect()
    }

    /// Remaps the items that occur to dense ids `0..n` (in id order). Returns
    /// the remapped database and the label table (`labels[new] = old`).
    pub fn dense_remap(&self) -> (TransactionDb, Vec<Item>) {
        let labels: Vec<Item> = self
            .item_supports()
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s > 0)
            .map(|(i, _)| i as Item)
            .collect();
        let mut map = vec![Item::MAX; self.n_items];
        for (new, &old) in labels.iter().enumerate() {
            map[old as usize] = new as Item;
        }
        let transactions = self
            .transactions
            .iter()
            .map(|t| Transaction {
                tid: t.tid,
                items: Itemset::from_sorted(t.items.items().iter().map(|&i| map[i as usize]).collect()),
            })
            .collect();
        (TransactionDb::new(transactions), labels)
    }
}

/// `|{t ∈ db : u ⊆ t}|`.
pub fn support(db: &TransactionDb, u: &Itemset) -> usize {
    db.transactions
        .iter()
        .filter(|t| u.is_subset_of(&t.items))
        .count()
}

/// Intersection of the per-item tidlists of `u` (all tids for `u = ∅`).
pub fn tidlist(db: &TransactionDb, u: &Itemset) -> Tidlist {
    let mut out: Tidlist = db
        .transactions
        .iter()
        .filter(|t| u.is_subset_of(&t.items))
        .map(|t| t.tid)
        .collect();
    out.sort_unstable();
    out
}

/// Tidlist of `u` from a precomputed vertical layout.
pub fn tidlist_vertical(vertical: &[Tidlist], all_tids: &[Tid], u: &Itemset) -> Tidlist {
    let mut it = u.items().iter();
    let mut acc = match it.next() {
        None => return all_tids.to_vec(),
        Some(&i) => vertical.get(i as usize).cloned().unwrap_or_default(),
    };
    for &i in it {
        match vertical.get(i as usize) {
            Some(l) => acc = intersect(&acc, l),
            None => return Vec::new(),
        }
    }
    acc
}

/// Absolute minimum support for a relative threshold: `ceil(rminsup · n)`.
pub fn abs_minsup(rminsup: f64, n: usize) -> usize {
    // Guard against 0.3 * 10 = 3.0000000000000004 style rounding.
    let x = rminsup * n as f64;
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// Prefix-based equivalence class `[prefix | extensions]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pbec {
    pub prefix: Itemset,
    /// Extension order may be support based rather than id based.
    pub extensions: Vec<Item>,
    /// Sample hits.
    pub est_count: usize,
}

impl Pbec {
    pub fn new(prefix: Itemset, extensions: Vec<Item>) -> Self {
        Pbec {
            prefix,
            extensions,
            est_count: 0,
        }
    }

    /// `prefix ⊊ x` and `x \ prefix ⊆ extensions`.
    pub fn contains(&self, x: &Itemset) -> bool {
        if x.len() <= self.prefix.len() || !self.prefix.is_subset_of(x) {
            return false;
        }
        x.items()
            .iter()
            .filter(|i| !self.prefix.contains(**i))
            .all(|i| self.extensions.contains(i))
    }

    /// One child per extension `b`: `[prefix ∪ {b} | extensions after b]`.
    pub fn split(&self) -> Vec<Pbec> {
        (0..self.extensions.len())
            .map(|k| Pbec::new(self.prefix.with(self.extensions[k]), self.extensions[k + 1..].to_vec()))
            .collect()
    }

    /// Every member itemset (exponential; for tests and tiny classes).
    pub fn members(&self) -> Vec<Itemset> {
        let e = &self.extensions;
        assert!(e.len() < 32, "PBEC too large to enumerate");
        (1u64..(1u64 << e.len()))
            .map(|mask| {
                let mut v = self.prefix.items().to_vec();
                v.extend((0..e.len()).filter(|k| mask >> k & 1 == 1).map(|k| e[k]));
                Itemset::new(v)
            })
            .collect()
    }
}

impl fmt::Display for Pbec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|", self.prefix)?;
        for (k, i) in self.extensions.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}
