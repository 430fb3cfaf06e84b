use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::FiRecord;
use crate::error::{Error, Result};
use crate::itemset::Itemset;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub confidence: f64,
    /// Support of antecedent ∪ consequent.
    pub support: usize,
}

/// All rules `V ⇒ U \ V` with `supp(U)/supp(V) ≥ minconf`. Antecedents are
/// explored from the largest down; a failed antecedent's subsets are not tried,
/// since shrinking `V` can only raise `supp(V)`.
pub fn generate_rules(fis: &[FiRecord], minconf: f64) -> Result<Vec<Rule>> {
    let sup: HashMap<&Itemset, usize> = fis.iter().map(|r| (&r.itemset, r.support)).collect();
    let mut out = Vec::new();
    for r in fis.iter().filter(|r| r.itemset.len() >= 2) {
        let u = &r.itemset;
        let mut level: Vec<Itemset> = u.items().iter().map(|&i| u.difference(&Itemset::from_sorted(vec![i]))).collect();
        while !level.is_empty() {
            let mut next = HashSet::new();
            for v in level {
                let sv = *sup
                    .get(&v)
                    .ok_or_else(|| Error::Contract(format!("missing support for subset {{{v}}} of {{{u}}}")))?;
                let conf = r.support as f64 / sv as f64;
                if conf >= minconf {
                    if v.len() > 1 {
                        for &i in v.items() {
                            next.insert(v.difference(&Itemset::from_sorted(vec![i])));
                        }
                    }
                    out.push(Rule {
                        consequent: u.difference(&v),
                        antecedent: v,
                        confidence: conf,
                        support: r.support,
                    });
                }
            }
            let mut nl: Vec<Itemset> = next.into_iter().collect();
            nl.sort();
            level = nl;
        }
    }
    Ok(out)
}
