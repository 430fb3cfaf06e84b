use rand::Rng as _;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use super::{FiSample, SampleSource};
use crate::error::{Error, Result};
use crate::itemset::Itemset;

/// `|powerset(m)| = 2^|m|` for each MFI; MFIs longer than 62 items are rejected.
pub fn powerset_weights(mfis: &[Itemset]) -> Result<Vec<u128>> {
    mfis.iter()
        .map(|m| {
            if m.len() > 62 {
                Err(Error::param(format!("MFI of length {} exceeds the 62-item limit", m.len())))
            } else {
                Ok(1u128 << m.len())
            }
        })
        .collect()
}

fn random_subset(m: &Itemset, rng: &mut crate::Rng) -> Itemset {
    Itemset::from_sorted(m.items().iter().copied().filter(|_| rng.random_bool(0.5)).collect())
}

/// Samples `n` itemsets from the union of the powersets of `mfis`.
///
/// `exact`: uniform over the union (a draw from `powerset(m_i)` is rejected if
/// it also lies in some `powerset(m_l)`, `l < i`). Otherwise uniform over the
/// multiset union, so itemsets under many MFIs are favoured.
pub fn coverage_sample(mfis: &[Itemset], n: usize, rng: &mut crate::Rng, exact: bool) -> Result<FiSample> {
    if mfis.is_empty() {
        return Err(Error::param("coverage sampling needs at least one MFI"));
    }
    let w = powerset_weights(mfis)?;
    let pick = WeightedAliasIndex::new(w).map_err(|e| Error::param(e.to_string()))?;
    let mut itemsets = Vec::with_capacity(n);
    while itemsets.len() < n {
        let i = pick.sample(rng);
        let u = random_subset(&mfis[i], rng);
        if exact && mfis[..i].iter().any(|m| u.is_subset_of(m)) {
            continue;
        }
        itemsets.push(u);
    }
    Ok(FiSample {
        itemsets,
        source: if exact {
            SampleSource::CoverageExact
        } else {
            SampleSource::CoverageModified
        },
        total_seen: 0,
        short: false,
    })
}
