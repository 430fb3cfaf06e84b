use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{FiSample, SampleSource};
use crate::itemset::Itemset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReservoirAlgo {
    /// Draw `m = floor(t · Random())` for every element.
    Simple,
    /// Draw how many elements to skip (Vitter's Algorithm X).
    Vitter,
}

/// Fixed-size uniform sample of a stream of unknown length.
#[derive(Clone, Debug)]
pub struct Reservoir<T> {
    items: Vec<T>,
    cap: usize,
    seen: u64,
    skip: u64,
    algo: ReservoirAlgo,
    rng: crate::Rng,
}

impl<T> Reservoir<T> {
    pub fn new(cap: usize, algo: ReservoirAlgo, rng: crate::Rng) -> Self {
        Reservoir {
            items: Vec::with_capacity(cap.min(1 << 20)),
            cap,
            seen: 0,
            skip: 0,
            algo,
            rng,
        }
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn into_items(self) -> Vec<T> {
        self.items
    }

    /// Skip length before the next replacement, given `seen` elements so far.
    fn draw_skip(&mut self) -> u64 {
        let n = self.cap as f64;
        let v: f64 = self.rng.random();
        let mut s = 0u64;
        let mut t = self.seen as f64 + 1.0;
        let mut quot = (t - n) / t;
        while quot > v {
            s += 1;
            t += 1.0;
            quot *= (t - n) / t;
        }
        s
    }

    pub fn push(&mut self, x: T) {
        if self.cap == 0 {
            self.seen += 1;
            return;
        }
        if self.items.len() < self.cap {
            self.items.push(x);
            self.seen += 1;
            if self.items.len() == self.cap && self.algo == ReservoirAlgo::Vitter {
                self.skip = self.draw_skip();
            }
            return;
        }
        match self.algo {
            ReservoirAlgo::Simple => {
                self.seen += 1;
                let m = (self.seen as f64 * self.rng.random::<f64>()) as u64;
                if (m as usize) < self.cap {
                    self.items[m as usize] = x;
                }
            }
            ReservoirAlgo::Vitter => {
                self.seen += 1;
                if self.skip > 0 {
                    self.skip -= 1;
                } else {
                    let k = self.rng.random_range(0..self.cap);
                    self.items[k] = x;
                    self.skip = self.draw_skip();
                }
            }
        }
    }
}

/// Uniform without-replacement sample of size `n` from a stream of itemsets.
pub fn reservoir<I>(stream: I, n: usize, rng: crate::Rng, algo: ReservoirAlgo) -> FiSample
where
    I: IntoIterator<Item = Itemset>,
{
    let mut r = Reservoir::new(n, algo, rng);
    for x in stream {
        r.push(x);
    }
    let total_seen = r.seen();
    FiSample {
        short: (total_seen as usize) < n,
        itemsets: r.into_items(),
        source: SampleSource::Reservoir,
        total_seen,
    }
}
