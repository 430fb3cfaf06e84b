use rand_distr::{Binomial, Distribution, Hypergeometric};

use crate::error::{Error, Result};

/// Draws `n` balls without replacement from an urn with `counts[i]` balls of
/// colour `i`; returns how many of each colour were drawn.
pub fn multivariate_hypergeom(counts: &[u64], n: u64, rng: &mut crate::Rng) -> Result<Vec<u64>> {
    let total: u64 = counts.iter().sum();
    if n > total {
        return Err(Error::param(format!("cannot draw {n} from {total} balls")));
    }
    let mut left_total = total;
    let mut left_n = n;
    let mut out = Vec::with_capacity(counts.len());
    for &c in counts {
        if left_n == 0 || c == 0 {
            out.push(0);
        } else if c == left_total {
            out.push(left_n);
            left_n = 0;
        } else {
            let x = match Hypergeometric::new(left_total, c, left_n) {
                Ok(d) => d.sample(rng),
                // Populations too large for the sampler: draw the ball indices directly.
                Err(_) => rand::seq::index::sample(rng, left_total as usize, left_n as usize)
                    .iter()
                    .filter(|&k| (k as u64) < c)
                    .count() as u64,
            };
            out.push(x);
            left_n -= x;
        }
        left_total -= c;
    }
    Ok(out)
}

/// `n` independent categorical draws with probabilities `p` (normalized here).
pub fn multinomial(p: &[f64], n: u64, rng: &mut crate::Rng) -> Result<Vec<u64>> {
    if p.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::param("probabilities must be finite and non-negative"));
    }
    let mut left_mass: f64 = p.iter().sum();
    if !(left_mass > 0.0) {
        return Err(Error::param("probabilities sum to zero"));
    }
    let last = p.iter().rposition(|&x| x > 0.0).unwrap();
    let mut left_n = n;
    let mut out = Vec::with_capacity(p.len());
    for (k, &x) in p.iter().enumerate() {
        if left_n == 0 || x == 0.0 {
            out.push(0);
        } else if k == last || x >= left_mass {
            out.push(left_n);
            left_n = 0;
        } else {
            let d = Binomial::new(left_n, (x / left_mass).min(1.0)).map_err(|e| Error::param(e.to_string()))?;
            let y = d.sample(rng);
            out.push(y);
            left_n -= y;
        }
        left_mass -= x;
    }
    Ok(out)
}
