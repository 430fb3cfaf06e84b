use crate::error::{Error, Result};

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be in (0,1), got {v}")))
    }
}

/// Chernoff bound on the database sample size: `ceil(ln(2/δ) / (2ε²))`.
pub fn db_sample_size(eps: f64, delta: f64) -> Result<u64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    Ok(((2.0 / delta).ln() / (2.0 * eps * eps)).ceil() as u64)
}

/// FI sample size for the coverage sampler: `ceil(4/(ε²ρ) · ln(2/δ))`.
pub fn coverage_sample_size(eps: f64, delta: f64, rho: f64) -> Result<u64> {
    if !(eps > 0.0) || !(delta > 0.0 && delta < 2.0) || !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::param(format!(
            "need eps > 0, delta in (0,2), rho in (0,1]; got {eps}, {delta}, {rho}"
        )));
    }
    Ok((4.0 / (eps * eps * rho) * (2.0 / delta).ln()).ceil() as u64)
}

/// `KL(x ‖ y)` for Bernoulli laws, with `0·ln 0 = 0`.
pub fn kl_divergence(x: f64, y: f64) -> f64 {
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    term(x, y) + term(1.0 - x, 1.0 - y)
}

/// FI sample size for the reservoir sampler: `ceil(-ln(δ/2) / KL(ρ+ε ‖ ρ))`.
pub fn reservoir_sample_size(eps: f64, delta: f64, rho: f64) -> Result<u64> {
    check_unit("delta", delta)?;
    check_unit("rho", rho)?;
    if !(eps > 0.0) {
        return Err(Error::param(format!("eps must be > 0 (KL divergence is 0), got {eps}")));
    }
    if rho + eps >= 1.0 {
        return Err(Error::param(format!("rho + eps must be < 1, got {}", rho + eps)));
    }
    Ok((-(delta / 2.0).ln() / kl_divergence(rho + eps, rho)).ceil() as u64)
}

/// Bounds on a PBEC's relative size from its estimate `c_est`, when the database
/// sample wrongly adds at most a fraction `a` and misses at most `b` of the FIs:
/// `(c(1+a-b) - a, c(1+a-b) + b)`.
pub fn pbec_size_bounds_exact(c_est: f64, a: f64, b: f64) -> (f64, f64) {
    let m = c_est * (1.0 + a - b);
    (m - a, m + b)
}

/// As [`pbec_size_bounds_exact`] with the estimate discounted by the FI-sample error:
/// `(c(1-ε)(1+a-b) - a, c(1-ε)(1+a-b) + b)`.
pub fn pbec_size_bounds(c_est: f64, eps: f64, a: f64, b: f64) -> (f64, f64) {
    pbec_size_bounds_exact(c_est * (1.0 - eps), a, b)
}
