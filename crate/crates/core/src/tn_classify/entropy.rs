use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::growth::{log_growth_fit, FitKind};
use crate::loop_coords::LoopCoords;

/// Consecutive sub-tolerance steps required before declaring convergence.
const CONVERGENCE_STREAK: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    /// Estimate of `ln λ` per period.
    pub log_dilation: f64,
    pub iterations: usize,
    pub converged: bool,
    pub per_step_estimates: Vec<f64>,
    /// `ln` of the seed norm after each period, starting with the seed itself.
    pub log_norms: Vec<f64>,
    /// Set when the seed returned to itself; the orbit is periodic with this period.
    pub seed_period: Option<usize>,
}

/// Iterates the braid on the generating multiloop and tracks
/// `ln(‖u_k‖ / ‖u_{k−1}‖)` until successive estimates agree to `tol`.
///
/// Without convergence the second half of the run decides: if the norms grow
/// sub-exponentially there (a linear fit beats an exponential one) the
/// estimate is zero, otherwise it is the mean rate over that half.
pub fn entropy_estimate(braid: &BraidWord, tol: f64, max_iter: usize) -> Result<EntropyResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    if max_iter < 10 {
        return Err(Error::InvalidArgument(format!(
            "max_iter must be at least 10, got {max_iter}"
        )));
    }
    let seed = LoopCoords::initial_multiloop(braid.strands())?;
    let mut u = seed.clone();
    let mut log_norms = vec![u.norm().ln()];
    let mut estimates: Vec<f64> = Vec::new();
    let mut streak = 0;

    for k in 1..=max_iter {
        u = u.apply_braid(braid)?;
        log_norms.push(u.norm().ln());
        estimates.push(log_norms[k] - log_norms[k - 1]);
        if u == seed {
            return Ok(EntropyResult {
                log_dilation: 0.0,
                iterations: k,
                converged: true,
                per_step_estimates: estimates,
                log_norms,
                seed_period: Some(k),
            });
        }
        if k >= 2 && (estimates[k - 1] - estimates[k - 2]).abs() < tol {
            streak += 1;
        } else {
            streak = 0;
        }
        if streak >= CONVERGENCE_STREAK {
            return Ok(EntropyResult {
                log_dilation: estimates[k - 1].max(0.0),
                iterations: k,
                converged: true,
                per_step_estimates: estimates,
                log_norms,
                seed_period: None,
            });
        }
    }

    let half = max_iter / 2;
    let mean_rate = (log_norms[max_iter] - log_norms[half]) / (max_iter - half) as f64;
    let polynomial = log_growth_fit(&log_norms, half, max_iter)?.kind == FitKind::Linear;
    Ok(EntropyResult {
        log_dilation: if polynomial { 0.0 } else { mean_rate.max(0.0) },
        iterations: max_iter,
        converged: false,
        per_step_estimates: estimates,
        log_norms,
        seed_period: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, v: &[i64]) -> BraidWord {
        BraidWord::from_signed(n, v).unwrap()
    }

    fn golden() -> f64 {
        // Largest root of x^2 - 3x + 1.
        ((3.0 + 5f64.sqrt()) / 2.0).ln()
    }

    #[test]
    fn golden_braid() {
        let r = entropy_estimate(&w(3, &[1, -2]), 1e-10, 2000).unwrap();
        assert!(r.converged);
        assert!((r.log_dilation - golden()).abs() < 1e-8, "{}", r.log_dilation);
        let n = r.per_step_estimates.len();
        assert!((r.per_step_estimates[n - 1] - r.per_step_estimates[n - 2]).abs() < 1e-10);
    }

    #[test]
    fn identity_is_zero_and_converged() {
        let r = entropy_estimate(&BraidWord::identity(4).unwrap(), 1e-10, 2000).unwrap();
        assert!(r.converged);
        assert_eq!(r.log_dilation, 0.0);
        assert_eq!(r.seed_period, Some(1));
    }

    #[test]
    fn finite_order_is_zero() {
        let r = entropy_estimate(&w(3, &[1, 2]), 1e-10, 2000).unwrap();
        assert!(r.converged);
        assert_eq!(r.log_dilation, 0.0);
        assert!(r.seed_period.unwrap() <= 3);
    }

    #[test]
    fn linear_growth_gives_zero() {
        for b in [w(3, &[1]), w(4, &[1, 3]), w(3, &[1, 1, 1])] {
            let r = entropy_estimate(&b, 1e-10, 2000).unwrap();
            assert!(!r.converged);
            assert_eq!(r.log_dilation, 0.0, "{b}");
            assert!(r.log_norms[2000] > r.log_norms[1000]);
        }
    }

    #[test]
    fn argument_checks() {
        assert!(entropy_estimate(&w(3, &[1]), 0.0, 100).is_err());
        assert!(entropy_estimate(&w(3, &[1]), 1e-8, 9).is_err());
        assert!(entropy_estimate(&w(2, &[1]), 1e-8, 100).is_err());
    }
}
