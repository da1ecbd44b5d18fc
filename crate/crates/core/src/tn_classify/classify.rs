use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::growth::{log_growth_fit, FitKind};
use crate::loop_coords::LoopCoords;

use super::burau::burau_lower_bound;
use super::entropy::entropy_estimate;

/// Slack allowed between the loop-coordinate estimate and the Burau bound.
const BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TnType {
    /// Exponential topological growth. Reducible braids with a
    /// pseudo-Anosov component also land here.
    PseudoAnosovCandidate,
    FiniteOrder,
    /// Unbounded but sub-exponential growth: finite order up to twisting, or reducible.
    ZeroEntropyNonPeriodic,
    Inconclusive,
}

impl fmt::Display for TnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub recurrence_cap: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol: 1e-10,
            max_iter: 2000,
            recurrence_cap: 200,
        }
    }
}

/// Flat classification record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TnClassification {
    pub tag: TnType,
    pub log_dilation: f64,
    pub lambda: f64,
    pub burau_lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
    pub recurrence_period: Option<usize>,
    pub notes: String,
}

/// Iterates the chain of pair curves. Returns the first return time (if
/// `stop_on_return`) and the log of the summed norms per step.
fn pair_orbit(braid: &BraidWord, steps: usize, stop_on_return: bool) -> Result<(Option<usize>, Vec<f64>)> {
    let n = braid.strands();
    let start: Vec<LoopCoords> = (1..n)
        .map(|j| LoopCoords::pair_curve(n, j))
        .collect::<Result<_>>()?;
    let total = |ls: &[LoopCoords]| {
        let sum: num_bigint::BigInt = ls.iter().map(|l| l.norm().0).sum();
        crate::loop_coords::big_ln(&sum)
    };
    let mut loops = start.clone();
    let mut logs = vec![total(&loops)];
    for k in 1..=steps {
        loops = loops
            .iter()
            .map(|l| l.apply_braid(braid))
            .collect::<Result<_>>()?;
        logs.push(total(&loops));
        if stop_on_return && loops == start {
            return Ok((Some(k), logs));
        }
    }
    Ok((None, logs))
}

/// Decides the Thurston–Nielsen type of a braid.
///
/// 1. Recurrence: if every pair curve `c_j` (around punctures `j, j+1`)
///    returns to itself at the same step `k ≤ recurrence_cap`, the braid is
///    periodic up to a boundary twist and is reported as finite order.
/// 2. Otherwise a converged, positive loop-coordinate entropy estimate gives
///    a pseudo-Anosov candidate.
/// 3. Otherwise, if the pair-curve norms grow without bound and a linear fit
///    beats an exponential fit over the second half of the run, the braid has
///    zero entropy but is not periodic.
/// 4. Anything else is inconclusive.
pub fn classify(braid: &BraidWord, opts: ClassifyOptions) -> Result<TnClassification> {
    if braid.strands() < 3 {
        return Err(Error::TooFewPunctures {
            required: 3,
            got: braid.strands(),
        });
    }
    let bound = burau_lower_bound(braid);
    let record = |tag, log_dilation: f64, iterations, converged, period, notes: String| TnClassification {
        tag,
        log_dilation,
        lambda: log_dilation.exp(),
        burau_lower_bound: bound,
        iterations,
        converged,
        recurrence_period: period,
        notes,
    };

    let (period, _) = pair_orbit(braid, opts.recurrence_cap, true)?;
    if let Some(k) = period {
        return Ok(record(
            TnType::FiniteOrder,
            0.0,
            k,
            true,
            Some(k),
            format!("all pair curves return after {k} period(s)"),
        ));
    }

    let est = entropy_estimate(braid, opts.tol, opts.max_iter)?;
    if est.converged && est.seed_period.is_none() && est.log_dilation > 10.0 * opts.tol {
        if est.log_dilation < bound - BOUND_SLACK {
            return Ok(record(
                TnType::Inconclusive,
                0.0,
                est.iterations,
                est.converged,
                None,
                format!(
                    "loop estimate {:.12} is below the Burau bound {:.12}",
                    est.log_dilation, bound
                ),
            ));
        }
        return Ok(record(
            TnType::PseudoAnosovCandidate,
            est.log_dilation,
            est.iterations,
            true,
            None,
            "exponential growth of loop coordinates; a reducible braid with a \
             pseudo-Anosov component cannot be excluded by growth alone"
                .into(),
        ));
    }

    let (_, logs) = pair_orbit(braid, opts.max_iter, false)?;
    let last = logs.len() - 1;
    let first = last / 2;
    let fit = log_growth_fit(&logs, first, last)?;
    let growing = logs[last] - logs[first] > 0.1;
    if growing && fit.kind == FitKind::Linear {
        return Ok(record(
            TnType::ZeroEntropyNonPeriodic,
            0.0,
            est.iterations,
            est.converged,
            None,
            format!(
                "pair-curve norms grow sub-exponentially (linear residual {:.3e} < exponential residual {:.3e}); finite order up to twisting or reducible",
                fit.linear.residual,
                fit.exponential.map(|e| e.residual).unwrap_or(f64::INFINITY)
            ),
        ));
    }

    Ok(record(
        TnType::Inconclusive,
        0.0,
        est.iterations,
        est.converged,
        None,
        format!(
            "loop estimate {:.6e} (converged: {}), pair-curve growth fit {:?}",
            est.log_dilation, est.converged, fit.kind
        ),
    ))
}
