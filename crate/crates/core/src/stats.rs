//! Goodness-of-fit testing for sampled outcome distributions.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::tol;

/// Result of a chi-square goodness-of-fit test against an exact table.
#[derive(Debug, Clone)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub critical_value: f64,
    pub significance: f64,
    /// Cells with resolvable expected probability; structural zeros are
    /// excluded from the statistic.
    pub cells_used: usize,
    pub passed: bool,
}

/// Chi-square goodness of fit of observed counts against expected
/// probabilities. Cells whose expected probability sits at the zero floor
/// are excluded from the statistic and the degrees of freedom; observing a
/// count in such a cell fails the test outright.
pub fn chi_square_gof(
    observed: &[u64],
    expected_probs: &[f64],
    significance: f64,
) -> Result<GoodnessOfFit> {
    if observed.len() != expected_probs.len() {
        return Err(Error::contract(
            "observed and expected tables differ in length",
        ));
    }
    if !(0.0..1.0).contains(&significance) || significance == 0.0 {
        return Err(Error::contract(format!(
            "significance {significance} outside (0, 1)"
        )));
    }
    let shots: u64 = observed.iter().sum();
    if shots == 0 {
        return Err(Error::contract("no observations"));
    }

    let mut statistic = 0.0;
    let mut cells_used = 0usize;
    let mut impossible_observed = false;
    for (&count, &prob) in observed.iter().zip(expected_probs) {
        if prob <= tol::PROB_FLOOR {
            if count > 0 {
                impossible_observed = true;
            }
            continue;
        }
        cells_used += 1;
        let expected = prob * shots as f64;
        let diff = count as f64 - expected;
        statistic += diff * diff / expected;
    }
    if cells_used < 2 {
        return Err(Error::contract(
            "chi-square needs at least two resolvable cells",
        ));
    }

    let degrees_of_freedom = cells_used - 1;
    let critical_value = ChiSquared::new(degrees_of_freedom as f64)
        .map_err(|e| Error::contract(format!("chi-square distribution: {e}")))?
        .inverse_cdf(1.0 - significance);
    if impossible_observed {
        statistic = f64::INFINITY;
    }
    Ok(GoodnessOfFit {
        statistic,
        degrees_of_freedom,
        critical_value,
        significance,
        cells_used,
        passed: statistic <= critical_value,
    })
}
