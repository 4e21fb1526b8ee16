// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use super::SweepRow;
use crate::error::{domain, input, Result};

/// Abscissa for [`fit_scaling`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XTransform {
    /// δ̂ against `log2 n`.
    LogN,
    /// δ̂ against `log2 log2 n`.
    LogLogN,
    /// `log2 δ̂` against `log2 n`; the slope estimates a polynomial exponent.
    LogLogSpace,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Median δ̂ (undoubled) per vertex count over non-skipped rows, ascending
/// in `n`. Even-sized groups average the two middle values.
pub fn median_by_size(rows: &[SweepRow]) -> Vec<(usize, f64)> {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in rows {
        if let Some(d) = r.delta_hat() {
            groups.entry(r.n()).or_default().push(d);
        }
    }
    groups
        .into_iter()
        .map(|(n, mut v)| {
            v.sort_by(f64::total_cmp);
            let mid = v.len() / 2;
            let med = if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 };
            (n, med)
        })
        .collect()
}

/// Ordinary least squares of median δ̂ per `n` against the transformed `n`.
pub fn fit_scaling(rows: &[SweepRow], x: XTransform) -> Result<Fit> {
    let medians = median_by_size(rows);
    if medians.len() < 3 {
        return Err(input(format!("scaling fit needs at least 3 distinct sizes, got {}", medians.len())));
    }
    let mut points = Vec::with_capacity(medians.len());
    for (n, delta) in medians {
        let lg = (n as f64).log2();
        let p = match x {
            XTransform::LogN => (lg, delta),
            XTransform::LogLogN => {
                if n < 3 {
                    return Err(input(format!("log log n undefined for n={n}")));
                }
                (lg.log2(), delta)
            }
            XTransform::LogLogSpace => {
                if delta <= 0.0 {
                    return Err(domain(format!("log-log fit needs positive δ̂, median at n={n} is {delta}")));
                }
                (lg, delta.log2())
            }
        };
        points.push(p);
    }
    ols(&points)
}

fn ols(points: &[(f64, f64)]) -> Result<Fit> {
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx <= f64::EPSILON * len {
        return Err(input("degenerate abscissa in scaling fit"));
    }
    let slope = sxy / sxx;
    // a constant response is fitted perfectly by a flat line
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(Fit { slope, intercept: my - slope * mx, r_squared })
}
