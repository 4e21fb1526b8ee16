// SPDX-License-Identifier: Apache-2.0

//! Embedding of ringed trees in the Poincaré disk.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use super::TreeAddress;
use crate::error::{domain, Result};
use crate::generators::gen_ringed_tree;
use crate::graph::all_pairs;

/// Point strictly inside the unit disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint {
    pub re: f64,
    pub im: f64,
}

impl DiskPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        let p = DiskPoint { re, im };
        if p.norm_sqr() < 1.0 {
            Ok(p)
        } else {
            Err(domain(format!("({re}, {im}) is not inside the unit disk")))
        }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// `(level, pos)` ↦ radius `sqrt(1 - 2^-level)` at angle `2π pos / 2^level`.
pub fn poincare_embed(a: TreeAddress) -> DiskPoint {
    let radius = (1.0 - (-(a.level as f64)).exp2()).sqrt();
    let angle = 2.0 * PI * a.pos as f64 / a.ring_size() as f64;
    DiskPoint { re: radius * angle.cos(), im: radius * angle.sin() }
}

/// Hyperbolic distance `arccosh(1 + 2|p-q|² / ((1-|p|²)(1-|q|²)))`.
pub fn poincare_distance(p: DiskPoint, q: DiskPoint) -> Result<f64> {
    let (np, nq) = (p.norm_sqr(), q.norm_sqr());
    if np >= 1.0 || nq >= 1.0 {
        return Err(domain("point on or outside the unit disk"));
    }
    let (dr, di) = (p.re - q.re, p.im - q.im);
    let chord = dr * dr + di * di;
    Ok((1.0 + 2.0 * chord / ((1.0 - np) * (1.0 - nq))).acosh())
}

/// Tolerance on real-valued bound checks.
pub const QI_TOLERANCE: f64 = 1e-9;

/// Lower and upper quasi-isometry bounds for tree distance `d`:
/// `(ln2 / 2) d - ln 200` and `ln2 d + ln(66 π²)`.
pub fn quasi_isometry_bounds(d: u32) -> (f64, f64) {
    let d = d as f64;
    (LN_2 / 2.0 * d - 200f64.ln(), LN_2 * d + (66.0 * PI * PI).ln())
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiIsometryReport {
    pub k: u32,
    pub pairs_checked: u64,
    pub violations: u64,
    /// Smallest slack `d_P - lower` over all pairs.
    pub min_lower_margin: f64,
    /// Smallest slack `upper - d_P` over all pairs.
    pub min_upper_margin: f64,
    /// Pair with the smallest slack on either side.
    pub tightest_pair: (TreeAddress, TreeAddress),
}

impl QuasiIsometryReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks both quasi-isometry bounds for every unordered vertex pair of
/// `RT(k)`, with BFS distances as the tree metric.
pub fn verify_quasi_isometry(k: u32) -> Result<QuasiIsometryReport> {
    let (g, table) = gen_ringed_tree(k)?;
    let m = all_pairs(&g)?;
    let points: Vec<DiskPoint> = table.iter().map(|&a| poincare_embed(a)).collect();
    let n = table.len();
    let rows: Vec<(u64, u64, f64, f64, f64, usize, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = (0u64, 0u64, f64::INFINITY, f64::INFINITY, f64::INFINITY, i, i);
            for j in i + 1..n {
                let d = m.get(i as u32, j as u32);
                let dp = poincare_distance(points[i], points[j]).expect("embedded points are inside the disk");
                let (lo, hi) = quasi_isometry_bounds(d);
                let (lower, upper) = (dp - lo, hi - dp);
                acc.0 += 1;
                if lower < -QI_TOLERANCE || upper < -QI_TOLERANCE {
                    acc.1 += 1;
                }
                acc.2 = acc.2.min(lower);
                acc.3 = acc.3.min(upper);
                if lower.min(upper) < acc.4 {
                    acc.4 = lower.min(upper);
                    acc.5 = i;
                    acc.6 = j;
                }
            }
            acc
        })
        .collect();
    let mut report = QuasiIsometryReport {
        k,
        pairs_checked: 0,
        violations: 0,
        min_lower_margin: f64::INFINITY,
        min_upper_margin: f64::INFINITY,
        tightest_pair: (table[0], table[0]),
    };
    let mut tightest = f64::INFINITY;
    for r in rows {
        report.pairs_checked += r.0;
        report.violations += r.1;
        report.min_lower_margin = report.min_lower_margin.min(r.2);
        report.min_upper_margin = report.min_upper_margin.min(r.3);
        if r.4 < tightest {
            tightest = r.4;
            report.tightest_pair = (table[r.5], table[r.6]);
        }
    }
    Ok(report)
}
