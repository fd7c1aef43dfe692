//! Binomial confidence intervals.

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Difference of two proportions with its Wald interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffCi {
    pub diff: f64,
    pub lo: f64,
    pub hi: f64,
}

impl DiffCi {
    pub fn excludes_zero(&self) -> bool {
        self.lo > 0.0 || self.hi < 0.0
    }
}

/// Wald interval for `x1/n1 - x2/n2`.
pub fn diff_ci(x1: u64, n1: u64, x2: u64, n2: u64) -> DiffCi {
    let p = |x: u64, n: u64| if n == 0 { 0.0 } else { x as f64 / n as f64 };
    let var = |x: u64, n: u64| {
        if n == 0 {
            0.0
        } else {
            p(x, n) * (1.0 - p(x, n)) / n as f64
        }
    };
    let diff = p(x1, n1) - p(x2, n2);
    let half = Z95 * (var(x1, n1) + var(x2, n2)).sqrt();
    DiffCi {
        diff,
        lo: diff - half,
        hi: diff + half,
    }
}

/// Wilson score interval for a single proportion.
pub fn wilson(x: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (n, p) = (n as f64, x as f64 / n as f64);
    let z2 = Z95 * Z95;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (centre - half, centre + half)
}
