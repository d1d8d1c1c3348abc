//! Error norms and convergence-rate bookkeeping.
//!
//! Norms are relative: `L1 = (sum |e_i|) / (sum |exact_i|)` and
//! `Linf = max |e_i| / max |exact_i|`; a field that is identically zero in
//! the reference keeps the absolute norm (normalizer 1). The rate between a
//! grid with M cells and one with 2M cells is `log2(e_M / e_2M)`.

use crate::error::{Result, SveError};

/// L1 and Linf norms of one error field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormPair {
    pub l1: f64,
    pub linf: f64,
}

/// Relative norms of the difference between two same-grid samplings,
/// normalized by the same norm of the `exact` field. The cell width cancels
/// in the L1 ratio; `dx` is kept in the signature for the degenerate
/// all-zero-reference case, where the absolute `(sum |e_i|) * dx` is
/// returned instead.
pub fn error_norms(numerical: &[f64], exact: &[f64], dx: f64) -> Result<NormPair> {
    if numerical.len() != exact.len() {
        return Err(SveError::UnsupportedInput(format!(
            "grid mismatch: {} vs {} cells",
            numerical.len(),
            exact.len()
        )));
    }
    let mut l1 = 0.0;
    let mut linf = 0.0f64;
    let mut l1_ref = 0.0;
    let mut linf_ref = 0.0f64;
    for (a, b) in numerical.iter().zip(exact) {
        let e = (a - b).abs();
        l1 += e;
        linf = linf.max(e);
        l1_ref += b.abs();
        linf_ref = linf_ref.max(b.abs());
    }
    let l1 = if l1_ref > 0.0 { l1 / l1_ref } else { l1 * dx };
    let linf = if linf_ref > 0.0 { linf / linf_ref } else { linf };
    Ok(NormPair { l1, linf })
}

/// Observed convergence rate from errors on grids M and 2M.
pub fn rate(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}

/// One grid level of a convergence study; norms are per variable (h, q, eta).
#[derive(Debug, Clone, Copy)]
pub struct ErrorRow {
    pub m: usize,
    pub norms: [NormPair; 3],
    pub cpu_seconds: f64,
}

/// Convergence table over a doubling grid sequence.
#[derive(Debug, Clone, Default)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

pub const VARIABLE_NAMES: [&str; 3] = ["h", "q", "eta"];

impl ErrorReport {
    pub fn push(&mut self, row: ErrorRow) -> Result<()> {
        if let Some(last) = self.rows.last() {
            if row.m != 2 * last.m {
                return Err(SveError::UnsupportedInput(format!(
                    "grid sequence must double: {} after {}",
                    row.m, last.m
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// L1 rates for variable index `var`; entry i compares rows i and i+1.
    pub fn l1_rates(&self, var: usize) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| rate(w[0].norms[var].l1, w[1].norms[var].l1))
            .collect()
    }

    pub fn linf_rates(&self, var: usize) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| rate(w[0].norms[var].linf, w[1].norms[var].linf))
            .collect()
    }

    /// CSV with one row per grid: M, then L1/rate/Linf/rate per variable,
    /// then CPU seconds. Rates of the first row are empty.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("M");
        for name in VARIABLE_NAMES {
            s.push_str(&format!(",L1_{name},rate_L1_{name},Linf_{name},rate_Linf_{name}"));
        }
        s.push_str(",cpu_s\n");
        for (i, row) in self.rows.iter().enumerate() {
            s.push_str(&format!("{}", row.m));
            for (v, _) in VARIABLE_NAMES.iter().enumerate() {
                let (r1, ri) = if i == 0 {
                    (String::new(), String::new())
                } else {
                    let prev = &self.rows[i - 1];
                    (
                        format!("{:.3}", rate(prev.norms[v].l1, row.norms[v].l1)),
                        format!("{:.3}", rate(prev.norms[v].linf, row.norms[v].linf)),
                    )
                };
                s.push_str(&format!(
                    ",{:.6e},{},{:.6e},{}",
                    row.norms[v].l1, r1, row.norms[v].linf, ri
                ));
            }
            s.push_str(&format!(",{:.3}\n", row.cpu_seconds));
        }
        s
    }

    /// Fixed-width text table, one block per variable.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, name) in VARIABLE_NAMES.iter().enumerate() {
            s.push_str(&format!("variable {name}\n"));
            s.push_str(&format!(
                "{:>6} {:>14} {:>8} {:>14} {:>8} {:>8}\n",
                "M", "L1", "O(L1)", "Linf", "O(Linf)", "cpu[s]"
            ));
            for (i, row) in self.rows.iter().enumerate() {
                let (r1, ri) = if i == 0 {
                    ("-".to_string(), "-".to_string())
                } else {
                    let prev = &self.rows[i - 1];
                    (
                        format!("{:.2}", rate(prev.norms[v].l1, row.norms[v].l1)),
                        format!("{:.2}", rate(prev.norms[v].linf, row.norms[v].linf)),
                    )
                };
                s.push_str(&format!(
                    "{:>6} {:>14.6e} {:>8} {:>14.6e} {:>8} {:>8.2}\n",
                    row.m, row.norms[v].l1, r1, row.norms[v].linf, ri, row.cpu_seconds
                ));
            }
            s.push('\n');
        }
        s
    }
}
