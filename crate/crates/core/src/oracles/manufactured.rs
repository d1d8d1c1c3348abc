//! Exact travelling-wave solution of the homogeneous coupled system.
//!
//! With `h = h0 + c0 sin(k x - w t)`, `q = (w/k) h`, `eta = -h` and
//! `q_b = -q`, all three equations are satisfied identically: continuity
//! because q is proportional to h with speed w/k, momentum because the
//! pressure gradient cancels against `g h d_x eta`, and the bed equation
//! because it is the negative of continuity.

use crate::error::{Result, SveError};
use crate::model::CellState;

/// Parameters of the manufactured travelling wave.
#[derive(Debug, Clone, Copy)]
pub struct ManufacturedParams {
    /// Mean depth [m].
    pub h0: f64,
    /// Wave amplitude [m]; must satisfy 0 < c0 < h0.
    pub c0: f64,
    /// Period [s].
    pub t_p: f64,
    /// Wavelength [m].
    pub l_w: f64,
}

impl ManufacturedParams {
    pub fn new(h0: f64, c0: f64, t_p: f64, l_w: f64) -> Result<Self> {
        if !(h0 > c0 && c0 > 0.0) {
            return Err(SveError::ConfigError(format!(
                "need h0 > c0 > 0, got h0={h0}, c0={c0}"
            )));
        }
        if !(t_p > 0.0 && l_w > 0.0) {
            return Err(SveError::ConfigError(format!(
                "need positive period and wavelength, got T_p={t_p}, L_w={l_w}"
            )));
        }
        Ok(Self { h0, c0, t_p, l_w })
    }

    /// Reference parameter set: h0=5 m, c0=0.01 m, T_p=10 s, L_w=250 m.
    pub fn reference() -> Self {
        Self { h0: 5.0, c0: 0.01, t_p: 10.0, l_w: 250.0 }
    }

    /// Wavenumber k = 2 pi / L_w.
    pub fn k(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.l_w
    }

    /// Angular frequency w = 2 pi / T_p.
    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.t_p
    }

    /// Phase speed w / k = L_w / T_p.
    pub fn speed(&self) -> f64 {
        self.l_w / self.t_p
    }
}

/// Exact state at (x, t), together with the bedload flux value `q_b = -q`.
pub fn manufactured_state(x: f64, t: f64, p: &ManufacturedParams) -> (CellState, f64) {
    let phase = p.k() * x - p.omega() * t;
    let h = p.h0 + p.c0 * phase.sin();
    let q = p.speed() * h;
    (CellState { h, q, eta: -h }, -q)
}
