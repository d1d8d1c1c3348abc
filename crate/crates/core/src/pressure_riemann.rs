//! Riemann problem of the non-conservative pressure subsystem.
//!
//! The wave pattern is always subcritical: a left wave, a stationary contact
//! and a right wave. Star depths follow from the Riemann invariants
//! `(2/3) sqrt(g) h^(3/2) +- q = const` on the outer waves together with the
//! contact relations `q = const` and `h + eta = const`. Two solution paths are
//! provided: a closed-form linearization (the production default) and Newton
//! iteration on the exact invariant system.

use crate::error::{Result, SveError};
use crate::model::CellState;

/// Star-region solution of the pressure Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    pub h_star_l: f64,
    pub h_star_r: f64,
    pub q_star: f64,
    /// Bed elevation left of the contact (unchanged across the left wave).
    pub eta_l: f64,
    /// Bed elevation right of the contact (unchanged across the right wave).
    pub eta_r: f64,
}

impl StarState {
    /// State just left of the interface, `[h_star_l, q_star, eta_l]`.
    pub fn left_state(&self) -> CellState {
        CellState { h: self.h_star_l, q: self.q_star, eta: self.eta_l }
    }

    /// State just right of the interface, `[h_star_r, q_star, eta_r]`.
    pub fn right_state(&self) -> CellState {
        CellState { h: self.h_star_r, q: self.q_star, eta: self.eta_r }
    }
}

/// Which star-state solution path to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StarSolver {
    #[default]
    Linearized,
    Iterative,
}

/// Riemann data with the derived invariant constant
/// `K = (3 / 2 sqrt(g)) (q_L - q_R) + h_L^(3/2) + h_R^(3/2)` and bed jump.
#[derive(Debug, Clone, Copy)]
pub struct RiemannInputs {
    pub left: CellState,
    pub right: CellState,
    pub k: f64,
    pub delta_eta: f64,
}

impl RiemannInputs {
    pub fn new(left: CellState, right: CellState, g: f64) -> Self {
        let k = 1.5 / g.sqrt() * (left.q - right.q) + left.h.powf(1.5) + right.h.powf(1.5);
        Self { left, right, k, delta_eta: right.eta - left.eta }
    }
}

/// Quiescent balanced interface: both discharges and the free-surface jump
/// are at rounding level. The exact invariant-system solution is then
/// `(h_L, h_R, 0)`; returning it verbatim keeps lake-at-rest data a fixed
/// point of the schemes, which the linearized closed form alone does not
/// guarantee (its star depths carry an O(delta_eta^2) defect).
/// True when both discharges and the free-surface jump are at rounding level
/// relative to the local flow scales.
pub(crate) fn is_quiescent_pair(left: &CellState, right: &CellState, g: f64) -> bool {
    const EPS_WB: f64 = 1e-11;
    let h_max = left.h.max(right.h);
    let q_scale = (h_max * (g * h_max).sqrt()).max(1.0);
    let s_scale = left.surface().abs().max(right.surface().abs()).max(1.0);
    left.q.abs() <= EPS_WB * q_scale
        && right.q.abs() <= EPS_WB * q_scale
        && (left.surface() - right.surface()).abs() <= EPS_WB * s_scale
}

fn quiescent_star(left: &CellState, right: &CellState, g: f64) -> Option<StarState> {
    if is_quiescent_pair(left, right, g) {
        Some(StarState {
            h_star_l: left.h,
            h_star_r: right.h,
            q_star: 0.0,
            eta_l: left.eta,
            eta_r: right.eta,
        })
    } else {
        None
    }
}

fn star_failure(left: &CellState, right: &CellState, reason: String) -> SveError {
    SveError::StarFailure {
        h_left: left.h,
        q_left: left.q,
        eta_left: left.eta,
        h_right: right.h,
        q_right: right.q,
        eta_right: right.eta,
        reason,
    }
}

fn q_star_from_depths(
    left: &CellState,
    right: &CellState,
    h_star_l: f64,
    h_star_r: f64,
    g: f64,
) -> f64 {
    0.5 * (left.q + right.q)
        + g.sqrt() / 3.0
            * (left.h.powf(1.5) - right.h.powf(1.5) - h_star_l.powf(1.5)
                + h_star_r.powf(1.5))
}

/// Closed-form star state from the linearized invariant system.
pub fn star_state_linearized(left: &CellState, right: &CellState, g: f64) -> Result<StarState> {
    if let Some(star) = quiescent_star(left, right, g) {
        return Ok(star);
    }
    let inp = RiemannInputs::new(*left, *right, g);
    let h_hat_arg =
        0.75 / g.sqrt() * (left.q - right.q) + 0.5 * (left.h.powf(1.5) + right.h.powf(1.5));
    if h_hat_arg <= 0.0 {
        return Err(star_failure(left, right, format!("h_hat^(3/2)={h_hat_arg} <= 0")));
    }
    let h_hat = h_hat_arg.powf(2.0 / 3.0);
    let h_star_l = 0.5 * (inp.k / h_hat.sqrt() + inp.delta_eta);
    let h_star_r = h_star_l - inp.delta_eta;
    if h_star_l <= 0.0 || h_star_r <= 0.0 {
        return Err(star_failure(
            left,
            right,
            format!("negative star depth (h_star_l={h_star_l}, h_star_r={h_star_r})"),
        ));
    }
    let q_star = q_star_from_depths(left, right, h_star_l, h_star_r, g);
    Ok(StarState { h_star_l, h_star_r, q_star, eta_l: left.eta, eta_r: right.eta })
}

/// Star state from Newton iteration on
/// `f(h) = h^(3/2) + (h - delta_eta)^(3/2) - K = 0`, with a bracketed
/// bisection fallback if Newton does not converge.
pub fn star_state_iterative(
    left: &CellState,
    right: &CellState,
    g: f64,
    tol: f64,
    max_iter: usize,
) -> Result<StarState> {
    if let Some(star) = quiescent_star(left, right, g) {
        return Ok(star);
    }
    let inp = RiemannInputs::new(*left, *right, g);
    let d_eta = inp.delta_eta;
    let k = inp.k;
    let residual = |h: f64| h.powf(1.5) + (h - d_eta).powf(1.5) - k;
    let tol_abs = tol * k.abs().max(1.0);

    // Initial guess: the closed-form estimate, kept strictly above the bed
    // jump so (h - delta_eta)^(3/2) stays real.
    const EPS_H: f64 = 1e-10;
    let h_hat_arg =
        0.75 / g.sqrt() * (left.q - right.q) + 0.5 * (left.h.powf(1.5) + right.h.powf(1.5));
    let h_min = d_eta.max(0.0) + EPS_H;
    let mut h = if h_hat_arg > 0.0 {
        (h_hat_arg.powf(2.0 / 3.0) + d_eta.max(0.0)).max(h_min)
    } else {
        h_min
    };

    let mut converged = false;
    for _ in 0..max_iter {
        let f = residual(h);
        if f.abs() <= tol_abs {
            converged = true;
            break;
        }
        let df = 1.5 * (h.sqrt() + (h - d_eta).max(0.0).sqrt());
        if df <= 0.0 {
            break;
        }
        let next = h - f / df;
        if !next.is_finite() || next <= h_min {
            break;
        }
        h = next;
    }

    if !converged && residual(h).abs() > tol_abs {
        // Bracketed bisection on [h_min, h_max]; f is increasing in h.
        let mut lo = h_min;
        let mut hi = (k.max(0.0)).powf(2.0 / 3.0).max(h_min) + d_eta.abs() + 1.0;
        if residual(lo) > 0.0 || residual(hi) < 0.0 {
            return Err(star_failure(left, right, "no sign change for bisection".into()));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-15 * hi.max(1.0) {
                break;
            }
        }
        h = 0.5 * (lo + hi);
        if residual(h).abs() > tol_abs.max(1e-9) {
            return Err(star_failure(
                left,
                right,
                format!("bisection stalled with residual {:e}", residual(h)),
            ));
        }
    }

    let h_star_l = h;
    let h_star_r = h - d_eta;
    if h_star_l <= 0.0 || h_star_r <= 0.0 {
        return Err(star_failure(
            left,
            right,
            format!("negative star depth (h_star_l={h_star_l}, h_star_r={h_star_r})"),
        ));
    }
    let q_star = q_star_from_depths(left, right, h_star_l, h_star_r, g);
    Ok(StarState { h_star_l, h_star_r, q_star, eta_l: left.eta, eta_r: right.eta })
}

/// Solve with the configured path; defaults used by the schemes.
pub fn star_state(
    left: &CellState,
    right: &CellState,
    g: f64,
    solver: StarSolver,
) -> Result<StarState> {
    match solver {
        StarSolver::Linearized => star_state_linearized(left, right, g),
        StarSolver::Iterative => star_state_iterative(left, right, g, 1e-12, 50),
    }
}

/// Residuals of the two outer-wave Riemann invariants and of the contact
/// free-surface relation, for a given star state.
pub fn riemann_invariant_residuals(
    left: &CellState,
    right: &CellState,
    star: &StarState,
    g: f64,
) -> (f64, f64, f64) {
    let inv = |h: f64, q: f64, sign: f64| 2.0 / 3.0 * g.sqrt() * h.powf(1.5) + sign * q;
    let r_left = (inv(left.h, left.q, 1.0) - inv(star.h_star_l, star.q_star, 1.0)).abs();
    let r_right = (inv(right.h, right.q, -1.0) - inv(star.h_star_r, star.q_star, -1.0)).abs();
    let r_contact =
        ((star.h_star_l + star.eta_l) - (star.h_star_r + star.eta_r)).abs();
    (r_left, r_right, r_contact)
}
