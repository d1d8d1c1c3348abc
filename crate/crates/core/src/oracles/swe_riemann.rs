//! Exact Riemann solver for the fixed-bed shallow-water equations.
//!
//! Classical two-wave construction: the star depth solves
//! `f_L(h) + f_R(h) + u_R - u_L = 0` with the usual shock / rarefaction
//! branches, found by Newton iteration with a bisection fallback, and the
//! solution is sampled by similarity variable `xi = x / t`.

use crate::error::{Result, SveError};

/// Wave function of one side: rarefaction branch for h <= h_k, shock branch
/// (from the Rankine-Hugoniot conditions) for h > h_k.
fn wave_fn(h: f64, h_k: f64, g: f64) -> f64 {
    if h <= h_k {
        2.0 * ((g * h).sqrt() - (g * h_k).sqrt())
    } else {
        (h - h_k) * (0.5 * g * (h + h_k) / (h * h_k)).sqrt()
    }
}

/// Exact solution structure of one Riemann problem.
#[derive(Debug, Clone, Copy)]
pub struct SweRiemannSolution {
    pub h_l: f64,
    pub u_l: f64,
    pub h_r: f64,
    pub u_r: f64,
    pub h_star: f64,
    pub u_star: f64,
    pub g: f64,
}

/// Solve for the star region. Errors on non-positive depths or data that
/// would generate a dry state.
pub fn exact_swe_riemann(
    h_l: f64,
    u_l: f64,
    h_r: f64,
    u_r: f64,
    g: f64,
) -> Result<SweRiemannSolution> {
    if !(h_l > 0.0 && h_r > 0.0) {
        return Err(SveError::UnsupportedInput(format!(
            "non-positive depth (h_l={h_l}, h_r={h_r})"
        )));
    }
    let c_l = (g * h_l).sqrt();
    let c_r = (g * h_r).sqrt();
    // Depth positivity: a dry state forms when the outflow exceeds 2(c_L+c_R).
    if u_r - u_l >= 2.0 * (c_l + c_r) {
        return Err(SveError::UnsupportedInput(
            "data generates a dry state (vacuum)".into(),
        ));
    }

    let total = |h: f64| wave_fn(h, h_l, g) + wave_fn(h, h_r, g) + u_r - u_l;
    let total_deriv = |h: f64| {
        let d = |h: f64, h_k: f64| {
            if h <= h_k {
                (g / h).sqrt()
            } else {
                let gk = (0.5 * g * (h + h_k) / (h * h_k)).sqrt();
                gk - 0.25 * g * (h - h_k) / (gk * h * h)
            }
        };
        d(h, h_l) + d(h, h_r)
    };

    // Two-rarefaction initial guess; always positive under the vacuum check.
    let h0 = {
        let v = 0.5 * (c_l + c_r) - 0.25 * (u_r - u_l);
        (v * v / g).max(1e-12 * h_l.min(h_r))
    };
    let mut h = h0;
    let tol = 1e-14 * (h_l.max(h_r)).max(1.0);
    let mut converged = false;
    for _ in 0..100 {
        let f = total(h);
        if f.abs() <= tol * g.sqrt() {
            converged = true;
            break;
        }
        let df = total_deriv(h);
        let next = h - f / df;
        if !next.is_finite() || next <= 0.0 {
            break;
        }
        if (next - h).abs() <= 1e-15 * h {
            h = next;
            converged = true;
            break;
        }
        h = next;
    }
    if !converged {
        // total is increasing in h; bracket and bisect.
        let mut lo = 1e-14 * h_l.min(h_r);
        let mut hi = h_l.max(h_r);
        while total(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(SveError::UnsupportedInput("star depth out of range".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if total(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        h = 0.5 * (lo + hi);
    }

    let u_star = 0.5 * (u_l + u_r) + 0.5 * (wave_fn(h, h_r, g) - wave_fn(h, h_l, g));
    Ok(SweRiemannSolution { h_l, u_l, h_r, u_r, h_star: h, u_star, g })
}

impl SweRiemannSolution {
    /// Sample (h, u) at similarity variable `xi = x / t`.
    pub fn sample(&self, xi: f64) -> (f64, f64) {
        let g = self.g;
        let (h_l, u_l, h_r, u_r) = (self.h_l, self.u_l, self.h_r, self.u_r);
        let (h_s, u_s) = (self.h_star, self.u_star);
        let c_l = (g * h_l).sqrt();
        let c_r = (g * h_r).sqrt();
        let c_s = (g * h_s).sqrt();

        if xi <= u_s {
            // Left wave.
            if h_s > h_l {
                // Left shock.
                let s_l = u_l - c_l * (0.5 * h_s * (h_s + h_l) / (h_l * h_l)).sqrt();
                if xi < s_l { (h_l, u_l) } else { (h_s, u_s) }
            } else {
                // Left rarefaction between u_l - c_l and u_s - c_s.
                if xi < u_l - c_l {
                    (h_l, u_l)
                } else if xi > u_s - c_s {
                    (h_s, u_s)
                } else {
                    let u = (u_l + 2.0 * c_l + 2.0 * xi) / 3.0;
                    let c = (u_l + 2.0 * c_l - xi) / 3.0;
                    (c * c / g, u)
                }
            }
        } else {
            // Right wave.
            if h_s > h_r {
                let s_r = u_r + c_r * (0.5 * h_s * (h_s + h_r) / (h_r * h_r)).sqrt();
                if xi > s_r { (h_r, u_r) } else { (h_s, u_s) }
            } else {
                if xi > u_r + c_r {
                    (h_r, u_r)
                } else if xi < u_s + c_s {
                    (h_s, u_s)
                } else {
                    let u = (u_r - 2.0 * c_r + 2.0 * xi) / 3.0;
                    let c = (-u_r + 2.0 * c_r + xi) / 3.0;
                    (c * c / g, u)
                }
            }
        }
    }

    /// Residual of the star-depth equation; a solver self-check.
    pub fn residual(&self) -> f64 {
        wave_fn(self.h_star, self.h_l, self.g) + wave_fn(self.h_star, self.h_r, self.g)
            + self.u_r
            - self.u_l
    }
}
