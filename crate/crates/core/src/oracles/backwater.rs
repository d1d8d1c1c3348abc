//! Frictionless steady backwater profile.
//!
//! With constant discharge q and no friction, the energy head
//! `E = h + eta + q^2 / (2 g h^2)` is uniform. Fixing E from the downstream
//! depth, the per-cell depth is the subcritical root of the specific-energy
//! equation, found by Newton iteration on the branch `h > h_crit`.

use crate::error::{Result, SveError};
use crate::model::CellState;

/// Depths of the steady profile for discharge `q_in`, downstream depth
/// `h_out` (applied at the last cell) and bed elevations `eta`.
pub fn backwater_profile(q_in: f64, h_out: f64, eta: &[f64], g: f64) -> Result<Vec<CellState>> {
    if eta.is_empty() {
        return Err(SveError::UnsupportedInput("empty bed profile".into()));
    }
    if h_out <= 0.0 {
        return Err(SveError::UnsupportedInput(format!("non-positive h_out={h_out}")));
    }
    let eta_out = *eta.last().unwrap();
    let e_total = h_out + eta_out + q_in * q_in / (2.0 * g * h_out * h_out);

    if q_in == 0.0 {
        // Lake at rest: flat free surface.
        return eta
            .iter()
            .map(|&b| CellState::new(h_out + eta_out - b, 0.0, b))
            .collect();
    }

    let h_crit = (q_in * q_in / g).cbrt();
    let fr_out = q_in.abs() / (h_out * (g * h_out).sqrt());
    if fr_out >= 1.0 {
        return Err(SveError::UnsupportedInput(format!(
            "downstream state is not subcritical (Fr={fr_out:.3})"
        )));
    }
    // Minimum specific energy at critical depth.
    let e_min = 1.5 * h_crit;

    let mut out = Vec::with_capacity(eta.len());
    for (i, &b) in eta.iter().enumerate() {
        let e_spec = e_total - b;
        if e_spec < e_min {
            return Err(SveError::UnsupportedInput(format!(
                "choked flow at cell {i}: specific energy {e_spec:.6} below minimum {e_min:.6}"
            )));
        }
        // Specific energy f(h) = h + q^2/(2 g h^2); subcritical root has
        // f'(h) = 1 - q^2/(g h^3) > 0, i.e. h > h_crit.
        let f = |h: f64| h + q_in * q_in / (2.0 * g * h * h) - e_spec;
        let df = |h: f64| 1.0 - q_in * q_in / (g * h * h * h);
        let mut h = (e_spec - q_in * q_in / (2.0 * g * e_spec * e_spec)).max(1.001 * h_crit);
        let mut ok = false;
        for _ in 0..100 {
            let fv = f(h);
            if fv.abs() <= 1e-14 * e_spec.max(1.0) {
                ok = true;
                break;
            }
            let d = df(h);
            if d <= 0.0 {
                break;
            }
            let next = h - fv / d;
            h = if next > h_crit { next } else { 0.5 * (h + h_crit) };
        }
        if !ok {
            // f is increasing on (h_crit, inf) with f(h_crit) <= 0.
            let mut lo = h_crit;
            let mut hi = e_spec.max(h_crit * 2.0);
            while f(hi) < 0.0 {
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            h = 0.5 * (lo + hi);
            if f(h).abs() > 1e-10 * e_spec.max(1.0) {
                return Err(SveError::UnsupportedInput(format!(
                    "no subcritical root at cell {i} (residual {:e})",
                    f(h)
                )));
            }
        }
        out.push(CellState::new(h, q_in, b)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::G_DEFAULT as G;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn flat_bed_gives_uniform_depth() {
        let eta = vec![0.0; 10];
        let prof = backwater_profile(0.6263, 1.0, &eta, G).unwrap();
        for c in &prof {
            assert_relative_eq!(c.h, 1.0, max_relative = 1e-12);
            assert_eq!(c.q, 0.6263);
        }
    }

    #[test]
    fn zero_discharge_is_lake_at_rest() {
        let eta: Vec<f64> = (0..20).map(|i| 0.2 * (-((i as f64 - 10.0) / 4.0).powi(2)).exp()).collect();
        let prof = backwater_profile(0.0, 1.0, &eta, G).unwrap();
        let surface0 = prof[0].surface();
        for c in &prof {
            assert_abs_diff_eq!(c.surface(), surface0, epsilon = 1e-13);
            assert_eq!(c.q, 0.0);
        }
    }

    #[test]
    fn hump_profile_dips_and_satisfies_energy() {
        let n = 100;
        let eta: Vec<f64> = (0..n)
            .map(|i| {
                let x = -10.0 + 20.0 * (i as f64 + 0.5) / n as f64;
                0.2 * (-x * x).exp()
            })
            .collect();
        let q = 0.6263;
        let prof = backwater_profile(q, 1.0, &eta, G).unwrap();
        let e_ref = 1.0 + eta[n - 1] + q * q / (2.0 * G);
        let crest = eta
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        // Bernoulli residual at every cell, tight at the crest.
        for c in &prof {
            let e = c.h + c.eta + q * q / (2.0 * G * c.h * c.h);
            assert_abs_diff_eq!(e, e_ref, epsilon = 1e-12);
        }
        // Depth dips over the crest, surface stays subcritical.
        assert!(prof[crest].h < prof[0].h);
        assert!(prof[crest].h < prof[n - 1].h);
        for c in &prof {
            assert!(c.primitives(G).froude < 1.0);
        }
    }

    #[test]
    fn bisection_cross_check() {
        let eta = vec![0.0, 0.1, 0.18, 0.1, 0.0];
        let q = 0.6263;
        let prof = backwater_profile(q, 1.0, &eta, G).unwrap();
        let e_total = 1.0 + q * q / (2.0 * G);
        for (c, &b) in prof.iter().zip(&eta) {
            // independent bisection on the subcritical branch
            let f = |h: f64| h + q * q / (2.0 * G * h * h) - (e_total - b);
            let h_crit = (q * q / G).cbrt();
            let mut lo = h_crit;
            let mut hi = 10.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            assert_relative_eq!(c.h, 0.5 * (lo + hi), max_relative = 1e-10);
        }
    }

    #[test]
    fn choked_flow_rejected() {
        // Bed rises far above the available energy head.
        let eta = vec![0.0, 0.9, 0.0];
        assert!(backwater_profile(0.6263, 1.0, &eta, G).is_err());
    }

    #[test]
    fn supercritical_outlet_rejected() {
        assert!(backwater_profile(5.0, 0.5, &[0.0, 0.0], G).is_err());
    }
}
