//! First-order centered reference scheme for the full coupled system.
//!
//! A deliberately simple Rusanov-type method used only to order schemes by
//! numerical diffusion and to cross-check wave positions. Conservative fluxes
//! are centered averages with dissipation on the free-surface jump (depth
//! equation), the discharge jump (momentum) and the bed jump scaled by the
//! local bedload intensity (bed equation); the non-conservative term
//! `g h d_x eta` is discretized with interface-averaged depths. Lake-at-rest
//! data is a fixed point: all jumps vanish and the bed term cancels the
//! hydrostatic pressure gradient exactly in the algebraic sense.

use crate::error::{Result, SveError};
use crate::model::{max_fixed_bed_speed, BedloadClosure, CellState, FieldState};

/// One step of the centered reference scheme. Ghost cells must be filled.
/// `bed_dissipation` scales the Rusanov coefficient of the bed equation;
/// 1.0 is the default calibration.
pub fn reference_centered_step(
    f: &FieldState,
    dt: f64,
    closure: &BedloadClosure,
    g: f64,
    bed_dissipation: f64,
) -> Result<FieldState> {
    let ng = f.n_ghost;
    let n = f.cells.len();
    let n_int = n - 2 * ng;

    struct Iface {
        flux: [f64; 3],
        /// g h_bar (eta_R - eta_L), the interface share of the bed term.
        bed_term: f64,
    }

    let first_iface = ng - 1;
    let last_iface = n - ng - 1;
    let mut interfaces = Vec::with_capacity(last_iface - first_iface + 1);
    for j in first_iface..=last_iface {
        let l = &f.cells[j];
        let r = &f.cells[j + 1];
        let ul = l.velocity();
        let ur = r.velocity();
        let qb_l = closure.bedload_flux(ul, l.h)?;
        let qb_r = closure.bedload_flux(ur, r.h)?;
        let s = max_fixed_bed_speed(l, g).max(max_fixed_bed_speed(r, g));
        let psi = closure.psi(ul, l.h)?.abs().max(closure.psi(ur, r.h)?.abs());
        let s_bed = bed_dissipation * s * psi;

        let flux = [
            0.5 * (l.q + r.q) - 0.5 * s * (r.surface() - l.surface()),
            0.5 * (l.q * ul + 0.5 * g * l.h * l.h + r.q * ur + 0.5 * g * r.h * r.h)
                - 0.5 * s * (r.q - l.q),
            0.5 * (qb_l + qb_r) - 0.5 * s_bed * (r.eta - l.eta),
        ];
        let bed_term = g * 0.5 * (l.h + r.h) * (r.eta - l.eta);
        interfaces.push(Iface { flux, bed_term });
    }

    let mut out = f.clone();
    let lam = dt / f.dx;
    for i in 0..n_int {
        let cell = f.cells[ng + i];
        let rif = &interfaces[i + 1];
        let lif = &interfaces[i];
        let h = cell.h - lam * (rif.flux[0] - lif.flux[0]);
        let q = cell.q
            - lam * (rif.flux[1] - lif.flux[1])
            - lam * 0.5 * (rif.bed_term + lif.bed_term);
        let eta = cell.eta - lam * (rif.flux[2] - lif.flux[2]);
        if !(h > 0.0) || !h.is_finite() || !q.is_finite() || !eta.is_finite() {
            return Err(SveError::PositivityFailure { cell: i, time: f.t + dt, depth: h });
        }
        out.cells[ng + i] = CellState { h, q, eta };
    }
    out.t = f.t + dt;
    Ok(out)
}
