//! Domain types, bedload closures, eigenstructure diagnostics and the CFL rule.
//!
//! The conserved vector is `Q = [h, q, eta]`: water depth, discharge per unit
//! width and bed elevation. Dry states (`h <= 0`) are outside the scope of the
//! solver and are rejected at construction.

use crate::error::{Result, SveError};

/// Gravitational acceleration [m/s^2] used by all presets.
pub const G_DEFAULT: f64 = 9.806;

/// Conserved variables of one cell: depth `h` [m], discharge `q` [m^2/s] and
/// bed elevation `eta` [m].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellState {
    pub h: f64,
    pub q: f64,
    pub eta: f64,
}

impl CellState {
    pub fn new(h: f64, q: f64, eta: f64) -> Result<Self> {
        if !(h.is_finite() && q.is_finite() && eta.is_finite()) {
            return Err(SveError::InvalidState(format!(
                "non-finite state (h={h}, q={q}, eta={eta})"
            )));
        }
        if h <= 0.0 {
            return Err(SveError::InvalidState(format!("non-positive depth h={h}")));
        }
        Ok(Self { h, q, eta })
    }

    /// Flow velocity u = q/h.
    pub fn velocity(&self) -> f64 {
        self.q / self.h
    }

    /// Free surface elevation H = h + eta.
    pub fn surface(&self) -> f64 {
        self.h + self.eta
    }

    pub fn primitives(&self, g: f64) -> PrimitiveState {
        let u = self.q / self.h;
        let c = (g * self.h).sqrt();
        PrimitiveState {
            h: self.h,
            u,
            eta: self.eta,
            c,
            froude: u / c,
        }
    }
}

/// Primitive view of a cell state: velocity, celerity and Froude number.
#[derive(Debug, Clone, Copy)]
pub struct PrimitiveState {
    pub h: f64,
    pub u: f64,
    pub eta: f64,
    pub c: f64,
    pub froude: f64,
}

/// Bedload transport closure `q_b(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BedloadClosure {
    /// Grass power law `q_b = A_g u^m` (odd in u: sign(u) |u|^m).
    Grass { a_g: f64, m: f64 },
    /// Grass law with a critical velocity: `q_b = A_g max(u - u_cr, 0)^m`.
    ThresholdGrass { a_g: f64, m: f64, u_cr: f64 },
    /// `q_b = -q`; makes the manufactured solution exact.
    CounterFlux,
    /// Fixed bed, `q_b = 0`.
    Frozen,
}

impl BedloadClosure {
    /// Bedload flux q_b for velocity `u` and depth `h`.
    pub fn bedload_flux(&self, u: f64, h: f64) -> Result<f64> {
        if !u.is_finite() {
            return Err(SveError::InvalidState(format!("non-finite velocity u={u}")));
        }
        Ok(match *self {
            BedloadClosure::Grass { a_g, m } => a_g * u.signum() * u.abs().powf(m),
            BedloadClosure::ThresholdGrass { a_g, m, u_cr } => {
                a_g * (u - u_cr).max(0.0).powf(m)
            }
            BedloadClosure::CounterFlux => -u * h,
            BedloadClosure::Frozen => 0.0,
        })
    }

    /// Bedload intensity `psi = dq_b/dq`, evaluated analytically.
    pub fn psi(&self, u: f64, h: f64) -> Result<f64> {
        if !u.is_finite() {
            return Err(SveError::InvalidState(format!("non-finite velocity u={u}")));
        }
        Ok(match *self {
            BedloadClosure::Grass { a_g, m } => m * a_g * u.abs().powf(m - 1.0) / h,
            BedloadClosure::ThresholdGrass { a_g, m, u_cr } => {
                m * a_g * (u - u_cr).max(0.0).powf(m - 1.0) / h
            }
            BedloadClosure::CounterFlux => -1.0,
            BedloadClosure::Frozen => 0.0,
        })
    }

    /// Ratio q_b / q with the u -> 0 limit defined as 0; used by the upwind
    /// advection flux (third component).
    pub fn flux_ratio(&self, u: f64, h: f64) -> Result<f64> {
        match *self {
            BedloadClosure::Grass { a_g, m } => Ok(a_g * u.abs().powf(m - 1.0) / h),
            BedloadClosure::CounterFlux => Ok(-1.0),
            _ => {
                if u == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(self.bedload_flux(u, h)? / (u * h))
                }
            }
        }
    }
}

/// Grid of cell states with `n_ghost` ghost cells on each side.
#[derive(Debug, Clone)]
pub struct FieldState {
    /// All cells, ghosts included: `[ghosts | interior | ghosts]`.
    pub cells: Vec<CellState>,
    pub dx: f64,
    /// Left edge coordinate of the interior domain.
    pub x0: f64,
    pub n_ghost: usize,
    pub t: f64,
}

impl FieldState {
    /// Build from interior cells; ghost cells start as copies of the nearest
    /// interior cell and are overwritten by the boundary treatment.
    pub fn from_interior(
        interior: Vec<CellState>,
        dx: f64,
        x0: f64,
        n_ghost: usize,
    ) -> Result<Self> {
        if dx <= 0.0 {
            return Err(SveError::InvalidState(format!("non-positive dx={dx}")));
        }
        if !(n_ghost == 1 || n_ghost == 2) {
            return Err(SveError::InvalidState(format!("n_ghost={n_ghost} not in {{1,2}}")));
        }
        if interior.is_empty() {
            return Err(SveError::InvalidState("empty interior".into()));
        }
        let first = interior[0];
        let last = *interior.last().unwrap();
        let mut cells = Vec::with_capacity(interior.len() + 2 * n_ghost);
        cells.extend(std::iter::repeat(first).take(n_ghost));
        cells.extend(interior);
        cells.extend(std::iter::repeat(last).take(n_ghost));
        Ok(Self { cells, dx, x0, n_ghost, t: 0.0 })
    }

    pub fn n_interior(&self) -> usize {
        self.cells.len() - 2 * self.n_ghost
    }

    pub fn interior(&self) -> &[CellState] {
        &self.cells[self.n_ghost..self.cells.len() - self.n_ghost]
    }

    /// Center coordinate of interior cell `i` (0-based over the interior).
    pub fn x_center(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }
}

/// The three sorted real eigenvalues of the full SVE coefficient matrix.
#[derive(Debug, Clone, Copy)]
pub struct Eigenvalues3 {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl Eigenvalues3 {
    pub fn as_array(&self) -> [f64; 3] {
        [self.lambda1, self.lambda2, self.lambda3]
    }
}

/// Characteristic polynomial of the full system coefficient matrix,
/// `p(l) = l^3 - 2u l^2 + (u^2 - (psi+1) g h) l + u g h psi`.
pub fn characteristic_polynomial(lambda: f64, u: f64, h: f64, psi: f64, g: f64) -> f64 {
    lambda * lambda * lambda - 2.0 * u * lambda * lambda
        + (u * u - (psi + 1.0) * g * h) * lambda
        + u * g * h * psi
}

/// Eigenvalues of the full SVE system, for diagnostics only. The splitting
/// scheme itself never needs them.
pub fn full_system_eigenvalues(
    s: &CellState,
    closure: &BedloadClosure,
    g: f64,
) -> Result<Eigenvalues3> {
    let u = s.velocity();
    let psi = closure.psi(u, s.h)?;
    let gh = g * s.h;

    // p(l) = l^3 + a2 l^2 + a1 l + a0
    let a2 = -2.0 * u;
    let a1 = u * u - (psi + 1.0) * gh;
    let a0 = u * gh * psi;

    // Depressed cubic t^3 + p t + q with l = t - a2/3.
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;

    let scale = (u.abs().powi(3)).max(gh.powf(1.5)).max(1.0);
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    if disc < -1e-12 * scale * scale {
        return Err(SveError::EigenvalueFailure(format!(
            "complex roots detected (discriminant {disc:e}) for u={u}, h={}, psi={psi}",
            s.h
        )));
    }

    let mut roots = if p.abs() < 1e-300 {
        let r = (-q).cbrt() - shift;
        [r, r, r]
    } else {
        // Trigonometric form for three real roots.
        let m = 2.0 * (-p / 3.0).max(0.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut r = [0.0f64; 3];
        for (k, rk) in r.iter_mut().enumerate() {
            *rk =
                m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift;
        }
        r
    };

    // Newton polish.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = characteristic_polynomial(*r, u, s.h, psi, g);
            let df = 3.0 * *r * *r + 2.0 * a2 * *r + a1;
            if df.abs() > 0.0 {
                let step = f / df;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

    for r in &roots {
        let res = characteristic_polynomial(*r, u, s.h, psi, g).abs();
        if res > 1e-9 * scale {
            return Err(SveError::EigenvalueFailure(format!(
                "root {r} has residual {res:e} above tolerance"
            )));
        }
    }
    Ok(Eigenvalues3 { lambda1: roots[0], lambda2: roots[1], lambda3: roots[2] })
}

/// Coefficient matrix of the pressure subsystem, rows
/// `[0 1 0; c^2 0 c^2; 0 0 0]` with `c^2 = g h`.
pub fn pressure_matrix(s: &CellState, g: f64) -> [[f64; 3]; 3] {
    let c2 = g * s.h;
    [[0.0, 1.0, 0.0], [c2, 0.0, c2], [0.0, 0.0, 0.0]]
}

/// Apply the pressure matrix at depth `h` to a state increment.
#[inline]
pub fn pressure_apply(h: f64, g: f64, dq: [f64; 3]) -> [f64; 3] {
    [dq[1], g * h * (dq[0] + dq[2]), 0.0]
}

/// Maximum fixed-bed wave speed `|q|/h + sqrt(g h)`.
pub fn max_fixed_bed_speed(s: &CellState, g: f64) -> f64 {
    s.q.abs() / s.h + (g * s.h).sqrt()
}

/// CFL time step `cfl * dx / max_i lambda_Hi` over the interior cells.
pub fn cfl_timestep(f: &FieldState, cfl: f64, g: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(SveError::ConfigError(format!("cfl={cfl} not in (0, 1]")));
    }
    let max_speed = f
        .interior()
        .iter()
        .map(|s| max_fixed_bed_speed(s, g))
        .fold(0.0f64, f64::max);
    if max_speed <= 0.0 {
        return Err(SveError::InvalidState("zero maximum wave speed".into()));
    }
    Ok(cfl * f.dx / max_speed)
}
