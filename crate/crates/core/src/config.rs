//! Run configuration, named experiment presets and the time-marching driver.

use std::time::Instant;

use crate::ader2::{step_second_order_with_source, AenoParams};
use crate::error::{Result, SveError};
use crate::model::{cfl_timestep, BedloadClosure, CellState, FieldState};
use crate::oracles::backwater::backwater_profile;
use crate::oracles::manufactured::{manufactured_state, ManufacturedParams};
use crate::pressure_riemann::StarSolver;
use crate::splitting::{
    apply_boundary, step_first_order_with_source, BoundarySpec, QuadratureRule, SourceFn,
};

/// Analytic forcing `S(x, t)` added to the right-hand side of a run.
#[derive(Debug, Clone)]
pub enum SourceSpec {
    None,
    /// Bed forcing that closes the travelling-wave problem under a physical
    /// transport law: the exact velocity is uniform, so the bedload flux
    /// divergence vanishes and the bed motion `eta_t = c0 w cos(k x - w t)`
    /// must be supplied externally. Water equations need no forcing.
    TravellingBedWave(ManufacturedParams),
}

impl SourceSpec {
    pub fn eval(&self, x: f64, t: f64) -> [f64; 3] {
        match self {
            SourceSpec::None => [0.0; 3],
            SourceSpec::TravellingBedWave(p) => {
                let phase = p.k() * x - p.omega() * t;
                [0.0, 0.0, p.c0 * p.omega() * phase.cos()]
            }
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, SourceSpec::None)
    }
}

/// Complete description of one simulation run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scheme_order: u8,
    pub closure: BedloadClosure,
    pub g: f64,
    pub cfl: f64,
    /// Interior cell count.
    pub m: usize,
    pub x_left: f64,
    pub x_right: f64,
    pub t_final: f64,
    pub bc_left: BoundarySpec,
    pub bc_right: BoundarySpec,
    /// Times at which intermediate snapshots are recorded; the run lands on
    /// them exactly by clipping the time step.
    pub output_times: Vec<f64>,
    pub aeno: AenoParams,
    pub star_solver: StarSolver,
    pub n_gp: usize,
    pub source: SourceSpec,
}

impl RunConfig {
    pub fn n_ghost(&self) -> usize {
        if self.scheme_order == 2 { 2 } else { 1 }
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.m as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scheme_order == 1 || self.scheme_order == 2) {
            return Err(SveError::ConfigError(format!(
                "scheme_order={} not in {{1,2}}",
                self.scheme_order
            )));
        }
        if self.m < 4 + 2 * self.n_ghost() {
            return Err(SveError::ConfigError(format!(
                "M={} below minimum {}",
                self.m,
                4 + 2 * self.n_ghost()
            )));
        }
        if !(self.x_right > self.x_left) {
            return Err(SveError::ConfigError(format!(
                "empty domain [{}, {}]",
                self.x_left, self.x_right
            )));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(SveError::ConfigError(format!("bad T_final={}", self.t_final)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SveError::ConfigError(format!("cfl={} not in (0, 1]", self.cfl)));
        }
        if !(1..=3).contains(&self.n_gp) {
            return Err(SveError::ConfigError(format!("nGP={} not in {{1,2,3}}", self.n_gp)));
        }
        if !(self.aeno.tol > 0.0 && self.aeno.eps > 0.0) {
            return Err(SveError::ConfigError(
                "AENO parameters must be positive".into(),
            ));
        }
        for t in &self.output_times {
            if !(*t >= 0.0 && *t <= self.t_final) {
                return Err(SveError::ConfigError(format!(
                    "output time {t} outside [0, {}]",
                    self.t_final
                )));
            }
        }
        Ok(())
    }
}

/// Named experiment setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Quiescent water over a submerged Gaussian bed hump.
    CProperty,
    /// Travelling-wave convergence study on a periodic domain.
    ConvergenceAeno,
    /// Movable-bed Riemann problem with a slow central shock.
    RiemannMovable,
    /// Fixed-bed dam break over an inert bed.
    RiemannFixed,
    /// Long-term evolution of an erodible hump in subcritical flow.
    HumpLong,
    /// Small bed hump at Fr = 0.99.
    HumpSmallNearCritical,
    /// Small bed hump at Fr = 1.2.
    HumpSmallSupercritical,
}

pub const PRESET_NAMES: [&str; 7] = [
    "c_property",
    "convergence_aeno",
    "riemann_movable",
    "riemann_fixed",
    "hump_long",
    "hump_small_near_critical",
    "hump_small_supercritical",
];

const G: f64 = crate::model::G_DEFAULT;

/// Critical velocity of the threshold transport law, anchored at the
/// reference velocity `u_ref`.
fn threshold_u_cr(u_ref: f64, psi_u: f64, h0: f64, a_g: f64, m: f64) -> f64 {
    u_ref - (psi_u * h0 / (m * a_g)).powf(1.0 / (m - 1.0))
}

fn gaussian_bed(x: f64, eta_max: f64) -> f64 {
    eta_max * (-x * x).exp()
}

impl Preset {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "c_property" => Preset::CProperty,
            "convergence_aeno" => Preset::ConvergenceAeno,
            "riemann_movable" => Preset::RiemannMovable,
            "riemann_fixed" => Preset::RiemannFixed,
            "hump_long" => Preset::HumpLong,
            "hump_small_near_critical" => Preset::HumpSmallNearCritical,
            "hump_small_supercritical" => Preset::HumpSmallSupercritical,
            other => {
                return Err(SveError::ConfigError(format!(
                    "unknown preset '{other}'; expected one of {}",
                    PRESET_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::CProperty => "c_property",
            Preset::ConvergenceAeno => "convergence_aeno",
            Preset::RiemannMovable => "riemann_movable",
            Preset::RiemannFixed => "riemann_fixed",
            Preset::HumpLong => "hump_long",
            Preset::HumpSmallNearCritical => "hump_small_near_critical",
            Preset::HumpSmallSupercritical => "hump_small_supercritical",
        }
    }

    /// Default configuration of the preset.
    pub fn config(&self) -> RunConfig {
        let base = RunConfig {
            scheme_order: 2,
            closure: BedloadClosure::Frozen,
            g: G,
            cfl: 0.9,
            m: 100,
            x_left: -10.0,
            x_right: 10.0,
            t_final: 1.0,
            bc_left: BoundarySpec::Transmissive,
            bc_right: BoundarySpec::Transmissive,
            output_times: vec![],
            aeno: AenoParams::default(),
            star_solver: StarSolver::Linearized,
            n_gp: 1,
            source: SourceSpec::None,
        };
        match self {
            Preset::CProperty => RunConfig {
                scheme_order: 1,
                closure: BedloadClosure::Grass { a_g: 0.01, m: 1.5 },
                t_final: 30.0,
                ..base
            },
            // The travelling wave is an exact solution of the homogeneous
            // system only under the counter-flux law q_b = -q, but that law
            // makes the coefficient matrix defective (double eigenvalue u
            // with one eigenvector), and a von Neumann analysis shows every
            // linearization of the scheme amplifies mid-wavelength modes on
            // such data at any Courant number. The preset therefore runs the
            // physical transport law and closes the problem with the analytic
            // bed forcing of `SourceSpec::TravellingBedWave`; that system is
            // strictly hyperbolic. The supercritical carrier flow (Fr ~ 3.6)
            // still bounds the stable Courant number well below the
            // subcritical one, hence cfl = 0.4 here.
            Preset::ConvergenceAeno => RunConfig {
                closure: BedloadClosure::Grass { a_g: 0.01, m: 1.5 },
                cfl: 0.4,
                m: 1280,
                x_left: 0.0,
                x_right: 500.0,
                t_final: 10.0,
                bc_left: BoundarySpec::Periodic,
                bc_right: BoundarySpec::Periodic,
                aeno: AenoParams { tol: 1e-4, eps: 1.0 },
                source: SourceSpec::TravellingBedWave(ManufacturedParams::reference()),
                ..base
            },
            Preset::RiemannMovable => RunConfig {
                closure: BedloadClosure::Grass { a_g: 0.01, m: 3.0 },
                m: 200,
                x_left: -15.0,
                x_right: 15.0,
                t_final: 2.0,
                ..base
            },
            Preset::RiemannFixed => RunConfig {
                closure: BedloadClosure::Grass { a_g: 0.0, m: 3.0 },
                m: 100,
                x_left: -15.0,
                x_right: 15.0,
                t_final: 2.0,
                ..base
            },
            Preset::HumpLong => {
                let (a_g, m_exp, psi_u, q_in, h0) = (0.01, 1.5, 1e-3, 0.6263, 1.0);
                RunConfig {
                    closure: BedloadClosure::ThresholdGrass {
                        a_g,
                        m: m_exp,
                        u_cr: threshold_u_cr(q_in / h0, psi_u, h0, a_g, m_exp),
                    },
                    t_final: 1000.0,
                    bc_left: BoundarySpec::InflowDischarge { q_in },
                    bc_right: BoundarySpec::FixedDepth { h_out: h0 },
                    aeno: AenoParams { tol: 1e-4, eps: 0.5 },
                    ..base
                }
            }
            Preset::HumpSmallNearCritical | Preset::HumpSmallSupercritical => {
                let fr = if *self == Preset::HumpSmallNearCritical { 0.99 } else { 1.2 };
                let (a_g, m_exp, psi_u, h0) = (0.01, 1.5, 1e-2, 1.0);
                let u_ref = fr * (G * h0).sqrt();
                let q_in = u_ref * h0;
                let closure = BedloadClosure::ThresholdGrass {
                    a_g,
                    m: m_exp,
                    u_cr: threshold_u_cr(u_ref, psi_u, h0, a_g, m_exp),
                };
                let (bc_left, bc_right) = if fr < 1.0 {
                    (
                        BoundarySpec::InflowDischarge { q_in },
                        BoundarySpec::FixedDepth { h_out: h0 },
                    )
                } else {
                    (
                        BoundarySpec::InflowDepthDischarge { h_in: h0, q_in },
                        BoundarySpec::Transmissive,
                    )
                };
                RunConfig { closure, m: 800, t_final: 6.0, bc_left, bc_right, ..base }
            }
        }
    }

    /// Initial field for the preset under the (possibly modified) config.
    pub fn initial_field(&self, cfg: &RunConfig) -> Result<FieldState> {
        cfg.validate()?;
        let dx = cfg.dx();
        let xc = |i: usize| cfg.x_left + (i as f64 + 0.5) * dx;
        let ng = cfg.n_ghost();
        match self {
            Preset::CProperty => {
                // Bed heights snapped to a coarse binary grid so that
                // h = H0 - eta and h + eta = H0 are exact in floating point;
                // the C-property can then be asserted at strict tolerances.
                let h0 = 1.0;
                let quantum = (2.0f64).powi(-20);
                let interior = (0..cfg.m)
                    .map(|i| {
                        let eta =
                            (gaussian_bed(xc(i), 0.2) / quantum).round() * quantum;
                        CellState::new(h0 - eta, 0.0, eta)
                    })
                    .collect::<Result<Vec<_>>>()?;
                FieldState::from_interior(interior, dx, cfg.x_left, ng)
            }
            Preset::ConvergenceAeno => {
                let p = ManufacturedParams::reference();
                let interior = (0..cfg.m)
                    .map(|i| manufactured_state(xc(i), 0.0, &p).0)
                    .collect();
                FieldState::from_interior(interior, dx, cfg.x_left, ng)
            }
            Preset::RiemannMovable => {
                let left = CellState::new(2.0, 0.5, 3.0)?;
                let right = CellState::new(2.0, 4.34297, 2.84751)?;
                let interior =
                    (0..cfg.m).map(|i| if xc(i) < 0.0 { left } else { right }).collect();
                FieldState::from_interior(interior, dx, cfg.x_left, ng)
            }
            Preset::RiemannFixed => {
                let left = CellState::new(1.0, 0.0, 0.0)?;
                let right = CellState::new(0.1, 0.0, 0.0)?;
                let interior =
                    (0..cfg.m).map(|i| if xc(i) < 0.0 { left } else { right }).collect();
                FieldState::from_interior(interior, dx, cfg.x_left, ng)
            }
            Preset::HumpLong => {
                let bed: Vec<f64> = (0..cfg.m).map(|i| gaussian_bed(xc(i), 0.2)).collect();
                let interior = backwater_profile(0.6263, 1.0, &bed, cfg.g)?;
                FieldState::from_interior(interior, dx, cfg.x_left, ng)
            }
            Preset::HumpSmallNearCritical => {
                let q_in = 0.99 * (cfg.g * 1.0f64).sqrt();
                let bed: Vec<f64> = (0..cfg.m).map(|i| gaussian_bed(xc(i), 1e-5)).collect();
                let interior = backwater_profile(q_in, 1.0, &bed, cfg.g)?;
                let f = FieldState::from_interior(interior, dx, cfg.x_left, ng)?;
                spin_up_fixed_bed(cfg, f, 1e-10, 20_000)
            }
            Preset::HumpSmallSupercritical => {
                let q_in = 1.2 * (cfg.g * 1.0f64).sqrt();
                let interior = (0..cfg.m)
                    .map(|i| CellState::new(1.0, q_in, gaussian_bed(xc(i), 1e-5)))
                    .collect::<Result<Vec<_>>>()?;
                let f = FieldState::from_interior(interior, dx, cfg.x_left, ng)?;
                spin_up_fixed_bed(cfg, f, 1e-10, 20_000)
            }
        }
    }
}

/// Run the fixed-bed scheme on `init` until the discharge field is steady
/// (max per-cell change below `tol` relative per step) or `max_steps` is hit,
/// then reset the clock. Used to prepare quasi-steady initial conditions.
pub fn spin_up_fixed_bed(
    cfg: &RunConfig,
    init: FieldState,
    tol: f64,
    max_steps: usize,
) -> Result<FieldState> {
    let mut frozen = cfg.clone();
    frozen.closure = BedloadClosure::Frozen;
    let quad = QuadratureRule::new(frozen.n_gp)?;
    let mut f = init;
    let q_scale = f
        .interior()
        .iter()
        .map(|c| c.q.abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    for _ in 0..max_steps {
        apply_boundary(&mut f, &frozen.bc_left, &frozen.bc_right)?;
        let dt = cfl_timestep(&f, frozen.cfl, frozen.g)?;
        let next = advance(&frozen, &f, dt, &quad)?;
        let residual = f
            .interior()
            .iter()
            .zip(next.interior())
            .map(|(a, b)| (a.q - b.q).abs())
            .fold(0.0f64, f64::max);
        f = next;
        if residual <= tol * q_scale {
            break;
        }
    }
    f.t = 0.0;
    Ok(f)
}

fn advance(cfg: &RunConfig, f: &FieldState, dt: f64, quad: &QuadratureRule) -> Result<FieldState> {
    let eval = |x: f64, t: f64| cfg.source.eval(x, t);
    let source: Option<SourceFn> = if cfg.source.is_none() { None } else { Some(&eval) };
    if cfg.scheme_order == 2 {
        step_second_order_with_source(
            f, dt, &cfg.closure, quad, cfg.g, cfg.star_solver, &cfg.aeno, source,
        )
    } else {
        step_first_order_with_source(f, dt, &cfg.closure, quad, cfg.g, cfg.star_solver, source)
    }
}

/// Result of one simulation.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub final_field: FieldState,
    /// Intermediate states at the requested output times.
    pub snapshots: Vec<(f64, FieldState)>,
    pub steps: usize,
    pub cpu_seconds: f64,
}

/// March `init` to `cfg.t_final`, landing exactly on each output time.
pub fn simulate(cfg: &RunConfig, init: FieldState) -> Result<RunOutput> {
    cfg.validate()?;
    if init.n_interior() != cfg.m {
        return Err(SveError::ConfigError(format!(
            "initial field has {} cells, config expects {}",
            init.n_interior(),
            cfg.m
        )));
    }
    let quad = QuadratureRule::new(cfg.n_gp)?;
    let mut targets: Vec<f64> = cfg.output_times.clone();
    targets.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let started = Instant::now();

    let mut f = init;
    let mut snapshots = Vec::new();
    let mut next_target = 0usize;
    let mut steps = 0usize;
    const TIME_EPS: f64 = 1e-12;
    const MAX_STEPS: usize = 50_000_000;

    while snapshots.len() < targets.len()
        && (targets[next_target] - f.t).abs() <= TIME_EPS * cfg.t_final.max(1.0)
    {
        snapshots.push((targets[next_target], f.clone()));
        next_target += 1;
    }

    while f.t < cfg.t_final - TIME_EPS * cfg.t_final.max(1.0) {
        if steps >= MAX_STEPS {
            return Err(SveError::ConfigError(format!(
                "step budget exhausted at t={}",
                f.t
            )));
        }
        apply_boundary(&mut f, &cfg.bc_left, &cfg.bc_right)?;
        let mut dt = cfl_timestep(&f, cfg.cfl, cfg.g)?;
        if next_target < targets.len() {
            dt = dt.min(targets[next_target] - f.t);
        }
        dt = dt.min(cfg.t_final - f.t);
        f = advance(cfg, &f, dt, &quad)?;
        steps += 1;
        while next_target < targets.len()
            && (targets[next_target] - f.t).abs() <= TIME_EPS * cfg.t_final.max(1.0)
        {
            snapshots.push((targets[next_target], f.clone()));
            next_target += 1;
        }
    }

    Ok(RunOutput {
        final_field: f,
        snapshots,
        steps,
        cpu_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Build the preset's initial field and simulate it under `cfg`.
pub fn run_preset(preset: Preset, cfg: &RunConfig) -> Result<RunOutput> {
    let init = preset.initial_field(cfg)?;
    simulate(cfg, init)
}

/// Convergence study of the travelling-wave preset: run `template` on each
/// grid in `ms` (a doubling sequence) and report errors in (h, q, eta)
/// against the exact solution at the final time.
pub fn manufactured_convergence(
    template: &RunConfig,
    ms: &[usize],
) -> Result<crate::oracles::norms::ErrorReport> {
    use crate::oracles::norms::{error_norms, ErrorReport, ErrorRow};
    let p = ManufacturedParams::reference();
    let mut report = ErrorReport::default();
    for &m in ms {
        let mut cfg = template.clone();
        cfg.m = m;
        let out = run_preset(Preset::ConvergenceAeno, &cfg)?;
        let f = &out.final_field;
        let mut num = [Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m)];
        let mut exact = [Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m)];
        for (i, c) in f.interior().iter().enumerate() {
            let (e, _) = manufactured_state(f.x_center(i), f.t, &p);
            num[0].push(c.h);
            num[1].push(c.q);
            num[2].push(c.eta);
            exact[0].push(e.h);
            exact[1].push(e.q);
            exact[2].push(e.eta);
        }
        let norms = [
            error_norms(&num[0], &exact[0], f.dx)?,
            error_norms(&num[1], &exact[1], f.dx)?,
            error_norms(&num[2], &exact[2], f.dx)?,
        ];
        report.push(ErrorRow { m, norms, cpu_seconds: out.cpu_seconds })?;
    }
    Ok(report)
}
