use super::config::{BoundaryMode, InitialKind, Scheme, SolverConfig};
use super::rhs::{check_node, interior_slope, reduced_rhs, RhsContext};
use super::tridiag::solve_tridiagonal;
use crate::error::{Error, Result};
use crate::geometry::limit_coefficients;
use std::f64::consts::PI;

/// Initial data on the solver grid, boundary conditions applied.
pub fn make_initial(cfg: &SolverConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let thetas = cfg.grid()?.nodes();
    let lim = limit_coefficients(cfg.theta0, cfg.c0, cfg.c1)?;
    let axis_shift = match cfg.axis_value {
        Some(v) => v - cfg.limit_axis_value(),
        None => 0.0,
    };
    let t0 = cfg.theta0;
    let base = |t: f64| lim.value(t) + axis_shift * (0.5 * PI * t / t0).cos().powi(2);
    let mut psi: Vec<f64> = match &cfg.initial {
        InitialKind::Limit => thetas.iter().map(|&t| base(t)).collect(),
        InitialKind::Perturbed { amplitude } => thetas
            .iter()
            .map(|&t| base(t) + amplitude * (PI * t / t0).sin().powi(2))
            .collect(),
        InitialKind::Custom { values } => values.clone(),
    };
    // round-off around the exact axis zero
    let scale = lim.a.abs() + lim.b.abs();
    for v in psi.iter_mut() {
        if *v < 0.0 && *v > -1e-14 * scale {
            *v = 0.0;
        }
    }
    if cfg.axis_pinned() && !matches!(cfg.initial, InitialKind::Custom { .. }) {
        psi[0] = 0.0;
    }
    if let Some((node, &value)) = psi.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::NegativeProfile { node, value });
    }
    if cfg.axis_pinned() && psi[0] != 0.0 {
        return Err(Error::Config(format!(
            "pinned axis needs ψ(0) = 0, initial data has {}",
            psi[0]
        )));
    }
    apply_boundary(&mut psi, cfg);
    Ok(psi)
}

/// Boundary rows: pinned axis and the configured condition at θ₀.
pub fn apply_boundary(psi: &mut [f64], cfg: &SolverConfig) {
    let n = psi.len() - 1;
    if cfg.axis_pinned() {
        psi[0] = 0.0;
    }
    match cfg.boundary_mode {
        BoundaryMode::DirichletPinned => psi[n] = cfg.c0,
        BoundaryMode::NeumannEnforced => {
            let h = cfg.spacing();
            psi[n] = (2.0 * h * cfg.neumann_slope() + 4.0 * psi[n - 1] - psi[n - 2]) / 3.0;
        }
    }
}

/// Explicit stability bound `dt_safety·h²·min(ψ′/√ψ)/2` over interior nodes.
pub fn explicit_dt(psi: &[f64], ctx: &RhsContext, safety: f64) -> Result<f64> {
    let n = ctx.n();
    let mut m = f64::INFINITY;
    for i in 1..n {
        let d1 = interior_slope(psi, ctx, i)?;
        m = m.min(d1 / psi[i].sqrt());
    }
    Ok(safety * ctx.h * ctx.h * m / 2.0)
}

/// Time integrator for one configured run.
#[derive(Debug, Clone)]
pub struct Stepper {
    pub cfg: SolverConfig,
    pub ctx: RhsContext,
}

impl Stepper {
    pub fn new(cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            ctx: RhsContext::new(cfg.grid()?, cfg.k, cfg.axis_pinned()),
            cfg: cfg.clone(),
        })
    }

    pub fn stable_dt(&self, psi: &[f64]) -> Result<f64> {
        let dt = explicit_dt(psi, &self.ctx, self.cfg.dt_safety)?;
        Ok(match self.cfg.scheme {
            Scheme::ExplicitRk2 => dt,
            Scheme::SemiImplicit => dt * self.cfg.implicit_dt_multiplier,
        })
    }

    /// Advances `psi` by `dt`; `rhs` is the right-hand side at the current state.
    pub fn step(&self, psi: &mut Vec<f64>, rhs: &[f64], dt: f64, t: f64) -> Result<()> {
        match self.cfg.scheme {
            Scheme::ExplicitRk2 => self.heun(psi, rhs, dt, t),
            Scheme::SemiImplicit => self.semi_implicit(psi, rhs, dt, t),
        }?;
        for i in 0..psi.len() {
            check_node(psi, i, t + dt)?;
        }
        Ok(())
    }

    fn heun(&self, psi: &mut [f64], rhs: &[f64], dt: f64, t: f64) -> Result<()> {
        let mut stage: Vec<f64> = psi.iter().zip(rhs).map(|(p, r)| p + dt * r).collect();
        apply_boundary(&mut stage, &self.cfg);
        let r2 = reduced_rhs(&stage, &self.ctx, t + dt)?;
        for i in 0..psi.len() {
            psi[i] += 0.5 * dt * (rhs[i] + r2[i]);
        }
        apply_boundary(psi, &self.cfg);
        Ok(())
    }

    /// Diffusion implicit with the coefficient `√ψ/ψ′` lagged, drift explicit.
    fn semi_implicit(&self, psi: &mut Vec<f64>, rhs: &[f64], dt: f64, _t: f64) -> Result<()> {
        let ctx = &self.ctx;
        let n = ctx.n();
        let h2 = ctx.h * ctx.h;
        let mut a = vec![0.0; n + 1];
        let mut b = vec![1.0; n + 1];
        let mut c = vec![0.0; n + 1];
        let mut d = vec![0.0; n + 1];
        for i in 1..n {
            let root = psi[i].sqrt();
            let diff = root / interior_slope(psi, ctx, i)?;
            let r = dt * diff / h2;
            a[i] = -r;
            b[i] = 1.0 + 2.0 * r;
            c[i] = -r;
            d[i] = psi[i] - dt * ctx.k * root * ctx.cot2[i];
        }
        d[0] = psi[0] + dt * rhs[0];
        let mut next = psi.clone();
        apply_boundary(&mut next, &self.cfg);
        d[n] = next[n];
        *psi = solve_tridiagonal(&a, &b, &c, &d)?;
        apply_boundary(psi, &self.cfg);
        Ok(())
    }
}
