//! Per-sample diagnostics: gradient quantity `u = ψ′/sin 2θ`, shear,
//! curvature quantity `B = ψ″/(sin 2θ·(ψ′)^{2/3})`, residual and boundary values.

use serde::Serialize;

use super::config::SolverConfig;
use super::rhs::RhsContext;
use crate::grid::{first_derivative, second_derivative};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonitorRecord {
    pub t: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub sup_sigma: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub steady_residual: f64,
    pub boundary_slope: f64,
    pub axis_value: f64,
    pub psi_min: f64,
    pub psi_max: f64,
}

/// Monitors over nodes `1..=n`; the axis node is excluded since `u`, `B`
/// and, for positive axis values, `σ` are limits or singular there.
pub fn monitor(psi: &[f64], ctx: &RhsContext, t: f64, residual: f64) -> MonitorRecord {
    let n = ctx.n();
    let d1 = first_derivative(psi, ctx.h);
    let d2 = second_derivative(psi, ctx.h);
    let mut r = MonitorRecord {
        t,
        u_min: f64::INFINITY,
        u_max: f64::NEG_INFINITY,
        sup_sigma: 0.0,
        b_min: f64::INFINITY,
        b_max: f64::NEG_INFINITY,
        steady_residual: residual,
        boundary_slope: d1[n],
        axis_value: psi[0],
        psi_min: psi.iter().copied().fold(f64::INFINITY, f64::min),
        psi_max: psi.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    for i in 1..=n {
        let th = ctx.thetas[i];
        let s2 = (2.0 * th).sin();
        let u = d1[i] / s2;
        r.u_min = r.u_min.min(u);
        r.u_max = r.u_max.max(u);
        if psi[i] > 0.0 {
            let sig = (d1[i] - 2.0 * psi[i] / th.tan()).abs() / (2.0 * psi[i].sqrt());
            r.sup_sigma = r.sup_sigma.max(sig);
        }
        let b = d2[i] / (s2 * d1[i].abs().cbrt().powi(2));
        r.b_min = r.b_min.min(b);
        r.b_max = r.b_max.max(b);
    }
    r
}

/// `u` implied by the configured Neumann slope at θ₀.
pub fn boundary_u(cfg: &SolverConfig) -> f64 {
    cfg.neumann_slope() / (2.0 * cfg.theta0).sin()
}

/// `B` at θ₀ when the Neumann slope holds and the equation is stationary there,
/// `ψ″ = k·cot 2θ₀·ψ′`.
pub fn boundary_b(cfg: &SolverConfig) -> f64 {
    let s = cfg.neumann_slope();
    let t2 = 2.0 * cfg.theta0;
    cfg.k * s.cbrt() / (t2.tan() * t2.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformGrid;

    #[test]
    fn holomorphic_profile_monitors() {
        let grid = UniformGrid::new(0.3, 400).unwrap();
        let ctx = RhsContext::new(grid, 2.0, true);
        let psi: Vec<f64> = grid.nodes().iter().map(|t| 2.0 * t.sin().powi(2)).collect();
        let m = monitor(&psi, &ctx, 0.0, 0.0);
        // u ≡ 2 and σ ≡ 0 up to truncation
        assert!((m.u_min - 2.0).abs() < 1e-5 && (m.u_max - 2.0).abs() < 1e-5);
        assert!(m.sup_sigma < 1e-5);
        assert_eq!(m.axis_value, 0.0);
        let cfg = SolverConfig::default();
        assert!((boundary_u(&cfg) - 2.0).abs() < 1e-14);
    }
}
