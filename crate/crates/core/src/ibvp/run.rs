use serde::Serialize;

use super::config::SolverConfig;
use super::monitors::{monitor, MonitorRecord};
use super::rhs::{reduced_rhs, residual_norm};
use super::step::{make_initial, Stepper};
use crate::error::Result;
use crate::geometry::{limit_coefficients, StationaryCoeffs};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub t: f64,
    pub psi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyReport {
    pub converged: bool,
    pub t_final: f64,
    pub steps: u64,
    pub final_residual: f64,
    pub limit: StationaryCoeffs,
    pub linf_to_limit: f64,
    pub final_sup_sigma: f64,
    /// Log–log slope of `sup|σ|` against `t` over the last decade above the floor.
    pub sigma_decay_slope: Option<f64>,
    #[serde(skip)]
    pub thetas: Vec<f64>,
    #[serde(skip)]
    pub final_profile: Vec<f64>,
    #[serde(skip)]
    pub records: Vec<MonitorRecord>,
    #[serde(skip)]
    pub snapshots: Vec<Snapshot>,
}

impl SteadyReport {
    pub fn initial_record(&self) -> &MonitorRecord {
        &self.records[0]
    }
}

/// Least-squares slope of `log sup|σ|` against `log t` over the final decade of
/// samples whose shear still exceeds `floor`.
pub fn decay_slope(records: &[MonitorRecord], floor: f64) -> Option<f64> {
    let above: Vec<&MonitorRecord> = records
        .iter()
        .filter(|r| r.t > 0.0 && r.sup_sigma > floor)
        .collect();
    let t_last = above.last()?.t;
    let pts: Vec<(f64, f64)> = above
        .iter()
        .filter(|r| r.t >= t_last / 10.0)
        .map(|r| (r.t.ln(), r.sup_sigma.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), p| {
        (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2))
    });
    Some(num / den)
}

/// Integrates until the steady residual drops below `tol_steady`, `t_end` or `max_steps`.
pub fn run(cfg: &SolverConfig) -> Result<SteadyReport> {
    run_observed(cfg, |_, _| {})
}

/// As [`run`], calling `observe(t, ψ)` at every monitor record.
pub fn run_observed(
    cfg: &SolverConfig,
    mut observe: impl FnMut(f64, &[f64]),
) -> Result<SteadyReport> {
    let stepper = Stepper::new(cfg)?;
    let ctx = &stepper.ctx;
    let mut psi = make_initial(cfg)?;
    let mut t = 0.0;
    let mut steps = 0u64;
    let mut rhs = reduced_rhs(&psi, ctx, t)?;
    let mut res = residual_norm(&rhs, ctx);
    let mut records = vec![monitor(&psi, ctx, t, res)];
    observe(t, &psi);
    let mut snapshots = vec![Snapshot {
        t,
        psi: psi.clone(),
    }];
    let mut j = 0usize;
    let converged = loop {
        if res <= cfg.tol_steady {
            break true;
        }
        if t >= cfg.t_end || steps >= cfg.max_steps {
            break false;
        }
        let next = cfg.monitors.time(j).min(cfg.t_end);
        let dt_stable = stepper.stable_dt(&psi)?;
        let (dt, hit) = if t + dt_stable >= next {
            (next - t, true)
        } else {
            (dt_stable, false)
        };
        stepper.step(&mut psi, &rhs, dt, t)?;
        steps += 1;
        t = if hit { next } else { t + dt };
        rhs = reduced_rhs(&psi, ctx, t)?;
        res = residual_norm(&rhs, ctx);
        if hit {
            records.push(monitor(&psi, ctx, t, res));
            observe(t, &psi);
            if j.is_multiple_of(cfg.monitors.per_decade) {
                snapshots.push(Snapshot {
                    t,
                    psi: psi.clone(),
                });
            }
            j += 1;
        }
    };
    if records.last().map(|r| r.t) != Some(t) {
        records.push(monitor(&psi, ctx, t, res));
        observe(t, &psi);
    }
    if snapshots.last().map(|s| s.t) != Some(t) {
        snapshots.push(Snapshot {
            t,
            psi: psi.clone(),
        });
    }
    let limit = limit_coefficients(cfg.theta0, cfg.c0, cfg.c1)?;
    let linf = ctx
        .thetas
        .iter()
        .zip(&psi)
        .map(|(&th, &v)| (v - limit.value(th)).abs())
        .fold(0.0, f64::max);
    let final_sup_sigma = records.last().map_or(0.0, |r| r.sup_sigma);
    Ok(SteadyReport {
        converged,
        t_final: t,
        steps,
        final_residual: res,
        limit,
        linf_to_limit: linf,
        final_sup_sigma,
        sigma_decay_slope: decay_slope(&records, 2.0 * final_sup_sigma),
        thetas: ctx.thetas.clone(),
        final_profile: psi,
        records,
        snapshots,
    })
}
