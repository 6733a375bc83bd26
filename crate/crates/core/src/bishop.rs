//! One-parameter families of discs with boundary on a fixed congruence
//! `ψ̃(ϑ)`, evolved leaf by leaf towards the filling by holomorphic discs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{limit_coefficients, line_to_euclidean, OrientedLine, PsiProfile};
use crate::grid::UniformGrid;
use crate::ibvp::{run_observed, InitialKind, SolverConfig, SteadyReport};
use crate::parallel::{map_indexed, Execution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum AmbientKind {
    /// `ψ̃ = tan²ϑ`.
    Tan2,
    /// `ψ̃ = 2sin²ϑ`, the holomorphic surface; always rejected.
    Sin2,
    /// Tabulated `ψ̃` on strictly increasing `vartheta`.
    Table { vartheta: Vec<f64>, psi: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbientCongruence {
    pub kind: AmbientKind,
    pub vartheta0: f64,
}

/// Isolation is tested on this many samples of `(0, ϑ₀]`.
const AMBIENT_SAMPLES: usize = 200;

impl AmbientCongruence {
    pub fn psi(&self, v: f64) -> f64 {
        match &self.kind {
            AmbientKind::Tan2 => v.tan().powi(2),
            AmbientKind::Sin2 => 2.0 * v.sin().powi(2),
            AmbientKind::Table { .. } => self.table_ratio(v).0 * v.sin().powi(2),
        }
    }

    pub fn slope(&self, v: f64) -> f64 {
        match &self.kind {
            AmbientKind::Tan2 => 2.0 * v.tan() / v.cos().powi(2),
            AmbientKind::Sin2 => 2.0 * (2.0 * v).sin(),
            AmbientKind::Table { .. } => {
                let (g, dg) = self.table_ratio(v);
                dg * v.sin().powi(2) + g * (2.0 * v).sin()
            }
        }
    }

    /// Tables interpolate `g = ψ̃/sin²ϑ` linearly over the positive angles,
    /// held constant below the first one. Returns `(g, g′)`.
    fn table_ratio(&self, v: f64) -> (f64, f64) {
        let AmbientKind::Table { vartheta, psi } = &self.kind else {
            unreachable!("table_ratio on a closed-form ambient")
        };
        let pts: Vec<(f64, f64)> = vartheta
            .iter()
            .zip(psi)
            .filter(|(t, _)| **t > 0.0)
            .map(|(&t, &p)| (t, p / t.sin().powi(2)))
            .collect();
        if pts.len() == 1 || v <= pts[0].0 {
            return (pts[0].1, 0.0);
        }
        let j = pts.partition_point(|p| p.0 < v).clamp(1, pts.len() - 1);
        let (a, b) = (pts[j - 1], pts[j]);
        let dg = (b.1 - a.1) / (b.0 - a.0);
        (a.1 + dg * (v - a.0), dg)
    }

    /// `|σ̃| = |ψ̃′ − 2cotϑ·ψ̃|/(2√ψ̃)`.
    pub fn abs_sigma(&self, v: f64) -> f64 {
        let p = self.psi(v);
        (self.slope(v) - 2.0 * p / v.tan()).abs() / (2.0 * p.sqrt())
    }
}

pub fn ambient_congruence(kind: AmbientKind, vartheta0: f64) -> Result<AmbientCongruence> {
    if !(vartheta0 > 0.0 && vartheta0 < 0.5 * PI) {
        return Err(Error::Ambient(format!("ϑ₀ = {vartheta0} outside (0, π/2)")));
    }
    if let AmbientKind::Table { vartheta, psi } = &kind {
        if vartheta.len() != psi.len() || vartheta.len() < 2 {
            return Err(Error::Ambient(
                "table needs at least two matching (ϑ, ψ̃) pairs".into(),
            ));
        }
        if vartheta.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Ambient(
                "table angles must be strictly increasing".into(),
            ));
        }
        if *vartheta.last().unwrap() < vartheta0 || vartheta[0] < 0.0 {
            return Err(Error::Ambient(format!(
                "table must lie in [0, π/2) and reach {vartheta0}"
            )));
        }
        if vartheta.iter().filter(|t| **t > 0.0).count() < 2 {
            return Err(Error::Ambient("table needs two positive angles".into()));
        }
    }
    let amb = AmbientCongruence { kind, vartheta0 };
    let samples: Vec<f64> = (1..=AMBIENT_SAMPLES)
        .map(|j| vartheta0 * j as f64 / AMBIENT_SAMPLES as f64)
        .collect();
    for &v in &samples {
        if !(amb.slope(v) > 0.0) || !(amb.psi(v) > 0.0) {
            return Err(Error::Ambient(format!("ψ̃ is not definite at ϑ = {v}")));
        }
    }
    let sig: Vec<f64> = samples.iter().map(|&v| amb.abs_sigma(v)).collect();
    let scale = sig.iter().copied().fold(0.0, f64::max);
    if let Some(j) = sig
        .iter()
        .position(|&s| !(s > 1e-9 * scale.max(1e-300)) || !(scale > 1e-12))
    {
        return Err(Error::Ambient(format!(
            "complex point at the origin is not isolated: σ̃ vanishes at ϑ = {}",
            samples[j]
        )));
    }
    let near = &sig[..AMBIENT_SAMPLES / 10];
    if near.windows(2).any(|w| w[1] < w[0]) || near[0] > 0.5 * scale {
        return Err(Error::Ambient(
            "|σ̃| does not decrease to 0 at the origin".into(),
        ));
    }
    Ok(amb)
}

/// The holomorphic leaf `ψ̃(ϑ)·(1 − cos 2θ)/(1 − cos 2ϑ)` on `grid`.
pub fn bishop_limit_leaf(
    amb: &AmbientCongruence,
    vartheta: f64,
    grid: UniformGrid,
) -> Result<PsiProfile> {
    if !(vartheta > 0.0 && vartheta <= amb.vartheta0) {
        return Err(Error::Domain(format!(
            "leaf angle {vartheta} outside (0, {}]",
            amb.vartheta0
        )));
    }
    let c = amb.psi(vartheta) / vartheta.sin().powi(2);
    let mut p = PsiProfile::sample(grid, |t| c * t.sin().powi(2), true)?;
    if (grid.end - vartheta).abs() <= 1e-15 * vartheta {
        *p.values.last_mut().unwrap() = amb.psi(vartheta);
    }
    Ok(p)
}

/// A leaf profile on its own grid.
#[derive(Debug, Clone, Copy)]
pub struct LeafView<'a> {
    pub grid: UniformGrid,
    pub values: &'a [f64],
}

impl LeafView<'_> {
    /// Linear interpolation, of `ψ/sin²θ` when the leaf is pinned at the axis so
    /// that the quadratic zero is reproduced exactly; the first cell uses the
    /// ratio at the first node.
    fn at(&self, t: f64) -> f64 {
        let h = self.grid.spacing();
        let x = ((t - self.grid.start) / h).max(0.0);
        let i = (x.floor() as usize).min(self.grid.n - 1);
        let s = x - i as f64;
        if self.grid.start == 0.0 && self.values[0] == 0.0 {
            let ratio = |k: usize| self.values[k] / self.grid.node(k).sin().powi(2);
            let r = if i == 0 {
                ratio(1)
            } else {
                ratio(i) * (1.0 - s) + ratio(i + 1) * s
            };
            return r * t.sin().powi(2);
        }
        self.values[i] * (1.0 - s) + self.values[i + 1] * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Separation {
    pub gap: f64,
    pub lower: usize,
    pub theta: f64,
}

/// Minimum of `ψ_{i+1} − ψ_i` over adjacent pairs and `θ ∈ (0, ϑ_i]`, on the finer
/// grid of each pair.
pub fn disjointness_check(leaves: &[LeafView]) -> Option<Separation> {
    let mut best: Option<Separation> = None;
    for (i, w) in leaves.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        let end = lo.grid.end.min(hi.grid.end);
        let h = lo.grid.spacing().min(hi.grid.spacing());
        let m = (end / h).round().max(1.0) as usize;
        for j in 1..=m {
            let t = (end * j as f64 / m as f64).min(end);
            let gap = hi.at(t) - lo.at(t);
            if best.is_none_or(|b| gap < b.gap) {
                best = Some(Separation {
                    gap,
                    lower: i,
                    theta: t,
                });
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyOptions {
    /// Shared grid spacing.
    pub h: f64,
    /// Perturbation size as a fraction of the local gap, at most ¼.
    pub perturbation: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self {
            h: 0.3 / 400.0,
            perturbation: 0.25,
            seed: 0,
            execution: Execution::Parallel,
        }
    }
}

/// `n` equally spaced leaf angles `ϑ₀·i/n`, `i = 1..=n`.
pub fn equally_spaced_leaves(vartheta0: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| vartheta0 * i as f64 / n as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafReport {
    pub vartheta: f64,
    pub c0: f64,
    pub grid_n: usize,
    pub report: SteadyReport,
    /// Sup distance to the holomorphic leaf; only when C1 = 0.
    pub linf_to_bishop: Option<f64>,
    /// Coefficient of θ² at the axis of the final profile.
    pub axis_p2: f64,
    /// `max_t |ψ(ϑ, t) − ψ̃(ϑ)|`.
    pub boundary_error: f64,
    #[serde(skip)]
    pub initial: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub leaves: Vec<LeafReport>,
    pub times: Vec<f64>,
    pub min_separation: Vec<f64>,
    pub separation_at: Vec<Separation>,
    /// `linf[leaf][sample]`: sup distance to the closed-form steady leaf.
    #[serde(skip)]
    pub linf: Vec<Vec<f64>>,
    pub all_converged: bool,
    pub separations_positive: bool,
    pub axis_slopes_increasing: bool,
    pub filling: bool,
}

fn axis_p2(values: &[f64], h: f64) -> f64 {
    (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / (2.0 * h * h)
}

/// Closed-form steady leaves of the template's boundary data.
fn limit_leaves(
    amb: &AmbientCongruence,
    angles: &[f64],
    grids: &[UniformGrid],
    c1: f64,
) -> Result<Vec<Vec<f64>>> {
    angles
        .iter()
        .zip(grids)
        .map(|(&v, g)| {
            let c = limit_coefficients(v, amb.psi(v), c1)?;
            let mut vals: Vec<f64> = g.nodes().iter().map(|&t| c.value(t).max(0.0)).collect();
            if c1 == 0.0 {
                vals[0] = 0.0;
            }
            *vals.last_mut().unwrap() = amb.psi(v);
            Ok(vals)
        })
        .collect()
}

/// Perturbed initial leaves `L_i + s_i·f·g_i·sin²θ·sin²(πθ/ϑ_i)` with `|s_i| ≤ 1`
/// and `g_i` the smallest adjacent gap of `(L_{i+1} − L_i)/sin²θ`.
pub fn initial_family(
    amb: &AmbientCongruence,
    angles: &[f64],
    grids: &[UniformGrid],
    c1: f64,
    opts: &FamilyOptions,
) -> Result<Vec<Vec<f64>>> {
    let base = limit_leaves(amb, angles, grids, c1)?;
    let n = angles.len();
    let mut pair_gap = vec![f64::INFINITY; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        let lo = LeafView {
            grid: grids[i],
            values: &base[i],
        };
        let hi = LeafView {
            grid: grids[i + 1],
            values: &base[i + 1],
        };
        for (k, t) in grids[i].nodes().into_iter().enumerate().skip(1) {
            let g = (hi.at(t) - lo.at(t)) / t.sin().powi(2);
            if !(g > 0.0) {
                return Err(Error::LeavesCross {
                    lower: i,
                    upper: i + 1,
                    theta: t,
                    gap: hi.at(t) - base[i][k],
                });
            }
            pair_gap[i] = pair_gap[i].min(g);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let signs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let below = if i > 0 {
            pair_gap[i - 1]
        } else {
            f64::INFINITY
        };
        let above = if i + 1 < n {
            pair_gap[i]
        } else {
            f64::INFINITY
        };
        let g = below.min(above);
        let amp = if g.is_finite() {
            signs[i] * opts.perturbation * g
        } else {
            0.0
        };
        let v = angles[i];
        let vals: Vec<f64> = grids[i]
            .nodes()
            .iter()
            .zip(&base[i])
            .map(|(&t, &b)| b + amp * t.sin().powi(2) * (PI * t / v).sin().powi(2))
            .collect();
        out.push(vals);
    }
    Ok(out)
}

fn leaf_grid(v: f64, h: f64) -> Result<UniformGrid> {
    UniformGrid::new(v, ((v / h).round() as usize).max(8))
}

pub fn evolve_family(
    amb: &AmbientCongruence,
    angles: &[f64],
    template: &SolverConfig,
    opts: &FamilyOptions,
) -> Result<FamilyReport> {
    if angles.is_empty() {
        return Err(Error::Config("family needs at least one leaf".into()));
    }
    if angles.windows(2).any(|w| !(w[1] > w[0]))
        || angles[0] <= 0.0
        || *angles.last().unwrap() > amb.vartheta0
    {
        return Err(Error::Config(format!(
            "leaf angles must increase strictly within (0, {}]",
            amb.vartheta0
        )));
    }
    if !(opts.perturbation >= 0.0 && opts.perturbation <= 0.25) {
        return Err(Error::Config(format!(
            "perturbation fraction {} outside [0, 1/4]",
            opts.perturbation
        )));
    }
    if !(opts.h > 0.0) {
        return Err(Error::Config("leaf spacing h must be positive".into()));
    }
    let grids = angles
        .iter()
        .map(|&v| leaf_grid(v, opts.h))
        .collect::<Result<Vec<_>>>()?;
    let initial = initial_family(amb, angles, &grids, template.c1, opts)?;
    let views: Vec<LeafView> = grids
        .iter()
        .zip(&initial)
        .map(|(&grid, v)| LeafView { grid, values: v })
        .collect();
    if let Some(s) = disjointness_check(&views) {
        if !(s.gap > 0.0) {
            return Err(Error::LeavesCross {
                lower: s.lower,
                upper: s.lower + 1,
                theta: s.theta,
                gap: s.gap,
            });
        }
    }

    let jobs: Vec<(f64, UniformGrid, Vec<f64>)> = angles
        .iter()
        .zip(&grids)
        .zip(initial)
        .map(|((&v, &g), init)| (v, g, init))
        .collect();
    let runs = map_indexed(opts.execution, &jobs, |_, (v, g, init)| {
        let cfg = SolverConfig {
            theta0: *v,
            c0: amb.psi(*v),
            grid_n: g.n,
            initial: InitialKind::Custom {
                values: init.clone(),
            },
            axis_value: None,
            ..template.clone()
        };
        let mut samples: Vec<(f64, Vec<f64>)> = Vec::new();
        run_observed(&cfg, |t, psi| samples.push((t, psi.to_vec()))).map(|r| (cfg, r, samples))
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    // family clock: t = 0 and the shared schedule up to the last leaf's final time
    let t_last = runs.iter().map(|r| r.1.t_final).fold(0.0, f64::max);
    let mut times = vec![0.0];
    let mut j = 0;
    while template.monitors.time(j) < t_last {
        times.push(template.monitors.time(j));
        j += 1;
    }
    if t_last > 0.0 {
        times.push(t_last);
    }
    let limits = limit_leaves(amb, angles, &grids, template.c1)?;
    let mut linf = vec![Vec::with_capacity(times.len()); angles.len()];
    let mut min_separation = Vec::with_capacity(times.len());
    let mut separation_at = Vec::with_capacity(times.len());
    for &t in &times {
        let views: Vec<LeafView> = runs
            .iter()
            .zip(&grids)
            .map(|((_, rep, samples), &grid)| {
                let pick = if t >= rep.t_final {
                    &rep.final_profile
                } else {
                    // leaves record every schedule time before their own final time
                    &samples.iter().rev().find(|s| s.0 <= t).unwrap().1
                };
                LeafView { grid, values: pick }
            })
            .collect();
        for (i, v) in views.iter().enumerate() {
            let d = v
                .values
                .iter()
                .zip(&limits[i])
                .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()));
            linf[i].push(d);
        }
        match disjointness_check(&views) {
            Some(s) => {
                min_separation.push(s.gap);
                separation_at.push(s);
            }
            None => {
                min_separation.push(f64::INFINITY);
                separation_at.push(Separation {
                    gap: f64::INFINITY,
                    lower: 0,
                    theta: 0.0,
                });
            }
        }
    }

    let leaves: Vec<LeafReport> = runs
        .into_iter()
        .zip(&grids)
        .zip(&jobs)
        .map(|(((cfg, report, samples), &grid), job)| {
            let linf_to_bishop = (cfg.c1 == 0.0).then(|| {
                bishop_limit_leaf(amb, cfg.theta0, grid)
                    .map(|b| {
                        b.values
                            .iter()
                            .zip(&report.final_profile)
                            .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
                    })
                    .unwrap_or(f64::INFINITY)
            });
            let boundary_error = samples
                .iter()
                .map(|s| (s.1.last().unwrap() - cfg.c0).abs())
                .fold(0.0, f64::max);
            LeafReport {
                vartheta: cfg.theta0,
                c0: cfg.c0,
                grid_n: cfg.grid_n,
                axis_p2: axis_p2(&report.final_profile, grid.spacing()),
                linf_to_bishop,
                boundary_error,
                initial: job.2.clone(),
                report,
            }
        })
        .collect();
    let all_converged = leaves.iter().all(|l| l.report.converged);
    let separations_positive = min_separation.iter().all(|&g| g > 0.0);
    let axis_slopes_increasing = leaves.windows(2).all(|w| w[1].axis_p2 > w[0].axis_p2);
    Ok(FamilyReport {
        filling: all_converged && separations_positive,
        leaves,
        times,
        min_separation,
        separation_at,
        linf,
        all_converged,
        separations_positive,
        axis_slopes_increasing,
    })
}

/// Euclidean samples of the lines of a leaf: `(θ, φ, point, direction)`.
pub fn leaf_lines(
    grid: UniformGrid,
    values: &[f64],
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<[f64; 8]>> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for a in 1..=n_theta {
        let idx = a * grid.n / n_theta;
        let t = grid.node(idx);
        for b in 0..n_phi {
            let phi = 2.0 * PI * b as f64 / n_phi as f64;
            let line = OrientedLine::from_profile(t, phi, values[idx])?;
            let p = line_to_euclidean(&line, 0.0);
            let q = line_to_euclidean(&line, 1.0);
            out.push([
                t,
                phi,
                p[0],
                p[1],
                p[2],
                q[0] - p[0],
                q[1] - p[1],
                q[2] - p[2],
            ]);
        }
    }
    Ok(out)
}
