//! Deterministic CSV and JSON artifacts. Floats carry 17 significant digits.

use serde::Serialize;

use crate::bishop::{leaf_lines, FamilyReport};
use crate::geometry::{twist_shear_axis_limit, twist_shear_rotsym};
use crate::grid::{first_derivative, second_derivative, UniformGrid};
use crate::ibvp::{MonitorRecord, SolverConfig, SteadyReport};
use crate::oracle::ReductionReport;

/// One emitted file: relative name and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn new(name: impl Into<String>, text: String) -> Self {
        Self {
            name: name.into(),
            bytes: text.into_bytes(),
        }
    }
}

pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Comma-separated table with a header row.
#[derive(Debug, Clone)]
pub struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            out: header.join(",") + "\n",
            width: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.width);
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn floats(&mut self, xs: &[f64]) {
        let cells: Vec<String> = xs.iter().map(|&x| fmt_f(x)).collect();
        self.row(&cells);
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialise");
    s.push('\n');
    s
}

pub const MONITOR_COLUMNS: [&str; 11] = [
    "t",
    "u_min",
    "u_max",
    "sup_sigma",
    "B_min",
    "B_max",
    "steady_residual",
    "boundary_slope",
    "axis_value",
    "psi_min",
    "psi_max",
];

pub fn monitors_csv(records: &[MonitorRecord]) -> String {
    let mut c = Csv::new(&MONITOR_COLUMNS);
    for r in records {
        c.floats(&[
            r.t,
            r.u_min,
            r.u_max,
            r.sup_sigma,
            r.b_min,
            r.b_max,
            r.steady_residual,
            r.boundary_slope,
            r.axis_value,
            r.psi_min,
            r.psi_max,
        ]);
    }
    c.finish()
}

/// `theta, psi, dpsi, lambda, abs_sigma`. At the axis λ and |σ| are the
/// quadratic-zero limits, or NaN where ψ(0) > 0 makes them singular.
pub fn profile_csv(grid: UniformGrid, psi: &[f64]) -> String {
    let h = grid.spacing();
    let d1 = first_derivative(psi, h);
    let d2 = second_derivative(psi, h);
    let mut c = Csv::new(&["theta", "psi", "dpsi", "lambda", "abs_sigma"]);
    for (i, t) in grid.nodes().into_iter().enumerate() {
        let (lam, sig) = if i == 0 && grid.start == 0.0 {
            if psi[0] == 0.0 {
                twist_shear_axis_limit((0.5 * d2[0]).max(0.0))
                    .map_or((f64::NAN, f64::NAN), |ts| (ts.lambda, ts.abs_sigma()))
            } else {
                (f64::NAN, f64::NAN)
            }
        } else {
            twist_shear_rotsym(t, psi[i], d1[i], None)
                .map_or((f64::NAN, f64::NAN), |ts| (ts.lambda, ts.abs_sigma()))
        };
        c.floats(&[t, psi[i], d1[i], lam, sig]);
    }
    c.finish()
}

#[derive(Debug, Clone, Serialize)]
pub struct SnapshotEntry {
    pub t: f64,
    pub file: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReportJson<'a> {
    pub config: &'a SolverConfig,
    pub converged: bool,
    pub t_converged: Option<f64>,
    pub t_final: f64,
    pub steps: u64,
    pub a: f64,
    pub b: f64,
    pub linf_error: f64,
    pub final_residual: f64,
    pub final_sup_sigma: f64,
    pub decay_slope: Option<f64>,
    pub snapshots: Vec<SnapshotEntry>,
}

/// `monitors.csv`, `profile_NNN.csv` per snapshot and `report.json`.
pub fn run_artifacts(cfg: &SolverConfig, rep: &SteadyReport, prefix: &str) -> Vec<Artifact> {
    let grid = cfg.grid().expect("validated configuration");
    let mut out = vec![Artifact::new(
        format!("{prefix}monitors.csv"),
        monitors_csv(&rep.records),
    )];
    let mut snaps = Vec::new();
    for (k, s) in rep.snapshots.iter().enumerate() {
        let name = format!("{prefix}profile_{k:03}.csv");
        out.push(Artifact::new(name.clone(), profile_csv(grid, &s.psi)));
        snaps.push(SnapshotEntry { t: s.t, file: name });
    }
    let json = RunReportJson {
        config: cfg,
        converged: rep.converged,
        t_converged: rep.converged.then_some(rep.t_final),
        t_final: rep.t_final,
        steps: rep.steps,
        a: rep.limit.a,
        b: rep.limit.b,
        linf_error: rep.linf_to_limit,
        final_residual: rep.final_residual,
        final_sup_sigma: rep.final_sup_sigma,
        decay_slope: rep.sigma_decay_slope,
        snapshots: snaps,
    };
    out.push(Artifact::new(
        format!("{prefix}report.json"),
        to_json(&json),
    ));
    out
}

/// `family.csv` (t, leaf, linf_error, min_separation), `leaves.csv` with the
/// steady leaves, `lines.csv` with Euclidean line samples and `family.json`.
pub fn family_artifacts(rep: &FamilyReport) -> Vec<Artifact> {
    let mut fam = Csv::new(&["t", "leaf", "linf_error", "min_separation"]);
    for (k, &t) in rep.times.iter().enumerate() {
        for (i, series) in rep.linf.iter().enumerate() {
            fam.row(&[
                fmt_f(t),
                i.to_string(),
                fmt_f(series[k]),
                fmt_f(rep.min_separation[k]),
            ]);
        }
    }
    let mut leaves = Csv::new(&["leaf", "vartheta", "theta", "psi", "psi_initial"]);
    let mut lines = Csv::new(&[
        "leaf", "vartheta", "theta", "phi", "px", "py", "pz", "dx", "dy", "dz",
    ]);
    for (i, l) in rep.leaves.iter().enumerate() {
        for (k, &t) in l.report.thetas.iter().enumerate() {
            leaves.row(&[
                i.to_string(),
                fmt_f(l.vartheta),
                fmt_f(t),
                fmt_f(l.report.final_profile[k]),
                fmt_f(l.initial[k]),
            ]);
        }
        let grid = UniformGrid::new(l.vartheta, l.grid_n).expect("leaf grid");
        if let Ok(samples) = leaf_lines(grid, &l.report.final_profile, 8, 16) {
            for s in samples {
                let mut cells = vec![i.to_string(), fmt_f(l.vartheta)];
                cells.extend(s.iter().map(|&x| fmt_f(x)));
                lines.row(&cells);
            }
        }
    }
    vec![
        Artifact::new("family.csv", fam.finish()),
        Artifact::new("leaves.csv", leaves.finish()),
        Artifact::new("lines.csv", lines.finish()),
        Artifact::new("family.json", to_json(rep)),
    ]
}

pub fn reduction_csv(reports: &[ReductionReport]) -> String {
    let mut c = Csv::new(&[
        "profile",
        "orientation",
        "theta",
        "psi",
        "psi_dot",
        "diffusion",
        "k_hat",
        "twist_residual",
        "k1_mismatch",
        "predicted_mismatch",
    ]);
    for r in reports {
        let orient = match r.orientation {
            crate::oracle::FlowOrientation::Parabolic => "parabolic",
            crate::oracle::FlowOrientation::Literal => "literal",
        };
        for s in &r.samples {
            c.row(&[
                r.profile.clone(),
                orient.to_string(),
                fmt_f(s.theta),
                fmt_f(s.psi),
                fmt_f(s.psi_dot),
                fmt_f(s.diffusion),
                s.k_hat.map_or_else(String::new, fmt_f),
                fmt_f(s.twist_residual),
                fmt_f(s.k1_mismatch),
                fmt_f(s.predicted_mismatch),
            ]);
        }
    }
    c.finish()
}
