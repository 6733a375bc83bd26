//! Run configuration files: TOML with `[solver]`, `[initial]`, `[monitors]`,
//! `[family]`, `[oracle]` and `[verify]` sections. Every key has a default and
//! unknown keys are rejected.

use serde::Deserialize;

use neutralflow_core::bishop::{AmbientKind, FamilyOptions};
use neutralflow_core::ibvp::{
    BoundaryMode, InitialKind, MonitorSchedule, NeumannVariant, Scheme, SolverConfig,
};
use neutralflow_core::parallel::Execution;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub solver: SolverSection,
    pub initial: InitialSection,
    pub monitors: MonitorSection,
    pub family: FamilySection,
    pub oracle: OracleSection,
    pub verify: VerifySection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub theta0: Option<f64>,
    /// Defaults to `2sin²θ₀`.
    pub c0: Option<f64>,
    pub c1: Option<f64>,
    pub k: Option<f64>,
    pub neumann_variant: Option<NeumannVariant>,
    pub boundary_mode: Option<BoundaryMode>,
    pub grid_n: Option<usize>,
    pub scheme: Option<Scheme>,
    pub dt_safety: Option<f64>,
    pub implicit_dt_multiplier: Option<f64>,
    pub t_end: Option<f64>,
    pub tol_steady: Option<f64>,
    pub axis_value: Option<f64>,
    pub max_steps: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialChoice {
    #[default]
    Limit,
    Perturbed,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSection {
    pub kind: InitialChoice,
    pub amplitude: Option<f64>,
    /// Amplitude as a multiple of C0.
    pub amplitude_fraction: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonitorSection {
    pub t_first: Option<f64>,
    pub per_decade: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmbientChoice {
    #[default]
    Tan2,
    Sin2,
    Table,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilySection {
    pub ambient: AmbientChoice,
    pub vartheta0: Option<f64>,
    pub leaves: Option<usize>,
    pub angles: Option<Vec<f64>>,
    /// Shared spacing; defaults to `vartheta0 / solver.grid_n`.
    pub h: Option<f64>,
    pub perturbation: Option<f64>,
    pub table_vartheta: Option<Vec<f64>>,
    pub table_psi: Option<Vec<f64>>,
    pub execution: Option<Execution>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub thetas: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub jets: Option<usize>,
    pub sections: Option<usize>,
    pub tolerance: Option<f64>,
    pub execution: Option<Execution>,
}

pub fn parse(text: &str) -> Result<FileConfig, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

impl FileConfig {
    pub fn solver_config(&self) -> Result<SolverConfig, String> {
        let d = SolverConfig::default();
        let s = &self.solver;
        let theta0 = s.theta0.unwrap_or(d.theta0);
        let c0 = s.c0.unwrap_or(2.0 * theta0.sin().powi(2));
        let initial = match self.initial.kind {
            InitialChoice::Limit => {
                if self.initial.amplitude.is_some() || self.initial.amplitude_fraction.is_some() {
                    return Err("initial.amplitude needs initial.kind = \"perturbed\"".into());
                }
                InitialKind::Limit
            }
            InitialChoice::Perturbed => {
                match (self.initial.amplitude, self.initial.amplitude_fraction) {
                    (Some(_), Some(_)) => {
                        return Err(
                            "set only one of initial.amplitude and initial.amplitude_fraction"
                                .into(),
                        )
                    }
                    (Some(a), None) => InitialKind::Perturbed { amplitude: a },
                    (None, Some(f)) => InitialKind::Perturbed { amplitude: f * c0 },
                    (None, None) => InitialKind::Perturbed {
                        amplitude: 0.1 * c0,
                    },
                }
            }
        };
        let cfg = SolverConfig {
            theta0,
            c0,
            c1: s.c1.unwrap_or(d.c1),
            k: s.k.unwrap_or(d.k),
            neumann_variant: s.neumann_variant.unwrap_or(d.neumann_variant),
            boundary_mode: s.boundary_mode.unwrap_or(d.boundary_mode),
            grid_n: s.grid_n.unwrap_or(d.grid_n),
            scheme: s.scheme.unwrap_or(d.scheme),
            dt_safety: s.dt_safety.unwrap_or(d.dt_safety),
            implicit_dt_multiplier: s.implicit_dt_multiplier.unwrap_or(d.implicit_dt_multiplier),
            t_end: s.t_end.unwrap_or(d.t_end),
            tol_steady: s.tol_steady.unwrap_or(d.tol_steady),
            initial,
            axis_value: s.axis_value,
            monitors: MonitorSchedule {
                t_first: self.monitors.t_first.unwrap_or(d.monitors.t_first),
                per_decade: self.monitors.per_decade.unwrap_or(d.monitors.per_decade),
            },
            max_steps: s.max_steps.unwrap_or(d.max_steps),
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn ambient(&self) -> Result<(AmbientKind, f64), String> {
        let f = &self.family;
        let v0 = f.vartheta0.unwrap_or(0.3);
        let kind = match f.ambient {
            AmbientChoice::Tan2 | AmbientChoice::Sin2
                if f.table_vartheta.is_some() || f.table_psi.is_some() =>
            {
                return Err(
                    "family.table_vartheta/table_psi need family.ambient = \"table\"".into(),
                )
            }
            AmbientChoice::Tan2 => AmbientKind::Tan2,
            AmbientChoice::Sin2 => AmbientKind::Sin2,
            AmbientChoice::Table => match (&f.table_vartheta, &f.table_psi) {
                (Some(v), Some(p)) => AmbientKind::Table {
                    vartheta: v.clone(),
                    psi: p.clone(),
                },
                _ => {
                    return Err(
                        "family.ambient = \"table\" needs table_vartheta and table_psi".into(),
                    )
                }
            },
        };
        Ok((kind, v0))
    }

    pub fn leaf_angles(&self, vartheta0: f64) -> Result<Vec<f64>, String> {
        match (&self.family.angles, self.family.leaves) {
            (Some(_), Some(_)) => Err("set only one of family.angles and family.leaves".into()),
            (Some(a), None) => Ok(a.clone()),
            (None, n) => {
                let n = n.unwrap_or(8);
                if n == 0 {
                    return Err("family.leaves must be at least 1".into());
                }
                Ok(neutralflow_core::bishop::equally_spaced_leaves(
                    vartheta0, n,
                ))
            }
        }
    }

    pub fn family_options(&self, vartheta0: f64, grid_n: usize, seed: u64) -> FamilyOptions {
        let d = FamilyOptions::default();
        FamilyOptions {
            h: self.family.h.unwrap_or(vartheta0 / grid_n as f64),
            perturbation: self.family.perturbation.unwrap_or(d.perturbation),
            seed,
            execution: self.family.execution.unwrap_or(d.execution),
        }
    }
}
