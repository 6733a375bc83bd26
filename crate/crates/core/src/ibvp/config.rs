use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::grid::UniformGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeumannVariant {
    /// `ψ′(θ₀) = 2C0·cotθ₀ − C1`.
    ConsistentCotTheta,
    /// `ψ′(θ₀) = 2C0·cot 2θ₀ + C1`.
    PaperLiteralCotTwoTheta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryMode {
    /// Dirichlet at θ₀ enforced, Neumann monitored.
    DirichletPinned,
    /// One-sided Neumann slope enforced at θ₀, Dirichlet monitored.
    NeumannEnforced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ExplicitRk2,
    SemiImplicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum InitialKind {
    Limit,
    /// Limit plus `amplitude·sin²(πθ/θ₀)`.
    Perturbed {
        amplitude: f64,
    },
    /// Nodal values on the solver grid.
    Custom {
        values: Vec<f64>,
    },
}

/// Log-spaced monitor sampling: `t_first·10^{j/per_decade}` plus `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorSchedule {
    pub t_first: f64,
    pub per_decade: usize,
}

impl Default for MonitorSchedule {
    fn default() -> Self {
        Self {
            t_first: 1e-6,
            per_decade: 20,
        }
    }
}

impl MonitorSchedule {
    pub fn time(&self, j: usize) -> f64 {
        self.t_first * 10f64.powf(j as f64 / self.per_decade as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub theta0: f64,
    pub c0: f64,
    pub c1: f64,
    pub k: f64,
    pub neumann_variant: NeumannVariant,
    pub boundary_mode: BoundaryMode,
    pub grid_n: usize,
    pub scheme: Scheme,
    pub dt_safety: f64,
    /// Semi-implicit steps are this multiple of the explicit bound.
    pub implicit_dt_multiplier: f64,
    pub t_end: f64,
    pub tol_steady: f64,
    pub initial: InitialKind,
    /// Initial ψ(0) when C1 ≠ 0; defaults to the limit's axis value `(C1/2)tanθ₀`.
    pub axis_value: Option<f64>,
    pub monitors: MonitorSchedule,
    pub max_steps: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let theta0: f64 = 0.3;
        Self {
            theta0,
            c0: 2.0 * theta0.sin().powi(2),
            c1: 0.0,
            k: 2.0,
            neumann_variant: NeumannVariant::ConsistentCotTheta,
            boundary_mode: BoundaryMode::DirichletPinned,
            grid_n: 400,
            scheme: Scheme::SemiImplicit,
            dt_safety: 0.5,
            implicit_dt_multiplier: 10.0,
            t_end: 50.0,
            tol_steady: 1e-10,
            initial: InitialKind::Limit,
            axis_value: None,
            monitors: MonitorSchedule::default(),
            max_steps: 200_000_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.theta0 > 0.0 && self.theta0 < FRAC_PI_2) {
            return bad(format!("theta0 = {} must lie in (0, π/2)", self.theta0));
        }
        if !(self.c0 > 0.0 && self.c0.is_finite()) {
            return bad(format!("C0 = {} must be positive", self.c0));
        }
        if !self.c1.is_finite() {
            return bad("C1 must be finite".into());
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return bad(format!("drift coefficient k = {} must be positive", self.k));
        }
        if self.grid_n < 8 {
            return bad(format!(
                "grid_n = {} is below the minimum of 8",
                self.grid_n
            ));
        }
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return bad(format!("dt_safety = {} must lie in (0, 1]", self.dt_safety));
        }
        if !(self.implicit_dt_multiplier >= 1.0 && self.implicit_dt_multiplier.is_finite()) {
            return bad(format!(
                "implicit_dt_multiplier = {} must be at least 1",
                self.implicit_dt_multiplier
            ));
        }
        if !(self.t_end >= 0.0) {
            return bad(format!("t_end = {} must be non-negative", self.t_end));
        }
        if !(self.tol_steady > 0.0) {
            return bad(format!("tol_steady = {} must be positive", self.tol_steady));
        }
        if !(self.monitors.t_first > 0.0 && self.monitors.per_decade > 0) {
            return bad("monitor schedule needs t_first > 0 and per_decade > 0".into());
        }
        if let InitialKind::Custom { values } = &self.initial {
            if values.len() != self.grid_n + 1 {
                return bad(format!(
                    "custom initial data has {} values, expected grid_n + 1 = {}",
                    values.len(),
                    self.grid_n + 1
                ));
            }
        }
        if let Some(v) = self.axis_value {
            if !(v >= 0.0) {
                return bad(format!("axis_value = {v} must be non-negative"));
            }
            if self.c1 == 0.0 && v != 0.0 {
                return bad("axis_value must be 0 when C1 = 0 (pinned axis)".into());
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<UniformGrid> {
        UniformGrid::new(self.theta0, self.grid_n)
    }

    pub fn spacing(&self) -> f64 {
        self.theta0 / self.grid_n as f64
    }

    /// The configured Neumann slope at θ₀.
    pub fn neumann_slope(&self) -> f64 {
        let t = self.theta0;
        match self.neumann_variant {
            NeumannVariant::ConsistentCotTheta => 2.0 * self.c0 / t.tan() - self.c1,
            NeumannVariant::PaperLiteralCotTwoTheta => 2.0 * self.c0 / (2.0 * t).tan() + self.c1,
        }
    }

    /// The axis is held at ψ(0) = 0 exactly when C1 = 0.
    pub fn axis_pinned(&self) -> bool {
        self.c1 == 0.0
    }

    /// Axis value of the closed-form limit, `(C1/2)tanθ₀`.
    pub fn limit_axis_value(&self) -> f64 {
        0.5 * self.c1 * self.theta0.tan()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let c = SolverConfig::default();
        c.validate().unwrap();
        assert!(c.axis_pinned());
        assert!((c.neumann_slope() - 2.0 * c.c0 / 0.3f64.tan()).abs() < 1e-15);
    }

    #[test]
    fn invalid_ranges_rejected() {
        let base = SolverConfig::default();
        for c in [
            SolverConfig {
                theta0: 1.6,
                ..base.clone()
            },
            SolverConfig {
                c0: 0.0,
                ..base.clone()
            },
            SolverConfig {
                dt_safety: 1.5,
                ..base.clone()
            },
            SolverConfig {
                grid_n: 3,
                ..base.clone()
            },
            SolverConfig {
                tol_steady: 0.0,
                ..base.clone()
            },
            SolverConfig {
                axis_value: Some(0.1),
                ..base.clone()
            },
            SolverConfig {
                initial: InitialKind::Custom {
                    values: vec![0.0; 3],
                },
                ..base.clone()
            },
        ] {
            assert!(matches!(c.validate(), Err(Error::Config(_))));
        }
    }

    #[test]
    fn literal_variant_slope() {
        let c = SolverConfig {
            neumann_variant: NeumannVariant::PaperLiteralCotTwoTheta,
            c1: 0.05,
            ..SolverConfig::default()
        };
        assert!((c.neumann_slope() - (2.0 * c.c0 / 0.6f64.tan() + 0.05)).abs() < 1e-15);
    }

    #[test]
    fn schedule_is_log_spaced() {
        let s = MonitorSchedule::default();
        assert_eq!(s.time(0), 1e-6);
        assert!((s.time(20) - 1e-5).abs() < 1e-18);
    }
}
