//! Randomised property suite over definite graph jets.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{induced_metric, twist_shear_graph, MetricClass};
use crate::oracle::connection::ConnectionOracle;
use crate::oracle::jet::{random_definite_jet, TwistSign};
use crate::oracle::sff::mean_curvature_forms;
use crate::oracle::{
    adapted_frame, identity_convergence, mean_curvature, projections, GraphSample, PolySection,
};
use crate::parallel::{map_indexed, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub duality: f64,
    pub gram: f64,
    pub projection: f64,
    pub trace: f64,
    /// Allowed `|order − 2|`.
    pub identity_order: f64,
    pub holomorphic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            duality: 1e-6,
            gram: 1e-6,
            projection: 1e-10,
            trace: 1e-8,
            identity_order: 0.1,
            holomorphic: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn uniform(t: f64) -> Self {
        Self {
            duality: t,
            gram: t,
            projection: t,
            trace: t,
            identity_order: t,
            holomorphic: t,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub jets: usize,
    pub sections: usize,
    pub tolerances: Tolerances,
    pub execution: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 2024,
            jets: 128,
            sections: 8,
            tolerances: Tolerances::default(),
            execution: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub name: &'static str,
    pub samples: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub rows: Vec<CheckRow>,
    pub all_passed: bool,
}

impl VerifyReport {
    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> Vec<&CheckRow> {
        self.rows.iter().filter(|r| !r.passed).collect()
    }
}

fn row(name: &'static str, values: &[f64], tolerance: f64) -> CheckRow {
    let worst = values.iter().copied().fold(
        0.0,
        |m: f64, v| if v.is_nan() { f64::NAN } else { m.max(v) },
    );
    CheckRow {
        name,
        samples: values.len(),
        worst,
        tolerance,
        passed: worst <= tolerance,
    }
}

/// Definite jets with both twist signs; jets on the β poles are redrawn.
pub fn sample_jets(rng: &mut ChaCha8Rng, n: usize) -> Vec<GraphSample> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let sign = if out.len() % 2 == 0 {
            TwistSign::Positive
        } else {
            TwistSign::Negative
        };
        let (_, jet) = random_definite_jet(rng, sign, 1e-3);
        if mean_curvature_forms(&jet).is_ok() {
            out.push(jet);
        }
    }
    out
}

/// Jets of random polynomials in ξ alone, so `σ ≡ 0`, with `|λ|` bounded away from 0.
pub fn sample_holomorphic_jets(rng: &mut ChaCha8Rng, n: usize) -> Vec<GraphSample> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut poly = PolySection::random(rng, 3, 0.3);
        for row in poly.coeffs.iter_mut() {
            for c in row.iter_mut().skip(1) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        let xi = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let jet = poly.jet(xi);
        if jet.lambda.abs() > 1e-3 {
            out.push(jet);
        }
    }
    out
}

struct JetChecks {
    duality: f64,
    gram: f64,
    projection: f64,
    trace: f64,
    class_mismatch: f64,
}

fn check_jet(jet: &GraphSample) -> JetChecks {
    let frame = adapted_frame(jet);
    let (duality, gram) = frame.map_or((f64::INFINITY, f64::INFINITY), |f| {
        (f.duality_residual, f.gram_residual)
    });
    let projection = projections(jet).map_or(f64::INFINITY, |p| p.residuals().max());
    let trace = mean_curvature_forms(jet).map_or(f64::INFINITY, |m| m.max_disagreement());
    let class = induced_metric(&twist_shear_graph(jet), jet.xi).classification;
    let class_mismatch = match ConnectionOracle::new(jet) {
        Some(c) => {
            let g = c.induced;
            let det = g.determinant();
            let tr = g.trace();
            let real = if det <= 0.0 {
                MetricClass::Lorentz
            } else if tr < 0.0 {
                MetricClass::DefiniteNegative
            } else {
                MetricClass::DefinitePositive
            };
            if real == class {
                0.0
            } else {
                1.0
            }
        }
        None => 1.0,
    };
    JetChecks {
        duality,
        gram,
        projection,
        trace,
        class_mismatch,
    }
}

/// Worst `|order − 2|` of both identity residuals for one random section.
fn identity_order_defect(poly: &PolySection, center: Complex64) -> f64 {
    let hs = [1e-2, 5e-3, 2.5e-3];
    let mut worst: f64 = 0.0;
    for w in hs.windows(2) {
        let c = identity_convergence(|z| poly.value(z), center, w);
        for o in [c.order_first, c.order_second] {
            worst = if o.is_nan() || worst.is_nan() {
                f64::NAN
            } else {
                worst.max((o - 2.0).abs())
            };
        }
    }
    worst
}

pub fn run_verify(opts: &VerifyOptions) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let jets = sample_jets(&mut rng, opts.jets);
    let holo = sample_holomorphic_jets(&mut rng, opts.jets);
    let sections: Vec<(PolySection, Complex64)> = (0..opts.sections)
        .map(|_| {
            let p = PolySection::random(&mut rng, 4, 0.5);
            let c = Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
            (p, c)
        })
        .collect();

    let checks = map_indexed(opts.execution, &jets, |_, j| check_jet(j));
    let holo_h = map_indexed(opts.execution, &holo, |_, j| {
        mean_curvature(j).map_or(f64::INFINITY, |h| h.norm())
    });
    let orders = map_indexed(opts.execution, &sections, |_, (p, c)| {
        identity_order_defect(p, *c)
    });

    let t = &opts.tolerances;
    let pick = |f: fn(&JetChecks) -> f64| checks.iter().map(f).collect::<Vec<_>>();
    let rows = vec![
        row("frame-duality", &pick(|c| c.duality), t.duality),
        row("frame-gram", &pick(|c| c.gram), t.gram),
        row("projections", &pick(|c| c.projection), t.projection),
        row("trace-vs-closed-form", &pick(|c| c.trace), t.trace),
        row("identity-order", &orders, t.identity_order),
        row("holomorphic-maximal", &holo_h, t.holomorphic),
        row("metric-classification", &pick(|c| c.class_mismatch), 0.0),
    ];
    VerifyReport {
        seed: opts.seed,
        all_passed: rows.iter().all(|r| r.passed),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_reproducible() {
        let opts = VerifyOptions {
            jets: 20,
            sections: 2,
            ..VerifyOptions::default()
        };
        let a = run_verify(&opts);
        assert!(a.all_passed, "{:?}", a.failures());
        let b = run_verify(&VerifyOptions {
            execution: Execution::Sequential,
            ..opts
        });
        assert_eq!(a, b);
    }

    #[test]
    fn zero_tolerance_lists_failures() {
        let opts = VerifyOptions {
            jets: 10,
            sections: 1,
            tolerances: Tolerances::uniform(0.0),
            ..VerifyOptions::default()
        };
        let r = run_verify(&opts);
        assert!(!r.all_passed);
        assert!(r.row("frame-duality").is_some_and(|x| !x.passed));
        assert!(r.row("metric-classification").is_some_and(|x| x.passed));
    }
}
