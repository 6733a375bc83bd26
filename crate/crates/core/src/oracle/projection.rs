//! Tangential and normal projectors in `(ξ, η, ξ̄, η̄)` components.
//!
//! Entry `(k, j)` is `P^k_j`: row is the output component, column the input.

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::frames::{CoFrame, Frame};
use super::jet::GraphSample;
use crate::error::Result;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionTable {
    /// Closed-form entries exactly as stated.
    Printed,
    /// Stated entries with `P^ξ_η̄` and `P^η_ξ̄` replaced by their verified forms.
    Corrected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    pub parallel: Matrix4<Complex64>,
    pub perpendicular: Matrix4<Complex64>,
}

/// Worst entry of `P∥ + P⊥ − 1`, `P∥² − P∥`, `P⊥² − P⊥` and `P∥P⊥`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResiduals {
    pub completeness: f64,
    pub parallel_idempotence: f64,
    pub perpendicular_idempotence: f64,
    pub orthogonality: f64,
}

impl ProjectionResiduals {
    pub fn max(&self) -> f64 {
        self.completeness
            .max(self.parallel_idempotence)
            .max(self.perpendicular_idempotence)
            .max(self.orthogonality)
    }
}

fn amax(m: &Matrix4<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

impl ProjectionPair {
    pub fn residuals(&self) -> ProjectionResiduals {
        let (p, q) = (&self.parallel, &self.perpendicular);
        let id = Matrix4::<Complex64>::identity();
        ProjectionResiduals {
            completeness: amax(&(p + q - id)),
            parallel_idempotence: amax(&(p * p - p)),
            perpendicular_idempotence: amax(&(q * q - q)),
            orthogonality: amax(&(p * q)),
        }
    }

    pub fn apply_parallel(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        apply(&self.parallel, v)
    }

    pub fn apply_perpendicular(&self, v: [Complex64; 4]) -> [Complex64; 4] {
        apply(&self.perpendicular, v)
    }
}

fn apply(m: &Matrix4<Complex64>, v: [Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (k, o) in out.iter_mut().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            *o += m[(k, j)] * vj;
        }
    }
    out
}

const XI: usize = 0;
const ETA: usize = 1;
const XB: usize = 2;
const EB: usize = 3;

/// Closed-form projector pair.
pub fn projections_with(jet: &GraphSample, table: ProjectionTable) -> Result<ProjectionPair> {
    jet.require_definite()?;
    let lam = jet.lambda;
    let s2 = jet.abs_sigma * jet.abs_sigma;
    let sb = jet.sigma.conj();
    let df = jet.df;
    let dbfb = df.conj();
    let k = 1.0 / (2.0 * jet.delta());
    let li = I * lam;

    let p_xi_xi = k * ((df - 2.0 * li) * li - s2);
    let p_xi_eta = -k * li;
    let p_xi_xb = -k * (dbfb + li) * sb;
    let p_eta_xi = k * li * ((df - 2.0 * li) * df - s2);
    let p_eta_eta = -k * (li * df + s2);
    let p_eta_eb = k * sb * (df - li);
    let (p_xi_eb, p_eta_xb) = match table {
        ProjectionTable::Printed => (
            -k * sb,
            k * (-sb * (df * dbfb - s2 - li * (dbfb - df)) + 2.0 * lam * lam),
        ),
        ProjectionTable::Corrected => (
            k * sb,
            k * sb * (-df * dbfb - li * df + li * dbfb - 2.0 * lam * lam + s2),
        ),
    };

    let mut par = Matrix4::zeros();
    par[(XI, XI)] = p_xi_xi;
    par[(XI, ETA)] = p_xi_eta;
    par[(XI, XB)] = p_xi_xb;
    par[(XI, EB)] = p_xi_eb;
    par[(ETA, XI)] = p_eta_xi;
    par[(ETA, ETA)] = p_eta_eta;
    par[(ETA, XB)] = p_eta_xb;
    par[(ETA, EB)] = p_eta_eb;
    conjugate_rows(&mut par);

    let mut perp = Matrix4::zeros();
    perp[(XI, XI)] = p_eta_eta;
    perp[(XI, XB)] = -p_xi_xb;
    perp[(XI, ETA)] = -p_xi_eta;
    perp[(XI, EB)] = -p_xi_eb;
    perp[(ETA, XI)] = -p_eta_xi;
    perp[(ETA, XB)] = -p_eta_xb;
    perp[(ETA, ETA)] = p_xi_xi;
    perp[(ETA, EB)] = -p_eta_eb;
    conjugate_rows(&mut perp);

    Ok(ProjectionPair {
        parallel: par,
        perpendicular: perp,
    })
}

/// Real operators: the ξ̄, η̄ rows are the conjugates of the ξ, η rows with barred columns swapped.
fn conjugate_rows(m: &mut Matrix4<Complex64>) {
    let swap = [XB, EB, XI, ETA];
    for (src, dst) in [(XI, XB), (ETA, EB)] {
        for j in 0..4 {
            m[(dst, swap[j])] = m[(src, j)].conj();
        }
    }
}

/// Projectors with the verified entries.
pub fn projections(jet: &GraphSample) -> Result<ProjectionPair> {
    projections_with(jet, ProjectionTable::Corrected)
}

/// `P∥ = 1 − E₃θ³ − E₄θ⁴` and `P⊥ = 1 − E₁θ¹ − E₂θ²` from an adapted frame.
pub fn projections_from_frame(frame: &Frame, coframe: &CoFrame) -> ProjectionPair {
    let id = Matrix4::<Complex64>::identity();
    let outer = |a: usize| {
        let e = frame.e[a].components();
        let t = coframe.theta[a].components();
        Matrix4::from_fn(|k, j| e[k] * t[j])
    };
    ProjectionPair {
        parallel: id - outer(2) - outer(3),
        perpendicular: id - outer(0) - outer(1),
    }
}
