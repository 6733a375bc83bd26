//! Consistency of the 1-D reduced flow with the full graph flow.
//!
//! For a purely twisting rotationally symmetric section, `ψ = |F|²/w²`,
//! so the graph velocity induces `ψ̇ = ±2Re(ḞF̄)/w²`. Matching it against
//! `(√ψ/ψ′)ψ″ − k√ψ·cot 2θ` at each sample gives a fitted drift coefficient.

use num_complex::Complex64;
use serde::Serialize;

use super::flow::graph_flow_rhs;
use super::jet::radial_jet;
use crate::error::{Error, Result};
use crate::profiles::RadialProfile;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Samples with `|cot 2θ|` below this carry no drift information.
pub const COT_EXCLUSION: f64 = 1e-3;

/// Fixed azimuth for the oracle samples; the reduction is φ-independent.
pub const SAMPLE_PHI: f64 = 0.7;

pub const DEFAULT_THETAS: [f64; 7] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35];

/// Time orientation of the graph flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowOrientation {
    /// Flow by `−H`, forward parabolic on negative definite graphs.
    Parabolic,
    /// `(∂f/∂t)^⊥ = H` taken with the stated sign.
    Literal,
}

impl FlowOrientation {
    pub fn sign(self) -> f64 {
        match self {
            FlowOrientation::Parabolic => -1.0,
            FlowOrientation::Literal => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionSample {
    pub theta: f64,
    pub psi: f64,
    pub psi_dot: f64,
    /// `(√ψ/ψ′)ψ″`.
    pub diffusion: f64,
    pub k_hat: Option<f64>,
    /// `Im(Ḟe^{−iφ}/i)`; zero when the flow stays purely twisting.
    pub twist_residual: f64,
    /// `RHS_{k=1} − ψ̇`.
    pub k1_mismatch: f64,
    /// `√ψ·cot 2θ`.
    pub predicted_mismatch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub profile: String,
    pub orientation: FlowOrientation,
    pub samples: Vec<ReductionSample>,
    pub k_mean: f64,
    /// `max |k̂ − k_mean|` over the fitted samples.
    pub k_spread: f64,
    pub excluded: usize,
    pub max_twist_residual: f64,
    /// `max |k1_mismatch − predicted_mismatch|`.
    pub max_mismatch_error: f64,
}

pub fn reduction_sample(
    profile: &dyn RadialProfile,
    theta: f64,
    orientation: FlowOrientation,
) -> Result<ReductionSample> {
    let jet = radial_jet(profile, theta, SAMPLE_PHI)?;
    let fdot = graph_flow_rhs(&jet)?.value();
    let psi_dot = orientation.sign() * 2.0 * (fdot * jet.f.conj()).re / (jet.w * jet.w);
    let r = profile.jet(theta);
    let root = r.psi.sqrt();
    let diffusion = root / r.d1 * r.d2;
    let cot2 = 1.0 / (2.0 * theta).tan();
    let drift = root * cot2;
    let k_hat = (cot2.abs() >= COT_EXCLUSION).then(|| (diffusion - psi_dot) / drift);
    let twist = fdot * Complex64::from_polar(1.0, -SAMPLE_PHI) / I;
    Ok(ReductionSample {
        theta,
        psi: r.psi,
        psi_dot,
        diffusion,
        k_hat,
        twist_residual: twist.im,
        k1_mismatch: (diffusion - drift) - psi_dot,
        predicted_mismatch: drift,
    })
}

pub fn reduction_consistency(
    profile: &dyn RadialProfile,
    thetas: &[f64],
    orientation: FlowOrientation,
) -> Result<ReductionReport> {
    if thetas.is_empty() {
        return Err(Error::Domain(
            "reduction oracle needs at least one sample angle".into(),
        ));
    }
    let samples = thetas
        .iter()
        .map(|&t| reduction_sample(profile, t, orientation))
        .collect::<Result<Vec<_>>>()?;
    let ks: Vec<f64> = samples.iter().filter_map(|s| s.k_hat).collect();
    if ks.is_empty() {
        return Err(Error::Domain(
            "every sample lies on the cot 2θ exclusion band".into(),
        ));
    }
    let k_mean = ks.iter().sum::<f64>() / ks.len() as f64;
    let k_spread = ks.iter().fold(0.0, |a: f64, k| a.max((k - k_mean).abs()));
    Ok(ReductionReport {
        profile: profile.name(),
        orientation,
        excluded: samples.len() - ks.len(),
        max_twist_residual: samples
            .iter()
            .fold(0.0, |a: f64, s| a.max(s.twist_residual.abs())),
        max_mismatch_error: samples.iter().fold(0.0, |a: f64, s| {
            a.max((s.k1_mismatch - s.predicted_mismatch).abs())
        }),
        samples,
        k_mean,
        k_spread,
    })
}
