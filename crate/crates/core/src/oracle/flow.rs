//! Velocity `Ḟ` of the graph under mean curvature flow.

use num_complex::Complex64;

use super::jet::GraphSample;
use super::sff::mean_curvature;
use crate::error::Result;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `Ḟ` evaluated three independent ways, all for the flow `(∂f/∂t)^⊥ = H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowRhs {
    /// `−2λi H^ξ + 2σ̄ H^ξ̄`.
    pub from_mean: Complex64,
    /// `g^{jk}∂_j∂_k F + (iσ̄/Δ)((σξ − ρ̄ξ̄)(1+ξξ̄) + F̄ − ξ̄²F)`.
    pub laplacian_form: Complex64,
    /// The expanded first-derivative form.
    pub expanded_form: Complex64,
}

impl FlowRhs {
    pub fn value(&self) -> Complex64 {
        self.expanded_form
    }

    pub fn max_disagreement(&self) -> f64 {
        let (a, b, c) = (self.from_mean, self.laplacian_form, self.expanded_form);
        (a - b).norm().max((a - c).norm()).max((b - c).norm())
    }
}

pub fn graph_flow_rhs(jet: &GraphSample) -> Result<FlowRhs> {
    jet.require_definite()?;
    let h = mean_curvature(jet)?;
    let (lam, sig, xi, w) = (jet.lambda, jet.sigma, jet.xi, jet.w);
    let xb = xi.conj();
    let sb = sig.conj();
    let delta = jet.delta();
    let k = w * w / (2.0 * delta);

    let from_mean = -2.0 * lam * I * h + 2.0 * sb * h.conj();

    let lap = k * (I * sb * jet.ddf - 2.0 * lam * jet.ddbf - I * sig * jet.dbdbf);
    let laplacian_form = lap
        + I * sb / delta * ((sig * xi - jet.rho.conj() * xb) * w + jet.f.conj() - xb * xb * jet.f);

    let expanded_form = k
        * (-2.0 * sb * jet.d_lambda - I * sb * jet.db_sigma
            + 2.0 * lam * jet.d_sigma_bar
            + I * sig * jet.db_sigma_bar
            + 4.0 * I * sb * (sig * xi + lam * I * xb) / w);

    Ok(FlowRhs {
        from_mean,
        laplacian_form,
        expanded_form,
    })
}
