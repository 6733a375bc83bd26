//! Spatial discretisation of `∂ψ/∂t = (√ψ/ψ′)ψ″ − k√ψ·cot 2θ`.

use crate::error::{Error, Result};
use crate::grid::UniformGrid;

/// Geometry of the discretisation, precomputed once per run.
#[derive(Debug, Clone)]
pub struct RhsContext {
    pub h: f64,
    pub thetas: Vec<f64>,
    pub cot2: Vec<f64>,
    pub k: f64,
    pub axis_pinned: bool,
}

impl RhsContext {
    pub fn new(grid: UniformGrid, k: f64, axis_pinned: bool) -> Self {
        let thetas = grid.nodes();
        let cot2 = thetas.iter().map(|&t| 1.0 / (2.0 * t).tan()).collect();
        Self {
            h: grid.spacing(),
            thetas,
            cot2,
            k,
            axis_pinned,
        }
    }

    pub fn n(&self) -> usize {
        self.thetas.len() - 1
    }
}

pub(crate) fn check_node(psi: &[f64], i: usize, t: f64) -> Result<()> {
    let v = psi[i];
    if !v.is_finite() {
        return Err(Error::NonFinite { node: i, t });
    }
    if v < 0.0 {
        return Err(Error::NegativeProfile { node: i, value: v });
    }
    Ok(())
}

/// Centered slope at an interior node, rejecting `ψ′ ≤ 0`.
pub(crate) fn interior_slope(psi: &[f64], ctx: &RhsContext, i: usize) -> Result<f64> {
    let d1 = (psi[i + 1] - psi[i - 1]) / (2.0 * ctx.h);
    if !(d1 > 0.0) {
        return Err(Error::NotDefinite {
            node: i,
            theta: ctx.thetas[i],
            dpsi: d1,
        });
    }
    Ok(d1)
}

/// Regularised value at θ = 0.
///
/// With a quadratic zero `ψ ≈ cθ²` the limit is `√c(1 − k/2)`. With a
/// smooth even positive minimum the two terms cancel only for `k = 2`.
pub fn axis_rhs(psi: &[f64], ctx: &RhsContext) -> Result<f64> {
    let p0 = psi[0];
    if p0 == 0.0 {
        let h2 = ctx.h * ctx.h;
        let d2 = (2.0 * psi[0] - 5.0 * psi[1] + 4.0 * psi[2] - psi[3]) / h2;
        return Ok((0.5 * d2).max(0.0).sqrt() * (1.0 - 0.5 * ctx.k));
    }
    if ctx.k == 2.0 {
        Ok(0.0)
    } else {
        Err(Error::Domain(format!(
            "axis drift is singular for k = {} with ψ(0) = {p0:e} > 0",
            ctx.k
        )))
    }
}

/// Right-hand side on every node. The boundary node carries zero and the
/// axis carries zero when pinned.
pub fn reduced_rhs(psi: &[f64], ctx: &RhsContext, t: f64) -> Result<Vec<f64>> {
    let n = ctx.n();
    let mut out = vec![0.0; n + 1];
    for i in 0..=n {
        check_node(psi, i, t)?;
    }
    let h2 = ctx.h * ctx.h;
    for i in 1..n {
        let d1 = interior_slope(psi, ctx, i)?;
        let d2 = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) / h2;
        let root = psi[i].sqrt();
        out[i] = root * d2 / d1 - ctx.k * root * ctx.cot2[i];
    }
    if !ctx.axis_pinned {
        out[0] = axis_rhs(psi, ctx)?;
    }
    if let Some(i) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { node: i, t });
    }
    Ok(out)
}

/// Sup norm over the nodes the PDE evolves.
pub fn residual_norm(rhs: &[f64], ctx: &RhsContext) -> f64 {
    let from = if ctx.axis_pinned { 1 } else { 0 };
    rhs[from..ctx.n()].iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{stationary_profile, stationary_residual_field, StationaryCoeffs};

    #[test]
    fn matches_stationary_residual_field() {
        let grid = UniformGrid::new(0.3, 100).unwrap();
        let p = stationary_profile(StationaryCoeffs { a: 1.0, b: -0.9 }, grid).unwrap();
        let ctx = RhsContext::new(grid, 2.0, false);
        let r = reduced_rhs(&p.values, &ctx, 0.0).unwrap();
        let f = stationary_residual_field(&p, 2.0).unwrap();
        for i in 1..100 {
            assert!((r[i] - f[i]).abs() < 1e-14);
        }
        assert_eq!(r[0], 0.0);
    }

    #[test]
    fn axis_regularisation() {
        let grid = UniformGrid::new(0.3, 200).unwrap();
        let ctx1 = RhsContext::new(grid, 1.0, false);
        let psi: Vec<f64> = grid.nodes().iter().map(|t| 4.0 * t * t).collect();
        let r = axis_rhs(&psi, &ctx1).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
        let pos: Vec<f64> = grid.nodes().iter().map(|t| 0.1 + t * t).collect();
        assert!(axis_rhs(&pos, &ctx1).is_err());
        assert_eq!(
            axis_rhs(&pos, &RhsContext::new(grid, 2.0, false)).unwrap(),
            0.0
        );
    }

    #[test]
    fn errors_on_bad_states() {
        let grid = UniformGrid::new(0.3, 20).unwrap();
        let ctx = RhsContext::new(grid, 2.0, true);
        let mut psi: Vec<f64> = grid.nodes().iter().map(|t| t * t).collect();
        psi[5] = psi[7];
        assert!(matches!(
            reduced_rhs(&psi, &ctx, 0.0),
            Err(Error::NotDefinite { node: 6, .. })
        ));
        psi[5] = -1.0;
        assert!(matches!(
            reduced_rhs(&psi, &ctx, 0.0),
            Err(Error::NegativeProfile { node: 5, .. })
        ));
        psi[5] = f64::NAN;
        assert!(matches!(
            reduced_rhs(&psi, &ctx, 0.5),
            Err(Error::NonFinite { node: 5, .. })
        ));
    }
}
