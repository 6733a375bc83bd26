//! Uniform θ-grids and second-order finite-difference stencils.

use crate::error::{Error, Result};

/// Uniform grid `θ_i = start + i·h`, `i = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
}

impl UniformGrid {
    /// Grid on `[0, end]`.
    pub fn new(end: f64, n: usize) -> Result<Self> {
        Self::on(0.0, end, n)
    }

    pub fn on(start: f64, end: f64, n: usize) -> Result<Self> {
        if !(end > start) || !start.is_finite() || !end.is_finite() {
            return Err(Error::Domain(format!("grid [{start}, {end}] is empty")));
        }
        if n < 4 {
            return Err(Error::Domain(format!(
                "grid needs at least 4 intervals, got {n}"
            )));
        }
        Ok(Self { start, end, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.end - self.start) / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.end
        } else {
            self.start + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }
}

/// First derivative: centered in the interior, one-sided three-point at the ends.
pub fn first_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let mut d = vec![0.0; n + 1];
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for i in 1..n {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    d[n] = (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * h);
    d
}

/// Second derivative: centered in the interior, one-sided four-point at the ends.
pub fn second_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len() - 1;
    let h2 = h * h;
    let mut d = vec![0.0; n + 1];
    d[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2;
    for i in 1..n {
        d[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h2;
    }
    d[n] = (2.0 * values[n] - 5.0 * values[n - 1] + 4.0 * values[n - 2] - values[n - 3]) / h2;
    d
}

/// Observed convergence order from errors on grids refined by `ratio`.
pub fn observed_order(coarse_err: f64, fine_err: f64, ratio: f64) -> f64 {
    (coarse_err / fine_err).ln() / ratio.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_exact_on_cubics_interior() {
        let g = UniformGrid::on(0.5, 1.5, 10).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|t| 3.0 * t * t - t + 2.0).collect();
        let d1 = first_derivative(&v, g.spacing());
        let d2 = second_derivative(&v, g.spacing());
        for (i, t) in g.nodes().iter().enumerate() {
            assert!((d1[i] - (6.0 * t - 1.0)).abs() < 1e-10);
            assert!((d2[i] - 6.0).abs() < 1e-8);
        }
    }

    #[test]
    fn last_node_is_exact_endpoint() {
        let g = UniformGrid::new(0.3, 400).unwrap();
        assert_eq!(g.node(400), 0.3);
        assert_eq!(g.node(0), 0.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(UniformGrid::new(1.0, 2).is_err());
        assert!(UniformGrid::new(-1.0, 10).is_err());
        assert!(UniformGrid::on(1.0, 1.0, 10).is_err());
    }

    #[test]
    fn order_of_quadratic_error() {
        assert!((observed_order(4e-4, 1e-4, 2.0) - 2.0).abs() < 1e-12);
    }
}
