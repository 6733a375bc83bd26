//! Closed-form geometry of graphical line congruences.
//!
//! Oriented lines are described in the holomorphic chart `(ξ, η)` of the
//! south-pole-free region: `ξ` is the stereographic image of the direction
//! and `η` the fibre coordinate. A graphical congruence is a section
//! `η = F(ξ, ξ̄)`; a rotationally symmetric purely twisting one is encoded by
//! the real profile `ψ(θ) ≥ 0`, a quarter of the squared distance of the line
//! to the origin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{first_derivative, second_derivative, UniformGrid};
use crate::oracle::jet::GraphSample;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedLine {
    pub xi: Complex64,
    pub eta: Complex64,
}

impl OrientedLine {
    pub fn new(xi: Complex64, eta: Complex64) -> Result<Self> {
        if !(xi.re.is_finite() && xi.im.is_finite() && eta.re.is_finite() && eta.im.is_finite()) {
            return Err(Error::Domain(
                "oriented line coordinates must be finite".into(),
            ));
        }
        Ok(Self { xi, eta })
    }

    /// Line of the purely twisting congruence with profile value `psi` at `(θ, φ)`.
    pub fn from_profile(theta: f64, phi: f64, psi: f64) -> Result<Self> {
        let p = PolarPoint::new(theta, phi)?;
        Self::new(p.xi(), eta_from_psi(theta, phi, psi)?)
    }
}

/// Polar parameters of the direction: `ξ = tan(θ/2)·e^{iφ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub theta: f64,
    pub phi: f64,
}

impl PolarPoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..PI).contains(&theta) {
            return Err(Error::Domain(format!("θ = {theta} outside [0, π)")));
        }
        Ok(Self {
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar((0.5 * self.theta).tan(), self.phi)
    }

    pub fn from_xi(xi: Complex64) -> Self {
        Self {
            theta: 2.0 * xi.norm().atan(),
            phi: xi.arg().rem_euclid(2.0 * PI),
        }
    }
}

/// `η = i·√ψ·sec²(θ/2)·e^{iφ}`.
pub fn eta_from_psi(theta: f64, phi: f64, psi: f64) -> Result<Complex64> {
    if !(0.0..PI).contains(&theta) {
        return Err(Error::Domain(format!("θ = {theta} outside [0, π)")));
    }
    if !(psi >= 0.0) {
        return Err(Error::Domain(format!("ψ = {psi} must be non-negative")));
    }
    let sec2 = 1.0 / (0.5 * theta).cos().powi(2);
    Ok(I * psi.sqrt() * sec2 * Complex64::from_polar(1.0, phi))
}

/// Point at parameter `r` along the line; `r = 0` is the point closest to the origin.
pub fn line_to_euclidean(line: &OrientedLine, r: f64) -> [f64; 3] {
    let (xi, eta) = (line.xi, line.eta);
    let w = 1.0 + xi.norm_sqr();
    let w2 = w * w;
    let planar = (2.0 * (eta - eta.conj() * xi * xi) + 2.0 * xi * w * r) / w2;
    let x3 =
        (-2.0 * (eta * xi.conj() + eta.conj() * xi).re + (1.0 - xi.norm_sqr().powi(2)) * r) / w2;
    [planar.re, planar.im, x3]
}

/// `χ² = 4ηη̄/(1+ξξ̄)²`.
pub fn distance_sq_to_origin(line: &OrientedLine) -> f64 {
    let w = 1.0 + line.xi.norm_sqr();
    4.0 * line.eta.norm_sqr() / (w * w)
}

/// Rotation by `alpha` about the x³-axis.
pub fn rotate_line(line: &OrientedLine, alpha: f64) -> OrientedLine {
    let e = Complex64::from_polar(1.0, alpha);
    OrientedLine {
        xi: line.xi * e,
        eta: line.eta * e,
    }
}

/// Twist λ, shear σ, `ρ = ε + iλ` and `Δ = λ² − |σ|²` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistShear {
    pub lambda: f64,
    pub sigma: Complex64,
    pub rho: Complex64,
    pub delta: f64,
}

impl TwistShear {
    pub fn new(lambda: f64, sigma: Complex64, rho: Complex64) -> Self {
        Self {
            lambda,
            sigma,
            rho,
            delta: lambda * lambda - sigma.norm_sqr(),
        }
    }

    pub fn abs_sigma(&self) -> f64 {
        self.sigma.norm()
    }
}

/// Twist and shear of the purely twisting congruence with profile ψ.
///
/// `phi` fixes the phase `e^{−2iφ}` of σ; without it σ is reported at φ = 0.
/// The real part ε of ρ vanishes for purely twisting sections.
pub fn twist_shear_rotsym(theta: f64, psi: f64, dpsi: f64, phi: Option<f64>) -> Result<TwistShear> {
    if !(theta > 0.0 && theta < 0.5 * PI) {
        return Err(Error::Domain(format!("θ = {theta} outside (0, π/2)")));
    }
    if !(psi > 0.0) {
        return Err(Error::Domain(format!(
            "ψ = {psi} at θ = {theta}: the axis limit needs a certified quadratic zero"
        )));
    }
    let root = psi.sqrt();
    let drift = 2.0 * psi / theta.tan();
    let lambda = (dpsi + drift) / (2.0 * root);
    let shear = (dpsi - drift) / (2.0 * root);
    let phase = Complex64::from_polar(1.0, -2.0 * phi.unwrap_or(0.0));
    let sigma = I * shear * phase;
    let mut ts = TwistShear::new(lambda, sigma, I * lambda);
    // λ² − |σ|² = (λ+|σ|)(λ−|σ|) = 2cotθ·ψ′, evaluated without cancellation.
    ts.delta = 2.0 * dpsi / theta.tan();
    Ok(ts)
}

/// Twist and shear at the axis for a profile certified to behave like `c·θ²`.
pub fn twist_shear_axis_limit(c: f64) -> Result<TwistShear> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "axis coefficient c = {c} must be positive"
        )));
    }
    let lambda = 2.0 * c.sqrt();
    Ok(TwistShear::new(
        lambda,
        Complex64::new(0.0, 0.0),
        I * lambda,
    ))
}

/// Twist and shear from the first jet of a graphical section.
pub fn twist_shear_graph(jet: &GraphSample) -> TwistShear {
    let w = 1.0 + jet.xi.norm_sqr();
    let sigma = -jet.dbf.conj();
    let rho = jet.df - 2.0 * jet.xi.conj() * jet.f / w;
    TwistShear::new(rho.im, sigma, rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricClass {
    DefiniteNegative,
    DefinitePositive,
    Lorentz,
    Degenerate,
}

/// Induced metric in `(ξ, ξ̄)` components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample {
    pub components: [[Complex64; 2]; 2],
    pub delta: f64,
    pub classification: MetricClass,
}

impl MetricSample {
    pub fn determinant(&self) -> Complex64 {
        let m = &self.components;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

pub fn classify(lambda: f64, delta: f64) -> MetricClass {
    let scale = lambda * lambda + delta.abs();
    if delta.abs() <= 1e-12 * scale.max(1e-300) || scale == 0.0 {
        MetricClass::Degenerate
    } else if delta < 0.0 {
        MetricClass::Lorentz
    } else if lambda > 0.0 {
        MetricClass::DefiniteNegative
    } else {
        MetricClass::DefinitePositive
    }
}

pub fn induced_metric(ts: &TwistShear, xi: Complex64) -> MetricSample {
    let w = 1.0 + xi.norm_sqr();
    let pre = 2.0 / (w * w);
    let lam = Complex64::new(-ts.lambda * pre, 0.0);
    MetricSample {
        components: [[I * ts.sigma * pre, lam], [lam, -I * ts.sigma.conj() * pre]],
        delta: ts.delta,
        classification: classify(ts.lambda, ts.delta),
    }
}

/// Coefficients of the stationary family `ψ = a + b·cos 2θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryCoeffs {
    pub a: f64,
    pub b: f64,
}

impl StationaryCoeffs {
    pub fn value(&self, theta: f64) -> f64 {
        self.a + self.b * (2.0 * theta).cos()
    }

    pub fn slope(&self, theta: f64) -> f64 {
        -2.0 * self.b * (2.0 * theta).sin()
    }

    pub fn axis_value(&self) -> f64 {
        self.a + self.b
    }

    pub fn is_holomorphic(&self, tol: f64) -> bool {
        (self.a + self.b).abs() <= tol * (self.a.abs() + self.b.abs()).max(1.0)
    }
}

/// Sampled radial profile ψ on a uniform θ-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiProfile {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
    pub axis_pinned: bool,
}

impl PsiProfile {
    pub fn new(grid: UniformGrid, values: Vec<f64>, axis_pinned: bool) -> Result<Self> {
        if values.len() != grid.n + 1 {
            return Err(Error::Domain(format!(
                "profile has {} values for {} nodes",
                values.len(),
                grid.n + 1
            )));
        }
        if let Some((node, &value)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::NegativeProfile { node, value });
        }
        if axis_pinned && values[0] != 0.0 {
            return Err(Error::Domain(format!(
                "pinned axis requires ψ(0) = 0, got {}",
                values[0]
            )));
        }
        Ok(Self {
            grid,
            values,
            axis_pinned,
        })
    }

    pub fn sample(grid: UniformGrid, f: impl Fn(f64) -> f64, axis_pinned: bool) -> Result<Self> {
        let mut values: Vec<f64> = grid.nodes().into_iter().map(f).collect();
        if axis_pinned {
            values[0] = 0.0;
        }
        Self::new(grid, values, axis_pinned)
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.grid.nodes()
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn first_derivative(&self) -> Vec<f64> {
        first_derivative(&self.values, self.spacing())
    }

    pub fn second_derivative(&self) -> Vec<f64> {
        second_derivative(&self.values, self.spacing())
    }

    /// All forward differences positive.
    pub fn is_definite(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }

    /// First interior node where the centered slope is not positive.
    pub fn first_non_definite(&self) -> Option<(usize, f64)> {
        let d1 = self.first_derivative();
        (1..self.grid.n)
            .find(|&i| !(d1[i] > 0.0))
            .map(|i| (i, d1[i]))
    }

    pub fn linf_distance(&self, other: impl Fn(f64) -> f64) -> f64 {
        self.thetas()
            .iter()
            .zip(&self.values)
            .map(|(&t, &v)| (v - other(t)).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples `ψ = a + b·cos 2θ` on `grid`.
pub fn stationary_profile(c: StationaryCoeffs, grid: UniformGrid) -> Result<PsiProfile> {
    let values: Vec<f64> = grid.nodes().iter().map(|&t| c.value(t)).collect();
    let scale = c.a.abs() + c.b.abs();
    // Round-off around an exact zero (a = −b at θ = 0) is clamped; genuine negativity is rejected.
    let values: Vec<f64> = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            if v < 0.0 && v > -1e-14 * scale {
                Ok(0.0)
            } else if v < 0.0 {
                Err(Error::NegativeProfile { node: i, value: v })
            } else {
                Ok(v)
            }
        })
        .collect::<Result<_>>()?;
    let pinned = grid.start == 0.0 && values[0] == 0.0;
    PsiProfile::new(grid, values, pinned)
}

/// Stationary coefficients matching `ψ(θ₀) = C0` and `ψ′(θ₀) = 2C0·cotθ₀ − C1`.
pub fn limit_coefficients(theta0: f64, c0: f64, c1: f64) -> Result<StationaryCoeffs> {
    if !(theta0 > 0.0 && theta0 < 0.5 * PI) {
        return Err(Error::Domain(format!("θ₀ = {theta0} outside (0, π/2)")));
    }
    if !(c0 > 0.0) {
        return Err(Error::Domain(format!("C0 = {c0} must be positive")));
    }
    let cot = 1.0 / theta0.tan();
    let cos2 = (2.0 * theta0).cos();
    let denom = 2.0 * cot * (1.0 - cos2);
    Ok(StationaryCoeffs {
        a: (-c1 * cos2 + 2.0 * cot * c0) / denom,
        b: (c1 - 2.0 * cot * c0) / denom,
    })
}

/// Pointwise `(√ψ/ψ′)ψ″ − k√ψ·cot 2θ` on interior nodes (zero-padded ends).
pub fn stationary_residual_field(p: &PsiProfile, k: f64) -> Result<Vec<f64>> {
    let d1 = p.first_derivative();
    let d2 = p.second_derivative();
    let thetas = p.thetas();
    let mut out = vec![0.0; p.values.len()];
    for i in 1..p.grid.n {
        if d1[i] == 0.0 || !d1[i].is_finite() {
            return Err(Error::Domain(format!(
                "ψ′ vanishes at interior node {i} (θ = {}): diffusion term undefined",
                thetas[i]
            )));
        }
        if d1[i] < 0.0 {
            return Err(Error::NotDefinite {
                node: i,
                theta: thetas[i],
                dpsi: d1[i],
            });
        }
        let root = p.values[i].sqrt();
        out[i] = root / d1[i] * d2[i] - k * root / (2.0 * thetas[i]).tan();
    }
    Ok(out)
}

/// Sup norm of the stationarity residual over interior nodes.
pub fn stationary_residual(p: &PsiProfile, k: f64) -> Result<f64> {
    Ok(stationary_residual_field(p, k)?
        .iter()
        .fold(0.0, |m, v| m.max(v.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eta_from_psi_examples() {
        assert_eq!(eta_from_psi(0.0, 0.0, 0.0).unwrap(), c(0.0, 0.0));
        let e = eta_from_psi(PI / 2.0, 0.0, 1.0).unwrap();
        assert!((e - c(0.0, 2.0)).norm() < 1e-14);
        let e = eta_from_psi(PI / 3.0, PI / 2.0, 4.0).unwrap();
        assert!((e - c(-8.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!(eta_from_psi(PI, 0.0, 1.0).is_err());
        assert!(eta_from_psi(-0.1, 0.0, 1.0).is_err());
    }

    #[test]
    fn euclidean_points() {
        let origin = OrientedLine::new(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(line_to_euclidean(&origin, 0.0), [0.0, 0.0, 0.0]);
        assert_eq!(line_to_euclidean(&origin, 1.0), [0.0, 0.0, 1.0]);
        let shifted = OrientedLine::new(c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        let p = line_to_euclidean(&shifted, 0.0);
        assert!((p[0]).abs() < 1e-15 && (p[1] - 2.0).abs() < 1e-15 && p[2].abs() < 1e-15);
        assert_relative_eq!(distance_sq_to_origin(&shifted), 4.0);
    }

    #[test]
    fn closest_point_is_at_zero_parameter() {
        let line = OrientedLine::new(c(0.3, -0.2), c(0.7, 0.4)).unwrap();
        let d = |r: f64| {
            line_to_euclidean(&line, r)
                .iter()
                .map(|x| x * x)
                .sum::<f64>()
        };
        assert!(d(1e-3) > d(0.0) && d(-1e-3) > d(0.0));
        assert_relative_eq!(d(0.0), distance_sq_to_origin(&line), max_relative = 1e-12);
        // unit parametrization
        let (p0, p1) = (line_to_euclidean(&line, 0.0), line_to_euclidean(&line, 1.0));
        let len: f64 = p0
            .iter()
            .zip(&p1)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert_relative_eq!(len, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn rotation_examples() {
        let line = OrientedLine::new(c(0.3, -0.2), c(0.7, 0.4)).unwrap();
        assert_eq!(rotate_line(&line, 0.0), line);
        let twice = rotate_line(&rotate_line(&line, PI), PI);
        assert!((twice.xi - line.xi).norm() < 1e-15 && (twice.eta - line.eta).norm() < 1e-15);
    }

    #[test]
    fn rotsym_twist_shear_examples() {
        let ts = twist_shear_rotsym(PI / 4.0, 1.0, 2.0, None).unwrap();
        assert_relative_eq!(ts.lambda, 2.0, max_relative = 1e-14);
        assert!(ts.abs_sigma() < 1e-14);

        let ts = twist_shear_rotsym(PI / 4.0, 1.0, 4.0, None).unwrap();
        assert_relative_eq!(ts.lambda, 3.0, max_relative = 1e-14);
        assert_relative_eq!(ts.abs_sigma(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(ts.delta, 8.0, max_relative = 1e-14);

        for &t in &[0.1, 0.5, 1.2] {
            let psi = 0.7;
            let ts = twist_shear_rotsym(t, psi, 2.0 * psi / t.tan(), Some(0.4)).unwrap();
            assert!(ts.abs_sigma() < 1e-14);
        }
        assert!(twist_shear_rotsym(0.3, 0.0, 1.0, None).is_err());
        assert!(twist_shear_rotsym(0.0, 1.0, 1.0, None).is_err());
    }

    #[test]
    fn shear_phase_follows_rotation() {
        let ts = twist_shear_rotsym(0.4, 1.0, 4.0, Some(0.3)).unwrap();
        let base = twist_shear_rotsym(0.4, 1.0, 4.0, None).unwrap();
        assert!((ts.sigma - base.sigma * Complex64::from_polar(1.0, -0.6)).norm() < 1e-14);
    }

    #[test]
    fn axis_limit_matches_small_angle_values() {
        let c2 = 2.0;
        let limit = twist_shear_axis_limit(c2).unwrap();
        let t = 1e-4;
        let prof = ClosedProfile::ScaledSin2 { scale: c2 };
        let j = prof.jet(t);
        let near = twist_shear_rotsym(t, j.psi, j.d1, None).unwrap();
        assert!((near.lambda - limit.lambda).abs() < 1e-7);
        assert!(twist_shear_axis_limit(0.0).is_err());
    }

    use crate::profiles::{ClosedProfile, RadialProfile};

    #[test]
    fn metric_classification_examples() {
        let xi = c(0.1, 0.2);
        let m = induced_metric(&TwistShear::new(2.0, c(0.0, 0.0), c(0.0, 2.0)), xi);
        assert_eq!(m.classification, MetricClass::DefiniteNegative);
        let m = induced_metric(&TwistShear::new(-2.0, c(0.5, 0.0), c(0.0, -2.0)), xi);
        assert_eq!(m.classification, MetricClass::DefinitePositive);
        let m = induced_metric(&TwistShear::new(0.0, c(0.3, 0.1), c(0.0, 0.0)), xi);
        assert_eq!(m.classification, MetricClass::Lorentz);
        let m = induced_metric(&TwistShear::new(0.0, c(0.0, 0.0), c(0.0, 0.0)), xi);
        assert_eq!(m.classification, MetricClass::Degenerate);
    }

    #[test]
    fn metric_is_conjugate_symmetric_with_matrix_determinant() {
        let xi = c(0.3, -0.4);
        let ts = TwistShear::new(1.5, c(0.4, -0.7), c(0.2, 1.5));
        let m = induced_metric(&ts, xi);
        assert!((m.components[1][1] - m.components[0][0].conj()).norm() < 1e-15);
        assert_eq!(m.components[0][1].im, 0.0);
        let w = 1.0 + xi.norm_sqr();
        // det = −4Δ/(1+ξξ̄)⁴ from the displayed matrix
        assert_relative_eq!(
            m.determinant().re,
            -4.0 * ts.delta / w.powi(4),
            max_relative = 1e-13
        );
        assert!(m.determinant().im.abs() < 1e-15);
    }

    #[test]
    fn holomorphic_profiles_are_definite_off_axis() {
        let grid = UniformGrid::new(0.3, 60).unwrap();
        let p = stationary_profile(StationaryCoeffs { a: 1.0, b: -1.0 }, grid).unwrap();
        let d1 = ClosedProfile::ScaledSin2 { scale: 2.0 };
        for &t in p.thetas().iter().skip(1) {
            let j = d1.jet(t);
            let ts = twist_shear_rotsym(t, j.psi, j.d1, None).unwrap();
            let m = induced_metric(&ts, PolarPoint::new(t, 0.0).unwrap().xi());
            assert_eq!(m.classification, MetricClass::DefiniteNegative);
        }
        // axis: series limit λ = 2√c, σ = 0 stays definite
        let ts = twist_shear_axis_limit(2.0).unwrap();
        assert_eq!(
            induced_metric(&ts, c(0.0, 0.0)).classification,
            MetricClass::DefiniteNegative
        );
    }

    #[test]
    fn stationary_profile_examples() {
        let grid = UniformGrid::new(0.3, 30).unwrap();
        let hol = stationary_profile(StationaryCoeffs { a: 1.0, b: -1.0 }, grid).unwrap();
        for (&t, &v) in hol.thetas().iter().zip(&hol.values) {
            assert!((v - 2.0 * t.sin().powi(2)).abs() < 1e-15);
        }
        assert!(hol.axis_pinned);
        let flat = stationary_profile(StationaryCoeffs { a: 1.0, b: 0.0 }, grid).unwrap();
        assert!(flat.values.iter().all(|&v| v == 1.0));
        assert!(!flat.is_definite());
        assert!(stationary_profile(StationaryCoeffs { a: -1.0, b: 0.5 }, grid).is_err());
    }

    #[test]
    fn maximal_non_holomorphic_has_shear() {
        // ψ = 1 − ½cos2θ: at π/4, ψ = 1, ψ′ = 1, |σ| = |1 − 2|/2 = ½
        let s = StationaryCoeffs { a: 1.0, b: -0.5 };
        let t = PI / 4.0;
        let ts = twist_shear_rotsym(t, s.value(t), s.slope(t), None).unwrap();
        assert_relative_eq!(ts.abs_sigma(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(ts.lambda, 1.5, max_relative = 1e-14);
    }

    #[test]
    fn limit_coefficient_examples() {
        let l = limit_coefficients(PI / 4.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(l.a, 1.0, max_relative = 1e-14);
        assert_relative_eq!(l.b, -1.0, max_relative = 1e-14);
        let l = limit_coefficients(PI / 4.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(l.a, 1.0, max_relative = 1e-14);
        assert_relative_eq!(l.b, -0.5, max_relative = 1e-14);
        assert_relative_eq!(l.axis_value(), 0.5 * (PI / 4.0).tan(), max_relative = 1e-14);
        let t0: f64 = 0.3;
        let l = limit_coefficients(t0, 0.8, 0.0).unwrap();
        assert_relative_eq!(l.a, 0.8 / (1.0 - (2.0 * t0).cos()), max_relative = 1e-14);
        assert!(l.is_holomorphic(1e-14));
        assert!(limit_coefficients(0.0, 1.0, 0.0).is_err());
        assert!(limit_coefficients(0.3, 0.0, 0.0).is_err());
    }

    #[test]
    fn stationary_residual_examples() {
        // ψ = 1 − ½cos2θ, k = 1 at θ = π/6: residual → +0.5
        let s = StationaryCoeffs { a: 1.0, b: -0.5 };
        let mut prev = f64::INFINITY;
        for n in [60usize, 120, 240] {
            let grid = UniformGrid::on(PI / 12.0, PI / 4.0 - 0.01, n).unwrap();
            // put π/6 on a node: choose grid symmetric about it instead
            let _ = grid;
            let g = UniformGrid::on(PI / 6.0 - 0.1, PI / 6.0 + 0.1, n).unwrap();
            let p = PsiProfile::sample(g, |t| s.value(t), false).unwrap();
            let f = stationary_residual_field(&p, 1.0).unwrap();
            let err = (f[n / 2] - 0.5).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-5);

        let g = UniformGrid::new(0.3, 20).unwrap();
        let flat = PsiProfile::sample(g, |_| 1.0, false).unwrap();
        assert!(stationary_residual(&flat, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn delta_identity(theta in 0.01f64..1.5, psi in 0.01f64..10.0, dpsi in -5.0f64..5.0) {
            let ts = twist_shear_rotsym(theta, psi, dpsi, None).unwrap();
            let direct = ts.lambda * ts.lambda - ts.abs_sigma().powi(2);
            let expected = 2.0 * dpsi / theta.tan();
            let scale = ts.lambda * ts.lambda + ts.abs_sigma().powi(2);
            prop_assert!((direct - expected).abs() <= 1e-12 * scale.max(expected.abs()).max(1e-300));
        }

        #[test]
        fn distance_is_four_psi(theta in 0.0f64..3.0, phi in 0.0f64..TAU, psi in 0.0f64..50.0) {
            let line = OrientedLine::from_profile(theta, phi, psi).unwrap();
            prop_assert!((distance_sq_to_origin(&line) - 4.0 * psi).abs() <= 1e-12 * (1.0 + 4.0 * psi));
        }

        #[test]
        fn rotation_invariants(theta in 0.05f64..1.4, phi in 0.0f64..TAU, alpha in -TAU..TAU,
                               psi in 0.1f64..4.0, dpsi in 0.1f64..4.0) {
            let line = OrientedLine::from_profile(theta, phi, psi).unwrap();
            let rot = rotate_line(&line, alpha);
            prop_assert!((distance_sq_to_origin(&rot) - distance_sq_to_origin(&line)).abs() < 1e-12 * (1.0 + psi));
            let p = PolarPoint::from_xi(rot.xi);
            let a = twist_shear_rotsym(theta, psi, dpsi, Some(phi)).unwrap();
            let b = twist_shear_rotsym(p.theta, psi, dpsi, Some(p.phi)).unwrap();
            prop_assert!((a.lambda - b.lambda).abs() < 1e-9 * (1.0 + a.lambda.abs()));
            prop_assert!((a.abs_sigma() - b.abs_sigma()).abs() < 1e-9 * (1.0 + a.abs_sigma()));
        }

        #[test]
        fn limit_satisfies_both_boundary_equations(theta0 in 0.05f64..1.5, c0 in 0.01f64..10.0, c1 in -2.0f64..2.0) {
            let l = limit_coefficients(theta0, c0, c1).unwrap();
            let neumann = 2.0 * c0 / theta0.tan() - c1;
            let scale = l.a.abs() + l.b.abs();
            prop_assert!((l.value(theta0) - c0).abs() <= 1e-14 * scale.max(c0) * 4.0);
            prop_assert!((l.slope(theta0) - neumann).abs() <= 1e-14 * scale.max(neumann.abs()) * 8.0);
        }
    }
}
