//! Second fundamental form and mean curvature of a definite graph.

use num_complex::Complex64;

use super::frames::FrameVector;
use super::jet::GraphSample;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Denominators closer to zero than this are reported as poles.
pub const POLE_LIMIT: f64 = 1e-8;

/// Closed-form coefficients and the normal vectors they assemble to.
///
/// `A(e_a, e_b) = −2·normal(β_ab)` in the unit-normalized frame, and the
/// mean curvature is `H = −(A11 + A22)`, i.e. `H^ξ = 2(β11 + β22)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondFF {
    pub beta11: Complex64,
    pub beta22: Complex64,
    pub beta12: Complex64,
    pub a11: FrameVector,
    pub a22: FrameVector,
    pub a12: FrameVector,
}

impl SecondFF {
    pub fn a21(&self) -> FrameVector {
        self.a12
    }

    /// `H^ξ` assembled from the trace.
    pub fn trace_xi(&self) -> Complex64 {
        -(self.a11.xi + self.a22.xi)
    }
}

fn pole(what: &'static str, value: f64) -> Result<()> {
    if value.abs() < POLE_LIMIT || !value.is_finite() {
        return Err(Error::PoleProximity {
            what,
            value,
            limit: POLE_LIMIT,
        });
    }
    Ok(())
}

/// Normal vector `2Re[β(∂ξ + N∂η − ∂F̄ ∂η̄)]` as complex components.
pub fn normal_vector(jet: &GraphSample, beta: Complex64) -> FrameVector {
    FrameVector {
        xi: beta,
        eta: beta * jet.normal_eta() - beta.conj() * jet.dbf,
    }
}

pub fn second_fundamental_form(jet: &GraphSample) -> Result<SecondFF> {
    jet.require_definite()?;
    let (lam, a, sig) = (jet.lambda, jet.abs_sigma, jet.sigma);
    let (da, dba) = (jet.d_abs_sigma, jet.db_abs_sigma());
    let (dl, dbl) = (jet.d_lambda, jet.db_lambda());
    let (dp, dbp) = (jet.d_varphi, jet.db_varphi());
    let (du, dbu) = (jet.du, jet.dbu());
    let ep = Complex64::from_polar(1.0, jet.varphi);
    let e = Complex64::from_polar(jet.e2u(), jet.varphi);
    let delta = lam * lam - a * a;

    let d11 = (a + lam).powi(2) * (lam - a);
    let d22 = (a - lam).powi(2) * (-a - lam);
    let d12 = (a * a - lam * lam) * delta.abs().sqrt();
    pole("beta11 denominator", d11)?;
    pole("beta22 denominator", d22)?;
    pole("beta12 denominator", d12)?;

    let b11 = (I * lam * da - sig * dba + I * lam * dl - sig * dbl
        + a * (a + lam) * (dp - I * ep * dbp + 2.0 * I * du - 2.0 * ep * dbu))
        / (2.0 * e * d11);
    let b22 = (-I * lam * da + sig * dba + I * lam * dl - sig * dbl
        + a * (a - lam) * (dp + I * ep * dbp + 2.0 * I * du + 2.0 * ep * dbu))
        / (2.0 * e * d22);
    let b12 = (-a * da + I * lam * ep * dba + lam * dl - I * sig * dbl) / (2.0 * e * d12);

    Ok(SecondFF {
        beta11: b11,
        beta22: b22,
        beta12: b12,
        a11: normal_vector(jet, -2.0 * b11),
        a22: normal_vector(jet, -2.0 * b22),
        a12: normal_vector(jet, -2.0 * b12),
    })
}

/// The trace coefficient γ; `H^ξ = 2γ`.
pub fn gamma(jet: &GraphSample) -> Result<Complex64> {
    jet.require_definite()?;
    let (lam, a, sig) = (jet.lambda, jet.abs_sigma, jet.sigma);
    let d = a * a - lam * lam;
    let num = -lam * (-I * lam * jet.d_abs_sigma + sig * jet.db_abs_sigma())
        - a * (I * lam * jet.d_lambda - sig * jet.db_lambda())
        - a * d * (jet.d_varphi + 2.0 * I * jet.du);
    Ok(num / (Complex64::from_polar(jet.e2u(), jet.varphi) * d * d))
}

/// `H^ξ = (2e^{−2u}/√|Δ|)[i e^{−2u} ∂(σ̄e^{2u}/√|Δ|) − ∂̄(λ/√|Δ|)]`.
pub fn mean_curvature(jet: &GraphSample) -> Result<Complex64> {
    jet.require_definite()?;
    let (lam, sig) = (jet.lambda, jet.sigma);
    let delta = jet.delta();
    let s = delta.abs().sqrt();
    let sgn = delta.signum();
    let d_delta = 2.0 * lam * jet.d_lambda - (sig.conj() * jet.d_sigma + sig * jet.d_sigma_bar);
    let ds = sgn * d_delta / (2.0 * s);
    let dbs = ds.conj();
    let e2u = jet.e2u();
    let de2u = 2.0 * jet.du * e2u;
    let t1 = (jet.d_sigma_bar * e2u + sig.conj() * de2u) / s - sig.conj() * e2u * ds / (s * s);
    let t2 = jet.db_lambda() / s - lam * dbs / (s * s);
    Ok(2.0 / (e2u * s) * (I / e2u * t1 - t2))
}

/// `H^ξ` three ways: Eq.-style closed form, γ form, and the assembled trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCurvatureForms {
    pub closed_form: Complex64,
    pub gamma_form: Complex64,
    pub trace_form: Complex64,
}

impl MeanCurvatureForms {
    pub fn max_disagreement(&self) -> f64 {
        let (a, b, c) = (self.closed_form, self.gamma_form, self.trace_form);
        (a - b).norm().max((a - c).norm()).max((b - c).norm())
    }
}

pub fn mean_curvature_forms(jet: &GraphSample) -> Result<MeanCurvatureForms> {
    Ok(MeanCurvatureForms {
        closed_form: mean_curvature(jet)?,
        gamma_form: 2.0 * gamma(jet)?,
        trace_form: second_fundamental_form(jet)?.trace_xi(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StationaryCoeffs;
    use crate::oracle::connection::{to_complex_pair, ConnectionOracle};
    use crate::oracle::frames::normalized_alphas;
    use crate::oracle::jet::{radial_jet, random_definite_jet, TwistSign};
    use crate::profiles::ClosedProfile;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_form_matches_connection_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for sign in [TwistSign::Positive, TwistSign::Negative] {
            for _ in 0..10 {
                let (_, j) = random_definite_jet(&mut rng, sign, 0.05);
                let o = ConnectionOracle::new(&j).unwrap();
                let h = mean_curvature(&j).unwrap();
                assert!(
                    (h - o.mean_xi()).norm() < 1e-9 * (1.0 + h.norm()),
                    "{h} vs {}",
                    o.mean_xi()
                );
                let f = mean_curvature_forms(&j).unwrap();
                assert!(f.max_disagreement() < 1e-8 * (1.0 + h.norm()));
            }
        }
    }

    #[test]
    fn beta_coefficients_match_connection_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let (_, j) = random_definite_jet(&mut rng, TwistSign::Positive, 0.05);
            let o = ConnectionOracle::new(&j).unwrap();
            let (a1, a2) = normalized_alphas(&j);
            let s = second_fundamental_form(&j).unwrap();
            let scale = 1.0 + s.beta22.norm();
            for (alpha, beta, vec) in [(a1, a1, s.a11), (a2, a2, s.a22), (a1, a2, s.a12)] {
                let (vx, ve) = to_complex_pair(&o.second_on(alpha, beta));
                assert!((vx - vec.xi).norm() < 1e-8 * scale);
                assert!((ve - vec.eta).norm() < 1e-8 * scale * (1.0 + ve.norm()));
            }
        }
    }

    #[test]
    fn holomorphic_graphs_are_maximal() {
        let p = ClosedProfile::Stationary(StationaryCoeffs { a: 0.9, b: -0.9 });
        for &t in &[0.05, 0.2, 0.4] {
            let j = radial_jet(&p, t, 0.3).unwrap();
            assert!(mean_curvature(&j).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn non_holomorphic_stationary_profile_is_maximal() {
        let p = ClosedProfile::Stationary(StationaryCoeffs { a: 1.0, b: -0.5 });
        for i in 0..=6 {
            let t = 0.1 + 0.05 * i as f64;
            let j = radial_jet(&p, t, 0.9).unwrap();
            assert!(j.abs_sigma > 1e-3);
            assert!(mean_curvature(&j).unwrap().norm() < 1e-6);
        }
    }

    #[test]
    fn pole_proximity_flagged() {
        // λ = 1 and |σ| = 1 − 1e−10: definite, but λ − |σ| sits on the β poles.
        let z = Complex64::new(0.0, 0.0);
        let j =
            GraphSample::from_derivatives(z, [z, I, Complex64::new(-(1.0 - 1e-10), 0.0), z, z, z]);
        assert!(j.delta() > 0.0);
        assert!(matches!(
            second_fundamental_form(&j),
            Err(Error::PoleProximity { .. })
        ));
        assert!(mean_curvature(&j).is_ok());
    }
}
