//! Adapted frames and their dual 1-forms along a definite graph.
//!
//! Vectors are stored by complex components `(v^ξ, v^η)`; the real vector
//! is `2Re[v^ξ ∂ξ + v^η ∂η]`. The closed-form frames are tried first; the
//! operative frame is whichever closed form passes the duality check, with
//! metric orthonormalization of the coordinate basis as the last resort.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::connection::metric_complex;
use super::jet::GraphSample;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Duality residual above which a closed-form frame is abandoned.
pub const DUALITY_FALLBACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameVector {
    pub xi: Complex64,
    pub eta: Complex64,
}

impl FrameVector {
    pub fn components(&self) -> [Complex64; 4] {
        [self.xi, self.eta, self.xi.conj(), self.eta.conj()]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            xi: self.xi * s,
            eta: self.eta * s,
        }
    }

    fn sub(&self, o: &Self, s: f64) -> Self {
        Self {
            xi: self.xi - o.xi * s,
            eta: self.eta - o.eta * s,
        }
    }
}

/// One-form `v ↦ scale·Im[c_ξ v^ξ + c_η v^η]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneForm {
    pub c_xi: Complex64,
    pub c_eta: Complex64,
    pub scale: f64,
}

impl OneForm {
    pub fn eval(&self, v: &FrameVector) -> f64 {
        self.scale * (self.c_xi * v.xi + self.c_eta * v.eta).im
    }

    /// Components on `(ξ, η, ξ̄, η̄)` so that `θ(v) = Σ θ_j v^j`.
    pub fn components(&self) -> [Complex64; 4] {
        let k = self.scale / (2.0 * I);
        [
            k * self.c_xi,
            k * self.c_eta,
            -k * self.c_xi.conj(),
            -k * self.c_eta.conj(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameSource {
    /// Normalization scalars exactly as in the closed-form statement.
    Printed,
    /// Closed form with unit-norm scalars and rescaled dual forms.
    Normalized,
    /// Metric Gram–Schmidt of the coordinate basis.
    Orthonormalized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    /// `E1, E2` tangent, `E3, E4` normal.
    pub e: [FrameVector; 4],
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub source: FrameSource,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoFrame {
    pub theta: [OneForm; 4],
}

/// What the frame construction found at one jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameReport {
    pub frame: Frame,
    pub coframe: CoFrame,
    pub printed_duality_residual: f64,
    pub printed_gram_residual: f64,
    pub duality_residual: f64,
    pub gram_residual: f64,
}

/// `G(u, v)` for two real vectors.
pub fn inner(jet: &GraphSample, u: &FrameVector, v: &FrameVector) -> f64 {
    let g = metric_complex(jet.xi, jet.f);
    bilinear(&g, u, v)
}

fn bilinear(g: &Matrix4<Complex64>, u: &FrameVector, v: &FrameVector) -> f64 {
    let (a, b) = (u.components(), v.components());
    let mut s = ZERO;
    for i in 0..4 {
        for j in 0..4 {
            s += a[i] * g[(i, j)] * b[j];
        }
    }
    s.re
}

pub fn gram(jet: &GraphSample, e: &[FrameVector; 4]) -> [[f64; 4]; 4] {
    let g = metric_complex(jet.xi, jet.f);
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = bilinear(&g, &e[i], &e[j]);
        }
    }
    out
}

pub fn duality(cf: &CoFrame, e: &[FrameVector; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            out[a][b] = cf.theta[a].eval(&e[b]);
        }
    }
    out
}

/// Expected diagonal of the Gram matrix: `(−1, −1, +1, +1)` for λ > 0, reversed for λ < 0.
pub fn signature_pattern(lambda: f64) -> [f64; 4] {
    let s = -lambda.signum();
    [s, s, -s, -s]
}

fn max_dev(m: &[[f64; 4]; 4], diag: [f64; 4]) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let target = if i == j { diag[i] } else { 0.0 };
            r = r.max((m[i][j] - target).abs());
        }
    }
    r
}

pub fn gram_residual(jet: &GraphSample, e: &[FrameVector; 4]) -> f64 {
    max_dev(&gram(jet, e), signature_pattern(jet.lambda))
}

pub fn duality_residual(cf: &CoFrame, e: &[FrameVector; 4]) -> f64 {
    max_dev(&duality(cf, e), [1.0; 4])
}

fn tangent(jet: &GraphSample, a: Complex64) -> FrameVector {
    FrameVector {
        xi: a,
        eta: a * jet.df + (a * jet.dbf.conj()).conj(),
    }
}

fn normal(jet: &GraphSample, a: Complex64) -> FrameVector {
    FrameVector {
        xi: a,
        eta: a * jet.normal_eta() - a.conj() * jet.dbf,
    }
}

/// Frame vectors built from two normalization scalars in the closed-form pattern.
pub fn closed_form_vectors(jet: &GraphSample, a1: Complex64, a2: Complex64) -> [FrameVector; 4] {
    [
        tangent(jet, a1),
        tangent(jet, a2),
        normal(jet, a2),
        normal(jet, a1),
    ]
}

/// The closed-form dual forms for scalars `a1, a2`, multiplied by `k`.
pub fn closed_form_forms(jet: &GraphSample, a1: Complex64, a2: Complex64, k: f64) -> CoFrame {
    let dfb = jet.dbf.conj();
    let n = jet.normal_eta();
    let scale = jet.e2u() * k;
    let tan_form = |a: Complex64| OneForm {
        c_xi: a * dfb + a.conj() * n,
        c_eta: -a.conj(),
        scale,
    };
    let nor_form = |a: Complex64| OneForm {
        c_xi: a * dfb - a.conj() * jet.df,
        c_eta: a.conj(),
        scale,
    };
    CoFrame {
        theta: [tan_form(a1), tan_form(a2), nor_form(a2), nor_form(a1)],
    }
}

/// Normalization scalars `α1, α2` as stated, principal square roots.
pub fn printed_alphas(jet: &GraphSample) -> (Complex64, Complex64) {
    let (lam, s) = (jet.lambda, jet.abs_sigma);
    let ph = |q: f64| (Complex64::new(-jet.u, -0.5 * jet.varphi + q * PI)).exp();
    let r2 = 2f64.sqrt();
    let a1 = ph(0.25) / (r2 * Complex64::new(-lam - s, 0.0).sqrt());
    let a2 = ph(-0.25) / (r2 * Complex64::new(-lam + s, 0.0).sqrt());
    (a1, a2)
}

/// Unit-norm scalars: `α1 = e^{−u}e^{i(−φ/2−3π/4)}/√|λ+|σ||`, `α2 = e^{−u}e^{i(−φ/2−π/4)}/√|λ−|σ||`.
pub fn normalized_alphas(jet: &GraphSample) -> (Complex64, Complex64) {
    let (lam, s) = (jet.lambda, jet.abs_sigma);
    let e = (-jet.u).exp();
    let a1 = Complex64::from_polar(e / (lam + s).abs().sqrt(), -0.5 * jet.varphi - 0.75 * PI);
    let a2 = Complex64::from_polar(e / (lam - s).abs().sqrt(), -0.5 * jet.varphi - 0.25 * PI);
    (a1, a2)
}

fn check_frame_domain(jet: &GraphSample) -> Result<()> {
    jet.require_definite()?;
    let gap = (jet.lambda.abs() - jet.abs_sigma).abs();
    if gap < 1e-12 {
        return Err(Error::PoleProximity {
            what: "frame scalars",
            value: gap,
            limit: 1e-12,
        });
    }
    Ok(())
}

/// The closed-form frames with the stated scalars.
pub fn printed_frame(jet: &GraphSample) -> Result<(Frame, CoFrame)> {
    check_frame_domain(jet)?;
    let (a1, a2) = printed_alphas(jet);
    Ok((
        Frame {
            e: closed_form_vectors(jet, a1, a2),
            alpha1: a1,
            alpha2: a2,
            source: FrameSource::Printed,
        },
        closed_form_forms(jet, a1, a2, 1.0),
    ))
}

/// Closed-form frame with unit-norm scalars; dual forms rescaled by `−sgn(λ)/2`.
pub fn normalized_frame(jet: &GraphSample) -> Result<(Frame, CoFrame)> {
    check_frame_domain(jet)?;
    let (a1, a2) = normalized_alphas(jet);
    Ok((
        Frame {
            e: closed_form_vectors(jet, a1, a2),
            alpha1: a1,
            alpha2: a2,
            source: FrameSource::Normalized,
        },
        closed_form_forms(jet, a1, a2, -0.5 * jet.lambda.signum()),
    ))
}

/// Gram–Schmidt of `{∂x, ∂y}` tangents and `{∂p, ∂q}` split off the tangent plane.
pub fn orthonormalized_frame(jet: &GraphSample) -> Result<(Frame, CoFrame)> {
    check_frame_domain(jet)?;
    let g = metric_complex(jet.xi, jet.f);
    let ip = |u: &FrameVector, v: &FrameVector| bilinear(&g, u, v);
    let tx = FrameVector {
        xi: Complex64::new(1.0, 0.0),
        eta: jet.df + jet.dbf,
    };
    let ty = FrameVector {
        xi: I,
        eta: I * (jet.df - jet.dbf),
    };
    let mut basis = vec![tx, ty];
    // Fibre directions made normal by subtracting their tangent parts.
    let fibres = [
        FrameVector {
            xi: ZERO,
            eta: Complex64::new(1.0, 0.0),
        },
        FrameVector { xi: ZERO, eta: I },
    ];
    let mut out: Vec<FrameVector> = Vec::with_capacity(4);
    let mut norms: Vec<f64> = Vec::with_capacity(4);
    for v in fibres.iter() {
        basis.push(*v);
    }
    for v in basis {
        let mut v = v;
        for (e, n) in out.iter().zip(&norms) {
            v = v.sub(e, ip(e, &v) / n);
        }
        let n = ip(&v, &v);
        if n.abs() < 1e-14 {
            return Err(Error::Degenerate { delta: jet.delta() });
        }
        let s = n.signum();
        let v = v.scaled(1.0 / n.abs().sqrt());
        out.push(v);
        norms.push(s);
    }
    let e = [out[0], out[1], out[2], out[3]];
    // θ^a = ε_a G(E_a, ·); a real functional Re(Σ c_j v^j) is Im[i(c_ξ + c̄_ξ̄)v^ξ + i(c_η + c̄_η̄)v^η].
    let mut theta = [OneForm {
        c_xi: ZERO,
        c_eta: ZERO,
        scale: 1.0,
    }; 4];
    for a in 0..4 {
        let ea = e[a].components();
        let mut c = [ZERO; 4];
        for j in 0..4 {
            for i in 0..4 {
                c[j] += ea[i] * g[(i, j)];
            }
        }
        theta[a] = OneForm {
            c_xi: I * (c[0] + c[2].conj()),
            c_eta: I * (c[1] + c[3].conj()),
            scale: norms[a],
        };
    }
    Ok((
        Frame {
            e,
            alpha1: ZERO,
            alpha2: ZERO,
            source: FrameSource::Orthonormalized,
        },
        CoFrame { theta },
    ))
}

type FrameBuilder = fn(&GraphSample) -> Result<(Frame, CoFrame)>;

/// Operative frame with residual bookkeeping of the stated closed form.
pub fn adapted_frame(jet: &GraphSample) -> Result<FrameReport> {
    let (pf, pc) = printed_frame(jet)?;
    let printed_duality_residual = duality_residual(&pc, &pf.e);
    let printed_gram_residual = gram_residual(jet, &pf.e);
    let candidates: [FrameBuilder; 3] = [printed_frame, normalized_frame, orthonormalized_frame];
    let mut last = None;
    for build in candidates {
        let (f, c) = build(jet)?;
        let d = duality_residual(&c, &f.e);
        let g = gram_residual(jet, &f.e);
        let report = FrameReport {
            frame: f,
            coframe: c,
            printed_duality_residual,
            printed_gram_residual,
            duality_residual: d,
            gram_residual: g,
        };
        if d <= DUALITY_FALLBACK && g <= DUALITY_FALLBACK {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("at least one candidate"))
}

pub fn frames(jet: &GraphSample) -> Result<Frame> {
    adapted_frame(jet).map(|r| r.frame)
}

pub fn dual_basis(jet: &GraphSample) -> Result<CoFrame> {
    adapted_frame(jet).map(|r| r.coframe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::jet::{random_definite_jet, TwistSign};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tangent_of_graph(jet: &GraphSample, v: Complex64) -> FrameVector {
        tangent(jet, v)
    }

    #[test]
    fn normalized_frame_is_operative_for_both_twist_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for sign in [TwistSign::Positive, TwistSign::Negative] {
            for _ in 0..25 {
                let (_, j) = random_definite_jet(&mut rng, sign, 0.05);
                let r = adapted_frame(&j).unwrap();
                assert_eq!(r.frame.source, FrameSource::Normalized);
                assert!(r.duality_residual < 1e-10, "{}", r.duality_residual);
                assert!(r.gram_residual < 1e-10);
                assert!(r.printed_gram_residual > 1e-3);
                match sign {
                    TwistSign::Positive => assert!(r.printed_duality_residual > 1e-3),
                    _ => assert!(r.printed_duality_residual < 1e-12),
                }
            }
        }
    }

    #[test]
    fn printed_frame_is_orthogonal_but_not_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (_, j) = random_definite_jet(&mut rng, TwistSign::Positive, 0.05);
        let (f, _) = printed_frame(&j).unwrap();
        let g = gram(&j, &f.e);
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert!(g[a][b].abs() < 1e-12);
                }
            }
        }
        assert!((g[0][0].abs() - 1.0).abs() > 1e-3);
    }

    #[test]
    fn orthonormalized_fallback_is_dual_and_adapted() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for sign in [TwistSign::Positive, TwistSign::Negative] {
            let (_, j) = random_definite_jet(&mut rng, sign, 0.05);
            let (f, c) = orthonormalized_frame(&j).unwrap();
            assert!(duality_residual(&c, &f.e) < 1e-10);
            assert!(gram_residual(&j, &f.e) < 1e-10);
            let t = tangent_of_graph(&j, Complex64::new(0.3, -0.8));
            assert!(inner(&j, &f.e[2], &t).abs() < 1e-12);
            assert!(inner(&j, &f.e[3], &t).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_forms_annihilate_graph_tangents() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let (_, j) = random_definite_jet(&mut rng, TwistSign::Positive, 0.05);
        let cf = dual_basis(&j).unwrap();
        for v in [Complex64::new(1.0, 0.0), I, Complex64::new(0.4, 0.9)] {
            let t = tangent_of_graph(&j, v);
            assert!(cf.theta[2].eval(&t).abs() < 1e-12);
            assert!(cf.theta[3].eval(&t).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_jets_rejected() {
        let j = GraphSample::zero(Complex64::new(0.1, 0.1));
        assert!(frames(&j).is_err());
    }

    #[test]
    fn form_components_reproduce_evaluation() {
        let f = OneForm {
            c_xi: Complex64::new(0.3, -1.2),
            c_eta: Complex64::new(-0.5, 0.4),
            scale: 1.7,
        };
        let v = FrameVector {
            xi: Complex64::new(0.2, 0.9),
            eta: Complex64::new(-1.1, 0.3),
        };
        let c = f.components();
        let vc = v.components();
        let s: Complex64 = (0..4).map(|j| c[j] * vc[j]).sum();
        assert!((s.re - f.eval(&v)).abs() < 1e-14 && s.im.abs() < 1e-14);
    }
}
