//! Independent route through the ambient Levi-Civita connection.
//!
//! The neutral metric is written in real coordinates `X = (x, y, p, q)`,
//! `ξ = x + iy`, `η = p + iq`; Christoffel symbols come from its analytic
//! first derivatives. The second fundamental form of a graph is then
//! `A(T_i, T_j) = P⊥(∂_i∂_j X + Γ(T_i, T_j))` with the metric projector
//! `P⊥ = I − T g⁻¹ Tᵀ G`, and `H = g^{ij} A_ij`.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use super::jet::GraphSample;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Complex components of the unit real coordinate vectors in `(ξ, η, ξ̄, η̄)`.
fn complexified() -> [[Complex64; 4]; 4] {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [[o, z, o, z], [I, z, -I, z], [z, o, z, o], [z, I, z, -I]]
}

/// The neutral metric as a symmetric complex bilinear form in `(ξ, η, ξ̄, η̄)`.
pub fn metric_complex(xi: Complex64, eta: Complex64) -> Matrix4<Complex64> {
    let w = 1.0 + xi.norm_sqr();
    let m = (xi.conj() * eta).im;
    complex_from_parts(Complex64::new(0.0, 1.0 / (w * w)), 4.0 * m / (w * w * w))
}

/// Metric with `a = i/w²` on the (η, ξ̄) slots and `b = 4 Im(ξ̄η)/w³` on (ξ, ξ̄).
fn complex_from_parts(a: Complex64, b: f64) -> Matrix4<Complex64> {
    let mut g = Matrix4::zeros();
    g[(0, 3)] = -a;
    g[(3, 0)] = -a;
    g[(1, 2)] = a;
    g[(2, 1)] = a;
    g[(0, 2)] = Complex64::new(b, 0.0);
    g[(2, 0)] = Complex64::new(b, 0.0);
    g
}

fn realify(gc: &Matrix4<Complex64>) -> Matrix4<f64> {
    let c = complexified();
    let mut m = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let mut s = Complex64::new(0.0, 0.0);
            for a in 0..4 {
                for b in 0..4 {
                    s += c[i][a] * gc[(a, b)] * c[j][b];
                }
            }
            m[(i, j)] = s.re;
        }
    }
    m
}

/// The neutral metric in real coordinates.
pub fn metric_real(x: &Vector4<f64>) -> Matrix4<f64> {
    realify(&metric_complex(
        Complex64::new(x[0], x[1]),
        Complex64::new(x[2], x[3]),
    ))
}

/// `∂_k G` in real coordinates, analytically.
pub fn metric_real_derivatives(x: &Vector4<f64>) -> [Matrix4<f64>; 4] {
    let (xr, yr, p, q) = (x[0], x[1], x[2], x[3]);
    let w = 1.0 + xr * xr + yr * yr;
    let m = xr * q - yr * p;
    let dw = [2.0 * xr, 2.0 * yr, 0.0, 0.0];
    let dm = [q, -p, -yr, xr];
    let mut out = [Matrix4::zeros(); 4];
    for k in 0..4 {
        // a = i/w², b = 4m/w³
        let da = Complex64::new(0.0, -2.0 * dw[k] / (w * w * w));
        let db = 4.0 * dm[k] / (w * w * w) - 12.0 * m * dw[k] / (w * w * w * w);
        out[k] = realify(&complex_from_parts(da, db));
    }
    out
}

/// Christoffel symbols `Γ[a][b][c] = Γ^a_{bc}`.
pub fn christoffel(x: &Vector4<f64>) -> [[[f64; 4]; 4]; 4] {
    let g = metric_real(x);
    let gi = g.try_inverse().expect("neutral metric is non-degenerate");
    let dg = metric_real_derivatives(x);
    let mut gam = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut s = 0.0;
                for d in 0..4 {
                    s += gi[(a, d)] * (dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)]);
                }
                gam[a][b][c] = 0.5 * s;
            }
        }
    }
    gam
}

fn contract(gam: &[[[f64; 4]; 4]; 4], u: &Vector4<f64>, v: &Vector4<f64>) -> Vector4<f64> {
    let mut out = Vector4::zeros();
    for a in 0..4 {
        let mut s = 0.0;
        for b in 0..4 {
            for c in 0..4 {
                s += gam[a][b][c] * u[b] * v[c];
            }
        }
        out[a] = s;
    }
    out
}

/// Real vector `(x, y, p, q)` as complex components `(v^ξ, v^η)`.
pub fn to_complex_pair(v: &Vector4<f64>) -> (Complex64, Complex64) {
    (Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
}

/// `T` with `v_c = T v_r` mapping real components to `(ξ, η, ξ̄, η̄)` components.
pub fn real_to_complex() -> Matrix4<Complex64> {
    let o = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    Matrix4::new(o, I, z, z, z, z, o, I, o, -I, z, z, z, z, o, -I)
}

/// A real-coordinate operator expressed in complex components.
pub fn operator_to_complex(p: &Matrix4<f64>) -> Matrix4<Complex64> {
    let t = real_to_complex();
    let ti = t.try_inverse().expect("coordinate change is invertible");
    t * p.map(|v| Complex64::new(v, 0.0)) * ti
}

/// Second-order extrinsic data of a graph computed through the ambient connection.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionOracle {
    pub tangents: [Vector4<f64>; 2],
    pub induced: Matrix2<f64>,
    pub perp: Matrix4<f64>,
    /// `A(∂_i, ∂_j)` for the coordinate tangents `∂_x, ∂_y`.
    pub second: [[Vector4<f64>; 2]; 2],
    pub mean: Vector4<f64>,
}

impl ConnectionOracle {
    pub fn new(jet: &GraphSample) -> Option<Self> {
        let x = Vector4::new(jet.xi.re, jet.xi.im, jet.f.re, jet.f.im);
        let fx = jet.df + jet.dbf;
        let fy = I * (jet.df - jet.dbf);
        let fxx = jet.ddf + 2.0 * jet.ddbf + jet.dbdbf;
        let fxy = I * (jet.ddf - jet.dbdbf);
        let fyy = -(jet.ddf - 2.0 * jet.ddbf + jet.dbdbf);
        let t = [
            Vector4::new(1.0, 0.0, fx.re, fx.im),
            Vector4::new(0.0, 1.0, fy.re, fy.im),
        ];
        let hess = [[fxx, fxy], [fxy, fyy]];

        let gm = metric_real(&x);
        let gam = christoffel(&x);
        let g = Matrix2::from_fn(|i, j| t[i].dot(&(gm * t[j])));
        let gi = g.try_inverse()?;
        let mut perp = Matrix4::identity();
        for i in 0..2 {
            for j in 0..2 {
                perp -= t[i] * (gm * t[j]).transpose() * gi[(i, j)];
            }
        }
        let mut second = [[Vector4::zeros(); 2]; 2];
        let mut mean = Vector4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let s = hess[i][j];
                let v = Vector4::new(0.0, 0.0, s.re, s.im) + contract(&gam, &t[i], &t[j]);
                second[i][j] = perp * v;
                mean += second[i][j] * gi[(i, j)];
            }
        }
        Some(Self {
            tangents: t,
            induced: g,
            perp,
            second,
            mean,
        })
    }

    pub fn mean_xi(&self) -> Complex64 {
        to_complex_pair(&self.mean).0
    }

    /// `A(X, Y)` for tangent vectors `2Re[α ∂ξ + …]`, `2Re[β ∂ξ + …]`.
    pub fn second_on(&self, alpha: Complex64, beta: Complex64) -> Vector4<f64> {
        let a = [alpha.re, alpha.im];
        let b = [beta.re, beta.im];
        let mut v = Vector4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                v += self.second[i][j] * (a[i] * b[j]);
            }
        }
        v
    }

    /// Induced metric in `(ξ, ξ̄)` components.
    pub fn induced_complex(&self) -> [[Complex64; 2]; 2] {
        let g = &self.induced;
        let xx = Complex64::new(g[(0, 0)] - g[(1, 1)], -2.0 * g[(0, 1)]) / 4.0;
        let xb = Complex64::new((g[(0, 0)] + g[(1, 1)]) / 4.0, 0.0);
        [[xx, xb], [xb, xx.conj()]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{induced_metric, twist_shear_graph};
    use crate::oracle::jet::{random_definite_jet, TwistSign};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn metric_derivatives_match_differences() {
        let x = Vector4::new(0.3, -0.2, 0.7, 0.4);
        let d = metric_real_derivatives(&x);
        let h = 1e-6;
        for k in 0..4 {
            let mut e = Vector4::zeros();
            e[k] = h;
            let fd = (metric_real(&(x + e)) - metric_real(&(x - e))) / (2.0 * h);
            assert!((fd - d[k]).amax() < 1e-8);
        }
    }

    #[test]
    fn metric_has_neutral_signature() {
        let g = metric_real(&Vector4::new(0.3, -0.2, 0.7, 0.4));
        let eig = g.symmetric_eigen().eigenvalues;
        assert_eq!(eig.iter().filter(|&&e| e > 0.0).count(), 2);
        assert_eq!(eig.iter().filter(|&&e| e < 0.0).count(), 2);
    }

    #[test]
    fn pullback_matches_induced_metric_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let (_, j) = random_definite_jet(&mut rng, TwistSign::Any, 0.05);
            let o = ConnectionOracle::new(&j).unwrap();
            let m = induced_metric(&twist_shear_graph(&j), j.xi);
            let c = o.induced_complex();
            for a in 0..2 {
                for b in 0..2 {
                    assert!((c[a][b] - m.components[a][b]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn perpendicular_projector_kills_tangents() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (_, j) = random_definite_jet(&mut rng, TwistSign::Positive, 0.05);
        let o = ConnectionOracle::new(&j).unwrap();
        for t in &o.tangents {
            assert!((o.perp * t).amax() < 1e-12);
        }
        assert!((o.perp * o.perp - o.perp).amax() < 1e-12);
    }
}
