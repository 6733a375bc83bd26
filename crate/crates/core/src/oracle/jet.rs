//! Second-order jets of graphical sections `η = F(ξ, ξ̄)`.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::profiles::RadialProfile;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Below this |σ| the shear phase is a gauge freedom and is fixed to zero.
pub const GAUGE_EPS: f64 = 1e-12;

/// Pointwise jet of a section with the derived twist/shear quantities.
///
/// `d_*` are ∂ = ∂/∂ξ derivatives, `db_*` are ∂̄ derivatives. For real
/// fields `f`, `∂̄f = conj(∂f)` and only `∂f` is stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSample {
    pub xi: Complex64,
    pub f: Complex64,
    pub df: Complex64,
    pub dbf: Complex64,
    pub ddf: Complex64,
    pub ddbf: Complex64,
    pub dbdbf: Complex64,

    pub w: f64,
    pub u: f64,
    pub du: Complex64,

    pub lambda: f64,
    pub sigma: Complex64,
    pub abs_sigma: f64,
    pub varphi: f64,
    pub rho: Complex64,

    pub d_sigma: Complex64,
    pub db_sigma: Complex64,
    pub d_sigma_bar: Complex64,
    pub db_sigma_bar: Complex64,
    pub d_rho: Complex64,
    pub db_rho: Complex64,
    pub d_lambda: Complex64,
    pub d_abs_sigma: Complex64,
    pub d_varphi: Complex64,
}

impl GraphSample {
    /// Builds the jet from `[F, ∂F, ∂̄F, ∂²F, ∂∂̄F, ∂̄²F]` at `xi`.
    pub fn from_derivatives(xi: Complex64, d: [Complex64; 6]) -> Self {
        let [f, df, dbf, ddf, ddbf, dbdbf] = d;
        let xb = xi.conj();
        let w = 1.0 + xi.norm_sqr();

        let sigma = -dbf.conj();
        let d_sigma = -dbdbf.conj();
        let db_sigma = -ddbf.conj();
        let d_sigma_bar = db_sigma.conj();
        let db_sigma_bar = d_sigma.conj();

        let rho = df - 2.0 * xb * f / w;
        let d_rho = ddf - 2.0 * xb * df / w + 2.0 * xb * xb * f / (w * w);
        let db_rho = ddbf - 2.0 * f / w - 2.0 * xb * dbf / w + 2.0 * xb * xi * f / (w * w);
        let lambda = rho.im;
        let d_lambda = (d_rho - db_rho.conj()) / (2.0 * I);

        let abs_sigma = sigma.norm();
        let (varphi, d_abs_sigma, d_varphi) = if abs_sigma < GAUGE_EPS {
            (0.0, ZERO, ZERO)
        } else {
            let da = (sigma.conj() * d_sigma + sigma * d_sigma_bar) / (2.0 * abs_sigma);
            let dp = (d_sigma / sigma - d_sigma_bar / sigma.conj()) / (2.0 * I);
            (sigma.arg(), da, dp)
        };

        Self {
            xi,
            f,
            df,
            dbf,
            ddf,
            ddbf,
            dbdbf,
            w,
            u: (2.0 / w).ln(),
            du: -xb / w,
            lambda,
            sigma,
            abs_sigma,
            varphi,
            rho,
            d_sigma,
            db_sigma,
            d_sigma_bar,
            db_sigma_bar,
            d_rho,
            db_rho,
            d_lambda,
            d_abs_sigma,
            d_varphi,
        }
    }

    pub fn zero(xi: Complex64) -> Self {
        Self::from_derivatives(xi, [ZERO; 6])
    }

    pub fn delta(&self) -> f64 {
        self.lambda * self.lambda - self.abs_sigma * self.abs_sigma
    }

    /// `∂̄u = conj(∂u)`.
    pub fn dbu(&self) -> Complex64 {
        self.du.conj()
    }

    pub fn db_lambda(&self) -> Complex64 {
        self.d_lambda.conj()
    }

    pub fn db_abs_sigma(&self) -> Complex64 {
        self.d_abs_sigma.conj()
    }

    pub fn db_varphi(&self) -> Complex64 {
        self.d_varphi.conj()
    }

    pub fn e2u(&self) -> f64 {
        (2.0 * self.u).exp()
    }

    /// Coefficient of ∂/∂η in the normal directions: `∂̄F̄ − 2(F∂u − F̄∂̄u)`.
    pub fn normal_eta(&self) -> Complex64 {
        self.df.conj() - 2.0 * (self.f * self.du - self.f.conj() * self.dbu())
    }

    pub fn require_definite(&self) -> Result<()> {
        let d = self.delta();
        if !(d.abs() > 1e-14 * (self.lambda * self.lambda).max(1e-300)) || !d.is_finite() {
            return Err(Error::Degenerate { delta: d });
        }
        Ok(())
    }
}

/// Polynomial section `F = Σ c_{jk} ξ^j ξ̄^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySection {
    pub coeffs: Vec<Vec<Complex64>>,
}

impl PolySection {
    /// Random coefficients with total degree ≤ `deg`, real and imaginary parts N(0, scale²).
    pub fn random<R: Rng>(rng: &mut R, deg: usize, scale: f64) -> Self {
        let mut coeffs = vec![vec![ZERO; deg + 1]; deg + 1];
        for (j, row) in coeffs.iter_mut().enumerate() {
            for c in row.iter_mut().take(deg + 1 - j) {
                *c = Complex64::new(gaussian(rng), gaussian(rng)) * scale;
            }
        }
        Self { coeffs }
    }

    pub fn seeded(seed: u64, deg: usize, scale: f64) -> Self {
        use rand::SeedableRng;
        Self::random(
            &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed),
            deg,
            scale,
        )
    }

    /// `∂^dj ∂̄^dk F` at `xi`.
    pub fn derivative(&self, xi: Complex64, dj: usize, dk: usize) -> Complex64 {
        let xb = xi.conj();
        let mut s = ZERO;
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if c == ZERO || j < dj || k < dk {
                    continue;
                }
                let fj: f64 = ((j - dj + 1)..=j).map(|v| v as f64).product();
                let fk: f64 = ((k - dk + 1)..=k).map(|v| v as f64).product();
                s += c * fj * fk * xi.powu((j - dj) as u32) * xb.powu((k - dk) as u32);
            }
        }
        s
    }

    pub fn value(&self, xi: Complex64) -> Complex64 {
        self.derivative(xi, 0, 0)
    }

    pub fn jet(&self, xi: Complex64) -> GraphSample {
        GraphSample::from_derivatives(
            xi,
            [
                self.derivative(xi, 0, 0),
                self.derivative(xi, 1, 0),
                self.derivative(xi, 0, 1),
                self.derivative(xi, 2, 0),
                self.derivative(xi, 1, 1),
                self.derivative(xi, 0, 2),
            ],
        )
    }
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller; one variate per call keeps the stream layout simple.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistSign {
    Positive,
    Negative,
    Any,
}

/// Rejection-samples a random polynomial jet with `Δ > min_delta` and the requested sign of λ.
pub fn random_definite_jet<R: Rng>(
    rng: &mut R,
    sign: TwistSign,
    min_delta: f64,
) -> (PolySection, GraphSample) {
    loop {
        let poly = PolySection::random(rng, 3, 0.3);
        let xi = Complex64::new(gaussian(rng), gaussian(rng)) * 0.3;
        let jet = poly.jet(xi);
        let ok_sign = match sign {
            TwistSign::Positive => jet.lambda > 0.0,
            TwistSign::Negative => jet.lambda < 0.0,
            TwistSign::Any => true,
        };
        if jet.delta() > min_delta && ok_sign && jet.abs_sigma > 1e-3 {
            return (poly, jet);
        }
    }
}

/// Jet of the purely twisting section `F = i√ψ·sec²(θ/2)·e^{iφ}` from an analytic radial profile.
pub fn radial_jet(profile: &dyn RadialProfile, theta: f64, phi: f64) -> Result<GraphSample> {
    if !(theta > 0.0 && theta < 0.5 * PI) {
        return Err(Error::Domain(format!("θ = {theta} outside (0, π/2)")));
    }
    let j = profile.jet(theta);
    if !(j.psi > 0.0) {
        return Err(Error::Domain(format!(
            "ψ({theta}) = {} must be positive",
            j.psi
        )));
    }
    let r = j.psi.sqrt();
    let r1 = j.d1 / (2.0 * r);
    let r2 = j.d2 / (2.0 * r) - j.d1 * j.d1 / (4.0 * r * r * r);
    Ok(modal_jet(theta, phi, radial_g(theta, r, r1, r2)))
}

/// `g = √ψ·sec²(θ/2)` and its first two θ-derivatives from those of √ψ.
fn radial_g(theta: f64, r: f64, r1: f64, r2: f64) -> [f64; 3] {
    let t = (0.5 * theta).tan();
    let s = 1.0 + t * t;
    let s1 = s * t;
    let s2 = s * t * t + 0.5 * s * s;
    [r * s, r1 * s + r * s1, r2 * s + 2.0 * r1 * s1 + r * s2]
}

/// Jet of `F = i·g(θ)·e^{iφ}` using `∂(f e^{imφ}) = c²(f′ + m f/sinθ) e^{i(m−1)φ}`
/// and `∂̄(f e^{imφ}) = c²(f′ − m f/sinθ) e^{i(m+1)φ}`, `c² = cos²(θ/2)`.
fn modal_jet(theta: f64, phi: f64, g: [f64; 3]) -> GraphSample {
    let (st, ct) = theta.sin_cos();
    let c2 = (0.5 * theta).cos().powi(2);
    let c2p = -0.5 * st;
    let f0 = I * g[0];
    let f1 = I * g[1];
    let f2 = I * g[2];
    let q = f0 / st;
    let q1 = f1 / st - f0 * ct / (st * st);

    let p = c2 * (f1 + q);
    let pp = c2p * (f1 + q) + c2 * (f2 + q1);
    let b = c2 * (f1 - q);
    let bp = c2p * (f1 - q) + c2 * (f2 - q1);

    let e = |m: i32| Complex64::from_polar(1.0, m as f64 * phi);
    let xi = Complex64::from_polar((0.5 * theta).tan(), phi);
    GraphSample::from_derivatives(
        xi,
        [
            f0 * e(1),
            p,
            b * e(2),
            c2 * pp * e(-1),
            c2 * (bp + 2.0 * b / st) * e(1),
            c2 * (bp - 2.0 * b / st) * e(3),
        ],
    )
}

/// Jet of an arbitrary section by centered differences of step `h` in the real directions.
pub fn fd_jet(section: impl Fn(Complex64) -> Complex64, xi: Complex64, h: f64) -> GraphSample {
    let dx = Complex64::new(h, 0.0);
    let dy = Complex64::new(0.0, h);
    let f0 = section(xi);
    let (fxp, fxm) = (section(xi + dx), section(xi - dx));
    let (fyp, fym) = (section(xi + dy), section(xi - dy));
    let fx = (fxp - fxm) / (2.0 * h);
    let fy = (fyp - fym) / (2.0 * h);
    let fxx = (fxp - 2.0 * f0 + fxm) / (h * h);
    let fyy = (fyp - 2.0 * f0 + fym) / (h * h);
    let fxy = (section(xi + dx + dy) - section(xi + dx - dy) - section(xi - dx + dy)
        + section(xi - dx - dy))
        / (4.0 * h * h);
    GraphSample::from_derivatives(
        xi,
        [
            f0,
            (fx - I * fy) / 2.0,
            (fx + I * fy) / 2.0,
            (fxx - fyy - 2.0 * I * fxy) / 4.0,
            (fxx + fyy) / 4.0,
            (fxx - fyy + 2.0 * I * fxy) / 4.0,
        ],
    )
}

/// Purely twisting section `F(ξ) = i√ψ(θ)·sec²(θ/2)·e^{iφ}` as a closure over ξ.
pub fn radial_section(profile: &dyn RadialProfile) -> impl Fn(Complex64) -> Complex64 + '_ {
    move |xi: Complex64| {
        let theta = 2.0 * xi.norm().atan();
        let sec2 = 1.0 + xi.norm_sqr();
        I * profile.value(theta).max(0.0).sqrt() * sec2 * Complex64::from_polar(1.0, xi.arg())
    }
}

/// Builds a jet either analytically or by finite differences, flagging degenerate points.
pub fn build_jet(
    profile: &dyn RadialProfile,
    theta: f64,
    phi: f64,
    fd_step: Option<f64>,
) -> Result<GraphSample> {
    let jet = match fd_step {
        None => radial_jet(profile, theta, phi)?,
        Some(h) => {
            let xi = Complex64::from_polar((0.5 * theta).tan(), phi);
            fd_jet(radial_section(profile), xi, h)
        }
    };
    jet.require_definite()?;
    Ok(jet)
}
