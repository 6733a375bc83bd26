//! Finite-difference residuals of the two first-order identities
//!
//! `−w²∂[σ̄/w²] = ∂̄ρ + 2F/w²` and `Im ∂{w²∂[σ̄/w²]} = −(∂∂̄λ + 2λ/w²)`,
//! `w = 1 + ξξ̄`, evaluated on a square complex grid.

use num_complex::Complex64;
use serde::Serialize;

use crate::grid::observed_order;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Square patch of `(2m+1)²` samples centred at `center` with spacing `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionGrid {
    pub center: Complex64,
    pub h: f64,
    pub m: usize,
    pub values: Vec<Complex64>,
}

/// Complex field on a centred square patch of half-width `m`.
#[derive(Debug, Clone)]
struct Patch {
    m: usize,
    data: Vec<Complex64>,
}

impl Patch {
    fn side(&self) -> usize {
        2 * self.m + 1
    }

    fn at(&self, j: isize, k: isize) -> Complex64 {
        let m = self.m as isize;
        let s = self.side() as isize;
        self.data[((k + m) * s + (j + m)) as usize]
    }

    fn build(m: usize, f: impl Fn(isize, isize) -> Complex64) -> Self {
        let mi = m as isize;
        let mut data = Vec::with_capacity((2 * m + 1).pow(2));
        for k in -mi..=mi {
            for j in -mi..=mi {
                data.push(f(j, k));
            }
        }
        Self { m, data }
    }

    /// `(∂, ∂̄)` by centred differences, shrinking the patch by one.
    fn wirtinger(&self, h: f64) -> (Patch, Patch) {
        let m = self.m - 1;
        let fx = |j, k| (self.at(j + 1, k) - self.at(j - 1, k)) / (2.0 * h);
        let fy = |j, k| (self.at(j, k + 1) - self.at(j, k - 1)) / (2.0 * h);
        (
            Patch::build(m, |j, k| (fx(j, k) - I * fy(j, k)) / 2.0),
            Patch::build(m, |j, k| (fx(j, k) + I * fy(j, k)) / 2.0),
        )
    }

    fn restrict(&self, m: usize) -> Patch {
        Patch::build(m, |j, k| self.at(j, k))
    }

    fn zip(&self, o: &Patch, f: impl Fn(Complex64, Complex64) -> Complex64) -> Patch {
        let m = self.m.min(o.m);
        Patch::build(m, |j, k| f(self.at(j, k), o.at(j, k)))
    }
}

impl SectionGrid {
    pub fn sample(
        section: impl Fn(Complex64) -> Complex64,
        center: Complex64,
        h: f64,
        m: usize,
    ) -> Self {
        assert!(m >= 4, "identity stencils need a half-width of at least 4");
        let p = Patch::build(m, |j, k| {
            section(center + Complex64::new(j as f64 * h, k as f64 * h))
        });
        Self {
            center,
            h,
            m,
            values: p.data,
        }
    }

    fn xi(&self, j: isize, k: isize) -> Complex64 {
        self.center + Complex64::new(j as f64 * self.h, k as f64 * self.h)
    }
}

/// Residual fields on the interior of the patch.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResiduals {
    pub h: f64,
    /// `−w²∂[σ̄/w²] − ∂̄ρ − 2F/w²`.
    pub first: Vec<Complex64>,
    /// `Im ∂{w²∂[σ̄/w²]} + ∂∂̄λ + 2λ/w²`.
    pub second: Vec<f64>,
    /// The same with the opposite relative sign, `LHS − RHS`.
    pub second_opposite_sign: Vec<f64>,
}

impl IdentityResiduals {
    pub fn max_first(&self) -> f64 {
        self.first.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn max_second(&self) -> f64 {
        self.second.iter().fold(0.0, |a, z| a.max(z.abs()))
    }

    /// Residuals at the patch centre, which stays fixed under refinement.
    pub fn center_first(&self) -> f64 {
        self.first[self.first.len() / 2].norm()
    }

    pub fn center_second(&self) -> f64 {
        self.second[self.second.len() / 2].abs()
    }

    pub fn max_second_opposite_sign(&self) -> f64 {
        self.second_opposite_sign
            .iter()
            .fold(0.0, |a, z| a.max(z.abs()))
    }
}

pub fn identity_residuals(grid: &SectionGrid) -> IdentityResiduals {
    let h = grid.h;
    let f = Patch {
        m: grid.m,
        data: grid.values.clone(),
    };
    let w = |j: isize, k: isize| 1.0 + grid.xi(j, k).norm_sqr();
    let (df, dbf) = f.wirtinger(h);
    let m1 = df.m;
    let sigma_bar = Patch::build(m1, |j, k| -dbf.at(j, k));
    let rho = Patch::build(m1, |j, k| {
        df.at(j, k) - 2.0 * grid.xi(j, k).conj() * f.at(j, k) / w(j, k)
    });
    let lambda = Patch::build(m1, |j, k| Complex64::new(rho.at(j, k).im, 0.0));

    let q = Patch::build(m1, |j, k| sigma_bar.at(j, k) / (w(j, k) * w(j, k)));
    let (dq, _) = q.wirtinger(h);
    let (_, db_rho) = rho.wirtinger(h);
    let m2 = dq.m;
    let inner = Patch::build(m2, |j, k| w(j, k) * w(j, k) * dq.at(j, k));
    let f2 = f.restrict(m2);
    let first = Patch::build(m2, |j, k| {
        let ww = w(j, k) * w(j, k);
        -inner.at(j, k) - db_rho.at(j, k) - 2.0 * f2.at(j, k) / ww
    });

    let (d_inner, _) = inner.wirtinger(h);
    let (_, db_lambda) = lambda.wirtinger(h);
    let (dd_lambda, _) = db_lambda.wirtinger(h);
    let m3 = d_inner.m;
    let lam3 = lambda.restrict(m3);
    let lhs = d_inner.zip(&dd_lambda, |a, _| Complex64::new(a.im, 0.0));
    let rhs = Patch::build(m3, |j, k| {
        dd_lambda.at(j, k) + 2.0 * lam3.at(j, k) / (w(j, k) * w(j, k))
    });
    let second: Vec<f64> = lhs
        .zip(&rhs, |a, b| a + b)
        .data
        .iter()
        .map(|z| z.re)
        .collect();
    let opposite: Vec<f64> = lhs
        .zip(&rhs, |a, b| a - b)
        .data
        .iter()
        .map(|z| z.re)
        .collect();

    IdentityResiduals {
        h,
        first: first.restrict(m3).data,
        second,
        second_opposite_sign: opposite,
    }
}

/// Centre residuals of both identities on a refinement sequence for one section.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityConvergence {
    pub h: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    /// Observed orders from the two finest levels.
    pub order_first: f64,
    pub order_second: f64,
}

pub fn identity_convergence(
    section: impl Fn(Complex64) -> Complex64 + Copy,
    center: Complex64,
    hs: &[f64],
) -> IdentityConvergence {
    assert!(hs.len() >= 2, "need at least two refinement levels");
    let res: Vec<IdentityResiduals> = hs
        .iter()
        .map(|&h| identity_residuals(&SectionGrid::sample(section, center, h, 4)))
        .collect();
    let first: Vec<f64> = res.iter().map(|r| r.center_first()).collect();
    let second: Vec<f64> = res.iter().map(|r| r.center_second()).collect();
    let n = hs.len();
    let ratio = hs[n - 2] / hs[n - 1];
    IdentityConvergence {
        order_first: observed_order(first[n - 2], first[n - 1], ratio),
        order_second: observed_order(second[n - 2], second[n - 1], ratio),
        h: hs.to_vec(),
        first,
        second,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StationaryCoeffs;
    use crate::oracle::jet::{radial_section, PolySection};
    use crate::profiles::ClosedProfile;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_section_has_zero_residuals() {
        let g = SectionGrid::sample(
            |_| Complex64::new(0.0, 0.0),
            Complex64::new(0.1, 0.2),
            1e-2,
            4,
        );
        let r = identity_residuals(&g);
        assert_eq!(r.max_first(), 0.0);
        assert_eq!(r.max_second(), 0.0);
    }

    #[test]
    fn polynomial_residuals_converge_at_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let poly = PolySection::random(&mut rng, 4, 0.5);
        let c = Complex64::new(0.2, 0.1);
        let res: Vec<IdentityResiduals> = [1e-2, 5e-3, 2.5e-3]
            .iter()
            .map(|&h| identity_residuals(&SectionGrid::sample(|z| poly.value(z), c, h, 4)))
            .collect();
        for w in res.windows(2) {
            let o1 = observed_order(w[0].max_first(), w[1].max_first(), 2.0);
            let o2 = observed_order(w[0].max_second(), w[1].max_second(), 2.0);
            assert!((o1 - 2.0).abs() < 0.1, "first order {o1}");
            assert!((o2 - 2.0).abs() < 0.1, "second order {o2}");
        }
        // the opposite relative sign does not vanish
        assert!(res[2].max_second_opposite_sign() > 1e3 * res[2].max_second());
    }

    #[test]
    fn holomorphic_radial_section_satisfies_both_sides() {
        let p = ClosedProfile::Stationary(StationaryCoeffs { a: 1.0, b: -1.0 });
        let c = Complex64::from_polar((0.15f64).tan(), 0.4);
        let g = SectionGrid::sample(radial_section(&p), c, 1e-3, 4);
        let r = identity_residuals(&g);
        assert!(r.max_second() < 1e-4);
        assert!(r.max_second_opposite_sign() < 1e-4);
    }
}
