//! Closed-form radial profiles ψ(θ) with analytic derivatives.

use crate::geometry::StationaryCoeffs;

/// ψ and its first three θ-derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialJet {
    pub psi: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

pub trait RadialProfile: Sync {
    fn jet(&self, theta: f64) -> RadialJet;

    fn value(&self, theta: f64) -> f64 {
        self.jet(theta).psi
    }

    fn name(&self) -> String;
}

/// The fixture profiles used by the reduction oracle and the family runner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedProfile {
    /// ψ = tan²θ.
    Tan2,
    /// ψ = 2sin²θ + ε·sin²2θ.
    SinMix { eps: f64 },
    /// ψ = a + b·cos 2θ.
    Stationary(StationaryCoeffs),
    /// ψ = s·sin²θ.
    ScaledSin2 { scale: f64 },
}

impl ClosedProfile {
    /// The three profiles the drift-coefficient oracle is calibrated on.
    pub fn oracle_fixtures() -> [ClosedProfile; 3] {
        [
            ClosedProfile::Tan2,
            ClosedProfile::SinMix { eps: 0.1 },
            ClosedProfile::Stationary(StationaryCoeffs { a: 1.0, b: -0.5 }),
        ]
    }
}

impl RadialProfile for ClosedProfile {
    fn jet(&self, theta: f64) -> RadialJet {
        match *self {
            ClosedProfile::Tan2 => {
                let t = theta.tan();
                let s2 = 1.0 + t * t;
                RadialJet {
                    psi: t * t,
                    d1: 2.0 * t * s2,
                    d2: (2.0 + 6.0 * t * t) * s2,
                    d3: s2 * (16.0 * t + 24.0 * t * t * t),
                }
            }
            ClosedProfile::SinMix { eps } => {
                // 1 − cos2θ + (ε/2)(1 − cos4θ)
                let (s2, c2) = (2.0 * theta).sin_cos();
                let (s4, c4) = (4.0 * theta).sin_cos();
                RadialJet {
                    psi: 1.0 - c2 + 0.5 * eps * (1.0 - c4),
                    d1: 2.0 * s2 + 2.0 * eps * s4,
                    d2: 4.0 * c2 + 8.0 * eps * c4,
                    d3: -8.0 * s2 - 32.0 * eps * s4,
                }
            }
            ClosedProfile::Stationary(StationaryCoeffs { a, b }) => {
                let (s2, c2) = (2.0 * theta).sin_cos();
                RadialJet {
                    psi: a + b * c2,
                    d1: -2.0 * b * s2,
                    d2: -4.0 * b * c2,
                    d3: 8.0 * b * s2,
                }
            }
            ClosedProfile::ScaledSin2 { scale } => {
                let (s2, c2) = (2.0 * theta).sin_cos();
                RadialJet {
                    psi: 0.5 * scale * (1.0 - c2),
                    d1: scale * s2,
                    d2: 2.0 * scale * c2,
                    d3: -4.0 * scale * s2,
                }
            }
        }
    }

    fn name(&self) -> String {
        match *self {
            ClosedProfile::Tan2 => "tan^2".into(),
            ClosedProfile::SinMix { eps } => format!("2sin^2+{eps}sin^2(2θ)"),
            ClosedProfile::Stationary(c) => format!("{}+{}cos(2θ)", c.a, c.b),
            ClosedProfile::ScaledSin2 { scale } => format!("{scale}sin^2"),
        }
    }
}
