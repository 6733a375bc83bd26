use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate point: Δ = {delta:e}")]
    Degenerate { delta: f64 },

    #[error("pole proximity in {what}: denominator {value:e} below {limit:e}")]
    PoleProximity {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("profile is not definite at node {node} (θ = {theta}, ψ' = {dpsi:e})")]
    NotDefinite { node: usize, theta: f64, dpsi: f64 },

    #[error("negative profile value ψ = {value:e} at node {node}")]
    NegativeProfile { node: usize, value: f64 },

    #[error("non-finite value at node {node}, t = {t}")]
    NonFinite { node: usize, t: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("leaves {lower} and {upper} are not ordered: gap {gap:e} at θ = {theta}")]
    LeavesCross {
        lower: usize,
        upper: usize,
        theta: f64,
        gap: f64,
    },

    #[error("ambient congruence rejected: {0}")]
    Ambient(String),
}
