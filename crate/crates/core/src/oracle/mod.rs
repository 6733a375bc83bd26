//! Pointwise 2-D oracle: frames, projections, second fundamental form,
//! mean curvature, graph flow, the first-order identities and the check
//! of the 1-D reduction against the full flow.

pub mod connection;
pub mod flow;
pub mod frames;
pub mod identities;
pub mod jet;
pub mod projection;
pub mod reduction;
pub mod sff;

pub use flow::{graph_flow_rhs, FlowRhs};
pub use frames::{adapted_frame, dual_basis, frames, CoFrame, Frame, FrameReport, FrameSource};
pub use identities::{
    identity_convergence, identity_residuals, IdentityConvergence, IdentityResiduals, SectionGrid,
};
pub use jet::{build_jet, GraphSample, PolySection};
pub use projection::{projections, ProjectionPair};
pub use reduction::{reduction_consistency, FlowOrientation, ReductionReport};
pub use sff::{mean_curvature, second_fundamental_form, SecondFF};
