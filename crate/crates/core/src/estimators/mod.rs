//! Estimation pipelines: matched filtering, LS filters for `Θ` and `Z`,
//! two- and three-factor Khatri-Rao factorization, scaling resolution and
//! NMSE scoring.

mod bundle;
mod filter;
mod krf;

pub use bundle::{
    evaluate, nmse, resolve_scaling, EstimateBundle, GroundTruth, Method, NmseReport, ScalingReport,
};
pub use filter::{estimate_theta_ls, estimate_z_ls, matched_filter};
pub use krf::{krf2, krf3, Krf2, Krf3};
