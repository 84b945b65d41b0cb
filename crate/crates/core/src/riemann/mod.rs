//! Concrete Riemannian metrics on R⁴ and the curvature / Killing machinery
//! that acts on them.

mod curvature;
mod fields;
mod gibbons_hawking;
mod lie;
mod taubnut;

pub use curvature::{
    christoffel, curvature_campaign, curvature_report, ricci, ricci_from_riemann, riemann_max_abs, riemann_tensor,
    sectional_curvature, Christoffel, CurvatureReport, MetricJet, RiemannTensor,
};
pub use fields::{positive_form, AffineField, CovectorField, FlatMetric, MetricComponent, MetricField, VectorField};
pub use gibbons_hawking::{
    gibbons_hawking_metric, monopole_residual, AffineOneForm, AffinePotential, Chart3, GibbonsHawkingData,
    GibbonsHawkingMetric, OneForm3,
};
pub use lie::{homothety_constant, killing_residual, lie_derivative_metric};
pub use taubnut::{HopfForm, TaubNutMetric};
