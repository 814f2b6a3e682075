//! Developable ribbonization of parametric surfaces.
//!
//! The pipeline goes surface → center curves → Darboux frames → Cartan
//! ribbons → planar developments → mutual trimming → topological inspection.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Row operations in the small dense solver read clearer with indices.
#![allow(clippy::needless_range_loop)]

pub mod assembly;
pub mod curve;
pub mod development;
pub mod error;
pub mod export;
pub mod jet;
pub mod numeric;
pub mod pipeline;
pub mod ribbon;
pub mod rolling;
pub mod scene;
pub mod surface;
pub mod topology;

pub use error::{GeomError, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
