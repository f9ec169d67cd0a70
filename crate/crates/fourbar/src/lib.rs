//! Statics of a free-floating planar four-bar linkage standing on two flat
//! feet: mass matrix and gravity assembly, constrained equilibrium forces,
//! centroidal decoupling, contact-wrench redundancy resolution under three
//! criteria, and the static center of pressure (SCoP) with its sensitivity
//! to the internal degree of freedom.
//!
//! The mechanism has a 7-dimensional configuration q = (p_B, theta, q1..q4):
//! base position and orientation plus two hip and two ankle angles. Both feet
//! flat on the ground impose 6 constraints, leaving one internal degree of
//! freedom xi, the left hip angle. The constraint-consistent embedding
//! [`model::chi`] parameterizes the whole family of standing configurations.

pub mod audit;
pub mod centroidal;
pub mod dynamics;
pub mod mass;
pub mod model;
pub mod params;
pub mod scop;
pub mod verify;
pub mod wrench;

pub use params::{ModelParams, ParamError};
pub use wrench::{Criterion, FourBar, WrenchError};

/// Fixed-size linear algebra aliases used across the crate.
pub mod types {
    pub type Vec2 = nalgebra::Vector2<f64>;
    pub type Vec3 = nalgebra::Vector3<f64>;
    pub type Vec4 = nalgebra::Vector4<f64>;
    pub type Vec6 = nalgebra::Vector6<f64>;
    pub type Vec7 = nalgebra::SVector<f64, 7>;
    pub type Mat2 = nalgebra::Matrix2<f64>;
    pub type Mat3 = nalgebra::Matrix3<f64>;
    pub type Mat4 = nalgebra::Matrix4<f64>;
    pub type Mat2x7 = nalgebra::SMatrix<f64, 2, 7>;
    pub type Mat3x4 = nalgebra::Matrix3x4<f64>;
    pub type Mat3x6 = nalgebra::SMatrix<f64, 3, 6>;
    pub type Mat3x7 = nalgebra::SMatrix<f64, 3, 7>;
    pub type Mat4x3 = nalgebra::Matrix4x3<f64>;
    pub type Mat6 = nalgebra::Matrix6<f64>;
    pub type Mat6x7 = nalgebra::SMatrix<f64, 6, 7>;
    pub type Mat7 = nalgebra::SMatrix<f64, 7, 7>;
    pub type Mat7x4 = nalgebra::SMatrix<f64, 7, 4>;
}
