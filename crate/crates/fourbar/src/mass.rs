//! Mass matrix and gravity terms of the floating-base model.
//!
//! All inertia lives in three point masses: the base rod mass m_b at the
//! base origin and one leg mass m_l at each leg midpoint. The feet carry no
//! mass, so the ankle coordinates q2 and q4 contribute zero rows and columns
//! and the 7x7 mass matrix is positive semidefinite with rank 5. Consumers
//! must not invert it; the equilibrium solvers in [`crate::dynamics`] work
//! on the constrained saddle system instead.

use crate::model::{mass_point_jacobians, Configuration};
use crate::params::ModelParams;
use crate::types::{Mat3, Mat3x4, Mat4, Mat7, Vec7};

/// Joint-space mass matrix with block accessors. Coordinate order is
/// (base translation x, y, base rotation, q1, q2, q3, q4).
#[derive(Debug, Clone, PartialEq)]
pub struct MassModel {
    pub matrix: Mat7,
}

impl MassModel {
    /// Base 3x3 block (floating-base translation and rotation).
    pub fn base_block(&self) -> Mat3 {
        self.matrix.fixed_view::<3, 3>(0, 0).into_owned()
    }

    /// Base-to-joint coupling block, 3x4.
    pub fn coupling_block(&self) -> Mat3x4 {
        self.matrix.fixed_view::<3, 4>(0, 3).into_owned()
    }

    /// Joint-space 4x4 block.
    pub fn joint_block(&self) -> Mat4 {
        self.matrix.fixed_view::<4, 4>(3, 3).into_owned()
    }
}

/// Mass matrix as the Gram sum m_k J_k^T J_k over the translational point
/// Jacobians of the three link masses.
pub fn mass_matrix(q: &Configuration, params: &ModelParams) -> MassModel {
    let mut m = Mat7::zeros();
    for (jac, mass) in mass_point_jacobians(q, params) {
        m += jac.transpose() * jac * mass;
    }
    MassModel { matrix: m }
}

/// Base-to-joint coupling block written out directly from the link geometry.
/// Independent of the Gram assembly; used to cross-check it.
pub fn coupling_block_closed(q: &Configuration, params: &ModelParams) -> Mat3x4 {
    let (l, d, ml) = (params.l, params.d, params.m_l);
    let (st, ct) = q.theta().sin_cos();
    let mut out = Mat3x4::zeros();
    for (col, hip_sign) in [(0usize, -1.0), (2usize, 1.0)] {
        let qh = q.q[3 + col];
        let (s, c) = qh.sin_cos();
        // R(theta) applied to the midpoint revolute column ((l/2)s, -(l/2)c).
        let vx = l / 2.0 * s;
        let vy = -l / 2.0 * c;
        out[(0, col)] = ml * (ct * vx - st * vy);
        out[(1, col)] = ml * (st * vx + ct * vy);
        out[(2, col)] = ml * (l * l - hip_sign * d * l * c) / 4.0;
    }
    out
}

/// Generalized gravity vector, the gradient of the potential energy: a
/// configuration is in static equilibrium under joint torques tau and
/// contact wrenches f when B tau + J^T f balances this vector.
pub fn gravity_vector(q: &Configuration, params: &ModelParams) -> Vec7 {
    let mut g = Vec7::zeros();
    for (jac, mass) in mass_point_jacobians(q, params) {
        g += jac.row(1).transpose() * (mass * params.g);
    }
    g
}

/// Gravitational potential energy of the three point masses.
pub fn potential_energy(q: &Configuration, params: &ModelParams) -> f64 {
    use crate::model::forward_kinematics;
    let kin = forward_kinematics(q, params);
    kin.mass_points(params)
        .iter()
        .map(|(p, m)| m * params.g * p.y)
        .sum()
}
