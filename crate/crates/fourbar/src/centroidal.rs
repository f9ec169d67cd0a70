//! Centroidal wrench transports and the coordinate change that
//! block-diagonalizes the mass matrix.
//!
//! The transports X_L, X_R move a contact wrench from its foot frame to the
//! center of mass with inertial orientation; static equilibrium reads
//! X_L f_L + X_R f_R = m g e2. The decoupling transform T rewrites the base
//! coordinates as CoM translation plus rotation, after which the mass matrix
//! splits into diag(m, m, I_z) and a joint-space Schur complement, and
//! gravity acts on a single coordinate.

use crate::mass::MassModel;
use crate::model::{forward_kinematics, sperp, Configuration};
use crate::params::ModelParams;
use crate::types::{Mat3, Mat3x4, Mat7, Vec2};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CentroidalError {
    #[error("decoupling transform is singular at this configuration")]
    SingularTransform,
}

/// Wrench transport [[1, 0], [(S v)^T, 1]] for a moment arm `v` pointing
/// from the new wrench frame to the old one (here: foot minus CoM).
fn transport(v: Vec2) -> Mat3 {
    let sv = sperp(v);
    Mat3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, sv.x, sv.y, 1.0)
}

/// CoM position, foot-to-CoM moment arms, and the two wrench transports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentroidalFrame {
    pub p_com: Vec2,
    /// Left foot position minus CoM.
    pub lambda: Vec2,
    /// Right foot position minus CoM.
    pub rho: Vec2,
    pub x_left: Mat3,
    pub x_right: Mat3,
}

impl CentroidalFrame {
    /// Inverse transports, exact by the unit-triangular structure.
    pub fn x_left_inverse(&self) -> Mat3 {
        transport(-self.lambda)
    }

    pub fn x_right_inverse(&self) -> Mat3 {
        transport(-self.rho)
    }
}

pub fn centroidal_transforms(q: &Configuration, params: &ModelParams) -> CentroidalFrame {
    let kin = forward_kinematics(q, params);
    let lambda = kin.foot_left.position - kin.com;
    let rho = kin.foot_right.position - kin.com;
    CentroidalFrame {
        p_com: kin.com,
        lambda,
        rho,
        x_left: transport(lambda),
        x_right: transport(rho),
    }
}

/// Coordinate change decoupling the base from the joints.
#[derive(Debug, Clone, PartialEq)]
pub struct DecouplingTransform {
    /// Full 7x7 change of coordinates, upper blocks [cXb | cXb Mb^-1 Mbj].
    pub t: Mat7,
    /// Base-to-CoM transport built from r = p_com - p_base.
    pub c_x_b: Mat3,
    /// Lambda = m cXb Mb^-1; also 1 - P (1 + cXb^-1 P)^-1 cXb^-1 with the
    /// P below. Maps base-frame quantities into the decoupled CoM frame.
    pub lambda: Mat3,
    /// Rank-one correction whose only nonzero row is the rotational one;
    /// its inertia entry is the moment about the base origin divided by the
    /// total mass, minus one. The about-base moment (not the about-CoM one)
    /// is what makes `lambda` above reproduce m cXb Mb^-1 exactly.
    pub p: Mat3,
    t_inv: Mat7,
}

impl DecouplingTransform {
    pub fn inverse(&self) -> &Mat7 {
        &self.t_inv
    }
}

pub fn decoupling_transform(
    q: &Configuration,
    mass: &MassModel,
    params: &ModelParams,
) -> Result<DecouplingTransform, CentroidalError> {
    let kin = forward_kinematics(q, params);
    let r = kin.com - q.base_position();
    let c_x_b = Mat3::new(1.0, 0.0, -r.y, 0.0, 1.0, r.x, 0.0, 0.0, 1.0);
    let c_x_b_inv = Mat3::new(1.0, 0.0, r.y, 0.0, 1.0, -r.x, 0.0, 0.0, 1.0);

    let mb = mass.base_block();
    let mbj = mass.coupling_block();
    let mb_inv = mb.try_inverse().ok_or(CentroidalError::SingularTransform)?;
    let coupling = mb_inv * mbj;

    let mut t = Mat7::identity();
    t.fixed_view_mut::<3, 3>(0, 0).copy_from(&c_x_b);
    t.fixed_view_mut::<3, 4>(0, 3).copy_from(&(c_x_b * coupling));
    let mut t_inv = Mat7::identity();
    t_inv.fixed_view_mut::<3, 3>(0, 0).copy_from(&c_x_b_inv);
    t_inv.fixed_view_mut::<3, 4>(0, 3).copy_from(&(-coupling));

    let m = params.total_mass();
    let moment_about_base = mb[(2, 2)];
    let mut p = Mat3::zeros();
    p[(2, 0)] = -r.y;
    p[(2, 1)] = r.x;
    p[(2, 2)] = moment_about_base / m - 1.0;
    let inner = (Mat3::identity() + c_x_b_inv * p)
        .try_inverse()
        .ok_or(CentroidalError::SingularTransform)?;
    let lambda = Mat3::identity() - p * inner * c_x_b_inv;

    Ok(DecouplingTransform { t, c_x_b, lambda, p, t_inv })
}

/// One foot's contact Jacobian in the decoupled coordinates, split into its
/// base (CoM-frame) and joint blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedJacobian {
    pub base: Mat3,
    pub joint: Mat3x4,
}

/// Contact Jacobians expressed in the decoupled coordinates, J T^-1 for
/// each foot. The base block equals the transpose of the foot's wrench
/// transport and the joint block equals J_j - (1/m) X^T Lambda Mbj; both
/// identities are exact and covered by tests.
pub fn transformed_foot_jacobians(
    q: &Configuration,
    mass: &MassModel,
    _frame: &CentroidalFrame,
    params: &ModelParams,
) -> Result<(TransformedJacobian, TransformedJacobian), CentroidalError> {
    let dec = decoupling_transform(q, mass, params)?;
    let (jl, jr) = crate::model::contact_jacobians(q, params);
    let split = |j: crate::types::Mat3x7| {
        let jn = j * dec.inverse();
        TransformedJacobian {
            base: jn.fixed_view::<3, 3>(0, 0).into_owned(),
            joint: jn.fixed_view::<3, 4>(0, 3).into_owned(),
        }
    };
    Ok((split(jl), split(jr)))
}
