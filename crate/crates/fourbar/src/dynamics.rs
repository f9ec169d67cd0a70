//! Constrained statics: the stacked contact Jacobian, equilibrium contact
//! forces, the constraint nullspace projector, and the wrench -> torque map.
//!
//! The mass matrix is rank 5 (massless feet), so nothing here inverts it.
//! Equilibrium forces come from the constrained saddle system
//! [[M, -J^T], [J, 0]] (a; f) = (B tau - G; 0), which is nonsingular
//! whenever J has full row rank: it requires M positive definite only on
//! the one-dimensional nullspace of J, and the base translation always
//! enters that direction.

use crate::mass::{gravity_vector, mass_matrix};
use crate::model::{contact_jacobians, Configuration};
use crate::params::ModelParams;
use crate::types::{Mat3x7, Mat6x7, Mat7, Mat7x4, Vec3, Vec4, Vec6, Vec7};
use nalgebra::SMatrix;
use thiserror::Error;

/// Relative singular-value cutoff below which the constraint stack is
/// treated as rank deficient.
pub const RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("constraint stack rank deficient: sigma_min/sigma_max = {ratio:e}")]
    RankDeficient { ratio: f64 },
    #[error("mass matrix is not positive definite on the constraint nullspace")]
    NotPositiveDefinite,
}

/// Planar contact wrench at one foot: tangential force, normal force, and
/// contact torque about the contact point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarWrench {
    pub fx: f64,
    pub fy: f64,
    pub tau_z: f64,
}

impl PlanarWrench {
    pub fn new(fx: f64, fy: f64, tau_z: f64) -> Self {
        PlanarWrench { fx, fy, tau_z }
    }

    pub fn as_vector(&self) -> Vec3 {
        Vec3::new(self.fx, self.fy, self.tau_z)
    }

    pub fn from_vector(v: &Vec3) -> Self {
        PlanarWrench::new(v[0], v[1], v[2])
    }
}

/// Contact wrenches of both feet, stacked left over right to match the
/// row order of [`ConstraintStack`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WrenchPair {
    pub left: PlanarWrench,
    pub right: PlanarWrench,
}

impl WrenchPair {
    pub fn new(left: PlanarWrench, right: PlanarWrench) -> Self {
        WrenchPair { left, right }
    }

    pub fn stacked(&self) -> Vec6 {
        let mut v = Vec6::zeros();
        v.fixed_rows_mut::<3>(0).copy_from(&self.left.as_vector());
        v.fixed_rows_mut::<3>(3).copy_from(&self.right.as_vector());
        v
    }

    pub fn from_stacked(v: &Vec6) -> Self {
        WrenchPair {
            left: PlanarWrench::from_vector(&v.fixed_rows::<3>(0).into_owned()),
            right: PlanarWrench::from_vector(&v.fixed_rows::<3>(3).into_owned()),
        }
    }
}

/// Stacked contact Jacobian (left foot rows 0..3, right foot rows 3..6)
/// together with its rank data and unit null direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintStack {
    jacobian: Mat6x7,
    sigma_min: f64,
    sigma_max: f64,
    null_direction: Vec7,
}

impl ConstraintStack {
    pub fn jacobian(&self) -> &Mat6x7 {
        &self.jacobian
    }

    pub fn left(&self) -> Mat3x7 {
        self.jacobian.fixed_view::<3, 7>(0, 0).into_owned()
    }

    pub fn right(&self) -> Mat3x7 {
        self.jacobian.fixed_view::<3, 7>(3, 0).into_owned()
    }

    /// Smallest and largest singular values of the stack.
    pub fn singular_value_range(&self) -> (f64, f64) {
        (self.sigma_min, self.sigma_max)
    }

    /// Unit vector spanning the nullspace of the stack (the single
    /// unconstrained direction of motion). Sign is arbitrary.
    pub fn null_direction(&self) -> Vec7 {
        self.null_direction
    }
}

/// Build the constraint stack at `q` and verify it has full row rank.
pub fn stack(q: &Configuration, params: &ModelParams) -> Result<ConstraintStack, DynamicsError> {
    let (jl, jr) = contact_jacobians(q, params);
    let mut jacobian = Mat6x7::zeros();
    jacobian.fixed_view_mut::<3, 7>(0, 0).copy_from(&jl);
    jacobian.fixed_view_mut::<3, 7>(3, 0).copy_from(&jr);

    // Singular values come from the SVD of J directly (the eigenvalues of
    // J^T J would square away half the precision of sigma_min); the null
    // direction is the eigenvector of the structurally zero eigenvalue of
    // J^T J, well separated from sigma_min^2 at full rank.
    let sv = jacobian.svd(false, false).singular_values;
    let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);

    let gram = jacobian.transpose() * jacobian;
    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..7).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let null_direction = eig.eigenvectors.column(order[0]).into_owned();

    let ratio = if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 };
    if ratio < RANK_CUTOFF {
        return Err(DynamicsError::RankDeficient { ratio });
    }
    Ok(ConstraintStack { jacobian, sigma_min, sigma_max, null_direction })
}

/// Selector B mapping the four joint torques into the 7-dimensional
/// generalized force (base coordinates unactuated).
pub fn joint_selector() -> Mat7x4 {
    let mut b = Mat7x4::zeros();
    for i in 0..4 {
        b[(3 + i, i)] = 1.0;
    }
    b
}

fn saddle_solve(
    q: &Configuration,
    params: &ModelParams,
    tau: &Vec4,
) -> Result<(Vec7, Vec6), DynamicsError> {
    let cs = stack(q, params)?;
    let m = mass_matrix(q, params).matrix;
    let g = gravity_vector(q, params);
    let j = cs.jacobian;

    let mut a = SMatrix::<f64, 13, 13>::zeros();
    a.fixed_view_mut::<7, 7>(0, 0).copy_from(&m);
    a.fixed_view_mut::<7, 6>(0, 7).copy_from(&(-j.transpose()));
    a.fixed_view_mut::<6, 7>(7, 0).copy_from(&j);

    let mut rhs = SMatrix::<f64, 13, 1>::zeros();
    rhs.fixed_rows_mut::<7>(0).copy_from(&(joint_selector() * tau - g));

    let sol = a
        .full_piv_lu()
        .solve(&rhs)
        .ok_or(DynamicsError::NotPositiveDefinite)?;
    Ok((
        sol.fixed_rows::<7>(0).into_owned(),
        sol.fixed_rows::<6>(7).into_owned(),
    ))
}

/// Contact wrenches that balance gravity and the given joint torques while
/// keeping both feet stationary. When `tau` satisfies the equilibrium
/// condition the accompanying generalized acceleration is zero and the
/// returned pair satisfies B tau + J^T f = G exactly in the least-squares
/// sense of the saddle system.
pub fn equilibrium_contact_forces(
    q: &Configuration,
    params: &ModelParams,
    tau: &Vec4,
) -> Result<WrenchPair, DynamicsError> {
    let (_, f) = saddle_solve(q, params, tau)?;
    Ok(WrenchPair::from_stacked(&f))
}

/// Constraint nullspace projector N = M t t^T / (t^T M t) with t the null
/// direction of the stack: rank one, idempotent, and N J^T = 0, so applying
/// it to a generalized force extracts the component that would accelerate
/// the mechanism along its single unconstrained direction.
pub fn nullspace_projector(
    q: &Configuration,
    params: &ModelParams,
) -> Result<Mat7, DynamicsError> {
    let cs = stack(q, params)?;
    let t = cs.null_direction();
    let m = mass_matrix(q, params).matrix;
    let u = m * t;
    let denom = t.dot(&u);
    if denom <= 0.0 {
        return Err(DynamicsError::NotPositiveDefinite);
    }
    Ok(u * t.transpose() / denom)
}

/// Projection N (B tau - G) of the unbalanced generalized force onto the
/// unconstrained direction: zero exactly when `tau` holds the mechanism in
/// static equilibrium.
pub fn equilibrium_residual(
    q: &Configuration,
    params: &ModelParams,
    tau: &Vec4,
) -> Result<Vec7, DynamicsError> {
    let n = nullspace_projector(q, params)?;
    let g = gravity_vector(q, params);
    Ok(n * (joint_selector() * tau - g))
}

/// Joint torques required to realize the given contact wrenches in static
/// equilibrium: the joint rows of G - J^T f. Inverse of
/// [`equilibrium_contact_forces`] on equilibrium pairs.
pub fn torque_from_wrench(
    q: &Configuration,
    params: &ModelParams,
    f: &WrenchPair,
) -> Result<Vec4, DynamicsError> {
    let cs = stack(q, params)?;
    let g = gravity_vector(q, params);
    let r = g - cs.jacobian().transpose() * f.stacked();
    Ok(r.fixed_rows::<4>(3).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::chi;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn p() -> ModelParams {
        ModelParams::default()
    }

    fn frozen_minwrench_tau() -> Vec4 {
        Vec4::from_column_slice(&[
            -0.2913861386138632,
            -7.284653465346537,
            0.437079207920791,
            -7.284653465346537,
        ])
    }

    fn frozen_minwrench_f() -> Vec6 {
        Vec6::from_column_slice(&[
            0.0,
            18.891534653465346,
            7.284653465346537,
            0.0,
            20.348465346534653,
            7.284653465346537,
        ])
    }

    #[test]
    fn stack_has_full_rank_with_identity_base_blocks() {
        let q = chi(FRAC_PI_2, &p()).unwrap();
        let cs = stack(&q, &p()).unwrap();
        let (smin, smax) = cs.singular_value_range();
        assert!(smin / smax > 1e-3);
        let j = cs.jacobian();
        for r0 in [0, 3] {
            assert_eq!(j[(r0, 0)], 1.0);
            assert_eq!(j[(r0 + 1, 1)], 1.0);
            assert_eq!(j[(r0, 1)], 0.0);
            assert_eq!(j[(r0 + 1, 0)], 0.0);
        }
    }

    #[test]
    fn stack_flags_rank_collapse_for_collinear_legs() {
        let q = Configuration::new(Vec7::from_column_slice(&[
            1.1, 0.0, 0.0, 0.0, PI, 0.0, PI,
        ]));
        assert!(matches!(
            stack(&q, &p()),
            Err(DynamicsError::RankDeficient { .. })
        ));
    }

    #[test]
    fn null_direction_matches_embedding_tangent() {
        let q = chi(FRAC_PI_3, &p()).unwrap();
        let cs = stack(&q, &p()).unwrap();
        let t = crate::model::dchi(FRAC_PI_3, &p()).normalize();
        let n = cs.null_direction();
        let aligned = if n.dot(&t) < 0.0 { -n } else { n };
        assert_abs_diff_eq!((aligned - t).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn symmetric_stance_splits_weight_evenly_at_zero_torque() {
        let q = chi(FRAC_PI_2, &p()).unwrap();
        let f = equilibrium_contact_forces(&q, &p(), &Vec4::zeros()).unwrap();
        for w in [f.left, f.right] {
            assert_abs_diff_eq!(w.fx, 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(w.fy, 19.62, epsilon = 1e-9);
            assert_abs_diff_eq!(w.tau_z, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn contact_forces_match_reference_at_sixty_degrees() {
        let q = chi(FRAC_PI_3, &p()).unwrap();
        let f = equilibrium_contact_forces(&q, &p(), &frozen_minwrench_tau()).unwrap();
        let expect = frozen_minwrench_f();
        assert_abs_diff_eq!((f.stacked() - expect).norm(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(f.left.fy + f.right.fy, 39.24, epsilon = 1e-9);
    }

    #[test]
    fn torque_from_wrench_inverts_contact_forces() {
        let q = chi(FRAC_PI_3, &p()).unwrap();
        let f = WrenchPair::from_stacked(&frozen_minwrench_f());
        let tau = torque_from_wrench(&q, &p(), &f).unwrap();
        assert_abs_diff_eq!((tau - frozen_minwrench_tau()).norm(), 0.0, epsilon = 1e-8);
        let f2 = equilibrium_contact_forces(&q, &p(), &tau).unwrap();
        assert_abs_diff_eq!((f2.stacked() - f.stacked()).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn projector_is_rank_one_idempotent_and_annihilates_constraints() {
        let q = chi(FRAC_PI_3, &p()).unwrap();
        let n = nullspace_projector(&q, &p()).unwrap();
        assert_abs_diff_eq!((n * n - n).norm(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(n.trace(), 1.0, epsilon = 1e-12);
        let cs = stack(&q, &p()).unwrap();
        assert_abs_diff_eq!((n * cs.jacobian().transpose()).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn residual_vanishes_only_for_equilibrium_torques() {
        let q = chi(FRAC_PI_3, &p()).unwrap();
        let r_eq = equilibrium_residual(&q, &p(), &frozen_minwrench_tau()).unwrap();
        assert_abs_diff_eq!(r_eq.norm(), 0.0, epsilon = 1e-9);
        let r_zero = equilibrium_residual(&q, &p(), &Vec4::zeros()).unwrap();
        assert!(r_zero.norm() > 1e-2);
    }

    #[test]
    fn residual_is_affine_in_torque() {
        let q = chi(1.2, &p()).unwrap();
        let t1 = Vec4::from_column_slice(&[0.3, -0.8, 1.4, 0.2]);
        let t2 = Vec4::from_column_slice(&[-1.1, 0.5, 0.7, -0.4]);
        let r = |t: &Vec4| equilibrium_residual(&q, &p(), t).unwrap();
        let lhs = r(&(t1 + t2)) - r(&t1) - r(&t2) + r(&Vec4::zeros());
        assert_abs_diff_eq!(lhs.norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn wrench_pair_round_trips_through_stacking() {
        let v = Vec6::from_column_slice(&[1.0, -2.0, 3.0, -4.0, 5.0, -6.0]);
        let f = WrenchPair::from_stacked(&v);
        assert_eq!(f.left.fx, 1.0);
        assert_eq!(f.right.tau_z, -6.0);
        assert_eq!(f.stacked(), v);
    }
}
