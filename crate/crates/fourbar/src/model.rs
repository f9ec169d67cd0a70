//! Kinematics of the planar four-bar: configurations, the one-parameter
//! family of standing configurations, forward kinematics of the feet and
//! mass points, and the analytic contact Jacobians.
//!
//! Conventions. The left foot contacts the ground at the origin, the right
//! foot at (d, 0). The left leg is driven by (q1, q2) with its hip at -d/2
//! on the base rod, the right leg by (q3, q4) with its hip at +d/2. Gravity
//! acts along -y; the ground is the x axis.

use crate::params::ModelParams;
use crate::types::{Mat2, Mat2x7, Mat3x7, Vec2, Vec4, Vec7};
use thiserror::Error;

/// Operations taking the internal angle xi reject |sin xi| below this bound:
/// the legs become collinear with the ground and the minimum-torque
/// redundancy direction contains a 1/sin(xi) factor.
pub const SIN_XI_GUARD: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("xi = {0} is outside the standing range (0, pi)")]
    XiOutOfRange(f64),
    #[error("|sin xi| = {0:e} is below the singularity guard {SIN_XI_GUARD:e}")]
    Singular(f64),
}

/// Generalized coordinates q = (p_Bx, p_By, theta, q1, q2, q3, q4).
///
/// Angles are stored unwrapped; no modular reduction is applied anywhere, so
/// finite differences across configurations are always well defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Configuration {
    pub q: Vec7,
}

impl Configuration {
    pub fn new(q: Vec7) -> Self {
        Configuration { q }
    }

    pub fn base_position(&self) -> Vec2 {
        Vec2::new(self.q[0], self.q[1])
    }

    pub fn theta(&self) -> f64 {
        self.q[2]
    }

    pub fn joints(&self) -> Vec4 {
        Vec4::new(self.q[3], self.q[4], self.q[5], self.q[6])
    }
}

/// Rotation by `theta`.
fn rot(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// The planar cross-product generator applied to `v`: S v = (-v_y, v_x).
pub(crate) fn sperp(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// Constraint-consistent embedding of the internal degree of freedom:
/// chi(xi) places both feet flat on the ground with the base level,
/// chi(xi) = (d/2 + l cos xi, l sin xi, 0, xi, pi - xi, xi, pi - xi).
pub fn chi(xi: f64, params: &ModelParams) -> Result<Configuration, ModelError> {
    if !(xi > 0.0 && xi < std::f64::consts::PI) {
        return Err(ModelError::XiOutOfRange(xi));
    }
    if xi.sin().abs() < SIN_XI_GUARD {
        return Err(ModelError::Singular(xi.sin().abs()));
    }
    let (s, c) = xi.sin_cos();
    let pi = std::f64::consts::PI;
    Ok(Configuration::new(Vec7::from_column_slice(&[
        params.d / 2.0 + params.l * c,
        params.l * s,
        0.0,
        xi,
        pi - xi,
        xi,
        pi - xi,
    ])))
}

/// Tangent of the embedding, d(chi)/d(xi).
pub fn dchi(xi: f64, params: &ModelParams) -> Vec7 {
    let (s, c) = xi.sin_cos();
    Vec7::from_column_slice(&[-params.l * s, params.l * c, 0.0, 1.0, -1.0, 1.0, -1.0])
}

/// Pose of a foot frame: contact point position and absolute orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootPose {
    pub position: Vec2,
    pub orientation: f64,
}

/// Forward kinematics output: foot frames, the three link point masses
/// (legs at their midpoints, base rod at the base origin), and the total CoM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub foot_left: FootPose,
    pub foot_right: FootPose,
    pub leg_left_com: Vec2,
    pub leg_right_com: Vec2,
    pub base_com: Vec2,
    pub com: Vec2,
}

impl Kinematics {
    /// The link point masses with their positions, in assembly order
    /// (base rod, left leg, right leg).
    pub fn mass_points(&self, params: &ModelParams) -> [(Vec2, f64); 3] {
        [
            (self.base_com, params.m_b),
            (self.leg_left_com, params.m_l),
            (self.leg_right_com, params.m_l),
        ]
    }
}

fn hip(q: &Configuration, params: &ModelParams, right: bool) -> Vec2 {
    let off = if right { params.d / 2.0 } else { -params.d / 2.0 };
    q.base_position() + rot(q.theta()) * Vec2::new(off, 0.0)
}

fn foot_position(q: &Configuration, params: &ModelParams, right: bool) -> Vec2 {
    let (hip_x, qh) = if right {
        (params.d / 2.0, q.q[5])
    } else {
        (-params.d / 2.0, q.q[3])
    };
    q.base_position()
        + rot(q.theta()) * Vec2::new(hip_x - params.l * qh.cos(), -params.l * qh.sin())
}

fn leg_com(q: &Configuration, params: &ModelParams, right: bool) -> Vec2 {
    let (hip_x, qh) = if right {
        (params.d / 2.0, q.q[5])
    } else {
        (-params.d / 2.0, q.q[3])
    };
    q.base_position()
        + rot(q.theta())
            * Vec2::new(hip_x - params.l / 2.0 * qh.cos(), -params.l / 2.0 * qh.sin())
}

pub fn forward_kinematics(q: &Configuration, params: &ModelParams) -> Kinematics {
    let base_com = q.base_position();
    let leg_left_com = leg_com(q, params, false);
    let leg_right_com = leg_com(q, params, true);
    let m = params.total_mass();
    let com =
        (base_com * params.m_b + leg_left_com * params.m_l + leg_right_com * params.m_l) / m;
    Kinematics {
        foot_left: FootPose {
            position: foot_position(q, params, false),
            orientation: q.theta() + q.q[3] + q.q[4],
        },
        foot_right: FootPose {
            position: foot_position(q, params, true),
            orientation: q.theta() + q.q[5] + q.q[6],
        },
        leg_left_com,
        leg_right_com,
        base_com,
        com,
    }
}

/// Translational Jacobian (2x7) of a point rigidly attached to one of the
/// links: identity on the base translation, the revolute column S(p - c)
/// for each joint between the base frame and the point.
fn point_jacobian(q: &Configuration, p: Vec2, hip_joint: Option<(usize, Vec2)>) -> Mat2x7 {
    let mut j = Mat2x7::zeros();
    j[(0, 0)] = 1.0;
    j[(1, 1)] = 1.0;
    let st = sperp(p - q.base_position());
    j[(0, 2)] = st.x;
    j[(1, 2)] = st.y;
    if let Some((col, hip_pos)) = hip_joint {
        let sh = sperp(p - hip_pos);
        j[(0, col)] = sh.x;
        j[(1, col)] = sh.y;
    }
    j
}

/// Translational Jacobians of the three link point masses, paired with their
/// masses, in the same order as [`Kinematics::mass_points`].
pub fn mass_point_jacobians(q: &Configuration, params: &ModelParams) -> [(Mat2x7, f64); 3] {
    let kin = forward_kinematics(q, params);
    [
        (point_jacobian(q, kin.base_com, None), params.m_b),
        (
            point_jacobian(q, kin.leg_left_com, Some((3, hip(q, params, false)))),
            params.m_l,
        ),
        (
            point_jacobian(q, kin.leg_right_com, Some((5, hip(q, params, true)))),
            params.m_l,
        ),
    ]
}

/// Analytic contact Jacobians (J_CL, J_CR), each 3x7: rows are the foot
/// frame's planar velocity (x, y) and angular rate. The rotation row of the
/// left foot is (0,0,1,1,1,0,0) and of the right foot (0,0,1,0,0,1,1); the
/// translational block is the revolute-chain form.
pub fn contact_jacobians(q: &Configuration, params: &ModelParams) -> (Mat3x7, Mat3x7) {
    let kin = forward_kinematics(q, params);
    let mut jl = Mat3x7::zeros();
    let mut jr = Mat3x7::zeros();
    jl.fixed_view_mut::<2, 7>(0, 0)
        .copy_from(&point_jacobian(q, kin.foot_left.position, Some((3, hip(q, params, false)))));
    jr.fixed_view_mut::<2, 7>(0, 0)
        .copy_from(&point_jacobian(q, kin.foot_right.position, Some((5, hip(q, params, true)))));
    for col in [2, 3, 4] {
        jl[(2, col)] = 1.0;
    }
    for col in [2, 5, 6] {
        jr[(2, col)] = 1.0;
    }
    (jl, jr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn p() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn chi_at_right_angle_matches_reference_configuration() {
        let q = chi(FRAC_PI_2, &p()).unwrap();
        let expect = [0.1, 1.0, 0.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2];
        for (i, e) in expect.iter().enumerate() {
            assert_abs_diff_eq!(q.q[i], *e, epsilon = 1e-15);
        }
    }

    #[test]
    fn chi_at_sixty_degrees_matches_reference_configuration() {
        let q = chi(FRAC_PI_3, &p()).unwrap();
        assert_abs_diff_eq!(q.q[0], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(q.q[1], 0.8660254037844386, epsilon = 1e-15);
        assert_abs_diff_eq!(q.q[3], FRAC_PI_3, epsilon = 1e-15);
        assert_abs_diff_eq!(q.q[4], 2.0 * FRAC_PI_3, epsilon = 1e-15);
    }

    #[test]
    fn chi_joint_angles_are_supplementary() {
        for xi in [0.3, 1.0, FRAC_PI_2, 2.2, 2.9] {
            let q = chi(xi, &p()).unwrap();
            assert_abs_diff_eq!(q.q[3] + q.q[4], PI, epsilon = 1e-15);
            assert_abs_diff_eq!(q.q[5] + q.q[6], PI, epsilon = 1e-15);
        }
    }

    #[test]
    fn chi_rejects_out_of_range_and_singular() {
        assert!(matches!(chi(0.0, &p()), Err(ModelError::XiOutOfRange(_))));
        assert!(matches!(chi(PI, &p()), Err(ModelError::XiOutOfRange(_))));
        assert!(matches!(chi(-0.5, &p()), Err(ModelError::XiOutOfRange(_))));
        assert!(matches!(chi(1e-12, &p()), Err(ModelError::Singular(_))));
    }

    #[test]
    fn embedded_configurations_satisfy_both_contacts() {
        for i in 1..40 {
            let xi = 0.1 + (PI - 0.2) * (i as f64) / 40.0;
            let q = chi(xi, &p()).unwrap();
            let kin = forward_kinematics(&q, &p());
            assert_abs_diff_eq!(kin.foot_left.position.x, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(kin.foot_left.position.y, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(kin.foot_right.position.x, 0.2, epsilon = 1e-12);
            assert_abs_diff_eq!(kin.foot_right.position.y, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(kin.foot_left.orientation, PI, epsilon = 1e-12);
            assert_abs_diff_eq!(kin.foot_right.orientation, PI, epsilon = 1e-12);
        }
    }

    #[test]
    fn com_matches_weighted_mean_closed_form() {
        // CoM of the standing family is (d/2 + alpha l cos xi, alpha l sin xi).
        for xi in [0.4, FRAC_PI_3, FRAC_PI_2, 2.0] {
            let q = chi(xi, &p()).unwrap();
            let kin = forward_kinematics(&q, &p());
            assert_abs_diff_eq!(kin.com.x, 0.1 + 0.75 * xi.cos(), epsilon = 1e-14);
            assert_abs_diff_eq!(kin.com.y, 0.75 * xi.sin(), epsilon = 1e-14);
        }
        let kin = forward_kinematics(&chi(FRAC_PI_2, &p()).unwrap(), &p());
        assert_abs_diff_eq!(kin.com.x, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(kin.com.y, 0.75, epsilon = 1e-15);
        let kin3 = forward_kinematics(&chi(FRAC_PI_3, &p()).unwrap(), &p());
        assert_abs_diff_eq!(kin3.com.y, 0.6495190528383289, epsilon = 1e-14);
    }

    #[test]
    fn jacobian_rotation_rows_select_chain_joints() {
        let q = Configuration::new(Vec7::from_column_slice(&[
            0.3, -0.2, 0.7, 1.1, -0.4, 0.9, 0.2,
        ]));
        let (jl, jr) = contact_jacobians(&q, &p());
        assert_eq!(
            jl.row(2).iter().copied().collect::<Vec<_>>(),
            vec![0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0]
        );
        assert_eq!(
            jr.row(2).iter().copied().collect::<Vec<_>>(),
            vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0]
        );
        // Base translational block is the identity for both feet.
        for j in [&jl, &jr] {
            assert_eq!(j[(0, 0)], 1.0);
            assert_eq!(j[(1, 1)], 1.0);
            assert_eq!(j[(0, 1)], 0.0);
            assert_eq!(j[(1, 0)], 0.0);
        }
    }

    #[test]
    fn left_hip_column_at_right_angle_is_horizontal_unit() {
        let q = chi(FRAC_PI_2, &p()).unwrap();
        let (jl, _) = contact_jacobians(&q, &p());
        assert_abs_diff_eq!(jl[(0, 3)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(jl[(1, 3)], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let h = 1e-7;
        let q0 = Vec7::from_column_slice(&[0.2, 0.5, -0.3, 0.8, 1.2, -0.6, 0.4]);
        let (jl, jr) = contact_jacobians(&Configuration::new(q0), &p());
        for i in 0..7 {
            let mut qp = q0;
            let mut qm = q0;
            qp[i] += h;
            qm[i] -= h;
            let kp = forward_kinematics(&Configuration::new(qp), &p());
            let km = forward_kinematics(&Configuration::new(qm), &p());
            let dl = (kp.foot_left.position - km.foot_left.position) / (2.0 * h);
            let dr = (kp.foot_right.position - km.foot_right.position) / (2.0 * h);
            assert_abs_diff_eq!(jl[(0, i)], dl.x, epsilon = 1e-6);
            assert_abs_diff_eq!(jl[(1, i)], dl.y, epsilon = 1e-6);
            assert_abs_diff_eq!(jr[(0, i)], dr.x, epsilon = 1e-6);
            assert_abs_diff_eq!(jr[(1, i)], dr.y, epsilon = 1e-6);
            let ol = (kp.foot_left.orientation - km.foot_left.orientation) / (2.0 * h);
            let or = (kp.foot_right.orientation - km.foot_right.orientation) / (2.0 * h);
            assert_abs_diff_eq!(jl[(2, i)], ol, epsilon = 1e-6);
            assert_abs_diff_eq!(jr[(2, i)], or, epsilon = 1e-6);
        }
    }

    #[test]
    fn embedding_tangent_is_in_the_constraint_nullspace() {
        for xi in [0.2, 0.9, FRAC_PI_2, 1.9, 2.8] {
            let q = chi(xi, &p()).unwrap();
            let v = dchi(xi, &p());
            let (jl, jr) = contact_jacobians(&q, &p());
            let rl = jl * v;
            let rr = jr * v;
            assert_abs_diff_eq!(rl.norm(), 0.0, epsilon = 1e-8);
            assert_abs_diff_eq!(rr.norm(), 0.0, epsilon = 1e-8);
        }
    }
}
