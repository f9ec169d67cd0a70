//! Redundancy resolution of the contact wrenches.
//!
//! Standing on two feet leaves a three-parameter family of contact wrenches
//! for every equilibrium; this module implements the three selection
//! criteria (minimum wrench norm, minimum joint-torque norm, minimum
//! tangential force) both through the numeric pipeline and as closed
//! trigonometric forms. The numeric pipeline is the arbiter: closed forms
//! are checked against it, never the other way around.

use crate::centroidal::{centroidal_transforms, CentroidalFrame};
use crate::dynamics::{self, DynamicsError, PlanarWrench, WrenchPair};
use crate::model::{chi, Configuration, ModelError, SIN_XI_GUARD};
use crate::params::ModelParams;
use crate::types::{Mat3, Mat4x3, Vec3, Vec4, Vec6};
use nalgebra::SMatrix;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Wrench redundancy resolution criteria. Minimum tangential force provably
/// coincides with minimum wrench norm for this mechanism, and the solver
/// returns the identical wrench pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    MinWrenchNorm,
    MinJointTorqueNorm,
    MinTangential,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [
        Criterion::MinWrenchNorm,
        Criterion::MinJointTorqueNorm,
        Criterion::MinTangential,
    ];
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::MinWrenchNorm => "min-wrench",
            Criterion::MinJointTorqueNorm => "min-torque",
            Criterion::MinTangential => "min-tangential",
        })
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-wrench" => Ok(Criterion::MinWrenchNorm),
            "min-torque" => Ok(Criterion::MinJointTorqueNorm),
            "min-tangential" => Ok(Criterion::MinTangential),
            other => Err(format!(
                "unknown criterion `{other}` (expected min-wrench, min-torque, or min-tangential)"
            )),
        }
    }
}

/// Redundancy direction shared antisymmetrically between the feet: the
/// centroidal wrench splits as (mg/2)e2 -/+ delta before transport, so any
/// delta preserves the balance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaRedundancy {
    pub delta: Vec3,
}

/// Full output of the minimum joint-torque criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinTorqueSolution {
    pub wrenches: WrenchPair,
    pub delta: DeltaRedundancy,
    pub tau: Vec4,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WrenchError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("closed form requires the balanced mass ratio m_b = 2 m_l (got m_b = {m_b}, m_l = {m_l})")]
    Hypothesis3Violated { m_b: f64, m_l: f64 },
    #[error("|sin xi| = {0:e} is below the singularity guard {SIN_XI_GUARD:e}")]
    Singularity(f64),
    #[error("label calibration failed: best residual {0:e} relative to weight")]
    Calibration(f64),
}

/// Mechanism handle: validated parameters plus the one-time left/right
/// label calibration binding the closed-form expressions to the numeric
/// pipeline's foot order. Calibration runs eagerly at construction so the
/// handle is immutable afterwards and safe to share across threads.
#[derive(Debug, Clone)]
pub struct FourBar {
    params: ModelParams,
    swap_labels: bool,
}

/// Relative mismatch above which calibration refuses to pick a labeling.
const CALIBRATION_TOL: f64 = 1e-6;

impl FourBar {
    pub fn new(params: ModelParams) -> Result<Self, WrenchError> {
        let xi = std::f64::consts::FRAC_PI_3;
        let q = chi(xi, &params)?;
        let numeric = min_wrench_pipeline(&q, &params)?.stacked();
        let closed = min_wrench_components(xi, &params).stacked();
        let direct = (numeric - closed).norm();
        let swapped = (numeric - swap_blocks(&closed)).norm();
        let best = direct.min(swapped);
        if best > CALIBRATION_TOL * params.weight() {
            return Err(WrenchError::Calibration(best / params.weight()));
        }
        Ok(FourBar { params, swap_labels: swapped < direct })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Whether the closed-form left/right expressions had to be exchanged
    /// to match the numeric pipeline's foot order.
    pub fn labels_swapped(&self) -> bool {
        self.swap_labels
    }

    /// Minimum-norm contact wrenches balancing gravity: f = X^T (X X^T)^-1
    /// of the centroidal weight wrench.
    pub fn solve_min_wrench(&self, q: &Configuration) -> Result<WrenchPair, WrenchError> {
        min_wrench_pipeline(q, &self.params)
    }

    /// Closed-form minimum-wrench pair on the standing family.
    pub fn closed_form_min_wrench(&self, xi: f64) -> Result<WrenchPair, WrenchError> {
        self.require_hyp3()?;
        check_xi(xi)?;
        Ok(self.apply_labels(min_wrench_components(xi, &self.params)))
    }

    /// Minimum joint-torque criterion: the redundancy direction from the
    /// left-pseudoinverse formula, wrenches assembled through the inverse
    /// transports, torques from the equilibrium map.
    pub fn solve_min_torque(&self, q: &Configuration) -> Result<MinTorqueSolution, WrenchError> {
        let s = q.q[3].sin().abs();
        if s < SIN_XI_GUARD {
            return Err(WrenchError::Singularity(s));
        }
        let frame = centroidal_transforms(q, &self.params);
        let cs = dynamics::stack(q, &self.params)?;
        let jlj: Mat4x3 = cs.left().fixed_view::<3, 4>(0, 3).transpose().into_owned();
        let jrj: Mat4x3 = cs.right().fixed_view::<3, 4>(0, 3).transpose().into_owned();
        let mass = crate::mass::mass_matrix(q, &self.params);
        let m = self.params.total_mass();

        let wl = jlj * frame.x_left_inverse();
        let wr = jrj * frame.x_right_inverse();
        let k = wr - wl;
        let half_weight = Vec3::new(0.0, self.params.weight() / 2.0, 0.0);
        let a = (wl + wr - mass.coupling_block().transpose() * (2.0 / m)) * half_weight;

        let ktk = k.transpose() * k;
        let delta = match ktk.try_inverse() {
            Some(inv) => -(inv * k.transpose() * a),
            None => {
                let pinv = k
                    .pseudo_inverse(1e-12)
                    .map_err(|_| DynamicsError::RankDeficient { ratio: 0.0 })?;
                -(pinv * a)
            }
        };

        let wrenches = assemble_from_delta(&frame, &delta, &self.params);
        let tau = dynamics::torque_from_wrench(q, &self.params, &wrenches)?;
        Ok(MinTorqueSolution { wrenches, delta: DeltaRedundancy { delta }, tau })
    }

    /// Closed-form minimum-torque pair: the closed redundancy direction
    /// pushed through the inverse transports of `frame`. The frame must
    /// belong to the standing configuration at `xi`.
    pub fn closed_form_min_torque(
        &self,
        xi: f64,
        frame: &CentroidalFrame,
    ) -> Result<WrenchPair, WrenchError> {
        check_xi(xi)?;
        let (s, c) = xi.sin_cos();
        if s.abs() < SIN_XI_GUARD {
            return Err(WrenchError::Singularity(s.abs()));
        }
        let (al, l, d) = (self.params.alpha(), self.params.l, self.params.d);
        let delta = Vec3::new(
            al * l * c * c / (2.0 * d * s),
            al * l * c / (2.0 * d),
            d / 4.0,
        ) * self.params.weight();
        let pair = assemble_from_delta(frame, &delta, &self.params);
        Ok(self.apply_labels(pair))
    }

    /// Minimum tangential force. The two zero-tangential conditions are
    /// solved by a minimum-norm homogeneous term over the wrench nullspace;
    /// that term is verified to vanish, and the minimum-wrench pair is
    /// returned unchanged.
    pub fn solve_min_tangential(&self, q: &Configuration) -> Result<WrenchPair, WrenchError> {
        let f = self.solve_min_wrench(q)?;
        let frame = centroidal_transforms(q, &self.params);
        let mut x = SMatrix::<f64, 3, 6>::zeros();
        x.fixed_view_mut::<3, 3>(0, 0).copy_from(&frame.x_left);
        x.fixed_view_mut::<3, 3>(0, 3).copy_from(&frame.x_right);

        // Homogeneous wrenches are N_f f0 with the orthogonal projector
        // N_f = 1 - X^T (X X^T)^-1 X. The two conditions
        // e1^T (f + N_f f0) = e4^T (f + N_f f0) = 0 are rank one on the
        // balance manifold (the tangentials already sum to zero there), so
        // the minimum-norm f0 comes from a cutoff pseudoinverse.
        let gram_inv = (x * x.transpose())
            .try_inverse()
            .ok_or(DynamicsError::RankDeficient { ratio: 0.0 })?;
        let proj = SMatrix::<f64, 6, 6>::identity() - x.transpose() * gram_inv * x;
        let mut cond = SMatrix::<f64, 2, 6>::zeros();
        cond.row_mut(0).copy_from(&proj.row(0));
        cond.row_mut(1).copy_from(&proj.row(3));
        let rhs = -nalgebra::Vector2::new(f.left.fx, f.right.fx);
        let f0 = cond
            .pseudo_inverse(1e-12)
            .map_err(|_| DynamicsError::RankDeficient { ratio: 0.0 })?
            * rhs;

        let tol = 1e-9 * self.params.weight();
        assert!(
            f0.norm() <= tol,
            "homogeneous term {:e} exceeds {:e}; minimum-tangential no longer \
             coincides with minimum wrench norm",
            f0.norm(),
            tol
        );
        Ok(f)
    }

    /// Criterion dispatch returning the wrench pair and the joint torques
    /// realizing it.
    pub fn resolve(
        &self,
        criterion: Criterion,
        q: &Configuration,
    ) -> Result<(WrenchPair, Vec4), WrenchError> {
        match criterion {
            Criterion::MinWrenchNorm => {
                let f = self.solve_min_wrench(q)?;
                let tau = dynamics::torque_from_wrench(q, &self.params, &f)?;
                Ok((f, tau))
            }
            Criterion::MinJointTorqueNorm => {
                let sol = self.solve_min_torque(q)?;
                Ok((sol.wrenches, sol.tau))
            }
            Criterion::MinTangential => {
                let f = self.solve_min_tangential(q)?;
                let tau = dynamics::torque_from_wrench(q, &self.params, &f)?;
                Ok((f, tau))
            }
        }
    }

    fn require_hyp3(&self) -> Result<(), WrenchError> {
        if self.params.holds_hyp3() {
            Ok(())
        } else {
            Err(WrenchError::Hypothesis3Violated {
                m_b: self.params.m_b,
                m_l: self.params.m_l,
            })
        }
    }

    fn apply_labels(&self, pair: WrenchPair) -> WrenchPair {
        if self.swap_labels {
            WrenchPair::new(pair.right, pair.left)
        } else {
            pair
        }
    }
}

fn check_xi(xi: f64) -> Result<(), WrenchError> {
    if xi > 0.0 && xi < std::f64::consts::PI {
        Ok(())
    } else {
        Err(WrenchError::Model(ModelError::XiOutOfRange(xi)))
    }
}

fn swap_blocks(f: &Vec6) -> Vec6 {
    let mut out = Vec6::zeros();
    out.fixed_rows_mut::<3>(0).copy_from(&f.fixed_rows::<3>(3));
    out.fixed_rows_mut::<3>(3).copy_from(&f.fixed_rows::<3>(0));
    out
}

fn min_wrench_pipeline(
    q: &Configuration,
    params: &ModelParams,
) -> Result<WrenchPair, WrenchError> {
    let frame = centroidal_transforms(q, params);
    let mut x = SMatrix::<f64, 3, 6>::zeros();
    x.fixed_view_mut::<3, 3>(0, 0).copy_from(&frame.x_left);
    x.fixed_view_mut::<3, 3>(0, 3).copy_from(&frame.x_right);
    let gram: Mat3 = x * x.transpose();
    let inv = gram
        .try_inverse()
        .ok_or(DynamicsError::RankDeficient { ratio: 0.0 })?;
    let f = x.transpose() * inv * Vec3::new(0.0, params.weight(), 0.0);
    Ok(WrenchPair::from_stacked(&f))
}

/// Closed minimum-wrench components: zero tangentials, vertical forces
/// mg(1/2 -/+ alpha l d cos xi / (d^2 + 4)), both contact torques
/// mg 2 alpha l cos xi / (d^2 + 4).
fn min_wrench_components(xi: f64, params: &ModelParams) -> WrenchPair {
    let c = xi.cos();
    let (al, l, d) = (params.alpha(), params.l, params.d);
    let mg = params.weight();
    let d4 = d * d + 4.0;
    let shift = al * l * d * c / d4;
    let tz = mg * 2.0 * al * l * c / d4;
    WrenchPair::new(
        PlanarWrench::new(0.0, mg * (0.5 - shift), tz),
        PlanarWrench::new(0.0, mg * (0.5 + shift), tz),
    )
}

/// Split the weight as (mg/2)e2 -/+ delta and transport each share to its
/// foot; the construction satisfies centroidal balance for any delta.
fn assemble_from_delta(
    frame: &CentroidalFrame,
    delta: &Vec3,
    params: &ModelParams,
) -> WrenchPair {
    let half = Vec3::new(0.0, params.weight() / 2.0, 0.0);
    let fl = frame.x_left_inverse() * (half - delta);
    let fr = frame.x_right_inverse() * (half + delta);
    WrenchPair::new(PlanarWrench::from_vector(&fl), PlanarWrench::from_vector(&fr))
}
