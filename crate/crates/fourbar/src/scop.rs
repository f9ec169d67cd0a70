//! Static center of pressure: the point on the foot line where the contact
//! wrench reduces to a pure force, SCoP = tau_z / fy. This module computes
//! it from wrenches, in closed form along the standing family, numerically
//! by central differences, swept over a grid, and locates the asymptotes
//! where a vertical force vanishes and the CoP escapes to infinity.

use crate::dynamics::PlanarWrench;
use crate::model::{chi, forward_kinematics, SIN_XI_GUARD};
use crate::types::{Vec2, Vec4, Vec6};
use crate::wrench::{Criterion, FourBar, WrenchError};
use thiserror::Error;

/// Default central-difference step [rad].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A vertical force at or below this fraction of the total weight marks the
/// corresponding CoP unbounded.
pub const UNBOUNDED_FY_FACTOR: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScopError {
    #[error("normal force {normal_force:e} too small for a bounded center of pressure")]
    Unbounded { normal_force: f64 },
    #[error("sweep range [{min}, {max}] rad with {steps} steps is invalid (need steps >= 2 and 0 < min < max < pi)")]
    InvalidSweep { min: f64, max: f64, steps: usize },
    #[error(transparent)]
    Wrench(#[from] WrenchError),
}

/// CoP coordinate along the foot line, tagged unbounded near an asymptote
/// so sweeps can keep the row instead of failing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScopValue {
    pub value: f64,
    pub bounded: bool,
}

/// One sweep row: everything the figure data needs, internally consistent
/// (the SCoP values are the ratios of the stored wrench components).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScopSample {
    pub xi: f64,
    pub scop_left: ScopValue,
    pub scop_right: ScopValue,
    pub eta_left: f64,
    pub eta_right: f64,
    pub wrenches: crate::dynamics::WrenchPair,
    pub tau: Vec4,
    pub com_x: f64,
}

/// Planar CoP of a single contact wrench. `weight` sets the force scale
/// against which the vertical component is judged: the result is flagged
/// unbounded when |fy| <= 1e-9 weight. The ratio itself is returned as
/// computed and is non-finite only when fy is exactly zero.
pub fn static_cop_planar(f: &PlanarWrench, weight: f64) -> ScopValue {
    ScopValue {
        value: f.tau_z / f.fy,
        bounded: f.fy.abs() > UNBOUNDED_FY_FACTOR * weight.abs(),
    }
}

/// CoP of a spatial wrench (fx, fy, fz, mx, my, mz) on the z = 0 plane:
/// (-my, mx) / fz.
pub fn static_cop_3d(f: &Vec6) -> Result<Vec2, ScopError> {
    let fz = f[2];
    let scale = f.amax().max(1.0);
    if fz.abs() <= 1e-12 * scale {
        return Err(ScopError::Unbounded { normal_force: fz });
    }
    Ok(Vec2::new(-f[4] / fz, f[3] / fz))
}

/// Embed a planar wrench into the spatial layout used by
/// [`static_cop_3d`]: the plane's torque is a moment about -y of the
/// spatial frame, so (fx, fy, tau_z) maps to (fx, 0, fy, 0, -tau_z, 0).
pub fn embed_planar(f: &PlanarWrench) -> Vec6 {
    Vec6::from_column_slice(&[f.fx, 0.0, f.fy, 0.0, -f.tau_z, 0.0])
}

fn ordered<T>(fb: &FourBar, pair: (T, T)) -> (T, T) {
    if fb.labels_swapped() {
        (pair.1, pair.0)
    } else {
        pair
    }
}

fn require_hyp3(fb: &FourBar) -> Result<(), ScopError> {
    if fb.params().holds_hyp3() {
        Ok(())
    } else {
        Err(WrenchError::Hypothesis3Violated {
            m_b: fb.params().m_b,
            m_l: fb.params().m_l,
        }
        .into())
    }
}

fn check_domain(xi: f64, criterion: Criterion) -> Result<(), ScopError> {
    if !(xi > 0.0 && xi < std::f64::consts::PI) {
        return Err(WrenchError::Model(crate::model::ModelError::XiOutOfRange(xi)).into());
    }
    if criterion == Criterion::MinJointTorqueNorm && xi.sin().abs() < SIN_XI_GUARD {
        return Err(WrenchError::Singularity(xi.sin().abs()).into());
    }
    Ok(())
}

impl FourBar {
    /// Closed-form SCoP pair along the standing family. Requires the
    /// balanced mass ratio; the minimum-tangential criterion shares the
    /// minimum-wrench expressions.
    pub fn scop_closed_form(
        &self,
        xi: f64,
        criterion: Criterion,
    ) -> Result<(ScopValue, ScopValue), ScopError> {
        require_hyp3(self)?;
        check_domain(xi, criterion)?;
        let c = xi.cos();
        let p = self.params();
        let (al, l, d) = (p.alpha(), p.l, p.d);
        let pair = match criterion {
            Criterion::MinWrenchNorm | Criterion::MinTangential => {
                let d4 = d * d + 4.0;
                let fy = |sign: f64| 0.5 + sign * al * l * d * c / d4;
                let scop = |sign: f64| ScopValue {
                    value: 4.0 * al * l * c / (d4 + sign * 2.0 * al * l * d * c),
                    bounded: fy(sign).abs() > UNBOUNDED_FY_FACTOR,
                };
                (scop(-1.0), scop(1.0))
            }
            Criterion::MinJointTorqueNorm => {
                let fy = |sign: f64| 0.5 + sign * al * l * c / (2.0 * d);
                let scop = |sign: f64| ScopValue {
                    value: al * l * c * d / (2.0 * (d + sign * al * l * c)),
                    bounded: fy(sign).abs() > UNBOUNDED_FY_FACTOR,
                };
                (scop(-1.0), scop(1.0))
            }
        };
        Ok(ordered(self, pair))
    }

    /// Closed-form sensitivity d(SCoP)/d(xi) pair, strictly negative on the
    /// standing range for both criteria.
    pub fn sensitivity_closed_form(
        &self,
        xi: f64,
        criterion: Criterion,
    ) -> Result<(f64, f64), ScopError> {
        require_hyp3(self)?;
        check_domain(xi, criterion)?;
        let (s, c) = xi.sin_cos();
        let p = self.params();
        let (al, l, d) = (p.alpha(), p.l, p.d);
        let pair = match criterion {
            Criterion::MinWrenchNorm | Criterion::MinTangential => {
                let d4 = d * d + 4.0;
                let eta = |sign: f64| {
                    let den = d4 + sign * 2.0 * al * l * d * c;
                    -4.0 * al * l * s * d4 / (den * den)
                };
                (eta(-1.0), eta(1.0))
            }
            Criterion::MinJointTorqueNorm => {
                let eta = |sign: f64| {
                    let den = d + sign * al * l * c;
                    -al * l * d * d * s / (2.0 * den * den)
                };
                (eta(-1.0), eta(1.0))
            }
        };
        Ok(ordered(self, pair))
    }

    /// Sensitivity by central difference of the full numeric pipeline
    /// (embedding, criterion solve, CoP ratio) with step `h`. Fails if
    /// either probe sits on an asymptote.
    pub fn sensitivity_numeric(
        &self,
        xi: f64,
        criterion: Criterion,
        h: f64,
    ) -> Result<(f64, f64), ScopError> {
        let probe = |x: f64| -> Result<(ScopValue, ScopValue), ScopError> {
            let q = chi(x, self.params()).map_err(WrenchError::from)?;
            let (f, _) = self.resolve(criterion, &q)?;
            let mg = self.params().weight();
            Ok((
                static_cop_planar(&f.left, mg),
                static_cop_planar(&f.right, mg),
            ))
        };
        let (lp, rp) = probe(xi + h)?;
        let (lm, rm) = probe(xi - h)?;
        for v in [lp, rp, lm, rm] {
            if !v.bounded {
                return Err(ScopError::Unbounded {
                    normal_force: 0.0,
                });
            }
        }
        Ok((
            (lp.value - lm.value) / (2.0 * h),
            (rp.value - rm.value) / (2.0 * h),
        ))
    }

    /// Evaluate one sweep row at `xi`.
    fn sample(&self, xi: f64, criterion: Criterion) -> Result<ScopSample, ScopError> {
        let q = chi(xi, self.params()).map_err(WrenchError::from)?;
        let (wrenches, tau) = self.resolve(criterion, &q)?;
        let mg = self.params().weight();
        let (eta_left, eta_right) = self
            .sensitivity_numeric(xi, criterion, DEFAULT_FD_STEP)
            .unwrap_or((f64::INFINITY, f64::INFINITY));
        Ok(ScopSample {
            xi,
            scop_left: static_cop_planar(&wrenches.left, mg),
            scop_right: static_cop_planar(&wrenches.right, mg),
            eta_left,
            eta_right,
            wrenches,
            tau,
            com_x: forward_kinematics(&q, self.params()).com.x,
        })
    }

    /// Sweep over an explicit, monotonically increasing grid of internal
    /// angles. After the rows are computed, a vertical-force sign change
    /// between neighbouring rows marks both straddling rows' CoP unbounded
    /// for that foot: the asymptote lies between them.
    pub fn sweep_points(
        &self,
        xis: &[f64],
        criterion: Criterion,
    ) -> Result<Vec<ScopSample>, ScopError> {
        let mut rows = Vec::with_capacity(xis.len());
        for &xi in xis {
            rows.push(self.sample(xi, criterion)?);
        }
        for i in 1..rows.len() {
            if rows[i - 1].wrenches.left.fy * rows[i].wrenches.left.fy < 0.0 {
                rows[i - 1].scop_left.bounded = false;
                rows[i].scop_left.bounded = false;
            }
            if rows[i - 1].wrenches.right.fy * rows[i].wrenches.right.fy < 0.0 {
                rows[i - 1].scop_right.bounded = false;
                rows[i].scop_right.bounded = false;
            }
        }
        Ok(rows)
    }

    /// Sweep over a uniform grid of `steps` points spanning
    /// [`xi_min`, `xi_max`] (radians, inside (0, pi)).
    pub fn sweep(
        &self,
        xi_min: f64,
        xi_max: f64,
        steps: usize,
        criterion: Criterion,
    ) -> Result<Vec<ScopSample>, ScopError> {
        if steps < 2 || !(xi_min < xi_max) || xi_min <= 0.0 || xi_max >= std::f64::consts::PI {
            return Err(ScopError::InvalidSweep { min: xi_min, max: xi_max, steps });
        }
        let xis: Vec<f64> = (0..steps)
            .map(|i| xi_min + (xi_max - xi_min) * i as f64 / (steps - 1) as f64)
            .collect();
        self.sweep_points(&xis, criterion)
    }

    /// Internal angles where a vertical foot force of the chosen criterion
    /// crosses zero, located by bisecting the numeric pipeline to 1e-10 rad.
    /// Empty when the criterion keeps both feet loaded over the whole range,
    /// as minimum wrench norm does for moderate foot spacing.
    pub fn asymptote_locator(&self, criterion: Criterion) -> Result<Vec<f64>, ScopError> {
        let fy = |xi: f64, left: bool| -> Result<f64, ScopError> {
            let q = chi(xi, self.params()).map_err(WrenchError::from)?;
            let (f, _) = self.resolve(criterion, &q)?;
            Ok(if left { f.left.fy } else { f.right.fy })
        };
        let n = 4000;
        let lo = 1e-3;
        let hi = std::f64::consts::PI - 1e-3;
        let mut roots = Vec::new();
        for left in [true, false] {
            let mut prev_x = lo;
            let mut prev_f = fy(lo, left)?;
            for i in 1..=n {
                let x = lo + (hi - lo) * i as f64 / n as f64;
                let fx = fy(x, left)?;
                if prev_f * fx < 0.0 {
                    let (mut a, mut b, mut fa) = (prev_x, x, prev_f);
                    while b - a > 1e-10 {
                        let m = 0.5 * (a + b);
                        let fm = fy(m, left)?;
                        if fa * fm <= 0.0 {
                            b = m;
                        } else {
                            a = m;
                            fa = fm;
                        }
                    }
                    roots.push(0.5 * (a + b));
                }
                prev_x = x;
                prev_f = fx;
            }
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        Ok(roots)
    }
}
