//! Runtime invariant suite behind the command-line `verify` subcommand.
//!
//! Every check produces one report line with a status, a name, the worst
//! residual observed, and the tolerance it was held to. Checks that require
//! the balanced mass ratio m_b = 2 m_l are reported as skipped for other
//! parameter sets instead of being dropped silently. Audit lines report the
//! deviation of the variant coefficient sets in [`crate::audit`] from the
//! numeric pipeline; they are informational and never fail the run.

use crate::audit;
use crate::centroidal::{centroidal_transforms, decoupling_transform, transformed_foot_jacobians};
use crate::dynamics::{
    equilibrium_contact_forces, equilibrium_residual, joint_selector, nullspace_projector,
    stack, torque_from_wrench,
};
use crate::mass::{coupling_block_closed, gravity_vector, mass_matrix, potential_energy};
use crate::model::{chi, dchi, forward_kinematics, contact_jacobians, Configuration};
use crate::params::ModelParams;
use crate::scop::{static_cop_planar, ScopError};
use crate::types::{Mat3, Mat7, Vec2, Vec3};
use crate::wrench::{Criterion, FourBar, WrenchError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    Audit,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIPPED",
            CheckStatus::Audit => "AUDIT",
        };
        write!(f, "{s}")
    }
}

/// One verified invariant: worst residual over its probe set against the
/// tolerance it must stay under.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub residual: f64,
    pub tolerance: f64,
    pub note: Option<String>,
}

impl Check {
    fn gauge(name: &'static str, residual: f64, tolerance: f64) -> Check {
        let status = if residual.is_finite() && residual <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Check { name, status, residual, tolerance, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }

    fn skipped(name: &'static str, note: impl Into<String>) -> Check {
        Check {
            name,
            status: CheckStatus::Skipped,
            residual: f64::NAN,
            tolerance: f64::NAN,
            note: Some(note.into()),
        }
    }

    fn audit(name: &'static str, deviation: f64) -> Check {
        Check {
            name,
            status: CheckStatus::Audit,
            residual: deviation,
            tolerance: f64::NAN,
            note: None,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            CheckStatus::Skipped => {
                write!(f, "{:<8} {:<62} ({})", self.status, self.name, self.note.as_deref().unwrap_or(""))
            }
            CheckStatus::Audit => {
                write!(
                    f,
                    "{:<8} {:<62} deviation {:.3e} (informational)",
                    self.status, self.name, self.residual
                )?;
                if let Some(n) = &self.note {
                    write!(f, " [{n}]")?;
                }
                Ok(())
            }
            _ => {
                write!(
                    f,
                    "{:<8} {:<62} residual {:.3e}  tol {:.1e}",
                    self.status, self.name, self.residual, self.tolerance
                )?;
                if let Some(n) = &self.note {
                    write!(f, " [{n}]")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    /// True when no check failed (skipped and audit lines do not count).
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    /// (pass, fail, skipped, audit) counts.
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        let mut n = (0, 0, 0, 0);
        for c in &self.checks {
            match c.status {
                CheckStatus::Pass => n.0 += 1,
                CheckStatus::Fail => n.1 += 1,
                CheckStatus::Skipped => n.2 += 1,
                CheckStatus::Audit => n.3 += 1,
            }
        }
        n
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let (p, fl, s, a) = self.counts();
        writeln!(f, "{} checks: {p} passed, {fl} failed, {s} skipped, {a} audit", self.checks.len())
    }
}

/// Switches for negative-control runs.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Corrupt the directly assembled coupling block before it is compared
    /// with the Gram mass matrix, forcing that check to fail. Exercises the
    /// failure reporting path end to end.
    pub corrupt_coupling_block: bool,
}

const BALANCED_NOTE: &str = "requires the balanced mass ratio m_b = 2 m_l";

fn dyn_err(e: crate::dynamics::DynamicsError) -> ScopError {
    WrenchError::from(e).into()
}

/// Run the full invariant suite for one parameter set. Deterministic: the
/// random probe angles come from a fixed-seed generator.
pub fn run_verification(
    params: &ModelParams,
    options: &VerifyOptions,
) -> Result<VerifyReport, ScopError> {
    let p = params;
    let fb = FourBar::new(p.clone())?;
    let mg = p.weight();
    let m = p.total_mass();
    let hyp3 = p.holds_hyp3();
    let mut checks: Vec<Check> = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let random_xis: Vec<f64> = (0..100).map(|_| rng.gen_range(0.3..PI - 0.3)).collect();
    let sweep_grid: Vec<f64> = (0..401).map(|i| (70.0 + 0.1 * i as f64).to_radians()).collect();

    // -- kinematics ------------------------------------------------------

    {
        let mut res = 0.0f64;
        for &xi in &random_xis {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let kin = forward_kinematics(&q, p);
            res = res
                .max(kin.foot_left.position.norm())
                .max((kin.foot_right.position - Vec2::new(p.d, 0.0)).norm())
                .max((kin.foot_left.orientation - PI).abs())
                .max((kin.foot_right.orientation - PI).abs());
        }
        checks.push(Check::gauge("standing family keeps both feet at their contacts", res, 1e-12));
    }

    {
        let mut res = 0.0f64;
        for &xi in &random_xis {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let cs = stack(&q, p).map_err(dyn_err)?;
            res = res.max((cs.jacobian() * dchi(xi, p)).amax());
        }
        checks.push(Check::gauge("family tangent lies in the constraint nullspace", res, 1e-12));
    }

    {
        let mut res = 0.0f64;
        let h = 1e-6;
        for &xi in random_xis.iter().take(5) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let (jl, jr) = contact_jacobians(&q, p);
            for k in 0..7 {
                let mut qp = q.q;
                let mut qm = q.q;
                qp[k] += h;
                qm[k] -= h;
                let kp = forward_kinematics(&Configuration::new(qp), p);
                let km = forward_kinematics(&Configuration::new(qm), p);
                let fd = |a: f64, b: f64| (a - b) / (2.0 * h);
                let cols = [
                    (jl, kp.foot_left, km.foot_left),
                    (jr, kp.foot_right, km.foot_right),
                ];
                for (j, fp, fm) in cols {
                    res = res
                        .max((fd(fp.position.x, fm.position.x) - j[(0, k)]).abs())
                        .max((fd(fp.position.y, fm.position.y) - j[(1, k)]).abs())
                        .max((fd(fp.orientation, fm.orientation) - j[(2, k)]).abs());
                }
            }
        }
        checks.push(Check::gauge("contact jacobians match central differences", res, 1e-6));
    }

    // -- mass model ------------------------------------------------------

    {
        let mut sym = 0.0f64;
        let mut psd = 0.0f64;
        let mut ankle = 0.0f64;
        let mut coupling = 0.0f64;
        for &xi in &random_xis {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let mm = mass_matrix(&q, p);
            sym = sym.max((mm.matrix - mm.matrix.transpose()).amax());
            let eig = mm.matrix.symmetric_eigen().eigenvalues;
            psd = psd.max(eig.iter().copied().fold(0.0f64, |a, v| a.max(-v)));
            for i in 0..7 {
                for &r in &[4usize, 6] {
                    ankle = ankle.max(mm.matrix[(r, i)].abs()).max(mm.matrix[(i, r)].abs());
                }
            }
            let mut direct = coupling_block_closed(&q, p);
            if options.corrupt_coupling_block {
                direct[(0, 0)] += 1e-6;
            }
            coupling = coupling.max((mm.coupling_block() - direct).amax());
        }
        checks.push(Check::gauge("mass matrix is symmetric", sym, 1e-12));
        checks.push(Check::gauge("mass matrix is positive semidefinite", psd, 1e-10));
        checks.push(Check::gauge("massless ankles leave exact zero rows and columns", ankle, 0.0));
        checks.push(Check::gauge(
            "base-joint coupling block: assembled vs direct geometry",
            coupling,
            1e-12,
        ));
    }

    {
        let mut res = 0.0f64;
        let h = 1e-6;
        for &xi in random_xis.iter().take(10) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let g = gravity_vector(&q, p);
            for k in 0..7 {
                let mut qp = q.q;
                let mut qm = q.q;
                qp[k] += h;
                qm[k] -= h;
                let fd = (potential_energy(&Configuration::new(qp), p)
                    - potential_energy(&Configuration::new(qm), p))
                    / (2.0 * h);
                res = res.max((fd - g[k]).abs());
            }
        }
        checks.push(Check::gauge("gravity vector equals the potential gradient", res, 1e-7));
    }

    // -- constrained equilibrium -----------------------------------------

    {
        let mut kkt = 0.0f64;
        let mut weighted = [0.0f64; 2];
        let mut proj = 0.0f64;
        let mut annihilate = 0.0f64;
        let mut closed_vs_weighted = 0.0f64;
        let mut adjoint = 0.0f64;
        let mut resid = 0.0f64;
        let mut round = 0.0f64;
        for &xi in random_xis.iter().take(20) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let f_star = fb.solve_min_wrench(&q)?;
            let tau_star = torque_from_wrench(&q, p, &f_star).map_err(dyn_err)?;
            let f_kkt = equilibrium_contact_forces(&q, p, &tau_star).map_err(dyn_err)?;
            kkt = kkt.max((f_kkt.stacked() - f_star.stacked()).amax() / mg);

            let cs = stack(&q, p).map_err(dyn_err)?;
            let j = *cs.jacobian();
            let mm = mass_matrix(&q, p).matrix;
            let g = gravity_vector(&q, p);
            let b = joint_selector();
            for (slot, eps) in [(0usize, 1e-6f64), (1, 1e-4)] {
                let mut me = mm;
                me[(4, 4)] += eps;
                me[(6, 6)] += eps;
                let mi = me
                    .try_inverse()
                    .ok_or_else(|| dyn_err(crate::dynamics::DynamicsError::NotPositiveDefinite))?;
                let w = j * mi;
                let a = w * j.transpose();
                let lu = a.full_piv_lu();
                let fe = lu
                    .solve(&(w * (g - b * tau_star)))
                    .ok_or_else(|| dyn_err(crate::dynamics::DynamicsError::RankDeficient { ratio: 0.0 }))?;
                weighted[slot] = weighted[slot].max((fe - f_kkt.stacked()).amax() / mg);
                if slot == 0 {
                    let n_eps = Mat7::identity()
                        - j.transpose()
                            * lu.solve(&w).ok_or_else(|| {
                                dyn_err(crate::dynamics::DynamicsError::RankDeficient { ratio: 0.0 })
                            })?;
                    let n = nullspace_projector(&q, p).map_err(dyn_err)?;
                    closed_vs_weighted = closed_vs_weighted.max((n - n_eps).amax());
                    let jm = w;
                    adjoint = adjoint.max((jm * n_eps).amax() / jm.amax());
                }
            }

            let n = nullspace_projector(&q, p).map_err(dyn_err)?;
            proj = proj
                .max((n * n - n).amax())
                .max((n.trace() - 1.0).abs());
            annihilate = annihilate.max((n * j.transpose()).amax());
            resid = resid.max(equilibrium_residual(&q, p, &tau_star).map_err(dyn_err)?.amax() / mg);
            round = round.max((torque_from_wrench(&q, p, &f_kkt).map_err(dyn_err)? - tau_star).amax() / mg);
        }
        checks.push(Check::gauge("saddle solve reproduces the balancing wrenches", kkt, 1e-9));
        checks.push(Check::gauge(
            "regularized weighted solve agrees with the saddle solve",
            weighted[0],
            1e-8,
        ));
        checks.push(Check::gauge(
            "weighted solve is independent of the regularization strength",
            weighted[1],
            1e-8,
        ));
        checks.push(Check::gauge("nullspace projector is idempotent with unit trace", proj, 1e-9));
        checks.push(Check::gauge("nullspace projector annihilates constraint forces", annihilate, 1e-11));
        checks.push(Check::gauge(
            "rank-one projector matches the regularized weighted projector",
            closed_vs_weighted,
            1e-4,
        ));
        checks.push(Check::gauge("projector adjoint law on the regularized pair", adjoint, 1e-9));
        checks.push(Check::gauge("equilibrium residual vanishes at consistent torques", resid, 1e-9));
        checks.push(Check::gauge("torque recovery round-trips through the saddle solve", round, 1e-9));
    }

    // -- centroidal coordinates -------------------------------------------

    {
        let mut transport_inv = 0.0f64;
        let mut t_round = 0.0f64;
        let mut block = 0.0f64;
        let mut grav = 0.0f64;
        let mut sumdiff = 0.0f64;
        let mut momentum = 0.0f64;
        for &xi in random_xis.iter().take(50) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let frame = centroidal_transforms(&q, p);
            transport_inv = transport_inv
                .max((frame.x_left * frame.x_left_inverse() - Mat3::identity()).amax())
                .max((frame.x_right * frame.x_right_inverse() - Mat3::identity()).amax());

            let mm = mass_matrix(&q, p);
            let dec = decoupling_transform(&q, &mm, p)
                .map_err(|_| dyn_err(crate::dynamics::DynamicsError::NotPositiveDefinite))?;
            t_round = t_round.max((dec.t * dec.inverse() - Mat7::identity()).amax());

            let mn = dec.inverse().transpose() * mm.matrix * dec.inverse();
            block = block
                .max(mn.fixed_view::<3, 4>(0, 3).amax())
                .max(mn.fixed_view::<4, 3>(3, 0).amax())
                .max((mn[(0, 0)] - m).abs())
                .max((mn[(1, 1)] - m).abs())
                .max(mn[(0, 1)].abs())
                .max(mn[(0, 2)].abs())
                .max(mn[(1, 2)].abs());

            let gn = dec.inverse().transpose() * gravity_vector(&q, p);
            let mut gres = (gn[1] - mg).abs().max(gn[0].abs());
            for k in 2..7 {
                gres = gres.max(gn[k].abs());
            }
            grav = grav.max(gres / mg);

            let (tl, tr) = transformed_foot_jacobians(&q, &mm, &frame, p)
                .map_err(|_| dyn_err(crate::dynamics::DynamicsError::NotPositiveDefinite))?;
            let sum = tl.base.transpose() * frame.x_left_inverse()
                + tr.base.transpose() * frame.x_right_inverse();
            let diff = tl.base.transpose() * frame.x_left_inverse()
                - tr.base.transpose() * frame.x_right_inverse();
            sumdiff = sumdiff
                .max((sum - 2.0 * Mat3::identity()).amax())
                .max(diff.amax());

            let mb_inv = mm
                .base_block()
                .try_inverse()
                .ok_or_else(|| dyn_err(crate::dynamics::DynamicsError::NotPositiveDefinite))?;
            momentum = momentum.max((dec.lambda - dec.c_x_b * mb_inv * m).amax());
        }
        checks.push(Check::gauge("wrench transport inverses are exact", transport_inv, 0.0));
        checks.push(Check::gauge("decoupling transform round-trips", t_round, 1e-12));
        checks.push(Check::gauge(
            "transformed mass is block diagonal with a rigid base block",
            block,
            1e-9,
        ));
        checks.push(Check::gauge("transformed gravity is the pure weight wrench", grav, 1e-10));
        checks.push(Check::gauge(
            "transformed contact blocks satisfy the sum and difference identities",
            sumdiff,
            1e-10,
        ));
        checks.push(Check::gauge(
            "momentum interface matches the mass-matrix route",
            momentum,
            1e-9,
        ));
    }

    // -- wrench criteria ---------------------------------------------------

    {
        let mut balance = 0.0f64;
        for &xi in random_xis.iter().take(30) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let frame = centroidal_transforms(&q, p);
            for crit in Criterion::ALL {
                let (f, _) = fb.resolve(crit, &q)?;
                let w = frame.x_left * f.left.as_vector() + frame.x_right * f.right.as_vector()
                    - Vec3::new(0.0, mg, 0.0);
                balance = balance.max(w.amax() / mg);
            }
        }
        checks.push(Check::gauge("criterion wrenches balance the weight", balance, 1e-9));
    }

    if hyp3 {
        let mut res = 0.0f64;
        for &xi in random_xis.iter().take(50) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let f = fb.solve_min_wrench(&q)?;
            let c = fb.closed_form_min_wrench(xi)?;
            res = res.max((f.stacked() - c.stacked()).amax() / mg);
        }
        checks.push(Check::gauge("minimum-wrench closed form matches the pipeline", res, 1e-9));
    } else {
        checks.push(Check::skipped("minimum-wrench closed form matches the pipeline", BALANCED_NOTE));
    }

    {
        let mut res = 0.0f64;
        for &xi in random_xis.iter().take(50) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let sol = fb.solve_min_torque(&q)?;
            if sol.wrenches.left.fy.abs() <= 0.02 * mg || sol.wrenches.right.fy.abs() <= 0.02 * mg {
                continue;
            }
            let frame = centroidal_transforms(&q, p);
            let c = fb.closed_form_min_torque(xi, &frame)?;
            res = res.max((sol.wrenches.stacked() - c.stacked()).amax() / mg);
        }
        checks.push(Check::gauge("minimum-torque closed form matches the pipeline", res, 1e-9));
    }

    {
        let mut res = 0.0f64;
        for &xi in random_xis.iter().take(30) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let a = fb.solve_min_wrench(&q)?;
            let b = fb.solve_min_tangential(&q)?;
            res = res.max((a.stacked() - b.stacked()).amax());
        }
        checks.push(Check::gauge(
            "minimum tangential force coincides with minimum wrench norm",
            res,
            0.0,
        ));
    }

    {
        let mut grad = 0.0f64;
        let half = Vec3::new(0.0, mg / 2.0, 0.0);
        for &xi in random_xis.iter().take(10) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let sol = fb.solve_min_torque(&q)?;
            if sol.wrenches.left.fy.abs() <= 0.02 * mg || sol.wrenches.right.fy.abs() <= 0.02 * mg {
                continue;
            }
            let frame = centroidal_transforms(&q, p);
            let tau_sq = |delta: Vec3| -> Result<f64, ScopError> {
                let fl = frame.x_left_inverse() * (half - delta);
                let fr = frame.x_right_inverse() * (half + delta);
                let pair = crate::dynamics::WrenchPair::new(
                    crate::dynamics::PlanarWrench::from_vector(&fl),
                    crate::dynamics::PlanarWrench::from_vector(&fr),
                );
                let tau = torque_from_wrench(&q, p, &pair).map_err(dyn_err)?;
                Ok(tau.norm_squared())
            };
            let h = 1e-6;
            for k in 0..3 {
                let mut e = Vec3::zeros();
                e[k] = h;
                let gp = tau_sq(sol.delta.delta + e)?;
                let gm = tau_sq(sol.delta.delta - e)?;
                grad = grad.max(((gp - gm) / (2.0 * h)).abs());
            }
        }
        checks.push(Check::gauge("torque norm is stationary at the redundancy optimum", grad, 1e-7));
    }

    {
        let mut res = 0.0f64;
        for &xi in random_xis.iter().take(10) {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let frame = centroidal_transforms(&q, p);
            let f = fb.solve_min_wrench(&q)?;
            let base = f.stacked().norm_squared();
            for _ in 0..5 {
                let w = Vec3::new(
                    rng.gen_range(-0.1..0.1),
                    rng.gen_range(-0.1..0.1),
                    rng.gen_range(-0.1..0.1),
                ) * mg;
                let fl = f.left.as_vector() + frame.x_left_inverse() * w;
                let fr = f.right.as_vector() - frame.x_right_inverse() * w;
                let perturbed = fl.norm_squared() + fr.norm_squared();
                res = res.max(base - perturbed);
            }
        }
        checks.push(Check::gauge(
            "minimum-wrench norm is optimal under balance-preserving shifts",
            res,
            0.0,
        ));
    }

    // -- center of pressure -------------------------------------------------

    if hyp3 {
        let mut cop = 0.0f64;
        let mut eta = 0.0f64;
        for (i, &xi) in sweep_grid.iter().enumerate() {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let fw = fb.solve_min_wrench(&q)?;
            let (cl, cr) = fb.scop_closed_form(xi, Criterion::MinWrenchNorm)?;
            cop = cop
                .max((static_cop_planar(&fw.left, mg).value - cl.value).abs())
                .max((static_cop_planar(&fw.right, mg).value - cr.value).abs());
            let ft = fb.solve_min_torque(&q)?.wrenches;
            if ft.left.fy.abs() > 0.02 * mg && ft.right.fy.abs() > 0.02 * mg {
                let (cl, cr) = fb.scop_closed_form(xi, Criterion::MinJointTorqueNorm)?;
                cop = cop
                    .max((static_cop_planar(&ft.left, mg).value - cl.value).abs())
                    .max((static_cop_planar(&ft.right, mg).value - cr.value).abs());
            }

            // Sensitivity against central differences on a thinned grid.
            if i % 4 == 0 {
                for crit in [Criterion::MinWrenchNorm, Criterion::MinJointTorqueNorm] {
                    if crit == Criterion::MinJointTorqueNorm
                        && (ft.left.fy.abs() <= 0.02 * mg || ft.right.fy.abs() <= 0.02 * mg)
                    {
                        continue;
                    }
                    let (nl, nr) = fb.sensitivity_numeric(xi, crit, crate::scop::DEFAULT_FD_STEP)?;
                    let (cl, cr) = fb.sensitivity_closed_form(xi, crit)?;
                    eta = eta
                        .max((nl - cl).abs() / (1.0 + cl.abs()))
                        .max((nr - cr).abs() / (1.0 + cr.abs()));
                }
            }
        }
        checks.push(Check::gauge("closed center of pressure matches the pipeline", cop, 1e-9));
        checks.push(Check::gauge(
            "closed sensitivity matches central differences",
            eta,
            1e-5,
        ));
    } else {
        checks.push(Check::skipped("closed center of pressure matches the pipeline", BALANCED_NOTE));
        checks.push(Check::skipped("closed sensitivity matches central differences", BALANCED_NOTE));
    }

    {
        let mut res = 0.0f64;
        if hyp3 {
            for i in 0..101 {
                let xi = 0.2 + (PI - 0.4) * i as f64 / 100.0;
                for crit in [Criterion::MinWrenchNorm, Criterion::MinJointTorqueNorm] {
                    let (l, r) = fb.sensitivity_closed_form(xi, crit)?;
                    res = res.max(l).max(r);
                }
            }
        } else {
            for i in 0..25 {
                let xi = sweep_grid[i * 16];
                for crit in [Criterion::MinWrenchNorm, Criterion::MinJointTorqueNorm] {
                    let (fw, _) = fb.resolve(crit, &chi(xi, p).map_err(WrenchError::from)?)?;
                    if fw.left.fy.abs() <= 0.05 * mg || fw.right.fy.abs() <= 0.05 * mg {
                        continue;
                    }
                    let (l, r) = fb.sensitivity_numeric(xi, crit, crate::scop::DEFAULT_FD_STEP)?;
                    res = res.max(l).max(r);
                }
            }
        }
        checks.push(Check::gauge(
            "center of pressure sensitivity is negative across the range",
            res.max(0.0),
            0.0,
        ));
    }

    {
        let mut res = 0.0f64;
        for &xi in &sweep_grid {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let qm = chi(PI - xi, p).map_err(WrenchError::from)?;
            let fw = fb.solve_min_wrench(&q)?;
            let fwm = fb.solve_min_wrench(&qm)?;
            res = res.max(
                (static_cop_planar(&fw.left, mg).value + static_cop_planar(&fwm.right, mg).value)
                    .abs(),
            );
            let ft = fb.solve_min_torque(&q)?.wrenches;
            let ftm = fb.solve_min_torque(&qm)?.wrenches;
            let fys = [ft.left.fy, ft.right.fy, ftm.left.fy, ftm.right.fy];
            if fys.iter().all(|v| v.abs() > 0.02 * mg) {
                res = res.max(
                    (static_cop_planar(&ft.left, mg).value
                        + static_cop_planar(&ftm.right, mg).value)
                        .abs(),
                );
            }
        }
        checks.push(Check::gauge(
            "center of pressure mirrors under left-right reflection",
            res,
            1e-12,
        ));
    }

    if hyp3 {
        let mut res = 0.0f64;
        for &xi in &sweep_grid {
            let (el, _) = fb.sensitivity_closed_form(xi, Criterion::MinWrenchNorm)?;
            let (_, er) = fb.sensitivity_closed_form(PI - xi, Criterion::MinWrenchNorm)?;
            res = res.max((el - er).abs());
            let ft = fb.solve_min_torque(&chi(xi, p).map_err(WrenchError::from)?)?.wrenches;
            let ftm = fb
                .solve_min_torque(&chi(PI - xi, p).map_err(WrenchError::from)?)?
                .wrenches;
            let fys = [ft.left.fy, ft.right.fy, ftm.left.fy, ftm.right.fy];
            if fys.iter().all(|v| v.abs() > 0.02 * mg) {
                let (el, _) = fb.sensitivity_closed_form(xi, Criterion::MinJointTorqueNorm)?;
                let (_, er) = fb.sensitivity_closed_form(PI - xi, Criterion::MinJointTorqueNorm)?;
                res = res.max((el - er).abs());
            }
        }
        checks.push(Check::gauge(
            "sensitivity mirrors under left-right reflection",
            res,
            1e-10,
        ));
    } else {
        checks.push(Check::skipped("sensitivity mirrors under left-right reflection", BALANCED_NOTE));
    }

    {
        let handoff = p.d / (p.alpha() * p.l);
        if handoff < 1.0 {
            let x1 = handoff.acos();
            let mut vals = Vec::with_capacity(60);
            for i in 0..60 {
                let xi = FRAC_PI_2 + (x1 + 0.01 - FRAC_PI_2) * i as f64 / 59.0;
                let v = if hyp3 {
                    fb.sensitivity_closed_form(xi, Criterion::MinJointTorqueNorm)?.1
                } else {
                    fb.sensitivity_numeric(xi, Criterion::MinJointTorqueNorm, crate::scop::DEFAULT_FD_STEP)?
                        .1
                };
                vals.push(v.abs());
            }
            let mut res = 0.0f64;
            for w in vals.windows(2) {
                res = res.max(w[1] - w[0]);
            }
            checks.push(Check::gauge(
                "supporting foot sensitivity shrinks toward the handoff angle",
                res.max(0.0),
                0.0,
            ));
        } else {
            checks.push(Check::skipped(
                "supporting foot sensitivity shrinks toward the handoff angle",
                "no handoff angle exists for these parameters",
            ));
        }
    }

    {
        let roots = fb.asymptote_locator(Criterion::MinJointTorqueNorm)?;
        let rows = fb.sweep_points(&sweep_grid, Criterion::MinJointTorqueNorm)?;
        let step = sweep_grid[1] - sweep_grid[0];
        let mut violations = 0usize;
        for (i, row) in rows.iter().enumerate() {
            for (flagged, fy) in [
                (!row.scop_left.bounded, row.wrenches.left.fy),
                (!row.scop_right.bounded, row.wrenches.right.fy),
            ] {
                if flagged
                    && fy.abs() > 1e-9 * mg
                    && !roots.iter().any(|r| (sweep_grid[i] - r).abs() <= step * 1.0001)
                {
                    violations += 1;
                }
            }
        }
        for &r in &roots {
            if r > sweep_grid[0] && r < sweep_grid[400] {
                let near = rows.iter().enumerate().any(|(i, row)| {
                    (sweep_grid[i] - r).abs() <= step * 1.0001
                        && (!row.scop_left.bounded || !row.scop_right.bounded)
                });
                if !near {
                    violations += 1;
                }
            }
        }
        checks.push(Check::gauge(
            "sweep flags unbounded rows within one step of each asymptote",
            violations as f64,
            0.0,
        ));
    }

    // -- variant coefficient audit ------------------------------------------

    {
        let mut dev_fy = 0.0f64;
        let mut dev_sw = 0.0f64;
        let mut dev_st = 0.0f64;
        for &xi in &sweep_grid {
            let q = chi(xi, p).map_err(WrenchError::from)?;
            let f = fb.solve_min_wrench(&q)?;
            let (vl, vr) = audit::min_wrench_fy(p, xi);
            dev_fy = dev_fy.max(audit::pair_deviation(
                (f.left.fy / mg, f.right.fy / mg),
                (vl / mg, vr / mg),
            ));
            dev_sw = dev_sw.max(audit::pair_deviation(
                (
                    static_cop_planar(&f.left, mg).value,
                    static_cop_planar(&f.right, mg).value,
                ),
                audit::min_wrench_scop(p, xi),
            ));
            let ft = fb.solve_min_torque(&q)?.wrenches;
            if ft.left.fy.abs() > 0.02 * mg && ft.right.fy.abs() > 0.02 * mg {
                dev_st = dev_st.max(audit::pair_deviation(
                    (
                        static_cop_planar(&ft.left, mg).value,
                        static_cop_planar(&ft.right, mg).value,
                    ),
                    audit::min_torque_scop(p, xi),
                ));
            }
        }
        let (ew, et) = if hyp3 {
            (
                fb.sensitivity_closed_form(FRAC_PI_2, Criterion::MinWrenchNorm)?.0,
                fb.sensitivity_closed_form(FRAC_PI_2, Criterion::MinJointTorqueNorm)?.0,
            )
        } else {
            (
                fb.sensitivity_numeric(FRAC_PI_2, Criterion::MinWrenchNorm, crate::scop::DEFAULT_FD_STEP)?
                    .0,
                fb.sensitivity_numeric(
                    FRAC_PI_2,
                    Criterion::MinJointTorqueNorm,
                    crate::scop::DEFAULT_FD_STEP,
                )?
                .0,
            )
        };
        let gap_eta = (audit::min_wrench_eta(p, FRAC_PI_2).0 - ew)
            .abs()
            .max((audit::min_torque_eta(p, FRAC_PI_2).0 - et).abs());
        checks.push(Check::audit("variant wrench coefficients: vertical-force gap over the sweep", dev_fy)
            .with_note("per unit weight"));
        checks.push(Check::audit(
            "variant cop coefficients (minimum wrench): gap over the sweep",
            dev_sw,
        ));
        checks.push(Check::audit(
            "variant cop coefficients (minimum torque): gap over the sweep",
            dev_st,
        ));
        checks.push(Check::audit(
            "variant sensitivity coefficients: gap at the symmetric pose",
            gap_eta,
        ));
    }

    Ok(VerifyReport { checks })
}
