//! Acceptance gate for the whole workspace: each test below checks one
//! shipping requirement at its stated tolerance, end to end, and the suite
//! is meant to be read as a checklist. Everything runs on the default
//! parameter set (l = 1 m, d = 0.2 m, m_l = 1 kg, m_b = 2 kg, g = 9.81)
//! unless a test says otherwise.

use fourbar::centroidal::{centroidal_transforms, decoupling_transform};
use fourbar::dynamics::{torque_from_wrench, PlanarWrench, WrenchPair};
use fourbar::mass::{coupling_block_closed, gravity_vector, mass_matrix, potential_energy};
use fourbar::model::{chi, contact_jacobians, forward_kinematics, Configuration};
use fourbar::types::{Mat3, Mat3x7, Vec3, Vec7};
use fourbar::{Criterion, FourBar, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn defaults() -> ModelParams {
    ModelParams::default()
}

fn model() -> FourBar {
    FourBar::new(defaults()).expect("default parameters are valid")
}

/// 200 evenly spaced internal angles over the standing window used by the
/// closed-form equivalence checks.
fn equivalence_grid() -> Vec<f64> {
    let (lo, hi) = (PI / 2.0 - 0.35, PI / 2.0 + 0.35);
    (0..200).map(|i| lo + (hi - lo) * i as f64 / 199.0).collect()
}

fn max_component_gap(a: &WrenchPair, b: &WrenchPair) -> f64 {
    (a.stacked() - b.stacked()).amax()
}

#[test]
fn acceptance_1_min_wrench_closed_form_matches_the_solver() {
    let fb = model();
    let mg = fb.params().weight();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for xi in equivalence_grid() {
        let q = chi(xi, fb.params()).unwrap();
        let solved = fb.solve_min_wrench(&q).unwrap();
        let closed = fb.closed_form_min_wrench(xi).unwrap();
        worst = worst.max(max_component_gap(&closed, &solved) / mg);
    }
    assert!(worst < 1e-9, "worst relative gap {worst:e} exceeds 1e-9");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
}

#[test]
fn acceptance_2_min_torque_closed_form_matches_the_solver() {
    let fb = model();
    let mg = fb.params().weight();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut tested = 0usize;
    for xi in equivalence_grid() {
        let q = chi(xi, fb.params()).unwrap();
        let sol = fb.solve_min_torque(&q).unwrap();
        // Near a handoff one vertical force crosses zero and the relative
        // scale collapses; those angles are excluded by contract.
        if sol.wrenches.left.fy.abs() <= 0.02 * mg || sol.wrenches.right.fy.abs() <= 0.02 * mg {
            continue;
        }
        let frame = centroidal_transforms(&q, fb.params());
        let closed = fb.closed_form_min_torque(xi, &frame).unwrap();
        worst = worst.max(max_component_gap(&closed, &sol.wrenches) / mg);
        tested += 1;
    }
    assert!(tested > 150, "exclusion removed too much of the grid: {tested}");
    assert!(worst < 1e-9, "worst relative gap {worst:e} exceeds 1e-9");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
}

#[test]
fn acceptance_3_min_tangential_coincides_with_min_wrench() {
    let fb = model();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for xi in equivalence_grid() {
        let q = chi(xi, fb.params()).unwrap();
        let tangential = fb.solve_min_tangential(&q).unwrap();
        let wrench = fb.solve_min_wrench(&q).unwrap();
        worst = worst.max(max_component_gap(&tangential, &wrench));
    }
    assert!(worst <= 1e-12, "worst absolute gap {worst:e} exceeds 1e-12");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
}

#[test]
fn acceptance_4_symmetric_pose_sensitivities_match_the_quoted_values() {
    let fb = model();
    let p = fb.params();
    let xi = PI / 2.0;

    // (a) the quoted coefficient families, evaluated at the symmetric pose.
    let quoted_w = fourbar::audit::min_wrench_eta(p, xi).1;
    let quoted_t = fourbar::audit::min_torque_eta(p, xi).1;
    assert!((quoted_w - (-0.59406)).abs() < 1e-5, "quoted wrench value {quoted_w}");
    assert!((quoted_t - (-0.45)).abs() < 1e-5, "quoted torque value {quoted_t}");

    // (b) central differences through the numeric pipeline.
    let h = fourbar::scop::DEFAULT_FD_STEP;
    let fd_w = fb.sensitivity_numeric(xi, Criterion::MinWrenchNorm, h).unwrap().1;
    let fd_t = fb.sensitivity_numeric(xi, Criterion::MinJointTorqueNorm, h).unwrap().1;

    // The torque-optimal distribution is the less sensitive one at the
    // symmetric pose under both readings.
    assert!(quoted_t.abs() < quoted_w.abs());
    assert!(fd_t.abs() < fd_w.abs());

    let gap_w = (quoted_w - fd_w).abs();
    let gap_t = (quoted_t - fd_t).abs();
    assert!(
        gap_w < 1e-5 && gap_t < 1e-5,
        "quoted sensitivities ({quoted_w:.6}, {quoted_t:.6}) disagree with the measured \
         pipeline sensitivities ({fd_w:.6}, {fd_t:.6}); gaps ({gap_w:.3e}, {gap_t:.3e}) \
         exceed 1e-5. The quoted wrench family equals the model's closed form only at a \
         mass ratio alpha = 3/5, while the balanced default is alpha = 3/4; the torque \
         family matches no consistent reading of the model. The verify report's AUDIT \
         lines track the same deviations."
    );
}

#[test]
fn acceptance_5_mass_assembly_and_centroidal_transform_hold() {
    let p = defaults();
    let m = p.total_mass();
    let mg = p.weight();
    let mut rng = ChaCha8Rng::seed_from_u64(23);

    let mut coupling = 0.0f64;
    let mut block = 0.0f64;
    let mut gravity = 0.0f64;
    for _ in 0..100 {
        let xi = rng.gen_range(0.3..PI - 0.3);
        let q = chi(xi, &p).unwrap();
        let mm = mass_matrix(&q, &p);
        coupling = coupling.max((mm.coupling_block() - coupling_block_closed(&q, &p)).amax());

        let dec = decoupling_transform(&q, &mm, &p).unwrap();
        let mn = dec.inverse().transpose() * mm.matrix * dec.inverse();
        let off = mn.fixed_view::<3, 4>(0, 3).norm().hypot(mn.fixed_view::<4, 3>(3, 0).norm());
        let base = Mat3::new(
            mn[(0, 0)] - m,
            mn[(0, 1)],
            mn[(0, 2)],
            mn[(1, 0)],
            mn[(1, 1)] - m,
            mn[(1, 2)],
            mn[(2, 0)],
            mn[(2, 1)],
            0.0,
        );
        block = block.max(off.hypot(base.norm()));

        let gn = dec.inverse().transpose() * gravity_vector(&q, &p);
        let mut expected = Vec7::zeros();
        expected[1] = mg;
        gravity = gravity.max((gn - expected).amax());
    }
    assert!(coupling < 1e-12, "coupling-block gap {coupling:e} exceeds 1e-12");
    assert!(block < 1e-9, "off-block residual {block:e} exceeds 1e-9 (Frobenius)");
    assert!(gravity < 1e-10, "transformed gravity residual {gravity:e}");
}

#[test]
fn acceptance_6_torque_optimal_forces_hand_off_at_the_predicted_angles() {
    let fb = model();
    let p = fb.params();
    let mg = p.weight();
    let ratio = 4.0 * p.d / (3.0 * p.l);
    let predicted = [ratio.acos(), PI - ratio.acos()];
    let tol = 0.01f64.to_radians();

    let roots = fb.asymptote_locator(Criterion::MinJointTorqueNorm).unwrap();
    assert_eq!(roots.len(), 2, "expected one handoff per foot, got {roots:?}");
    for (root, want) in roots.iter().zip(predicted) {
        assert!((root - want).abs() < tol, "root {root} vs predicted {want}");
    }

    // At each handoff one vertical force crosses zero while the other
    // crosses the full weight.
    let fys = |xi: f64| {
        let q = chi(xi, p).unwrap();
        let f = fb.solve_min_torque(&q).unwrap().wrenches;
        (f.left.fy, f.right.fy)
    };
    let probe = 0.01;
    let (l_lo, r_lo) = fys(roots[0] - probe);
    let (l_hi, r_hi) = fys(roots[0] + probe);
    assert!(l_lo * l_hi < 0.0, "left fy must cross zero at the first handoff");
    assert!((r_lo - mg) * (r_hi - mg) < 0.0, "right fy must cross the weight");
    let (l_lo, r_lo) = fys(roots[1] - probe);
    let (l_hi, r_hi) = fys(roots[1] + probe);
    assert!(r_lo * r_hi < 0.0, "right fy must cross zero at the second handoff");
    assert!((l_lo - mg) * (l_hi - mg) < 0.0, "left fy must cross the weight");

    // The sweep flags exactly the rows bracketing each root, and the
    // unbounded column belongs to the foot being unloaded there.
    let lo = 70f64.to_radians();
    let hi = 110f64.to_radians();
    let rows = fb.sweep(lo, hi, 401, Criterion::MinJointTorqueNorm).unwrap();
    let step = (hi - lo) / 400.0;
    let bracket = |root: f64| {
        let t = (root - lo) / step;
        [t.floor() as usize, t.ceil() as usize]
    };
    let unbounded_left: Vec<usize> =
        rows.iter().enumerate().filter(|(_, r)| !r.scop_left.bounded).map(|(i, _)| i).collect();
    let unbounded_right: Vec<usize> =
        rows.iter().enumerate().filter(|(_, r)| !r.scop_right.bounded).map(|(i, _)| i).collect();
    assert_eq!(unbounded_left, bracket(roots[0]), "left flags must bracket the first root");
    assert_eq!(unbounded_right, bracket(roots[1]), "right flags must bracket the second root");
    for i in unbounded_left {
        assert!(rows[i].wrenches.left.fy.abs() < rows[i].wrenches.right.fy.abs());
    }
    for i in unbounded_right {
        assert!(rows[i].wrenches.right.fy.abs() < rows[i].wrenches.left.fy.abs());
    }
}

#[test]
fn acceptance_7_sensitivities_and_cops_mirror_under_reflection() {
    let fb = model();
    let mg = fb.params().weight();

    let mut worst_w = 0.0f64;
    let mut worst_t = 0.0f64;
    for xi in equivalence_grid() {
        let (el, _) = fb.sensitivity_closed_form(xi, Criterion::MinWrenchNorm).unwrap();
        let (_, er) = fb.sensitivity_closed_form(PI - xi, Criterion::MinWrenchNorm).unwrap();
        worst_w = worst_w.max((el - er).abs());

        let frame_a = centroidal_transforms(&chi(xi, fb.params()).unwrap(), fb.params());
        let frame_b = centroidal_transforms(&chi(PI - xi, fb.params()).unwrap(), fb.params());
        let fa = fb.closed_form_min_torque(xi, &frame_a).unwrap();
        let fbk = fb.closed_form_min_torque(PI - xi, &frame_b).unwrap();
        let loaded = [fa.left.fy, fa.right.fy, fbk.left.fy, fbk.right.fy]
            .iter()
            .all(|fy| fy.abs() > 0.02 * mg);
        if loaded {
            let (el, _) = fb.sensitivity_closed_form(xi, Criterion::MinJointTorqueNorm).unwrap();
            let (_, er) =
                fb.sensitivity_closed_form(PI - xi, Criterion::MinJointTorqueNorm).unwrap();
            worst_t = worst_t.max((el - er).abs());
        }
    }
    assert!(worst_w < 1e-10, "min-wrench mirror gap {worst_w:e} exceeds 1e-10");
    assert!(worst_t < 1e-10, "min-torque mirror gap {worst_t:e} exceeds 1e-10");

    // The sweep of the full pipeline mirrors too: the grid is symmetric
    // about the upright pose, so row i reflects onto row n-1-i with the
    // feet exchanged and the lateral axis flipped.
    for criterion in [Criterion::MinWrenchNorm, Criterion::MinJointTorqueNorm] {
        let rows = fb
            .sweep(70f64.to_radians(), 110f64.to_radians(), 401, criterion)
            .unwrap();
        let tol = if criterion == Criterion::MinWrenchNorm { 1e-12 } else { 1e-10 };
        let mut worst = 0.0f64;
        for i in 0..rows.len() {
            let j = rows.len() - 1 - i;
            let (a, b) = (&rows[i], &rows[j]);
            let loaded = [a.wrenches.left.fy, a.wrenches.right.fy, b.wrenches.left.fy, b.wrenches.right.fy]
                .iter()
                .all(|fy| fy.abs() > 0.02 * mg);
            if a.scop_left.bounded && b.scop_right.bounded && loaded {
                worst = worst.max((a.scop_left.value + b.scop_right.value).abs());
            }
        }
        assert!(worst < tol, "sweep mirror gap {worst:e} exceeds {tol:e} for {criterion}");
    }
}

#[test]
fn acceptance_8_analytic_derivatives_match_finite_differences() {
    let p = defaults();
    let fb = model();
    let mg = p.weight();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let h = 1e-6;

    // Gravity vector against the potential, at general configurations.
    let mut grav = 0.0f64;
    let mut jac = 0.0f64;
    for _ in 0..5 {
        let mut v = Vec7::zeros();
        v[0] = rng.gen_range(-0.5..0.5);
        v[1] = rng.gen_range(-0.5..0.5);
        v[2] = rng.gen_range(-0.5..0.5);
        for k in 3..7 {
            v[k] = rng.gen_range(0.3..PI - 0.3);
        }
        let q = Configuration::new(v);
        let g = gravity_vector(&q, &p);
        for k in 0..7 {
            let mut e = Vec7::zeros();
            e[k] = h;
            let vp = potential_energy(&Configuration::new(v + e), &p);
            let vm = potential_energy(&Configuration::new(v - e), &p);
            grav = grav.max(((vp - vm) / (2.0 * h) - g[k]).abs());
        }

        // Contact Jacobians against the foot poses.
        let (jl, jr) = contact_jacobians(&q, &p);
        let pose = |qv: Vec7| {
            let kin = forward_kinematics(&Configuration::new(qv), &p);
            let th = qv[2];
            [
                Vec3::new(kin.foot_left.position.x, kin.foot_left.position.y, th + qv[3] + qv[4]),
                Vec3::new(kin.foot_right.position.x, kin.foot_right.position.y, th + qv[5] + qv[6]),
            ]
        };
        let mut fd_l = Mat3x7::zeros();
        let mut fd_r = Mat3x7::zeros();
        for k in 0..7 {
            let mut e = Vec7::zeros();
            e[k] = h;
            let pp = pose(v + e);
            let pm = pose(v - e);
            fd_l.set_column(k, &((pp[0] - pm[0]) / (2.0 * h)));
            fd_r.set_column(k, &((pp[1] - pm[1]) / (2.0 * h)));
        }
        jac = jac.max((jl - fd_l).amax()).max((jr - fd_r).amax());
    }
    assert!(grav < 1e-7, "gravity gradient gap {grav:e} exceeds 1e-7");
    assert!(jac < 1e-6, "jacobian gap {jac:e} exceeds 1e-6");

    // The redundancy parameter of the torque-optimal solution is a
    // stationary point of the squared torque norm.
    let half = Vec3::new(0.0, mg / 2.0, 0.0);
    let mut grad = 0.0f64;
    for _ in 0..10 {
        let xi = rng.gen_range(0.3..PI - 0.3);
        let q = chi(xi, &p).unwrap();
        let sol = fb.solve_min_torque(&q).unwrap();
        if sol.wrenches.left.fy.abs() <= 0.02 * mg || sol.wrenches.right.fy.abs() <= 0.02 * mg {
            continue;
        }
        let frame = centroidal_transforms(&q, &p);
        let tau_sq = |delta: Vec3| {
            let fl = frame.x_left_inverse() * (half - delta);
            let fr = frame.x_right_inverse() * (half + delta);
            let pair =
                WrenchPair::new(PlanarWrench::from_vector(&fl), PlanarWrench::from_vector(&fr));
            torque_from_wrench(&q, &p, &pair).unwrap().norm_squared()
        };
        for k in 0..3 {
            let mut e = Vec3::zeros();
            e[k] = h;
            grad = grad.max(((tau_sq(sol.delta.delta + e) - tau_sq(sol.delta.delta - e)) / (2.0 * h)).abs());
        }
    }
    assert!(grad < 1e-7, "torque-norm gradient {grad:e} exceeds 1e-7");
}

#[test]
fn acceptance_9_artifacts_are_deterministic_and_the_suite_is_fast() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_fourbar");
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        std::process::Command::new(bin)
            .current_dir(dir.path())
            .args(args)
            .output()
            .expect("spawn fourbar binary")
    };

    assert!(run(&["sweep", "--out", "a"]).status.success());
    assert!(run(&["sweep", "--out", "b"]).status.success());
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b, "repeated sweeps must be byte-identical");

    let verify = run(&["verify"]);
    assert_eq!(verify.status.code(), Some(0), "verify must pass on defaults");
    let report = String::from_utf8(verify.stdout).unwrap();
    assert!(!report.contains("FAIL"));
    assert!(report.lines().filter(|l| l.starts_with("PASS")).count() >= 15);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "budget 30 s, took {elapsed:?}");
}
