//! Variant coefficient sets for the standing closed forms. The
//! minimum-wrench family below coincides with the honest expressions when
//! the mass ratio alpha is pinned at 3/5 instead of the balanced 3/4; the
//! minimum-torque family matches no consistent reading of the pipeline at
//! all. Both are kept callable so the verify report can state the size of
//! their deviation from the numeric arbiter instead of silently dropping
//! them, and so the deviation itself is testable.

use crate::params::ModelParams;

/// Variant vertical foot forces (left, right) under minimum wrench norm [N].
pub fn min_wrench_fy(params: &ModelParams, xi: f64) -> (f64, f64) {
    let (l, d, c) = (params.l, params.d, xi.cos());
    let mg = params.weight();
    let den = 10.0 * (d * d + 4.0);
    (
        mg * (20.0 + 5.0 * d * d - 6.0 * l * d * c) / den,
        mg * (20.0 + 5.0 * d * d + 6.0 * l * d * c) / den,
    )
}

/// Variant SCoP pair under minimum wrench norm.
pub fn min_wrench_scop(params: &ModelParams, xi: f64) -> (f64, f64) {
    let (l, d, c) = (params.l, params.d, xi.cos());
    (
        12.0 * l * c / (5.0 * d * d + 6.0 * l * d * c + 20.0),
        12.0 * l * c / (5.0 * d * d - 6.0 * l * d * c + 20.0),
    )
}

/// Variant SCoP sensitivity pair under minimum wrench norm.
pub fn min_wrench_eta(params: &ModelParams, xi: f64) -> (f64, f64) {
    let (l, d) = (params.l, params.d);
    let (s, c) = xi.sin_cos();
    let d4 = d * d + 4.0;
    let den_l = 5.0 * d * d + 6.0 * l * d * c + 20.0;
    let den_r = 5.0 * d * d - 6.0 * l * d * c + 20.0;
    (
        -60.0 * l * s * d4 / (den_l * den_l),
        -60.0 * l * s * d4 / (den_r * den_r),
    )
}

/// Variant SCoP pair under minimum torque norm.
pub fn min_torque_scop(params: &ModelParams, xi: f64) -> (f64, f64) {
    let (l, d, c) = (params.l, params.d, xi.cos());
    (
        9.0 * l * d * c / (20.0 * d + 6.0 * l * c),
        9.0 * l * d * c / (20.0 * d - 6.0 * l * c),
    )
}

/// Variant SCoP sensitivity pair under minimum torque norm.
pub fn min_torque_eta(params: &ModelParams, xi: f64) -> (f64, f64) {
    let (l, d) = (params.l, params.d);
    let (s, c) = xi.sin_cos();
    let den_l = 10.0 * d + 3.0 * l * c;
    let den_r = 10.0 * d - 3.0 * l * c;
    (
        -45.0 * d * d * l * s / (den_l * den_l),
        -45.0 * d * d * l * s / (den_r * den_r),
    )
}

/// Largest componentwise gap between two (left, right) pairs, insensitive
/// to which labelling the pairs use.
pub fn pair_deviation(a: (f64, f64), b: (f64, f64)) -> f64 {
    let direct = (a.0 - b.0).abs().max((a.1 - b.1).abs());
    let crossed = (a.0 - b.1).abs().max((a.1 - b.0).abs());
    direct.min(crossed)
}
