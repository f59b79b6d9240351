//! Δv-Law: Lyapunov descent on an analytic Δv² estimate to the target.

use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{
    descent_direction, gve_matrix, slow_gradient, with_slow, TargetState, ThrustDirection, FD_STEP,
};
use crate::astro::{ClassicalElements, Environment};
use crate::math::{minor_arc, Float};

/// Below this eccentricity gap (with `e` itself below 1e-3) the
/// eccentricity term is dropped: its log form is 0/0 between circular orbits.
pub const DVLAW_CIRCULAR_TOL: f64 = 1e-4;

/// λ_a is fixed at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DvLawWeights {
    pub lambda_e1: f64,
    pub lambda_e2: f64,
    pub lambda_ai: f64,
    pub lambda_ei: f64,
    pub lambda_araan: f64,
    #[serde(default)]
    pub lambda_omega: f64,
}

impl Default for DvLawWeights {
    fn default() -> Self {
        DvLawWeights {
            lambda_e1: 1.0,
            lambda_e2: 1.0,
            lambda_ai: 1.0,
            lambda_ei: 1.0,
            lambda_araan: 1.0,
            lambda_omega: 0.0,
        }
    }
}

/// L in km²/s².
pub fn dvlaw_value(
    el: &ClassicalElements,
    target: &TargetState,
    w: &DvLawWeights,
    env: &Environment,
) -> f64 {
    let vc = (env.mu / el.a).sqrt();
    let vf = (env.mu / target.a).sqrt();
    let di = el.i - target.i;
    let draan = minor_arc(el.raan - target.raan);
    let sigma = ((w.lambda_ai * di).powi(2) + (w.lambda_araan * el.i.sin() * draan).powi(2)).sqrt();
    let plane = vc * vc - 2.0 * vc * vf * (0.5 * PI * sigma).cos() + vf * vf;

    let (e, ef) = (el.e, target.e);
    let de = e - ef;
    if de.abs() < DVLAW_CIRCULAR_TOL && e < 1e-3 {
        return plane;
    }
    // both logarithms combined into one with a positive argument
    let log = ((1.0 + ef) * (1.0 - e) / ((1.0 - ef) * (1.0 + e))).ln() - de;
    let num = 3.0 * PI * w.lambda_ei * di;
    let den = 4.0 * (w.lambda_omega * el.argp).cos() * log;
    // 1/cos β̃ = sqrt(1 + tan²β̃)
    let sec = if den == 0.0 {
        if num == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (1.0 + (num / den).powi(2)).sqrt()
    };
    let mix = (1.0 - w.lambda_e2) * vc + w.lambda_e2 * vf;
    let ecc = mix * (e.asin() - ef.asin()) * sec;
    plane + 4.0 / 9.0 * w.lambda_e1 * ecc * ecc
}

/// ∂L/∂[a, e, i, Ω] by central differences with relative step `rel`.
pub fn dvlaw_gradient(
    el: &ClassicalElements,
    target: &TargetState,
    w: &DvLawWeights,
    env: &Environment,
    rel: f64,
) -> [f64; 4] {
    slow_gradient([el.a, el.e, el.i, el.raan], rel, |x| {
        dvlaw_value(&with_slow(el, x), target, w, env)
    })
}

pub fn dvlaw_direction(
    el: &ClassicalElements,
    target: &TargetState,
    w: &DvLawWeights,
    env: &Environment,
) -> ThrustDirection {
    if dvlaw_value(el, target, w, env) <= 0.0 {
        return ThrustDirection::INACTIVE;
    }
    let g = dvlaw_gradient(el, target, w, env, FD_STEP);
    descent_direction(&g, &gve_matrix(el, env))
}
