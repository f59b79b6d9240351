//! Q-Law: Lyapunov descent on a weighted sum of squared best-case times to
//! go.
//!
//! Scaling `S_a = sqrt(1 + ((a − a_T)/(3 a_T))⁴)`, `S_e = S_i = S_Ω = 1`.
//! The periapsis penalty `P = exp(k (1 − r_p / r_p,min))` is disabled by the
//! default `W_P = 0`.

use serde::{Deserialize, Serialize};

use super::{
    descent_direction, gve_matrix, slow_gradient, with_slow, TargetState, ThrustDirection, FD_STEP,
};
use crate::astro::{ClassicalElements, Environment};
use crate::math::{minor_arc, Float};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QLawWeights {
    /// `[W_a, W_e, W_i, W_Ω]`
    pub w: [f64; 4],
    #[serde(default)]
    pub w_p: f64,
    /// minimum periapsis radius for the penalty [km]
    #[serde(default = "default_rp_min")]
    pub rp_min: f64,
    #[serde(default = "default_penalty_k")]
    pub penalty_k: f64,
}

fn default_rp_min() -> f64 {
    6578.137
}

fn default_penalty_k() -> f64 {
    100.0
}

impl Default for QLawWeights {
    fn default() -> Self {
        QLawWeights {
            w: [1.0; 4],
            w_p: 0.0,
            rp_min: default_rp_min(),
            penalty_k: default_penalty_k(),
        }
    }
}

/// Maximum over the orbit of `|ȧ|, |ė|, |i̇|, |Ω̇|` for unit thrust
/// acceleration (multiply by `f` in km/s²).
pub fn qlaw_max_rates(el: &ClassicalElements, env: &Environment) -> [f64; 4] {
    let (a, e) = (el.a, el.e);
    let p = a * (1.0 - e * e);
    let h = (env.mu * p).sqrt();
    let (sw, cw) = el.argp.sin_cos();
    [
        2.0 * (a * a * a * (1.0 + e) / (env.mu * (1.0 - e))).sqrt(),
        2.0 * p / h,
        p / (h * ((1.0 - e * e * sw * sw).sqrt() - e * cw.abs())),
        p / (h * el.i.sin().abs() * ((1.0 - e * e * cw * cw).sqrt() - e * sw.abs())),
    ]
}

/// Q for unit thrust acceleration [s²·(km/s²)²]; the direction does not
/// depend on the thrust level.
pub fn qlaw_value(
    el: &ClassicalElements,
    target: &TargetState,
    w: &QLawWeights,
    env: &Environment,
) -> f64 {
    let rates = qlaw_max_rates(el, env);
    let delta = [
        el.a - target.a,
        el.e - target.e,
        el.i - target.i,
        minor_arc(el.raan - target.raan),
    ];
    let s_a = (1.0 + (delta[0] / (3.0 * target.a)).powi(4)).sqrt();
    let scale = [s_a, 1.0, 1.0, 1.0];
    let mut q = 0.0;
    for k in 0..4 {
        if w.w[k] != 0.0 && delta[k] != 0.0 {
            q += scale[k] * w.w[k] * (delta[k] / rates[k]).powi(2);
        }
    }
    let penalty = if w.w_p > 0.0 {
        let rp = el.a * (1.0 - el.e);
        w.w_p * (w.penalty_k * (1.0 - rp / w.rp_min)).exp()
    } else {
        0.0
    };
    (1.0 + penalty) * q
}

pub fn qlaw_gradient(
    el: &ClassicalElements,
    target: &TargetState,
    w: &QLawWeights,
    env: &Environment,
    rel: f64,
) -> [f64; 4] {
    slow_gradient([el.a, el.e, el.i, el.raan], rel, |x| {
        qlaw_value(&with_slow(el, x), target, w, env)
    })
}

pub fn qlaw_direction(
    el: &ClassicalElements,
    target: &TargetState,
    w: &QLawWeights,
    env: &Environment,
) -> ThrustDirection {
    if qlaw_value(el, target, w, env) <= 0.0 {
        return ThrustDirection::INACTIVE;
    }
    let g = qlaw_gradient(el, target, w, env, FD_STEP);
    descent_direction(&g, &gve_matrix(el, env))
}
