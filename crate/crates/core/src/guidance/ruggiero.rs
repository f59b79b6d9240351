//! Element-steering law: per-element optimal thrust vectors blended with
//! error-proportional weights.
//!
//! Blend coefficients are `c_X = |X − X_T| W_X` with `a` in km and angles in
//! degrees, so a weight of 1 treats 1 km and 1° as equally urgent.

use serde::{Deserialize, Serialize};

use super::{TargetState, ThrustDirection};
use crate::astro::{true_to_eccentric, ClassicalElements, Environment};
use crate::math::{minor_arc, sign, Float, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuggieroWeights {
    /// `[W_a, W_e, W_i, W_Ω]`
    pub w: [f64; 4],
    /// activation thresholds η^bd, each in [0, 1)
    #[serde(default)]
    pub thresholds: [f64; 4],
}

impl Default for RuggieroWeights {
    fn default() -> Self {
        RuggieroWeights {
            w: [1.0; 4],
            thresholds: [0.0; 4],
        }
    }
}

fn steer(alpha: f64, beta: f64) -> Vec3 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    Vec3::new(cb * sa, cb * ca, sb)
}

/// The four gated per-element vectors `[T_a, T_e, T_i, T_Ω]`, signed
/// towards the target. `ν` is the true anomaly of the current position.
pub fn ruggiero_element_vectors(
    el: &ClassicalElements,
    target: &TargetState,
    w: &RuggieroWeights,
    env: &Environment,
) -> [Vec3; 4] {
    let (e, nu, om) = (el.e, el.nu, el.argp);
    let (sn, cn) = nu.sin_cos();
    let u = om + nu;
    let den = 1.0 + e * cn;
    let gate = |eta: f64, k: usize| if eta > w.thresholds[k] { 1.0 } else { 0.0 };

    let p = el.a * (1.0 - e * e);
    let r = p / den;
    let speed = (env.mu * (2.0 / r - 1.0 / el.a)).sqrt();
    let eta_a = speed * (el.a * (1.0 - e) / (env.mu * (1.0 + e))).sqrt();
    let t_a = steer((e * sn / den).atan(), 0.0) * (gate(eta_a, 0) * sign(target.a - el.a));

    let ecc = true_to_eccentric(nu, e);
    let eta_e = (1.0 + 2.0 * e * cn + cn * cn) / den;
    let t_e = steer(sn.atan2(ecc.cos() + cn), 0.0) * (gate(eta_e, 1) * sign(target.e - e));

    let eta_i = u.cos().abs() / den * ((1.0 - e * e * om.sin().powi(2)).sqrt() - e * om.abs());
    let t_i = steer(0.0, core::f64::consts::FRAC_PI_2 * sign(u.cos()))
        * (gate(eta_i, 2) * sign(target.i - el.i));

    let eta_o = u.sin().abs() / den * ((1.0 - e * e * cn * cn).sqrt() - e * om.sin().abs());
    let t_o = steer(0.0, core::f64::consts::FRAC_PI_2 * sign(u.sin()))
        * (gate(eta_o, 3) * sign(-(el.raan - target.raan).sin()));

    [t_a, t_e, t_i, t_o]
}

pub fn ruggiero_direction(
    el: &ClassicalElements,
    target: &TargetState,
    w: &RuggieroWeights,
    env: &Environment,
) -> ThrustDirection {
    let t = ruggiero_element_vectors(el, target, w, env);
    let c = [
        (el.a - target.a).abs() * w.w[0],
        (el.e - target.e).abs() * w.w[1],
        (el.i - target.i).abs().to_degrees() * w.w[2],
        minor_arc(el.raan - target.raan).to_degrees() * w.w[3],
    ];
    let blend = t.iter().zip(c).fold(Vec3::ZERO, |s, (t, c)| s + *t * c);
    ThrustDirection::from_vector(blend)
}
