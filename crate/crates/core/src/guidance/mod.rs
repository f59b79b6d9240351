//! Closed-loop thrust-direction laws tracking a reference trajectory.
//!
//! Every law maps (current mean elements, target {a, e, i, Ω}, weights) to a
//! unit vector in the radial / along-track / cross-track frame. The slow
//! state is `X = [a, e, i, Ω]` with `a` in km and angles in radians.

mod dvlaw;
mod gve;
mod qlaw;
mod ruggiero;

pub use dvlaw::{dvlaw_direction, dvlaw_gradient, dvlaw_value, DvLawWeights, DVLAW_CIRCULAR_TOL};
pub use gve::{gve_matrix, GveMatrix};
pub use qlaw::{qlaw_direction, qlaw_gradient, qlaw_max_rates, qlaw_value, QLawWeights};
pub use ruggiero::{ruggiero_direction, ruggiero_element_vectors, RuggieroWeights};

use serde::{Deserialize, Serialize};

use crate::astro::{ClassicalElements, Environment};
use crate::math::{Float, Vec3};

/// Target slow elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetState {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
}

impl From<&ClassicalElements> for TargetState {
    fn from(el: &ClassicalElements) -> Self {
        TargetState {
            a: el.a,
            e: el.e,
            i: el.i,
            raan: el.raan,
        }
    }
}

/// Unit thrust direction in (radial, along-track, cross-track); `u` is zero
/// when inactive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThrustDirection {
    pub u: Vec3,
    pub active: bool,
}

impl ThrustDirection {
    pub const INACTIVE: ThrustDirection = ThrustDirection {
        u: Vec3::ZERO,
        active: false,
    };

    /// Normalizes `v`, reporting inactive below `1e-12`.
    pub fn from_vector(v: Vec3) -> Self {
        let n = v.norm();
        if !(n > 1e-12) || !n.is_finite() {
            return Self::INACTIVE;
        }
        ThrustDirection {
            u: v / n,
            active: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuidanceLaw {
    Ruggiero,
    #[serde(alias = "dv_law")]
    Dvlaw,
    #[serde(alias = "q_law")]
    Qlaw,
    #[serde(alias = "openloop")]
    OpenLoop,
}

impl GuidanceLaw {
    pub const CLOSED_LOOP: [GuidanceLaw; 3] =
        [GuidanceLaw::Ruggiero, GuidanceLaw::Dvlaw, GuidanceLaw::Qlaw];

    pub fn name(self) -> &'static str {
        match self {
            GuidanceLaw::Ruggiero => "ruggiero",
            GuidanceLaw::Dvlaw => "dvlaw",
            GuidanceLaw::Qlaw => "qlaw",
            GuidanceLaw::OpenLoop => "openloop",
        }
    }
}

/// Weights for all three laws; only the one in use is read.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GuidanceWeights {
    #[serde(default)]
    pub ruggiero: RuggieroWeights,
    #[serde(default)]
    pub dvlaw: DvLawWeights,
    #[serde(default)]
    pub qlaw: QLawWeights,
}

/// Transfer direction a weight set is tuned for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegClass {
    /// lowering with the debris attached (deorbit and handover)
    Down,
    /// climbing to the next debris
    Up,
}

/// Per-leg-class weights, the shape of a tuned coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightTable {
    pub down: GuidanceWeights,
    pub up: GuidanceWeights,
}

impl WeightTable {
    pub fn uniform(w: GuidanceWeights) -> Self {
        WeightTable { down: w, up: w }
    }

    pub fn get(&self, class: LegClass) -> &GuidanceWeights {
        match class {
            LegClass::Down => &self.down,
            LegClass::Up => &self.up,
        }
    }

    pub fn get_mut(&mut self, class: LegClass) -> &mut GuidanceWeights {
        match class {
            LegClass::Down => &mut self.down,
            LegClass::Up => &mut self.up,
        }
    }
}

/// Thrust direction for `law`; open loop has no feedback and is inactive.
pub fn guidance_direction(
    law: GuidanceLaw,
    el: &ClassicalElements,
    target: &TargetState,
    w: &GuidanceWeights,
    env: &Environment,
) -> ThrustDirection {
    match law {
        GuidanceLaw::Ruggiero => ruggiero_direction(el, target, &w.ruggiero, env),
        GuidanceLaw::Dvlaw => dvlaw_direction(el, target, &w.dvlaw, env),
        GuidanceLaw::Qlaw => qlaw_direction(el, target, &w.qlaw, env),
        GuidanceLaw::OpenLoop => ThrustDirection::INACTIVE,
    }
}

/// Which of `[a, i, Ω]` the law drives with nonzero weight.
pub fn targeted_elements(law: GuidanceLaw, w: &GuidanceWeights) -> [bool; 3] {
    match law {
        GuidanceLaw::Ruggiero => {
            let r = &w.ruggiero.w;
            [r[0] > 0.0, r[2] > 0.0, r[3] > 0.0]
        }
        GuidanceLaw::Qlaw => {
            let q = &w.qlaw.w;
            [q[0] > 0.0, q[2] > 0.0, q[3] > 0.0]
        }
        // the semi-major axis enters L unweighted
        GuidanceLaw::Dvlaw => [true, w.dvlaw.lambda_ai > 0.0, w.dvlaw.lambda_araan > 0.0],
        GuidanceLaw::OpenLoop => [false; 3],
    }
}

/// Relative finite-difference step used by the Lyapunov laws.
pub const FD_STEP: f64 = 1e-6;

/// Central-difference gradient of a scalar of the slow state. Steps are
/// `rel` times a per-element scale: `a` itself (km), 1 for e, i and Ω.
pub(crate) fn slow_gradient(x: [f64; 4], rel: f64, f: impl Fn([f64; 4]) -> f64) -> [f64; 4] {
    let scale = [x[0].abs().max(1.0), 1.0, 1.0, 1.0];
    let mut g = [0.0; 4];
    for k in 0..4 {
        let h = rel * scale[k];
        let mut xp = x;
        let mut xm = x;
        xp[k] += h;
        xm[k] -= h;
        g[k] = (f(xp) - f(xm)) / (2.0 * h);
    }
    g
}

/// Steepest descent `-Bᵀg / |gB|` of a Lyapunov gradient through the GVE
/// matrix. The Ω row is dropped on equatorial orbits.
pub(crate) fn descent_direction(g: &[f64; 4], b: &GveMatrix) -> ThrustDirection {
    let mut v = [0.0; 3];
    for (row, gk) in b.rows.iter().zip(g) {
        for c in 0..3 {
            v[c] -= gk * row[c];
        }
    }
    ThrustDirection::from_vector(Vec3(v))
}

fn with_slow(el: &ClassicalElements, x: [f64; 4]) -> ClassicalElements {
    ClassicalElements {
        a: x[0],
        e: x[1],
        i: x[2],
        raan: x[3],
        ..*el
    }
}
