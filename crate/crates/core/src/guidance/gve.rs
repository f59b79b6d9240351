//! Gauss variational equations for the slow elements.

use serde::{Deserialize, Serialize};

use crate::astro::{ClassicalElements, Environment, EQUATORIAL_TOL};
use crate::math::{Float, Vec3};

/// Rows `a, e, i, Ω`; columns radial, along-track, cross-track. Multiplying
/// by an acceleration in km/s² gives element rates (km/s, 1/s, rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GveMatrix {
    pub rows: [[f64; 3]; 4],
    /// false on equatorial orbits, where the Ω row is set to zero
    pub raan_row: bool,
}

impl GveMatrix {
    pub fn rates(&self, accel: Vec3) -> [f64; 4] {
        self.rows
            .map(|r| r[0] * accel.0[0] + r[1] * accel.0[1] + r[2] * accel.0[2])
    }
}

pub fn gve_matrix(el: &ClassicalElements, env: &Environment) -> GveMatrix {
    let (a, e) = (el.a, el.e);
    let p = a * (1.0 - e * e);
    let h = (env.mu * p).sqrt();
    let (sn, cn) = el.nu.sin_cos();
    let r = p / (1.0 + e * cn);
    let (su, cu) = (el.argp + el.nu).sin_cos();
    let si = el.i.sin();
    let raan_row = si.abs() > EQUATORIAL_TOL;
    GveMatrix {
        rows: [
            [2.0 * a * a * e * sn / h, 2.0 * a * a * p / (r * h), 0.0],
            [p * sn / h, ((p + r) * cn + r * e) / h, 0.0],
            [0.0, 0.0, r * cu / h],
            [0.0, 0.0, if raan_row { r * su / (h * si) } else { 0.0 }],
        ],
        raan_row,
    }
}
