//! Small numeric helpers shared by every module.

use core::f64::consts::{PI, TAU};
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

pub use num_traits::Float;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unit vector; the zero vector maps to itself.
    pub fn unit(&self) -> Vec3 {
        let n = self.norm();
        if n > 0.0 {
            *self / n
        } else {
            *self
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3([self.0[0] / s, self.0[1] / s, self.0[2] / s])
    }
}

/// Wraps an angle into [0, 2π).
pub fn wrap_two_pi(x: f64) -> f64 {
    let r = x % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    // -1e-17 % TAU + TAU rounds to TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wraps an angle into (-π, π].
pub fn wrap_pi(x: f64) -> f64 {
    let r = wrap_two_pi(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Minor-arc distance `acos(cos(x))` in [0, π], computed without the
/// precision loss of `acos` near zero.
pub fn minor_arc(x: f64) -> f64 {
    wrap_pi(x).abs()
}

pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Linear interpolation of `ys` sampled at strictly increasing `xs`,
/// clamped at both ends. Returns the bracketing index alongside the value.
pub fn interp_index(xs: &[f64], x: f64) -> (usize, f64) {
    let n = xs.len();
    if n < 2 || x <= xs[0] {
        return (0, 0.0);
    }
    if x >= xs[n - 1] {
        return (n - 2, 1.0);
    }
    let k = xs.partition_point(|&v| v <= x) - 1;
    let frac = (x - xs[k]) / (xs[k + 1] - xs[k]);
    (k, frac)
}
