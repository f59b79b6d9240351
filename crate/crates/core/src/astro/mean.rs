//! First-order J2 short-period corrections for near-circular orbits.
//!
//! The conversion works in nonsingular variables
//! (a, e cos ω, e sin ω, sin(i/2) cos Ω, sin(i/2) sin Ω, ω + M), so it stays
//! well defined for circular and equatorial orbits. Mean elements are
//! defined as the one-orbit time average of the osculating ones.

use serde::{Deserialize, Serialize};

use crate::astro::elements::{mean_to_true, true_to_mean, CIRCULAR_TOL, EQUATORIAL_TOL};
use crate::astro::{ClassicalElements, Environment};
use crate::math::{wrap_two_pi, Float};

/// Past this eccentricity the near-circular expansion degrades.
pub const MEAN_ECCENTRICITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeanAccuracy {
    Nominal,
    /// e ≥ 0.1: the result is returned but carries O(e·J2) errors.
    HighEccentricity,
}

#[derive(Debug, Clone, Copy)]
struct Nonsingular {
    a: f64,
    ex: f64,
    ey: f64,
    q1: f64,
    q2: f64,
    lambda: f64,
}

impl Nonsingular {
    fn from_classical(el: &ClassicalElements) -> Self {
        let (sw, cw) = el.argp.sin_cos();
        let (so, co) = el.raan.sin_cos();
        let s = (0.5 * el.i).sin();
        Nonsingular {
            a: el.a,
            ex: el.e * cw,
            ey: el.e * sw,
            q1: s * co,
            q2: s * so,
            lambda: el.argp + true_to_mean(el.nu, el.e),
        }
    }

    fn to_classical(self, epoch: f64) -> ClassicalElements {
        let e = (self.ex * self.ex + self.ey * self.ey).sqrt();
        let s = (self.q1 * self.q1 + self.q2 * self.q2).sqrt().min(1.0);
        let i = 2.0 * s.asin();
        let raan = if i.sin().abs() < EQUATORIAL_TOL {
            0.0
        } else {
            wrap_two_pi(self.q2.atan2(self.q1))
        };
        let (e, argp) = if e < CIRCULAR_TOL {
            (0.0, 0.0)
        } else {
            (e, wrap_two_pi(self.ey.atan2(self.ex)))
        };
        let nu = mean_to_true(self.lambda - argp, e);
        ClassicalElements {
            a: self.a,
            e,
            i,
            raan,
            argp,
            nu,
            epoch,
        }
    }

    /// Short-period part evaluated at this (mean) state.
    fn short_period(&self, env: &Environment) -> Nonsingular {
        let a = self.a;
        let gamma = env.j2 * (env.re / a) * (env.re / a);
        let s = (self.q1 * self.q1 + self.q2 * self.q2).sqrt().min(1.0);
        let i = 2.0 * s.asin();
        let (si, ci) = i.sin_cos();
        let s2 = si * si;
        let u = self.lambda;
        let (s1u, c1u) = u.sin_cos();
        let (s2u, c2u) = (2.0 * u).sin_cos();
        let (s3u, c3u) = (3.0 * u).sin_cos();

        let da = 1.5 * gamma * a * s2 * c2u;
        let dex = 1.5 * gamma * ((1.0 - 1.25 * s2) * c1u + 7.0 / 12.0 * s2 * c3u);
        let dey = 1.5 * gamma * ((1.0 - 1.75 * s2) * s1u + 7.0 / 12.0 * s2 * s3u);
        let di = 0.375 * gamma * (2.0 * i).sin() * c2u;
        let draan = 0.75 * gamma * ci * s2u;
        let dlambda = gamma * (1.875 * s2 - 0.75) * s2u;

        // (di, dΩ) → (dq1, dq2); sin(i/2)·dΩ vanishes smoothly at i = 0
        let ch = (0.5 * i).cos();
        let (so, co) = if s > 0.0 {
            (self.q2 / s, self.q1 / s)
        } else {
            (0.0, 1.0)
        };
        Nonsingular {
            a: da,
            ex: dex,
            ey: dey,
            q1: 0.5 * ch * co * di - s * so * draan,
            q2: 0.5 * ch * so * di + s * co * draan,
            lambda: dlambda,
        }
    }

    fn offset(&self, d: &Nonsingular, sign: f64) -> Nonsingular {
        Nonsingular {
            a: self.a + sign * d.a,
            ex: self.ex + sign * d.ex,
            ey: self.ey + sign * d.ey,
            q1: self.q1 + sign * d.q1,
            q2: self.q2 + sign * d.q2,
            lambda: self.lambda + sign * d.lambda,
        }
    }
}

fn accuracy(e: f64) -> MeanAccuracy {
    if e >= MEAN_ECCENTRICITY_LIMIT {
        MeanAccuracy::HighEccentricity
    } else {
        MeanAccuracy::Nominal
    }
}

pub fn mean_to_osculating(
    mean: &ClassicalElements,
    env: &Environment,
) -> (ClassicalElements, MeanAccuracy) {
    let m = Nonsingular::from_classical(mean);
    let osc = m.offset(&m.short_period(env), 1.0);
    (osc.to_classical(mean.epoch), accuracy(mean.e))
}

pub fn osculating_to_mean(
    osc: &ClassicalElements,
    env: &Environment,
) -> (ClassicalElements, MeanAccuracy) {
    let o = Nonsingular::from_classical(osc);
    let mut m = o;
    for _ in 0..20 {
        let next = o.offset(&m.short_period(env), -1.0);
        let change = (next.a - m.a).abs() / m.a
            + (next.ex - m.ex).abs()
            + (next.ey - m.ey).abs()
            + (next.q1 - m.q1).abs()
            + (next.q2 - m.q2).abs()
            + (next.lambda - m.lambda).abs();
        m = next;
        if change < 1e-14 {
            break;
        }
    }
    (m.to_classical(osc.epoch), accuracy(osc.e))
}
