//! Edelbaum low-thrust transfers between circular orbits, and the extended
//! form that accounts for eclipses, duty ratio, mass depletion and drag.
//!
//! Both profiles are produced by one stepping engine parametrized by the
//! cumulative Δv `s`. Along an Edelbaum arc the in-plane velocity component
//! `V sin β` is constant, which gives closed forms for a(s), i(s) and β(s);
//! time follows from integrating ds / (f·w) segment by segment.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use serde::{Deserialize, Serialize};

use crate::astro::{drag_decay_rate, j2_raan_rate, sunlit_fraction, Environment, SpacecraftConfig};
use crate::math::{interp_index, sign, Float};
use crate::{Error, Result};

/// Boundary of a transfer: circular speeds at both ends and the plane change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdelbaumBoundary {
    /// km/s
    pub v0: f64,
    /// km/s
    pub vf: f64,
    /// signed inclination change i_f − i_0 [rad]
    pub di: f64,
    pub i0: f64,
    pub raan0: f64,
    pub epoch0: f64,
}

impl EdelbaumBoundary {
    /// Boundary between two circular orbits given by radius and inclination.
    pub fn between(
        a0: f64,
        i0: f64,
        af: f64,
        i_f: f64,
        raan0: f64,
        epoch0: f64,
        env: &Environment,
    ) -> Self {
        EdelbaumBoundary {
            v0: env.circular_speed(a0),
            vf: env.circular_speed(af),
            di: i_f - i0,
            i0,
            raan0,
            epoch0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v0 > 0.0 && self.vf > 0.0) {
            return Err(Error::invalid("boundary speeds must be positive"));
        }
        if !(self.di.abs() < core::f64::consts::PI) {
            return Err(Error::invalid("inclination change must be below π"));
        }
        Ok(())
    }
}

/// Total Δv of the optimal constant-acceleration transfer [km/s].
pub fn classical_delta_v(b: &EdelbaumBoundary) -> f64 {
    let c = (FRAC_PI_2 * b.di.abs()).cos();
    let sq = b.v0 * b.v0 + b.vf * b.vf - 2.0 * b.v0 * b.vf * c;
    // coplanar: the radicand is (v0 - vf)² up to rounding
    if b.di == 0.0 {
        return (b.v0 - b.vf).abs();
    }
    sq.max(0.0).sqrt()
}

pub fn classical_tof(dv: f64, f: f64) -> f64 {
    dv / f
}

/// Initial yaw β0 ∈ [0, π]. Coplanar raising gives 0, coplanar lowering π.
pub fn initial_yaw(b: &EdelbaumBoundary) -> f64 {
    let x = FRAC_PI_2 * b.di.abs();
    let (s, c) = x.sin_cos();
    s.atan2(b.v0 / b.vf - c)
}

/// One sample of a transfer profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub t: f64,
    pub a: f64,
    pub i: f64,
    pub raan: f64,
    pub dv_cum: f64,
    pub mass: f64,
    pub beta: f64,
    pub throttle: f64,
}

/// Discretized reference transfer.
///
/// `raan` is stored unwrapped so it interpolates cleanly. `beta` is the
/// signed yaw: its sign is the sign of the inclination change, so the
/// thrust direction in the radial/along-track/cross-track frame is
/// `[0, cos β, sin β]` at the ascending half of the orbit. `throttle` at
/// sample k is the thrust fraction used on the segment that starts there.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TransferProfile {
    pub epoch0: f64,
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub i: Vec<f64>,
    pub raan: Vec<f64>,
    pub dv_cum: Vec<f64>,
    pub mass: Vec<f64>,
    pub beta: Vec<f64>,
    pub throttle: Vec<f64>,
    pub tof: f64,
    pub dv_total: f64,
    /// False for the analytic profile, whose `mass` column is zero.
    pub tracks_mass: bool,
    pub restarts: usize,
}

impl TransferProfile {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn sample(&self, k: usize) -> ProfileSample {
        ProfileSample {
            t: self.t[k],
            a: self.a[k],
            i: self.i[k],
            raan: self.raan[k],
            dv_cum: self.dv_cum[k],
            mass: self.mass[k],
            beta: self.beta[k],
            throttle: self.throttle[k],
        }
    }

    pub fn first(&self) -> ProfileSample {
        self.sample(0)
    }

    pub fn last(&self) -> ProfileSample {
        self.sample(self.len() - 1)
    }

    /// Linear interpolation in time (relative to `epoch0`), clamped to the
    /// profile span.
    pub fn at(&self, t: f64) -> ProfileSample {
        if self.len() == 1 {
            return ProfileSample { t, ..self.first() };
        }
        let (k, w) = interp_index(&self.t, t);
        let lerp = |v: &[f64]| v[k] + w * (v[k + 1] - v[k]);
        ProfileSample {
            t,
            a: lerp(&self.a),
            i: lerp(&self.i),
            raan: lerp(&self.raan),
            dv_cum: lerp(&self.dv_cum),
            mass: lerp(&self.mass),
            beta: lerp(&self.beta),
            throttle: self.throttle[k],
        }
    }

    pub fn final_mass(&self) -> f64 {
        *self.mass.last().unwrap_or(&0.0)
    }

    fn push(&mut self, s: ProfileSample) {
        self.t.push(s.t);
        self.a.push(s.a);
        self.i.push(s.i);
        self.raan.push(s.raan);
        self.dv_cum.push(s.dv_cum);
        self.mass.push(s.mass);
        self.beta.push(s.beta);
        self.throttle.push(s.throttle);
    }
}

/// Knobs of the extended method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdelbaumOptions {
    pub segments: usize,
    /// Hold f at the initial mass instead of following the rocket equation.
    pub constant_mass: bool,
    /// Limit the throttle by the sunlit fraction of each orbit.
    pub eclipses: bool,
    pub drag: bool,
    /// Accumulated drag decay [km] that triggers a re-solve of the
    /// remaining transfer; `None` uses one segment's nominal |Δa|.
    pub restart_threshold_km: Option<f64>,
    pub max_restarts: usize,
    pub min_altitude_km: f64,
}

impl Default for EdelbaumOptions {
    fn default() -> Self {
        EdelbaumOptions {
            segments: 1000,
            constant_mass: false,
            eclipses: true,
            drag: true,
            restart_threshold_km: None,
            max_restarts: 1000,
            min_altitude_km: 200.0,
        }
    }
}

/// An Edelbaum arc started at `s = 0` from speed `v0` and inclination `i0`.
#[derive(Debug, Clone, Copy)]
struct Arc {
    v0: f64,
    cos_b0: f64,
    vsinb: f64,
    beta0: f64,
    sgn: f64,
    i0: f64,
    coplanar: bool,
    dv: f64,
}

impl Arc {
    fn new(v0: f64, vf: f64, di: f64, i0: f64) -> Self {
        let b = EdelbaumBoundary {
            v0,
            vf,
            di,
            i0,
            raan0: 0.0,
            epoch0: 0.0,
        };
        let beta0 = initial_yaw(&b);
        Arc {
            v0,
            cos_b0: beta0.cos(),
            vsinb: v0 * beta0.sin(),
            beta0,
            sgn: if di < 0.0 { -1.0 } else { 1.0 },
            i0,
            coplanar: di == 0.0,
            dv: classical_delta_v(&b),
        }
    }

    /// (a, i, signed β) after a cumulative Δv of `s` along the arc.
    fn state(&self, s: f64, mu: f64) -> (f64, f64, f64) {
        let v2 = self.v0 * self.v0 + s * s - 2.0 * self.v0 * s * self.cos_b0;
        let a = mu / v2;
        let along = self.v0 * self.cos_b0 - s;
        let beta = self.vsinb.atan2(along);
        let i = if self.coplanar || s == 0.0 {
            self.i0
        } else {
            self.i0 + self.sgn * FRAC_2_PI * ((-along / self.vsinb).atan() + FRAC_PI_2 - self.beta0)
        };
        (a, i, self.sgn * beta)
    }
}

enum Thrust<'a> {
    /// Fixed acceleration, full throttle, no environment effects.
    Analytic { f: f64 },
    Vehicle {
        sc: &'a SpacecraftConfig,
        opts: &'a EdelbaumOptions,
    },
}

fn run(
    b: &EdelbaumBoundary,
    thrust: Thrust<'_>,
    segments: usize,
    env: &Environment,
) -> Result<TransferProfile> {
    b.validate()?;
    let mu = env.mu;
    let target_i = b.i0 + b.di;
    let mut arc = Arc::new(b.v0, b.vf, b.di, b.i0);

    let (m0, c, tracks_mass) = match thrust {
        Thrust::Analytic { .. } => (0.0, f64::INFINITY, false),
        Thrust::Vehicle { sc, .. } => {
            sc.validate()?;
            (sc.wet_mass, sc.exhaust_velocity(env), true)
        }
    };

    let a0 = mu / (b.v0 * b.v0);
    let mut profile = TransferProfile {
        epoch0: b.epoch0,
        tracks_mass,
        ..Default::default()
    };
    let mut cur = ProfileSample {
        t: 0.0,
        a: a0,
        i: b.i0,
        raan: b.raan0,
        dv_cum: 0.0,
        mass: m0,
        beta: arc.state(0.0, mu).2,
        throttle: 1.0,
    };

    if arc.dv == 0.0 || segments == 0 {
        profile.push(cur);
        return Ok(profile);
    }

    let threshold = match thrust {
        Thrust::Vehicle { opts, .. } => opts.restart_threshold_km.unwrap_or_else(|| {
            let af = mu / (b.vf * b.vf);
            ((af - a0).abs() / segments as f64).max(0.1)
        }),
        Thrust::Analytic { .. } => f64::INFINITY,
    };

    let mut ds = arc.dv / segments as f64;
    let mut local = 0usize;
    let mut pending = 0.0;
    let mut restarts = 0usize;

    for k in 0..segments {
        let (f, w, decay_rate) = match thrust {
            Thrust::Analytic { f } => (f, 1.0, 0.0),
            Thrust::Vehicle { sc, opts } => {
                let m_for_f = if opts.constant_mass { m0 } else { cur.mass };
                let f = sc.thrust_accel(m_for_f);
                let w_ecl = if opts.eclipses {
                    sunlit_fraction(cur.a, cur.i, cur.raan, b.epoch0 + cur.t, env)
                } else {
                    1.0
                };
                let rate = if opts.drag && !env.atmosphere.is_vacuum() {
                    drag_decay_rate(cur.a, cur.mass, sc, env)?
                } else {
                    0.0
                };
                (f, sc.duty_ratio.min(w_ecl), rate)
            }
        };
        cur.throttle = w;
        if let Some(last) = profile.throttle.last_mut() {
            *last = w;
        } else {
            profile.push(cur);
        }

        let dt = ds / (f * w);
        let (a1, i1, beta1) = arc.state((local + 1) as f64 * ds, mu);
        let m1 = if tracks_mass {
            cur.mass * (-ds / c).exp()
        } else {
            0.0
        };
        let raan1 = cur.raan
            + 0.5 * (j2_raan_rate(cur.a, 0.0, cur.i, env) + j2_raan_rate(a1, 0.0, i1, env)) * dt;

        let mut next = ProfileSample {
            t: cur.t + dt,
            a: a1,
            i: i1,
            raan: raan1,
            dv_cum: cur.dv_cum + ds,
            mass: m1,
            beta: beta1,
            throttle: w,
        };
        local += 1;

        if let Thrust::Vehicle { sc, opts } = thrust {
            if decay_rate > 0.0 {
                let rate1 = drag_decay_rate(a1, m1, sc, env)?;
                pending += 0.5 * (decay_rate + rate1) * dt;
            }
            if pending > threshold && k + 1 < segments {
                restarts += 1;
                if restarts > opts.max_restarts {
                    return Err(Error::DragRestartLimit {
                        max: opts.max_restarts,
                    });
                }
                next.a = a1 - pending;
                pending = 0.0;
                arc = Arc::new(env.circular_speed(next.a), b.vf, target_i - i1, i1);
                next.beta = arc.state(0.0, mu).2;
                ds = arc.dv / (segments - k - 1) as f64;
                local = 0;
            }
            if next.a - env.re < opts.min_altitude_km {
                return Err(Error::AltitudeFloor {
                    altitude_km: next.a - env.re,
                    t: next.t,
                });
            }
        }

        profile.push(next);
        cur = next;
        if ds == 0.0 {
            break;
        }
    }

    profile.tof = cur.t;
    profile.dv_total = cur.dv_cum;
    profile.restarts = restarts;
    Ok(profile)
}

/// Analytic profile at constant acceleration `f` [km/s²] with `n` segments.
/// Its `mass` column is zero.
pub fn evaluate_profile(
    b: &EdelbaumBoundary,
    f: f64,
    n: usize,
    env: &Environment,
) -> Result<TransferProfile> {
    if !(f > 0.0) {
        return Err(Error::invalid("thrust acceleration must be positive"));
    }
    run(b, Thrust::Analytic { f }, n, env)
}

/// Extended method: per-segment throttle min(DR, sunlit fraction), thrust
/// acceleration from the current mass, J2 RAAN propagation and drag decay
/// with re-solves of the remaining transfer.
pub fn extended_edelbaum(
    b: &EdelbaumBoundary,
    sc: &SpacecraftConfig,
    env: &Environment,
    opts: &EdelbaumOptions,
) -> Result<TransferProfile> {
    run(b, Thrust::Vehicle { sc, opts }, opts.segments, env)
}

/// Rocket-equation propellant for a Δv [km/s] starting from mass `m0`.
pub fn propellant_for(dv: f64, m0: f64, sc: &SpacecraftConfig, env: &Environment) -> f64 {
    m0 * (1.0 - (-dv / sc.exhaust_velocity(env)).exp())
}

/// Sign convention shared with the guidance and propagation layers.
pub fn plane_change_sign(di: f64) -> f64 {
    let s = sign(di);
    if s == 0.0 {
        1.0
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn env() -> Environment {
        Environment::default()
    }

    fn sc() -> SpacecraftConfig {
        SpacecraftConfig {
            wet_mass: 800.0,
            max_thrust: 0.06,
            isp: 1300.0,
            duty_ratio: 0.5,
            drag_coefficient: 2.2,
            frontal_area: 2.0,
        }
    }

    fn boundary(v0: f64, vf: f64, di: f64) -> EdelbaumBoundary {
        EdelbaumBoundary {
            v0,
            vf,
            di,
            i0: 1.7,
            raan0: 0.0,
            epoch0: 0.0,
        }
    }

    #[test]
    fn delta_v_cases() {
        assert_eq!(classical_delta_v(&boundary(7.7, 7.7, 0.0)), 0.0);
        assert_eq!(
            classical_delta_v(&boundary(7.73, 7.55, 0.0)),
            (7.73f64 - 7.55).abs()
        );
        // 2·V·sin(π/4·Δi) and its small-angle form (π/2)·V·Δi
        let dv = classical_delta_v(&boundary(7.7, 7.7, 2f64.to_radians()));
        assert!((dv - 2.0 * 7.7 * (PI / 4.0 * 2f64.to_radians()).sin()).abs() < 1e-12);
        assert!((dv - 0.4222).abs() < 1e-4, "{dv}");
        assert!((dv - FRAC_PI_2 * 7.7 * 2f64.to_radians()).abs() < 1e-4);
    }

    #[test]
    fn tof_quotient() {
        assert_eq!(classical_tof(0.0, 7.5e-8), 0.0);
        let t = classical_tof(0.2688, 7.5e-8);
        assert!((t - 3.584e6).abs() < 1e3);
        assert_eq!(classical_tof(0.2688, 1.5e-7), t / 2.0);
    }

    #[test]
    fn yaw_identity() {
        assert_eq!(initial_yaw(&boundary(7.7, 7.6, 0.0)), 0.0);
        assert!((initial_yaw(&boundary(7.6, 7.7, 0.0)) - PI).abs() < 1e-15);
        let d = 2f64.to_radians();
        let b = boundary(7.7, 7.7, d);
        let beta = initial_yaw(&b);
        let x = FRAC_PI_2 * d;
        assert!((beta.tan() - x.sin() / (1.0 - x.cos())).abs() / beta.tan().abs() < 1e-10);
        assert!((beta - (PI / 2.0 - x / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn analytic_endpoints() {
        let env = env();
        let b = EdelbaumBoundary::between(6978.0, 1.70, 7300.0, 1.72, 0.3, 0.0, &env);
        let p = evaluate_profile(&b, 7.5e-8, 1000, &env).unwrap();
        assert_eq!(p.a[0], env.mu / (b.v0 * b.v0));
        assert_eq!(p.i[0], b.i0);
        let af = env.mu / (b.vf * b.vf);
        assert!(((p.a[1000] - af) / af).abs() < 1e-6);
        assert!((p.i[1000] - (b.i0 + b.di)).abs() < 1e-8);
        // a(t) closed form at an interior sample
        let k = 377;
        let beta0 = initial_yaw(&b);
        let t = p.t[k];
        let f = 7.5e-8;
        let a = env.mu / (b.v0 * b.v0 + f * f * t * t - 2.0 * b.v0 * f * t * beta0.cos());
        assert!(((p.a[k] - a) / a).abs() < 1e-9);
        assert!(!p.tracks_mass);
    }

    #[test]
    fn coplanar_monotone() {
        let env = env();
        for (a0, af) in [(6728.0, 7300.0), (7300.0, 6728.0)] {
            let b = EdelbaumBoundary::between(a0, 1.7, af, 1.7, 0.0, 0.0, &env);
            let p = evaluate_profile(&b, 1e-7, 200, &env).unwrap();
            let up = af > a0;
            assert!(p.a.windows(2).all(|w| (w[1] > w[0]) == up));
            assert!(p.i.iter().all(|&i| i == 1.7));
            assert!((p.a[200] - af).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_transfer_single_sample() {
        let env = env();
        let b = boundary(7.5, 7.5, 0.0);
        let p = extended_edelbaum(&b, &sc(), &env, &EdelbaumOptions::default()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.tof, 0.0);
        assert_eq!(p.dv_total, 0.0);
    }

    fn clean_opts() -> EdelbaumOptions {
        EdelbaumOptions {
            eclipses: false,
            drag: false,
            ..Default::default()
        }
    }

    #[test]
    fn constant_mass_matches_analytic_bitwise() {
        let env = Environment::vacuum();
        let mut s = sc();
        s.duty_ratio = 1.0;
        let b = EdelbaumBoundary::between(6728.0, 1.71, 7500.0, 1.70, 0.4, 1e8, &env);
        let opts = EdelbaumOptions {
            constant_mass: true,
            ..clean_opts()
        };
        let ext = extended_edelbaum(&b, &s, &env, &opts).unwrap();
        let ana = evaluate_profile(&b, s.thrust_accel(s.wet_mass), 1000, &env).unwrap();
        assert_eq!(ext.t, ana.t);
        assert_eq!(ext.a, ana.a);
        assert_eq!(ext.i, ana.i);
        assert_eq!(ext.raan, ana.raan);
        assert_eq!(ext.dv_cum, ana.dv_cum);
        assert_eq!(ext.beta, ana.beta);
    }

    #[test]
    fn duty_ratio_dilates_time() {
        let env = env();
        let b = EdelbaumBoundary::between(6728.0, 1.71, 7500.0, 1.70, 0.4, 1e8, &env);
        let mut s = sc();
        s.duty_ratio = 1.0;
        let full = extended_edelbaum(&b, &s, &env, &clean_opts()).unwrap();
        s.duty_ratio = 0.5;
        let half = extended_edelbaum(&b, &s, &env, &clean_opts()).unwrap();
        assert!((half.tof / full.tof - 2.0).abs() < 1e-12);
        assert_eq!(half.dv_total, full.dv_total);
        // mass ledger follows the rocket equation
        let expected = propellant_for(full.dv_total, 800.0, &s, &env);
        assert!(((800.0 - full.final_mass()) - expected).abs() < 1e-9);
        assert!(full.mass.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn drag_penalizes_raising_and_assists_lowering() {
        let env = env();
        let s = sc();
        let opts = EdelbaumOptions {
            eclipses: false,
            ..Default::default()
        };
        let up = EdelbaumBoundary::between(6728.0, 1.71, 7400.0, 1.72, 0.0, 0.0, &env);
        let ext = extended_edelbaum(&up, &s, &env, &opts).unwrap();
        assert!(ext.dv_total > classical_delta_v(&up));
        assert!(ext.restarts > 0);

        let heavy = s.with_payload(2000.0, 30.0);
        let down = EdelbaumBoundary::between(6980.0, 1.71, 6728.0, 1.71, 0.0, 0.0, &env);
        let ext = extended_edelbaum(&down, &heavy, &env, &opts).unwrap();
        assert!(ext.dv_total < classical_delta_v(&down));
        let af = env.mu / (down.vf * down.vf);
        assert!((ext.a[ext.len() - 1] - af).abs() < 1.0);
    }

    #[test]
    fn altitude_floor_enforced() {
        let env = env();
        let b = EdelbaumBoundary::between(6728.0, 1.7, 6540.0, 1.7, 0.0, 0.0, &env);
        let err = extended_edelbaum(&b, &sc(), &env, &EdelbaumOptions::default()).unwrap_err();
        assert!(matches!(err, Error::AltitudeFloor { .. }));
    }

    #[test]
    fn discretization_converges() {
        let env = env();
        let b = EdelbaumBoundary::between(6728.0, 1.71, 7400.0, 1.72, 0.0, 2e8, &env);
        let coarse = extended_edelbaum(&b, &sc(), &env, &EdelbaumOptions::default()).unwrap();
        let fine = extended_edelbaum(
            &b,
            &sc(),
            &env,
            &EdelbaumOptions {
                segments: 20_000,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((coarse.dv_total / fine.dv_total - 1.0).abs() < 1e-3);
        assert!((coarse.tof / fine.tof - 1.0).abs() < 1e-3);
    }

    #[test]
    fn interpolation_hits_samples() {
        let env = env();
        let b = EdelbaumBoundary::between(6728.0, 1.71, 7400.0, 1.72, 0.0, 0.0, &env);
        let p = evaluate_profile(&b, 1e-7, 50, &env).unwrap();
        let s = p.at(p.t[10]);
        assert_eq!(s.a, p.a[10]);
        let mid = p.at(0.5 * (p.t[10] + p.t[11]));
        assert!((mid.a - 0.5 * (p.a[10] + p.a[11])).abs() < 1e-9);
        assert_eq!(p.at(1e12).a, p.a[50]);
    }

    proptest! {
        #[test]
        fn endpoint_identities(a0 in 6700.0..8000.0f64, af in 6700.0..8000.0f64,
                               i0 in 1.6..1.8f64, di in -0.05..0.05f64) {
            let env = env();
            let b = EdelbaumBoundary::between(a0, i0, af, i0 + di, 0.0, 0.0, &env);
            let p = evaluate_profile(&b, 1e-7, 100, &env).unwrap();
            if p.len() > 1 {
                let n = p.len() - 1;
                prop_assert!(((p.a[n] - af) / af).abs() < 1e-6);
                prop_assert!((p.i[n] - (i0 + di)).abs() < 1e-8);
                prop_assert!(p.t.windows(2).all(|w| w[1] > w[0]));
                prop_assert!(p.dv_cum.windows(2).all(|w| w[1] >= w[0]));
            }
        }
    }
}
