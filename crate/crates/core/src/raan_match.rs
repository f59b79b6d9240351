//! Thrust–drift–thrust transfers that use differential J2 precession on an
//! intermediate circular "drift" orbit to close a RAAN gap.

use serde::{Deserialize, Serialize};

use crate::astro::{j2_raan_rate, ClassicalElements, Environment, SpacecraftConfig};
use crate::edelbaum::{extended_edelbaum, EdelbaumBoundary, EdelbaumOptions, TransferProfile};
use crate::math::{minor_arc, wrap_pi, wrap_two_pi, Float};
use crate::{Error, Result};

/// Relative rates below this [rad/s] count as no drift at all.
const RATE_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftOrbit {
    /// circular speed [km/s]
    pub v_d: f64,
    pub i_d: f64,
}

impl DriftOrbit {
    pub fn from_radius(a: f64, i_d: f64, env: &Environment) -> Self {
        DriftOrbit {
            v_d: env.circular_speed(a),
            i_d,
        }
    }

    pub fn radius(&self, env: &Environment) -> f64 {
        env.mu / (self.v_d * self.v_d)
    }

    pub fn altitude(&self, env: &Environment) -> f64 {
        self.radius(env) - env.re
    }

    pub fn validate(&self, env: &Environment) -> Result<()> {
        let h = self.altitude(env);
        if !(200.0..=2000.0).contains(&h) {
            return Err(Error::invalid(
                "drift orbit altitude outside [200, 2000] km",
            ));
        }
        if !(0.0..=core::f64::consts::PI).contains(&self.i_d) {
            return Err(Error::invalid("drift inclination outside [0, π]"));
        }
        Ok(())
    }
}

/// Smallest non-negative drift duration [s] for which
/// `Ω_sc + Ω̇_sc·T ≡ Ω_tgt0 + Ω̇_tgt·(T + tof_t1 + tof_t2)  (mod 2π)`.
///
/// `raan_after_thrust` already includes the precession of both thrust
/// phases. Drift always follows the natural relative precession.
pub fn drift_time(
    raan_after_thrust: f64,
    raan_rate_sc: f64,
    raan_target_t0: f64,
    raan_rate_target: f64,
    tof_t1: f64,
    tof_t2: f64,
) -> Result<f64> {
    let deficit = raan_target_t0 + raan_rate_target * (tof_t1 + tof_t2) - raan_after_thrust;
    let rel = raan_rate_sc - raan_rate_target;
    if rel.abs() < RATE_TOL {
        return if minor_arc(deficit) < 1e-12 {
            Ok(0.0)
        } else {
            Err(Error::NoRelativeDrift)
        };
    }
    let gap = if rel > 0.0 {
        wrap_two_pi(deficit)
    } else {
        wrap_two_pi(-deficit)
    };
    Ok(gap / rel.abs())
}

/// Δv [km/s] spent cancelling drag on a circular orbit for `duration`
/// seconds, starting from `sc.wet_mass`. Drag force is constant on the held
/// orbit while the mass drops, so Δv = c·ln(m0 / (m0 − F·t/c)).
pub fn drift_station_keeping_dv(
    orbit: &DriftOrbit,
    duration: f64,
    sc: &SpacecraftConfig,
    env: &Environment,
) -> Result<f64> {
    if duration < 0.0 {
        return Err(Error::invalid("drift duration must be non-negative"));
    }
    let force = drag_force(orbit, sc, env)?;
    if force == 0.0 || duration == 0.0 {
        return Ok(0.0);
    }
    let c = sc.exhaust_velocity(env);
    let used = force * duration / (c * 1000.0);
    if used >= sc.wet_mass {
        return Err(Error::MassFloor {
            mass: 0.0,
            t: duration,
        });
    }
    Ok(c * (sc.wet_mass / (sc.wet_mass - used)).ln())
}

/// Drag force [N] on the held circular orbit.
pub fn drag_force(orbit: &DriftOrbit, sc: &SpacecraftConfig, env: &Environment) -> Result<f64> {
    let rho = env.density(orbit.altitude(env))?;
    let v = orbit.v_d * 1000.0;
    Ok(0.5 * rho * sc.drag_coefficient * sc.frontal_area * v * v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftPhase {
    pub orbit: DriftOrbit,
    /// seconds after the start of the transfer
    pub start: f64,
    pub duration: f64,
    pub dv_station_keeping: f64,
    /// unwrapped RAAN at drift start
    pub raan_start: f64,
    pub raan_rate: f64,
    pub mass_start: f64,
    pub mass_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaanTransfer {
    pub phase1: TransferProfile,
    pub drift: DriftPhase,
    pub phase2: TransferProfile,
    pub dv_total: f64,
    pub tof: f64,
    pub final_mass: f64,
    /// Arrival RAAN minus target RAAN, wrapped to (−π, π].
    pub raan_residual: f64,
    pub iterations: usize,
}

impl RaanTransfer {
    pub fn final_raan(&self) -> f64 {
        self.phase2.last().raan
    }
}

/// Maximum re-solves of the second thrust phase.
const PHASE2_ITERATIONS: usize = 6;

/// Thrust to the drift orbit, coast until the planes line up, thrust to the
/// target's (a, i). `to` gives the target orbit; its RAAN is propagated with
/// the secular J2 rate from `to.epoch`. `sc.wet_mass` is the mass at the
/// start of the first phase.
pub fn raan_matching_transfer(
    from: &ClassicalElements,
    to: &ClassicalElements,
    drift: &DriftOrbit,
    sc: &SpacecraftConfig,
    env: &Environment,
    opts: &EdelbaumOptions,
) -> Result<RaanTransfer> {
    drift.validate(env)?;
    let a_d = drift.radius(env);
    let t0 = from.epoch;
    let tgt_rate = j2_raan_rate(to.a, to.e, to.i, env);
    let tgt_raan_t0 = to.raan + tgt_rate * (t0 - to.epoch);
    let drift_rate = j2_raan_rate(a_d, 0.0, drift.i_d, env);

    let b1 = EdelbaumBoundary::between(from.a, from.i, a_d, drift.i_d, from.raan, t0, env);
    let phase1 = extended_edelbaum(&b1, sc, env, opts)?;
    let tof1 = phase1.tof;
    let raan1 = phase1.last().raan;
    let m1 = phase1.final_mass();

    let run_phase2 = |duration: f64| -> Result<(TransferProfile, f64, f64)> {
        let sk_dv = drift_station_keeping_dv(drift, duration, &sc.with_mass(m1), env)?;
        let m2 = m1 * (-sk_dv / sc.exhaust_velocity(env)).exp();
        let raan2 = raan1 + drift_rate * duration;
        let b2 =
            EdelbaumBoundary::between(a_d, drift.i_d, to.a, to.i, raan2, t0 + tof1 + duration, env);
        let p = extended_edelbaum(&b2, &sc.with_mass(m2), env, opts)?;
        Ok((p, sk_dv, m2))
    };
    let solve = |p2: &TransferProfile, raan2: f64| {
        let precession = p2.last().raan - raan2;
        drift_time(
            raan1 + precession,
            drift_rate,
            tgt_raan_t0,
            tgt_rate,
            tof1,
            p2.tof,
        )
    };

    // first guess: phase 2 flown right after phase 1
    let (guess, _, _) = run_phase2(0.0)?;
    let mut duration = solve(&guess, raan1)?;
    let mut iterations = 0;
    let (p2, sk_dv, m2) = loop {
        iterations += 1;
        let run = run_phase2(duration)?;
        if iterations >= PHASE2_ITERATIONS {
            break run;
        }
        let next = solve(&run.0, raan1 + drift_rate * duration)?;
        if (next - duration).abs() < 1.0 {
            break run;
        }
        duration = next;
    };

    let tof = tof1 + duration + p2.tof;
    let arrival = p2.last().raan;
    let target_arrival = tgt_raan_t0 + tgt_rate * tof;
    let drift_phase = DriftPhase {
        orbit: *drift,
        start: tof1,
        duration,
        dv_station_keeping: sk_dv,
        raan_start: raan1,
        raan_rate: drift_rate,
        mass_start: m1,
        mass_end: m2,
    };
    Ok(RaanTransfer {
        dv_total: phase1.dv_total + sk_dv + p2.dv_total,
        tof,
        final_mass: p2.final_mass(),
        raan_residual: wrap_pi(arrival - target_arrival),
        iterations,
        phase1,
        drift: drift_phase,
        phase2: p2,
    })
}

/// Secular-J2 RAAN of a circular orbit after `dt` seconds, wrapped.
pub fn propagate_raan(raan: f64, a: f64, i: f64, dt: f64, env: &Environment) -> f64 {
    wrap_two_pi(raan + j2_raan_rate(a, 0.0, i, env) * dt)
}
