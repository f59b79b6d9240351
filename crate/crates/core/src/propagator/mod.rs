//! Osculating propagation of a guided servicer along a reference profile.
//!
//! Two-body + J2 + drag + thrust in inertial Cartesian coordinates with an
//! adaptive Dormand–Prince 5(4) integrator. The control is recomputed every
//! `control_step` seconds from mean elements and held (as radial /
//! along-track / cross-track components) until the next update.

mod dopri;
mod tour;

pub use dopri::{integrate, StepFailure, Tolerances};
pub use tour::{fly_leg, fly_tour, leg_class, leg_segments, LegFlight, TourFlight};

use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::astro::environment::j2_acceleration_at;
use crate::astro::{
    cartesian_to_elements, drag_magnitude, eclipse_center_arglat, elements_to_cartesian, in_shadow,
    mean_to_osculating, osculating_to_mean, sun_direction, sunlit_fraction, CartesianState,
    ClassicalElements, Environment, SpacecraftConfig,
};
use crate::edelbaum::TransferProfile;
use crate::guidance::{
    dvlaw_value, guidance_direction, qlaw_value, targeted_elements, GuidanceLaw, GuidanceWeights,
    TargetState,
};
use crate::math::{minor_arc, sign, wrap_pi, wrap_two_pi, Float, Vec3};
use crate::tour::DriftSegment;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    /// Edelbaum transfer; open loop follows the yaw profile
    Thrust,
    /// constant drift orbit; thrust only to counter drag
    Drift,
}

/// Hysteresis thresholds on (Δa km, Δi rad, ΔΩ rad) for drift segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeadbandThresholds {
    pub on: [f64; 3],
    pub off: [f64; 3],
}

impl Default for DeadbandThresholds {
    fn default() -> Self {
        DeadbandThresholds {
            on: [5.0, 0.1f64.to_radians(), 0.1f64.to_radians()],
            off: [0.5, 0.01f64.to_radians(), 0.01f64.to_radians()],
        }
    }
}

impl DeadbandThresholds {
    pub fn validate(&self) -> Result<()> {
        if self
            .on
            .iter()
            .zip(&self.off)
            .all(|(on, off)| on > off && *off >= 0.0)
        {
            Ok(())
        } else {
            Err(Error::invalid(
                "deadband on-thresholds must exceed off-thresholds",
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ThrottleState {
    #[default]
    Off,
    On,
}

/// Integrator and control settings shared by every segment of a flight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorSettings {
    /// s between control updates
    pub control_step: f64,
    pub rtol: f64,
    /// km
    pub atol_position: f64,
    /// km/s
    pub atol_velocity: f64,
    /// s
    pub max_step: f64,
    pub deadband: DeadbandThresholds,
    pub min_altitude_km: f64,
    /// kg; abort below this mass
    pub mass_floor: f64,
    /// s between logged samples (the final state is always logged)
    pub log_interval: f64,
}

impl Default for PropagatorSettings {
    fn default() -> Self {
        PropagatorSettings {
            control_step: 60.0,
            rtol: 1e-10,
            atol_position: 1e-6,
            atol_velocity: 1e-9,
            max_step: 60.0,
            deadband: DeadbandThresholds::default(),
            min_altitude_km: 150.0,
            mass_floor: 0.0,
            log_interval: 3600.0,
        }
    }
}

impl PropagatorSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.control_step > 0.0
            && self.max_step > 0.0
            && self.rtol > 0.0
            && self.log_interval > 0.0)
        {
            return Err(Error::invalid("step sizes and tolerances must be positive"));
        }
        self.deadband.validate()
    }

    fn tolerances(&self) -> Tolerances<8> {
        let (p, v) = (self.atol_position, self.atol_velocity);
        Tolerances {
            rtol: self.rtol,
            atol: [p, p, p, v, v, v, 1e-6, 1e-9],
            max_step: self.max_step,
            min_step: 1e-6,
        }
    }
}

/// One reference segment to track.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationConfig {
    pub law: GuidanceLaw,
    pub weights: GuidanceWeights,
    pub reference: TransferProfile,
    pub segment: SegmentKind,
    pub settings: PropagatorSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogSample {
    /// s since J2000
    pub epoch: f64,
    pub osculating: ClassicalElements,
    pub mean: ClassicalElements,
    pub mass: f64,
    /// km/s, cumulative
    pub dv: f64,
    /// throttle of the control step containing the sample
    pub throttle: f64,
    /// L or Q for the Lyapunov laws, 0 otherwise
    pub law_value: f64,
    pub direction: Vec3,
}

/// Absolute terminal deviation of the mean elements from the reference end.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TerminalErrors {
    pub da_km: f64,
    pub di_deg: f64,
    pub draan_deg: f64,
}

impl TerminalErrors {
    pub fn within(&self, budget: &TerminalErrors) -> bool {
        self.da_km < budget.da_km
            && self.di_deg < budget.di_deg
            && self.draan_deg < budget.draan_deg
    }
}

impl core::ops::Add for TerminalErrors {
    type Output = TerminalErrors;
    fn add(self, o: TerminalErrors) -> TerminalErrors {
        TerminalErrors {
            da_km: self.da_km + o.da_km,
            di_deg: self.di_deg + o.di_deg,
            draan_deg: self.draan_deg + o.draan_deg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub samples: Vec<LogSample>,
    pub terminal: TerminalErrors,
    /// km/s of thrust Δv
    pub dv: f64,
    pub initial_mass: f64,
    pub final_mass: f64,
    pub final_state: CartesianState,
    /// seconds with thrust on
    pub thrust_time: f64,
    pub duration: f64,
    pub derivative_evaluations: usize,
}

impl TrajectoryLog {
    pub fn fuel(&self) -> f64 {
        self.initial_mass - self.final_mass
    }

    /// Final mass predicted by the rocket equation from the logged Δv.
    pub fn rocket_equation_mass(&self, sc: &SpacecraftConfig, env: &Environment) -> f64 {
        self.initial_mass * (-self.dv / sc.exhaust_velocity(env)).exp()
    }

    pub fn final_mean(&self) -> Option<&ClassicalElements> {
        self.samples.last().map(|s| &s.mean)
    }
}

/// Duty-cycle gate: off within `±π(1−DR)/2` of the eclipse centre `θ_C` and
/// of its antipode, on elsewhere. Without a shadow the windows sit at 0.
pub fn duty_throttle(theta: f64, theta_c: Option<f64>, duty_ratio: f64) -> f64 {
    let half = PI * (1.0 - duty_ratio) / 2.0;
    let c = theta_c.unwrap_or(0.0);
    let d = wrap_pi(theta - c).abs();
    if d < half || PI - d < half {
        0.0
    } else {
        1.0
    }
}

/// Hysteresis switch on drift segments: turns on when any error exceeds its
/// on-threshold, off once every error is inside its off-threshold. Only the
/// `[a, i, Ω]` entries set in `targeted` take part: an error the law has no
/// weight on cannot be reduced, so it must not hold the thruster on.
pub fn drift_deadband(
    mean: &ClassicalElements,
    reference: &TargetState,
    state: ThrottleState,
    th: &DeadbandThresholds,
    targeted: [bool; 3],
) -> ThrottleState {
    let err = [
        (mean.a - reference.a).abs(),
        (mean.i - reference.i).abs(),
        minor_arc(mean.raan - reference.raan),
    ];
    let mut rows = (0..3).filter(|&k| targeted[k]);
    match state {
        ThrottleState::Off if rows.any(|k| err[k] > th.on[k]) => ThrottleState::On,
        ThrottleState::On if rows.all(|k| err[k] < th.off[k]) => ThrottleState::Off,
        s => s,
    }
}

/// Circular mean elements of a reference sample at argument of latitude `u`.
pub fn reference_elements(reference: &TransferProfile, t: f64, arglat: f64) -> ClassicalElements {
    let s = reference.at(t);
    ClassicalElements::circular(
        s.a,
        s.i,
        wrap_two_pi(s.raan),
        wrap_two_pi(arglat),
        reference.epoch0 + t,
    )
}

/// Osculating Cartesian state whose mean elements are the circular
/// reference start at argument of latitude `arglat`.
pub fn reference_start(
    reference: &TransferProfile,
    arglat: f64,
    env: &Environment,
) -> CartesianState {
    let mean = reference_elements(reference, 0.0, arglat);
    elements_to_cartesian(&mean_to_osculating(&mean, env).0, env)
}

#[derive(Debug, Clone, Copy)]
enum Control {
    Coast,
    /// full thrust along a fixed (radial, along-track, cross-track) direction
    Steer(Vec3),
    /// thrust opposite to drag, scaled by the gain
    DragCompensation(f64),
}

struct Dynamics<'a> {
    sc: &'a SpacecraftConfig,
    env: &'a Environment,
    exhaust: f64,
    drag: bool,
}

impl Dynamics<'_> {
    fn drag(&self, r: &Vec3, v: &Vec3, mass: f64) -> Vec3 {
        if !self.drag {
            return Vec3::ZERO;
        }
        let alt = r.norm() - self.env.re;
        match drag_magnitude(alt, v.norm(), mass, self.sc, self.env) {
            Ok(m) => v.unit() * -m,
            Err(_) => Vec3::ZERO,
        }
    }

    fn derivative(&self, y: &[f64; 8], control: Control) -> [f64; 8] {
        let r = Vec3::new(y[0], y[1], y[2]);
        let v = Vec3::new(y[3], y[4], y[5]);
        let m = y[6];
        let rn = r.norm();
        let drag = self.drag(&r, &v, m);
        let mut acc = r * (-self.env.mu / (rn * rn * rn)) + j2_acceleration_at(&r, self.env) + drag;
        let thrust = match control {
            Control::Coast => Vec3::ZERO,
            Control::Steer(u) => {
                let rh = r / rn;
                let nh = r.cross(&v).unit();
                let th = nh.cross(&rh);
                (rh * u.0[0] + th * u.0[1] + nh * u.0[2]) * self.sc.thrust_accel(m)
            }
            Control::DragCompensation(g) => drag * -g,
        };
        acc += thrust;
        let at = thrust.norm();
        [
            v.0[0],
            v.0[1],
            v.0[2],
            acc.0[0],
            acc.0[1],
            acc.0[2],
            -m * at / self.exhaust,
            at,
        ]
    }
}

/// Mean elements with the fast angle taken from the osculating position:
/// ν is set so that ω_mean + ν equals the osculating argument of latitude.
fn law_elements(osc: &ClassicalElements, env: &Environment) -> ClassicalElements {
    let (mean, _) = osculating_to_mean(osc, env);
    ClassicalElements {
        nu: wrap_two_pi(osc.arg_latitude() - mean.argp),
        ..mean
    }
}

fn target_of(reference: &TransferProfile, t: f64) -> TargetState {
    let s = reference.at(t);
    TargetState {
        a: s.a,
        e: 0.0,
        i: s.i,
        raan: s.raan,
    }
}

fn law_scalar(
    law: GuidanceLaw,
    el: &ClassicalElements,
    target: &TargetState,
    w: &GuidanceWeights,
    env: &Environment,
) -> f64 {
    match law {
        GuidanceLaw::Dvlaw => dvlaw_value(el, target, &w.dvlaw, env),
        GuidanceLaw::Qlaw => qlaw_value(el, target, &w.qlaw, env),
        _ => 0.0,
    }
}

/// Mutable flight state carried across segments.
struct Flight {
    y: [f64; 8],
    epoch: f64,
    h: f64,
    anchor: Option<f64>,
    samples: Vec<LogSample>,
    next_log: f64,
    thrust_time: f64,
    evaluations: usize,
}

impl Flight {
    fn state(&self) -> CartesianState {
        CartesianState {
            position: Vec3::new(self.y[0], self.y[1], self.y[2]),
            velocity: Vec3::new(self.y[3], self.y[4], self.y[5]),
            epoch: self.epoch,
        }
    }
}

fn fly_segment(
    f: &mut Flight,
    cfg: &PropagationConfig,
    sc: &SpacecraftConfig,
    env: &Environment,
) -> Result<()> {
    let s = &cfg.settings;
    let dynamics = Dynamics {
        sc,
        env,
        exhaust: sc.exhaust_velocity(env),
        drag: !env.atmosphere.is_vacuum() && sc.frontal_area > 0.0,
    };
    let tol = s.tolerances();
    let dr = sc.duty_ratio;
    let closed = cfg.law != GuidanceLaw::OpenLoop;
    let t_end = cfg.reference.tof;
    let epoch0 = cfg.reference.epoch0;
    let mut deadband = ThrottleState::Off;
    let mut t = 0.0;
    loop {
        let state = f.state();
        let alt = state.position.norm() - env.re;
        if alt < s.min_altitude_km {
            return Err(Error::AltitudeFloor {
                altitude_km: alt,
                t: f.epoch,
            });
        }
        if f.y[6] < s.mass_floor {
            return Err(Error::MassFloor {
                mass: f.y[6],
                t: f.epoch,
            });
        }
        let osc = cartesian_to_elements(&state, env).map_err(|_| Error::Integrator {
            t: f.epoch,
            reason: "orbit became degenerate",
        })?;
        let theta = osc.arg_latitude();
        let sun = sun_direction(f.epoch);
        if let Some(c) = eclipse_center_arglat(&osc, f.epoch, env) {
            f.anchor = Some(c);
        }
        let mut eta = duty_throttle(theta, f.anchor, dr);
        if eta > 0.0
            && in_shadow(&state.position, &sun, env.re)
            && sunlit_fraction(osc.a, osc.i, osc.raan, f.epoch, env) < dr
        {
            eta = 0.0;
        }

        let target = target_of(&cfg.reference, t);
        let targeted = targeted_elements(cfg.law, &cfg.weights);
        let mut mean_el = None;
        let (control, direction) = if closed {
            let el = law_elements(&osc, env);
            mean_el = Some(el);
            let gate = match cfg.segment {
                SegmentKind::Thrust => true,
                SegmentKind::Drift => {
                    deadband = drift_deadband(&el, &target, deadband, &s.deadband, targeted);
                    deadband == ThrottleState::On
                }
            };
            let d = guidance_direction(cfg.law, &el, &target, &cfg.weights, env);
            if gate && d.active && eta > 0.0 {
                (Control::Steer(d.u), d.u)
            } else {
                (Control::Coast, Vec3::ZERO)
            }
        } else {
            match cfg.segment {
                SegmentKind::Thrust if eta > 0.0 => {
                    let beta = cfg.reference.at(t).beta;
                    // β carries the sign of the plane change
                    let u = Vec3::new(0.0, beta.cos(), beta.sin() * sign(theta.cos()));
                    (Control::Steer(u), u)
                }
                SegmentKind::Thrust => (Control::Coast, Vec3::ZERO),
                SegmentKind::Drift if eta > 0.0 => (
                    Control::DragCompensation(eta / dr),
                    Vec3::new(0.0, 1.0, 0.0),
                ),
                SegmentKind::Drift => (Control::Coast, Vec3::ZERO),
            }
        };
        let throttle = match control {
            Control::Coast => 0.0,
            _ => eta,
        };

        if f.epoch >= f.next_log || t >= t_end {
            let mean = mean_el.unwrap_or_else(|| law_elements(&osc, env));
            f.samples.push(LogSample {
                epoch: f.epoch,
                osculating: osc,
                mean,
                mass: f.y[6],
                dv: f.y[7],
                throttle,
                law_value: law_scalar(cfg.law, &mean, &target, &cfg.weights, env),
                direction,
            });
            f.next_log = f.epoch + s.log_interval;
        }

        if t >= t_end {
            break;
        }
        let dt = s.control_step.min(t_end - t);
        let (y, h, n) = integrate(
            &mut |_, y: &[f64; 8]| dynamics.derivative(y, control),
            0.0,
            f.y,
            dt,
            f.h.min(dt),
            &tol,
        )
        .map_err(|e| Error::Integrator {
            t: f.epoch,
            reason: e.reason(),
        })?;
        f.y = y;
        f.h = h;
        f.evaluations += n;
        if throttle > 0.0 {
            f.thrust_time += dt;
        }
        // accumulate from the segment start to avoid drift in long sums
        t = if t_end - (t + dt) < 1e-9 {
            t_end
        } else {
            t + dt
        };
        f.epoch = epoch0 + t;
    }
    Ok(())
}

/// Flies consecutive reference segments from an osculating state. Terminal
/// errors are measured against the end of the last segment.
pub fn fly_segments(
    start: &CartesianState,
    mass: f64,
    segments: &[PropagationConfig],
    sc: &SpacecraftConfig,
    env: &Environment,
) -> Result<TrajectoryLog> {
    let Some(last) = segments.last() else {
        return Err(Error::invalid("no segments to fly"));
    };
    for s in segments {
        s.settings.validate()?;
        if s.reference.is_empty() {
            return Err(Error::invalid("empty reference profile"));
        }
    }
    let mut f = Flight {
        y: [
            start.position.0[0],
            start.position.0[1],
            start.position.0[2],
            start.velocity.0[0],
            start.velocity.0[1],
            start.velocity.0[2],
            mass,
            0.0,
        ],
        epoch: start.epoch,
        h: 10.0,
        anchor: None,
        samples: Vec::new(),
        next_log: f64::NEG_INFINITY,
        thrust_time: 0.0,
        evaluations: 0,
    };
    let t0 = start.epoch;
    for (k, cfg) in segments.iter().enumerate() {
        // the final sample of one segment is the first of the next
        if k > 0 {
            f.next_log = f64::NEG_INFINITY;
            f.samples.pop();
        }
        f.epoch = cfg.reference.epoch0;
        fly_segment(&mut f, cfg, sc, env)?;
    }
    // the loop always logs at the final epoch of the last segment
    let end = f
        .samples
        .last()
        .copied()
        .ok_or_else(|| Error::invalid("empty flight"))?;
    let reference_end = last.reference.last();
    let terminal = TerminalErrors {
        da_km: (end.mean.a - reference_end.a).abs(),
        di_deg: (end.mean.i - reference_end.i).abs().to_degrees(),
        draan_deg: minor_arc(end.mean.raan - reference_end.raan).to_degrees(),
    };
    let final_state = f.state();
    Ok(TrajectoryLog {
        samples: f.samples,
        terminal,
        dv: f.y[7],
        initial_mass: mass,
        final_mass: f.y[6],
        final_state,
        thrust_time: f.thrust_time,
        duration: f.epoch - t0,
        derivative_evaluations: f.evaluations,
    })
}

/// Guided (or open-loop) flight of one reference segment from osculating
/// elements; the start mass is `sc.wet_mass`.
pub fn propagate_leg(
    start: &ClassicalElements,
    cfg: &PropagationConfig,
    sc: &SpacecraftConfig,
    env: &Environment,
) -> Result<TrajectoryLog> {
    let s = elements_to_cartesian(start, env);
    fly_segments(&s, sc.wet_mass, core::slice::from_ref(cfg), sc, env)
}

/// Open-loop flight of the reference: yaw-profile thrust on transfers,
/// duty-scaled drag cancellation on drift orbits.
pub fn forward_propagate_pmdt(
    start: &ClassicalElements,
    reference: &TransferProfile,
    segment: SegmentKind,
    settings: &PropagatorSettings,
    sc: &SpacecraftConfig,
    env: &Environment,
) -> Result<TrajectoryLog> {
    let cfg = PropagationConfig {
        law: GuidanceLaw::OpenLoop,
        weights: GuidanceWeights::default(),
        reference: reference.clone(),
        segment,
        settings: *settings,
    };
    propagate_leg(start, &cfg, sc, env)
}

/// Two-sample reference for a constant drift orbit.
pub fn drift_reference(d: &DriftSegment) -> TransferProfile {
    let duration = d.duration.max(0.0);
    TransferProfile {
        epoch0: d.start_epoch,
        t: alloc::vec![0.0, duration.max(1e-9)],
        a: alloc::vec![d.a, d.a],
        i: alloc::vec![d.i, d.i],
        raan: alloc::vec![d.raan_start, d.raan_start + d.raan_rate * duration],
        dv_cum: alloc::vec![0.0, d.dv],
        mass: alloc::vec![d.mass_start, d.mass_end],
        beta: alloc::vec![0.0, 0.0],
        throttle: alloc::vec![0.0, 0.0],
        tof: duration,
        dv_total: d.dv,
        tracks_mass: true,
        restarts: 0,
    }
}

#[cfg(test)]
mod tests;
