//! Multi-debris tour assembly and optimization over the drift orbits.
//!
//! The servicer starts attached to the first debris at launch. For each
//! debris it flies (except for the first) a RAAN-matching rendezvous, spends
//! the proximity dwell, lowers the composite to the shepherd altitude and
//! holds there for the handover dwell.

mod search;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::astro::{
    drag_decay_rate, j2_raan_rate, ClassicalElements, Environment, SpacecraftConfig,
};
use crate::edelbaum::{extended_edelbaum, EdelbaumBoundary, EdelbaumOptions, TransferProfile};
use crate::math::{wrap_two_pi, Float};
use crate::raan_match::{drift_station_keeping_dv, raan_matching_transfer, DriftOrbit};
use crate::{Error, Result};

pub use search::{
    local_search, multistart_seeds, optimize_tour, select_best, LocalResult, SearchOptions,
};

pub const DAY: f64 = 86_400.0;

/// A debris object and the properties that matter once it is attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebrisTarget {
    pub name: String,
    /// Mean circular orbit at `elements.epoch`.
    pub elements: ClassicalElements,
    /// kg
    pub mass: f64,
    /// m²
    pub area: f64,
    pub drag_coefficient: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// minimize Δv subject to TOF ≤ bound
    Fuel,
    /// minimize TOF subject to Δv ≤ bound
    Time,
}

/// Box on the drift-orbit variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftBounds {
    pub altitude_min_km: f64,
    pub altitude_max_km: f64,
    pub inclination_min: f64,
    pub inclination_max: f64,
}

impl Default for DriftBounds {
    fn default() -> Self {
        DriftBounds {
            altitude_min_km: 300.0,
            altitude_max_km: 1200.0,
            inclination_min: 95f64.to_radians(),
            inclination_max: 102f64.to_radians(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourDefinition {
    pub debris: Vec<DebrisTarget>,
    pub shepherd_altitude_km: f64,
    /// s
    pub handover_dwell: f64,
    /// s
    pub proximity_dwell: f64,
    /// s since J2000
    pub launch_epoch: f64,
    /// Servicer alone; `wet_mass` is the launch mass.
    pub sc: SpacecraftConfig,
    pub objective: Objective,
    /// s, used when the objective is fuel
    pub tof_max: f64,
    /// km/s, used when the objective is time
    pub dv_max: f64,
    pub bounds: DriftBounds,
    /// When set, the last entry of the design vector is a launch delay in
    /// [0, window] seconds.
    pub launch_window: Option<f64>,
    pub edelbaum: EdelbaumOptions,
}

impl TourDefinition {
    pub fn rendezvous_count(&self) -> usize {
        self.debris.len().saturating_sub(1)
    }

    pub fn dimension(&self) -> usize {
        2 * self.rendezvous_count() + usize::from(self.launch_window.is_some())
    }

    /// Lower and upper bounds of the design vector in physical units
    /// ([V_d km/s, I_d rad] per rendezvous, then the launch delay).
    pub fn box_bounds(&self, env: &Environment) -> (Vec<f64>, Vec<f64>) {
        let b = &self.bounds;
        let v_lo = env.circular_speed(env.re + b.altitude_max_km);
        let v_hi = env.circular_speed(env.re + b.altitude_min_km);
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for _ in 0..self.rendezvous_count() {
            lo.extend_from_slice(&[v_lo, b.inclination_min]);
            hi.extend_from_slice(&[v_hi, b.inclination_max]);
        }
        if let Some(w) = self.launch_window {
            lo.push(0.0);
            hi.push(w);
        }
        (lo, hi)
    }

    pub fn validate(&self) -> Result<()> {
        if self.debris.is_empty() {
            return Err(Error::invalid("tour needs at least one debris object"));
        }
        if self.handover_dwell < 0.0 || self.proximity_dwell < 0.0 {
            return Err(Error::invalid("dwell times must be non-negative"));
        }
        self.sc.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegKind {
    Deorbit,
    Handover,
    Rendezvous,
    Proximity,
}

/// Constant circular orbit held against drag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftSegment {
    pub a: f64,
    pub i: f64,
    /// unwrapped RAAN at the segment start
    pub raan_start: f64,
    pub raan_rate: f64,
    /// s since J2000
    pub start_epoch: f64,
    pub duration: f64,
    /// km/s
    pub dv: f64,
    pub mass_start: f64,
    pub mass_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Phase {
    Thrust(TransferProfile),
    Drift(DriftSegment),
}

impl Phase {
    pub fn duration(&self) -> f64 {
        match self {
            Phase::Thrust(p) => p.tof,
            Phase::Drift(d) => d.duration,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub kind: LegKind,
    pub label: String,
    pub target: String,
    /// s since J2000
    pub start_epoch: f64,
    /// s
    pub tof: f64,
    /// km/s
    pub dv: f64,
    /// Vehicle flown on this leg; `wet_mass` is the leg's start mass
    /// (servicer plus debris while attached).
    pub vehicle: SpacecraftConfig,
    pub mass_end: f64,
    /// Mean circular state at the end of the leg.
    pub end_state: ClassicalElements,
    pub phases: Vec<Phase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourSolution {
    pub legs: Vec<Leg>,
    pub x: Vec<f64>,
    /// km/s
    pub dv_total: f64,
    /// s
    pub tof_total: f64,
    /// kg of propellant
    pub fuel: f64,
    pub servicer_final_mass: f64,
}

impl TourSolution {
    /// Objective value in report units (m/s or days).
    pub fn objective_value(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Fuel => self.dv_total * 1000.0,
            Objective::Time => self.tof_total / DAY,
        }
    }

    /// Relative violation of the inequality constraint (≤ 0 when feasible).
    pub fn constraint(&self, def: &TourDefinition) -> f64 {
        match def.objective {
            Objective::Fuel => self.tof_total / def.tof_max - 1.0,
            Objective::Time => self.dv_total / def.dv_max - 1.0,
        }
    }
}

/// Debris orbit after ballistic decay and secular J2 precession, in steps
/// of at most one day.
pub fn propagate_debris(
    d: &DebrisTarget,
    epoch: f64,
    env: &Environment,
) -> Result<ClassicalElements> {
    let el = d.elements;
    let span = epoch - el.epoch;
    let ballistic = SpacecraftConfig {
        wet_mass: d.mass,
        max_thrust: 1.0,
        isp: 1.0,
        duty_ratio: 1.0,
        drag_coefficient: d.drag_coefficient,
        frontal_area: d.area,
    };
    let drag = !env.atmosphere.is_vacuum() && d.area > 0.0;
    let steps = (span.abs() / DAY).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut a = el.a;
    let mut raan = el.raan;
    for _ in 0..steps {
        let rate0 = j2_raan_rate(a, 0.0, el.i, env);
        let (a1, rate1) = if drag {
            let k1 = drag_decay_rate(a, d.mass, &ballistic, env)?;
            let pred = a - k1 * h;
            let k2 = drag_decay_rate(pred, d.mass, &ballistic, env)?;
            let a1 = a - 0.5 * (k1 + k2) * h;
            (a1, j2_raan_rate(a1, 0.0, el.i, env))
        } else {
            (a, rate0)
        };
        raan += 0.5 * (rate0 + rate1) * h;
        a = a1;
    }
    Ok(ClassicalElements {
        a,
        raan: wrap_two_pi(raan),
        epoch,
        ..el
    })
}

fn drift_leg(
    label: String,
    target: &str,
    kind: LegKind,
    state: &ClassicalElements,
    duration: f64,
    vehicle: SpacecraftConfig,
    env: &Environment,
) -> Result<Leg> {
    let orbit = DriftOrbit::from_radius(state.a, state.i, env);
    let dv = if duration > 0.0 && kind == LegKind::Handover {
        drift_station_keeping_dv(&orbit, duration, &vehicle, env)?
    } else {
        0.0
    };
    let mass_end = vehicle.wet_mass * (-dv / vehicle.exhaust_velocity(env)).exp();
    let rate = j2_raan_rate(state.a, 0.0, state.i, env);
    let seg = DriftSegment {
        a: state.a,
        i: state.i,
        raan_start: state.raan,
        raan_rate: rate,
        start_epoch: state.epoch,
        duration,
        dv,
        mass_start: vehicle.wet_mass,
        mass_end,
    };
    let end_state = ClassicalElements {
        raan: wrap_two_pi(state.raan + rate * duration),
        epoch: state.epoch + duration,
        ..*state
    };
    let phases = if kind == LegKind::Handover {
        alloc::vec![Phase::Drift(seg)]
    } else {
        Vec::new()
    };
    Ok(Leg {
        kind,
        label,
        target: target.into(),
        start_epoch: state.epoch,
        tof: duration,
        dv,
        vehicle,
        mass_end,
        end_state,
        phases,
    })
}

fn end_of(profile: &TransferProfile, epoch: f64) -> ClassicalElements {
    let s = profile.last();
    ClassicalElements::circular(s.a, s.i, s.raan, 0.0, epoch)
}

/// Assembles the tour for design vector `x` (physical units).
pub fn evaluate_tour(def: &TourDefinition, x: &[f64], env: &Environment) -> Result<TourSolution> {
    def.validate()?;
    if x.len() != def.dimension() {
        return Err(Error::invalid(format!(
            "design vector has {} entries, expected {}",
            x.len(),
            def.dimension()
        )));
    }
    let (lo, hi) = def.box_bounds(env);
    if x.iter()
        .zip(lo.iter().zip(&hi))
        .any(|(v, (l, h))| !(*v >= *l && *v <= *h))
    {
        return Err(Error::invalid("design vector outside its bounds"));
    }

    let shepherd_a = env.re + def.shepherd_altitude_km;
    let launch = def.launch_epoch
        + if def.launch_window.is_some() {
            x[x.len() - 1]
        } else {
            0.0
        };
    let mut t = launch;
    let mut m = def.sc.wet_mass;
    let mut legs = Vec::new();
    let mut servicer: Option<ClassicalElements> = None;
    let mut leg_no = 0;

    for (k, debris) in def.debris.iter().enumerate() {
        if let Some(state) = servicer {
            leg_no += 1;
            let drift = DriftOrbit {
                v_d: x[2 * (k - 1)],
                i_d: x[2 * (k - 1) + 1],
            };
            let target = propagate_debris(debris, t, env)?;
            let vehicle = def.sc.with_mass(m);
            let r = raan_matching_transfer(&state, &target, &drift, &vehicle, env, &def.edelbaum)?;
            let end_epoch = t + r.tof;
            let end_state = end_of(&r.phase2, end_epoch);
            let seg = DriftSegment {
                a: drift.radius(env),
                i: drift.i_d,
                raan_start: r.drift.raan_start,
                raan_rate: r.drift.raan_rate,
                start_epoch: t + r.drift.start,
                duration: r.drift.duration,
                dv: r.drift.dv_station_keeping,
                mass_start: r.drift.mass_start,
                mass_end: r.drift.mass_end,
            };
            legs.push(Leg {
                kind: LegKind::Rendezvous,
                label: format!(
                    "Leg {leg_no} (from {:.0} km orbit to {})",
                    def.shepherd_altitude_km, debris.name
                ),
                target: debris.name.clone(),
                start_epoch: t,
                tof: r.tof,
                dv: r.dv_total,
                vehicle,
                mass_end: r.final_mass,
                end_state,
                phases: alloc::vec![
                    Phase::Thrust(r.phase1),
                    Phase::Drift(seg),
                    Phase::Thrust(r.phase2)
                ],
            });
            t = end_epoch;
            m = r.final_mass;

            let at_debris = propagate_debris(debris, t, env)?;
            let prox = drift_leg(
                "Proximity Operations".into(),
                &debris.name,
                LegKind::Proximity,
                &at_debris,
                def.proximity_dwell,
                def.sc.with_mass(m),
                env,
            )?;
            t += prox.tof;
            legs.push(prox);
        }

        leg_no += 1;
        let start = propagate_debris(debris, t, env)?;
        let composite = def
            .sc
            .with_payload(debris.mass, debris.area)
            .with_mass(m + debris.mass);
        let b =
            EdelbaumBoundary::between(start.a, start.i, shepherd_a, start.i, start.raan, t, env);
        let p = extended_edelbaum(&b, &composite, env, &def.edelbaum)?;
        let end_epoch = t + p.tof;
        let end_state = end_of(&p, end_epoch);
        let mass_end = p.final_mass();
        legs.push(Leg {
            kind: LegKind::Deorbit,
            label: format!(
                "Leg {leg_no} (from {} to {:.0} km orbit)",
                debris.name, def.shepherd_altitude_km
            ),
            target: debris.name.clone(),
            start_epoch: t,
            tof: p.tof,
            dv: p.dv_total,
            vehicle: composite,
            mass_end,
            end_state,
            phases: alloc::vec![Phase::Thrust(p)],
        });
        t = end_epoch;

        let handover = drift_leg(
            "Handover".into(),
            &debris.name,
            LegKind::Handover,
            &end_state,
            def.handover_dwell,
            composite.with_mass(mass_end),
            env,
        )?;
        m = handover.mass_end - debris.mass;
        if !(m > 0.0) {
            return Err(Error::MassFloor { mass: m, t });
        }
        t += handover.tof;
        servicer = Some(handover.end_state);
        legs.push(handover);
    }

    let dv_total = legs.iter().map(|l| l.dv).sum();
    Ok(TourSolution {
        legs,
        x: x.to_vec(),
        dv_total,
        tof_total: t - launch,
        fuel: def.sc.wet_mass - m,
        servicer_final_mass: m,
    })
}
