//! Flying an assembled tour leg by leg.
//!
//! Every leg starts from its own reference start (circular mean state at
//! argument of latitude 0, reference mass), so legs are independent and can
//! be flown in any order. Proximity dwells are not flown.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{
    drift_reference, fly_segments, reference_start, PropagationConfig, PropagatorSettings,
    SegmentKind, TerminalErrors, TrajectoryLog,
};
use crate::astro::Environment;
use crate::guidance::{GuidanceLaw, LegClass, WeightTable};
use crate::tour::{Leg, LegKind, Phase, TourSolution};
use crate::Result;

/// Weight class of a leg; `None` for legs that are not flown.
pub fn leg_class(kind: LegKind) -> Option<LegClass> {
    match kind {
        LegKind::Deorbit | LegKind::Handover => Some(LegClass::Down),
        LegKind::Rendezvous => Some(LegClass::Up),
        LegKind::Proximity => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegFlight {
    pub label: String,
    pub kind: LegKind,
    pub class: LegClass,
    pub errors: TerminalErrors,
    /// km/s flown
    pub dv: f64,
    /// kg
    pub fuel: f64,
    /// km/s planned
    pub reference_dv: f64,
    /// kg planned
    pub reference_fuel: f64,
    pub log: TrajectoryLog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourFlight {
    pub law: GuidanceLaw,
    pub legs: Vec<LegFlight>,
}

impl TourFlight {
    /// Sum over the movement legs.
    pub fn total_errors(&self) -> TerminalErrors {
        self.movement_legs()
            .fold(TerminalErrors::default(), |s, l| s + l.errors)
    }

    pub fn fuel(&self) -> f64 {
        self.legs.iter().map(|l| l.fuel).sum()
    }

    pub fn reference_fuel(&self) -> f64 {
        self.legs.iter().map(|l| l.reference_fuel).sum()
    }

    pub fn dv(&self) -> f64 {
        self.legs.iter().map(|l| l.dv).sum()
    }

    /// Movement legs only (the per-leg error table).
    pub fn movement_legs(&self) -> impl Iterator<Item = &LegFlight> {
        self.legs.iter().filter(|l| l.kind != LegKind::Handover)
    }
}

/// Segment configurations of one leg.
pub fn leg_segments(
    leg: &Leg,
    law: GuidanceLaw,
    weights: &WeightTable,
    settings: &PropagatorSettings,
) -> Option<Vec<PropagationConfig>> {
    let class = leg_class(leg.kind)?;
    if leg.phases.is_empty() {
        return None;
    }
    Some(
        leg.phases
            .iter()
            .map(|p| {
                let (reference, segment) = match p {
                    Phase::Thrust(t) => (t.clone(), SegmentKind::Thrust),
                    Phase::Drift(d) => (drift_reference(d), SegmentKind::Drift),
                };
                PropagationConfig {
                    law,
                    weights: *weights.get(class),
                    reference,
                    segment,
                    settings: *settings,
                }
            })
            .collect(),
    )
}

/// Flies one leg; `None` for legs without flyable phases.
pub fn fly_leg(
    leg: &Leg,
    law: GuidanceLaw,
    weights: &WeightTable,
    settings: &PropagatorSettings,
    env: &Environment,
) -> Option<Result<LegFlight>> {
    let segments = leg_segments(leg, law, weights, settings)?;
    let class = leg_class(leg.kind)?;
    let start = reference_start(&segments[0].reference, 0.0, env);
    let result =
        fly_segments(&start, leg.vehicle.wet_mass, &segments, &leg.vehicle, env).map(|log| {
            LegFlight {
                label: leg.label.clone(),
                kind: leg.kind,
                class,
                errors: log.terminal,
                dv: log.dv,
                fuel: log.fuel(),
                reference_dv: leg.dv,
                reference_fuel: leg.vehicle.wet_mass - leg.mass_end,
                log,
            }
        });
    Some(result)
}

/// Sequential flight of every flyable leg.
pub fn fly_tour(
    solution: &TourSolution,
    law: GuidanceLaw,
    weights: &WeightTable,
    settings: &PropagatorSettings,
    env: &Environment,
) -> Result<TourFlight> {
    let legs = solution
        .legs
        .iter()
        .filter_map(|leg| fly_leg(leg, law, weights, settings, env))
        .collect::<Result<Vec<_>>>()?;
    Ok(TourFlight { law, legs })
}
