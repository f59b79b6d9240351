//! Particle-swarm tuning of guidance weights in simplified dynamics.
//!
//! The simplified model propagates circular mean elements `(a, i, Ω, m)`
//! with secular J2 and mean drag decay, without osculating/mean conversion.
//! The control is orbit-averaged: the law is sampled at evenly spaced
//! arguments of latitude and the resulting Gauss rates are averaged, which
//! lets a step span several orbits.
//!
//! Flown with first-order J2 and uniformly scaled thrust the reference is an
//! exact solution of this model, so every weight set tracks it and the
//! fitness cannot tell them apart. Two effects of the full dynamics are
//! therefore available (and on by default): the second-order secular nodal
//! drift, and the duty windows placed from the sun geometry instead of a
//! uniform thrust factor.
//!
//! Drift segments start with the deadband on. In the full propagator noise
//! and decay eventually switch it on anyway, and some weight sets (a large
//! RAAN weight under duty windows pumps inclination, which J2 turns into
//! more RAAN error) then never settle. Starting on exposes them. A weight set
//! that settles by thrusting through the whole drift is caught by the
//! propellant-overrun term of the fitness.
//!
//! Downward and upward legs are tuned by separate swarms (their fitness
//! terms share no weights), each over the law's five free parameters.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::astro::{
    drag_decay_rate, eclipse_center_arglat, j2_raan_rate, ClassicalElements, Environment,
    SpacecraftConfig,
};
use crate::edelbaum::TransferProfile;
use crate::guidance::{
    guidance_direction, gve_matrix, targeted_elements, DvLawWeights, GuidanceLaw, GuidanceWeights,
    LegClass, QLawWeights, RuggieroWeights, TargetState, WeightTable,
};
use crate::math::{minor_arc, wrap_two_pi, Float};
use crate::propagator::{
    drift_deadband, drift_reference, leg_class, DeadbandThresholds, SegmentKind, TerminalErrors,
    ThrottleState,
};
use crate::tour::{Phase, TourSolution};
use crate::{Error, Result};

/// Free parameters per leg class.
pub const BLOCK: usize = 5;

/// Fitness assigned to legs whose simplified propagation fails.
pub const FAILED_FITNESS: f64 = 1e6;

/// Which of the five block entries are fixed at zero for `law`.
pub fn pinned(law: GuidanceLaw) -> [bool; BLOCK] {
    match law {
        GuidanceLaw::Ruggiero | GuidanceLaw::Qlaw => [false, true, false, false, true],
        GuidanceLaw::Dvlaw | GuidanceLaw::OpenLoop => [false; BLOCK],
    }
}

/// Block layout: Ruggiero and Q-Law `[W_a, W_e, W_i, W_Ω, –]`, Δv-Law
/// `[λ_e1, λ_e2, λ_ai, λ_ei, λ_aΩ]` (λ_ω = 0).
pub fn decode(law: GuidanceLaw, x: &[f64]) -> GuidanceWeights {
    let mut w = GuidanceWeights::default();
    match law {
        GuidanceLaw::Ruggiero => {
            w.ruggiero = RuggieroWeights {
                w: [x[0], 0.0, x[2], x[3]],
                ..Default::default()
            }
        }
        GuidanceLaw::Qlaw => {
            w.qlaw = QLawWeights {
                w: [x[0], 0.0, x[2], x[3]],
                ..Default::default()
            }
        }
        GuidanceLaw::Dvlaw => {
            w.dvlaw = DvLawWeights {
                lambda_e1: x[0],
                lambda_e2: x[1],
                lambda_ai: x[2],
                lambda_ei: x[3],
                lambda_araan: x[4],
                lambda_omega: 0.0,
            }
        }
        GuidanceLaw::OpenLoop => {}
    }
    w
}

pub fn encode(law: GuidanceLaw, w: &GuidanceWeights) -> [f64; BLOCK] {
    match law {
        GuidanceLaw::Ruggiero => {
            let r = w.ruggiero.w;
            [r[0], 0.0, r[2], r[3], 0.0]
        }
        GuidanceLaw::Qlaw => {
            let q = w.qlaw.w;
            [q[0], 0.0, q[2], q[3], 0.0]
        }
        GuidanceLaw::Dvlaw => {
            let d = w.dvlaw;
            [
                d.lambda_e1,
                d.lambda_e2,
                d.lambda_ai,
                d.lambda_ei,
                d.lambda_araan,
            ]
        }
        GuidanceLaw::OpenLoop => [0.0; BLOCK],
    }
}

/// The all-ones baseline in the law's layout.
pub fn unit_block(law: GuidanceLaw) -> [f64; BLOCK] {
    let p = pinned(law);
    core::array::from_fn(|k| if p[k] { 0.0 } else { 1.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplifiedSettings {
    /// s per integration step
    pub step: f64,
    /// arguments of latitude sampled per orbit average
    pub samples: usize,
    /// thrust scale emulating the duty cycle when `duty_windows` is off
    pub thrust_factor: f64,
    /// gate each sampled arc by the duty windows around the eclipse centre
    pub duty_windows: bool,
    /// add the second-order J2 secular nodal rate
    pub second_order_nodal: bool,
    /// start every drift with the deadband on, so weights must settle errors
    /// to the switch-off thresholds rather than merely avoid triggering them
    pub drift_starts_on: bool,
    pub deadband: DeadbandThresholds,
    pub min_altitude_km: f64,
    /// error scales of the fitness: km, rad, rad
    pub scales: [f64; 3],
    /// relative propellant overrun tolerated per leg before it is penalized
    pub fuel_overrun_allowance: f64,
    /// further relative overrun costing one unit of fitness; 0 disables
    pub fuel_overrun_scale: f64,
}

impl Default for SimplifiedSettings {
    fn default() -> Self {
        SimplifiedSettings {
            step: 3.0 * 3600.0,
            samples: 8,
            thrust_factor: 0.5,
            duty_windows: true,
            second_order_nodal: true,
            drift_starts_on: true,
            deadband: DeadbandThresholds::default(),
            min_altitude_km: 150.0,
            scales: [20.0, 0.1f64.to_radians(), 1f64.to_radians()],
            fuel_overrun_allowance: 0.25,
            fuel_overrun_scale: 0.05,
        }
    }
}

/// One flown leg reduced to what the simplified model needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegReference {
    pub label: alloc::string::String,
    pub class: LegClass,
    pub vehicle: SpacecraftConfig,
    pub segments: Vec<(SegmentKind, TransferProfile)>,
}

impl LegReference {
    pub fn from_solution(solution: &TourSolution) -> Vec<LegReference> {
        solution
            .legs
            .iter()
            .filter_map(|leg| {
                let class = leg_class(leg.kind)?;
                if leg.phases.is_empty() {
                    return None;
                }
                let segments = leg
                    .phases
                    .iter()
                    .map(|p| match p {
                        Phase::Thrust(t) => (SegmentKind::Thrust, t.clone()),
                        Phase::Drift(d) => (SegmentKind::Drift, drift_reference(d)),
                    })
                    .collect();
                Some(LegReference {
                    label: leg.label.clone(),
                    class,
                    vehicle: leg.vehicle,
                    segments,
                })
            })
            .collect()
    }
}

/// Relative second-order correction of the secular nodal rate of a
/// circular orbit, `g (c₀ + c₁ sin²i)` with `g = J2 (R/a)²`, for the mean
/// elements of [`crate::astro::osculating_to_mean`]. The coefficients are
/// fitted to long numerical propagations under J2.
pub fn nodal_rate_correction(a: f64, i: f64, env: &Environment) -> f64 {
    const C0: f64 = 3.77;
    const C1: f64 = -4.78;
    let g = env.j2 * (env.re / a) * (env.re / a);
    let s = i.sin();
    g * (C0 + C1 * s * s)
}

/// Fraction of the arc `[u0, u1]` outside the duty windows (half-width
/// `half` around `c` and `c + π`).
fn window_on_fraction(u0: f64, u1: f64, c: f64, half: f64) -> f64 {
    let mut off = 0.0;
    for centre in [c, c + core::f64::consts::PI] {
        for n in -2..=2 {
            let m = centre + TAU * n as f64;
            let lo = (m - half).max(u0);
            let hi = (m + half).min(u1);
            off += (hi - lo).max(0.0);
        }
    }
    1.0 - off / (u1 - u0)
}

/// Terminal errors of one leg flown in the simplified model.
pub fn simplified_leg_errors(
    weights: &GuidanceWeights,
    leg: &LegReference,
    law: GuidanceLaw,
    settings: &SimplifiedSettings,
    env: &Environment,
) -> Result<TerminalErrors> {
    fly_simplified(weights, leg, law, settings, env).map(|(e, _)| e)
}

/// Propellant the reference spends on a leg, by the rocket equation.
pub fn reference_fuel(leg: &LegReference, env: &Environment) -> f64 {
    let dv: f64 = leg.segments.iter().map(|(_, p)| p.dv_total).sum();
    leg.vehicle.wet_mass * (1.0 - (-dv / leg.vehicle.exhaust_velocity(env)).exp())
}

/// Terminal errors and propellant used.
fn fly_simplified(
    weights: &GuidanceWeights,
    leg: &LegReference,
    law: GuidanceLaw,
    settings: &SimplifiedSettings,
    env: &Environment,
) -> Result<(TerminalErrors, f64)> {
    let first = &leg
        .segments
        .first()
        .ok_or_else(|| Error::invalid("leg without segments"))?
        .1;
    let s0 = first.first();
    let sc = &leg.vehicle;
    let exhaust = sc.exhaust_velocity(env);
    let drag = !env.atmosphere.is_vacuum() && sc.frontal_area > 0.0;
    // [a, i, Ω, m]
    let mut x = [s0.a, s0.i, s0.raan, sc.wet_mass];
    let k = settings.samples.max(1);
    let half = core::f64::consts::PI * (1.0 - sc.duty_ratio) / 2.0;
    // the last eclipse centre stays in force through full-sun stretches
    let mut anchor = 0.0;

    let mut rates =
        |x: &[f64; 4], target: &TargetState, gate: bool, epoch: f64| -> Result<[f64; 4]> {
            let (a, i, m) = (x[0], x[1], x[3]);
            let mut nodal = j2_raan_rate(a, 0.0, i, env);
            if settings.second_order_nodal {
                nodal *= 1.0 + nodal_rate_correction(a, i, env);
            }
            let mut d = [0.0, 0.0, nodal, 0.0];
            if drag {
                d[0] -= drag_decay_rate(a, m, sc, env)?;
            }
            if gate {
                let raan = wrap_two_pi(x[2]);
                let (scale, centre) = if settings.duty_windows {
                    let el = ClassicalElements::circular(a, i, raan, 0.0, epoch);
                    if let Some(c) = eclipse_center_arglat(&el, epoch, env) {
                        anchor = c;
                    }
                    (1.0, Some(anchor))
                } else {
                    (settings.thrust_factor, None)
                };
                let f = scale * sc.thrust_accel(m);
                let mut on = 0.0;
                for j in 0..k {
                    let u = TAU * (j as f64 + 0.5) / k as f64;
                    let duty = match centre {
                        Some(c) => window_on_fraction(
                            u - TAU / (2 * k) as f64,
                            u + TAU / (2 * k) as f64,
                            c,
                            half,
                        ),
                        None => 1.0,
                    };
                    if duty <= 0.0 {
                        continue;
                    }
                    let el = ClassicalElements::circular(a, i, raan, u, 0.0);
                    let dir = guidance_direction(law, &el, target, weights, env);
                    if !dir.active {
                        continue;
                    }
                    let w = duty / k as f64;
                    let r = gve_matrix(&el, env).rates(dir.u * f);
                    d[0] += r[0] * w;
                    d[1] += r[2] * w;
                    d[2] += r[3] * w;
                    on += w;
                }
                d[3] = -on * f * m / exhaust;
            }
            Ok(d)
        };

    let targeted = targeted_elements(law, weights);
    for (kind, profile) in &leg.segments {
        let mut t = 0.0;
        let mut deadband = if settings.drift_starts_on {
            ThrottleState::On
        } else {
            ThrottleState::Off
        };
        while t < profile.tof {
            if x[0] - env.re < settings.min_altitude_km {
                return Err(Error::AltitudeFloor {
                    altitude_km: x[0] - env.re,
                    t: profile.epoch0 + t,
                });
            }
            let h = settings.step.min(profile.tof - t);
            let target_at = |t: f64| {
                let s = profile.at(t);
                TargetState {
                    a: s.a,
                    e: 0.0,
                    i: s.i,
                    raan: s.raan,
                }
            };
            let t0 = target_at(t);
            let gate = match kind {
                SegmentKind::Thrust => true,
                SegmentKind::Drift => {
                    let el = ClassicalElements::circular(x[0], x[1], x[2], 0.0, 0.0);
                    deadband = drift_deadband(&el, &t0, deadband, &settings.deadband, targeted);
                    deadband == ThrottleState::On
                }
            };
            let epoch = profile.epoch0 + t;
            let k1 = rates(&x, &t0, gate, epoch)?;
            let xp: [f64; 4] = core::array::from_fn(|n| x[n] + h * k1[n]);
            let k2 = rates(&xp, &target_at(t + h), gate, epoch + h)?;
            for n in 0..4 {
                x[n] += 0.5 * h * (k1[n] + k2[n]);
            }
            t += h;
        }
    }
    let end = leg.segments.last().map(|s| s.1.last()).unwrap_or(s0);
    let errors = TerminalErrors {
        da_km: (x[0] - end.a).abs(),
        di_deg: (x[1] - end.i).abs().to_degrees(),
        draan_deg: minor_arc(x[2] - end.raan).to_degrees(),
    };
    Ok((errors, sc.wet_mass - x[3]))
}

/// Scaled terminal error `|Δa|/a_s + |Δi|/i_s + |ΔΩ|/Ω_s`, plus the
/// propellant overrun beyond the reference and its allowance, in units of
/// `fuel_overrun_scale`;
/// failures score [`FAILED_FITNESS`].
pub fn simplified_leg_fitness(
    weights: &GuidanceWeights,
    leg: &LegReference,
    law: GuidanceLaw,
    settings: &SimplifiedSettings,
    env: &Environment,
) -> f64 {
    match fly_simplified(weights, leg, law, settings, env) {
        Ok((e, fuel)) => {
            let s = settings.scales;
            let tracking =
                e.da_km / s[0] + e.di_deg.to_radians() / s[1] + e.draan_deg.to_radians() / s[2];
            let reference = reference_fuel(leg, env);
            let overrun = if settings.fuel_overrun_scale > 0.0 && reference > 0.0 {
                (fuel / reference - 1.0 - settings.fuel_overrun_allowance).max(0.0)
                    / settings.fuel_overrun_scale
            } else {
                0.0
            };
            tracking + overrun
        }
        Err(_) => FAILED_FITNESS,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningProblem {
    pub law: GuidanceLaw,
    pub legs: Vec<LegReference>,
    pub settings: SimplifiedSettings,
    /// starting particle per class; defaults to all ones
    pub initial: Option<WeightTable>,
}

impl TuningProblem {
    pub fn new(law: GuidanceLaw, solution: &TourSolution) -> Self {
        TuningProblem {
            law,
            legs: LegReference::from_solution(solution),
            settings: SimplifiedSettings::default(),
            initial: None,
        }
    }

    /// Fitness of one block on the legs of `class`.
    pub fn class_fitness(&self, class: LegClass, x: &[f64], env: &Environment) -> f64 {
        let w = decode(self.law, x);
        self.legs
            .iter()
            .filter(|l| l.class == class)
            .map(|l| simplified_leg_fitness(&w, l, self.law, &self.settings, env))
            .sum()
    }

    pub fn table_fitness(&self, table: &WeightTable, env: &Environment) -> f64 {
        [LegClass::Down, LegClass::Up]
            .iter()
            .map(|&c| self.class_fitness(c, &encode(self.law, table.get(c)), env))
            .sum()
    }

    fn initial_block(&self, class: LegClass) -> [f64; BLOCK] {
        match &self.initial {
            Some(t) => encode(self.law, t.get(class)),
            None => unit_block(self.law),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoOptions {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// fraction of the [0, 1] range
    pub velocity_clamp: f64,
    pub seed: u64,
}

impl Default for PsoOptions {
    fn default() -> Self {
        PsoOptions {
            swarm_size: 50,
            iterations: 40,
            inertia: 0.72,
            cognitive: 1.49,
            social: 1.49,
            velocity_clamp: 0.5,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmResult {
    pub best: Vec<f64>,
    pub best_fitness: f64,
    /// global best after initialization and after each iteration
    pub history: Vec<f64>,
    pub evaluations: usize,
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Global-best PSO on the unit box. `evaluate` scores a batch of positions
/// (so callers can parallelize); the reduction is order-independent with
/// ties going to the lowest particle index.
pub fn particle_swarm(
    x0: &[f64],
    pinned: &[bool],
    opts: &PsoOptions,
    evaluate: &mut dyn FnMut(&[Vec<f64>]) -> Vec<f64>,
) -> SwarmResult {
    let dim = x0.len();
    let n = opts.swarm_size.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let clamp_pin = |x: &mut Vec<f64>| {
        for (v, &p) in x.iter_mut().zip(pinned) {
            *v = if p { 0.0 } else { v.max(0.0).min(1.0) };
        }
    };
    let mut pos: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut x: Vec<f64> = if k == 0 {
                x0.to_vec()
            } else {
                (0..dim).map(|_| uniform(&mut rng)).collect()
            };
            clamp_pin(&mut x);
            x
        })
        .collect();
    let mut vel = alloc::vec![alloc::vec![0.0; dim]; n];
    let mut fit = evaluate(&pos);
    let mut evaluations = n;
    let mut pbest = pos.clone();
    let mut pfit = fit.clone();
    let argmin = |f: &[f64]| {
        let mut b = 0;
        for k in 1..f.len() {
            if f[k] < f[b] {
                b = k;
            }
        }
        b
    };
    let g = argmin(&pfit);
    let mut gbest = pbest[g].clone();
    let mut gfit = pfit[g];
    let mut history = alloc::vec![gfit];
    let vmax = opts.velocity_clamp;

    for _ in 0..opts.iterations {
        for k in 0..n {
            for d in 0..dim {
                let (r1, r2) = (uniform(&mut rng), uniform(&mut rng));
                if pinned[d] {
                    continue;
                }
                let v = opts.inertia * vel[k][d]
                    + opts.cognitive * r1 * (pbest[k][d] - pos[k][d])
                    + opts.social * r2 * (gbest[d] - pos[k][d]);
                vel[k][d] = v.max(-vmax).min(vmax);
                pos[k][d] += vel[k][d];
                // absorbing walls
                if pos[k][d] < 0.0 || pos[k][d] > 1.0 {
                    vel[k][d] = 0.0;
                }
            }
            clamp_pin(&mut pos[k]);
        }
        fit = evaluate(&pos);
        evaluations += n;
        for k in 0..n {
            if fit[k] < pfit[k] {
                pfit[k] = fit[k];
                pbest[k] = pos[k].clone();
            }
        }
        let g = argmin(&pfit);
        if pfit[g] < gfit {
            gfit = pfit[g];
            gbest = pbest[g].clone();
        }
        history.push(gfit);
    }
    SwarmResult {
        best: gbest,
        best_fitness: gfit,
        history,
        evaluations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningResult {
    pub table: WeightTable,
    pub down: SwarmResult,
    pub up: SwarmResult,
}

/// Tunes both leg classes with a caller-supplied batch evaluator
/// `(class, positions) -> fitness`.
pub fn tune_weights_with(
    problem: &TuningProblem,
    opts: &PsoOptions,
    evaluate: &mut dyn FnMut(LegClass, &[Vec<f64>]) -> Vec<f64>,
) -> TuningResult {
    let pin = pinned(problem.law);
    let mut run = |class: LegClass, seed: u64| {
        let o = PsoOptions { seed, ..*opts };
        particle_swarm(&problem.initial_block(class), &pin, &o, &mut |batch| {
            evaluate(class, batch)
        })
    };
    let down = run(LegClass::Down, opts.seed);
    let up = run(LegClass::Up, opts.seed.wrapping_add(0x9E37_79B9_7F4A_7C15));
    let table = WeightTable {
        down: decode(problem.law, &down.best),
        up: decode(problem.law, &up.best),
    };
    TuningResult { table, down, up }
}

/// Sequential tuning.
pub fn tune_weights(problem: &TuningProblem, opts: &PsoOptions, env: &Environment) -> TuningResult {
    tune_weights_with(problem, opts, &mut |class, batch| {
        batch
            .iter()
            .map(|x| problem.class_fitness(class, x, env))
            .collect()
    })
}
