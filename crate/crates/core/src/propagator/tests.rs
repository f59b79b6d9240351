use super::*;
use crate::astro::j2_raan_rate;
use crate::edelbaum::{extended_edelbaum, EdelbaumBoundary, EdelbaumOptions};
use crate::guidance::RuggieroWeights;
use core::f64::consts::TAU;

const DAY: f64 = 86_400.0;

fn servicer() -> SpacecraftConfig {
    SpacecraftConfig {
        wet_mass: 800.0,
        max_thrust: 0.06,
        isp: 1300.0,
        duty_ratio: 0.5,
        drag_coefficient: 2.2,
        frontal_area: 2.0,
    }
}

fn drift(a: f64, i: f64, raan: f64, duration: f64, env: &Environment) -> TransferProfile {
    drift_reference(&DriftSegment {
        a,
        i,
        raan_start: raan,
        raan_rate: j2_raan_rate(a, 0.0, i, env),
        start_epoch: 7.0e8,
        duration,
        dv: 0.0,
        mass_start: 800.0,
        mass_end: 800.0,
    })
}

#[test]
fn full_duty_never_throttles() {
    for k in 0..1000 {
        let th = TAU * k as f64 / 1000.0;
        assert_eq!(duty_throttle(th, Some(1.0), 1.0), 1.0);
        assert_eq!(duty_throttle(th, None, 1.0), 1.0);
    }
}

#[test]
fn half_duty_windows() {
    let c = Some(PI);
    assert_eq!(duty_throttle(PI, c, 0.5), 0.0);
    assert_eq!(duty_throttle(0.8 * PI, c, 0.5), 0.0);
    assert_eq!(duty_throttle(0.1, c, 0.5), 0.0);
    assert_eq!(duty_throttle(-0.1, c, 0.5), 0.0);
    assert_eq!(duty_throttle(PI / 2.0, c, 0.5), 1.0);
    assert_eq!(duty_throttle(1.5 * PI, c, 0.5), 1.0);
}

#[test]
fn measured_duty_matches_ratio() {
    for &dr in &[0.3, 0.5, 0.8] {
        for &c in &[0.0, 1.0, 2.5, 5.9] {
            let n = 100_000;
            let on: f64 = (0..n)
                .map(|k| duty_throttle(TAU * (k as f64 + 0.5) / n as f64, Some(c), dr))
                .sum();
            assert!((on / n as f64 - dr).abs() < 1e-4, "dr {dr} c {c}");
        }
    }
}

const ALL: [bool; 3] = [true; 3];

#[test]
fn deadband_hysteresis() {
    let th = DeadbandThresholds::default();
    let r = TargetState {
        a: 7000.0,
        e: 0.0,
        i: 1.7,
        raan: 0.3,
    };
    let el = |da: f64, di_deg: f64, dr_deg: f64| {
        ClassicalElements::circular(
            7000.0 + da,
            1.7 + di_deg.to_radians(),
            0.3 + dr_deg.to_radians(),
            0.0,
            0.0,
        )
    };
    assert_eq!(
        drift_deadband(&el(0.0, 0.0, 0.0), &r, ThrottleState::Off, &th, ALL),
        ThrottleState::Off
    );
    let on = drift_deadband(&el(6.0, 0.0, 0.0), &r, ThrottleState::Off, &th, ALL);
    assert_eq!(on, ThrottleState::On);
    assert_eq!(
        drift_deadband(&el(2.0, 0.0, 0.0), &r, on, &th, ALL),
        ThrottleState::On
    );
    assert_eq!(
        drift_deadband(&el(0.4, 0.005, 0.005), &r, on, &th, ALL),
        ThrottleState::Off
    );
    assert_eq!(
        drift_deadband(&el(2.0, 0.0, 0.0), &r, ThrottleState::Off, &th, ALL),
        ThrottleState::Off
    );
    // an untargeted RAAN error neither switches on nor holds on
    let only_ai = [true, true, false];
    assert_eq!(
        drift_deadband(&el(0.0, 0.0, 0.5), &r, ThrottleState::Off, &th, only_ai),
        ThrottleState::Off
    );
    assert_eq!(
        drift_deadband(&el(0.4, 0.005, 0.5), &r, on, &th, only_ai),
        ThrottleState::Off
    );
    assert_eq!(
        drift_deadband(&el(9.0, 0.0, 0.0), &r, ThrottleState::Off, &th, [false; 3]),
        ThrottleState::Off
    );
    assert!(DeadbandThresholds {
        on: [1.0, 1.0, 1.0],
        off: [1.0, 0.5, 0.5]
    }
    .validate()
    .is_err());
}

#[test]
fn drift_in_vacuum_follows_secular_j2() {
    let env = Environment::vacuum();
    let (a, i) = (6878.137, 97.4f64.to_radians());
    let r = drift(a, i, 1.0, 30.0 * DAY, &env);
    let start = mean_to_osculating(&reference_elements(&r, 0.0, 0.0), &env).0;
    let log = forward_propagate_pmdt(
        &start,
        &r,
        SegmentKind::Drift,
        &PropagatorSettings::default(),
        &servicer(),
        &env,
    )
    .unwrap();
    assert_eq!(log.dv, 0.0);
    let m0 = log.samples[0].mean;
    let m1 = log.final_mean().unwrap();
    assert!((m1.a - m0.a).abs() < 0.1, "{} {}", m0.a, m1.a);
    assert!((m1.i - m0.i).abs() < 1e-4);
    let rate = wrap_pi(m1.raan - m0.raan) / (30.0 * DAY);
    let expected = j2_raan_rate(a, 0.0, i, &env);
    assert!((rate / expected - 1.0).abs() < 0.01, "{rate} {expected}");
    assert!(log.terminal.draan_deg < 0.05);
}

#[test]
fn two_body_energy_is_conserved() {
    let env = Environment {
        j2: 0.0,
        ..Environment::vacuum()
    };
    let a = 7000.0;
    let r = drift(a, 1.0, 0.5, 100.0 * TAU * (a * a * a / env.mu).sqrt(), &env);
    let start = ClassicalElements {
        e: 0.01,
        ..reference_elements(&r, 0.0, 0.0)
    };
    let log = forward_propagate_pmdt(
        &start,
        &r,
        SegmentKind::Drift,
        &PropagatorSettings::default(),
        &servicer(),
        &env,
    )
    .unwrap();
    let energy =
        |s: &CartesianState| 0.5 * s.velocity.dot(&s.velocity) - env.mu / s.position.norm();
    let e0 = energy(&elements_to_cartesian(&start, &env));
    let e1 = energy(&log.final_state);
    // ~10⁴ steps at rtol 1e-10
    assert!(((e1 - e0) / e0).abs() < 1e-7, "{}", (e1 - e0) / e0);
}

fn raise_profile(env: &Environment, sc: &SpacecraftConfig) -> TransferProfile {
    let b = EdelbaumBoundary::between(6778.137, 1.7, 6808.137, 1.7005, 0.4, 7.0e8, env);
    extended_edelbaum(&b, sc, env, &EdelbaumOptions::default()).unwrap()
}

#[test]
fn mass_ledger_matches_rocket_equation() {
    let env = Environment::default();
    let sc = servicer();
    let r = raise_profile(&env, &sc);
    let start = mean_to_osculating(&reference_elements(&r, 0.0, 0.0), &env).0;
    for law in [GuidanceLaw::OpenLoop, GuidanceLaw::Ruggiero] {
        let cfg = PropagationConfig {
            law,
            weights: GuidanceWeights::default(),
            reference: r.clone(),
            segment: SegmentKind::Thrust,
            settings: PropagatorSettings::default(),
        };
        let log = propagate_leg(&start, &cfg, &sc, &env).unwrap();
        let predicted = log.rocket_equation_mass(&sc, &env);
        assert!((log.final_mass - predicted).abs() / log.fuel() < 1e-3);
        assert!(log.samples.windows(2).all(|w| w[1].mass <= w[0].mass));
        // throttled by the duty windows
        assert!(log.thrust_time <= 0.5 * log.duration + 2.0 * 60.0 * (log.duration / 5400.0));
    }
}

#[test]
fn guidance_reaches_raised_orbit() {
    let env = Environment::default();
    let sc = servicer();
    let r = raise_profile(&env, &sc);
    let start = mean_to_osculating(&reference_elements(&r, 0.0, 0.0), &env).0;
    let cfg = PropagationConfig {
        law: GuidanceLaw::Ruggiero,
        weights: GuidanceWeights {
            ruggiero: RuggieroWeights {
                w: [1.0, 0.0, 1.0, 1.0],
                thresholds: [0.0; 4],
            },
            ..Default::default()
        },
        reference: r.clone(),
        segment: SegmentKind::Thrust,
        settings: PropagatorSettings::default(),
    };
    let log = propagate_leg(&start, &cfg, &sc, &env).unwrap();
    assert!(log.terminal.da_km < 2.0, "{:?}", log.terminal);
    // the commanded change is 0.029°
    assert!(log.terminal.di_deg < 0.02, "{:?}", log.terminal);
}

#[test]
fn altitude_floor_aborts() {
    let env = Environment::default();
    let r = drift(6378.137 + 160.0, 1.7, 0.0, 30.0 * DAY, &env);
    let start = mean_to_osculating(&reference_elements(&r, 0.0, 0.0), &env).0;
    let sc = SpacecraftConfig {
        frontal_area: 50.0,
        wet_mass: 100.0,
        ..servicer()
    };
    let cfg = PropagationConfig {
        law: GuidanceLaw::Qlaw,
        weights: GuidanceWeights::default(),
        reference: r,
        segment: SegmentKind::Drift,
        settings: PropagatorSettings {
            // never let the deadband fire
            deadband: DeadbandThresholds {
                on: [1e9, 1e9, 1e9],
                off: [1.0, 1.0, 1.0],
            },
            ..Default::default()
        },
    };
    assert!(matches!(
        propagate_leg(&start, &cfg, &sc, &env),
        Err(Error::AltitudeFloor { .. })
    ));
}
