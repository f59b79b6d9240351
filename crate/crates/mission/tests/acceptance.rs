//! Acceptance suite: one line per criterion.
//!
//! Runs the exemplar tours end to end (two optimizations and eight guided
//! flights), so expect a few minutes. Failing criteria are reported but only
//! fail the process when `ADR_ACCEPTANCE_STRICT` is set.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::time::Instant;

use adr_core::astro::{
    cartesian_to_elements, elements_to_cartesian, j2_acceleration, j2_raan_rate, orbit_normal,
    osculating_to_mean, sun_direction, sunlit_fraction, CartesianState, ClassicalElements,
    Environment, SpacecraftConfig,
};
use adr_core::edelbaum::{
    classical_delta_v, evaluate_profile, extended_edelbaum, EdelbaumBoundary, EdelbaumOptions,
};
use adr_core::guidance::{
    dvlaw_direction, dvlaw_gradient, gve_matrix, qlaw_direction, qlaw_gradient, DvLawWeights,
    GuidanceLaw, LegClass, QLawWeights, TargetState,
};
use adr_core::math::Vec3;
use adr_core::propagator::{integrate, Tolerances};
use adr_core::pso::{encode, tune_weights, unit_block, PsoOptions, TuningProblem};
use adr_core::tour::{LegKind, Objective, TourSolution, DAY};
use adr_mission::workflow::{self, fly_solution, method_name, FlightSummary, SolutionFile};
use adr_mission::{load_catalog, MissionConfig};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/exemplar.toml");
const CATALOG: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/fixtures/debris_2022-03-25.tle"
);

const LAWS: [GuidanceLaw; 3] = [GuidanceLaw::Ruggiero, GuidanceLaw::Dvlaw, GuidanceLaw::Qlaw];

type Outcome = Result<String, String>;

struct Rng(ChaCha8Rng);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }
    fn direction(&mut self) -> Vec3 {
        loop {
            let v = [
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 1e-3 && n <= 1.0 {
                return Vec3([v[0] / n, v[1] / n, v[2] / n]);
            }
        }
    }
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

// ------------------------------------------------------------------ 1

fn edelbaum_identities() -> Outcome {
    let env = Environment::default();
    let start = Instant::now();
    let mut rng = Rng::new(1);
    let mut worst_a: f64 = 0.0;
    let mut worst_i: f64 = 0.0;
    for _ in 0..1000 {
        let a0 = rng.uniform(6700.0, 8000.0);
        let af = rng.uniform(6700.0, 8000.0);
        let i0 = rng.uniform(0.1, 3.0);
        let i_f = (i0 + rng.uniform(-0.3, 0.3)).clamp(0.05, 3.09);
        let b = EdelbaumBoundary::between(a0, i0, af, i_f, rng.uniform(0.0, TAU), 0.0, &env);
        let p =
            evaluate_profile(&b, rng.uniform(5e-8, 2e-7), 200, &env).map_err(|e| e.to_string())?;
        let n = p.len() - 1;
        worst_a = worst_a.max(((p.a[n] - af) / af).abs());
        worst_i = worst_i.max(((p.i[n] - i_f) / i_f).abs());

        let flat = EdelbaumBoundary::between(a0, i0, af, i0, 0.0, 0.0, &env);
        check(
            classical_delta_v(&flat) == (flat.v0 - flat.vf).abs(),
            || format!("coplanar Δv differs from |V0−Vf| at a0={a0}, af={af}"),
        )?;
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(worst_a < 1e-6 && worst_i < 1e-6, || {
        format!("endpoint error a {worst_a:.1e}, i {worst_i:.1e}")
    })?;
    check(elapsed < 5.0, || format!("took {elapsed:.2} s"))?;
    Ok(format!(
        "worst relative endpoint error a {worst_a:.1e}, i {worst_i:.1e}; {elapsed:.2} s"
    ))
}

// ------------------------------------------------------------------ 2

fn duty_dilation() -> Outcome {
    let env = Environment::default();
    let b = EdelbaumBoundary::between(6728.137, 1.71, 7378.137, 1.69, 0.4, 7.0e8, &env);
    let opts = EdelbaumOptions {
        eclipses: false,
        drag: false,
        ..EdelbaumOptions::default()
    };
    let mut sc = SpacecraftConfig {
        wet_mass: 800.0,
        max_thrust: 0.06,
        isp: 1300.0,
        duty_ratio: 1.0,
        drag_coefficient: 2.2,
        frontal_area: 2.0,
    };
    let full = extended_edelbaum(&b, &sc, &env, &opts).map_err(|e| e.to_string())?;
    sc.duty_ratio = 0.5;
    let half = extended_edelbaum(&b, &sc, &env, &opts).map_err(|e| e.to_string())?;
    let ratio = half.tof / full.tof;
    let ddv = (half.dv_total - full.dv_total).abs();
    check((ratio / 2.0 - 1.0).abs() < 1e-3, || {
        format!("TOF ratio {ratio}")
    })?;
    check(ddv <= 1e-9, || format!("Δv differs by {ddv:e} km/s"))?;
    Ok(format!(
        "TOF ratio {ratio:.6}, Δv difference {ddv:.1e} km/s"
    ))
}

// ------------------------------------------------------------------ 3

fn sun_sync_j2() -> Outcome {
    let env = Environment::default();
    let (a, i) = (7178.137, 98.6f64.to_radians());
    let rate = j2_raan_rate(a, 0.0, i, &env);
    let deg_day = rate.to_degrees() * DAY;
    check((deg_day - 0.9856).abs() <= 0.001, || {
        format!("secular rate {deg_day:.5} deg/day")
    })?;

    let el = ClassicalElements::circular(a, i, 0.3, 0.0, 0.0);
    let s = elements_to_cartesian(&el, &env);
    let p = s.position.0;
    let v = s.velocity.0;
    let y0 = [p[0], p[1], p[2], v[0], v[1], v[2]];
    let t1 = 10.0 * TAU * (a * a * a / env.mu).sqrt();
    let mut f = |t: f64, y: &[f64; 6]| {
        let rn = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        let state = CartesianState {
            position: Vec3([y[0], y[1], y[2]]),
            velocity: Vec3([y[3], y[4], y[5]]),
            epoch: t,
        };
        let j = j2_acceleration(&state, &env).0;
        let k = -env.mu / (rn * rn * rn);
        [
            y[3],
            y[4],
            y[5],
            k * y[0] + j[0],
            k * y[1] + j[1],
            k * y[2] + j[2],
        ]
    };
    let tol = Tolerances {
        rtol: 1e-12,
        atol: [1e-9, 1e-9, 1e-9, 1e-12, 1e-12, 1e-12],
        max_step: 60.0,
        min_step: 1e-6,
    };
    let (y, _, _) =
        integrate(&mut f, 0.0, y0, t1, 10.0, &tol).map_err(|e| e.reason().to_string())?;
    let end = CartesianState {
        position: Vec3([y[0], y[1], y[2]]),
        velocity: Vec3([y[3], y[4], y[5]]),
        epoch: t1,
    };
    let m0 = osculating_to_mean(&el, &env).0;
    let m1 = osculating_to_mean(
        &cartesian_to_elements(&end, &env).map_err(|e| e.to_string())?,
        &env,
    )
    .0;
    let d = (m1.raan - m0.raan + 3.0 * PI).rem_euclid(TAU) - PI;
    let numeric = d / t1;
    let rel = numeric / rate - 1.0;
    check(rel.abs() < 0.01, || {
        format!("10-orbit rate off by {:.3} %", 100.0 * rel)
    })?;
    Ok(format!(
        "{deg_day:.5} deg/day; 10-orbit propagation within {:.3} %",
        100.0 * rel.abs()
    ))
}

// ------------------------------------------------------------------ 4, 5

struct Tours {
    cfg: MissionConfig,
    env: Environment,
    fuel: (SolutionFile, f64),
    time: (SolutionFile, f64),
}

fn plan_tours() -> Result<Tours, String> {
    let cfg = MissionConfig::load(Path::new(CONFIG)).map_err(|e| e.to_string())?;
    let env = cfg.environment();
    let catalog = load_catalog(Path::new(CATALOG), &env).map_err(|e| e.to_string())?;
    let run = |objective| -> Result<(SolutionFile, f64), String> {
        let definition = cfg
            .tour_definition(&catalog, Some(objective))
            .map_err(|e| e.to_string())?;
        let start = Instant::now();
        let (solution, _) =
            workflow::optimize(&cfg, &definition, &env).map_err(|e| e.to_string())?;
        Ok((
            SolutionFile {
                definition,
                solution,
            },
            start.elapsed().as_secs_f64(),
        ))
    };
    Ok(Tours {
        fuel: run(Objective::Fuel)?,
        time: run(Objective::Time)?,
        cfg,
        env,
    })
}

fn deorbit_legs(s: &TourSolution) -> Vec<(f64, f64)> {
    s.legs
        .iter()
        .filter(|l| l.kind == LegKind::Deorbit)
        .map(|l| (l.dv * 1000.0, l.tof / DAY))
        .collect()
}

fn deorbit_reproduction(tours: &Tours) -> Outcome {
    const DV: [f64; 3] = [140.12, 151.93, 175.14];
    let cases = [
        ("fuel", &tours.fuel.0.solution, [203.82, 166.91, 164.25]),
        ("time", &tours.time.0.solution, [203.82, 165.40, 162.20]),
    ];
    let mut detail = Vec::new();
    for (name, sol, tof) in cases {
        let legs = deorbit_legs(sol);
        check(legs.len() == 3, || {
            format!("{name}: {} deorbit legs", legs.len())
        })?;
        for (k, &(dv, t)) in legs.iter().enumerate() {
            let (edv, et) = (dv / DV[k] - 1.0, t / tof[k] - 1.0);
            detail.push(format!(
                "{name} leg {}: {dv:.2} m/s ({:+.1} %), {t:.2} d ({:+.1} %)",
                2 * k + 1,
                100.0 * edv,
                100.0 * et
            ));
            check(edv.abs() <= 0.07 && et.abs() <= 0.10, || detail.join("; "))?;
        }
    }
    Ok(detail.join("; "))
}

fn tour_totals(tours: &Tours) -> Outcome {
    let (fuel, fuel_s) = (&tours.fuel.0.solution, tours.fuel.1);
    let (time, time_s) = (&tours.time.0.solution, tours.time.1);
    let (fdv, ftof) = (fuel.dv_total * 1000.0, fuel.tof_total / DAY);
    let (tdv, ttof) = (time.dv_total * 1000.0, time.tof_total / DAY);
    let detail = format!(
        "fuel {fdv:.2} m/s / {ftof:.2} d in {fuel_s:.0} s; time {tdv:.2} m/s / {ttof:.2} d in {time_s:.0} s"
    );
    let fuel_ok = fdv <= 1000.0 && ftof <= 1825.0 && ftof >= 0.99 * 1825.0;
    let time_ok = ttof <= 1400.0 && tdv <= 1500.0 && tdv >= 0.99 * 1500.0;
    check(
        fuel_ok && time_ok && fuel_s < 600.0 && time_s < 600.0,
        || detail.clone(),
    )?;
    Ok(detail)
}

// ------------------------------------------------------------------ 6

fn random_geometry(rng: &mut Rng) -> (ClassicalElements, TargetState) {
    let el = ClassicalElements {
        a: rng.uniform(6700.0, 8200.0),
        e: rng.uniform(0.0, 0.05),
        i: rng.uniform(0.05, 3.09),
        raan: rng.uniform(0.0, TAU),
        argp: rng.uniform(0.0, TAU),
        nu: rng.uniform(0.0, TAU),
        epoch: 0.0,
    };
    let target = TargetState {
        a: rng.uniform(6700.0, 8200.0),
        e: rng.uniform(0.0, 0.02),
        i: rng.uniform(0.05, 3.09),
        raan: rng.uniform(0.0, TAU),
    };
    (el, target)
}

fn dot(g: &[f64; 4], r: &[f64; 4]) -> f64 {
    g.iter().zip(r).map(|(a, b)| a * b).sum()
}

fn norm(g: &[f64; 4]) -> f64 {
    g.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn lyapunov_descent() -> Outcome {
    const FD: f64 = 1e-6;
    let env = Environment::default();
    let mut rng = Rng::new(6);
    let probes: Vec<Vec3> = (0..10_000).map(|_| rng.direction()).collect();
    let mut worst_fd: f64 = 0.0;
    let mut tested = 0;
    for law in ["Δv-Law", "Q-Law"] {
        for n in 0..10_000 {
            let (el, target) = random_geometry(&mut rng);
            let (dir, g, g2) = if law == "Δv-Law" {
                let w = DvLawWeights {
                    lambda_e1: rng.uniform(0.01, 2.0),
                    lambda_e2: rng.uniform(0.01, 2.0),
                    lambda_ai: rng.uniform(0.01, 2.0),
                    lambda_ei: rng.uniform(0.01, 2.0),
                    lambda_araan: rng.uniform(0.01, 2.0),
                    lambda_omega: 0.0,
                };
                (
                    dvlaw_direction(&el, &target, &w, &env),
                    dvlaw_gradient(&el, &target, &w, &env, FD),
                    dvlaw_gradient(&el, &target, &w, &env, 2.0 * FD),
                )
            } else {
                let w = QLawWeights {
                    w: [
                        rng.uniform(0.01, 2.0),
                        rng.uniform(0.01, 2.0),
                        rng.uniform(0.01, 2.0),
                        rng.uniform(0.01, 2.0),
                    ],
                    ..QLawWeights::default()
                };
                (
                    qlaw_direction(&el, &target, &w, &env),
                    qlaw_gradient(&el, &target, &w, &env, FD),
                    qlaw_gradient(&el, &target, &w, &env, 2.0 * FD),
                )
            };
            if !dir.active {
                continue;
            }
            tested += 1;
            let b = gve_matrix(&el, &env);
            let scale = norm(&g) * b.rows.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
            let best = dot(&g, &b.rates(dir.u));
            check(best <= 1e-9 * scale, || {
                format!("{law} case {n}: ∇·B·u = {best:e}")
            })?;
            // every triple against a distinct slice of the probe set, all probes on the first
            let count = if n == 0 { probes.len() } else { 16 };
            for k in 0..count {
                let p = probes[(n * 16 + k) % probes.len()];
                check(best <= dot(&g, &b.rates(p)) + 1e-9 * scale, || {
                    format!("{law} case {n}: beaten by a random direction")
                })?;
            }
            let diff: [f64; 4] = std::array::from_fn(|k| g[k] - g2[k]);
            worst_fd = worst_fd.max(norm(&diff) / norm(&g));
        }
    }
    check(worst_fd <= 1e-3, || {
        format!("gradient step sensitivity {worst_fd:.1e}")
    })?;
    Ok(format!(
        "{tested} active triples; worst doubled-step gradient change {worst_fd:.1e}"
    ))
}

// ------------------------------------------------------------------ 7, 8

struct Flights {
    fuel: Vec<FlightSummary>,
    time: Vec<FlightSummary>,
}

fn fly_all(tours: &Tours) -> Result<Flights, String> {
    let settings = tours.cfg.propagator_settings();
    // an empty run directory, so only the configured weight tables are used
    let scratch = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scratch = scratch.path();
    let fly = |file: &SolutionFile| -> Result<Vec<FlightSummary>, String> {
        let objective = file.definition.objective;
        let mut out = Vec::new();
        for law in [
            GuidanceLaw::OpenLoop,
            GuidanceLaw::Ruggiero,
            GuidanceLaw::Dvlaw,
            GuidanceLaw::Qlaw,
        ] {
            let (weights, source) = workflow::weights_for(&tours.cfg, scratch, objective, law)
                .map_err(|e| e.to_string())?;
            let (mut summary, _) = fly_solution(file, law, &weights, &settings, &tours.env)
                .map_err(|e| e.to_string())?;
            summary.weights = source;
            out.push(summary);
        }
        Ok(out)
    };
    Ok(Flights {
        fuel: fly(&tours.fuel.0)?,
        time: fly(&tours.time.0)?,
    })
}

fn tracking_budget(flights: &Flights) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for (name, set) in [("fuel", &flights.fuel), ("time", &flights.time)] {
        let open = set[0].total_errors.draan_deg;
        let mut tracked = Vec::new();
        let mut ordering = true;
        for f in &set[1..] {
            if f.movement_legs().all(|l| l.within_budget) {
                tracked.push(method_name(f.law));
            }
            if f.total_errors.draan_deg >= open {
                ordering = false;
            }
        }
        let totals: Vec<String> = set
            .iter()
            .map(|f| format!("{} {:.3}°", method_name(f.law), f.total_errors.draan_deg))
            .collect();
        detail.push(format!(
            "{name}: all legs in budget for [{}]; total ΔΩ {}",
            tracked.join(", "),
            totals.join(", ")
        ));
        ok &= tracked.len() >= 2 && ordering;
    }
    let detail = detail.join(" | ");
    check(ok, || detail.clone())?;
    Ok(detail)
}

fn fuel_ledger(tours: &Tours, flights: &Flights) -> Outcome {
    let mut worst_rocket: f64 = 0.0;
    let mut detail = Vec::new();
    let mut ok = true;
    for (name, set, sol) in [
        ("fuel", &flights.fuel, &tours.fuel.0.solution),
        ("time", &flights.time, &tours.time.0.solution),
    ] {
        for f in set {
            for l in &f.legs {
                if l.rocket_fuel_kg > 0.0 {
                    worst_rocket = worst_rocket.max((l.fuel_kg / l.rocket_fuel_kg - 1.0).abs());
                }
            }
        }
        let over: Vec<String> = set[1..]
            .iter()
            .map(|f| {
                let r = f.fuel_kg / sol.fuel - 1.0;
                ok &= r < 0.05;
                format!("{} {:+.1} %", method_name(f.law), 100.0 * r)
            })
            .collect();
        detail.push(format!(
            "{name}: PMDT {:.2} kg, guided {}",
            sol.fuel,
            over.join(", ")
        ));
    }
    ok &= worst_rocket <= 0.005;
    let detail = format!(
        "rocket equation within {:.3} %; {}",
        100.0 * worst_rocket,
        detail.join(" | ")
    );
    check(ok, || detail.clone())?;
    Ok(detail)
}

// ------------------------------------------------------------------ 9

fn pso_sanity(tours: &Tours) -> Outcome {
    let env = &tours.env;
    let scratch = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scratch = scratch.path();
    let mut detail = Vec::new();
    for file in [&tours.fuel.0, &tours.time.0] {
        let objective = file.definition.objective;
        for law in LAWS {
            let (weights, _) = workflow::weights_for(&tours.cfg, scratch, objective, law)
                .map_err(|e| e.to_string())?;
            let mut problem = TuningProblem::new(law, &file.solution);
            problem.settings = tours.cfg.simplified_settings();
            for class in [LegClass::Down, LegClass::Up] {
                let tuned = problem.class_fitness(class, &encode(law, weights.get(class)), env);
                let unit = problem.class_fitness(class, &unit_block(law), env);
                check(tuned < unit, || {
                    format!(
                        "{} {objective:?} {class:?}: tuned {tuned:.4} vs unit {unit:.4}",
                        method_name(law)
                    )
                })?;
            }
        }
    }
    detail.push("tuned < all-ones on both classes for 6 tables".to_string());

    let mut problem = TuningProblem::new(GuidanceLaw::Qlaw, &tours.fuel.0.solution);
    problem.settings = tours.cfg.simplified_settings();
    let opts = PsoOptions {
        swarm_size: 8,
        iterations: 6,
        seed: 11,
        ..tours.cfg.pso_options(None)
    };
    let a = tune_weights(&problem, &opts, env);
    let b = tune_weights(&problem, &opts, env);
    for h in [&a.down.history, &a.up.history] {
        check(h.windows(2).all(|w| w[1] <= w[0]), || {
            format!("global best increased: {h:?}")
        })?;
    }
    let (ja, jb) = (
        serde_json::to_string(&a).map_err(|e| e.to_string())?,
        serde_json::to_string(&b).map_err(|e| e.to_string())?,
    );
    check(ja == jb, || "repeated seeded run differs".to_string())?;
    detail.push("global best non-increasing; seeded rerun byte-identical".to_string());
    Ok(detail.join("; "))
}

// ------------------------------------------------------------------ 10

fn eclipse_geometry() -> Outcome {
    let env = Environment::default();
    let epoch = 701_462_229.0;
    let s = sun_direction(epoch).0;
    // normal perpendicular to the sun: the sun lies in the orbit plane
    let raan = s[1].atan2(s[0]);
    let in_plane = sunlit_fraction(6728.0, FRAC_PI_2, raan, epoch, &env);
    let n = orbit_normal(FRAC_PI_2, raan).0;
    let beta = (n[0] * s[0] + n[1] * s[1] + n[2] * s[2]).abs();
    check(beta < 1e-12, || format!("β setup {beta:e}"))?;
    check((in_plane - 0.603).abs() <= 0.005, || {
        format!("sunlit fraction {in_plane:.4}")
    })?;
    // normal along the sun
    let i = s[2].acos();
    let raan = s[0].atan2(-s[1]);
    let full = sunlit_fraction(6728.0, i, raan, epoch, &env);
    let edge = sunlit_fraction(7078.0, (s[2] - 0.05).acos(), raan, epoch, &env);
    check(full == 1.0, || format!("full-sun fraction {full}"))?;
    check(edge == 1.0, || format!("high-β fraction {edge}"))?;
    Ok(format!(
        "in-plane sun {in_plane:.4}; full-sun cases exactly 1"
    ))
}

// ------------------------------------------------------------------ main

fn report(n: usize, name: &str, outcome: &Outcome) -> bool {
    match outcome {
        Ok(d) => println!("criterion {n:>2} PASS  {name}: {d}"),
        Err(d) => println!("criterion {n:>2} FAIL  {name}: {d}"),
    }
    outcome.is_ok()
}

fn main() {
    // libtest-style flags from `cargo test` are ignored; a filter that names
    // another target skips the suite
    let args: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    if args.iter().any(|a| !"acceptance".contains(a.as_str())) {
        return;
    }
    let mut results = Vec::new();
    results.push(report(1, "Edelbaum identities", &edelbaum_identities()));
    results.push(report(2, "duty dilation", &duty_dilation()));
    results.push(report(3, "sun-synchronous J2", &sun_sync_j2()));
    match plan_tours() {
        Ok(tours) => {
            results.push(report(4, "deorbit legs", &deorbit_reproduction(&tours)));
            results.push(report(5, "tour totals", &tour_totals(&tours)));
            results.push(report(6, "Lyapunov descent", &lyapunov_descent()));
            match fly_all(&tours) {
                Ok(flights) => {
                    results.push(report(7, "tracking budget", &tracking_budget(&flights)));
                    results.push(report(8, "fuel ledger", &fuel_ledger(&tours, &flights)));
                }
                Err(e) => {
                    results.push(report(7, "tracking budget", &Err(e.clone())));
                    results.push(report(8, "fuel ledger", &Err(e)));
                }
            }
            results.push(report(9, "PSO sanity", &pso_sanity(&tours)));
        }
        Err(e) => {
            for (n, name) in [(4, "deorbit legs"), (5, "tour totals")] {
                results.push(report(n, name, &Err(e.clone())));
            }
            results.push(report(6, "Lyapunov descent", &lyapunov_descent()));
            for (n, name) in [
                (7, "tracking budget"),
                (8, "fuel ledger"),
                (9, "PSO sanity"),
            ] {
                results.push(report(n, name, &Err(e.clone())));
            }
        }
    }
    results.push(report(10, "eclipse geometry", &eclipse_geometry()));
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed < results.len() && std::env::var_os("ADR_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
