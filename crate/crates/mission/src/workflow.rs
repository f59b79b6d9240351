//! plan / fly / tune / report.
//!
//! A run directory holds one objective's artifacts:
//!
//! ```text
//! <out>/<objective>/solution.json      tour definition + solution
//!                   legs.csv           per-leg Δv and TOF with a Total row
//!                   multistart.csv     every local search (diagnostics)
//!                   profiles/*.csv     reference profiles, one per phase
//!                   flight_<law>.json  per-leg flight summary
//!                   errors_<law>.csv   per-leg terminal errors
//!                   comparison.csv     totals of every flown mode
//!                   weights_<law>.json tuned weight table
//!                   pso_<law>.csv      global-best history
//!                   report.md
//! ```

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use adr_core::astro::Environment;
use adr_core::edelbaum::TransferProfile;
use adr_core::guidance::{GuidanceLaw, LegClass, WeightTable};
use adr_core::propagator::{drift_reference, fly_leg, PropagatorSettings, TerminalErrors};
use adr_core::pso::{decode, encode, tune_weights_with, unit_block, TuningProblem, BLOCK};
use adr_core::tour::{
    evaluate_tour, local_search, multistart_seeds, optimize_tour, select_best, LegKind,
    LocalResult, Objective, Phase, TourDefinition, TourSolution, DAY,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::MissionConfig;
use crate::error::{MissionError, Result};
use crate::tle::DebrisRecord;

/// Per-leg handover budget.
pub const BUDGET: TerminalErrors = TerminalErrors {
    da_km: 20.0,
    di_deg: 0.1,
    draan_deg: 1.0,
};

pub fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Fuel => "fuel",
        Objective::Time => "time",
    }
}

pub fn run_dir(out: &Path, objective: Objective) -> PathBuf {
    out.join(objective_name(objective))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(MissionError::io(dir))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(contents))
        .map_err(MissionError::io(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| MissionError::format(path, e))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(MissionError::io(path))?;
    serde_json::from_str(&text).map_err(|e| MissionError::format(path, e))
}

fn write_csv<R: Serialize>(path: &Path, rows: &[R], header: &[&str]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(header)
            .map_err(|e| MissionError::format(path, e))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| MissionError::format(path, e))?;
    }
    let bytes = w.into_inner().map_err(|e| MissionError::format(path, e))?;
    write_file(path, &bytes)
}

// ---------------------------------------------------------------- plan

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub definition: TourDefinition,
    pub solution: TourSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegRow {
    #[serde(rename = "Leg")]
    pub leg: String,
    #[serde(rename = "Δv m/s")]
    pub dv_m_s: f64,
    #[serde(rename = "TOF d")]
    pub tof_d: f64,
}

pub fn leg_rows(s: &TourSolution) -> Vec<LegRow> {
    let mut rows: Vec<LegRow> = s
        .legs
        .iter()
        .map(|l| LegRow {
            leg: l.label.clone(),
            dv_m_s: l.dv * 1000.0,
            tof_d: l.tof / DAY,
        })
        .collect();
    rows.push(LegRow {
        leg: "Total".into(),
        dv_m_s: s.dv_total * 1000.0,
        tof_d: s.tof_total / DAY,
    });
    rows
}

#[derive(Serialize)]
struct StartRow {
    start: usize,
    feasible: bool,
    objective: f64,
    violation: f64,
    evaluations: usize,
    x: String,
}

#[derive(Serialize)]
struct ProfileRow {
    t_d: f64,
    a_km: f64,
    i_deg: f64,
    raan_deg: f64,
    dv_m_s: f64,
    mass_kg: f64,
    beta_deg: f64,
    throttle: f64,
}

fn profile_rows(p: &TransferProfile) -> Vec<ProfileRow> {
    (0..p.len())
        .map(|k| {
            let s = p.sample(k);
            ProfileRow {
                t_d: s.t / DAY,
                a_km: s.a,
                i_deg: s.i.to_degrees(),
                raan_deg: s.raan.to_degrees(),
                dv_m_s: s.dv_cum * 1000.0,
                mass_kg: s.mass,
                beta_deg: s.beta.to_degrees(),
                throttle: s.throttle,
            }
        })
        .collect()
}

const PROFILE_HEADER: [&str; 8] = [
    "t_d", "a_km", "i_deg", "raan_deg", "dv_m_s", "mass_kg", "beta_deg", "throttle",
];

fn write_profiles(dir: &Path, s: &TourSolution) -> Result<()> {
    let dir = dir.join("profiles");
    create_dir(&dir)?;
    for (k, leg) in s.legs.iter().enumerate() {
        for (j, phase) in leg.phases.iter().enumerate() {
            let (name, profile) = match phase {
                Phase::Thrust(p) => ("thrust", p.clone()),
                Phase::Drift(d) => ("drift", drift_reference(d)),
            };
            let path = dir.join(format!("leg{:02}_{j}_{name}.csv", k + 1));
            write_csv(&path, &profile_rows(&profile), &PROFILE_HEADER)?;
        }
    }
    Ok(())
}

/// Multistart optimization with the starts run in parallel.
pub fn optimize(
    cfg: &MissionConfig,
    def: &TourDefinition,
    env: &Environment,
) -> Result<(TourSolution, Vec<LocalResult>)> {
    let opts = cfg.search_options();
    if def.dimension() == 0 {
        let (sol, _) = optimize_tour(def, &[], &opts, env).map_err(infeasible)?;
        return Ok((sol, Vec::new()));
    }
    let x0 = cfg.initial_guess(def, env);
    let seeds = multistart_seeds(def, &x0, opts.seeds.max(1), env);
    let results: Vec<LocalResult> = seeds
        .par_iter()
        .map(|s| local_search(def, s, &opts, env))
        .collect();
    let best = select_best(&results).map_err(infeasible)?;
    let sol = evaluate_tour(def, &best.x, env)?;
    Ok((sol, results))
}

fn infeasible(e: adr_core::Error) -> MissionError {
    match e {
        adr_core::Error::Infeasible { .. } => MissionError::Infeasible(e),
        other => MissionError::Core(other),
    }
}

pub fn plan(
    cfg: &MissionConfig,
    catalog: &[DebrisRecord],
    objective: Option<Objective>,
    out: &Path,
) -> Result<SolutionFile> {
    let env = cfg.environment();
    let def = cfg.tour_definition(catalog, objective)?;
    let dir = run_dir(out, def.objective);
    create_dir(&dir)?;
    let outcome = optimize(cfg, &def, &env);
    let starts = match &outcome {
        Ok((_, r)) => r.clone(),
        Err(_) if def.dimension() > 0 => {
            // rerun is cheap compared to losing the diagnostics
            let opts = cfg.search_options();
            let x0 = cfg.initial_guess(&def, &env);
            multistart_seeds(&def, &x0, opts.seeds.max(1), &env)
                .par_iter()
                .map(|s| local_search(&def, s, &opts, &env))
                .collect()
        }
        Err(_) => Vec::new(),
    };
    let rows: Vec<StartRow> = starts
        .iter()
        .enumerate()
        .map(|(k, r)| StartRow {
            start: k,
            feasible: r.feasible,
            objective: r.objective,
            violation: r.violation,
            evaluations: r.evaluations,
            x: design_text(&r.x, &env),
        })
        .collect();
    write_csv(
        &dir.join("multistart.csv"),
        &rows,
        &[
            "start",
            "feasible",
            "objective",
            "violation",
            "evaluations",
            "x",
        ],
    )?;
    let (solution, _) = outcome?;
    write_csv(
        &dir.join("legs.csv"),
        &leg_rows(&solution),
        &["Leg", "Δv m/s", "TOF d"],
    )?;
    if cfg.output.profiles {
        write_profiles(&dir, &solution)?;
    }
    let file = SolutionFile {
        definition: def,
        solution,
    };
    write_json(&dir.join("solution.json"), &file)?;
    Ok(file)
}

/// Design vector as "altitude km / inclination deg" pairs.
pub fn design_text(x: &[f64], env: &Environment) -> String {
    x.chunks(2)
        .map(|c| match c {
            [v, i] => format!(
                "{:.3} km / {:.4} deg",
                env.mu / (v * v) - env.re,
                i.to_degrees()
            ),
            [w] => format!("delay {:.3} d", w / DAY),
            _ => String::new(),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn load_solution(out: &Path, objective: Objective) -> Result<SolutionFile> {
    let path = run_dir(out, objective).join("solution.json");
    if !path.exists() {
        return Err(MissionError::Config(format!(
            "{} not found; run `plan` for this objective first",
            path.display()
        )));
    }
    read_json(&path)
}

// ---------------------------------------------------------------- weights

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFile {
    pub law: GuidanceLaw,
    pub objective: Objective,
    pub seed: u64,
    /// decision blocks in the tuner's layout
    pub down: [f64; BLOCK],
    pub up: [f64; BLOCK],
    pub down_fitness: f64,
    pub up_fitness: f64,
    /// all-ones baseline on the same legs
    pub unit_down_fitness: f64,
    pub unit_up_fitness: f64,
}

impl WeightFile {
    pub fn table(&self) -> WeightTable {
        WeightTable {
            down: decode(self.law, &self.down),
            up: decode(self.law, &self.up),
        }
    }
}

pub fn unit_table(law: GuidanceLaw) -> WeightTable {
    let w = decode(law, &unit_block(law));
    WeightTable::uniform(w)
}

/// Weight table for a flight: configured directory, then this run's tuned
/// table, then unit weights.
pub fn weights_for(
    cfg: &MissionConfig,
    out: &Path,
    objective: Objective,
    law: GuidanceLaw,
) -> Result<(WeightTable, String)> {
    if law == GuidanceLaw::OpenLoop {
        return Ok((WeightTable::default(), "none".into()));
    }
    let name = format!("{}_{}.json", objective_name(objective), law.name());
    let candidates = [
        cfg.guidance.weights_dir.as_ref().map(|d| d.join(&name)),
        Some(run_dir(out, objective).join(format!("weights_{}.json", law.name()))),
    ];
    for path in candidates.into_iter().flatten() {
        if path.exists() {
            let f: WeightFile = read_json(&path)?;
            if f.law != law {
                return Err(MissionError::format(
                    &path,
                    format!("holds {} weights, expected {}", f.law.name(), law.name()),
                ));
            }
            return Ok((f.table(), path.display().to_string()));
        }
    }
    Ok((unit_table(law), "unit".into()))
}

// ---------------------------------------------------------------- fly

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegSummary {
    pub label: String,
    pub kind: LegKind,
    pub class: LegClass,
    pub errors: TerminalErrors,
    pub tof_d: f64,
    pub dv_m_s: f64,
    pub fuel_kg: f64,
    /// propellant implied by the flown Δv through the rocket equation
    pub rocket_fuel_kg: f64,
    pub reference_dv_m_s: f64,
    pub reference_fuel_kg: f64,
    pub within_budget: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlightSummary {
    pub law: GuidanceLaw,
    pub objective: Objective,
    pub weights: String,
    pub legs: Vec<LegSummary>,
    /// whole tour, unflown dwells at their planned values
    pub tof_d: f64,
    pub fuel_kg: f64,
    /// flown legs only
    pub flown_fuel_kg: f64,
    pub reference_fuel_kg: f64,
    /// sum over movement legs
    pub total_errors: TerminalErrors,
}

impl FlightSummary {
    pub fn movement_legs(&self) -> impl Iterator<Item = &LegSummary> {
        self.legs.iter().filter(|l| l.kind != LegKind::Handover)
    }

    pub fn all_within_budget(&self) -> bool {
        self.movement_legs().all(|l| l.within_budget)
    }
}

#[derive(Serialize)]
struct ErrorRow<'a> {
    #[serde(rename = "Leg")]
    leg: &'a str,
    #[serde(rename = "Δa km")]
    da_km: f64,
    #[serde(rename = "Δi deg")]
    di_deg: f64,
    #[serde(rename = "ΔΩ deg")]
    draan_deg: f64,
    #[serde(rename = "Fuel kg")]
    fuel_kg: f64,
    #[serde(rename = "Reference fuel kg")]
    reference_fuel_kg: f64,
    #[serde(rename = "Within budget")]
    within_budget: bool,
}

#[derive(Serialize)]
struct SampleRow {
    t_d: f64,
    a_km: f64,
    e: f64,
    i_deg: f64,
    raan_deg: f64,
    mean_a_km: f64,
    mean_i_deg: f64,
    mean_raan_deg: f64,
    mass_kg: f64,
    dv_m_s: f64,
    throttle: f64,
}

/// Flies every flyable leg of `solution` with one law; legs run in parallel.
pub fn fly_solution(
    file: &SolutionFile,
    law: GuidanceLaw,
    weights: &WeightTable,
    settings: &PropagatorSettings,
    env: &Environment,
) -> Result<(
    FlightSummary,
    Vec<Option<adr_core::propagator::TrajectoryLog>>,
)> {
    let sol = &file.solution;
    let flown: Vec<Option<Result<adr_core::propagator::LegFlight>>> = sol
        .legs
        .par_iter()
        .map(|leg| {
            fly_leg(leg, law, weights, settings, env).map(|r| {
                r.map_err(|source| MissionError::Propagation {
                    leg: leg.label.clone(),
                    source,
                })
            })
        })
        .collect();
    let mut legs = Vec::new();
    let mut logs = Vec::new();
    let mut tof = 0.0;
    let mut fuel = 0.0;
    for (leg, f) in sol.legs.iter().zip(flown) {
        match f {
            None => {
                tof += leg.tof;
                fuel += leg.vehicle.wet_mass - leg.mass_end;
                logs.push(None);
            }
            Some(r) => {
                let f = r?;
                let within = f.errors.within(&BUDGET);
                let rocket = f.log.initial_mass - f.log.rocket_equation_mass(&leg.vehicle, env);
                tof += f.log.duration;
                fuel += f.fuel;
                legs.push(LegSummary {
                    label: f.label,
                    kind: f.kind,
                    class: f.class,
                    errors: f.errors,
                    tof_d: f.log.duration / DAY,
                    dv_m_s: f.dv * 1000.0,
                    fuel_kg: f.fuel,
                    rocket_fuel_kg: rocket,
                    reference_dv_m_s: f.reference_dv * 1000.0,
                    reference_fuel_kg: f.reference_fuel,
                    within_budget: within,
                });
                logs.push(Some(f.log));
            }
        }
    }
    let total_errors = legs
        .iter()
        .filter(|l| l.kind != LegKind::Handover)
        .fold(TerminalErrors::default(), |s, l| s + l.errors);
    let summary = FlightSummary {
        law,
        objective: file.definition.objective,
        weights: String::new(),
        flown_fuel_kg: legs.iter().map(|l| l.fuel_kg).sum(),
        reference_fuel_kg: legs.iter().map(|l| l.reference_fuel_kg).sum(),
        legs,
        tof_d: tof / DAY,
        fuel_kg: fuel,
        total_errors,
    };
    Ok((summary, logs))
}

pub fn fly(
    cfg: &MissionConfig,
    objective: Objective,
    laws: &[GuidanceLaw],
    out: &Path,
) -> Result<Vec<FlightSummary>> {
    let env = cfg.environment();
    let file = load_solution(out, objective)?;
    let dir = run_dir(out, objective);
    let settings = cfg.propagator_settings();
    let mut summaries = Vec::new();
    for &law in laws {
        let (weights, source) = weights_for(cfg, out, objective, law)?;
        let (mut summary, logs) = fly_solution(&file, law, &weights, &settings, &env)?;
        summary.weights = source;
        let rows: Vec<ErrorRow> = summary
            .movement_legs()
            .map(|l| ErrorRow {
                leg: &l.label,
                da_km: l.errors.da_km,
                di_deg: l.errors.di_deg,
                draan_deg: l.errors.draan_deg,
                fuel_kg: l.fuel_kg,
                reference_fuel_kg: l.reference_fuel_kg,
                within_budget: l.within_budget,
            })
            .collect();
        let header = [
            "Leg",
            "Δa km",
            "Δi deg",
            "ΔΩ deg",
            "Fuel kg",
            "Reference fuel kg",
            "Within budget",
        ];
        write_csv(
            &dir.join(format!("errors_{}.csv", law.name())),
            &rows,
            &header,
        )?;
        write_json(&dir.join(format!("flight_{}.json", law.name())), &summary)?;
        if cfg.output.trajectories {
            write_trajectories(&dir, law, &logs)?;
        }
        summaries.push(summary);
    }
    write_comparison(&dir, &file)?;
    Ok(summaries)
}

fn write_trajectories(
    dir: &Path,
    law: GuidanceLaw,
    logs: &[Option<adr_core::propagator::TrajectoryLog>],
) -> Result<()> {
    let dir = dir.join("trajectories");
    create_dir(&dir)?;
    for (k, log) in logs.iter().enumerate() {
        let Some(log) = log else { continue };
        let t0 = log.samples.first().map_or(0.0, |s| s.epoch);
        let rows: Vec<SampleRow> = log
            .samples
            .iter()
            .map(|s| SampleRow {
                t_d: (s.epoch - t0) / DAY,
                a_km: s.osculating.a,
                e: s.osculating.e,
                i_deg: s.osculating.i.to_degrees(),
                raan_deg: s.osculating.raan.to_degrees(),
                mean_a_km: s.mean.a,
                mean_i_deg: s.mean.i.to_degrees(),
                mean_raan_deg: s.mean.raan.to_degrees(),
                mass_kg: s.mass,
                dv_m_s: s.dv * 1000.0,
                throttle: s.throttle,
            })
            .collect();
        write_csv(
            &dir.join(format!("{}_leg{:02}.csv", law.name(), k + 1)),
            &rows,
            &[],
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    #[serde(rename = "Method")]
    pub method: String,
    #[serde(rename = "TOF d")]
    pub tof_d: f64,
    #[serde(rename = "Fuel kg")]
    pub fuel_kg: f64,
    #[serde(rename = "Δa km")]
    pub da_km: Option<f64>,
    #[serde(rename = "Δi deg")]
    pub di_deg: Option<f64>,
    #[serde(rename = "ΔΩ deg")]
    pub draan_deg: Option<f64>,
}

pub fn method_name(law: GuidanceLaw) -> &'static str {
    match law {
        GuidanceLaw::OpenLoop => "Forward Propagated PMDT",
        GuidanceLaw::Ruggiero => "Ruggiero",
        GuidanceLaw::Dvlaw => "Δv-Law",
        GuidanceLaw::Qlaw => "Q-Law",
    }
}

pub fn load_flights(out: &Path, objective: Objective) -> Result<Vec<FlightSummary>> {
    let dir = run_dir(out, objective);
    let mut v = Vec::new();
    for law in [
        GuidanceLaw::OpenLoop,
        GuidanceLaw::Ruggiero,
        GuidanceLaw::Dvlaw,
        GuidanceLaw::Qlaw,
    ] {
        let path = dir.join(format!("flight_{}.json", law.name()));
        if path.exists() {
            v.push(read_json(&path)?);
        }
    }
    Ok(v)
}

pub fn comparison_rows(file: &SolutionFile, flights: &[FlightSummary]) -> Vec<ComparisonRow> {
    let s = &file.solution;
    let mut rows = vec![ComparisonRow {
        method: "PMDT".into(),
        tof_d: s.tof_total / DAY,
        fuel_kg: s.fuel,
        da_km: None,
        di_deg: None,
        draan_deg: None,
    }];
    rows.extend(flights.iter().map(|f| ComparisonRow {
        method: method_name(f.law).into(),
        tof_d: f.tof_d,
        fuel_kg: f.fuel_kg,
        da_km: Some(f.total_errors.da_km),
        di_deg: Some(f.total_errors.di_deg),
        draan_deg: Some(f.total_errors.draan_deg),
    }));
    rows
}

/// Rebuilt from every flight summary present, so partial runs accumulate.
fn write_comparison(dir: &Path, file: &SolutionFile) -> Result<()> {
    let out = dir.parent().unwrap_or(dir);
    let flights = load_flights(out, file.definition.objective)?;
    write_csv(
        &dir.join("comparison.csv"),
        &comparison_rows(file, &flights),
        &[],
    )
}

// ---------------------------------------------------------------- tune

#[derive(Serialize)]
struct HistoryRow {
    iteration: usize,
    down: f64,
    up: f64,
}

pub fn tune(
    cfg: &MissionConfig,
    objective: Objective,
    law: GuidanceLaw,
    seed: Option<u64>,
    out: &Path,
) -> Result<WeightFile> {
    if law == GuidanceLaw::OpenLoop {
        return Err(MissionError::Config(
            "open loop has no weights to tune".into(),
        ));
    }
    let env = cfg.environment();
    let file = load_solution(out, objective)?;
    let mut problem = TuningProblem::new(law, &file.solution);
    problem.settings = cfg.simplified_settings();
    let opts = cfg.pso_options(seed);
    let result = tune_weights_with(&problem, &opts, &mut |class, batch| {
        batch
            .par_iter()
            .map(|x| problem.class_fitness(class, x, &env))
            .collect()
    });
    let unit = unit_block(law);
    let wf = WeightFile {
        law,
        objective,
        seed: opts.seed,
        down: encode(law, &result.table.down),
        up: encode(law, &result.table.up),
        down_fitness: result.down.best_fitness,
        up_fitness: result.up.best_fitness,
        unit_down_fitness: problem.class_fitness(LegClass::Down, &unit, &env),
        unit_up_fitness: problem.class_fitness(LegClass::Up, &unit, &env),
    };
    let dir = run_dir(out, objective);
    write_json(&dir.join(format!("weights_{}.json", law.name())), &wf)?;
    let rows: Vec<HistoryRow> = result
        .down
        .history
        .iter()
        .zip(&result.up.history)
        .enumerate()
        .map(|(k, (d, u))| HistoryRow {
            iteration: k,
            down: *d,
            up: *u,
        })
        .collect();
    write_csv(
        &dir.join(format!("pso_{}.csv", law.name())),
        &rows,
        &["iteration", "down", "up"],
    )?;
    Ok(wf)
}

// ---------------------------------------------------------------- report

pub fn report(out: &Path, objective: Objective) -> Result<String> {
    let file = load_solution(out, objective)?;
    let flights = load_flights(out, objective)?;
    let mut md = String::new();
    let s = &file.solution;
    let env = Environment::default();
    md.push_str(&format!(
        "# {} optimal tour\n\n",
        capitalize(objective_name(objective))
    ));
    md.push_str(&format!("Drift orbits: {}\n\n", design_text(&s.x, &env)));
    md.push_str("| Leg | Δv (m/s) | TOF (d) |\n|---|---:|---:|\n");
    for r in leg_rows(s) {
        md.push_str(&format!(
            "| {} | {:.2} | {:.2} |\n",
            r.leg, r.dv_m_s, r.tof_d
        ));
    }
    md.push_str(&format!("\nPropellant: {:.2} kg\n", s.fuel));
    if !flights.is_empty() {
        md.push_str("\n## Guidance comparison\n\n| Method | TOF (d) | Fuel (kg) | Δa (km) | Δi (deg) | ΔΩ (deg) |\n|---|---:|---:|---:|---:|---:|\n");
        for r in comparison_rows(&file, &flights) {
            let opt = |v: Option<f64>, p: usize| {
                v.map_or("–".to_string(), |v| format!("{v:.prec$}", prec = p))
            };
            md.push_str(&format!(
                "| {} | {:.1} | {:.2} | {} | {} | {} |\n",
                r.method,
                r.tof_d,
                r.fuel_kg,
                opt(r.da_km, 3),
                opt(r.di_deg, 3),
                opt(r.draan_deg, 3)
            ));
        }
        for f in &flights {
            md.push_str(&format!(
                "\n### {} per-leg errors (weights: {})\n\n| Leg | Δa (km) | Δi (deg) | ΔΩ (deg) | within budget |\n|---|---:|---:|---:|:---:|\n",
                method_name(f.law),
                f.weights
            ));
            for l in f.movement_legs() {
                md.push_str(&format!(
                    "| {} | {:.3} | {:.4} | {:.3} | {} |\n",
                    l.label,
                    l.errors.da_km,
                    l.errors.di_deg,
                    l.errors.draan_deg,
                    if l.within_budget { "yes" } else { "no" }
                ));
            }
        }
    }
    write_file(&run_dir(out, objective).join("report.md"), md.as_bytes())?;
    Ok(md)
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map_or(String::new(), |f| f.to_uppercase().chain(c).collect())
}
