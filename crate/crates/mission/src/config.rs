//! Mission configuration (TOML, `schema_version = 1`).
//!
//! Units are stated in the field names: `_kg`, `_n` (newton), `_s`,
//! `_m2`, `_km`, `_deg`, `_days`, `_m_s`. Timestamps are UTC strings.

use std::path::{Path, PathBuf};

use adr_core::astro::{Atmosphere, Environment, SpacecraftConfig};
use adr_core::edelbaum::EdelbaumOptions;
use adr_core::guidance::GuidanceLaw;
use adr_core::propagator::{DeadbandThresholds, PropagatorSettings};
use adr_core::pso::{PsoOptions, SimplifiedSettings};
use adr_core::tour::{DebrisTarget, DriftBounds, Objective, SearchOptions, TourDefinition, DAY};
use serde::{Deserialize, Serialize};

use crate::epoch::parse_utc;
use crate::error::{MissionError, Result};
use crate::tle::DebrisRecord;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissionConfig {
    pub schema_version: u32,
    pub spacecraft: SpacecraftBlock,
    #[serde(default)]
    pub environment: EnvironmentBlock,
    pub tour: TourBlock,
    #[serde(default)]
    pub optimizer: OptimizerBlock,
    #[serde(default)]
    pub guidance: GuidanceBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacecraftBlock {
    pub wet_mass_kg: f64,
    pub max_thrust_n: f64,
    pub isp_s: f64,
    pub duty_ratio: f64,
    pub drag_coefficient: f64,
    pub frontal_area_m2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtmosphereChoice {
    Exponential,
    Vacuum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentBlock {
    /// km³/s²
    pub mu: f64,
    pub earth_radius_km: f64,
    pub j2: f64,
    pub atmosphere: AtmosphereChoice,
}

impl Default for EnvironmentBlock {
    fn default() -> Self {
        let env = Environment::default();
        EnvironmentBlock {
            mu: env.mu,
            earth_radius_km: env.re,
            j2: env.j2,
            atmosphere: AtmosphereChoice::Exponential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DebrisEntry {
    pub catalog_id: u32,
    /// overrides the element-set name in reports
    #[serde(default)]
    pub name: Option<String>,
    pub mass_kg: f64,
    pub area_m2: f64,
    #[serde(default = "default_cd")]
    pub drag_coefficient: f64,
}

fn default_cd() -> f64 {
    2.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TourBlock {
    /// UTC, e.g. "2022-03-25T06:37:09Z"
    pub launch: String,
    pub objective: Objective,
    pub tof_max_days: f64,
    pub dv_max_m_s: f64,
    pub shepherd_altitude_km: f64,
    pub handover_dwell_days: f64,
    pub proximity_dwell_days: f64,
    #[serde(default)]
    pub launch_window_days: Option<f64>,
    #[serde(default = "default_alt_min")]
    pub drift_altitude_min_km: f64,
    #[serde(default = "default_alt_max")]
    pub drift_altitude_max_km: f64,
    #[serde(default = "default_inc_min")]
    pub drift_inclination_min_deg: f64,
    #[serde(default = "default_inc_max")]
    pub drift_inclination_max_deg: f64,
    /// visiting order
    pub debris: Vec<DebrisEntry>,
}

fn default_alt_min() -> f64 {
    DriftBounds::default().altitude_min_km
}
fn default_alt_max() -> f64 {
    DriftBounds::default().altitude_max_km
}
fn default_inc_min() -> f64 {
    DriftBounds::default().inclination_min.to_degrees()
}
fn default_inc_max() -> f64 {
    DriftBounds::default().inclination_max.to_degrees()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerBlock {
    /// multistart count (initial guess plus low-discrepancy points)
    pub starts: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evaluations: usize,
    pub penalty_weights: Vec<f64>,
    /// Initial guess as [altitude km, inclination deg] per rendezvous;
    /// defaults to the box centre.
    pub initial_guess: Option<Vec<[f64; 2]>>,
    pub segments: usize,
    pub eclipses: bool,
    pub drag: bool,
}

impl Default for OptimizerBlock {
    fn default() -> Self {
        let s = SearchOptions::default();
        let e = EdelbaumOptions::default();
        OptimizerBlock {
            starts: s.seeds,
            initial_step: s.initial_step,
            min_step: s.min_step,
            max_evaluations: s.max_evaluations,
            penalty_weights: s.penalty_weights,
            initial_guess: None,
            segments: e.segments,
            eclipses: e.eclipses,
            drag: e.drag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GuidanceBlock {
    /// law used by `fly` and `tune` when `--law` is absent; `fly` without
    /// either flies all four modes
    pub law: Option<GuidanceLaw>,
    /// Directory holding `<objective>_<law>.json` weight tables; when unset
    /// the run directory's tuned tables are used, else unit weights.
    pub weights_dir: Option<PathBuf>,
    pub control_step_s: f64,
    pub max_step_s: f64,
    pub rtol: f64,
    pub deadband_on: [f64; 3],
    pub deadband_off: [f64; 3],
    pub min_altitude_km: f64,
    pub log_interval_s: f64,
    pub pso: PsoBlock,
}

impl Default for GuidanceBlock {
    fn default() -> Self {
        let p = PropagatorSettings::default();
        GuidanceBlock {
            law: None,
            weights_dir: None,
            control_step_s: p.control_step,
            max_step_s: p.max_step,
            rtol: p.rtol,
            deadband_on: deadband_report(p.deadband.on),
            deadband_off: deadband_report(p.deadband.off),
            min_altitude_km: p.min_altitude_km,
            log_interval_s: p.log_interval,
            pso: PsoBlock::default(),
        }
    }
}

/// Deadband thresholds are written as [km, deg, deg].
fn deadband_report(t: [f64; 3]) -> [f64; 3] {
    [t[0], t[1].to_degrees(), t[2].to_degrees()]
}

fn deadband_internal(t: [f64; 3]) -> [f64; 3] {
    [t[0], t[1].to_radians(), t[2].to_radians()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsoBlock {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub velocity_clamp: f64,
    pub seed: u64,
    pub step_s: f64,
    pub samples: usize,
    pub thrust_factor: f64,
    pub duty_windows: bool,
    pub second_order_nodal: bool,
    pub drift_starts_on: bool,
    pub fuel_overrun_allowance: f64,
    pub fuel_overrun_scale: f64,
}

impl Default for PsoBlock {
    fn default() -> Self {
        let o = PsoOptions::default();
        let s = SimplifiedSettings::default();
        PsoBlock {
            swarm_size: o.swarm_size,
            iterations: o.iterations,
            inertia: o.inertia,
            cognitive: o.cognitive,
            social: o.social,
            velocity_clamp: o.velocity_clamp,
            seed: o.seed,
            step_s: s.step,
            samples: s.samples,
            thrust_factor: s.thrust_factor,
            duty_windows: s.duty_windows,
            second_order_nodal: s.second_order_nodal,
            drift_starts_on: s.drift_starts_on,
            fuel_overrun_allowance: s.fuel_overrun_allowance,
            fuel_overrun_scale: s.fuel_overrun_scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub dir: PathBuf,
    /// write one CSV per transfer profile
    pub profiles: bool,
    /// write the sampled trajectory of every flown leg
    pub trajectories: bool,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            dir: PathBuf::from("out"),
            profiles: true,
            trajectories: false,
        }
    }
}

fn invalid(msg: impl Into<String>) -> MissionError {
    MissionError::Config(msg.into())
}

impl MissionConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: MissionConfig = toml::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(MissionError::io(path))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| match e {
            MissionError::Config(m) => invalid(format!("{}: {m}", path.display())),
            other => other,
        })?;
        // relative paths inside the file are relative to the file
        if let Some(base) = path.parent() {
            if let Some(d) = &cfg.guidance.weights_dir {
                if d.is_relative() {
                    cfg.guidance.weights_dir = Some(base.join(d));
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.spacecraft()
            .validate()
            .map_err(|e| invalid(e.to_string()))?;
        let t = &self.tour;
        parse_utc(&t.launch)?;
        for (v, what) in [
            (t.tof_max_days, "tof_max_days"),
            (t.dv_max_m_s, "dv_max_m_s"),
            (t.shepherd_altitude_km, "shepherd_altitude_km"),
        ] {
            if !(v > 0.0) {
                return Err(invalid(format!("tour.{what} must be positive")));
            }
        }
        if t.handover_dwell_days < 0.0 || t.proximity_dwell_days < 0.0 {
            return Err(invalid("dwell times must be non-negative"));
        }
        if !(t.drift_altitude_min_km < t.drift_altitude_max_km
            && t.drift_inclination_min_deg < t.drift_inclination_max_deg)
        {
            return Err(invalid("drift bounds must satisfy min < max"));
        }
        for d in &t.debris {
            if !(d.mass_kg > 0.0 && d.area_m2 >= 0.0 && d.drag_coefficient > 0.0) {
                return Err(invalid(format!(
                    "debris {}: mass must be positive, area non-negative",
                    d.catalog_id
                )));
            }
        }
        if let Some(g) = &self.optimizer.initial_guess {
            if g.len() != t.debris.len().saturating_sub(1) {
                return Err(invalid(format!(
                    "optimizer.initial_guess needs {} [altitude, inclination] pairs",
                    t.debris.len().saturating_sub(1)
                )));
            }
        }
        if self.optimizer.starts == 0 || self.guidance.pso.swarm_size == 0 {
            return Err(invalid(
                "optimizer.starts and guidance.pso.swarm_size must be at least 1",
            ));
        }
        let p = &self.guidance.pso;
        if !(p.step_s > 0.0)
            || p.samples == 0
            || !(p.fuel_overrun_scale >= 0.0)
            || !(p.fuel_overrun_allowance >= 0.0)
        {
            return Err(invalid(
                "guidance.pso needs step_s > 0, samples ≥ 1 and non-negative fuel overrun terms",
            ));
        }
        self.propagator_settings()
            .validate()
            .map_err(|e| invalid(e.to_string()))?;
        Ok(())
    }

    pub fn spacecraft(&self) -> SpacecraftConfig {
        let s = &self.spacecraft;
        SpacecraftConfig {
            wet_mass: s.wet_mass_kg,
            max_thrust: s.max_thrust_n,
            isp: s.isp_s,
            duty_ratio: s.duty_ratio,
            drag_coefficient: s.drag_coefficient,
            frontal_area: s.frontal_area_m2,
        }
    }

    pub fn environment(&self) -> Environment {
        let e = &self.environment;
        Environment {
            mu: e.mu,
            re: e.earth_radius_km,
            j2: e.j2,
            atmosphere: match e.atmosphere {
                AtmosphereChoice::Exponential => Atmosphere::exponential_default(),
                AtmosphereChoice::Vacuum => Atmosphere::Vacuum,
            },
            ..Environment::default()
        }
    }

    pub fn edelbaum_options(&self) -> EdelbaumOptions {
        EdelbaumOptions {
            segments: self.optimizer.segments,
            eclipses: self.optimizer.eclipses,
            drag: self.optimizer.drag,
            ..EdelbaumOptions::default()
        }
    }

    pub fn search_options(&self) -> SearchOptions {
        let o = &self.optimizer;
        SearchOptions {
            seeds: o.starts,
            initial_step: o.initial_step,
            min_step: o.min_step,
            penalty_weights: o.penalty_weights.clone(),
            max_evaluations: o.max_evaluations,
        }
    }

    pub fn propagator_settings(&self) -> PropagatorSettings {
        let g = &self.guidance;
        PropagatorSettings {
            control_step: g.control_step_s,
            max_step: g.max_step_s,
            rtol: g.rtol,
            deadband: DeadbandThresholds {
                on: deadband_internal(g.deadband_on),
                off: deadband_internal(g.deadband_off),
            },
            min_altitude_km: g.min_altitude_km,
            log_interval: g.log_interval_s,
            ..PropagatorSettings::default()
        }
    }

    pub fn pso_options(&self, seed: Option<u64>) -> PsoOptions {
        let p = &self.guidance.pso;
        PsoOptions {
            swarm_size: p.swarm_size,
            iterations: p.iterations,
            inertia: p.inertia,
            cognitive: p.cognitive,
            social: p.social,
            velocity_clamp: p.velocity_clamp,
            seed: seed.unwrap_or(p.seed),
        }
    }

    pub fn simplified_settings(&self) -> SimplifiedSettings {
        let p = &self.guidance.pso;
        SimplifiedSettings {
            step: p.step_s,
            samples: p.samples,
            thrust_factor: p.thrust_factor,
            duty_windows: p.duty_windows,
            second_order_nodal: p.second_order_nodal,
            drift_starts_on: p.drift_starts_on,
            fuel_overrun_allowance: p.fuel_overrun_allowance,
            fuel_overrun_scale: p.fuel_overrun_scale,
            deadband: self.propagator_settings().deadband,
            min_altitude_km: self.guidance.min_altitude_km,
            ..SimplifiedSettings::default()
        }
    }

    /// Tour definition with debris looked up in `catalog` by catalog id.
    pub fn tour_definition(
        &self,
        catalog: &[DebrisRecord],
        objective: Option<Objective>,
    ) -> Result<TourDefinition> {
        let t = &self.tour;
        let debris = t
            .debris
            .iter()
            .map(|d| {
                let rec = catalog
                    .iter()
                    .find(|r| r.catalog_id == d.catalog_id)
                    .ok_or_else(|| {
                        invalid(format!("debris {} is not in the catalog", d.catalog_id))
                    })?;
                Ok(DebrisTarget {
                    name: d.name.clone().unwrap_or_else(|| rec.name.clone()),
                    elements: rec.elements,
                    mass: d.mass_kg,
                    area: d.area_m2,
                    drag_coefficient: d.drag_coefficient,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TourDefinition {
            debris,
            shepherd_altitude_km: t.shepherd_altitude_km,
            handover_dwell: t.handover_dwell_days * DAY,
            proximity_dwell: t.proximity_dwell_days * DAY,
            launch_epoch: parse_utc(&t.launch)?,
            sc: self.spacecraft(),
            objective: objective.unwrap_or(t.objective),
            tof_max: t.tof_max_days * DAY,
            dv_max: t.dv_max_m_s / 1000.0,
            bounds: DriftBounds {
                altitude_min_km: t.drift_altitude_min_km,
                altitude_max_km: t.drift_altitude_max_km,
                inclination_min: t.drift_inclination_min_deg.to_radians(),
                inclination_max: t.drift_inclination_max_deg.to_radians(),
            },
            launch_window: t.launch_window_days.map(|d| d * DAY),
            edelbaum: self.edelbaum_options(),
        })
    }

    /// Physical initial design vector: the configured guess or the box centre.
    pub fn initial_guess(&self, def: &TourDefinition, env: &Environment) -> Vec<f64> {
        let (lo, hi) = def.box_bounds(env);
        let mut x: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect();
        if let Some(g) = &self.optimizer.initial_guess {
            for (k, [alt, inc]) in g.iter().enumerate() {
                x[2 * k] = env.circular_speed(env.re + alt).clamp(lo[2 * k], hi[2 * k]);
                x[2 * k + 1] = inc.to_radians().clamp(lo[2 * k + 1], hi[2 * k + 1]);
            }
        }
        x
    }
}
