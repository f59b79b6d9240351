use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::astro::CartesianState;
use crate::math::{Float, Vec3};
use crate::{Error, Result};

/// One row of a piecewise-exponential atmosphere table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtmosphereBand {
    pub base_altitude_km: f64,
    pub base_density_kg_m3: f64,
    pub scale_height_km: f64,
}

/// Static atmosphere model. `Vacuum` is used for drag-free studies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Atmosphere {
    Vacuum,
    Exponential {
        bands: Vec<AtmosphereBand>,
        max_altitude_km: f64,
    },
}

/// Exponential atmosphere (Vallado, *Fundamentals of Astrodynamics and
/// Applications*, 4th ed., Table 8-4), rows from 100 km upwards. The last
/// band extends to 2000 km.
const VALLADO_TABLE: [(f64, f64, f64); 19] = [
    (100.0, 5.297e-7, 5.877),
    (110.0, 9.661e-8, 7.263),
    (120.0, 2.438e-8, 9.473),
    (130.0, 8.484e-9, 12.636),
    (140.0, 3.845e-9, 16.149),
    (150.0, 2.070e-9, 22.523),
    (180.0, 5.464e-10, 29.740),
    (200.0, 2.789e-10, 37.105),
    (250.0, 7.248e-11, 45.546),
    (300.0, 2.418e-11, 53.628),
    (350.0, 9.518e-12, 53.298),
    (400.0, 3.725e-12, 58.515),
    (450.0, 1.585e-12, 60.828),
    (500.0, 6.967e-13, 63.822),
    (600.0, 1.454e-13, 71.835),
    (700.0, 3.614e-14, 88.667),
    (800.0, 1.170e-14, 124.64),
    (900.0, 5.245e-15, 181.05),
    (1000.0, 3.019e-15, 268.00),
];

impl Atmosphere {
    pub fn exponential_default() -> Self {
        let bands = VALLADO_TABLE
            .iter()
            .map(|&(h, rho, sh)| AtmosphereBand {
                base_altitude_km: h,
                base_density_kg_m3: rho,
                scale_height_km: sh,
            })
            .collect();
        Atmosphere::Exponential {
            bands,
            max_altitude_km: 2000.0,
        }
    }

    /// Builds a table, checking that bands are sorted and physically sane.
    pub fn from_bands(mut bands: Vec<AtmosphereBand>, max_altitude_km: f64) -> Result<Self> {
        if bands.is_empty() {
            return Err(Error::invalid("atmosphere table has no rows"));
        }
        bands.sort_by(|a, b| a.base_altitude_km.total_cmp(&b.base_altitude_km));
        for b in &bands {
            if !(b.base_density_kg_m3 > 0.0 && b.scale_height_km > 0.0) {
                return Err(Error::invalid(
                    "atmosphere density and scale height must be positive",
                ));
            }
        }
        if bands
            .windows(2)
            .any(|w| w[0].base_altitude_km == w[1].base_altitude_km)
        {
            return Err(Error::invalid("duplicate atmosphere base altitude"));
        }
        if max_altitude_km <= bands[0].base_altitude_km {
            return Err(Error::invalid("atmosphere ceiling below the first band"));
        }
        Ok(Atmosphere::Exponential {
            bands,
            max_altitude_km,
        })
    }

    /// Density at a geometric altitude [km] in kg/m³.
    pub fn density(&self, altitude_km: f64) -> Result<f64> {
        match self {
            Atmosphere::Vacuum => Ok(0.0),
            Atmosphere::Exponential {
                bands,
                max_altitude_km,
            } => {
                let min = bands[0].base_altitude_km;
                if !(altitude_km >= min && altitude_km <= *max_altitude_km) {
                    return Err(Error::AltitudeOutOfRange {
                        altitude_km,
                        min_km: min,
                        max_km: *max_altitude_km,
                    });
                }
                let k = bands.partition_point(|b| b.base_altitude_km <= altitude_km) - 1;
                let b = &bands[k];
                Ok(b.base_density_kg_m3
                    * (-(altitude_km - b.base_altitude_km) / b.scale_height_km).exp())
            }
        }
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self, Atmosphere::Vacuum)
    }
}

/// Central body constants plus the atmosphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// km³/s²
    pub mu: f64,
    /// km
    pub re: f64,
    pub j2: f64,
    /// m/s²
    pub g0: f64,
    pub atmosphere: Atmosphere,
}

impl Default for Environment {
    fn default() -> Self {
        Environment {
            mu: 398_600.4418,
            re: 6378.137,
            j2: 1.08263e-3,
            g0: 9.80665,
            atmosphere: Atmosphere::exponential_default(),
        }
    }
}

impl Environment {
    pub fn vacuum() -> Self {
        Environment {
            atmosphere: Atmosphere::Vacuum,
            ..Default::default()
        }
    }

    /// Circular speed at radius `a` [km/s].
    pub fn circular_speed(&self, a: f64) -> f64 {
        (self.mu / a).sqrt()
    }

    pub fn density(&self, altitude_km: f64) -> Result<f64> {
        self.atmosphere.density(altitude_km)
    }
}

/// Propulsion and drag properties of the vehicle being moved. `wet_mass` is
/// the mass at the start of whatever transfer the config is used for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacecraftConfig {
    /// kg
    pub wet_mass: f64,
    /// N
    pub max_thrust: f64,
    /// s
    pub isp: f64,
    pub duty_ratio: f64,
    pub drag_coefficient: f64,
    /// m²
    pub frontal_area: f64,
}

impl SpacecraftConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.wet_mass,
            self.max_thrust,
            self.isp,
            self.duty_ratio,
            self.drag_coefficient,
            self.frontal_area,
        ];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(
                "spacecraft parameters must be strictly positive",
            ));
        }
        if self.duty_ratio > 1.0 {
            return Err(Error::invalid("duty ratio must not exceed 1"));
        }
        Ok(())
    }

    /// Thrust acceleration at the given mass [km/s²].
    pub fn thrust_accel(&self, mass: f64) -> f64 {
        self.max_thrust / mass / 1000.0
    }

    /// Effective exhaust velocity [km/s].
    pub fn exhaust_velocity(&self, env: &Environment) -> f64 {
        self.isp * env.g0 / 1000.0
    }

    /// Same vehicle with extra mass and area attached (servicer + debris).
    pub fn with_payload(&self, mass: f64, area: f64) -> Self {
        SpacecraftConfig {
            wet_mass: self.wet_mass + mass,
            frontal_area: self.frontal_area + area,
            ..*self
        }
    }

    pub fn with_mass(&self, mass: f64) -> Self {
        SpacecraftConfig {
            wet_mass: mass,
            ..*self
        }
    }
}

/// Secular nodal regression rate [rad/s], circular-orbit form.
pub fn j2_raan_rate(a: f64, _e: f64, i: f64, env: &Environment) -> f64 {
    let n = (env.mu / (a * a * a)).sqrt();
    let ratio = env.re / a;
    -1.5 * env.j2 * n * ratio * ratio * i.cos()
}

/// First zonal-harmonic acceleration in the inertial frame [km/s²].
pub fn j2_acceleration(state: &CartesianState, env: &Environment) -> Vec3 {
    j2_acceleration_at(&state.position, env)
}

pub(crate) fn j2_acceleration_at(r: &Vec3, env: &Environment) -> Vec3 {
    let r2 = r.dot(r);
    let rn = r2.sqrt();
    let z2 = r.z() * r.z() / r2;
    let k = -1.5 * env.j2 * env.mu * env.re * env.re / (r2 * r2 * rn);
    Vec3::new(
        k * r.x() * (1.0 - 5.0 * z2),
        k * r.y() * (1.0 - 5.0 * z2),
        k * r.z() * (3.0 - 5.0 * z2),
    )
}

/// Drag deceleration magnitude [km/s²] at altitude for a given speed and
/// mass, using inertial speed (no co-rotation).
pub fn drag_magnitude(
    altitude_km: f64,
    speed: f64,
    mass: f64,
    sc: &SpacecraftConfig,
    env: &Environment,
) -> Result<f64> {
    let rho = env.density(altitude_km)?;
    let v = speed * 1000.0;
    Ok(0.5 * rho * sc.drag_coefficient * sc.frontal_area * v * v / mass / 1000.0)
}

/// Drag acceleration vector [km/s²], antiparallel to the inertial velocity.
pub fn drag_acceleration(
    state: &CartesianState,
    mass: f64,
    sc: &SpacecraftConfig,
    env: &Environment,
) -> Result<Vec3> {
    let alt = state.position.norm() - env.re;
    let speed = state.velocity.norm();
    let mag = drag_magnitude(alt, speed, mass, sc, env)?;
    Ok(state.velocity.unit() * -mag)
}

/// Semi-major-axis decay rate [km/s] of a circular orbit under drag
/// (tangential Gauss rate, ȧ = 2a²v·a_drag/μ).
pub fn drag_decay_rate(a: f64, mass: f64, sc: &SpacecraftConfig, env: &Environment) -> Result<f64> {
    let v = env.circular_speed(a);
    let acc = drag_magnitude(a - env.re, v, mass, sc, env)?;
    Ok(2.0 * a * a * v * acc / env.mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn sc() -> SpacecraftConfig {
        SpacecraftConfig {
            wet_mass: 800.0,
            max_thrust: 0.06,
            isp: 1300.0,
            duty_ratio: 0.5,
            drag_coefficient: 2.2,
            frontal_area: 1.0,
        }
    }

    #[test]
    fn raan_rate_signs() {
        let env = Environment::default();
        assert_eq!(
            j2_raan_rate(7000.0, 0.0, FRAC_PI_2, &env).abs() < 1e-22,
            true
        );
        assert!(j2_raan_rate(7000.0, 0.0, 51.6f64.to_radians(), &env) < 0.0);
        assert!(j2_raan_rate(7000.0, 0.0, 98.0f64.to_radians(), &env) > 0.0);
    }

    #[test]
    fn sun_synchronous_rate() {
        // 360° per 365.2422 d is 0.98565 deg/day
        let env = Environment::default();
        let rate = j2_raan_rate(7178.137, 0.0, 98.6f64.to_radians(), &env);
        let deg_per_day = rate.to_degrees() * 86400.0;
        assert!((deg_per_day - 0.9856).abs() < 1e-3, "{deg_per_day}");
    }

    #[test]
    fn j2_symmetry_cases() {
        let env = Environment::default();
        let polar = j2_acceleration_at(&Vec3::new(0.0, 0.0, 7000.0), &env);
        assert_eq!(polar.x(), 0.0);
        assert_eq!(polar.y(), 0.0);
        // oblateness weakens the pull along the pole
        assert!(polar.z() > 0.0);

        let eq = j2_acceleration_at(&Vec3::new(7000.0, 0.0, 0.0), &env);
        let expected = 1.5 * env.j2 * env.mu * env.re * env.re / 7000f64.powi(4);
        assert!((eq.x() + expected).abs() < 1e-18);
        assert_eq!(eq.y(), 0.0);
        assert_eq!(eq.z(), 0.0);
    }

    #[test]
    fn density_nodes_and_monotonicity() {
        let env = Environment::default();
        assert_eq!(env.density(400.0).unwrap(), 3.725e-12);
        assert!(env.density(350.0).unwrap() > env.density(650.0).unwrap());
        let rho400 = env.density(400.0).unwrap();
        assert!(rho400 > 1e-12 && rho400 < 1e-11);
        assert!(matches!(
            env.density(2500.0),
            Err(Error::AltitudeOutOfRange { .. })
        ));
        assert!(env.density(50.0).is_err());
    }

    #[test]
    fn drag_magnitude_hand_value() {
        // 0.5 · 1e-12 · 2.2 · 1 · 7700² / 800 = 8.1523e-8 m/s²
        let table = Atmosphere::from_bands(
            alloc::vec![AtmosphereBand {
                base_altitude_km: 100.0,
                base_density_kg_m3: 1e-12,
                scale_height_km: 1e12,
            }],
            2000.0,
        )
        .unwrap();
        let env = Environment {
            atmosphere: table,
            ..Default::default()
        };
        let mag = drag_magnitude(400.0, 7.7, 800.0, &sc(), &env).unwrap();
        assert!((mag * 1000.0 - 8.152_375e-8).abs() < 1e-13, "{mag}");

        let state = CartesianState {
            position: Vec3::new(6778.137, 0.0, 0.0),
            velocity: Vec3::new(0.0, 7.7, 0.0),
            epoch: 0.0,
        };
        let acc = drag_acceleration(&state, 800.0, &sc(), &env).unwrap();
        assert!(acc.dot(&state.velocity) < 0.0);
    }

    #[test]
    fn vacuum_has_no_drag() {
        let env = Environment::vacuum();
        assert_eq!(drag_decay_rate(6728.0, 800.0, &sc(), &env).unwrap(), 0.0);
    }

    #[test]
    fn invalid_spacecraft_rejected() {
        let mut s = sc();
        s.duty_ratio = 1.5;
        assert!(s.validate().is_err());
        s.duty_ratio = 0.0;
        assert!(s.validate().is_err());
        assert!(sc().validate().is_ok());
    }
}
