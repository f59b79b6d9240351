//! Orbital elements, environment models and element-set conversions.

mod elements;
pub(crate) mod environment;
mod mean;
mod sun;

pub use elements::{
    cartesian_to_elements, elements_to_cartesian, mean_to_true, true_to_eccentric, true_to_mean,
    CartesianState, ClassicalElements, CIRCULAR_TOL, EQUATORIAL_TOL,
};
pub use environment::{
    drag_acceleration, drag_decay_rate, drag_magnitude, j2_acceleration, j2_raan_rate, Atmosphere,
    AtmosphereBand, Environment, SpacecraftConfig,
};
pub use mean::{mean_to_osculating, osculating_to_mean, MeanAccuracy, MEAN_ECCENTRICITY_LIMIT};
pub use sun::{
    beta_angle, eclipse_center_arglat, in_shadow, orbit_normal, sun_direction, sunlit_fraction,
};

use crate::Result;

/// Atmospheric density at a geometric altitude [kg/m³].
pub fn atmospheric_density(altitude_km: f64, env: &Environment) -> Result<f64> {
    env.density(altitude_km)
}
