//! Low-precision solar ephemeris and cylindrical Earth-shadow geometry.

use core::f64::consts::PI;

use crate::astro::{ClassicalElements, Environment};
use crate::math::{wrap_two_pi, Float, Vec3};

/// Unit vector from the Earth to the Sun in the mean equatorial frame.
/// Mean-longitude series, good to about 0.01°.
pub fn sun_direction(epoch: f64) -> Vec3 {
    let n = epoch / 86_400.0;
    let l = (280.460 + 0.985_647_4 * n).to_radians();
    let g = (357.528 + 0.985_600_3 * n).to_radians();
    let lambda = l + (1.915f64.to_radians()) * g.sin() + (0.020f64.to_radians()) * (2.0 * g).sin();
    let eps = (23.439 - 4.0e-7 * n).to_radians();
    let (sl, cl) = lambda.sin_cos();
    Vec3::new(cl, eps.cos() * sl, eps.sin() * sl)
}

/// Unit orbit normal of a circular orbit with the given plane orientation.
pub fn orbit_normal(i: f64, raan: f64) -> Vec3 {
    let (si, ci) = i.sin_cos();
    let (so, co) = raan.sin_cos();
    Vec3::new(si * so, -si * co, ci)
}

/// Solar beta angle: elevation of the Sun above the orbit plane.
pub fn beta_angle(i: f64, raan: f64, epoch: f64) -> f64 {
    let s = sun_direction(epoch);
    s.dot(&orbit_normal(i, raan)).max(-1.0).min(1.0).asin()
}

/// Half-width ψ of the shadow arc, or `None` when the orbit never enters
/// the cylinder.
fn shadow_half_angle(a: f64, beta: f64, re: f64) -> Option<f64> {
    let ratio = re / a;
    if ratio >= 1.0 {
        return Some(PI / 2.0);
    }
    let cos_psi = (1.0 - ratio * ratio).sqrt() / beta.cos();
    if cos_psi >= 1.0 {
        None
    } else {
        Some(cos_psi.acos())
    }
}

/// Fraction of a circular orbit spent outside the cylindrical shadow.
pub fn sunlit_fraction(a: f64, i: f64, raan: f64, epoch: f64, env: &Environment) -> f64 {
    let beta = beta_angle(i, raan, epoch);
    match shadow_half_angle(a, beta, env.re) {
        None => 1.0,
        Some(psi) => 1.0 - psi / PI,
    }
}

/// Argument of latitude of the shadow centre (where the anti-Sun direction
/// projects onto the orbit plane); `None` for full-sun orbits.
pub fn eclipse_center_arglat(el: &ClassicalElements, epoch: f64, env: &Environment) -> Option<f64> {
    let s = sun_direction(epoch);
    let h = orbit_normal(el.i, el.raan);
    let beta = s.dot(&h).max(-1.0).min(1.0).asin();
    shadow_half_angle(el.a, beta, env.re)?;
    let n = Vec3::new(el.raan.cos(), el.raan.sin(), 0.0);
    let m = h.cross(&n);
    Some(wrap_two_pi((-s.dot(&m)).atan2(-s.dot(&n))))
}

/// Whether a position lies inside the cylindrical umbra.
pub fn in_shadow(position: &Vec3, sun: &Vec3, re: f64) -> bool {
    let along = position.dot(sun);
    if along >= 0.0 {
        return false;
    }
    let perp = *position - *sun * along;
    perp.norm() < re
}
