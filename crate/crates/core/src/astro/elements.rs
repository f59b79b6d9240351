use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::astro::Environment;
use crate::math::{wrap_two_pi, Float, Vec3};
use crate::{Error, Result};

/// Below this eccentricity ω is undefined and reported as 0.
pub const CIRCULAR_TOL: f64 = 1e-11;
/// Below this |sin i| Ω is undefined and reported as 0.
pub const EQUATORIAL_TOL: f64 = 1e-11;

/// Keplerian element set. Angles in radians, `a` in km, epoch in seconds
/// since J2000.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalElements {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    pub nu: f64,
    pub epoch: f64,
}

impl ClassicalElements {
    pub fn circular(a: f64, i: f64, raan: f64, arglat: f64, epoch: f64) -> Self {
        ClassicalElements {
            a,
            e: 0.0,
            i,
            raan: wrap_two_pi(raan),
            argp: 0.0,
            nu: wrap_two_pi(arglat),
            epoch,
        }
    }

    pub fn semi_latus_rectum(&self) -> f64 {
        self.a * (1.0 - self.e * self.e)
    }

    pub fn radius(&self) -> f64 {
        self.semi_latus_rectum() / (1.0 + self.e * self.nu.cos())
    }

    pub fn angular_momentum(&self, mu: f64) -> f64 {
        (mu * self.semi_latus_rectum()).sqrt()
    }

    pub fn arg_latitude(&self) -> f64 {
        wrap_two_pi(self.argp + self.nu)
    }

    pub fn mean_motion(&self, mu: f64) -> f64 {
        (mu / (self.a * self.a * self.a)).sqrt()
    }

    pub fn period(&self, mu: f64) -> f64 {
        2.0 * PI / self.mean_motion(mu)
    }

    pub fn validate(&self, env: &Environment) -> Result<()> {
        if !(self.a > env.re) || !self.a.is_finite() {
            return Err(Error::invalid(
                "semi-major axis must exceed the Earth radius",
            ));
        }
        if !(0.0..1.0).contains(&self.e) {
            return Err(Error::NotElliptic { e: self.e });
        }
        if !(0.0..=PI).contains(&self.i) {
            return Err(Error::invalid("inclination must lie in [0, π]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianState {
    pub position: Vec3,
    pub velocity: Vec3,
    pub epoch: f64,
}

pub fn elements_to_cartesian(el: &ClassicalElements, env: &Environment) -> CartesianState {
    let p = el.semi_latus_rectum();
    let r = p / (1.0 + el.e * el.nu.cos());
    let u = el.argp + el.nu;
    let (su, cu) = u.sin_cos();
    let (so, co) = el.raan.sin_cos();
    let (si, ci) = el.i.sin_cos();
    let (sw, cw) = el.argp.sin_cos();

    let position = Vec3::new(
        r * (co * cu - so * su * ci),
        r * (so * cu + co * su * ci),
        r * su * si,
    );
    let k = (env.mu / p).sqrt();
    let s = su + el.e * sw;
    let c = cu + el.e * cw;
    let velocity = Vec3::new(
        -k * (co * s + so * c * ci),
        -k * (so * s - co * c * ci),
        k * c * si,
    );
    CartesianState {
        position,
        velocity,
        epoch: el.epoch,
    }
}

pub fn cartesian_to_elements(
    state: &CartesianState,
    env: &Environment,
) -> Result<ClassicalElements> {
    let r = state.position;
    let v = state.velocity;
    let rn = r.norm();
    let h = r.cross(&v);
    let hn = h.norm();
    if !(hn > 1e-10 * rn * v.norm()) || !(rn > 0.0) {
        return Err(Error::DegenerateOrbit { h: hn });
    }
    let mu = env.mu;
    let ev = v.cross(&h) / mu - r / rn;
    let e = ev.norm();
    if e >= 1.0 {
        return Err(Error::NotElliptic { e });
    }
    let energy = 0.5 * v.dot(&v) - mu / rn;
    let a = -mu / (2.0 * energy);

    let hu = h / hn;
    let i = hu.z().max(-1.0).min(1.0).acos();
    let sin_i = (hu.x() * hu.x() + hu.y() * hu.y()).sqrt();

    let (raan, n_hat) = if sin_i < EQUATORIAL_TOL {
        (0.0, Vec3::new(1.0, 0.0, 0.0))
    } else {
        let raan = wrap_two_pi(hu.x().atan2(-hu.y()));
        (raan, Vec3::new(raan.cos(), raan.sin(), 0.0))
    };
    let m_hat = hu.cross(&n_hat);
    let u = wrap_two_pi(r.dot(&m_hat).atan2(r.dot(&n_hat)));

    let (e, argp, nu) = if e < CIRCULAR_TOL {
        (0.0, 0.0, u)
    } else {
        let w = wrap_two_pi(ev.dot(&m_hat).atan2(ev.dot(&n_hat)));
        (e, w, wrap_two_pi(u - w))
    };

    Ok(ClassicalElements {
        a,
        e,
        i,
        raan,
        argp,
        nu,
        epoch: state.epoch,
    })
}

pub fn true_to_eccentric(nu: f64, e: f64) -> f64 {
    let (s, c) = nu.sin_cos();
    ((1.0 - e * e).sqrt() * s).atan2(e + c)
}

pub fn true_to_mean(nu: f64, e: f64) -> f64 {
    let ea = true_to_eccentric(nu, e);
    wrap_two_pi(ea - e * ea.sin())
}

/// Kepler's equation by Newton iteration; converges in a handful of steps
/// for the eccentricities handled here.
pub fn mean_to_true(m: f64, e: f64) -> f64 {
    let m = wrap_two_pi(m);
    let mut ea = if e < 0.8 { m } else { PI };
    for _ in 0..50 {
        let f = ea - e * ea.sin() - m;
        let step = f / (1.0 - e * ea.cos());
        ea -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let (s, c) = ea.sin_cos();
    wrap_two_pi(((1.0 - e * e).sqrt() * s).atan2(c - e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn env() -> Environment {
        Environment::default()
    }

    #[test]
    fn circular_equatorial_at_node() {
        let el = ClassicalElements::circular(7000.0, 0.0, 0.0, 0.0, 0.0);
        let s = elements_to_cartesian(&el, &env());
        assert_eq!(s.position, Vec3::new(7000.0, 0.0, 0.0));
        assert!((s.velocity.norm() - (env().mu / 7000.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn apoapsis_radius() {
        let el = ClassicalElements {
            a: 7000.0,
            e: 0.1,
            i: 0.3,
            raan: 1.0,
            argp: 2.0,
            nu: PI,
            epoch: 0.0,
        };
        let s = elements_to_cartesian(&el, &env());
        assert!((s.position.norm() - 7700.0).abs() < 1e-9);
    }

    #[test]
    fn equatorial_circular_convention() {
        let el = ClassicalElements::circular(7000.0, 0.0, 0.0, 1.2, 0.0);
        let back = cartesian_to_elements(&elements_to_cartesian(&el, &env()), &env()).unwrap();
        assert_eq!(back.raan, 0.0);
        assert_eq!(back.argp, 0.0);
        assert!((back.nu - 1.2).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_rejected() {
        let s = CartesianState {
            position: Vec3::new(7000.0, 0.0, 0.0),
            velocity: Vec3::new(0.0, 11.0, 0.0),
            epoch: 0.0,
        };
        assert!(matches!(
            cartesian_to_elements(&s, &env()),
            Err(Error::NotElliptic { .. })
        ));
    }

    #[test]
    fn rectilinear_rejected() {
        let s = CartesianState {
            position: Vec3::new(7000.0, 0.0, 0.0),
            velocity: Vec3::new(1.0, 0.0, 0.0),
            epoch: 0.0,
        };
        assert!(matches!(
            cartesian_to_elements(&s, &env()),
            Err(Error::DegenerateOrbit { .. })
        ));
    }

    #[test]
    fn kepler_inverse() {
        for &e in &[0.0, 0.01, 0.3, 0.7] {
            for k in 0..12 {
                let nu = k as f64 * 0.5;
                let m = true_to_mean(nu, e);
                assert!((mean_to_true(m, e) - wrap_two_pi(nu)).abs() < 1e-10);
            }
        }
    }

    fn angle_close(a: f64, b: f64, tol: f64) -> bool {
        crate::math::minor_arc(a - b) < tol
    }

    proptest! {
        #[test]
        fn round_trip(a in 6600.0..9000.0f64, e in 1e-3..0.1f64, i in 0.05..3.09f64,
                      raan in 0.0..6.28f64, argp in 0.0..6.28f64, nu in 0.0..6.28f64) {
            let env = env();
            let el = ClassicalElements { a, e, i, raan, argp, nu, epoch: 10.0 };
            let s = elements_to_cartesian(&el, &env);
            let back = cartesian_to_elements(&s, &env).unwrap();
            prop_assert!(((back.a - a) / a).abs() < 1e-9);
            prop_assert!(((back.e - e) / e).abs() < 1e-9);
            prop_assert!((back.i - i).abs() < 1e-9);
            prop_assert!(angle_close(back.raan, raan, 1e-9));
            prop_assert!(angle_close(back.argp, argp, 1e-8));
            prop_assert!(angle_close(back.nu, nu, 1e-8));

            // energy and angular momentum consistent with (a, e)
            let energy = 0.5 * s.velocity.dot(&s.velocity) - env.mu / s.position.norm();
            prop_assert!(((energy + env.mu / (2.0 * a)) / energy).abs() < 1e-10);
            let h = s.position.cross(&s.velocity).norm();
            prop_assert!(((h - el.angular_momentum(env.mu)) / h).abs() < 1e-10);
        }
    }
}
