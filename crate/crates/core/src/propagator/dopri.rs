//! Dormand–Prince 5(4) with FSAL and the standard step-size controller.

use crate::math::Float;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<const N: usize> {
    pub rtol: f64,
    pub atol: [f64; N],
    pub max_step: f64,
    pub min_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFailure {
    StepUnderflow,
    NonFinite,
}

impl StepFailure {
    pub fn reason(self) -> &'static str {
        match self {
            StepFailure::StepUnderflow => "step size underflow",
            StepFailure::NonFinite => "non-finite state",
        }
    }
}

/// Integrates `y' = f(t, y)` from `t0` to `t1`, starting with step `h`.
/// Returns the state at `t1`, the last accepted step (a good first guess
/// for the next call) and the number of derivative evaluations.
pub fn integrate<const N: usize>(
    f: &mut impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t1: f64,
    mut h: f64,
    tol: &Tolerances<N>,
) -> Result<([f64; N], f64, usize), StepFailure> {
    let mut t = t0;
    let mut y = y0;
    let mut evals = 1;
    let mut k0 = f(t, &y);
    let mut last = h;
    h = h.min(tol.max_step);
    while t < t1 {
        let remaining = t1 - t;
        let final_step = h >= remaining;
        let step = if final_step { remaining } else { h };
        let mut k = [[0.0; N]; 7];
        k[0] = k0;
        let mut ys = y;
        for s in 1..7 {
            for j in 0..N {
                let mut acc = 0.0;
                for (m, km) in k.iter().enumerate().take(s) {
                    acc += A[s][m] * km[j];
                }
                ys[j] = y[j] + step * acc;
            }
            k[s] = f(t + C[s] * step, &ys);
        }
        evals += 6;
        // ys is the fifth-order solution (FSAL row)
        let mut err = 0.0f64;
        for j in 0..N {
            let mut e = 0.0;
            for (s, ks) in k.iter().enumerate() {
                e += E[s] * ks[j];
            }
            let sc = tol.atol[j] + tol.rtol * y[j].abs().max(ys[j].abs());
            let r = (step * e).abs() / sc;
            // f64::max would swallow a NaN
            if !(r <= err) {
                err = r;
            }
        }
        if !err.is_finite() || ys.iter().any(|v| !v.is_finite()) {
            return Err(StepFailure::NonFinite);
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).max(0.2).min(5.0)
        };
        if err <= 1.0 {
            t = if final_step { t1 } else { t + step };
            y = ys;
            k0 = k[6];
            if !final_step || step >= 0.5 * h {
                last = step;
            }
            h = (step * factor).min(tol.max_step);
            if final_step {
                break;
            }
        } else {
            h = step * factor.min(1.0);
            if h < tol.min_step {
                return Err(StepFailure::StepUnderflow);
            }
        }
    }
    Ok((y, last.max(tol.min_step), evals))
}
