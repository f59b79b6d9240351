//! Descent properties of the Lyapunov laws over random geometries.

use adr_core::astro::{ClassicalElements, Environment};
use adr_core::guidance::{
    dvlaw_direction, dvlaw_gradient, gve_matrix, qlaw_direction, qlaw_gradient, DvLawWeights,
    QLawWeights, TargetState,
};
use adr_core::math::Vec3;
use proptest::prelude::*;

const FD: f64 = 1e-6;

fn elements() -> impl Strategy<Value = ClassicalElements> {
    (
        6700.0..8200.0f64,
        0.0..0.05f64,
        0.05..3.09f64,
        0.0..6.28f64,
        0.0..6.28f64,
        0.0..6.28f64,
    )
        .prop_map(|(a, e, i, raan, argp, nu)| ClassicalElements {
            a,
            e,
            i,
            raan,
            argp,
            nu,
            epoch: 0.0,
        })
}

fn target() -> impl Strategy<Value = TargetState> {
    (6700.0..8200.0f64, 0.0..0.02f64, 0.05..3.09f64, 0.0..6.28f64)
        .prop_map(|(a, e, i, raan)| TargetState { a, e, i, raan })
}

fn unit(v: [f64; 3]) -> Option<Vec3> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (n > 1e-3).then(|| Vec3([v[0] / n, v[1] / n, v[2] / n]))
}

fn dot(g: &[f64; 4], r: &[f64; 4]) -> f64 {
    g.iter().zip(r).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn dvlaw_descends_fastest(
        el in elements(),
        tgt in target(),
        w in prop::array::uniform5(0.01..2.0f64),
        probes in prop::collection::vec(prop::array::uniform3(-1.0..1.0f64), 24),
    ) {
        let env = Environment::default();
        let w = DvLawWeights { lambda_e1: w[0], lambda_e2: w[1], lambda_ai: w[2], lambda_ei: w[3], lambda_araan: w[4], lambda_omega: 0.0 };
        let dir = dvlaw_direction(&el, &tgt, &w, &env);
        prop_assume!(dir.active);
        let b = gve_matrix(&el, &env);
        let g = dvlaw_gradient(&el, &tgt, &w, &env, FD);
        let best = dot(&g, &b.rates(dir.u));
        let scale = g.iter().map(|x| x.abs()).sum::<f64>() * b.rows.iter().flatten().map(|x| x.abs()).sum::<f64>();
        prop_assert!(best <= 1e-9 * scale);
        for p in probes.into_iter().filter_map(unit) {
            prop_assert!(best <= dot(&g, &b.rates(p)) + 1e-9 * scale);
        }
    }

    #[test]
    fn qlaw_descends_fastest(
        el in elements(),
        tgt in target(),
        w in prop::array::uniform4(0.01..2.0f64),
        probes in prop::collection::vec(prop::array::uniform3(-1.0..1.0f64), 24),
    ) {
        let env = Environment::default();
        let w = QLawWeights { w, ..QLawWeights::default() };
        let dir = qlaw_direction(&el, &tgt, &w, &env);
        prop_assume!(dir.active);
        let b = gve_matrix(&el, &env);
        let g = qlaw_gradient(&el, &tgt, &w, &env, FD);
        let best = dot(&g, &b.rates(dir.u));
        let scale = g.iter().map(|x| x.abs()).sum::<f64>() * b.rows.iter().flatten().map(|x| x.abs()).sum::<f64>();
        prop_assert!(best <= 1e-9 * scale);
        for p in probes.into_iter().filter_map(unit) {
            prop_assert!(best <= dot(&g, &b.rates(p)) + 1e-9 * scale);
        }
    }
}
