//! Derivative-free constrained local search over the drift orbits.
//!
//! Compass search in the unit box with an exterior quadratic penalty whose
//! weight grows over a few phases, followed by a feasible-only polish from
//! the best feasible point seen. A multistart driver reduces the local
//! results deterministically (objective, then lexicographic x), so the
//! outcome does not depend on the order in which starts are run.

use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{evaluate_tour, TourDefinition, TourSolution};
use crate::astro::Environment;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub seeds: usize,
    pub initial_step: f64,
    pub min_step: f64,
    pub penalty_weights: Vec<f64>,
    pub max_evaluations: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seeds: 8,
            initial_step: 0.25,
            min_step: 1e-3,
            penalty_weights: alloc::vec![10.0, 1e2, 1e3, 1e4],
            max_evaluations: 1500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalResult {
    /// physical design vector
    pub x: Vec<f64>,
    /// objective in report units (m/s or days)
    pub objective: f64,
    /// relative constraint value, ≤ 0 when feasible
    pub violation: f64,
    pub feasible: bool,
    pub evaluations: usize,
}

/// Penalty for design vectors whose evaluation fails (e.g. an altitude
/// floor or a drag re-solve limit).
const FAILED: f64 = 1e6;

#[derive(Clone, Copy)]
struct Eval {
    objective: f64,
    violation: f64,
    ok: bool,
}

struct Problem<'a> {
    def: &'a TourDefinition,
    env: &'a Environment,
    lo: Vec<f64>,
    hi: Vec<f64>,
    evaluations: usize,
    best_feasible: Option<(Vec<f64>, f64)>,
    least_violation: Option<(Vec<f64>, Eval)>,
}

impl<'a> Problem<'a> {
    fn new(def: &'a TourDefinition, env: &'a Environment) -> Self {
        let (lo, hi) = def.box_bounds(env);
        Problem {
            def,
            env,
            lo,
            hi,
            evaluations: 0,
            best_feasible: None,
            least_violation: None,
        }
    }

    fn to_physical(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(u, (l, h))| (l + u * (h - l)).max(*l).min(*h))
            .collect()
    }

    fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(x, (l, h))| ((x - l) / (h - l)).max(0.0).min(1.0))
            .collect()
    }

    fn evaluate(&mut self, u: &[f64]) -> Eval {
        self.evaluations += 1;
        let x = self.to_physical(u);
        let e = match evaluate_tour(self.def, &x, self.env) {
            Ok(sol) => Eval {
                objective: sol.objective_value(self.def.objective),
                violation: sol.constraint(self.def),
                ok: true,
            },
            Err(_) => Eval {
                objective: FAILED,
                violation: FAILED,
                ok: false,
            },
        };
        if e.ok {
            if e.violation <= 0.0 {
                let better = match &self.best_feasible {
                    None => true,
                    Some((bx, bo)) => match e.objective.total_cmp(bo) {
                        Ordering::Less => true,
                        Ordering::Equal => lex_less(u, bx),
                        Ordering::Greater => false,
                    },
                };
                if better {
                    self.best_feasible = Some((u.to_vec(), e.objective));
                }
            }
            let less = match &self.least_violation {
                None => true,
                Some((_, b)) => e.violation < b.violation,
            };
            if less {
                self.least_violation = Some((u.to_vec(), e));
            }
        }
        e
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .find(|(x, y)| x != y)
        .is_some_and(|(x, y)| x < y)
}

/// Scaled merit: objective/1000 plus `rho`·max(0, g)²; `rho = ∞` turns the
/// penalty into a barrier.
fn merit(e: &Eval, rho: f64) -> f64 {
    if !e.ok {
        return FAILED;
    }
    let g = e.violation.max(0.0);
    if rho.is_infinite() {
        return if g > 0.0 {
            f64::INFINITY
        } else {
            e.objective / 1000.0
        };
    }
    e.objective / 1000.0 + rho * g * g
}

/// Compass search from `u` with step halving; returns the final point and
/// its merit.
fn compass(
    p: &mut Problem<'_>,
    mut u: Vec<f64>,
    rho: f64,
    mut step: f64,
    min_step: f64,
    budget: usize,
) -> (Vec<f64>, f64) {
    let mut fu = merit(&p.evaluate(&u), rho);
    while step >= min_step && p.evaluations < budget {
        let mut best: Option<(Vec<f64>, f64)> = None;
        for j in 0..u.len() {
            for dir in [1.0, -1.0] {
                let mut trial = u.clone();
                trial[j] = (u[j] + dir * step).max(0.0).min(1.0);
                if trial[j] == u[j] {
                    continue;
                }
                let f = merit(&p.evaluate(&trial), rho);
                if f < fu && best.as_ref().is_none_or(|(_, bf)| f < *bf) {
                    best = Some((trial, f));
                }
            }
        }
        match best {
            Some((trial, f)) => {
                u = trial;
                fu = f;
            }
            None => step *= 0.5,
        }
    }
    (u, fu)
}

/// Penalty phases followed by a feasible-only polish, starting from the
/// physical point `x_start`.
pub fn local_search(
    def: &TourDefinition,
    x_start: &[f64],
    opts: &SearchOptions,
    env: &Environment,
) -> LocalResult {
    let mut p = Problem::new(def, env);
    let budget = opts.max_evaluations;
    let mut u = p.to_unit(x_start);
    let mut step = opts.initial_step;
    for &rho in &opts.penalty_weights {
        u = compass(&mut p, u, rho, step, opts.min_step, budget).0;
        step = (step * 0.5).max(4.0 * opts.min_step);
    }
    if let Some((uf, _)) = p.best_feasible.clone() {
        // the polish always runs to the minimum step so the result is
        // poll-stationary among feasible neighbours
        let polish_budget = p.evaluations + 8 * u.len() * 20 + budget / 4;
        compass(
            &mut p,
            uf,
            f64::INFINITY,
            4.0 * opts.min_step,
            opts.min_step,
            polish_budget,
        );
    }
    let evaluations = p.evaluations;
    match (p.best_feasible, p.least_violation) {
        (Some((u, objective)), _) => LocalResult {
            x: p_to_physical(def, env, &u),
            objective,
            violation: evaluate_violation(def, env, &u),
            feasible: true,
            evaluations,
        },
        (None, Some((u, e))) => LocalResult {
            x: p_to_physical(def, env, &u),
            objective: e.objective,
            violation: e.violation,
            feasible: false,
            evaluations,
        },
        (None, None) => LocalResult {
            x: x_start.to_vec(),
            objective: FAILED,
            violation: FAILED,
            feasible: false,
            evaluations,
        },
    }
}

fn p_to_physical(def: &TourDefinition, env: &Environment, u: &[f64]) -> Vec<f64> {
    Problem::new(def, env).to_physical(u)
}

fn evaluate_violation(def: &TourDefinition, env: &Environment, u: &[f64]) -> f64 {
    let x = p_to_physical(def, env, u);
    evaluate_tour(def, &x, env).map_or(FAILED, |s| s.constraint(def))
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// `x0` followed by Halton points spread over the box.
pub fn multistart_seeds(
    def: &TourDefinition,
    x0: &[f64],
    n: usize,
    env: &Environment,
) -> Vec<Vec<f64>> {
    let p = Problem::new(def, env);
    let dim = def.dimension();
    let mut seeds = alloc::vec![x0.to_vec()];
    for k in 1..n {
        let u: Vec<f64> = (0..dim)
            .map(|j| radical_inverse(k, PRIMES[j % PRIMES.len()]))
            .collect();
        seeds.push(p.to_physical(&u));
    }
    seeds
}

/// Deterministic reduction: feasible first, then objective, then
/// lexicographic x.
pub fn select_best(results: &[LocalResult]) -> Result<&LocalResult> {
    let best = results.iter().filter(|r| r.feasible).min_by(|a, b| {
        a.objective
            .total_cmp(&b.objective)
            .then_with(|| lex_cmp(&a.x, &b.x))
    });
    match best {
        Some(b) => Ok(b),
        None => Err(Error::Infeasible {
            violation: results
                .iter()
                .map(|r| r.violation)
                .fold(f64::INFINITY, f64::min),
        }),
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Sequential multistart optimization. Returns the assembled solution and
/// the optimal design vector.
pub fn optimize_tour(
    def: &TourDefinition,
    x0: &[f64],
    opts: &SearchOptions,
    env: &Environment,
) -> Result<(TourSolution, Vec<f64>)> {
    if def.dimension() == 0 {
        let sol = evaluate_tour(def, &[], env)?;
        if sol.constraint(def) > 0.0 {
            return Err(Error::Infeasible {
                violation: sol.constraint(def),
            });
        }
        return Ok((sol, Vec::new()));
    }
    let results: Vec<LocalResult> = multistart_seeds(def, x0, opts.seeds.max(1), env)
        .iter()
        .map(|s| local_search(def, s, opts, env))
        .collect();
    let best = select_best(&results)?;
    let sol = evaluate_tour(def, &best.x, env)?;
    Ok((sol, best.x.clone()))
}
