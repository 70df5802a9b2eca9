//! Penalized Nelder–Mead search over the ten game parameters.
//!
//! Every restart draws a starting point from its own ChaCha stream (stream
//! index = restart index), climbs through an increasing schedule of quadratic
//! penalty weights on the 36 outcome-probability constraints, and finishes
//! with a barrier polish that ranks any infeasible point below every feasible
//! one. Restarts are independent, so running `n` restarts is a prefix of
//! running `n' > n` with the same seed.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::OptError;
use crate::game::{self, outcome_tables_with, win_probability, GameReport, TrigScale, FEASIBILITY_TOL};
use crate::hilbert::GameParameters;
use crate::maps::MapKind;

const DIM: usize = GameParameters::DIM;
type Point = [f64; DIM];

/// Objective value assigned to points whose probabilities cannot be extracted.
const INVALID_OBJECTIVE: f64 = 1e6;
/// Range for the initial `p, q, r_i, s_j`.
const SCALE_INIT: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    pub map: MapKind,
    pub restarts: usize,
    /// Nelder–Mead iteration budget per restart, shared by all stages.
    pub max_iters: usize,
    pub seed: u64,
    /// Strictly increasing quadratic penalty weights.
    pub penalty_weights: Vec<f64>,
    pub feasibility_tol: f64,
    /// `(r_max, s_max)` for the compactified variant; parameters are clamped.
    pub box_bounds: Option<(f64, f64)>,
    pub trig_scale: TrigScale,
    /// The bipartite trigonometric rule is experimental and must be opted into.
    pub experimental: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            map: MapKind::ModifiedRogers,
            restarts: 200,
            max_iters: 2000,
            seed: 0,
            penalty_weights: vec![1e1, 1e3, 1e5],
            feasibility_tol: FEASIBILITY_TOL,
            box_bounds: None,
            trig_scale: TrigScale::Rotation,
            experimental: false,
            threads: None,
        }
    }
}

impl OptConfig {
    pub fn for_map(map: MapKind) -> Self {
        Self {
            map,
            experimental: map == MapKind::Trigonometric,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), OptError> {
        let bad = |msg: &str| Err(OptError::InvalidConfig(msg.to_string()));
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if self.penalty_weights.is_empty() {
            return bad("penalty schedule is empty");
        }
        if self.penalty_weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return bad("penalty weights must be positive and finite");
        }
        if self.penalty_weights.windows(2).any(|w| w[1] <= w[0]) {
            return bad("penalty weights must be strictly increasing");
        }
        if !(self.feasibility_tol >= 0.0 && self.feasibility_tol.is_finite()) {
            return bad("feasibility_tol must be a finite non-negative number");
        }
        if let Some((r, s)) = self.box_bounds {
            if !(r >= 0.0 && s >= 0.0 && r.is_finite() && s.is_finite()) {
                return bad("box bounds must be finite and non-negative");
            }
        }
        if self.map == MapKind::Trigonometric && !self.experimental {
            return bad("the bipartite trigonometric map is experimental; enable it explicitly");
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1");
        }
        Ok(())
    }

    fn project(&self, x: &Point) -> GameParameters {
        let params = GameParameters::from_array(*x);
        match self.box_bounds {
            Some((r, s)) => params.clamped(r, s),
            None => params,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub restart: usize,
    pub p_win: f64,
    pub feasible: bool,
    pub worst_violation: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub map: MapKind,
    pub seed: u64,
    pub best: GameParameters,
    pub p_win: f64,
    pub feasible: bool,
    pub worst_violation: f64,
    pub best_restart: usize,
    pub restarts_run: usize,
    pub history: Vec<RestartOutcome>,
    pub report: GameReport,
}

/// `(feasible, worst_violation)` over all 36 mapped probabilities.
/// Parameters whose probabilities cannot be extracted are infeasible with an
/// infinite violation.
pub fn feasibility(params: &GameParameters, map: MapKind) -> (bool, f64) {
    feasibility_with(params, map, TrigScale::default(), FEASIBILITY_TOL)
}

pub fn feasibility_with(params: &GameParameters, map: MapKind, trig: TrigScale, tol: f64) -> (bool, f64) {
    match outcome_tables_with(params, map, trig) {
        Ok(tables) => {
            let worst = game::worst_violation(&tables);
            (worst <= tol, worst)
        }
        Err(_) => (false, f64::INFINITY),
    }
}

/// Game value at the published winning parameters.
pub fn evaluate_paper_params(map: MapKind) -> Result<f64, OptError> {
    let tables = outcome_tables_with(&GameParameters::paper(), map, TrigScale::default())?;
    Ok(win_probability(&tables))
}

struct Evaluation {
    p_win: f64,
    penalty: f64,
    worst: f64,
}

fn evaluate(cfg: &OptConfig, x: &Point) -> Option<Evaluation> {
    let params = cfg.project(x);
    let tables = outcome_tables_with(&params, cfg.map, cfg.trig_scale).ok()?;
    let mut penalty = 0.0;
    let mut worst = 0.0f64;
    for &v in tables.iter().flatten().flatten() {
        let violation = if v < 0.0 {
            -v
        } else if v > 1.0 {
            v - 1.0
        } else {
            0.0
        };
        penalty += violation * violation;
        worst = worst.max(violation);
    }
    let p_win = win_probability(&tables);
    p_win.is_finite().then_some(Evaluation { p_win, penalty, worst })
}

fn initial_point(cfg: &OptConfig, rng: &mut ChaCha8Rng) -> Point {
    let mut x = [0.0; DIM];
    for (k, v) in x.iter_mut().enumerate() {
        *v = if k >= 6 {
            // angles in (-π, π]
            PI - rng.random::<f64>() * 2.0 * PI
        } else {
            let half_width = match (k, cfg.box_bounds) {
                (2 | 3, Some((r, _))) => r,
                (4 | 5, Some((_, s))) => s,
                _ => SCALE_INIT,
            };
            rng.random_range(-half_width..=half_width)
        };
    }
    x
}

struct NmOutcome {
    x: Point,
    fx: f64,
    iterations: usize,
}

/// Nelder–Mead with standard coefficients on an axis-aligned initial simplex.
fn nelder_mead(f: &mut impl FnMut(&Point) -> f64, x0: &Point, step: f64, max_iters: usize) -> NmOutcome {
    const FTOL: f64 = 1e-13;
    const XTOL: f64 = 1e-10;

    let mut simplex: Vec<(Point, f64)> = Vec::with_capacity(DIM + 1);
    simplex.push((*x0, f(x0)));
    for k in 0..DIM {
        let mut v = *x0;
        v[k] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }

    let mut iterations = 0;
    while iterations < max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best_f, worst_f) = (simplex[0].1, simplex[DIM].1);
        let spread = (0..DIM)
            .map(|k| {
                simplex
                    .iter()
                    .map(|(v, _)| (v[k] - simplex[0].0[k]).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (worst_f - best_f).abs() <= FTOL && spread <= XTOL {
            break;
        }
        if spread <= XTOL * 1e-3 {
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; DIM];
        for (v, _) in &simplex[..DIM] {
            for k in 0..DIM {
                centroid[k] += v[k] / DIM as f64;
            }
        }
        let along = |t: f64| -> Point {
            let mut p = [0.0; DIM];
            for k in 0..DIM {
                p[k] = centroid[k] + t * (simplex[DIM].0[k] - centroid[k]);
            }
            p
        };

        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            simplex[DIM] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[DIM - 1].1 {
            simplex[DIM] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[DIM].1 {
            let xc = along(-0.5);
            (xc, f(&xc))
        } else {
            let xc = along(0.5);
            (xc, f(&xc))
        };
        if fc < fr.min(simplex[DIM].1) {
            simplex[DIM] = (xc, fc);
            continue;
        }
        let best = simplex[0].0;
        for (v, fv) in simplex.iter_mut().skip(1) {
            for k in 0..DIM {
                v[k] = best[k] + 0.5 * (v[k] - best[k]);
            }
            *fv = f(v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    NmOutcome {
        x: simplex[0].0,
        fx: simplex[0].1,
        iterations,
    }
}

fn run_restart(cfg: &OptConfig, index: usize) -> (RestartOutcome, GameParameters) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut x = initial_point(cfg, &mut rng);

    let stages = cfg.penalty_weights.len() + 1;
    let per_stage = (cfg.max_iters / stages).max(1);
    let mut iterations = 0;
    let mut step = 0.4;
    for &weight in &cfg.penalty_weights {
        let mut objective = |p: &Point| match evaluate(cfg, p) {
            Some(e) => -(e.p_win - weight * e.penalty),
            None => INVALID_OBJECTIVE,
        };
        let out = nelder_mead(&mut objective, &x, step, per_stage);
        iterations += out.iterations;
        x = out.x;
        step = (step * 0.25).max(1e-3);
        let _ = out.fx;
    }

    let tol = cfg.feasibility_tol;
    // Barrier polish: feasible points score -p_win in [-1.5, 0]; infeasible ones
    // score above 1 and are ordered by their worst violation.
    let mut barrier = |p: &Point| match evaluate(cfg, p) {
        Some(e) if e.worst <= tol => -e.p_win,
        Some(e) => 1.0 + 1e3 * e.worst,
        None => INVALID_OBJECTIVE,
    };
    let budget = cfg.max_iters.saturating_sub(iterations).max(per_stage);
    let out = nelder_mead(&mut barrier, &x, 1e-3, budget);
    iterations += out.iterations;
    x = out.x;

    let params = cfg.project(&x);
    let outcome = match evaluate(cfg, &x) {
        Some(e) => RestartOutcome {
            restart: index,
            p_win: e.p_win,
            feasible: e.worst <= tol,
            worst_violation: e.worst,
            iterations,
        },
        None => RestartOutcome {
            restart: index,
            p_win: f64::NAN,
            feasible: false,
            worst_violation: f64::INFINITY,
            iterations,
        },
    };
    (outcome, params)
}

/// Runs `cfg.restarts` independent searches and returns the best feasible one.
pub fn optimize(cfg: &OptConfig) -> Result<OptResult, OptError> {
    cfg.validate()?;
    let run = || -> Vec<(RestartOutcome, GameParameters)> {
        (0..cfg.restarts)
            .into_par_iter()
            .map(|k| run_restart(cfg, k))
            .collect()
    };
    let runs = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| OptError::InvalidConfig(e.to_string()))?
            .install(run),
        None => run(),
    };

    // max by value, lowest restart index on ties
    let best = runs
        .iter()
        .filter(|(o, _)| o.feasible)
        .fold(None::<&(RestartOutcome, GameParameters)>, |acc, cand| match acc {
            Some(cur) if cur.0.p_win >= cand.0.p_win => Some(cur),
            _ => Some(cand),
        });

    let Some((outcome, params)) = best else {
        let best_violation = runs
            .iter()
            .map(|(o, _)| o.worst_violation)
            .fold(f64::INFINITY, f64::min);
        return Err(OptError::InfeasibleEverywhere {
            map: cfg.map,
            best_violation,
        });
    };

    let tables = outcome_tables_with(params, cfg.map, cfg.trig_scale)?;
    let mut report = GameReport::from_tables(cfg.map, *params, tables);
    report.feasible = report.worst_violation <= cfg.feasibility_tol;
    Ok(OptResult {
        map: cfg.map,
        seed: cfg.seed,
        best: *params,
        p_win: report.p_win,
        feasible: report.feasible,
        worst_violation: report.worst_violation,
        best_restart: outcome.restart,
        restarts_run: runs.len(),
        history: runs.iter().map(|(o, _)| *o).collect(),
        report,
    })
}
