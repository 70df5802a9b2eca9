use std::fs;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use superchsh::check::{self, CheckOutcome};
use superchsh::game::{self, play_with, GameReport, Tables, TrigScale, CLASSICAL_BOUND, PR_BOX};
use superchsh::maps::{single_superqubit, SingleOutcome};
use superchsh::optimizer::RestartOutcome;
use superchsh::{
    comm_complexity_bound, optimize, quantum_baseline, tsirelson_bound, GameError, GameParameters, MapKind,
    OptConfig, OptError, VERSION,
};

use crate::output::{emit, json, tables_csv};
use crate::{
    Cli, Command, Failure, Format, MapOpts, EXIT_BAD_PARAMS, EXIT_EXTRACTION, EXIT_FAILURE, EXIT_INFEASIBLE,
};

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Play { map, params, overrides } => cmd_play(cli, map, params, overrides),
        Command::Optimize {
            map,
            seed,
            box_bound,
            restarts,
            max_iters,
            threads,
            overrides,
        } => {
            let mut cfg = OptConfig {
                map: map.map.into(),
                seed: *seed,
                trig_scale: map.trig_scale.into(),
                experimental: map.experimental,
                threads: *threads,
                box_bounds: box_bound.map(|b| (b, b)),
                ..OptConfig::default()
            };
            if let Some(n) = restarts {
                cfg.restarts = *n;
            }
            if let Some(n) = max_iters {
                cfg.max_iters = *n;
            }
            apply_config_overrides(&mut cfg, overrides)?;
            cmd_optimize(cli, map, &cfg)
        }
        Command::Baselines => cmd_baselines(cli),
        Command::MapsDemo { alpha, beta, r } => cmd_maps_demo(cli, alpha, beta, *r),
        Command::Check { seed } => cmd_check(cli, *seed),
    }
}

fn bad_params(msg: impl Into<String>) -> Failure {
    Failure::new(EXIT_BAD_PARAMS, msg)
}

fn require_experimental(map: &MapOpts) -> Result<MapKind, Failure> {
    let kind: MapKind = map.map.into();
    if kind == MapKind::Trigonometric && !map.experimental {
        return Err(bad_params(
            "the bipartite trigonometric map is experimental; pass --experimental",
        ));
    }
    Ok(kind)
}

fn split_override(kv: &str) -> Result<(&str, &str), Failure> {
    kv.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| bad_params(format!("override `{kv}` is not KEY=VALUE")))
}

fn parse_f64(key: &str, v: &str) -> Result<f64, Failure> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| bad_params(format!("`{key}` needs a finite number, got `{v}`")))
}

pub fn load_params(source: &str, overrides: &[String]) -> Result<GameParameters, Failure> {
    let mut params = match source {
        "paper" => GameParameters::paper(),
        "zero" => GameParameters::zero(),
        path => {
            let text = fs::read_to_string(path).map_err(|e| bad_params(format!("cannot read {path}: {e}")))?;
            serde_json::from_str::<GameParameters>(&text)
                .map_err(|e| bad_params(format!("malformed parameter file {path}: {e}")))?
        }
    };
    for kv in overrides {
        let (k, v) = split_override(kv)?;
        let value = parse_f64(k, v)?;
        params.set(k, value).map_err(|e| bad_params(e.to_string()))?;
    }
    if !params.is_finite() {
        return Err(bad_params("parameters must be finite"));
    }
    Ok(params)
}

fn apply_config_overrides(cfg: &mut OptConfig, overrides: &[String]) -> Result<(), Failure> {
    for kv in overrides {
        let (k, v) = split_override(kv)?;
        let as_usize = || {
            v.parse::<usize>()
                .map_err(|_| bad_params(format!("`{k}` needs a non-negative integer, got `{v}`")))
        };
        match k {
            "restarts" => cfg.restarts = as_usize()?,
            "max_iters" => cfg.max_iters = as_usize()?,
            "feasibility_tol" => cfg.feasibility_tol = parse_f64(k, v)?,
            "r_max" => {
                let r = parse_f64(k, v)?;
                cfg.box_bounds = Some((r, cfg.box_bounds.map_or(f64::MAX, |b| b.1)));
            }
            "s_max" => {
                let s = parse_f64(k, v)?;
                cfg.box_bounds = Some((cfg.box_bounds.map_or(f64::MAX, |b| b.0), s));
            }
            "penalty_weights" => {
                cfg.penalty_weights = v
                    .split(':')
                    .map(|w| parse_f64(k, w))
                    .collect::<Result<Vec<_>, _>>()?;
            }
            other => return Err(bad_params(format!("unknown config key `{other}`"))),
        }
    }
    cfg.validate().map_err(|e| bad_params(e.to_string()))
}

#[derive(Serialize)]
struct PlayOutput<'a> {
    version: &'static str,
    command: &'static str,
    map: MapKind,
    seed: Option<u64>,
    params: GameParameters,
    tables: &'a Tables,
    p_win: f64,
    feasible: bool,
    worst_violation: f64,
    trig_scale: Option<TrigScale>,
}

impl<'a> PlayOutput<'a> {
    fn new(command: &'static str, report: &'a GameReport, seed: Option<u64>, trig: TrigScale) -> Self {
        Self {
            version: VERSION,
            command,
            map: report.map,
            seed,
            params: report.params,
            tables: &report.tables,
            p_win: report.p_win,
            feasible: report.feasible,
            worst_violation: report.worst_violation,
            trig_scale: (report.map == MapKind::Trigonometric).then_some(trig),
        }
    }
}

fn game_failure(e: GameError) -> Failure {
    match e {
        GameError::Extraction { .. } => Failure::new(EXIT_EXTRACTION, e.to_string()),
        GameError::NonFinite | GameError::Hilbert(_) => bad_params(e.to_string()),
    }
}

fn cmd_play(cli: &Cli, map: &MapOpts, source: &str, overrides: &[String]) -> Result<(), Failure> {
    let kind = require_experimental(map)?;
    let params = load_params(source, overrides)?;
    let trig: TrigScale = map.trig_scale.into();
    let report = play_with(&params, kind, trig).map_err(game_failure)?;
    let text = match cli.format {
        Format::Json => json(&PlayOutput::new("play", &report, None, trig))?,
        Format::Csv => tables_csv(&report.tables),
    };
    emit(cli, &text)
}

#[derive(Serialize)]
struct OptimizeOutput<'a> {
    #[serde(flatten)]
    base: PlayOutput<'a>,
    restarts_run: usize,
    best_restart: usize,
    restarts: usize,
    max_iters: usize,
    box_bounds: Option<(f64, f64)>,
    history: &'a [RestartOutcome],
}

fn cmd_optimize(cli: &Cli, map: &MapOpts, cfg: &OptConfig) -> Result<(), Failure> {
    require_experimental(map)?;
    let result = optimize(cfg).map_err(|e| match e {
        OptError::InfeasibleEverywhere { .. } => Failure::new(EXIT_INFEASIBLE, e.to_string()),
        OptError::InvalidConfig(_) => bad_params(e.to_string()),
        OptError::Game(g) => game_failure(g),
    })?;
    let text = match cli.format {
        Format::Json => json(&OptimizeOutput {
            base: PlayOutput::new("optimize", &result.report, Some(result.seed), cfg.trig_scale),
            restarts_run: result.restarts_run,
            best_restart: result.best_restart,
            restarts: cfg.restarts,
            max_iters: cfg.max_iters,
            box_bounds: cfg.box_bounds,
            history: &result.history,
        })?,
        Format::Csv => tables_csv(&result.report.tables),
    };
    emit(cli, &text)
}

#[derive(Serialize)]
struct Baseline {
    name: &'static str,
    role: &'static str,
    value: f64,
}

fn cmd_baselines(cli: &Cli) -> Result<(), Failure> {
    let rows = [
        Baseline {
            name: "classical",
            role: "best deterministic strategy, enumerated",
            value: game::classical_best(),
        },
        Baseline {
            name: "tsirelson",
            role: "quantum bound cos^2(pi/8)",
            value: tsirelson_bound(),
        },
        Baseline {
            name: "quantum-baseline",
            role: "DeWitt game on the Bell state at the standard CHSH angles",
            value: quantum_baseline(),
        },
        Baseline {
            name: "comm-complexity",
            role: "communication-complexity triviality threshold (3+sqrt 6)/6, reference only",
            value: comm_complexity_bound(),
        },
        Baseline {
            name: "pr-box",
            role: "PR-box, reference only",
            value: PR_BOX,
        },
    ];
    debug_assert_eq!(rows[0].value, CLASSICAL_BOUND);
    let text = match cli.format {
        Format::Json => json(&serde_json::json!({ "version": VERSION, "baselines": rows }))?,
        Format::Csv => {
            let mut s = String::from("name,value\n");
            for r in &rows {
                s.push_str(&format!("{},{}\n", r.name, r.value));
            }
            s
        }
    };
    emit(cli, &text)
}

#[derive(Serialize)]
struct DemoRow {
    map: MapKind,
    #[serde(flatten)]
    outcome: SingleOutcome,
}

fn parse_complex(name: &str, s: &str) -> Result<Complex64, Failure> {
    Complex64::from_str(s.trim()).map_err(|_| bad_params(format!("`{name}` is not a complex number: `{s}`")))
}

fn cmd_maps_demo(cli: &Cli, alpha: &str, beta: &str, r: f64) -> Result<(), Failure> {
    let alpha = parse_complex("alpha", alpha)?;
    let beta = parse_complex("beta", beta)?;
    let mut rows = Vec::new();
    for map in MapKind::ALL {
        let outcome = single_superqubit(map, alpha, beta, r).map_err(|e| match e {
            superchsh::maps::SingleError::State(_) => bad_params(e.to_string()),
            superchsh::maps::SingleError::Map(_) => Failure::new(EXIT_EXTRACTION, e.to_string()),
        })?;
        rows.push(DemoRow { map, outcome });
    }
    let text = match cli.format {
        Format::Json => json(&serde_json::json!({
            "version": VERSION,
            "alpha": [alpha.re, alpha.im],
            "beta": [beta.re, beta.im],
            "r": r,
            "maps": rows,
        }))?,
        Format::Csv => {
            let mut s = String::from("map,p0,p1,p_dot\n");
            for row in &rows {
                let o = row.outcome;
                s.push_str(&format!("{},{},{},{}\n", row.map, o.p0, o.p1, o.p_dot));
            }
            s
        }
    };
    emit(cli, &text)
}

fn cmd_check(cli: &Cli, seed: u64) -> Result<(), Failure> {
    let mut outcomes = check::run_all(seed);
    let published = superchsh::evaluate_paper_params(MapKind::ModifiedRogers);
    outcomes.push(match published {
        Ok(v) => CheckOutcome {
            name: "published-parameters".into(),
            passed: (0.9245..=0.9285).contains(&v),
            detail: format!("modified Rogers p_win = {v:.6}"),
        },
        Err(e) => CheckOutcome {
            name: "published-parameters".into(),
            passed: false,
            detail: e.to_string(),
        },
    });
    let all_passed = outcomes.iter().all(|o| o.passed);
    let text = match cli.format {
        Format::Json => json(&serde_json::json!({
            "version": VERSION,
            "seed": seed,
            "passed": all_passed,
            "checks": outcomes,
        }))?,
        Format::Csv => {
            let mut s = String::from("name,passed\n");
            for o in &outcomes {
                s.push_str(&format!("{},{}\n", o.name, o.passed));
            }
            s
        }
    };
    emit(cli, &text)?;
    if all_passed {
        Ok(())
    } else {
        Err(Failure::new(EXIT_FAILURE, "invariant check failed"))
    }
}
