//! Configuration-driven commands behind the `frontgate` binary: parse a JSON
//! config, dispatch the library, write deterministic CSV/graymap/JSON
//! artifacts plus a hashed manifest.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::json;

use crate::barrier;
use crate::config::*;
use crate::error::Error;
use crate::pde::{self, InitialDatum, Outcome, SimulationResult};
use crate::propagule;
use crate::reaction::{speed_sign_integral, FrequencyLaw, ReactionModel, WolbachiaParams};
use crate::report::{sha256_hex, OutputWriter, ReportBundle};
use crate::wavespeed;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Math(#[from] Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Exit codes: 2 config error, 3 mathematical infeasibility, 4 numerical failure.
pub fn exit_code(err: &CliError) -> i32 {
    match err {
        CliError::Config(_) => 2,
        CliError::Math(Error::InvalidParameter(_)) => 2,
        CliError::Math(Error::Degenerate(_)) | CliError::Math(Error::Infeasible(_)) => 3,
        CliError::Math(Error::Numerical(_)) => 4,
        CliError::Io(_) => 4,
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_config<T: DeserializeOwned>(json: &str) -> CliResult<T> {
    serde_json::from_str(json).map_err(|e| CliError::Config(e.to_string()))
}

/// Hash of the canonicalized (key-sorted, compact) config document.
pub fn config_hash(json: &str) -> CliResult<String> {
    let value: serde_json::Value =
        serde_json::from_str(json).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(sha256_hex(serde_json::to_string(&value).unwrap().as_bytes()))
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Run a named subcommand. `config_json` is required for every command except
/// `figures`, whose recipes are built in.
pub fn run_command(
    name: &str,
    config_json: Option<&str>,
    out_dir: &Path,
    threads: Option<usize>,
) -> CliResult<ReportBundle> {
    let need_cfg = || -> CliResult<&str> {
        config_json.ok_or_else(|| CliError::Config(format!("command \"{name}\" needs --config")))
    };
    match name {
        "speed" => cmd_speed(need_cfg()?, out_dir),
        "theta-c" => cmd_theta_c(need_cfg()?, out_dir),
        "sign-curve" => with_threads(threads, || cmd_sign_curve(need_cfg()?, out_dir))?,
        "barrier" => cmd_barrier(need_cfg()?, out_dir),
        "lstar-curve" => with_threads(threads, || cmd_lstar_curve(need_cfg()?, out_dir))?,
        "cstar" => cmd_cstar(need_cfg()?, out_dir),
        "jump" => cmd_jump(need_cfg()?, out_dir),
        "propagule" => cmd_propagule(need_cfg()?, out_dir),
        "simulate" => cmd_simulate(need_cfg()?, out_dir),
        "figures" => cmd_figures(out_dir, threads),
        other => Err(CliError::Config(format!("unknown command \"{other}\""))),
    }
}

fn cmd_speed(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    let cfg: SpeedConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    let model = cfg.model.build()?;
    let tol = cfg.tol.unwrap_or(1e-10);
    let result = wavespeed::bistable_speed(&model, tol)?;
    let mut w = OutputWriter::new(out)?;
    w.write_json(
        "speed.json",
        &json!({
            "c_star": result.speed,
            "residual": result.residual,
            "bracket": [result.bracket.0, result.bracket.1],
        }),
    )?;
    Ok(w.finish("speed", &hash, json!({ "tol": tol }))?)
}

fn cmd_theta_c(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    let cfg: ThetaCConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    let model = cfg.model.build()?;
    let mut w = OutputWriter::new(out)?;
    w.write_json(
        "theta_c.json",
        &json!({
            "theta": model.theta(),
            "theta_c": model.theta_c(),
            "mass": model.mass(),
            "degenerate": model.is_degenerate(),
        }),
    )?;
    Ok(w.finish("theta-c", &hash, json!({}))?)
}

fn cmd_sign_curve(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    use rayon::prelude::*;
    let cfg: SignCurveConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    if cfg.steps < 2 {
        return Err(CliError::Config("sign-curve needs at least 2 steps".into()));
    }
    let params = cfg.model.wolbachia_params()?;
    let model = ReactionModel::wolbachia(params)?;
    let rows: Vec<Option<Vec<f64>>> = (0..cfg.steps)
        .into_par_iter()
        .map(|i| {
            let eps = cfg.eps_min
                + (cfg.eps_max - cfg.eps_min) * i as f64 / (cfg.steps - 1) as f64;
            let p = WolbachiaParams { eps, ..params };
            match FrequencyLaw::wolbachia(p) {
                Ok(law) => {
                    let integral = speed_sign_integral(&model, &law).ok()?;
                    Some(vec![eps, integral])
                }
                Err(_) => None,
            }
        })
        .collect();
    let rows: Vec<Vec<f64>> = rows.into_iter().flatten().collect();
    let mut sign_change: Option<(f64, f64)> = None;
    for pair in rows.windows(2) {
        if pair[0][1].signum() != pair[1][1].signum() {
            sign_change = Some((pair[0][0], pair[1][0]));
            break;
        }
    }
    let mut w = OutputWriter::new(out)?;
    w.write_csv("sign_curve.csv", &["eps", "integral_f_h4"], &rows)?;
    w.write_json(
        "sign_change.json",
        &json!({
            "sign_change": sign_change.map(|(a, b)| vec![a, b]),
            "rows_valid": rows.len(),
        }),
    )?;
    Ok(w.finish("sign-curve", &hash, json!({ "steps": cfg.steps }))?)
}

fn cmd_barrier(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    let cfg: BarrierConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    let model = cfg.model.build()?;
    let set = barrier::enumerate_barriers(&model, cfg.c, cfg.l, cfg.tol.unwrap_or(1e-10))?;
    if set.solutions.is_empty() {
        return Err(CliError::Math(Error::Infeasible(format!(
            "no barrier: L = {} < L_*(C) = {}",
            cfg.l, set.l_star
        ))));
    }
    let mut w = OutputWriter::new(out)?;
    let mut summary = Vec::new();
    for (i, sol) in set.solutions.iter().enumerate() {
        let rows: Vec<Vec<f64>> =
            sol.xs.iter().zip(sol.p.iter()).map(|(x, p)| vec![*x, *p]).collect();
        w.write_csv(&format!("barrier_{i}.csv"), &["x", "p"], &rows)?;
        summary.push(json!({
            "kind": format!("{:?}", sol.kind),
            "alpha": sol.pair.alpha,
            "beta": sol.pair.beta,
            "coefficient": sol.pair.coefficient,
            "half_length": sol.pair.half_length,
            "interior_residual": sol.interior_residual(&model),
            "outer_residual": sol.outer_residual(&model),
        }));
    }
    w.write_json(
        "barriers.json",
        &json!({ "l_star": set.l_star, "count": set.solutions.len(), "solutions": summary }),
    )?;
    Ok(w.finish("barrier", &hash, json!({ "c": cfg.c, "l": cfg.l }))?)
}

fn cmd_lstar_curve(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    let cfg: LstarCurveConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    if cfg.steps < 2 {
        return Err(CliError::Config("lstar-curve needs at least 2 steps".into()));
    }
    let model = cfg.model.build()?;
    let c_star = wavespeed::bistable_speed(&model, 1e-10)?.speed;
    if cfg.c_min <= c_star {
        return Err(CliError::Math(Error::Infeasible(format!(
            "c_min = {} must exceed the wave speed c_* = {c_star}",
            cfg.c_min
        ))));
    }
    let cs: Vec<f64> = (0..cfg.steps)
        .map(|i| cfg.c_min + (cfg.c_max - cfg.c_min) * i as f64 / (cfg.steps - 1) as f64)
        .collect();
    let curve = barrier::l_star_curve(&model, &cs, 1e-10)?;
    let rows: Vec<Vec<f64>> = (0..cs.len())
        .map(|i| {
            vec![
                curve.c_values[i],
                curve.l_star[i],
                4.0 * curve.c_values[i] * curve.l_star[i],
                curve.beta_star[i],
                curve.alpha_star[i],
            ]
        })
        .collect();
    let mut w = OutputWriter::new(out)?;
    w.write_csv(
        "lstar_curve.csv",
        &["C", "L_star", "four_C_L_star", "beta_star", "alpha_star"],
        &rows,
    )?;
    Ok(w.finish("lstar-curve", &hash, json!({ "c_star": c_star, "steps": cfg.steps }))?)
}

fn cmd_cstar(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    let cfg: CstarConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    let model = cfg.model.build()?;
    let c = barrier::min_coefficient(&model, cfg.l, cfg.tol.unwrap_or(1e-6))?;
    let mut w = OutputWriter::new(out)?;
    w.write_json("cstar.json", &json!({ "l": cfg.l, "c_star_of_l": c }))?;
    Ok(w.finish("cstar", &hash, json!({}))?)
}

fn cmd_jump(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    let cfg: JumpConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    let model = cfg.model.build()?;
    let ratio = barrier::critical_jump(&model)?;
    let mut w = OutputWriter::new(out)?;
    w.write_json("jump.json", &json!({ "ratio": ratio, "exponent": ratio.ln() }))?;
    Ok(w.finish("jump", &hash, json!({}))?)
}

fn cmd_propagule(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    let cfg: PropaguleConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    let model = cfg.model.build()?;
    let law = match &cfg.law {
        Some(spec) => spec.build()?,
        None => FrequencyLaw::constant(),
    };
    let n = cfg.n_samples.unwrap_or(2048);
    let bubble = propagule::bubble_profile(&model, &law, cfg.alpha, n)?;
    // Full symmetric support [-L, L].
    let mut rows = Vec::with_capacity(2 * n - 1);
    for i in (1..bubble.xs.len()).rev() {
        rows.push(vec![-bubble.xs[i], bubble.v[i]]);
    }
    for i in 0..bubble.xs.len() {
        rows.push(vec![bubble.xs[i], bubble.v[i]]);
    }
    let mut w = OutputWriter::new(out)?;
    w.write_csv("propagule.csv", &["x", "v"], &rows)?;
    w.write_json(
        "propagule.json",
        &json!({ "alpha": bubble.alpha, "half_length": bubble.half_length }),
    )?;
    Ok(w.finish("propagule", &hash, json!({ "n_samples": n }))?)
}

fn write_simulation(
    w: &mut OutputWriter,
    result: &SimulationResult,
    hash: &str,
    probe_x: Option<f64>,
) -> CliResult<()> {
    let grid = &result.grid;
    let mut header: Vec<String> = vec!["t".into()];
    header.extend(grid.xs().iter().map(|x| crate::report::format_float(*x)));
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let rows: Vec<Vec<f64>> = result
        .snapshots
        .iter()
        .map(|(t, field)| {
            let mut row = Vec::with_capacity(field.len() + 1);
            row.push(*t);
            row.extend(field.iter().copied());
            row
        })
        .collect();
    w.write_csv("snapshots.csv", &header_refs, &rows)?;

    let heat: Vec<Vec<f64>> = result.snapshots.iter().map(|(_, f)| f.clone()).collect();
    w.write_pgm("heatmap.pgm", &heat, hash)?;

    let front_rows: Vec<Vec<f64>> = result
        .front_positions
        .iter()
        .map(|(t, x)| vec![*t, x.unwrap_or(f64::NAN)])
        .collect();
    w.write_csv("front.csv", &["t", "front_x"], &front_rows)?;

    let probe = probe_x.unwrap_or(grid.x_max - 1.0);
    let probe_value =
        crate::numerics::interp_clamped(&grid.xs(), &result.final_field, probe);
    w.write_json(
        "outcome.json",
        &json!({
            "outcome": match result.outcome {
                Outcome::Blocked => "Blocked",
                Outcome::Propagated => "Propagated",
                Outcome::Undecided => "Undecided",
            },
            "no_front": result.no_front,
            "probe_x": probe,
            "probe_value": probe_value,
            "final_front": result.front_positions.last().and_then(|(_, x)| *x),
        }),
    )?;
    Ok(())
}

fn cmd_simulate(cfg_json: &str, out: &Path) -> CliResult<ReportBundle> {
    let cfg: SimulateConfig = parse_config(cfg_json)?;
    let hash = config_hash(cfg_json)?;
    let grid = cfg.grid.build()?;
    let opts = pde::SimOptions {
        dt: cfg.dt,
        t_end: cfg.t_end,
        snapshot_every: cfg.snapshot_every,
        probe_x: cfg.probe_x,
        ..Default::default()
    };
    let mut w = OutputWriter::new(out)?;
    let result = match cfg.equation.as_str() {
        "heterogeneous" => {
            let gradient = cfg
                .gradient
                .as_ref()
                .ok_or_else(|| CliError::Config("heterogeneous needs \"gradient\"".into()))?
                .build()?;
            if cfg.law.is_some() || cfg.capacity.is_some() {
                return Err(CliError::Config(
                    "\"law\"/\"capacity\" are not valid for equation \"heterogeneous\"".into(),
                ));
            }
            let model = cfg.model.build()?;
            let init = cfg.init.build()?;
            pde::simulate_heterogeneous(&model, &gradient, &init, &grid, opts)?
        }
        "frequency_law" => {
            let law = cfg
                .law
                .as_ref()
                .ok_or_else(|| CliError::Config("frequency_law needs \"law\"".into()))?
                .build()?;
            if cfg.gradient.is_some() || cfg.capacity.is_some() {
                return Err(CliError::Config(
                    "\"gradient\"/\"capacity\" are not valid for equation \"frequency_law\"".into(),
                ));
            }
            let model = cfg.model.build()?;
            let init = cfg.init.build()?;
            pde::simulate_frequency_law(&model, &law, &init, &grid, opts)?
        }
        "two_population" => {
            let capacity_spec = cfg
                .capacity
                .as_ref()
                .ok_or_else(|| CliError::Config("two_population needs \"capacity\"".into()))?;
            if cfg.gradient.is_some() || cfg.law.is_some() {
                return Err(CliError::Config(
                    "\"gradient\"/\"law\" are not valid for equation \"two_population\"".into(),
                ));
            }
            let params = cfg.model.wolbachia_params()?;
            let model = cfg.model.build()?;
            let capacity = capacity_spec.sample(&grid)?;
            let chi = match cfg.init.build()? {
                InitialDatum::Front { x0 } => {
                    InitialDatum::Front { x0 }.materialize(&grid, &model, None)?
                }
                InitialDatum::Heaviside { x0 } => {
                    InitialDatum::Heaviside { x0 }.materialize(&grid, &model, None)?
                }
                _ => {
                    return Err(CliError::Config(
                        "two_population supports \"front\" or \"heaviside\" inits".into(),
                    ))
                }
            };
            let init = pde::two_population_init_from_profile(&params, &capacity, &chi)?;
            let res = pde::simulate_two_population(&params, &capacity, &init, &grid, opts)?;
            let rows: Vec<Vec<f64>> = (0..grid.n)
                .map(|i| vec![grid.x(i), res.final_infected[i], res.final_uninfected[i]])
                .collect();
            w.write_csv("final_densities.csv", &["x", "infected", "uninfected"], &rows)?;
            res.frequency
        }
        other => return Err(CliError::Config(format!("unknown equation \"{other}\""))),
    };
    write_simulation(&mut w, &result, &hash, cfg.probe_x)?;
    Ok(w.finish("simulate", &hash, json!({ "equation": cfg.equation, "dt": cfg.dt, "T": cfg.t_end }))?)
}

/// Built-in figure reproduction recipes. Parameters follow the documented
/// defaults of the incompatibility model; every recipe goes through the same
/// config path as user-supplied documents.
pub const FIGURE_RECIPES: &[(&str, &str, &str)] = &[
    (
        "fig1_sign_curve",
        "sign-curve",
        r#"{"model":{"kind":"wolbachia"},"eps_min":0.0,"eps_max":0.62,"steps":63}"#,
    ),
    (
        "fig2_left_blocking",
        "simulate",
        r#"{"model":{"kind":"wolbachia","delta":1.15,"d_s":0.6},"equation":"heterogeneous",
            "gradient":{"kind":"interval_constant","c":2.0,"l":0.5},
            "init":{"kind":"front","x0":-14.0}}"#,
    ),
    (
        "fig2_right_propagation",
        "simulate",
        r#"{"model":{"kind":"wolbachia","delta":1.15,"d_s":0.6},"equation":"heterogeneous",
            "gradient":{"kind":"interval_constant","c":1.0,"l":0.5},
            "init":{"kind":"front","x0":-14.0}}"#,
    ),
    (
        "fig3_left_blocking",
        "simulate",
        r#"{"model":{"kind":"wolbachia","delta":1.15,"d_s":0.6},"equation":"heterogeneous",
            "gradient":{"kind":"interval_constant","c":0.35,"l":3.0},
            "init":{"kind":"heaviside","x0":-15.0}}"#,
    ),
    (
        "fig3_right_propagation",
        "simulate",
        r#"{"model":{"kind":"wolbachia","delta":1.15,"d_s":0.6},"equation":"heterogeneous",
            "gradient":{"kind":"interval_constant","c":0.35,"l":3.0},
            "init":{"kind":"heaviside","x0":2.0}}"#,
    ),
    (
        "fig4_left_blocking",
        "simulate",
        r#"{"model":{"kind":"wolbachia","delta":1.15,"d_s":0.6},"equation":"heterogeneous",
            "gradient":{"kind":"parabolic","c":0.5,"l":6.0},
            "init":{"kind":"front","x0":-14.0}}"#,
    ),
    (
        "fig4_right_propagation",
        "simulate",
        r#"{"model":{"kind":"wolbachia","delta":1.15,"d_s":0.6},"equation":"heterogeneous",
            "gradient":{"kind":"parabolic","c":0.2,"l":6.0},
            "init":{"kind":"front","x0":-14.0}}"#,
    ),
    (
        "fig5_lstar_curve",
        "lstar-curve",
        r#"{"model":{"kind":"wolbachia"},"c_min":0.35,"c_max":2.0,"steps":18}"#,
    ),
    (
        "fig6_lstar_asymptote",
        "lstar-curve",
        r#"{"model":{"kind":"wolbachia"},"c_min":0.5,"c_max":30.0,"steps":25}"#,
    ),
    (
        "fig2pop_left_blocking",
        "simulate",
        r#"{"model":{"kind":"wolbachia"},"equation":"two_population",
            "capacity":{"kind":"exp_ramp","k_left":10.0,"c":0.2,"l":4.0},
            "init":{"kind":"front","x0":-14.0},"dt":0.02}"#,
    ),
    (
        "fig2pop_right_propagation",
        "simulate",
        r#"{"model":{"kind":"wolbachia"},"equation":"two_population",
            "capacity":{"kind":"exp_ramp","k_left":10.0,"c":0.1,"l":4.0},
            "init":{"kind":"front","x0":-14.0},"dt":0.02}"#,
    ),
];

fn cmd_figures(out: &Path, threads: Option<usize>) -> CliResult<ReportBundle> {
    let mut entries = Vec::new();
    for (name, command, cfg) in FIGURE_RECIPES {
        let sub = out.join(name);
        let bundle = run_command(command, Some(cfg), &sub, threads)?;
        entries.push(json!({
            "name": name,
            "command": command,
            "config_hash": bundle.config_hash,
            "files": bundle.files,
        }));
    }
    let mut w = OutputWriter::new(out)?;
    w.write_json("figures.json", &json!({ "figures": entries }))?;
    Ok(w.finish("figures", "builtin", json!({ "recipes": FIGURE_RECIPES.len() }))?)
}
