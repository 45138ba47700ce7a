use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use healthmon_core::analysis::{
    apply_sweep, extract_surface, hitting_functional, hitting_surface_correlation, is_subset, largest_diagonal_gamma,
    reduce_theorem1, SweepAxis,
};
use healthmon_core::solver::{oracle_solve, product_space_solve, value_iteration, DEFAULT_MAX_ITER};
use healthmon_core::{CriticalSet, HealthState, Model, ModelConfig, ModelParams, MonitoringMode};
use rayon::prelude::*;

use crate::error::{exit, CliError, Result};
use crate::export::{self, InclusionRecord, ReportRecord, SurfaceRecord};
use crate::render::{decile_sketch, Cell, GridRender};
use crate::{config_file, presets};

#[derive(Debug, Parser)]
#[command(
    name = "healthmon",
    version,
    about = "Solve and analyse remote patient monitoring models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Model file (TOML)
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in scenario: fig2a, fig2b, fig2c, fig2d, fig3a or fig3b
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveOpts {
    /// Stop once successive sweeps differ by at most this much
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Worker threads (default: all cores); results do not depend on it
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "o")]
    Ordinary,
    #[value(name = "i")]
    Intensive,
}

impl From<ModeArg> for MonitoringMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ordinary => MonitoringMode::Ordinary,
            ModeArg::Intensive => MonitoringMode::Intensive,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a model and write value, policy, surface and report files
    Solve {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the discount factor
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Cross-check the solver against an independent computation
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
    /// Solve a scenario over several values of one parameter
    Sweep {
        /// Preset name or model file
        scenario: String,
        #[arg(value_parser = parse_axis)]
        axis: SweepAxis,
        /// Comma-separated, strictly increasing
        #[arg(allow_hyphen_values = true)]
        values: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Discounted hitting functional E[gamma^tau] under a fixed mode
    Hitting {
        /// Preset name or model file
        scenario: String,
        mode: ModeArg,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Print the policy grid of a two-dimensional model
    Render {
        /// Previously exported policy.csv
        #[arg(long, conflicts_with_all = ["config", "preset"])]
        policy: Option<PathBuf>,
        #[command(flatten)]
        source: Source,
        /// Mark the switching frontier with `*`
        #[arg(long)]
        frontier: bool,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// List the built-in scenarios, optionally writing them as TOML files
    Presets {
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Compare value iteration with exhaustive policy enumeration
    Oracle {
        /// Grid size (default 3)
        #[arg(long = "H")]
        max_level: Option<u32>,
        #[command(flatten)]
        source: Source,
    },
    /// Compare a diagonal-sum critical set with its one-dimensional reduction
    Theorem1 {
        #[arg(long, default_value_t = 2)]
        c: u32,
        #[arg(long, default_value_t = 0.3)]
        gamma: f64,
        #[arg(long = "H", default_value_t = 30)]
        max_level: u32,
        /// Use unequal improvement rates for the two coordinates
        #[arg(long)]
        asymmetric: bool,
    },
    /// Solve the explicit (mode, state) chain and compare with the collapsed one
    ProductSpace {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

fn parse_axis(s: &str) -> std::result::Result<SweepAxis, String> {
    s.parse().map_err(|e: healthmon_core::Error| e.to_string())
}

pub fn resolve(source: &Source) -> Result<(String, ModelConfig, CriticalSet)> {
    match (&source.config, &source.preset) {
        (Some(path), _) => {
            let (cfg, cs) = config_file::load(path)?;
            Ok((path.display().to_string(), cfg, cs))
        }
        (None, Some(name)) => scenario(name),
        (None, None) => Err(CliError::Invalid("give --config <file> or --preset <name>".into())),
    }
}

/// A preset name, or else a model file path.
pub fn scenario(name: &str) -> Result<(String, ModelConfig, CriticalSet)> {
    if let Some(s) = presets::preset(name) {
        return Ok((s.name.into(), s.config, s.critical_set));
    }
    let path = Path::new(name);
    if path.exists() {
        let (cfg, cs) = config_file::load(path)?;
        return Ok((name.into(), cfg, cs));
    }
    Err(CliError::Invalid(format!(
        "unknown scenario {name:?}: not a preset ({}) or an existing file",
        presets::NAMES.join(", ")
    )))
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))
}

fn fmt_coords(h: &[u32]) -> String {
    let parts: Vec<String> = h.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn cells(policy: &healthmon_core::Policy) -> Vec<Cell> {
    policy.actions().iter().map(|a| Cell::from_action(*a)).collect()
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Solve {
            source,
            out: dir,
            gamma,
            opts,
        } => solve(&source, &dir, gamma, &opts, out),
        Command::Verify { which } => verify(which, out),
        Command::Sweep {
            scenario,
            axis,
            values,
            out: dir,
            opts,
        } => sweep(&scenario, axis, &values, &dir, &opts, out),
        Command::Hitting {
            scenario,
            mode,
            out: dir,
            tol,
        } => hitting(&scenario, mode.into(), &dir, tol, out),
        Command::Render {
            policy,
            source,
            frontier,
            opts,
        } => render(policy.as_deref(), &source, frontier, &opts, out),
        Command::Presets { write } => list_presets(write.as_deref(), out),
    }
}

fn w(out: &mut dyn Write, args: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(args).map_err(|e| CliError::io("<stdout>", e))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => { w($out, format_args!("{}\n", format_args!($($arg)*)))? };
}

fn solve(source: &Source, dir: &Path, gamma: Option<f64>, opts: &SolveOpts, out: &mut dyn Write) -> Result<i32> {
    let (name, mut cfg, cs) = resolve(source)?;
    if let Some(g) = gamma {
        cfg = cfg.with_gamma(g)?;
    }
    let model = Model::new(cfg, cs)?;
    let sol = value_iteration(&model, opts.tol, opts.max_iter)?;
    let surface = extract_surface(&sol.policy, &model);

    export::ensure_dir(dir)?;
    let lattice = model.lattice();
    export::write_state_csv(&dir.join("value.csv"), lattice, "value", sol.values.values())?;
    export::write_policy_csv(&dir.join("policy.csv"), lattice, &cells(&sol.policy))?;
    export::write_json(&dir.join("surface.json"), &SurfaceRecord::from(&surface))?;
    export::write_json(
        &dir.join("report.json"),
        &ReportRecord::new(&sol.report, opts.tol, opts.max_iter),
    )?;

    say!(
        out,
        "{name}: {} states, {} non-critical",
        model.num_states(),
        model.num_noncritical()
    );
    if let Some(grid) = GridRender::from_policy(&model, &sol.policy) {
        say!(out, "{}", grid.with_frontier(true));
    }
    say!(
        out,
        "iterations {}  residual {:.3e}  converged {}",
        sol.report.iterations,
        sol.report.final_residual,
        sol.report.converged
    );
    say!(out, "intensive states: {}", surface.intensive_set.len());
    if let Some(fit) = &surface.linear_fit {
        say!(
            out,
            "linear fit: intensive iff {} . h <= {}  (exact: {}, misclassified: {})",
            fmt_coords(&fit.weights),
            fit.threshold,
            fit.exact,
            fit.misclassified
        );
    }
    if let Some((weights, k)) = presets::preset(&name)
        .and_then(|s| s.expected)
        .and_then(|e| e.linear_fit)
    {
        let wanted = healthmon_core::analysis::LinearFit {
            weights: weights.clone(),
            threshold: k,
            exact: true,
            misclassified: 0,
        };
        let misses: Vec<String> = model
            .noncritical_indices()
            .filter(|&i| {
                let h = lattice.state(i);
                wanted.predicts_intensive(h.coords()) != (sol.policy.action(i) == Some(MonitoringMode::Intensive))
            })
            .map(|i| lattice.state(i).to_string())
            .collect();
        if misses.is_empty() {
            say!(out, "reference line {} . h <= {k}: reproduced", fmt_coords(&weights));
        } else {
            say!(
                out,
                "reference line {} . h <= {k}: differs at {} states: {}",
                fmt_coords(&weights),
                misses.len(),
                misses.join(" ")
            );
        }
    }
    say!(out, "wrote {}", dir.display());
    Ok(if sol.report.converged {
        exit::OK
    } else {
        exit::NOT_CONVERGED
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn grid_params(max_level: u32) -> ModelConfig {
    presets::preset("fig2b")
        .unwrap()
        .config
        .with_max_level(max_level)
        .expect("grid size is positive")
}

fn asymmetric_params(max_level: u32) -> Result<ModelConfig> {
    Ok(ModelConfig::new(ModelParams {
        dim: 2,
        max_level,
        lambda_o: vec![0.05, 0.05],
        lambda_i: vec![0.3, 0.1],
        mu_o: vec![0.45, 0.45],
        mu_i: vec![0.2, 0.4],
        cost_o: 0.0,
        cost_i: 1.0,
        cost_c: 35.0,
        gamma: 0.9,
    })?)
}

fn verify(which: Verify, out: &mut dyn Write) -> Result<i32> {
    let pass = match which {
        Verify::Oracle { max_level, source } => {
            let (cfg, cs) = if source.config.is_some() || source.preset.is_some() {
                let (_, cfg, cs) = resolve(&source)?;
                match max_level {
                    Some(h) => (cfg.with_max_level(h)?, cs),
                    None => (cfg, cs),
                }
            } else {
                (grid_params(max_level.unwrap_or(3)), CriticalSet::origin_only())
            };
            let model = Model::new(cfg, cs)?;
            let sol = value_iteration(&model, 1e-12, DEFAULT_MAX_ITER)?;
            let (v, pi) = oracle_solve(&model)?;
            let diff = sol.values.sup_distance(&v);
            let same = sol.policy == pi;
            let pass = sol.report.converged && diff <= 1e-6 && same;
            say!(
                out,
                "oracle: {} non-critical states, 2^{} policies enumerated",
                model.num_noncritical(),
                model.num_noncritical()
            );
            say!(
                out,
                "sup-norm value difference {diff:.3e} (bound 1e-6), identical policy: {same}"
            );
            pass
        }
        Verify::Theorem1 {
            c,
            gamma,
            max_level,
            asymmetric,
        } => {
            let cfg = if asymmetric {
                asymmetric_params(max_level)?
            } else {
                grid_params(max_level)
            };
            let cs = CriticalSet::L1Ball(c);
            let r = reduce_theorem1(&cfg, &cs, gamma)?;
            say!(
                out,
                "reduced chain: lambda'_o = {}, lambda'_i = {}",
                r.reduced_lambda_o,
                r.reduced_lambda_i
            );
            say!(
                out,
                "1D threshold h' <= {} (threshold form: {})",
                r.one_d_threshold,
                r.one_d_is_threshold
            );
            match r.two_d_threshold_k {
                Some(k) => say!(out, "2D intensive iff h_x + h_y <= {k}; k - c = {}", k - c),
                None => {
                    let off: Vec<String> = r.off_diagonal.iter().map(HealthState::to_string).collect();
                    say!(
                        out,
                        "2D set is not a diagonal threshold; off-diagonal states: {}",
                        off.join(" ")
                    )
                }
            }
            let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
            match largest_diagonal_gamma(&cfg, &cs, &grid)? {
                Some(g) => say!(out, "largest gamma in 0.1..0.9 with agreement (diagnostic): {g}"),
                None => say!(out, "no gamma in 0.1..0.9 gives agreement (diagnostic)"),
            }
            r.agrees
        }
        Verify::ProductSpace { source, tol } => {
            let source = if source.config.is_none() && source.preset.is_none() {
                Source {
                    config: None,
                    preset: Some("fig2a".into()),
                }
            } else {
                source
            };
            let (name, cfg, cs) = resolve(&source)?;
            let model = Model::new(cfg, cs)?;
            let collapsed = value_iteration(&model, tol, DEFAULT_MAX_ITER)?;
            let product = product_space_solve(&model, tol, DEFAULT_MAX_ITER)?;
            let gap = product.max_mode_gap();
            let to_collapsed = product.max_gap_to(&collapsed.values);
            say!(out, "{name}: product chain of {} states", 2 * model.num_states());
            say!(
                out,
                "max |V(o,h) - V(i,h)| = {gap:.3e}; max |V(m,h) - V(h)| = {to_collapsed:.3e} (bound 1e-9)"
            );
            product.report.converged && collapsed.report.converged && gap <= 1e-9 && to_collapsed <= 1e-9
        }
    };
    say!(out, "{}", verdict(pass));
    Ok(if pass { exit::OK } else { exit::INVALID })
}

fn parse_values(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("sweep value {v:?} is not a number")))
        })
        .collect()
}

struct SweepSolve {
    value: f64,
    model: Model,
    solution: healthmon_core::Solution,
}

fn sweep(name: &str, axis: SweepAxis, values: &str, dir: &Path, opts: &SolveOpts, out: &mut dyn Write) -> Result<i32> {
    let values = parse_values(values)?;
    let values = values.as_slice();
    let (label, base, cs) = scenario(name)?;
    if values.is_empty() {
        return Err(CliError::Invalid("sweep needs at least one value".into()));
    }
    if let Some(p) = values
        .windows(2)
        .find(|p| p[0].partial_cmp(&p[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(CliError::Invalid(format!(
            "sweep values must be strictly increasing ({} then {})",
            p[0], p[1]
        )));
    }
    let models = values
        .iter()
        .map(|&v| Ok((v, Model::new(apply_sweep(&base, axis, v)?, cs.clone())?)))
        .collect::<Result<Vec<_>>>()?;
    let pool = thread_pool(opts.threads)?;
    let solved: Vec<SweepSolve> = pool.install(|| {
        models
            .into_par_iter()
            .map(|(value, model)| {
                let solution = value_iteration(&model, opts.tol, opts.max_iter)?;
                Ok(SweepSolve { value, model, solution })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    export::ensure_dir(dir)?;
    let mut sets = Vec::new();
    let mut all_converged = true;
    say!(out, "{label}: sweeping {axis}");
    for s in &solved {
        let surface = extract_surface(&s.solution.policy, &s.model);
        let sub = dir.join(format!("{axis}_{}", s.value));
        export::ensure_dir(&sub)?;
        let lattice = s.model.lattice();
        export::write_policy_csv(&sub.join("policy.csv"), lattice, &cells(&s.solution.policy))?;
        export::write_json(&sub.join("surface.json"), &SurfaceRecord::from(&surface))?;
        all_converged &= s.solution.report.converged;
        say!(
            out,
            "{axis} = {}: {} intensive states, converged {}",
            s.value,
            surface.intensive_set.len(),
            s.solution.report.converged
        );
        sets.push(surface.intensive_set);
    }
    let nested: Vec<bool> = sets.windows(2).map(|p| is_subset(&p[0], &p[1])).collect();
    for (k, ok) in nested.iter().enumerate() {
        say!(out, "{} -> {}: nested {ok}", values[k], values[k + 1]);
    }
    let record = InclusionRecord {
        axis: axis.name().into(),
        values: values.to_vec(),
        intensive_counts: sets.iter().map(Vec::len).collect(),
        nested,
    };
    export::write_json(&dir.join("inclusion.json"), &record)?;
    say!(out, "wrote {}", dir.display());
    Ok(if all_converged { exit::OK } else { exit::NOT_CONVERGED })
}

fn hitting(name: &str, mode: MonitoringMode, dir: &Path, tol: f64, out: &mut dyn Write) -> Result<i32> {
    let (label, cfg, cs) = scenario(name)?;
    let model = Model::new(cfg, cs)?;
    let u = hitting_functional(&model, mode, tol)?;
    export::ensure_dir(dir)?;
    export::write_state_csv(&dir.join("hitting.csv"), model.lattice(), "u", u.values())?;

    say!(
        out,
        "{label}: E[gamma^tau] under {mode} monitoring ({} iterations)",
        u.iterations
    );
    if model.lattice().dim() == 2 {
        say!(
            out,
            "{}",
            decile_sketch(model.lattice().max_level(), u.values(), model.critical_mask())
        );
    }
    let other = match mode {
        MonitoringMode::Ordinary => MonitoringMode::Intensive,
        MonitoringMode::Intensive => MonitoringMode::Ordinary,
    };
    let v = hitting_functional(&model, other, tol)?;
    let (ui, uo) = match mode {
        MonitoringMode::Intensive => (&u, &v),
        MonitoringMode::Ordinary => (&v, &u),
    };
    let worst = model
        .noncritical_indices()
        .map(|i| ui.get(i) - uo.get(i))
        .fold(f64::NEG_INFINITY, f64::max);
    say!(out, "max over non-critical states of u_i - u_o: {worst:.3e}");
    let sol = value_iteration(&model, 1e-9, DEFAULT_MAX_ITER)?;
    match hitting_surface_correlation(&u, &sol.values, &model) {
        Some(rho) => say!(
            out,
            "Spearman rank correlation of u with Q_o - Q_i (our similarity measure): {rho:.4}"
        ),
        None => say!(out, "rank correlation undefined (constant input)"),
    }
    say!(out, "wrote {}", dir.join("hitting.csv").display());
    Ok(exit::OK)
}

fn render(
    policy: Option<&Path>,
    source: &Source,
    frontier: bool,
    opts: &SolveOpts,
    out: &mut dyn Write,
) -> Result<i32> {
    let grid = match policy {
        Some(path) => export::read_policy_csv(path)?.to_grid()?,
        None => {
            let (_, cfg, cs) = resolve(source)?;
            let model = Model::new(cfg, cs)?;
            let sol = value_iteration(&model, opts.tol, opts.max_iter)?;
            GridRender::from_policy(&model, &sol.policy)
                .ok_or_else(|| CliError::Invalid("can only render n = 2 models".into()))?
        }
    };
    w(out, format_args!("{}", grid.with_frontier(frontier)))?;
    Ok(exit::OK)
}

fn list_presets(write: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    if let Some(dir) = write {
        export::ensure_dir(dir)?;
    }
    for s in presets::all() {
        let file = config_file::ConfigFile::from_model(&s.config, &s.critical_set);
        say!(out, "{:6} H = {:2}  {:?}", s.name, s.config.max_level(), s.critical_set);
        if let Some(dir) = write {
            let path = dir.join(format!("{}.toml", s.name));
            std::fs::write(&path, file.to_toml()).map_err(|e| CliError::io(&path, e))?;
        }
    }
    Ok(exit::OK)
}
