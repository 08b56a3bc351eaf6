//! Experiment runner: deterministic CSV sweeps over the closed-form rate
//! pipeline, Monte-Carlo validation, power-scaling studies, and GP power
//! allocation.
//!
//! All floating-point output is printed with nine significant digits and a
//! `.` decimal separator; rows are generated in a fixed order, so repeated
//! runs with the same configuration and seeds are byte-identical.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use cfrelay_core::config::{watts_to_dbm, SystemConfig};
use cfrelay_core::poweralloc::{self, Algorithm1Options, CoefficientForm};
use cfrelay_core::scaling::{
    self, LimitKind, ScalingScenario, ScenarioKind, ScenarioLimits,
};
use cfrelay_core::se;
use cfrelay_core::{montecarlo, Scene};

#[derive(Parser)]
#[command(
    name = "cfrelay",
    about = "Two-way cell-free relaying: spectral-efficiency evaluation and experiments",
    version
)]
struct Cli {
    /// Configuration file (TOML). Built-in defaults are used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. --set num_aps=100 (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the resolved configuration and derived quantities.
    Describe,
    /// Closed-form SINRs and rates at the configured operating point.
    SeExact(OutArg),
    /// Monte-Carlo estimate of the per-pair rates and the sum SE.
    SeMc(SeMcArgs),
    /// Asymptotic power-scaling evaluation against the exact rates.
    Scaling(ScalingArgs),
    /// Sum-SE power allocation compared with the uniform split.
    Optimize(OptimizeArgs),
    /// Named experiment presets reproducing the evaluation figures.
    Figures(FiguresArgs),
}

#[derive(Args)]
struct OutArg {
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeMcArgs {
    /// Number of channel realizations.
    #[arg(long, default_value_t = 1000)]
    realizations: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    /// Scaling scenario.
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    /// Pilot power exponent (scenarios a, c).
    #[arg(long, default_value_t = 1.0)]
    pilot_exp: f64,
    /// Uplink power exponent (scenarios b, c).
    #[arg(long, default_value_t = 1.0)]
    uplink_exp: f64,
    /// Relay power exponent (scenarios b, c).
    #[arg(long, default_value_t = 1.0)]
    relay_exp: f64,
    /// Pilot energy in dB (normalized).
    #[arg(long, default_value_t = 10.0)]
    e_p_db: f64,
    /// Uplink energy in dB (normalized).
    #[arg(long, default_value_t = 10.0)]
    e_u_db: f64,
    /// Relay energy in dB (normalized).
    #[arg(long, default_value_t = 10.0)]
    e_r_db: f64,
    /// AP counts to evaluate (nested topology prefixes).
    #[arg(long, value_delimiter = ',', default_values_t = vec![100usize, 200, 400])]
    m_list: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    A,
    B,
    C,
}

impl From<ScenarioArg> for ScenarioKind {
    fn from(value: ScenarioArg) -> ScenarioKind {
        match value {
            ScenarioArg::A => ScenarioKind::A,
            ScenarioArg::B => ScenarioKind::B,
            ScenarioArg::C => ScenarioKind::C,
        }
    }
}

#[derive(Args)]
struct OptimizeArgs {
    /// Total power budget in dB (normalized).
    #[arg(long, default_value_t = 10.0)]
    budget_db: f64,
    /// Minimum per-pair rate in bits/s/Hz.
    #[arg(long, default_value_t = 0.0)]
    r_min: f64,
    /// Trust-region parameter.
    #[arg(long, default_value_t = 1.1)]
    theta: f64,
    /// Convergence tolerance on the iterate change.
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    /// Use the decoupled interference coefficients instead of the exact form.
    #[arg(long)]
    decoupled: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Experiment preset.
    #[arg(long, value_enum)]
    name: ExperimentName,
    /// Seeds to average over.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// AP counts (desk-scale default per experiment, capped at 400).
    #[arg(long, value_delimiter = ',')]
    m_list: Option<Vec<usize>>,
    /// Monte-Carlo realizations for experiments that use them.
    #[arg(long, default_value_t = 1000)]
    realizations: usize,
    /// Swept config key for the custom experiment.
    #[arg(long)]
    sweep: Option<String>,
    /// Sweep values for the custom experiment.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Custom,
}

/// A failure with its process exit code: 1 usage, 2 numerical/runtime.
pub struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; anything else is a
            // usage error.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => SystemConfig::from_path(path).map_err(|e| Failure::usage(e.to_string()))?,
        None => SystemConfig::default(),
    };
    for entry in &cli.overrides {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--set expects KEY=VALUE, got `{entry}`")))?;
        cfg.set_field(key.trim(), value.trim())
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;

    match cli.command {
        Command::Describe => describe(&cfg),
        Command::SeExact(args) => se_exact(&cfg, args),
        Command::SeMc(args) => se_mc(&cfg, args),
        Command::Scaling(args) => scaling_cmd(&cfg, args),
        Command::Optimize(args) => optimize(&cfg, args),
        Command::Figures(args) => figures(&cfg, args),
    }
}

pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

fn write_csv(
    out: Option<&PathBuf>,
    header: &str,
    rows: &[Vec<String>],
) -> Result<(), Failure> {
    let mut text = String::with_capacity(rows.len() * 64 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .map_err(|e| Failure::runtime(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Resolved parameter dump, including the derived power normalization.
fn describe(cfg: &SystemConfig) -> Result<(), Failure> {
    let np = cfg.noise_power_w();
    let p = cfg.normalized_powers();
    println!("num_aps = {}", cfg.num_aps);
    println!("antennas_per_ap = {}", cfg.antennas_per_ap);
    println!("num_pairs = {}", cfg.num_pairs);
    println!("area_side_m = {}", cfg.area_side_m);
    println!("coherence_symbols = {}", cfg.coherence_symbols);
    println!("pilot_symbols = {}", cfg.pilot_symbols);
    println!("carrier_freq_hz = {}", cfg.carrier_freq_hz);
    println!("bandwidth_hz = {}", cfg.bandwidth_hz);
    println!("noise_figure_db = {}", cfg.noise_figure_db);
    println!("noise_temp_k = {}", cfg.noise_temp_k);
    println!("boltzmann_j_per_k = {}", cfg.boltzmann_j_per_k);
    println!("pilot_power_dbm = {}", cfg.pilot_power_dbm);
    println!("uplink_power_dbm = {}", cfg.uplink_power_dbm);
    println!("relay_power_dbm = {}", cfg.relay_power_dbm);
    println!("rng_seed = {}", cfg.rng_seed);
    println!("derived.noise_power_w = {}", fmt9(np));
    println!("derived.noise_power_dbm = {}", fmt9(watts_to_dbm(np)));
    println!("derived.pilot_snr = {}", fmt9(p.pilot));
    println!("derived.uplink_snr = {}", fmt9(p.uplink));
    println!("derived.relay_snr = {}", fmt9(p.relay));
    println!("derived.prelog = {}", fmt9(cfg.prelog()));
    Ok(())
}

fn build_scene(cfg: &SystemConfig) -> Result<Scene, Failure> {
    Scene::from_config(cfg).map_err(|e| Failure::usage(e.to_string()))
}

fn se_exact(cfg: &SystemConfig, args: OutArg) -> Result<(), Failure> {
    let scene = build_scene(cfg)?;
    let pa = scene.full_power_allocation(cfg);
    let report = se::rate_report(&scene.ls, &pa, cfg).map_err(|e| Failure::runtime(e.to_string()))?;
    let mut rows = Vec::new();
    for i in 0..cfg.num_pairs {
        rows.push(vec![
            i.to_string(),
            fmt9(report.gamma_mac_pair[i]),
            fmt9(report.gamma_mac_dir[0][i]),
            fmt9(report.gamma_mac_dir[1][i]),
            fmt9(report.gamma_bc_dir[0][i]),
            fmt9(report.gamma_bc_dir[1][i]),
            fmt9(report.r_mac_pair[i]),
            fmt9(report.r_bc_pair[i]),
            fmt9(report.r_pair[i]),
        ]);
    }
    rows.push(vec![
        "sum".into(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        fmt9(report.sum_se),
    ]);
    write_csv(
        args.out.as_ref(),
        "pair,gamma_mac_pair,gamma_mac_a,gamma_mac_b,gamma_bc_a,gamma_bc_b,rate_mac,rate_bc,rate_pair",
        &rows,
    )
}

fn se_mc(cfg: &SystemConfig, args: SeMcArgs) -> Result<(), Failure> {
    if args.realizations < 2 {
        return Err(Failure::usage("--realizations must be at least 2"));
    }
    let scene = build_scene(cfg)?;
    let pa = scene.full_power_allocation(cfg);
    let exact = se::rate_report(&scene.ls, &pa, cfg).map_err(|e| Failure::runtime(e.to_string()))?;
    let (mc_report, mc_sum) = montecarlo::mc_rate_report(
        &scene.ls,
        &pa,
        cfg.antennas_per_ap,
        cfg.prelog(),
        args.realizations,
        cfg.rng_seed,
    );
    let mut rows = Vec::new();
    for i in 0..cfg.num_pairs {
        rows.push(vec![
            format!("pair{i}"),
            fmt9(exact.r_pair[i]),
            fmt9(mc_report.r_pair[i]),
            String::new(),
        ]);
    }
    rows.push(vec![
        "sum".into(),
        fmt9(exact.sum_se),
        fmt9(mc_sum.value),
        fmt9(mc_sum.std_error),
    ]);
    write_csv(
        args.out.as_ref(),
        "scope,closed_form,mc_estimate,mc_std_error",
        &rows,
    )
}

fn limits_label(limits: ScenarioLimits) -> &'static str {
    match limits.pair_rate {
        LimitKind::Zero => "zero",
        LimitKind::Finite => "finite",
        LimitKind::Unbounded => "unbounded",
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn scaling_cmd(cfg: &SystemConfig, args: ScalingArgs) -> Result<(), Failure> {
    let powers = cfg.normalized_powers();
    let scen = ScalingScenario {
        kind: args.scenario.into(),
        pilot_exp: args.pilot_exp,
        uplink_exp: args.uplink_exp,
        relay_exp: args.relay_exp,
        e_p: db_to_linear(args.e_p_db),
        e_u: db_to_linear(args.e_u_db),
        e_r: db_to_linear(args.e_r_db),
        fixed_p_p: powers.pilot,
        fixed_p_u: powers.uplink,
        fixed_p_r: powers.relay,
    };
    scen.validate().map_err(Failure::usage)?;
    let rows = scaling_rows(cfg, &scen, &args.m_list)?;
    write_csv(
        args.out.as_ref(),
        "m,scenario,pilot_exp,uplink_exp,relay_exp,exact_sum_se,asymptotic_sum_se,classification",
        &rows,
    )
}

fn scaling_rows(
    cfg: &SystemConfig,
    scen: &ScalingScenario,
    m_list: &[usize],
) -> Result<Vec<Vec<String>>, Failure> {
    if m_list.is_empty() {
        return Err(Failure::usage("--m-list must not be empty"));
    }
    let max_m = *m_list.iter().max().unwrap();
    let mut big = cfg.clone();
    big.num_aps = max_m;
    let scene = build_scene(&big)?;
    let label = limits_label(scaling::classify_limit(scen));
    let scenario_name = match scen.kind {
        ScenarioKind::A => "a",
        ScenarioKind::B => "b",
        ScenarioKind::C => "c",
    };

    let rows: Vec<Vec<String>> = m_list
        .par_iter()
        .map(|&m| {
            let truncated = scene.ls.truncate_aps(m);
            let (alpha_a, alpha_b) = (truncated.alpha_a, truncated.alpha_b);
            let exact = scaling::exact_rates_under_scenario(
                &alpha_a,
                &alpha_b,
                scen,
                cfg.pilot_symbols,
                cfg.antennas_per_ap,
                cfg.prelog(),
            )
            .sum_se;
            let asymptotic = match scen.kind {
                ScenarioKind::A => {
                    scaling::scenario_a_sinrs(&alpha_a, &alpha_b, scen, cfg.antennas_per_ap)
                }
                ScenarioKind::B => {
                    let ls = cfrelay_core::LargeScaleFading::from_alpha(
                        alpha_a.clone(),
                        alpha_b.clone(),
                        cfg.pilot_symbols,
                        scen.fixed_p_p,
                    );
                    scaling::scenario_b_sinrs(&ls, scen, cfg.antennas_per_ap)
                }
                ScenarioKind::C => {
                    scaling::scenario_c_sinrs(&alpha_a, &alpha_b, scen, cfg.antennas_per_ap)
                }
            }
            .sum_se(cfg.prelog());
            vec![
                m.to_string(),
                scenario_name.to_string(),
                fmt9(scen.pilot_exp),
                fmt9(scen.uplink_exp),
                fmt9(scen.relay_exp),
                fmt9(exact),
                fmt9(asymptotic),
                label.to_string(),
            ]
        })
        .collect();
    Ok(rows)
}

fn optimize(cfg: &SystemConfig, args: OptimizeArgs) -> Result<(), Failure> {
    let scene = build_scene(cfg)?;
    let opts = Algorithm1Options {
        theta: args.theta,
        epsilon: args.epsilon,
        max_iter: args.max_iter,
        r_min: args.r_min,
        form: if args.decoupled {
            CoefficientForm::Decoupled
        } else {
            CoefficientForm::Exact
        },
        ..Default::default()
    };
    let budget = db_to_linear(args.budget_db);
    let result = poweralloc::run_algorithm1(&scene.ls, cfg, budget, &opts)
        .map_err(|e| Failure::runtime(e.to_string()))?;
    let uniform = result.se_trajectory[0];
    let improvement = if uniform > 0.0 {
        100.0 * (result.sum_se - uniform) / uniform
    } else {
        0.0
    };
    let rows = vec![vec![
        cfg.num_aps.to_string(),
        cfg.rng_seed.to_string(),
        fmt9(budget),
        fmt9(uniform),
        fmt9(result.sum_se),
        fmt9(improvement),
        result.iterations.to_string(),
        result.converged.to_string(),
    ]];
    write_csv(
        args.out.as_ref(),
        "m,seed,budget,uniform_sum_se,optimized_sum_se,improvement_pct,iterations,converged",
        &rows,
    )
}

/// Experiment description for [`run_experiment`].
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub seeds: Vec<u64>,
    pub m_list: Option<Vec<usize>>,
    pub realizations: usize,
    pub sweep: Option<(String, Vec<String>)>,
}

/// Largest AP count the presets will evaluate.
const M_CAP: usize = 400;

fn capped(m_list: Vec<usize>) -> Vec<usize> {
    m_list.into_iter().map(|m| m.min(M_CAP)).collect()
}

fn mean_of(rows: &[Vec<String>], col: usize) -> f64 {
    let vals: Vec<f64> = rows
        .iter()
        .filter_map(|r| r[col].parse::<f64>().ok())
        .collect();
    vals.iter().sum::<f64>() / vals.len().max(1) as f64
}

/// Run a named experiment, returning the CSV header and rows (data rows
/// first, then per-sweep-point rows averaged over seeds with seed `mean`).
pub fn run_experiment(
    spec: &ExperimentSpec,
    cfg: &SystemConfig,
) -> Result<(String, Vec<Vec<String>>), Failure> {
    match spec.name {
        ExperimentName::Fig2 => fig2(spec, cfg),
        ExperimentName::Fig3 => fig_scaling(spec, cfg, ScenarioKind::A),
        ExperimentName::Fig4 => fig_scaling(spec, cfg, ScenarioKind::B),
        ExperimentName::Fig5 => fig_scaling_zero_unbounded(spec, cfg),
        ExperimentName::Fig6 => fig_scaling(spec, cfg, ScenarioKind::C),
        ExperimentName::Fig7 => fig7(spec, cfg),
        ExperimentName::Custom => custom(spec, cfg),
    }
}

fn figures(cfg: &SystemConfig, args: FiguresArgs) -> Result<(), Failure> {
    let spec = ExperimentSpec {
        name: args.name,
        seeds: args.seeds.unwrap_or_else(|| vec![cfg.rng_seed]),
        m_list: args.m_list,
        realizations: args.realizations,
        sweep: match (args.sweep, args.values) {
            (Some(key), Some(values)) => Some((key, values)),
            (Some(_), None) | (None, Some(_)) => {
                return Err(Failure::usage(
                    "--sweep and --values must be given together",
                ))
            }
            (None, None) => None,
        },
    };
    if spec.seeds.is_empty() {
        return Err(Failure::usage("--seeds must not be empty"));
    }
    if spec.realizations < 2 {
        return Err(Failure::usage("--realizations must be at least 2"));
    }
    let (header, rows) = run_experiment(&spec, cfg)?;
    write_csv(args.out.as_ref(), &header, &rows)
}

/// Sum SE versus the uplink power (pilot power tracks it; the relay budget
/// is `2W` times it) for several AP counts, with Monte-Carlo validation.
fn fig2(spec: &ExperimentSpec, cfg: &SystemConfig) -> Result<(String, Vec<Vec<String>>), Failure> {
    let m_list = capped(spec.m_list.clone().unwrap_or_else(|| vec![100, 200]));
    let p_dbm_grid: Vec<f64> = (-2..=6).map(|k| 5.0 * k as f64).collect();

    let mut cases: Vec<(usize, f64, u64)> = Vec::new();
    for &m in &m_list {
        for &p in &p_dbm_grid {
            for &seed in &spec.seeds {
                cases.push((m, p, seed));
            }
        }
    }
    let rows: Vec<Vec<String>> = cases
        .par_iter()
        .map(|&(m, p_dbm, seed)| {
            let mut c = cfg.clone();
            c.num_aps = m;
            c.rng_seed = seed;
            c.pilot_power_dbm = p_dbm;
            c.uplink_power_dbm = p_dbm;
            c.relay_power_dbm = p_dbm + 10.0 * (2.0 * cfg.num_pairs as f64).log10();
            let scene = Scene::from_config(&c).map_err(|e| Failure::usage(e.to_string()))?;
            let pa = scene.full_power_allocation(&c);
            let exact = se::rate_report(&scene.ls, &pa, &c)
                .map_err(|e| Failure::runtime(e.to_string()))?;
            let mc = montecarlo::mc_sum_se(
                &scene.ls,
                &pa,
                c.antennas_per_ap,
                c.prelog(),
                spec.realizations,
                seed,
            );
            Ok(vec![
                m.to_string(),
                fmt9(p_dbm),
                seed.to_string(),
                fmt9(exact.sum_se),
                fmt9(mc.value),
                fmt9(mc.std_error),
            ])
        })
        .collect::<Result<_, Failure>>()?;

    let mut all = rows;
    let mut summary = Vec::new();
    for &m in &m_list {
        for &p in &p_dbm_grid {
            let group: Vec<Vec<String>> = all
                .iter()
                .filter(|r| r[0] == m.to_string() && r[1] == fmt9(p))
                .cloned()
                .collect();
            summary.push(vec![
                m.to_string(),
                fmt9(p),
                "mean".into(),
                fmt9(mean_of(&group, 3)),
                fmt9(mean_of(&group, 4)),
                fmt9(mean_of(&group, 5)),
            ]);
        }
    }
    all.extend(summary);
    Ok((
        "m,p_u_dbm,seed,closed_form_sum_se,mc_sum_se,mc_std_error".into(),
        all,
    ))
}

fn default_exponent_sets(kind: ScenarioKind) -> Vec<(f64, f64, f64)> {
    match kind {
        ScenarioKind::A => vec![(0.7, 0.0, 0.0), (1.0, 0.0, 0.0), (1.4, 0.0, 0.0)],
        ScenarioKind::B => vec![(0.0, 1.0, 0.5), (0.0, 0.5, 1.0), (0.0, 1.0, 1.0)],
        ScenarioKind::C => vec![
            (1.1, 1.2, 0.4),
            (0.9, 1.4, 0.6),
            (0.3, 0.3, 0.3),
            (0.5, 0.5, 0.3),
            (0.4, 0.3, 0.6),
        ],
    }
}

fn scaling_experiment_rows(
    spec: &ExperimentSpec,
    cfg: &SystemConfig,
    kind: ScenarioKind,
    exponents: &[(f64, f64, f64)],
) -> Result<Vec<Vec<String>>, Failure> {
    let m_list = capped(spec.m_list.clone().unwrap_or_else(|| vec![100, 200, 400]));
    let mut rows = Vec::new();
    for &seed in &spec.seeds {
        let mut c = cfg.clone();
        c.rng_seed = seed;
        let powers = c.normalized_powers();
        for &(pe, ue, re) in exponents {
            let scen = ScalingScenario {
                kind,
                pilot_exp: pe,
                uplink_exp: ue,
                relay_exp: re,
                e_p: 10.0,
                e_u: 10.0,
                e_r: 10.0,
                fixed_p_p: powers.pilot,
                fixed_p_u: powers.uplink,
                fixed_p_r: powers.relay,
            };
            for row in scaling_rows(&c, &scen, &m_list)? {
                let mut with_seed = vec![row[0].clone(), seed.to_string()];
                with_seed.extend_from_slice(&row[1..]);
                rows.push(with_seed);
            }
        }
    }
    Ok(rows)
}

fn fig_scaling(
    spec: &ExperimentSpec,
    cfg: &SystemConfig,
    kind: ScenarioKind,
) -> Result<(String, Vec<Vec<String>>), Failure> {
    let rows = scaling_experiment_rows(spec, cfg, kind, &default_exponent_sets(kind))?;
    Ok((
        "m,seed,scenario,pilot_exp,uplink_exp,relay_exp,exact_sum_se,asymptotic_sum_se,classification"
            .into(),
        rows,
    ))
}

/// Scenario B regimes with vanishing or unbounded limits.
fn fig_scaling_zero_unbounded(
    spec: &ExperimentSpec,
    cfg: &SystemConfig,
) -> Result<(String, Vec<Vec<String>>), Failure> {
    let sets = vec![
        (0.0, 1.5, 0.5),
        (0.0, 0.5, 1.5),
        (0.0, 1.5, 1.5),
        (0.0, 0.5, 0.5),
    ];
    let rows = scaling_experiment_rows(spec, cfg, ScenarioKind::B, &sets)?;
    Ok((
        "m,seed,scenario,pilot_exp,uplink_exp,relay_exp,exact_sum_se,asymptotic_sum_se,classification"
            .into(),
        rows,
    ))
}

/// Uniform versus optimized sum SE at two pilot power levels.
fn fig7(spec: &ExperimentSpec, cfg: &SystemConfig) -> Result<(String, Vec<Vec<String>>), Failure> {
    let m_list = capped(spec.m_list.clone().unwrap_or_else(|| vec![50, 100, 200]));
    let pilot_dbm = [10.0, 15.0];
    let budget = 10.0; // normalized, 10 dB

    let mut cases: Vec<(usize, f64, u64)> = Vec::new();
    for &m in &m_list {
        for &p in &pilot_dbm {
            for &seed in &spec.seeds {
                cases.push((m, p, seed));
            }
        }
    }
    let rows: Vec<Vec<String>> = cases
        .par_iter()
        .map(|&(m, p_dbm, seed)| {
            let mut c = cfg.clone();
            c.num_aps = m;
            c.rng_seed = seed;
            c.pilot_power_dbm = p_dbm;
            let scene = Scene::from_config(&c).map_err(|e| Failure::usage(e.to_string()))?;
            let result =
                poweralloc::run_algorithm1(&scene.ls, &c, budget, &Algorithm1Options::default())
                    .map_err(|e| Failure::runtime(e.to_string()))?;
            let uniform = result.se_trajectory[0];
            Ok(vec![
                m.to_string(),
                fmt9(p_dbm),
                seed.to_string(),
                fmt9(uniform),
                fmt9(result.sum_se),
                result.iterations.to_string(),
                result.converged.to_string(),
            ])
        })
        .collect::<Result<_, Failure>>()?;

    let mut all = rows;
    let mut summary = Vec::new();
    for &m in &m_list {
        for &p in &pilot_dbm {
            let group: Vec<Vec<String>> = all
                .iter()
                .filter(|r| r[0] == m.to_string() && r[1] == fmt9(p))
                .cloned()
                .collect();
            summary.push(vec![
                m.to_string(),
                fmt9(p),
                "mean".into(),
                fmt9(mean_of(&group, 3)),
                fmt9(mean_of(&group, 4)),
                String::new(),
                String::new(),
            ]);
        }
    }
    all.extend(summary);
    Ok((
        "m,pilot_power_dbm,seed,uniform_sum_se,optimized_sum_se,iterations,converged".into(),
        all,
    ))
}

/// Sweep one config key; with no sweep, a single evaluation.
fn custom(spec: &ExperimentSpec, cfg: &SystemConfig) -> Result<(String, Vec<Vec<String>>), Failure> {
    let sweep = spec
        .sweep
        .clone()
        .unwrap_or_else(|| ("none".to_string(), vec![String::new()]));
    let (key, values) = sweep;

    let mut rows = Vec::new();
    for value in &values {
        for &seed in &spec.seeds {
            let mut c = cfg.clone();
            c.rng_seed = seed;
            if key != "none" {
                c.set_field(&key, value)
                    .map_err(|e| Failure::usage(e.to_string()))?;
                c.validate().map_err(|e| Failure::usage(e.to_string()))?;
            }
            let scene = Scene::from_config(&c).map_err(|e| Failure::usage(e.to_string()))?;
            let pa = scene.full_power_allocation(&c);
            let exact =
                se::rate_report(&scene.ls, &pa, &c).map_err(|e| Failure::runtime(e.to_string()))?;
            let mc = montecarlo::mc_sum_se(
                &scene.ls,
                &pa,
                c.antennas_per_ap,
                c.prelog(),
                spec.realizations,
                seed,
            );
            rows.push(vec![
                key.clone(),
                value.clone(),
                seed.to_string(),
                fmt9(exact.sum_se),
                fmt9(mc.value),
                fmt9(mc.std_error),
            ]);
        }
    }
    for value in &values {
        let group: Vec<Vec<String>> = rows
            .iter()
            .filter(|r| &r[1] == value)
            .cloned()
            .collect();
        rows.push(vec![
            key.clone(),
            value.clone(),
            "mean".into(),
            fmt9(mean_of(&group, 3)),
            fmt9(mean_of(&group, 4)),
            fmt9(mean_of(&group, 5)),
        ]);
    }
    Ok((
        "parameter,value,seed,closed_form_sum_se,mc_sum_se,mc_std_error".into(),
        rows,
    ))
}
