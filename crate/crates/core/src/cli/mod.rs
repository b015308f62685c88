//! Command-line front end: configuration, dispatch and file emission.

mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::Error;
use crate::gait::{compare, predict_displacement, simulate, Trajectory};
use crate::scaled::{consistency_survey, motility_diff, scaled_motility, BranchSign};
use crate::swimmer::{motility, Variant};

pub use config::{linspace, parse_gait, ConfigFile, Format, Grid, Needs, RunConfig};
pub use output::{fmt_num, Cell, Table};

pub const MOTILITY_COLUMNS: [&str; 22] = [
    "alpha",
    "ass_x",
    "ass_y",
    "ass_th",
    "asr_x",
    "asr_y",
    "asr_th",
    "ars_x",
    "ars_y",
    "ars_th",
    "arr_x",
    "arr_y",
    "arr_th",
    "aplus_x",
    "aplus_y",
    "aplus_th",
    "aminus_x",
    "aminus_y",
    "aminus_th",
    "adiff_x",
    "adiff_y",
    "adiff_th",
];
pub const SURVEY_COLUMNS: [&str; 3] = ["alpha", "alphadot", "variant"];
pub const TRAJECTORY_COLUMNS: [&str; 9] = [
    "t", "x", "y", "theta", "alpha", "alphadot", "xix", "xiy", "xith",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::SingularConfiguration { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "scaled-swimmer",
    version,
    about = "Two-link swimmer with scale-induced drag"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Motility functions of every variant and branch over an alpha grid.
    Motility(RunArgs),
    /// Consistent drag variant over an (alpha, alphadot) grid.
    Survey(RunArgs),
    /// Integrate a gait and emit its trajectory.
    Simulate(RunArgs),
    /// Predicted net displacement of a gait.
    Predict(RunArgs),
    /// Simulated against predicted displacement.
    Compare(RunArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Alpha grid bounds as `min,max`.
    #[arg(long, allow_hyphen_values = true, value_name = "MIN,MAX")]
    pub alpha_range: Option<String>,
    /// Alphadot grid bounds as `min,max` (survey).
    #[arg(long, allow_hyphen_values = true, value_name = "MIN,MAX")]
    pub alphadot_range: Option<String>,
    /// Grid size: `n` for both axes or `n_alpha,n_alphadot`.
    #[arg(long, value_name = "N[,N]")]
    pub grid_n: Option<String>,
    /// `sin:offset,amplitude,period,phase` or `way:t:alpha,t:alpha,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub gait: Option<String>,
    /// `scaled` or a fixed variant (SS, SR, RS, RR).
    #[arg(long)]
    pub model: Option<String>,
    /// RK4 steps per cycle.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Also write a minimal SVG plot of the emitted table.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// compare: also write the trajectory CSV here.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

fn pair<T: std::str::FromStr>(name: &str, s: &str) -> Result<(T, Option<T>), CliError> {
    let bad = || {
        CliError::Config(format!(
            "--{name} expects one or two comma-separated values, got {s:?}"
        ))
    };
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let parse = |p: &str| p.parse::<T>().map_err(|_| bad());
    match parts[..] {
        [a] => Ok((parse(a)?, None)),
        [a, b] => Ok((parse(a)?, Some(parse(b)?))),
        _ => Err(bad()),
    }
}

fn range(name: &str, s: &str) -> Result<(f64, f64), CliError> {
    match pair::<f64>(name, s)? {
        (lo, Some(hi)) => Ok((lo, hi)),
        _ => Err(CliError::Config(format!(
            "--{name} expects min,max, got {s:?}"
        ))),
    }
}

impl RunArgs {
    fn as_overrides(&self) -> Result<ConfigFile, CliError> {
        let mut c = ConfigFile {
            gait: self.gait.clone(),
            model: self.model.clone(),
            steps: self.steps,
            cycles: self.cycles,
            format: self.format.clone(),
            out: self.out.clone(),
            svg: self.svg.clone(),
            trajectory: self.trajectory.clone(),
            ..Default::default()
        };
        if let Some(s) = &self.alpha_range {
            let (lo, hi) = range("alpha-range", s)?;
            (c.alpha_min, c.alpha_max) = (Some(lo), Some(hi));
        }
        if let Some(s) = &self.alphadot_range {
            let (lo, hi) = range("alphadot-range", s)?;
            (c.alphadot_min, c.alphadot_max) = (Some(lo), Some(hi));
        }
        if let Some(s) = &self.grid_n {
            let (a, b) = pair::<usize>("grid-n", s)?;
            (c.n_alpha, c.n_alphadot) = (Some(a), Some(b.unwrap_or(a)));
        }
        Ok(c)
    }

    /// Configuration file (if any) overlaid with the flags.
    pub fn resolve(&self, needs: Needs) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        RunConfig::resolve(file.overlay(self.as_overrides()?), needs)
    }
}

/// Text produced by one command, not yet written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub main: String,
    pub svg: Option<String>,
    pub trajectory: Option<String>,
}

fn render_table(table: &Table, cfg: &RunConfig) -> Rendered {
    Rendered {
        main: match cfg.format {
            Format::Csv => table.to_csv(),
            Format::Json => output::to_json_text(&table.to_json()),
        },
        svg: cfg.svg.as_ref().map(|_| table.to_svg()),
        trajectory: None,
    }
}

pub fn motility_table(cfg: &RunConfig) -> Result<Table, Error> {
    let mut table = Table::new(&MOTILITY_COLUMNS);
    for alpha in cfg.grid.alphas() {
        let mut row = vec![alpha];
        for v in Variant::ALL {
            row.extend(motility(alpha, v, &cfg.params)?.as_array());
        }
        for sign in [BranchSign::Plus, BranchSign::Minus] {
            row.extend(scaled_motility(alpha, sign, &cfg.params)?.as_array());
        }
        row.extend(motility_diff(alpha, &cfg.params)?.as_array());
        table.push_nums(&row);
    }
    Ok(table)
}

pub fn survey_table(cfg: &RunConfig) -> Result<Table, Error> {
    let grid = consistency_survey(&cfg.grid.alphas(), &cfg.grid.alpha_dots(), &cfg.params)?;
    let mut table = Table::new(&SURVEY_COLUMNS);
    for (a, ad, v) in grid.iter() {
        table.push(vec![Cell::Num(a), Cell::Num(ad), Cell::Text(v.label())]);
    }
    Ok(table)
}

pub fn trajectory_table(traj: &Trajectory) -> Table {
    let mut table = Table::new(&TRAJECTORY_COLUMNS);
    for s in &traj.samples {
        table.push_nums(&[
            s.t,
            s.pose.x,
            s.pose.y,
            s.pose.theta,
            s.alpha,
            s.alpha_dot,
            s.xi.x,
            s.xi.y,
            s.xi.theta,
        ]);
    }
    table
}

fn settings_echo(cfg: &RunConfig) -> Value {
    json!({
        "model": cfg.model.label(),
        "gait": cfg.gait_spec,
        "steps": cfg.settings.steps_per_cycle,
        "cycles": cfg.settings.cycles,
        "params": cfg.params,
    })
}

fn xyz_columns(prefix: &str) -> [String; 3] {
    ["x", "y", "theta"].map(|c| format!("{prefix}_{c}"))
}

fn no_svg(cfg: &RunConfig, cmd: &str) -> Result<(), CliError> {
    match cfg.svg {
        Some(_) => Err(CliError::Config(format!(
            "--svg is not available for {cmd}"
        ))),
        None => Ok(()),
    }
}

/// Runs a command and renders its output without touching the filesystem.
pub fn render(command: &Command) -> Result<(RunConfig, Rendered), CliError> {
    match command {
        Command::Motility(args) => {
            let cfg = args.resolve(Needs::AlphaGrid)?;
            let r = render_table(&motility_table(&cfg)?, &cfg);
            Ok((cfg, r))
        }
        Command::Survey(args) => {
            let cfg = args.resolve(Needs::SurveyGrid)?;
            let r = render_table(&survey_table(&cfg)?, &cfg);
            Ok((cfg, r))
        }
        Command::Simulate(args) => {
            let cfg = args.resolve(Needs::Gait)?;
            let sim = simulate(&cfg.gait, cfg.model, &cfg.params, &cfg.settings)?;
            let r = render_table(&trajectory_table(&sim.trajectory), &cfg);
            Ok((cfg, r))
        }
        Command::Predict(args) => {
            let cfg = args.resolve(Needs::Gait)?;
            no_svg(&cfg, "predict")?;
            let p = predict_displacement(&cfg.gait, cfg.model, &cfg.params)?;
            let main = match cfg.format {
                Format::Json => output::to_json_text(&json!({
                    "dgprime": output::twist_json(&p.dg_prime),
                    "dg_pred": output::pose_json(&p.dg_pred),
                    "simple_range": p.simple_range.as_ref().map(output::twist_json),
                    "settings": settings_echo(&cfg),
                })),
                Format::Csv => {
                    let cols: Vec<String> = ["dgprime", "dg_pred", "simple_range"]
                        .iter()
                        .flat_map(|p| xyz_columns(p))
                        .collect();
                    let mut t = Table::new(&cols);
                    let mut row: Vec<Cell> = p
                        .dg_prime
                        .as_array()
                        .into_iter()
                        .chain(p.dg_pred.as_array())
                        .map(Cell::Num)
                        .collect();
                    match p.simple_range {
                        Some(s) => row.extend(s.as_array().map(Cell::Num)),
                        None => row.extend([Cell::Empty, Cell::Empty, Cell::Empty]),
                    }
                    t.push(row);
                    t.to_csv()
                }
            };
            Ok((
                cfg,
                Rendered {
                    main,
                    svg: None,
                    trajectory: None,
                },
            ))
        }
        Command::Compare(args) => {
            let cfg = args.resolve(Needs::Gait)?;
            let rep = compare(&cfg.gait, cfg.model, &cfg.params, &cfg.settings)?;
            let main = match cfg.format {
                Format::Json => output::to_json_text(&json!({
                    "dg_sim": output::pose_json(&rep.dg_sim),
                    "dgprime": output::twist_json(&rep.dg_prime),
                    "dg_pred": output::pose_json(&rep.dg_pred),
                    "abs_err": { "x": rep.abs_err[0], "y": rep.abs_err[1], "theta": rep.abs_err[2] },
                    "rel_err": rep.rel_err,
                    "settings": settings_echo(&cfg),
                })),
                Format::Csv => {
                    let mut cols: Vec<String> = ["dg_sim", "dgprime", "dg_pred", "abs_err"]
                        .iter()
                        .flat_map(|p| xyz_columns(p))
                        .collect();
                    cols.push("rel_err".into());
                    let mut t = Table::new(&cols);
                    let mut row: Vec<f64> = rep.dg_sim.as_array().to_vec();
                    row.extend(rep.dg_prime.as_array());
                    row.extend(rep.dg_pred.as_array());
                    row.extend(rep.abs_err);
                    row.push(rep.rel_err);
                    t.push_nums(&row);
                    t.to_csv()
                }
            };
            let needs_traj = cfg.svg.is_some() || cfg.trajectory.is_some();
            let traj = if needs_traj {
                let sim = simulate(&cfg.gait, cfg.model, &cfg.params, &cfg.settings)?;
                Some(trajectory_table(&sim.trajectory))
            } else {
                None
            };
            let svg = cfg.svg.as_ref().and(traj.as_ref()).map(Table::to_svg);
            let trajectory = cfg
                .trajectory
                .as_ref()
                .and(traj.as_ref())
                .map(Table::to_csv);
            Ok((
                cfg,
                Rendered {
                    main,
                    svg,
                    trajectory,
                },
            ))
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    let (cfg, r) = render(command)?;
    match &cfg.out {
        Some(p) => write_file(p, &r.main)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(r.main.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
        }
    }
    if let (Some(p), Some(text)) = (&cfg.svg, &r.svg) {
        write_file(p, text)?;
    }
    if let (Some(p), Some(text)) = (&cfg.trajectory, &r.trajectory) {
        write_file(p, text)?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
