use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::Error;
use crate::gait::{Gait, Model, SimSettings};
use crate::swimmer::DragParams;

use super::CliError;

pub const DEFAULT_GAIT: &str = "sin:0,0.8,1,0";
pub const MOTILITY_SAMPLES: usize = 401;
pub const SURVEY_HALF_WIDTH: f64 = 1.5;
pub const SURVEY_SAMPLES: usize = 41;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!(
                "format must be csv or json, got {other:?}"
            ))),
        }
    }
}

/// Flat configuration document. Every field is optional; flags override it.
///
/// `shape_limit` is the domain guard on `|alpha|`; `alpha_min`/`alpha_max`
/// bound the sampling grid.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub link_length: Option<f64>,
    pub c_lon: Option<f64>,
    pub lat_ratio: Option<f64>,
    pub rough_ratio: Option<f64>,
    pub smooth_ratio: Option<f64>,
    pub shape_limit: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub n_alpha: Option<usize>,
    pub alphadot_min: Option<f64>,
    pub alphadot_max: Option<f64>,
    pub n_alphadot: Option<usize>,
    pub gait: Option<String>,
    pub model: Option<String>,
    pub steps: Option<usize>,
    pub cycles: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
}

macro_rules! overlay_fields {
    ($base:expr, $top:expr; $($f:ident),*) => {
        ConfigFile { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` win over those in `self`.
    pub fn overlay(self, top: ConfigFile) -> ConfigFile {
        overlay_fields!(self, top;
            link_length, c_lon, lat_ratio, rough_ratio, smooth_ratio, shape_limit,
            alpha_min, alpha_max, n_alpha, alphadot_min, alphadot_max, n_alphadot,
            gait, model, steps, cycles, format, out, svg, trajectory)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub alpha: (f64, f64),
    pub n_alpha: usize,
    pub alpha_dot: (f64, f64),
    pub n_alpha_dot: usize,
}

impl Grid {
    pub fn alphas(&self) -> Vec<f64> {
        linspace(self.alpha.0, self.alpha.1, self.n_alpha)
    }

    pub fn alpha_dots(&self) -> Vec<f64> {
        linspace(self.alpha_dot.0, self.alpha_dot.1, self.n_alpha_dot)
    }
}

/// `n` evenly spaced samples from `lo` to `hi`, both included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
            v[n - 1] = hi;
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: DragParams,
    pub grid: Grid,
    pub gait_spec: String,
    pub gait: Gait,
    pub model: Model,
    pub settings: SimSettings,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
}

/// Which part of the configuration a command consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    AlphaGrid,
    SurveyGrid,
    Gait,
}

fn check_range(name: &str, lo: f64, hi: f64, n: usize) -> Result<(), CliError> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(CliError::Config(format!(
            "{name} range must be finite with min <= max, got [{lo}, {hi}]"
        )));
    }
    if n == 0 {
        return Err(CliError::Config(format!("{name} grid must not be empty")));
    }
    Ok(())
}

impl RunConfig {
    pub fn resolve(file: ConfigFile, needs: Needs) -> Result<RunConfig, CliError> {
        let defaults = DragParams::default();
        let params = DragParams {
            link_length: file.link_length.unwrap_or(defaults.link_length),
            c_lon: file.c_lon.unwrap_or(defaults.c_lon),
            lat_ratio: file.lat_ratio.unwrap_or(defaults.lat_ratio),
            rough_ratio: file.rough_ratio.unwrap_or(defaults.rough_ratio),
            smooth_ratio: file.smooth_ratio.unwrap_or(defaults.smooth_ratio),
            alpha_max: file.shape_limit.unwrap_or(defaults.alpha_max),
        };
        params.validate()?;

        let (half, n_default) = match needs {
            Needs::SurveyGrid => (SURVEY_HALF_WIDTH.min(params.alpha_max), SURVEY_SAMPLES),
            _ => (params.alpha_max, MOTILITY_SAMPLES),
        };
        let grid = Grid {
            alpha: (
                file.alpha_min.unwrap_or(-half),
                file.alpha_max.unwrap_or(half),
            ),
            n_alpha: file.n_alpha.unwrap_or(n_default),
            alpha_dot: (
                file.alphadot_min.unwrap_or(-SURVEY_HALF_WIDTH),
                file.alphadot_max.unwrap_or(SURVEY_HALF_WIDTH),
            ),
            n_alpha_dot: file.n_alphadot.unwrap_or(SURVEY_SAMPLES),
        };

        let gait_spec = file.gait.unwrap_or_else(|| DEFAULT_GAIT.to_string());
        let gait = parse_gait(&gait_spec)?;
        let model_spec = file.model.unwrap_or_else(|| "scaled".to_string());
        let model = Model::parse(&model_spec).ok_or_else(|| {
            CliError::Config(format!(
                "model must be scaled, SS, SR, RS or RR, got {model_spec:?}"
            ))
        })?;
        let base = SimSettings::default();
        let settings = SimSettings {
            steps_per_cycle: file.steps.unwrap_or(base.steps_per_cycle),
            cycles: file.cycles.unwrap_or(base.cycles),
        };
        let format = match &file.format {
            Some(f) => Format::parse(f)?,
            None => Format::Csv,
        };

        match needs {
            Needs::AlphaGrid | Needs::SurveyGrid => {
                check_range("alpha", grid.alpha.0, grid.alpha.1, grid.n_alpha)?;
                params.check_shape(grid.alpha.0)?;
                params.check_shape(grid.alpha.1)?;
                if needs == Needs::SurveyGrid {
                    check_range(
                        "alphadot",
                        grid.alpha_dot.0,
                        grid.alpha_dot.1,
                        grid.n_alpha_dot,
                    )?;
                }
            }
            Needs::Gait => {
                gait.validate(&params)?;
                settings.validate()?;
            }
        }

        Ok(RunConfig {
            params,
            grid,
            gait_spec,
            gait,
            model,
            settings,
            format,
            out: file.out,
            svg: file.svg,
            trajectory: file.trajectory,
        })
    }
}

fn numbers(list: &str) -> Result<Vec<f64>, Error> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGait(format!("not a number: {s:?}")))
        })
        .collect()
}

/// Parses `sin:<offset>,<amplitude>,<period>[,<phase>]` or
/// `way:<t>:<alpha>,<t>:<alpha>,...`.
pub fn parse_gait(spec: &str) -> Result<Gait, Error> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidGait(format!("gait needs a kind prefix: {spec:?}")))?;
    match kind.trim() {
        "sin" => match numbers(body)?[..] {
            [offset, amplitude, period] => Gait::sinusoid(offset, amplitude, period, 0.0),
            [offset, amplitude, period, phase] => Gait::sinusoid(offset, amplitude, period, phase),
            _ => Err(Error::InvalidGait(format!(
                "sin gait takes offset,amplitude,period[,phase]: {spec:?}"
            ))),
        },
        "way" => {
            let nodes = body
                .split(',')
                .map(|node| {
                    let (t, a) = node.split_once(':').ok_or_else(|| {
                        Error::InvalidGait(format!("waypoint must be t:alpha, got {node:?}"))
                    })?;
                    let v = numbers(&format!("{t},{a}"))?;
                    Ok((v[0], v[1]))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Gait::waypoints(nodes)
        }
        other => Err(Error::InvalidGait(format!("unknown gait kind {other:?}"))),
    }
}
