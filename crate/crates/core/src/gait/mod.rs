//! Periodic gaits, trajectory simulation and the displacement predictor.

mod predict;
mod simulate;
pub mod spline;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scaled::{branch_variant, scaled_motility, BranchSign};
use crate::swimmer::{motility, DragParams, MotilityVector, ShapeState, Variant};

pub use predict::{compare, predict_displacement, DisplacementReport, Prediction, SIMPSON_PANELS};
pub use simulate::{
    simulate, switching_segments, Segment, SimSettings, Simulation, Trajectory, TrajectorySample,
};
use spline::PeriodicCubic;

/// A closed shape trajectory `alpha(t)` with period `period()`.
///
/// Implementors report every time in `[0, period)` at which `alpha_dot` or
/// `alpha` changes sign, so integrators can split there.
pub trait ShapePath {
    fn period(&self) -> f64;
    fn shape_at(&self, t: f64) -> ShapeState;
    /// Sorted switch times in `[0, period)`.
    fn switch_times(&self) -> Vec<f64>;
    /// Minimum and maximum of `alpha` over a cycle.
    fn alpha_range(&self) -> (f64, f64);

    fn check_domain(&self, params: &DragParams) -> Result<()> {
        let (lo, hi) = self.alpha_range();
        let worst = if hi.abs() >= lo.abs() { hi } else { lo };
        params.check_shape(worst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sinusoid {
    pub offset: f64,
    pub amplitude: f64,
    pub period: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaypointLoop {
    nodes: Vec<(f64, f64)>,
    spline: PeriodicCubic,
}

impl WaypointLoop {
    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gait {
    /// `alpha(t) = offset + amplitude * sin(2 pi t / period + phase)`
    Sinusoid(Sinusoid),
    /// Periodic cubic through `(t, alpha)` nodes; the first and last values match.
    Waypoints(WaypointLoop),
}

impl Gait {
    pub fn sinusoid(offset: f64, amplitude: f64, period: f64, phase: f64) -> Result<Gait> {
        if ![offset, amplitude, period, phase]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::InvalidGait("non-finite sinusoid parameter".into()));
        }
        if period <= 0.0 {
            return Err(Error::InvalidGait(format!(
                "period must be positive, got {period}"
            )));
        }
        if amplitude < 0.0 {
            return Err(Error::InvalidGait(format!(
                "amplitude must be non-negative, got {amplitude}"
            )));
        }
        Ok(Gait::Sinusoid(Sinusoid {
            offset,
            amplitude,
            period,
            phase,
        }))
    }

    pub fn waypoints(nodes: Vec<(f64, f64)>) -> Result<Gait> {
        let spline = PeriodicCubic::new(&nodes)?;
        Ok(Gait::Waypoints(WaypointLoop { nodes, spline }))
    }

    /// The same loop traversed backward in time, starting from the same shape.
    pub fn reversed(&self) -> Gait {
        match self {
            Gait::Sinusoid(s) => Gait::Sinusoid(Sinusoid {
                phase: PI - s.phase,
                ..*s
            }),
            Gait::Waypoints(w) => {
                let (t0, t1) = (w.nodes[0].0, w.nodes[w.nodes.len() - 1].0);
                let nodes: Vec<(f64, f64)> = w
                    .nodes
                    .iter()
                    .rev()
                    .map(|&(t, a)| (t0 + t1 - t, a))
                    .collect();
                Gait::waypoints(nodes).expect("reversal preserves a valid loop")
            }
        }
    }

    pub fn validate(&self, params: &DragParams) -> Result<()> {
        self.check_domain(params)
    }
}

impl ShapePath for Gait {
    fn period(&self) -> f64 {
        match self {
            Gait::Sinusoid(s) => s.period,
            Gait::Waypoints(w) => w.spline.period(),
        }
    }

    fn shape_at(&self, t: f64) -> ShapeState {
        match self {
            Gait::Sinusoid(s) => {
                let omega = TAU / s.period;
                let (sn, cs) = (omega * t.rem_euclid(s.period) + s.phase).sin_cos();
                ShapeState {
                    alpha: s.offset + s.amplitude * sn,
                    alpha_dot: s.amplitude * omega * cs,
                }
            }
            Gait::Waypoints(w) => {
                let (alpha, alpha_dot) = w.spline.eval(w.spline.start() + t);
                ShapeState { alpha, alpha_dot }
            }
        }
    }

    fn switch_times(&self) -> Vec<f64> {
        let period = self.period();
        let mut times = match self {
            Gait::Sinusoid(s) => {
                if s.amplitude == 0.0 {
                    return Vec::new();
                }
                // Angles of the sine argument at which the gait switches.
                let mut args = vec![FRAC_PI_2, 3.0 * FRAC_PI_2];
                let ratio = -s.offset / s.amplitude;
                if ratio.abs() < 1.0 {
                    let base = ratio.asin();
                    args.push(base);
                    args.push(PI - base);
                }
                args.into_iter()
                    .map(|arg| (arg - s.phase).rem_euclid(TAU) / TAU * s.period)
                    .collect::<Vec<_>>()
            }
            Gait::Waypoints(w) => {
                let t0 = w.spline.start();
                w.spline
                    .stationary_times()
                    .into_iter()
                    .chain(w.spline.sign_changes())
                    .map(|t| (t - t0).rem_euclid(period))
                    .collect()
            }
        };
        times.retain(|t| *t < period);
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * period);
        times
    }

    fn alpha_range(&self) -> (f64, f64) {
        match self {
            Gait::Sinusoid(s) => (s.offset - s.amplitude, s.offset + s.amplitude),
            Gait::Waypoints(w) => w.spline.range(),
        }
    }
}

/// Which drag law the swimmer follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    /// Reversible swimmer with fixed link roughness.
    Fixed(Variant),
    /// Scale-induced direction-dependent drag.
    Scaled,
}

impl Model {
    /// Fixed-roughness swimmer in effect on a branch; for the scaled model
    /// the branch is identified by the sign of `alpha` and `alpha_dot`.
    pub fn variant(&self, alpha: f64, sign: BranchSign) -> Variant {
        match *self {
            Model::Fixed(v) => v,
            Model::Scaled => branch_variant(alpha, sign),
        }
    }

    pub fn motility(
        &self,
        alpha: f64,
        sign: BranchSign,
        params: &DragParams,
    ) -> Result<MotilityVector> {
        match *self {
            Model::Fixed(v) => motility(alpha, v, params),
            Model::Scaled => scaled_motility(alpha, sign, params),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Model::Fixed(v) => v.label(),
            Model::Scaled => "scaled".to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<Model> {
        if s.trim().eq_ignore_ascii_case("scaled") {
            Some(Model::Scaled)
        } else {
            Variant::parse(s).map(Model::Fixed)
        }
    }
}

/// Shape at `t`, for callers holding a concrete [`Gait`].
pub fn shape_at(gait: &Gait, t: f64) -> ShapeState {
    ShapePath::shape_at(gait, t)
}
