use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Pose, Twist};
use crate::scaled::BranchSign;
use crate::swimmer::{motility, DragParams, Variant};

use super::{Model, ShapePath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimSettings {
    pub steps_per_cycle: usize,
    pub cycles: usize,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            steps_per_cycle: 4096,
            cycles: 1,
        }
    }
}

impl SimSettings {
    pub const MIN_STEPS: usize = 16;

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_cycle < Self::MIN_STEPS {
            return Err(Error::InvalidArgument(format!(
                "steps per cycle must be at least {}, got {}",
                Self::MIN_STEPS,
                self.steps_per_cycle
            )));
        }
        if self.cycles == 0 {
            return Err(Error::InvalidArgument("cycles must be at least 1".into()));
        }
        Ok(())
    }
}

/// A piece of one cycle on which `alpha_dot` and `alpha` keep their signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub sign: BranchSign,
    pub variant: Variant,
}

impl Segment {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

/// Splits `[0, period]` at the path's switch times and tags each piece
/// with the drag variant the model uses there.
pub fn switching_segments<P: ShapePath + ?Sized>(path: &P, model: Model) -> Vec<Segment> {
    let period = path.period();
    let mut cuts = vec![0.0];
    cuts.extend(path.switch_times().into_iter().filter(|&t| t > 0.0));
    cuts.push(period);
    cuts.windows(2)
        .filter(|w| w[1] - w[0] > 1e-14 * period)
        .map(|w| {
            let mid = path.shape_at(0.5 * (w[0] + w[1]));
            let sign = BranchSign::of(mid.alpha_dot);
            Segment {
                start: w[0],
                end: w[1],
                sign,
                variant: model.variant(mid.alpha, sign),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub pose: Pose,
    pub alpha: f64,
    pub alpha_dot: f64,
    pub xi: Twist,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub trajectory: Trajectory,
    /// Final pose relative to the starting pose.
    pub displacement: Pose,
}

type State = [f64; 3];

fn body_velocity<P: ShapePath + ?Sized>(
    path: &P,
    variant: Variant,
    t: f64,
    params: &DragParams,
) -> Result<(Twist, f64, f64)> {
    let s = path.shape_at(t);
    let xi = motility(s.alpha, variant, params)?.body_velocity(s.alpha_dot);
    Ok((xi, s.alpha, s.alpha_dot))
}

fn world_rate<P: ShapePath + ?Sized>(
    path: &P,
    variant: Variant,
    t: f64,
    g: &State,
    params: &DragParams,
) -> Result<State> {
    let (xi, _, _) = body_velocity(path, variant, t, params)?;
    let (s, c) = g[2].sin_cos();
    Ok([c * xi.x - s * xi.y, s * xi.x + c * xi.y, xi.theta])
}

fn rk4_step<P: ShapePath + ?Sized>(
    path: &P,
    variant: Variant,
    t: f64,
    dt: f64,
    g: &State,
    params: &DragParams,
) -> Result<State> {
    let shifted = |k: &State, h: f64| [g[0] + h * k[0], g[1] + h * k[1], g[2] + h * k[2]];
    let k1 = world_rate(path, variant, t, g, params)?;
    let k2 = world_rate(path, variant, t + 0.5 * dt, &shifted(&k1, 0.5 * dt), params)?;
    let k3 = world_rate(path, variant, t + 0.5 * dt, &shifted(&k2, 0.5 * dt), params)?;
    let k4 = world_rate(path, variant, t + dt, &shifted(&k3, dt), params)?;
    Ok(std::array::from_fn(|i| {
        g[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    }))
}

/// Integrates the reconstruction equation `g' = g * A(alpha, alpha_dot) alpha_dot`
/// with fixed-step RK4, never stepping across a switch time.
pub fn simulate<P: ShapePath + ?Sized>(
    path: &P,
    model: Model,
    params: &DragParams,
    settings: &SimSettings,
) -> Result<Simulation> {
    params.validate()?;
    settings.validate()?;
    path.check_domain(params)?;

    let period = path.period();
    let segments = switching_segments(path, model);
    let steps = settings.steps_per_cycle as f64;

    let mut state: State = [0.0; 3];
    let mut samples = Vec::with_capacity(settings.steps_per_cycle * settings.cycles + 1);
    let record = |t: f64, g: &State, variant: Variant| -> Result<TrajectorySample> {
        let (xi, alpha, alpha_dot) = body_velocity(path, variant, t, params)?;
        Ok(TrajectorySample {
            t,
            pose: Pose::new(g[0], g[1], g[2]),
            alpha,
            alpha_dot,
            xi,
        })
    };
    if let Some(first) = segments.first() {
        samples.push(record(0.0, &state, first.variant)?);
    }

    for cycle in 0..settings.cycles {
        let offset = cycle as f64 * period;
        for seg in &segments {
            let n = ((steps * seg.len() / period) - 1e-9).ceil().max(1.0) as usize;
            let dt = seg.len() / n as f64;
            for k in 0..n {
                let t = offset + seg.start + k as f64 * dt;
                state = rk4_step(path, seg.variant, t, dt, &state, params)?;
                let t_end = if k + 1 == n { offset + seg.end } else { t + dt };
                samples.push(record(t_end, &state, seg.variant)?);
            }
        }
    }

    Ok(Simulation {
        displacement: Pose::new(state[0], state[1], state[2]),
        trajectory: Trajectory { samples },
    })
}
