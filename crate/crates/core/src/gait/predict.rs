use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{exp_twist, Pose, Twist};
use crate::scaled::BranchSign;
use crate::swimmer::{motility, DragParams};

use super::simulate::{simulate, switching_segments, SimSettings};
use super::{Model, ShapePath};

/// Composite Simpson panels per monotone piece.
pub const SIMPSON_PANELS: usize = 2048;

/// Floor on the denominator of the relative error.
pub const REL_ERR_FLOOR: f64 = 1e-12;

fn simpson<F>(lo: f64, hi: f64, panels: usize, mut f: F) -> Result<Twist>
where
    F: FnMut(f64) -> Result<Twist>,
{
    debug_assert!(panels.is_multiple_of(2));
    let h = (hi - lo) / panels as f64;
    let mut acc = f(lo)? + f(hi)?;
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + f(lo + i as f64 * h)? * w;
    }
    Ok(acc * (h / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    /// Displacement accumulated in a single body frame over one cycle.
    pub dg_prime: Twist,
    /// `exp(dg_prime)`.
    pub dg_pred: Pose,
    /// The same integral evaluated as `∫ A± dalpha` over the gait's range;
    /// present only for gaits that sweep the range once in each direction.
    pub simple_range: Option<Twist>,
}

/// Closed path integral of `A(alpha, sign alpha_dot) alpha_dot dt` over one cycle.
fn path_integral<P: ShapePath + ?Sized>(
    path: &P,
    model: Model,
    params: &DragParams,
) -> Result<Twist> {
    let mut total = Twist::ZERO;
    for seg in switching_segments(path, model) {
        total = total
            + simpson(seg.start, seg.end, SIMPSON_PANELS, |t| {
                let s = path.shape_at(t);
                Ok(motility(s.alpha, seg.variant, params)?.body_velocity(s.alpha_dot))
            })?;
    }
    Ok(total)
}

// Number of maximal runs of constant alpha_dot sign around the loop.
fn monotone_runs<P: ShapePath + ?Sized>(path: &P, model: Model) -> usize {
    let signs: Vec<BranchSign> = switching_segments(path, model)
        .iter()
        .map(|s| s.sign)
        .collect();
    let changes = signs
        .iter()
        .zip(signs.iter().cycle().skip(1))
        .filter(|(a, b)| a != b)
        .count();
    changes.max(1)
}

fn simple_range_integral<P: ShapePath + ?Sized>(
    path: &P,
    model: Model,
    params: &DragParams,
) -> Result<Twist> {
    let (lo, hi) = path.alpha_range();
    let diff = |alpha: f64| -> Result<Twist> {
        let plus = model.motility(alpha, BranchSign::Plus, params)?;
        let minus = model.motility(alpha, BranchSign::Minus, params)?;
        Ok((plus - minus).as_twist())
    };
    if lo < 0.0 && hi > 0.0 {
        Ok(simpson(lo, 0.0, SIMPSON_PANELS, diff)? + simpson(0.0, hi, SIMPSON_PANELS, diff)?)
    } else {
        simpson(lo, hi, SIMPSON_PANELS, diff)
    }
}

pub fn predict_displacement<P: ShapePath + ?Sized>(
    path: &P,
    model: Model,
    params: &DragParams,
) -> Result<Prediction> {
    params.validate()?;
    path.check_domain(params)?;
    let dg_prime = path_integral(path, model, params)?;
    let simple_range = if monotone_runs(path, model) <= 2 {
        Some(simple_range_integral(path, model, params)?)
    } else {
        None
    };
    Ok(Prediction {
        dg_prime,
        dg_pred: exp_twist(&dg_prime),
        simple_range,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementReport {
    pub dg_sim: Pose,
    pub dg_prime: Twist,
    pub dg_pred: Pose,
    /// `|sim - pred|` per component, heading difference wrapped.
    pub abs_err: [f64; 3],
    pub rel_err: f64,
}

/// Simulates `settings.cycles` cycles and compares against the predictor
/// applied to the same number of cycles.
pub fn compare<P: ShapePath + ?Sized>(
    path: &P,
    model: Model,
    params: &DragParams,
    settings: &SimSettings,
) -> Result<DisplacementReport> {
    let sim = simulate(path, model, params, settings)?;
    let pred = predict_displacement(path, model, params)?;
    let dg_prime = pred.dg_prime * settings.cycles as f64;
    let dg_pred = exp_twist(&dg_prime);
    let dg_sim = sim.displacement;
    let diff = dg_sim.difference(&dg_pred);
    let norm = |v: [f64; 3]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    Ok(DisplacementReport {
        dg_sim,
        dg_prime,
        dg_pred,
        abs_err: diff.map(f64::abs),
        rel_err: norm(diff) / norm(dg_sim.as_array()).max(REL_ERR_FLOOR),
    })
}
