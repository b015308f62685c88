//! The scaled swimmer: links whose longitudinal drag depends on the sign of
//! their sliding velocity.
//!
//! The scaled swimmer is modelled piecewise. For every `(alpha, alpha_dot)`
//! exactly one fixed-roughness swimmer produces link velocities consistent
//! with the scale rule, and the scaled swimmer borrows its motility.
//! [`resolve_consistent_variants`] finds that swimmer by brute force; the
//! closed-form assignment used everywhere else is [`scaled_motility`].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::Twist;
use crate::swimmer::{
    link_longitudinal_velocities, motility, DragParams, MotilityVector, Roughness, Variant,
};

/// Sign tolerance on longitudinal link velocities.
pub const CONSISTENCY_TOL: f64 = 1e-12;

/// Direction of shape change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BranchSign {
    /// `alpha_dot >= 0`
    Plus,
    /// `alpha_dot < 0`
    Minus,
}

impl BranchSign {
    pub fn of(alpha_dot: f64) -> BranchSign {
        if alpha_dot >= 0.0 {
            BranchSign::Plus
        } else {
            BranchSign::Minus
        }
    }
}

/// The fixed-roughness swimmer the scaled swimmer follows on a branch.
///
/// `A+` uses `SR` for `alpha >= 0` and `RS` below; `A-` the reverse.
pub fn branch_variant(alpha: f64, sign: BranchSign) -> Variant {
    match (alpha >= 0.0, sign) {
        (true, BranchSign::Plus) | (false, BranchSign::Minus) => Variant::SR,
        (false, BranchSign::Plus) | (true, BranchSign::Minus) => Variant::RS,
    }
}

/// Variant by whether `|alpha|` is growing: `SR` when `d|alpha|/dt >= 0`,
/// `RS` otherwise. Agrees with [`branch_variant`] off the axes.
pub fn opening_variant(alpha: f64, alpha_dot: f64) -> Variant {
    if alpha * alpha_dot >= 0.0 {
        Variant::SR
    } else {
        Variant::RS
    }
}

/// `A+` for [`BranchSign::Plus`], `A-` for [`BranchSign::Minus`].
pub fn scaled_motility(
    alpha: f64,
    sign: BranchSign,
    params: &DragParams,
) -> Result<MotilityVector> {
    motility(alpha, branch_variant(alpha, sign), params)
}

/// `A± = A+ - A-`; its integral over a gait's shape range approximates the
/// net displacement per cycle.
pub fn motility_diff(alpha: f64, params: &DragParams) -> Result<MotilityVector> {
    Ok(scaled_motility(alpha, BranchSign::Plus, params)?
        - scaled_motility(alpha, BranchSign::Minus, params)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistentVariant {
    pub variant: Variant,
    pub xi: Twist,
    /// Longitudinal velocities of the front and rear links.
    pub link_velocities: (f64, f64),
    /// Both link velocities clear the tolerance with the required sign.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyResult {
    pub alpha: f64,
    pub alpha_dot: f64,
    pub entries: Vec<ConsistentVariant>,
}

impl ConsistencyResult {
    pub fn strict_entries(&self) -> impl Iterator<Item = &ConsistentVariant> {
        self.entries.iter().filter(|e| e.strict)
    }

    /// The strictly consistent variant, when there is exactly one.
    pub fn unique_strict(&self) -> Option<&ConsistentVariant> {
        let mut it = self.strict_entries();
        match (it.next(), it.next()) {
            (Some(e), None) => Some(e),
            _ => None,
        }
    }

    pub fn contains(&self, v: Variant) -> bool {
        self.entries.iter().any(|e| e.variant == v)
    }
}

fn admits(r: Roughness, u: f64) -> (bool, bool) {
    match r {
        Roughness::Smooth => (u >= -CONSISTENCY_TOL, u > CONSISTENCY_TOL),
        Roughness::Rough => (u <= CONSISTENCY_TOL, u < -CONSISTENCY_TOL),
    }
}

/// Brute-force search over the four fixed-roughness swimmers for those whose
/// link velocities agree with the scale rule at `(alpha, alpha_dot)`.
pub fn resolve_consistent_variants(
    alpha: f64,
    alpha_dot: f64,
    params: &DragParams,
) -> Result<ConsistencyResult> {
    params.check_shape(alpha)?;
    let mut entries = Vec::with_capacity(4);
    for v in Variant::ALL {
        let xi = motility(alpha, v, params)?.body_velocity(alpha_dot);
        let (u_front, u_rear) = link_longitudinal_velocities(alpha, alpha_dot, &xi, params)?;
        let (front_ok, front_strict) = admits(v.front, u_front);
        let (rear_ok, rear_strict) = admits(v.rear, u_rear);
        if front_ok && rear_ok {
            entries.push(ConsistentVariant {
                variant: v,
                xi,
                link_velocities: (u_front, u_rear),
                strict: front_strict && rear_strict,
            });
        }
    }
    assert!(
        !entries.is_empty(),
        "no drag variant is consistent at alpha = {alpha}, alpha_dot = {alpha_dot}"
    );
    Ok(ConsistencyResult {
        alpha,
        alpha_dot,
        entries,
    })
}

/// Variant labels over an `(alpha, alpha_dot)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyGrid {
    pub alphas: Vec<f64>,
    pub alpha_dots: Vec<f64>,
    /// Row-major: `cells[i * alpha_dots.len() + j]` is `(alphas[i], alpha_dots[j])`.
    pub cells: Vec<Variant>,
}

impl SurveyGrid {
    pub fn get(&self, i: usize, j: usize) -> Variant {
        self.cells[i * self.alpha_dots.len() + j]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, Variant)> + '_ {
        self.alphas.iter().enumerate().flat_map(move |(i, &a)| {
            self.alpha_dots
                .iter()
                .enumerate()
                .map(move |(j, &ad)| (a, ad, self.get(i, j)))
        })
    }

    pub fn count(&self, v: Variant) -> usize {
        self.cells.iter().filter(|&&c| c == v).count()
    }
}

/// Labels each grid cell with its strictly consistent variant. Cells on the
/// axes, where no variant is strict, take the opening-branch label `SR`.
pub fn consistency_survey(
    alphas: &[f64],
    alpha_dots: &[f64],
    params: &DragParams,
) -> Result<SurveyGrid> {
    let mut cells = Vec::with_capacity(alphas.len() * alpha_dots.len());
    for &alpha in alphas {
        for &alpha_dot in alpha_dots {
            let res = resolve_consistent_variants(alpha, alpha_dot, params)?;
            let label = match res.unique_strict() {
                Some(e) => e.variant,
                None => {
                    let v = opening_variant(alpha, alpha_dot);
                    debug_assert!(res.contains(v));
                    v
                }
            };
            cells.push(label);
        }
    }
    Ok(SurveyGrid {
        alphas: alphas.to_vec(),
        alpha_dots: alpha_dots.to_vec(),
        cells,
    })
}
