//! Two-link swimmer kinematics, resistive drag and the fixed-roughness
//! motility function.
//!
//! Frame conventions: the body frame sits at the joint with its x-axis along
//! the bisector of the two links. The front link points at `+alpha/2` with
//! its midpoint at `(L/2)(cos(alpha/2), sin(alpha/2))`; the rear link points
//! at `-alpha/2` with its midpoint at `(-(L/2)cos(alpha/2), (L/2)sin(alpha/2))`.
//! Every link frame's x-axis points toward the head, so positive longitudinal
//! link velocity means the link slides forward.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix3, Matrix3x4, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Pose, Twist};

/// Default domain guard on the joint angle.
pub const DEFAULT_ALPHA_MAX: f64 = PI - 0.05;

/// `F_g` condition numbers above this are reported as singular.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragParams {
    /// Length of each link.
    pub link_length: f64,
    /// Baseline longitudinal drag coefficient per unit length.
    pub c_lon: f64,
    /// Lateral over longitudinal drag.
    pub lat_ratio: f64,
    /// Backward (rough) longitudinal drag over `c_lon`.
    pub rough_ratio: f64,
    /// Forward (smooth) longitudinal drag over `c_lon`.
    pub smooth_ratio: f64,
    /// Largest admissible `|alpha|`.
    pub alpha_max: f64,
}

impl Default for DragParams {
    fn default() -> Self {
        Self {
            link_length: 1.0,
            c_lon: 1.0,
            lat_ratio: 2.0,
            rough_ratio: 4.0,
            smooth_ratio: 1.0,
            alpha_max: DEFAULT_ALPHA_MAX,
        }
    }
}

impl DragParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("link_length", self.link_length),
            ("c_lon", self.c_lon),
            ("lat_ratio", self.lat_ratio),
            ("rough_ratio", self.rough_ratio),
            ("smooth_ratio", self.smooth_ratio),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.rough_ratio < self.smooth_ratio {
            return Err(Error::InvalidParams(format!(
                "rough_ratio ({}) must not be below smooth_ratio ({})",
                self.rough_ratio, self.smooth_ratio
            )));
        }
        if !(self.alpha_max > 0.0 && self.alpha_max < PI) {
            return Err(Error::InvalidParams(format!(
                "alpha_max must lie in (0, pi), got {}",
                self.alpha_max
            )));
        }
        Ok(())
    }

    pub fn c_lat(&self) -> f64 {
        self.lat_ratio * self.c_lon
    }

    /// Longitudinal coefficient for a link of the given roughness.
    pub fn c_lon_for(&self, r: Roughness) -> f64 {
        match r {
            Roughness::Smooth => self.smooth_ratio * self.c_lon,
            Roughness::Rough => self.rough_ratio * self.c_lon,
        }
    }

    pub fn check_shape(&self, alpha: f64) -> Result<()> {
        if alpha.is_finite() && alpha.abs() <= self.alpha_max {
            Ok(())
        } else {
            Err(Error::ShapeOutOfDomain {
                alpha,
                limit: self.alpha_max,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Roughness {
    Smooth,
    Rough,
}

impl Roughness {
    /// The scale rule: forward sliding (`u >= 0`) sees the smooth coefficient,
    /// backward sliding the rough one.
    pub fn from_longitudinal_velocity(u: f64) -> Roughness {
        if u >= 0.0 {
            Roughness::Smooth
        } else {
            Roughness::Rough
        }
    }

    fn letter(self) -> char {
        match self {
            Roughness::Smooth => 'S',
            Roughness::Rough => 'R',
        }
    }
}

/// A roughness assignment for the two links.
///
/// Two-letter labels read from tail to head: `SR` is a smooth rear link with
/// a rough front link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variant {
    pub rear: Roughness,
    pub front: Roughness,
}

impl Variant {
    pub const SS: Variant = Variant::new(Roughness::Smooth, Roughness::Smooth);
    pub const SR: Variant = Variant::new(Roughness::Smooth, Roughness::Rough);
    pub const RS: Variant = Variant::new(Roughness::Rough, Roughness::Smooth);
    pub const RR: Variant = Variant::new(Roughness::Rough, Roughness::Rough);
    pub const ALL: [Variant; 4] = [Variant::SS, Variant::SR, Variant::RS, Variant::RR];

    pub const fn new(rear: Roughness, front: Roughness) -> Self {
        Self { rear, front }
    }

    pub fn roughness(&self, link: Link) -> Roughness {
        match link {
            Link::Front => self.front,
            Link::Rear => self.rear,
        }
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.rear.letter(), self.front.letter())
    }

    pub fn parse(s: &str) -> Option<Variant> {
        Variant::ALL
            .into_iter()
            .find(|v| v.label().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Link index: the front (head) link is link 1, the rear link is link 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    Front,
    Rear,
}

impl Link {
    pub const BOTH: [Link; 2] = [Link::Front, Link::Rear];

    pub fn from_index(i: usize) -> Option<Link> {
        match i {
            1 => Some(Link::Front),
            2 => Some(Link::Rear),
            _ => None,
        }
    }

    // +1 for the front link, -1 for the rear link.
    fn side(self) -> f64 {
        match self {
            Link::Front => 1.0,
            Link::Rear => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeState {
    pub alpha: f64,
    pub alpha_dot: f64,
}

/// A link's midpoint frame in body coordinates and its derivative in `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkFrame {
    pub pose: Pose,
    /// `(dx/dalpha, dy/dalpha, dtheta/dalpha)` in body coordinates.
    pub dpose: Twist,
}

fn link_frame_unchecked(link: Link, alpha: f64, length: f64) -> LinkFrame {
    let s = link.side();
    let (sh, ch) = (0.5 * alpha).sin_cos();
    let half = 0.5 * length;
    LinkFrame {
        pose: Pose::new(s * half * ch, half * sh, s * 0.5 * alpha),
        dpose: Twist::new(-s * 0.5 * half * sh, 0.5 * half * ch, s * 0.5),
    }
}

/// Front and rear link frames at joint angle `alpha`.
pub fn link_configurations(alpha: f64, params: &DragParams) -> Result<(LinkFrame, LinkFrame)> {
    params.check_shape(alpha)?;
    Ok((
        link_frame_unchecked(Link::Front, alpha, params.link_length),
        link_frame_unchecked(Link::Rear, alpha, params.link_length),
    ))
}

fn jacobian_unchecked(link: Link, alpha: f64, length: f64) -> Matrix3x4<f64> {
    let LinkFrame { pose, dpose } = link_frame_unchecked(link, alpha, length);
    let (s, c) = pose.theta.sin_cos();
    // R(phi)^T applied to planar vectors.
    let rot_t = |vx: f64, vy: f64| (c * vx + s * vy, -s * vx + c * vy);
    let (wx, wy) = rot_t(-pose.y, pose.x);
    let (ax, ay) = rot_t(dpose.x, dpose.y);
    Matrix3x4::new(
        c,
        s,
        wx,
        ax, //
        -s,
        c,
        wy,
        ay, //
        0.0,
        0.0,
        1.0,
        dpose.theta,
    )
}

/// Maps `(xi_x, xi_y, xi_theta, alpha_dot)` to the link's body-frame velocity.
pub fn link_jacobian(link: Link, alpha: f64, params: &DragParams) -> Result<Matrix3x4<f64>> {
    params.check_shape(alpha)?;
    Ok(jacobian_unchecked(link, alpha, params.link_length))
}

/// Per-link resistive drag in the link frame, `-L diag(c_lon, c_lat, c_lat L^2 / 12)`.
pub fn drag_matrix(r: Roughness, params: &DragParams) -> Matrix3<f64> {
    let l = params.link_length;
    let c_lat = params.c_lat();
    -l * Matrix3::from_diagonal(&Vector3::new(
        params.c_lon_for(r),
        c_lat,
        c_lat * l * l / 12.0,
    ))
}

/// Drag matrix chosen by the scale rule from the link's longitudinal velocity.
pub fn scaled_drag_matrix(longitudinal_velocity: f64, params: &DragParams) -> Matrix3<f64> {
    drag_matrix(
        Roughness::from_longitudinal_velocity(longitudinal_velocity),
        params,
    )
}

/// Body rows of the net drag matrix, split into the twist and shape-rate blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSplit {
    pub body: Matrix3<f64>,
    pub shape: Vector3<f64>,
}

impl ForceSplit {
    /// Net body force and torque for configuration velocity `(xi, alpha_dot)`.
    pub fn net_force(&self, xi: &Twist, alpha_dot: f64) -> Vector3<f64> {
        self.body * Vector3::new(xi.x, xi.y, xi.theta) + self.shape * alpha_dot
    }
}

fn net_drag(alpha: f64, v: Variant, params: &DragParams) -> Matrix4<f64> {
    Link::BOTH
        .iter()
        .map(|&link| {
            let j = jacobian_unchecked(link, alpha, params.link_length);
            j.transpose() * drag_matrix(v.roughness(link), params) * j
        })
        .fold(Matrix4::zeros(), |acc, m| acc + m)
}

pub fn force_split(alpha: f64, v: Variant, params: &DragParams) -> Result<ForceSplit> {
    params.check_shape(alpha)?;
    let f = net_drag(alpha, v, params);
    Ok(ForceSplit {
        body: f.fixed_view::<3, 3>(0, 0).into_owned(),
        shape: f.fixed_view::<3, 1>(0, 3).into_owned(),
    })
}

/// Body velocity per unit joint rate, `A = -F_g^{-1} F_alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotilityVector {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl MotilityVector {
    pub const ZERO: MotilityVector = MotilityVector {
        x: 0.0,
        y: 0.0,
        theta: 0.0,
    };

    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta }
    }

    /// Body velocity produced by joint rate `alpha_dot`.
    pub fn body_velocity(&self, alpha_dot: f64) -> Twist {
        Twist::new(
            self.x * alpha_dot,
            self.y * alpha_dot,
            self.theta * alpha_dot,
        )
    }

    pub fn as_twist(&self) -> Twist {
        Twist::new(self.x, self.y, self.theta)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.theta]
    }
}

impl std::ops::Sub for MotilityVector {
    type Output = MotilityVector;
    fn sub(self, rhs: Self) -> Self {
        MotilityVector::new(self.x - rhs.x, self.y - rhs.y, self.theta - rhs.theta)
    }
}

pub fn motility(alpha: f64, v: Variant, params: &DragParams) -> Result<MotilityVector> {
    let split = force_split(alpha, v, params)?;
    // -F_g is symmetric positive definite away from the fold.
    let resistance = -split.body;
    let singular = |condition: f64| Error::SingularConfiguration { alpha, condition };
    let chol = resistance
        .cholesky()
        .ok_or_else(|| singular(f64::INFINITY))?;
    let condition = resistance.abs().row_sum().max() * chol.inverse().abs().row_sum().max();
    if condition.is_nan() || condition >= MAX_CONDITION {
        return Err(singular(condition));
    }
    let a = chol.solve(&split.shape);
    if !a.iter().all(|c| c.is_finite()) {
        return Err(singular(condition));
    }
    Ok(MotilityVector::new(a[0], a[1], a[2]))
}

/// Longitudinal (x) velocities of the front and rear links.
///
/// Rotation about a link's midpoint only produces lateral surface motion, so
/// the value is uniform along each link.
pub fn link_longitudinal_velocities(
    alpha: f64,
    alpha_dot: f64,
    xi: &Twist,
    params: &DragParams,
) -> Result<(f64, f64)> {
    params.check_shape(alpha)?;
    let q = Vector4::new(xi.x, xi.y, xi.theta, alpha_dot);
    let u = |link| (jacobian_unchecked(link, alpha, params.link_length) * q)[0];
    Ok((u(Link::Front), u(Link::Rear)))
}
