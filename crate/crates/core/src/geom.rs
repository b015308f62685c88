//! Planar rigid-motion algebra.
//!
//! Poses are elements of SE(2) stored as `(x, y, theta)` with the heading
//! normalized to `(-pi, pi]`. Twists are body-frame velocities, or integrated
//! body-frame displacements when used as the argument of [`exp_twist`].

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Below this rotation magnitude the exponential map switches to its series form.
pub const EXP_SERIES_THRESHOLD: f64 = 1e-6;

/// Wraps an angle into `(-pi, pi]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub const IDENTITY: Pose = Pose {
        x: 0.0,
        y: 0.0,
        theta: 0.0,
    };

    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn inverse(&self) -> Pose {
        let (s, c) = self.theta.sin_cos();
        Pose::new(
            -c * self.x - s * self.y,
            s * self.x - c * self.y,
            -self.theta,
        )
    }

    /// Expresses a body-frame twist in the world frame: `(R(theta) v, omega)`.
    pub fn world_velocity(&self, xi: &Twist) -> Twist {
        let (s, c) = self.theta.sin_cos();
        Twist {
            x: c * xi.x - s * xi.y,
            y: s * xi.x + c * xi.y,
            theta: xi.theta,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.theta]
    }

    /// Componentwise difference with the heading difference wrapped.
    pub fn difference(&self, other: &Pose) -> [f64; 3] {
        [
            self.x - other.x,
            self.y - other.y,
            normalize_angle(self.theta - other.theta),
        ]
    }
}

impl Default for Pose {
    fn default() -> Self {
        Pose::IDENTITY
    }
}

/// Group product: `g2` expressed in the frame of `g1`.
pub fn compose(g1: &Pose, g2: &Pose) -> Pose {
    let (s, c) = g1.theta.sin_cos();
    Pose::new(
        g1.x + c * g2.x - s * g2.y,
        g1.y + s * g2.x + c * g2.y,
        g1.theta + g2.theta,
    )
}

/// Body velocity `(xi_x, xi_y, xi_theta)`, or an integrated body displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Twist {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Twist {
    pub const ZERO: Twist = Twist {
        x: 0.0,
        y: 0.0,
        theta: 0.0,
    };

    /// Panics on non-finite components; use [`Twist::try_new`] for untrusted input.
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self::try_new(x, y, theta).expect("twist components must be finite")
    }

    pub fn try_new(x: f64, y: f64, theta: f64) -> Option<Self> {
        (x.is_finite() && y.is_finite() && theta.is_finite()).then_some(Self { x, y, theta })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.theta]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.theta * self.theta).sqrt()
    }
}

impl Add for Twist {
    type Output = Twist;
    fn add(self, rhs: Twist) -> Twist {
        Twist {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            theta: self.theta + rhs.theta,
        }
    }
}

impl Sub for Twist {
    type Output = Twist;
    fn sub(self, rhs: Twist) -> Twist {
        Twist {
            x: self.x - rhs.x,
            y: self.y - rhs.y,
            theta: self.theta - rhs.theta,
        }
    }
}

impl Neg for Twist {
    type Output = Twist;
    fn neg(self) -> Twist {
        Twist {
            x: -self.x,
            y: -self.y,
            theta: -self.theta,
        }
    }
}

impl Mul<f64> for Twist {
    type Output = Twist;
    fn mul(self, k: f64) -> Twist {
        Twist {
            x: self.x * k,
            y: self.y * k,
            theta: self.theta * k,
        }
    }
}

/// Flows the constant body twist `v` for unit time.
///
/// The result lies on a circular arc of curvature `v.theta / |(v.x, v.y)|`;
/// for `|v.theta| < EXP_SERIES_THRESHOLD` the coefficients `sin(w)/w` and
/// `(1 - cos(w))/w` are evaluated from their Taylor series.
pub fn exp_twist(v: &Twist) -> Pose {
    let w = v.theta;
    let (a, b) = if w.abs() < EXP_SERIES_THRESHOLD {
        let w2 = w * w;
        (
            1.0 - w2 / 6.0 + w2 * w2 / 120.0,
            w / 2.0 - w * w2 / 24.0 + w * w2 * w2 / 720.0,
        )
    } else {
        let h = (0.5 * w).sin();
        (w.sin() / w, 2.0 * h * h / w)
    };
    Pose::new(a * v.x - b * v.y, b * v.x + a * v.y, w)
}

/// One explicit Euler step of the reconstruction equation `g' = g * xi`.
pub fn step_world(g: &Pose, xi: &Twist, dt: f64) -> Pose {
    debug_assert!(dt >= 0.0, "negative time step");
    let v = g.world_velocity(xi);
    Pose::new(g.x + v.x * dt, g.y + v.y * dt, g.theta + v.theta * dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_pose_close(a: &Pose, b: &Pose, tol: f64) {
        let d = a.difference(b);
        assert!(
            d.iter().all(|v| v.abs() <= tol),
            "{a:?} vs {b:?} (tol {tol})"
        );
    }

    // Symmetric split increment: half-turn, straight move, half-turn.
    fn split_flow(v: &Twist, n: u32) -> Pose {
        let k = f64::from(n);
        let half = Pose::new(0.0, 0.0, v.theta / (2.0 * k));
        let step = compose(&compose(&half, &Pose::new(v.x / k, v.y / k, 0.0)), &half);
        (0..n).fold(Pose::IDENTITY, |g, _| compose(&g, &step))
    }

    #[test]
    fn normalization_range() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert!((normalize_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((normalize_angle(-0.5) + 0.5).abs() < 1e-15);
        assert!((normalize_angle(7.0) - (7.0 - TAU)).abs() < 1e-15);
    }

    #[test]
    fn compose_examples() {
        let g = Pose::new(0.3, -1.2, 2.0);
        assert_pose_close(&compose(&Pose::IDENTITY, &g), &g, 0.0);
        assert_pose_close(
            &compose(&Pose::new(1.0, 0.0, PI / 2.0), &Pose::new(1.0, 0.0, 0.0)),
            &Pose::new(1.0, 1.0, PI / 2.0),
            1e-15,
        );
        assert_pose_close(&compose(&g, &g.inverse()), &Pose::IDENTITY, 1e-15);
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            exp_twist(&Twist::new(0.7, 0.0, 0.0)),
            Pose::new(0.7, 0.0, 0.0)
        );
        assert_eq!(
            exp_twist(&Twist::new(0.0, 0.0, 1.1)),
            Pose::new(0.0, 0.0, 1.1)
        );
        let g = exp_twist(&Twist::new(1.0, 0.0, PI / 2.0));
        assert_pose_close(&g, &Pose::new(2.0 / PI, 2.0 / PI, PI / 2.0), 1e-15);
    }

    #[test]
    fn exp_matches_split_composition_limit() {
        let v = Twist::new(1.0, 0.0, PI / 2.0);
        let exact = exp_twist(&v);
        let errs: Vec<f64> = (4..10)
            .map(|k| {
                let d = split_flow(&v, 1 << k).difference(&exact);
                d.iter().map(|e| e * e).sum::<f64>().sqrt()
            })
            .collect();
        for w in errs.windows(2) {
            assert!(w[0] / w[1] >= 3.9, "not second order: {errs:?}");
        }
        assert!(errs.last().unwrap() < &1e-5);
    }

    #[test]
    fn exp_series_branch_is_continuous() {
        for &(vx, vy) in &[(1.0, 0.0), (0.3, -2.0), (-1.5, 0.7)] {
            let below = exp_twist(&Twist::new(vx, vy, EXP_SERIES_THRESHOLD * (1.0 - 1e-9)));
            let above = exp_twist(&Twist::new(vx, vy, EXP_SERIES_THRESHOLD * (1.0 + 1e-9)));
            assert_pose_close(&below, &above, 1e-10);
            let small = Twist::new(vx, vy, 0.5 * EXP_SERIES_THRESHOLD);
            let w = small.theta;
            let b = 2.0 * (0.5 * w).sin().powi(2) / w;
            let closed = Pose::new(w.sin() / w * vx - b * vy, b * vx + w.sin() / w * vy, w);
            assert_pose_close(&exp_twist(&small), &closed, 1e-12);
        }
    }

    #[test]
    fn step_world_examples() {
        let g = step_world(&Pose::IDENTITY, &Twist::new(1.0, 0.0, 0.0), 0.5);
        assert_pose_close(&g, &Pose::new(0.5, 0.0, 0.0), 0.0);
        let g = step_world(
            &Pose::new(0.0, 0.0, PI / 2.0),
            &Twist::new(1.0, 0.0, 0.0),
            1.0,
        );
        assert_pose_close(&g, &Pose::new(0.0, 1.0, PI / 2.0), 1e-15);
        let g0 = Pose::new(0.4, 2.0, -3.0);
        assert_eq!(step_world(&g0, &Twist::ZERO, 0.3), g0);
    }

    #[test]
    fn twist_rejects_non_finite() {
        assert!(Twist::try_new(f64::NAN, 0.0, 0.0).is_none());
        assert!(Twist::try_new(0.0, f64::INFINITY, 0.0).is_none());
        assert!(Twist::try_new(0.0, 0.0, 1.0).is_some());
    }

    fn pose() -> impl Strategy<Value = Pose> {
        (-5.0..5.0f64, -5.0..5.0f64, -PI..PI).prop_map(|(x, y, t)| Pose::new(x, y, t))
    }

    proptest! {
        #[test]
        fn compose_is_associative(a in pose(), b in pose(), c in pose()) {
            let lhs = compose(&compose(&a, &b), &c);
            let rhs = compose(&a, &compose(&b, &c));
            for d in lhs.difference(&rhs) {
                prop_assert!(d.abs() <= 1e-12);
            }
        }

        #[test]
        fn heading_always_normalized(a in pose(), b in pose()) {
            let g = compose(&a, &b);
            prop_assert!(g.theta > -PI && g.theta <= PI);
            let h = exp_twist(&Twist::new(a.x, a.y, 4.0 * a.theta));
            prop_assert!(h.theta > -PI && h.theta <= PI);
        }

        #[test]
        fn exp_is_a_one_parameter_subgroup(
            vx in -2.0..2.0f64, vy in -2.0..2.0f64, w in -1.5..1.5f64, k in 1u32..5
        ) {
            let v = Twist::new(vx, vy, w);
            let g = exp_twist(&v);
            let pow = (0..k).fold(Pose::IDENTITY, |acc, _| compose(&acc, &g));
            let direct = exp_twist(&(v * f64::from(k)));
            for d in pow.difference(&direct) {
                prop_assert!(d.abs() <= 1e-12);
            }
        }
    }
}
