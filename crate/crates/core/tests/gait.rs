use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scaled_swimmer::gait::{
    compare, predict_displacement, simulate, Gait, Model, ShapePath, SimSettings,
};
use scaled_swimmer::geom::{compose, exp_twist, Pose};
use scaled_swimmer::swimmer::{DragParams, ShapeState, Variant};

fn params() -> DragParams {
    DragParams::default()
}

fn run<P: ShapePath>(path: &P, model: Model, steps: usize, cycles: usize) -> Pose {
    let settings = SimSettings {
        steps_per_cycle: steps,
        cycles,
    };
    simulate(path, model, &params(), &settings)
        .unwrap()
        .displacement
}

fn dist(a: &Pose, b: &Pose) -> f64 {
    a.difference(b).iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn random_gait(rng: &mut ChaCha8Rng, waypoints: bool) -> Gait {
    if waypoints {
        let period = rng.gen_range(0.5..3.0);
        let start = rng.gen_range(-0.8..0.8);
        let mut nodes = vec![(0.0, start)];
        for k in 1..4 {
            nodes.push((period * k as f64 / 4.0, rng.gen_range(-1.2..1.2)));
        }
        nodes.push((period, start));
        Gait::waypoints(nodes).unwrap()
    } else {
        let amp = rng.gen_range(0.05..1.2);
        let offset = rng.gen_range(-0.6..0.6);
        Gait::sinusoid(
            offset,
            amp,
            rng.gen_range(0.3..5.0),
            rng.gen_range(0.0..TAU),
        )
        .unwrap()
    }
}

#[test]
fn reversible_swimmers_do_not_move() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..8 {
        let g = random_gait(&mut rng, i % 2 == 1);
        for v in Variant::ALL {
            let d = run(&g, Model::Fixed(v), 4096, 1);
            assert!(
                d.as_array().iter().all(|c| c.abs() <= 1e-8),
                "{v} {g:?} -> {d:?}"
            );
        }
    }
}

#[test]
fn centred_gait_swims_straight() {
    let g = Gait::sinusoid(0.0, 0.8, 1.0, 0.0).unwrap();
    let d = run(&g, Model::Scaled, 4096, 1);
    assert!(d.x > 0.0);
    assert!(d.theta.abs() <= 1e-8);
}

#[test]
fn one_sided_gait_turns() {
    let g = Gait::sinusoid(0.4, 0.4, 1.0, 0.0).unwrap();
    let d = run(&g, Model::Scaled, 4096, 1);
    assert!(d.x > 0.0 && d.theta > 0.0, "{d:?}");
    // Mirrored gait turns the other way.
    let m = run(
        &Gait::sinusoid(-0.4, 0.4, 1.0, PI).unwrap(),
        Model::Scaled,
        4096,
        1,
    );
    assert!((m.x - d.x).abs() < 1e-10 && (m.theta + d.theta).abs() < 1e-10);
}

#[test]
fn period_does_not_matter() {
    let fast = run(
        &Gait::sinusoid(0.2, 0.7, 1.0, 0.4).unwrap(),
        Model::Scaled,
        4096,
        1,
    );
    let slow = run(
        &Gait::sinusoid(0.2, 0.7, 10.0, 0.4).unwrap(),
        Model::Scaled,
        4096,
        1,
    );
    assert!(dist(&fast, &slow) <= 1e-8, "{fast:?} vs {slow:?}");
}

/// `inner` played back on the warped clock `tau(t) = t + eps T / (2 pi) sin(2 pi t / T)`.
struct Warped {
    inner: Gait,
    eps: f64,
}

impl Warped {
    fn tau(&self, t: f64) -> (f64, f64) {
        let w = TAU / self.inner.period();
        (
            t + self.eps / w * (w * t).sin(),
            1.0 + self.eps * (w * t).cos(),
        )
    }

    fn tau_inv(&self, s: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.inner.period());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.tau(mid).0 < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl ShapePath for Warped {
    fn period(&self) -> f64 {
        self.inner.period()
    }

    fn shape_at(&self, t: f64) -> ShapeState {
        let (s, ds) = self.tau(t);
        let q = self.inner.shape_at(s);
        ShapeState {
            alpha: q.alpha,
            alpha_dot: q.alpha_dot * ds,
        }
    }

    fn switch_times(&self) -> Vec<f64> {
        self.inner
            .switch_times()
            .into_iter()
            .map(|s| self.tau_inv(s))
            .collect()
    }

    fn alpha_range(&self) -> (f64, f64) {
        self.inner.alpha_range()
    }
}

#[test]
fn nonuniform_clock_does_not_matter() {
    for (g, eps) in [
        (Gait::sinusoid(0.2, 0.7, 1.0, 0.4).unwrap(), 0.5),
        (Gait::sinusoid(0.0, 0.8, 2.0, 0.0).unwrap(), 0.3),
        (
            Gait::waypoints(vec![(0.0, 0.1), (0.3, 0.9), (0.7, -0.6), (1.0, 0.1)]).unwrap(),
            0.4,
        ),
    ] {
        let base = run(&g, Model::Scaled, 8192, 1);
        let warped = run(
            &Warped {
                inner: g.clone(),
                eps,
            },
            Model::Scaled,
            8192,
            1,
        );
        assert!(dist(&base, &warped) <= 1e-8, "{base:?} vs {warped:?}");
    }
}

#[test]
fn rk4_is_fourth_order_between_switches() {
    for g in [
        Gait::sinusoid(0.0, 0.8, 1.0, 0.0).unwrap(),
        Gait::sinusoid(0.3, 1.0, 1.0, 0.7).unwrap(),
    ] {
        let reference = run(&g, Model::Scaled, 1 << 16, 1);
        let err = |n: usize| dist(&run(&g, Model::Scaled, n, 1), &reference);
        for k in 5..8 {
            let ratio = err(1 << k) / err(1 << (k + 1));
            assert!(ratio >= 8.0, "2^{k}: ratio {ratio}");
        }
    }
}

#[test]
fn range_integral_matches_path_integral() {
    for g in [
        Gait::sinusoid(0.0, 0.8, 1.0, 0.0).unwrap(),
        Gait::sinusoid(0.4, 0.4, 1.0, 0.0).unwrap(),
        Gait::sinusoid(-0.3, 1.1, 2.5, 2.0).unwrap(),
        Gait::waypoints(vec![(0.0, 0.0), (0.25, 0.9), (0.75, -0.5), (1.0, 0.0)]).unwrap(),
    ] {
        let p = predict_displacement(&g, Model::Scaled, &params()).unwrap();
        let simple = p.simple_range.expect("two monotone runs");
        assert!((simple - p.dg_prime).norm() <= 1e-10, "{g:?}");
        assert_eq!(p.dg_pred, exp_twist(&p.dg_prime));
    }
}

#[test]
fn reversed_gait() {
    let p = params();
    for g in [
        Gait::sinusoid(0.2, 0.7, 1.0, 0.9).unwrap(),
        Gait::waypoints(vec![(0.0, 0.1), (0.3, 0.9), (0.7, -0.6), (1.0, 0.1)]).unwrap(),
    ] {
        let r = g.reversed();
        let pf = predict_displacement(&g, Model::Scaled, &p).unwrap();
        let pr = predict_displacement(&r, Model::Scaled, &p).unwrap();
        assert!((pf.dg_prime - pr.dg_prime).norm() <= 1e-8);
        // Started mid-stroke, the two runs are conjugate: same net turn.
        let (f, b) = (
            run(&g, Model::Scaled, 4096, 1),
            run(&r, Model::Scaled, 4096, 1),
        );
        assert!((f.theta - b.theta).abs() <= 1e-8);
    }
    // Started at an extremum, reversal only re-times the stroke.
    let g = Gait::sinusoid(0.2, 0.7, 1.0, PI / 2.0).unwrap();
    let (f, b) = (
        run(&g, Model::Scaled, 4096, 1),
        run(&g.reversed(), Model::Scaled, 4096, 1),
    );
    assert!(dist(&f, &b) <= 1e-8, "{f:?} vs {b:?}");
}

#[test]
fn cycles_compose() {
    let g = Gait::sinusoid(0.3, 0.6, 1.0, 0.2).unwrap();
    let one = run(&g, Model::Scaled, 4096, 1);
    let three = run(&g, Model::Scaled, 4096, 3);
    let composed = compose(&compose(&one, &one), &one);
    assert!(dist(&three, &composed) <= 1e-7);

    let settings = SimSettings {
        steps_per_cycle: 4096,
        cycles: 3,
    };
    let rep = compare(&g, Model::Scaled, &params(), &settings).unwrap();
    let single = predict_displacement(&g, Model::Scaled, &params()).unwrap();
    assert!((rep.dg_prime - single.dg_prime * 3.0).norm() < 1e-15);
    assert_eq!(rep.dg_pred, exp_twist(&rep.dg_prime));
}

#[test]
fn prediction_improves_for_small_gaits() {
    let errs: Vec<f64> = [0.8, 0.4, 0.2, 0.1]
        .iter()
        .map(|&a| {
            let g = Gait::sinusoid(0.0, a, 1.0, 0.0).unwrap();
            compare(&g, Model::Scaled, &params(), &SimSettings::default())
                .unwrap()
                .rel_err
        })
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0] && w[1] <= 0.75 * w[0], "{errs:?}");
    }
}
