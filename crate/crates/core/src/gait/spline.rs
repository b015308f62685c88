//! Periodic cubic interpolation through closed waypoint loops.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCubic {
    knots: Vec<f64>,
    /// `a + b u + c u^2 + d u^3` with `u = t - knots[i]`.
    coeffs: Vec<[f64; 4]>,
}

impl PeriodicCubic {
    /// `nodes` are `(t, value)` pairs with strictly increasing `t` and equal
    /// first and last values.
    pub fn new(nodes: &[(f64, f64)]) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidGait(
                "a waypoint loop needs at least three nodes".into(),
            ));
        }
        if nodes.iter().any(|(t, a)| !t.is_finite() || !a.is_finite()) {
            return Err(Error::InvalidGait("non-finite waypoint".into()));
        }
        if nodes.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidGait(
                "waypoint times must be strictly increasing".into(),
            ));
        }
        let (first, last) = (nodes[0].1, nodes[nodes.len() - 1].1);
        if first != last {
            return Err(Error::InvalidGait(format!(
                "waypoint loop is not closed: first value {first}, last value {last}"
            )));
        }

        let n = nodes.len() - 1;
        let h: Vec<f64> = nodes.windows(2).map(|w| w[1].0 - w[0].0).collect();
        let y: Vec<f64> = nodes[..n].iter().map(|p| p.1).collect();
        let slope = |i: usize| (y[(i + 1) % n] - y[i]) / h[i];

        // Second derivatives M_i from the cyclic tridiagonal system.
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut rhs = DVector::<f64>::zeros(n);
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            m[(i, prev)] += h[prev];
            m[(i, i)] += 2.0 * (h[prev] + h[i]);
            m[(i, next)] += h[i];
            rhs[i] = 6.0 * (slope(i) - slope(prev));
        }
        let second = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidGait("degenerate waypoint spacing".into()))?;

        let coeffs = (0..n)
            .map(|i| {
                let (mi, mj) = (second[i], second[(i + 1) % n]);
                [
                    y[i],
                    slope(i) - h[i] * (2.0 * mi + mj) / 6.0,
                    0.5 * mi,
                    (mj - mi) / (6.0 * h[i]),
                ]
            })
            .collect();
        Ok(Self {
            knots: nodes.iter().map(|p| p.0).collect(),
            coeffs,
        })
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    pub fn period(&self) -> f64 {
        self.knots[self.knots.len() - 1] - self.knots[0]
    }

    fn piece(&self, t: f64) -> (usize, f64) {
        let local = self.start() + (t - self.start()).rem_euclid(self.period());
        let i = match self.knots.partition_point(|&k| k <= local) {
            0 => 0,
            k => (k - 1).min(self.coeffs.len() - 1),
        };
        (i, local - self.knots[i])
    }

    /// Value and first derivative at `t` (periodic in `t`).
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let (i, u) = self.piece(t);
        let [a, b, c, d] = self.coeffs[i];
        (
            a + u * (b + u * (c + u * d)),
            b + u * (2.0 * c + 3.0 * u * d),
        )
    }

    fn interval(&self, i: usize) -> f64 {
        self.knots[i + 1] - self.knots[i]
    }

    // Roots of the derivative strictly inside piece i, in local coordinates.
    fn derivative_roots(&self, i: usize) -> Vec<f64> {
        let [_, b, c, d] = self.coeffs[i];
        let h = self.interval(i);
        let (qa, qb, qc) = (3.0 * d, 2.0 * c, b);
        let mut roots = Vec::new();
        let scale = qa.abs().max(qb.abs()).max(qc.abs());
        if scale == 0.0 {
            return roots;
        }
        if qa.abs() <= 1e-14 * scale {
            if qb != 0.0 {
                roots.push(-qc / qb);
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let q = -0.5 * (qb + qb.signum() * disc.sqrt());
                if q != 0.0 {
                    roots.push(q / qa);
                    roots.push(qc / q);
                } else {
                    roots.push(0.0);
                }
            }
        }
        roots.retain(|&u| u > 0.0 && u < h);
        roots.sort_by(f64::total_cmp);
        roots
    }

    /// Absolute times in `[start, start + period)` where the derivative vanishes.
    pub fn stationary_times(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..self.coeffs.len() {
            out.extend(self.derivative_roots(i).iter().map(|u| self.knots[i] + u));
            // Knots are stationary when the (continuous) derivative is zero there.
            if self.coeffs[i][1] == 0.0 {
                out.push(self.knots[i]);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Absolute times in `[start, start + period)` where the value changes sign.
    pub fn sign_changes(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..self.coeffs.len() {
            let [a, b, c, d] = self.coeffs[i];
            let p = |u: f64| a + u * (b + u * (c + u * d));
            let mut cuts = vec![0.0];
            cuts.extend(self.derivative_roots(i));
            cuts.push(self.interval(i));
            for w in cuts.windows(2) {
                let (mut lo, mut hi) = (w[0], w[1]);
                let (plo, phi) = (p(lo), p(hi));
                if plo == 0.0 {
                    // Exact zero at a knot; zeros at interior extrema only touch.
                    if lo == 0.0 {
                        let before = self.eval(self.knots[i] - 1e-9 * self.period()).0;
                        if before * phi < 0.0 {
                            out.push(self.knots[i]);
                        }
                    }
                    continue;
                }
                if plo * phi >= 0.0 {
                    continue;
                }
                // Monotone on [lo, hi]: plain bisection.
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if p(mid) * plo > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push(self.knots[i] + 0.5 * (lo + hi));
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        out
    }

    /// Minimum and maximum of the interpolant over one period.
    pub fn range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.coeffs.len() {
            let [a, b, c, d] = self.coeffs[i];
            let p = |u: f64| a + u * (b + u * (c + u * d));
            let mut us = vec![0.0, self.interval(i)];
            us.extend(self.derivative_roots(i));
            for u in us {
                let v = p(u);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }
}
