//! Embedded Dormand–Prince 5(4) and fixed-step RK4 integrators with
//! cubic-Hermite dense output.

/// One accepted step with enough data to interpolate inside it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub f0: [f64; N],
    pub f1: [f64; N],
}

#[derive(Debug, Clone)]
pub(crate) struct Trajectory<const N: usize> {
    pub steps: Vec<Step<N>>,
}

impl<const N: usize> Trajectory<N> {
    pub fn start(&self) -> f64 {
        self.steps.first().map(|s| s.t0).unwrap_or(0.0)
    }

    pub fn end(&self) -> f64 {
        self.steps.last().map(|s| s.t1).unwrap_or(0.0)
    }

    /// Cubic Hermite interpolation at t (clamped to the covered span).
    pub fn eval(&self, t: f64) -> [f64; N] {
        let step = self.locate(t);
        let h = step.t1 - step.t0;
        if h == 0.0 {
            return step.y0;
        }
        let x = ((t - step.t0) / h).clamp(0.0, 1.0);
        let h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
        let h10 = x * (1.0 - x) * (1.0 - x);
        let h01 = x * x * (3.0 - 2.0 * x);
        let h11 = x * x * (x - 1.0);
        let mut out = [0.0; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = h00 * step.y0[i] + h10 * h * step.f0[i] + h01 * step.y1[i] + h11 * h * step.f1[i];
        }
        out
    }

    fn locate(&self, t: f64) -> &Step<N> {
        // Steps are ordered by integration direction; compare in that
        // order so the binary search sees an ascending sequence.
        let fwd = self.end() >= self.start();
        let idx = self
            .steps
            .binary_search_by(|s| {
                let (lo, hi) = (s.t0.min(s.t1), s.t0.max(s.t1));
                let before = if fwd { t < lo } else { t > hi };
                let after = if fwd { t > hi } else { t < lo };
                if before {
                    std::cmp::Ordering::Greater
                } else if after {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .unwrap_or_else(|i| i.min(self.steps.len() - 1));
        &self.steps[idx]
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StepError {
    #[error("step size underflow at t = {0}")]
    StepSizeUnderflow(f64),
    #[error("state left the integrable domain at t = {0}")]
    DomainExit(f64),
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Error coefficients: b5 − b4.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive Dormand–Prince 5(4). `guard` may reject states mid-step
/// (singularity watch); it returns false to abort.
#[allow(clippy::too_many_arguments)]
pub(crate) fn dopri5<const N: usize>(
    f: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t1: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_step: Option<f64>,
    guard: &dyn Fn(&[f64; N]) -> bool,
) -> Result<Trajectory<N>, StepError> {
    let span = t1 - t0;
    let dir = span.signum();
    if span == 0.0 {
        let f0 = f(t0, &y0);
        return Ok(Trajectory {
            steps: vec![Step {
                t0,
                t1,
                y0,
                y1: y0,
                f0,
                f1: f0,
            }],
        });
    }
    let h_cap = max_step.unwrap_or(f64::INFINITY).min(span.abs());
    let mut h = (1e-3 * span.abs()).min(h_cap) * dir;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut steps = Vec::new();
    let h_floor = 1e-14 * span.abs().max(1.0);

    while (t1 - t) * dir > 0.0 {
        if h.abs() < h_floor {
            return Err(StepError::StepSizeUnderflow(t));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }

        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        let mut failed_domain = false;
        for stage in 1..7 {
            let mut ys = y;
            for i in 0..N {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage) {
                    acc += A[stage - 1][j] * kj[i];
                }
                ys[i] += h * acc;
            }
            if !guard(&ys) {
                failed_domain = true;
                break;
            }
            k[stage] = f(t + C[stage] * h, &ys);
        }
        if failed_domain {
            h *= 0.5;
            continue;
        }

        // 5th-order solution is the last stage state (FSAL tableau).
        let mut y_next = y;
        for i in 0..N {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(6) {
                acc += A[5][j] * kj[i];
            }
            y_next[i] += h * acc;
        }

        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let scale = abs_tol + rel_tol * y[i].abs().max(y_next[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        let err = (err_sq / N as f64).sqrt().max(1e-30);

        if err <= 1.0 {
            let f1 = k[6];
            steps.push(Step {
                t0: t,
                t1: t + h,
                y0: y,
                y1: y_next,
                f0: k1,
                f1,
            });
            t += h;
            y = y_next;
            k1 = f1;
        }
        let factor = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        h = (h * factor).clamp(-h_cap, h_cap);
        if h.abs() < h_floor && (t1 - t) * dir > 0.0 {
            return Err(StepError::StepSizeUnderflow(t));
        }
    }
    Ok(Trajectory { steps })
}

/// Fixed-step classical RK4 (used for step-halving convergence checks).
pub(crate) fn rk4_fixed<const N: usize>(
    f: &dyn Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t1: f64,
    step: f64,
) -> Trajectory<N> {
    let span = t1 - t0;
    let n = (span.abs() / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut steps = Vec::with_capacity(n);
    let mut t = t0;
    let mut y = y0;
    let mut f0 = f(t, &y);
    for _ in 0..n {
        let k1 = f0;
        let mut y2 = y;
        for i in 0..N {
            y2[i] += 0.5 * h * k1[i];
        }
        let k2 = f(t + 0.5 * h, &y2);
        let mut y3 = y;
        for i in 0..N {
            y3[i] += 0.5 * h * k2[i];
        }
        let k3 = f(t + 0.5 * h, &y3);
        let mut y4 = y;
        for i in 0..N {
            y4[i] += h * k3[i];
        }
        let k4 = f(t + h, &y4);
        let mut y_next = y;
        for i in 0..N {
            y_next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let f1 = f(t + h, &y_next);
        steps.push(Step {
            t0: t,
            t1: t + h,
            y0: y,
            y1: y_next,
            f0,
            f1,
        });
        t += h;
        y = y_next;
        f0 = f1;
    }
    Trajectory { steps }
}

/// Refine a sign change of `e` inside [lo, hi] by bisection on the dense
/// output of a scalar function of the trajectory state.
pub(crate) fn refine_zero(e: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let e_lo = e(lo);
    if e_lo == 0.0 {
        return lo;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let em = e(mid);
        if em == 0.0 {
            return mid;
        }
        if em.signum() == e_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dopri5_harmonic_oscillator() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let traj = dopri5(
            &f,
            0.0,
            [1.0, 0.0],
            2.0 * std::f64::consts::PI,
            1e-12,
            1e-12,
            None,
            &|_| true,
        )
        .unwrap();
        let end = traj.eval(traj.end());
        assert!((end[0] - 1.0).abs() < 1e-9);
        assert!(end[1].abs() < 1e-9);
        // Dense output mid-way.
        let mid = traj.eval(std::f64::consts::PI);
        assert!((mid[0] + 1.0).abs() < 1e-8);
    }

    #[test]
    fn rk4_step_halving_fourth_order() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let exact = std::f64::consts::FRAC_PI_3.cos();
        let coarse = rk4_fixed(&f, 0.0, [1.0, 0.0], std::f64::consts::FRAC_PI_3, 0.02);
        let fine = rk4_fixed(&f, 0.0, [1.0, 0.0], std::f64::consts::FRAC_PI_3, 0.01);
        let e_coarse = (coarse.eval(coarse.end())[0] - exact).abs();
        let e_fine = (fine.eval(fine.end())[0] - exact).abs();
        let ratio = e_coarse / e_fine;
        assert!(
            ratio > 10.0 && ratio < 24.0,
            "order-4 halving ratio {ratio}"
        );
    }

    #[test]
    fn backwards_integration() {
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let traj = dopri5(&f, 0.0, [1.0], -1.0, 1e-12, 1e-12, None, &|_| true).unwrap();
        assert!((traj.eval(-1.0)[0] - (-1.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn zero_refinement() {
        let e = |t: f64| (t - 1.234).sin();
        let z = refine_zero(&e, 1.0, 1.5);
        assert!((z - 1.234).abs() < 1e-12);
    }
}
