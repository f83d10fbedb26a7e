//! Independent numerical verification of the analytic orbit engine.
//!
//! Two routes, neither of which touches an elliptic function:
//!
//! 1. `integrate_separated` — the separated first-order system, recast
//!    as second-order equations so turning points need no square-root
//!    sign bookkeeping. The radial variable is integrated in the
//!    compactified chart w = 1/u, in which
//!
//!    ```text
//!    (dw/dζ)² = P(w) = 2 (1−w²)(−g w² + w + h)
//!    (dv/dζ)² = Q(v) = 2 (1−v²)(−h v² + (1−2γ) v + g)
//!    ```
//!
//!    and the equator (u = ±∞) is the regular interior point w = 0, so
//!    one integration covers both hemispheres. The first integrals are
//!    monitored as residuals |w′² − P(w)|, |v′² − Q(v)| along the way.
//!
//! 2. `integrate_cartesian` — Newton's equations on the sphere with the
//!    Lagrange multiplier eliminated through the constraint,
//!    λ = (X·∇𝒰 − |Ẋ|²)/R², integrated in physical time.
//!
//! `compare_to_analytic` runs both against the closed-form engine and
//! reports maximal deviations, invariant drift and equator-crossing
//! counts.

mod rk;

use crate::geometry::{glued_cartesian, glued_coordinates, ProblemParams, Sign, SpherePoint};
use crate::invariants::{
    hamiltonian, second_invariant, CartesianState, InvariantError, InvariantPair,
};
use crate::orbit::{OrbitError, OrbitSpec};
use rk::{dopri5, refine_zero, rk4_fixed, StepError, Trajectory};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("invalid initial data: {0}")]
    InvalidInitial(String),
    #[error("first-integral residual {residual:e} exceeded 10x the drift budget {allowed:e}")]
    ToleranceFailure { residual: f64, allowed: f64 },
    #[error("trajectory approached a center singularity at t = {t}")]
    SingularityEncountered { t: f64 },
    #[error("integrator step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

impl From<StepError> for OracleError {
    fn from(e: StepError) -> Self {
        match e {
            StepError::StepSizeUnderflow(t) | StepError::DomainExit(t) => {
                OracleError::StepSizeUnderflow { t }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegratorMethod {
    /// Embedded Dormand–Prince 5(4) with adaptive steps.
    AdaptiveRk,
    /// Classical fixed-step RK4 (step = `max_step`).
    FixedRk4,
}

/// Integrator configuration shared by both oracle routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: IntegratorMethod,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Step cap (and the fixed step for `FixedRk4`).
    pub max_step: Option<f64>,
    /// Renormalize the sphere constraint (and re-tangent the velocity)
    /// after each output segment of the Cartesian route. Without it the
    /// multiplier-eliminated formulation lets constraint error feed back
    /// into the energy super-linearly on long spans.
    pub projection: bool,
    /// Budget for first-integral / invariant drift; exceeding ten times
    /// this aborts with `ToleranceFailure`.
    pub drift_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: IntegratorMethod::AdaptiveRk,
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_step: Some(0.1),
            projection: true,
            drift_tol: 1e-8,
        }
    }
}

impl IntegratorConfig {
    fn validate(&self) -> Result<(), OracleError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.drift_tol > 0.0) {
            return Err(OracleError::InvalidInitial(
                "tolerances must be positive".into(),
            ));
        }
        if let Some(h) = self.max_step {
            #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN as well
            if !(h > 0.0) {
                return Err(OracleError::InvalidInitial(
                    "max_step must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One sample of the separated-route trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatedSample {
    pub zeta: f64,
    /// Glued radial coordinate u = 1/w (±∞ at an equator crossing).
    pub u: f64,
    pub v: f64,
    /// Compactified radial coordinate actually integrated.
    pub w: f64,
}

/// Output of the separated-equation route.
#[derive(Debug, Clone)]
pub struct SeparatedTrajectory {
    traj: Trajectory<4>,
    samples: Vec<SeparatedSample>,
    /// ζ values (in integration order) where the x₂-branch of the
    /// Cartesian reconstruction flips: turning points at |w| = 1 or
    /// |v| = 1.
    branch_flips: Vec<f64>,
    /// ζ values where the equator (w = 0) is crossed.
    crossings: Vec<f64>,
    pub max_first_integral_residual: f64,
}

impl SeparatedTrajectory {
    pub fn samples(&self) -> &[SeparatedSample] {
        &self.samples
    }

    pub fn equator_crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Dense evaluation of the glued coordinates at any ζ inside the
    /// integrated span.
    pub fn eval_wv(&self, zeta: f64) -> (f64, f64) {
        let y = self.traj.eval(zeta);
        (y[0], y[2])
    }

    /// Cartesian point at ζ, with the x₂ branch propagated from its
    /// value `sign_y0` at the integration start through every
    /// coordinate-boundary turning.
    pub fn point_at(&self, zeta: f64, sign_y0: Sign, p: &ProblemParams) -> SpherePoint {
        let start = self.traj.start();
        let flips = self
            .branch_flips
            .iter()
            .filter(|&&z| between(start, zeta, z))
            .count();
        let sign = if flips % 2 == 0 {
            sign_y0
        } else {
            sign_y0.flip()
        };
        let (w, v) = self.eval_wv(zeta);
        glued_cartesian(w, v, sign, p)
    }

    /// Cartesian reconstruction of the sample grid. `sign_y0` is the
    /// x₂ branch at the first sample.
    pub fn cartesian_track(&self, sign_y0: Sign, p: &ProblemParams) -> Vec<(f64, SpherePoint)> {
        self.samples
            .iter()
            .map(|s| (s.zeta, self.point_at(s.zeta, sign_y0, p)))
            .collect()
    }
}

fn between(a: f64, b: f64, x: f64) -> bool {
    if a <= b {
        x > a && x <= b
    } else {
        x >= b && x < a
    }
}

/// Radial polynomial P(w) of the compactified chart and its derivative.
fn radial_poly(h: f64, g: f64, w: f64) -> f64 {
    2.0 * (1.0 - w * w) * (-g * w * w + w + h)
}

fn radial_poly_deriv(h: f64, g: f64, w: f64) -> f64 {
    2.0 * (-2.0 * w * (-g * w * w + w + h) + (1.0 - w * w) * (1.0 - 2.0 * g * w))
}

/// Angular polynomial Q(v) and derivative.
fn angular_poly(h: f64, g: f64, c: f64, v: f64) -> f64 {
    2.0 * (1.0 - v * v) * (-h * v * v + c * v + g)
}

fn angular_poly_deriv(h: f64, g: f64, c: f64, v: f64) -> f64 {
    2.0 * (-2.0 * v * (-h * v * v + c * v + g) + (1.0 - v * v) * (-2.0 * h * v + c))
}

/// Integrate the separated equations from planar-elliptic initial data
/// (u₀ signed by hemisphere, |u₀| ≥ 1), producing `n_out` uniform
/// samples over the ζ span. `sign_u`, `sign_v` select the initial
/// direction of each coordinate (immaterial when starting on a turning
/// point).
pub fn integrate_separated(
    inv: &InvariantPair,
    p: &ProblemParams,
    initial: (f64, f64, Sign, Sign),
    span: (f64, f64),
    n_out: usize,
    cfg: &IntegratorConfig,
) -> Result<SeparatedTrajectory, OracleError> {
    let (u0, v0, su, sv) = initial;
    if u0.abs() < 1.0 {
        return Err(OracleError::InvalidInitial(format!(
            "|u0| = {} < 1",
            u0.abs()
        )));
    }
    let planar = inv.to_planar(p);
    let (h, g) = (planar.h, planar.g);
    let c = 1.0 - 2.0 * p.gamma();
    let w0 = 1.0 / u0;
    let pw0 = radial_poly(h, g, w0);
    let qv0 = angular_poly(h, g, c, v0);
    if pw0 < -1e-9 {
        return Err(OracleError::InvalidInitial(format!(
            "u0 = {u0} outside the allowed radial range (P = {pw0:e})"
        )));
    }
    if v0.abs() >= 1.0 || qv0 < -1e-9 {
        return Err(OracleError::InvalidInitial(format!(
            "v0 = {v0} outside the allowed angular range (Q = {qv0:e})"
        )));
    }
    // dw/dζ = −u′/u²: the w-direction is opposite the u-direction.
    let wd0 = -su.factor() * pw0.max(0.0).sqrt();
    let vd0 = sv.factor() * qv0.max(0.0).sqrt();
    integrate_separated_glued(inv, p, [w0, wd0, v0, vd0], span, n_out, cfg)
}

/// Same as `integrate_separated`, seeded directly in the glued chart
/// with explicit derivatives.
pub fn integrate_separated_glued(
    inv: &InvariantPair,
    p: &ProblemParams,
    y0: [f64; 4],
    span: (f64, f64),
    n_out: usize,
    cfg: &IntegratorConfig,
) -> Result<SeparatedTrajectory, OracleError> {
    cfg.validate()?;
    if n_out < 2 {
        return Err(OracleError::InvalidInitial(format!(
            "need at least 2 output samples, got {n_out}"
        )));
    }
    let planar = inv.to_planar(p);
    let (h, g) = (planar.h, planar.g);
    let c = 1.0 - 2.0 * p.gamma();

    let deriv = move |_z: f64, y: &[f64; 4]| {
        [
            y[1],
            0.5 * radial_poly_deriv(h, g, y[0]),
            y[3],
            0.5 * angular_poly_deriv(h, g, c, y[2]),
        ]
    };
    let guard = |y: &[f64; 4]| y[0].abs() <= 1.0 + 1e-6 && y[2].abs() <= 1.0 + 1e-6;
    let traj: Trajectory<4> = match cfg.method {
        IntegratorMethod::AdaptiveRk => dopri5(
            &deriv,
            span.0,
            y0,
            span.1,
            cfg.abs_tol,
            cfg.rel_tol,
            cfg.max_step,
            &guard,
        )?,
        IntegratorMethod::FixedRk4 => {
            let step = cfg.max_step.unwrap_or((span.1 - span.0).abs() / 1000.0);
            rk4_fixed(&deriv, span.0, y0, span.1, step)
        }
    };

    // Uniform output grid.
    let mut samples = Vec::with_capacity(n_out);
    let mut max_residual = 0.0_f64;
    let step = (span.1 - span.0) / (n_out - 1) as f64;
    for i in 0..n_out {
        let zeta = span.0 + step * i as f64;
        let y = traj.eval(zeta);
        let res_w = (y[1] * y[1] - radial_poly(h, g, y[0])).abs();
        let res_v = (y[3] * y[3] - angular_poly(h, g, c, y[2])).abs();
        max_residual = max_residual.max(res_w).max(res_v);
        samples.push(SeparatedSample {
            zeta,
            u: 1.0 / y[0],
            v: y[2],
            w: y[0],
        });
    }
    if max_residual > 10.0 * cfg.drift_tol {
        return Err(OracleError::ToleranceFailure {
            residual: max_residual,
            allowed: cfg.drift_tol,
        });
    }

    // Events: turning points of w and v at the coordinate boundary flip
    // the x₂ branch; w sign changes cross the equator.
    let mut branch_flips = Vec::new();
    let mut crossings = Vec::new();
    for s in &traj.steps {
        if s.y0[1] != 0.0 && s.y0[1].signum() != s.y1[1].signum() {
            let z = refine_zero(&|t| traj.eval(t)[1], s.t0, s.t1);
            if traj.eval(z)[0].abs() > 1.0 - 1e-6 {
                branch_flips.push(z);
            }
        }
        if s.y0[3] != 0.0 && s.y0[3].signum() != s.y1[3].signum() {
            let z = refine_zero(&|t| traj.eval(t)[3], s.t0, s.t1);
            if traj.eval(z)[2].abs() > 1.0 - 1e-6 {
                branch_flips.push(z);
            }
        }
        if s.y0[0] != 0.0 && s.y1[0] != 0.0 && s.y0[0].signum() != s.y1[0].signum() {
            crossings.push(refine_zero(&|t| traj.eval(t)[0], s.t0, s.t1));
        }
    }

    Ok(SeparatedTrajectory {
        traj,
        samples,
        branch_flips,
        crossings,
        max_first_integral_residual: max_residual,
    })
}

/// Output of the Cartesian Newton route.
#[derive(Debug, Clone)]
pub struct CartesianTrajectory {
    pub samples: Vec<(f64, CartesianState)>,
    /// max | |X|² − R² | along the samples.
    pub constraint_drift: f64,
    /// max |H(t) − H(t₀)| along the samples (nondimensional).
    pub h_drift: f64,
    /// max |Ω(t) − Ω(t₀)|.
    pub omega_drift: f64,
}

fn gradient_potential(pt: &SpherePoint, p: &ProblemParams) -> Option<[f64; 3]> {
    let (s, sb, r) = (p.sigma(), p.sigma_bar(), p.radius());
    let d1 = s * pt.z + sb * pt.x;
    let d2 = s * pt.z - sb * pt.x;
    let r2 = r * r;
    let s1sq = r2 - d1 * d1;
    let s2sq = r2 - d2 * d2;
    if s1sq < 1e-10 * r2 || s2sq < 1e-10 * r2 {
        return None;
    }
    let f1 = r * p.gamma1() / s1sq.powf(1.5);
    let f2 = r * p.gamma2() / s2sq.powf(1.5);
    // ∇𝒰 = −R [ γ₁/s₁³ ∇d₁ + γ₂/s₂³ ∇d₂ ], ∇d₁ = (σ̄, 0, σ), ∇d₂ = (−σ̄, 0, σ).
    Some([-(f1 * sb - f2 * sb), 0.0, -(f1 * s + f2 * s)])
}

/// Integrate Newton's equations on the sphere in physical (dimensional)
/// time, producing `n_out` uniform samples over the t span.
pub fn integrate_cartesian(
    state0: &CartesianState,
    p: &ProblemParams,
    t_span: (f64, f64),
    n_out: usize,
    cfg: &IntegratorConfig,
) -> Result<CartesianTrajectory, OracleError> {
    cfg.validate()?;
    if n_out < 2 {
        return Err(OracleError::InvalidInitial(format!(
            "need at least 2 output samples, got {n_out}"
        )));
    }
    let grid: Vec<f64> = (0..n_out)
        .map(|i| t_span.0 + (t_span.1 - t_span.0) * i as f64 / (n_out - 1) as f64)
        .collect();
    integrate_cartesian_grid(state0, p, &grid, cfg)
}

/// Cartesian route sampled on an explicit (monotone) time grid.
pub fn integrate_cartesian_grid(
    state0: &CartesianState,
    p: &ProblemParams,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<CartesianTrajectory, OracleError> {
    cfg.validate()?;
    let r = p.radius();
    let r2 = r * r;
    let deriv = move |_t: f64, y: &[f64; 6]| {
        let pt = SpherePoint {
            x: y[0],
            y: y[1],
            z: y[2],
        };
        let grad = gradient_potential(&pt, p).unwrap_or([0.0; 3]);
        let speed2 = y[3] * y[3] + y[4] * y[4] + y[5] * y[5];
        // λ = (X·∇𝒰 − |Ẋ|²)/R².
        let lambda = (y[0] * grad[0] + y[1] * grad[1] + y[2] * grad[2] - speed2) / r2;
        [
            y[3],
            y[4],
            y[5],
            -grad[0] + lambda * y[0],
            -grad[1] + lambda * y[1],
            -grad[2] + lambda * y[2],
        ]
    };
    let guard = move |y: &[f64; 6]| {
        let pt = SpherePoint {
            x: y[0],
            y: y[1],
            z: y[2],
        };
        gradient_potential(&pt, p).is_some()
    };

    let mut y = [
        state0.position.x,
        state0.position.y,
        state0.position.z,
        state0.velocity[0],
        state0.velocity[1],
        state0.velocity[2],
    ];
    let h0 = hamiltonian(state0, p)?;
    let omega0 = second_invariant(state0, p)?;

    let mut samples = Vec::with_capacity(t_grid.len());
    let mut constraint_drift = 0.0_f64;
    let mut h_drift = 0.0_f64;
    let mut omega_drift = 0.0_f64;

    let record = |y: &[f64; 6],
                  t: f64,
                  samples: &mut Vec<(f64, CartesianState)>,
                  constraint_drift: &mut f64,
                  h_drift: &mut f64,
                  omega_drift: &mut f64|
     -> Result<(), OracleError> {
        let state = CartesianState::new_unchecked(
            SpherePoint {
                x: y[0],
                y: y[1],
                z: y[2],
            },
            [y[3], y[4], y[5]],
        );
        *constraint_drift = constraint_drift.max((state.position.sphere_residual(p)).abs());
        match (hamiltonian(&state, p), second_invariant(&state, p)) {
            (Ok(hh), Ok(oo)) => {
                *h_drift = h_drift.max((hh - h0).abs());
                *omega_drift = omega_drift.max((oo - omega0).abs());
            }
            _ => return Err(OracleError::SingularityEncountered { t }),
        }
        samples.push((t, state));
        Ok(())
    };

    record(
        &y,
        t_grid[0],
        &mut samples,
        &mut constraint_drift,
        &mut h_drift,
        &mut omega_drift,
    )?;
    for pair in t_grid.windows(2) {
        let (t0, t1) = (pair[0], pair[1]);
        let traj: Trajectory<6> = match cfg.method {
            IntegratorMethod::AdaptiveRk => {
                match dopri5(
                    &deriv,
                    t0,
                    y,
                    t1,
                    cfg.abs_tol,
                    cfg.rel_tol,
                    cfg.max_step,
                    &guard,
                ) {
                    Ok(t) => t,
                    Err(StepError::StepSizeUnderflow(t)) | Err(StepError::DomainExit(t)) => {
                        return Err(OracleError::SingularityEncountered { t })
                    }
                }
            }
            IntegratorMethod::FixedRk4 => {
                let step = cfg.max_step.unwrap_or((t1 - t0).abs() / 100.0);
                rk4_fixed(&deriv, t0, y, t1, step)
            }
        };
        y = traj.eval(t1);
        if cfg.projection {
            // Pull the point back to the sphere and the velocity back to
            // the tangent plane.
            let norm = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
            let scale = r / norm;
            for yi in y.iter_mut().take(3) {
                *yi *= scale;
            }
            let radial = (y[0] * y[3] + y[1] * y[4] + y[2] * y[5]) / r2;
            y[3] -= radial * y[0];
            y[4] -= radial * y[1];
            y[5] -= radial * y[2];
        }
        record(
            &y,
            t1,
            &mut samples,
            &mut constraint_drift,
            &mut h_drift,
            &mut omega_drift,
        )?;
    }

    if h_drift.max(omega_drift) > 10.0 * cfg.drift_tol {
        return Err(OracleError::ToleranceFailure {
            residual: h_drift.max(omega_drift),
            allowed: cfg.drift_tol,
        });
    }

    Ok(CartesianTrajectory {
        samples,
        constraint_drift,
        h_drift,
        omega_drift,
    })
}

/// Build a full Cartesian state from glued-chart data (w, v, w′, v′)
/// and the x₂ branch. Velocities follow from the chain rule through the
/// chart map and the local-time relation dt = (U²−V²) dζ/√(σσ̄), scaled
/// to dimensional units.
pub fn state_from_separated(
    w: f64,
    v: f64,
    wd: f64,
    vd: f64,
    sign_y: Sign,
    p: &ProblemParams,
) -> Result<CartesianState, OracleError> {
    if w.abs() >= 1.0 || v.abs() >= 1.0 {
        return Err(OracleError::InvalidInitial(
            "state_from_separated needs |w| < 1 and |v| < 1 (the chart velocity degenerates on the boundary)".into(),
        ));
    }
    let (s, sb, r) = (p.sigma(), p.sigma_bar(), p.radius());
    let dw = (sb * sb + s * s * w * w).sqrt();
    let dv = (sb * sb * v * v + s * s).sqrt();
    let fw = (1.0 - w * w).sqrt();
    let fv = (1.0 - v * v).sqrt();
    let denom = dw * dv;
    let sy = sign_y.factor();

    let position = glued_cartesian(w, v, sign_y, p);

    // Unit-sphere partials.
    let dx_dw = -sb * v * s * s * w / (dw * dw * dw * dv);
    let dx_dv = sb * s * s / (dw * dv * dv * dv);
    let dz_dw = s * sb * sb / (dw * dw * dw * dv);
    let dz_dv = -s * w * sb * sb * v / (dw * dv * dv * dv);
    let dy_dw = -sy * s * sb * fv * w * (1.0 / fw + fw * s * s / (dw * dw)) / denom;
    let dy_dv = -sy * s * sb * fw * v * (1.0 / fv + fv * sb * sb / (dv * dv)) / denom;

    // dt/dζ = (U²−V²)/√(σσ̄), with U²−V² = σ̄²σ²(1−v²w²)/(D_w²D_v²).
    let gap = sb * sb * s * s * (1.0 - v * v * w * w) / (dw * dw * dv * dv);
    let dt_dzeta = gap / (s * sb).sqrt();
    let scale = r / (dt_dzeta * p.time_unit());

    let velocity = [
        scale * (dx_dw * wd + dx_dv * vd),
        scale * (dy_dw * wd + dy_dv * vd),
        scale * (dz_dw * wd + dz_dv * vd),
    ];
    Ok(CartesianState::new_unchecked(position, velocity))
}

/// Deviation report of `compare_to_analytic`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub zeta_span: (f64, f64),
    pub n_samples: usize,
    /// max |analytic − separated-route| over the grid (length units).
    pub max_deviation_separated: f64,
    pub mean_deviation_separated: f64,
    /// max |analytic − Cartesian-route| over the grid.
    pub max_deviation_cartesian: f64,
    /// max |separated-route − Cartesian-route| (the two oracles against
    /// each other).
    pub max_route_disagreement: f64,
    /// Spread of H and Ω reconstructed from finite-difference states
    /// along the analytic orbit.
    pub analytic_h_spread: f64,
    pub analytic_omega_spread: f64,
    /// Invariant drift along the Cartesian oracle.
    pub oracle_h_drift: f64,
    pub oracle_omega_drift: f64,
    pub constraint_drift: f64,
    pub max_first_integral_residual: f64,
    pub crossings_analytic: usize,
    pub crossings_oracle: usize,
    /// Grid points actually covered by the Cartesian route. Legs are
    /// trimmed where the orbit approaches a center (collision orbits are
    /// regular for the separated route but singular for Newton's
    /// equations, so the Cartesian comparison stops short of them).
    pub cartesian_grid_points: usize,
}

impl DeviationReport {
    /// True when every deviation is below `tol` (in units of R) and the
    /// crossing counts agree.
    pub fn passes(&self, tol: f64, r: f64) -> bool {
        self.max_deviation_separated < tol * r
            && self.max_deviation_cartesian < tol * r
            && self.max_route_disagreement < tol * r
            && self.crossings_analytic == self.crossings_oracle
    }
}

/// Run both oracle routes against the analytic engine over a ζ span.
///
/// The integrations are seeded from the analytic orbit at an interior
/// point of the span where the chart velocity formula is regular, then
/// run backward and forward to cover the whole window.
pub fn compare_to_analytic(
    spec: &OrbitSpec,
    p: &ProblemParams,
    zeta_span: (f64, f64),
    n: usize,
    cfg: &IntegratorConfig,
) -> Result<DeviationReport, OracleError> {
    cfg.validate()?;
    let inv = spec.invariants();
    let (z0, z1) = zeta_span;
    assert!(z1 > z0 && n >= 2);

    // Seed where |w|, |v| are safely interior and the point is well
    // clear of the centers (U²−V² = sinθ₁·sinθ₂ not small).
    let mut seed = z0;
    let mut found = false;
    for i in 0..400 {
        let zeta = z0 + (z1 - z0) * (0.002 + i as f64 / 400.0);
        let (pt, _, _, gap) = spec.position(zeta);
        let (w, v) = glued_coordinates(&pt, p);
        if w.abs() < 0.98 && v.abs() < 0.98 && gap > 0.02 {
            seed = zeta;
            found = true;
            break;
        }
    }
    if !found {
        return Err(OracleError::InvalidInitial(
            "no interior seed point found on the analytic orbit".into(),
        ));
    }

    // Glued coordinates and derivatives at the seed: magnitudes from the
    // first integrals, signs from a finite difference.
    let planar = inv.to_planar(p);
    let c = 1.0 - 2.0 * p.gamma();
    let (pt_seed, ..) = spec.position(seed);
    let (w0, v0) = glued_coordinates(&pt_seed, p);
    let delta = 1e-6;
    let (pt_d, ..) = spec.position(seed + delta);
    let (w_d, v_d) = glued_coordinates(&pt_d, p);
    let wd0 = (w_d - w0).signum() * radial_poly(planar.h, planar.g, w0).max(0.0).sqrt();
    let vd0 = (v_d - v0).signum() * angular_poly(planar.h, planar.g, c, v0).max(0.0).sqrt();
    let sign_y0 = if pt_seed.y.abs() > 1e-12 {
        Sign::of(pt_seed.y)
    } else {
        Sign::of(pt_d.y)
    };
    let y_seed = [w0, wd0, v0, vd0];

    // Output grids split at the seed.
    let grid: Vec<f64> = (0..n)
        .map(|i| z0 + (z1 - z0) * i as f64 / (n - 1) as f64)
        .collect();
    let n_back = grid.iter().filter(|&&z| z < seed).count().max(2);
    let n_fwd = (n - grid.iter().filter(|&&z| z < seed).count()).max(2);

    let back = integrate_separated_glued(&inv, p, y_seed, (seed, z0), n_back * 2, cfg)?;
    let fwd = integrate_separated_glued(&inv, p, y_seed, (seed, z1), n_fwd * 2, cfg)?;
    let max_residual = back
        .max_first_integral_residual
        .max(fwd.max_first_integral_residual);

    let lookup_sep = |zeta: f64| -> SpherePoint {
        if zeta < seed {
            back.point_at(zeta, sign_y0, p)
        } else {
            fwd.point_at(zeta, sign_y0, p)
        }
    };

    let mut max_dev_sep = 0.0_f64;
    let mut sum_dev = 0.0_f64;
    let mut count = 0usize;
    for &zeta in &grid {
        let (pa, ..) = spec.position(zeta);
        let d = pa.distance(&lookup_sep(zeta));
        max_dev_sep = max_dev_sep.max(d);
        sum_dev += d;
        count += 1;
    }
    let mean_dev = sum_dev / count.max(1) as f64;

    // Cartesian route, seeded from the same glued data. Each leg stops
    // at the first grid point that comes within sinθ₁·sinθ₂ < 0.01 of a
    // center: beyond a (near-)collision Newton's equations are not
    // integrable, while the separated route continues through.
    const COLLISION_GAP: f64 = 0.01;
    let state_seed = state_from_separated(w0, v0, wd0, vd0, sign_y0, p)?;
    let t_of = |zeta: f64| spec.physical_time(zeta) * p.time_unit();
    let t_seed = t_of(seed);
    let mut zetas_back = Vec::new();
    for &z in grid.iter().filter(|&&z| z < seed).rev() {
        if spec.position(z).3 < COLLISION_GAP {
            break;
        }
        zetas_back.push(z);
    }
    let mut zetas_fwd = Vec::new();
    for &z in grid.iter().filter(|&&z| z >= seed) {
        if spec.position(z).3 < COLLISION_GAP {
            break;
        }
        zetas_fwd.push(z);
    }
    let mut t_back: Vec<f64> = zetas_back.iter().map(|&z| t_of(z)).collect();
    t_back.insert(0, t_seed);
    let mut t_fwd: Vec<f64> = zetas_fwd.iter().map(|&z| t_of(z)).collect();
    t_fwd.insert(0, t_seed);
    let cart_back = integrate_cartesian_grid(&state_seed, p, &t_back, cfg)?;
    let cart_fwd = integrate_cartesian_grid(&state_seed, p, &t_fwd, cfg)?;

    let mut max_dev_cart = 0.0_f64;
    let mut max_route = 0.0_f64;
    let cartesian_grid_points = zetas_back.len() + zetas_fwd.len();
    for (zetas, cart) in [(&zetas_back, &cart_back), (&zetas_fwd, &cart_fwd)] {
        for (zeta, (_, state)) in zetas.iter().zip(cart.samples.iter().skip(1)) {
            let (pa, ..) = spec.position(*zeta);
            max_dev_cart = max_dev_cart.max(pa.distance(&state.position));
            max_route = max_route.max(lookup_sep(*zeta).distance(&state.position));
        }
    }

    // Analytic invariant spreads via finite-difference states.
    let h0 = inv.hamiltonian_value();
    let omega0 = inv.omega();
    let mut h_spread = 0.0_f64;
    let mut omega_spread = 0.0_f64;
    for &zeta in grid.iter().take(n - 1).skip(1) {
        let state = spec.fd_state(zeta);
        if let (Ok(hh), Ok(oo)) = (hamiltonian(&state, p), second_invariant(&state, p)) {
            h_spread = h_spread.max((hh - h0).abs());
            omega_spread = omega_spread.max((oo - omega0).abs());
        }
    }

    // Equator crossings: count Z sign changes of the analytic samples on
    // the dense grid, against the oracle's refined events.
    let n_scan = (n * 8).max(2000);
    let crossings_analytic = spec.equator_crossings(zeta_span, n_scan);
    let crossings_oracle = back.equator_crossing_count() + fwd.equator_crossing_count();

    Ok(DeviationReport {
        zeta_span,
        n_samples: count,
        max_deviation_separated: max_dev_sep,
        mean_deviation_separated: mean_dev,
        max_deviation_cartesian: max_dev_cart,
        max_route_disagreement: max_route,
        analytic_h_spread: h_spread,
        analytic_omega_spread: omega_spread,
        oracle_h_drift: cart_back.h_drift.max(cart_fwd.h_drift),
        oracle_omega_drift: cart_back.omega_drift.max(cart_fwd.omega_drift),
        constraint_drift: cart_back.constraint_drift.max(cart_fwd.constraint_drift),
        max_first_integral_residual: max_residual,
        crossings_analytic,
        crossings_oracle,
        cartesian_grid_points,
    })
}
