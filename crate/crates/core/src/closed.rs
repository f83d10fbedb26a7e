//! Closed-orbit search via period commensurability.
//!
//! An orbit closes exactly when the radial and angular periods are
//! commensurable, p·T_u = q·T_v with coprime positive integers p, q.
//! With p, q and one invariant fixed, the condition is a transcendental
//! equation in the free invariant, solved here by a bracketed
//! bisection/secant hybrid on the residual p·T_u − q·T_v.

use crate::bifurcation::{classify, Classification, OrbitClass};
use crate::geometry::{ProblemParams, Sign};
use crate::invariants::{InvariantPair, PlanarInvariants};
use crate::orbit::{build_spec_for_class, OrbitError, OrbitSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClosedOrbitError {
    #[error("p and q must be positive coprime integers, got ({0}, {1})")]
    InvalidRatio(u32, u32),
    #[error("bracket [{0}, {1}] is empty or reversed")]
    InvalidBracket(f64, f64),
    #[error("residual has no sign change inside the class region of the bracket ({valid} valid scan points)")]
    NoSignChange { valid: usize },
    #[error("invariants left the {expected} region at free value {at}")]
    ClassExit { expected: OrbitClass, at: f64 },
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Which invariant is held fixed during the search, in the planar chart
/// (the figure-caption convention): fixing h searches over g and vice
/// versa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FixedInvariant {
    /// Fix h = (σ̄/σ)Ω, solve for g = (σ/σ̄)G.
    PlanarH(f64),
    /// Fix g, solve for Ω's chart value h.
    PlanarG(f64),
}

/// A commensurability problem: find the free invariant making
/// p·T_u = q·T_v inside a given orbit class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommensurabilityProblem {
    pub p: u32,
    pub q: u32,
    pub fixed: FixedInvariant,
    /// Search bracket for the free invariant (chart value).
    pub bracket: (f64, f64),
    /// The orbit class the solution must belong to.
    pub class: OrbitClass,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl CommensurabilityProblem {
    pub fn new(
        p: u32,
        q: u32,
        fixed: FixedInvariant,
        bracket: (f64, f64),
        class: OrbitClass,
    ) -> Result<Self, ClosedOrbitError> {
        if p == 0 || q == 0 || gcd(p, q) != 1 {
            return Err(ClosedOrbitError::InvalidRatio(p, q));
        }
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN as well
        if !(bracket.0 < bracket.1) {
            return Err(ClosedOrbitError::InvalidBracket(bracket.0, bracket.1));
        }
        Ok(Self {
            p,
            q,
            fixed,
            bracket,
            class,
        })
    }

    fn invariants_at(&self, free: f64, params: &ProblemParams) -> InvariantPair {
        let planar = match self.fixed {
            FixedInvariant::PlanarH(h) => PlanarInvariants { h, g: free },
            FixedInvariant::PlanarG(g) => PlanarInvariants { h: free, g },
        };
        InvariantPair::from_planar(planar, params)
    }
}

/// Solution record: the free invariant value and a ready orbit spec
/// (zero phases, positive signs; rebuild with other phases as needed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommensurabilitySolution {
    pub p: u32,
    pub q: u32,
    pub free_value: f64,
    pub invariants: PlanarInvariants,
    pub t_u: f64,
    pub t_v: f64,
    pub residual: f64,
    pub spec: OrbitSpec,
}

impl CommensurabilitySolution {
    /// The least common period p·T_u = q·T_v after which the orbit
    /// closes.
    pub fn closing_period(&self) -> f64 {
        self.p as f64 * self.t_u
    }
}

fn spec_at(
    prob: &CommensurabilityProblem,
    free: f64,
    params: &ProblemParams,
) -> Result<OrbitSpec, ClosedOrbitError> {
    let inv = prob.invariants_at(free, params);
    let matches = match classify(&inv, params).map_err(OrbitError::from)? {
        Classification::Allowed { class, second_zone } => {
            class == prob.class || second_zone == Some(prob.class)
        }
        _ => false,
    };
    if !matches {
        return Err(ClosedOrbitError::ClassExit {
            expected: prob.class,
            at: free,
        });
    }
    build_spec_for_class(
        &inv,
        params,
        prob.class,
        (0.0, 0.0),
        (Sign::Plus, Sign::Plus, Sign::Plus),
    )
    .map_err(ClosedOrbitError::from)
}

/// Commensurability residual p·T_u − q·T_v at a trial free value.
pub fn residual(
    prob: &CommensurabilityProblem,
    free: f64,
    params: &ProblemParams,
) -> Result<f64, ClosedOrbitError> {
    let spec = spec_at(prob, free, params)?;
    let (t_u, t_v) = spec.periods();
    Ok(prob.p as f64 * t_u - prob.q as f64 * t_v)
}

/// Points scanned across the bracket before refinement.
const SCAN_POINTS: usize = 64;

/// Solve the commensurability equation inside the bracket.
///
/// The bracket is scanned at 64 points (dropping any that classify
/// outside the requested class), the first adjacent sign change is
/// refined by bisection with secant acceleration, and the converged spec
/// is returned. `tol` bounds |p·T_u − q·T_v| relative to max(T_u, T_v).
pub fn solve(
    prob: &CommensurabilityProblem,
    params: &ProblemParams,
    tol: f64,
) -> Result<CommensurabilitySolution, ClosedOrbitError> {
    let (lo, hi) = prob.bracket;
    let mut scanned: Vec<(f64, f64)> = Vec::with_capacity(SCAN_POINTS);
    for i in 0..SCAN_POINTS {
        let x = lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64;
        if let Ok(r) = residual(prob, x, params) {
            scanned.push((x, r));
        }
    }
    let pair = scanned
        .windows(2)
        .find(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0], w[1]));
    let ((mut a, mut fa), (mut b, mut fb)) = match pair {
        Some(p) => p,
        None => {
            return Err(ClosedOrbitError::NoSignChange {
                valid: scanned.len(),
            })
        }
    };

    let mut x_best = if fa.abs() < fb.abs() { a } else { b };
    for _ in 0..200 {
        // Secant proposal, falling back to bisection when it leaves the
        // bracket (or fails to classify).
        let secant = b - fb * (b - a) / (fb - fa);
        let mid = 0.5 * (a + b);
        let trial = if secant > a.min(b) && secant < a.max(b) {
            secant
        } else {
            mid
        };
        let f_trial = match residual(prob, trial, params) {
            Ok(r) => r,
            Err(_) => {
                // Secant left the class region; bisect instead.
                let r = residual(prob, mid, params)?;
                if r.signum() == fa.signum() {
                    a = mid;
                    fa = r;
                } else {
                    b = mid;
                    fb = r;
                }
                continue;
            }
        };
        let spec = spec_at(prob, trial, params)?;
        let (t_u, t_v) = spec.periods();
        x_best = trial;
        if f_trial.abs() < tol * t_u.max(t_v) || (b - a).abs() < 1e-14 * hi.abs().max(1.0) {
            return Ok(CommensurabilitySolution {
                p: prob.p,
                q: prob.q,
                free_value: trial,
                invariants: spec.invariants().to_planar(params),
                t_u,
                t_v,
                residual: f_trial,
                spec,
            });
        }
        if f_trial.signum() == fa.signum() {
            a = trial;
            fa = f_trial;
        } else {
            b = trial;
            fb = f_trial;
        }
    }
    // Max iterations: return the best point found if it meets tolerance,
    // otherwise report it as a failed bracket.
    let spec = spec_at(prob, x_best, params)?;
    let (t_u, t_v) = spec.periods();
    let r = prob.p as f64 * t_u - prob.q as f64 * t_v;
    if r.abs() < tol * t_u.max(t_v) {
        Ok(CommensurabilitySolution {
            p: prob.p,
            q: prob.q,
            free_value: x_best,
            invariants: spec.invariants().to_planar(params),
            t_u,
            t_v,
            residual: r,
            spec,
        })
    } else {
        Err(ClosedOrbitError::NoSignChange {
            valid: scanned.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifurcation::{Family, Regime, Subtype};
    use std::f64::consts::FRAC_PI_6;

    fn params() -> ProblemParams {
        ProblemParams::from_gamma(1.0, FRAC_PI_6, 1.0 / 3.0).unwrap()
    }

    fn class(family: Family, regime: Regime, subtype: Subtype) -> OrbitClass {
        OrbitClass {
            family,
            regime,
            subtype,
        }
    }

    #[test]
    fn ratio_validation() {
        let c = class(Family::Planetary, Regime::NegativeOmega, Subtype::Type1);
        assert!(matches!(
            CommensurabilityProblem::new(2, 4, FixedInvariant::PlanarH(-0.25), (0.5, 1.0), c),
            Err(ClosedOrbitError::InvalidRatio(2, 4))
        ));
        assert!(matches!(
            CommensurabilityProblem::new(0, 1, FixedInvariant::PlanarH(-0.25), (0.5, 1.0), c),
            Err(ClosedOrbitError::InvalidRatio(0, 1))
        ));
        assert!(matches!(
            CommensurabilityProblem::new(2, 3, FixedInvariant::PlanarH(-0.25), (1.0, 0.5), c),
            Err(ClosedOrbitError::InvalidBracket(..))
        ));
    }

    #[test]
    fn zero_regime_residual_reflects_angular_speed() {
        // At Ω = G = 0 the moduli coincide, so the whole residual comes
        // from the angular speed imbalance: T_u − T_v = T_u(1 − 1/√(1−2γ)).
        let p = params();
        let prob = CommensurabilityProblem::new(
            1,
            1,
            FixedInvariant::PlanarH(0.0),
            (-0.2, 0.2),
            class(Family::SatellitaryPrime, Regime::ZeroOmega, Subtype::None),
        )
        .unwrap();
        let r = residual(&prob, 0.0, &p).unwrap();
        let spec = spec_at(&prob, 0.0, &p).unwrap();
        let (tu, _) = spec.periods();
        let c = 1.0 - 2.0 * p.gamma();
        let expected = tu * (1.0 - 1.0 / c.sqrt());
        assert!((r - expected).abs() < 1e-12, "residual {r} vs {expected}");
    }

    #[test]
    fn class_exit_reported() {
        let p = params();
        let prob = CommensurabilityProblem::new(
            1,
            1,
            FixedInvariant::PlanarH(-0.25),
            (0.0, 2.0),
            class(Family::Planetary, Regime::NegativeOmega, Subtype::Type1),
        )
        .unwrap();
        // g = 0.2 at h = −0.25 is not planetary.
        assert!(matches!(
            residual(&prob, 0.2, &p),
            Err(ClosedOrbitError::ClassExit { .. })
        ));
    }

    #[test]
    fn solves_planetary_resonance_from_figure() {
        // 2T_u = 3T_v at h = −0.25 closes near g ≅ 0.80727.
        let p = params();
        let prob = CommensurabilityProblem::new(
            2,
            3,
            FixedInvariant::PlanarH(-0.25),
            (0.55, 1.0),
            class(Family::Planetary, Regime::NegativeOmega, Subtype::Type1),
        )
        .unwrap();
        let sol = solve(&prob, &p, 1e-10).unwrap();
        assert!(
            (sol.free_value - 0.80727).abs() < 2e-4,
            "g = {} vs 0.80727",
            sol.free_value
        );
        assert!((2.0 * sol.t_u - 3.0 * sol.t_v).abs() < 1e-9 * sol.t_u);
        // Residual changes sign across the planetary strip
        // g ∈ (1 − |h|, 1) at this h; outside it the class exits.
        let r_lo = residual(&prob, 0.78, &p).unwrap();
        let r_hi = residual(&prob, 0.97, &p).unwrap();
        assert!(r_lo.signum() != r_hi.signum());
        assert!(matches!(
            residual(&prob, 0.6, &p),
            Err(ClosedOrbitError::ClassExit { .. })
        ));
    }

    #[test]
    fn transposed_problem_recovers_the_fixed_invariant() {
        // Fix g at the dual-satellitary resonance value found by the
        // forward problem, solve for h: the pair must close on itself.
        let p = params();
        let c = class(
            Family::DualSatellitary,
            Regime::PositiveOmega,
            Subtype::None,
        );
        let forward =
            CommensurabilityProblem::new(1, 1, FixedInvariant::PlanarH(0.6), (0.1, 0.4), c)
                .unwrap();
        let g_star = solve(&forward, &p, 1e-12).unwrap().free_value;
        let transposed =
            CommensurabilityProblem::new(1, 1, FixedInvariant::PlanarG(g_star), (0.45, 0.8), c)
                .unwrap();
        let h_star = solve(&transposed, &p, 1e-12).unwrap().free_value;
        assert!((h_star - 0.6).abs() < 1e-8, "h = {h_star}");
    }

    #[test]
    fn solution_is_stable_under_bracket_perturbation() {
        let p = params();
        let c = class(
            Family::DualSatellitary,
            Regime::PositiveOmega,
            Subtype::None,
        );
        let base = CommensurabilityProblem::new(1, 1, FixedInvariant::PlanarH(0.6), (0.1, 0.4), c)
            .unwrap();
        let sol0 = solve(&base, &p, 1e-10).unwrap();
        let wider =
            CommensurabilityProblem::new(1, 1, FixedInvariant::PlanarH(0.6), (0.07, 0.44), c)
                .unwrap();
        let sol1 = solve(&wider, &p, 1e-10).unwrap();
        assert!((sol0.free_value - sol1.free_value).abs() < 1e-9);
    }

    #[test]
    fn closed_orbit_actually_closes() {
        let p = params();
        let prob = CommensurabilityProblem::new(
            1,
            1,
            FixedInvariant::PlanarH(0.6),
            (0.1, 0.4),
            class(
                Family::DualSatellitary,
                Regime::PositiveOmega,
                Subtype::None,
            ),
        )
        .unwrap();
        let sol = solve(&prob, &p, 1e-12).unwrap();
        let period = sol.closing_period();
        let samples = sol.spec.sample((0.0, period), 2).unwrap();
        let gap = samples[0].point.distance(&samples[1].point);
        assert!(gap < 1e-8 * p.radius(), "closure gap {gap:e}");
    }
}
