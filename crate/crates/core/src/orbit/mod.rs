//! Evaluation of the closed-form orbit solutions.
//!
//! An `OrbitSpec` bundles the invariants, branch points, elliptic moduli,
//! phases and sign choices that pin down one concrete orbit. Evaluation
//! at a local time ζ advances the phases
//!
//! ```text
//! s_u(ζ) = ± ν_u/g_u · ζ + s_u0,   s_v(ζ) = ± ν_v/g_v · ζ + s_v0
//! ν_u = ν_v = √(2 (σ̄/σ)|Ω|)          for Ω ≠ 0
//! ν_u = √2,  ν_v = √(2 (1−2γ))        for Ω = 0
//! ```
//!
//! and feeds them to the family's solution block. Orbits with Ω > 0
//! cross the equator; the blocks realize the glued radial solution, so Z
//! changes sign exactly where the sphero-conical U reaches 1 and |U(ζ)|
//! stays differentiable through the crossing.
//!
//! The Ω = 0 angular speed carries the strength imbalance 1−2γ: it is
//! the Ω → 0 limit of the generic normalization (the angular branch
//! point v₁ runs off to infinity like (1−2γ)/h, leaving √(2(1−2γ))
//! behind), and it is the only angular speed under which the separated
//! equations and the conserved quantities hold along the evaluated
//! orbits. A consequence worth noting: at Ω = G = 0 the moduli are
//! symmetric (k_u² = k_v² = 1/2, g_u = g_v = √2) but the periods are
//! not — T_v/T_u = 1/√(1−2γ), irrational for generic γ.
//!
//! Physical time is recovered from the local time by quadrature of
//! dt = (U² − V²) dζ / √(σσ̄), which is strictly positive. (Mapping the
//! planar first-order equations through the coordinate change onto the
//! spherical ones fixes the local-time ratio as dζ = √(σσ̄) dς; the
//! invariants are conserved along the evaluated orbits only with this
//! orientation of the factor.)

mod blocks;

pub use blocks::SolutionBlock;

use crate::bifurcation::{
    self, BifurcationError, BranchPoints, Classification, CurveId, Family, OrbitClass, Regime,
    RootPair, Subtype,
};
use crate::elliptic::{self, complete_k, jacobi_sn_cn_dn, EllipticParameter, DEGENERACY_GUARD};
use crate::geometry::{spheroconical_algebraic, ProblemParams, Sign, SpherePoint};
use crate::invariants::{CartesianState, InvariantPair};
use blocks::BlockContext;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OrbitError {
    #[error("invariants lie in a forbidden region: {0}")]
    ForbiddenRegion(String),
    #[error("invariants lie on a critical curve ({0}); the orbit formulas degenerate there")]
    CriticalCurve(String),
    #[error("elliptic modulus {which} = {value} outside [0, 1]; inconsistent branch data")]
    ModulusOutOfRange { which: &'static str, value: f64 },
    #[error("requested class {requested} does not match the classification ({found})")]
    ClassMismatch {
        requested: OrbitClass,
        found: String,
    },
    #[error("initial point outside the orbit's caustic range: {0}")]
    PointOutsideCaustic(String),
    #[error("sampling needs at least two points, got {0}")]
    InvalidSampleCount(usize),
    #[error(transparent)]
    Bifurcation(#[from] BifurcationError),
}

/// One trajectory point: local time, Cartesian position, sphero-conical
/// coordinates and the recovered nondimensional physical time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereSample {
    pub zeta: f64,
    pub point: SpherePoint,
    /// Sphero-conical U ∈ (σ̄, 1].
    pub u: f64,
    /// Sphero-conical V ∈ (−σ̄, σ̄).
    pub v: f64,
    /// Physical time elapsed since ζ = 0 (nondimensional units).
    pub t: f64,
}

/// A fully determined orbit, ready for evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    class: OrbitClass,
    inv: InvariantPair,
    params: ProblemParams,
    branch: BranchPoints,
    block: SolutionBlock,
    ctx: BlockContext,
    k_u2: EllipticParameter,
    k_v2: EllipticParameter,
    g_u: f64,
    g_v: f64,
    s_u0: f64,
    s_v0: f64,
    sign_u: Sign,
    sign_v: Sign,
    sign_y: Sign,
    nu_u: f64,
    nu_v: f64,
    t_u: f64,
    t_v: f64,
}

fn block_for_class(class: &OrbitClass) -> Option<SolutionBlock> {
    use SolutionBlock::*;
    let block = match (class.family, class.regime, class.subtype) {
        (Family::Planetary, Regime::PositiveOmega, Subtype::None) => PlanetaryPos,
        (Family::Lemniscatic, Regime::PositiveOmega, Subtype::None) => LemniscaticPos,
        (Family::SatellitaryPrime, Regime::PositiveOmega, Subtype::None) => SatellitaryPrimePos,
        (Family::DualSatellitary, Regime::PositiveOmega, Subtype::None) => DualSatellitaryPos,
        (Family::MeridianPlanetary, Regime::PositiveOmega, Subtype::None) => MeridianPlanetaryPos,
        (Family::Planetary, Regime::NegativeOmega, Subtype::Type1) => PlanetaryNeg1,
        (Family::Planetary, Regime::NegativeOmega, Subtype::Type2) => PlanetaryNeg2,
        (Family::Lemniscatic, Regime::NegativeOmega, Subtype::Type1) => LemniscaticNeg1,
        (Family::Lemniscatic, Regime::NegativeOmega, Subtype::Type2) => LemniscaticNeg2,
        (Family::Satellitary, Regime::NegativeOmega, Subtype::Zone1) => SatellitaryNeg1,
        (Family::Satellitary, Regime::NegativeOmega, Subtype::Zone2) => SatellitaryNeg2,
        (Family::SatellitaryPrime, Regime::NegativeOmega, Subtype::None) => SatellitaryPrimeNeg,
        (Family::Planetary, Regime::ZeroOmega, Subtype::None) => PlanetaryZero,
        (Family::Lemniscatic, Regime::ZeroOmega, Subtype::None) => LemniscaticZero,
        (Family::SatellitaryPrime, Regime::ZeroOmega, Subtype::None) => SatellitaryPrimeZero,
        _ => return None,
    };
    Some(block)
}

fn block_context(block: SolutionBlock, branch: &BranchPoints) -> BlockContext {
    let (u1, u2) = match branch.radial {
        RootPair::Real { lo, hi } => (lo, hi),
        RootPair::Complex { re, im } => (re, im), // never reached by classified blocks
    };
    let (v1, v2, va, vb) = match branch.angular {
        RootPair::Real { lo, hi } => (lo, hi, f64::NAN, f64::NAN),
        RootPair::Complex { re, im } => (
            f64::NAN,
            f64::NAN,
            (1.0 + re).hypot(im),
            (1.0 - re).hypot(im),
        ),
    };
    let mut ctx = BlockContext {
        u1,
        u2,
        v1,
        v2,
        abs_one_plus_v1: va,
        abs_one_minus_v1: vb,
        k_u: 0.0,
        k_v: 0.0,
    };
    let (ku2, _, kv2, _) = blocks::moduli(block, &ctx);
    ctx.k_u = ku2.max(0.0).sqrt();
    ctx.k_v = kv2.max(0.0).sqrt();
    ctx
}

/// Build an orbit spec from invariants, classifying internally. In the
/// satellitary region the zone-1 orbit (around the stronger center) is
/// selected; `build_spec_for_class` picks a zone explicitly.
pub fn build_spec(
    inv: &InvariantPair,
    p: &ProblemParams,
    phases: (f64, f64),
    signs: (Sign, Sign, Sign),
) -> Result<OrbitSpec, OrbitError> {
    let class = match bifurcation::classify(inv, p)? {
        Classification::Allowed { class, .. } => class,
        Classification::Critical { curves } => {
            let names: Vec<&str> = curves.iter().map(CurveId::label).collect();
            return Err(OrbitError::CriticalCurve(names.join(", ")));
        }
        Classification::Forbidden { diagnostic, .. } => {
            return Err(OrbitError::ForbiddenRegion(diagnostic))
        }
    };
    assemble(inv, p, class, phases, signs)
}

/// Build an orbit spec for an explicitly chosen class (needed to select
/// the second satellitary zone, or to pin a subtype in tests). The class
/// must match what classification yields at these invariants.
pub fn build_spec_for_class(
    inv: &InvariantPair,
    p: &ProblemParams,
    class: OrbitClass,
    phases: (f64, f64),
    signs: (Sign, Sign, Sign),
) -> Result<OrbitSpec, OrbitError> {
    match bifurcation::classify(inv, p)? {
        Classification::Allowed {
            class: found,
            second_zone,
        } => {
            if found != class && second_zone != Some(class) {
                return Err(OrbitError::ClassMismatch {
                    requested: class,
                    found: format!("{found}"),
                });
            }
        }
        Classification::Critical { curves } => {
            let names: Vec<&str> = curves.iter().map(CurveId::label).collect();
            return Err(OrbitError::CriticalCurve(names.join(", ")));
        }
        Classification::Forbidden { diagnostic, .. } => {
            return Err(OrbitError::ForbiddenRegion(diagnostic))
        }
    }
    assemble(inv, p, class, phases, signs)
}

fn assemble(
    inv: &InvariantPair,
    p: &ProblemParams,
    class: OrbitClass,
    phases: (f64, f64),
    signs: (Sign, Sign, Sign),
) -> Result<OrbitSpec, OrbitError> {
    let branch = bifurcation::branch_points(inv, p);
    let block = block_for_class(&class).ok_or_else(|| OrbitError::ClassMismatch {
        requested: class,
        found: "no solution block for this class".to_string(),
    })?;
    let ctx = block_context(block, &branch);
    let (ku2_raw, g_u, kv2_raw, g_v) = blocks::moduli(block, &ctx);

    let validate = |which: &'static str, value: f64| -> Result<EllipticParameter, OrbitError> {
        if !(-1e-12..=1.0 + 1e-12).contains(&value) || value.is_nan() {
            return Err(OrbitError::ModulusOutOfRange { which, value });
        }
        let clamped = value.clamp(0.0, 1.0);
        if 1.0 - clamped < DEGENERACY_GUARD {
            return Err(OrbitError::CriticalCurve(format!(
                "{which} = {value} is degenerate"
            )));
        }
        Ok(EllipticParameter::new(clamped).expect("clamped into range"))
    };
    let k_u2 = validate("k_u^2", ku2_raw)?;
    let k_v2 = validate("k_v^2", kv2_raw)?;

    let planar = inv.to_planar(p);
    let (nu_u, nu_v) = if class.regime == Regime::ZeroOmega {
        let c = 1.0 - 2.0 * p.gamma();
        (std::f64::consts::SQRT_2, (2.0 * c).sqrt())
    } else {
        let nu = (2.0 * planar.h.abs()).sqrt();
        (nu, nu)
    };
    let (mu, mv) = blocks::period_multipliers(block);
    let t_u = g_u * mu * complete_k(k_u2).expect("validated non-degenerate") / nu_u;
    let t_v = g_v * mv * complete_k(k_v2).expect("validated non-degenerate") / nu_v;

    Ok(OrbitSpec {
        class,
        inv: *inv,
        params: *p,
        branch,
        block,
        ctx,
        k_u2,
        k_v2,
        g_u,
        g_v,
        s_u0: phases.0,
        s_v0: phases.1,
        sign_u: signs.0,
        sign_v: signs.1,
        sign_y: signs.2,
        nu_u,
        nu_v,
        t_u,
        t_v,
    })
}

impl OrbitSpec {
    pub fn class(&self) -> OrbitClass {
        self.class
    }

    pub fn invariants(&self) -> InvariantPair {
        self.inv
    }

    pub fn params(&self) -> ProblemParams {
        self.params
    }

    pub fn branch_points(&self) -> BranchPoints {
        self.branch
    }

    pub fn block(&self) -> SolutionBlock {
        self.block
    }

    pub fn phases(&self) -> (f64, f64) {
        (self.s_u0, self.s_v0)
    }

    pub fn elliptic_parameters(&self) -> (EllipticParameter, EllipticParameter) {
        (self.k_u2, self.k_v2)
    }

    pub fn scale_factors(&self) -> (f64, f64) {
        (self.g_u, self.g_v)
    }

    /// The radial and angular periods (T_u, T_v) in local time.
    pub fn periods(&self) -> (f64, f64) {
        (self.t_u, self.t_v)
    }

    /// Phase arguments (s_u, s_v) at a local time.
    pub fn phase_at(&self, zeta: f64) -> (f64, f64) {
        (
            self.sign_u.factor() * self.nu_u / self.g_u * zeta + self.s_u0,
            self.sign_v.factor() * self.nu_v / self.g_v * zeta + self.s_v0,
        )
    }

    /// Cartesian position plus the sphero-conical pair (U, V) and the
    /// local-time factor U² − V², without the physical-time quadrature.
    pub fn position(&self, zeta: f64) -> (SpherePoint, f64, f64, f64) {
        let (su, sv) = self.phase_at(zeta);
        let ju = jacobi_sn_cn_dn(su, self.k_u2);
        let jv = jacobi_sn_cn_dn(sv, self.k_v2);
        let [x, y, z] = blocks::xyz(
            self.block,
            &self.ctx,
            ju,
            jv,
            self.params.sigma(),
            self.params.sigma_bar(),
            self.params.radius(),
        );
        let point = SpherePoint {
            x,
            y: self.sign_y.factor() * y,
            z,
        };
        let (u_big, v_big, gap) = spheroconical_algebraic(&point, &self.params);
        (point, u_big, v_big, gap)
    }

    /// Evaluate one trajectory sample, including the physical time.
    pub fn evaluate(&self, zeta: f64) -> SphereSample {
        let (point, u, v, _) = self.position(zeta);
        SphereSample {
            zeta,
            point,
            u,
            v,
            t: self.physical_time(zeta),
        }
    }

    /// Physical time elapsed between local times 0 and ζ:
    /// t(ζ) = ∫₀^ζ (U² − V²)/√(σσ̄) dζ′, by adaptive Simpson quadrature.
    pub fn physical_time(&self, zeta: f64) -> f64 {
        self.time_between(0.0, zeta, 3e-11)
    }

    fn time_between(&self, a: f64, b: f64, tol: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let scale = (self.params.sigma() * self.params.sigma_bar())
            .sqrt()
            .recip();
        adaptive_simpson(&|z| self.position(z).3, a, b, tol) * scale
    }

    /// Uniform sampling of the trajectory over a ζ window, with the
    /// physical time accumulated segment by segment.
    pub fn sample(&self, window: (f64, f64), n: usize) -> Result<Vec<SphereSample>, OrbitError> {
        if n < 2 {
            return Err(OrbitError::InvalidSampleCount(n));
        }
        let step = (window.1 - window.0) / (n - 1) as f64;
        let mut out = Vec::with_capacity(n);
        let mut t = self.physical_time(window.0);
        let mut prev = window.0;
        for i in 0..n {
            let zeta = window.0 + step * i as f64;
            if i > 0 {
                t += self.time_between(prev, zeta, 1e-12);
            }
            let (point, u, v, _) = self.position(zeta);
            out.push(SphereSample {
                zeta,
                point,
                u,
                v,
                t,
            });
            prev = zeta;
        }
        Ok(out)
    }

    /// Full Cartesian state at ζ with the velocity reconstructed from
    /// position samples: a fourth-order centered stencil for dX/dζ
    /// (the evaluator carries ~1e-12 of Jacobi noise, so the step is
    /// sized against that floor rather than machine epsilon), divided
    /// by the exact local-time rate dt/dζ = (U²−V²)/√(σσ̄).
    pub fn fd_state(&self, zeta: f64) -> CartesianState {
        let dz = 1e-3 * self.t_u.min(self.t_v);
        let at = |k: f64| self.position(zeta + k * dz).0.to_array();
        let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
        let (position, _, _, gap) = self.position(zeta);
        let dt_dzeta =
            gap / (self.params.sigma() * self.params.sigma_bar()).sqrt() * self.params.time_unit();
        let mut velocity = [0.0; 3];
        for i in 0..3 {
            let dpos = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * dz);
            velocity[i] = dpos / dt_dzeta;
        }
        CartesianState::new_unchecked(position, velocity)
    }

    /// Allowed window of the glued radial coordinate w = 1/u (signed by
    /// hemisphere) and of the angular coordinate v, per the family's
    /// branch-point ordering chain. Samples must stay inside these
    /// intervals; the edges are caustics or the coordinate boundary.
    pub fn caustic_window(&self) -> ((f64, f64), (f64, f64)) {
        use SolutionBlock::*;
        let c = &self.ctx;
        let w_window = match self.block {
            PlanetaryPos => (1.0 / c.u1, 1.0 / c.u2),
            LemniscaticPos | SatellitaryPrimePos | DualSatellitaryPos => (1.0 / c.u1, 1.0),
            MeridianPlanetaryPos => (-1.0, 1.0),
            PlanetaryNeg1 | PlanetaryNeg2 => (1.0 / c.u2, 1.0 / c.u1),
            LemniscaticNeg1 | LemniscaticNeg2 | SatellitaryNeg1 | SatellitaryNeg2
            | SatellitaryPrimeNeg => (1.0 / c.u2, 1.0),
            PlanetaryZero => (0.0, 1.0 / c.u1),
            LemniscaticZero | SatellitaryPrimeZero => (0.0, 1.0),
        };
        let v_window = match self.block {
            PlanetaryPos | LemniscaticPos | PlanetaryNeg1 | PlanetaryNeg2 | LemniscaticNeg1
            | LemniscaticNeg2 | PlanetaryZero | LemniscaticZero => (-1.0, 1.0),
            SatellitaryPrimePos => (c.v1, 1.0),
            DualSatellitaryPos | MeridianPlanetaryPos => (c.v1, c.v2),
            SatellitaryNeg1 => (c.v2, 1.0),
            SatellitaryNeg2 => (-1.0, c.v1),
            SatellitaryPrimeNeg | SatellitaryPrimeZero => (c.v2, 1.0),
        };
        (w_window, v_window)
    }

    /// Count equator crossings (sign changes of Z) over a window,
    /// scanning `n_scan` intervals.
    pub fn equator_crossings(&self, window: (f64, f64), n_scan: usize) -> usize {
        let step = (window.1 - window.0) / n_scan as f64;
        let mut count = 0;
        let mut prev = self.position(window.0).0.z;
        for i in 1..=n_scan {
            let z = self.position(window.0 + step * i as f64).0.z;
            if prev != 0.0 && z != 0.0 && prev.signum() != z.signum() {
                count += 1;
            }
            if z != 0.0 {
                prev = z;
            }
        }
        count
    }

    /// Glued radial coordinate of the closed-form radial solution, in
    /// the explicit dn²-quotient form the planetary blocks admit. Used
    /// as a cross-check of the recovered coordinates.
    pub fn printed_radial_solution(&self, zeta: f64) -> Option<f64> {
        use SolutionBlock::*;
        let (su, _) = self.phase_at(zeta);
        let d = {
            let j = jacobi_sn_cn_dn(su, self.k_u2);
            j.dn * j.dn
        };
        match self.block {
            PlanetaryPos => {
                let u2 = self.ctx.u2;
                Some((u2 - 1.0 + (u2 + 1.0) * d) / (1.0 - u2 + (u2 + 1.0) * d))
            }
            PlanetaryNeg1 | PlanetaryNeg2 => {
                let u1 = self.ctx.u1;
                Some((u1 - 1.0 + (u1 + 1.0) * d) / (1.0 - u1 + (u1 + 1.0) * d))
            }
            _ => None,
        }
    }
}

/// Build a spec whose phases are chosen so the orbit passes through the
/// given sphero-conical point (U₀, V₀) at ζ = 0 (principal branch: the
/// phases are taken in [0, K]; other branches follow by the reflection
/// and periodicity of the Jacobi functions).
///
/// The radial phase solves U(s_u0) = U₀ by bisection of the monotone arc
/// between the two radial turning points, and likewise for V; for the
/// planetary families the same phases are available in closed form from
/// the inverse Jacobi amplitude, and the two routes are tested against
/// each other.
pub fn build_spec_from_point(
    inv: &InvariantPair,
    p: &ProblemParams,
    point: (f64, f64),
    signs: (Sign, Sign, Sign),
) -> Result<OrbitSpec, OrbitError> {
    let base = build_spec(inv, p, (0.0, 0.0), signs)?;
    let (u0, v0) = point;

    let k_u = complete_k(base.k_u2).expect("validated");
    let target_u = |s: f64| {
        let mut spec = base.clone();
        spec.s_u0 = s;
        spec.position(0.0).1
    };
    let s_u0 = invert_monotone(&target_u, 0.0, k_u, u0).ok_or_else(|| {
        OrbitError::PointOutsideCaustic(format!("U0 = {u0} not reached by the radial arc"))
    })?;

    // The cn-driven angular blocks sweep their full arc over [0, 2K];
    // everything else (sn²/dn²-driven) is monotone over [0, K].
    let v_arc = match base.block {
        SolutionBlock::PlanetaryNeg1 | SolutionBlock::LemniscaticNeg1 => 2.0,
        _ => 1.0,
    };
    let k_v = v_arc * complete_k(base.k_v2).expect("validated");
    let target_v = |s: f64| {
        let mut spec = base.clone();
        spec.s_u0 = s_u0;
        spec.s_v0 = s;
        spec.position(0.0).2
    };
    let s_v0 = invert_monotone(&target_v, 0.0, k_v, v0).ok_or_else(|| {
        OrbitError::PointOutsideCaustic(format!("V0 = {v0} not reached by the angular arc"))
    })?;

    let mut spec = base;
    spec.s_u0 = s_u0;
    spec.s_v0 = s_v0;
    Ok(spec)
}

/// Closed-form phase for the planetary radial coordinate: invert the
/// printed dn²-form through the incomplete integral of the first kind.
/// `u` is the glued radial coordinate on the principal arc.
pub fn planetary_radial_phase(spec: &OrbitSpec, u: f64) -> Result<f64, OrbitError> {
    use SolutionBlock::*;
    let d = match spec.block {
        PlanetaryPos => {
            let u2 = spec.ctx.u2;
            (u2 - 1.0) * (u + 1.0) / ((u2 + 1.0) * (u - 1.0))
        }
        PlanetaryNeg1 | PlanetaryNeg2 => {
            let u1 = spec.ctx.u1;
            (u1 - 1.0) * (u + 1.0) / ((u1 + 1.0) * (u - 1.0))
        }
        _ => {
            return Err(OrbitError::PointOutsideCaustic(
                "closed-form radial phase is only printed for the planetary blocks".to_string(),
            ))
        }
    };
    let m = spec.k_u2.value();
    let sn2 = (1.0 - d) / m;
    if !(-1e-12..=1.0 + 1e-12).contains(&sn2) {
        return Err(OrbitError::PointOutsideCaustic(format!(
            "u = {u} outside the radial arc"
        )));
    }
    let phi = sn2.clamp(0.0, 1.0).sqrt().asin();
    elliptic::incomplete_f(phi, spec.k_u2)
        .map_err(|_| OrbitError::CriticalCurve("degenerate modulus".into()))
}

fn invert_monotone(f: &dyn Fn(f64) -> f64, a: f64, b: f64, target: f64) -> Option<f64> {
    let fa = f(a);
    let fb = f(b);
    let (lo, hi, flo) = if fa <= fb { (a, b, fa) } else { (b, a, fb) };
    let fhi = if fa <= fb { fb } else { fa };
    let slack = 1e-9 * (fhi - flo).abs().max(1.0);
    if target < flo - slack || target > fhi + slack {
        return None;
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() < 1e-15 * (a - b).abs().max(1.0) {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Adaptive Simpson quadrature for smooth integrands carrying ~1e-12 of
/// evaluation noise (the Jacobi kernel's accuracy): refinement stops at
/// a minimum interval width, because below it the error estimate
/// measures noise, not truncation.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        h_min: f64,
    ) -> f64 {
        let mid = 0.5 * (a + b);
        let flm = f(0.5 * (a + mid));
        let frm = f(0.5 * (mid + b));
        let left = simpson(a, mid, fa, flm, fm);
        let right = simpson(mid, b, fm, frm, fb);
        let delta = left + right - whole;
        if delta.abs() < 15.0 * tol || (b - a).abs() < h_min {
            left + right + delta / 15.0
        } else {
            recurse(f, a, mid, fa, flm, fm, left, 0.5 * tol, h_min)
                + recurse(f, mid, b, fm, frm, fb, right, 0.5 * tol, h_min)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    let h_min = 1e-6 * (b - a).abs().max(1e-3);
    recurse(f, a, b, fa, fm, fb, whole, tol, h_min)
}
