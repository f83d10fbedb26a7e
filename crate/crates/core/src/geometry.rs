//! Coordinate systems and maps for the spherical two-center problem.
//!
//! The two attracting centers F₁, F₂ sit on the sphere of radius R at
//! angular distance θ_f on either side of the north pole:
//!
//! ```text
//! F₁ = ( R sin θ_f, 0, R cos θ_f) = ( R σ̄, 0, R σ)
//! F₂ = (-R sin θ_f, 0, R cos θ_f) = (-R σ̄, 0, R σ)
//! ```
//!
//! Four charts are wired together here:
//! - Cartesian (X, Y, Z) on the sphere,
//! - sphero-conical (U, V) with U = sin((θ₁+θ₂)/2), V = sin((θ₂−θ₁)/2),
//!   where θᵢ is the great-circle angle to Fᵢ,
//! - the gnomonic images on the tangent planes Π± at the poles, after
//!   the shear x₁ = x, x₂ = y/σ that makes the projected dynamics
//!   Newtonian,
//! - planar elliptic (u, v), linked to (U, V) by the one-to-one map
//!   U = σ̄u/√(σ̄²u²+σ²), V = σ̄v/√(σ̄²v²+σ²).
//!
//! Orbits crossing the equator are handled in the glued radial chart
//! w = 1/u, in which the equator is the regular interior point w = 0 and
//! the hemisphere is recovered as sign(w). `glued_cartesian` is the
//! compact Cartesian form of the trajectory in that chart.

use serde::{Deserialize, Serialize};

/// Relative threshold below which |Z| counts as "on the equator" for the
/// gnomonic projection (the projected coordinates grow like 1/Z).
const EQUATOR_EPS: f64 = 1e-10;

/// Slack allowed on coordinate-range checks before they are rejected.
const RANGE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid problem parameters: {0}")]
    InvalidParams(String),
    #[error("coordinate out of range: {0}")]
    RangeError(String),
    #[error("singular point (coincides with a center or anti-center)")]
    SingularPoint,
    #[error("point on the equator has no finite image in this chart")]
    EquatorPoint,
    #[error("point lies in the {found:?} hemisphere, expected {expected:?}")]
    HemisphereMismatch {
        expected: Hemisphere,
        found: Hemisphere,
    },
}

/// A binary sign carried alongside coordinates whose defining relations
/// only fix a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Sign of a float, with 0 mapping to Plus.
    pub fn of(x: f64) -> Self {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hemisphere {
    North,
    South,
}

/// Physical and geometric constants of one problem instance.
///
/// Invariants enforced at construction: 0 < θ_f < π/2 and
/// 0 < γ₂ ≤ γ₁, so the relative strength γ = γ₂/(γ₁+γ₂) lies in
/// (0, 1/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    r: f64,
    theta_f: f64,
    gamma1: f64,
    gamma2: f64,
    sigma: f64,
    sigma_bar: f64,
    gamma: f64,
    a: f64,
}

impl ProblemParams {
    pub fn new(r: f64, theta_f: f64, gamma1: f64, gamma2: f64) -> Result<Self, GeometryError> {
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN as well
        if !(r > 0.0) {
            return Err(GeometryError::InvalidParams(format!(
                "radius must be positive, got {r}"
            )));
        }
        if !(theta_f > 0.0 && theta_f < std::f64::consts::FRAC_PI_2) {
            return Err(GeometryError::InvalidParams(format!(
                "half-separation angle must lie in (0, pi/2), got {theta_f}"
            )));
        }
        if !(gamma2 > 0.0 && gamma2 <= gamma1) {
            return Err(GeometryError::InvalidParams(format!(
                "strengths must satisfy 0 < gamma2 <= gamma1, got gamma1={gamma1}, gamma2={gamma2}"
            )));
        }
        let sigma = theta_f.cos();
        let sigma_bar = theta_f.sin();
        Ok(Self {
            r,
            theta_f,
            gamma1,
            gamma2,
            sigma,
            sigma_bar,
            gamma: gamma2 / (gamma1 + gamma2),
            a: r * sigma_bar / sigma,
        })
    }

    /// Build from the relative strength γ = γ₂/(γ₁+γ₂) alone, fixing the
    /// total strength γ₁+γ₂ = 1 (the natural choice once everything is
    /// nondimensionalized).
    pub fn from_gamma(r: f64, theta_f: f64, gamma: f64) -> Result<Self, GeometryError> {
        if !(gamma > 0.0 && gamma <= 0.5) {
            return Err(GeometryError::InvalidParams(format!(
                "relative strength must lie in (0, 1/2], got {gamma}"
            )));
        }
        Self::new(r, theta_f, 1.0 - gamma, gamma)
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn theta_f(&self) -> f64 {
        self.theta_f
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    /// σ = cos θ_f.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// σ̄ = sin θ_f.
    pub fn sigma_bar(&self) -> f64 {
        self.sigma_bar
    }

    /// γ = γ₂/(γ₁+γ₂) ∈ (0, 1/2].
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Gnomonic image half-separation a = R σ̄/σ; the centers project to
    /// (±a, 0) on Π₊.
    pub fn planar_half_separation(&self) -> f64 {
        self.a
    }

    /// Total strength γ₁ + γ₂.
    pub fn strength(&self) -> f64 {
        self.gamma1 + self.gamma2
    }

    /// Time unit √(R³/(γ₁+γ₂)) relating nondimensional time to seconds.
    pub fn time_unit(&self) -> f64 {
        (self.r.powi(3) / self.strength()).sqrt()
    }

    /// Position of the first (stronger) center.
    pub fn center1(&self) -> SpherePoint {
        SpherePoint {
            x: self.r * self.sigma_bar,
            y: 0.0,
            z: self.r * self.sigma,
        }
    }

    /// Position of the second (weaker) center.
    pub fn center2(&self) -> SpherePoint {
        SpherePoint {
            x: -self.r * self.sigma_bar,
            y: 0.0,
            z: self.r * self.sigma,
        }
    }
}

/// A point on the sphere, in ambient Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpherePoint {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            x: a[0],
            y: a[1],
            z: a[2],
        }
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2))
            .sqrt()
    }

    /// Residual of the sphere constraint, |X|² − R².
    pub fn sphere_residual(&self, p: &ProblemParams) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z - p.r * p.r
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Sphero-conical coordinates with the two sign flags resolving the
/// four-to-one ambiguity of the defining relations (Y and Z are only
/// fixed up to sign).
///
/// Ranges: σ̄ ≤ u ≤ 1 and |v| ≤ σ̄, where `u`, `v` here are the
/// dimensionless U, V of the chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpheroConical {
    pub u: f64,
    pub v: f64,
    pub sign_y: Sign,
    pub sign_z: Sign,
}

/// Planar elliptic (Euler) coordinates of the projected problem.
///
/// `u` is the glued radial coordinate: |u| ≥ 1, with sign(u) recording
/// the hemisphere of the spherical preimage (negative u is the Southern
/// sheet). `v` is the angular coordinate in (−1, 1); `sign_x2` fixes the
/// branch of x₂ = ±√(u²−1)√(1−v²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarElliptic {
    pub u: f64,
    pub v: f64,
    pub sign_x2: Sign,
}

/// Reconstruct the Cartesian point from sphero-conical coordinates:
///
/// ```text
/// X = (R/σ̄) U V
/// Y² = R²/(σ²σ̄²) (U²−σ̄²)(σ̄²−V²)
/// Z² = (R²/σ²) (1−U²)(1−V²)
/// ```
///
/// with the signs of Y and Z taken from the flags.
pub fn spheroconical_to_cartesian(
    sc: &SpheroConical,
    p: &ProblemParams,
) -> Result<SpherePoint, GeometryError> {
    let (sb, s, r) = (p.sigma_bar, p.sigma, p.r);
    if sc.u < sb - RANGE_EPS || sc.u > 1.0 + RANGE_EPS {
        return Err(GeometryError::RangeError(format!(
            "U = {} outside [{sb}, 1]",
            sc.u
        )));
    }
    if sc.v.abs() > sb + RANGE_EPS {
        return Err(GeometryError::RangeError(format!(
            "V = {} outside [-{sb}, {sb}]",
            sc.v
        )));
    }
    let u2 = sc.u * sc.u;
    let v2 = sc.v * sc.v;
    let x = r / sb * sc.u * sc.v;
    let y = sc.sign_y.factor() * r / (s * sb)
        * ((u2 - sb * sb).max(0.0) * (sb * sb - v2).max(0.0)).sqrt();
    let z = sc.sign_z.factor() * r / s * ((1.0 - u2).max(0.0) * (1.0 - v2)).sqrt();
    Ok(SpherePoint { x, y, z })
}

/// Sphero-conical coordinates of a Cartesian point, through the
/// great-circle angles θ₁, θ₂ to the centers.
///
/// The angles use the two-argument arctangent of |X × Fᵢ| against
/// X · Fᵢ, which stays well conditioned near 0 and π where arccos does
/// not. Points at a center or anti-center are singular for the chart.
pub fn cartesian_to_spheroconical(
    pt: &SpherePoint,
    p: &ProblemParams,
) -> Result<SpheroConical, GeometryError> {
    let xa = pt.to_array();
    let f1 = p.center1().to_array();
    let f2 = p.center2().to_array();
    let r2 = p.r * p.r;
    let theta1 = norm3(cross(xa, f1)).atan2(dot(xa, f1));
    let theta2 = norm3(cross(xa, f2)).atan2(dot(xa, f2));
    // sin θᵢ = |X × Fᵢ|/R²; vanishing means a center or anti-center.
    let sin1 = norm3(cross(xa, f1)) / r2;
    let sin2 = norm3(cross(xa, f2)) / r2;
    if sin1 < 1e-12 || sin2 < 1e-12 {
        return Err(GeometryError::SingularPoint);
    }
    Ok(SpheroConical {
        u: (0.5 * (theta1 + theta2)).sin(),
        v: (0.5 * (theta2 - theta1)).sin(),
        sign_y: Sign::of(pt.y),
        sign_z: Sign::of(pt.z),
    })
}

/// Algebraic recovery of (U, V) from a Cartesian point, avoiding the
/// angle chart entirely. U² and V² are the two roots of
/// λ² − Sλ + P with P = (σ̄X/R)² and S = 1 + P − σ²Z²/R²; the sign of V
/// follows from X = (R/σ̄)UV with U > 0.
///
/// Total on the sphere (centers included), so orbit evaluation can use
/// it unconditionally. Also returns U² − V² = √(S² − 4P), the factor in
/// the local-time integrand.
pub fn spheroconical_algebraic(pt: &SpherePoint, p: &ProblemParams) -> (f64, f64, f64) {
    let r = p.r;
    let prod = (p.sigma_bar * pt.x / r).powi(2);
    let sum = 1.0 + prod - (p.sigma * pt.z / r).powi(2);
    let gap = (sum * sum - 4.0 * prod).max(0.0).sqrt();
    let u = (0.5 * (sum + gap)).max(0.0).sqrt();
    let v = if u > 0.0 {
        p.sigma_bar * pt.x / (r * u)
    } else {
        0.0
    };
    (u, v, gap)
}

/// Map sphero-conical coordinates to the planar elliptic chart
/// (the inverse of `elliptic_drop`): u = σU/(σ̄√(1−U²)), signed with the
/// hemisphere, and likewise for v.
pub fn elliptic_lift(
    sc: &SpheroConical,
    p: &ProblemParams,
) -> Result<PlanarElliptic, GeometryError> {
    let (s, sb) = (p.sigma, p.sigma_bar);
    let one_minus_u2 = 1.0 - sc.u * sc.u;
    if one_minus_u2 <= 0.0 {
        return Err(GeometryError::EquatorPoint);
    }
    let u_mag = s * sc.u / (sb * one_minus_u2.sqrt());
    let v = s * sc.v / (sb * (1.0 - sc.v * sc.v).sqrt());
    Ok(PlanarElliptic {
        u: sc.sign_z.factor() * u_mag,
        v,
        sign_x2: sc.sign_y,
    })
}

/// Map planar elliptic coordinates back to sphero-conical:
/// U = σ̄|u|/√(σ̄²u²+σ²), V = σ̄v/√(σ̄²v²+σ²), hemisphere from sign(u).
pub fn elliptic_drop(
    pe: &PlanarElliptic,
    p: &ProblemParams,
) -> Result<SpheroConical, GeometryError> {
    if pe.u.abs() < 1.0 - RANGE_EPS {
        return Err(GeometryError::RangeError(format!(
            "|u| = {} < 1",
            pe.u.abs()
        )));
    }
    if pe.v.abs() >= 1.0 {
        return Err(GeometryError::RangeError(format!(
            "|v| = {} >= 1",
            pe.v.abs()
        )));
    }
    let (s, sb) = (p.sigma, p.sigma_bar);
    let u = sb * pe.u.abs() / (sb * sb * pe.u * pe.u + s * s).sqrt();
    let v = sb * pe.v / (sb * sb * pe.v * pe.v + s * s).sqrt();
    Ok(SpheroConical {
        u,
        v,
        sign_y: pe.sign_x2,
        sign_z: Sign::of(pe.u),
    })
}

/// Gnomonic projection to the tangent plane at the chosen pole, followed
/// by the shear x₁ = x, x₂ = y/σ. The centers land on (±a, 0) of Π₊ and
/// the anti-centers on (∓a, 0) of Π₋.
pub fn gnomonic_project(
    pt: &SpherePoint,
    p: &ProblemParams,
    hemisphere: Hemisphere,
) -> Result<(f64, f64), GeometryError> {
    if pt.z.abs() < EQUATOR_EPS * p.r {
        return Err(GeometryError::EquatorPoint);
    }
    let found = if pt.z > 0.0 {
        Hemisphere::North
    } else {
        Hemisphere::South
    };
    if found != hemisphere {
        return Err(GeometryError::HemisphereMismatch {
            expected: hemisphere,
            found,
        });
    }
    let denom = match hemisphere {
        Hemisphere::North => pt.z,
        Hemisphere::South => -pt.z,
    };
    let x = p.r * pt.x / denom;
    let y = p.r * pt.y / denom;
    Ok((x, y / p.sigma))
}

/// Ratio √(σσ̄) between the planar and spherical nondimensional local
/// times: dζ = √(σσ̄) dς.
pub fn local_time_scale(p: &ProblemParams) -> f64 {
    (p.sigma * p.sigma_bar).sqrt()
}

/// Cartesian point of the glued trajectory chart (w, v), w = 1/u:
///
/// ```text
/// X = R σ̄ v / (D_w D_v)
/// Y = ± R σ σ̄ √(1−w²) √(1−v²) / (D_w D_v)
/// Z = R σ w / (D_w D_v)
/// D_w = √(σ̄² + σ²w²),  D_v = √(σ̄²v² + σ²)
/// ```
///
/// The equator is w = 0 and the expressions stay regular through it.
pub fn glued_cartesian(w: f64, v: f64, sign_y: Sign, p: &ProblemParams) -> SpherePoint {
    let (s, sb, r) = (p.sigma, p.sigma_bar, p.r);
    let dw = (sb * sb + s * s * w * w).sqrt();
    let dv = (sb * sb * v * v + s * s).sqrt();
    let denom = dw * dv;
    SpherePoint {
        x: r * sb * v / denom,
        y: sign_y.factor() * r * s * sb * ((1.0 - w * w).max(0.0) * (1.0 - v * v).max(0.0)).sqrt()
            / denom,
        z: r * s * w / denom,
    }
}

/// (w, v) of a Cartesian point: the glued inverse of `glued_cartesian`.
/// w carries the hemisphere in its sign; |w| ≤ 1 always, with w = 0 on
/// the equator.
pub fn glued_coordinates(pt: &SpherePoint, p: &ProblemParams) -> (f64, f64) {
    let (u_big, v_big, _) = spheroconical_algebraic(pt, p);
    let w_mag = if u_big > 0.0 {
        p.sigma_bar * (1.0 - u_big * u_big).max(0.0).sqrt() / (p.sigma * u_big)
    } else {
        1.0
    };
    let v = p.sigma * v_big / (p.sigma_bar * (1.0 - v_big * v_big).max(f64::MIN_POSITIVE).sqrt());
    (w_mag.min(1.0).copysign(pt.z), v)
}
