//! Ramification points, critical curves and orbit-family classification.
//!
//! In the planar chart (h, g) the radial and angular first-order
//! equations read
//!
//! ```text
//! (du/dζ)² = 2h (u²−1)(u−u₁)(u−u₂)
//! (dv/dζ)² = −2h (1−v²)(v−v₁)(v−v₂)
//! ```
//!
//! so the branch points are the roots of h·u² + u − g and
//! −h·v² + (1−2γ)·v + g. Their configuration relative to ±1 decides the
//! orbit family; collisions of roots (double roots) trace out the six
//! critical curves of the bifurcation diagram:
//!
//! ```text
//! ℒ₁¹: h − g + 1 = 0        ℒ_γ¹: h − g − (1−2γ) = 0
//! ℒ₁²: h − g − 1 = 0        ℒ_γ²: h − g + (1−2γ) = 0
//! ℒ₁³: 4ΩG + 1 = 0          ℒ_γ³: 4ΩG + (1−2γ)² = 0
//! ```
//!
//! (ΩG = hg, so the hyperbolas read the same in either chart.)
//!
//! Families follow the planar taxonomy: planetary t_p, lemniscatic t_l,
//! satellitary t_s and t_s' below the h = 0 line, plus the two classes
//! only orbits crossing the equator can realize, dual satellitary t_ds
//! and meridian planetary t_mp, above it. Ω = 0 is its own regime with
//! the linear-limit branch points u₁ = g, v₂ = −g/(1−2γ).

use crate::geometry::ProblemParams;
use crate::invariants::InvariantPair;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Half-width of the band around a critical curve, measured in the
/// (h, g) chart, inside which a point is reported as critical rather
/// than classified. Double roots make the ordering tests ill-conditioned
/// closer than this.
pub const TOL_CRIT: f64 = 1e-9;

/// |h| below this is treated as the Ω = 0 regime.
const ZERO_REGIME_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BifurcationError {
    /// More than one inequality chain matched away from any critical
    /// curve. This indicates an internal inconsistency, not bad input.
    #[error("ambiguous classification at (h, g) = ({h}, {g}): {details}")]
    AmbiguousClass { h: f64, g: f64, details: String },
}

/// A pair of quadratic roots: real and ordered, or a conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RootPair {
    /// Real roots with lo ≤ hi. The Ω = 0 regime uses ±∞ for the root
    /// that escapes to infinity in the linear limit.
    Real { lo: f64, hi: f64 },
    /// Conjugate pair re ± i·im with im > 0.
    Complex { re: f64, im: f64 },
}

impl RootPair {
    pub fn is_real(&self) -> bool {
        matches!(self, RootPair::Real { .. })
    }
}

/// The four ramification points of the Π₊ chart. The Southern-sheet
/// values follow by reflection: ũ₁ = −u₂, ũ₂ = −u₁, ṽᵢ = vᵢ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoints {
    pub radial: RootPair,
    pub angular: RootPair,
}

impl BranchPoints {
    /// Branch points of the Π₋ (Southern) polynomials.
    pub fn southern(&self) -> BranchPoints {
        let radial = match self.radial {
            RootPair::Real { lo, hi } => RootPair::Real { lo: -hi, hi: -lo },
            RootPair::Complex { re, im } => RootPair::Complex { re: -re, im },
        };
        BranchPoints {
            radial,
            angular: self.angular,
        }
    }

    /// Real radial roots (u₁, u₂), if real.
    pub fn radial_real(&self) -> Option<(f64, f64)> {
        match self.radial {
            RootPair::Real { lo, hi } => Some((lo, hi)),
            RootPair::Complex { .. } => None,
        }
    }

    /// Real angular roots (v₁, v₂), if real.
    pub fn angular_real(&self) -> Option<(f64, f64)> {
        match self.angular {
            RootPair::Real { lo, hi } => Some((lo, hi)),
            RootPair::Complex { .. } => None,
        }
    }
}

/// Orbit families of the taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Planetary t_p.
    Planetary,
    /// Lemniscatic t_l.
    Lemniscatic,
    /// Satellitary t_s (two zones share each diagram point).
    Satellitary,
    /// Satellitary t_s' around the stronger center.
    SatellitaryPrime,
    /// Dual satellitary t_ds (equator-crossing only).
    DualSatellitary,
    /// Meridian planetary t_mp (equator-crossing only).
    MeridianPlanetary,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Planetary => "t_p",
            Family::Lemniscatic => "t_l",
            Family::Satellitary => "t_s",
            Family::SatellitaryPrime => "t_s'",
            Family::DualSatellitary => "t_ds",
            Family::MeridianPlanetary => "t_mp",
        }
    }

    pub fn parse(text: &str) -> Option<Family> {
        match text.trim() {
            "t_p" | "tp" => Some(Family::Planetary),
            "t_l" | "tl" => Some(Family::Lemniscatic),
            "t_s" | "ts" => Some(Family::Satellitary),
            "t_s'" | "t_sp" | "tsp" => Some(Family::SatellitaryPrime),
            "t_ds" | "tds" => Some(Family::DualSatellitary),
            "t_mp" | "tmp" => Some(Family::MeridianPlanetary),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Sign regime of the second invariant Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    NegativeOmega,
    ZeroOmega,
    PositiveOmega,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::NegativeOmega => "Omega<0",
            Regime::ZeroOmega => "Omega=0",
            Regime::PositiveOmega => "Omega>0",
        }
    }
}

/// Distinguishes analytic sub-cases within a family.
///
/// Type1/Type2 label the two Ω < 0 possibilities for t_p and t_l
/// (complex angular roots vs. real roots below −1); Zone1/Zone2 label
/// the two coexisting satellitary orbits around the stronger and the
/// weaker center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subtype {
    None,
    Type1,
    Type2,
    Zone1,
    Zone2,
}

impl Subtype {
    pub fn label(&self) -> &'static str {
        match self {
            Subtype::None => "-",
            Subtype::Type1 => "1",
            Subtype::Type2 => "2",
            Subtype::Zone1 => "zone1",
            Subtype::Zone2 => "zone2",
        }
    }
}

/// A fully resolved orbit class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitClass {
    pub family: Family,
    pub regime: Regime,
    pub subtype: Subtype,
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.subtype == Subtype::None {
            write!(f, "{} ({})", self.family.label(), self.regime.label())
        } else {
            write!(
                f,
                "{} [{}] ({})",
                self.family.label(),
                self.subtype.label(),
                self.regime.label()
            )
        }
    }
}

/// Identifier of one of the six critical curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveId {
    L1_1,
    L1_2,
    L1_3,
    LGamma1,
    LGamma2,
    LGamma3,
}

impl CurveId {
    pub fn label(&self) -> &'static str {
        match self {
            CurveId::L1_1 => "L1_1",
            CurveId::L1_2 => "L1_2",
            CurveId::L1_3 => "L1_3",
            CurveId::LGamma1 => "Lg_1",
            CurveId::LGamma2 => "Lg_2",
            CurveId::LGamma3 => "Lg_3",
        }
    }
}

/// Signed residuals of the six critical-curve equations; a zero (within
/// tolerance) puts the invariant pair on that curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalCurves {
    /// h − g + 1 (radial double root, ℒ₁¹)
    pub l1_1: f64,
    /// h − g − 1 (radial double root, ℒ₁²)
    pub l1_2: f64,
    /// 4ΩG + 1 (radial double root, ℒ₁³)
    pub l1_3: f64,
    /// h − g − (1−2γ) (angular double root, ℒ_γ¹)
    pub lg_1: f64,
    /// h − g + (1−2γ) (angular double root, ℒ_γ²)
    pub lg_2: f64,
    /// 4ΩG + (1−2γ)² (angular double root, ℒ_γ³)
    pub lg_3: f64,
}

impl CriticalCurves {
    pub fn residuals(&self) -> [(CurveId, f64); 6] {
        [
            (CurveId::L1_1, self.l1_1),
            (CurveId::L1_2, self.l1_2),
            (CurveId::L1_3, self.l1_3),
            (CurveId::LGamma1, self.lg_1),
            (CurveId::LGamma2, self.lg_2),
            (CurveId::LGamma3, self.lg_3),
        ]
    }

    /// Curves whose residual is within `tol` of zero.
    pub fn on_curves(&self, tol: f64) -> Vec<CurveId> {
        self.residuals()
            .iter()
            .filter(|(_, r)| r.abs() <= tol)
            .map(|(id, _)| *id)
            .collect()
    }
}

/// Result of classifying an invariant pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    /// Allowed motion. `second_zone` is populated exactly in the t_s
    /// region, where one diagram point represents two possible orbits.
    Allowed {
        class: OrbitClass,
        second_zone: Option<OrbitClass>,
    },
    /// On (or within tolerance of) one or more critical curves.
    Critical { curves: Vec<CurveId> },
    /// No real motion with these invariants; the diagnostic states which
    /// ordering test failed.
    Forbidden { regime: Regime, diagnostic: String },
}

impl Classification {
    pub fn is_forbidden(&self) -> bool {
        matches!(self, Classification::Forbidden { .. })
    }

    pub fn is_critical(&self) -> bool {
        matches!(self, Classification::Critical { .. })
    }

    pub fn class(&self) -> Option<OrbitClass> {
        match self {
            Classification::Allowed { class, .. } => Some(*class),
            _ => None,
        }
    }

    /// Diagram label: the family name, "forbidden" or "critical".
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Allowed { class, .. } => class.family.label(),
            Classification::Critical { .. } => "critical",
            Classification::Forbidden { .. } => "forbidden",
        }
    }
}

/// Branch points of the separated quadratics for an invariant pair.
///
/// Uses the cancellation-free quadratic formula, so the residual of
/// h·u² + u − g at the returned roots stays below 1e-10·max(1, |g|)
/// even when h is small and one root is large. Degenerate configurations
/// are data (complex pairs, ±∞ in the Ω = 0 limit), not errors.
pub fn branch_points(inv: &InvariantPair, p: &ProblemParams) -> BranchPoints {
    let planar = inv.to_planar(p);
    let (h, g) = (planar.h, planar.g);
    let c = 1.0 - 2.0 * p.gamma();

    if h.abs() < ZERO_REGIME_EPS {
        // Linear limit: u₁ = g with u₂ → +∞; v₂ = −g/(1−2γ) with
        // v₁ → −∞. For γ = 1/2 the angular polynomial loses its root
        // entirely; both ends escape.
        let angular = if c.abs() < 1e-15 {
            RootPair::Real {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }
        } else {
            RootPair::Real {
                lo: f64::NEG_INFINITY,
                hi: -g / c,
            }
        };
        return BranchPoints {
            radial: RootPair::Real {
                lo: g,
                hi: f64::INFINITY,
            },
            angular,
        };
    }

    // Radial: h·u² + u − g, discriminant 1 + 4hg.
    let disc_r = 1.0 + 4.0 * h * g;
    let radial = if disc_r >= 0.0 {
        let q = -(1.0 + disc_r.sqrt()) / 2.0;
        let r1 = q / h;
        let r2 = if q != 0.0 { -g / q } else { 0.0 };
        RootPair::Real {
            lo: r1.min(r2),
            hi: r1.max(r2),
        }
    } else {
        RootPair::Complex {
            re: -1.0 / (2.0 * h),
            im: (-disc_r).sqrt() / (2.0 * h.abs()),
        }
    };

    // Angular: −h·v² + (1−2γ)·v + g, discriminant (1−2γ)² + 4hg.
    let disc_a = c * c + 4.0 * h * g;
    let angular = if disc_a >= 0.0 {
        if c == 0.0 {
            let root = (g / h).max(0.0).sqrt();
            RootPair::Real {
                lo: -root,
                hi: root,
            }
        } else {
            let q = -(c + c.signum() * disc_a.sqrt()) / 2.0;
            let r1 = q / (-h);
            let r2 = if q != 0.0 { g / q } else { 0.0 };
            RootPair::Real {
                lo: r1.min(r2),
                hi: r1.max(r2),
            }
        }
    } else {
        RootPair::Complex {
            re: c / (2.0 * h),
            im: (-disc_a).sqrt() / (2.0 * h.abs()),
        }
    };

    BranchPoints { radial, angular }
}

/// The six critical-curve residuals at an invariant pair.
pub fn critical_curves(inv: &InvariantPair, p: &ProblemParams) -> CriticalCurves {
    let planar = inv.to_planar(p);
    let (h, g) = (planar.h, planar.g);
    let c = 1.0 - 2.0 * p.gamma();
    let omega_g = inv.omega() * inv.g_const();
    CriticalCurves {
        l1_1: h - g + 1.0,
        l1_2: h - g - 1.0,
        l1_3: 4.0 * omega_g + 1.0,
        lg_1: h - g - c,
        lg_2: h - g + c,
        lg_3: 4.0 * omega_g + c * c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RadialKind {
    /// 1 < u₁ < u₂ — motion in [u₁, u₂], two caustics (Ω < 0 planetary).
    AnnulusAboveOne,
    /// −1 < u₁ < 1 < u₂ — motion in (1, u₂] (Ω < 0 lemniscatic band).
    BandToOne,
    /// u₁ < −1 < 1 < u₂ — motion u ≥ u₂ glued with u ≤ u₁ (Ω > 0 planetary).
    OuterGlued,
    /// u₁ < −1 < u₂ < 1 — all u > 1 allowed, Southern caustic −u₁ (Ω > 0 t_l family).
    FreeWithSouthCaustic,
    /// −1 < u₁ ≤ u₂ < 1 — all u > 1 allowed on both sheets (Ω > 0 meridian).
    FreeBothSheets,
    /// Ω = 0, u₁ = g > 1 — motion in [u₁, ∞), equator-bounded planetary.
    ZeroAboveOne,
    /// Ω = 0, −1 < u₁ < 1 — motion in [1, ∞), equator-bounded.
    ZeroFree,
    /// No admissible radial interval.
    Forbidden(&'static str),
    /// A configuration outside every printed chain.
    Unlisted(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum AngularKind {
    /// Conjugate roots: the full band (−1, 1) is admissible (type 1).
    FullComplex,
    /// v₁ < v₂ < −1: full band admissible (type 2).
    FullBelow,
    /// v₁ < −1 < v < 1 < v₂: full band admissible (Ω > 0 planetary/lemniscatic).
    FullStraddle,
    /// −1 < v₁ < v₂ < 1 with motion outside [v₁, v₂] (Ω < 0): two zones.
    TwoZones,
    /// −1 < v₁ < v₂ < 1 with motion inside [v₁, v₂] (Ω > 0): one band.
    InnerBand,
    /// v₁ < −1 < v₂ < 1, motion in [v₂, 1) (Ω ≤ 0 satellitary-prime).
    UpperFromBelow,
    /// −1 < v₁ < 1 ≤ v₂, motion in [v₁, 1) (Ω > 0 satellitary-prime).
    UpperFromAbove,
    Forbidden(&'static str),
    Unlisted(&'static str),
}

fn radial_kind(h: f64, pair: RootPair) -> RadialKind {
    match pair {
        RootPair::Complex { .. } => {
            if h < 0.0 {
                // h·u² + u − g < 0 everywhere: (du/dζ)² < 0 for u > 1.
                RadialKind::Forbidden("complex radial roots with Omega < 0")
            } else {
                RadialKind::Unlisted("complex radial roots with Omega > 0")
            }
        }
        RootPair::Real { lo: u1, hi: u2 } => {
            if h < 0.0 {
                if u2 <= 1.0 {
                    RadialKind::Forbidden("radial interval entirely below u = 1")
                } else if u1 > 1.0 {
                    RadialKind::AnnulusAboveOne
                } else if u1 > -1.0 {
                    RadialKind::BandToOne
                } else {
                    RadialKind::Unlisted("u1 <= -1 with Omega < 0")
                }
            } else if u2 == f64::INFINITY {
                // Ω = 0 linear limit; u₁ ≤ −1 leaves no caustic above
                // u = 1 either, so it folds into the free case.
                if u1 > 1.0 {
                    RadialKind::ZeroAboveOne
                } else {
                    RadialKind::ZeroFree
                }
            } else {
                // h > 0.
                if u1 < -1.0 && u2 > 1.0 {
                    RadialKind::OuterGlued
                } else if u1 < -1.0 && u2 > -1.0 && u2 < 1.0 {
                    RadialKind::FreeWithSouthCaustic
                } else if u1 > -1.0 && u2 < 1.0 {
                    RadialKind::FreeBothSheets
                } else {
                    RadialKind::Unlisted("radial roots in no printed configuration for Omega > 0")
                }
            }
        }
    }
}

fn angular_kind(h: f64, pair: RootPair) -> AngularKind {
    match pair {
        RootPair::Complex { .. } => {
            if h < 0.0 {
                AngularKind::FullComplex
            } else {
                // (dv/dζ)² = −2h(1−v²)(v−v₁)(v−v₂) < 0 on the whole band.
                AngularKind::Forbidden("complex angular roots with Omega > 0")
            }
        }
        RootPair::Real { lo: v1, hi: v2 } => {
            if h < 0.0 {
                if v2 < -1.0 {
                    AngularKind::FullBelow
                } else if v1 > -1.0 && v2 < 1.0 {
                    AngularKind::TwoZones
                } else if v1 < -1.0 && v2 > -1.0 && v2 < 1.0 {
                    AngularKind::UpperFromBelow
                } else if v1 <= -1.0 && v2 >= 1.0 {
                    AngularKind::Forbidden("angular band (-1,1) inside the root interval")
                } else {
                    AngularKind::Unlisted("angular roots in no printed configuration for Omega < 0")
                }
            } else if v1 == f64::NEG_INFINITY {
                // Ω = 0 linear limit: admissible range is v ≥ v₂.
                if v2 <= -1.0 {
                    AngularKind::FullBelow
                } else if v2 < 1.0 {
                    AngularKind::UpperFromBelow
                } else {
                    AngularKind::Forbidden("angular turning point at or above v = 1 with Omega = 0")
                }
            } else {
                // h > 0: motion needs (v−v₁)(v−v₂) ≤ 0.
                if v1 < -1.0 && v2 > 1.0 {
                    AngularKind::FullStraddle
                } else if v1 > -1.0 && v1 < 1.0 && v2 >= 1.0 {
                    AngularKind::UpperFromAbove
                } else if v1 > -1.0 && v2 < 1.0 {
                    AngularKind::InnerBand
                } else if v2 <= -1.0 || v1 >= 1.0 {
                    AngularKind::Forbidden("angular root interval misses the band (-1,1)")
                } else {
                    AngularKind::Unlisted("angular roots in no printed configuration for Omega > 0")
                }
            }
        }
    }
}

/// Classify an invariant pair with the default on-curve tolerance.
pub fn classify(
    inv: &InvariantPair,
    p: &ProblemParams,
) -> Result<Classification, BifurcationError> {
    classify_with_tol(inv, p, TOL_CRIT)
}

/// Classify with an explicit on-curve tolerance (grid sweeps widen it to
/// the cell size so critical bands stay visible).
pub fn classify_with_tol(
    inv: &InvariantPair,
    p: &ProblemParams,
    tol: f64,
) -> Result<Classification, BifurcationError> {
    let planar = inv.to_planar(p);
    let h = planar.h;

    let curves = critical_curves(inv, p);
    let on = curves.on_curves(tol);
    if !on.is_empty() {
        return Ok(Classification::Critical { curves: on });
    }

    let regime = if h.abs() < ZERO_REGIME_EPS {
        Regime::ZeroOmega
    } else if h < 0.0 {
        Regime::NegativeOmega
    } else {
        Regime::PositiveOmega
    };

    let bp = branch_points(inv, p);
    let rk = radial_kind(if regime == Regime::ZeroOmega { 0.0 } else { h }, bp.radial);
    let ak = angular_kind(
        if regime == Regime::ZeroOmega { 0.0 } else { h },
        bp.angular,
    );

    if let RadialKind::Forbidden(d) | RadialKind::Unlisted(d) = rk {
        return Ok(Classification::Forbidden {
            regime,
            diagnostic: d.to_string(),
        });
    }
    if let AngularKind::Forbidden(d) | AngularKind::Unlisted(d) = ak {
        return Ok(Classification::Forbidden {
            regime,
            diagnostic: d.to_string(),
        });
    }

    let allowed = |family, subtype| {
        Ok(Classification::Allowed {
            class: OrbitClass {
                family,
                regime,
                subtype,
            },
            second_zone: None,
        })
    };

    match regime {
        Regime::NegativeOmega => match (rk, ak) {
            (RadialKind::AnnulusAboveOne, AngularKind::FullComplex) => {
                allowed(Family::Planetary, Subtype::Type1)
            }
            (RadialKind::AnnulusAboveOne, AngularKind::FullBelow) => {
                allowed(Family::Planetary, Subtype::Type2)
            }
            (RadialKind::BandToOne, AngularKind::FullComplex) => {
                allowed(Family::Lemniscatic, Subtype::Type1)
            }
            (RadialKind::BandToOne, AngularKind::FullBelow) => {
                allowed(Family::Lemniscatic, Subtype::Type2)
            }
            (RadialKind::BandToOne, AngularKind::TwoZones) => Ok(Classification::Allowed {
                class: OrbitClass {
                    family: Family::Satellitary,
                    regime,
                    subtype: Subtype::Zone1,
                },
                second_zone: Some(OrbitClass {
                    family: Family::Satellitary,
                    regime,
                    subtype: Subtype::Zone2,
                }),
            }),
            (RadialKind::BandToOne, AngularKind::UpperFromBelow) => {
                allowed(Family::SatellitaryPrime, Subtype::None)
            }
            (r, a) => Ok(Classification::Forbidden {
                regime,
                diagnostic: format!("no printed chain matches radial {r:?} with angular {a:?}"),
            }),
        },
        Regime::PositiveOmega => match (rk, ak) {
            (RadialKind::OuterGlued, AngularKind::FullStraddle) => {
                allowed(Family::Planetary, Subtype::None)
            }
            (RadialKind::FreeWithSouthCaustic, AngularKind::FullStraddle) => {
                allowed(Family::Lemniscatic, Subtype::None)
            }
            (RadialKind::FreeWithSouthCaustic, AngularKind::UpperFromAbove) => {
                allowed(Family::SatellitaryPrime, Subtype::None)
            }
            (RadialKind::FreeWithSouthCaustic, AngularKind::InnerBand) => {
                allowed(Family::DualSatellitary, Subtype::None)
            }
            (RadialKind::FreeBothSheets, AngularKind::InnerBand) => {
                allowed(Family::MeridianPlanetary, Subtype::None)
            }
            (r, a) => Ok(Classification::Forbidden {
                regime,
                diagnostic: format!("no printed chain matches radial {r:?} with angular {a:?}"),
            }),
        },
        Regime::ZeroOmega => match (rk, ak) {
            (RadialKind::ZeroAboveOne, AngularKind::FullBelow) => {
                allowed(Family::Planetary, Subtype::None)
            }
            (RadialKind::ZeroFree, AngularKind::FullBelow) => {
                allowed(Family::Lemniscatic, Subtype::None)
            }
            (RadialKind::ZeroFree, AngularKind::UpperFromBelow) => {
                allowed(Family::SatellitaryPrime, Subtype::None)
            }
            (r, a) => Ok(Classification::Forbidden {
                regime,
                diagnostic: format!("no printed chain matches radial {r:?} with angular {a:?}"),
            }),
        },
    }
}

/// Rectangle in the (h, g) chart for diagram sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartRegion {
    pub h_min: f64,
    pub h_max: f64,
    pub g_min: f64,
    pub g_max: f64,
}

/// One cell of a classified grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub h: f64,
    pub g: f64,
    pub classification: Classification,
}

/// Classify a row-major grid over `region` (g varies slowest, h fastest;
/// endpoints included).
///
/// The on-curve tolerance is widened to roughly half a cell, normalized
/// by the gradient of each curve equation, so the critical curves show
/// up as one-cell-wide bands instead of being skipped between lattice
/// points; single points (or degenerate regions) fall back to the
/// point tolerance.
pub fn classify_grid(
    region: &ChartRegion,
    resolution: (usize, usize),
    p: &ProblemParams,
) -> Result<Vec<GridCell>, BifurcationError> {
    let (nx, ny) = resolution;
    assert!(nx >= 1 && ny >= 1, "grid resolution must be positive");
    let dh = if nx > 1 {
        (region.h_max - region.h_min) / (nx - 1) as f64
    } else {
        0.0
    };
    let dg = if ny > 1 {
        (region.g_max - region.g_min) / (ny - 1) as f64
    } else {
        0.0
    };
    let band = 0.5 * dh.hypot(dg);

    let mut cells = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        let g = region.g_min + dg * iy as f64;
        for ix in 0..nx {
            let h = region.h_min + dh * ix as f64;
            let inv = InvariantPair::from_planar(crate::invariants::PlanarInvariants { h, g }, p);
            let classification = if band > 0.0 {
                classify_banded(&inv, p, band)?
            } else {
                classify(&inv, p)?
            };
            cells.push(GridCell {
                h,
                g,
                classification,
            });
        }
    }
    Ok(cells)
}

/// Classification with the on-curve test normalized to Euclidean
/// distance in the chart: a point counts as critical when a curve passes
/// within `band` of it.
fn classify_banded(
    inv: &InvariantPair,
    p: &ProblemParams,
    band: f64,
) -> Result<Classification, BifurcationError> {
    let planar = inv.to_planar(p);
    let (h, g) = (planar.h, planar.g);
    let curves = critical_curves(inv, p);
    let mut on = Vec::new();
    for (id, residual) in curves.residuals() {
        // Gradient norms: the straight lines h−g±c have |∇| = √2; the
        // hyperbolas 4hg+c have |∇| = 4√(h²+g²).
        let grad = match id {
            CurveId::L1_1 | CurveId::L1_2 | CurveId::LGamma1 | CurveId::LGamma2 => {
                std::f64::consts::SQRT_2
            }
            CurveId::L1_3 | CurveId::LGamma3 => 4.0 * h.hypot(g),
        };
        let tol = TOL_CRIT + band * grad;
        if residual.abs() <= tol {
            on.push(id);
        }
    }
    if !on.is_empty() {
        return Ok(Classification::Critical { curves: on });
    }
    classify_with_tol(inv, p, TOL_CRIT)
}
