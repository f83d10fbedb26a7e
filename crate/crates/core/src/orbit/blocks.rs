//! The closed-form solution blocks, one per orbit family and regime.
//!
//! Each block gives the Cartesian trajectory as a rational expression in
//! Jacobi functions of the two phases s_u(ζ), s_v(ζ), normalized by the
//! per-variable factors Υ_u, Υ_v that keep the point on the sphere. The
//! blocks are kept exactly in their printed form rather than re-derived
//! from the compact glued expression, so the glued form (driven by the
//! numerically integrated separated equations) stays available as an
//! independent cross-check of every block.
//!
//! The Ω < 0 type-1 planetary and lemniscatic blocks have conjugate
//! angular branch points; the moduli |1±v₁| entering them are complex
//! moduli.

use crate::elliptic::JacobiTriple;
use serde::{Deserialize, Serialize};

/// Which printed solution block an orbit evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionBlock {
    /// Ω > 0 planetary.
    PlanetaryPos,
    /// Ω > 0 lemniscatic.
    LemniscaticPos,
    /// Ω > 0 satellitary-prime.
    SatellitaryPrimePos,
    /// Ω > 0 dual satellitary.
    DualSatellitaryPos,
    /// Ω > 0 meridian planetary.
    MeridianPlanetaryPos,
    /// Ω < 0 planetary, type 1 (conjugate angular roots).
    PlanetaryNeg1,
    /// Ω < 0 planetary, type 2.
    PlanetaryNeg2,
    /// Ω < 0 lemniscatic, type 1 (conjugate angular roots).
    LemniscaticNeg1,
    /// Ω < 0 lemniscatic, type 2.
    LemniscaticNeg2,
    /// Ω < 0 satellitary, zone 1 (around the stronger center).
    SatellitaryNeg1,
    /// Ω < 0 satellitary, zone 2 (around the weaker center).
    SatellitaryNeg2,
    /// Ω < 0 satellitary-prime.
    SatellitaryPrimeNeg,
    /// Ω = 0 planetary.
    PlanetaryZero,
    /// Ω = 0 lemniscatic.
    LemniscaticZero,
    /// Ω = 0 satellitary-prime.
    SatellitaryPrimeZero,
}

/// Branch-point data a block needs, precomputed at spec build time.
///
/// For blocks with conjugate angular roots, `v1`/`v2` are NaN and the
/// complex moduli `abs_one_plus_v1` = |1+v₁|, `abs_one_minus_v1` = |1−v₁|
/// carry the angular information instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub(crate) struct BlockContext {
    pub u1: f64,
    pub u2: f64,
    pub v1: f64,
    pub v2: f64,
    pub abs_one_plus_v1: f64,
    pub abs_one_minus_v1: f64,
    pub k_u: f64,
    pub k_v: f64,
}

/// Elliptic moduli and scale factors (k_u², g_u, k_v², g_v) of a block.
pub(crate) fn moduli(block: SolutionBlock, c: &BlockContext) -> (f64, f64, f64, f64) {
    use SolutionBlock::*;
    let (u1, u2, v1, v2) = (c.u1, c.u2, c.v1, c.v2);
    let (ku2, gu) = match block {
        PlanetaryPos | MeridianPlanetaryPos => (
            2.0 * (u2 - u1) / ((1.0 - u1) * (1.0 + u2)),
            2.0 / ((1.0 - u1) * (1.0 + u2)).sqrt(),
        ),
        LemniscaticPos | SatellitaryPrimePos | DualSatellitaryPos => (
            (1.0 - u1) * (1.0 + u2) / (2.0 * (u2 - u1)),
            std::f64::consts::SQRT_2 / (u2 - u1).sqrt(),
        ),
        PlanetaryNeg1 | PlanetaryNeg2 => (
            2.0 * (u2 - u1) / ((u1 + 1.0) * (u2 - 1.0)),
            2.0 / ((u1 + 1.0) * (u2 - 1.0)).sqrt(),
        ),
        LemniscaticNeg1 | LemniscaticNeg2 | SatellitaryNeg1 | SatellitaryNeg2
        | SatellitaryPrimeNeg => (
            (u1 + 1.0) * (u2 - 1.0) / (2.0 * (u2 - u1)),
            std::f64::consts::SQRT_2 / (u2 - u1).sqrt(),
        ),
        PlanetaryZero => (2.0 / (u1 + 1.0), 2.0 / (1.0 + u1).sqrt()),
        LemniscaticZero | SatellitaryPrimeZero => ((u1 + 1.0) / 2.0, std::f64::consts::SQRT_2),
    };
    let (kv2, gv) = match block {
        PlanetaryPos | LemniscaticPos | DualSatellitaryPos | MeridianPlanetaryPos => (
            2.0 * (v2 - v1) / ((1.0 - v1) * (1.0 + v2)),
            2.0 / ((1.0 - v1) * (1.0 + v2)).sqrt(),
        ),
        SatellitaryPrimePos => (
            (1.0 - v1) * (1.0 + v2) / (2.0 * (v2 - v1)),
            std::f64::consts::SQRT_2 / (v2 - v1).sqrt(),
        ),
        PlanetaryNeg1 | LemniscaticNeg1 => {
            let a = c.abs_one_plus_v1;
            let b = c.abs_one_minus_v1;
            (
                (4.0 - (b - a) * (b - a)) / (4.0 * a * b),
                1.0 / (a * b).sqrt(),
            )
        }
        PlanetaryNeg2 | LemniscaticNeg2 => (
            2.0 * (v2 - v1) / ((v1 + 1.0) * (v2 - 1.0)),
            2.0 / ((v1 + 1.0) * (v2 - 1.0)).sqrt(),
        ),
        SatellitaryNeg1 | SatellitaryNeg2 => (
            (1.0 + v1) * (1.0 - v2) / ((1.0 - v1) * (1.0 + v2)),
            2.0 / ((1.0 - v1) * (1.0 + v2)).sqrt(),
        ),
        SatellitaryPrimeNeg => (
            (v1 + 1.0) * (v2 - 1.0) / (2.0 * (v2 - v1)),
            std::f64::consts::SQRT_2 / (v2 - v1).sqrt(),
        ),
        PlanetaryZero | LemniscaticZero => (2.0 / (1.0 - v2), 2.0 / (1.0 - v2).sqrt()),
        SatellitaryPrimeZero => ((1.0 - v2) / 2.0, std::f64::consts::SQRT_2),
    };
    (ku2, gu, kv2, gv)
}

/// Multiples of K(k²) making up the u- and v-periods of each block.
pub(crate) fn period_multipliers(block: SolutionBlock) -> (f64, f64) {
    use SolutionBlock::*;
    match block {
        PlanetaryPos | MeridianPlanetaryPos => (2.0, 2.0),
        LemniscaticPos | DualSatellitaryPos => (4.0, 2.0),
        SatellitaryPrimePos => (4.0, 4.0),
        PlanetaryNeg1 => (2.0, 4.0),
        PlanetaryNeg2 => (2.0, 2.0),
        LemniscaticNeg2 => (4.0, 2.0),
        LemniscaticNeg1 | SatellitaryNeg1 | SatellitaryNeg2 | SatellitaryPrimeNeg => (4.0, 4.0),
        PlanetaryZero => (2.0, 2.0),
        LemniscaticZero => (4.0, 2.0),
        SatellitaryPrimeZero => (4.0, 4.0),
    }
}

/// Evaluate a block's Cartesian point (before the global Y orientation is
/// applied). `s` = cos θ_f, `sb` = sin θ_f, `r` = sphere radius.
pub(crate) fn xyz(
    block: SolutionBlock,
    c: &BlockContext,
    ju: JacobiTriple,
    jv: JacobiTriple,
    s: f64,
    sb: f64,
    r: f64,
) -> [f64; 3] {
    use SolutionBlock::*;
    let (u1, u2, v1, v2) = (c.u1, c.u2, c.v1, c.v2);
    let s2 = s * s;
    let sb2 = sb * sb;
    let dnu2 = ju.dn * ju.dn;
    let snu2 = ju.sn * ju.sn;
    let snv2 = jv.sn * jv.sn;
    let dnv2 = jv.dn * jv.dn;

    let (xf, yf, zf, upsilon_u, upsilon_v) = match block {
        PlanetaryPos => (
            sb * (1.0 - u2 - (u2 + 1.0) * dnu2) * (1.0 - v1 + 2.0 * v1 * snv2),
            4.0 * s * sb * (u2 * u2 - 1.0).sqrt() * (v1 * v1 - 1.0).sqrt() * ju.dn * jv.sn * jv.cn,
            s * (u2 - 1.0 - (u2 + 1.0) * dnu2) * (v1 - 1.0 + 2.0 * snv2),
            ((u2 - 1.0).powi(2) - 2.0 * (u2 * u2 - 1.0) * (s2 - sb2) * dnu2
                + (u2 + 1.0).powi(2) * dnu2 * dnu2)
                .sqrt(),
            ((v1 - 1.0).powi(2)
                + 4.0 * (1.0 - v1) * (sb2 * v1 - s2) * snv2
                + 4.0 * (sb2 * v1 * v1 + s2) * snv2 * snv2)
                .sqrt(),
        ),
        LemniscaticPos => (
            sb * (u2 - 1.0 - 2.0 * u2 * dnu2) * (1.0 - v1 + 2.0 * v1 * snv2),
            4.0 * s
                * sb
                * c.k_u
                * (1.0 - u2 * u2).sqrt()
                * (v1 * v1 - 1.0).sqrt()
                * ju.dn
                * ju.sn
                * jv.sn
                * jv.cn,
            s * (1.0 - u2 - 2.0 * dnu2) * (v1 - 1.0 + 2.0 * snv2),
            ((u2 - 1.0).powi(2)
                + 4.0 * (1.0 - u2) * (sb2 * u2 - s2) * dnu2
                + 4.0 * (sb2 * u2 * u2 + s2) * dnu2 * dnu2)
                .sqrt(),
            ((v1 - 1.0).powi(2)
                + 4.0 * (1.0 - v1) * (sb2 * v1 - s2) * snv2
                + 4.0 * (sb2 * v1 * v1 + s2) * snv2 * snv2)
                .sqrt(),
        ),
        SatellitaryPrimePos => (
            sb * (1.0 - u2 + 2.0 * u2 * dnu2) * (2.0 * v1 + (1.0 - v1) * snv2),
            4.0 * s
                * sb
                * c.k_u
                * (1.0 - u2 * u2).sqrt()
                * (1.0 - v1 * v1).sqrt()
                * ju.dn
                * ju.sn
                * jv.cn,
            s * (u2 - 1.0 + 2.0 * dnu2) * (2.0 - (1.0 - v1) * snv2),
            ((u2 - 1.0).powi(2)
                + 4.0 * (1.0 - u2) * (sb2 * u2 - s2) * dnu2
                + 4.0 * (sb2 * u2 * u2 + s2) * dnu2 * dnu2)
                .sqrt(),
            (4.0 * (sb2 * v1 * v1 + s2)
                + 4.0 * (1.0 - v1) * (sb2 * v1 - s2) * snv2
                + (v1 - 1.0).powi(2) * snv2 * snv2)
                .sqrt(),
        ),
        DualSatellitaryPos => (
            sb * (1.0 - u2 + 2.0 * u2 * dnu2) * (1.0 + v1 - (1.0 - v1) * dnv2),
            4.0 * s
                * sb
                * c.k_u
                * (1.0 - u2 * u2).sqrt()
                * (1.0 - v1 * v1).sqrt()
                * ju.dn
                * ju.sn
                * jv.dn,
            s * (u2 - 1.0 + 2.0 * dnu2) * (1.0 + v1 + (1.0 - v1) * dnv2),
            ((u2 - 1.0).powi(2)
                + 4.0 * (1.0 - u2) * (sb2 * u2 - s2) * dnu2
                + 4.0 * (sb2 * u2 * u2 + s2) * dnu2 * dnu2)
                .sqrt(),
            ((1.0 + v1).powi(2)
                + 2.0 * (1.0 - v1 * v1) * (s2 - sb2) * dnv2
                + (1.0 - v1).powi(2) * dnv2 * dnv2)
                .sqrt(),
        ),
        MeridianPlanetaryPos => (
            sb * (u2 + 1.0 - 2.0 * u2 * snu2) * (1.0 + v1 - (1.0 - v1) * dnv2),
            4.0 * s * sb * (1.0 - u2 * u2).sqrt() * (1.0 - v1 * v1).sqrt() * ju.cn * ju.sn * jv.dn,
            s * (1.0 + u2 - 2.0 * snu2) * (1.0 + v1 + (1.0 - v1) * dnv2),
            ((1.0 + u2).powi(2) - 4.0 * (1.0 + u2) * (sb2 * u2 + s2) * snu2
                + 4.0 * (sb2 * u2 * u2 + s2) * snu2 * snu2)
                .sqrt(),
            ((1.0 + v1).powi(2)
                + 2.0 * (1.0 - v1 * v1) * (s2 - sb2) * dnv2
                + (1.0 - v1).powi(2) * dnv2 * dnv2)
                .sqrt(),
        ),
        PlanetaryNeg1 => {
            let a = c.abs_one_plus_v1;
            let b = c.abs_one_minus_v1;
            (
                sb * (u1 - 1.0 + (u1 + 1.0) * dnu2) * (a * (1.0 - jv.cn) - b * (1.0 + jv.cn)),
                4.0 * s * sb * (u1 * u1 - 1.0).sqrt() * (a * b).sqrt() * ju.dn * jv.sn,
                s * (1.0 - u1 + (u1 + 1.0) * dnu2) * (a * (1.0 - jv.cn) + b * (1.0 + jv.cn)),
                ((u1 - 1.0).powi(2) - 2.0 * (u1 * u1 - 1.0) * (s2 - sb2) * dnu2
                    + (u1 + 1.0).powi(2) * dnu2 * dnu2)
                    .sqrt(),
                (b * b * (1.0 + jv.cn).powi(2)
                    + 2.0 * a * b * (s2 - sb2) * snv2
                    + a * a * (1.0 - jv.cn).powi(2))
                .sqrt(),
            )
        }
        PlanetaryNeg2 => (
            sb * (1.0 - u1 - (u1 + 1.0) * dnu2) * (1.0 - v2 + 2.0 * v2 * snv2),
            4.0 * s * sb * (u1 * u1 - 1.0).sqrt() * (v2 * v2 - 1.0).sqrt() * ju.dn * jv.sn * jv.cn,
            s * (-1.0 + u1 - (u1 + 1.0) * dnu2) * (v2 - 1.0 + 2.0 * snv2),
            ((u1 - 1.0).powi(2) - 2.0 * (u1 * u1 - 1.0) * (s2 - sb2) * dnu2
                + (u1 + 1.0).powi(2) * dnu2 * dnu2)
                .sqrt(),
            ((v2 - 1.0).powi(2)
                + 4.0 * (1.0 - v2) * (sb2 * v2 - s2) * snv2
                + 4.0 * (sb2 * v2 * v2 + s2) * snv2 * snv2)
                .sqrt(),
        ),
        LemniscaticNeg1 => {
            let a = c.abs_one_plus_v1;
            let b = c.abs_one_minus_v1;
            (
                sb * (1.0 - u1 + 2.0 * u1 * dnu2) * (a * (1.0 - jv.cn) - b * (1.0 + jv.cn)),
                4.0 * s
                    * sb
                    * c.k_u
                    * (1.0 - u1 * u1).sqrt()
                    * (a * b).sqrt()
                    * ju.dn
                    * ju.sn
                    * jv.sn,
                s * (u1 - 1.0 + 2.0 * dnu2) * (a * (1.0 - jv.cn) + b * (1.0 + jv.cn)),
                ((u1 - 1.0).powi(2)
                    + 4.0 * (1.0 - u1) * (sb2 * u1 - s2) * dnu2
                    + 4.0 * (sb2 * u1 * u1 + s2) * dnu2 * dnu2)
                    .sqrt(),
                (b * b * (1.0 + jv.cn).powi(2)
                    + 2.0 * a * b * (s2 - sb2) * snv2
                    + a * a * (1.0 - jv.cn).powi(2))
                .sqrt(),
            )
        }
        LemniscaticNeg2 => (
            sb * (u1 - 1.0 - 2.0 * u1 * dnu2) * (1.0 - v2 + 2.0 * v2 * snv2),
            4.0 * s
                * sb
                * c.k_u
                * (1.0 - u1 * u1).sqrt()
                * (v2 * v2 - 1.0).sqrt()
                * ju.dn
                * ju.sn
                * jv.sn
                * jv.cn,
            s * (1.0 - u1 - 2.0 * dnu2) * (v2 - 1.0 + 2.0 * snv2),
            ((u1 - 1.0).powi(2)
                + 4.0 * (1.0 - u1) * (sb2 * u1 - s2) * dnu2
                + 4.0 * (sb2 * u1 * u1 + s2) * dnu2 * dnu2)
                .sqrt(),
            ((v2 - 1.0).powi(2)
                + 4.0 * (1.0 - v2) * (sb2 * v2 - s2) * snv2
                + 4.0 * (sb2 * v2 * v2 + s2) * snv2 * snv2)
                .sqrt(),
        ),
        SatellitaryNeg1 => (
            sb * (1.0 - u1 + 2.0 * u1 * dnu2) * (v2 * (1.0 - v1) + v1 * (v2 - 1.0) * snv2),
            2.0 * s
                * sb
                * c.k_u
                * (1.0 - u1 * u1).sqrt()
                * (1.0 - v2 * v2).sqrt()
                * (1.0 - v1)
                * ju.dn
                * ju.sn
                * jv.dn
                * jv.cn,
            s * (u1 - 1.0 + 2.0 * dnu2) * (1.0 - v1 - (1.0 - v2) * snv2),
            ((u1 - 1.0).powi(2)
                + 4.0 * (1.0 - u1) * (sb2 * u1 - s2) * dnu2
                + 4.0 * (sb2 * u1 * u1 + s2) * dnu2 * dnu2)
                .sqrt(),
            ((v1 - 1.0).powi(2) * (sb2 * v2 * v2 + s2)
                - 2.0 * (1.0 - v1) * (1.0 - v2) * (sb2 * v1 * v2 + s2) * snv2
                + (v2 - 1.0).powi(2) * (sb2 * v1 * v1 + s2) * snv2 * snv2)
                .sqrt(),
        ),
        SatellitaryNeg2 => (
            sb * (1.0 - u1 + 2.0 * u1 * dnu2) * (2.0 * v2 - (1.0 + v2) * dnv2),
            4.0 * s
                * sb
                * c.k_u
                * c.k_v
                * (1.0 - u1 * u1).sqrt()
                * (1.0 - v2 * v2).sqrt()
                * ju.dn
                * ju.sn
                * jv.sn,
            s * (u1 - 1.0 + 2.0 * dnu2) * (2.0 - (1.0 + v2) * dnv2),
            ((u1 - 1.0).powi(2)
                + 4.0 * (1.0 - u1) * (sb2 * u1 - s2) * dnu2
                + 4.0 * (sb2 * u1 * u1 + s2) * dnu2 * dnu2)
                .sqrt(),
            (4.0 * (sb2 * v2 * v2 + s2) - 4.0 * (1.0 + v2) * (sb2 * v2 + s2) * dnv2
                + (1.0 + v2).powi(2) * dnv2 * dnv2)
                .sqrt(),
        ),
        SatellitaryPrimeNeg => (
            sb * (1.0 - u1 + 2.0 * u1 * dnu2) * (2.0 * v2 + (1.0 - v2) * snv2),
            4.0 * s
                * sb
                * c.k_u
                * (1.0 - u1 * u1).sqrt()
                * (1.0 - v2 * v2).sqrt()
                * ju.dn
                * ju.sn
                * jv.cn,
            s * (u1 - 1.0 + 2.0 * dnu2) * (2.0 - (1.0 - v2) * snv2),
            ((u1 - 1.0).powi(2)
                + 4.0 * (1.0 - u1) * (sb2 * u1 - s2) * dnu2
                + 4.0 * (sb2 * u1 * u1 + s2) * dnu2 * dnu2)
                .sqrt(),
            (4.0 * (sb2 * v2 * v2 + s2)
                + 4.0 * (1.0 - v2) * (sb2 * v2 - s2) * snv2
                + (v2 - 1.0).powi(2) * snv2 * snv2)
                .sqrt(),
        ),
        PlanetaryZero => (
            sb * (u1 - snu2) * (-1.0 - v2 + v2 * dnv2),
            2.0 * s
                * sb
                * (u1 * u1 - 1.0).sqrt()
                * ((1.0 + v2) / (v2 - 1.0)).sqrt()
                * ju.dn
                * jv.sn
                * jv.cn,
            s * ju.cn * ju.cn * dnv2,
            ((sb2 * u1 * u1 + s2) - 2.0 * (sb2 * u1 + s2) * snu2 + snu2 * snu2).sqrt(),
            (sb2 * (1.0 + v2).powi(2) - 2.0 * sb2 * v2 * (1.0 + v2) * dnv2
                + (sb2 * v2 * v2 + s2) * dnv2 * dnv2)
                .sqrt(),
        ),
        LemniscaticZero => (
            sb * (1.0 - u1 * snu2) * (-1.0 - v2 + v2 * dnv2),
            2.0 * std::f64::consts::SQRT_2
                * s
                * sb
                * (1.0 - u1).sqrt()
                * ((1.0 + v2) / (v2 - 1.0)).sqrt()
                * ju.dn
                * ju.sn
                * jv.sn
                * jv.cn,
            s * ju.cn * ju.cn * dnv2,
            (1.0 - 2.0 * (sb2 * u1 + s2) * snu2 + (sb2 * u1 * u1 + s2) * snu2 * snu2).sqrt(),
            (sb2 * (1.0 + v2).powi(2) - 2.0 * sb2 * v2 * (1.0 + v2) * dnv2
                + (sb2 * v2 * v2 + s2) * dnv2 * dnv2)
                .sqrt(),
        ),
        SatellitaryPrimeZero => (
            sb * (1.0 - u1 * snu2) * (1.0 + v2 - dnv2),
            std::f64::consts::SQRT_2
                * s
                * sb
                * (1.0 - u1).sqrt()
                * (1.0 - v2 * v2).sqrt()
                * ju.dn
                * ju.sn
                * jv.cn,
            s * ju.cn * ju.cn * dnv2,
            (1.0 - 2.0 * (sb2 * u1 + s2) * snu2 + (sb2 * u1 * u1 + s2) * snu2 * snu2).sqrt(),
            (sb2 * (1.0 + v2).powi(2) - 2.0 * sb2 * (1.0 + v2) * dnv2 + dnv2 * dnv2).sqrt(),
        ),
    };

    let scale = r / (upsilon_u * upsilon_v);
    [scale * xf, scale * yf, scale * zf]
}
