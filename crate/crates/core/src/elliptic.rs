//! Elliptic integrals of the first kind and Jacobi elliptic functions.
//!
//! Everything here works with the parameter convention m = k², matching
//! `scipy.special.ellipk` and Abramowitz & Stegun chapter 16/17:
//!
//! ```text
//! K(m)    = ∫₀^{π/2} dθ / √(1 − m sin²θ)
//! F(φ|m)  = ∫₀^{φ}   dθ / √(1 − m sin²θ)
//! sn(s|m) = sin(am(s|m)),  cn = cos(am),  dn = √(1 − m sn²)
//! ```
//!
//! K(m) is computed by the arithmetic–geometric mean iteration, which
//! converges quadratically and needs no coefficient tables. The Jacobi
//! triple (sn, cn, dn) comes from the descending Landen/AGM recursion of
//! A&S 16.4, with the argument reduced modulo the real period 4K first so
//! accuracy does not degrade for large |s|. F(φ|m) uses the ascending
//! Landen transformation with tangent bookkeeping (the classic Cephes
//! scheme), so it is an independent route from the sn/cn/dn recursion.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Modulus values with 1 − m below this are treated as degenerate:
/// K(m) diverges logarithmically and every period built from it is
/// meaningless at f64 precision.
pub const DEGENERACY_GUARD: f64 = 1e-12;

/// Errors raised by the elliptic kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EllipticError {
    /// Parameter outside [0, 1].
    #[error("elliptic parameter m = {0} outside [0, 1]")]
    InvalidModulus(f64),
    /// Parameter within the degeneracy guard of m = 1; the complete
    /// integral (and any period) diverges there.
    #[error("elliptic parameter m = {0} is degenerate (m -> 1, K diverges)")]
    DegenerateModulus(f64),
}

/// The elliptic parameter m = k², restricted to [0, 1].
///
/// m = 1 is representable (the hyperbolic limit of the Jacobi functions
/// is finite) but flagged degenerate; `complete_k` refuses it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self, EllipticError> {
        if !(0.0..=1.0).contains(&m) || m.is_nan() {
            return Err(EllipticError::InvalidModulus(m));
        }
        Ok(Self(m))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when m is within the degeneracy guard of 1.
    pub fn is_degenerate(self) -> bool {
        1.0 - self.0 < DEGENERACY_GUARD
    }
}

/// The Jacobi triple (sn, cn, dn) at a common argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Complete elliptic integral of the first kind K(m) by AGM iteration.
///
/// Relative error is at machine level (the AGM is iterated to a fixed
/// point). Degenerate parameters are rejected rather than returning an
/// overflowing value.
pub fn complete_k(m: EllipticParameter) -> Result<f64, EllipticError> {
    if m.is_degenerate() {
        return Err(EllipticError::DegenerateModulus(m.value()));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m.value()).sqrt();
    // Quadratic convergence: ~8 iterations cover the full range.
    for _ in 0..40 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(PI / (2.0 * a))
}

/// Jacobi elliptic functions sn, cn, dn evaluated together.
///
/// All three are computed in one descending-AGM pass (A&S 16.4); the
/// per-function wrappers below are thin projections. The argument is
/// reduced modulo 4K(m) before the recursion, which keeps the absolute
/// error near machine level over the |s| ranges the orbit formulas use.
pub fn jacobi_sn_cn_dn(s: f64, m: EllipticParameter) -> JacobiTriple {
    let mv = m.value();
    if mv == 0.0 {
        return JacobiTriple {
            sn: s.sin(),
            cn: s.cos(),
            dn: 1.0,
        };
    }
    // Hyperbolic limit; also covers parameters the AGM cannot separate
    // from 1 in f64.
    if 1.0 - mv < 1e-15 {
        let sech = 1.0 / s.cosh();
        return JacobiTriple {
            sn: s.tanh(),
            cn: sech,
            dn: sech,
        };
    }

    // Period reduction: sn, cn are 4K-periodic and dn is 2K-periodic;
    // the half-period shift sn(s+2K) = −sn, cn(s+2K) = −cn, dn(s+2K) = dn
    // then brings the argument into [−K, K], where the amplitude
    // recursion loses the least precision.
    let quarter = complete_k(m).expect("non-degenerate by the guard above");
    let period = 4.0 * quarter;
    let mut s_red = s - period * (s / period).round();
    let mut flip = 1.0;
    if s_red.abs() > quarter {
        s_red -= (2.0 * quarter).copysign(s_red);
        flip = -1.0;
    }

    // Descending AGM scales, indexed so that step n pairs
    // a_n = (a_{n−1}+b_{n−1})/2 with c_n = (a_{n−1}−b_{n−1})/2.
    let mut a = 1.0_f64;
    let mut b = (1.0 - mv).sqrt();
    let mut scales = [(0.0_f64, 0.0_f64); 32];
    scales[0] = (a, mv.sqrt());
    let mut depth = 1;
    while depth < 32 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        scales[depth] = (a, c);
        depth += 1;
        if c.abs() <= f64::EPSILON * a {
            break;
        }
    }

    // Amplitude recursion run backwards:
    //   φ_N = 2^N a_N s,   sin(2φ_{n-1} − φ_n) = (c_n/a_n) sin φ_n.
    let a_last = scales[depth - 1].0;
    let mut phi = (1u64 << (depth - 1)) as f64 * a_last * s_red;
    for n in (1..depth).rev() {
        let (a_n, c_n) = scales[n];
        phi = 0.5 * (phi + ((c_n / a_n) * phi.sin()).asin());
    }

    let sn = phi.sin();
    let cn = phi.cos();
    // dn through the defining identity; the textbook quotient
    // cos φ₀ / cos(φ₁ − φ₀) goes 0/0 at the quarter period. dn is
    // positive throughout m ∈ [0, 1].
    let dn = (1.0 - mv * sn * sn).max(0.0).sqrt();
    JacobiTriple {
        sn: flip * sn,
        cn: flip * cn,
        dn,
    }
}

pub fn sn(s: f64, m: EllipticParameter) -> f64 {
    jacobi_sn_cn_dn(s, m).sn
}

pub fn cn(s: f64, m: EllipticParameter) -> f64 {
    jacobi_sn_cn_dn(s, m).cn
}

pub fn dn(s: f64, m: EllipticParameter) -> f64 {
    jacobi_sn_cn_dn(s, m).dn
}

/// Incomplete elliptic integral of the first kind F(φ|m).
///
/// Ascending Landen transformation with the tangent-addition update, so
/// the amplitude never has to be unwrapped through tan() of a large
/// argument. Satisfies F(π/2|m) = K(m) and sn(F(φ|m)|m) = sin φ.
pub fn incomplete_f(phi: f64, m: EllipticParameter) -> Result<f64, EllipticError> {
    if m.is_degenerate() {
        return Err(EllipticError::DegenerateModulus(m.value()));
    }
    let mv = m.value();
    if phi == 0.0 {
        return Ok(0.0);
    }
    if mv == 0.0 {
        return Ok(phi);
    }
    // Periodicity: F(φ + nπ | m) = F(φ|m) + 2nK(m).
    let n_half_turns = (phi / PI).round();
    let phi_red = phi - n_half_turns * PI;
    let offset = if n_half_turns != 0.0 {
        2.0 * n_half_turns * complete_k(m)?
    } else {
        0.0
    };
    if phi_red == 0.0 {
        return Ok(offset);
    }
    // F(±π/2) = ±K exactly; the tangent update below cannot represent
    // the endpoint.
    if (phi_red.abs() - FRAC_PI_2).abs() < 1e-15 {
        return Ok(offset + phi_red.signum() * complete_k(m)?);
    }

    let mut a = 1.0_f64;
    let mut b = (1.0 - mv).sqrt();
    let mut c = mv.sqrt();
    let mut t = phi_red.tan();
    let mut amp = phi_red;
    let mut unwrap = (phi_red / PI).round();
    let mut doublings = 1.0_f64;
    while (c / a).abs() > f64::EPSILON {
        let ratio = b / a;
        amp += (t * ratio).atan() + unwrap * PI;
        t = t * (1.0 + ratio) / (1.0 - ratio * t * t);
        c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        doublings *= 2.0;
        unwrap = (amp / PI).round();
    }
    Ok(offset + (t.atan() + unwrap * PI) / (doublings * a))
}
