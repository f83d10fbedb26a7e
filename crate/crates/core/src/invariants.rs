//! The two constants of motion and their planar images.
//!
//! The spherical problem conserves the Hamiltonian
//!
//! ```text
//! H = |L|²/(2R²) − (1/R) [ γ₁ d₁/√(R²−d₁²) + γ₂ d₂/√(R²−d₂²) ]
//! d₁ = σZ + σ̄X,   d₂ = σZ − σ̄X,   L = X × P
//! ```
//!
//! and the second invariant
//!
//! ```text
//! Ω = (L_X² + σ²L_Y²)/(2R²) − (σ/R) [ γ₁ Z/√(R²−d₁²) + γ₂ Z/√(R²−d₂²) ].
//! ```
//!
//! All invariant values handled by the library are nondimensional: the
//! physical energies are divided by (γ₁+γ₂)/R, matching the scaling in
//! which the separation constant is G = H − Ω and the projected planar
//! problems see the invariants as h = tan θ_f · Ω and g = cot θ_f · G.

use crate::geometry::{cross, dot, norm3, ProblemParams, SpherePoint};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvariantError {
    #[error("state off the sphere: |X|^2 - R^2 = {0:e}")]
    OffSphere(f64),
    #[error("velocity not tangent: X.v = {0:e}")]
    NotTangent(f64),
    #[error("state on a great-circle singularity of the potential")]
    SingularPoint,
}

/// Position and velocity of the test mass, in physical units
/// (position on the sphere of radius R, velocity tangent to it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianState {
    pub position: SpherePoint,
    pub velocity: [f64; 3],
}

impl CartesianState {
    /// Validating constructor: position on the sphere to 1e-12·R² and
    /// velocity tangent to 1e-10 relative.
    pub fn new(
        position: SpherePoint,
        velocity: [f64; 3],
        p: &ProblemParams,
    ) -> Result<Self, InvariantError> {
        let residual = position.sphere_residual(p);
        if residual.abs() > 1e-12 * p.radius().powi(2) {
            return Err(InvariantError::OffSphere(residual));
        }
        let radial = dot(position.to_array(), velocity);
        let speed = norm3(velocity);
        if radial.abs() > 1e-10 * p.radius() * speed.max(1e-300) {
            return Err(InvariantError::NotTangent(radial));
        }
        Ok(Self { position, velocity })
    }

    /// Unchecked constructor for callers that already guarantee the
    /// constraints (integrator output, analytic samples).
    pub fn new_unchecked(position: SpherePoint, velocity: [f64; 3]) -> Self {
        Self { position, velocity }
    }
}

/// The conserved pair (Ω, G), stored nondimensionalized. H = Ω + G.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantPair {
    omega: f64,
    g: f64,
}

/// The same invariants in the chart of the projected planar problems:
/// h = tan θ_f · Ω is the planar energy and g = cot θ_f · G the planar
/// separation constant. All bifurcation-diagram figures use this chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarInvariants {
    pub h: f64,
    pub g: f64,
}

impl InvariantPair {
    pub fn from_omega_g(omega: f64, g: f64) -> Self {
        Self { omega, g }
    }

    /// Reconstruct the spherical invariants from the planar chart;
    /// exact inverse of `to_planar`.
    pub fn from_planar(planar: PlanarInvariants, p: &ProblemParams) -> Self {
        Self {
            omega: planar.h * p.sigma() / p.sigma_bar(),
            g: planar.g * p.sigma_bar() / p.sigma(),
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Separation constant G = H − Ω.
    pub fn g_const(&self) -> f64 {
        self.g
    }

    /// Nondimensional energy H = Ω + G.
    pub fn hamiltonian_value(&self) -> f64 {
        self.omega + self.g
    }

    pub fn to_planar(&self, p: &ProblemParams) -> PlanarInvariants {
        PlanarInvariants {
            h: self.omega * p.sigma_bar() / p.sigma(),
            g: self.g * p.sigma() / p.sigma_bar(),
        }
    }
}

/// Scale factor from nondimensional energy back to physical units.
pub fn energy_unit(p: &ProblemParams) -> f64 {
    p.strength() / p.radius()
}

fn potential_denominators(
    pt: &SpherePoint,
    p: &ProblemParams,
) -> Result<(f64, f64, f64, f64), InvariantError> {
    let d1 = p.sigma() * pt.z + p.sigma_bar() * pt.x;
    let d2 = p.sigma() * pt.z - p.sigma_bar() * pt.x;
    let r2 = p.radius() * p.radius();
    let s1sq = r2 - d1 * d1;
    let s2sq = r2 - d2 * d2;
    if s1sq <= 1e-14 * r2 || s2sq <= 1e-14 * r2 {
        return Err(InvariantError::SingularPoint);
    }
    Ok((d1, d2, s1sq.sqrt(), s2sq.sqrt()))
}

/// Nondimensional Hamiltonian of a state.
pub fn hamiltonian(state: &CartesianState, p: &ProblemParams) -> Result<f64, InvariantError> {
    let (d1, d2, s1, s2) = potential_denominators(&state.position, p)?;
    let l = cross(state.position.to_array(), state.velocity);
    let kinetic = dot(l, l) / (2.0 * p.radius() * p.radius());
    let potential = -(p.gamma1() * d1 / s1 + p.gamma2() * d2 / s2) / p.radius();
    Ok((kinetic + potential) / energy_unit(p))
}

/// Nondimensional second invariant Ω of a state.
pub fn second_invariant(state: &CartesianState, p: &ProblemParams) -> Result<f64, InvariantError> {
    let (_, _, s1, s2) = potential_denominators(&state.position, p)?;
    let l = cross(state.position.to_array(), state.velocity);
    let rotational =
        (l[0] * l[0] + p.sigma() * p.sigma() * l[1] * l[1]) / (2.0 * p.radius() * p.radius());
    let z = state.position.z;
    let potential = -p.sigma() / p.radius() * (p.gamma1() * z / s1 + p.gamma2() * z / s2);
    Ok((rotational + potential) / energy_unit(p))
}

/// Both invariants of a state at once, as an `InvariantPair`
/// (G is taken as H − Ω, which the pair then satisfies exactly).
pub fn invariants_of_state(
    state: &CartesianState,
    p: &ProblemParams,
) -> Result<InvariantPair, InvariantError> {
    let h = hamiltonian(state, p)?;
    let omega = second_invariant(state, p)?;
    Ok(InvariantPair::from_omega_g(omega, h - omega))
}
