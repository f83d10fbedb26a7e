//! Analytic orbit engine for the problem of two fixed Newtonian centers
//! on the sphere S².
//!
//! The library evaluates exact Jacobi-elliptic orbit solutions for every
//! orbit family of the spherical two-center problem, classifies the global
//! bifurcation diagram in the plane of the two constants of motion, finds
//! closed orbits through period commensurability, and cross-checks all of
//! it against an independent numerical integrator.
//!
//! Module map:
//! - [`elliptic`] — complete/incomplete elliptic integrals of the first
//!   kind and the Jacobi functions sn, cn, dn.
//! - [`geometry`] — coordinate systems on S² (Cartesian, sphero-conical),
//!   gnomonic projection to the tangent planes, planar elliptic
//!   coordinates and the map gluing them together.
//! - [`invariants`] — the two constants of motion and the spherical ↔
//!   planar invariant charts.
//! - [`bifurcation`] — ramification points, critical curves, orbit-family
//!   classification and diagram grids.
//! - [`orbit`] — the closed-form orbit solutions, periods, sampling and
//!   physical-time recovery.
//! - [`oracle`] — numerical integration of the same dynamics by two
//!   independent routes, with deviation reports.
//! - [`closed`] — closed-orbit search via the period commensurability
//!   condition p·T_u = q·T_v.
//!
//! A minimal round trip — classify an invariant pair, build the orbit,
//! evaluate a point and read off its periods:
//!
//! ```
//! use dicentra::geometry::{ProblemParams, Sign};
//! use dicentra::invariants::{InvariantPair, PlanarInvariants};
//! use dicentra::{bifurcation, orbit};
//!
//! let params = ProblemParams::from_gamma(1.0, std::f64::consts::FRAC_PI_6, 1.0 / 3.0)?;
//! let inv = InvariantPair::from_planar(PlanarInvariants { h: 0.8, g: 0.2 }, &params);
//!
//! let class = bifurcation::classify(&inv, &params)?.class().unwrap();
//! assert_eq!(class.family.label(), "t_ds");
//!
//! let spec = orbit::build_spec(&inv, &params, (1.0, 2.0), (Sign::Plus, Sign::Plus, Sign::Plus))?;
//! let sample = spec.evaluate(3.0);
//! assert!(sample.point.sphere_residual(&params).abs() < 1e-10);
//! let (t_u, t_v) = spec.periods();
//! assert!(t_u > 0.0 && t_v > 0.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod bifurcation;
pub mod closed;
pub mod elliptic;
pub mod geometry;
pub mod invariants;
pub mod oracle;
pub mod orbit;

pub use bifurcation::{
    BifurcationError, BranchPoints, ChartRegion, Classification, CriticalCurves, CurveId, Family,
    GridCell, OrbitClass, Regime, RootPair, Subtype,
};
pub use closed::{
    ClosedOrbitError, CommensurabilityProblem, CommensurabilitySolution, FixedInvariant,
};
pub use elliptic::{EllipticError, EllipticParameter, JacobiTriple};
pub use geometry::{
    GeometryError, Hemisphere, PlanarElliptic, ProblemParams, Sign, SpherePoint, SpheroConical,
};
pub use invariants::{CartesianState, InvariantError, InvariantPair, PlanarInvariants};
pub use oracle::{
    DeviationReport, IntegratorConfig, IntegratorMethod, OracleError, SeparatedTrajectory,
};
pub use orbit::{OrbitError, OrbitSpec, SolutionBlock, SphereSample};
