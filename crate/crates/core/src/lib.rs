//! Heat-trace invariants of constant-curvature geodesic polygons and closed
//! orbisurfaces.
//!
//! * [`numkit`]: exact rationals, Bernoulli numbers, `PiPoly` values
//! * [`geometry`]: polygon, orbisurface and series descriptions
//! * [`invariants`]: closed-form heat coefficients and series assembly
//! * [`trigsums`]: finite cosecant-power sums and their identities
//! * [`spectra`]: explicit spectra and certified heat traces
//! * [`fitting`]: least-squares extraction of expansion coefficients
//! * [`inverse`]: recovery of geometry from a series
//! * [`specimens`]: seeded random test geometries and round trips
//! * [`suites`]: verification suites with residuals and tolerances
//! * [`wedgekernel`]: hyperbolic kernels, Legendre functions, wedge traces
//! * [`cli`]: the `specgeo` command line
//!
//! Runnable examples live in `examples/`; list them with
//! `cargo run --example <name>`.

pub mod cli;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod invariants;
pub mod inverse;
pub mod numkit;
pub mod specimens;
pub mod spectra;
pub mod suites;
pub mod trigsums;
pub mod wedgekernel;

pub use error::{Error, Result};
pub use geometry::{Angle, AsymptoticSeries, OrbisurfaceSpec, PolygonSpec};
pub use numkit::{PiPoly, Rational, Scalar};
