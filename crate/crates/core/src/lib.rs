//! Stationary landing densities of particles carried by a planar random
//! flight with finite speed, with Monte Carlo cross-checks.
//!
//! - [`specfun`]: gamma, beta, Bessel K/I and ₁F₂ evaluators.
//! - [`flight`]: the planar random flight, its transition density and path sampler.
//! - [`lifetime`]: exponential and gamma lifetime laws.
//! - [`stationary`]: stationary densities by quadrature and series, mass and disk concentration.
//! - [`mc_oracle`]: simulated landings and comparison against the analytic densities.
//! - [`cli`]: the `flightfall` command line front end.

pub mod cli;
pub mod error;
pub mod flight;
pub mod lifetime;
pub mod mc_oracle;
pub mod quadrature;
pub mod rng;
pub mod specfun;
pub mod stationary;
pub mod summation;

pub use error::{Error, Result};
pub use flight::{DirectionLaw, FlightParams, FlightPath};
pub use lifetime::LifetimeSpec;
pub use quadrature::QuadratureSettings;
pub use stationary::{Method, StationaryModel};
