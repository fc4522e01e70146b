//! Sharp-interface copolymer-homopolymer blend energies.
//!
//! The energy of a pair of disjoint characteristic functions (u, v) with
//! equal mass is the surface-tension-weighted measure of its three interface
//! types plus the squared H^-1 norm of u - v. This crate evaluates that
//! energy exactly for 1-D block structures (line and torus) and spherically
//! symmetric structures in dimension N >= 2, solves for stationary layer
//! widths, traces energy-per-mass envelopes over layer patterns, and checks
//! the interpolation and cutoff-extension bounds that control the energy in
//! higher dimensions.
//!
//! Module map:
//! - [`params`]: coefficient algebra (c0, cu, cv) <-> surface tensions.
//! - [`config`]: validated block configurations and their interfaces.
//! - [`potential`]: exact piecewise-quadratic Poisson potentials in 1-D.
//! - [`energy`]: full 1-D evaluation, layer families, widths, lower bound.
//! - [`stationary`]: stationarity residuals, the width solver, split/join.
//! - [`sweep`]: pattern enumeration, energy-per-mass curves, envelopes.
//! - [`radial`]: spherical shells, micelles, curvature expansions.
//! - [`bounds`]: mollifier constants, interpolation inequalities, planar
//!   cutoff extensions with Green-kernel quadrature.
//! - [`verify`]: the self-check suite behind `sharpblend verify`.

pub mod bounds;
pub mod config;
pub mod energy;
pub mod numeric;
pub mod params;
pub mod potential;
pub mod radial;
pub mod stationary;
pub mod sweep;
pub mod verify;
