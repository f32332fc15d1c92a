//! Executable domain theory over the rational upper limit topology.
//!
//! The crate provides exact rational interval boxes, the ring of half-open
//! rational opens of a bounded carrier, finite Stone-duality round trips,
//! principal ideals of the ring, step functions with two independent
//! order and way-below procedures, the restriction/envelope Galois
//! connection, and a validated Euler solver whose enclosures are step
//! functions on half-open partition pieces.

pub mod error;
pub mod galois;
pub mod interval_domain;
pub mod ivp;
pub mod lattice_duality;
pub mod open_ring;
pub mod rational;
pub mod sample;
pub mod spectral_points;
pub mod step_functions;

pub use error::{Error, Result};
pub use interval_domain::{
    box_join, box_leq, box_meet, box_way_below, box_width, BcDomain, Interval, IntervalBox, Width,
};
pub use open_ring::{canonicalize, cells, Carrier, HalfOpenPiece, Lower, OpenSet};
pub use rational::{format_rational, parse_rational, Rational};
