//! Physical-transformer numerics.
//!
//! The crate is organised by scale:
//!
//! - [`spin`]: attention heads, CTM neurons and FFN baths as interacting unit spins.
//! - [`manifold`]: decoder-induced pullback metrics, geodesic Hamiltonian flow,
//!   geodesic shooting and Jacobi-field propagation.
//! - [`control`]: HJB optimal control on the latent manifold.
//! - [`info_phase`]: entropy/effort portraits and empirical vector fields.
//! - [`workspace`]: typed episodic workspace graphs and their losses.
//! - [`planner`]: weighted digraphs, Dijkstra, and latent state graphs.
//! - [`experiments`]: the three toy experiments and their table emitters.

// `!(x > 0.0)` checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod error;
pub mod experiments;
pub mod fmt;
pub mod info_phase;
pub mod manifold;
pub mod numdiff;
pub mod planner;
pub mod spin;
pub mod workspace;

pub use error::{Error, Result};
