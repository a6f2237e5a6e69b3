//! Exact logical states prepared by transversal injection on the unrotated
//! surface code.
//!
//! Every data qubit starts in `alpha|0> + beta|1>`; one round of stabiliser
//! measurements heralds a trajectory (X outcomes, then Z outcomes) and leaves
//! an encoded logical state whose amplitudes are integer polynomials in
//! `alpha` and `beta`. This crate computes those polynomials exactly,
//! evaluates them, and checks them against a dense statevector simulation.
//!
//! ```
//! use ti_core::{build_layout, project, Engine, Trajectory};
//!
//! let layout = build_layout(2).unwrap();
//! let t = Trajectory::parse(&layout, "1001").unwrap();
//! let r = project(&layout, &t, Engine::Solver).unwrap();
//! assert_eq!(r.logical.a.coeffs(), &[0, 1, 1, -1, -1, 0]);
//! ```

pub mod amplitude;
pub mod bitkit;
pub mod catalog;
pub mod cli;
pub mod coset;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod projector;

pub use amplitude::{bloch, AmplitudePoly, InjectionState, LogicalState};
pub use bitkit::{BitWord, Gf2Solver};
pub use catalog::CatalogEntry;
pub use coset::{coset_representatives, enumerate_coset, Frame, Trajectory};
pub use error::{Error, Result};
pub use lattice::{build_layout, validate_layout, CodeLayout};
pub use projector::{project, Engine, ProjectionResult, Projector};
