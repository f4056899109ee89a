//! Momentum-map toolkit for multipartite quantum states.
//!
//! Pure states of a composite system live in a projective space carrying a
//! symplectic structure, and the local unitary group acts on it with a
//! momentum map: the map sending a state to its collection of shifted
//! one-particle reduced density matrices `m_k = ρ_k − I/N_k`. This crate
//! turns that observation into a numerical toolbox:
//!
//! * [`state`] — tensor states over distinguishable, bosonic and fermionic
//!   sectors, partial traces, local operator action.
//! * [`momentum`] — the momentum map, its norm, the total-variance
//!   relation, the `Ψ` map into the positive Weyl chamber, Kirwan-polytope
//!   membership for qubits, and reduced-space dimension formulas.
//! * [`numkit`] — shared numerical kernel: Hermitian eigendecomposition,
//!   minimum-norm point of a convex hull, finite-difference gradients,
//!   tangent projection on projective space.
//! * [`atlas`] — the weight set of the torus action, minimal weight
//!   combinations, critical subspaces `Z_β` and witness states.
//! * [`flow`] — gradient flow of `−‖μ‖²`, null-cone tests, SLOCC stratum
//!   assignment, entanglement-polytope sampling, three-qubit invariants.
//! * [`lu`] — local-unitary equivalence decisions where reduced spectra
//!   suffice, and the necessary spectra test elsewhere.
//! * [`orbits`] — isospectral orbits of mixed states: orbit dimension,
//!   symplectic-form rank, degeneracy, Euler characteristic, CC/CQ tests.
//! * [`catalog`] — named reference states (Bell, GHZ, W, the nine
//!   four-qubit critical states) and random-state constructors.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so the API is safe to drive from parallel callers.
//!
//! ```
//! use momap::catalog;
//! use momap::momentum::{momentum, norm_mu_squared};
//!
//! let ghz = catalog::ghz(4).unwrap();
//! // GHZ sits in the zero fiber of the momentum map.
//! assert!(norm_mu_squared(&ghz) < 1e-12);
//! for block in momentum(&ghz).blocks() {
//!     assert!(block.norm() < 1e-8);
//! }
//! ```

pub mod atlas;
pub mod catalog;
pub mod error;
pub mod flow;
pub mod io;
pub mod lu;
pub mod momentum;
pub mod numkit;
pub mod orbits;
pub mod state;

pub use error::{Error, Result};
pub use numkit::Tolerances;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Dense complex vector (state amplitudes, tangent vectors).
pub type CVector = nalgebra::DVector<C64>;

/// Dense complex matrix (operators, density matrices).
pub type CMatrix = nalgebra::DMatrix<C64>;
