//! Simulation engine for an adiabatic two-qubit phase gate between electron
//! spin qubits held in two coupled quantum dots.
//!
//! Each dot holds one resident electron whose spin is the qubit. A chirped,
//! circularly polarized laser pulse drives spin-to-trion transitions; the
//! trions on neighbouring dots interact through Förster transfer and a static
//! biexcitonic shift, and following the dressed eigenstates adiabatically
//! imprints a state-dependent phase.
//!
//! The crate is `no_std` (with `alloc`). Modules, bottom-up:
//!
//! - [`linalg`]: 16×16 operators, state vectors and a Hermitian eigensolver.
//! - [`basis`]: the fixed 16-state two-dot basis, projectors and manifolds.
//! - [`luttinger`]: heavy/light hole mixing from the Luttinger-Kohn model.
//! - [`foerster`]: angular-momentum selection rules and trion transfer.
//! - [`drive`]: pulse shapes and the rotating-frame Hamiltonian.
//! - [`propagator`]: fixed-step RK4 integration, phases, θ and leakage.
//! - [`estimates`]: Landau-Zener and phonon estimates.
//! - [`optimize`]: Nelder-Mead search over pulse parameters.
//!
//! Units: energies in meV, times in ps, lengths in nm.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod drive;
pub mod error;
pub mod estimates;
pub mod foerster;
pub mod linalg;
pub mod luttinger;
pub mod optimize;
pub mod presets;
pub mod propagator;
pub mod units;

pub use error::{Error, Result};
pub use linalg::{Operator16, State16, C64};
