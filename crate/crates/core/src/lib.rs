//! Stokes-tensor representation of multiqubit density operators and the
//! discrete reflection symmetries that act on it.
//!
//! The crate is organised bottom-up:
//!
//! * [`repr`] converts between Hermitian matrices, Stokes tensors and real
//!   density matrices, and provides tensor products, partial traces and the
//!   bipartite reshuffle.
//! * [`spectral`] holds the dense Jacobi eigensolver and SVD.
//! * [`maps`] builds sign masks, local orthogonal actions and the
//!   operator-sum equivalents of the reflections.
//! * [`entanglement`] runs the separability and feasibility criteria.
//! * [`states`] constructs canonical and random states.
//! * [`io`] reads and writes the JSON state / mask formats.
//! * [`suite`] is the seeded randomized invariant harness.

pub mod entanglement;
pub mod error;
pub mod io;
pub mod maps;
pub mod repr;
pub mod spectral;
pub mod states;
pub mod suite;

pub use entanglement::{CriterionReport, Verdict};
pub use error::{Error, Result};
pub use maps::{LocalOrthogonalMap, MapClassification, Orientation, SignMask};
pub use repr::{
    DensityState, HermitianOperator, MultiIndex, QubitSet, RealDensityMatrix, StokesTensor,
};
pub use spectral::Spectrum;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense real matrix.
pub type RMatrix = nalgebra::DMatrix<f64>;

/// Largest supported qubit count.
pub const MAX_QUBITS: usize = 6;

/// Default tolerance for Hermiticity and trace checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default PSD tolerance: a matrix is PSD when its smallest eigenvalue is
/// at least `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-10;
