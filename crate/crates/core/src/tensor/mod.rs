//! Dense complex linear algebra over labeled composite Hilbert spaces:
//! state vectors, density operators, tensor products, partial traces,
//! Hermitian eigendecomposition, and von Neumann entropy.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything here is safe to use from multiple threads.

mod density;
mod eig;
mod space;
mod state;

pub use density::{DensityOperator, POSITIVITY_TOL, TRACE_TOL};
pub use eig::{hermitian_eigen, hermitian_eigenvalues, hermiticity_deviation, HERMITICITY_TOL};
pub use space::{CompositeSpace, SubsystemLabel};
pub use state::{check_unitary, StateVector, NORM_TOL, UNITARITY_TOL};
