//! Entanglement-aware renormalization for spin-1/2 chains.
//!
//! Dense exact diagonalization, bipartite entanglement measures and three
//! block-renormalization schemes: Wilson's numerical RG, the DMRG
//! density-matrix projection and the entanglement-maximizing projection
//! (EMP), which picks the retained subspace that keeps the most
//! entanglement between a block and its environment.
//!
//! Every numerical routine is generic over [`Real`] (`f64` or `f32`). The
//! aliases below fix the scalar to `f64`, which is what the CLI uses.
//!
//! ```
//! use entren::lattice::build_hamiltonian;
//! use entren::renorm::{dmrg_projection, truncation_error};
//! use entren::states::{ground_state, qubit_dims, Bipartition};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let spec = entren::ModelSpec::heisenberg(8, 1.0);
//! let g = ground_state(&build_hamiltonian(&spec)?, qubit_dims(8))?;
//! let split = Bipartition::contiguous(4, 8)?;
//! let p = dmrg_projection(&g.state, &split, 4)?;
//! let err = truncation_error(&p.isometry, &g.state, &split)?;
//! assert!((err - (1.0 - p.retained())).abs() < 1e-10);
//! # Ok(())
//! # }
//! ```

pub mod densemath;
pub mod entangle;
pub mod expcli;
pub mod lattice;
pub mod renorm;
pub mod scalar;
pub mod states;

pub use scalar::Real;

pub type ComplexMatrix = densemath::ComplexMatrix<f64>;
pub type ComplexMatrix32 = densemath::ComplexMatrix<f32>;
pub type PureState = states::PureState<f64>;
pub type PureState32 = states::PureState<f32>;
pub type DensityMatrix = states::DensityMatrix<f64>;
pub type DensityMatrix32 = states::DensityMatrix<f32>;
pub type ModelSpec = lattice::ModelSpec<f64>;
pub type ModelSpec32 = lattice::ModelSpec<f32>;
pub type SchmidtDecomposition = entangle::SchmidtDecomposition<f64>;
pub type Isometry = renorm::Isometry<f64>;
pub type Isometry32 = renorm::Isometry<f32>;
