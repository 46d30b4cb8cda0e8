//! Laplacian dynamics on weighted directed graphs.
//!
//! The pipeline: parse a digraph, build the adjacency bundle (Q, D, S),
//! classify its structure (SCCs, condensation, reaches/cabals), construct a
//! Laplacian (`D - Q`, `I - S`, or `E⁺ - ES`), extract the kernel bases and
//! the projector Γ, and use Γ to predict the asymptotics of consensus
//! (`ẋ = -Lx`, `x ← Sx`) and diffusion (`ṗ = -pL`, `p ← pS`) — verified by
//! integration, Cesàro averaging, spectra, and random-walk statistics.
//!
//! All numerics are generic over the scalar via [`Real`] (`f32` or `f64`);
//! concrete aliases for the f64 lane live at the crate root.

pub mod dynamics;
pub mod error;
pub mod graph;
pub mod kernels;
pub mod laplacian;
pub mod linalg;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod spectrum;
pub mod taxonomy;

pub use error::{Error, Result};
pub use scalar::{real, tolerance, Real};

pub use dynamics::{
    absorption_probabilities, cesaro_matrix, hitting_times, matrix_exponential,
    monte_carlo_absorption, monte_carlo_hitting_time, simulate_continuous, simulate_discrete,
    time_one_map, Flow, HittingTimeSolution, SimMode, TrajectoryRecord,
};
pub use graph::{build_adjacency, AdjacencyBundle, Digraph, Edge};
pub use kernels::{gamma_matrix, kernel_basis, left_kernel, right_kernel, KernelBasis};
pub use laplacian::{
    block_triangularize, comb_laplacian, generalized_laplacian, rw_laplacian,
    BlockTriangularization, DiagonalBlock, LaplacianKind, LaplacianMatrix,
};
pub use matrix::{vec_inf_diff, Matrix};
pub use report::{analyze, matrix_to_csv, to_json, trajectory_to_csv, AnalysisReport};
pub use spectrum::{
    eigenvalues, geometric_multiplicity, gersgorin_check, rank, zero_multiplicity,
    GersgorinDisk, GersgorinReport, Spectrum,
};
pub use taxonomy::{
    condensation, connectivity_class, reach_decomposition, weak_components, Condensation,
    Connectivity, Reach, ReachDecomposition,
};

/// f64 lane aliases (the CLI and most callers).
pub type Digraph64 = Digraph<f64>;
pub type AdjacencyBundle64 = AdjacencyBundle<f64>;
pub type Matrix64 = Matrix<f64>;
pub type LaplacianMatrix64 = LaplacianMatrix<f64>;
pub type KernelBasis64 = KernelBasis<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type TrajectoryRecord64 = TrajectoryRecord<f64>;

/// f32 lane aliases.
pub type Digraph32 = Digraph<f32>;
pub type AdjacencyBundle32 = AdjacencyBundle<f32>;
pub type Matrix32 = Matrix<f32>;
pub type LaplacianMatrix32 = LaplacianMatrix<f32>;
pub type KernelBasis32 = KernelBasis<f32>;
pub type Spectrum32 = Spectrum<f32>;
pub type TrajectoryRecord32 = TrajectoryRecord<f32>;
