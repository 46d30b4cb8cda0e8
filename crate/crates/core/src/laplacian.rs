//! Laplacian construction: combinatorial `D - Q`, random-walk `I - S`, the
//! generalized family `E⁺ - E·S`, and block triangularization along the
//! condensation order.

use crate::error::{Error, Result};
use crate::graph::AdjacencyBundle;
use crate::matrix::Matrix;
use crate::scalar::{tolerance, Real};
use crate::taxonomy::Condensation;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianKind {
    Comb,
    Rw,
    Generalized,
}

impl std::fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LaplacianKind::Comb => f.write_str("comb"),
            LaplacianKind::Rw => f.write_str("rw"),
            LaplacianKind::Generalized => f.write_str("generalized"),
        }
    }
}

/// A (generalized) Laplacian `M = diag(e_plus) - diag(e) · S`, tagged by kind
/// and keeping a handle on the bundle it was built from.
#[derive(Debug, Clone)]
pub struct LaplacianMatrix<T> {
    pub kind: LaplacianKind,
    pub matrix: Matrix<T>,
    pub e_plus: Vec<T>,
    pub e: Vec<T>,
    bundle: Arc<AdjacencyBundle<T>>,
}

impl<T: Real> LaplacianMatrix<T> {
    pub fn bundle(&self) -> &AdjacencyBundle<T> {
        &self.bundle
    }

    pub fn n(&self) -> usize {
        self.matrix.n_rows()
    }

    /// Strict generalized means `e_plus != e` somewhere (tolerance 1e-12),
    /// i.e. the matrix is not an actual Laplacian.
    pub fn is_strict(&self) -> bool {
        let tol = tolerance::<T>(1e-12);
        self.e_plus
            .iter()
            .zip(&self.e)
            .any(|(&ep, &e)| (ep - e).abs() > tol)
    }
}

fn assemble<T: Real>(
    bundle: &Arc<AdjacencyBundle<T>>,
    kind: LaplacianKind,
    e_plus: Vec<T>,
    e: Vec<T>,
) -> LaplacianMatrix<T> {
    let n = bundle.n();
    let s = bundle.s();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        let row = m.row_mut(i);
        for (j, v) in row.iter_mut().enumerate() {
            *v = -e[i] * s[(i, j)];
        }
        row[i] = row[i] + e_plus[i];
    }
    LaplacianMatrix {
        kind,
        matrix: m,
        e_plus,
        e,
        bundle: Arc::clone(bundle),
    }
}

/// Combinatorial Laplacian `L = D - Q`.
pub fn comb_laplacian<T: Real>(bundle: &Arc<AdjacencyBundle<T>>) -> LaplacianMatrix<T> {
    let d = bundle.d().to_vec();
    assemble(bundle, LaplacianKind::Comb, d.clone(), d)
}

/// Random-walk Laplacian `L = I - S`.
pub fn rw_laplacian<T: Real>(bundle: &Arc<AdjacencyBundle<T>>) -> LaplacianMatrix<T> {
    let ones = vec![T::one(); bundle.n()];
    assemble(bundle, LaplacianKind::Rw, ones.clone(), ones)
}

/// Generalized Laplacian `M = diag(e_plus) - diag(e) · S`; requires
/// `e_plus >= e >= 0` entry-wise.
pub fn generalized_laplacian<T: Real>(
    bundle: &Arc<AdjacencyBundle<T>>,
    e_plus: &[T],
    e: &[T],
) -> Result<LaplacianMatrix<T>> {
    let n = bundle.n();
    if e_plus.len() != n || e.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: e_plus.len().max(e.len()),
        });
    }
    for i in 0..n {
        if e[i] < T::zero() || e_plus[i] < e[i] {
            return Err(Error::ViolatesDominance { vertex: i + 1 });
        }
    }
    Ok(assemble(
        bundle,
        LaplacianKind::Generalized,
        e_plus.to_vec(),
        e.to_vec(),
    ))
}

/// One diagonal block of the triangularized Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalBlock<T> {
    /// Vertices (1-based, ascending) of the SCC this block covers.
    pub vertices: Vec<usize>,
    pub matrix: Matrix<T>,
    /// True when the block has zero row sums, i.e. is an actual Laplacian.
    /// Such blocks correspond exactly to the cabals.
    pub is_actual: bool,
}

/// Result of permuting a Laplacian into lower block triangular form.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTriangularization<T> {
    /// `permutation[new] = old` vertex id (1-based): the vertex order that
    /// realizes the topological SCC order, ascending ids within an SCC.
    pub permutation: Vec<usize>,
    /// The permuted matrix `P M Pᵀ`.
    pub matrix: Matrix<T>,
    pub blocks: Vec<DiagonalBlock<T>>,
}

/// Permute a Laplacian by the condensation's topological order. The result
/// is lower block triangular; each diagonal block is tagged actual (zero row
/// sums) or strict generalized.
pub fn block_triangularize<T: Real>(
    l: &LaplacianMatrix<T>,
    c: &Condensation,
) -> BlockTriangularization<T> {
    let n = l.n();
    let mut permutation = Vec::with_capacity(n);
    for &comp in &c.order {
        permutation.extend_from_slice(&c.sccs[comp]);
    }
    debug_assert_eq!(permutation.len(), n);

    let mut permuted = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            permuted[(i, j)] = l.matrix[(permutation[i] - 1, permutation[j] - 1)];
        }
    }

    let tol = tolerance::<T>(1e-12);
    let mut blocks = Vec::with_capacity(c.order.len());
    let mut offset = 0;
    for &comp in &c.order {
        let vertices = c.sccs[comp].clone();
        let size = vertices.len();
        let idx: Vec<usize> = (offset..offset + size).collect();
        let matrix = permuted.submatrix(&idx, &idx);
        let is_actual = matrix.row_sums().iter().all(|s| s.abs() <= tol);
        blocks.push(DiagonalBlock {
            vertices,
            matrix,
            is_actual,
        });
        offset += size;
    }

    BlockTriangularization {
        permutation,
        matrix: permuted,
        blocks,
    }
}
