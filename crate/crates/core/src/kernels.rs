//! Kernel bases of an actual Laplacian: the right vectors γ_m (one per
//! reach, 1 on the exclusive part, solved on the common part), the left
//! vectors γ̄_m (supported on the cabals), and the asymptotics projector
//! Γ = Σ_m γ_m ⊗ γ̄_m.

use crate::error::{Error, Result};
use crate::laplacian::LaplacianMatrix;
use crate::linalg::lu_solve;
use crate::matrix::Matrix;
use crate::scalar::{real, tolerance, Real};
use crate::taxonomy::ReachDecomposition;

/// The k right kernel vectors and k left kernel vectors of a Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBasis<T> {
    /// γ_m as length-n vectors, in reach order.
    pub gamma: Vec<Vec<T>>,
    /// γ̄_m as length-n vectors (row vectors), in reach order.
    pub gamma_bar: Vec<Vec<T>>,
}

impl<T: Real> KernelBasis<T> {
    pub fn k(&self) -> usize {
        self.gamma.len()
    }

    pub fn n(&self) -> usize {
        self.gamma.first().map_or(0, Vec::len)
    }

    /// The n×k matrix whose columns are the γ_m.
    pub fn h0(&self) -> Matrix<T> {
        let (n, k) = (self.n(), self.k());
        let mut m = Matrix::zeros(n, k);
        for (j, g) in self.gamma.iter().enumerate() {
            for (i, &v) in g.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// The k×n matrix whose rows are the γ̄_m.
    pub fn h0_bar(&self) -> Matrix<T> {
        Matrix::from_rows(&self.gamma_bar)
    }
}

fn require_actual<T: Real>(l: &LaplacianMatrix<T>) -> Result<()> {
    if l.is_strict() {
        return Err(Error::WrongLaplacianKind { expected: "actual" });
    }
    Ok(())
}

/// Right kernel vectors: for each reach, set 1 on the exclusive part, 0 off
/// the reach, and solve `L_CC x = -L_CH 1` on the common part.
pub fn right_kernel<T: Real>(
    l: &LaplacianMatrix<T>,
    rd: &ReachDecomposition,
) -> Result<Vec<Vec<T>>> {
    require_actual(l)?;
    let n = l.n();
    let mut out = Vec::with_capacity(rd.k());
    for (m, reach) in rd.reaches.iter().enumerate() {
        let mut gamma = vec![T::zero(); n];
        for &v in &reach.exclusive {
            gamma[v - 1] = T::one();
        }
        let common: Vec<usize> = reach.common.iter().map(|&v| v - 1).collect();
        if !common.is_empty() {
            let exclusive: Vec<usize> = reach.exclusive.iter().map(|&v| v - 1).collect();
            let l_cc = l.matrix.submatrix(&common, &common);
            let l_ch = l.matrix.submatrix(&common, &exclusive);
            let rhs: Vec<T> = l_ch.rows().map(|r| -r.iter().copied().sum::<T>()).collect();
            let x = lu_solve(&l_cc, &rhs).ok_or(Error::SingularCommonBlock { reach: m + 1 })?;
            let residual: T = l_cc
                .mul_vec(&x)
                .iter()
                .zip(&rhs)
                .map(|(&a, &b)| (a - b).abs())
                .fold(T::zero(), T::max);
            if residual > tolerance::<T>(1e-9) {
                return Err(Error::SingularCommonBlock { reach: m + 1 });
            }
            for (idx, &c) in common.iter().enumerate() {
                gamma[c] = x[idx];
            }
        }
        out.push(gamma);
    }
    Ok(out)
}

/// Stationary row vector of a small irreducible row-stochastic block.
///
/// Power iteration at tolerance 1e-13 (up to 100000 iterations) with an
/// early hand-off to the exact bordered solve when no progress is being
/// made — periodic cabals (any cycle) never converge under plain iteration.
fn stationary_vector<T: Real>(s_bb: &Matrix<T>, reach: usize) -> Result<Vec<T>> {
    let b = s_bb.n_rows();
    let uniform = T::one() / T::from_usize(b).unwrap();
    let mut v = vec![uniform; b];
    let tol = tolerance::<T>(1e-13);
    let quarter = real::<T>(0.25);
    let mut checkpoint = T::infinity();

    for it in 0..100_000usize {
        let mut next = s_bb.vec_mul(&v);
        let sum: T = next.iter().copied().sum();
        for x in &mut next {
            *x = *x / sum;
        }
        let diff = next
            .iter()
            .zip(&v)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max);
        v = next;
        if diff <= tol {
            return Ok(v);
        }
        if it % 256 == 255 {
            if diff > checkpoint * quarter {
                break;
            }
            checkpoint = diff;
        }
    }

    // Bordered solve: (I - S)ᵀ v = 0 with one equation replaced by Σv = 1.
    // The kernel is one-dimensional, so some replacement row works.
    let mut a = Matrix::zeros(b, b);
    for i in 0..b {
        for j in 0..b {
            a[(i, j)] = -s_bb[(j, i)];
        }
        a[(i, i)] = a[(i, i)] + T::one();
    }
    for replaced in (0..b).rev() {
        let mut bordered = a.clone();
        let mut rhs = vec![T::zero(); b];
        for j in 0..b {
            bordered[(replaced, j)] = T::one();
        }
        rhs[replaced] = T::one();
        let Some(v) = lu_solve(&bordered, &rhs) else {
            continue;
        };
        let residual = {
            let image = s_bb.vec_mul(&v);
            image
                .iter()
                .zip(&v)
                .map(|(&a, &b)| (a - b).abs())
                .fold(T::zero(), T::max)
        };
        if residual <= tolerance::<T>(1e-10) && v.iter().all(|&x| x > T::zero()) {
            return Ok(v);
        }
    }
    Err(Error::PerronIterationDiverged { reach })
}

/// Left kernel vectors: for each reach, the left Perron vector of `S_BB`
/// scaled by `E⁻¹` on the cabal, zero elsewhere, normalized to sum 1.
pub fn left_kernel<T: Real>(
    l: &LaplacianMatrix<T>,
    rd: &ReachDecomposition,
) -> Result<Vec<Vec<T>>> {
    require_actual(l)?;
    let n = l.n();
    let s = l.bundle().s();
    let mut out = Vec::with_capacity(rd.k());
    for (m, reach) in rd.reaches.iter().enumerate() {
        let cabal: Vec<usize> = reach.cabal.iter().map(|&v| v - 1).collect();
        for &c in &cabal {
            if l.e[c] <= T::zero() || l.e[c].is_nan() {
                return Err(Error::NonPositiveRate { vertex: c + 1 });
            }
        }
        let s_bb = s.submatrix(&cabal, &cabal);
        let v = stationary_vector(&s_bb, m + 1)?;
        let mut gamma_bar = vec![T::zero(); n];
        let mut sum = T::zero();
        for (idx, &c) in cabal.iter().enumerate() {
            let scaled = v[idx] / l.e[c];
            gamma_bar[c] = scaled;
            sum = sum + scaled;
        }
        for x in &mut gamma_bar {
            *x = *x / sum;
        }
        out.push(gamma_bar);
    }
    Ok(out)
}

/// Both kernel bases of an actual Laplacian.
pub fn kernel_basis<T: Real>(
    l: &LaplacianMatrix<T>,
    rd: &ReachDecomposition,
) -> Result<KernelBasis<T>> {
    Ok(KernelBasis {
        gamma: right_kernel(l, rd)?,
        gamma_bar: left_kernel(l, rd)?,
    })
}

/// The projector Γ = Σ_m γ_m ⊗ γ̄_m = H⁰ H̄⁰.
pub fn gamma_matrix<T: Real>(kb: &KernelBasis<T>) -> Matrix<T> {
    let n = kb.n();
    let mut g = Matrix::zeros(n, n);
    for (gamma, gamma_bar) in kb.gamma.iter().zip(&kb.gamma_bar) {
        for (i, &gi) in gamma.iter().enumerate() {
            if gi == T::zero() {
                continue;
            }
            for (j, &bj) in gamma_bar.iter().enumerate() {
                g[(i, j)] = g[(i, j)] + gi * bj;
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_adjacency, Digraph};
    use crate::laplacian::{comb_laplacian, generalized_laplacian, rw_laplacian};
    use crate::matrix::vec_inf_diff;
    use crate::taxonomy::reach_decomposition;
    use std::sync::Arc;

    const EXAMPLE_GRAPH: &str = "7\n1 2\n1 6\n6 7\n7 6\n3 4\n4 5\n5 3\n3 7";

    fn example() -> (Arc<crate::graph::AdjacencyBundle<f64>>, ReachDecomposition) {
        let g: Digraph<f64> = Digraph::parse(EXAMPLE_GRAPH).unwrap();
        let rd = reach_decomposition(&g).unwrap();
        (Arc::new(build_adjacency(&g)), rd)
    }

    fn third() -> f64 {
        1.0 / 3.0
    }

    #[test]
    fn right_kernel_of_the_example() {
        let (b, rd) = example();
        for l in [rw_laplacian(&b), comb_laplacian(&b)] {
            let gamma = right_kernel(&l, &rd).unwrap();
            let g1 = vec![1.0, 1.0, 0.0, 0.0, 0.0, 2.0 * third(), third()];
            let g2 = vec![0.0, 0.0, 1.0, 1.0, 1.0, third(), 2.0 * third()];
            assert!(vec_inf_diff(&gamma[0], &g1) <= 1e-10);
            assert!(vec_inf_diff(&gamma[1], &g2) <= 1e-10);
        }
    }

    #[test]
    fn left_kernel_of_the_example() {
        let (b, rd) = example();
        for l in [rw_laplacian(&b), comb_laplacian(&b)] {
            let gb = left_kernel(&l, &rd).unwrap();
            let g1 = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
            let g2 = vec![0.0, 0.0, third(), third(), third(), 0.0, 0.0];
            assert!(vec_inf_diff(&gb[0], &g1) <= 1e-10);
            assert!(vec_inf_diff(&gb[1], &g2) <= 1e-10);
        }
    }

    #[test]
    fn gamma_matrix_of_the_example() {
        let (b, rd) = example();
        let l = rw_laplacian(&b);
        let kb = kernel_basis(&l, &rd).unwrap();
        let g = gamma_matrix(&kb);
        let expected = Matrix::from_rows(
            &[
                [9.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                [9.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 3.0, 3.0, 3.0, 0.0, 0.0],
                [0.0, 0.0, 3.0, 3.0, 3.0, 0.0, 0.0],
                [0.0, 0.0, 3.0, 3.0, 3.0, 0.0, 0.0],
                [6.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0],
                [3.0, 0.0, 2.0, 2.0, 2.0, 0.0, 0.0],
            ]
            .map(|r| r.map(|x| x / 9.0).to_vec()),
        );
        assert!(g.max_abs_diff(&expected) <= 1e-10);

        // Γ is a projector with unit row sums that annihilates L on both sides.
        assert!(g.mul(&g).max_abs_diff(&g) <= 1e-9);
        for s in g.row_sums() {
            assert!((s - 1.0).abs() <= 1e-10);
        }
        assert!(l.matrix.mul(&g).max_abs() <= 1e-9);
        assert!(g.mul(&l.matrix).max_abs() <= 1e-9);
    }

    #[test]
    fn biorthogonality_of_the_example() {
        let (b, rd) = example();
        let kb = kernel_basis(&rw_laplacian(&b), &rd).unwrap();
        for (i, gb) in kb.gamma_bar.iter().enumerate() {
            for (j, g) in kb.gamma.iter().enumerate() {
                let dot: f64 = gb.iter().zip(g).map(|(&a, &b)| a * b).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() <= 1e-10, "γ̄_{i}·γ_{j} = {dot}");
            }
        }
    }

    #[test]
    fn strongly_connected_graph_has_the_ones_kernel() {
        let g: Digraph<f64> = Digraph::parse("3\n1 2\n2 3\n3 1").unwrap();
        let rd = reach_decomposition(&g).unwrap();
        let l = rw_laplacian(&Arc::new(build_adjacency(&g)));
        let gamma = right_kernel(&l, &rd).unwrap();
        assert_eq!(gamma.len(), 1);
        assert!(vec_inf_diff(&gamma[0], &[1.0, 1.0, 1.0]) <= 1e-12);
    }

    #[test]
    fn fork_kernels_by_hand() {
        // 1 → 2 ← 3: vertex 2 averages its two in-neighbors.
        let g: Digraph<f64> = Digraph::parse("3\n1 2\n3 2").unwrap();
        let rd = reach_decomposition(&g).unwrap();
        let l = rw_laplacian(&Arc::new(build_adjacency(&g)));
        let kb = kernel_basis(&l, &rd).unwrap();
        assert!(vec_inf_diff(&kb.gamma[0], &[1.0, 0.5, 0.0]) <= 1e-12);
        assert!(vec_inf_diff(&kb.gamma[1], &[0.0, 0.5, 1.0]) <= 1e-12);
        assert!(vec_inf_diff(&kb.gamma_bar[0], &[1.0, 0.0, 0.0]) <= 1e-12);
        assert!(vec_inf_diff(&kb.gamma_bar[1], &[0.0, 0.0, 1.0]) <= 1e-12);
        let g3 = gamma_matrix(&kb);
        let expected = Matrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.5, 0.0, 0.5],
            vec![0.0, 0.0, 1.0],
        ]);
        assert!(g3.max_abs_diff(&expected) <= 1e-12);
    }

    #[test]
    fn two_cycle_cabal_splits_evenly() {
        let g: Digraph<f64> = Digraph::parse("2\n1 2\n2 1").unwrap();
        let rd = reach_decomposition(&g).unwrap();
        let l = rw_laplacian(&Arc::new(build_adjacency(&g)));
        let gb = left_kernel(&l, &rd).unwrap();
        assert!(vec_inf_diff(&gb[0], &[0.5, 0.5]) <= 1e-13);
    }

    #[test]
    fn periodic_cabal_with_nonuniform_stationary_uses_the_bordered_solve() {
        // Bipartite cabal {1} vs {2,3}: plain power iteration oscillates with
        // period two, and the stationary vector (1/2, 1/4, 1/4) is not the
        // uniform starting point, so the exact fallback must produce it.
        let g: Digraph<f64> = Digraph::parse("3\n2 1\n3 1\n1 2\n1 3").unwrap();
        let rd = reach_decomposition(&g).unwrap();
        let l = rw_laplacian(&Arc::new(build_adjacency(&g)));
        let gb = left_kernel(&l, &rd).unwrap();
        assert!(vec_inf_diff(&gb[0], &[0.5, 0.25, 0.25]) <= 1e-12);
    }

    #[test]
    fn gamma_entries_classify_by_taxonomy() {
        let (b, rd) = example();
        let gamma = right_kernel(&rw_laplacian(&b), &rd).unwrap();
        let tol = 1e-9;
        for (m, reach) in rd.reaches.iter().enumerate() {
            for v in 1..=7usize {
                let x = gamma[m][v - 1];
                if reach.exclusive.contains(&v) {
                    assert!((x - 1.0).abs() <= tol);
                } else if reach.common.contains(&v) {
                    assert!(x > tol && x < 1.0 - tol);
                } else {
                    assert!(x.abs() <= tol);
                }
            }
        }
        // The γ_m sum to the ones vector.
        for v in 0..7 {
            let total: f64 = gamma.iter().map(|g| g[v]).sum();
            assert!((total - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn absorption_consistency_of_gamma_columns() {
        // Row i of Γ restricted to reach m's cabal sums to γ_{m,i}.
        let (b, rd) = example();
        let kb = kernel_basis(&rw_laplacian(&b), &rd).unwrap();
        let g = gamma_matrix(&kb);
        for (m, reach) in rd.reaches.iter().enumerate() {
            for i in 0..7 {
                let mass: f64 = reach.cabal.iter().map(|&v| g[(i, v - 1)]).sum();
                assert!((mass - kb.gamma[m][i]).abs() <= 1e-10);
            }
        }
        // Γ columns are supported on cabal vertices only.
        let cabals = rd.cabal_union();
        for j in 1..=7usize {
            if !cabals.contains(&j) {
                for i in 0..7 {
                    assert!(g[(i, j - 1)].abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn kinds_agree_when_in_degree_is_constant_per_cabal() {
        // Unit-weight example graph: cabal in-degrees are all 1, so the comb
        // and rw projectors coincide.
        let (b, rd) = example();
        let g_rw = gamma_matrix(&kernel_basis(&rw_laplacian(&b), &rd).unwrap());
        let g_comb = gamma_matrix(&kernel_basis(&comb_laplacian(&b), &rd).unwrap());
        assert!(g_rw.max_abs_diff(&g_comb) <= 1e-9);

        // Singleton cabal: same conclusion for any weights.
        let g: Digraph<f64> = Digraph::parse("3\n1 2 2.0\n2 3 0.5").unwrap();
        let rd = reach_decomposition(&g).unwrap();
        let b = Arc::new(build_adjacency(&g));
        let g_rw = gamma_matrix(&kernel_basis(&rw_laplacian(&b), &rd).unwrap());
        let g_comb = gamma_matrix(&kernel_basis(&comb_laplacian(&b), &rd).unwrap());
        assert!(g_rw.max_abs_diff(&g_comb) <= 1e-12);
    }

    #[test]
    fn kinds_disagree_when_in_degrees_vary_inside_a_cabal() {
        // Weighted 2-cycle: D = diag(2, 1). The rw projector averages evenly;
        // the comb projector weights by the conserved quantity 1·x1 + 2·x2.
        // Each is the correct limit of its own semigroup e^{-Lt}.
        let g: Digraph<f64> = Digraph::parse("2\n1 2 1.0\n2 1 2.0").unwrap();
        let rd = reach_decomposition(&g).unwrap();
        let b = Arc::new(build_adjacency(&g));
        let l_rw = rw_laplacian(&b);
        let l_comb = comb_laplacian(&b);
        let g_rw = gamma_matrix(&kernel_basis(&l_rw, &rd).unwrap());
        let g_comb = gamma_matrix(&kernel_basis(&l_comb, &rd).unwrap());

        let third = 1.0 / 3.0;
        assert!(vec_inf_diff(g_rw.row(0), &[0.5, 0.5]) <= 1e-12);
        assert!(vec_inf_diff(g_comb.row(0), &[third, 2.0 * third]) <= 1e-12);
        assert!(g_rw.max_abs_diff(&g_comb) > 0.1);

        // Both are still valid projectors onto their own kernels.
        for (l, g) in [(&l_rw, &g_rw), (&l_comb, &g_comb)] {
            assert!(l.matrix.mul(g).max_abs() <= 1e-12);
            assert!(g.mul(&l.matrix).max_abs() <= 1e-12);
            assert!(g.mul(g).max_abs_diff(g) <= 1e-12);
        }
    }

    #[test]
    fn zero_rate_on_a_cabal_is_rejected() {
        // An actual Laplacian with e = 0 on a cabal row leaves the left
        // kernel scaling undefined.
        let g: Digraph<f64> = Digraph::parse("2\n1 2").unwrap();
        let rd = reach_decomposition(&g).unwrap();
        let b = Arc::new(build_adjacency(&g));
        let l = generalized_laplacian(&b, &[0.0, 1.0], &[0.0, 1.0]).unwrap();
        assert!(!l.is_strict());
        assert_eq!(
            left_kernel(&l, &rd),
            Err(Error::NonPositiveRate { vertex: 1 })
        );
    }

    #[test]
    fn strict_generalized_laplacian_is_rejected() {
        let (b, rd) = example();
        let strict = generalized_laplacian(&b, &[2.0; 7], &[1.0; 7]).unwrap();
        assert!(matches!(
            right_kernel(&strict, &rd),
            Err(Error::WrongLaplacianKind { .. })
        ));
        assert!(matches!(
            left_kernel(&strict, &rd),
            Err(Error::WrongLaplacianKind { .. })
        ));
    }

    #[test]
    fn h0_shapes_and_product() {
        let (b, rd) = example();
        let kb = kernel_basis(&rw_laplacian(&b), &rd).unwrap();
        let h0 = kb.h0();
        let h0_bar = kb.h0_bar();
        assert_eq!((h0.n_rows(), h0.n_cols()), (7, 2));
        assert_eq!((h0_bar.n_rows(), h0_bar.n_cols()), (2, 7));
        let product = h0.mul(&h0_bar);
        assert!(product.max_abs_diff(&gamma_matrix(&kb)) <= 1e-13);
    }
}
