//! Direct solvers: LU with partial pivoting and column-pivoted QR rank.

use crate::matrix::Matrix;
use crate::scalar::{real, Real};

/// Solve `a x = b` by LU with partial pivoting. Returns `None` when a pivot
/// collapses below `eps * max(1, ||a||_inf)`.
pub fn lu_solve<T: Real>(a: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert!(a.is_square());
    let n = a.n_rows();
    assert_eq!(b.len(), n);
    if n == 0 {
        return Some(Vec::new());
    }

    let mut lu = a.clone();
    let mut x: Vec<T> = b.to_vec();
    let tiny = T::epsilon() * real::<T>(8.0) * a.inf_norm().max(T::one());

    for k in 0..n {
        // Partial pivot: largest magnitude in column k at or below the diagonal.
        let mut p = k;
        let mut best = lu[(k, k)].abs();
        for i in k + 1..n {
            let v = lu[(i, k)].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= tiny {
            return None;
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            x.swap(k, p);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let m = lu[(i, k)] / pivot;
            if m == T::zero() {
                continue;
            }
            lu[(i, k)] = m;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] = lu[(i, j)] - m * v;
            }
            x[i] = x[i] - m * x[k];
        }
    }

    // Back substitution.
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s = s - lu[(i, j)] * x[j];
        }
        x[i] = s / lu[(i, i)];
    }
    Some(x)
}

/// Rank via Householder QR with column pivoting: count of `|R_kk|` above
/// `tol`. Callers pick `tol` (the spectrum module uses `1e-9 * ||m||_inf`).
pub fn rank_with_tolerance<T: Real>(m: &Matrix<T>, tol: T) -> usize {
    let rows = m.n_rows();
    let cols = m.n_cols();
    let steps = rows.min(cols);
    let mut r = m.clone();
    let mut col_perm: Vec<usize> = (0..cols).collect();

    let mut rank = 0;
    for k in 0..steps {
        // Pivot on the column with the largest remaining norm.
        let mut best_j = k;
        let mut best_norm = T::zero();
        for j in k..cols {
            let mut s = T::zero();
            for i in k..rows {
                let v = r[(i, j)];
                s = s + v * v;
            }
            if s > best_norm {
                best_norm = s;
                best_j = j;
            }
        }
        if best_j != k {
            for i in 0..rows {
                let tmp = r[(i, k)];
                r[(i, k)] = r[(i, best_j)];
                r[(i, best_j)] = tmp;
            }
            col_perm.swap(k, best_j);
        }
        let norm = best_norm.sqrt();
        if norm <= tol {
            break;
        }
        rank += 1;

        // Householder vector for column k.
        let alpha = if r[(k, k)] >= T::zero() { -norm } else { norm };
        let mut v = vec![T::zero(); rows - k];
        v[0] = r[(k, k)] - alpha;
        for i in k + 1..rows {
            v[i - k] = r[(i, k)];
        }
        let vtv: T = v.iter().map(|&x| x * x).sum();
        if vtv == T::zero() {
            continue;
        }
        r[(k, k)] = alpha;
        for i in k + 1..rows {
            r[(i, k)] = T::zero();
        }
        for j in k + 1..cols {
            let mut dot = T::zero();
            for i in k..rows {
                dot = dot + v[i - k] * r[(i, j)];
            }
            let c = (dot + dot) / vtv;
            for i in k..rows {
                r[(i, j)] = r[(i, j)] - c * v[i - k];
            }
        }
    }
    rank
}
