//! Dense nonsymmetric eigenvalues: Householder reduction to Hessenberg form
//! followed by Francis double-shift QR, plus Gersgorin disks and a
//! rank-based geometric multiplicity test.

use crate::error::{Error, Result};
use crate::laplacian::LaplacianMatrix;
use crate::linalg::rank_with_tolerance;
use crate::matrix::Matrix;
use crate::scalar::{real, tolerance, Real};
use num_complex::Complex;


/// All eigenvalues of a real matrix; conjugate pairs appear together.
/// Sorted by (re, im) so output is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Count of eigenvalues with `|λ| < tol`.
    pub fn zero_multiplicity(&self, tol: T) -> usize {
        self.eigenvalues.iter().filter(|l| l.norm() < tol).count()
    }

    /// Smallest eigenvalue modulus.
    pub fn min_modulus(&self) -> T {
        self.eigenvalues
            .iter()
            .map(|l| l.norm())
            .fold(T::infinity(), T::min)
    }

    pub fn max_imag_abs(&self) -> T {
        self.eigenvalues
            .iter()
            .map(|l| l.im.abs())
            .fold(T::zero(), T::max)
    }

    pub fn to_pairs(&self) -> Vec<(f64, f64)> {
        self.eigenvalues
            .iter()
            .map(|l| {
                (
                    l.re.to_f64().unwrap_or(f64::NAN),
                    l.im.to_f64().unwrap_or(f64::NAN),
                )
            })
            .collect()
    }
}

/// Count of eigenvalues with `|λ| < tol` (operation form of
/// [`Spectrum::zero_multiplicity`]).
pub fn zero_multiplicity<T: Real>(s: &Spectrum<T>, tol: T) -> usize {
    s.zero_multiplicity(tol)
}

/// All `n` eigenvalues of a square real matrix.
///
/// The sweep cap is `100·n`; deflation uses the absolute threshold
/// `1e-14 · ||m||_inf`. On cap overrun the eigenvalues found so far are
/// reported inside [`Error::NoConvergence`] as unreliable partial results.
pub fn eigenvalues<T: Real>(m: &Matrix<T>) -> Result<Spectrum<T>> {
    eigenvalues_with_cap(m, 100 * m.n_rows().max(1))
}

pub(crate) fn eigenvalues_with_cap<T: Real>(m: &Matrix<T>, sweep_cap: usize) -> Result<Spectrum<T>> {
    assert!(m.is_square(), "eigenvalues need a square matrix");
    let n = m.n_rows();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
        });
    }
    let norm = m.inf_norm();
    let mut h = m.clone();
    hessenberg(&mut h);
    let deflation_tol = tolerance::<T>(1e-14) * norm;
    let mut eig = francis(&mut h, deflation_tol, sweep_cap).map_err(|partial| {
        Error::NoConvergence {
            found: partial.len(),
            expected: n,
            partial: partial
                .iter()
                .map(|l| {
                    (
                        l.re.to_f64().unwrap_or(f64::NAN),
                        l.im.to_f64().unwrap_or(f64::NAN),
                    )
                })
                .collect(),
        }
    })?;
    eig.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(Spectrum { eigenvalues: eig })
}

/// Householder similarity reduction to upper Hessenberg form, in place.
fn hessenberg<T: Real>(h: &mut Matrix<T>) {
    let n = h.n_rows();
    if n < 3 {
        return;
    }
    let mut ort = vec![T::zero(); n];
    for m in 1..n - 1 {
        let mut scale = T::zero();
        for i in m..n {
            scale = scale + h[(i, m - 1)].abs();
        }
        if scale == T::zero() {
            continue;
        }
        let mut hh = T::zero();
        for i in (m..n).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh = hh + ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > T::zero() {
            g = -g;
        }
        hh = hh - ort[m] * g;
        ort[m] = ort[m] - g;

        // Apply the reflector from the left, then from the right.
        for j in m..n {
            let mut f = T::zero();
            for i in (m..n).rev() {
                f = f + ort[i] * h[(i, j)];
            }
            f = f / hh;
            for i in m..n {
                h[(i, j)] = h[(i, j)] - f * ort[i];
            }
        }
        for i in 0..n {
            let mut f = T::zero();
            for j in (m..n).rev() {
                f = f + ort[j] * h[(i, j)];
            }
            f = f / hh;
            for j in m..n {
                h[(i, j)] = h[(i, j)] - f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
    }
    // The entries below the subdiagonal are mathematically zero now.
    for i in 2..n {
        for j in 0..i - 1 {
            h[(i, j)] = T::zero();
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
/// Returns Err(partial) when the sweep cap is exhausted.
fn francis<T: Real>(
    h: &mut Matrix<T>,
    deflation_tol: T,
    sweep_cap: usize,
) -> std::result::Result<Vec<Complex<T>>, Vec<Complex<T>>> {
    let nn = h.n_rows();
    let mut eig: Vec<Complex<T>> = Vec::with_capacity(nn);
    let half = real::<T>(0.5);
    let mut en = nn - 1;
    let mut exshift = T::zero();
    let mut window_iter = 0usize;
    let mut sweeps = 0usize;
    let eps = T::epsilon();

    'outer: loop {
        // Scan up for a negligible subdiagonal entry.
        let mut l = en;
        while l > 0 {
            if h[(l, l - 1)].abs() <= deflation_tol {
                h[(l, l - 1)] = T::zero();
                break;
            }
            l -= 1;
        }

        if l == en {
            // One real eigenvalue deflated.
            eig.push(Complex::new(h[(en, en)] + exshift, T::zero()));
            if en == 0 {
                break 'outer;
            }
            en -= 1;
            window_iter = 0;
        } else if l + 1 == en {
            // A trailing 2x2 block: closed form, real or conjugate pair.
            let w = h[(en, en - 1)] * h[(en - 1, en)];
            let p = (h[(en - 1, en - 1)] - h[(en, en)]) * half;
            let q = p * p + w;
            let z = q.abs().sqrt();
            let x = h[(en, en)] + exshift;
            if q >= T::zero() {
                let z = if p >= T::zero() { p + z } else { p - z };
                let first = x + z;
                let second = if z != T::zero() { x - w / z } else { first };
                eig.push(Complex::new(first, T::zero()));
                eig.push(Complex::new(second, T::zero()));
            } else {
                eig.push(Complex::new(x + p, z));
                eig.push(Complex::new(x + p, -z));
            }
            if en < 2 {
                break 'outer;
            }
            en -= 2;
            window_iter = 0;
        } else {
            // Form the shift.
            let mut x = h[(en, en)];
            let mut y = h[(en - 1, en - 1)];
            let mut w = h[(en, en - 1)] * h[(en - 1, en)];

            if window_iter == 10 {
                // Wilkinson's exceptional shift. The diagonal shift must
                // cover every not-yet-deflated row, not just the active
                // window, because exshift is added back at every later
                // deflation.
                exshift = exshift + x;
                for i in 0..=en {
                    h[(i, i)] = h[(i, i)] - x;
                }
                let s = h[(en, en - 1)].abs() + h[(en - 1, en - 2)].abs();
                x = real::<T>(0.75) * s;
                y = x;
                w = real::<T>(-0.4375) * s * s;
            }
            if window_iter == 30 {
                let mut s = (y - x) * half;
                s = s * s + w;
                if s > T::zero() {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) * half + s);
                    for i in 0..=en {
                        h[(i, i)] = h[(i, i)] - s;
                    }
                    exshift = exshift + s;
                    x = real::<T>(0.964);
                    y = x;
                    w = x;
                }
            }

            window_iter += 1;
            sweeps += 1;
            if sweeps > sweep_cap {
                return Err(eig);
            }

            // Look for two consecutive small subdiagonal elements.
            let mut m = en - 2;
            let mut p;
            let mut q;
            let mut r;
            loop {
                let z = h[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - rr - ss;
                r = h[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p = p / s;
                q = q / s;
                r = r / s;
                if m == l {
                    break;
                }
                if h[(m, m - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=en {
                h[(i, i - 2)] = T::zero();
                if i > m + 2 {
                    h[(i, i - 3)] = T::zero();
                }
            }

            // Double QR step: chase the bulge through rows m..=en.
            for k in m..en {
                let notlast = k != en - 1;
                let mut xx = T::zero();
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { T::zero() };
                    xx = p.abs() + q.abs() + r.abs();
                    if xx == T::zero() {
                        continue;
                    }
                    p = p / xx;
                    q = q / xx;
                    r = r / xx;
                }
                let mut s = (p * p + q * q + r * r).sqrt();
                if p < T::zero() {
                    s = -s;
                }
                if s == T::zero() {
                    continue;
                }
                if k != m {
                    h[(k, k - 1)] = -s * xx;
                } else if l != m {
                    h[(k, k - 1)] = -h[(k, k - 1)];
                }
                p = p + s;
                let px = p / s;
                let py = q / s;
                let pz = r / s;
                q = q / p;
                r = r / p;

                // Row modification within the active window.
                for j in k..=en {
                    let mut f = h[(k, j)] + q * h[(k + 1, j)];
                    if notlast {
                        f = f + r * h[(k + 2, j)];
                        h[(k + 2, j)] = h[(k + 2, j)] - f * pz;
                    }
                    h[(k, j)] = h[(k, j)] - f * px;
                    h[(k + 1, j)] = h[(k + 1, j)] - f * py;
                }
                // Column modification.
                for i in l..=en.min(k + 3) {
                    let mut f = px * h[(i, k)] + py * h[(i, k + 1)];
                    if notlast {
                        f = f + pz * h[(i, k + 2)];
                        h[(i, k + 2)] = h[(i, k + 2)] - f * r;
                    }
                    h[(i, k)] = h[(i, k)] - f;
                    h[(i, k + 1)] = h[(i, k + 1)] - f * q;
                }
            }
        }
    }
    Ok(eig)
}

/// One Gersgorin disk per row: center is the diagonal entry, radius the
/// off-diagonal absolute row sum.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GersgorinDisk<T> {
    pub center: T,
    pub radius: T,
}

/// Result of checking a spectrum against the row disks of a Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct GersgorinReport<T> {
    pub disks: Vec<GersgorinDisk<T>>,
    /// Indices into the spectrum of eigenvalues outside every disk.
    pub violations: Vec<usize>,
    pub all_contained: bool,
}

/// Verify every eigenvalue sits in the union of the row disks, within 1e-8.
/// Violations are reported, not raised.
pub fn gersgorin_check<T: Real>(l: &LaplacianMatrix<T>, s: &Spectrum<T>) -> GersgorinReport<T> {
    let m = &l.matrix;
    let n = m.n_rows();
    let disks: Vec<GersgorinDisk<T>> = (0..n)
        .map(|i| {
            let center = m[(i, i)];
            let radius = m
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.abs())
                .sum();
            GersgorinDisk { center, radius }
        })
        .collect();

    let slack = tolerance::<T>(1e-8);
    let violations: Vec<usize> = s
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, lam)| {
            !disks
                .iter()
                .any(|d| (**lam - Complex::new(d.center, T::zero())).norm() <= d.radius + slack)
        })
        .map(|(i, _)| i)
        .collect();
    let all_contained = violations.is_empty();
    GersgorinReport {
        disks,
        violations,
        all_contained,
    }
}

/// Numerical rank by column-pivoted QR with threshold `1e-9 · ||m||_inf`.
pub fn rank<T: Real>(m: &Matrix<T>) -> usize {
    rank_with_tolerance(m, tolerance::<T>(1e-9) * m.inf_norm())
}

/// Geometric multiplicity of a real eigenvalue: `n - rank(M - λI)`.
pub fn geometric_multiplicity<T: Real>(m: &Matrix<T>, lambda: T) -> usize {
    assert!(m.is_square());
    let n = m.n_rows();
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] = shifted[(i, i)] - lambda;
    }
    n - rank(&shifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_adjacency, Digraph};
    use crate::laplacian::{comb_laplacian, rw_laplacian};
    use std::sync::Arc;

    const EXAMPLE_GRAPH: &str = "7\n1 2\n1 6\n6 7\n7 6\n3 4\n4 5\n5 3\n3 7";

    /// Greedy nearest matching of two eigenvalue multisets.
    fn assert_spectra_match(got: &[Complex<f64>], want: &[(f64, f64)], tol: f64) {
        assert_eq!(got.len(), want.len());
        let mut used = vec![false; want.len()];
        for g in got {
            let mut best = None;
            let mut best_d = f64::INFINITY;
            for (i, &(re, im)) in want.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = (g - Complex::new(re, im)).norm();
                if d < best_d {
                    best_d = d;
                    best = Some(i);
                }
            }
            let i = best.expect("unmatched eigenvalue");
            assert!(
                best_d <= tol,
                "eigenvalue {g} is {best_d:e} from nearest expected {:?}",
                want[i]
            );
            used[i] = true;
        }
    }

    #[test]
    fn comb_spectrum_of_the_example() {
        let b = Arc::new(build_adjacency(&Digraph::<f64>::parse(EXAMPLE_GRAPH).unwrap()));
        let s = eigenvalues(&comb_laplacian(&b).matrix).unwrap();
        let root3_half = 3f64.sqrt() / 2.0;
        assert_spectra_match(
            &s.eigenvalues,
            &[
                (0.0, 0.0),
                (0.0, 0.0),
                (1.0, 0.0),
                (1.0, 0.0),
                (3.0, 0.0),
                (1.5, root3_half),
                (1.5, -root3_half),
            ],
            1e-7,
        );
    }

    #[test]
    fn rw_spectrum_of_the_example() {
        let b = Arc::new(build_adjacency(&Digraph::<f64>::parse(EXAMPLE_GRAPH).unwrap()));
        let s = eigenvalues(&rw_laplacian(&b).matrix).unwrap();
        let root3_half = 3f64.sqrt() / 2.0;
        assert_spectra_match(
            &s.eigenvalues,
            &[
                (0.0, 0.0),
                (0.0, 0.0),
                (0.5, 0.0),
                (1.0, 0.0),
                (1.5, 0.0),
                (1.5, root3_half),
                (1.5, -root3_half),
            ],
            1e-7,
        );
        assert_eq!(s.zero_multiplicity(1e-7), 2);
    }

    #[test]
    fn identity_has_only_ones() {
        let s = eigenvalues(&Matrix::<f64>::identity(4)).unwrap();
        assert_spectra_match(&s.eigenvalues, &[(1.0, 0.0); 4], 1e-12);
    }

    #[test]
    fn rotation_block_gives_conjugate_pair() {
        let m = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let s = eigenvalues(&m).unwrap();
        assert_spectra_match(&s.eigenvalues, &[(0.0, 1.0), (0.0, -1.0)], 1e-12);
    }

    #[test]
    fn three_cycle_rw_spectrum_is_nonreal() {
        let b = Arc::new(build_adjacency(
            &Digraph::<f64>::parse("3\n1 2\n2 3\n3 1").unwrap(),
        ));
        let s = eigenvalues(&rw_laplacian(&b).matrix).unwrap();
        // 1 - ω for the cube roots of unity ω.
        let root3_half = 3f64.sqrt() / 2.0;
        assert_spectra_match(
            &s.eigenvalues,
            &[(0.0, 0.0), (1.5, root3_half), (1.5, -root3_half)],
            1e-10,
        );
        assert_eq!(s.zero_multiplicity(1e-7), 1);
        assert!(s.max_imag_abs() > 0.5);
    }

    #[test]
    fn zero_matrix_and_empty_matrix() {
        let s = eigenvalues(&Matrix::<f64>::zeros(3, 3)).unwrap();
        assert_eq!(s.zero_multiplicity(1e-12), 3);
        let e = eigenvalues(&Matrix::<f64>::zeros(0, 0)).unwrap();
        assert!(e.is_empty());
    }

    // Independent oracle: characteristic polynomial coefficients by
    // Faddeev–LeVerrier, roots by Durand–Kerner.
    fn char_poly(m: &Matrix<f64>) -> Vec<f64> {
        let n = m.n_rows();
        let mut coeffs = vec![1.0];
        let mut mk = m.clone();
        for k in 1..=n {
            let trace: f64 = (0..n).map(|i| mk[(i, i)]).sum();
            let ck = -trace / k as f64;
            coeffs.push(ck);
            if k == n {
                break;
            }
            let mut shifted = mk.clone();
            for i in 0..n {
                shifted[(i, i)] += ck;
            }
            mk = m.mul(&shifted);
        }
        coeffs
    }

    fn durand_kerner(coeffs: &[f64]) -> Vec<Complex<f64>> {
        let n = coeffs.len() - 1;
        let eval = |z: Complex<f64>| -> Complex<f64> {
            coeffs
                .iter()
                .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
        };
        let seed = Complex::new(0.4, 0.9);
        let mut roots: Vec<Complex<f64>> = (0..n).map(|i| seed.powu(i as u32 + 1)).collect();
        for _ in 0..2000 {
            let mut delta: f64 = 0.0;
            for i in 0..n {
                let mut denom = Complex::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-13 {
                break;
            }
        }
        roots
    }

    #[test]
    fn matches_characteristic_polynomial_roots_on_small_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..40 {
            let n = rng.random_range(2..=6);
            let mut m = Matrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = rng.random_range(-2.0..2.0);
                }
            }
            let got = eigenvalues(&m).unwrap();
            let want: Vec<(f64, f64)> = durand_kerner(&char_poly(&m))
                .iter()
                .map(|z| (z.re, z.im))
                .collect();
            assert_spectra_match(&got.eigenvalues, &want, 1e-7);
            let _ = trial;
        }
    }

    #[test]
    fn conjugate_pairs_within_tolerance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.random_range(2..=8);
            let mut m = Matrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = rng.random_range(-1.0..1.0);
                }
            }
            let s = eigenvalues(&m).unwrap();
            for lam in &s.eigenvalues {
                if lam.im.abs() > 1e-8 {
                    let conj_present = s
                        .eigenvalues
                        .iter()
                        .any(|o| (o - lam.conj()).norm() < 1e-8 * (1.0 + lam.norm()));
                    assert!(conj_present, "missing conjugate of {lam}");
                }
            }
        }
    }

    #[test]
    fn cap_overrun_reports_partial_results() {
        let m = Matrix::from_rows(&[
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ]);
        match eigenvalues_with_cap(&m, 0) {
            Err(Error::NoConvergence { found, expected, .. }) => {
                assert_eq!(expected, 3);
                assert!(found < 3);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
        assert!(eigenvalues(&m).is_ok());
    }

    #[test]
    fn gersgorin_disks_of_the_example_rw() {
        let b = Arc::new(build_adjacency(&Digraph::<f64>::parse(EXAMPLE_GRAPH).unwrap()));
        let l = rw_laplacian(&b);
        let s = eigenvalues(&l.matrix).unwrap();
        let report = gersgorin_check(&l, &s);
        assert!(report.all_contained);
        // Row 1 of the rw Laplacian is zero: its disk degenerates to {0}.
        assert_eq!(report.disks[0], GersgorinDisk { center: 0.0, radius: 0.0 });
        for d in &report.disks[1..] {
            assert_eq!(d.center, 1.0);
            assert!((d.radius - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn gersgorin_comb_row_six_contains_three() {
        let b = Arc::new(build_adjacency(&Digraph::<f64>::parse(EXAMPLE_GRAPH).unwrap()));
        let l = comb_laplacian(&b);
        let s = eigenvalues(&l.matrix).unwrap();
        let report = gersgorin_check(&l, &s);
        assert!(report.all_contained);
        // Eigenvalue 3 sits on the boundary of the row-6 disk B_2(2).
        assert_eq!(report.disks[5], GersgorinDisk { center: 2.0, radius: 2.0 });
        assert!((3.0f64 - report.disks[5].center).abs() <= report.disks[5].radius);
    }

    #[test]
    fn diagonal_matrix_has_point_disks() {
        // Self-loops only: S = I, so the rw Laplacian is the zero matrix
        // and every disk degenerates to its center.
        let g: Digraph<f64> = Digraph::parse("2\n1 1\n2 2").unwrap();
        let b = Arc::new(build_adjacency(&g));
        let l = rw_laplacian(&b);
        let s = eigenvalues(&l.matrix).unwrap();
        let r = gersgorin_check(&l, &s);
        assert_eq!(r.disks.len(), 2);
        for d in &r.disks {
            assert_eq!(*d, GersgorinDisk { center: 0.0, radius: 0.0 });
        }
        assert!(r.all_contained);
    }

    #[test]
    fn strict_generalized_laplacian_of_an_scc_is_nonsingular() {
        // Built directly on a strongly connected graph, not as a block.
        use crate::laplacian::generalized_laplacian;
        let b = Arc::new(build_adjacency(
            &Digraph::<f64>::parse("3\n1 2\n2 3\n3 1").unwrap(),
        ));
        let m = generalized_laplacian(&b, &[1.5, 1.5, 1.5], &[1.0, 1.0, 1.0]).unwrap();
        assert!(m.is_strict());
        let s = eigenvalues(&m.matrix).unwrap();
        assert_eq!(s.zero_multiplicity(1e-7), 0);
        assert!(s.min_modulus() > 1e-8);
        assert!(s.eigenvalues.iter().all(|lam| lam.re > 1e-8));
    }

    #[test]
    fn strict_generalized_blocks_are_nonsingular() {
        // Diagonal blocks of the triangularized example that are strict
        // generalized Laplacians have no zero eigenvalue and strictly
        // positive real parts.
        use crate::laplacian::block_triangularize;
        use crate::taxonomy::condensation;
        let b = Arc::new(build_adjacency(&Digraph::<f64>::parse(EXAMPLE_GRAPH).unwrap()));
        for l in [rw_laplacian(&b), comb_laplacian(&b)] {
            let bt = block_triangularize(&l, &condensation(b.graph()));
            for block in bt.blocks.iter().filter(|blk| !blk.is_actual) {
                let s = eigenvalues(&block.matrix).unwrap();
                assert_eq!(s.zero_multiplicity(1e-7), 0, "block {:?}", block.vertices);
                assert!(s.eigenvalues.iter().all(|lam| lam.re > 1e-8));
            }
        }
    }

    #[test]
    fn rank_detects_defective_zero_eigenvalue() {
        // Jordan block at 0: algebraic multiplicity 2, geometric 1.
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        let s = eigenvalues(&m).unwrap();
        assert_eq!(s.zero_multiplicity(1e-9), 2);
        assert_eq!(geometric_multiplicity(&m, 0.0), 1);
    }

    #[test]
    fn defective_laplacian_of_a_four_vertex_scc() {
        // Strongly connected witness whose rw Laplacian has eigenvalue 1
        // with algebraic multiplicity 2 but a one-dimensional eigenspace.
        let g: Digraph<f64> = Digraph::parse("4\n1 3\n1 4\n2 3\n2 4\n3 2\n4 1").unwrap();
        let b = Arc::new(build_adjacency(&g));
        let l = rw_laplacian(&b);
        let s = eigenvalues(&l.matrix).unwrap();
        let alg = s
            .eigenvalues
            .iter()
            .filter(|lam| (*lam - Complex::new(1.0, 0.0)).norm() < 1e-7)
            .count();
        assert_eq!(alg, 2);
        assert_eq!(geometric_multiplicity(&l.matrix, 1.0), 1);
    }

    #[test]
    fn block_triangular_spectrum_is_union_of_block_spectra() {
        use crate::laplacian::block_triangularize;
        use crate::taxonomy::condensation;
        let b = Arc::new(build_adjacency(&Digraph::<f64>::parse(EXAMPLE_GRAPH).unwrap()));
        let l = comb_laplacian(&b);
        let bt = block_triangularize(&l, &condensation(b.graph()));
        let mut union: Vec<(f64, f64)> = Vec::new();
        for block in &bt.blocks {
            union.extend(eigenvalues(&block.matrix).unwrap().to_pairs());
        }
        let full = eigenvalues(&l.matrix).unwrap();
        assert_spectra_match(&full.eigenvalues, &union, 1e-6);
    }

    #[test]
    fn f32_lane_reproduces_the_example_spectrum() {
        let b = Arc::new(build_adjacency(&Digraph::<f32>::parse(EXAMPLE_GRAPH).unwrap()));
        let s = eigenvalues(&rw_laplacian(&b).matrix).unwrap();
        assert_eq!(s.zero_multiplicity(1e-3), 2);
    }
}
