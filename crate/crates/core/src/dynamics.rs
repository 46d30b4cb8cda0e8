//! Consensus and diffusion dynamics: the continuous semigroup `e^{-Lt}`, its
//! RK4 integration, the discrete iteration `x ← Sx` with Cesàro averaging,
//! the time-one map `e^{-𝓛}`, absorption probabilities, and hitting times.

use crate::error::{Error, Result};
use crate::graph::AdjacencyBundle;
use crate::kernels::{gamma_matrix, kernel_basis, KernelBasis};
use crate::laplacian::{rw_laplacian, LaplacianKind, LaplacianMatrix};
use crate::linalg::lu_solve;
use crate::matrix::{vec_inf_diff, Matrix};
use crate::scalar::{real, tolerance, Real};
use crate::taxonomy::{reach_decomposition, ReachDecomposition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;

/// Which of the two dual processes is being run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    /// `ẋ = -Lx` / `x ← Sx`: states move toward kernel combinations.
    Consensus,
    /// `ṗ = -pL` / `p ← pS`: mass flows toward the information sources.
    Diffusion,
}

/// Mode tag carried by a [`TrajectoryRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SimMode {
    #[serde(rename = "consensus-continuous")]
    ConsensusContinuous,
    #[serde(rename = "diffusion-continuous")]
    DiffusionContinuous,
    #[serde(rename = "consensus-discrete")]
    ConsensusDiscrete,
    #[serde(rename = "diffusion-discrete")]
    DiffusionDiscrete,
}

impl std::fmt::Display for SimMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SimMode::ConsensusContinuous => "consensus-continuous",
            SimMode::DiffusionContinuous => "diffusion-continuous",
            SimMode::ConsensusDiscrete => "consensus-discrete",
            SimMode::DiffusionDiscrete => "diffusion-discrete",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for SimMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "consensus-continuous" => Ok(SimMode::ConsensusContinuous),
            "diffusion-continuous" => Ok(SimMode::DiffusionContinuous),
            "consensus-discrete" => Ok(SimMode::ConsensusDiscrete),
            "diffusion-discrete" => Ok(SimMode::DiffusionDiscrete),
            other => Err(format!(
                "unknown mode {other:?}; expected consensus-continuous, \
                 diffusion-continuous, consensus-discrete, or diffusion-discrete"
            )),
        }
    }
}

impl SimMode {
    pub fn is_discrete(&self) -> bool {
        matches!(self, SimMode::ConsensusDiscrete | SimMode::DiffusionDiscrete)
    }

    pub fn flow(&self) -> Flow {
        match self {
            SimMode::ConsensusContinuous | SimMode::ConsensusDiscrete => Flow::Consensus,
            SimMode::DiffusionContinuous | SimMode::DiffusionDiscrete => Flow::Diffusion,
        }
    }
}

/// Sampled states of a run, the running Cesàro average for discrete modes,
/// and the Γ-predicted asymptote.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    pub mode: SimMode,
    /// Sample times: reals for continuous runs, whole steps for discrete.
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    /// Running averages `(1/ℓ) Σ_{j<ℓ} state(j)` at the sampled steps.
    pub cesaro: Option<Vec<Vec<T>>>,
    pub predicted_limit: Vec<T>,
}

impl<T: Real> TrajectoryRecord<T> {
    /// `||final state - predicted limit||_∞`.
    pub fn final_deviation(&self) -> T {
        vec_inf_diff(self.states.last().expect("non-empty"), &self.predicted_limit)
    }

    /// `||final Cesàro average - predicted limit||_∞` for discrete runs.
    pub fn final_cesaro_deviation(&self) -> Option<T> {
        self.cesaro
            .as_ref()
            .map(|c| vec_inf_diff(c.last().expect("non-empty"), &self.predicted_limit))
    }

    /// Heuristic for discrete runs: raw iterates stopped far from the limit
    /// while the Cesàro average reached it, i.e. the orbit is periodic.
    pub fn raw_iterates_look_periodic(&self) -> bool {
        match self.final_cesaro_deviation() {
            Some(cesaro_dev) => {
                let raw_dev = self.final_deviation();
                raw_dev > real::<T>(1e-3) && cesaro_dev * real::<T>(10.0) < raw_dev
            }
            None => false,
        }
    }
}

/// `e^{-m·t}` by scaling and squaring around a degree-6 Taylor core, with
/// squaring count `⌈log2(||m||_∞ · t)⌉ + 3`.
pub fn matrix_exponential<T: Real>(m: &Matrix<T>, t: T) -> Matrix<T> {
    assert!(m.is_square());
    assert!(t >= T::zero(), "nonnegative horizon");
    let n = m.n_rows();
    let a = m.scale(-t);
    let norm = a.inf_norm();
    if norm == T::zero() {
        return Matrix::identity(n);
    }
    let squarings = {
        let log2 = norm.log2().ceil().to_i32().unwrap_or(0);
        (log2 + 3).max(0) as usize
    };
    let scaled = a.scale(T::one() / real::<T>((1u64 << squarings) as f64));

    // Degree-6 Taylor core on the scaled matrix (norm <= 1/8).
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=6 {
        term = term.mul(&scaled).scale(T::one() / T::from_usize(k).unwrap());
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

fn predicted_gamma<T: Real>(l: &LaplacianMatrix<T>) -> Result<Matrix<T>> {
    let rd = reach_decomposition(l.bundle().graph())?;
    Ok(gamma_matrix(&kernel_basis(l, &rd)?))
}

fn sample_indices(total: usize, samples: usize) -> Vec<usize> {
    let samples = samples.max(1);
    let mut idx: Vec<usize> = vec![0];
    for k in 1..=samples {
        let i = (k * total) / samples;
        if *idx.last().unwrap() != i {
            idx.push(i);
        }
    }
    idx
}

/// Integrate `ẋ = -Lx` (consensus) or `ṗ = -pL` (diffusion) with classical
/// fixed-step RK4, step `min(0.01, 0.1/||L||_∞)`, recording `samples` evenly
/// spaced states plus the start, and the Γ-predicted limit.
pub fn simulate_continuous<T: Real>(
    l: &LaplacianMatrix<T>,
    init: &[T],
    horizon: T,
    samples: usize,
    flow: Flow,
) -> Result<TrajectoryRecord<T>> {
    let n = l.n();
    if init.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: init.len(),
        });
    }
    assert!(horizon > T::zero(), "horizon must be positive");

    let norm = l.matrix.inf_norm();
    let mut h = real::<T>(0.01);
    if norm > T::zero() {
        h = h.min(real::<T>(0.1) / norm);
    }
    if h < real::<T>(1e-12) {
        return Err(Error::StepUnderflow {
            step: h.to_f64().unwrap_or(0.0),
        });
    }
    let steps = (horizon / h).ceil().to_usize().unwrap_or(1).max(1);
    let h = horizon / T::from_usize(steps).unwrap();

    let gamma = predicted_gamma(l)?;
    let predicted_limit = match flow {
        Flow::Consensus => gamma.mul_vec(init),
        Flow::Diffusion => gamma.vec_mul(init),
    };
    let mode = match flow {
        Flow::Consensus => SimMode::ConsensusContinuous,
        Flow::Diffusion => SimMode::DiffusionContinuous,
    };

    let deriv = |x: &[T]| -> Vec<T> {
        let v = match flow {
            Flow::Consensus => l.matrix.mul_vec(x),
            Flow::Diffusion => l.matrix.vec_mul(x),
        };
        v.into_iter().map(|a| -a).collect()
    };

    let record_at = sample_indices(steps, samples);
    let mut times = Vec::with_capacity(record_at.len());
    let mut states = Vec::with_capacity(record_at.len());
    let mut x: Vec<T> = init.to_vec();
    let mut next_record = 0usize;

    for step in 0..=steps {
        if record_at.get(next_record) == Some(&step) {
            times.push(T::from_usize(step).unwrap() * h);
            states.push(x.clone());
            next_record += 1;
        }
        if step == steps {
            break;
        }
        x = rk4_step(&deriv, &x, h);
    }

    Ok(TrajectoryRecord {
        mode,
        times,
        states,
        cesaro: None,
        predicted_limit,
    })
}

fn rk4_step<T: Real>(deriv: &impl Fn(&[T]) -> Vec<T>, x: &[T], h: T) -> Vec<T> {
    let half = real::<T>(0.5);
    let sixth = T::one() / real::<T>(6.0);
    let two = real::<T>(2.0);

    let k1 = deriv(x);
    let x2: Vec<T> = x.iter().zip(&k1).map(|(&a, &k)| a + half * h * k).collect();
    let k2 = deriv(&x2);
    let x3: Vec<T> = x.iter().zip(&k2).map(|(&a, &k)| a + half * h * k).collect();
    let k3 = deriv(&x3);
    let x4: Vec<T> = x.iter().zip(&k3).map(|(&a, &k)| a + h * k).collect();
    let k4 = deriv(&x4);

    (0..x.len())
        .map(|i| x[i] + h * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
        .collect()
}

/// Kahan-compensated vector accumulator for long Cesàro sums.
struct KahanVec<T> {
    sum: Vec<T>,
    compensation: Vec<T>,
}

impl<T: Real> KahanVec<T> {
    fn new(n: usize) -> Self {
        KahanVec {
            sum: vec![T::zero(); n],
            compensation: vec![T::zero(); n],
        }
    }

    fn add(&mut self, x: &[T]) {
        for ((sum, comp), &value) in self.sum.iter_mut().zip(&mut self.compensation).zip(x) {
            let y = value - *comp;
            let t = *sum + y;
            *comp = (t - *sum) - y;
            *sum = t;
        }
    }

    fn mean(&self, count: usize) -> Vec<T> {
        let c = T::from_usize(count).unwrap();
        self.sum.iter().map(|&s| s / c).collect()
    }
}

/// Iterate `x ← Sx` (consensus) or `p ← pS` (diffusion) for `steps` steps,
/// maintaining the running Cesàro average; the predicted limit comes from
/// the random-walk Laplacian's Γ.
pub fn simulate_discrete<T: Real>(
    bundle: &Arc<AdjacencyBundle<T>>,
    init: &[T],
    steps: usize,
    samples: usize,
    flow: Flow,
) -> Result<TrajectoryRecord<T>> {
    let n = bundle.n();
    if init.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: init.len(),
        });
    }
    assert!(steps >= 1, "at least one step");

    let s = bundle.s();
    let gamma = predicted_gamma(&rw_laplacian(bundle))?;
    let predicted_limit = match flow {
        Flow::Consensus => gamma.mul_vec(init),
        Flow::Diffusion => gamma.vec_mul(init),
    };
    let mode = match flow {
        Flow::Consensus => SimMode::ConsensusDiscrete,
        Flow::Diffusion => SimMode::DiffusionDiscrete,
    };

    let record_at = sample_indices(steps, samples);
    let mut times = Vec::with_capacity(record_at.len());
    let mut states = Vec::with_capacity(record_at.len());
    let mut cesaro = Vec::with_capacity(record_at.len());
    let mut x: Vec<T> = init.to_vec();
    let mut acc = KahanVec::new(n);
    let mut next_record = 0usize;

    for step in 0..=steps {
        if record_at.get(next_record) == Some(&step) {
            times.push(T::from_usize(step).unwrap());
            states.push(x.clone());
            cesaro.push(if step == 0 { x.clone() } else { acc.mean(step) });
            next_record += 1;
        }
        if step == steps {
            break;
        }
        acc.add(&x);
        x = match flow {
            Flow::Consensus => s.mul_vec(&x),
            Flow::Diffusion => s.vec_mul(&x),
        };
    }

    Ok(TrajectoryRecord {
        mode,
        times,
        states,
        cesaro: Some(cesaro),
        predicted_limit,
    })
}

/// `(1/ℓ) Σ_{j<ℓ} S^j` by running accumulation (one live power, Kahan sums).
pub fn cesaro_matrix<T: Real>(s: &Matrix<T>, steps: usize) -> Matrix<T> {
    assert!(s.is_square());
    assert!(steps >= 1, "at least one step");
    let n = s.n_rows();
    let mut power = Matrix::identity(n);
    let mut sum = Matrix::<T>::zeros(n, n);
    let mut compensation = Matrix::<T>::zeros(n, n);
    for step in 0..steps {
        for i in 0..n {
            for j in 0..n {
                let y = power[(i, j)] - compensation[(i, j)];
                let t = sum[(i, j)] + y;
                compensation[(i, j)] = (t - sum[(i, j)]) - y;
                sum[(i, j)] = t;
            }
        }
        if step + 1 < steps {
            power = power.mul(s);
        }
    }
    sum.scale(T::one() / T::from_usize(steps).unwrap())
}

/// The time-one map `S^d = e^{-𝓛}` of the random-walk Laplacian. Verifies
/// row-stochasticity (row sums within 1e-10, entries ≥ -1e-12) and that the
/// support is the transitive closure of the graph.
pub fn time_one_map<T: Real>(l: &LaplacianMatrix<T>) -> Result<Matrix<T>> {
    if l.kind != LaplacianKind::Rw {
        return Err(Error::WrongLaplacianKind { expected: "rw" });
    }
    let n = l.n();
    let sd = matrix_exponential(&l.matrix, T::one());

    let row_tol = tolerance::<T>(1e-10);
    for (i, sum) in sd.row_sums().iter().enumerate() {
        if (*sum - T::one()).abs() > row_tol {
            return Err(Error::StochasticityViolation(format!(
                "row {} sums to {} instead of 1",
                i + 1,
                sum
            )));
        }
    }
    let entry_tol = tolerance::<T>(1e-12);
    let reach_sets = forward_reachability(l.bundle());
    for i in 0..n {
        for j in 0..n {
            let value = sd[(i, j)];
            if value < -entry_tol {
                return Err(Error::StochasticityViolation(format!(
                    "negative entry {} at ({}, {})",
                    value,
                    i + 1,
                    j + 1
                )));
            }
            let connected = i == j || reach_sets[j].contains(&i);
            if connected && value <= entry_tol {
                return Err(Error::StochasticityViolation(format!(
                    "entry ({}, {}) should be positive: {} sees {}",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                )));
            }
            if !connected && value.abs() > entry_tol {
                return Err(Error::StochasticityViolation(format!(
                    "entry ({}, {}) = {} outside the transitive closure",
                    i + 1,
                    j + 1,
                    value
                )));
            }
        }
    }
    Ok(sd)
}

/// 0-based: `result[j]` = vertices reachable from j by a directed path.
fn forward_reachability<T: Real>(bundle: &AdjacencyBundle<T>) -> Vec<BTreeSet<usize>> {
    let n = bundle.n();
    let mut adj = vec![Vec::new(); n];
    for e in bundle.graph().edges() {
        adj[e.tail - 1].push(e.head - 1);
    }
    (0..n)
        .map(|start| {
            let mut seen = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Probability of a walker started at `j` (1-based) ending in each cabal:
/// exactly `(γ_{1,j}, …, γ_{k,j})`.
pub fn absorption_probabilities<T: Real>(kb: &KernelBasis<T>, j: usize) -> Result<Vec<T>> {
    let n = kb.n();
    if j < 1 || j > n {
        return Err(Error::VertexOutOfRange { id: j, n });
    }
    Ok(kb.gamma.iter().map(|g| g[j - 1]).collect())
}

/// Expected steps for the random walk to first reach the union of cabals,
/// solved from `𝓛τ = 1` on the non-cabal vertices with `τ = 0` on cabals.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingTimeSolution<T> {
    pub tau: Vec<T>,
    /// Union of cabals (1-based vertex ids).
    pub cabal_union: BTreeSet<usize>,
}

pub fn hitting_times<T: Real>(
    l: &LaplacianMatrix<T>,
    rd: &ReachDecomposition,
) -> Result<HittingTimeSolution<T>> {
    if l.kind != LaplacianKind::Rw {
        return Err(Error::WrongLaplacianKind { expected: "rw" });
    }
    let n = l.n();
    let cabal_union = rd.cabal_union();
    let outside: Vec<usize> = (0..n).filter(|i| !cabal_union.contains(&(i + 1))).collect();
    let mut tau = vec![T::zero(); n];
    if !outside.is_empty() {
        let system = l.matrix.submatrix(&outside, &outside);
        let rhs = vec![T::one(); outside.len()];
        let x = lu_solve(&system, &rhs).ok_or(Error::SingularSystem)?;
        for (idx, &i) in outside.iter().enumerate() {
            tau[i] = x[idx];
        }
    }
    Ok(HittingTimeSolution { tau, cabal_union })
}

/// Sampling tables for the random walk with step law `i → j` w.p. `S_ij`
/// (against edge orientation, toward the information sources).
struct Walker {
    rows: Vec<Vec<(usize, f64)>>,
    cabal_of: Vec<Option<usize>>,
}

const WALK_STEP_CAP: u64 = 10_000_000;

impl Walker {
    fn new<T: Real>(bundle: &AdjacencyBundle<T>, rd: &ReachDecomposition) -> Self {
        let n = bundle.n();
        let s = bundle.s();
        let rows = (0..n)
            .map(|i| {
                s.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > T::zero())
                    .map(|(j, &p)| (j, p.to_f64().unwrap_or(0.0)))
                    .collect()
            })
            .collect();
        let mut cabal_of = vec![None; n];
        for (m, reach) in rd.reaches.iter().enumerate() {
            for &v in &reach.cabal {
                cabal_of[v - 1] = Some(m);
            }
        }
        Walker { rows, cabal_of }
    }

    fn step(&self, at: usize, rng: &mut ChaCha8Rng) -> usize {
        let row = &self.rows[at];
        let draw: f64 = rng.random();
        let mut acc = 0.0;
        for &(j, p) in row {
            acc += p;
            if draw < acc {
                return j;
            }
        }
        row.last().expect("stochastic row").0
    }

    /// Walk from `start` (0-based) until a cabal; returns (reach index, steps).
    fn absorb(&self, start: usize, rng: &mut ChaCha8Rng) -> Result<(usize, u64)> {
        let mut at = start;
        let mut steps = 0u64;
        loop {
            if let Some(m) = self.cabal_of[at] {
                return Ok((m, steps));
            }
            if steps >= WALK_STEP_CAP {
                return Err(Error::WalkStalled { cap: WALK_STEP_CAP });
            }
            at = self.step(at, rng);
            steps += 1;
        }
    }
}

/// Monte Carlo estimate of the absorption distribution over cabals for a
/// walker started at `start` (1-based). Returns per-reach frequencies.
pub fn monte_carlo_absorption<T: Real>(
    bundle: &AdjacencyBundle<T>,
    rd: &ReachDecomposition,
    start: usize,
    walks: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = bundle.n();
    if start < 1 || start > n {
        return Err(Error::VertexOutOfRange { id: start, n });
    }
    let walker = Walker::new(bundle, rd);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = vec![0u64; rd.k()];
    for _ in 0..walks {
        let (m, _) = walker.absorb(start - 1, &mut rng)?;
        hits[m] += 1;
    }
    Ok(hits.into_iter().map(|h| h as f64 / walks as f64).collect())
}

/// Monte Carlo estimate of the expected hitting time of the cabal union
/// from `start` (1-based).
pub fn monte_carlo_hitting_time<T: Real>(
    bundle: &AdjacencyBundle<T>,
    rd: &ReachDecomposition,
    start: usize,
    walks: u64,
    seed: u64,
) -> Result<f64> {
    let n = bundle.n();
    if start < 1 || start > n {
        return Err(Error::VertexOutOfRange { id: start, n });
    }
    let walker = Walker::new(bundle, rd);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0f64;
    let mut compensation = 0.0f64;
    for _ in 0..walks {
        let (_, steps) = walker.absorb(start - 1, &mut rng)?;
        let y = steps as f64 - compensation;
        let t = total + y;
        compensation = (t - total) - y;
        total = t;
    }
    Ok(total / walks as f64)
}
