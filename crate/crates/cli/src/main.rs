//! `lapdyn` — analyze weighted digraphs and their Laplacian dynamics.
//!
//! Exit codes: 0 success, 2 input error, 3 graph not weakly connected,
//! 4 numerical failure.

mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use lapdyn::{
    absorption_probabilities, analyze, build_adjacency, comb_laplacian, eigenvalues,
    hitting_times, kernel_basis, monte_carlo_absorption, monte_carlo_hitting_time,
    reach_decomposition, report, rw_laplacian, simulate_continuous, simulate_discrete, to_json,
    trajectory_to_csv, weak_components, AdjacencyBundle64, Digraph64, Error, LaplacianKind,
    LaplacianMatrix64, SimMode, TrajectoryRecord64,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "lapdyn",
    version,
    about = "Laplacian dynamics on weighted digraphs: structure, kernels, spectra, simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Emit JSON where another format is the default.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for Monte Carlo estimates (recorded in the output).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Comb,
    Rw,
}

impl From<KindArg> for LaplacianKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Comb => LaplacianKind::Comb,
            KindArg::Rw => LaplacianKind::Rw,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full structural report: taxonomy, kernel bases, Gamma, spectrum, disks.
    Analyze {
        /// Edge-list file (first line: vertex count; then `tail head [weight]`).
        path: PathBuf,
        /// Laplacian kind to analyze.
        #[arg(long, value_enum, default_value_t = KindArg::Rw)]
        kind: KindArg,
        /// Also write the Laplacian matrix as row-major CSV (17 digits).
        #[arg(long)]
        laplacian_csv: Option<PathBuf>,
    },
    /// Integrate consensus/diffusion dynamics and write the trajectory.
    Simulate {
        path: PathBuf,
        /// consensus-continuous | diffusion-continuous | consensus-discrete | diffusion-discrete
        #[arg(long)]
        mode: SimMode,
        /// `uniform`, `vertex:<id>`, or `file:<path>` (n whitespace-separated floats).
        #[arg(long)]
        init: String,
        /// Time horizon (continuous modes).
        #[arg(long)]
        horizon: Option<f64>,
        /// Iteration count (discrete modes).
        #[arg(long)]
        steps: Option<usize>,
        /// Record every stride-th step.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Laplacian kind for continuous modes.
        #[arg(long, value_enum, default_value_t = KindArg::Rw)]
        kind: KindArg,
    },
    /// Eigenvalues of the chosen Laplacian and of S, optionally as an SVG plot.
    Spectrum {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Rw)]
        kind: KindArg,
        /// Also write a scatter plot of both spectra to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Expected steps for the random walk to reach the union of cabals.
    HittingTimes {
        path: PathBuf,
        /// Cross-check each non-cabal vertex with this many random walks.
        #[arg(long)]
        walks: Option<u64>,
    },
    /// Absorption probabilities into each cabal from a start vertex.
    Absorb {
        path: PathBuf,
        /// Start vertex (1-based).
        #[arg(long)]
        vertex: usize,
        /// Cross-check with this many random walks.
        #[arg(long)]
        walks: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            for hint in &failure.hints {
                eprintln!("  {hint}");
            }
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
    hints: Vec<String>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            hints: Vec::new(),
        }
    }
}

fn classify(err: Error) -> Failure {
    let code = match &err {
        Error::Parse { .. }
        | Error::VertexOutOfRange { .. }
        | Error::NonPositiveWeight { .. }
        | Error::DuplicateEdge { .. }
        | Error::DimensionMismatch { .. }
        | Error::ViolatesDominance { .. }
        | Error::WrongLaplacianKind { .. } => 2,
        Error::NotWeaklyConnected { .. } => 3,
        Error::NonPositiveRate { .. }
        | Error::SingularCommonBlock { .. }
        | Error::PerronIterationDiverged { .. }
        | Error::NoConvergence { .. }
        | Error::StepUnderflow { .. }
        | Error::StochasticityViolation(_)
        | Error::SingularSystem
        | Error::WalkStalled { .. } => 4,
    };
    Failure {
        code,
        message: err.to_string(),
        hints: Vec::new(),
    }
}

fn load_graph(path: &Path) -> Result<Digraph64, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Digraph64::parse(&text).map_err(classify)
}

/// Not-weakly-connected errors get a per-component hint.
fn connected_or_hint(g: &Digraph64) -> Result<(), Failure> {
    let comps = weak_components(g);
    if comps.len() <= 1 {
        return Ok(());
    }
    let mut failure = classify(Error::NotWeaklyConnected {
        components: comps.len(),
    });
    for (i, c) in comps.iter().enumerate() {
        failure.hints.push(format!("component {}: {:?}", i + 1, c));
    }
    failure
        .hints
        .push("analyze each component separately".to_string());
    Err(failure)
}

fn emit(cli: &Cli, content: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn parse_init(spec: &str, n: usize) -> Result<Vec<f64>, Failure> {
    if spec == "uniform" {
        return Ok(vec![1.0 / n as f64; n]);
    }
    if let Some(id) = spec.strip_prefix("vertex:") {
        let id: usize = id
            .parse()
            .map_err(|_| Failure::input(format!("invalid vertex in init spec {spec:?}")))?;
        if id < 1 || id > n {
            return Err(Failure::input(format!(
                "init vertex {id} out of range 1..={n}"
            )));
        }
        let mut v = vec![0.0; n];
        v[id - 1] = 1.0;
        return Ok(v);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("{path}: {e}")))?;
        let values: Result<Vec<f64>, _> = text.split_whitespace().map(str::parse).collect();
        let values =
            values.map_err(|e| Failure::input(format!("invalid number in {path}: {e}")))?;
        if values.len() != n {
            return Err(Failure::input(format!(
                "init file has {} values, graph has {n} vertices",
                values.len()
            )));
        }
        return Ok(values);
    }
    Err(Failure::input(format!(
        "invalid init spec {spec:?}; expected `uniform`, `vertex:<id>`, or `file:<path>`"
    )))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze {
            path,
            kind,
            laplacian_csv,
        } => {
            let g = load_graph(path)?;
            connected_or_hint(&g)?;
            let report = analyze(&g, (*kind).into()).map_err(classify)?;
            if let Some(csv_path) = laplacian_csv {
                let bundle = Arc::new(build_adjacency(&g));
                let l: LaplacianMatrix64 = match kind {
                    KindArg::Comb => comb_laplacian(&bundle),
                    KindArg::Rw => rw_laplacian(&bundle),
                };
                std::fs::write(csv_path, lapdyn::matrix_to_csv(&l.matrix))
                    .map_err(|e| Failure::input(format!("{}: {e}", csv_path.display())))?;
            }
            emit(cli, &to_json(&report))
        }
        Command::Simulate {
            path,
            mode,
            init,
            horizon,
            steps,
            stride,
            kind,
        } => {
            let g = load_graph(path)?;
            connected_or_hint(&g)?;
            let bundle = Arc::new(build_adjacency(&g));
            let init = parse_init(init, g.n())?;
            let stride = (*stride).max(1);
            let record = run_simulation(&bundle, *mode, &init, *horizon, *steps, stride, *kind)?;

            let deviation = record.final_deviation();
            eprintln!("mode: {}", record.mode);
            eprintln!("predicted limit: {:?}", record.predicted_limit);
            eprintln!("final deviation: {deviation:.3e}");
            if let Some(cdev) = record.final_cesaro_deviation() {
                eprintln!("final cesaro deviation: {cdev:.3e}");
            }
            if record.raw_iterates_look_periodic() {
                eprintln!("warning: raw iterates periodic; see cesaro column");
            }

            if cli.json {
                emit(cli, &to_json(&report::TrajectoryReport::from_record(&record)))
            } else {
                emit(cli, &trajectory_to_csv(&record))
            }
        }
        Command::Spectrum { path, kind, svg } => {
            let g = load_graph(path)?;
            let bundle = Arc::new(build_adjacency(&g));
            let l: LaplacianMatrix64 = match kind {
                KindArg::Comb => comb_laplacian(&bundle),
                KindArg::Rw => rw_laplacian(&bundle),
            };
            let laplacian = eigenvalues(&l.matrix).map_err(classify)?;
            let stochastic = eigenvalues(bundle.s()).map_err(classify)?;

            #[derive(Serialize)]
            struct Pair {
                re: f64,
                im: f64,
            }
            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct SpectrumOut {
                kind: LaplacianKind,
                laplacian: Vec<Pair>,
                stochastic: Vec<Pair>,
            }
            let out = SpectrumOut {
                kind: l.kind,
                laplacian: laplacian
                    .to_pairs()
                    .into_iter()
                    .map(|(re, im)| Pair { re, im })
                    .collect(),
                stochastic: stochastic
                    .to_pairs()
                    .into_iter()
                    .map(|(re, im)| Pair { re, im })
                    .collect(),
            };
            if let Some(svg_path) = svg {
                let negated: Vec<(f64, f64)> = laplacian
                    .to_pairs()
                    .into_iter()
                    .map(|(re, im)| (-re, -im))
                    .collect();
                let doc = svg::spectrum_scatter(&stochastic.to_pairs(), &negated);
                std::fs::write(svg_path, doc)
                    .map_err(|e| Failure::input(format!("{}: {e}", svg_path.display())))?;
            }
            emit(cli, &to_json(&out))
        }
        Command::HittingTimes { path, walks } => {
            let g = load_graph(path)?;
            connected_or_hint(&g)?;
            let bundle = Arc::new(build_adjacency(&g));
            let rd = reach_decomposition(&g).map_err(classify)?;
            let sol = hitting_times(&rw_laplacian(&bundle), &rd).map_err(classify)?;
            let mc_means = match walks {
                Some(w) => {
                    let mut means = vec![0.0; g.n()];
                    for v in 1..=g.n() {
                        if !sol.cabal_union.contains(&v) {
                            means[v - 1] =
                                monte_carlo_hitting_time(bundle.as_ref(), &rd, v, *w, cli.seed)
                                    .map_err(classify)?;
                        }
                    }
                    Some(means)
                }
                None => None,
            };
            if cli.json {
                #[derive(Serialize)]
                #[serde(rename_all = "camelCase")]
                struct MonteCarloOut {
                    walks: u64,
                    seed: u64,
                    means: Vec<f64>,
                }
                #[derive(Serialize)]
                #[serde(rename_all = "camelCase")]
                struct HittingOut {
                    cabal_union: Vec<usize>,
                    tau: Vec<f64>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    monte_carlo: Option<MonteCarloOut>,
                }
                let out = HittingOut {
                    cabal_union: sol.cabal_union.iter().copied().collect(),
                    tau: sol.tau.clone(),
                    monte_carlo: mc_means.map(|means| MonteCarloOut {
                        walks: walks.unwrap(),
                        seed: cli.seed,
                        means,
                    }),
                };
                emit(cli, &to_json(&out))
            } else {
                let mut text = format!(
                    "cabal union: {:?}\n",
                    sol.cabal_union.iter().copied().collect::<Vec<_>>()
                );
                for (i, t) in sol.tau.iter().enumerate() {
                    text.push_str(&format!("{} {:.16e}", i + 1, t));
                    if let Some(means) = &mc_means {
                        text.push_str(&format!(" (monte carlo {:.4})", means[i]));
                    }
                    text.push('\n');
                }
                if mc_means.is_some() {
                    text.push_str(&format!(
                        "monte carlo: {} walks per vertex, seed {}\n",
                        walks.unwrap(),
                        cli.seed
                    ));
                }
                emit(cli, &text)
            }
        }
        Command::Absorb {
            path,
            vertex,
            walks,
        } => {
            let g = load_graph(path)?;
            connected_or_hint(&g)?;
            let bundle: Arc<AdjacencyBundle64> = Arc::new(build_adjacency(&g));
            let rd = reach_decomposition(&g).map_err(classify)?;
            let kb = kernel_basis(&rw_laplacian(&bundle), &rd).map_err(classify)?;
            let probabilities = absorption_probabilities(&kb, *vertex).map_err(classify)?;
            let frequencies = match walks {
                Some(w) => Some(
                    monte_carlo_absorption(bundle.as_ref(), &rd, *vertex, *w, cli.seed)
                        .map_err(classify)?,
                ),
                None => None,
            };

            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct MonteCarloOut {
                walks: u64,
                seed: u64,
                frequencies: Vec<f64>,
            }
            #[derive(Serialize)]
            #[serde(rename_all = "camelCase")]
            struct AbsorbOut {
                vertex: usize,
                cabals: Vec<Vec<usize>>,
                probabilities: Vec<f64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                monte_carlo: Option<MonteCarloOut>,
            }
            let out = AbsorbOut {
                vertex: *vertex,
                cabals: rd
                    .reaches
                    .iter()
                    .map(|r| r.cabal.iter().copied().collect())
                    .collect(),
                probabilities: probabilities.clone(),
                monte_carlo: frequencies.map(|frequencies| MonteCarloOut {
                    walks: walks.unwrap(),
                    seed: cli.seed,
                    frequencies,
                }),
            };
            if cli.json {
                emit(cli, &to_json(&out))
            } else {
                let mut text = String::new();
                for (m, p) in out.probabilities.iter().enumerate() {
                    text.push_str(&format!(
                        "cabal {:?}: {:.16e}\n",
                        out.cabals[m], p
                    ));
                }
                if let Some(mc) = &out.monte_carlo {
                    text.push_str(&format!(
                        "monte carlo ({} walks, seed {}): {:?}\n",
                        mc.walks, mc.seed, mc.frequencies
                    ));
                }
                emit(cli, &text)
            }
        }
    }
}

fn run_simulation(
    bundle: &Arc<AdjacencyBundle64>,
    mode: SimMode,
    init: &[f64],
    horizon: Option<f64>,
    steps: Option<usize>,
    stride: usize,
    kind: KindArg,
) -> Result<TrajectoryRecord64, Failure> {
    if mode.is_discrete() {
        let steps = steps
            .ok_or_else(|| Failure::input("discrete modes need --steps"))?
            .max(1);
        let samples = (steps / stride).max(1);
        simulate_discrete(bundle, init, steps, samples, mode.flow()).map_err(classify)
    } else {
        let horizon =
            horizon.ok_or_else(|| Failure::input("continuous modes need --horizon"))?;
        let horizon_ok = horizon.is_finite() && horizon > 0.0;
        if !horizon_ok {
            return Err(Failure::input("horizon must be a positive finite number"));
        }
        let l = match kind {
            KindArg::Comb => comb_laplacian(bundle),
            KindArg::Rw => rw_laplacian(bundle),
        };
        // Match the integrator's step count so stride means "every
        // stride-th step".
        let h = 0.01f64.min(0.1 / l.matrix.inf_norm().max(1e-300));
        let total = (horizon / h).ceil().max(1.0) as usize;
        let samples = (total / stride).max(1);
        simulate_continuous(&l, init, horizon, samples, mode.flow()).map_err(classify)
    }
}
