//! Machine-readable reports: the full analysis report, JSON serialization
//! with 17-significant-digit floats, and CSV writers for matrices and
//! trajectories. Vertex ids are 1-based everywhere in output.

use crate::dynamics::TrajectoryRecord;
use crate::error::Result;
use crate::graph::{build_adjacency, Digraph};
use crate::kernels::{gamma_matrix, kernel_basis};
use crate::laplacian::{comb_laplacian, rw_laplacian, LaplacianKind, LaplacianMatrix};
use crate::matrix::Matrix;
use crate::scalar::{tolerance, Real};
use crate::spectrum::{eigenvalues, gersgorin_check};
use crate::taxonomy::{connectivity_class, reach_decomposition};

use serde::Serialize;
use std::io::Write;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub connectivity: String,
    pub loop_added: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReachSummary {
    pub reach: Vec<usize>,
    pub cabal: Vec<usize>,
    pub exclusive: Vec<usize>,
    pub common: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TaxonomySummary {
    pub k: usize,
    pub reaches: Vec<ReachSummary>,
    pub sccs: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelReport {
    pub reaches: usize,
    pub gamma: Vec<Vec<f64>>,
    pub gamma_bar: Vec<Vec<f64>>,
    #[serde(rename = "Gamma")]
    pub big_gamma: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenvaluePair {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiskReport {
    pub center: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GersgorinSummary {
    pub disks: Vec<DiskReport>,
    pub all_contained: bool,
}

/// Everything `analyze` emits: structure, kernels, Γ, spectrum, disks.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub graph: GraphSummary,
    pub taxonomy: TaxonomySummary,
    pub laplacian_kind: LaplacianKind,
    pub kernels: KernelReport,
    pub spectrum: Vec<EigenvaluePair>,
    pub zero_multiplicity: usize,
    pub gersgorin: GersgorinSummary,
    pub warnings: Vec<String>,
}

fn to_f64_vec<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

fn to_f64_rows<T: Real>(m: &Matrix<T>) -> Vec<Vec<f64>> {
    m.rows().map(to_f64_vec).collect()
}

/// Run the full pipeline on a weakly connected digraph. `Comb` and `Rw` are
/// the supported report kinds; `Generalized` falls back to `Rw` (a
/// generalized Laplacian needs its diagonals, which a report has no way to
/// carry), and the emitted `laplacian_kind` records what was analyzed.
pub fn analyze<T: Real>(g: &Digraph<T>, kind: LaplacianKind) -> Result<AnalysisReport> {
    let rd = reach_decomposition(g)?;
    let bundle = Arc::new(build_adjacency(g));
    let l: LaplacianMatrix<T> = match kind {
        LaplacianKind::Comb => comb_laplacian(&bundle),
        LaplacianKind::Rw | LaplacianKind::Generalized => rw_laplacian(&bundle),
    };
    let kb = kernel_basis(&l, &rd)?;
    let gamma = gamma_matrix(&kb);
    let spectrum = eigenvalues(&l.matrix)?;
    let gersgorin = gersgorin_check(&l, &spectrum);
    let zero_multiplicity = spectrum.zero_multiplicity(tolerance::<T>(1e-7));

    let mut warnings = Vec::new();
    if zero_multiplicity != rd.k() {
        warnings.push(format!(
            "zero eigenvalue multiplicity {} differs from reach count {}",
            zero_multiplicity,
            rd.k()
        ));
    }
    if !gersgorin.all_contained {
        warnings.push("an eigenvalue escaped the Gersgorin disks".to_string());
    }

    Ok(AnalysisReport {
        graph: GraphSummary {
            n: g.n(),
            edges: g.edge_count(),
            connectivity: connectivity_class(g).to_string(),
            loop_added: bundle.loop_added().iter().copied().collect(),
        },
        taxonomy: TaxonomySummary {
            k: rd.k(),
            reaches: rd
                .reaches
                .iter()
                .map(|r| ReachSummary {
                    reach: r.set.iter().copied().collect(),
                    cabal: r.cabal.iter().copied().collect(),
                    exclusive: r.exclusive.iter().copied().collect(),
                    common: r.common.iter().copied().collect(),
                })
                .collect(),
            sccs: rd.condensation.sccs.clone(),
        },
        laplacian_kind: l.kind,
        kernels: KernelReport {
            reaches: kb.k(),
            gamma: kb.gamma.iter().map(|g| to_f64_vec(g)).collect(),
            gamma_bar: kb.gamma_bar.iter().map(|g| to_f64_vec(g)).collect(),
            big_gamma: to_f64_rows(&gamma),
        },
        spectrum: spectrum
            .to_pairs()
            .into_iter()
            .map(|(re, im)| EigenvaluePair { re, im })
            .collect(),
        zero_multiplicity,
        gersgorin: GersgorinSummary {
            disks: gersgorin
                .disks
                .iter()
                .map(|d| DiskReport {
                    center: d.center.to_f64().unwrap_or(f64::NAN),
                    radius: d.radius.to_f64().unwrap_or(f64::NAN),
                })
                .collect(),
            all_contained: gersgorin.all_contained,
        },
        warnings,
    })
}

/// JSON formatter that renders every f64 with 17 significant digits, so
/// reports are byte-stable and round-trip exactly.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{:.16e}", value)
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{:.16e}", value)
    }
}

/// Serialize any report value to JSON with 17-significant-digit floats.
pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser).expect("report serialization");
    String::from_utf8(out).expect("json is utf-8")
}

/// Row-major CSV with 17 significant digits per entry.
pub fn matrix_to_csv<T: Real>(m: &Matrix<T>) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|v| format!("{:.16e}", v.to_f64().unwrap_or(f64::NAN)))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Trajectory CSV: `time,x_1..x_n[,avg_1..avg_n]`, one row per sample.
pub fn trajectory_to_csv<T: Real>(record: &TrajectoryRecord<T>) -> String {
    let n = record.predicted_limit.len();
    let mut header = String::from("time");
    for i in 1..=n {
        header.push_str(&format!(",x_{i}"));
    }
    if record.cesaro.is_some() {
        for i in 1..=n {
            header.push_str(&format!(",avg_{i}"));
        }
    }
    let mut out = header;
    out.push('\n');
    for (idx, time) in record.times.iter().enumerate() {
        let mut row = format!("{:.16e}", time.to_f64().unwrap_or(f64::NAN));
        for v in &record.states[idx] {
            row.push_str(&format!(",{:.16e}", v.to_f64().unwrap_or(f64::NAN)));
        }
        if let Some(cesaro) = &record.cesaro {
            for v in &cesaro[idx] {
                row.push_str(&format!(",{:.16e}", v.to_f64().unwrap_or(f64::NAN)));
            }
        }
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// JSON view of a trajectory (times, states, optional Cesàro averages,
/// predicted limit, final deviation).
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrajectoryReport {
    pub mode: String,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cesaro: Option<Vec<Vec<f64>>>,
    pub predicted_limit: Vec<f64>,
    pub final_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_cesaro_deviation: Option<f64>,
}

impl TrajectoryReport {
    pub fn from_record<T: Real>(record: &TrajectoryRecord<T>) -> Self {
        TrajectoryReport {
            mode: record.mode.to_string(),
            times: to_f64_vec(&record.times),
            states: record.states.iter().map(|s| to_f64_vec(s)).collect(),
            cesaro: record
                .cesaro
                .as_ref()
                .map(|c| c.iter().map(|s| to_f64_vec(s)).collect()),
            predicted_limit: to_f64_vec(&record.predicted_limit),
            final_deviation: record.final_deviation().to_f64().unwrap_or(f64::NAN),
            final_cesaro_deviation: record
                .final_cesaro_deviation()
                .map(|d| d.to_f64().unwrap_or(f64::NAN)),
        }
    }
}
