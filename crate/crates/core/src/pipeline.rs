//! Encode, trace, refine and snap in one call.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Polyline;
use crate::qualitative::{direction_matrix, encode_description, EopraDescription, Granularity};
use crate::reconstruct::trace_hull;
use crate::refine::{
    matrix_mismatches, refine_with_epsilon, snap_shut, RefinementConfig, RefinementReport,
    StopReason,
};

/// Pairwise difference as an exact count over `n²` plus its decimal value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffRecord {
    pub mismatches: usize,
    pub entries: usize,
    pub fraction: String,
    pub value: f64,
}

impl DiffRecord {
    pub fn new(mismatches: usize, n: usize) -> Self {
        let entries = n * n;
        DiffRecord {
            mismatches,
            entries,
            fraction: format!("{mismatches}/{entries}"),
            value: mismatches as f64 / entries as f64,
        }
    }
}

/// Per-run summary written by the `pipeline` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub vertices: usize,
    pub m: u32,
    pub iterations: usize,
    pub adjust_steps: u32,
    pub stop: StopReason,
    pub gap_epsilon: f64,
    pub initial_gap: f64,
    pub final_gap: f64,
    pub initial_diff: DiffRecord,
    pub final_diff: DiffRecord,
    pub hull_equal: bool,
    pub snapped: bool,
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub description: EopraDescription,
    pub initial: Polyline,
    /// Refined open chain before snapping.
    pub refined: Polyline,
    /// Snapped polygon, or the refined chain when snapping was refused.
    pub final_polyline: Polyline,
    pub refinement: RefinementReport,
    pub report: PipelineReport,
}

/// Runs the whole round trip on a closed input polygon. The closure
/// tolerance is taken relative to the input's bounding-box diagonal.
pub fn run_pipeline(input: &Polyline, m: Granularity, cfg: &RefinementConfig) -> Result<PipelineRun> {
    let description = encode_description(input, m)?;
    let initial = trace_hull(&description);
    let epsilon = cfg.gap_epsilon_fraction * input.bbox_diagonal();
    let refinement = refine_with_epsilon(&initial, &description, cfg, epsilon)?;
    let refined = refinement.state.polyline().clone();
    let snap = snap_shut(&refined, &description)?;

    let final_matrix = direction_matrix(&snap.polyline, m)?;
    let final_mismatches = matrix_mismatches(&final_matrix, description.pairwise())?;
    let hull_equal = final_matrix.hull_sectors() == description.hull_sectors();
    let n = description.n();
    let r = &refinement.report;
    let report = PipelineReport {
        vertices: n,
        m: m.m(),
        iterations: r.iterations,
        adjust_steps: r.adjust_steps,
        stop: r.stop,
        gap_epsilon: r.gap_epsilon,
        initial_gap: r.initial_gap,
        final_gap: r.final_gap,
        initial_diff: DiffRecord::new(r.initial_mismatches, n),
        final_diff: DiffRecord::new(final_mismatches, n),
        hull_equal,
        snapped: snap.snapped,
    };
    Ok(PipelineRun {
        description,
        initial,
        refined,
        final_polyline: snap.polyline,
        refinement: refinement.report,
        report,
    })
}
