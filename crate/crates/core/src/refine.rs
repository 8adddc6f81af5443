//! Greedy refinement of a traced chain towards closure.
//!
//! Every step applies one of four mutators (extend, contract, turn either
//! way) at one interior vertex of the open chain and keeps only candidates
//! that do not increase the closure gap, do not increase the pairwise
//! direction difference against the goal, improve at least one of the two,
//! and keep every hull sector that already matches the goal. The best
//! candidate by gap (then difference) becomes the next state. Mutation
//! magnitudes shrink whenever the gap stops improving.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{closure_gap, Polyline};
use crate::qualitative::{direction_matrix, DirectionMatrix, EopraDescription, Granularity};

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementConfig {
    pub max_iterations: usize,
    /// Number of times the mutation magnitudes may be reduced.
    pub max_adjust_steps: u32,
    /// Gap considered closed, as a fraction of the reference bounding-box
    /// diagonal.
    pub gap_epsilon_fraction: f64,
    pub initial_angle_step: f64,
    pub min_angle_step: f64,
    /// (extend, contract) length factors at the coarsest level.
    pub initial_length_factors: (f64, f64),
    /// (extend, contract) length factors at the finest level.
    pub min_length_factors: (f64, f64),
    /// Consecutive fruitless iterations at the finest level before giving up.
    pub stall_window: usize,
}

impl RefinementConfig {
    pub fn for_granularity(m: Granularity) -> Self {
        let initial_angle_step = m.angular_resolution() / 4.0;
        RefinementConfig {
            max_iterations: 100,
            max_adjust_steps: 20,
            gap_epsilon_fraction: 1e-3,
            initial_angle_step,
            min_angle_step: initial_angle_step / 20.0,
            initial_length_factors: (2.0, 0.5),
            min_length_factors: (1.05, 0.95),
            stall_window: 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Domain(msg.to_string()));
        if self.max_iterations < 1 {
            return fail("max_iterations must be at least 1");
        }
        if !(self.gap_epsilon_fraction > 0.0 && self.gap_epsilon_fraction < 1.0) {
            return fail("gap_epsilon_fraction must lie in (0, 1)");
        }
        if !(self.min_angle_step > 0.0 && self.min_angle_step < self.initial_angle_step) {
            return fail("angle steps must satisfy 0 < min < initial");
        }
        let (grow, shrink) = self.initial_length_factors;
        let (min_grow, min_shrink) = self.min_length_factors;
        if !(grow >= min_grow && min_grow > 1.0 && shrink <= min_shrink && min_shrink < 1.0 && shrink > 0.0) {
            return fail("length factors must satisfy 0 < contract <= min contract < 1 < min extend <= extend");
        }
        if self.stall_window < 1 {
            return fail("stall_window must be at least 1");
        }
        Ok(())
    }

    fn level_fraction(&self, level: u32) -> f64 {
        if self.max_adjust_steps == 0 {
            0.0
        } else {
            f64::from(level.min(self.max_adjust_steps)) / f64::from(self.max_adjust_steps)
        }
    }

    /// Turn magnitude at an adjustment level: linear from the initial step
    /// down to the minimum step.
    pub fn angle_step(&self, level: u32) -> f64 {
        let t = self.level_fraction(level);
        self.initial_angle_step + (self.min_angle_step - self.initial_angle_step) * t
    }

    /// (extend, contract) factors at an adjustment level, interpolated
    /// geometrically between the initial and minimum factors.
    pub fn length_factors(&self, level: u32) -> (f64, f64) {
        let t = self.level_fraction(level);
        let geo = |a: f64, b: f64| a.powf(1.0 - t) * b.powf(t);
        (
            geo(self.initial_length_factors.0, self.min_length_factors.0),
            geo(self.initial_length_factors.1, self.min_length_factors.1),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutatorKind {
    Extend,
    Contract,
    TurnCcw,
    TurnCw,
}

impl MutatorKind {
    pub const ALL: [MutatorKind; 4] = [
        MutatorKind::Extend,
        MutatorKind::Contract,
        MutatorKind::TurnCcw,
        MutatorKind::TurnCw,
    ];
}

impl fmt::Display for MutatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutatorKind::Extend => "extend",
            MutatorKind::Contract => "contract",
            MutatorKind::TurnCcw => "turn+",
            MutatorKind::TurnCw => "turn-",
        })
    }
}

/// Applies one mutation at interior vertex `vertex` of an open chain.
///
/// Extend and contract multiply the outgoing edge length by `magnitude`
/// (`> 1` and in `(0, 1)` respectively) and translate the downstream tail
/// along that edge. The turn mutators rotate the tail about the vertex by
/// `±magnitude` radians. Upstream points never move.
pub fn apply_mutator(
    chain: &Polyline,
    vertex: usize,
    kind: MutatorKind,
    magnitude: f64,
) -> Result<Polyline> {
    if chain.is_closed() {
        return Err(Error::Domain("mutators apply to open chains only".into()));
    }
    let points = chain.points();
    if vertex == 0 || vertex + 1 >= points.len() {
        return Err(Error::Domain(format!(
            "vertex {vertex} is not interior to a chain of {} points",
            points.len()
        )));
    }
    if !magnitude.is_finite() || magnitude <= 0.0 {
        return Err(Error::Domain(format!("mutation magnitude must be positive, got {magnitude}")));
    }
    let pivot = points[vertex];
    let mut out = points.to_vec();
    match kind {
        MutatorKind::Extend | MutatorKind::Contract => {
            let valid = match kind {
                MutatorKind::Extend => magnitude > 1.0,
                _ => magnitude < 1.0,
            };
            if !valid {
                return Err(Error::Domain(format!("{kind} factor {magnitude} points the wrong way")));
            }
            let edge = points[vertex + 1] - pivot;
            let shift = edge.scale(magnitude - 1.0);
            if (edge.length() * magnitude) <= 0.0 {
                return Err(Error::DegenerateEdge { vertex });
            }
            for p in &mut out[vertex + 1..] {
                *p = *p + shift;
            }
        }
        MutatorKind::TurnCcw | MutatorKind::TurnCw => {
            let angle = if kind == MutatorKind::TurnCcw { magnitude } else { -magnitude };
            for p in &mut out[vertex + 1..] {
                *p = pivot + (*p - pivot).rotate(angle);
            }
        }
    }
    Ok(Polyline::open(out))
}

/// Number of off-diagonal entries where the two matrices disagree.
pub fn matrix_mismatches(a: &DirectionMatrix, b: &DirectionMatrix) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .filter(|(x, y)| x != y)
        .count())
}

/// Fraction of mismatching entries over `n²`.
pub fn matrix_diff(a: &DirectionMatrix, b: &DirectionMatrix) -> Result<f64> {
    let k = matrix_mismatches(a, b)?;
    let n = a.n();
    if n == 0 {
        return Ok(0.0);
    }
    Ok(k as f64 / (n * n) as f64)
}

/// A single applied mutation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub vertex: usize,
    pub kind: MutatorKind,
    pub magnitude: f64,
}

/// An open chain together with its cached scores against a goal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementState {
    polyline: Polyline,
    matrix: DirectionMatrix,
    gap: f64,
    mismatches: usize,
    /// Current adjustment level; higher means finer mutations.
    pub adjust_factor: u32,
    last_move: Option<Move>,
}

impl RefinementState {
    pub fn new(polyline: Polyline, goal: &DirectionMatrix, m: Granularity, adjust_factor: u32) -> Result<Self> {
        if polyline.is_closed() {
            return Err(Error::Domain("refinement works on open chains".into()));
        }
        let matrix = direction_matrix(&polyline, m)?;
        let mismatches = matrix_mismatches(&matrix, goal)?;
        Ok(RefinementState {
            gap: closure_gap(&polyline),
            polyline,
            matrix,
            mismatches,
            adjust_factor,
            last_move: None,
        })
    }

    pub fn polyline(&self) -> &Polyline {
        &self.polyline
    }

    pub fn into_polyline(self) -> Polyline {
        self.polyline
    }

    pub fn matrix(&self) -> &DirectionMatrix {
        &self.matrix
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn mismatches(&self) -> usize {
        self.mismatches
    }

    pub fn diff(&self) -> f64 {
        let n = self.matrix.n();
        self.mismatches as f64 / (n * n) as f64
    }

    pub fn last_move(&self) -> Option<Move> {
        self.last_move
    }
}

fn hull_preserved(current: &DirectionMatrix, candidate: &DirectionMatrix, goal: &DirectionMatrix) -> bool {
    let n = goal.n();
    (0..n).all(|i| {
        let j = (i + 1) % n;
        current.get(i, j) != goal.get(i, j) || candidate.get(i, j) == goal.get(i, j)
    })
}

/// All valid one-step successors of `state`, best first.
///
/// Candidates are ordered by gap, then difference, then by vertex and
/// mutator order, so the result does not depend on evaluation order.
pub fn generate_successors(
    state: &RefinementState,
    goal: &EopraDescription,
    cfg: &RefinementConfig,
) -> Vec<RefinementState> {
    let m = goal.m();
    let level = state.adjust_factor;
    let turn = cfg.angle_step(level);
    let (grow, shrink) = cfg.length_factors(level);
    let interior = state.polyline.len().saturating_sub(1);

    let mut valid = Vec::new();
    for vertex in 1..interior {
        for kind in MutatorKind::ALL {
            let magnitude = match kind {
                MutatorKind::Extend => grow,
                MutatorKind::Contract => shrink,
                MutatorKind::TurnCcw | MutatorKind::TurnCw => turn,
            };
            let Ok(chain) = apply_mutator(&state.polyline, vertex, kind, magnitude) else {
                continue;
            };
            let Ok(mut candidate) = RefinementState::new(chain, goal.pairwise(), m, level) else {
                continue;
            };
            let no_worse = candidate.gap <= state.gap && candidate.mismatches <= state.mismatches;
            let better = candidate.gap < state.gap || candidate.mismatches < state.mismatches;
            if no_worse && better && hull_preserved(&state.matrix, &candidate.matrix, goal.pairwise()) {
                candidate.last_move = Some(Move {
                    vertex,
                    kind,
                    magnitude,
                });
                valid.push(candidate);
            }
        }
    }
    valid.sort_by(|a, b| {
        a.gap
            .total_cmp(&b.gap)
            .then(a.mismatches.cmp(&b.mismatches))
    });
    valid
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// Gap at or below the closure tolerance.
    Closed,
    /// No improvement over the stall window at the finest adjustment level.
    NotImproving,
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub gap: f64,
    pub mismatches: usize,
    pub adjust_factor: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub vertices: usize,
    pub iterations: usize,
    pub adjust_steps: u32,
    pub stop: StopReason,
    pub gap_epsilon: f64,
    pub initial_gap: f64,
    pub final_gap: f64,
    pub initial_mismatches: usize,
    pub final_mismatches: usize,
    /// Accepted state after every iteration, starting with the initial one.
    pub trace: Vec<TraceStep>,
}

impl RefinementReport {
    pub fn initial_diff(&self) -> f64 {
        self.initial_mismatches as f64 / (self.vertices * self.vertices) as f64
    }

    pub fn final_diff(&self) -> f64 {
        self.final_mismatches as f64 / (self.vertices * self.vertices) as f64
    }
}

#[derive(Debug, Clone)]
pub struct Refinement {
    pub state: RefinementState,
    pub report: RefinementReport,
}

/// Refines a traced chain, measuring closure against the chain's own
/// bounding-box diagonal.
pub fn refine(initial: &Polyline, goal: &EopraDescription, cfg: &RefinementConfig) -> Result<Refinement> {
    let epsilon = cfg.gap_epsilon_fraction * initial.bbox_diagonal();
    refine_with_epsilon(initial, goal, cfg, epsilon)
}

/// Refines a traced chain until its closure gap drops to `gap_epsilon`, the
/// scores stop improving, or the iteration budget runs out.
pub fn refine_with_epsilon(
    initial: &Polyline,
    goal: &EopraDescription,
    cfg: &RefinementConfig,
    gap_epsilon: f64,
) -> Result<Refinement> {
    cfg.validate()?;
    if initial.vertex_count() != goal.n() {
        return Err(Error::DimensionMismatch {
            left: initial.vertex_count(),
            right: goal.n(),
        });
    }
    let mut state = RefinementState::new(initial.clone(), goal.pairwise(), goal.m(), 0)?;
    let step = |s: &RefinementState| TraceStep {
        gap: s.gap,
        mismatches: s.mismatches,
        adjust_factor: s.adjust_factor,
    };
    let mut trace = vec![step(&state)];
    let mut iterations = 0;
    let mut stalled = 0;

    let stop = loop {
        if state.gap <= gap_epsilon {
            break StopReason::Closed;
        }
        if iterations >= cfg.max_iterations {
            break StopReason::IterationLimit;
        }
        iterations += 1;

        match generate_successors(&state, goal, cfg).into_iter().next() {
            Some(best) => {
                let gap_improved = best.gap < state.gap;
                state = best;
                stalled = 0;
                if !gap_improved && state.adjust_factor < cfg.max_adjust_steps {
                    state.adjust_factor += 1;
                }
            }
            None if state.adjust_factor < cfg.max_adjust_steps => state.adjust_factor += 1,
            None => {
                stalled += 1;
                if stalled >= cfg.stall_window {
                    trace.push(step(&state));
                    break StopReason::NotImproving;
                }
            }
        }
        trace.push(step(&state));
    };

    let report = RefinementReport {
        vertices: goal.n(),
        iterations,
        adjust_steps: state.adjust_factor,
        stop,
        gap_epsilon,
        initial_gap: trace[0].gap,
        final_gap: state.gap,
        initial_mismatches: trace[0].mismatches,
        final_mismatches: state.mismatches,
        trace,
    };
    Ok(Refinement { state, report })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnapOutcome {
    /// The closed polygon when snapped, otherwise the untouched open chain.
    pub polyline: Polyline,
    pub snapped: bool,
}

/// Closes an open chain by identifying its endpoints, provided that keeps
/// every hull sector and does not increase the pairwise difference.
pub fn snap_shut(chain: &Polyline, goal: &EopraDescription) -> Result<SnapOutcome> {
    if chain.is_closed() {
        return Ok(SnapOutcome {
            polyline: chain.clone(),
            snapped: true,
        });
    }
    let n = chain.vertex_count();
    let before = direction_matrix(chain, goal.m())?;
    let unchanged = SnapOutcome {
        polyline: chain.clone(),
        snapped: false,
    };
    let closed = Polyline::closed(chain.points()[..n].to_vec());
    let Ok(after) = direction_matrix(&closed, goal.m()) else {
        return Ok(unchanged);
    };
    let keeps_hull = after.hull_sectors() == before.hull_sectors();
    let no_worse =
        matrix_mismatches(&after, goal.pairwise())? <= matrix_mismatches(&before, goal.pairwise())?;
    if keeps_hull && no_worse {
        Ok(SnapOutcome {
            polyline: closed,
            snapped: true,
        })
    } else {
        Ok(unchanged)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::geometry::Point;
    use crate::qualitative::{encode_description, SectorIndex};
    use crate::reconstruct::trace_hull;
    use crate::sample::generate_sample_polygon;

    fn open(coords: &[(f64, f64)]) -> Polyline {
        Polyline::open(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    fn as_chain(polygon: &Polyline) -> Polyline {
        let mut points = polygon.points().to_vec();
        points.push(points[0]);
        Polyline::open(points)
    }

    fn assert_points(chain: &Polyline, expected: &[(f64, f64)]) {
        assert_eq!(chain.len(), expected.len());
        for (p, &(x, y)) in chain.points().iter().zip(expected) {
            assert_abs_diff_eq!(p.x, x, epsilon = 1e-12);
            assert_abs_diff_eq!(p.y, y, epsilon = 1e-12);
        }
    }

    fn matrix(n: usize, value: impl Fn(usize, usize) -> u32) -> DirectionMatrix {
        let m = Granularity::new(8).unwrap();
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (i != j).then(|| SectorIndex::new(value(i, j), m).unwrap())
            })
            .collect();
        DirectionMatrix::from_entries(n, entries).unwrap()
    }

    #[test]
    fn turn_rotates_the_tail() {
        let chain = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let out = apply_mutator(&chain, 1, MutatorKind::TurnCcw, FRAC_PI_2).unwrap();
        assert_points(&out, &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        let out = apply_mutator(&chain, 1, MutatorKind::TurnCw, FRAC_PI_2).unwrap();
        assert_points(&out, &[(0.0, 0.0), (1.0, 0.0), (1.0, -1.0)]);
    }

    #[test]
    fn length_mutators_translate_the_tail() {
        let chain = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 1.0)]);
        let out = apply_mutator(&chain, 1, MutatorKind::Extend, 2.0).unwrap();
        assert_points(&out, &[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0), (3.0, 1.0)]);
        let out = apply_mutator(&chain, 1, MutatorKind::Contract, 0.5).unwrap();
        assert_points(&out, &[(0.0, 0.0), (1.0, 0.0), (1.5, 0.0), (1.5, 1.0)]);
    }

    #[test]
    fn mutator_rejections() {
        let chain = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert!(matches!(apply_mutator(&chain, 0, MutatorKind::Extend, 2.0), Err(Error::Domain(_))));
        assert!(matches!(apply_mutator(&chain, 2, MutatorKind::TurnCcw, 0.1), Err(Error::Domain(_))));
        assert!(apply_mutator(&chain, 1, MutatorKind::Extend, 0.5).is_err());
        assert!(apply_mutator(&chain, 1, MutatorKind::Contract, 1.5).is_err());
        assert!(apply_mutator(&chain, 1, MutatorKind::TurnCcw, f64::NAN).is_err());
        let closed = Polyline::closed(chain.points().to_vec());
        assert!(apply_mutator(&closed, 1, MutatorKind::Extend, 2.0).is_err());
    }

    #[test]
    fn matrix_diff_counts_over_n_squared() {
        let a = matrix(7, |i, j| ((i + j) % 32) as u32);
        assert_eq!(matrix_diff(&a, &a).unwrap(), 0.0);
        let flipped = [(0, 1), (0, 2), (1, 3), (2, 6), (3, 0), (4, 5), (5, 2), (6, 1), (6, 4)];
        let b = matrix(7, |i, j| {
            let base = ((i + j) % 32) as u32;
            if flipped.contains(&(i, j)) { (base + 1) % 32 } else { base }
        });
        assert_eq!(matrix_mismatches(&a, &b).unwrap(), 9);
        assert_eq!(matrix_diff(&a, &b).unwrap(), 9.0 / 49.0);

        let c = matrix(10, |_, _| 3);
        let d = matrix(10, |i, _| if i < 2 { 5 } else { 3 });
        assert_eq!(matrix_diff(&c, &d).unwrap(), 18.0 / 100.0);

        assert!(matches!(matrix_diff(&a, &c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn no_successors_at_the_fixed_point() {
        let polygon = generate_sample_polygon(6, 3).unwrap();
        let m = Granularity::new(8).unwrap();
        let goal = encode_description(&polygon, m).unwrap();
        let state = RefinementState::new(as_chain(&polygon), goal.pairwise(), m, 0).unwrap();
        assert_eq!(state.gap(), 0.0);
        assert_eq!(state.mismatches(), 0);
        let cfg = RefinementConfig::for_granularity(m);
        assert!(generate_successors(&state, &goal, &cfg).is_empty());
    }

    #[test]
    fn closing_candidate_sorts_first() {
        let polygon = generate_sample_polygon(6, 5).unwrap();
        let m = Granularity::new(8).unwrap();
        let cfg = RefinementConfig::for_granularity(m);
        let goal = encode_description(&polygon, m).unwrap();
        let perturbed = apply_mutator(&as_chain(&polygon), 3, MutatorKind::TurnCw, cfg.angle_step(0)).unwrap();
        let state = RefinementState::new(perturbed, goal.pairwise(), m, 0).unwrap();
        assert!(state.gap() > 1.0);
        let successors = generate_successors(&state, &goal, &cfg);
        let best = &successors[0];
        assert!(best.gap() < 1e-9);
        assert_eq!(
            best.last_move().map(|mv| (mv.vertex, mv.kind)),
            Some((3, MutatorKind::TurnCcw))
        );
        for pair in successors.windows(2) {
            assert!(pair[0].gap() <= pair[1].gap());
        }
        for s in &successors {
            assert!(s.gap() <= state.gap() && s.mismatches() <= state.mismatches());
            assert!(s.gap() < state.gap() || s.mismatches() < state.mismatches());
        }
    }

    #[test]
    fn refine_leaves_a_closed_match_alone() {
        let polygon = generate_sample_polygon(7, 11).unwrap();
        let m = Granularity::new(8).unwrap();
        let goal = encode_description(&polygon, m).unwrap();
        let chain = as_chain(&polygon);
        let out = refine(&chain, &goal, &RefinementConfig::for_granularity(m)).unwrap();
        assert_eq!(out.report.iterations, 0);
        assert_eq!(out.report.stop, StopReason::Closed);
        assert_eq!(out.state.polyline(), &chain);
    }

    #[test]
    fn square_at_m2_shrinks_its_gap_within_budget() {
        // Every square turn is a ray at m = 2, so only the length mutators are
        // legal; their fixed per-level factors cannot hit the exact lengths
        // needed to close within 1e-3 of the diagonal.
        let m = Granularity::new(2).unwrap();
        let square = Polyline::closed(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]);
        let goal = encode_description(&square, m).unwrap();
        let initial = trace_hull(&goal);
        let cfg = RefinementConfig::for_granularity(m);
        let out = refine_with_epsilon(&initial, &goal, &cfg, cfg.gap_epsilon_fraction * square.bbox_diagonal()).unwrap();
        assert!(out.report.iterations <= cfg.max_iterations);
        assert!(out.report.final_gap < 0.2 * out.report.initial_gap);
        assert_eq!(out.report.final_mismatches, 0);
        let turns = direction_matrix(out.state.polyline(), m).unwrap().hull_sectors();
        assert_eq!(turns, goal.hull_sectors());
        for step in &out.report.trace {
            assert!(step.adjust_factor <= cfg.max_adjust_steps);
        }
    }

    #[test]
    fn trace_never_increases() {
        let m = Granularity::new(8).unwrap();
        let cfg = RefinementConfig::for_granularity(m);
        for seed in 0..6 {
            let polygon = generate_sample_polygon(8, seed).unwrap();
            let goal = encode_description(&polygon, m).unwrap();
            let out = refine(&trace_hull(&goal), &goal, &cfg).unwrap();
            assert!(out.report.iterations <= cfg.max_iterations);
            assert!(out.report.adjust_steps <= cfg.max_adjust_steps);
            for pair in out.report.trace.windows(2) {
                assert!(pair[1].gap <= pair[0].gap);
                assert!(pair[1].mismatches <= pair[0].mismatches);
            }
            assert_eq!(out.state.gap(), closure_gap(out.state.polyline()));
        }
    }

    #[test]
    fn schedules_hit_their_endpoints() {
        let m = Granularity::new(8).unwrap();
        let cfg = RefinementConfig::for_granularity(m);
        assert_abs_diff_eq!(cfg.angle_step(0), m.angular_resolution() / 4.0);
        assert_abs_diff_eq!(cfg.angle_step(20), m.angular_resolution() / 80.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cfg.angle_step(10), (cfg.angle_step(0) + cfg.angle_step(20)) / 2.0, epsilon = 1e-15);
        assert_eq!(cfg.length_factors(0), (2.0, 0.5));
        let (grow, shrink) = cfg.length_factors(20);
        assert_abs_diff_eq!(grow, 1.05, epsilon = 1e-12);
        assert_abs_diff_eq!(shrink, 0.95, epsilon = 1e-12);
        assert_eq!(cfg.angle_step(25), cfg.angle_step(20));
    }

    #[test]
    fn config_validation() {
        let base = RefinementConfig::for_granularity(Granularity::new(4).unwrap());
        assert!(base.validate().is_ok());
        let mut cfg = base.clone();
        cfg.max_iterations = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = base.clone();
        cfg.gap_epsilon_fraction = 1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = base.clone();
        cfg.min_angle_step = cfg.initial_angle_step;
        assert!(cfg.validate().is_err());
        let mut cfg = base;
        cfg.min_length_factors = (0.9, 0.95);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn snap_of_a_closed_chain_is_trivial() {
        let polygon = generate_sample_polygon(6, 2).unwrap();
        let m = Granularity::new(8).unwrap();
        let goal = encode_description(&polygon, m).unwrap();
        let out = snap_shut(&as_chain(&polygon), &goal).unwrap();
        assert!(out.snapped);
        assert_eq!(out.polyline, polygon);
    }

    #[test]
    fn snap_refuses_to_flip_a_seam_turn() {
        let m = Granularity::new(2).unwrap();
        let square = Polyline::closed(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]);
        let goal = encode_description(&square, m).unwrap();
        // The last edge leans just off the right angle at (0, 1).
        let chain = open(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (-1e-4, 0.0)]);
        assert!(closure_gap(&chain) < 1e-3 * square.bbox_diagonal());
        let before = direction_matrix(&chain, m).unwrap().hull_sectors();
        assert_eq!(before[3].value(), 1);
        let out = snap_shut(&chain, &goal).unwrap();
        assert!(!out.snapped);
        assert_eq!(out.polyline, chain);
    }

    #[test]
    fn snap_is_decided_by_relations_not_distance() {
        let polygon = generate_sample_polygon(8, 4).unwrap();
        let m = Granularity::new(8).unwrap();
        let goal = encode_description(&polygon, m).unwrap();
        let eps = 1e-3 * polygon.bbox_diagonal();
        let mut points = as_chain(&polygon).into_points();
        let last = points.len() - 1;
        points[last] = points[last] + crate::geometry::Vector::new(100.0 * eps, 0.0);
        let chain = Polyline::open(points);
        let out = snap_shut(&chain, &goal).unwrap();
        let before = direction_matrix(&chain, m).unwrap().hull_sectors();
        let after = direction_matrix(&out.polyline, m).unwrap().hull_sectors();
        assert_eq!(before, after);
        assert_eq!(out.snapped, out.polyline.is_closed());
    }
}
