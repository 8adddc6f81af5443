//! Initial prototype: trace the qualitative hull into an open chain.

use std::f64::consts::{PI, TAU};

use crate::geometry::{Point, Polyline, Vector};
use crate::qualitative::{sector_to_angle, EopraDescription};

/// Steps `distance` from `p` along absolute heading `theta`.
pub fn next_xy(p: Point, distance: f64, theta: f64) -> Point {
    p + Vector::from_polar(distance, theta)
}

/// Traces the hull of a description into an open chain of `n + 1` points.
///
/// The chain starts at the anchor point heading along the anchor heading, so
/// edge 0 needs no turn. Every later edge `i` first turns by the turn at
/// vertex `i` and then advances by `hull_distances[i]`. The first and last
/// points both stand for the polygon's first vertex; their distance is the
/// closure gap.
///
/// Turns are the sector centres of [`hull_turns`], balanced so the implied
/// turn back into edge 0 is the centre of `hull_sectors[0]`.
pub fn trace_hull(desc: &EopraDescription) -> Polyline {
    trace_with_turns(desc, &hull_turns(desc))
}

/// Traces with every turn at its plain sector angle, `i · π/2m`, without
/// closing-turn balancing.
pub fn trace_hull_centres(desc: &EopraDescription) -> Polyline {
    let m = desc.m();
    let turns: Vec<f64> = desc
        .hull_sectors()
        .iter()
        .map(|s| sector_to_angle(*s, m))
        .collect();
    trace_with_turns(desc, &turns)
}

/// Turn angle to apply at each vertex when tracing.
///
/// Sector centres rarely add up to a whole number of revolutions, and the
/// shortfall would otherwise all land on the turn at vertex 0. The residual
/// is spread evenly over the vertices `1..n` whose sectors are intervals
/// (rays admit no slack), capped so every turn stays strictly inside its own
/// sector.
pub fn hull_turns(desc: &EopraDescription) -> Vec<f64> {
    let m = desc.m();
    let mut turns: Vec<f64> = desc
        .hull_sectors()
        .iter()
        .map(|s| sector_to_angle(*s, m))
        .collect();
    let flexible: Vec<usize> = (1..turns.len())
        .filter(|&i| !desc.hull_sectors()[i].is_ray())
        .collect();
    if flexible.is_empty() {
        return turns;
    }
    let total: f64 = turns.iter().sum();
    let residual = (-total + PI).rem_euclid(TAU) - PI;
    let limit = BALANCE_LIMIT * m.angular_resolution();
    let shift = (residual / flexible.len() as f64).clamp(-limit, limit);
    for i in flexible {
        turns[i] += shift;
    }
    turns
}

/// Largest balancing shift, as a fraction of the sector half-width.
const BALANCE_LIMIT: f64 = 0.9;

fn trace_with_turns(desc: &EopraDescription, turns: &[f64]) -> Polyline {
    let mut heading = desc.anchor_heading();
    let mut points = Vec::with_capacity(desc.n() + 1);
    let mut current = desc.anchor_point();
    points.push(current);
    for (i, (turn, distance)) in turns.iter().zip(desc.hull_distances()).enumerate() {
        if i > 0 {
            heading += turn;
        }
        current = next_xy(current, distance.representative(), heading);
        points.push(current);
    }
    Polyline::open(points)
}
