//! Seeded simple polygons for experiments and tests.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};
use crate::qualitative::pairwise_turn_matrix;

pub const MIN_VERTICES: usize = 3;
pub const MAX_VERTICES: usize = 50;

/// Granularity whose rays generated polygons keep away from.
const RAY_CHECK_M: f64 = 8.0;
const RAY_CLEARANCE: f64 = 1e-6;
const RADIUS: f64 = 100.0;

/// Generates a simple polygon with `vertices` vertices, deterministic in
/// `seed`.
///
/// Vertices are placed at jittered angles around the origin with random
/// radii, so the polygon is star-shaped and counter-clockwise. Draws are
/// rejected until the polygon is simple and no pairwise turn angle lies
/// within `1e-6` rad of an `m = 8` sector ray (apart from the entries that
/// look back along the arriving edge, which are exactly π for any polygon).
pub fn generate_sample_polygon(vertices: usize, seed: u64) -> Result<Polyline> {
    if !(MIN_VERTICES..=MAX_VERTICES).contains(&vertices) {
        return Err(Error::Domain(format!(
            "vertex count must lie in {MIN_VERTICES}..={MAX_VERTICES}, got {vertices}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slot = TAU / vertices as f64;
    loop {
        let phase = rng.gen_range(0.0..TAU);
        let points: Vec<Point> = (0..vertices)
            .map(|k| {
                let angle = phase + slot * (k as f64 + rng.gen_range(-0.35..0.35));
                let radius = RADIUS * rng.gen_range(0.45..1.0);
                Point::new(radius * angle.cos(), radius * angle.sin())
            })
            .collect();
        let polygon = Polyline::closed(points);
        if polygon.validate_polygon().is_ok() && clear_of_rays(&polygon) {
            return Ok(polygon);
        }
    }
}

fn clear_of_rays(polygon: &Polyline) -> bool {
    let Ok(turns) = pairwise_turn_matrix(polygon) else {
        return false;
    };
    let ray_step = PI / RAY_CHECK_M;
    let n = turns.n();
    (0..n).all(|i| {
        // Looking back at the previous vertex is always exactly π.
        let prev = (i + n - 1) % n;
        (0..n).filter(|&j| j != prev).all(|j| match turns.get(i, j) {
            None => true,
            Some(theta) => {
                let nearest = (theta / ray_step).round() * ray_step;
                (theta - nearest).abs() > RAY_CLEARANCE
            }
        })
    })
}
