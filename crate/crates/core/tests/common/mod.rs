#![allow(dead_code)]

use std::f64::consts::PI;

use eopra_shape::{Point, Polyline};

/// Sector of `theta` found by scanning all `4m` partitions: even sector `k`
/// is the ray at `k·π/2m`, odd sector `k` the open interval between its two
/// neighbouring rays.
pub fn scan_sector(theta: f64, m: u32) -> u32 {
    let res = PI / (2.0 * f64::from(m));
    let count = 4 * m;
    for k in 0..count {
        let at = f64::from(k) * res;
        if k % 2 == 0 {
            let ray = |a: f64| ((theta - a) / res).abs() <= 1e-9;
            if ray(at) || (k == 0 && ray(2.0 * PI)) {
                return k;
            }
        } else if theta > at - res && theta < at + res {
            return k;
        }
    }
    panic!("angle {theta} fell in no partition");
}

/// Edge-length ratios of the staircase: each is the midpoint of an `m = 8`
/// distance interval, and the eight lengths they chain into close the
/// polygon exactly.
pub const STAIR_RATIOS: [(u32, u32); 7] = [(7, 3), (15, 14), (7, 3), (3, 16), (7, 3), (9, 5), (7, 3)];

/// Staircase octagon A, B, A, B, A, B, C, D with A, B, C, D pointing along
/// `α`, `α + tπ/16`, `α + π`, `α + tπ/16 + π`, so every turn is the centre
/// of an odd `m = 8` sector (`t` must be odd). `mirror` flips it clockwise.
pub fn staircase(t: u32, mirror: bool, alpha: f64, scale: f64, offset: (f64, f64)) -> Polyline {
    assert!(t % 2 == 1 && t < 16);
    let mut lengths = vec![1.0];
    for (num, den) in STAIR_RATIOS {
        let last = *lengths.last().unwrap();
        lengths.push(last * f64::from(num) / f64::from(den));
    }
    let step = PI / 16.0;
    let beta = f64::from(t) * step * if mirror { -1.0 } else { 1.0 };
    let headings = [0.0, beta, 0.0, beta, 0.0, beta, PI, beta + PI];
    let mut points = Vec::with_capacity(8);
    let mut p = Point::new(offset.0, offset.1);
    for (len, heading) in lengths.iter().zip(headings) {
        points.push(p);
        let h = alpha + heading;
        p = Point::new(p.x + scale * len * h.cos(), p.y + scale * len * h.sin());
    }
    Polyline::closed(points)
}

/// The acceptance sample set: four polygons for every vertex count 6..=15.
pub fn sample_set() -> Vec<(usize, u64)> {
    (0..40u64).map(|seed| (6 + (seed % 10) as usize, seed)).collect()
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}
