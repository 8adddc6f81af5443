use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{turn_angle, Point, Polyline, Vector, ANGLE_EPSILON};

/// Tolerance on the raw sector value `θ·2m/π` for the exact-ray test.
pub const RAY_EPSILON: f64 = 1e-9;

/// Resolution parameter `m`: `4m` direction sectors and `2m` distance classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Granularity(u32);

impl Granularity {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("granularity m must be at least 1".into()));
        }
        Ok(Granularity(m))
    }

    pub fn m(self) -> u32 {
        self.0
    }

    pub fn direction_partitions(self) -> u32 {
        4 * self.0
    }

    pub fn distance_partitions(self) -> u32 {
        2 * self.0
    }

    /// Width of one sector step, `2π / 4m = π / 2m`.
    pub fn angular_resolution(self) -> f64 {
        PI / (2.0 * f64::from(self.0))
    }
}

impl TryFrom<u32> for Granularity {
    type Error = Error;

    fn try_from(m: u32) -> Result<Self> {
        Granularity::new(m)
    }
}

impl From<Granularity> for u32 {
    fn from(m: Granularity) -> u32 {
        m.0
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}", self.0)
    }
}

/// One of the `4m` direction partitions. Even indices are rays, odd indices
/// the open intervals between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SectorIndex(u32);

impl SectorIndex {
    pub fn new(value: u32, m: Granularity) -> Result<Self> {
        if value >= m.direction_partitions() {
            return Err(Error::Domain(format!(
                "sector {value} out of range for {m} (max {})",
                m.direction_partitions() - 1
            )));
        }
        Ok(SectorIndex(value))
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_ray(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Cyclic distance in sector steps on a circle of `4m` sectors.
    pub fn cyclic_distance(self, other: SectorIndex, m: Granularity) -> u32 {
        let k = m.direction_partitions();
        let d = self.0.abs_diff(other.0) % k;
        d.min(k - d)
    }
}

impl fmt::Display for SectorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn angular_resolution(m: Granularity) -> f64 {
    m.angular_resolution()
}

/// Quantizes a turn angle in `[0, 2π)` into its sector.
///
/// Angles on a ray (raw value within [`RAY_EPSILON`] of an integer) take that
/// even index; anything else lands in the odd sector that contains it.
pub fn angle_to_sector(theta: f64, m: Granularity) -> Result<SectorIndex> {
    let theta = if (-ANGLE_EPSILON..0.0).contains(&theta)
        || (TAU - ANGLE_EPSILON..TAU + ANGLE_EPSILON).contains(&theta)
    {
        0.0
    } else {
        theta
    };
    if !(0.0..TAU).contains(&theta) {
        return Err(Error::Domain(format!("angle {theta} outside [0, 2π)")));
    }
    let k = m.direction_partitions();
    let raw = theta * 2.0 * f64::from(m.m()) / PI;
    let nearest = raw.round();
    let sector = if (raw - nearest).abs() <= RAY_EPSILON {
        nearest as u32
    } else {
        let floor = raw.floor() as u32;
        if floor.is_multiple_of(2) {
            floor + 1
        } else {
            floor
        }
    };
    Ok(SectorIndex(sector % k))
}

/// Sector index back to an angle: `i · π/2m`. For odd sectors this is the
/// interval centre.
pub fn sector_to_angle(sector: SectorIndex, m: Granularity) -> f64 {
    f64::from(sector.0) * m.angular_resolution()
}

/// Square matrix with an absent diagonal, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TurnMatrix {
    n: usize,
    entries: Vec<Option<f64>>,
}

impl TurnMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries[i * self.n + j]
    }

    pub fn empty() -> Self {
        TurnMatrix {
            n: 0,
            entries: Vec::new(),
        }
    }

    /// Builds from a full `n × n` grid; diagonal values are discarded.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            entries.extend(row.iter().enumerate().map(|(j, &v)| (i != j).then_some(v)));
        }
        Ok(TurnMatrix { n, entries })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionMatrix {
    n: usize,
    entries: Vec<Option<SectorIndex>>,
}

impl DirectionMatrix {
    /// Row-major constructor; the diagonal must be absent and every other
    /// entry present.
    pub fn from_entries(n: usize, entries: Vec<Option<SectorIndex>>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: entries.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if entries[i * n + j].is_some() != (i != j) {
                    return Err(Error::Malformed(format!(
                        "direction matrix entry [{i}, {j}] must be {}",
                        if i == j { "null" } else { "present" }
                    )));
                }
            }
        }
        Ok(DirectionMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<SectorIndex> {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Option<SectorIndex>] {
        &self.entries
    }

    /// Entries `[i, i+1 mod n]`: the turn at each vertex along the boundary.
    pub fn hull_sectors(&self) -> Vec<SectorIndex> {
        (0..self.n)
            .filter_map(|i| self.get(i, (i + 1) % self.n))
            .collect()
    }
}

/// Pairwise turn angles: entry `[i, j]` is the turn from the edge arriving at
/// vertex `i` to the vector from vertex `i` to vertex `j`. For vertex 0 of a
/// closed polygon the arriving edge is the wrap edge from the last vertex.
///
/// An open chain of `n + 1` points stands for an `n`-gon whose first vertex
/// appears twice. It is measured as the polygon obtained by dropping the last
/// point and closing by fiat, except for the two hull turns at the seam,
/// which are read off the chain's own edges: the turn at vertex `n - 1` into
/// the final edge, and the turn at vertex 0 from the final edge into the
/// first. Those two follow the traced headings however wide the closure gap
/// is; snapping the chain shut can change only them.
pub fn pairwise_turn_matrix(polyline: &Polyline) -> Result<TurnMatrix> {
    let points = polyline.points();
    let n = polyline.vertex_count();
    if n < 3 {
        return Err(Error::TooFewPoints {
            required: 3,
            actual: n,
        });
    }
    let mut turns = closed_turn_matrix(&points[..n])?;
    if !polyline.is_closed() {
        let last = points[n] - points[n - 1];
        let seam = |at: usize, from: Vector, to: Vector| {
            turn_angle(from, to).map_err(|_| Error::DegenerateEdge { vertex: at })
        };
        turns.entries[1] = Some(seam(0, last, points[1] - points[0])?);
        turns.entries[(n - 1) * n] = Some(seam(n - 1, points[n - 1] - points[n - 2], last)?);
    }
    Ok(turns)
}

fn closed_turn_matrix(points: &[Point]) -> Result<TurnMatrix> {
    let n = points.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        let incoming = points[i] - points[(i + n - 1) % n];
        if incoming.is_zero() {
            return Err(Error::DegenerateEdge { vertex: i });
        }
        for j in 0..n {
            if i == j {
                entries.push(None);
                continue;
            }
            let beta = turn_angle(incoming, points[j] - points[i])
                .map_err(|_| Error::DegenerateEdge { vertex: i })?;
            entries.push(Some(beta));
        }
    }
    Ok(TurnMatrix { n, entries })
}

pub fn quantize_matrix(turns: &TurnMatrix, m: Granularity) -> Result<DirectionMatrix> {
    let entries = turns
        .entries
        .iter()
        .map(|entry| entry.map(|theta| angle_to_sector(theta, m)).transpose())
        .collect::<Result<Vec<_>>>()?;
    Ok(DirectionMatrix {
        n: turns.n,
        entries,
    })
}

/// Quantized pairwise matrix of a polygon or open reconstruction chain.
pub fn direction_matrix(polyline: &Polyline, m: Granularity) -> Result<DirectionMatrix> {
    quantize_matrix(&pairwise_turn_matrix(polyline)?, m)
}
