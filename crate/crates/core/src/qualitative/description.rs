use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};
use crate::qualitative::{
    direction_matrix, distance_ratios, qualitative_distances, DirectionMatrix, Granularity,
    QualitativeDistance, SectorIndex,
};

/// Qualitative shape description of a closed polygon.
///
/// Besides the granularity, the hull sectors, the chained hull distances and
/// the pairwise direction matrix, it keeps the anchor pose of the input (its
/// first vertex and the exact heading of its first edge) so a reconstruction
/// lands in the same frame.
#[derive(Debug, Clone, PartialEq)]
pub struct EopraDescription {
    m: Granularity,
    anchor_point: Point,
    anchor_heading: f64,
    hull_sectors: Vec<SectorIndex>,
    hull_distances: Vec<QualitativeDistance>,
    pairwise: DirectionMatrix,
}

impl EopraDescription {
    pub fn from_parts(
        m: Granularity,
        anchor_point: Point,
        anchor_heading: f64,
        hull_sectors: Vec<SectorIndex>,
        hull_distances: Vec<QualitativeDistance>,
        pairwise: DirectionMatrix,
    ) -> Result<Self> {
        let n = pairwise.n();
        if n < 3 {
            return Err(Error::TooFewPoints {
                required: 3,
                actual: n,
            });
        }
        if hull_sectors.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: hull_sectors.len(),
            });
        }
        if hull_distances.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: hull_distances.len(),
            });
        }
        if !anchor_point.is_finite() || !anchor_heading.is_finite() {
            return Err(Error::Domain("anchor pose must be finite".into()));
        }
        let limit = m.direction_partitions();
        if pairwise
            .entries()
            .iter()
            .flatten()
            .any(|s| s.value() >= limit)
        {
            return Err(Error::Domain(format!("pairwise sector out of range for {m}")));
        }
        if pairwise.hull_sectors() != hull_sectors {
            return Err(Error::Malformed(
                "hull sectors disagree with the pairwise matrix".into(),
            ));
        }
        Ok(EopraDescription {
            m,
            anchor_point,
            anchor_heading,
            hull_sectors,
            hull_distances,
            pairwise,
        })
    }

    pub fn m(&self) -> Granularity {
        self.m
    }

    pub fn n(&self) -> usize {
        self.pairwise.n()
    }

    pub fn anchor_point(&self) -> Point {
        self.anchor_point
    }

    pub fn anchor_heading(&self) -> f64 {
        self.anchor_heading
    }

    pub fn hull_sectors(&self) -> &[SectorIndex] {
        &self.hull_sectors
    }

    pub fn hull_distances(&self) -> &[QualitativeDistance] {
        &self.hull_distances
    }

    pub fn pairwise(&self) -> &DirectionMatrix {
        &self.pairwise
    }
}

/// Encodes a closed simple polygon at granularity `m`.
pub fn encode_description(polygon: &Polyline, m: Granularity) -> Result<EopraDescription> {
    if !polygon.is_closed() {
        return Err(Error::Domain("only closed polygons can be encoded".into()));
    }
    polygon.validate_polygon()?;

    let pairwise = direction_matrix(polygon, m)?;
    let hull_sectors = pairwise.hull_sectors();
    let edge_lengths: Vec<f64> = polygon
        .segments()
        .iter()
        .map(|(a, b)| a.distance(b))
        .collect();
    let hull_distances = qualitative_distances(&edge_lengths, &distance_ratios(m))?;

    let points = polygon.points();
    let anchor_heading = (points[1] - points[0]).heading();

    EopraDescription::from_parts(
        m,
        points[0],
        anchor_heading,
        hull_sectors,
        hull_distances,
        pairwise,
    )
}
