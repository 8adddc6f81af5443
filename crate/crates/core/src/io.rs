//! JSON file formats for polygons, descriptions and run reports.
//!
//! Polygon file:
//!
//! ```json
//! { "name": "square", "points": [[0, 0], [1, 0], [1, 1], [0, 1]] }
//! ```
//!
//! An optional `"closed": false` marks an open chain (a reconstruction that
//! was not snapped shut); its last point is the second copy of the first
//! vertex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};
use crate::qualitative::{
    DirectionMatrix, EopraDescription, Granularity, QualitativeDistance, SectorIndex,
};

/// Current description file version.
pub const DESCRIPTION_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_closed")]
    pub closed: bool,
    pub points: Vec<[f64; 2]>,
}

fn default_closed() -> bool {
    true
}

impl PolygonFile {
    pub fn from_polyline(name: impl Into<String>, polyline: &Polyline) -> Self {
        PolygonFile {
            name: name.into(),
            closed: polyline.is_closed(),
            points: polyline.points().iter().map(|p| [p.x, p.y]).collect(),
        }
    }

    /// Converts to a polyline without any geometric validation.
    pub fn to_polyline(&self) -> Polyline {
        let points = self.points.iter().map(|&[x, y]| Point::new(x, y)).collect();
        if self.closed {
            Polyline::closed(points)
        } else {
            Polyline::open(points)
        }
    }
}

/// Parses a polygon file into a validated simple polyline.
///
/// Syntax errors, too few points, degenerate edges and self-intersections
/// are reported as distinct [`Error`] variants.
pub fn parse_polygon(bytes: &[u8]) -> Result<Polyline> {
    parse_polygon_file(bytes).map(|(_, polyline)| polyline)
}

/// Like [`parse_polygon`], also returning the file's `name`.
pub fn parse_polygon_file(bytes: &[u8]) -> Result<(String, Polyline)> {
    let file: PolygonFile = serde_json::from_slice(bytes)?;
    let polyline = file.to_polyline();
    let required = if file.closed { 3 } else { 4 };
    if polyline.len() < required {
        return Err(Error::TooFewPoints {
            required,
            actual: polyline.len(),
        });
    }
    polyline.validate_polygon()?;
    Ok((file.name, polyline))
}

/// Serializes a polyline as a pretty-printed polygon file.
pub fn write_polygon(name: &str, polyline: &Polyline) -> Result<String> {
    to_json(&PolygonFile::from_polyline(name, polyline))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptionFile {
    pub schema: u32,
    pub m: u32,
    pub anchor_point: [f64; 2],
    pub anchor_heading: f64,
    pub hull_sectors: Vec<u32>,
    pub hull_distances: Vec<f64>,
    /// Row-major sector indices; the diagonal is `null`.
    pub pairwise: Vec<Vec<Option<u32>>>,
}

impl From<&EopraDescription> for DescriptionFile {
    fn from(desc: &EopraDescription) -> Self {
        let n = desc.n();
        let matrix = desc.pairwise();
        DescriptionFile {
            schema: DESCRIPTION_SCHEMA,
            m: desc.m().m(),
            anchor_point: [desc.anchor_point().x, desc.anchor_point().y],
            anchor_heading: desc.anchor_heading(),
            hull_sectors: desc.hull_sectors().iter().map(|s| s.value()).collect(),
            hull_distances: desc.hull_distances().iter().map(|d| d.representative()).collect(),
            pairwise: (0..n)
                .map(|i| (0..n).map(|j| matrix.get(i, j).map(SectorIndex::value)).collect())
                .collect(),
        }
    }
}

impl TryFrom<DescriptionFile> for EopraDescription {
    type Error = Error;

    fn try_from(file: DescriptionFile) -> Result<Self> {
        if file.schema != DESCRIPTION_SCHEMA {
            return Err(Error::UnsupportedSchema(file.schema));
        }
        let m = Granularity::new(file.m)?;
        let sector = |v: u32| SectorIndex::new(v, m);
        let n = file.pairwise.len();
        if let Some(row) = file.pairwise.iter().find(|row| row.len() != n) {
            return Err(Error::Malformed(format!(
                "pairwise matrix is not square: {n} rows but a row of {}",
                row.len()
            )));
        }
        let entries = file
            .pairwise
            .into_iter()
            .flatten()
            .map(|entry| entry.map(sector).transpose())
            .collect::<Result<Vec<_>>>()?;
        let pairwise = DirectionMatrix::from_entries(n, entries)?;
        let hull_sectors = file.hull_sectors.into_iter().map(sector).collect::<Result<Vec<_>>>()?;
        let hull_distances = file
            .hull_distances
            .into_iter()
            .map(QualitativeDistance::new)
            .collect::<Result<Vec<_>>>()?;
        let [x, y] = file.anchor_point;
        EopraDescription::from_parts(
            m,
            Point::new(x, y),
            file.anchor_heading,
            hull_sectors,
            hull_distances,
            pairwise,
        )
    }
}

pub fn parse_description(bytes: &[u8]) -> Result<EopraDescription> {
    let file: DescriptionFile = serde_json::from_slice(bytes)?;
    file.try_into()
}

pub fn write_description(desc: &EopraDescription) -> Result<String> {
    to_json(&DescriptionFile::from(desc))
}

/// Pretty JSON with a trailing newline; floats use the shortest text that
/// parses back to the same value.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qualitative::encode_description;
    use crate::sample::generate_sample_polygon;

    const SQUARE: &str = r#"{"name": "square", "points": [[0, 0], [1, 0], [1, 1], [0, 1]]}"#;

    #[test]
    fn parses_a_square() {
        let (name, p) = parse_polygon_file(SQUARE.as_bytes()).unwrap();
        assert_eq!(name, "square");
        assert!(p.is_closed());
        assert_eq!(p.len(), 4);
        assert_eq!(p.points()[2], Point::new(1.0, 1.0));
    }

    #[test]
    fn each_failure_has_its_own_error() {
        let two = r#"{"points": [[0, 0], [1, 0]]}"#;
        assert!(matches!(parse_polygon(two.as_bytes()), Err(Error::TooFewPoints { .. })));
        let bowtie = r#"{"points": [[0, 0], [2, 2], [2, 0], [0, 2]]}"#;
        assert!(matches!(parse_polygon(bowtie.as_bytes()), Err(Error::SelfIntersection { .. })));
        let dup = r#"{"points": [[0, 0], [1, 0], [1, 0], [0, 1]]}"#;
        assert!(matches!(parse_polygon(dup.as_bytes()), Err(Error::DegenerateEdge { .. })));
        for bad in ["", "{", r#"{"points": [[0, "a"]]}"#, r#"{"pts": []}"#, r#"{"points": [[0, 0, 1]]}"#] {
            assert!(matches!(parse_polygon(bad.as_bytes()), Err(Error::Malformed(_))), "{bad:?}");
        }
        assert!(matches!(parse_polygon(&[0xff, 0xfe]), Err(Error::Malformed(_))));
    }

    #[test]
    fn polygon_round_trip() {
        let p = generate_sample_polygon(11, 7).unwrap();
        let text = write_polygon("sample", &p).unwrap();
        let (name, back) = parse_polygon_file(text.as_bytes()).unwrap();
        assert_eq!(name, "sample");
        assert_eq!(back, p);
    }

    #[test]
    fn open_chains_keep_their_flag() {
        let chain = Polyline::open(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.1, 0.9),
        ]);
        let text = write_polygon("", &chain).unwrap();
        assert!(text.contains("\"closed\": false"));
        assert_eq!(parse_polygon(text.as_bytes()).unwrap(), chain);
    }

    #[test]
    fn description_round_trip_is_lossless() {
        for seed in 0..5 {
            let p = generate_sample_polygon(6 + seed as usize, seed).unwrap();
            let desc = encode_description(&p, Granularity::new(8).unwrap()).unwrap();
            let text = write_description(&desc).unwrap();
            assert_eq!(parse_description(text.as_bytes()).unwrap(), desc);
            assert_eq!(write_description(&parse_description(text.as_bytes()).unwrap()).unwrap(), text);
        }
    }

    #[test]
    fn description_diagonal_is_null() {
        let desc = encode_description(&parse_polygon(SQUARE.as_bytes()).unwrap(), Granularity::new(2).unwrap()).unwrap();
        let file = DescriptionFile::from(&desc);
        for (i, row) in file.pairwise.iter().enumerate() {
            assert_eq!(row[i], None);
            assert!(row.iter().enumerate().all(|(j, e)| (i == j) == e.is_none()));
        }
    }

    #[test]
    fn description_rejections() {
        let desc = encode_description(&parse_polygon(SQUARE.as_bytes()).unwrap(), Granularity::new(2).unwrap()).unwrap();
        let good = DescriptionFile::from(&desc);

        let mut f = good.clone();
        f.schema = 9;
        assert!(matches!(EopraDescription::try_from(f), Err(Error::UnsupportedSchema(9))));
        let mut f = good.clone();
        f.pairwise[1].pop();
        assert!(matches!(EopraDescription::try_from(f), Err(Error::Malformed(_))));
        let mut f = good.clone();
        f.hull_sectors[0] = 99;
        assert!(matches!(EopraDescription::try_from(f), Err(Error::Domain(_))));
        let mut f = good.clone();
        f.hull_distances[0] = -1.0;
        assert!(EopraDescription::try_from(f).is_err());
        let mut f = good.clone();
        f.m = 0;
        assert!(EopraDescription::try_from(f).is_err());
        let mut f = good;
        f.pairwise[0][0] = Some(1);
        assert!(EopraDescription::try_from(f).is_err());
    }
}
