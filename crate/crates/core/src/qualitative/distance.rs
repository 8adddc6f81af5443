use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qualitative::Granularity;

/// Representative length standing for a distance class: the midpoint of the
/// ratio interval the measured length fell into.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QualitativeDistance(f64);

impl QualitativeDistance {
    pub fn new(representative: f64) -> Result<Self> {
        if !(representative.is_finite() && representative > 0.0) {
            return Err(Error::Domain(format!(
                "qualitative distance must be positive and finite, got {representative}"
            )));
        }
        Ok(QualitativeDistance(representative))
    }

    pub fn representative(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for QualitativeDistance {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        QualitativeDistance::new(value)
    }
}

impl From<QualitativeDistance> for f64 {
    fn from(d: QualitativeDistance) -> f64 {
        d.0
    }
}

/// The `2m` distance ratios: `0, 1/m, …, 1` followed by the reciprocals
/// `m/(m-1), …, m`.
pub fn distance_ratios(m: Granularity) -> Vec<f64> {
    let m = m.m();
    let mf = f64::from(m);
    let near = (0..=m).map(|k| f64::from(k) / mf);
    let far = (1..m).rev().map(|k| mf / f64::from(k));
    near.chain(far).collect()
}

/// Maps a target length onto the midpoint of the marker interval that holds
/// it, with markers `ratios × control`.
///
/// Targets at or past the last marker fall into the open-ended class, whose
/// representative is `1.5 ×` the last marker.
pub fn length_to_qual_distance(ratios: &[f64], control: f64, target: f64) -> Result<QualitativeDistance> {
    if !(control.is_finite() && control > 0.0) {
        return Err(Error::Domain(format!("control length must be positive, got {control}")));
    }
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::Domain(format!("target length must be positive, got {target}")));
    }
    let markers: Vec<f64> = ratios.iter().map(|r| r * control).collect();
    let Some(&last) = markers.last() else {
        return Err(Error::Domain("empty distance ratio list".into()));
    };
    let representative = markers
        .windows(2)
        .find(|w| w[0] <= target && target < w[1])
        .map(|w| (w[0] + w[1]) / 2.0)
        .unwrap_or(1.5 * last);
    QualitativeDistance::new(representative)
}

/// Chains edge lengths into qualitative distances. The first edge is kept
/// verbatim; every later edge is classified against the previous
/// *qualitative* value.
pub fn qualitative_distances(edge_lengths: &[f64], ratios: &[f64]) -> Result<Vec<QualitativeDistance>> {
    let (&first, rest) = edge_lengths
        .split_first()
        .ok_or_else(|| Error::Domain("no edge lengths to classify".into()))?;
    let mut out = Vec::with_capacity(edge_lengths.len());
    out.push(QualitativeDistance::new(first)?);
    for &target in rest {
        let control = out[out.len() - 1].representative();
        out.push(length_to_qual_distance(ratios, control, target)?);
    }
    Ok(out)
}
