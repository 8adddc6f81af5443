//! Qualitative shape descriptions of simple polygons in the eOPRA_m calculus.
//!
//! The crate covers the full round trip:
//!
//! - [`qualitative`] encodes a closed polygon into an [`EopraDescription`]: the
//!   hull turn sectors, chained qualitative edge lengths and the pairwise
//!   direction matrix at granularity `m`.
//! - [`reconstruct`] traces the qualitative hull back into an open polyline
//!   whose two endpoints both stand for the original first vertex.
//! - [`refine`] greedily mutates that polyline towards closure without
//!   increasing the pairwise direction difference, then tries to snap it shut.
//! - [`io`], [`svg`] and [`sample`] provide file formats, figure rendering and
//!   seeded test polygons; [`pipeline`] chains everything together.

pub mod error;
pub mod geometry;
pub mod io;
pub mod pipeline;
pub mod qualitative;
pub mod reconstruct;
pub mod refine;
pub mod sample;
pub mod svg;

pub use error::{Error, Result};
pub use geometry::{Point, Polyline, Vector};
pub use refine::{RefinementConfig, RefinementReport, RefinementState};
pub use qualitative::{
    DirectionMatrix, EopraDescription, Granularity, QualitativeDistance, SectorIndex,
};

