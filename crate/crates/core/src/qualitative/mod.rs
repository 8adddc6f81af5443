//! eOPRA_m quantization: direction sectors, distance classes and the
//! assembled shape description.

mod description;
mod direction;
mod distance;

pub use description::{encode_description, EopraDescription};
pub use direction::{
    angle_to_sector, angular_resolution, direction_matrix, pairwise_turn_matrix, quantize_matrix,
    sector_to_angle, DirectionMatrix, Granularity, SectorIndex, TurnMatrix, RAY_EPSILON,
};
pub use distance::{
    distance_ratios, length_to_qual_distance, qualitative_distances, QualitativeDistance,
};
