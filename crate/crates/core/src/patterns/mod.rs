//! Pattern classes of small objects over an all-one base matrix.

mod census;
mod class;
mod object;

pub use census::{census, dominant_rows, dominant_total, write_census_csv, PatternCensusRow, DEFAULT_STRATA};
pub use class::{
    char_poly_class, char_poly_object, class_cardinality, class_multiplier, class_probability, enumerate_classes,
    expected_active, monomial_array, stabilizer_size, ObjectPatternClass,
};
pub use object::{BasisCycle, BipartiteObject, MAX_OBJECT_NODES};
