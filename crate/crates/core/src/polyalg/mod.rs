//! Laurent-polynomial coefficient arrays and their convolution.

mod array;
mod conv;
mod coupling;
mod probability;

pub use array::CoefficientArray;
pub use conv::{conv, conv_all, conv_direct, conv_fft, power, DIRECT_THRESHOLD, DUST};
pub use coupling::{coupling_array, sum_mod_m, PowerSpec};
pub use probability::{ProbabilityMatrix, MASS_TOL};
