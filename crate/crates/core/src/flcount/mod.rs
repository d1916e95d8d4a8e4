//! Finite-length counting of cycles and cycle concatenations.

mod active;
mod brute;
pub mod cache;
mod counts;
mod objects;
mod walks;

pub use active::{lifting_survives, partition_active, relocation_active, CycleCandidate};
pub use brute::{brute_force_count, brute_force_count_cycles, BRUTE_NODE_CAP};
pub use counts::{count_cycles_md, count_cycles_sc, count_objects_md_direct, count_objects_sc};
pub use objects::{
    count_objects_md, cycle_sum, list_active_objects, list_active_objects_with, list_objects, CycleTerms, Elementarity,
    FundamentalCycle, ObjectKind, ObjectList, ObjectRecord, TannerObject,
};
pub use walks::{count_cycles, list_cycles, CycleList, MAX_HALF_LEN};
