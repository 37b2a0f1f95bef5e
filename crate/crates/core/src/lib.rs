pub mod catalog;
pub mod classifier;
pub mod duality;
pub mod error;
pub mod exterior;
pub mod invariants;
pub mod lie;
pub mod linalg;
pub mod linmap;
pub mod multi_index;
pub mod random;
pub mod sampling;
