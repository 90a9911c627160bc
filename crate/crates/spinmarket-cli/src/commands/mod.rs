pub mod analyze;
pub mod compare;
pub mod simulate;
pub mod snapshot;
