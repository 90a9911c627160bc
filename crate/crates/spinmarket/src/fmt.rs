//! Floating-point output formatting.
//!
//! Every float this crate writes to a file goes through [`float17`] (or the
//! JSON formatter in `report`, which uses the same format string), so that a
//! given value always serializes to the same bytes. 17 significant digits is
//! enough to round-trip any f64 exactly.

/// Format a float with 17 significant digits in scientific notation.
pub(crate) fn float17(x: f64) -> String {
    format!("{x:.16e}")
}
