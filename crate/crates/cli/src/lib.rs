//! Command-line front end for `clonelab`: single points, figure datasets and the
//! verification suite.

pub mod angle;
pub mod format;
pub mod point;
pub mod spec;
pub mod sweep;
pub mod verify;
