//! Library surface of the polyauto CLI: map-definition IO, deterministic
//! slice rendering, and the aggregated verification suite.

pub mod io;
pub mod render;
pub mod suite;
