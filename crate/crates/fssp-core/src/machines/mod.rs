//! The catalog of concrete cell programs.
//!
//! All minimal-time machines here work by live geometry: a wake sweep carries
//! hop counters outward, a reflected sweep comes back, and each cell counts
//! down from what it has measured. Cells are identical finite-state machines;
//! no cell is told its index, and latent cells move only when spoken to.

mod fourend;
mod minline;
mod minsquare;
mod ringmin;
mod sqrings;
mod twoend;

pub use fourend::FourEnd;
pub use minline::MinLine;
pub use minsquare::MinSquare;
pub use ringmin::RingMin;
pub use sqrings::SquareOfRingsMin;
pub use twoend::TwoEndLine;
