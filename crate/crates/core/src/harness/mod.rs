//! Grid sampling, seeded parameter draws, the finite-difference oracle,
//! report assembly and the randomized verification runs.

pub mod fd;
pub mod grid;
pub mod report;
pub mod sampling;
pub mod verify;
