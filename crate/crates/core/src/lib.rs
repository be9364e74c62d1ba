pub mod cli;
pub mod coils;
pub mod dynamics;
pub mod geometry;
pub mod magnetics;
pub mod numerics;
pub mod optimizer;
pub mod transient;
