pub mod bounds;
pub mod catalog;
pub mod charpair;
pub mod cli;
pub mod combi;
pub mod cover;
pub mod facering;
pub mod intlat;
pub mod invariants;
