//! Configuration, tabular output and grid evaluation for the
//! resonant-beam SHG link model in `shglink-core`.

pub mod config;
pub mod figures;
pub mod sweep;
pub mod table;
pub mod units;
