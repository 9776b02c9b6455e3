//! Best-known upper bounds on bilinear complexity, with certificates, and
//! the end-to-end reproductions built on them.

pub mod export;
pub mod fixtures;
pub mod table;

pub use fixtures::{reproduce_fixture, FixtureReport, FixtureRow, FIXTURE_NAMES};
pub use table::{describe_g, BoundTable, FixedCostProvider, Key, TableOptions, TableProvider};
