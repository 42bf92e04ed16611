pub mod action;
pub mod braided;
pub mod cochain;
pub mod cohomology;
pub mod error;
pub mod group;
pub mod linalg;
pub mod module;
pub mod obstruction;
pub mod report;

pub use error::{Error, Result};
