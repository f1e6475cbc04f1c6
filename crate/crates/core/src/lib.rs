pub mod config;
pub mod desing;
pub mod error;
pub mod genus4;
pub mod grouprep;
pub mod hkkn;
pub mod qseries;
pub mod rational;
pub mod registry;
pub mod slicerep;
pub mod weightlat;

pub use error::{Error, Result};
