pub mod borel;
pub mod complex;
pub mod error;
pub mod ghom;
pub mod grp;
pub mod lattice;
pub mod specseq;
pub mod topo;

pub use error::{Error, Limits, Result};
