pub mod cli;
pub mod discrimination;
pub mod error;
pub mod hgmetrology;
pub mod infotheory;
pub mod povm;
pub mod qmath;

pub use error::{Error, Result};
