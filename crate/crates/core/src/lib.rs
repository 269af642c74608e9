pub mod arith;
pub mod cli;
pub mod completion;
pub mod contfrac;
pub mod error;
pub mod extremal;
pub mod fibword;
pub mod logmag;
pub mod oracle;
pub mod ring;

pub use error::{Error, Result};
pub use logmag::LogMag;
