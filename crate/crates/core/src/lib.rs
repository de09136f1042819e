pub mod airy;
pub mod checks;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod protocols;
pub mod scattering;
pub mod spin;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
