pub mod cli;
pub mod dispersion;
pub mod ed_oracle;
pub mod efimov_scale;
pub mod error;
pub mod quad;
pub mod roots;
pub mod special;
pub mod stm;
pub mod two_body;

pub use error::{Error, Result};
