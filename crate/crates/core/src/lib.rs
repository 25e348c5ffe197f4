mod error;
pub mod cli;
pub mod enttool;
pub mod exactmat;
pub mod cover;
pub mod expmap;
pub mod sft;
pub mod shadow;
pub mod zetafn;

pub use error::{Error, Result};
