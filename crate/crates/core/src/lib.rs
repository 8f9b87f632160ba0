pub mod channels;
pub mod error;
pub mod explorer;
pub mod families;
pub mod linalg;
pub mod oracle;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
