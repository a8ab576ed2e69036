pub mod catalog;
pub mod clark;
pub mod cli;
pub mod density;
pub mod error;
pub mod poly;
pub mod sum;
pub mod symmetric;

pub use error::{Error, Result};
