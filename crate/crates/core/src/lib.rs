pub mod cn;
pub mod error;
pub mod graph;
pub mod lemma;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod solver;

pub use error::{Error, Result};
