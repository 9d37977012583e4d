pub mod classifier;
pub mod community;
pub mod corpus;
pub mod error;
pub mod pipeline;
pub mod propgraph;
pub mod synthetic;
pub mod tokenizer;

pub use error::{Error, Result};
