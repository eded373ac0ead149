//! Instance text format and seeded generators.

mod format;
mod generate;

pub use format::{parse_instance, serialize_instance, ParseError};
pub use generate::{generate, GenerateError, Model};
