//! Construction and verification of subgame perfect equilibria in infinite
//! sequential games given as finite arenas.

pub mod arena;
pub mod cli;
pub mod error;
pub mod gen;
pub mod prefs;
pub mod oracle;
pub mod profiles;
pub mod solver;

pub use error::{Error, Result};
