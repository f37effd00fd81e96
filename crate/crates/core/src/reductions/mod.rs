//! Hardness-reduction instance generators and their witness/extraction
//! procedures, plus brute-force satisfiability checkers used as ground truth.

mod nae;
mod sat3;

pub use nae::*;
pub use sat3::*;
