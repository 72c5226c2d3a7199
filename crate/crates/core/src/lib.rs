//! Logical channels of repeated noisy stabilizer error correction.
//!
//! The crate builds exact superoperators for encoding, noisy syndrome
//! extraction and recovery, and decoding of small stabilizer codes, and uses
//! them to study how the effective logical channel evolves from round to
//! round.

pub mod channels;
pub mod code;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod markov;
pub mod pauli;

pub use code::{builtin_five_qubit, builtin_rep3, parse_code_file, StabilizerCode, Syndrome};
pub use error::{Error, Result};
pub use pauli::{parse_pauli, PauliOperator};
