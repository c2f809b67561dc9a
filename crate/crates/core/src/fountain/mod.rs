//! Systematic random linear fountain code over GF(256).
//!
//! A file is split into `k` source symbols. Chunk ids `0..k` carry the symbols
//! verbatim; every later id carries a pseudorandom GF(256) combination whose
//! coefficients are a pure function of `(chunk_id, k)`, so nothing but the id
//! travels with the payload. Any `k` chunks with full-rank coefficients decode.

mod codec;
mod coeffs;
mod decoder;
pub mod gf256;
mod wire;

use thiserror::Error;

pub use codec::{
    coefficient_rank, decode, encode, encode_chunk, CodecParams, CodedChunk, SourceBlock,
};
pub use coeffs::{derive_coefficients, COEFFICIENT_KEY};
pub use decoder::{Absorbed, DecoderState};
pub use wire::{read_chunks, write_chunks};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FountainError {
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("file is empty")]
    EmptyFile,
    #[error("file of {len} bytes exceeds block capacity {capacity}")]
    FileTooLarge { len: usize, capacity: usize },
    #[error("invalid codec parameters: {0}")]
    InvalidParams(String),
    #[error("rank deficient: achieved rank {rank} of {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("chunk {0} supplied twice")]
    DuplicateChunk(u32),
    #[error("chunk {chunk}: payload of {got} bytes, expected {expected}")]
    PayloadLength {
        chunk: u32,
        expected: usize,
        got: usize,
    },
    #[error("malformed chunk stream: {0}")]
    Wire(String),
}
