//! Chunk file layout: little-endian `u32` chunk id followed by `symbol_size`
//! payload bytes, repeated.

use super::codec::CodedChunk;
use super::FountainError;

pub fn write_chunks(chunks: &[CodedChunk]) -> Vec<u8> {
    let mut out = Vec::with_capacity(chunks.iter().map(|c| 4 + c.payload.len()).sum());
    for c in chunks {
        out.extend_from_slice(&c.chunk_id.to_le_bytes());
        out.extend_from_slice(&c.payload);
    }
    out
}

pub fn read_chunks(bytes: &[u8], symbol_size: usize) -> Result<Vec<CodedChunk>, FountainError> {
    let record = 4 + symbol_size;
    if bytes.len() % record != 0 {
        return Err(FountainError::Wire(format!(
            "{} bytes is not a whole number of {record}-byte records",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(record)
        .map(|r| CodedChunk {
            chunk_id: u32::from_le_bytes([r[0], r[1], r[2], r[3]]),
            payload: r[4..].to_vec(),
        })
        .collect())
}
