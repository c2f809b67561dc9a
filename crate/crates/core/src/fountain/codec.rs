use std::collections::HashSet;

use super::coeffs::derive_coefficients;
use super::decoder::DecoderState;
use super::gf256;
use super::FountainError;

/// Shape of a coded file: `k` source symbols of `symbol_size` bytes, `n` coded chunks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecParams {
    pub k: usize,
    pub n: usize,
    pub symbol_size: usize,
}

impl Default for CodecParams {
    /// 400 kB file, 450 chunks, any 300 decode: 1334-byte symbols.
    fn default() -> Self {
        Self::for_file_len(400_000, 300, 450)
    }
}

impl CodecParams {
    /// Smallest symbol size that fits `file_len` bytes into `k` symbols.
    pub fn for_file_len(file_len: usize, k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            symbol_size: file_len.div_ceil(k.max(1)).max(1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.k * self.symbol_size
    }

    /// Bytes per chunk on the wire: 4-byte id plus payload.
    pub fn chunk_wire_size(&self) -> usize {
        4 + self.symbol_size
    }

    fn validate(&self) -> Result<(), FountainError> {
        if self.k == 0 || self.symbol_size == 0 {
            return Err(FountainError::InvalidParams(
                "k and symbol_size must be positive".into(),
            ));
        }
        if self.n < self.k {
            return Err(FountainError::InvalidParams(format!(
                "n = {} is smaller than k = {}",
                self.n, self.k
            )));
        }
        if self.n > u32::MAX as usize {
            return Err(FountainError::InvalidParams(
                "n does not fit chunk ids".into(),
            ));
        }
        Ok(())
    }
}

/// The original file split into `k` zero-padded symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceBlock {
    k: usize,
    symbol_size: usize,
    payload: Vec<u8>,
    original_len: usize,
}

impl SourceBlock {
    pub fn new(file: &[u8], k: usize, symbol_size: usize) -> Result<Self, FountainError> {
        if file.is_empty() {
            return Err(FountainError::EmptyFile);
        }
        let capacity = k * symbol_size;
        if file.len() > capacity {
            return Err(FountainError::FileTooLarge {
                len: file.len(),
                capacity,
            });
        }
        let mut payload = file.to_vec();
        payload.resize(capacity, 0);
        Ok(Self {
            k,
            symbol_size,
            payload,
            original_len: file.len(),
        })
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn symbol(&self, j: usize) -> &[u8] {
        &self.payload[j * self.symbol_size..(j + 1) * self.symbol_size]
    }

    pub fn padded(&self) -> &[u8] {
        &self.payload
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodedChunk {
    pub chunk_id: u32,
    pub payload: Vec<u8>,
}

/// Encodes `file` into `params.n` chunks; chunks `0..k` are the raw symbols.
pub fn encode(file: &[u8], params: &CodecParams) -> Result<Vec<CodedChunk>, FountainError> {
    params.validate()?;
    let block = SourceBlock::new(file, params.k, params.symbol_size)?;
    Ok((0..params.n as u32)
        .map(|id| encode_chunk(&block, id))
        .collect())
}

/// One coded chunk of an already padded source block.
pub fn encode_chunk(block: &SourceBlock, chunk_id: u32) -> CodedChunk {
    if (chunk_id as usize) < block.k {
        return CodedChunk {
            chunk_id,
            payload: block.symbol(chunk_id as usize).to_vec(),
        };
    }
    let mut payload = vec![0u8; block.symbol_size];
    for (j, &c) in derive_coefficients(chunk_id, block.k).iter().enumerate() {
        gf256::mul_add_slice(&mut payload, block.symbol(j), c);
    }
    CodedChunk { chunk_id, payload }
}

/// Reconstructs the original file from any full-rank set of chunks.
///
/// Systematic chunks are absorbed first, so a set holding all of `0..k`
/// decodes without any elimination.
pub fn decode(
    chunks: &[CodedChunk],
    k: usize,
    original_len: usize,
) -> Result<Vec<u8>, FountainError> {
    let mut order: Vec<&CodedChunk> = chunks.iter().collect();
    order.sort_by_key(|c| c.chunk_id);
    let decoder = decode_into_state(&order, k)?;
    let mut source = decoder.into_source()?;
    if original_len > source.len() {
        return Err(FountainError::FileTooLarge {
            len: original_len,
            capacity: source.len(),
        });
    }
    source.truncate(original_len);
    Ok(source)
}

fn decode_into_state(chunks: &[&CodedChunk], k: usize) -> Result<DecoderState, FountainError> {
    if k == 0 {
        return Err(FountainError::InvalidParams("k must be positive".into()));
    }
    let symbol_size = chunks.first().map_or(0, |c| c.payload.len());
    let mut seen = HashSet::with_capacity(chunks.len());
    let mut decoder = DecoderState::new(k, symbol_size);
    for chunk in chunks {
        if !seen.insert(chunk.chunk_id) {
            return Err(FountainError::DuplicateChunk(chunk.chunk_id));
        }
        decoder.absorb(chunk.chunk_id, &chunk.payload)?;
    }
    if !decoder.is_complete() {
        return Err(FountainError::RankDeficient {
            rank: decoder.rank(),
            k,
        });
    }
    Ok(decoder)
}

/// Rank of the coefficient vectors of `chunk_ids`, without touching payloads.
pub fn coefficient_rank(chunk_ids: impl IntoIterator<Item = u32>, k: usize) -> usize {
    let mut tracker = DecoderState::new(k, 0);
    for id in chunk_ids {
        tracker
            .absorb(id, &[])
            .expect("empty payload matches symbol size 0");
    }
    tracker.rank()
}
