/// Public key of the coefficient generator. Every encoder and decoder must
/// agree on it; changing it changes the code.
pub const COEFFICIENT_KEY: u64 = 0x7663_645f_636f_6566; // "vcd_coef"

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-mode block `counter` of the stream for `(chunk_id, attempt)`.
fn keyed_block(chunk_id: u32, attempt: u32, counter: u64) -> u64 {
    let stream = mix64(COEFFICIENT_KEY ^ ((chunk_id as u64) << 32 | attempt as u64));
    mix64(stream ^ counter.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Coefficient vector of coded chunk `chunk_id` over `k` source symbols.
///
/// Ids below `k` are the systematic unit vectors. Larger ids draw `k` bytes
/// from a counter-based generator keyed by the chunk id; an all-zero draw is
/// rejected and redrawn under the next attempt number.
pub fn derive_coefficients(chunk_id: u32, k: usize) -> Vec<u8> {
    let mut out = vec![0u8; k];
    if (chunk_id as usize) < k {
        out[chunk_id as usize] = 1;
        return out;
    }
    for attempt in 0.. {
        for (counter, chunk) in out.chunks_mut(8).enumerate() {
            let bytes = keyed_block(chunk_id, attempt, counter as u64).to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
        if out.iter().any(|&b| b != 0) {
            break;
        }
    }
    out
}
