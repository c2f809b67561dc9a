//! Fountain codec battery: full-set decode, random threshold-size subsets,
//! and one-short subsets.

use rand::seq::index::sample;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcd_core::fountain::{decode, encode, CodecParams, FountainError};

pub struct Battery {
    pub file_len: usize,
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    pub short_trials: usize,
    pub min_success: f64,
    pub seed: u64,
}

pub struct Outcome {
    pub full_set_ok: bool,
    pub successes: usize,
    pub trials: usize,
    pub short_rejected: usize,
    pub short_trials: usize,
    pub passed: bool,
}

pub fn run(b: &Battery) -> anyhow::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let mut file = vec![0u8; b.file_len];
    rng.fill_bytes(&mut file);
    let params = CodecParams::for_file_len(b.file_len, b.k, b.n);
    let chunks = encode(&file, &params)?;

    let full_set_ok = decode(&chunks, b.k, b.file_len)? == file;
    log::info!("full set of {} chunks decodes: {full_set_ok}", chunks.len());

    let mut successes = 0;
    for t in 0..b.trials {
        let picked: Vec<_> = sample(&mut rng, b.n, b.k)
            .into_iter()
            .map(|i| chunks[i].clone())
            .collect();
        match decode(&picked, b.k, b.file_len) {
            Ok(out) if out == file => successes += 1,
            Ok(_) => anyhow::bail!("subset {t} decoded to the wrong bytes"),
            Err(FountainError::RankDeficient { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    log::info!("{successes}/{} random {}-subsets decode", b.trials, b.k);

    let mut short_rejected = 0;
    for _ in 0..b.short_trials {
        let picked: Vec<_> = sample(&mut rng, b.n, b.k - 1)
            .into_iter()
            .map(|i| chunks[i].clone())
            .collect();
        if let Err(FountainError::RankDeficient { rank, .. }) = decode(&picked, b.k, b.file_len) {
            if rank < b.k {
                short_rejected += 1;
            }
        }
    }
    log::info!(
        "{short_rejected}/{} random {}-subsets rejected",
        b.short_trials,
        b.k - 1
    );

    let rate = successes as f64 / b.trials.max(1) as f64;
    Ok(Outcome {
        full_set_ok,
        successes,
        trials: b.trials,
        short_rejected,
        short_trials: b.short_trials,
        passed: full_set_ok && rate >= b.min_success && short_rejected == b.short_trials,
    })
}
