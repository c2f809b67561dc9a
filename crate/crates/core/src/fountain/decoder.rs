use super::coeffs::derive_coefficients;
use super::gf256;
use super::FountainError;

#[derive(Debug, Clone)]
struct Row {
    // Empty for systematic unit rows. Otherwise length k, zero before the
    // pivot and 1 at the pivot.
    coeffs: Vec<u8>,
    payload: Vec<u8>,
}

impl Row {
    fn is_unit(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// What absorbing one chunk did to the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absorbed {
    /// The chunk raised the rank by one.
    Innovative,
    /// The chunk was a linear combination of rows already held.
    Redundant,
    /// Rank was already `k`; the chunk was ignored.
    Saturated,
}

/// Incremental Gaussian elimination over GF(256).
///
/// Rows are kept in echelon form indexed by pivot column, so absorbing a chunk
/// only touches rows whose pivot is a nonzero coefficient of the new chunk.
/// With `symbol_size == 0` this is a pure rank tracker.
#[derive(Debug, Clone)]
pub struct DecoderState {
    k: usize,
    symbol_size: usize,
    rows: Vec<Option<Row>>,
    rank: usize,
    eliminations: u64,
}

impl DecoderState {
    pub fn new(k: usize, symbol_size: usize) -> Self {
        Self {
            k,
            symbol_size,
            rows: vec![None; k],
            rank: 0,
            eliminations: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_complete(&self) -> bool {
        self.rank == self.k
    }

    /// Row operations performed so far (forward elimination and back-substitution).
    pub fn eliminations(&self) -> u64 {
        self.eliminations
    }

    /// Absorbs coded chunk `chunk_id`, deriving its coefficients.
    pub fn absorb(&mut self, chunk_id: u32, payload: &[u8]) -> Result<Absorbed, FountainError> {
        self.check_payload(chunk_id, payload)?;
        if self.is_complete() {
            return Ok(Absorbed::Saturated);
        }
        let col = chunk_id as usize;
        if col < self.k && self.rows[col].is_none() {
            self.rows[col] = Some(Row {
                coeffs: Vec::new(),
                payload: payload.to_vec(),
            });
            self.rank += 1;
            return Ok(Absorbed::Innovative);
        }
        self.absorb_row(derive_coefficients(chunk_id, self.k), payload.to_vec())
    }

    fn check_payload(&self, chunk_id: u32, payload: &[u8]) -> Result<(), FountainError> {
        if payload.len() != self.symbol_size {
            return Err(FountainError::PayloadLength {
                chunk: chunk_id,
                expected: self.symbol_size,
                got: payload.len(),
            });
        }
        Ok(())
    }

    /// Absorbs an explicit coefficient row.
    pub fn absorb_row(
        &mut self,
        mut coeffs: Vec<u8>,
        mut payload: Vec<u8>,
    ) -> Result<Absorbed, FountainError> {
        if coeffs.len() != self.k {
            return Err(FountainError::InvalidParams(format!(
                "coefficient row of length {} for k = {}",
                coeffs.len(),
                self.k
            )));
        }
        if payload.len() != self.symbol_size {
            return Err(FountainError::PayloadLength {
                chunk: u32::MAX,
                expected: self.symbol_size,
                got: payload.len(),
            });
        }
        if self.is_complete() {
            return Ok(Absorbed::Saturated);
        }
        for col in 0..self.k {
            let factor = coeffs[col];
            if factor == 0 {
                continue;
            }
            match &self.rows[col] {
                Some(row) => {
                    if row.is_unit() {
                        coeffs[col] = 0;
                    } else {
                        gf256::mul_add_slice(&mut coeffs[col..], &row.coeffs[col..], factor);
                    }
                    gf256::mul_add_slice(&mut payload, &row.payload, factor);
                    self.eliminations += 1;
                }
                None => {
                    let scale = gf256::inv(factor)?;
                    gf256::scale_slice(&mut coeffs[col..], scale);
                    gf256::scale_slice(&mut payload, scale);
                    self.rows[col] = Some(Row { coeffs, payload });
                    self.rank += 1;
                    return Ok(Absorbed::Innovative);
                }
            }
        }
        Ok(Absorbed::Redundant)
    }

    /// Back-substitutes and returns the `k · symbol_size` source bytes.
    pub fn into_source(mut self) -> Result<Vec<u8>, FountainError> {
        if !self.is_complete() {
            return Err(FountainError::RankDeficient {
                rank: self.rank,
                k: self.k,
            });
        }
        for col in (0..self.k).rev() {
            let (head, solved) = self.rows.split_at_mut(col + 1);
            let row = head[col].as_mut().expect("full rank");
            if row.is_unit() {
                continue;
            }
            for (offset, &factor) in row.coeffs[col + 1..].iter().enumerate() {
                if factor != 0 {
                    let other = solved[offset].as_ref().expect("full rank");
                    gf256::mul_add_slice(&mut row.payload, &other.payload, factor);
                    self.eliminations += 1;
                }
            }
        }
        let mut out = Vec::with_capacity(self.k * self.symbol_size);
        for row in self.rows.into_iter().flatten() {
            out.extend_from_slice(&row.payload);
        }
        Ok(out)
    }
}
