/// Fixed-capacity set of chunk ids `0..n`, stored as a bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkSet {
    words: Vec<u64>,
    capacity: usize,
    count: usize,
}

impl ChunkSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
            count: 0,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for id in 0..capacity as u32 {
            s.insert(id);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn contains(&self, id: u32) -> bool {
        let i = id as usize;
        i < self.capacity && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    /// Returns `true` if `id` was newly added.
    pub fn insert(&mut self, id: u32) -> bool {
        let i = id as usize;
        assert!(
            i < self.capacity,
            "chunk id {id} outside [0, {})",
            self.capacity
        );
        let bit = 1u64 << (i % 64);
        let word = &mut self.words[i / 64];
        if *word & bit != 0 {
            return false;
        }
        *word |= bit;
        self.count += 1;
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros();
                bits &= bits - 1;
                Some(w as u32 * 64 + tz)
            })
        })
    }

    /// Ids held here but not in `other`, ascending, appended to `out`.
    pub fn difference_into(&self, other: &ChunkSet, out: &mut Vec<u32>) {
        for (w, (&mine, &theirs)) in self.words.iter().zip(&other.words).enumerate() {
            let mut bits = mine & !theirs;
            while bits != 0 {
                out.push(w as u32 * 64 + bits.trailing_zeros());
                bits &= bits - 1;
            }
        }
    }

    pub fn difference_len(&self, other: &ChunkSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| (a & !b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &ChunkSet) -> bool {
        self.difference_len(other) == 0
    }
}

/// A vehicle's collected chunks and the time it first held enough to decode.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkStore {
    pub set: ChunkSet,
    pub completed_at: Option<f64>,
}

impl ChunkStore {
    pub fn new(n_chunks: usize) -> Self {
        Self {
            set: ChunkSet::new(n_chunks),
            completed_at: None,
        }
    }

    pub fn count(&self) -> usize {
        self.set.len()
    }

    pub fn is_complete(&self) -> bool {
        self.completed_at.is_some()
    }

    /// Sets `completed_at` the first time this is called with `reached == true`.
    /// Returns `true` on that transition.
    pub fn mark_complete(&mut self, reached: bool, now: f64) -> bool {
        if reached && self.completed_at.is_none() {
            self.completed_at = Some(now);
            return true;
        }
        false
    }
}
