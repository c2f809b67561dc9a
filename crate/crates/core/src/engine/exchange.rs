use rand::Rng;

use super::store::ChunkSet;

/// Fractional chunk budget left over on each direction of a live link.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LinkCarry {
    pub a_to_b: f64,
    pub b_to_a: f64,
}

/// Chunk ids moving over one link in one step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transfer {
    pub a_to_b: Vec<u32>,
    pub b_to_a: Vec<u32>,
}

impl Transfer {
    pub fn len(&self) -> usize {
        self.a_to_b.len() + self.b_to_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn one_way<R: Rng + ?Sized>(
    sender: &ChunkSet,
    receiver: &ChunkSet,
    budget: f64,
    carry: &mut f64,
    rng: &mut R,
    scratch: &mut Vec<u32>,
) -> Vec<u32> {
    debug_assert!(budget >= 0.0);
    let total = budget + *carry;
    let whole = total.floor();
    *carry = total - whole;
    let whole = whole as usize;
    if whole == 0 {
        return Vec::new();
    }
    scratch.clear();
    sender.difference_into(receiver, scratch);
    if scratch.len() <= whole {
        return scratch.clone();
    }
    let mut picked: Vec<u32> = rand::seq::index::sample(rng, scratch.len(), whole)
        .into_iter()
        .map(|i| scratch[i])
        .collect();
    picked.sort_unstable();
    picked
}

/// Chunks each side sends the other over one step of a contact.
///
/// Both directions read the same unmodified snapshots; applying the result
/// is left to the caller. Each direction sends
/// `min(floor(budget + carry), |surplus|)` ids drawn uniformly from the
/// sender's surplus, and keeps the fractional part of `budget + carry` for the
/// next step. Unused whole chunks are not carried.
pub fn exchange<R: Rng + ?Sized>(
    a: &ChunkSet,
    b: &ChunkSet,
    budget_a_to_b: f64,
    budget_b_to_a: f64,
    carry: &mut LinkCarry,
    rng: &mut R,
) -> Transfer {
    let mut scratch = Vec::new();
    let a_to_b = one_way(a, b, budget_a_to_b, &mut carry.a_to_b, rng, &mut scratch);
    let b_to_a = one_way(b, a, budget_b_to_a, &mut carry.b_to_a, rng, &mut scratch);
    Transfer { a_to_b, b_to_a }
}
