//! Finite universes: every canonical set whose picture fits in a node bound.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::canon::CanonSet;
use crate::graph::Apg;

/// Largest supported bound. Enumeration is exhaustive over adjacency
/// matrices, so the cost at bound `k` is `2^(k*k)` canonicalizations.
pub const MAX_UNIVERSE_BOUND: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("universe bound must be at least 1")]
    BoundZero,
    #[error("universe bound {requested} exceeds the supported maximum {MAX_UNIVERSE_BOUND}")]
    BoundTooLarge { requested: usize },
}

/// A desk-scale stand-in for the universe of sets: all canonical forms with
/// at most `bound` nodes, pairwise distinct, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    bound: usize,
    members: Vec<CanonSet>,
}

impl Universe {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn members(&self) -> &[CanonSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &CanonSet) -> bool {
        self.members.binary_search(s).is_ok()
    }

    /// The same universe with `extra` adjoined (if new), keeping order.
    /// Used to test computed totalities as quantifier values.
    pub fn with_member(&self, extra: &CanonSet) -> Universe {
        let mut members = self.members.clone();
        if let Err(at) = members.binary_search(extra) {
            members.insert(at, extra.clone());
        }
        Universe {
            bound: self.bound,
            members,
        }
    }
}

/// Enumerates all canonical sets with at most `k` nodes by brute force over
/// pointed digraphs: every adjacency matrix on `j <= k` nodes, rooted at
/// node 0 and restricted to its reachable part, canonicalized and deduped.
pub fn enumerate_universe(k: usize) -> Result<Universe, UniverseError> {
    if k == 0 {
        return Err(UniverseError::BoundZero);
    }
    if k > MAX_UNIVERSE_BOUND {
        return Err(UniverseError::BoundTooLarge { requested: k });
    }
    let mut seen: BTreeSet<CanonSet> = BTreeSet::new();
    for j in 1..=k {
        let bits = j * j;
        for mask in 0u64..(1u64 << bits) {
            let mut edges = Vec::new();
            for p in 0..j {
                for c in 0..j {
                    if mask >> (p * j + c) & 1 == 1 {
                        edges.push((p as u32, c as u32));
                    }
                }
            }
            let g = Apg::from_reachable(j, &edges, 0).expect("well-formed enumeration graph");
            seen.insert(CanonSet::canonicalize(&g));
        }
    }
    Ok(Universe {
        bound: k,
        members: seen.into_iter().collect(),
    })
}
