//! The index set `𝒜` of correction triples `(j, k, l)`.
//!
//! `𝒜` is the smallest set containing the generators `(2i, 2i, 1)` and
//! closed under
//!
//! 1. adding `(n, n, 1)`, `n ≥ 2`, to a sum of one or more members;
//! 2. adding `(m−1, m−½, 1)` to a sum of `m ≥ 2` members.
//!
//! `k` can be a half-integer and is stored doubled.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{invalid, Result};

/// A triple `(j, k, l)` with `k` stored as `two_k = 2k`. Ordered
/// lexicographically by `(j, k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTriple {
    pub j: u32,
    pub two_k: u32,
    pub l: u32,
}

impl IndexTriple {
    pub const fn new(j: u32, two_k: u32, l: u32) -> Self {
        Self { j, two_k, l }
    }

    /// `k` as a real number.
    pub fn k(&self) -> f64 {
        self.two_k as f64 / 2.0
    }

    /// `j ≤ k ≤ (7j−2)/6` and `l ≤ (2j−1)/3`.
    pub fn satisfies_containment_bound(&self) -> bool {
        let (j, two_k, l) = (self.j as i64, self.two_k as i64, self.l as i64);
        2 * j <= two_k && 3 * two_k <= 7 * j - 2 && 3 * l <= 2 * j - 1
    }

    fn plus(self, other: IndexTriple) -> IndexTriple {
        IndexTriple::new(self.j + other.j, self.two_k + other.two_k, self.l + other.l)
    }
}

impl fmt::Display for IndexTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_k % 2 == 0 {
            write!(f, "({},{},{})", self.j, self.two_k / 2, self.l)
        } else {
            write!(f, "({},{}/2,{})", self.j, self.two_k, self.l)
        }
    }
}

/// Largest supported `j_bound` (the closure grows combinatorially).
pub const MAX_J_BOUND: u32 = 20;

/// All members of `𝒜` with `j ≤ j_bound`.
pub fn index_set_generate(j_bound: u32) -> Result<BTreeSet<IndexTriple>> {
    if j_bound > MAX_J_BOUND {
        return invalid(format!("index set bound {j_bound} exceeds {MAX_J_BOUND}"));
    }
    let mut members: BTreeSet<IndexTriple> = (1..)
        .map(|i| IndexTriple::new(2 * i, 4 * i, 1))
        .take_while(|t| t.j <= j_bound)
        .collect();
    loop {
        let mut grown = members.clone();
        // `layer` holds every sum of exactly `count` members.
        let mut layer = members.clone();
        let mut count = 1u32;
        while !layer.is_empty() {
            for &s in &layer {
                for n in 2.. {
                    let t = s.plus(IndexTriple::new(n, 2 * n, 1));
                    if t.j > j_bound {
                        break;
                    }
                    grown.insert(t);
                }
                if count >= 2 {
                    let t = s.plus(IndexTriple::new(count - 1, 2 * count - 1, 1));
                    if t.j <= j_bound {
                        grown.insert(t);
                    }
                }
            }
            layer = layer
                .iter()
                .flat_map(|&s| members.iter().map(move |&m| s.plus(m)))
                .filter(|t| t.j <= j_bound)
                .collect();
            count += 1;
        }
        if grown.len() == members.len() {
            return Ok(members);
        }
        members = grown;
    }
}
