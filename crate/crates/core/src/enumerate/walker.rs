//! Odometer-style walk over consecutive graph codes.

use crate::graph::{code_space, pair_count, pairs, GraphCode, GraphError, MAX_CODE_ORDER};

const MAX_PAIRS: usize = MAX_CODE_ORDER * (MAX_CODE_ORDER - 1) / 2;

/// Walks codes `start, start + 1, ..` keeping the out-neighborhood masks in
/// sync by touching only the digits that change on each increment.
#[derive(Clone)]
pub struct GraphWalker {
    n: usize,
    len: usize,
    index: u64,
    limit: u64,
    pairs: [(u8, u8); MAX_PAIRS],
    digits: [u8; MAX_PAIRS],
    out: [u64; MAX_CODE_ORDER],
}

impl GraphWalker {
    /// Positions the walker on `start`, which must be a valid code.
    pub fn new(n: usize, start: u64) -> Result<Self, GraphError> {
        let code = GraphCode::new(n, start)?;
        let mut walker = GraphWalker {
            n,
            len: pair_count(n),
            index: start,
            limit: code_space(n)?,
            pairs: [(0, 0); MAX_PAIRS],
            digits: [0; MAX_PAIRS],
            out: [0; MAX_CODE_ORDER],
        };
        for (p, (i, j)) in pairs(n).enumerate() {
            walker.pairs[p] = (i as u8, j as u8);
        }
        for (p, d) in code.digits().into_iter().enumerate() {
            walker.digits[p] = d;
            let (i, j) = walker.pairs[p];
            match d {
                1 => walker.out[i as usize] |= 1 << j,
                2 => walker.out[j as usize] |= 1 << i,
                _ => {}
            }
        }
        Ok(walker)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Out-neighborhood masks of the current graph.
    #[inline]
    pub fn out(&self) -> &[u64] {
        &self.out[..self.n]
    }

    /// Moves to the next code. Returns `false`, leaving the state untouched,
    /// when the current code is the last one.
    #[inline]
    pub fn advance(&mut self) -> bool {
        if self.index + 1 >= self.limit {
            return false;
        }
        self.index += 1;
        for p in 0..self.len {
            let (i, j) = self.pairs[p];
            let (i, j) = (i as usize, j as usize);
            match self.digits[p] {
                0 => {
                    self.digits[p] = 1;
                    self.out[i] |= 1 << j;
                    return true;
                }
                1 => {
                    self.digits[p] = 2;
                    self.out[i] &= !(1 << j);
                    self.out[j] |= 1 << i;
                    return true;
                }
                _ => {
                    // carry into the next pair
                    self.digits[p] = 0;
                    self.out[j] &= !(1 << i);
                }
            }
        }
        unreachable!("index below limit always has a digit to bump")
    }
}
