//! Indexing of `F_q^n`.
//!
//! A point `(x_1, …, x_n)` has index `Σ x_i q^{n−i}` (element indices as
//! digits, `x_1` most significant), so increasing index is lexicographic order.

use crate::error::{Error, Result};
use crate::field::FieldElement;

/// Largest grid accepted anywhere in the crate.
pub const MAX_POINTS: usize = 1 << 26;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    q: usize,
    n: usize,
    size: usize,
}

impl Space {
    pub fn new(q: usize, n: usize) -> Result<Space> {
        let size = (q as u128)
            .checked_pow(n as u32)
            .filter(|&s| s <= MAX_POINTS as u128)
            .ok_or_else(|| Error::Domain(format!("F_{q}^{n} is too large to enumerate")))?;
        Ok(Space { q, n, size: size as usize })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of points, `q^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self, coords: &[FieldElement]) -> usize {
        debug_assert_eq!(coords.len(), self.n);
        coords.iter().fold(0, |acc, c| acc * self.q + c.index())
    }

    pub fn decode_into(&self, mut idx: usize, out: &mut [FieldElement]) {
        debug_assert_eq!(out.len(), self.n);
        for slot in out.iter_mut().rev() {
            *slot = FieldElement::from_raw((idx % self.q) as u32);
            idx /= self.q;
        }
    }

    pub fn point(&self, idx: usize) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.n];
        self.decode_into(idx, &mut out);
        out
    }

    /// Raw digit decoding, for hot loops that index tables directly.
    pub fn digits_into(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = idx % self.q;
            idx /= self.q;
        }
    }
}
