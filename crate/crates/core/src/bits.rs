//! Fixed-capacity bit array backing semigroup membership and primitive sets.

use std::fmt;

pub(crate) const WORDS: usize = 6;

/// Number of addressable bits.
pub const CAPACITY: usize = WORDS * 64;

/// A bit array over `[0, CAPACITY)`, stored inline so that copying a state is
/// a plain memcpy.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Membership {
    words: [u64; WORDS],
}

impl Membership {
    pub const fn empty() -> Self {
        Membership { words: [0; WORDS] }
    }

    pub const fn full() -> Self {
        Membership {
            words: [u64::MAX; WORDS],
        }
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        debug_assert!(x < CAPACITY);
        (self.words[x >> 6] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.words[x >> 6] |= 1 << (x & 63);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.words[x >> 6] &= !(1 << (x & 63));
    }

    pub fn flip(&mut self, x: usize) {
        self.words[x >> 6] ^= 1 << (x & 63);
    }

    /// Number of set bits strictly below `x`.
    #[inline]
    pub fn count_below(&self, x: usize) -> u32 {
        let w = x >> 6;
        let mut n = 0;
        for word in &self.words[..w] {
            n += word.count_ones();
        }
        let rem = x & 63;
        if rem != 0 {
            n += (self.words[w] & ((1u64 << rem) - 1)).count_ones();
        }
        n
    }

    /// Clears every bit at or below `x`.
    #[inline]
    pub fn clear_through(&mut self, x: usize) {
        let w = x >> 6;
        for word in &mut self.words[..w] {
            *word = 0;
        }
        let rem = (x & 63) + 1;
        if rem == 64 {
            self.words[w] = 0;
        } else {
            self.words[w] &= !((1u64 << rem) - 1);
        }
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Iterates set bits in increasing order.
    pub fn ones(&self) -> Ones {
        Ones {
            words: self.words,
            index: 0,
        }
    }
}

impl fmt::Debug for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ones()).finish()
    }
}

pub struct Ones {
    words: [u64; WORDS],
    index: usize,
}

impl Iterator for Ones {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.index < WORDS {
            let w = self.words[self.index];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.index] = w & (w - 1);
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
        }
        None
    }
}
