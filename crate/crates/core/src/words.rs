//! Binary words, necklaces and the word/integer correspondence.
//!
//! A [`Word`] of length `n` packs its symbols most-significant-bit first, so
//! symbol `b_0` is bit `n - 1` and the packed integer equals
//! `N = sum 2^(n-1-j) b_j`. With this packing the native integer order and the
//! lexicographic order on symbols coincide.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Longest supported word.
pub const MAX_LEN: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u8,
    bits: u64,
}

#[inline]
fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl Word {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::BadLength(len));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::DecimalOutOfRange {
                value: bits.to_string(),
                len,
            });
        }
        Ok(Word {
            len: len as u8,
            bits,
        })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Word::new(len, 0)
    }

    pub fn ones(len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::BadLength(len));
        }
        Word::new(len, mask(len))
    }

    pub fn from_symbols(symbols: &[u8]) -> Result<Self> {
        let len = symbols.len();
        if len == 0 || len > MAX_LEN {
            return Err(Error::BadLength(len));
        }
        let mut bits = 0u64;
        for &s in symbols {
            if s > 1 {
                return Err(Error::BadSymbol(char::from(b'0' + s.min(9))));
            }
            bits = (bits << 1) | u64::from(s);
        }
        Word::new(len, bits)
    }

    /// Parses a `±1` word written with `-` and `+` glyphs (`-` is symbol 0).
    pub fn from_pm_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| match c {
                '-' | '−' => Ok(0),
                '+' => Ok(1),
                other => Err(Error::BadSymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::from_symbols(&symbols)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Always false; words have length at least one.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Packed value, identical to [`word_to_decimal`].
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn symbol(&self, j: usize) -> u8 {
        debug_assert!(j < self.len());
        ((self.bits >> (self.len() - 1 - j)) & 1) as u8
    }

    pub fn symbols(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |j| self.symbol(j))
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Rotation `b_r b_(r+1) ... b_(r-1)`.
    pub fn rotate_left(&self, r: usize) -> Word {
        let n = self.len();
        let r = r % n;
        if r == 0 {
            return *self;
        }
        let bits = ((self.bits << r) | (self.bits >> (n - r))) & mask(n);
        Word {
            len: self.len,
            bits,
        }
    }

    /// Symbols read backwards.
    pub fn reverse(&self) -> Word {
        let n = self.len();
        let bits = self.bits.reverse_bits() >> (64 - n);
        Word {
            len: self.len,
            bits,
        }
    }

    pub fn with_symbol(&self, j: usize, s: u8) -> Word {
        let bit = 1u64 << (self.len() - 1 - j);
        let bits = if s == 0 {
            self.bits & !bit
        } else {
            self.bits | bit
        };
        Word {
            len: self.len,
            bits,
        }
    }

    /// `-`/`+` rendering used for `±1` circulants.
    pub fn to_pm_string(&self) -> String {
        self.symbols()
            .map(|s| if s == 0 { '-' } else { '+' })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols() {
            f.write_str(if s == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::BadSymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::from_symbols(&symbols)
    }
}

/// Necklace test by Booth's least-rotation scan over the doubled word.
///
/// The candidate start `k` of the least rotation never moves backwards, so the
/// scan stops as soon as some rotation other than the identity is found to be
/// strictly smaller.
pub fn is_necklace(w: &Word) -> bool {
    let n = w.len();
    let m = 2 * n;
    let at = |i: usize| w.symbol(i % n);
    let mut failure = [-1i32; 2 * MAX_LEN];
    let mut k = 0usize;
    for j in 1..m {
        let sj = at(j);
        let mut i = failure[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
                if k != 0 {
                    return false;
                }
            }
            i = failure[i as usize];
        }
        if i == -1 && sj != at(k) {
            // i == -1, so k + i + 1 == k
            if sj < at(k) {
                return false;
            }
            failure[j - k] = -1;
        } else {
            failure[j - k] = i + 1;
        }
    }
    k == 0
}

/// Lexicographic successor among necklaces of the same length, together with
/// the first index at which it differs from `w`.
///
/// Returns `Ok(None)` for `1...1`.
pub fn next_necklace(w: &Word) -> Result<Option<(Word, usize)>> {
    if !is_necklace(w) {
        return Err(Error::NotNecklace(w.to_string()));
    }
    Ok(next_necklace_unchecked(w))
}

/// Duval-style successor without the membership check on the input.
///
/// Each round flips the rightmost 0 of the current prenecklace to 1 and
/// extends the prefix periodically; the result is a necklace exactly when the
/// prefix length divides `n`. Every later round flips a position to the right
/// of the first one, so the first flip is the changed-from index.
#[inline]
pub fn next_necklace_unchecked(w: &Word) -> Option<(Word, usize)> {
    let n = w.len();
    let mut bits = w.bits;
    let mut changed_from = None;
    loop {
        let t = bits.trailing_ones() as usize;
        if t >= n {
            return None;
        }
        let prefix_len = n - t;
        changed_from.get_or_insert(prefix_len - 1);
        let prefix = u128::from((bits | (1u64 << t)) >> t);
        let mut rep = prefix;
        let mut rep_len = prefix_len;
        while rep_len < n {
            rep = (rep << rep_len) | rep;
            rep_len *= 2;
        }
        bits = (rep >> (rep_len - n)) as u64;
        if n % prefix_len == 0 {
            let next = Word { len: w.len, bits };
            return Some((next, changed_from.unwrap_or(0)));
        }
    }
}

/// Iterates necklaces of one length in increasing order from `start`
/// (inclusive) up to `end` (exclusive), or through `1...1` when `end` is None.
#[derive(Clone, Debug)]
pub struct Necklaces {
    next: Option<Word>,
    end: Option<Word>,
}

impl Necklaces {
    pub fn all(n: usize) -> Result<Self> {
        Ok(Necklaces {
            next: Some(Word::zeros(n)?),
            end: None,
        })
    }

    pub fn range(start: Word, end: Option<Word>) -> Result<Self> {
        if !is_necklace(&start) {
            return Err(Error::NotNecklace(start.to_string()));
        }
        Ok(Necklaces {
            next: Some(start),
            end,
        })
    }
}

impl Iterator for Necklaces {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next?;
        if let Some(end) = self.end {
            if cur >= end {
                self.next = None;
                return None;
            }
        }
        self.next = next_necklace_unchecked(&cur).map(|(w, _)| w);
        Some(cur)
    }
}

/// Euler's totient by trial division.
pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "euler_phi is defined for m >= 1");
    let mut result = m;
    let mut rest = m;
    let mut q = 2u64;
    while q * q <= rest {
        if rest % q == 0 {
            while rest % q == 0 {
                rest /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

/// Number of binary necklaces of length `n`: `(1/n) sum_{d|n} 2^(n/d) phi(d)`.
pub fn necklace_count(n: usize) -> BigUint {
    assert!(n >= 1, "necklace_count is defined for n >= 1");
    let mut total = BigUint::zero();
    for d in 1..=n {
        if n % d == 0 {
            total += (BigUint::one() << (n / d)) * euler_phi(d as u64);
        }
    }
    total / BigUint::from(n)
}

/// Uniform random necklace of length `n >= 2`, excluding `0...0` and `1...1`.
///
/// Every other necklace starts with 0 and ends with 1, so only the `n - 2`
/// interior symbols are drawn; non-necklaces are rejected and redrawn.
pub fn random_necklace<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Word {
    assert!(
        (2..=MAX_LEN).contains(&n),
        "random_necklace needs 2 <= n <= 64"
    );
    let interior = n - 2;
    loop {
        let mid = if interior == 0 {
            0
        } else {
            rng.gen::<u64>() & mask(interior)
        };
        let bits = (mid << 1) | 1;
        let w = Word { len: n as u8, bits };
        if is_necklace(&w) {
            return w;
        }
    }
}

pub fn word_to_decimal(w: &Word) -> u64 {
    w.bits
}

pub fn decimal_to_word(value: u64, n: usize) -> Result<Word> {
    Word::new(n, value)
}
