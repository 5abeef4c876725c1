//! Circulants described by their first row: alphabet mapping, associated
//! polynomial, periodic autocorrelation and the flat-correlation test.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Alphabet {
    #[serde(rename = "01")]
    Binary01,
    #[serde(rename = "pm1")]
    BinaryPM1,
}

impl Alphabet {
    /// Matrix entry for a word symbol.
    #[inline]
    pub fn map(self, symbol: u8) -> i64 {
        match self {
            Alphabet::Binary01 => i64::from(symbol),
            Alphabet::BinaryPM1 => 2 * i64::from(symbol) - 1,
        }
    }

    pub fn flag(self) -> &'static str {
        match self {
            Alphabet::Binary01 => "01",
            Alphabet::BinaryPM1 => "pm1",
        }
    }

    /// Word rendering in the alphabet's glyphs.
    pub fn render(self, w: &Word) -> String {
        match self {
            Alphabet::Binary01 => w.to_string(),
            Alphabet::BinaryPM1 => w.to_pm_string(),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag())
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "01" => Ok(Alphabet::Binary01),
            "pm1" | "±1" => Ok(Alphabet::BinaryPM1),
            other => Err(Error::Table(format!("unknown alphabet {other:?}"))),
        }
    }
}

/// `circ(a_0, ..., a_(n-1))` with `a_j` the alphabet image of `b_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CirculantSpec {
    pub alphabet: Alphabet,
    pub word: Word,
}

impl CirculantSpec {
    pub fn new(alphabet: Alphabet, word: Word) -> Self {
        CirculantSpec { alphabet, word }
    }

    pub fn order(&self) -> usize {
        self.word.len()
    }

    pub fn entry(&self, k: usize) -> i64 {
        self.alphabet.map(self.word.symbol(k))
    }

    pub fn entries(&self) -> Vec<i64> {
        self.word.symbols().map(|s| self.alphabet.map(s)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolynomialClass {
    /// All coefficients ±1.
    Littlewood,
    /// Coefficients in {0,1} with constant term 1.
    Newman,
    Other,
}

/// Coefficients `(a_0, ..., a_(n-1))` of `f(z) = sum a_k z^k`.
pub fn associated_polynomial(spec: &CirculantSpec) -> Vec<i64> {
    spec.entries()
}

pub fn classify_polynomial(coeffs: &[i64]) -> PolynomialClass {
    if coeffs.iter().all(|&c| c == 1 || c == -1) {
        PolynomialClass::Littlewood
    } else if coeffs.first() == Some(&1) && coeffs.iter().all(|&c| c == 0 || c == 1) {
        PolynomialClass::Newman
    } else {
        PolynomialClass::Other
    }
}

/// First row of `A^T A`: `g[t] = sum_j a_j a_((j+t) mod n)`.
pub fn gram_first_row(spec: &CirculantSpec) -> Vec<i64> {
    autocorrelation(&spec.entries())
}

fn autocorrelation(a: &[i64]) -> Vec<i64> {
    let n = a.len();
    (0..n)
        .map(|t| (0..n).map(|j| a[j] * a[(j + t) % n]).sum())
        .collect()
}

/// Gram first row of the `±1` image `2A - J` of a `{0,1}` circulant.
pub fn signed_gram_first_row(w: &Word) -> Vec<i64> {
    gram_first_row(&CirculantSpec::new(Alphabet::BinaryPM1, *w))
}

/// True iff `g = (n, -1, ..., -1)`.
pub fn is_flat_correlation(g: &[i64]) -> bool {
    match g.split_first() {
        Some((&head, rest)) => head == g.len() as i64 && rest.iter().all(|&x| x == -1),
        None => false,
    }
}
