//! Brute-force verifiers that share no code with the modular pipeline:
//! fraction-free elimination on explicit matrices, exhaustive maxima over all
//! words, and determinants as exact polynomials in one circulant stripe.

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::bounds;
use crate::engine::SearchResult;
use crate::error::{Error, Result};
use crate::spectral::{Alphabet, CirculantSpec};
use crate::words::Word;

/// Square matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl DenseMatrix {
    pub fn new(n: usize, entries: Vec<BigRational>) -> Self {
        assert_eq!(entries.len(), n * n, "matrix must be square");
        DenseMatrix { n, entries }
    }

    pub fn from_ints(n: usize, entries: &[i64]) -> Self {
        DenseMatrix::new(n, entries.iter().map(|&v| rational(v)).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigRational::one();
        }
        DenseMatrix::new(n, entries)
    }

    /// `(a_((k-j) mod n))_(j,k)`.
    pub fn circulant(first_row: &[BigRational]) -> Self {
        let n = first_row.len();
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                entries.push(first_row[(k + n - j) % n].clone());
            }
        }
        DenseMatrix::new(n, entries)
    }

    pub fn from_spec(spec: &CirculantSpec) -> Self {
        let row: Vec<BigRational> = spec.entries().into_iter().map(rational).collect();
        DenseMatrix::circulant(&row)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> &BigRational {
        &self.entries[j * self.n + k]
    }
}

fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact determinant by Bareiss fraction-free elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators, so
/// elimination only ever divides exactly.
pub fn bareiss_det(m: &DenseMatrix) -> BigRational {
    let n = m.n;
    if n == 0 {
        return BigRational::one();
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut scale = BigInt::one();
    for j in 0..n {
        let row = &m.entries[j * n..(j + 1) * n];
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    BigRational::new(bareiss_integer(rows), scale)
}

/// Product of row norms (each at least 1), a bound on every minor.
fn minor_bound(rows: &[Vec<BigInt>]) -> f64 {
    rows.iter()
        .map(|r| {
            let s: f64 = r
                .iter()
                .map(|x| x.to_f64().unwrap_or(f64::INFINITY).powi(2))
                .sum();
            s.sqrt().max(1.0)
        })
        .product()
}

fn bareiss_integer(rows: Vec<Vec<BigInt>>) -> BigInt {
    // Every intermediate entry is a minor; when twice its square fits, i128 suffices.
    let h = minor_bound(&rows);
    if h.is_finite() && h * h < 4.0e37 {
        let small: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128().unwrap_or(0)).collect())
            .collect();
        return BigInt::from(bareiss_i128(small));
    }
    bareiss_big(rows)
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Integer determinant of a circulant given by its mapped first row.
pub fn circulant_det(row: &[i64]) -> BigInt {
    let n = row.len();
    let rows = (0..n)
        .map(|j| (0..n).map(|k| BigInt::from(row[(k + n - j) % n])).collect())
        .collect();
    bareiss_integer(rows)
}

pub fn spec_det(spec: &CirculantSpec) -> BigInt {
    circulant_det(&spec.entries())
}

/// Maximum of `|det|` over all `2^n` words, with the least achieving word.
pub fn exhaustive_max(n: usize, alphabet: Alphabet) -> SearchResult {
    assert!(
        (1..=20).contains(&n),
        "exhaustive_max is an oracle for small n"
    );
    let mut best = BigUint::zero();
    let mut best_word = Word::zeros(n).expect("valid length");
    for bits in 0..(1u64 << n) {
        let w = Word::new(n, bits).expect("in range");
        let d = spec_det(&CirculantSpec::new(alphabet, w))
            .magnitude()
            .clone();
        if d > best {
            best = d;
            best_word = w;
        }
    }
    let upper_bound = match alphabet {
        Alphabet::Binary01 => bounds::u01_bound(n),
        Alphabet::BinaryPM1 => bounds::upm1_bound(n),
    };
    SearchResult {
        n,
        alphabet,
        ratio: bounds::ratio_4dp(&best, &upper_bound),
        max_abs_det: best,
        lex_least_word: best_word,
        upper_bound,
        candidates_examined: 1u64 << n,
        prime_used: None,
        maximizers: Vec::new(),
    }
}

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigRational>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| rational(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        poly_eval(self, x)
    }

    pub fn derivative(&self) -> IntPolynomial {
        poly_derivative(self)
    }

    pub fn pow(&self, e: u32) -> IntPolynomial {
        (0..e).fold(IntPolynomial::from_ints(&[1]), |acc, _| &acc * self)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return IntPolynomial::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}x"),
                _ => format!("{c}x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Horner evaluation.
pub fn poly_eval(f: &IntPolynomial, x: &BigRational) -> BigRational {
    f.coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub fn poly_derivative(f: &IntPolynomial) -> IntPolynomial {
    IntPolynomial::new(
        f.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * rational(i as i64))
            .collect(),
    )
}

/// Interpolating polynomial through `(x_i, y_i)` via Newton divided differences.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> IntPolynomial {
    let m = xs.len();
    let mut table = ys.to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // expand the Newton form from the innermost coefficient outwards
    let mut poly = IntPolynomial::new(Vec::new());
    for i in (0..m).rev() {
        let shifted = &poly * &IntPolynomial::new(vec![-xs[i].clone(), BigRational::one()]);
        let mut coeffs = shifted.coeffs;
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        coeffs[0] += &table[i];
        poly = IntPolynomial::new(coeffs);
    }
    poly
}

/// Mapped first row with entry `position` replaced by `x`.
pub fn row_with_entry(spec: &CirculantSpec, position: usize, x: &BigRational) -> Vec<BigRational> {
    spec.entries()
        .into_iter()
        .enumerate()
        .map(|(k, a)| {
            if k == position {
                x.clone()
            } else {
                rational(a)
            }
        })
        .collect()
}

/// `det` of `spec`'s circulant with every occurrence of `a_position` (the
/// whole stripe) replaced by an indeterminate, as an exact polynomial.
pub fn det_polynomial_in_entry(spec: &CirculantSpec, position: usize) -> Result<IntPolynomial> {
    let n = spec.order();
    if position >= n {
        return Err(Error::BadPosition { position, n });
    }
    let entries = spec.entries();
    let xs: Vec<BigRational> = (0..=n as i64).map(rational).collect();
    let ys: Vec<BigRational> = (0..=n as i64)
        .map(|x| {
            let mut row = entries.clone();
            row[position] = x;
            BigRational::from_integer(circulant_det(&row))
        })
        .collect();
    let poly = interpolate(&xs, &ys);
    if let Some(bad) = poly.coeffs.iter().find(|c| !c.is_integer()) {
        return Err(Error::NonIntegerCoefficient(bad.to_string()));
    }
    Ok(poly)
}
