//! Hadamard circulant cores, the quadratic-residue family `A_n(x)` and the
//! scan for maxima that move off the extreme points.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::engine::{self, SearchConfig};
use crate::error::{Error, Result};
use crate::modfield::is_prime;
use crate::oracle::{self, IntPolynomial};
use crate::spectral::{Alphabet, CirculantSpec};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CoreClass {
    /// n prime, n = 3 mod 4.
    PrimeP3Mod4,
    /// n = p(p+2) with p and p+2 prime.
    TwinPrimeProduct,
    /// n = 2^k - 1.
    MersenneForm,
    /// n = 4k^2 + 27 prime.
    HallPrime,
}

fn prime(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

fn isqrt(n: u64) -> u64 {
    num_integer::Roots::sqrt(&n)
}

/// Which constructions of a Hadamard matrix of order n+1 with a circulant core
/// of order n apply.
pub fn circulant_core_classes(n: u64) -> BTreeSet<CoreClass> {
    let mut out = BTreeSet::new();
    if prime(n) && n % 4 == 3 {
        out.insert(CoreClass::PrimeP3Mod4);
    }
    let p = isqrt(n + 1).saturating_sub(1);
    if p >= 2 && p * (p + 2) == n && prime(p) && prime(p + 2) {
        out.insert(CoreClass::TwinPrimeProduct);
    }
    if n >= 1 && (n + 1).is_power_of_two() {
        out.insert(CoreClass::MersenneForm);
    }
    if n > 27 && (n - 27) % 4 == 0 && prime(n) {
        let k2 = (n - 27) / 4;
        let k = isqrt(k2);
        if k >= 1 && k * k == k2 {
            out.insert(CoreClass::HallPrime);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureAReport {
    pub n: u64,
    pub max_abs_det: BigUint,
    pub bound: BigUint,
    pub attains_bound: bool,
    pub classes: BTreeSet<CoreClass>,
    /// Whether `attains_bound` agrees with "n <= 4 or one of the first three
    /// constructions applies".
    pub consistent: bool,
}

pub fn conjecture_a_status(n: u64, max_abs_det: &BigUint, bound: &BigUint) -> ConjectureAReport {
    let classes = circulant_core_classes(n);
    let attains_bound = max_abs_det == bound;
    let predicted = n <= 4 || classes.iter().any(|c| *c != CoreClass::HallPrime);
    ConjectureAReport {
        n,
        max_abs_det: max_abs_det.clone(),
        bound: bound.clone(),
        attains_bound,
        classes,
        consistent: attains_bound == predicted,
    }
}

/// `(j / n)` by Euler's criterion.
pub fn legendre_symbol(j: i64, n: u64) -> Result<i8> {
    if n < 3 || !prime(n) {
        return Err(Error::NotOddPrime(n));
    }
    let m = BigUint::from(n);
    let r = BigInt::from(j).mod_floor(&BigInt::from(n));
    let r = r.magnitude().modpow(&BigUint::from((n - 1) / 2), &m);
    Ok(if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    })
}

/// `k` for a prime `n = 4k + 1`.
pub fn ura_k(n: u64) -> Result<u64> {
    if n < 5 || n % 4 != 1 || !prime(n) {
        return Err(Error::NotUraOrder(n));
    }
    Ok((n - 1) / 4)
}

/// `(x + 2k)(x^2 - x - k)^(2k)`.
pub fn ura_det_closed(n: u64, x: &BigRational) -> Result<BigRational> {
    let k = BigRational::from_integer(BigInt::from(ura_k(n)?));
    let two_k = &k + &k;
    let quad = x * x - x - &k;
    let e = (ura_k(n)? * 2) as usize;
    Ok((x + two_k) * num_traits::pow(quad, e))
}

/// The closed form, expanded.
pub fn ura_polynomial(n: u64) -> Result<IntPolynomial> {
    let k = ura_k(n)? as i64;
    let linear = IntPolynomial::from_ints(&[2 * k, 1]);
    let quad = IntPolynomial::from_ints(&[-k, -1, 1]);
    Ok(&linear * &quad.pow(2 * k as u32))
}

/// `{0,1}` word with `b_0 = 0` (the varied entry) and `b_j = (1 + (j/n)) / 2`.
pub fn ura_spec(n: u64) -> Result<CirculantSpec> {
    ura_k(n)?;
    let symbols = (0..n)
        .map(|j| match j {
            0 => Ok(0),
            _ => legendre_symbol(j as i64, n).map(|c| u8::from(c == 1)),
        })
        .collect::<Result<Vec<u8>>>()?;
    Ok(CirculantSpec::new(
        Alphabet::Binary01,
        Word::from_symbols(&symbols)?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UraMax {
    pub k: u64,
    pub x_k: f64,
    pub det_at_x_k: f64,
    pub det_at_half: f64,
    pub gain: f64,
}

fn ura_det_f64(k: f64, x: f64) -> f64 {
    (x + 2.0 * k) * (x * x - x - k).powi((2.0 * k) as i32)
}

/// Interior local maximum of `det A_n(x)` on `[0, 1]`.
pub fn ura_local_max(k: u64) -> Result<UraMax> {
    if k == 0 {
        return Err(Error::NotUraOrder(1));
    }
    let kf = k as f64;
    let x = ((1.0 + 4.0 * kf * kf).sqrt() + 1.0 - 2.0 * kf) / 2.0;
    // log-derivative of (x + 2k)(x^2 - x - k)^(2k)
    let t1 = 1.0 / (x + 2.0 * kf);
    let t2 = 2.0 * kf * (2.0 * x - 1.0) / (x * x - x - kf);
    if (t1 + t2).abs() > 1e-10 * (t1.abs() + t2.abs()) {
        return Err(Error::Inconsistency(format!(
            "log-derivative {} at x_{k} does not vanish",
            t1 + t2
        )));
    }
    let det_at_x_k = ura_det_f64(kf, x);
    let det_at_half = ura_det_f64(kf, 0.5);
    Ok(UraMax {
        k,
        x_k: x,
        det_at_x_k,
        det_at_half,
        gain: det_at_x_k / det_at_half,
    })
}

/// The ordering `U > det(x_k) > det(1/2) > D > det(1) > det(0)` for one order.
/// Without `D` the middle link becomes `det(1/2) > det(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UraChain {
    pub n: u64,
    pub k: u64,
    pub bound: BigUint,
    pub x_k: f64,
    pub det_at_x_k: f64,
    pub det_at_half: BigRational,
    /// Maximum over `{0,1}` circulants of order n, when known.
    pub max_abs_det: Option<BigUint>,
    pub det_at_one: BigInt,
    pub det_at_zero: BigInt,
    /// Whether the interpolated stripe polynomial equals the closed form.
    pub closed_form_matches: bool,
    pub holds: bool,
}

pub fn ura_chain(n: u64, max_abs_det: Option<&BigUint>) -> Result<UraChain> {
    let k = ura_k(n)?;
    let closed = ura_polynomial(n)?;
    let interpolated = oracle::det_polynomial_in_entry(&ura_spec(n)?, 0)?;
    let m = ura_local_max(k)?;
    let at = |v: i64| {
        closed
            .eval(&BigRational::from_integer(BigInt::from(v)))
            .to_integer()
    };
    let half = closed.eval(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let bound = bounds::u01_bound(n as usize);
    let (det_at_one, det_at_zero) = (at(1), at(0));
    let half_f = num_traits::ToPrimitive::to_f64(&half).unwrap_or(f64::NAN);
    let bound_f = num_traits::ToPrimitive::to_f64(&bound).unwrap_or(f64::INFINITY);
    let around_max = match max_abs_det {
        Some(d) => {
            let d = BigInt::from(d.clone());
            half > BigRational::from_integer(d.clone()) && d > det_at_one
        }
        None => half > BigRational::from_integer(det_at_one.clone()),
    };
    let holds =
        bound_f > m.det_at_x_k && m.det_at_x_k > half_f && around_max && det_at_one > det_at_zero;
    Ok(UraChain {
        n,
        k,
        bound,
        x_k: m.x_k,
        det_at_x_k: m.det_at_x_k,
        det_at_half: half,
        max_abs_det: max_abs_det.cloned(),
        det_at_one,
        det_at_zero,
        closed_form_matches: closed == interpolated,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FindingKind {
    /// `|det|` grows to first order when moving off the endpoint.
    FirstOrder,
    /// Flat or decreasing at the endpoint, but some interior grid point beats
    /// the maximum.
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub x: BigRational,
    pub abs_det: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationFinding {
    pub n: usize,
    pub alphabet: Alphabet,
    /// First row at the extreme point (a rotation of a maximizing necklace).
    pub base_word: Word,
    pub position: usize,
    /// Value of the varied entry at the extreme point.
    pub endpoint: i64,
    pub det_at_extreme: BigInt,
    /// `d det / d a_0` at the endpoint.
    pub derivative: BigInt,
    /// `d |det| / d eps` for the entry moved `eps` into the interval.
    pub inward_slope: BigInt,
    pub kind: FindingKind,
    pub polynomial: IntPolynomial,
    pub witness: Option<Witness>,
    /// Rows `b_(mj mod n)`, `gcd(m, n) = 1`, sharing this stripe polynomial.
    pub class_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationReport {
    pub n: usize,
    pub alphabet: Alphabet,
    pub max_abs_det: BigUint,
    pub rotations_checked: usize,
    /// Rotations up to the multiplier action, each scanned once.
    pub classes_checked: usize,
    pub findings: Vec<PerturbationFinding>,
    /// Always false: only the position-0 stripe on a finite grid is examined.
    pub exhaustive: bool,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn interval(alphabet: Alphabet) -> (i64, i64) {
    match alphabet {
        Alphabet::Binary01 => (0, 1),
        Alphabet::BinaryPM1 => (-1, 1),
    }
}

/// Numerators `i` of the interior points `i/den` of the alphabet's interval.
fn grid(alphabet: Alphabet, den: i64) -> std::ops::Range<i64> {
    let (lo, hi) = interval(alphabet);
    (lo * den + 1)..(hi * den)
}

/// `|den^deg f(i/den)|`, in integers.
fn scaled_abs(coeffs: &[BigInt], i: i64, den: i64) -> BigInt {
    let (i, den) = (BigInt::from(i), BigInt::from(den));
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for c in coeffs.iter().rev() {
        acc = acc * &i + c * &den_pow;
        den_pow *= &den;
    }
    acc.abs()
}

/// Best grid point, if it strictly beats `d`.
fn best_on_grid(coeffs: &[BigInt], alphabet: Alphabet, den: i64, d: &BigUint) -> Option<i64> {
    let deg = coeffs.len().saturating_sub(1);
    let target = BigInt::from(d.clone()) * num_traits::pow(BigInt::from(den), deg);
    let (i, v) = grid(alphabet, den)
        .map(|i| (i, scaled_abs(coeffs, i, den)))
        .fold(None::<(i64, BigInt)>, |best, (i, v)| match best {
            Some((bi, bv)) if bv >= v => Some((bi, bv)),
            _ => Some((i, v)),
        })?;
    (v > target).then_some(i)
}

fn witness_at(f: &IntPolynomial, x: BigRational) -> Witness {
    let abs_det = f.eval(&x).abs();
    Witness { x, abs_det }
}

/// Least row among `j -> b_(mj mod n)` over units `m`. These permute rows and
/// columns together and fix entry 0, so the stripe polynomial is unchanged.
pub fn multiplier_canonical(w: &Word) -> Word {
    let n = w.len();
    (1..=n)
        .filter(|&m| num_integer::gcd(m, n) == 1)
        .map(|m| {
            let symbols: Vec<u8> = (0..n).map(|j| w.symbol(m * j % n)).collect();
            Word::from_symbols(&symbols).expect("same length")
        })
        .min()
        .unwrap_or(*w)
}

/// Scans every rotation of every maximizer, varying entry 0 of the first row.
pub fn perturbation_scan(alphabet: Alphabet, maximizers: &[Word]) -> Result<PerturbationReport> {
    let first = maximizers
        .first()
        .ok_or_else(|| Error::Inconsistency("no maximizers supplied".into()))?;
    let n = first.len();
    let mut rows = BTreeSet::new();
    for w in maximizers {
        if w.len() != n {
            return Err(Error::BadLength(w.len()));
        }
        rows.extend((0..n).map(|r| w.rotate_left(r)));
    }
    let max_abs_det = oracle::spec_det(&CirculantSpec::new(alphabet, *first))
        .magnitude()
        .clone();
    let d = BigRational::from_integer(BigInt::from(max_abs_det.clone()));
    let mut classes: BTreeMap<Word, usize> = BTreeMap::new();
    for row in &rows {
        *classes.entry(multiplier_canonical(row)).or_default() += 1;
    }
    let mut findings = Vec::new();
    for (&row, &class_size) in &classes {
        let spec = CirculantSpec::new(alphabet, row);
        let f = oracle::det_polynomial_in_entry(&spec, 0)?;
        let endpoint = spec.entry(0);
        let e = rat(endpoint, 1);
        let det = f.eval(&e).to_integer();
        if det.magnitude() != &max_abs_det {
            return Err(Error::Inconsistency(format!(
                "{row} has |det| {} but the maximum is {max_abs_det}",
                det.magnitude()
            )));
        }
        let derivative = f.derivative().eval(&e).to_integer();
        let (lo, _) = interval(alphabet);
        let dir = if endpoint == lo { 1 } else { -1 };
        let inward_slope = BigInt::from(det.signum() * dir) * &derivative;
        let first_order = inward_slope.is_positive();
        let coeffs: Vec<BigInt> = f.coeffs().iter().map(|c| c.to_integer()).collect();
        let coarse = best_on_grid(&coeffs, alphabet, 64, &max_abs_det);
        let kind = match (first_order, coarse) {
            (true, _) => FindingKind::FirstOrder,
            (false, Some(_)) => FindingKind::Interior,
            (false, None) => continue,
        };
        let witness = if let Some(i) = best_on_grid(&coeffs, alphabet, 1000, &max_abs_det) {
            Some(witness_at(&f, rat(i, 1000)))
        } else if let Some(i) = coarse {
            Some(witness_at(&f, rat(i, 64)))
        } else {
            // tiny first-order bump: halve towards the endpoint
            (1..=256).find_map(|i| {
                let eps = BigRational::new(BigInt::one(), BigInt::one() << i);
                let w = witness_at(&f, &e + eps * BigInt::from(dir));
                (w.abs_det > d).then_some(w)
            })
        };
        findings.push(PerturbationFinding {
            n,
            alphabet,
            base_word: row,
            position: 0,
            endpoint,
            det_at_extreme: det,
            derivative,
            inward_slope,
            kind,
            polynomial: f,
            witness,
            class_size,
        });
    }
    Ok(PerturbationReport {
        n,
        alphabet,
        max_abs_det,
        rotations_checked: rows.len(),
        classes_checked: classes.len(),
        findings,
        exhaustive: false,
    })
}

/// Search with all maximizers retained, then scan them.
pub fn scan_order(
    n: usize,
    alphabet: Alphabet,
    config: &SearchConfig,
) -> Result<PerturbationReport> {
    let config = SearchConfig {
        keep_all_maximizers: true,
        ..config.clone()
    };
    let result = engine::search(n, alphabet, &config)?;
    perturbation_scan(alphabet, &result.maximizers)
}
