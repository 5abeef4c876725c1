//! Exact Hadamard / Barba–Ehlich–Wojtas determinant bounds.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    /// Bound for `±1` matrices of order n, before flooring.
    Hbe,
    /// `floor(H_BE(n+1) / 2^n)`, for `{0,1}` matrices of order n.
    U01,
    /// `2^(n-1) floor(H_BE(n) / 2^(n-1))`, for `±1` circulants of order n.
    Upm1,
}

impl BoundKind {
    pub fn evaluate(self, n: usize) -> BigUint {
        match self {
            BoundKind::Hbe => hbe_floor_scaled(n, 0),
            BoundKind::U01 => u01_bound(n),
            BoundKind::Upm1 => upm1_bound(n),
        }
    }
}

/// `floor(sqrt(x))`.
pub fn integer_sqrt(x: &BigUint) -> BigUint {
    let r = x.sqrt();
    debug_assert!(&r * &r <= *x);
    debug_assert!((&r + 1u32) * (&r + 1u32) > *x);
    r
}

fn pow(base: usize, exp: usize) -> BigUint {
    // 0^0 = 1, which makes H_BE(2) = 2.
    num_traits::pow(BigUint::from(base), exp)
}

/// `floor(H_BE(n) / 2^shift)`, computed without rounding error.
pub fn hbe_floor_scaled(n: usize, shift: usize) -> BigUint {
    assert!(n >= 1, "bounds are defined for n >= 1");
    let whole = match n % 4 {
        0 => pow(n, n / 2),
        2 => BigUint::from(2 * (n - 1)) * pow(n - 2, (n - 2) / 2),
        _ => integer_sqrt(&(BigUint::from(2 * n - 1) * pow(n - 1, n - 1))),
    };
    whole >> shift
}

pub fn u01_bound(n: usize) -> BigUint {
    hbe_floor_scaled(n + 1, n)
}

pub fn upm1_bound(n: usize) -> BigUint {
    hbe_floor_scaled(n, n - 1) << (n - 1)
}

/// `value / bound` rounded half away from zero to four places, as `d.dddd`.
pub fn ratio_4dp(value: &BigUint, bound: &BigUint) -> String {
    assert!(!bound.is_zero(), "ratio against a zero bound");
    let scaled: BigUint = (value * 20_000u32 + bound) / (bound * 2u32);
    let int = &scaled / 10_000u32;
    let frac = &scaled % 10_000u32;
    format!("{int}.{frac:0>4}")
}

/// `(2n-1)(n-1)^(n-1)`, the square of H_BE(n) for odd n.
pub fn hbe_odd_square(n: usize) -> BigUint {
    BigUint::from(2 * n - 1) * pow(n - 1, n - 1)
}

/// `n^n`, the square of the plain Hadamard bound `n^(n/2)`.
pub fn hadamard_square(n: usize) -> BigUint {
    if n == 0 {
        BigUint::one()
    } else {
        pow(n, n)
    }
}
