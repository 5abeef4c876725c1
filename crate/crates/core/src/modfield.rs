//! Exact circulant determinants over a prime field.
//!
//! With `p ≡ 1 (mod n)` and `ω` of multiplicative order `n` mod `p`, the
//! eigenvalues of `circ(a_0, ..., a_(n-1))` reduce to
//! `λ_j = sum_k a_k ω^(jk) mod p` and the determinant to `prod_j λ_j mod p`.
//! Whenever `p >= 2U + 1` for a bound `U >= |det|`, the symmetric lift of that
//! residue is the determinant itself.
//!
//! Two arithmetic backends implement [`PrimeField`]: [`MontField`] keeps
//! residues in Montgomery form in a `u64` when `p < 2^63`, and [`BigField`]
//! handles arbitrary moduli. Both give identical results.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{Alphabet, CirculantSpec};
use crate::words::Word;

pub trait PrimeField: Clone + Debug + Send + Sync + Sized {
    type Elem: Clone + Debug + PartialEq + Eq + Send + Sync;
    /// Magnitude of a symmetrically lifted residue.
    type Abs: Clone + Debug + Ord + Send + Sync;

    fn with_modulus(p: &BigUint) -> Option<Self>;
    fn modulus(&self) -> &BigUint;
    fn zero(&self) -> Self::Elem;
    fn from_biguint(&self, v: &BigUint) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn to_biguint(&self, a: &Self::Elem) -> BigUint;
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem);
    fn sub_assign(&self, a: &mut Self::Elem, b: &Self::Elem);
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn centered_abs(&self, a: &Self::Elem) -> Self::Abs;
    fn abs_from_biguint(&self, v: &BigUint) -> Self::Abs;
    fn abs_to_biguint(&self, a: &Self::Abs) -> BigUint;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    fn pow(&self, base: &Self::Elem, exp: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, base);
            }
        }
        acc
    }
}

/// Montgomery arithmetic for odd `p < 2^63`, with `R = 2^64`.
#[derive(Clone, Debug)]
pub struct MontField {
    p: u64,
    /// `-p^-1 mod 2^64`
    p_neg_inv: u64,
    /// `R^2 mod p`
    r2: u64,
    modulus: BigUint,
}

impl MontField {
    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.p_neg_inv);
        let u = ((t + u128::from(m) * u128::from(self.p)) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn to_mont(&self, x: u64) -> u64 {
        self.redc(u128::from(x) * u128::from(self.r2))
    }

    #[inline(always)]
    fn from_mont(&self, a: u64) -> u64 {
        self.redc(u128::from(a))
    }
}

impl PrimeField for MontField {
    type Elem = u64;
    type Abs = u64;

    fn with_modulus(p: &BigUint) -> Option<Self> {
        let p = p.to_u64()?;
        if p < 3 || p % 2 == 0 || p >= 1 << 63 {
            return None;
        }
        // Newton iteration for p^-1 mod 2^64; each step doubles the correct bits.
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = (1u128 << 64) % u128::from(p);
        let r2 = ((r * r) % u128::from(p)) as u64;
        Some(MontField {
            p,
            p_neg_inv: inv.wrapping_neg(),
            r2,
            modulus: BigUint::from(p),
        })
    }

    fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    fn zero(&self) -> u64 {
        0
    }

    fn from_biguint(&self, v: &BigUint) -> u64 {
        let r = (v % self.p).to_u64().unwrap_or(0);
        self.to_mont(r)
    }

    fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64) as u64;
        self.to_mont(r)
    }

    fn to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(self.from_mont(*a))
    }

    #[inline(always)]
    fn add_assign(&self, a: &mut u64, b: &u64) {
        let s = *a + *b;
        *a = if s >= self.p { s - self.p } else { s };
    }

    #[inline(always)]
    fn sub_assign(&self, a: &mut u64, b: &u64) {
        *a = if *a >= *b { *a - *b } else { *a + self.p - *b };
    }

    #[inline(always)]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.redc(u128::from(*a) * u128::from(*b))
    }

    #[inline(always)]
    fn centered_abs(&self, a: &u64) -> u64 {
        let x = self.from_mont(*a);
        x.min(self.p - x)
    }

    fn abs_from_biguint(&self, v: &BigUint) -> u64 {
        v.to_u64().unwrap_or(u64::MAX)
    }

    fn abs_to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(*a)
    }
}

/// Arbitrary-precision residues.
#[derive(Clone, Debug)]
pub struct BigField {
    p: BigUint,
    half: BigUint,
}

impl PrimeField for BigField {
    type Elem = BigUint;
    type Abs = BigUint;

    fn with_modulus(p: &BigUint) -> Option<Self> {
        if *p < BigUint::from(2u32) {
            return None;
        }
        Some(BigField {
            p: p.clone(),
            half: (p - 1u32) >> 1,
        })
    }

    fn modulus(&self) -> &BigUint {
        &self.p
    }

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn from_biguint(&self, v: &BigUint) -> BigUint {
        v % &self.p
    }

    fn from_i64(&self, v: i64) -> BigUint {
        let r = BigInt::from(v).mod_floor(&BigInt::from(self.p.clone()));
        r.to_biguint().unwrap_or_default()
    }

    fn to_biguint(&self, a: &BigUint) -> BigUint {
        a.clone()
    }

    fn add_assign(&self, a: &mut BigUint, b: &BigUint) {
        *a += b;
        if *a >= self.p {
            *a -= &self.p;
        }
    }

    fn sub_assign(&self, a: &mut BigUint, b: &BigUint) {
        if *a >= *b {
            *a -= b;
        } else {
            *a += &self.p;
            *a -= b;
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }

    fn centered_abs(&self, a: &BigUint) -> BigUint {
        if *a <= self.half {
            a.clone()
        } else {
            &self.p - a
        }
    }

    fn abs_from_biguint(&self, v: &BigUint) -> BigUint {
        v.clone()
    }

    fn abs_to_biguint(&self, a: &BigUint) -> BigUint {
        a.clone()
    }

    fn pow(&self, base: &BigUint, exp: &BigUint) -> BigUint {
        base.modpow(exp, &self.p)
    }
}

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_RANDOM_ROUNDS: usize = 64;
const MR_SEED: u64 = 0x6369_7263_6d61_7800;

/// Miller–Rabin with the fixed base policy: the first twelve primes as bases
/// below 2^64 (deterministic there), otherwise 64 bases from a fixed-seed
/// generator.
pub fn is_prime(m: &BigUint) -> bool {
    if *m < BigUint::from(2u32) {
        return false;
    }
    for &q in &SMALL_PRIMES {
        if *m == BigUint::from(q) {
            return true;
        }
        if (m % q).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let m_minus_1 = m - 1u32;
    let s = m_minus_1.trailing_zeros().unwrap_or(0);
    let d = &m_minus_1 >> s;
    let witness = |a: &BigUint| -> bool {
        // true if a proves m composite
        let mut x = a.modpow(&d, m);
        if x == one || x == m_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % m;
            if x == m_minus_1 {
                return false;
            }
        }
        true
    };
    if m.bits() <= 64 {
        SMALL_PRIMES.iter().all(|&q| !witness(&BigUint::from(q)))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(MR_SEED);
        let two = BigUint::from(2u32);
        (0..MR_RANDOM_ROUNDS).all(|_| {
            let a = rng.gen_biguint_range(&two, &m_minus_1);
            !witness(&a)
        })
    }
}

/// Smallest prime `p ≡ 1 (mod n)` with `p >= 2U + 1`.
pub fn select_prime(n: usize, bound: &BigUint) -> BigUint {
    assert!(n >= 1, "order must be positive");
    let step = BigUint::from(n);
    let start: BigUint = bound * 2u32 + 1u32;
    // round up to the residue class 1 mod n
    let offset = (&step + 1u32 - (&start % &step)) % &step;
    let mut c = start + offset;
    while !is_prime(&c) {
        c += &step;
    }
    c
}

/// Distinct prime factors of a small integer.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            out.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// True iff `omega` has multiplicative order exactly `n` mod `p`.
pub fn has_order(omega: &BigUint, n: usize, p: &BigUint) -> bool {
    let one = BigUint::one();
    if omega.modpow(&BigUint::from(n), p) != one {
        return false;
    }
    prime_factors(n as u64)
        .into_iter()
        .all(|q| omega.modpow(&BigUint::from(n as u64 / q), p) != one)
}

/// `ω = a^((p-1)/n) mod p` for random `a`, retried until `ω` has order `n`.
pub fn find_root_of_unity<R: Rng + ?Sized>(p: &BigUint, n: usize, rng: &mut R) -> Result<BigUint> {
    let n_big = BigUint::from(n);
    if n == 0 || !((p - 1u32) % &n_big).is_zero() {
        return Err(Error::NotCongruent {
            p: p.to_string(),
            n,
        });
    }
    let exp = (p - 1u32) / &n_big;
    let one = BigUint::one();
    loop {
        let a = rng.gen_biguint_range(&one, p);
        let omega = a.modpow(&exp, p);
        if has_order(&omega, n, p) {
            return Ok(omega);
        }
    }
}

/// Symmetric lift of a residue; errors when the result exceeds `bound`.
pub fn lift_residue(r: &BigUint, p: &BigUint, bound: &BigUint) -> Result<BigInt> {
    let half = (p - 1u32) >> 1;
    let d = if *r <= half {
        BigInt::from_biguint(Sign::Plus, r.clone())
    } else {
        BigInt::from_biguint(Sign::Plus, r.clone()) - BigInt::from_biguint(Sign::Plus, p.clone())
    };
    if d.magnitude() > bound {
        return Err(Error::LiftOutOfRange {
            value: d.to_string(),
            bound: bound.to_string(),
        });
    }
    Ok(d)
}

/// Prime, root of unity and the table of powers `ω^(jk)` for one order.
#[derive(Clone, Debug)]
pub struct FieldContext<F: PrimeField> {
    n: usize,
    field: F,
    omega: BigUint,
    bound: BigUint,
    bound_abs: F::Abs,
    /// row k holds `ω^(jk)` for j = 0..n
    table: Vec<F::Elem>,
}

impl<F: PrimeField> FieldContext<F> {
    /// Context for order `n` with modulus `p`, root `omega` and lift bound
    /// `bound`. Returns None when the backend cannot represent `p`.
    pub fn with_root(
        n: usize,
        p: &BigUint,
        omega: &BigUint,
        bound: &BigUint,
    ) -> Result<Option<Self>> {
        if !((p - 1u32) % n).is_zero() {
            return Err(Error::NotCongruent {
                p: p.to_string(),
                n,
            });
        }
        if !has_order(omega, n, p) {
            return Err(Error::Inconsistency(format!(
                "{omega} does not have order {n} mod {p}"
            )));
        }
        let Some(field) = F::with_modulus(p) else {
            return Ok(None);
        };
        let w = field.from_biguint(omega);
        let mut powers = Vec::with_capacity(n);
        let mut acc = field.one();
        for _ in 0..n {
            powers.push(acc.clone());
            acc = field.mul(&acc, &w);
        }
        let mut table = Vec::with_capacity(n * n);
        for k in 0..n {
            for j in 0..n {
                table.push(powers[(j * k) % n].clone());
            }
        }
        let bound_abs = field.abs_from_biguint(bound);
        Ok(Some(FieldContext {
            n,
            field,
            omega: omega.clone(),
            bound: bound.clone(),
            bound_abs,
            table,
        }))
    }

    /// Context with a randomly found root of unity.
    pub fn new<R: Rng + ?Sized>(
        n: usize,
        p: &BigUint,
        bound: &BigUint,
        rng: &mut R,
    ) -> Result<Option<Self>> {
        let omega = find_root_of_unity(p, n, rng)?;
        Self::with_root(n, p, &omega, bound)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn modulus(&self) -> &BigUint {
        self.field.modulus()
    }

    pub fn omega(&self) -> &BigUint {
        &self.omega
    }

    pub fn bound(&self) -> &BigUint {
        &self.bound
    }

    pub fn bound_abs(&self) -> &F::Abs {
        &self.bound_abs
    }

    /// `ω^(jk mod n)`.
    pub fn power(&self, j: usize, k: usize) -> &F::Elem {
        &self.table[k * self.n + j]
    }

    #[inline]
    fn column(&self, k: usize) -> &[F::Elem] {
        &self.table[k * self.n..(k + 1) * self.n]
    }
}

/// Either backend, chosen by the size of the modulus.
#[derive(Clone, Debug)]
pub enum AnyContext {
    Word(FieldContext<MontField>),
    Big(FieldContext<BigField>),
}

impl AnyContext {
    pub fn with_root(n: usize, p: &BigUint, omega: &BigUint, bound: &BigUint) -> Result<Self> {
        if let Some(ctx) = FieldContext::<MontField>::with_root(n, p, omega, bound)? {
            return Ok(AnyContext::Word(ctx));
        }
        FieldContext::<BigField>::with_root(n, p, omega, bound)?
            .map(AnyContext::Big)
            .ok_or_else(|| Error::Inconsistency(format!("unusable modulus {p}")))
    }

    pub fn new<R: Rng + ?Sized>(
        n: usize,
        p: &BigUint,
        bound: &BigUint,
        rng: &mut R,
    ) -> Result<Self> {
        let omega = find_root_of_unity(p, n, rng)?;
        Self::with_root(n, p, &omega, bound)
    }

    /// Smallest admissible prime for `bound`, with a random root of unity.
    pub fn for_bound<R: Rng + ?Sized>(n: usize, bound: &BigUint, rng: &mut R) -> Result<Self> {
        let p = select_prime(n, bound);
        Self::new(n, &p, bound, rng)
    }

    pub fn modulus(&self) -> &BigUint {
        match self {
            AnyContext::Word(c) => c.modulus(),
            AnyContext::Big(c) => c.modulus(),
        }
    }

    pub fn omega(&self) -> &BigUint {
        match self {
            AnyContext::Word(c) => c.omega(),
            AnyContext::Big(c) => c.omega(),
        }
    }

    pub fn bound(&self) -> &BigUint {
        match self {
            AnyContext::Word(c) => c.bound(),
            AnyContext::Big(c) => c.bound(),
        }
    }

    /// Exact determinant of one circulant, computed from scratch.
    pub fn determinant(&self, spec: &CirculantSpec) -> Result<BigInt> {
        match self {
            AnyContext::Word(c) => determinant(spec, c),
            AnyContext::Big(c) => determinant(spec, c),
        }
    }

    /// `det / 2^(n-1)` for a `±1` circulant, lifted against this context's
    /// bound on the scaled value.
    pub fn scaled_pm1_determinant(&self, word: &Word) -> Result<BigInt> {
        match self {
            AnyContext::Word(c) => scaled_pm1_determinant(word, c),
            AnyContext::Big(c) => scaled_pm1_determinant(word, c),
        }
    }
}

/// One symbol change applied by [`EigenState::update`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolChange {
    pub position: usize,
    pub old: u8,
    pub new: u8,
}

/// Eigenvalue residues of the circulant of the current word.
#[derive(Clone, Debug)]
pub struct EigenState<'a, F: PrimeField> {
    ctx: &'a FieldContext<F>,
    alphabet: Alphabet,
    word: Word,
    lambda: Vec<F::Elem>,
}

impl<'a, F: PrimeField> EigenState<'a, F> {
    /// `λ_j = sum_k a_k ω^(jk)` from scratch, O(n^2).
    pub fn init(spec: &CirculantSpec, ctx: &'a FieldContext<F>) -> Result<Self> {
        let n = ctx.n;
        if spec.order() != n {
            return Err(Error::BadLength(spec.order()));
        }
        let field = &ctx.field;
        let mut lambda = vec![field.zero(); n];
        for k in 0..n {
            let a = field.from_i64(spec.entry(k));
            for (l, w) in lambda.iter_mut().zip(ctx.column(k)) {
                let term = field.mul(&a, w);
                field.add_assign(l, &term);
            }
        }
        Ok(EigenState {
            ctx,
            alphabet: spec.alphabet,
            word: spec.word,
            lambda,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn lambda(&self) -> &[F::Elem] {
        &self.lambda
    }

    pub fn context(&self) -> &'a FieldContext<F> {
        self.ctx
    }

    /// Applies symbol changes, adding `δ ω^(jk)` to every `λ_j` for a change
    /// at position `k` with mapped difference `δ`.
    pub fn update(&mut self, changes: &[SymbolChange]) -> Result<()> {
        for c in changes {
            if c.position >= self.ctx.n {
                return Err(Error::BadPosition {
                    position: c.position,
                    n: self.ctx.n,
                });
            }
            if self.word.symbol(c.position) != c.old {
                return Err(Error::SymbolMismatch {
                    position: c.position,
                });
            }
        }
        for c in changes {
            if c.old != c.new {
                self.flip(c.position, c.new);
            }
        }
        Ok(())
    }

    #[inline]
    fn flip(&mut self, k: usize, new: u8) {
        let field = &self.ctx.field;
        let column = self.ctx.column(k);
        let reps = match self.alphabet {
            Alphabet::Binary01 => 1,
            Alphabet::BinaryPM1 => 2,
        };
        for _ in 0..reps {
            if new == 1 {
                for (l, w) in self.lambda.iter_mut().zip(column) {
                    field.add_assign(l, w);
                }
            } else {
                for (l, w) in self.lambda.iter_mut().zip(column) {
                    field.sub_assign(l, w);
                }
            }
        }
        self.word = self.word.with_symbol(k, new);
    }

    /// Moves to `next`, which agrees with the current word before
    /// `changed_from`. No validation; this is the enumeration hot path.
    #[inline]
    pub fn advance(&mut self, next: &Word, changed_from: usize) {
        let diff = self.word.bits() ^ next.bits();
        let n = self.ctx.n;
        for k in changed_from..n {
            if (diff >> (n - 1 - k)) & 1 == 1 {
                self.flip(k, next.symbol(k));
            }
        }
        debug_assert_eq!(self.word, *next);
    }

    /// `prod_j λ_j mod p`, recomputed in full.
    #[inline]
    pub fn det_residue(&self) -> F::Elem {
        let field = &self.ctx.field;
        let mut iter = self.lambda.iter();
        let mut acc = iter.next().cloned().unwrap_or_else(|| field.one());
        for l in iter {
            acc = field.mul(&acc, l);
        }
        acc
    }

    /// `λ_0 prod_(j>0) (λ_j / 2)` for `±1` words, i.e. `det / 2^(n-1) mod p`.
    ///
    /// For `j > 0` every `λ_j` of a `±1` circulant is twice the corresponding
    /// eigenvalue of the `{0,1}` circulant of the same word.
    pub fn scaled_det_residue(&self, inv_two_pow: &F::Elem) -> F::Elem {
        self.ctx.field.mul(&self.det_residue(), inv_two_pow)
    }

    /// True iff the residues match a fresh [`EigenState::init`].
    pub fn matches_fresh(&self) -> bool {
        let spec = CirculantSpec::new(self.alphabet, self.word);
        EigenState::init(&spec, self.ctx)
            .map(|fresh| fresh.lambda == self.lambda)
            .unwrap_or(false)
    }
}

/// `2^-(n-1) mod p` as a field element.
pub fn inverse_two_power<F: PrimeField>(field: &F, n: usize) -> F::Elem {
    let p = field.modulus();
    let inv_two: BigUint = (p + 1u32) >> 1;
    let v = inv_two.modpow(&BigUint::from(n - 1), p);
    field.from_biguint(&v)
}

/// Exact determinant of `spec` via one eigen evaluation.
pub fn determinant<F: PrimeField>(spec: &CirculantSpec, ctx: &FieldContext<F>) -> Result<BigInt> {
    let state = EigenState::init(spec, ctx)?;
    let r = ctx.field.to_biguint(&state.det_residue());
    lift_residue(&r, ctx.modulus(), ctx.bound())
}

/// Exact `det / 2^(n-1)` of a `±1` circulant; `ctx.bound()` bounds the
/// scaled value.
pub fn scaled_pm1_determinant<F: PrimeField>(word: &Word, ctx: &FieldContext<F>) -> Result<BigInt> {
    let spec = CirculantSpec::new(Alphabet::BinaryPM1, *word);
    let state = EigenState::init(&spec, ctx)?;
    let inv = inverse_two_power(&ctx.field, ctx.n);
    let r = ctx.field.to_biguint(&state.scaled_det_residue(&inv));
    lift_residue(&r, ctx.modulus(), ctx.bound())
}

/// Exact determinant of a single binary circulant, with a fixed-seed root of
/// unity and the alphabet's determinant bound.
pub fn exact_determinant(spec: &CirculantSpec) -> Result<BigInt> {
    let n = spec.order();
    let bound = match spec.alphabet {
        Alphabet::Binary01 => crate::bounds::u01_bound(n),
        Alphabet::BinaryPM1 => crate::bounds::upm1_bound(n),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    AnyContext::for_bound(n, &bound, &mut rng)?.determinant(spec)
}
