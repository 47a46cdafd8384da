//! Scalar types for exact linear algebra: prime fields, the rationals, and
//! integral domains that support fraction-free elimination.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Inv, One, Zero};
use rand::Rng;

/// A field element. Construction lives on [`ScalarField`] so that elements of
/// fields with a runtime modulus need no global state.
pub trait Field:
    Clone + Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
}

/// A field as a value: knows how to embed integers and how to sample.
pub trait ScalarField {
    type Elem: Field;

    fn zero(&self) -> Self::Elem;
    fn embed_bigint(&self, v: &BigInt) -> Self::Elem;

    fn embed_i64(&self, v: i64) -> Self::Elem {
        self.embed_bigint(&BigInt::from(v))
    }
}

/// An integral domain with exact division, as needed by Bareiss elimination.
pub trait IntegralDomain: Clone + Debug + PartialEq + Zero + One + Sub<Output = Self> + Mul<Output = Self> {
    /// `self / rhs`, where the caller guarantees `rhs` divides `self`.
    fn exact_div(&self, rhs: &Self) -> Self;

    /// Heuristic size used to prefer small pivots.
    fn pivot_cost(&self) -> usize {
        0
    }
}

impl Field for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.clone().inv())
    }
}

/// The field of rationals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl ScalarField for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn embed_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
}

impl IntegralDomain for BigInt {
    fn exact_div(&self, rhs: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % rhs)), "inexact division {self} / {rhs}");
        self / rhs
    }

    fn pivot_cost(&self) -> usize {
        self.bits() as usize
    }
}

/// `2^61 - 1`, the default evaluation prime.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;
/// `2^62 - 57`, used as the independent second prime.
pub const SECONDARY_PRIME: u64 = (1 << 62) - 57;
/// Smallest modulus accepted for randomized rank evaluation.
pub const MIN_PRIME: u64 = 1 << 30;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of `Z/pZ`. Operands must share a modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pow(self, exp: u64) -> Fp {
        Fp { value: pow_mod(self.value, exp, self.modulus), modulus: self.modulus }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u128 + rhs.value as u128;
        Fp { value: (s % self.modulus as u128) as u64, modulus: self.modulus }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        let value = if self.value == 0 { 0 } else { self.modulus - self.value };
        Fp { value, modulus: self.modulus }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp { value: mul_mod(self.value, rhs.value, self.modulus), modulus: self.modulus }
    }
}

impl Field for Fp {
    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn inverse(&self) -> Option<Fp> {
        (self.value != 0).then(|| self.pow(self.modulus - 2))
    }
}

/// `Z/pZ` for a word-sized prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    /// Returns `None` unless `p` is prime.
    pub fn new(p: u64) -> Option<PrimeField> {
        is_prime_u64(p).then_some(PrimeField { modulus: p })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp { value: v % self.modulus, modulus: self.modulus }
    }

    /// Uniform element of `{1, ..., p - 1}`.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        self.elem(rng.gen_range(1..self.modulus))
    }
}

impl ScalarField for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        self.elem(0)
    }

    fn embed_bigint(&self, v: &BigInt) -> Fp {
        let m = BigInt::from(self.modulus);
        let r = ((v % &m) + &m) % &m;
        self.elem(r.try_into().expect("residue fits in u64"))
    }

    fn embed_i64(&self, v: i64) -> Fp {
        let m = self.modulus as i128;
        self.elem(((v as i128 % m + m) % m) as u64)
    }
}
