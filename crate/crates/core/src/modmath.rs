//! Integer and modular arithmetic primitives: primality, base-`p` digits,
//! modular powers and inverses, and binomial coefficients.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.0 as i128) as u64
    }

    pub fn reduce_big(self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.0);
        let r = ((x % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }

    pub fn reduce_biguint(self, x: &BigUint) -> u64 {
        (x % self.0).to_u64().expect("residue fits in u64")
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.0 as u128 - b as u128) % self.0 as u128) as u64
    }

    /// All primes `<= bound`, ascending.
    pub fn up_to(bound: u64) -> Vec<Prime> {
        (2..=bound).filter(|&n| is_prime(n)).map(Prime).collect()
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Prime::new(value)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn mul_mod_raw(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_raw(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_raw(acc, base, m);
        }
        base = mul_mod_raw(base, base, m);
        exp >>= 1;
    }
    acc
}

// The first twelve primes form a deterministic witness set for all n < 3.3e24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin test, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n == w {
            return true;
        }
        if n % w == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod_raw(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_raw(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Little-endian base-`p` expansion; `digits[0]` is the units digit.
///
/// Zero is represented canonically as `[0]`; otherwise the last digit is
/// nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitExpansion {
    pub base: Prime,
    pub digits: Vec<u64>,
}

impl DigitExpansion {
    pub fn value(&self) -> u128 {
        self.digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * self.base.get() as u128 + d as u128)
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit `i`, zero past the end.
    pub fn digit(&self, i: usize) -> u64 {
        self.digits.get(i).copied().unwrap_or(0)
    }
}

pub fn digits_base_p(n: u64, p: Prime) -> DigitExpansion {
    let base = p.get();
    let mut digits = Vec::new();
    let mut rest = n;
    loop {
        digits.push(rest % base);
        rest /= base;
        if rest == 0 {
            break;
        }
    }
    DigitExpansion { base: p, digits }
}

/// `base^exp mod p` by square-and-multiply; `0^0 = 1`.
pub fn pow_mod(base: i64, exp: u64, p: Prime) -> u64 {
    pow_mod_raw(p.reduce(base), exp, p.get())
}

pub fn inverse_mod(a: i64, p: Prime) -> Result<u64> {
    let r = p.reduce(a);
    if r == 0 {
        return Err(Error::NonInvertible { a, p: p.get() });
    }
    Ok(pow_mod_raw(r, p.get() - 2, p.get()))
}

/// Exact `C(n, k)`, zero when `k > n`.
pub fn binomial_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k) mod p` for single digits `n, k < p`.
fn binomial_digit(n: u64, k: u64, p: Prime) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = p.mul(num, n - i);
        den = p.mul(den, i + 1);
    }
    p.mul(num, pow_mod_raw(den, p.get() - 2, p.get()))
}

/// `C(n, m) mod p` as the product of digitwise binomials (Lucas' theorem).
pub fn binomial_mod_lucas(n: u64, m: u64, p: Prime) -> u64 {
    let base = p.get();
    let (mut n, mut m) = (n, m);
    let mut acc = 1 % base;
    while n > 0 || m > 0 {
        let c = binomial_digit(n % base, m % base, p);
        if c == 0 {
            return 0;
        }
        acc = p.mul(acc, c);
        n /= base;
        m /= base;
    }
    acc
}
