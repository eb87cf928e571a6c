//! Apéry numbers and the coefficients `ω(n)` of `1/J0(2√z) = Σ ω(n)·zⁿ/(n!)²`.
//!
//! `ω` is computed from the convolution the generating function forces,
//! `Σ_{k=0}^{n} (−1)^k·C(n,k)²·ω(n−k) = [n = 0]`; no Bessel evaluation.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::modmath::{binomial_exact, binomial_mod_lucas, Prime};

/// `A(n) = Σ_{k=0}^{n} C(n,k)²·C(n+k,k)²`
pub fn apery(n: u64) -> BigUint {
    (0..=n)
        .map(|k| {
            let c = binomial_exact(n, k) * binomial_exact(n + k, k);
            &c * &c
        })
        .sum()
}

/// `A(n) mod p`, summed termwise with Lucas-theorem binomials.
pub fn apery_mod(n: u64, p: Prime) -> u64 {
    (0..=n).fold(0, |acc, k| {
        let c = p.mul(binomial_mod_lucas(n, k, p), binomial_mod_lucas(n + k, k, p));
        p.add(acc, p.mul(c, c))
    })
}

pub fn apery_prefix_mod(len: usize, p: Prime) -> Vec<u64> {
    (0..len as u64).map(|n| apery_mod(n, p)).collect()
}

/// `ω(0), …, ω(len−1)` exactly.
pub fn omega_table(len: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for n in 0..len {
        if n > 0 {
            let mut next = vec![BigInt::one(); n + 1];
            for k in 1..n {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
        let value = if n == 0 {
            BigInt::one()
        } else {
            (1..=n).fold(BigInt::zero(), |acc, k| {
                let term = &row[k] * &row[k] * &out[n - k];
                if k % 2 == 1 {
                    acc + term
                } else {
                    acc - term
                }
            })
        };
        out.push(value);
    }
    out
}

pub fn omega(n: u64) -> BigInt {
    omega_table(n as usize + 1).pop().expect("non-empty table")
}

/// `ω(0), …, ω(len−1)` modulo `p`.
pub fn omega_table_mod(len: usize, p: Prime) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(len);
    for n in 0..len {
        let value = if n == 0 {
            1 % p.get()
        } else {
            (1..=n).fold(0, |acc, k| {
                let c = binomial_mod_lucas(n as u64, k as u64, p);
                let term = p.mul(p.mul(c, c), out[n - k]);
                if k % 2 == 1 {
                    p.add(acc, term)
                } else {
                    p.sub(acc, term)
                }
            })
        };
        out.push(value);
    }
    out
}

pub fn omega_mod(n: u64, p: Prime) -> u64 {
    omega_table_mod(n as usize + 1, p)[n as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn apery_examples() {
        assert_eq!(apery(0), BigUint::one());
        assert_eq!(apery(1), BigUint::from(5u32));
        assert_eq!(apery(2), BigUint::from(73u32));
        assert_eq!(apery(3), BigUint::from(1445u32));
    }

    #[test]
    fn apery_paths_agree() {
        for q in Prime::up_to(13) {
            let table = apery_prefix_mod(201, q);
            for n in 0..=200u64 {
                assert_eq!(table[n as usize], q.reduce_biguint(&apery(n)), "n={n} p={q}");
            }
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(0), BigInt::one());
        assert_eq!(omega(1), BigInt::one());
        assert_eq!(omega(2), BigInt::from(3));
        assert_eq!(omega(3), BigInt::from(19));
    }

    #[test]
    fn omega_convolution() {
        let w = omega_table(41);
        for n in 0..=40u64 {
            let total: BigInt = (0..=n)
                .map(|k| {
                    let c = BigInt::from(binomial_exact(n, k));
                    let term = &c * &c * &w[(n - k) as usize];
                    if k % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum();
            assert_eq!(total, if n == 0 { BigInt::one() } else { BigInt::zero() });
        }
    }

    #[test]
    fn omega_mod_matches_exact() {
        let w = omega_table(120);
        for q in Prime::up_to(13) {
            let m = omega_table_mod(120, q);
            for n in 0..120 {
                assert_eq!(m[n], q.reduce_big(&w[n]));
            }
        }
        assert_eq!(omega_mod(3, p(7)), 5);
    }
}
