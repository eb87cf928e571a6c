//! Fibonacci, Lucas and general second-order recurrences, exact and modulo
//! a prime, plus the `s`/`t` shift polynomials and period scans.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modmath::{binomial_exact, Prime};

/// `A(n) = u·A(n-1) + v·A(n-2)` with initial values `A(0) = a0`, `A(1) = a1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearRecurrence {
    pub a0: i64,
    pub a1: i64,
    pub u: i64,
    pub v: i64,
}

impl LinearRecurrence {
    pub const fn new(a0: i64, a1: i64, u: i64, v: i64) -> Self {
        LinearRecurrence { a0, a1, u, v }
    }

    pub const fn fibonacci() -> Self {
        Self::new(0, 1, 1, 1)
    }

    pub const fn lucas() -> Self {
        Self::new(2, 1, 1, 1)
    }

    pub const fn pell() -> Self {
        Self::new(0, 1, 2, 1)
    }

    /// `v·A0² + u·A0·A1 − A1²`, the initial-value factor shared by the
    /// Catalan-type identity and the LP condition.
    pub fn discriminant_factor(&self) -> BigInt {
        let (a0, a1) = (BigInt::from(self.a0), BigInt::from(self.a1));
        BigInt::from(self.v) * &a0 * &a0 + BigInt::from(self.u) * &a0 * &a1 - &a1 * &a1
    }

    /// Exact terms `A(0), …, A(len-1)`.
    pub fn terms(&self, len: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        let (u, v) = (BigInt::from(self.u), BigInt::from(self.v));
        for n in 0..len {
            let next = match n {
                0 => BigInt::from(self.a0),
                1 => BigInt::from(self.a1),
                _ => &u * &out[n - 1] + &v * &out[n - 2],
            };
            out.push(next);
        }
        out
    }
}

impl fmt::Display for LinearRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a0, self.a1, self.u, self.v)
    }
}

impl FromStr for LinearRecurrence {
    type Err = Error;

    /// Parses `A0,A1,u,v`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "recurrence must be A0,A1,u,v (got {s:?})"
            )));
        }
        let mut vals = [0i64; 4];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| {
                Error::InvalidArgument(format!("bad integer {part:?} in recurrence {s:?}"))
            })?;
        }
        Ok(Self::new(vals[0], vals[1], vals[2], vals[3]))
    }
}

/// 2×2 matrix over `Z/pZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Mat2 {
    m: [[u64; 2]; 2],
    p: Prime,
}

impl Mat2 {
    pub(crate) fn identity(p: Prime) -> Self {
        let one = 1 % p.get();
        Mat2 { m: [[one, 0], [0, one]], p }
    }

    /// Companion matrix sending `(A(n+1), A(n))` to `(A(n+2), A(n+1))`.
    pub(crate) fn companion(rec: &LinearRecurrence, p: Prime) -> Self {
        let one = 1 % p.get();
        Mat2 { m: [[p.reduce(rec.u), p.reduce(rec.v)], [one, 0]], p }
    }

    pub(crate) fn mul(&self, other: &Mat2) -> Mat2 {
        let p = self.p;
        let (a, b) = (&self.m, &other.m);
        let entry = |i: usize, j: usize| p.add(p.mul(a[i][0], b[0][j]), p.mul(a[i][1], b[1][j]));
        Mat2 { m: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]], p }
    }

    pub(crate) fn pow(&self, mut exp: u64) -> Mat2 {
        let mut acc = Mat2::identity(self.p);
        let mut base = *self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub(crate) fn apply(&self, x: (u64, u64)) -> (u64, u64) {
        let p = self.p;
        let m = &self.m;
        (
            p.add(p.mul(m[0][0], x.0), p.mul(m[0][1], x.1)),
            p.add(p.mul(m[1][0], x.0), p.mul(m[1][1], x.1)),
        )
    }
}

fn fib_pair_exact(n: u64) -> (BigUint, BigUint) {
    if n == 0 {
        return (BigUint::zero(), BigUint::one());
    }
    let (f, g) = fib_pair_exact(n / 2);
    // F(2k) = F(k)(2F(k+1) − F(k)),  F(2k+1) = F(k)² + F(k+1)²
    let even = &f * (&g * 2u32 - &f);
    let odd = &f * &f + &g * &g;
    if n % 2 == 0 {
        (even, odd)
    } else {
        let next = &even + &odd;
        (odd, next)
    }
}

pub fn fib(n: u64) -> BigUint {
    fib_pair_exact(n).0
}

pub fn lucas_num(n: u64) -> BigUint {
    let (f, g) = fib_pair_exact(n);
    g * 2u32 - f
}

/// `(F(n) mod p, F(n+1) mod p)` by fast doubling.
pub fn fib_pair_mod(n: u64, p: Prime) -> (u64, u64) {
    let mut f = 0u64;
    let mut g = 1 % p.get();
    for bit in (0..64 - n.leading_zeros()).rev() {
        let even = p.mul(f, p.sub(p.mul(2, g), f));
        let odd = p.add(p.mul(f, f), p.mul(g, g));
        if (n >> bit) & 1 == 1 {
            f = odd;
            g = p.add(even, odd);
        } else {
            f = even;
            g = odd;
        }
    }
    (f, g)
}

pub fn fib_mod(n: u64, p: Prime) -> u64 {
    fib_pair_mod(n, p).0
}

pub fn lucas_mod(n: u64, p: Prime) -> u64 {
    let (f, g) = fib_pair_mod(n, p);
    p.sub(p.mul(2, g), f)
}

/// Exact `A(n)`.
pub fn rec_term(rec: &LinearRecurrence, n: u64) -> BigInt {
    let (u, v) = (BigInt::from(rec.u), BigInt::from(rec.v));
    let (mut prev, mut cur) = (BigInt::from(rec.a0), BigInt::from(rec.a1));
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &u * &cur + &v * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `A(n) mod p` via the companion matrix.
pub fn rec_term_mod(rec: &LinearRecurrence, n: u64, p: Prime) -> u64 {
    let start = (p.reduce(rec.a1), p.reduce(rec.a0));
    Mat2::companion(rec, p).pow(n).apply(start).1
}

/// `s(k,u,v) = Σ_{i=0}^{⌊k/2⌋} C(k−i, i)·u^{k−2i}·v^i`.
pub fn s_poly(k: u64, u: i64, v: i64) -> BigInt {
    let (u, v) = (BigInt::from(u), BigInt::from(v));
    (0..=k / 2)
        .map(|i| {
            BigInt::from(binomial_exact(k - i, i))
                * num_traits::pow(u.clone(), (k - 2 * i) as usize)
                * num_traits::pow(v.clone(), i as usize)
        })
        .sum()
}

/// `t(k,u,v) = Σ_{j=0}^{⌊(k−1)/2⌋} C(k−1−j, j)·u^{k−1−2j}·v^{j+1}`, with `t(0) = 0`.
pub fn t_poly(k: u64, u: i64, v: i64) -> BigInt {
    if k == 0 {
        return BigInt::zero();
    }
    let (u, v) = (BigInt::from(u), BigInt::from(v));
    (0..=(k - 1) / 2)
        .map(|j| {
            BigInt::from(binomial_exact(k - 1 - j, j))
                * num_traits::pow(u.clone(), (k - 1 - 2 * j) as usize)
                * num_traits::pow(v.clone(), (j + 1) as usize)
        })
        .sum()
}

/// `s(k,u,v) mod p`, using `s(k,u,v) = U(k+1)` for the recurrence `(0, 1, u, v)`.
pub fn s_poly_mod(k: u64, u: i64, v: i64, p: Prime) -> u64 {
    rec_term_mod(&LinearRecurrence::new(0, 1, u, v), k + 1, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodInfo {
    pub preperiod: u64,
    pub period: u64,
}

/// Smallest `(preperiod, period)` of the state pair `(A(n), A(n+1)) mod p`.
///
/// Works for `p | v`, where the sequence is only eventually periodic.
pub fn period_mod(rec: &LinearRecurrence, p: Prime, scan_limit: u64) -> Result<PeriodInfo> {
    let (u, v) = (p.reduce(rec.u), p.reduce(rec.v));
    let mut state = (p.reduce(rec.a0), p.reduce(rec.a1));
    let mut first_seen: HashMap<(u64, u64), u64> = HashMap::new();
    for n in 0..scan_limit {
        if let Some(&j) = first_seen.get(&state) {
            return Ok(PeriodInfo { preperiod: j, period: n - j });
        }
        first_seen.insert(state, n);
        let next = p.add(p.mul(u, state.1), p.mul(v, state.0));
        state = (state.1, next);
    }
    Err(Error::ScanExhausted { limit: scan_limit })
}

/// Default scan limit for [`period_mod`]: one more than the size of the state space.
pub fn default_scan_limit(p: Prime) -> u64 {
    p.get().saturating_mul(p.get()).saturating_add(2)
}

/// Rank of apparition: least `n ≥ 1` with `p | F(n)`.
pub fn alpha(p: Prime, scan_limit: u64) -> Result<u64> {
    let (mut f, mut g) = (1 % p.get(), 1 % p.get());
    for n in 1..=scan_limit {
        if f == 0 {
            return Ok(n);
        }
        let next = p.add(f, g);
        f = std::mem::replace(&mut g, next);
    }
    Err(Error::ScanExhausted { limit: scan_limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn iterate_fib(len: usize) -> Vec<BigUint> {
        let mut v = vec![BigUint::zero(), BigUint::one()];
        while v.len() < len {
            let next = &v[v.len() - 1] + &v[v.len() - 2];
            v.push(next);
        }
        v.truncate(len);
        v
    }

    #[test]
    fn exact_examples() {
        assert_eq!(fib(0), BigUint::zero());
        assert_eq!(fib(1), BigUint::one());
        assert_eq!(fib(10), BigUint::from(55u32));
        assert_eq!(lucas_num(0), BigUint::from(2u32));
        assert_eq!(lucas_num(1), BigUint::one());
        assert_eq!(lucas_num(10), BigUint::from(123u32));
    }

    #[test]
    fn fast_doubling_matches_iteration() {
        let reference = iterate_fib(502);
        for n in 0..500 {
            assert_eq!(fib(n as u64), reference[n]);
            assert_eq!(lucas_num(n as u64), &reference[n + 1] * 2u32 - &reference[n]);
        }
    }

    #[test]
    fn modular_examples() {
        assert_eq!(fib_mod(10, p(5)), 0);
        assert_eq!(fib_mod(0, p(13)), 0);
        assert_eq!(lucas_mod(7, p(3)), 2);
        assert_eq!(fib_mod(u64::MAX, p(2)), fib_mod(u64::MAX % 3, p(2)));
    }

    #[test]
    fn fast_and_exact_agree() {
        let fibs = LinearRecurrence::fibonacci().terms(2001);
        let lucs = LinearRecurrence::lucas().terms(2001);
        let pell = LinearRecurrence::pell().terms(2001);
        for q in Prime::up_to(101) {
            for n in 0..=2000u64 {
                let i = n as usize;
                assert_eq!(fib_mod(n, q), q.reduce_big(&fibs[i]));
                assert_eq!(lucas_mod(n, q), q.reduce_big(&lucs[i]));
                if n % 7 == 0 {
                    assert_eq!(rec_term_mod(&LinearRecurrence::pell(), n, q), q.reduce_big(&pell[i]));
                }
            }
        }
    }

    #[test]
    fn rec_term_examples() {
        let fibr = LinearRecurrence::fibonacci();
        assert_eq!(rec_term(&fibr, 10), BigInt::from(55));
        let r = LinearRecurrence::new(-4, 9, 3, -2);
        assert_eq!(rec_term(&r, 0), BigInt::from(-4));
        assert_eq!(rec_term(&LinearRecurrence::pell(), 5), BigInt::from(29));
        for n in 0..40 {
            assert_eq!(rec_term(&r, n), r.terms(40)[n as usize]);
            assert_eq!(rec_term_mod(&r, n, p(11)), p(11).reduce_big(&rec_term(&r, n)));
        }
    }

    #[test]
    fn shift_polynomial_examples() {
        assert_eq!(s_poly(0, 7, -3), BigInt::one());
        assert_eq!(s_poly(4, 1, 1), BigInt::from(5));
        assert_eq!(s_poly(3, 2, 1), BigInt::from(12));
        assert_eq!(t_poly(0, 7, -3), BigInt::zero());
        assert_eq!(t_poly(1, 7, -3), BigInt::from(-3));
        assert_eq!(t_poly(4, 1, 1), BigInt::from(3));
    }

    #[test]
    fn s_poly_bridges() {
        let pell = LinearRecurrence::pell().terms(302);
        for k in 0..=300u64 {
            assert_eq!(s_poly(k, 1, 1), BigInt::from(fib(k + 1)));
            assert_eq!(s_poly(k, 2, 1), pell[(k + 1) as usize]);
        }
    }

    #[test]
    fn t_is_shifted_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..50 {
            let (u, v) = (rng.gen_range(-10..=10), rng.gen_range(-10..=10));
            for k in 1..=100 {
                assert_eq!(t_poly(k, u, v), BigInt::from(v) * s_poly(k - 1, u, v));
            }
        }
    }

    #[test]
    fn s_poly_mod_matches_exact_sum() {
        for q in Prime::up_to(31) {
            for (u, v) in [(1, 1), (2, 1), (3, -2), (-5, 4), (0, 3), (4, 0)] {
                for k in 0..80 {
                    assert_eq!(s_poly_mod(k, u, v, q), q.reduce_big(&s_poly(k, u, v)));
                }
            }
        }
    }

    #[test]
    fn gcd_of_fibonacci_numbers() {
        let f: Vec<BigUint> = (0..=120).map(fib).collect();
        for m in 0..=120u64 {
            for n in 0..=120u64 {
                assert_eq!(f[m as usize].gcd(&f[n as usize]), f[m.gcd(&n) as usize]);
            }
        }
    }

    #[test]
    fn period_examples() {
        let fibr = LinearRecurrence::fibonacci();
        assert_eq!(period_mod(&fibr, p(5), 100), Ok(PeriodInfo { preperiod: 0, period: 20 }));
        assert_eq!(period_mod(&fibr, p(2), 100), Ok(PeriodInfo { preperiod: 0, period: 3 }));
        assert_eq!(period_mod(&LinearRecurrence::lucas(), p(5), 100).unwrap().period, 4);
        assert_eq!(period_mod(&fibr, p(5), 10), Err(Error::ScanExhausted { limit: 10 }));
        // v = 0: 1, 1, 1, … is constant from the start.
        let v0 = LinearRecurrence::new(1, 1, 1, 0);
        assert_eq!(period_mod(&v0, p(5), 100), Ok(PeriodInfo { preperiod: 0, period: 1 }));
        // v = 0, u = 2: 1, 3, 6, 12, … mod 5 → state (1,3) never recurs.
        let v0 = LinearRecurrence::new(1, 3, 2, 0);
        let info = period_mod(&v0, p(5), 100).unwrap();
        assert_eq!(info, PeriodInfo { preperiod: 1, period: 4 });
    }

    fn state_at(rec: &LinearRecurrence, q: Prime, n: u64) -> (u64, u64) {
        (rec_term_mod(rec, n, q), rec_term_mod(rec, n + 1, q))
    }

    #[test]
    fn period_minimality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut recs = vec![
            LinearRecurrence::fibonacci(),
            LinearRecurrence::lucas(),
            LinearRecurrence::pell(),
            LinearRecurrence::new(1, 2, 1, 1),
            LinearRecurrence::new(2, 1, 3, 2),
        ];
        for _ in 0..20 {
            recs.push(LinearRecurrence::new(
                rng.gen_range(-5..=5),
                rng.gen_range(-5..=5),
                rng.gen_range(-5..=5),
                rng.gen_range(-5..=5),
            ));
        }
        for rec in &recs {
            for q in Prime::up_to(23) {
                let info = period_mod(rec, q, default_scan_limit(q)).unwrap();
                if q.reduce(rec.v) != 0 {
                    assert_eq!(info.preperiod, 0);
                }
                let pre = info.preperiod;
                for n in pre..pre + 2 * info.period + 3 {
                    assert_eq!(state_at(rec, q, n), state_at(rec, q, n + info.period));
                }
                for d in 1..info.period {
                    if info.period % d == 0 {
                        assert!((pre..pre + info.period)
                            .any(|n| state_at(rec, q, n) != state_at(rec, q, n + d)));
                    }
                }
                if pre > 0 {
                    assert_ne!(
                        state_at(rec, q, pre - 1),
                        state_at(rec, q, pre - 1 + info.period)
                    );
                }
            }
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(p(5), 100), Ok(5));
        assert_eq!(alpha(p(2), 100), Ok(3));
        assert_eq!(alpha(p(7), 100), Ok(8));
        assert_eq!(alpha(p(7), 5), Err(Error::ScanExhausted { limit: 5 }));
    }

    #[test]
    fn alpha_characterizes_divisibility() {
        for q in Prime::up_to(100) {
            let rank = alpha(q, default_scan_limit(q)).unwrap();
            for a in 1..=5 * rank {
                assert_eq!(fib_mod(a, q) == 0, a % rank == 0, "p={q} a={a}");
            }
        }
    }

    #[test]
    fn parse_recurrence() {
        assert_eq!("2,1,3,-2".parse(), Ok(LinearRecurrence::new(2, 1, 3, -2)));
        assert!("1,2,3".parse::<LinearRecurrence>().is_err());
        assert!("1,x,3,4".parse::<LinearRecurrence>().is_err());
        assert_eq!(LinearRecurrence::new(-1, 0, 5, 7).to_string(), "-1,0,5,7");
    }
}
