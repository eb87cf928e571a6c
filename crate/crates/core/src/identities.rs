//! Exact residuals (left side minus right side) of the Catalan-type
//! identities and the two-term shift identity. Each residual is zero when
//! the identity holds.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequences::{fib, lucas_num, rec_term, s_poly, t_poly, LinearRecurrence};

fn sign(exp: u64) -> BigInt {
    if exp % 2 == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

fn require_order(n: u64, r: u64) -> Result<()> {
    if r > n {
        return Err(Error::IndexOrder(format!("r = {r} exceeds n = {n}")));
    }
    Ok(())
}

/// `F(n)² − F(n+r)·F(n−r) − (−1)^{n−r}·F(r)²`
pub fn catalan_residual(n: u64, r: u64) -> Result<BigInt> {
    require_order(n, r)?;
    let f = |i| BigInt::from(fib(i));
    let fr = f(r);
    Ok(f(n) * f(n) - f(n + r) * f(n - r) - sign(n - r) * &fr * &fr)
}

/// `L(n+r)·L(n−r) − L(n)² − (−1)^{n−r}·5·F(r)²`
pub fn lucas_catalan_residual(n: u64, r: u64) -> Result<BigInt> {
    require_order(n, r)?;
    let l = |i| BigInt::from(lucas_num(i));
    let fr = BigInt::from(fib(r));
    Ok(l(n + r) * l(n - r) - l(n) * l(n) - sign(n - r) * 5 * &fr * &fr)
}

/// `A(n+r)·A(n−r) − A(n)² − (−v)^{n−r}·s(r−1)²·(v·A0² + u·A0·A1 − A1²)`
pub fn general_catalan_residual(rec: &LinearRecurrence, n: u64, r: u64) -> Result<BigInt> {
    require_order(n, r)?;
    if r == 0 {
        return Err(Error::IndexOrder("r must be at least 1".into()));
    }
    let a = |i| rec_term(rec, i);
    let s = s_poly(r - 1, rec.u, rec.v);
    let lhs = a(n + r) * a(n - r) - a(n) * a(n);
    let rhs = num_traits::pow(BigInt::from(-rec.v), (n - r) as usize)
        * &s
        * &s
        * rec.discriminant_factor();
    Ok(lhs - rhs)
}

/// `A(n+r) − s(k)·A(n+r−k) − t(k)·A(n+r−k−1)`
pub fn shift_identity_residual(rec: &LinearRecurrence, n: u64, r: u64, k: u64) -> Result<BigInt> {
    let top = n + r;
    if top < k + 1 {
        return Err(Error::IndexOrder(format!("n + r = {top} must be at least k + 1 = {}", k + 1)));
    }
    let a = |i| rec_term(rec, i);
    Ok(a(top) - s_poly(k, rec.u, rec.v) * a(top - k) - t_poly(k, rec.u, rec.v) * a(top - k - 1))
}

/// One index tuple where a residual did not vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonzeroResidual {
    pub n: u64,
    pub r: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentitySweep {
    pub checked: u64,
    pub nonzero: Vec<NonzeroResidual>,
}

impl IdentitySweep {
    pub fn all_zero(&self) -> bool {
        self.nonzero.is_empty()
    }

    fn collect(results: Vec<(u64, u64, Option<u64>, BigInt)>) -> Self {
        let checked = results.len() as u64;
        let nonzero = results
            .into_iter()
            .filter(|(.., res)| !res.is_zero())
            .map(|(n, r, k, res)| NonzeroResidual { n, r, k, residual: res.to_string() })
            .collect();
        IdentitySweep { checked, nonzero }
    }
}

fn pairs(n_max: u64, r_min: u64) -> Vec<(u64, u64)> {
    (0..=n_max)
        .flat_map(|n| (r_min..=n).map(move |r| (n, r)))
        .collect()
}

/// All `0 ≤ r ≤ n ≤ n_max`.
pub fn sweep_catalan(n_max: u64) -> IdentitySweep {
    let results = pairs(n_max, 0)
        .into_par_iter()
        .map(|(n, r)| (n, r, None, catalan_residual(n, r).expect("ordered")))
        .collect();
    IdentitySweep::collect(results)
}

/// All `0 ≤ r ≤ n ≤ n_max`.
pub fn sweep_lucas_catalan(n_max: u64) -> IdentitySweep {
    let results = pairs(n_max, 0)
        .into_par_iter()
        .map(|(n, r)| (n, r, None, lucas_catalan_residual(n, r).expect("ordered")))
        .collect();
    IdentitySweep::collect(results)
}

/// All `1 ≤ r ≤ n ≤ n_max`.
pub fn sweep_general_catalan(rec: &LinearRecurrence, n_max: u64) -> IdentitySweep {
    let results = pairs(n_max, 1)
        .into_par_iter()
        .map(|(n, r)| (n, r, None, general_catalan_residual(rec, n, r).expect("ordered")))
        .collect();
    IdentitySweep::collect(results)
}

/// All `1 ≤ k < n + r ≤ top_max`. The residual depends on `n + r` only, so
/// each total is split as `n = total − ⌊total/2⌋`, `r = ⌊total/2⌋`.
pub fn sweep_shift(rec: &LinearRecurrence, top_max: u64) -> IdentitySweep {
    let cells: Vec<(u64, u64, u64)> = (2..=top_max)
        .flat_map(|total| (1..total).map(move |k| (total - total / 2, total / 2, k)))
        .collect();
    let results = cells
        .into_par_iter()
        .map(|(n, r, k)| (n, r, Some(k), shift_identity_residual(rec, n, r, k).expect("ordered")))
        .collect();
    IdentitySweep::collect(results)
}
