//! Lucas-property checks.
//!
//! [`lp_bruteforce`] is the ground truth: it walks every `n < p^D` and
//! compares `S(n)` with the product of `S` over the base-`p` digits of `n`.
//! The `theorem*_condition` functions are closed-form predictions for the
//! affine families `S(n) = A(a·n + b)`; [`crossval_grid`] sweeps both and
//! records where they disagree.
//!
//! A sequence that vanishes identically mod `p` satisfies the congruence
//! vacuously. The oracle reports it as holding and flags it through
//! [`LpScan::identically_zero`]; the cross-validation summaries keep those
//! cells out of the disagreement count.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modmath::{pow_mod, Prime};
use crate::sequences::{
    fib_mod, lucas_mod, period_mod, default_scan_limit, rec_term_mod, s_poly_mod,
    LinearRecurrence, Mat2,
};
use crate::special::{apery_mod, apery_prefix_mod, omega_table_mod};

/// Default number of base-`p` digits scanned by the oracle.
pub const DEFAULT_DIGIT_BOUND: u32 = 3;

/// Index map `n ↦ a·n + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AffineIndexMap {
    pub a: u64,
    pub b: u64,
}

impl AffineIndexMap {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidArgument("index map needs a ≥ 1".into()));
        }
        Ok(AffineIndexMap { a, b })
    }

    #[inline]
    pub fn at(&self, n: u64) -> u64 {
        self.a * n + self.b
    }
}

/// Which affine recurrence family a search or enumeration runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Fibonacci,
    Lucas,
    General(LinearRecurrence),
}

impl Family {
    pub fn recurrence(&self) -> LinearRecurrence {
        match self {
            Family::Fibonacci => LinearRecurrence::fibonacci(),
            Family::Lucas => LinearRecurrence::lucas(),
            Family::General(rec) => *rec,
        }
    }

    pub fn spec(&self, map: AffineIndexMap) -> SequenceSpec {
        match self {
            Family::Fibonacci => SequenceSpec::FibAffine(map),
            Family::Lucas => SequenceSpec::LucasAffine(map),
            Family::General(rec) => SequenceSpec::GeneralAffine(*rec, map),
        }
    }

    /// The closed-form condition that predicts LP for this family.
    pub fn target(&self) -> TheoremTarget {
        match self {
            Family::Fibonacci => TheoremTarget::Theorem1,
            Family::Lucas => TheoremTarget::Theorem2(Reading::AsProved),
            Family::General(rec) => TheoremTarget::Theorem3(*rec),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Fibonacci => f.write_str("fib"),
            Family::Lucas => f.write_str("lucas"),
            Family::General(rec) => write!(f, "general({rec})"),
        }
    }
}

/// A sequence `S(n)` to test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSpec {
    FibAffine(AffineIndexMap),
    LucasAffine(AffineIndexMap),
    GeneralAffine(LinearRecurrence, AffineIndexMap),
    Power(i64),
    Apery,
    Omega,
    Table(Vec<BigInt>),
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::FibAffine(m) => write!(f, "fib-affine(a={},b={})", m.a, m.b),
            SequenceSpec::LucasAffine(m) => write!(f, "lucas-affine(a={},b={})", m.a, m.b),
            SequenceSpec::GeneralAffine(r, m) => {
                write!(f, "general-affine(rec={r},a={},b={})", m.a, m.b)
            }
            SequenceSpec::Power(base) => write!(f, "power({base})"),
            SequenceSpec::Apery => f.write_str("apery"),
            SequenceSpec::Omega => f.write_str("omega"),
            SequenceSpec::Table(t) => write!(f, "table(len={})", t.len()),
        }
    }
}

enum ResidueStream {
    Affine { step: Mat2, state: (u64, u64) },
    Power { p: Prime, base: u64, cur: u64 },
    Listed(std::vec::IntoIter<u64>),
}

impl Iterator for ResidueStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        match self {
            ResidueStream::Affine { step, state } => {
                let out = state.1;
                *state = step.apply(*state);
                Some(out)
            }
            ResidueStream::Power { p, base, cur } => {
                let out = *cur;
                *cur = p.mul(*cur, *base);
                Some(out)
            }
            ResidueStream::Listed(it) => it.next(),
        }
    }
}

impl SequenceSpec {
    fn affine(&self) -> Option<(LinearRecurrence, AffineIndexMap)> {
        match self {
            SequenceSpec::FibAffine(m) => Some((LinearRecurrence::fibonacci(), *m)),
            SequenceSpec::LucasAffine(m) => Some((LinearRecurrence::lucas(), *m)),
            SequenceSpec::GeneralAffine(r, m) => Some((*r, *m)),
            _ => None,
        }
    }

    /// `S(0), S(1), …` mod `p`; at least `len` items are produced.
    fn stream(&self, p: Prime, len: u64) -> Result<ResidueStream> {
        if let Some((rec, map)) = self.affine() {
            let state = (rec_term_mod(&rec, map.b + 1, p), rec_term_mod(&rec, map.b, p));
            let step = Mat2::companion(&rec, p).pow(map.a);
            return Ok(ResidueStream::Affine { step, state });
        }
        let listed = match self {
            SequenceSpec::Power(base) => {
                return Ok(ResidueStream::Power { p, base: p.reduce(*base), cur: 1 % p.get() })
            }
            SequenceSpec::Apery => apery_prefix_mod(len as usize, p),
            SequenceSpec::Omega => omega_table_mod(len as usize, p),
            SequenceSpec::Table(values) => {
                if (values.len() as u64) < len {
                    return Err(Error::TableTooShort { needed: len, got: values.len() as u64 });
                }
                values[..len as usize].iter().map(|x| p.reduce_big(x)).collect()
            }
            _ => unreachable!("affine variants handled above"),
        };
        Ok(ResidueStream::Listed(listed.into_iter()))
    }

    /// `S(0), …, S(len−1)` reduced mod `p`.
    pub fn residues(&self, p: Prime, len: u64) -> Result<Vec<u64>> {
        Ok(self.stream(p, len)?.take(len as usize).collect())
    }

    /// `S(n) mod p` computed directly, without the stepping used by the oracle.
    pub fn residue_at(&self, n: u64, p: Prime) -> Result<u64> {
        Ok(match self {
            SequenceSpec::FibAffine(m) => fib_mod(m.at(n), p),
            SequenceSpec::LucasAffine(m) => lucas_mod(m.at(n), p),
            SequenceSpec::GeneralAffine(r, m) => rec_term_mod(r, m.at(n), p),
            SequenceSpec::Power(base) => pow_mod(*base, n, p),
            SequenceSpec::Apery => apery_mod(n, p),
            SequenceSpec::Omega => omega_table_mod(n as usize + 1, p)[n as usize],
            SequenceSpec::Table(values) => {
                let v = values.get(n as usize).ok_or(Error::TableTooShort {
                    needed: n + 1,
                    got: values.len() as u64,
                })?;
                p.reduce_big(v)
            }
        })
    }
}

/// A violating `n`: `lhs = S(n)`, `rhs = Π S(digits[i])`, both mod `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u64,
    pub lhs: u64,
    pub digits: Vec<u64>,
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LpVerdict {
    pub holds: bool,
    pub prime: Prime,
    pub digit_bound: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

/// Oracle verdict plus whether the scanned prefix was identically zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpScan {
    pub verdict: LpVerdict,
    pub identically_zero: bool,
}

fn scan_len(p: Prime, digit_bound: u32) -> Result<u64> {
    if digit_bound < 2 {
        return Err(Error::InvalidArgument(format!(
            "digit bound must be at least 2 (got {digit_bound})"
        )));
    }
    p.get()
        .checked_pow(digit_bound)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{digit_bound} overflows u64")))
}

/// Brute-force LP check over every `n < p^digit_bound`, reporting the
/// smallest violating `n`.
pub fn lp_scan(spec: &SequenceSpec, p: Prime, digit_bound: u32) -> Result<LpScan> {
    let len = scan_len(p, digit_bound)?;
    let base = p.get();
    let mut stream = spec.stream(p, len)?;
    let mut low: Vec<u64> = Vec::with_capacity(base as usize);
    let mut digits: Vec<u64> = vec![0];
    let mut all_zero = true;
    for n in 0..len {
        let s = stream.next().expect("stream covers the scan");
        all_zero &= s == 0;
        if n > 0 {
            // increment the little-endian digit counter
            let mut i = 0;
            loop {
                if i == digits.len() {
                    digits.push(1);
                    break;
                }
                digits[i] += 1;
                if digits[i] < base {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
        if n < base {
            low.push(s);
            continue;
        }
        let rhs = digits.iter().fold(1 % base, |acc, &d| p.mul(acc, low[d as usize]));
        if rhs != s {
            let counterexample = Counterexample { n, lhs: s, digits: digits.clone(), rhs };
            return Ok(LpScan {
                verdict: LpVerdict {
                    holds: false,
                    prime: p,
                    digit_bound,
                    counterexample: Some(counterexample),
                },
                identically_zero: false,
            });
        }
    }
    Ok(LpScan {
        verdict: LpVerdict { holds: true, prime: p, digit_bound, counterexample: None },
        identically_zero: all_zero,
    })
}

pub fn lp_bruteforce(spec: &SequenceSpec, p: Prime, digit_bound: u32) -> Result<LpVerdict> {
    lp_scan(spec, p, digit_bound).map(|s| s.verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma1Outcome {
    Holds,
    Fails,
    /// `S` vanished on the whole scanned range.
    Inapplicable,
}

/// `S(0) ≡ 1 (mod p)`, for `S` not identically zero on `[0, scan)`.
pub fn lemma1_check(spec: &SequenceSpec, p: Prime, scan: u64) -> Result<Lemma1Outcome> {
    let values = spec.residues(p, scan.max(1))?;
    Ok(if values.iter().all(|&x| x == 0) {
        Lemma1Outcome::Inapplicable
    } else if values[0] == 1 {
        Lemma1Outcome::Holds
    } else {
        Lemma1Outcome::Fails
    })
}

/// `S(n) ≡ S(1)^n (mod p)` for every `n < n_bound`.
pub fn lemma2_check(spec: &SequenceSpec, p: Prime, n_bound: u64) -> Result<bool> {
    let values = spec.residues(p, n_bound.max(2))?;
    let s1 = values[1];
    let mut power = 1 % p.get();
    for &s in values.iter().take(n_bound as usize) {
        if s != power {
            return Ok(false);
        }
        power = p.mul(power, s1);
    }
    Ok(true)
}

/// Which of the two readings of the Lucas-number condition to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reading {
    /// `L(b) ≡ 1`, the form the necessity argument produces.
    #[default]
    AsProved,
    /// `F(b) ≡ 1`, the form written in the theorem statement.
    AsStated,
}

impl fmt::Display for Reading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reading::AsProved => "as-proved",
            Reading::AsStated => "as-stated",
        })
    }
}

/// `F(a) ≡ 0` and `F(b) ≡ 1 (mod p)`.
pub fn theorem1_condition(map: AffineIndexMap, p: Prime) -> bool {
    fib_mod(map.a, p) == 0 && fib_mod(map.b, p) == 1
}

/// `5·F(a) ≡ 0` and, depending on `reading`, `L(b) ≡ 1` or `F(b) ≡ 1 (mod p)`.
pub fn theorem2_condition(map: AffineIndexMap, p: Prime, reading: Reading) -> bool {
    let first = p.mul(5 % p.get(), fib_mod(map.a, p)) == 0;
    let second = match reading {
        Reading::AsProved => lucas_mod(map.b, p) == 1,
        Reading::AsStated => fib_mod(map.b, p) == 1,
    };
    first && second
}

/// `v·s(a−1,u,v)·(v·A0² + u·A0·A1 − A1²) ≡ 0` and `A(b) ≡ 1 (mod p)`.
pub fn theorem3_condition(rec: &LinearRecurrence, map: AffineIndexMap, p: Prime) -> bool {
    let factor = p.reduce_big(&rec.discriminant_factor());
    let s = s_poly_mod(map.a - 1, rec.u, rec.v, p);
    let first = p.mul(p.mul(p.reduce(rec.v), s), factor) == 0;
    first && rec_term_mod(rec, map.b, p) == 1
}

/// A closed-form LP prediction to cross-validate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremTarget {
    Theorem1,
    Theorem2(Reading),
    Theorem3(LinearRecurrence),
}

impl TheoremTarget {
    pub fn predict(&self, map: AffineIndexMap, p: Prime) -> bool {
        match self {
            TheoremTarget::Theorem1 => theorem1_condition(map, p),
            TheoremTarget::Theorem2(reading) => theorem2_condition(map, p, *reading),
            TheoremTarget::Theorem3(rec) => theorem3_condition(rec, map, p),
        }
    }

    pub fn spec(&self, map: AffineIndexMap) -> SequenceSpec {
        match self {
            TheoremTarget::Theorem1 => SequenceSpec::FibAffine(map),
            TheoremTarget::Theorem2(_) => SequenceSpec::LucasAffine(map),
            TheoremTarget::Theorem3(rec) => SequenceSpec::GeneralAffine(*rec, map),
        }
    }
}

impl fmt::Display for TheoremTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremTarget::Theorem1 => f.write_str("theorem1"),
            TheoremTarget::Theorem2(r) => write!(f, "theorem2[{r}]"),
            TheoremTarget::Theorem3(rec) => write!(f, "theorem3[{rec}]"),
        }
    }
}

/// One `(p, a, b)` cell of a cross-validation sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub prime: Prime,
    pub a: u64,
    pub b: u64,
    pub predicted: bool,
    pub oracle: bool,
    pub identically_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Counterexample>,
}

impl GridCell {
    /// Prediction and oracle differ on a sequence that is not identically zero.
    pub fn is_disagreement(&self) -> bool {
        !self.identically_zero && self.predicted != self.oracle
    }
}

pub fn evaluate_cell(
    target: &TheoremTarget,
    p: Prime,
    map: AffineIndexMap,
    digit_bound: u32,
) -> Result<GridCell> {
    let scan = lp_scan(&target.spec(map), p, digit_bound)?;
    Ok(GridCell {
        prime: p,
        a: map.a,
        b: map.b,
        predicted: target.predict(map, p),
        oracle: scan.verdict.holds,
        identically_zero: scan.identically_zero,
        witness: scan.verdict.counterexample,
    })
}

/// Evaluates every `(p, a, b)` cell in parallel; output order is
/// `p`, then `a`, then `b`, independent of scheduling.
pub fn crossval_grid(
    target: &TheoremTarget,
    primes: &[Prime],
    a_values: std::ops::RangeInclusive<u64>,
    b_values: std::ops::RangeInclusive<u64>,
    digit_bound: u32,
) -> Result<Vec<GridCell>> {
    if *a_values.start() == 0 {
        return Err(Error::InvalidArgument("a ranges must start at 1 or above".into()));
    }
    let cells: Vec<(Prime, AffineIndexMap)> = primes
        .iter()
        .flat_map(|&p| {
            let bs = b_values.clone();
            a_values
                .clone()
                .flat_map(move |a| bs.clone().map(move |b| (p, AffineIndexMap { a, b })))
        })
        .collect();
    cells
        .into_par_iter()
        .map(|(p, map)| evaluate_cell(target, p, map, digit_bound))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridSummary {
    pub label: String,
    pub cells: u64,
    /// Cells whose sequence vanished identically mod `p`.
    pub vacuous: u64,
    /// Vacuous cells where the prediction said "not LP".
    pub vacuous_mismatches: u64,
    pub disagreements: Vec<GridCell>,
}

impl GridSummary {
    pub fn from_cells(label: impl Into<String>, cells: &[GridCell]) -> Self {
        GridSummary {
            label: label.into(),
            cells: cells.len() as u64,
            vacuous: cells.iter().filter(|c| c.identically_zero).count() as u64,
            vacuous_mismatches: cells
                .iter()
                .filter(|c| c.identically_zero && c.predicted != c.oracle)
                .count() as u64,
            disagreements: cells.iter().filter(|c| c.is_disagreement()).cloned().collect(),
        }
    }

    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BEntry {
    pub b: u64,
    pub oracle: bool,
    pub identically_zero: bool,
    pub predicted: bool,
}

/// Offsets `b` for which `A(a·n + b)` is LP with `p`, one per residue class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidBReport {
    pub family: String,
    pub a: u64,
    pub prime: Prime,
    pub digit_bound: u32,
    pub preperiod: u64,
    /// `b` is meaningful modulo this period once `b ≥ preperiod`.
    pub modulus: u64,
    pub valid: Vec<u64>,
    pub entries: Vec<BEntry>,
}

impl ValidBReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &BEntry> {
        self.entries.iter().filter(|e| !e.identically_zero && e.predicted != e.oracle)
    }
}

/// Every `b < preperiod + period` whose sequence passes the oracle without
/// being identically zero, alongside the closed-form prediction.
pub fn enumerate_valid_b(
    family: Family,
    a: u64,
    p: Prime,
    digit_bound: u32,
) -> Result<ValidBReport> {
    let rec = family.recurrence();
    let info = period_mod(&rec, p, default_scan_limit(p))?;
    let target = family.target();
    let entries = (0..info.preperiod + info.period)
        .into_par_iter()
        .map(|b| {
            let map = AffineIndexMap::new(a, b)?;
            let scan = lp_scan(&family.spec(map), p, digit_bound)?;
            Ok(BEntry {
                b,
                oracle: scan.verdict.holds,
                identically_zero: scan.identically_zero,
                predicted: target.predict(map, p),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let valid = entries.iter().filter(|e| e.oracle && !e.identically_zero).map(|e| e.b).collect();
    Ok(ValidBReport {
        family: family.to_string(),
        a,
        prime: p,
        digit_bound,
        preperiod: info.preperiod,
        modulus: info.period,
        valid,
        entries,
    })
}

/// Smallest prime `p ≤ prime_bound` for which `A(a·n + b)` fails the oracle
/// at the default digit bound.
pub fn corollary1_counterexample(
    family: Family,
    map: AffineIndexMap,
    prime_bound: u64,
) -> Result<(Prime, LpVerdict)> {
    let spec = family.spec(map);
    for p in Prime::up_to(prime_bound) {
        let verdict = lp_bruteforce(&spec, p, DEFAULT_DIGIT_BOUND)?;
        if !verdict.holds {
            return Ok((p, verdict));
        }
    }
    Err(Error::NotFoundWithinBound { bound: prime_bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    Fibonacci,
    Lucas,
}

/// `n·3^{n−1} mod 5` (Fibonacci) or `3^{n−1} mod 5` (Lucas), for `n ≥ 1`.
pub fn lemma3_closed_form(kind: ClosedFormKind, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("closed form needs n ≥ 1".into()));
    }
    let five = Prime::new(5).expect("5 is prime");
    let power = pow_mod(3, n - 1, five);
    Ok(match kind {
        ClosedFormKind::Fibonacci => five.mul(n % 5, power),
        ClosedFormKind::Lucas => power,
    })
}
