//! Row reduction of the Cramer numerator matrix into the S-table, and the closed
//! forms built on top of it.
//!
//! With `J^r = (a + t·d)^r − a^r`, the base row is
//!
//! ```text
//! S(0, j) = (j/2)·d^{j−1}·J¹ − (j/2)·d^{j−2}·J² − d^{j−1}·J¹ + J^j,     j ≥ 3
//! ```
//!
//! and elimination round `m ≥ 1` pivots on row `m + 2`:
//!
//! ```text
//! S(m, j) = −C(j, m+1)·(1/(m+2))·d^{j−m−2}·S(m−1, m+2) + S(m−1, j),   j > m + 2
//! ```
//!
//! The pivot row itself is carried unchanged: `S(m, m+2) = S(m−1, m+2)`. The last
//! entry of a table with `n_max = p + 1` gives `L_{p,t}(a,d) = S(p−2, p+1) / ((p+1)·d)`.
//!
//! Indices `n` below follow the elimination convention `n = p + 1`.

use crate::error::{Error, Result};
use crate::numerics::{binomial, factorial, falling_factorial, GaussianRational, Rational};
use crate::series::PowerSumQuery;

fn int(n: impl Into<num_bigint::BigInt>) -> Rational {
    Rational::from_integer(n)
}

/// Powers `J^1..=J^max` of the progression end against its start, plus `d` powers.
struct Differences {
    /// `j_pow[r] = (a + t·d)^r − a^r`
    j_pow: Vec<GaussianRational>,
    d_pow: Vec<GaussianRational>,
}

impl Differences {
    fn new(q: &PowerSumQuery, max: usize) -> Self {
        let end = q.term(q.t);
        let mut j_pow = Vec::with_capacity(max + 1);
        let (mut hi, mut lo) = (GaussianRational::one(), GaussianRational::one());
        for _ in 0..=max {
            j_pow.push(&hi - &lo);
            hi = &hi * &end;
            lo = &lo * &q.a;
        }
        let d_pow = std::iter::successors(Some(GaussianRational::one()), |x| Some(x * &q.d)).take(max + 1).collect();
        Differences { j_pow, d_pow }
    }
}

fn check_base_index(j: usize) -> Result<()> {
    if j < 3 {
        return Err(Error::InvalidIndex(format!("base entries start at j = 3, got {j}")));
    }
    Ok(())
}

/// `S(0, j)` from the reduced row: `(j/2)d^{j−1}J − (j/2)d^{j−2}J² − d^{j−1}J + J^j`.
fn s_base_reduced(j: usize, diffs: &Differences) -> GaussianRational {
    let half_j = Rational::new(j as i64, 2).expect("nonzero");
    let jv = &diffs.j_pow;
    let dp = &diffs.d_pow;
    let a = (&dp[j - 1] * &jv[1]).scale(&half_j);
    let b = (&dp[j - 2] * &jv[2]).scale(&half_j);
    let c = &dp[j - 1] * &jv[1];
    &(&(&a - &b) - &c) + &jv[j]
}

/// `S(0, j)` from the expanded form:
/// `(j/2 − 1)·t·d^j − (j/2)·d^{j−2}((a+td)² − a²) + (a+td)^j − a^j`.
fn s_base_expanded(j: usize, q: &PowerSumQuery) -> GaussianRational {
    let half_j = Rational::new(j as i64, 2).expect("nonzero");
    let end = q.term(q.t);
    let first = q.d.pow(j as u64).scale(&(&(&half_j - &Rational::one()) * &int(q.t)));
    let squares = &(&end * &end) - &(&q.a * &q.a);
    let second = (&q.d.pow(j as u64 - 2) * &squares).scale(&half_j);
    let third = &end.pow(j as u64) - &q.a.pow(j as u64);
    &(&first - &second) + &third
}

/// Base entry `S(0, j)`, evaluated in both printed forms, which must agree.
pub fn s_base(j: usize, q: &PowerSumQuery) -> Result<GaussianRational> {
    q.require_nonzero_step()?;
    check_base_index(j)?;
    s_base_checked(j, q, &Differences::new(q, j))
}

fn s_base_checked(j: usize, q: &PowerSumQuery, diffs: &Differences) -> Result<GaussianRational> {
    let reduced = s_base_reduced(j, diffs);
    let expanded = s_base_expanded(j, q);
    if reduced != expanded {
        return Err(Error::FormMismatch(format!("S(0,{j}): {reduced} vs {expanded}")));
    }
    Ok(reduced)
}

/// Base entry used by the alternating closed form, transcribed as printed:
///
/// ```text
/// (j/2 − 1)·t·d^j + (j/2)·d^{j−2}((a+td−d)² − (a−d)²) + (−1)^{j−1}[(a+td−d)^j − (a−d)^j]
/// ```
pub fn s_base_alternating(j: usize, q: &PowerSumQuery) -> Result<GaussianRational> {
    q.require_nonzero_step()?;
    check_base_index(j)?;
    let half_j = Rational::new(j as i64, 2).expect("nonzero");
    let hi = &q.term(q.t) - &q.d;
    let lo = &q.a - &q.d;
    let first = q.d.pow(j as u64).scale(&(&(&half_j - &Rational::one()) * &int(q.t)));
    let squares = &(&hi * &hi) - &(&lo * &lo);
    let second = (&q.d.pow(j as u64 - 2) * &squares).scale(&half_j);
    let diff = &hi.pow(j as u64) - &lo.pow(j as u64);
    let third = if j.is_multiple_of(2) { -diff } else { diff };
    Ok(&(&first + &second) + &third)
}

/// All elimination rounds for one query, `S(m, j)` for `0 ≤ m ≤ n_max − 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct STable {
    n_max: usize,
    query: PowerSumQuery,
    /// `rows[m][j − first_column(m)]`
    rows: Vec<Vec<GaussianRational>>,
}

fn first_column(m: usize) -> usize {
    (m + 2).max(3)
}

impl STable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn query(&self) -> &PowerSumQuery {
        &self.query
    }

    /// Number of stored rounds, `n_max − 2`.
    pub fn rounds(&self) -> usize {
        self.rows.len()
    }

    /// `S(m, j)` if stored: `m ≤ n_max − 3` and `max(m+2, 3) ≤ j ≤ n_max`.
    pub fn get(&self, m: usize, j: usize) -> Option<&GaussianRational> {
        let row = self.rows.get(m)?;
        j.checked_sub(first_column(m)).and_then(|idx| row.get(idx))
    }

    fn entry(&self, m: usize, j: usize) -> Result<&GaussianRational> {
        self.get(m, j)
            .ok_or_else(|| Error::InvalidIndex(format!("S({m},{j}) outside table with n_max = {}", self.n_max)))
    }

    /// Recomputes every eliminated entry from its predecessors; returns the first
    /// `(m, j)` that fails the recurrence.
    pub fn recheck(&self) -> std::result::Result<(), (usize, usize)> {
        for m in 1..self.rounds() {
            for j in (m + 3)..=self.n_max {
                let expected = eliminate(&self.query.d, m, j, &self.rows[m - 1][m + 2 - first_column(m - 1)], &self.rows[m - 1][j - first_column(m - 1)]);
                if self.get(m, j) != Some(&expected) {
                    return Err((m, j));
                }
            }
            if self.get(m, m + 2) != self.get(m - 1, m + 2) {
                return Err((m, m + 2));
            }
        }
        Ok(())
    }
}

/// One elimination step: `−C(j, m+1)/(m+2)·d^{j−m−2}·pivot + prev`.
fn eliminate(d: &GaussianRational, m: usize, j: usize, pivot: &GaussianRational, prev: &GaussianRational) -> GaussianRational {
    let factor = &int(binomial(j as u64, m as i64 + 1)) / &int(m as u64 + 2);
    let term = (&d.pow((j - m - 2) as u64) * pivot).scale(&factor);
    prev - &term
}

/// Fills the table in round order (increasing `m`, then increasing `j`).
pub fn s_table(n_max: usize, q: &PowerSumQuery) -> Result<STable> {
    q.require_nonzero_step()?;
    if n_max < 3 {
        return Err(Error::UnsupportedPower(format!("S-table needs n_max >= 3, got {n_max}")));
    }
    let diffs = Differences::new(q, n_max);
    let base = (3..=n_max).map(|j| s_base_checked(j, q, &diffs)).collect::<Result<Vec<_>>>()?;
    let mut rows = vec![base];
    for m in 1..=(n_max - 3) {
        let prev = &rows[m - 1];
        let prev_first = first_column(m - 1);
        let pivot = &prev[m + 2 - prev_first];
        let mut row = Vec::with_capacity(n_max - m - 1);
        row.push(pivot.clone());
        for j in (m + 3)..=n_max {
            row.push(eliminate(&q.d, m, j, pivot, &prev[j - prev_first]));
        }
        rows.push(row);
    }
    Ok(STable { n_max, query: q.clone(), rows })
}

fn require_power_at_least_two(p: u32) -> Result<usize> {
    if p < 2 {
        return Err(Error::UnsupportedPower(format!("elimination paths need p >= 2, got {p}")));
    }
    Ok(p as usize + 1)
}

/// `L_{p,t}(a,d) = S(n−3, n) / (n·d)` with `n = p + 1`.
pub fn l_via_elimination(q: &PowerSumQuery) -> Result<GaussianRational> {
    let n = require_power_at_least_two(q.p)?;
    let table = s_table(n, q)?;
    l_from_table(&table, n)
}

pub(crate) fn l_from_table(table: &STable, n: usize) -> Result<GaussianRational> {
    let denom = table.query.d.scale(&int(n as u64));
    table.entry(n - 3, n)?.checked_div(&denom)
}

/// `Σ_{i=0}^{m} C(m,i)·(d/2)^i·n!/(n−i)!·(−1)^i·S(n−3−m, n−i)`.
pub fn expansion_sum(table: &STable, n: usize, m: usize) -> Result<GaussianRational> {
    if n < 3 || m > n - 3 {
        return Err(Error::InvalidIndex(format!("expansion needs 0 <= m <= n - 3, got n = {n}, m = {m}")));
    }
    let half_d = table.query.d.div_real(&int(2));
    let mut acc = GaussianRational::zero();
    let mut half_d_pow = GaussianRational::one();
    for i in 0..=m {
        let coeff = int(binomial(m as u64, i as i64) * falling_factorial(n as u64, i as u64)?);
        let term = (&half_d_pow * table.entry(n - 3 - m, n - i)?).scale(&coeff);
        if i % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        half_d_pow = &half_d_pow * &half_d;
    }
    Ok(acc)
}

/// Expansion of `S(n−3, n)` over round `n−3−m`, minus the table's own `S(n−3, n)`.
/// Zero means the expansion identity holds at `(n, m, q)`.
pub fn theorem5_residual(n: usize, m: usize, q: &PowerSumQuery) -> Result<GaussianRational> {
    if n < 4 {
        return Err(Error::InvalidIndex(format!("expansion identity is stated for n >= 4, got {n}")));
    }
    let table = s_table(n, q)?;
    expansion_residual(&table, n, m)
}

pub(crate) fn expansion_residual(table: &STable, n: usize, m: usize) -> Result<GaussianRational> {
    Ok(&expansion_sum(table, n, m)? - table.entry(n - 3, n)?)
}

/// Closed form for `L_{p,t}(a,d)`, `n = p + 1`, fully expanded over the base row:
///
/// ```text
/// (1/(n·d))·Σ_{i=0}^{n−3} C(n−3,i)·(d/2)^i·n!/(n−i)!·(−1)^i·S(0, n−i)
/// ```
///
/// Evaluated as written. Its agreement with the true sum is a measured property, not
/// a precondition; no check against the oracle happens here.
pub fn closed_form_l(q: &PowerSumQuery) -> Result<GaussianRational> {
    let n = require_power_at_least_two(q.p)?;
    q.require_nonzero_step()?;
    let diffs = Differences::new(q, n);
    let base = |j| s_base_checked(j, q, &diffs);
    let sum = closed_sum(q, n, false, base)?;
    sum.checked_div(&q.d.scale(&int(n as u64)))
}

/// The same closed form, normalized with `1/(i!(n−i)!(n−3−i)!)` weights and solved for the sum:
///
/// ```text
/// L = ((n−1)!(n−3)!/d)·Σ_{i=0}^{n−3} (d/2)^i·(−1)^i·S(0, n−i) / (i!(n−i)!(n−3−i)!)
/// ```
pub fn corollary_closed_form_l(q: &PowerSumQuery) -> Result<GaussianRational> {
    let n = require_power_at_least_two(q.p)?;
    q.require_nonzero_step()?;
    let diffs = Differences::new(q, n);
    let half_d = q.d.div_real(&int(2));
    let mut acc = GaussianRational::zero();
    let mut half_d_pow = GaussianRational::one();
    for i in 0..=(n - 3) {
        let weight = Rational::new(1, 1)
            .expect("nonzero")
            .checked_div(&int(factorial(i as u64) * factorial((n - i) as u64) * factorial((n - 3 - i) as u64)))?;
        let term = (&half_d_pow * &s_base_checked(n - i, q, &diffs)?).scale(&weight);
        if i % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        half_d_pow = &half_d_pow * &half_d;
    }
    let scale = int(factorial(n as u64 - 1) * factorial(n as u64 - 3));
    acc.scale(&scale).checked_div(&q.d)
}

/// Closed form for the alternating sum `T_{p,t}(a,d)`, `n = p + 1`, as printed:
///
/// ```text
/// (1/(n·d))·Σ_{i=0}^{n−3} C(n−3,i)·(d/2)^i·n!/(n−i)!·(−1)^{i+1}·S̃(n−i)
/// ```
///
/// with `S̃` from [`s_base_alternating`]. Returned verbatim for the audit to judge.
pub fn closed_form_t(q: &PowerSumQuery) -> Result<GaussianRational> {
    let n = require_power_at_least_two(q.p)?;
    q.require_nonzero_step()?;
    let sum = closed_sum(q, n, true, |j| s_base_alternating(j, q))?;
    sum.checked_div(&q.d.scale(&int(n as u64)))
}

fn closed_sum(
    q: &PowerSumQuery,
    n: usize,
    flip: bool,
    base: impl Fn(usize) -> Result<GaussianRational>,
) -> Result<GaussianRational> {
    let m = n - 3;
    let half_d = q.d.div_real(&int(2));
    let mut acc = GaussianRational::zero();
    let mut half_d_pow = GaussianRational::one();
    for i in 0..=m {
        let coeff = int(binomial(m as u64, i as i64) * falling_factorial(n as u64, i as u64)?);
        let term = (&half_d_pow * &base(n - i)?).scale(&coeff);
        if (i % 2 == 0) != flip {
            acc += &term;
        } else {
            acc -= &term;
        }
        half_d_pow = &half_d_pow * &half_d;
    }
    Ok(acc)
}
