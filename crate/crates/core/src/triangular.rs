//! Lower-triangular systems linking the power sums `L_{0..k,t}` (or `T_{0..k,t}`) to
//! differences of `(k+1)`-th powers, and their exact solution.
//!
//! Row `k` of the plain system reads
//!
//! ```text
//! Σ_{j=0}^{k} C(k+1, j)·d^{k+1−j}·L_{j,t}(a,d) = (a + t·d)^{k+1} − a^{k+1}
//! ```
//!
//! which is the telescoped binomial expansion of `(x + d)^{k+1} − x^{k+1}`. The
//! alternating system inserts `(−1)^j` into the coefficients and uses the
//! right-hand side `(−1)^k[(a + t·d − d)^{k+1} − (a − d)^{k+1}]` as printed; whether
//! that system's solution matches the true alternating sums is left to the audit.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numerics::{GaussianRational, Rational, UniPolynomial};
use crate::series::PowerSumQuery;

/// Which family of sums a system solves for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// Plain sums `L_{j,t}`.
    Plain,
    /// Alternating sums `T_{j,t}`.
    Alternating,
}

/// Square lower-triangular system over ℚ(i). Only the lower triangle is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularSystem<R = GaussianRational> {
    pub kind: SystemKind,
    /// `rows[k][j]` for `j ≤ k`.
    rows: Vec<Vec<GaussianRational>>,
    rhs: Vec<R>,
}

/// Same shape as [`TriangularSystem`], right-hand sides are polynomials in `t`.
pub type SymbolicSystem = TriangularSystem<UniPolynomial>;

impl<R> TriangularSystem<R> {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Coefficient at `(row, col)`; zero above the diagonal.
    pub fn coeff(&self, row: usize, col: usize) -> GaussianRational {
        if col > row {
            GaussianRational::zero()
        } else {
            self.rows[row][col].clone()
        }
    }

    pub fn rhs(&self) -> &[R] {
        &self.rhs
    }

    pub fn diagonal(&self) -> impl Iterator<Item = &GaussianRational> {
        self.rows.iter().enumerate().map(|(k, row)| &row[k])
    }
}

/// Pascal rows `C(k+1, ·)` for `k = 0..=k_max`, each row built from the previous one.
fn pascal_rows(k_max: usize) -> impl Iterator<Item = Vec<BigInt>> {
    let mut row = vec![BigInt::one()];
    (0..=k_max).map(move |_| {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigInt::one());
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(BigInt::one());
        row = next;
        row.clone()
    })
}

fn coefficient_rows(kind: SystemKind, k_max: usize, d: &GaussianRational) -> Vec<Vec<GaussianRational>> {
    let d_pows: Vec<GaussianRational> = std::iter::successors(Some(GaussianRational::one()), |x| Some(x * d))
        .take(k_max + 2)
        .collect();
    pascal_rows(k_max)
        .enumerate()
        .map(|(k, binom)| {
            (0..=k)
                .map(|j| {
                    let c = d_pows[k + 1 - j].scale(&Rational::from_integer(binom[j].clone()));
                    if kind == SystemKind::Alternating && j % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect()
}

/// Builds the system whose rows `0..=k_max` determine the sums of powers `0..=k_max`.
pub fn build_system(kind: SystemKind, k_max: usize, q: &PowerSumQuery) -> Result<TriangularSystem> {
    q.require_nonzero_step()?;
    let rows = coefficient_rows(kind, k_max, &q.d);
    let end = &q.a + &q.d.scale(&Rational::from_integer(q.t));
    let (hi, lo) = match kind {
        SystemKind::Plain => (end, q.a.clone()),
        SystemKind::Alternating => (&end - &q.d, &q.a - &q.d),
    };
    let mut hi_pow = hi.clone();
    let mut lo_pow = lo.clone();
    let mut rhs = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let diff = &hi_pow - &lo_pow;
        rhs.push(if kind == SystemKind::Alternating && k % 2 == 1 { -diff } else { diff });
        hi_pow = &hi_pow * &hi;
        lo_pow = &lo_pow * &lo;
    }
    Ok(TriangularSystem { kind, rows, rhs })
}

/// Builds the system with `t` left symbolic: row `k`'s right-hand side is the
/// polynomial `(a + d·t)^{k+1} − a^{k+1}` (or its alternating analog).
pub fn build_symbolic_system(
    kind: SystemKind,
    k_max: usize,
    a: &GaussianRational,
    d: &GaussianRational,
) -> Result<SymbolicSystem> {
    if d.is_zero() {
        return Err(Error::DegenerateStep);
    }
    let rows = coefficient_rows(kind, k_max, d);
    let base = match kind {
        SystemKind::Plain => a.clone(),
        SystemKind::Alternating => a - d,
    };
    let lin = UniPolynomial::new(vec![base.clone(), d.clone()]);
    let mut lin_pow = lin.clone();
    let mut base_pow = base.clone();
    let mut rhs = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let diff = lin_pow.sub(&UniPolynomial::constant(base_pow.clone()));
        rhs.push(if kind == SystemKind::Alternating && k % 2 == 1 { diff.neg() } else { diff });
        lin_pow = lin_pow.mul(&lin);
        base_pow = &base_pow * &base;
    }
    Ok(TriangularSystem { kind, rows, rhs })
}

/// Exact solution by forward substitution.
pub fn forward_substitute(sys: &TriangularSystem) -> Result<Vec<GaussianRational>> {
    let mut x: Vec<GaussianRational> = Vec::with_capacity(sys.size());
    for (k, row) in sys.rows.iter().enumerate() {
        let pivot = &row[k];
        if pivot.is_zero() {
            return Err(Error::SingularSystem { row: k });
        }
        let mut acc = sys.rhs[k].clone();
        for (c, xj) in row[..k].iter().zip(&x) {
            acc -= &(c * xj);
        }
        x.push(acc.checked_div(pivot)?);
    }
    Ok(x)
}

/// Forward substitution over the polynomial ring. Pivots are scalars, so every
/// division is a scalar scaling.
pub fn forward_substitute_symbolic(sys: &SymbolicSystem) -> Result<Vec<UniPolynomial>> {
    let mut x: Vec<UniPolynomial> = Vec::with_capacity(sys.size());
    for (k, row) in sys.rows.iter().enumerate() {
        let pivot = &row[k];
        if pivot.is_zero() {
            return Err(Error::SingularSystem { row: k });
        }
        let mut acc = sys.rhs[k].clone();
        for (c, xj) in row[..k].iter().zip(&x) {
            acc = acc.sub(&xj.scale(c));
        }
        x.push(acc.scale(&pivot.inv()?));
    }
    Ok(x)
}

/// Faulhaber-type polynomials `P_0..P_{k_max}` with `P_j(t) = L_{j,t}(a,d)` for every `t ≥ 1`.
pub fn solve_symbolic(k_max: usize, a: &GaussianRational, d: &GaussianRational) -> Result<Vec<UniPolynomial>> {
    forward_substitute_symbolic(&build_symbolic_system(SystemKind::Plain, k_max, a, d)?)
}

/// `coeff · x − rhs`, row by row.
pub fn row_residuals(sys: &TriangularSystem, x: &[GaussianRational]) -> Vec<GaussianRational> {
    sys.rows
        .iter()
        .zip(&sys.rhs)
        .map(|(row, rhs)| {
            let lhs: GaussianRational = row.iter().zip(x).map(|(c, xj)| c * xj).sum();
            &lhs - rhs
        })
        .collect()
}

/// Product of the diagonal.
pub fn determinant<R>(sys: &TriangularSystem<R>) -> GaussianRational {
    sys.diagonal().fold(GaussianRational::one(), |acc, x| &acc * x)
}

/// Largest `k_max` accepted by [`cramer_numerator`].
pub const CRAMER_MAX_K: usize = 10;

/// Determinant of the plain system's matrix with its last column replaced by the
/// right-hand side, by cofactor expansion. No elimination is involved.
pub fn cramer_numerator(k_max: usize, q: &PowerSumQuery) -> Result<GaussianRational> {
    if k_max > CRAMER_MAX_K {
        return Err(Error::SizeLimit(format!("cofactor expansion capped at k_max = {CRAMER_MAX_K}, got {k_max}")));
    }
    let sys = build_system(SystemKind::Plain, k_max, q)?;
    let n = sys.size();
    let matrix: Vec<Vec<GaussianRational>> = (0..n)
        .map(|r| (0..n).map(|c| if c == n - 1 { sys.rhs[r].clone() } else { sys.coeff(r, c) }).collect())
        .collect();
    Ok(cofactor_determinant(&matrix))
}

/// Laplace expansion of a square matrix (at most 32 columns), row by row from the top.
///
/// `minors[mask]` is the determinant of the leading rows restricted to the columns in
/// `mask`, expanded along its last row. Minors are memoized by column set and zero
/// minors are dropped, so the cost is `O(n·2^n)` in general and `O(n³)` for the
/// triangular-plus-one-column matrices used here.
pub(crate) fn cofactor_determinant(m: &[Vec<GaussianRational>]) -> GaussianRational {
    let n = m.len();
    let mut minors: HashMap<u32, GaussianRational> = HashMap::from([(0, GaussianRational::one())]);
    for (row, entries) in m.iter().enumerate() {
        let mut next: HashMap<u32, GaussianRational> = HashMap::new();
        for (&mask, minor) in &minors {
            for (col, entry) in entries.iter().enumerate() {
                if mask & (1 << col) != 0 || entry.is_zero() {
                    continue;
                }
                // Entry (row, position) of the (row+1)-square minor has sign (−1)^(row+position).
                let position = (mask & ((1 << col) - 1)).count_ones() as usize;
                let term = entry * minor;
                let slot = next.entry(mask | (1 << col)).or_default();
                if (row + position).is_multiple_of(2) {
                    *slot += &term;
                } else {
                    *slot -= &term;
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        minors = next;
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    minors.remove(&full).unwrap_or_default()
}

/// Streaming forward substitution for the plain system: returns `L_{p,t}(a,d)`
/// without materializing the matrix. Memory is `O(p)` scalars.
///
/// `a` and `d` are first scaled by the least common denominator `M` of their parts,
/// so every intermediate is a Gaussian integer; the result is `L_{p,t}(Ma,Md)/M^p`.
pub fn forward_solve_plain(q: &PowerSumQuery) -> Result<GaussianRational> {
    q.require_nonzero_step()?;
    let m = [&q.a.re, &q.a.im, &q.d.re, &q.d.im].into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let m = Rational::from_integer(m);
    let a = q.a.scale(&m);
    let d = q.d.scale(&m);

    let p = q.p as usize;
    let d_pows: Vec<GaussianRational> =
        std::iter::successors(Some(GaussianRational::one()), |x| Some(x * &d)).take(p + 2).collect();
    let end = &a + &d.scale(&Rational::from_integer(q.t));
    let mut hi_pow = end.clone();
    let mut lo_pow = a.clone();
    let mut x: Vec<GaussianRational> = Vec::with_capacity(p + 1);
    for (k, binom) in pascal_rows(p).enumerate() {
        let mut acc = &hi_pow - &lo_pow;
        for (j, xj) in x.iter().enumerate() {
            let c = d_pows[k + 1 - j].scale(&Rational::from_integer(binom[j].clone()));
            acc -= &(&c * xj);
        }
        let pivot = d_pows[1].scale(&Rational::from_integer(binom[k].clone()));
        x.push(acc.checked_div(&pivot)?);
        hi_pow = &hi_pow * &end;
        lo_pow = &lo_pow * &a;
    }
    let scaled = x.pop().expect("at least one row");
    Ok(scaled.div_real(&m.pow(q.p)))
}
