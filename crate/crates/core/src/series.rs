//! Power-sum queries and the ground-truth evaluators every other strategy is checked against.
//!
//! Index convention used throughout the crate:
//!
//! | here | meaning                         | triangular systems | elimination (S-table) |
//! |------|---------------------------------|--------------------|-----------------------|
//! | `t`  | number of terms                 | `n`                | `k`                   |
//! | `p`  | power                           | `k` (top row)      | `n − 1`               |
//!
//! So a query asks for `L_{p,t}(a,d) = Σ_{r=0}^{t−1} (a + r·d)^p`, or the alternating
//! `T_{p,t}(a,d) = Σ_{r=0}^{t−1} (−1)^r (a + r·d)^p`. The elimination module works with
//! `n = p + 1`.

use crate::error::{Error, Result};
use crate::numerics::{GaussianRational, Rational};

/// Input record shared by every strategy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSumQuery {
    pub a: GaussianRational,
    pub d: GaussianRational,
    pub t: u64,
    pub p: u32,
    pub alternating: bool,
}

impl PowerSumQuery {
    pub fn new(a: GaussianRational, d: GaussianRational, t: u64, p: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidIndex("term count must be at least 1".into()));
        }
        Ok(PowerSumQuery { a, d, t, p, alternating: false })
    }

    pub fn alternating(mut self, alternating: bool) -> Self {
        self.alternating = alternating;
        self
    }

    pub fn with_power(&self, p: u32) -> Self {
        PowerSumQuery { p, ..self.clone() }
    }

    pub fn with_terms(&self, t: u64) -> Self {
        PowerSumQuery { t, ..self.clone() }
    }

    /// Fails with `DegenerateStep` when `d = 0`; every solver strategy needs a nonzero step.
    pub fn require_nonzero_step(&self) -> Result<()> {
        if self.d.is_zero() {
            Err(Error::DegenerateStep)
        } else {
            Ok(())
        }
    }

    /// `a + r·d`
    pub fn term(&self, r: u64) -> GaussianRational {
        &self.a + &self.d.scale(&Rational::from_integer(r))
    }

    /// `t` as a scalar.
    pub fn t_scalar(&self) -> GaussianRational {
        GaussianRational::from_integer(self.t)
    }
}

/// Plain sum of `count` terms, allowing `count = 0`.
pub(crate) fn raw_sum(a: &GaussianRational, d: &GaussianRational, count: u64, p: u32) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    let mut x = a.clone();
    for _ in 0..count {
        acc += &x.pow(p as u64);
        x = &x + d;
    }
    acc
}

/// `Σ_{r=0}^{t−1} (a + r·d)^p` by direct summation. Accepts `d = 0`; ignores `q.alternating`.
pub fn oracle_l(q: &PowerSumQuery) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for r in 0..q.t {
        acc += &q.term(r).pow(q.p as u64);
    }
    acc
}

/// `Σ_{r=0}^{t−1} (−1)^r (a + r·d)^p` by direct summation. Accepts `d = 0`; ignores `q.alternating`.
pub fn oracle_t(q: &PowerSumQuery) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for r in 0..q.t {
        let x = q.term(r).pow(q.p as u64);
        if r % 2 == 0 {
            acc += &x;
        } else {
            acc -= &x;
        }
    }
    acc
}

/// Ground truth dispatched on `q.alternating`.
pub fn oracle(q: &PowerSumQuery) -> GaussianRational {
    if q.alternating {
        oracle_t(q)
    } else {
        oracle_l(q)
    }
}

/// Closed forms for `p ≤ 2`:
///
/// * `L₀ = t`
/// * `L₁ = t·a + d·t(t−1)/2`
/// * `L₂ = t·a² + a·d·t(t−1) + d²·(t−1)t(2t−1)/6`
pub fn base_l(q: &PowerSumQuery) -> Result<GaussianRational> {
    let t = Rational::from_integer(q.t);
    let one = Rational::one();
    let tm1 = &t - &one;
    match q.p {
        0 => Ok(GaussianRational::real(t)),
        1 => {
            let tri = &(&t * &tm1) / &Rational::from(2);
            Ok(&q.a.scale(&t) + &q.d.scale(&tri))
        }
        2 => {
            let two_t_m1 = &(&t + &t) - &one;
            let squares = &(&(&tm1 * &t) * &two_t_m1) / &Rational::from(6);
            let cross = (&q.a * &q.d).scale(&(&t * &tm1));
            Ok(&(&(&q.a * &q.a).scale(&t) + &cross) + &(&q.d * &q.d).scale(&squares))
        }
        p => Err(Error::UnsupportedPower(format!("base closed form covers p <= 2, got {p}"))),
    }
}

/// Alternating sum from two plain sums over the even- and odd-indexed terms:
/// `T_{p,t}(a,d) = L_{p,⌈t/2⌉}(a,2d) − L_{p,⌊t/2⌋}(a+d,2d)`.
pub fn split_t(q: &PowerSumQuery) -> GaussianRational {
    let two_d = &q.d + &q.d;
    let evens = raw_sum(&q.a, &two_d, q.t.div_ceil(2), q.p);
    let odds = raw_sum(&(&q.a + &q.d), &two_d, q.t / 2, q.p);
    &evens - &odds
}
