use std::io::{self, Write};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::numerics::GaussianRational;
use crate::series::PowerSumQuery;
use crate::strategy::{compute, Method};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchScenario {
    pub p: u32,
    pub t: u64,
    pub a: GaussianRational,
    pub d: GaussianRational,
}

impl BenchScenario {
    /// `Σ_{r=1}^{t} r^p`, i.e. `a = d = 1`.
    pub fn integers(p: u32, t: u64) -> Self {
        BenchScenario { p, t, a: GaussianRational::one(), d: GaussianRational::one() }
    }
}

/// Resource caps; scenarios beyond them are refused unless unlocked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchCaps {
    pub max_p: u32,
    pub max_t: u64,
    /// Bound on `p·t` for direct summation.
    pub max_oracle_work: u64,
}

impl Default for BenchCaps {
    fn default() -> Self {
        BenchCaps { max_p: 1000, max_t: 1_000_000, max_oracle_work: 20_000_000 }
    }
}

impl BenchCaps {
    pub fn check(&self, method: Method, s: &BenchScenario) -> Result<()> {
        if s.p > self.max_p {
            return Err(Error::SizeLimit(format!("p = {} exceeds cap {}", s.p, self.max_p)));
        }
        if s.t > self.max_t {
            return Err(Error::SizeLimit(format!("t = {} exceeds cap {}", s.t, self.max_t)));
        }
        let work = (s.p as u64).max(1).saturating_mul(s.t);
        if method == Method::Oracle && work > self.max_oracle_work {
            return Err(Error::SizeLimit(format!("oracle work p*t = {work} exceeds cap {}", self.max_oracle_work)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub scenario: BenchScenario,
    pub reps: usize,
    pub median_ms: f64,
    /// Whether the result equals the scenario's reference value.
    pub matched: bool,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Times each `(method, scenario)` pair over `reps` runs.
///
/// The reference value of a scenario comes from the first exact method in
/// `methods` (in oracle, forward, elim priority). If none is listed, the oracle
/// is run once, untimed, to produce it. `caps = None` disables all caps.
pub fn benchmark(
    methods: &[Method],
    scenarios: &[BenchScenario],
    reps: usize,
    caps: Option<&BenchCaps>,
) -> Result<Vec<BenchRow>> {
    if reps == 0 {
        return Err(Error::InvalidIndex("reps must be at least 1".into()));
    }
    let queries = scenarios
        .iter()
        .map(|s| PowerSumQuery::new(s.a.clone(), s.d.clone(), s.t, s.p))
        .collect::<Result<Vec<_>>>()?;
    for (s, q) in scenarios.iter().zip(&queries) {
        for &m in methods {
            if let Some(caps) = caps {
                caps.check(m, s)?;
            }
            m.validate(q)?;
        }
    }

    let mut rows = Vec::new();
    for (s, q) in scenarios.iter().zip(&queries) {
        let mut results: Vec<(Method, GaussianRational, f64)> = Vec::new();
        for &method in methods {
            let mut times = Vec::with_capacity(reps);
            let mut value = None;
            for _ in 0..reps {
                let start = Instant::now();
                let v = compute(q, method)?;
                times.push(start.elapsed().as_secs_f64() * 1e3);
                value = Some(v);
            }
            results.push((method, value.expect("reps >= 1"), median(times)));
        }
        let reference = [Method::Oracle, Method::Forward, Method::Elim]
            .into_iter()
            .find_map(|m| results.iter().find(|r| r.0 == m).map(|r| r.1.clone()));
        let reference = match reference {
            Some(v) => v,
            None => compute(q, Method::Oracle)?,
        };
        for (method, value, median_ms) in results {
            rows.push(BenchRow { method, scenario: s.clone(), reps, median_ms, matched: value == reference });
        }
    }
    Ok(rows)
}

pub const BENCH_CSV_HEADER: &str = "strategy,p,t,a,d,reps,median_ms,match";

pub fn write_bench_csv(rows: &[BenchRow], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{BENCH_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},\"{}\",\"{}\",{},{:.3},{}",
            r.method, r.scenario.p, r.scenario.t, r.scenario.a, r.scenario.d, r.reps, r.median_ms, r.matched
        )?;
    }
    out.flush()
}
