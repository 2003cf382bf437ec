//! Exact audit of every printed identity over a parameter grid.
//!
//! Each case pairs a *reference* value, always produced by direct summation or a
//! direct definition, with a *claimed* value produced by the formula under test.
//! The residual `claimed − reference` is stored exactly and the verdict is `HOLDS`
//! iff it is zero. Cases whose formula cannot be evaluated get `ERROR` with the
//! error code; grid points below an identity's stated range get `SKIPPED`.
//!
//! All cases carry the top power `p` and the derived index `n = p + 1`. For the
//! recurrence and determinant identities `p` is the top row `k` of the system.

mod bench;
mod grid;
mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bench::{benchmark, write_bench_csv, BenchCaps, BenchRow, BenchScenario, BENCH_CSV_HEADER};
pub use grid::{default_grid, default_samples, Grid};
pub use report::{compare_expected, emit_report, read_expected, ExpectedKey, ReportFormat, Unexpected, CSV_HEADER};

use crate::elimination::{closed_form_l, closed_form_t, expansion_residual, l_from_table, s_table};
use crate::error::{Error, Result};
use crate::numerics::{factorial, GaussianRational, Rational};
use crate::series::{oracle_l, oracle_t, split_t, PowerSumQuery};
use crate::triangular::{build_system, cramer_numerator, determinant, SystemKind};

/// The audited identities, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    /// Binomial recurrence for plain sums, checked on oracle values.
    #[serde(rename = "EQ1_RECURRENCE_L")]
    PlainRecurrence,
    /// Printed recurrence for alternating sums, checked on oracle values.
    #[serde(rename = "EQ2_RECURRENCE_T")]
    AlternatingRecurrence,
    /// `det A = (k+1)!·d^{k+1}` for the plain system.
    #[serde(rename = "THM2_DET")]
    SystemDeterminant,
    /// S-table recurrence re-check plus `S(n−3,n)/(n·d)` against the oracle.
    #[serde(rename = "THM4_STABLE")]
    EliminationTable,
    /// Expansion of `S(n−3,n)` over round `n−3−m`, per `m`.
    #[serde(rename = "THM5_EXPANSION")]
    Expansion,
    /// Closed form for plain sums against the oracle.
    #[serde(rename = "EQ5_CLOSED_L")]
    ClosedPlain,
    /// Closed form for alternating sums against the oracle.
    #[serde(rename = "EQ9_CLOSED_T")]
    ClosedAlternating,
    /// `k!·d^k·S(k−2,k+1)` against the cofactor-expanded Cramer numerator.
    #[serde(rename = "M1_DETERMINANT_BRIDGE")]
    CramerBridge,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::PlainRecurrence,
        IdentityId::AlternatingRecurrence,
        IdentityId::SystemDeterminant,
        IdentityId::EliminationTable,
        IdentityId::Expansion,
        IdentityId::ClosedPlain,
        IdentityId::ClosedAlternating,
        IdentityId::CramerBridge,
    ];

    /// Wire name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::PlainRecurrence => "EQ1_RECURRENCE_L",
            IdentityId::AlternatingRecurrence => "EQ2_RECURRENCE_T",
            IdentityId::SystemDeterminant => "THM2_DET",
            IdentityId::EliminationTable => "THM4_STABLE",
            IdentityId::Expansion => "THM5_EXPANSION",
            IdentityId::ClosedPlain => "EQ5_CLOSED_L",
            IdentityId::ClosedAlternating => "EQ9_CLOSED_T",
            IdentityId::CramerBridge => "M1_DETERMINANT_BRIDGE",
        }
    }

    /// Short selector accepted on the command line.
    pub fn alias(self) -> &'static str {
        self.name().split('_').next().expect("non-empty name")
    }

    /// Smallest `p` at which the identity is stated.
    pub fn min_power(self) -> u32 {
        match self {
            IdentityId::PlainRecurrence | IdentityId::AlternatingRecurrence | IdentityId::SystemDeterminant => 0,
            IdentityId::EliminationTable | IdentityId::ClosedPlain | IdentityId::ClosedAlternating => 2,
            IdentityId::CramerBridge => 2,
            IdentityId::Expansion => 3,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s) || id.alias().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown identity {s:?}") })
    }
}

/// One entry of an identity filter: an identity, optionally restricted to one `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selector {
    pub id: IdentityId,
    pub m: Option<usize>,
}

impl FromStr for Selector {
    type Err = Error;

    /// `EQ1`, `EQ1_RECURRENCE_L`, `THM5:m=1`, …
    fn from_str(s: &str) -> Result<Self> {
        let (name, restriction) = match s.split_once(':') {
            Some((name, rest)) => (name, Some(rest)),
            None => (s, None),
        };
        let id: IdentityId = name.trim().parse()?;
        let m = match restriction {
            None => None,
            Some(r) => {
                let value = r
                    .trim()
                    .strip_prefix("m=")
                    .ok_or_else(|| Error::Parse { pos: name.len() + 1, msg: "expected m=<int>".into() })?;
                if id != IdentityId::Expansion {
                    return Err(Error::Parse { pos: name.len() + 1, msg: format!("{id} takes no m restriction") });
                }
                Some(value.parse().map_err(|_| Error::Parse { pos: name.len() + 3, msg: "expected integer m".into() })?)
            }
        };
        Ok(Selector { id, m })
    }
}

/// Which identities to evaluate. An empty filter selects nothing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityFilter(pub Vec<Selector>);

impl IdentityFilter {
    pub fn all() -> Self {
        IdentityFilter(IdentityId::ALL.into_iter().map(|id| Selector { id, m: None }).collect())
    }

    /// Comma-separated selectors; the empty string yields the empty filter.
    pub fn parse(s: &str) -> Result<Self> {
        s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(str::parse).collect::<Result<Vec<_>>>().map(IdentityFilter)
    }

    fn includes(&self, id: IdentityId, m: Option<usize>) -> bool {
        self.0.iter().any(|s| s.id == id && (s.m.is_none() || m.is_none() || s.m == m))
    }

    fn selects(&self, id: IdentityId) -> bool {
        self.0.iter().any(|s| s.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Holds,
    Fails,
    Error,
    Skipped,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::Error => "ERROR",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

/// Grid coordinates of one case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseParams {
    pub p: u32,
    pub n: u32,
    pub m: Option<usize>,
    pub t: u64,
    /// Index into the grid's scalar samples.
    pub sample: usize,
    pub a: GaussianRational,
    pub d: GaussianRational,
}

/// One evaluated case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditCase {
    pub identity: IdentityId,
    pub params: CaseParams,
    pub reference: Option<GaussianRational>,
    pub claimed: Option<GaussianRational>,
    pub residual: Option<GaussianRational>,
    pub verdict: Verdict,
    /// Error code when `verdict` is `ERROR`.
    pub error: Option<String>,
}

impl AuditCase {
    fn sort_key(&self) -> (IdentityId, u32, Option<usize>, u64, usize) {
        (self.identity, self.params.n, self.params.m, self.params.t, self.params.sample)
    }

    fn evaluated(identity: IdentityId, params: CaseParams, outcome: Result<(GaussianRational, GaussianRational)>) -> Self {
        match outcome {
            Ok((reference, claimed)) => {
                let residual = &claimed - &reference;
                let verdict = if residual.is_zero() { Verdict::Holds } else { Verdict::Fails };
                AuditCase {
                    identity,
                    params,
                    reference: Some(reference),
                    claimed: Some(claimed),
                    residual: Some(residual),
                    verdict,
                    error: None,
                }
            }
            Err(e) => AuditCase {
                identity,
                params,
                reference: None,
                claimed: None,
                residual: None,
                verdict: Verdict::Error,
                error: Some(e.code().to_string()),
            },
        }
    }

    fn skipped(identity: IdentityId, params: CaseParams) -> Self {
        AuditCase { identity, params, reference: None, claimed: None, residual: None, verdict: Verdict::Skipped, error: None }
    }
}

/// Per-identity counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IdentitySummary {
    pub total: usize,
    pub holds: usize,
    pub fails: usize,
    pub errors: usize,
    pub skipped: usize,
    /// Smallest failing `(n, m, t)`, if any case fails.
    pub min_failing: Option<(u32, Option<usize>, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub cases: Vec<AuditCase>,
}

impl AuditReport {
    pub fn summary(&self) -> BTreeMap<IdentityId, IdentitySummary> {
        let mut out: BTreeMap<IdentityId, IdentitySummary> = BTreeMap::new();
        for case in &self.cases {
            let s = out.entry(case.identity).or_default();
            s.total += 1;
            match case.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Fails => {
                    s.fails += 1;
                    let key = (case.params.n, case.params.m, case.params.t);
                    if s.min_failing.is_none_or(|cur| key < cur) {
                        s.min_failing = Some(key);
                    }
                }
                Verdict::Error => s.errors += 1,
                Verdict::Skipped => s.skipped += 1,
            }
        }
        out
    }

    pub fn cases_for(&self, id: IdentityId) -> impl Iterator<Item = &AuditCase> {
        self.cases.iter().filter(move |c| c.identity == id)
    }
}

/// Unevaluated case coordinates.
#[derive(Debug, Clone, Copy)]
struct CaseSpec {
    id: IdentityId,
    p: u32,
    m: Option<usize>,
    t: u64,
    sample: usize,
}

fn plan(grid: &Grid, filter: &IdentityFilter) -> Vec<CaseSpec> {
    let mut specs = Vec::new();
    for id in IdentityId::ALL {
        if !filter.selects(id) {
            continue;
        }
        for p in 0..=grid.p_max {
            let ms: Vec<Option<usize>> = if id == IdentityId::Expansion && p >= id.min_power() {
                let n = p as usize + 1;
                (0..=n - 3).map(Some).filter(|&m| filter.includes(id, m)).collect()
            } else {
                vec![None]
            };
            for m in ms {
                for t in 1..=grid.t_max {
                    for sample in 0..grid.samples.len() {
                        specs.push(CaseSpec { id, p, m, t, sample });
                    }
                }
            }
        }
    }
    specs
}

/// Number of worker threads requested through `POWERSUM_AUDIT_THREADS`, if set.
pub const THREADS_ENV: &str = "POWERSUM_AUDIT_THREADS";

/// Evaluates every selected case. Output order is canonical and independent of scheduling.
pub fn run_audit(grid: &Grid, filter: &IdentityFilter) -> AuditReport {
    let specs = plan(grid, filter);
    let evaluate = || specs.par_iter().map(|spec| evaluate_case(grid, spec)).collect::<Vec<_>>();
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0);
    let mut cases = match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(evaluate),
        None => evaluate(),
    };
    cases.sort_by_key(AuditCase::sort_key);
    AuditReport { cases }
}

fn evaluate_case(grid: &Grid, spec: &CaseSpec) -> AuditCase {
    let (a, d) = grid.samples[spec.sample].clone();
    let params = CaseParams { p: spec.p, n: spec.p + 1, m: spec.m, t: spec.t, sample: spec.sample, a, d };
    if spec.p < spec.id.min_power() {
        return AuditCase::skipped(spec.id, params);
    }
    let q = match PowerSumQuery::new(params.a.clone(), params.d.clone(), spec.t, spec.p) {
        Ok(q) => q,
        Err(e) => return AuditCase::evaluated(spec.id, params, Err(e)),
    };
    let outcome = match spec.id {
        IdentityId::PlainRecurrence => recurrence_case(&q, SystemKind::Plain),
        IdentityId::AlternatingRecurrence => recurrence_case(&q, SystemKind::Alternating),
        IdentityId::SystemDeterminant => determinant_case(&q),
        IdentityId::EliminationTable => table_case(&q),
        IdentityId::Expansion => expansion_case(&q, spec.m.expect("expansion cases carry m")),
        IdentityId::ClosedPlain => closed_form_l(&q).map(|claimed| (oracle_l(&q), claimed)),
        IdentityId::ClosedAlternating => closed_alternating_case(&q),
        IdentityId::CramerBridge => bridge_case(&q),
    };
    AuditCase::evaluated(spec.id, params, outcome)
}

/// Row `k = p` of the recurrence system with oracle sums substituted on the left.
/// Reference: the left-hand side. Claimed: the printed right-hand side.
fn recurrence_case(q: &PowerSumQuery, kind: SystemKind) -> Result<(GaussianRational, GaussianRational)> {
    let k = q.p as usize;
    let sys = build_system(kind, k, q)?;
    let mut lhs = GaussianRational::zero();
    for j in 0..=k {
        let sum = match kind {
            SystemKind::Plain => oracle_l(&q.with_power(j as u32)),
            SystemKind::Alternating => oracle_t(&q.with_power(j as u32)),
        };
        lhs += &(&sys.coeff(k, j) * &sum);
    }
    Ok((lhs, sys.rhs()[k].clone()))
}

fn determinant_case(q: &PowerSumQuery) -> Result<(GaussianRational, GaussianRational)> {
    let k = q.p as u64;
    let sys = build_system(SystemKind::Plain, k as usize, q)?;
    let reference = q.d.pow(k + 1).scale(&Rational::from_integer(factorial(k + 1)));
    Ok((reference, determinant(&sys)))
}

fn table_case(q: &PowerSumQuery) -> Result<(GaussianRational, GaussianRational)> {
    let n = q.p as usize + 1;
    let table = s_table(n, q)?;
    if let Err((m, j)) = table.recheck() {
        return Err(Error::FormMismatch(format!("S({m},{j}) fails the elimination recurrence")));
    }
    Ok((oracle_l(q), l_from_table(&table, n)?))
}

/// Reference: the table's `S(n−3, n)`. Claimed: the expansion over round `n−3−m`.
fn expansion_case(q: &PowerSumQuery, m: usize) -> Result<(GaussianRational, GaussianRational)> {
    let n = q.p as usize + 1;
    let table = s_table(n, q)?;
    let reference = table.get(n - 3, n).cloned().ok_or_else(|| Error::InvalidIndex(format!("S({},{n})", n - 3)))?;
    let residual = expansion_residual(&table, n, m)?;
    let claimed = &reference + &residual;
    Ok((reference, claimed))
}

/// Reference: `oracle_t`, which must agree with the even/odd split before it is used.
fn closed_alternating_case(q: &PowerSumQuery) -> Result<(GaussianRational, GaussianRational)> {
    let reference = oracle_t(q);
    if reference != split_t(q) {
        return Err(Error::FormMismatch("alternating ground truths disagree".into()));
    }
    Ok((reference, closed_form_t(q)?))
}

/// Reference: cofactor expansion. Claimed: `k!·d^k·S(k−2, k+1)` with `k = p`.
fn bridge_case(q: &PowerSumQuery) -> Result<(GaussianRational, GaussianRational)> {
    let k = q.p as usize;
    let reference = cramer_numerator(k, q)?;
    let table = s_table(k + 1, q)?;
    let s = table.get(k - 2, k + 1).ok_or_else(|| Error::InvalidIndex(format!("S({},{})", k - 2, k + 1)))?;
    let claimed = (&q.d.pow(k as u64) * s).scale(&Rational::from_integer(factorial(k as u64)));
    Ok((reference, claimed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> Grid {
        Grid { p_max: 5, t_max: 3, samples: default_samples() }
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("EQ1".parse::<Selector>().unwrap(), Selector { id: IdentityId::PlainRecurrence, m: None });
        assert_eq!("thm5:m=1".parse::<Selector>().unwrap(), Selector { id: IdentityId::Expansion, m: Some(1) });
        assert_eq!("EQ9_CLOSED_T".parse::<Selector>().unwrap().id, IdentityId::ClosedAlternating);
        assert!("EQ1:m=1".parse::<Selector>().is_err());
        assert!("THM5:k=1".parse::<Selector>().is_err());
        assert!("EQ7".parse::<Selector>().is_err());
        assert_eq!(IdentityFilter::parse("").unwrap(), IdentityFilter::default());
        assert_eq!(IdentityFilter::parse("EQ1, M1").unwrap().0.len(), 2);
    }

    #[test]
    fn aliases_are_unique() {
        let mut aliases: Vec<_> = IdentityId::ALL.iter().map(|id| id.alias()).collect();
        aliases.sort();
        aliases.dedup();
        assert_eq!(aliases.len(), IdentityId::ALL.len());
    }

    #[test]
    fn empty_filter_gives_empty_report() {
        assert!(run_audit(&small_grid(), &IdentityFilter::default()).cases.is_empty());
    }

    #[test]
    fn plain_recurrence_holds() {
        let filter = IdentityFilter::parse("EQ1").unwrap();
        let report = run_audit(&small_grid(), &filter);
        assert_eq!(report.cases.len(), 6 * 3 * 8);
        assert!(report.cases.iter().all(|c| c.verdict == Verdict::Holds));
    }

    #[test]
    fn skips_below_stated_range() {
        let grid = Grid { p_max: 2, t_max: 2, samples: default_samples() };
        let report = run_audit(&grid, &IdentityFilter::parse("THM4,EQ5").unwrap());
        for case in &report.cases {
            let expect_skip = case.params.p < 2;
            assert_eq!(case.verdict == Verdict::Skipped, expect_skip, "{case:?}");
        }
    }

    #[test]
    fn closed_plain_holds_at_low_power() {
        let grid = Grid { p_max: 3, t_max: 2, samples: vec![(GaussianRational::from(1), GaussianRational::from(1))] };
        let report = run_audit(&grid, &IdentityFilter::parse("EQ5").unwrap());
        let case = report.cases.iter().find(|c| c.params.p == 3 && c.params.t == 2).unwrap();
        assert_eq!(case.verdict, Verdict::Holds);
        assert_eq!(case.claimed, Some(GaussianRational::from(9)));
        assert_eq!(case.residual, Some(GaussianRational::zero()));
    }

    #[test]
    fn cramer_bridge_errors_beyond_cap() {
        let grid = Grid { p_max: 11, t_max: 1, samples: vec![(GaussianRational::from(1), GaussianRational::from(1))] };
        let report = run_audit(&grid, &IdentityFilter::parse("M1").unwrap());
        let last = report.cases.last().unwrap();
        assert_eq!(last.params.p, 11);
        assert_eq!(last.verdict, Verdict::Error);
        assert_eq!(last.error.as_deref(), Some("SizeLimit"));
        assert!(report.cases.iter().filter(|c| (2..=10).contains(&c.params.p)).all(|c| c.verdict == Verdict::Holds));
    }

    #[test]
    fn summary_counts_match_cases() {
        let report = run_audit(&small_grid(), &IdentityFilter::all());
        let summary = report.summary();
        assert_eq!(summary.len(), IdentityId::ALL.len());
        for (id, s) in &summary {
            assert_eq!(s.total, report.cases_for(*id).count());
            assert_eq!(s.total, s.holds + s.fails + s.errors + s.skipped);
        }
    }

    #[test]
    fn report_is_sorted() {
        let report = run_audit(&small_grid(), &IdentityFilter::all());
        assert!(report.cases.windows(2).all(|w| w[0].sort_key() <= w[1].sort_key()));
    }
}
