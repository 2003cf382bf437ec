//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
//! Every comparison is exact equality; the only tolerances are the wall-clock budgets.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use powersum::audit::{
    default_grid, default_samples, emit_report, run_audit, IdentityFilter, IdentityId, ReportFormat, Verdict,
};
use powersum::elimination::{l_via_elimination, s_table, theorem5_residual};
use powersum::numerics::{binomial, factorial, UniPolynomial};
use powersum::series::{base_l, oracle_l, oracle_t, split_t};
use powersum::strategy::{compute, Method};
use powersum::triangular::{
    build_system, cramer_numerator, determinant, forward_substitute, row_residuals, solve_symbolic, SystemKind,
};
use powersum::{GaussianRational, PowerSumQuery, Rational};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    check(elapsed < budget, || format!("took {:.1}s, budget {:.0}s", elapsed.as_secs_f64(), budget.as_secs_f64()))
}

fn g(s: &str) -> GaussianRational {
    s.parse().expect("literal")
}

fn grid_queries(p_max: u32, t_max: u64) -> Vec<PowerSumQuery> {
    let mut out = Vec::new();
    for (a, d) in default_samples() {
        for t in 1..=t_max {
            for p in 0..=p_max {
                out.push(PowerSumQuery::new(a.clone(), d.clone(), t, p).unwrap());
            }
        }
    }
    out
}

/// Forward substitution and elimination both equal direct summation.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let queries = grid_queries(12, 8);
    for q in &queries {
        let want = oracle_l(q);
        let x = forward_substitute(&build_system(SystemKind::Plain, q.p as usize, q).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        check(x.last() == Some(&want), || format!("forward_substitute differs at {q:?}"))?;
        check(compute(q, Method::Forward).as_ref() == Ok(&want), || format!("streaming forward differs at {q:?}"))?;
        let elim = if q.p >= 2 { l_via_elimination(q) } else { base_l(q) };
        check(elim.as_ref() == Ok(&want), || format!("elimination differs at {q:?}"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("{} queries (p<=12, t<=8, 8 samples), exact, {:.1}s < 60s", queries.len(), elapsed.as_secs_f64()))
}

/// The symbolic generator reproduces the classical sums of the first three powers.
fn classical_fixtures() -> Outcome {
    let t = UniPolynomial::variable();
    let t1 = t.add(&UniPolynomial::constant(g("1")));
    let two_t1 = t.scale(&g("2")).add(&UniPolynomial::constant(g("1")));
    let expected = [
        t.mul(&t1).scale(&g("1/2")),
        t.mul(&t1).mul(&two_t1).scale(&g("1/6")),
        t.pow(2).mul(&t1.pow(2)).scale(&g("1/4")),
    ];
    let polys = solve_symbolic(3, &g("1"), &g("1")).map_err(|e| e.to_string())?;
    for (p, want) in (1..=3).zip(&expected) {
        check(&polys[p] == want, || format!("p={p}: got {}, want {want}", polys[p]))?;
    }
    check(polys[3].eval(&g("4")) == g("100"), || "p=3 at t=4 is not 100".into())?;
    Ok(format!("p=1: {}; p=2: {}; p=3: {}", polys[1], polys[2], polys[3]))
}

/// Determinant of the plain system and the Cramer-numerator bridge to the elimination table.
fn determinant_claims() -> Outcome {
    let mut bridges = 0;
    for (a, d) in default_samples() {
        let q = PowerSumQuery::new(a.clone(), d.clone(), 3, 0).unwrap();
        for k in 0..=12usize {
            let sys = build_system(SystemKind::Plain, k, &q).map_err(|e| e.to_string())?;
            let want = d.pow(k as u64 + 1).scale(&Rational::from_integer(factorial(k as u64 + 1)));
            check(determinant(&sys) == want, || format!("det k={k} a={a} d={d}"))?;
        }
        for t in 1..=8 {
            let q = PowerSumQuery::new(a.clone(), d.clone(), t, 0).unwrap();
            let table = s_table(9, &q).map_err(|e| e.to_string())?;
            for k in 2..=8usize {
                let s = table.get(k - 2, k + 1).ok_or("table entry missing")?;
                let claimed = (&d.pow(k as u64) * s).scale(&Rational::from_integer(factorial(k as u64)));
                let numerator = cramer_numerator(k, &q).map_err(|e| e.to_string())?;
                check(numerator == claimed, || format!("bridge k={k} t={t} a={a} d={d}"))?;
                bridges += 1;
            }
        }
    }
    Ok(format!("det for k<=12, {bridges} bridge cases for 2<=k<=8, exact"))
}

/// Direct sums substituted into every row of the plain system leave zero residual.
fn recurrence_residuals() -> Outcome {
    let mut rows = 0;
    for q in grid_queries(0, 8) {
        let sys = build_system(SystemKind::Plain, 12, &q).map_err(|e| e.to_string())?;
        let x: Vec<_> = (0..=12).map(|p| oracle_l(&q.with_power(p))).collect();
        for (k, r) in row_residuals(&sys, &x).iter().enumerate() {
            check(r.is_zero(), || format!("row {k} residual {r} at {q:?}"))?;
            rows += 1;
        }
    }
    Ok(format!("{rows} rows (k<=12, t<=8, 8 samples), residual exactly 0"))
}

/// The expansion identity holds at its two boundary instances.
fn expansion_boundary() -> Outcome {
    let mut cases = 0;
    for q in grid_queries(0, 8) {
        for n in 4..=12 {
            for m in 0..=1 {
                let r = theorem5_residual(n, m, &q).map_err(|e| e.to_string())?;
                check(r.is_zero(), || format!("n={n} m={m} residual {r} at {q:?}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases (4<=n<=12, m in {{0,1}}), residual exactly 0"))
}

/// Σ_{r=1}^{100} r^300 by forward substitution equals the direct sum.
fn large_exponent() -> Outcome {
    let q = PowerSumQuery::new(g("1"), g("1"), 100, 300).unwrap();
    let start = Instant::now();
    let forward = compute(&q, Method::Forward).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let oracle = oracle_l(&q);
    check(forward == oracle, || "forward differs from direct sum".into())?;
    within(elapsed, Duration::from_secs(120))?;
    Ok(format!("{} digits, exact, {:.2}s < 120s", forward.re.numer().to_string().len(), elapsed.as_secs_f64()))
}

/// All ground-truth routes agree for complex starting points.
fn complex_parameters() -> Outcome {
    let starts = [g("i"), g("1+i"), g("3/2+5/7i")];
    let mut cases = 0;
    for (a, d) in default_samples().into_iter().filter(|(a, _)| starts.contains(a)) {
        let polys = solve_symbolic(12, &a, &d).map_err(|e| e.to_string())?;
        for t in 1..=8 {
            for p in 0..=12u32 {
                let q = PowerSumQuery::new(a.clone(), d.clone(), t, p).unwrap();
                let want = oracle_l(&q);
                for m in [Method::Forward, Method::Elim] {
                    if m.validate(&q).is_ok() {
                        check(compute(&q, m).as_ref() == Ok(&want), || format!("{m} differs at {q:?}"))?;
                    }
                }
                check(polys[p as usize].eval(&GaussianRational::from(t as i64)) == want, || {
                    format!("symbolic differs at {q:?}")
                })?;
                let alt = q.clone().alternating(true);
                let want_t = oracle_t(&alt);
                check(split_t(&alt) == want_t, || format!("split differs at {alt:?}"))?;
                for m in [Method::Forward, Method::Elim] {
                    if m.validate(&alt).is_ok() {
                        check(compute(&alt, m).as_ref() == Ok(&want_t), || format!("alternating {m} differs at {alt:?}"))?;
                    }
                }
                cases += 1;
            }
        }
    }
    check(cases == 3 * 8 * 13, || format!("expected 312 complex cases, ran {cases}"))?;
    Ok(format!("{cases} queries with a in {{i, 1+i, 3/2+5/7i}}, plain and alternating, exact"))
}

/// Full default audit covers every identity, records a verdict per case, and is byte-stable.
fn audit_completeness() -> Outcome {
    let start = Instant::now();
    let run = || {
        let report = run_audit(&default_grid(), &IdentityFilter::all());
        let mut jsonl = Vec::new();
        let mut csv = Vec::new();
        emit_report(&report, ReportFormat::Jsonl, &mut jsonl).map_err(|e| e.to_string())?;
        emit_report(&report, ReportFormat::Csv, &mut csv).map_err(|e| e.to_string())?;
        Ok::<_, String>((report, jsonl, csv))
    };
    let (report, jsonl1, csv1) = run()?;
    let (_, jsonl2, csv2) = run()?;
    let elapsed = start.elapsed();
    check(jsonl1 == jsonl2, || "JSONL reports differ between runs".into())?;
    check(csv1 == csv2, || "CSV reports differ between runs".into())?;
    check(jsonl1.iter().filter(|&&b| b == b'\n').count() == report.cases.len(), || "one line per case".into())?;
    within(elapsed / 2, Duration::from_secs(60))?;

    let summary = report.summary();
    for id in IdentityId::ALL {
        let s = summary.get(&id).ok_or_else(|| format!("{id} missing"))?;
        check(s.holds + s.fails + s.errors + s.skipped == s.total && s.total > 0, || format!("{id} counts"))?;
    }
    let evaluated = |id: IdentityId, pred: &dyn Fn(u32, Option<usize>) -> bool| {
        report.cases_for(id).filter(|c| pred(c.params.n, c.params.m)).filter(|c| c.verdict != Verdict::Skipped).count()
    };
    let measured = [
        ("EQ2", evaluated(IdentityId::AlternatingRecurrence, &|_, _| true)),
        ("THM5 m>=2", evaluated(IdentityId::Expansion, &|_, m| m.is_some_and(|m| m >= 2))),
        ("EQ5 n>=5", evaluated(IdentityId::ClosedPlain, &|n, _| n >= 5)),
        ("EQ9", evaluated(IdentityId::ClosedAlternating, &|_, _| true)),
    ];
    for (name, count) in measured {
        check(count > 0, || format!("no evaluated cases for {name}"))?;
    }
    let fmt = |id: IdentityId| {
        let s = &summary[&id];
        format!("{}={}/{}/{}/{}", id.alias(), s.holds, s.fails, s.errors, s.skipped)
    };
    Ok(format!(
        "{} cases, byte-identical x2, {:.1}s < 60s per run; holds/fails/errors/skipped: {}",
        report.cases.len(),
        elapsed.as_secs_f64() / 2.0,
        IdentityId::ALL.map(fmt).join(" ")
    ))
}

/// Two independent alternating ground truths agree.
fn alternating_ground_truth() -> Outcome {
    let queries = grid_queries(10, 12);
    for q in &queries {
        let q = q.clone().alternating(true);
        check(oracle_t(&q) == split_t(&q), || format!("split differs at {q:?}"))?;
    }
    Ok(format!("{} queries (p<=10, t<=12, 8 samples), exact", queries.len()))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-50i64..=50), rng.gen_range(1i64..=16)).unwrap()
}

fn random_gaussian(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::new(random_rational(rng), random_rational(rng))
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> GaussianRational {
    loop {
        let x = random_gaussian(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Homogeneity, shift, field axioms and Pascal's rule on seeded random inputs.
fn property_suites() -> Outcome {
    const SEED: u64 = 0x5eed_2026;
    const TRIALS: usize = 300;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..TRIALS {
        let (a, d, c) = (random_gaussian(&mut rng), random_nonzero(&mut rng), random_nonzero(&mut rng));
        let (t, p) = (rng.gen_range(1u64..=10), rng.gen_range(0u32..=8));
        let q = PowerSumQuery::new(a.clone(), d.clone(), t, p).unwrap();
        let scaled = PowerSumQuery::new(&c * &a, &c * &d, t, p).unwrap();
        let cp = c.pow(p as u64);
        check(oracle_l(&scaled) == &cp * &oracle_l(&q), || format!("homogeneity at {q:?}, c={c}"))?;
        check(oracle_t(&scaled.clone().alternating(true)) == &cp * &oracle_t(&q.clone().alternating(true)), || {
            format!("alternating homogeneity at {q:?}, c={c}")
        })?;
        let shifted = PowerSumQuery::new(&a + &d, d.clone(), t, p).unwrap();
        let end = &a + &d.scale(&Rational::from_integer(t));
        let want = &(&oracle_l(&q) - &a.pow(p as u64)) + &end.pow(p as u64);
        check(oracle_l(&shifted) == want, || format!("shift at {q:?}"))?;
    }
    for _ in 0..TRIALS {
        let (x, y, z) = (random_gaussian(&mut rng), random_gaussian(&mut rng), random_gaussian(&mut rng));
        check(&(&x + &y) + &z == &x + &(&y + &z), || format!("add assoc {x} {y} {z}"))?;
        check(&(&x * &y) * &z == &x * &(&y * &z), || format!("mul assoc {x} {y} {z}"))?;
        check(&x + &y == &y + &x && &x * &y == &y * &x, || format!("commutativity {x} {y}"))?;
        check(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), || format!("distributivity {x} {y} {z}"))?;
        if !x.is_zero() {
            check(&x * &x.inv().unwrap() == GaussianRational::one(), || format!("inverse {x}"))?;
        }
        let (e1, e2) = (rng.gen_range(0u64..=32), rng.gen_range(0u64..=32));
        check(x.pow(e1 + e2) == &x.pow(e1) * &x.pow(e2), || format!("pow {x} {e1} {e2}"))?;
    }
    for n in 1..=40u64 {
        for j in 0..=n as i64 {
            check(binomial(n, j) == binomial(n - 1, j - 1) + binomial(n - 1, j), || format!("Pascal C({n},{j})"))?;
        }
    }
    Ok(format!("seed {SEED:#x}, {TRIALS} series + {TRIALS} field trials, Pascal n<=40, exact"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("classical fixtures", classical_fixtures),
        ("determinant claims", determinant_claims),
        ("recurrence residuals", recurrence_residuals),
        ("expansion boundary", expansion_boundary),
        ("large exponent", large_exponent),
        ("complex parameters", complex_parameters),
        ("audit completeness", audit_completeness),
        ("alternating ground truth", alternating_ground_truth),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
