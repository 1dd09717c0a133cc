//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p simconj-cli --test acceptance`.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simconj::baseline::{counterexample_tuple, orbit_partition, sridhar_arclabel, ArcLabel};
use simconj::digraph::verify_conjugator;
use simconj::instances::{generate, random_permutation};
use simconj::ncycle::solve_ncycle;
use simconj::refinement::color_isomorphic;
use simconj::solve::{common_n_cycle, run};
use simconj::word_eval::{eval_lambda, eval_naive, eval_reduced, parse_lambda_word, word_reduce, LambdaBase};
use simconj::{Algorithm, Backend, InstanceKind, InstanceSpec, Letter, PermTuple, SolveOutcome, TreeStrategy, Word};
use simconj_cli::bench::{median, time_solve};
use simconj_cli::commands::cmd_verify;
use simconj_cli::tuple_file::{format_pair, format_permutation};

// criterion 1
const ORACLE_INSTANCES_PER_KIND: usize = 200;
const ORACLE_N: std::ops::RangeInclusive<usize> = 3..=7;
const ORACLE_D: std::ops::RangeInclusive<usize> = 1..=3;
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
// criterion 2
const COUNTEREXAMPLE_BUDGET: Duration = Duration::from_secs(1);
// criterion 3
const WORD_CASES: usize = 1000;
const WORD_MAX_N: usize = 128;
const WORD_MAX_M: usize = 4096;
const WORD_MAX_D: usize = 8;
const WORD_BUDGET: Duration = Duration::from_secs(60);
// criterion 4
const DICTIONARY_C: f64 = 2.0;
// criterion 5
const ITERATION_SIZES: [usize; 5] = [3, 17, 100, 1000, 5000];
const ITERATION_RUNS_PER_SIZE: u64 = 20;
// criterion 6
const SCALING_REPEATS: usize = 5;
const TABLE1_N: usize = 10_000;
const TABLE1_D: usize = 3;
const TABLE2_N: usize = 100_000;
const SCALING_BUDGET: Duration = Duration::from_secs(600);
// criterion 7
const GROWTH_SIZES: [usize; 3] = [50_000, 100_000, 200_000];
// the degree the scaling check uses at n = 100000
const GROWTH_D: usize = 17;
const GROWTH_REPEATS: usize = 5;
const GROWTH_LIMIT: f64 = 3.0;
const GROWTH_BUDGET: Duration = Duration::from_secs(300);
// criterion 8
const CENTRALIZER_CONJUGATES: u64 = 50;
const CENTRALIZER_BUDGET: Duration = Duration::from_secs(5);

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    check(took <= budget, || format!("took {took:.2?}, budget {budget:?}"))
}

fn iteration_bound(n: usize) -> usize {
    n.ilog2() as usize + 1
}

/// Verdicts on the same pair from every applicable solver.
fn all_solvers(a: &PermTuple, b: &PermTuple) -> Result<Vec<(&'static str, SolveOutcome)>, String> {
    let e = |name: &'static str| move |err: simconj::Error| format!("{name}: {err}");
    let mut outs = vec![
        ("oracle", run(Algorithm::Oracle, a, b).map_err(e("oracle"))?),
        ("quadratic", run(Algorithm::Quadratic, a, b).map_err(e("quadratic"))?),
        ("plain", color_isomorphic(a, b, TreeStrategy::Plain, Backend::Naive).map_err(e("plain"))?),
        ("subquadratic", color_isomorphic(a, b, TreeStrategy::Plain, Backend::Reduced).map_err(e("subquadratic"))?),
        ("lambda", color_isomorphic(a, b, TreeStrategy::Lambda, Backend::PowerTable).map_err(e("lambda"))?),
    ];
    if common_n_cycle(a, b).is_some() {
        outs.push(("ncycle", run(Algorithm::Ncycle, a, b).map_err(e("ncycle"))?));
    }
    Ok(outs)
}

fn verify_with_cli(dir: &Path, a: &PermTuple, b: &PermTuple, tau: &simconj::Permutation) -> Result<(), String> {
    let pair = dir.join("pair.txt");
    let witness = dir.join("witness.txt");
    fs::write(&pair, format_pair(a, b)).map_err(|e| e.to_string())?;
    fs::write(&witness, format_permutation(tau) + "\n").map_err(|e| e.to_string())?;
    let mut sink = Vec::new();
    match cmd_verify(&pair, &witness, &mut sink) {
        Ok(0) => Ok(()),
        Ok(code) => Err(format!("verify exited {code}: {}", String::from_utf8_lossy(&sink).trim())),
        Err(e) => Err(format!("verify failed: {e}")),
    }
}

fn criterion_1_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c1e);
    let mut verified = 0;
    let mut ncycle_runs = 0;
    for kind in InstanceKind::ALL {
        for i in 0..ORACLE_INSTANCES_PER_KIND {
            let n = rng.gen_range(ORACLE_N);
            let d = rng.gen_range(ORACLE_D);
            let spec = InstanceSpec::new(n, d, kind, i as u64);
            let inst = generate(&spec).map_err(|e| format!("{spec:?}: {e}"))?;
            let outs = all_solvers(&inst.a, &inst.b).map_err(|e| format!("{spec:?}: {e}"))?;
            let truth = outs[0].1.isomorphic;
            check(truth == kind.is_iso(), || format!("{spec:?}: oracle says {truth}"))?;
            for (name, out) in &outs {
                check(out.isomorphic == truth, || format!("{spec:?}: {name} disagrees with the oracle"))?;
                if *name == "ncycle" {
                    ncycle_runs += 1;
                }
                if let Some(tau) = &out.witness {
                    verify_with_cli(dir.path(), &inst.a, &inst.b, tau).map_err(|e| format!("{spec:?} {name}: {e}"))?;
                    verified += 1;
                }
            }
        }
    }
    within(ORACLE_BUDGET, start)?;
    Ok(format!(
        "{} instances, {verified} witnesses verified through cmd_verify, {ncycle_runs} ncycle runs",
        4 * ORACLE_INSTANCES_PER_KIND
    ))
}

fn criterion_2_counterexample() -> Outcome {
    let start = Instant::now();
    let t = counterexample_tuple();
    let labels = sridhar_arclabel(&t).map_err(|e| e.to_string())?;
    check(labels.len() == 2 && labels.iter().all(|row| row.len() == 12), || "expected 2 x 12 arcs".into())?;
    check(labels[0].iter().all(|&l| l == ArcLabel { alpha: 0, beta: 0 }), || {
        format!("color-1 labels {:?}", labels[0])
    })?;
    check(labels[1].iter().all(|&l| l == ArcLabel { alpha: 2, beta: 0 }), || {
        format!("color-2 labels {:?}", labels[1])
    })?;
    let orbits = orbit_partition(&t).map_err(|e| e.to_string())?.one_based();
    let expected = vec![vec![1, 4, 7, 10], vec![2, 5, 8, 11], vec![3, 6, 9, 12]];
    check(orbits == expected, || format!("orbits {orbits:?}"))?;
    within(COUNTEREXAMPLE_BUDGET, start)?;
    Ok("24 labels exact, orbits {{1,4,7,10},{2,5,8,11},{3,6,9,12}}".into())
}

/// A word whose letters off `base` number at most `max_separators`.
fn lambda_shaped_word<R: Rng>(rng: &mut R, d: usize, base: usize, m: usize, max_separators: usize) -> Word {
    let others: Vec<usize> = (0..d).filter(|&k| k != base).collect();
    let separators = if others.is_empty() { 0 } else { rng.gen_range(0..=max_separators.min(m)) };
    let mut slots: Vec<bool> = (0..m).map(|p| p < separators).collect();
    slots.shuffle(rng);
    slots
        .into_iter()
        .map(|sep| {
            let color = if sep { *others.choose(rng).expect("nonempty") } else { base };
            // mostly one sign per run, so exponents grow large
            if rng.gen_bool(0.85) {
                Letter::plus(color)
            } else {
                Letter::minus(color)
            }
        })
        .collect()
}

/// Largest `nu >= 1` with `alphabet^(2^(nu+1)) <= m`, by repeated squaring.
fn expected_levels(alphabet: usize, m: usize) -> u32 {
    let mut nu = 0;
    // power = alphabet^(2^(nu+2)), the bound for the next level
    let mut power = (alphabet as u128).pow(4);
    while power <= m as u128 {
        nu += 1;
        power = power.saturating_mul(power);
    }
    nu
}

fn criterion_3_and_4_word_evaluation() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e7a);
    let mut lambda_cases = 0;
    let mut reduced_cases = 0;
    let mut bound_failure: Option<String> = None;
    let mut eval_failure: Option<String> = None;
    for case in 0..WORD_CASES {
        let n = rng.gen_range(1..=WORD_MAX_N);
        let d = rng.gen_range(1..=WORD_MAX_D);
        let m = rng.gen_range(0..=WORD_MAX_M);
        let t = PermTuple::new((0..d).map(|_| random_permutation(n, &mut rng)).collect()).expect("same degree");
        let points: Vec<usize> = (0..n).collect();
        let gens = t.signed_generators();
        let alphabet = gens.len();

        let word: Vec<usize> = (0..m).map(|_| rng.gen_range(0..alphabet)).collect();
        let naive: Vec<usize> = points.iter().map(|&p| eval_naive(gens, &word, p)).collect();
        let rw = match word_reduce(gens, &word) {
            Ok(rw) => rw,
            Err(e) => return (Err(format!("case {case}: {e}")), Err("not reached".into())),
        };
        if eval_reduced(&rw, &points) != naive && eval_failure.is_none() {
            eval_failure = Some(format!("case {case}: reduced evaluation differs (n={n}, d={d}, m={m})"));
        }
        if m >= alphabet.pow(4) {
            reduced_cases += 1;
            let nu = expected_levels(alphabet, m);
            let len_bound = m.div_ceil(1 << nu);
            let dict_bound = alphabet.pow(1 << nu) + nu as usize;
            let sqrt_bound = DICTIONARY_C * (m as f64).sqrt();
            let ok = rw.levels() == nu
                && rw.word().len() <= len_bound
                && rw.dictionary().len() <= dict_bound
                && dict_bound as f64 <= sqrt_bound;
            if !ok && bound_failure.is_none() {
                bound_failure = Some(format!(
                    "case {case}: d'={alphabet} m={m} nu={} (expected {nu}) len={} <= {len_bound}? dict={} <= {dict_bound} <= {sqrt_bound:.1}?",
                    rw.levels(),
                    rw.word().len(),
                    rw.dictionary().len()
                ));
            }
        }

        let base = rng.gen_range(0..d);
        let max_separators = rng.gen_range(0..=2 * n);
        let lw_word = lambda_shaped_word(&mut rng, d, base, m, max_separators);
        let base_tables = LambdaBase::new(&t, base).expect("valid color");
        match parse_lambda_word(&lw_word, &base_tables, max_separators) {
            Ok(lw) => {
                lambda_cases += 1;
                let expected: Vec<usize> = points.iter().map(|&p| simconj::digraph::walk_eval(&t, &lw_word, p)).collect();
                if eval_lambda(&lw, &base_tables, &t, &points) != expected && eval_failure.is_none() {
                    eval_failure = Some(format!("case {case}: lambda evaluation differs (n={n}, d={d}, m={m})"));
                }
            }
            Err(e) => {
                if eval_failure.is_none() {
                    eval_failure = Some(format!("case {case}: lambda-shaped word rejected: {e}"));
                }
            }
        }
    }
    let c3 = match eval_failure {
        Some(f) => Err(f),
        None => within(WORD_BUDGET, start)
            .map(|_| format!("{WORD_CASES} cases on all points, {lambda_cases} lambda-shaped")),
    };
    let c4 = match bound_failure {
        Some(f) => Err(f),
        None if reduced_cases == 0 => Err("no case reached m >= d'^4".into()),
        None => Ok(format!("{reduced_cases} reduced cases within length and dictionary bounds")),
    };
    (c3, c4)
}

fn criterion_5_iteration_bound() -> Outcome {
    let mut runs = 0;
    let mut worst = (0, 0);
    for &n in &ITERATION_SIZES {
        for seed in 0..ITERATION_RUNS_PER_SIZE {
            let d = 1 + (seed as usize % 4);
            let kind = InstanceKind::ALL[seed as usize % 4];
            let spec = InstanceSpec::new(n, d, kind, seed);
            let inst = generate(&spec).map_err(|e| format!("{spec:?}: {e}"))?;
            // mix unrelated tuples in so refinement has to split
            let other = generate(&InstanceSpec { seed: seed + 1000, ..spec }).map_err(|e| e.to_string())?;
            for (a, b) in [(&inst.a, &inst.b), (&inst.a, &other.b)] {
                for (strategy, backend) in [
                    (TreeStrategy::Plain, Backend::Naive),
                    (TreeStrategy::Plain, Backend::Reduced),
                    (TreeStrategy::Lambda, Backend::PowerTable),
                ] {
                    let out = color_isomorphic(a, b, strategy, backend).map_err(|e| format!("{spec:?}: {e}"))?;
                    let bound = iteration_bound(a.n());
                    check(out.iterations <= bound, || {
                        format!("{spec:?} {strategy:?}: {} iterations > {bound}", out.iterations)
                    })?;
                    if out.iterations > worst.0 {
                        worst = (out.iterations, a.n());
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} runs, most iterations {} at n={}", worst.0, worst.1))
}

/// Median times of each algorithm over `repeats` instances, solved in
/// alternation so drift hits both alike.
fn median_times(
    n: usize,
    d: usize,
    kind: InstanceKind,
    algs: &[Algorithm],
    repeats: usize,
) -> Result<Vec<u64>, String> {
    let mut times = vec![Vec::new(); algs.len()];
    for seed in 0..repeats as u64 {
        let inst = generate(&InstanceSpec::new(n, d, kind, seed)).map_err(|e| e.to_string())?;
        for (i, &alg) in algs.iter().enumerate() {
            let (out, ns) = time_solve(alg, &inst.a, &inst.b).map_err(|e| format!("{alg}: {e}"))?;
            check(out.isomorphic == kind.is_iso(), || format!("{alg} wrong verdict on {kind} n={n}"))?;
            times[i].push(ns);
        }
    }
    Ok(times.iter_mut().map(|t| median(t)).collect())
}

fn ms(ns: u64) -> String {
    format!("{:.1}ms", ns as f64 / 1e6)
}

fn criterion_6_scaling_trend() -> Outcome {
    let start = Instant::now();
    let log_d = simconj_cli::bench::ceil_log2(TABLE2_N);
    let t1 = median_times(
        TABLE1_N,
        TABLE1_D,
        InstanceKind::IsoTransitive,
        &[Algorithm::Subquadratic, Algorithm::Quadratic],
        SCALING_REPEATS,
    )?;
    let iso = median_times(
        TABLE2_N,
        log_d,
        InstanceKind::IsoNcycle,
        &[Algorithm::Ncycle, Algorithm::Subquadratic],
        SCALING_REPEATS,
    )?;
    let noniso = median_times(
        TABLE2_N,
        log_d,
        InstanceKind::NonisoNcycle,
        &[Algorithm::Ncycle, Algorithm::Subquadratic],
        SCALING_REPEATS,
    )?;
    let summary = format!(
        "n={TABLE1_N}: subquadratic {} vs quadratic {}; n={TABLE2_N} d={log_d} iso: linear {} vs subquadratic {}; noniso: linear {} vs subquadratic {}",
        ms(t1[0]),
        ms(t1[1]),
        ms(iso[0]),
        ms(iso[1]),
        ms(noniso[0]),
        ms(noniso[1])
    );
    check(t1[0] < t1[1], || format!("subquadratic not faster than quadratic: {summary}"))?;
    check(iso[0] < iso[1], || format!("linear not faster on isomorphic pairs: {summary}"))?;
    check(noniso[1] < noniso[0], || format!("subquadratic not faster on non-isomorphic pairs: {summary}"))?;
    within(SCALING_BUDGET, start)?;
    Ok(summary)
}

fn criterion_7_linear_growth() -> Outcome {
    let start = Instant::now();
    let mut medians = Vec::new();
    for &n in &GROWTH_SIZES {
        let mut times = Vec::new();
        for seed in 0..GROWTH_REPEATS as u64 {
            let inst = generate(&InstanceSpec::new(n, GROWTH_D, InstanceKind::IsoNcycle, seed)).map_err(|e| e.to_string())?;
            let j = common_n_cycle(&inst.a, &inst.b).ok_or("no common n-cycle")?;
            let clock = Instant::now();
            let out = solve_ncycle(&inst.a, &inst.b, j).map_err(|e| e.to_string())?;
            times.push(clock.elapsed().as_nanos() as u64);
            check(out.isomorphic, || format!("n={n} seed={seed}: not isomorphic"))?;
        }
        medians.push(median(&mut times));
    }
    let factors: Vec<f64> = medians.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    let summary = format!(
        "medians {} at n={GROWTH_SIZES:?}, d={GROWTH_D}; factors {:.2?}",
        medians.iter().map(|&t| ms(t)).collect::<Vec<_>>().join(", "),
        factors
    );
    check(factors.iter().all(|&f| f <= GROWTH_LIMIT), || format!("growth above {GROWTH_LIMIT}: {summary}"))?;
    within(GROWTH_BUDGET, start)?;
    Ok(summary)
}

fn criterion_8_centralizer_witnesses() -> Outcome {
    let start = Instant::now();
    let a = counterexample_tuple();
    let mut rng = ChaCha8Rng::seed_from_u64(0xf16);
    let algs = [Algorithm::Auto, Algorithm::Quadratic, Algorithm::Plain, Algorithm::Subquadratic, Algorithm::Lambda];
    let mut differing = 0;
    for i in 0..CENTRALIZER_CONJUGATES {
        let tau = random_permutation(a.n(), &mut rng);
        let b = a.conjugate_by(&tau).map_err(|e| e.to_string())?;
        for alg in algs {
            let out = simconj::solve::solve(alg, &a, &b).map_err(|e| format!("instance {i} {alg}: {e}"))?;
            let w = out.witness.ok_or_else(|| format!("instance {i}: {alg} found no witness"))?;
            check(verify_conjugator(&a, &b, &w), || format!("instance {i}: {alg} witness fails"))?;
            if w != tau {
                differing += 1;
            }
        }
    }
    within(CENTRALIZER_BUDGET, start)?;
    Ok(format!(
        "{CENTRALIZER_CONJUGATES} conjugates x {} solvers verified, {differing} witnesses differ from the planted tau",
        algs.len()
    ))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(format!(
            "panicked: {}",
            p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
        )),
    }
}

fn main() -> ExitCode {
    let mut results: Vec<(u8, &str, Outcome, Duration)> = Vec::new();
    let mut timed = |id: u8, name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let r = guarded(f);
        results.push((id, name, r, start.elapsed()));
    };
    timed(1, "oracle equivalence", &criterion_1_oracle_equivalence);
    timed(2, "counterexample reproduction", &criterion_2_counterexample);
    let start = Instant::now();
    let (c3, c4) = match panic::catch_unwind(criterion_3_and_4_word_evaluation) {
        Ok(pair) => pair,
        Err(_) => (Err("panicked".into()), Err("panicked".into())),
    };
    let took = start.elapsed();
    results.push((3, "word-evaluation equivalence", c3, took));
    results.push((4, "word-reduction bounds", c4, took));
    let mut timed = |id: u8, name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let r = guarded(f);
        results.push((id, name, r, start.elapsed()));
    };
    timed(5, "refinement iteration bound", &criterion_5_iteration_bound);
    timed(6, "scaling trend", &criterion_6_scaling_trend);
    timed(7, "linear growth", &criterion_7_linear_growth);
    timed(8, "witnesses under nontrivial centralizer", &criterion_8_centralizer_witnesses);

    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (id, name, r, took) in &results {
        match r {
            Ok(detail) => println!("criterion {id} ({name}): PASS [{took:.2?}] {detail}"),
            Err(reason) => {
                failed += 1;
                println!("criterion {id} ({name}): FAIL [{took:.2?}] {reason}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
