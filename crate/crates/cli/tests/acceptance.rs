//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use ausolab::bounds::{
    bound_f_check, check_dehn_sommerville, check_unimodal, dual_bound, dual_samples, entropy_sum_check,
    hsqrt_inequality_check, maxmin_bound, theorem1_bound,
};
use ausolab::numerics::{binomial, rational, rational_int};
use ausolab::orientations::{auso_from_arcs, dual_stacked_linear_auso, validate, validate_cube_faces};
use ausolab::polytopes::{build_dual_stacked, build_hypercube};
use ausolab::reach::{gamma_brute, gamma_lower_formula, reach_report, t_reach};
use ausolab::walks::{
    expected_visits_exact, monte_carlo, partition_walk, random_edge_walk, reach_skip_size, PivotRule, SkipTally,
    SummaryStats,
};
use ausolab::{Auso, Error, HVector, Rational, RngStream};
use ausolab_cli::{generate, Family};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

const TRIALS: u64 = 100_000;

struct Case {
    label: String,
    auso: Auso,
    exact: Rational,
    stats: SummaryStats,
}

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cases() -> Vec<Case> {
    let mut specs: Vec<(String, Auso)> = Vec::new();
    for seed in 0..20u64 {
        for d in 3..=10 {
            let auso = generate(Family::CubeLinear, d, 0, seed, None).unwrap().auso;
            specs.push((format!("cube-linear d={d} seed={seed}"), auso));
        }
    }
    for d in 1..=12 {
        specs.push((format!("klee-minty d={d}"), generate(Family::KleeMinty, d, 0, 0, None).unwrap().auso));
    }
    specs
        .into_iter()
        .enumerate()
        .map(|(i, (label, auso))| {
            let exact = expected_visits_exact(&auso).unwrap().swap_remove(auso.source());
            let stats = monte_carlo(&auso, auso.source(), PivotRule::RandomEdge, TRIALS, 7_000 + i as u64).unwrap();
            Case { label, auso, exact, stats }
        })
        .collect()
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

fn oracle_agreement(cases: &[Case]) -> Outcome {
    let mut worst = 0.0f64;
    for c in cases {
        let exact = to_f64(&c.exact);
        let diff = (c.stats.mean - exact).abs();
        let tol = 4.0 * c.stats.stderr + 1e-12 * exact;
        check(diff <= tol, || format!("{}: mean {} vs exact {exact}, stderr {}", c.label, c.stats.mean, c.stats.stderr))?;
        if c.stats.stderr > 0.0 {
            worst = worst.max(diff / c.stats.stderr);
        }
    }
    Ok(format!("{} instances, {TRIALS} trials each, worst deviation {worst:.2} stderr", cases.len()))
}

fn theorem1_soundness(cases: &[Case]) -> Outcome {
    for c in cases {
        let b = theorem1_bound(c.auso.vertex_count() as u64, c.auso.dim() as u64).map_err(|e| e.to_string())?;
        check(b.admits(&c.exact), || format!("{}: exact {} exceeds {b}", c.label, c.exact))?;
    }
    Ok(format!("{} instances, 0 violations", cases.len()))
}

/// Max-min program over its basic solutions: all coordinates at a bound except
/// possibly one, which equalizes the two terms of the minimum.
fn maxmin_by_basic_solutions(h: &[u64]) -> Rational {
    let n = rational_int(h.iter().sum::<u64>() as i64);
    let caps: Vec<Rational> = h.iter().map(|&x| rational_int(x as i64)).collect();
    let slope = |k: usize| rational(k as i64 - 1, 4);
    let value = |x: &[Rational]| {
        let a = x.iter().fold(Rational::zero(), |s, v| s + v);
        let b = x.iter().enumerate().fold(n.clone(), |s, (k, v)| s - slope(k) * v);
        a.min(b)
    };
    let m = h.len();
    let mut best = Rational::zero();
    for mask in 0u32..(1 << m) {
        let x: Vec<Rational> =
            (0..m).map(|k| if mask >> k & 1 == 1 { caps[k].clone() } else { Rational::zero() }).collect();
        best = best.max(value(&x));
        for free in 0..m {
            let others = (0..m).filter(|&k| k != free);
            let (sum, tilt) = others.fold((Rational::zero(), Rational::zero()), |(s, t), k| (s + &x[k], t + slope(k) * &x[k]));
            let xf = (&n - sum - tilt) / (rational_int(1) + slope(free));
            if xf >= Rational::zero() && xf <= caps[free] {
                let mut y = x.clone();
                y[free] = xf;
                best = best.max(value(&y));
            }
        }
    }
    best
}

fn chain_soundness(cases: &[Case]) -> Outcome {
    for c in cases {
        let hvec = c.auso.h_vector();
        let maxmin = maxmin_bound(&hvec);
        check(c.exact <= maxmin, || format!("{}: exact {} > maxmin {maxmin}", c.label, c.exact))?;
        for y in dual_samples(c.auso.dim()) {
            let dual = dual_bound(&hvec, &y);
            check(maxmin <= dual, || format!("{}: maxmin {maxmin} > dual({y}) {dual}", c.label))?;
        }
    }
    let mut vectors: Vec<Vec<u64>> = Vec::new();
    for d in 0..=5u32 {
        let len = d as usize + 1;
        for code in 0..4u64.pow(len as u32) {
            let h: Vec<u64> = (0..len).map(|i| code / 4u64.pow(i as u32) % 4).collect();
            if h.iter().sum::<u64>() > 0 {
                vectors.push(h);
            }
        }
    }
    vectors.extend(cases.iter().filter(|c| c.auso.dim() <= 5).map(|c| c.auso.h_vector().0));
    for d in 2..=4 {
        for cuts in 1..=10 {
            let inst = generate(Family::DualStacked, d, cuts, 0, None).map_err(|e| e.to_string())?;
            vectors.push(inst.auso.h_vector().0);
        }
    }
    for h in &vectors {
        let greedy = maxmin_bound(&HVector(h.clone()));
        let oracle = maxmin_by_basic_solutions(h);
        check(greedy == oracle, || format!("h = {h:?}: greedy {greedy} vs oracle {oracle}"))?;
    }
    Ok(format!("{} instances, {} h-vectors against the exact oracle", cases.len(), vectors.len()))
}

fn run_cli(args: &[&str], threads: Option<&str>) -> (i32, Vec<u8>, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ausolab"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("AUSOLAB_THREADS", t);
    }
    let out = cmd.output().expect("spawn ausolab");
    (out.status.code().unwrap_or(-1), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn auso_axioms(cases: &[Case]) -> Outcome {
    let mut faces = 0u64;
    for c in cases.iter().filter(|c| c.auso.dim() <= 10) {
        let report = validate_cube_faces(&c.auso).map_err(|e| e.to_string())?;
        check(report.pass(), || format!("{}: {} violating faces", c.label, report.violating_faces))?;
        faces += report.faces_checked;
    }
    for d in 2..=4 {
        for seed in 0..5 {
            let inst = generate(Family::DualStacked, d, 6, seed, None).map_err(|e| e.to_string())?;
            let report = validate(&inst.auso).map_err(|e| e.to_string())?;
            check(report.pass(), || format!("dual-stacked d={d} seed={seed} fails validation"))?;
        }
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let double_sink = dir.path().join("double_sink.auso");
    std::fs::write(&double_sink, "AUSO v1\nkind=cube d=2 n=4\n0 0\n1 3\n2 2\n3 1\n").unwrap();
    let (code, _, err) = run_cli(&["validate", double_sink.to_str().unwrap()], None);
    check(code == 1 && err.starts_with("error:validation:"), || format!("double sink: exit {code}, stderr {err}"))?;

    let tied = dir.path().join("cyclic.auso");
    std::fs::write(&tied, "AUSO v1\nkind=cube d=2 n=4\n0 0\n1 1\n2 1\n3 2\n").unwrap();
    let (code, _, err) = run_cli(&["validate", tied.to_str().unwrap()], None);
    check(code == 1 && err.starts_with("error:non-generic:"), || format!("tied ranks: exit {code}, stderr {err}"))?;

    let square = build_hypercube(2).unwrap();
    let cycle = auso_from_arcs(square, &[(0, 1), (1, 3), (3, 2), (2, 0)]);
    check(matches!(cycle, Err(Error::Cyclic(_))), || format!("directed 4-cycle: {cycle:?}"))?;
    Ok(format!("{faces} cube faces checked, counterexamples rejected"))
}

fn h_vector_identities(cases: &[Case]) -> Outcome {
    for c in cases {
        let h = c.auso.h_vector();
        let d = c.auso.dim() as u64;
        check(check_dehn_sommerville(&h) && check_unimodal(&h), || format!("{}: h = {:?}", c.label, h.0))?;
        for k in 0..=d {
            check(BigInt::from(h.get(k as usize)) == BigInt::from(binomial(d, k)), || {
                format!("{}: h_{k} = {} is not C({d},{k})", c.label, h.get(k as usize))
            })?;
        }
    }
    let mut stacked = 0;
    for d in 2..=4usize {
        for cuts in 1..=10 {
            for seed in 0..5 {
                let (graph, geometry) = build_dual_stacked(d, cuts, seed).map_err(|e| e.to_string())?;
                let (auso, _) = dual_stacked_linear_auso(&graph, &geometry, RngStream::new(seed, 1)).map_err(|e| e.to_string())?;
                let h = auso.h_vector();
                let n = auso.vertex_count() as u64;
                check(check_dehn_sommerville(&h) && check_unimodal(&h), || format!("d={d} cuts={cuts}: {:?}", h.0))?;
                for k in 1..d {
                    check(h.get(k) * (d as u64 - 1) == n - 2, || format!("d={d} cuts={cuts} seed={seed}: h = {:?}", h.0))?;
                }
                stacked += 1;
            }
        }
    }
    Ok(format!("{} cube and {stacked} dual-stacked instances", cases.len()))
}

fn skip_distribution(cases: &[Case]) -> Outcome {
    let max_d = cases.iter().map(|c| c.auso.dim()).max().unwrap();
    let mut pooled = vec![SkipTally::default(); max_d + 1];
    let mut violations = 0;
    for c in cases {
        violations += c.stats.disjointness_violations;
        for (k, t) in c.stats.skip_tally.iter().enumerate() {
            pooled[k].visits += t.visits;
            pooled[k].skipped_half += t.skipped_half;
        }
    }
    check(violations == 0, || format!("{violations} traces with overlapping skipped sets"))?;
    let mut tested = Vec::new();
    for (k, t) in pooled.iter().enumerate().filter(|(_, t)| t.visits >= 10_000) {
        let n = t.visits as f64;
        let p = t.skipped_half as f64 / n;
        let sigma = (0.25 / n).sqrt();
        check(p >= 0.5 - 5.0 * sigma, || format!("k={k}: P = {p:.5} over {n} visits"))?;
        tested.push(format!("k={k}:{p:.3}"));
    }
    Ok(format!("skipped sets disjoint in all traces; {}", tested.join(" ")))
}

fn reach_lemmas() -> Outcome {
    let mut instances = Vec::new();
    for d in 3..=5 {
        instances.push(generate(Family::KleeMinty, d, 0, 0, None).unwrap().auso);
        for seed in 0..5 {
            instances.push(generate(Family::CubeLinear, d, 0, seed, None).unwrap().auso);
        }
    }
    let (mut checked, mut guarded) = (0, 0);
    for d in 3..=5usize {
        for k in 1..=3usize {
            let g1 = gamma_brute(d, 1, k).map_err(|e| e.to_string())?;
            check(g1 == k as u64, || format!("gamma(d={d}, 1, {k}) = {g1}"))?;
        }
    }
    for auso in &instances {
        let d = auso.dim();
        for t in 2..=3usize {
            for k in 1..=3usize {
                let f = bound_f_check(auso, t, k).map_err(|e| e.to_string())?;
                check(f.ok, || format!("d={d} t={t} k={k}: f {} > {}", f.f_actual, f.f_bound))?;
                let gamma = match gamma_brute(d, t, k) {
                    Ok(g) => g,
                    Err(Error::GuardExceeded { .. } | Error::DimensionTooLarge { .. }) => {
                        guarded += 1;
                        continue;
                    }
                    Err(e) => return Err(e.to_string()),
                };
                let formula = gamma_lower_formula(d, t, k).ceil();
                check(rational_int(gamma as i64) >= formula, || format!("d={d} t={t} k={k}: gamma {gamma} < {formula}"))?;
                let report = reach_report(auso, t, k);
                if let Some(g) = report.g {
                    check(g as u64 >= gamma, || format!("d={d} t={t} k={k}: g {g} < gamma {gamma}"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (instance, t, k) cases, {guarded} beyond the enumeration guard"))
}

fn skip_reach_statistics() -> Outcome {
    let t = 2;
    let picks: [(Family, usize, u64, usize); 5] = [
        (Family::KleeMinty, 5, 0, 1),
        (Family::KleeMinty, 6, 0, 2),
        (Family::KleeMinty, 8, 0, 3),
        (Family::CubeLinear, 6, 1, 2),
        (Family::CubeLinear, 8, 2, 3),
    ];
    let mut lines = Vec::new();
    for (i, &(family, d, seed, k)) in picks.iter().enumerate() {
        let auso = generate(family, d, 0, seed, None).unwrap().auso;
        let report = reach_report(&auso, t, k);
        let g = report.g.ok_or_else(|| format!("{family} d={d} k={k}: no good vertex"))?;
        let v = auso
            .vertices_by_rank()
            .iter()
            .rev()
            .map(|&v| v as usize)
            .find(|&v| report.good[v])
            .unwrap();
        let reach = t_reach(&auso, v, t);
        let hits = (0..TRIALS)
            .filter(|&j| 2 * reach_skip_size(&auso, v, t, &reach, RngStream::new(90 + i as u64, j)) >= g)
            .count();
        let p = hits as f64 / TRIALS as f64;
        let p0 = g as f64 / (2.0 * (d * d) as f64);
        let sigma = (p0 * (1.0 - p0) / TRIALS as f64).sqrt();
        check(p >= p0 - 5.0 * sigma, || format!("{family} d={d} v={v} k={k}: P = {p} < {p0}"))?;
        lines.push(format!("{family}/d{d}/v{v}/k{k}: {p:.3}>={p0:.3}"));
    }

    let mut pooled = 0;
    for (family, d, seed) in [(Family::KleeMinty, 6, 0), (Family::KleeMinty, 8, 0), (Family::CubeLinear, 7, 3)] {
        let auso = generate(family, d, 0, seed, None).unwrap().auso;
        for k in 1..=2 {
            let report = reach_report(&auso, t, k);
            let Some(g) = report.g else { continue };
            let c = g as f64 / (2.0 * (d * d) as f64);
            let runs = 20_000u64;
            let xs: Vec<f64> = (0..runs)
                .map(|j| {
                    let (trace, _) = random_edge_walk(&auso, auso.source(), RngStream::new(500 + d as u64, j));
                    let p = partition_walk(&trace, &auso, t, k, |v| report.good[v], report.g);
                    p.eta as f64 - c * p.n_long as f64
                })
                .collect();
            let mean = xs.iter().sum::<f64>() / runs as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
            let stderr = (var / runs as f64).sqrt();
            check(mean >= -5.0 * stderr, || format!("{family} d={d} k={k}: E[eta - c n] = {mean} (stderr {stderr})"))?;
            pooled += 1;
        }
    }
    Ok(format!("{}; eta inequality on {pooled} partition pools", lines.join(" ")))
}

fn entropy_and_middle_h() -> Outcome {
    for d in 8..=64 {
        let e = entropy_sum_check(d).map_err(|e| e.to_string())?;
        check(e.ok, || format!("entropy estimate fails at d={d}"))?;
    }
    for d in 65..=200 {
        check(hsqrt_inequality_check(d).map_err(|e| e.to_string())?, || format!("middle h-vector estimate fails at d={d}"))?;
    }
    Ok("entropy d=8..64, middle h-vector estimate d=65..200".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let (km, lin, ds, cfg) = (p("km.auso"), p("lin.auso"), p("ds.auso"), p("sweep.cfg"));
    std::fs::write(
        &cfg,
        "family = klee-minty\nd = 3..7\nrules = random-edge, random-facet, greatest-decrease\ntrials = 20000\nseed = 11\nt = 2\nk = 1,2\n",
    )
    .unwrap();
    let setup: [&[&str]; 3] = [
        &["gen", "--family", "km", "--d", "7", "-o", &km],
        &["gen", "--family", "cube-linear", "--d", "8", "--seed", "4", "-o", &lin],
        &["gen", "--family", "dual-stacked", "--d", "4", "--cuts", "8", "--seed", "2", "-o", &ds],
    ];
    for args in setup {
        let (code, _, err) = run_cli(args, None);
        check(code == 0, || format!("{args:?}: {err}"))?;
    }
    let invocations: Vec<Vec<&str>> = vec![
        vec!["walk", "--auso", &km, "--rule", "random-edge", "--trials", "1", "--seed", "5"],
        vec!["walk", "--auso", &km, "--rule", "random-edge", "--trials", "50000", "--seed", "5", "--start", "random"],
        vec!["walk", "--auso", &lin, "--rule", "random-facet", "--trials", "50000", "--seed", "9"],
        vec!["walk", "--auso", &ds, "--rule", "random-edge", "--trials", "50000", "--seed", "3"],
        vec!["exact", "--auso", &km, "--start", "source", "--mode", "exact"],
        vec!["bounds", "--auso", &lin, "--t", "2", "--k", "1,2"],
        vec!["gen", "--family", "cube-linear", "--d", "6", "--seed", "77"],
        vec!["experiment", &cfg],
    ];
    for args in &invocations {
        let reference = run_cli(args, Some("1"));
        check(reference.0 == 0, || format!("{args:?} failed: {}", reference.2))?;
        for threads in ["1", "2", "4", "8"] {
            let again = run_cli(args, Some(threads));
            check(again.1 == reference.1 && again.0 == reference.0, || {
                format!("{args:?} differs with AUSOLAB_THREADS={threads}")
            })?;
        }
        let unset = run_cli(args, None);
        check(unset.1 == reference.1, || format!("{args:?} differs with the default pool"))?;
    }
    Ok(format!("{} invocations byte-identical across 1, 2, 4, 8 threads and the default", invocations.len()))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cases = cases();
    println!("acceptance: built {} instances in {:.1}s", cases.len(), started.elapsed().as_secs_f64());

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 oracle agreement", Box::new(|| oracle_agreement(&cases))),
        ("2 13n/sqrt(d) soundness", Box::new(|| theorem1_soundness(&cases))),
        ("3 maxmin/dual chain", Box::new(|| chain_soundness(&cases))),
        ("4 AUSO axioms", Box::new(|| auso_axioms(&cases))),
        ("5 h-vector identities", Box::new(|| h_vector_identities(&cases))),
        ("6 skip distribution", Box::new(|| skip_distribution(&cases))),
        ("7 reach lemmas", Box::new(reach_lemmas)),
        ("8 skip-reach statistics", Box::new(skip_reach_statistics)),
        ("9 entropy and middle h-vector", Box::new(entropy_and_middle_h)),
        ("10 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let t0 = Instant::now();
        let outcome = run();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why}) [{secs:.1}s]");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
