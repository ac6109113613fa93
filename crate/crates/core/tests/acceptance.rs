//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crookpar::catalog::catalog_build_default;
use crookpar::codes::{
    audit_partition, compare_parallelisms, enumerate_hamming, enumerate_preparata,
    format_codewords, min_distance, partition_by_code, partition_parallelism, TranslateLabel,
};
use crookpar::coloring::{
    build_parallelism, hyperplane_image, intersecting_lines_in_h, line_color, span_rank,
    zero_only_on_degenerate_pairs,
};
use crookpar::equivalence::{
    linear_transform, search_equivalence, verify_parallelism_witness, verify_witness,
    witness_from_linear, SearchOutcome, DEFAULT_SEARCH_BUDGET,
};
use crookpar::formats::parallelism_to_json;
use crookpar::geometry::{all_hyperplanes, all_lines, hyperplane_line_count, verify_parallelism};
use crookpar::relaxed::{relaxed_scan, summarize};
use crookpar::vbf::is_crooked;
use crookpar::{BinMatrix, CrookedMethod, FamilySpec, FieldCtx, Vbf};

type Check = Result<String, String>;

fn spec(s: &str) -> Vbf {
    let spec: FamilySpec = s.parse().expect("valid spec");
    catalog_build_default(&spec).expect("catalog function")
}

fn power(n: u32, e: u64) -> Vbf {
    Vbf::power(FieldCtx::with_default_modulus(n).unwrap(), e)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed <= limit,
        format!("took {:.2?}, limit {:.0?}", elapsed, limit),
    )
}

fn on_threads<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(job)
}

fn check_parallelism_shape(f: &Vbf, lines: usize, spreads: usize, per: usize) -> Result<String, String> {
    let n = f.n();
    let par = build_parallelism(f).map_err(|e| e.to_string())?;
    ensure(verify_parallelism(&par, n), "verification failed")?;
    ensure(par.line_count() == lines, format!("{} lines", par.line_count()))?;
    ensure(par.classes.len() == spreads, format!("{} spreads", par.classes.len()))?;
    ensure(
        par.classes.iter().all(|c| c.lines.len() == per),
        "uneven spread sizes",
    )?;
    Ok(parallelism_to_json(&par, f.ctx().modulus()))
}

fn crit1() -> Check {
    let start = Instant::now();
    for (n, t) in [(3, 1), (5, 1), (5, 2), (7, 1), (7, 3), (9, 1), (9, 2)] {
        let f = spec(&format!("gold:{t}:{n}"));
        for m in [CrookedMethod::Definition, CrookedMethod::Hyperplane] {
            let ok = is_crooked(&f, m).map_err(|e| e.to_string())?;
            ensure(ok, format!("gold:{t}:{n} not crooked by {m:?}"))?;
        }
    }
    // Agreement on every power map and a few non-crooked tables.
    let mut compared = 0;
    for n in [3, 5] {
        let ctx = FieldCtx::with_default_modulus(n).unwrap();
        let mut fs: Vec<Vbf> = (1..(1u64 << n) - 1).map(|e| Vbf::power(ctx, e)).collect();
        fs.push(Vbf::from_fn(ctx, |x| ctx.mul(x, x) ^ x));
        fs.push(Vbf::from_fn(ctx, |x| ctx.pow(x, 3) ^ ctx.pow(x, 5)));
        for f in &fs {
            let d = is_crooked(f, CrookedMethod::Definition).map_err(|e| e.to_string())?;
            let h = is_crooked(f, CrookedMethod::Hyperplane).map_err(|e| e.to_string())?;
            ensure(d == h, format!("methods disagree at n = {n}"))?;
            compared += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("7 gold functions crooked, {compared} agreements, {:.2?}", start.elapsed()))
}

fn crit2() -> Check {
    let start = Instant::now();
    check_parallelism_shape(&power(3, 3), 35, 7, 5)?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("35 lines, 7 spreads of 5, {:.2?}", start.elapsed()))
}

fn crit3() -> Check {
    let start = Instant::now();
    let f = spec("trivariate:3:1");
    check_parallelism_shape(&f, 174_251, 511, 341)?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("174251 lines, 511 spreads of 341, {:.2?}", start.elapsed()))
}

fn crit4() -> Check {
    let start = Instant::now();
    let f = spec("bcl:1:5");
    let ok = is_crooked(&f, CrookedMethod::Hyperplane).map_err(|e| e.to_string())?;
    ensure(ok, "bcl:1:5 reported not crooked")?;
    within(start.elapsed(), Duration::from_secs(15 * 60))?;
    Ok(format!("crooked over F_2^15, {:.2?}", start.elapsed()))
}

/// The partition export used by criterion 13.
fn length_15_partition() -> Result<String, String> {
    let f = power(3, 3);
    let p = enumerate_preparata(&f).map_err(|e| e.to_string())?;
    ensure(p.len() == 256, format!("|P| = {}", p.len()))?;
    let d = min_distance(&p).map_err(|e| e.to_string())?;
    ensure(d == 5, format!("min distance {d}"))?;
    let part = partition_by_code(3, &p).map_err(|e| e.to_string())?;
    ensure(part.shift.is_zero(), "P does not contain zero")?;
    ensure(part.parts.len() == 8, format!("{} parts", part.parts.len()))?;
    let total: usize = part.parts.values().map(Vec::len).sum();
    ensure(
        total == 2048 && enumerate_hamming(3).map_err(|e| e.to_string())?.len() == 2048,
        format!("parts cover {total} words"),
    )?;
    let mut out = String::new();
    for (label, words) in &part.parts {
        ensure(words.len() == 256, format!("part {label} has {} words", words.len()))?;
        let d = min_distance(words).map_err(|e| e.to_string())?;
        ensure(d == 5, format!("part {label} min distance {d}"))?;
        out.push_str(&format!("# {label}\n"));
        out.push_str(&format_codewords(words));
    }
    Ok(out)
}

fn crit5() -> Check {
    let start = Instant::now();
    length_15_partition()?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("8 parts of 256 words, distance 5, {:.2?}", start.elapsed()))
}

fn crit6() -> Check {
    let start = Instant::now();
    let f = power(5, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let report = audit_partition(&f, 10_000, &mut rng).map_err(|e| e.to_string())?;
    let labelled: usize = report.per_label.values().sum();
    ensure(labelled == 10_000, format!("{labelled} words labelled"))?;
    within(start.elapsed(), Duration::from_secs(30))?;
    let base = report.per_label.get(&TranslateLabel::Base).copied().unwrap_or(0);
    Ok(format!(
        "10000 words, {} labels used, {base} in P itself, {:.2?}",
        report.per_label.len(),
        start.elapsed()
    ))
}

fn crit7() -> Check {
    let mut reports = Vec::new();
    for n in [3, 5] {
        let f = power(n, 3);
        let from_codes = partition_parallelism(&f).map_err(|e| e.to_string())?;
        ensure(verify_parallelism(&from_codes, n), format!("partition parallelism at n = {n}"))?;
        let from_cf = build_parallelism(&f).map_err(|e| e.to_string())?;
        reports.push(format!("n={n}: {}", compare_parallelisms(&from_codes, &from_cf)));
    }
    Ok(reports.join("; "))
}

fn crit8() -> Check {
    let mut checked = 0usize;
    for n in [3, 5] {
        ensure(zero_only_on_degenerate_pairs(&power(n, 3)), format!("zero colors at n = {n}"))?;
    }
    for n in [3, 5, 7] {
        let f = power(n, 3);
        for l in all_lines(n) {
            line_color(&f, &l).map_err(|e| e.to_string())?;
            checked += 1;
        }
    }
    for n in [3, 5, 7, 9] {
        let f = power(n, 3);
        let mut images = Vec::new();
        for p in 1..1u32 << n {
            let im = hyperplane_image(&f, p).map_err(|e| e.to_string())?;
            ensure(span_rank(&im, n) == n as usize - 1, format!("image rank at n = {n}"))?;
            images.push(im);
        }
        images.sort();
        images.dedup();
        ensure(images.len() == (1 << n) - 1, format!("repeated image at n = {n}"))?;
    }
    for n in [3u32, 5] {
        let f = power(n, 3);
        let par = build_parallelism(&f).map_err(|e| e.to_string())?;
        let expect = ((1usize << (n + 1)) - 1) / 3 - (1 << (n - 1));
        for class in &par.classes {
            for h in all_hyperplanes(n) {
                ensure(
                    hyperplane_line_count(&class.lines, &h) == expect,
                    format!("spread meets hyperplane wrongly at n = {n}"),
                )?;
            }
        }
        for u in 1..1u32 << n {
            for v in (u + 1)..1u32 << n {
                let (a, b) = intersecting_lines_in_h(&f, u, v)
                    .ok_or_else(|| format!("no lines for colors {u}, {v} at n = {n}"))?;
                ensure(a.meets(&b) && a != b, format!("colors {u}, {v} at n = {n}"))?;
            }
        }
    }
    Ok(format!("{checked} lines colored consistently, zero violations"))
}

fn crit9() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [3u32, 5] {
        let f = power(n, 3);
        for i in 0..1000 {
            let l1 = BinMatrix::random_invertible(n as usize, &mut rng);
            let l2 = BinMatrix::random_invertible(n as usize, &mut rng);
            let g = linear_transform(&f, &l1, &l2);
            let w = witness_from_linear(&l1, &l2).map_err(|e| e.to_string())?;
            ensure(verify_witness(&f, &g, &w), format!("pair {i} at n = {n}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("2000 witnesses verified, {:.2?}", start.elapsed()))
}

fn crit10_11() -> (Check, Check) {
    let run = || -> Result<(String, crookpar::equivalence::Witness), String> {
        let f3 = power(5, 3);
        let p3 = build_parallelism(&f3).map_err(|e| e.to_string())?;
        let limit = Duration::from_secs(30 * 60);

        let start = Instant::now();
        let p5 = build_parallelism(&power(5, 5)).map_err(|e| e.to_string())?;
        let (out, stats) =
            search_equivalence(&p3, &p5, DEFAULT_SEARCH_BUDGET).map_err(|e| e.to_string())?;
        ensure(out == SearchOutcome::Inequivalent, format!("x^3 vs x^5: {out:?}"))?;
        let t_neg = start.elapsed();
        within(t_neg, limit)?;
        let neg_nodes = stats.nodes;

        let start = Instant::now();
        let f17 = power(5, 17);
        let p17 = build_parallelism(&f17).map_err(|e| e.to_string())?;
        let (out, stats) =
            search_equivalence(&p3, &p17, DEFAULT_SEARCH_BUDGET).map_err(|e| e.to_string())?;
        let SearchOutcome::Equivalent(w) = out else {
            return Err(format!("x^3 vs x^17: {out:?}"));
        };
        ensure(verify_parallelism_witness(&p3, &p17, &w), "witness fails on parallelisms")?;
        ensure(verify_witness(&f3, &f17, &w), "witness fails on colorings")?;
        let t_pos = start.elapsed();
        within(t_pos, limit)?;
        Ok((
            format!(
                "x^3/x^5 inequivalent ({neg_nodes} nodes, {t_neg:.2?}); x^3/x^17 witness ({} nodes, {t_pos:.2?})",
                stats.nodes
            ),
            w,
        ))
    };
    match run() {
        Ok((msg, w)) => {
            let c11 = ensure(w.kappa.fixes_h(), "kappa moves the hyperplane")
                .and_then(|_| ensure(w.sigma_is_additive(), "sigma is not additive"))
                .map(|_| "kappa fixes the hyperplane, sigma additive".to_string());
            (Ok(msg), c11)
        }
        Err(e) => (Err(e), Err("no witness from criterion 10".into())),
    }
}

fn crit12() -> Check {
    let start = Instant::now();
    let fs: Vec<(String, Vbf)> = ["inverse:5", "inverse:7", "kasami:2:7", "welch:7"]
        .iter()
        .map(|s| (s.to_string(), spec(s)))
        .collect();
    let reports = relaxed_scan(&fs).map_err(|e| e.to_string())?;
    let sum = summarize(&reports);
    ensure(sum.satisfying_non_quadratic == 0, format!("{sum:?}"))?;
    for r in &reports {
        ensure(
            r.cond_a.is_some() && r.cond_b.is_some() && r.cond_c.is_some(),
            format!("{} skipped a condition", r.id),
        )?;
        ensure(r.consistent(), format!("{} conditions disagree", r.id))?;
    }
    within(start.elapsed(), Duration::from_secs(5 * 60))?;
    Ok(format!("4 functions, none satisfying, all consistent, {:.2?}", start.elapsed()))
}

fn crit13() -> Check {
    let exports = |threads: usize| -> Result<Vec<String>, String> {
        on_threads(threads, || {
            Ok(vec![
                check_parallelism_shape(&power(3, 3), 35, 7, 5)?,
                check_parallelism_shape(&spec("trivariate:3:1"), 174_251, 511, 341)?,
                length_15_partition()?,
            ])
        })
    };
    let one = exports(1)?;
    let eight = exports(8)?;
    for (i, (a, b)) in one.iter().zip(&eight).enumerate() {
        ensure(a == b, format!("export {} differs between 1 and 8 threads", i + 1))?;
    }
    Ok(format!(
        "{} exports identical ({} bytes)",
        one.len(),
        one.iter().map(String::len).sum::<usize>()
    ))
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, Check)> = vec![
        (1, crit1()),
        (2, crit2()),
        (3, crit3()),
        (4, crit4()),
        (5, crit5()),
        (6, crit6()),
        (7, crit7()),
        (8, crit8()),
        (9, crit9()),
    ];
    let (c10, c11) = crit10_11();
    results.push((10, c10));
    results.push((11, c11));
    results.push((12, crit12()));
    results.push((13, crit13()));

    let mut failed = 0;
    for (id, r) in &results {
        match r {
            Ok(msg) => println!("criterion {id:>2}: PASS  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL  {msg}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
