//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Expected values come from oracles written here (closed-form and
//! convolution Catalan numbers) or from independent enumeration, never from
//! the code under test.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, RngCore, SeedableRng};

use tricensus::catalan::{check_product_inequality, check_w_recurrence, for_each_size_list};
use tricensus::charvec::{
    bijection_check, greenify, psi_injectivity_check, ray_move_invariance_check, PsiOutcome,
};
use tricensus::enumerate::{brute_force_count, count_full, count_partial, enumerate_partial};
use tricensus::generators::{
    gen_angle_frame, gen_convex, gen_quasi_convex, gen_radial_frame, gen_random, Family, GenSpec,
    SplitMix64,
};
use tricensus::geom::is_general_position;
use tricensus::harness::{
    run_corpus, verify_instance, InstanceVerdict, RunConfig, Source, VerifyOptions,
};
use tricensus::structure::{classify, close_sides};
use tricensus::{catalan, BigCount, PointSet};

const CATALAN_LIMIT: Duration = Duration::from_secs(1);
const CONVEX_LIMIT: Duration = Duration::from_secs(60);
const CHARVEC_LIMIT: Duration = Duration::from_secs(120);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

/// `C(2n, n) / (n + 1)` by a direct product.
fn catalan_closed(n: usize) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for k in 1..=n {
        num *= BigUint::from(n + k);
        den *= BigUint::from(k);
    }
    num / den / BigUint::from(n + 1)
}

/// `c_{n+1} = sum c_i c_{n-i}`.
fn catalan_convolution(max: usize) -> Vec<BigUint> {
    let mut c = vec![BigUint::one()];
    for n in 0..max {
        let next = (0..=n).map(|i| &c[i] * &c[n - i]).sum();
        c.push(next);
    }
    c
}

fn w_oracle(n: usize) -> BigCount {
    BigCount(catalan_convolution(n)[n - 2].clone())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let first: Vec<String> = (0..=5).map(|n| catalan(n).to_string()).collect();
    let listed = first == ["1", "1", "2", "5", "14", "42"];
    let conv = catalan_convolution(30);
    let agree = (0..=30).all(|n| catalan(n).0 == conv[n] && conv[n] == catalan_closed(n));
    let elapsed = start.elapsed();
    outcome(
        listed && agree && elapsed < CATALAN_LIMIT,
        format!(
            "c_0..c_5 = {}, n <= 30 agree: {agree}, {elapsed:.2?}",
            first.join(",")
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 3..=12 {
        let m = gen_convex(n, 8, n as u64).expect("convex polygon");
        let expected = w_oracle(n);
        if count_full(&m) != expected || count_partial(&m) != expected {
            bad.push(n);
        }
    }
    let w12 = w_oracle(12);
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && w12 == 16796 && elapsed < CONVEX_LIMIT,
        format!("n = 3..12, W_12 = {w12}, mismatches {bad:?}, {elapsed:.2?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(3);
    let mut discrepancies = 0;
    let total = 240;
    for k in 0..total {
        let n = 3 + k % 7;
        let m = gen_random(n, 16 * n as u64, rng.next_u64()).expect("random set");
        let all: Vec<usize> = (0..n).collect();
        if count_full(&m) != brute_force_count(&m, &all, 10).expect("within cap") {
            discrepancies += 1;
        }
    }
    outcome(
        discrepancies == 0,
        format!("{total} instances with 3..9 points, {discrepancies} discrepancies"),
    )
}

/// Every family instance with at most 10 points: convex 3..10, double
/// circles of 6, 8 and 10 points, and quasi-convex interpolants for every
/// side subset that keeps the total at 10 or below.
fn family_instances() -> Vec<(String, PointSet)> {
    let mut out = Vec::new();
    for n in 3..=10 {
        for seed in 0..3 {
            out.push((
                format!("convex-{n}-{seed}"),
                gen_convex(n, 8, seed).unwrap(),
            ));
        }
    }
    for n in [6, 8, 10] {
        for seed in 0..3 {
            out.push((
                format!("double_circle-{n}-{seed}"),
                GenSpec::new(Family::DoubleCircle, n, seed)
                    .generate()
                    .unwrap(),
            ));
        }
    }
    for h in 3..=9usize {
        for mask in 1u32..1 << h {
            let sides: Vec<usize> = (0..h).filter(|&i| mask >> i & 1 == 1).collect();
            if h + sides.len() <= 10 {
                let m = gen_quasi_convex(h, &sides, 64, u64::from(mask) + h as u64).unwrap();
                out.push((format!("quasi_convex-{h}-{mask:b}"), m));
            }
        }
    }
    out
}

fn random_corpus() -> Vec<InstanceVerdict> {
    let mut verdicts = Vec::new();
    for n in 5..=9 {
        let config = RunConfig {
            source: Source::Family {
                family: Family::Random,
                n,
                trials: 110,
                seed: 1000 + n as u64,
                scale: 16,
                sides: None,
            },
            full_suite: false,
            suite_seed: 0,
            options: VerifyOptions::default(),
        };
        verdicts.extend(run_corpus(&config).expect("valid config").verdicts);
    }
    verdicts
}

fn criterion_4(random: &[InstanceVerdict], families: &[InstanceVerdict]) -> Outcome {
    let checked = |v: &[InstanceVerdict]| v.iter().filter(|x| x.checked()).count();
    let violations = random
        .iter()
        .chain(families)
        .filter(|v| v.lower_bound_ok != Some(true))
        .count();
    outcome(
        violations == 0 && checked(random) >= 500,
        format!(
            "{} random instances (n 5..9) and {} family instances (n <= 10), {violations} violations or unchecked",
            checked(random),
            checked(families)
        ),
    )
}

fn criterion_5(random: &[InstanceVerdict], families: &[InstanceVerdict]) -> Outcome {
    let family_bad = families
        .iter()
        .filter(|v| v.quasi_convex != Some(true) || v.partial_count != v.w_n)
        .count();
    let pentagon = PointSet::from_ints(&[(0, 2), (1, 0), (5, 0), (6, 2), (3, 5), (3, 3)]).unwrap();
    let pv = verify_instance("pentagon-center", &pentagon, &VerifyOptions::default());
    let non_qc: Vec<&InstanceVerdict> = random
        .iter()
        .chain(std::iter::once(&pv))
        .filter(|v| v.quasi_convex == Some(false))
        .collect();
    let not_strict = non_qc.iter().filter(|v| v.partial_count <= v.w_n).count();
    outcome(
        family_bad == 0 && non_qc.len() >= 50 && not_strict == 0 && pv.quasi_convex == Some(false),
        format!(
            "{} family instances at W_n, {family_bad} off; {} non-quasi-convex instances, {not_strict} without strict excess",
            families.len(),
            non_qc.len()
        ),
    )
}

/// For a quasi-convex set and an interior point `p` with polygon neighbours
/// `a` (before) and `b` (after): triangulations avoiding `p` number
/// `W_{n-1}`; those using it contain `apb`, and the other triangle on `ap`
/// has an apex `c` splitting the polygon order into a chain from `p` to `c`
/// of `k` points and one from `c` to `a` of `n - k + 1`, so that group
/// should number `W_k W_{n-k+1}`. Summing gives the W recurrence.
fn decomposition_matches(m: &PointSet, order: &[usize], p: usize) -> Result<(), String> {
    let n = m.len();
    let pos = |v: usize| order.iter().position(|&x| x == v).unwrap();
    let i = pos(p);
    let a = order[(i + n - 1) % n];
    let b = order[(i + 1) % n];
    let mut groups = vec![BigCount::zero(); n + 1];
    let mut isolated = BigCount::zero();
    for t in enumerate_partial(m, 10).map_err(|e| e.to_string())? {
        if !t.uses_vertex(p) {
            isolated += &BigCount::one();
            continue;
        }
        // stored triangles keep their orientation, so compare as sets
        let has = |x: usize, y: usize, z: usize| {
            let mut key = [x, y, z];
            key.sort_unstable();
            t.triangles().iter().any(|tri| {
                let mut s = *tri;
                s.sort_unstable();
                s == key
            })
        };
        if !has(a, p, b) {
            return Err(format!("triangle {a} {p} {b} missing"));
        }
        let c = (0..n)
            .find(|&c| c != b && c != a && c != p && has(a, p, c))
            .ok_or_else(|| format!("no second triangle on {a} {p}"))?;
        let k = (pos(c) + n - i) % n + 1;
        groups[k] += &BigCount::one();
    }
    if isolated != w_oracle(n - 1) {
        return Err(format!(
            "{isolated} triangulations avoid {p}, expected W_{}",
            n - 1
        ));
    }
    for (k, got) in groups.iter().enumerate().take(n).skip(3) {
        let expected = &w_oracle(k) * &w_oracle(n - k + 1);
        if *got != expected {
            return Err(format!("apex group k = {k}: {got}, expected {expected}"));
        }
    }
    Ok(())
}

fn criterion_6(instances: &[(String, PointSet)]) -> Outcome {
    let algebraic = (3..=30).all(check_w_recurrence);
    let mut checked = 0;
    let mut failures = Vec::new();
    for (id, m) in instances
        .iter()
        .filter(|(_, m)| m.len() <= 9 && !m.interior().is_empty())
    {
        let order = classify(m)
            .polygon_order
            .expect("family instances are quasi-convex");
        for &p in m.interior() {
            checked += 1;
            if let Err(e) = decomposition_matches(m, &order, p) {
                failures.push(format!("{id} point {p}: {e}"));
            }
        }
    }
    outcome(
        algebraic && failures.is_empty() && checked > 0,
        format!(
            "recurrence n <= 30: {algebraic}; {checked} (instance, interior point) decompositions, {} failed{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = SplitMix64::seed_from_u64(7);
    let frames = 110;
    let mut failed = 0;
    for k in 0..frames {
        let frame = gen_angle_frame(k % 11, rng.next_u64()).expect("angle frame");
        if !bijection_check(&frame).expect("size within limit") {
            failed += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failed == 0 && elapsed < CHARVEC_LIMIT,
        format!("{frames} angle frames with 0..10 points, {failed} failed, {elapsed:.2?}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(8);
    let mut collisions = 0;
    let frames = 120;
    for k in 0..frames {
        let frame = gen_radial_frame(3 + k % 6, rng.next_u64()).expect("radial frame");
        if !matches!(
            psi_injectivity_check(&frame, 10).expect("within cap"),
            PsiOutcome::Injective { .. }
        ) {
            collisions += 1;
        }
    }
    let mut moves = 0;
    let mut changed = 0;
    let move_frames = 100;
    for k in 0..move_frames {
        let frame = gen_radial_frame(3 + k % 5, rng.next_u64()).expect("radial frame");
        let mut done = 0;
        while done < 10 {
            let i = rng.gen_range(0..frame.len() as u64) as usize;
            let t = BigRational::new(
                (1 + rng.gen_range(0..40) as i64).into(),
                (1 + rng.gen_range(0..10) as i64).into(),
            );
            match ray_move_invariance_check(&frame, i, &t) {
                Ok(same) => {
                    done += 1;
                    moves += 1;
                    changed += usize::from(!same);
                }
                Err(_) => continue,
            }
        }
    }
    outcome(
        collisions == 0 && changed == 0,
        format!("{frames} frames with 3..8 points, {collisions} collisions; {moves} ray moves on {move_frames} frames, {changed} changed the image"),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = SplitMix64::seed_from_u64(9);
    let (mut hull_pivots, mut inner_pivots) = (0, 0);
    let mut failures = Vec::new();
    let mut k = 0;
    while hull_pivots + inner_pivots < 120 {
        k += 1;
        let n = 5 + k % 5;
        let m = gen_random(n, 16 * n as u64, rng.next_u64()).expect("random set");
        if m.interior().is_empty() {
            continue;
        }
        let inner = m
            .interior()
            .iter()
            .copied()
            .find(|&p| close_sides(&m, p).is_empty());
        let pivot = inner.unwrap_or(m.hull()[0]);
        let g = match greenify(&m, pivot) {
            Ok(g) => g,
            Err(e) => {
                failures.push(format!("instance {k}: {e}"));
                continue;
            }
        };
        let shape_ok = is_general_position(g.points()).is_ok()
            && match inner {
                Some(a) => g.interior() == [a],
                None => g.is_convex_position(),
            };
        let close_ok = inner.is_none_or(|a| close_sides(&g, a).is_empty());
        let count_ok = count_partial(&g) <= count_partial(&m);
        if !(shape_ok && close_ok && count_ok) {
            failures.push(format!(
                "instance {k}: shape {shape_ok}, closeness {close_ok}, count {count_ok}"
            ));
        }
        if inner.is_some() {
            inner_pivots += 1;
        } else {
            hull_pivots += 1;
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} instances ({hull_pivots} hull pivots, {inner_pivots} interior pivots), {} failures{}",
            hull_pivots + inner_pivots,
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut failed = 0;
    let lists = for_each_size_list(24, |ks| {
        failed += usize::from(!check_product_inequality(ks).holds)
    });
    // compositions of s into parts >= 2 number F(s-1); summed over s <= 24
    let expected: usize = {
        let mut fib = vec![0usize, 1];
        while fib.len() < 24 {
            let next = fib[fib.len() - 1] + fib[fib.len() - 2];
            fib.push(next);
        }
        (2..=24).map(|s| fib[s - 1]).sum()
    };
    outcome(
        failed == 0 && lists == expected,
        format!("{lists} size lists (expected {expected}), {failed} failures"),
    )
}

fn main() {
    let run_start = Instant::now();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut record = |id: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let line = format!(
            "criterion {id:>2} {:<4} {name}: {} [{:.2?}]",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
        println!("{line}");
        results.push((id, name, o));
    };

    record(1, "catalan baseline", &criterion_1);
    record(2, "convex polygons", &criterion_2);
    record(3, "oracle equivalence", &criterion_3);

    let families = family_instances();
    let family_verdicts: Vec<InstanceVerdict> = families
        .iter()
        .map(|(id, m)| verify_instance(id, m, &VerifyOptions::default()))
        .collect();
    let random = random_corpus();
    record(4, "lower bound", &|| criterion_4(&random, &family_verdicts));
    record(5, "equality class", &|| {
        criterion_5(&random, &family_verdicts)
    });
    record(6, "W recurrence via geometry", &|| criterion_6(&families));
    record(7, "charvec bijection", &criterion_7);
    record(8, "psi suite", &criterion_8);
    record(9, "greenify suite", &criterion_9);
    record(10, "product inequality", &criterion_10);

    let failed: Vec<usize> = results
        .iter()
        .filter(|(_, _, o)| !o.ok)
        .map(|(id, _, _)| *id)
        .collect();
    println!(
        "acceptance: {}/{} criteria passed in {:.2?}",
        results.len() - failed.len(),
        results.len(),
        run_start.elapsed()
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
