//! Acceptance suite. Runs every criterion in sequence, prints one PASS/FAIL
//! line per criterion and exits non-zero if any failed.

use std::alloc::{GlobalAlloc, Layout, System};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::RngExt;

use steiner_dom::audit::{verify, DiscrepancyCertificate, VerifyConfig, VerifyMode, VerifySummary};
use steiner_dom::bench::{per_vertex_ratios, time_algorithm, BenchAlgorithm};
use steiner_dom::exact_oracles::{
    exact_gamma_bruteforce, exact_gamma_dp, exact_gamma_st, exact_steiner_number,
    is_dominating_set, is_steiner_set, minimum_steiner_sets,
};
use steiner_dom::forest_domination::forest_domination;
use steiner_dom::steiner_domination::{formula_gamma_st, steiner_domination};
use steiner_dom::tree_corpus::{
    enumerate_parent_arrays, gen, rng, EnumerationMode, Family, GeneratorSpec,
};
use steiner_dom::tree_model::{build_adjacency, leaf_set, ParentArray};

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = unsafe { System.alloc(layout) };
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

/// Bytes allocated at the high-water mark of `f`, above what was live before.
fn peak_bytes<T>(f: impl FnOnce() -> T) -> (T, usize) {
    let base = CURRENT.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let out = f();
    (out, PEAK.load(Ordering::Relaxed) - base)
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prufer_tree(n: usize, seed: u64) -> ParentArray {
    gen(&GeneratorSpec::new(Family::Prufer, n, seed)).unwrap()
}

// 1. forest domination equals both oracles on every forest with n <= 8.
fn forest_exhaustive() -> Outcome {
    let mut total = 0;
    for n in 1..=8 {
        for p in enumerate_parent_arrays(n, EnumerationMode::Forests).map_err(|e| e.to_string())? {
            let f = build_adjacency(&p);
            let d = forest_domination(&p);
            let (bf, _) = exact_gamma_bruteforce(&f).map_err(|e| e.to_string())?;
            let dp = exact_gamma_dp(&f);
            check(d.len() == bf && bf == dp, || {
                format!("{p:?}: |D|={} bf={bf} dp={dp}", d.len())
            })?;
            check(is_dominating_set(&f, &d).unwrap(), || {
                format!("{p:?}: D does not dominate")
            })?;
            total += 1;
        }
    }
    check(total == 46_233, || {
        format!("expected 46233 forests, saw {total}")
    })?;
    Ok(format!("{total} forests, zero mismatches"))
}

// 2. forest domination equals the DP on 10,000 Prüfer trees, n in [2, 60].
fn forest_randomized() -> Outcome {
    let mut r = rng(11);
    for i in 0..10_000u64 {
        let n = r.random_range(2..=60);
        let p = prufer_tree(n, 1_000_000 + i);
        let got = forest_domination(&p).len();
        let dp = exact_gamma_dp(&build_adjacency(&p));
        check(got == dp, || format!("{p:?}: |D|={got} dp={dp}"))?;
    }
    Ok("10000 trees, zero mismatches".into())
}

// 3. the Steiner construction is valid and sized |L| + γ(H) on 10,000
// Prüfer trees with n in [2, 300].
fn steiner_validity() -> Outcome {
    let mut r = rng(12);
    for i in 0..10_000u64 {
        let n = r.random_range(2..=300);
        let p = prufer_tree(n, 2_000_000 + i);
        let t = build_adjacency(&p);
        let res = steiner_domination(&p).map_err(|e| e.to_string())?;
        let leaves = leaf_set(&t);
        check(leaves.is_subset(&res.sd), || format!("{p:?}: leaf missing"))?;
        check(is_steiner_set(&t, &res.sd).unwrap(), || {
            format!("{p:?}: not Steiner")
        })?;
        check(is_dominating_set(&t, &res.sd).unwrap(), || {
            format!("{p:?}: not dominating")
        })?;
        let gamma_h = exact_gamma_dp(&build_adjacency(&res.h.nparent));
        check(res.size == leaves.len() + gamma_h, || {
            format!("{p:?}: size {} != {} + {gamma_h}", res.size, leaves.len())
        })?;
    }
    Ok("10000 trees valid".into())
}

fn audit_run(config: VerifyConfig) -> Result<VerifySummary, String> {
    let summary = verify(&config).map_err(|e| e.to_string())?;
    let dir = config.cert_dir.as_ref().unwrap();
    let stems = summary.certificates.iter().cloned().chain(
        summary
            .fixtures
            .iter()
            .filter_map(|f| f.certificate.clone()),
    );
    for stem in stems {
        DiscrepancyCertificate::load(
            &dir.join(format!("{stem}.par")),
            &dir.join(format!("{stem}.json")),
        )
        .map_err(|e| format!("certificate {stem}: {e}"))?;
    }
    check(summary.validity_failures == 0, || {
        format!("{:?}", summary.failures)
    })?;
    check(summary.below_oracle == 0, || {
        "construction smaller than the optimum".into()
    })?;
    Ok(summary)
}

// 4. formula vs exact γ_st: exhaustive n <= 9, 2,000 random n <= 16 with
// the unpruned oracle and 2,000 random n <= 24 with the pruned one.
// Discrepancies are findings. Only invalid certificates or a construction
// below the optimum fail.
fn theorem_audit() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [
        ("exhaustive<=9", VerifyMode::Exhaustive, 9, 0, false),
        ("random<=16", VerifyMode::Random, 16, 2000, false),
        ("random<=24/pruned", VerifyMode::Random, 24, 2000, true),
    ];
    let mut parts = Vec::new();
    for (name, mode, max_n, count, prune) in runs {
        let summary = audit_run(VerifyConfig {
            mode,
            max_n,
            count,
            seed: 42,
            prune,
            cert_dir: Some(dir.path().join(name)),
        })?;
        check(summary.not_compared == 0, || {
            format!("{name}: instances skipped the oracle")
        })?;
        let fixture = &summary.fixtures[0];
        check(fixture.name == "theorem1-audit-8", || {
            "fixture missing".into()
        })?;
        parts.push(format!(
            "{name}: {} instances, {} match, {} certificates",
            summary.instances, summary.matches, summary.discrepancies
        ));
        if name.starts_with("exhaustive") {
            let expected: usize = (1..=9usize).map(|n| (1..n).product::<usize>()).sum();
            check(summary.instances == expected, || {
                format!("saw {} trees", summary.instances)
            })?;
            parts.push(format!(
                "fixture {}: algorithm {} vs oracle {:?} -> {:?}",
                fixture.name, fixture.algorithm_size, fixture.oracle_size, fixture.outcome
            ));
        }
    }
    Ok(parts.join("; "))
}

// 5. Steiner number equals the leaf count and every minimum Steiner set
// holds every leaf.
fn steiner_number_and_leaves() -> Outcome {
    let mut trees: Vec<ParentArray> = (1..=9)
        .flat_map(|n| enumerate_parent_arrays(n, EnumerationMode::Trees).unwrap())
        .collect();
    let exhaustive = trees.len();
    for i in 0..500u64 {
        let n = 2 + (i as usize % 13);
        trees.push(prufer_tree(n, 3_000_000 + i));
    }
    let mut min_sets_checked = 0;
    for p in &trees {
        let t = build_adjacency(p);
        let leaves = leaf_set(&t);
        let s = exact_steiner_number(&t).map_err(|e| e.to_string())?;
        check(s == leaves.len(), || {
            format!("{p:?}: s={s}, leaves={}", leaves.len())
        })?;
        if p.len() <= 12 {
            let (_, sets) = minimum_steiner_sets(&t).map_err(|e| e.to_string())?;
            for w in &sets {
                check(leaves.is_subset(w), || {
                    format!("{p:?}: minimum Steiner set {w} misses a leaf")
                })?;
            }
            min_sets_checked += 1;
        }
    }
    Ok(format!(
        "{exhaustive} exhaustive + 500 random trees; all minimum Steiner sets checked on {min_sets_checked}"
    ))
}

// 6. ns/vertex grows at most 3x and peak memory at most 12x per decade.
fn linearity() -> Outcome {
    const SIZES: [usize; 3] = [10_000, 100_000, 1_000_000];
    const MAX_TIME_RATIO: f64 = 3.0;
    const MAX_MEMORY_RATIO: f64 = 12.0;
    let inputs: Vec<ParentArray> = SIZES.iter().map(|&n| prufer_tree(n, 1)).collect();

    let mut records = Vec::new();
    let mut memory = Vec::new();
    for p in &inputs {
        for algorithm in BenchAlgorithm::ALL {
            // warm-up, also used for the allocation high-water mark
            let (_, bytes) = peak_bytes(|| algorithm.run(p));
            memory.push((algorithm, p.len(), bytes));
            records.push(time_algorithm(algorithm, p, 7).map_err(|e| e.to_string())?);
        }
    }

    let mut lines = Vec::new();
    for (algorithm, from, to, ratio) in per_vertex_ratios(&records) {
        lines.push(format!("{algorithm} time {from}->{to}: {ratio:.2}x"));
        check(ratio <= MAX_TIME_RATIO, || {
            format!("{algorithm} {from}->{to}: ns/vertex ratio {ratio:.2}")
        })?;
    }
    for algorithm in BenchAlgorithm::ALL {
        let rows: Vec<_> = memory.iter().filter(|m| m.0 == algorithm).collect();
        for w in rows.windows(2) {
            let ratio = w[1].2 as f64 / w[0].2.max(1) as f64;
            lines.push(format!(
                "{algorithm} memory {}->{}: {ratio:.2}x",
                w[0].1, w[1].1
            ));
            check(ratio <= MAX_MEMORY_RATIO, || {
                format!("{algorithm}: memory ratio {ratio:.2}")
            })?;
        }
    }
    Ok(lines.join(", "))
}

// 7. stars and short paths.
fn known_families() -> Outcome {
    for n in 3..=40 {
        let star = gen(&GeneratorSpec::new(Family::Star, n, 0)).unwrap();
        let size = steiner_domination(&star).unwrap().size;
        check(size == n - 1, || format!("star {n}: size {size}"))?;
    }
    for n in 2..=12 {
        let path = gen(&GeneratorSpec::new(Family::Path, n, 0)).unwrap();
        let t = build_adjacency(&path);
        let size = steiner_domination(&path).unwrap().size;
        let formula = formula_gamma_st(&t).unwrap();
        let (optimum, _) = exact_gamma_st(&t, false).unwrap();
        if n <= 4 {
            check(size == 2 && formula == 2, || format!("P{n}: size {size}"))?;
        } else {
            let expected = 2 + (n - 4).div_ceil(3);
            check(formula == expected && size == expected, || {
                format!("P{n}: formula {formula} vs {expected}")
            })?;
            check(optimum == expected, || {
                format!("P{n}: optimum {optimum} vs {expected}")
            })?;
        }
    }
    Ok("stars n=3..40, paths n=2..12".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (
            "1 forest domination optimal, exhaustive n<=8",
            forest_exhaustive,
        ),
        (
            "2 forest domination optimal, 10k random trees",
            forest_randomized,
        ),
        (
            "3 Steiner construction valid, 10k random trees",
            steiner_validity,
        ),
        ("4 formula vs exact optimum audit", theorem_audit),
        (
            "5 Steiner number and leaf containment",
            steiner_number_and_leaves,
        ),
        ("6 linear time and memory", linearity),
        ("7 known families", known_families),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, criterion) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = criterion();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] ({secs:.1}s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{name}] ({secs:.1}s) {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
