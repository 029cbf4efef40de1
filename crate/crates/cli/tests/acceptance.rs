//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use sfkit_core::bounds::checks::RECURRENCE_TOLERANCE;
use sfkit_core::bounds::constants::{cubic_gap, delta_identities, inverse_phi1_base, thresholds};
use sfkit_core::bounds::sweep::{
    sweep_binomial, sweep_phi2_recurrence, sweep_phi2_upper, sweep_product, sweep_stirling,
    sweep_stirling2, SweepSummary, DEFAULT_EPSILONS,
};
use sfkit_core::bounds::{factorial, phi0, phi1_exact};
use sfkit_core::harness::{
    audit_corpus, derive_seed, generate_family, DistributionKind, FamilyDistribution, Rng,
};
use sfkit_core::oracle::{
    brute_force_find_sunflower, max_sunflower_free, max_sunflower_free_with, OracleBudget,
    SearchOptions,
};
use sfkit_core::sunflower::extract_er;
use sfkit_core::{Hp, Real, SetFamily};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact_values() -> Outcome {
    ensure(phi0(3, 2).unwrap().to_string() == "8", || {
        "phi0(3,2) != 8".into()
    })?;
    for s in 1..=30 {
        ensure(phi0(2, s).unwrap() == factorial(s), || {
            format!("phi0(2,{s}) != {s}!")
        })?;
    }
    for k in 2..=100u64 {
        let v = phi1_exact(k, 2).unwrap();
        ensure(
            v.is_rational() && v.rational_part().to_string() == (2 * k * k).to_string(),
            || format!("phi1({k},2) = {v:?}, expected {}", 2 * k * k),
        )?;
    }
    Ok("phi0(3,2) = 8, phi0(2,s) = s! for s <= 30, phi1(k,2) = 2k^2 for k <= 100".into())
}

fn summary(sum: &SweepSummary) -> Outcome {
    if sum.all_hold() {
        Ok(format!("{}: {} checks hold", sum.suite, sum.checked))
    } else {
        Err(format!(
            "{}: {} of {} failed, first {:?}",
            sum.suite,
            sum.failed,
            sum.checked,
            sum.failures.first()
        ))
    }
}

fn recurrence() -> Outcome {
    summary(&sweep_phi2_recurrence::<Hp>(200, &DEFAULT_EPSILONS, RECURRENCE_TOLERANCE).unwrap())
}

fn sweeps() -> Outcome {
    let all = [
        sweep_stirling::<Hp>(10_000).unwrap(),
        sweep_binomial::<Hp>(500).unwrap(),
        sweep_stirling2::<Hp>(500, &DEFAULT_EPSILONS).unwrap(),
        sweep_product::<Hp>(5_000).unwrap(),
        sweep_phi2_upper::<Hp>(300, &DEFAULT_EPSILONS).unwrap(),
    ];
    let mut lines = Vec::new();
    for s in &all {
        lines.push(summary(s)?);
    }
    Ok(lines.join("; "))
}

fn constants() -> Outcome {
    let ids = delta_identities::<Hp>();
    let tol = Hp::from_f64(1e-30);
    ensure(ids.exact, || "identities fail in Q(sqrt 10)".into())?;
    ensure(
        ids.polynomial.contains_zero() && ids.polynomial.mid.abs() < tol,
        || {
            format!(
                "delta polynomial residual {:?}",
                ids.polynomial.mid.to_f64()
            )
        },
    )?;
    ensure(
        ids.chain.contains_zero() && ids.chain.mid.abs() < tol,
        || format!("delta chain residual {:?}", ids.chain.mid.to_f64()),
    )?;
    let inv = format!("{:.7}", inverse_phi1_base::<Hp>().to_f64());
    ensure(inv == "0.8603796", || {
        format!("1/(sqrt 10 - 2) printed {inv}")
    })?;
    let t = thresholds();
    let nine = cubic_gap(&Hp::from_u64(9));
    let ten = cubic_gap(&Hp::from_u64(10));
    ensure(nine.is_positive() && ten < Hp::zero(), || {
        "no sign change on (9, 10)".into()
    })?;
    ensure(
        t.p_star > Hp::from_u64(9) && t.p_star < Hp::from_u64(10),
        || "p* outside (9, 10)".into(),
    )?;
    Ok(format!(
        "residuals < 1e-30, 1/(sqrt 10 - 2) = {inv}..., p* = {:.6}",
        t.p_star.to_f64()
    ))
}

fn extraction_guarantee() -> Outcome {
    let mut lines = Vec::new();
    for (k, s) in [(3usize, 2u32), (4, 2), (3, 3)] {
        let p0: usize = phi0(k as u64, u64::from(s))
            .unwrap()
            .to_string()
            .parse()
            .unwrap();
        let mut found = 0;
        for t in 0..1000u64 {
            let mut rng = Rng::new(derive_seed(0x5eed + k as u64 * 10 + u64::from(s), t));
            let kind = if t % 2 == 0 {
                DistributionKind::UniformJSubsets
            } else {
                DistributionKind::UniformAtMost
            };
            let size = p0 + 1 + rng.below(3) as usize;
            let ground = (s..=128)
                .find(|&n| kind.capacity(n, s) >= size as u128)
                .unwrap()
                + rng.below(3) as u32;
            let dist = FamilyDistribution {
                kind,
                ground_size: ground,
                set_size: s,
                family_size: size,
                seed: rng.next_u64(),
            };
            let family = generate_family(&dist).unwrap();
            let res = extract_er(&family, k).unwrap();
            let sf = res.sunflower().ok_or_else(|| {
                format!("({k},{s}) trial {t}: no sunflower\n{}", family.to_text())
            })?;
            ensure(sf.petals.len() == k && sf.verify(&family), || {
                format!("({k},{s}) trial {t}: result fails verification")
            })?;
            found += 1;
        }
        lines.push(format!("({k},{s}) {found}/1000"));
    }
    Ok(format!("success rate 1.0: {}", lines.join(", ")))
}

fn oracle_truth() -> Outcome {
    let budget = OracleBudget::default();
    let a = max_sunflower_free(3, 1, 4, true, budget).unwrap();
    ensure(a.exhaustive && a.max_size == 2, || {
        format!("f(3,1,4) = {} exhaustive {}", a.max_size, a.exhaustive)
    })?;
    let b = max_sunflower_free(2, 2, 4, true, budget).unwrap();
    ensure(b.exhaustive && b.max_size == 1, || {
        format!("f(2,2,4) = {} exhaustive {}", b.max_size, b.exhaustive)
    })?;
    let c = max_sunflower_free(3, 2, 6, true, budget).unwrap();
    ensure(c.exhaustive && (6..=8).contains(&c.max_size), || {
        format!("f(3,2,6) = {}", c.max_size)
    })?;
    ensure(
        brute_force_find_sunflower(&c.witness, 3).unwrap().is_none(),
        || "witness holds a 3-sunflower".into(),
    )?;
    let triangles = SetFamily::parse("ground 6 maxcard 2\n1 2\n1 3\n2 3\n4 5\n4 6\n5 6\n").unwrap();
    ensure(
        brute_force_find_sunflower(&triangles, 3).unwrap().is_none(),
        || "two triangles hold a 3-sunflower".into(),
    )?;
    ensure(c.max_size <= 8, || "above phi0".into())?;
    let opts = SearchOptions {
        no_symmetry: false,
        relabel: Some(vec![4, 6, 1, 5, 3, 2]),
    };
    let d = max_sunflower_free_with(3, 2, 6, true, budget, &opts).unwrap();
    ensure(d.max_size == c.max_size, || {
        format!("relabelled search gave {}", d.max_size)
    })?;
    let opts = SearchOptions {
        no_symmetry: false,
        relabel: Some(vec![3, 4, 2, 1]),
    };
    let e = max_sunflower_free_with(3, 1, 4, true, budget, &opts).unwrap();
    ensure(e.max_size == a.max_size, || {
        format!("relabelled f(3,1,4) gave {}", e.max_size)
    })?;
    Ok(format!(
        "f(3,1,4) = 2, f(2,2,4) = 1, f(3,2,6) = {} in [6, 8], relabelling invariant",
        c.max_size
    ))
}

fn equivalence() -> Outcome {
    let mut both = 0;
    for i in 0..1000u64 {
        let mut rng = Rng::new(derive_seed(0xacce, i));
        let s = 1 + rng.below(3) as u32;
        let k = 1 + rng.below(4) as usize;
        let kind = DistributionKind::ALL[rng.below(DistributionKind::ALL.len() as u64) as usize];
        let ground = (s..=16).find(|&n| kind.capacity(n, s) >= 1).unwrap() + rng.below(4) as u32;
        let cap = kind.capacity(ground, s).min(25) as u64;
        let dist = FamilyDistribution {
            kind,
            ground_size: ground,
            set_size: s,
            family_size: 1 + rng.below(cap) as usize,
            seed: rng.next_u64(),
        };
        let f = generate_family(&dist).unwrap();
        let er = extract_er(&f, k).unwrap();
        let brute = brute_force_find_sunflower(&f, k).unwrap();
        if let Some(sf) = er.sunflower() {
            let b = brute
                .ok_or_else(|| format!("instance {i}: brute force missed\n{}", f.to_text()))?;
            ensure(sf.verify(&f) && b.verify(&f), || {
                format!("instance {i}: verdicts differ")
            })?;
            both += 1;
        }
    }
    Ok(format!(
        "1000 families, {both} found by both, no disagreement"
    ))
}

fn audits() -> Outcome {
    let sum = audit_corpus(10_000, 2024, 0.05).unwrap();
    ensure(sum.verdict_failures == 0, || {
        format!("{} HYPOTHESIS-MET-CONCLUSION-FAILED", sum.verdict_failures)
    })?;
    ensure(sum.identity_failures == 0, || {
        format!("{} identity failures", sum.identity_failures)
    })?;
    ensure(sum.all_consistent(), || "corpus inconsistent".into())?;
    let met: u64 = sum.steps.values().map(|t| t.hypothesis_met).sum();
    Ok(format!(
        "{} audits, 0 failures, {} identities hold, {} steps with hypotheses met",
        sum.audits, sum.identities_checked, met
    ))
}

fn determinism() -> Outcome {
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "generate",
            "--dist",
            "uniform-j-subsets",
            "--ground",
            "9",
            "--set-size",
            "3",
            "--size",
            "30",
            "--seed",
            "7",
        ],
        vec![
            "generate",
            "--dist",
            "uniform-at-most",
            "--ground",
            "9",
            "--set-size",
            "3",
            "--size",
            "30",
            "--seed",
            "7",
        ],
        vec![
            "generate",
            "--dist",
            "star-union",
            "--ground",
            "12",
            "--set-size",
            "3",
            "--size",
            "30",
            "--seed",
            "7",
        ],
        vec![
            "generate",
            "--dist",
            "disjoint-blocks",
            "--ground",
            "12",
            "--set-size",
            "3",
            "--size",
            "12",
            "--seed",
            "7",
        ],
        vec![
            "generate",
            "--dist",
            "sunflower-free-construction",
            "--ground",
            "12",
            "--set-size",
            "3",
            "--size",
            "20",
            "--seed",
            "7",
        ],
        vec![
            "hunt", "--k", "3", "--s", "2", "--trials", "200", "--seed", "7", "--sizes", "4..10",
        ],
        vec![
            "hunt", "--k", "3", "--s", "3", "--trials", "50", "--seed", "7",
        ],
        vec!["audit", "--instances", "300", "--seed", "7"],
        vec!["bounds", "--k", "5", "--s", "4"],
        vec!["oracle", "--k", "3", "--s", "2", "--ground", "5"],
    ];
    for args in &runs {
        let go = || {
            Command::new(env!("CARGO_BIN_EXE_sfkit"))
                .args(args)
                .output()
                .unwrap()
        };
        let (a, b) = (go(), go());
        ensure(a.status.success(), || {
            format!(
                "{args:?} exited {:?}: {}",
                a.status.code(),
                String::from_utf8_lossy(&a.stderr)
            )
        })?;
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || {
            format!("{args:?} differs between runs")
        })?;
        for line in String::from_utf8_lossy(&a.stdout).lines() {
            serde_json::from_str::<serde_json::Value>(line)
                .map_err(|e| format!("{args:?}: {e}"))?;
        }
    }
    Ok(format!(
        "{} commands byte-identical across two runs",
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exact bound values", exact_values),
        ("recurrence fidelity", recurrence),
        ("inequality sweeps", sweeps),
        ("constant derivation", constants),
        ("extraction guarantee", extraction_guarantee),
        ("oracle ground truth", oracle_truth),
        ("oracle/engine equivalence", equivalence),
        ("audit consistency", audits),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = secs(start.elapsed());
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({took}): {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name} ({took}): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}
