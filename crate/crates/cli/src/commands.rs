//! Subcommand implementations.

use std::path::Path;

use serde_json::{json, Value};
use sfkit_core::bounds::checks::RECURRENCE_TOLERANCE;
use sfkit_core::bounds::constants::{delta_identities, inverse_phi1_base, thresholds};
use sfkit_core::bounds::sweep::{
    sweep_binomial, sweep_phi2_recurrence, sweep_phi2_upper, sweep_product, sweep_stirling,
    sweep_stirling2, SweepSummary, DEFAULT_EPSILONS,
};
use sfkit_core::bounds::{compare_bounds, delta, phi1_exact, BoundParams, LogValue};
use sfkit_core::harness::{
    audit_corpus, audit_statement1, audit_statement2, counterexample_hunt_with, generate_family,
    threshold_experiment, AuditReport, DistributionKind, FamilyDistribution, HuntOptions, Verdict,
};
use sfkit_core::oracle::{brute_force_find_sunflower, verify_tightness, OracleBudget};
use sfkit_core::sunflower::{
    check_sunflower, extract_augmenting, extract_er, ExtractionResult, ExtractionTrace, Sunflower,
};
use sfkit_core::{Hp, MemberSet, Real, SetFamily};

use crate::report::Report;
use crate::{Command, Failure, Method, Suite};

/// Φ₀ is printed in full up to this many digits.
const MAX_EXACT_DIGITS: usize = 10_000;

pub fn run(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Verify { file, indices } => verify(&file, indices),
        Command::Extract {
            file,
            k,
            method,
            j_max,
            budget,
        } => extract(&file, k, method, j_max, budget),
        Command::Bounds { k, s, epsilon } => bounds(k, s, epsilon),
        Command::Lemmas {
            suite,
            max,
            epsilon,
        } => lemmas(suite, max, epsilon),
        Command::Oracle {
            k,
            s,
            ground,
            budget_nodes,
            budget_seconds,
            allow_empty,
            epsilon,
            witness,
        } => oracle(
            k,
            s,
            ground,
            budget_nodes,
            budget_seconds,
            allow_empty,
            epsilon,
            witness.as_deref(),
        ),
        Command::Hunt {
            k,
            s,
            trials,
            seed,
            dist,
            epsilon,
            reproducer_dir,
            sizes,
            ground,
        } => hunt(
            k,
            s,
            trials,
            seed.resolve()?,
            dist.into(),
            epsilon,
            reproducer_dir,
            sizes,
            ground,
        ),
        Command::Audit {
            file,
            k,
            epsilon,
            instances,
            seed,
        } => match (file, instances) {
            (Some(f), None) => {
                let k = k.ok_or("--k is required when auditing a file")?;
                audit_file(&f, k, epsilon)
            }
            (None, Some(n)) => audit_seeded(n, seed.resolve()?, epsilon),
            _ => Err(Failure::Usage(
                "give either a family file or --instances".into(),
            )),
        },
        Command::Generate {
            dist,
            ground,
            set_size,
            size,
            seed,
            output,
        } => generate(
            dist.into(),
            ground,
            set_size,
            size,
            seed.resolve()?,
            output.as_deref(),
        ),
    }
}

fn load(path: &Path) -> Result<SetFamily, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    SetFamily::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn set_list(m: MemberSet) -> Vec<u32> {
    m.to_vec()
}

fn verify(path: &Path, indices: Option<Vec<usize>>) -> Result<Report, Failure> {
    let family = load(path)?;
    let members = indices.unwrap_or_else(|| (0..family.len()).collect());
    let mut rep = Report::new(
        "verify",
        json!({ "file": path.display().to_string(), "indices": members }),
        None,
    );
    match check_sunflower(&family, &members)? {
        Some(core) => {
            rep.line("sunflower: yes");
            rep.line(format!("core: {core}"));
            rep.record(
                "sunflower",
                json!({ "core": set_list(core), "petals": members.len() }),
            );
        }
        None => {
            rep.line("sunflower: no");
            rep.record("not-sunflower", json!({ "petals": members.len() }));
            rep.negative();
        }
    }
    Ok(rep)
}

fn sunflower_body(family: &SetFamily, sf: &Sunflower) -> Value {
    let petals: Vec<Value> = sf
        .petals
        .iter()
        .map(|&i| json!({ "index": i, "set": set_list(family.members()[i]) }))
        .collect();
    json!({ "core": set_list(sf.core), "petals": petals })
}

fn trace_body(trace: &ExtractionTrace) -> Value {
    match trace {
        ExtractionTrace::Recursion(steps) => {
            let levels: Vec<Value> = steps
                .iter()
                .map(|st| {
                    json!({
                        "core": set_list(st.core),
                        "family_size": st.family_size,
                        "coreless_size": st.coreless_size,
                        "pivot": st.pivot,
                        "pivot_degree": st.pivot_degree,
                    })
                })
                .collect();
            json!({ "recursion": levels })
        }
        ExtractionTrace::Augmentation(sizes) => json!({ "augmentation": sizes }),
    }
}

fn extract(
    path: &Path,
    k: u64,
    method: Method,
    j_max: u64,
    budget: u64,
) -> Result<Report, Failure> {
    let family = load(path)?;
    let k = usize::try_from(k).map_err(|_| "k is too large".to_string())?;
    let name = match method {
        Method::Er => "er",
        Method::Augment => "augment",
        Method::Brute => "brute",
    };
    let params = json!({ "file": path.display().to_string(), "k": k, "method": name, "j_max": j_max, "budget": budget });
    let mut rep = Report::new("extract", params, None);
    let result = match method {
        Method::Er => extract_er(&family, k)?,
        Method::Augment => extract_augmenting(&family, k, j_max as usize, budget)?,
        Method::Brute => match brute_force_find_sunflower(&family, k)? {
            Some(sf) => ExtractionResult::Found(sf),
            None => ExtractionResult::Exhausted(ExtractionTrace::Augmentation(Vec::new())),
        },
    };
    match result {
        ExtractionResult::Found(sf) => {
            if !sf.verify(&family) {
                return Err(Failure::Usage(
                    "internal error: extracted sunflower failed verification".into(),
                ));
            }
            rep.line("found");
            rep.line(format!("core: {}", sf.core));
            for &i in &sf.petals {
                rep.line(format!("petal {i}: {}", family.members()[i]));
            }
            rep.record("found", sunflower_body(&family, &sf));
        }
        ExtractionResult::Exhausted(trace) => {
            rep.line("exhausted");
            let body = if method == Method::Brute {
                json!({})
            } else {
                trace_body(&trace)
            };
            rep.record("exhausted", body);
            rep.negative();
        }
    }
    Ok(rep)
}

fn log_entry(name: &str, v: &LogValue<Hp>) -> Value {
    match v.ball() {
        Some(b) => {
            json!({ "bound": name, "ln": b.mid.to_f64(), "radius": b.rad, "value": b.mid.exp().to_decimal(12) })
        }
        None => json!({ "bound": name, "ln": null, "radius": 0.0, "value": "0" }),
    }
}

fn bounds(k: u64, s: u64, epsilon: f64) -> Result<Report, Failure> {
    let params = BoundParams::new(k, s, epsilon)?;
    let cmp = compare_bounds::<Hp>(k, s, epsilon)?;
    let mut rep = Report::new("bounds", json!(params), None);
    let phi0 = cmp.phi0.to_string();
    let phi0_exact = (phi0.len() <= MAX_EXACT_DIGITS).then_some(phi0);
    let phi1 = phi1_exact(k, s as i64)?;
    let phi1_rational = phi1.is_rational().then(|| phi1.rational_part().to_string());
    let comp = LogValue::Positive(cmp.ln_composite.clone());
    let entries = vec![
        log_entry("phi0", &cmp.ln_phi0),
        log_entry("phi1", &cmp.ln_phi1),
        log_entry("phi2", &cmp.ln_phi2),
        log_entry("composite", &comp),
    ];
    rep.line(format!("k = {k}, s = {s}, epsilon = {epsilon}"));
    match &phi0_exact {
        Some(v) => rep.line(format!("phi0 = {v}")),
        None => rep.line(format!("phi0 has more than {MAX_EXACT_DIGITS} digits")),
    }
    if let Some(v) = &phi1_rational {
        rep.line(format!("phi1 = {v} (exact)"));
    }
    for e in &entries {
        rep.line(format!(
            "ln {:<9} = {:.12} (±{:.1e}), value ≈ {}",
            e["bound"].as_str().unwrap_or(""),
            e["ln"].as_f64().unwrap_or(f64::NEG_INFINITY),
            e["radius"].as_f64().unwrap_or(0.0),
            e["value"].as_str().unwrap_or("")
        ));
    }
    let ratios = cmp.ratios();
    for r in &ratios {
        rep.line(format!(
            "ln({}/{}) = {:.12}",
            r.numerator, r.denominator, r.ln
        ));
    }
    rep.record(
        "evaluated",
        json!({
            "phi0": phi0_exact,
            "phi1_exact": phi1_rational,
            "c": cmp.c.mid.to_f64(),
            "bounds": entries,
            "ratios": ratios,
        }),
    );
    Ok(rep)
}

fn sweep_report(rep: &mut Report, sum: &SweepSummary) {
    rep.line(format!(
        "suite {}: {} checked, {} failed",
        sum.suite, sum.checked, sum.failed
    ));
    if let Some(t) = &sum.tightest {
        rep.line(format!(
            "tightest: {} {} margin {:.6e}",
            t.check,
            json!(t.params),
            t.margin
        ));
    }
    for f in &sum.failures {
        rep.line(format!(
            "FAILED: {} {} margin {:.6e}",
            f.check,
            json!(f.params),
            f.margin
        ));
    }
    rep.record(if sum.all_hold() { "all-hold" } else { "failed" }, sum);
    if !sum.all_hold() {
        rep.negative();
    }
}

fn lemmas(suite: Suite, max: Option<u64>, epsilon: Option<Vec<f64>>) -> Result<Report, Failure> {
    let eps = epsilon.unwrap_or_else(|| DEFAULT_EPSILONS.to_vec());
    let (name, default_max) = match suite {
        Suite::Stirling => ("stirling", 10_000),
        Suite::Binomial => ("binomial", 500),
        Suite::Phi2Recurrence => ("phi2-recurrence", 200),
        Suite::Stirling2 => ("stirling2", 500),
        Suite::Product => ("product", 5_000),
        Suite::Phi2Upper => ("phi2-upper", 300),
        Suite::Constants => ("constants", 0),
    };
    let max = max.unwrap_or(default_max);
    let mut rep = Report::new(
        "lemmas",
        json!({ "suite": name, "max": max, "epsilon": eps }),
        None,
    );
    let sum = match suite {
        Suite::Stirling => sweep_stirling::<Hp>(max)?,
        Suite::Binomial => sweep_binomial::<Hp>(max)?,
        Suite::Phi2Recurrence => sweep_phi2_recurrence::<Hp>(max, &eps, RECURRENCE_TOLERANCE)?,
        Suite::Stirling2 => sweep_stirling2::<Hp>(max, &eps)?,
        Suite::Product => sweep_product::<Hp>(max)?,
        Suite::Phi2Upper => sweep_phi2_upper::<Hp>(max, &eps)?,
        Suite::Constants => return Ok(constants(rep)),
    };
    sweep_report(&mut rep, &sum);
    Ok(rep)
}

fn constants(mut rep: Report) -> Report {
    let t = thresholds();
    let ids = delta_identities::<Hp>();
    let d = delta::<Hp>();
    let inv = inverse_phi1_base::<Hp>();
    let tol = Hp::from_f64(1e-30);
    let poly_ok = ids.polynomial.contains_zero() && ids.polynomial.mid.abs() < tol;
    let chain_ok = ids.chain.contains_zero() && ids.chain.mid.abs() < tol;
    let bracket_ok = t.bracket.0.is_positive() && !t.bracket.1.is_positive();
    let ok = ids.exact && poly_ok && chain_ok && bracket_ok;
    let body = json!({
        "delta": d.mid.to_decimal(30),
        "inverse_base": inv.mid.to_decimal(30),
        "p_star": t.p_star.to_decimal(30),
        "cubic_gap_at_9": t.bracket.0.to_decimal(12),
        "cubic_gap_at_10": t.bracket.1.to_decimal(12),
        "c1": t.c1.to_string(),
        "epsilon_star": t.epsilon_star.to_decimal(20),
        "delta_polynomial_residual": ids.polynomial.mid.to_f64().abs(),
        "delta_chain_residual": ids.chain.mid.to_f64().abs(),
        "identities_exact": ids.exact,
    });
    for key in ["delta", "inverse_base", "p_star", "c1", "epsilon_star"] {
        rep.line(format!("{key} = {}", body[key].as_str().unwrap_or("")));
    }
    rep.line(format!(
        "identities: exact {}, residuals below 1e-30 {}",
        ids.exact,
        poly_ok && chain_ok
    ));
    rep.line(format!("p* bracketed in (9, 10): {bracket_ok}"));
    rep.record(if ok { "all-hold" } else { "failed" }, body);
    if !ok {
        rep.negative();
    }
    rep
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    k: u64,
    s: u32,
    ground: u32,
    budget_nodes: u64,
    budget_seconds: f64,
    allow_empty: bool,
    epsilon: f64,
    witness: Option<&Path>,
) -> Result<Report, Failure> {
    let budget = OracleBudget::new(budget_nodes, budget_seconds)?;
    let params = json!({
        "k": k, "s": s, "ground": ground, "budget_nodes": budget_nodes,
        "budget_seconds": budget_seconds, "allow_empty": allow_empty, "epsilon": epsilon,
    });
    let mut rep = Report::new("oracle", params, None);
    let res = verify_tightness(k as usize, s, ground, allow_empty, epsilon, budget)?;
    if let Some(p) = witness {
        std::fs::write(p, &res.witness)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    rep.line(format!("max_size: {}", res.max_size));
    rep.line(format!("exhaustive: {}", res.exhaustive));
    rep.line(format!("nodes: {}", res.nodes));
    rep.line(format!("phi0: {}  within: {}", res.phi0, res.within_phi0));
    if let Some(p) = witness {
        rep.line(format!("witness: {}", p.display()));
    }
    let verdict = if res.exhaustive {
        "exhaustive"
    } else {
        "budget-exhausted"
    };
    let mut body = serde_json::to_value(&res).expect("tightness report serializes");
    body["witness_path"] = json!(witness.map(|p| p.display().to_string()));
    rep.record(verdict, body);
    if !res.exhaustive {
        rep.negative();
    }
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn hunt(
    k: u64,
    s: u32,
    trials: u64,
    seed: u64,
    kind: DistributionKind,
    epsilon: f64,
    reproducer_dir: Option<std::path::PathBuf>,
    sizes: Option<(usize, usize)>,
    ground: Option<u32>,
) -> Result<Report, Failure> {
    let params = json!({
        "k": k, "s": s, "trials": trials, "dist": kind.name(), "epsilon": epsilon,
        "sizes": sizes.map(|(a, b)| [a, b]), "ground": ground,
    });
    let mut rep = Report::new("hunt", params, Some(seed));
    let opts = HuntOptions {
        kind,
        reproducer_dir,
    };
    let k = k as usize;
    let res = counterexample_hunt_with(k, s, epsilon, trials, seed, &opts)?;
    rep.line(format!(
        "examined {} of {} trials, {} sunflowers found, {} counterexamples",
        res.examined,
        res.trials,
        res.sunflowers_found,
        res.counterexamples.len()
    ));
    for c in &res.counterexamples {
        rep.line(format!(
            "COUNTEREXAMPLE trial {} seed {}:\n{}",
            c.trial, c.seed, c.family
        ));
    }
    let clean = res.counterexamples.is_empty();
    rep.record(
        if clean {
            "no-counterexample"
        } else {
            "counterexample"
        },
        &res,
    );
    if !clean {
        rep.negative();
    }
    if let Some((lo, hi)) = sizes {
        let ground = match ground {
            Some(g) => g,
            None => (s..=128)
                .find(|&n| kind.capacity(n, s) >= hi as u128)
                .ok_or("no ground set up to 128 fits the largest size")?,
        };
        let dist = FamilyDistribution {
            kind,
            ground_size: ground,
            set_size: s,
            family_size: 0,
            seed,
        };
        let table = threshold_experiment(k, s, &dist, lo..=hi, trials)?;
        for row in &table.rows {
            rep.line(format!(
                "|F| = {:>5}  er {:>6}/{:<6} brute {:>8}  above phi0 {}",
                row.size,
                row.er_found,
                row.trials,
                row.brute_found.map_or("-".to_string(), |b| b.to_string()),
                row.above_phi0
            ));
        }
        rep.record(
            if table.guarantee_holds {
                "guarantee-holds"
            } else {
                "guarantee-failed"
            },
            &table,
        );
        if !table.guarantee_holds {
            rep.negative();
        }
    }
    Ok(rep)
}

fn audit_lines(rep: &mut Report, a: &AuditReport) {
    rep.line(format!(
        "{} {}: verdict {}, vacuous {}, identities {}",
        a.audit,
        a.instance,
        match a.verdict {
            Verdict::Consistent => "consistent",
            Verdict::HypothesisMetConclusionFailed => "HYPOTHESIS-MET-CONCLUSION-FAILED",
        },
        a.vacuous,
        if a.identities_hold() { "hold" } else { "FAIL" }
    ));
    for st in &a.steps {
        rep.line(format!(
            "  {:<7} hypothesis {:<5} conclusion {:?}",
            st.lemma, st.hypothesis_met, st.conclusion_holds
        ));
    }
}

fn audit_file(path: &Path, k: u64, epsilon: f64) -> Result<Report, Failure> {
    let family = load(path)?;
    let mut rep = Report::new(
        "audit",
        json!({ "file": path.display().to_string(), "k": k, "epsilon": epsilon }),
        None,
    );
    let mut reports = vec![audit_statement1(&family, k)?];
    if k >= 2 {
        reports.push(audit_statement2(&family, k, epsilon)?);
    }
    for a in &reports {
        audit_lines(&mut rep, a);
        let ok = a.verdict == Verdict::Consistent && a.identities_hold();
        rep.record(
            if ok {
                "consistent"
            } else {
                "HYPOTHESIS-MET-CONCLUSION-FAILED"
            },
            a,
        );
        if !ok {
            rep.negative();
        }
    }
    Ok(rep)
}

fn audit_seeded(count: u64, seed: u64, epsilon: f64) -> Result<Report, Failure> {
    sfkit_core::harness::corpus::check_corpus_params(count, epsilon)?;
    let mut rep = Report::new(
        "audit",
        json!({ "instances": count, "epsilon": epsilon }),
        Some(seed),
    );
    let sum = audit_corpus(count, seed, epsilon)?;
    rep.line(format!(
        "{} audits, {} vacuous, {} failed verdicts, {} failed identities of {}",
        sum.audits,
        sum.vacuous,
        sum.verdict_failures,
        sum.identity_failures,
        sum.identities_checked
    ));
    for (lemma, t) in &sum.steps {
        rep.line(format!(
            "  {:<16} hypothesis met {:>7}, conclusion held {:>7}, failed {}",
            lemma, t.hypothesis_met, t.conclusion_held, t.failed
        ));
    }
    let ok = sum.all_consistent();
    rep.record(
        if ok {
            "consistent"
        } else {
            "HYPOTHESIS-MET-CONCLUSION-FAILED"
        },
        &sum,
    );
    if !ok {
        rep.negative();
    }
    Ok(rep)
}

fn generate(
    kind: DistributionKind,
    ground: u32,
    set_size: u32,
    size: usize,
    seed: u64,
    output: Option<&Path>,
) -> Result<Report, Failure> {
    let dist = FamilyDistribution {
        kind,
        ground_size: ground,
        set_size,
        family_size: size,
        seed,
    };
    let family = generate_family(&dist)?;
    let text = family.to_text();
    let mut rep = Report::new("generate", json!(dist), Some(seed));
    match output {
        Some(p) => {
            std::fs::write(p, &text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            rep.line(format!("wrote {} sets to {}", family.len(), p.display()));
        }
        None => rep.line(text.trim_end_matches('\n')),
    }
    rep.record(
        "generated",
        json!({ "family": text, "output": output.map(|p| p.display().to_string()) }),
    );
    Ok(rep)
}
