//! Finite sweeps of the inequality checkers over documented grids.
//!
//! Sweeps share cached log tables, run grid rows in parallel, and merge row
//! summaries in row order, so the summary is independent of scheduling.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::checks::{
    binomial_with, half_ln_2pi, phi2_upper_with, product_with, recurrence_with, stirling2_with,
    stirling_with, BinomialLogs, CheckRecord,
};
use super::{appendix_c, check_epsilon, Ball};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Failing records kept verbatim in a summary; the count is always exact.
pub const MAX_KEPT_FAILURES: usize = 32;

/// Epsilon values used by the default Φ₂ sweeps.
pub const DEFAULT_EPSILONS: [f64; 3] = [0.01, 0.05, 0.124];

/// Aggregate of one sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub suite: String,
    pub checked: u64,
    pub failed: u64,
    /// The first failing records in grid order.
    pub failures: Vec<CheckRecord>,
    /// The record with the smallest margin (first in grid order on ties).
    pub tightest: Option<CheckRecord>,
}

impl SweepSummary {
    pub fn new(suite: &str) -> Self {
        SweepSummary {
            suite: suite.to_string(),
            checked: 0,
            failed: 0,
            failures: Vec::new(),
            tightest: None,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.failed == 0
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.checked += 1;
        if !rec.holds {
            self.failed += 1;
            if self.failures.len() < MAX_KEPT_FAILURES {
                self.failures.push(rec.clone());
            }
        }
        if self.tightest.as_ref().is_none_or(|t| rec.margin < t.margin) {
            self.tightest = Some(rec);
        }
    }

    /// Appends `other`, which covers grid points after this summary's.
    pub fn merge(&mut self, other: SweepSummary) {
        self.checked += other.checked;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_KEPT_FAILURES {
                self.failures.push(f);
            }
        }
        if let Some(t) = other.tightest {
            if self
                .tightest
                .as_ref()
                .is_none_or(|cur| t.margin < cur.margin)
            {
                self.tightest = Some(t);
            }
        }
    }

    fn from_rows(suite: &str, rows: Vec<SweepSummary>) -> Self {
        let mut out = SweepSummary::new(suite);
        for r in rows {
            out.merge(r);
        }
        out
    }
}

/// Cached `ln i`, `ln ln i`, `ln i!` and prefix sums of `ln ln i`.
pub struct LogTables<R> {
    ln: Vec<Ball<R>>,
    lnln: Vec<Ball<R>>,
    ln_fact: Vec<Ball<R>>,
    /// `Σ_{i=2}^{t} ln ln i`.
    lnln_prefix: Vec<Ball<R>>,
}

impl<R: Real> LogTables<R> {
    /// Tables for `1 ≤ i ≤ n`. `ln i!` comes from the exact factorial.
    pub fn new(n: u64) -> Self {
        let n = n.max(2);
        let ln: Vec<Ball<R>> = (0..=n)
            .into_par_iter()
            .map(|i| Ball::ln_int(i.max(1)))
            .collect();
        let lnln: Vec<Ball<R>> = (0..=n)
            .into_par_iter()
            .map(|i| {
                if i < 2 {
                    Ball::exact(R::zero())
                } else {
                    ln[i as usize].ln()
                }
            })
            .collect();
        let mut ln_fact = Vec::with_capacity(n as usize + 1);
        let mut fact = BigUint::from(1u32);
        for i in 0..=n {
            if i >= 2 {
                fact *= i;
            }
            ln_fact.push(if i < 2 {
                Ball::exact(R::zero())
            } else {
                Ball::ln_big(&fact)
            });
        }
        let mut lnln_prefix = Vec::with_capacity(n as usize + 1);
        let mut acc = Ball::exact(R::zero());
        for (i, v) in lnln.iter().enumerate() {
            if i >= 2 {
                acc = acc.add(v);
            }
            lnln_prefix.push(acc.clone());
        }
        LogTables {
            ln,
            lnln,
            ln_fact,
            lnln_prefix,
        }
    }

    pub fn max(&self) -> u64 {
        self.ln.len() as u64 - 1
    }

    pub fn ln(&self, i: u64) -> &Ball<R> {
        &self.ln[i as usize]
    }

    pub fn lnln(&self, i: u64) -> &Ball<R> {
        &self.lnln[i as usize]
    }

    pub fn ln_fact(&self, i: u64) -> &Ball<R> {
        &self.ln_fact[i as usize]
    }

    /// `Σ_{i=2}^{t} ln ln min(i, k)`.
    pub fn lnln_min_sum(&self, k: u64, t: u64) -> Ball<R> {
        if t <= k {
            self.lnln_prefix[t as usize].clone()
        } else {
            self.lnln_prefix[k as usize].add(&self.lnln(k).scale(t - k))
        }
    }

    /// `ln Φ₂(t)` for `1 ≤ t ≤ max`, as
    /// `t ln k + ln t! − t ln ε − Σ_{i=2}^{t} ln ln min(i,k)`.
    pub fn ln_phi2_row(&self, k: u64, ln_eps: &Ball<R>, upto: u64) -> Vec<Ball<R>> {
        let mut out = Vec::with_capacity(upto as usize + 1);
        out.push(Ball::exact(R::zero()));
        for t in 1..=upto {
            let v = self
                .ln(k)
                .sub(ln_eps)
                .scale(t)
                .add(self.ln_fact(t))
                .sub(&self.lnln_min_sum(k, t));
            out.push(v);
        }
        out
    }
}

fn check_epsilons(eps: &[f64]) -> Result<()> {
    eps.iter().try_for_each(|&e| check_epsilon(e))
}

/// Two-sided Stirling bounds for `1 ≤ n ≤ max_n`.
pub fn sweep_stirling<R: Real>(max_n: u64) -> Result<SweepSummary> {
    if max_n == 0 {
        return Err(Error::invalid("stirling sweep needs max >= 1"));
    }
    let t = LogTables::<R>::new(max_n);
    let rows: Vec<SweepSummary> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let mut s = SweepSummary::new("stirling");
            s.push(stirling_with(n, t.ln_fact(n)));
            s
        })
        .collect();
    Ok(SweepSummary::from_rows("stirling", rows))
}

/// Binomial chain for `1 ≤ m ≤ n ≤ max_n`.
pub fn sweep_binomial<R: Real>(max_n: u64) -> Result<SweepSummary> {
    if max_n == 0 {
        return Err(Error::invalid("binomial sweep needs max >= 1"));
    }
    let t = LogTables::<R>::new(max_n);
    let half: Vec<Ball<R>> = (0..=max_n)
        .into_par_iter()
        .map(|m| half_ln_2pi(m.max(1)))
        .collect();
    let rows: Vec<SweepSummary> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let mut s = SweepSummary::new("binomial");
            let mut falling = BigUint::from(1u32);
            let mut power = BigUint::from(1u32);
            for m in 1..=n {
                falling *= n - m + 1;
                power *= n;
                let logs = BinomialLogs {
                    ln_n: t.ln(n).clone(),
                    ln_m: t.ln(m).clone(),
                    ln_m_fact: t.ln_fact(m).clone(),
                    half_ln_2pi_m: half[m as usize].clone(),
                };
                s.push(binomial_with(n, m, &falling, &power, &logs));
            }
            s
        })
        .collect();
    Ok(SweepSummary::from_rows("binomial", rows))
}

/// The `j` values sampled for a given `s`: `1`, `⌊s/2⌋` and `s−1`.
pub fn stirling2_js(s: u64) -> Vec<u64> {
    let mut js = vec![1, s / 2, s - 1];
    js.retain(|&j| j >= 1 && j < s);
    js.dedup();
    js
}

/// Stirling-type lemma for Φ₂ over `2 ≤ k, s ≤ max`, the sampled `j`, and
/// each `ε` in `epsilons`.
pub fn sweep_stirling2<R: Real>(max: u64, epsilons: &[f64]) -> Result<SweepSummary> {
    check_epsilons(epsilons)?;
    if max < 2 {
        return Err(Error::invalid("stirling2 sweep needs max >= 2"));
    }
    let t = LogTables::<R>::new(max);
    let mut rows = Vec::new();
    for &eps in epsilons {
        let ln_eps = Ball::<R>::from_f64(eps).ln();
        let part: Vec<SweepSummary> = (2..=max)
            .into_par_iter()
            .map(|k| {
                let mut sum = SweepSummary::new("stirling2");
                let row = t.ln_phi2_row(k, &ln_eps, max);
                for s in 2..=max {
                    // ln(ks/p_s) = ln k + ln s − ln ε − ln ln min(k,s)
                    let step = t.ln(k).add(t.ln(s)).sub(&ln_eps).sub(t.lnln(k.min(s)));
                    for j in stirling2_js(s) {
                        let ratio = row[s as usize].sub(&row[(s - j) as usize]);
                        sum.push(stirling2_with(k, s, eps, j, &ratio, &step));
                    }
                }
                sum
            })
            .collect();
        rows.extend(part);
    }
    Ok(SweepSummary::from_rows("stirling2", rows))
}

/// Product inequality for `3 ≤ s ≤ max_s`.
pub fn sweep_product<R: Real>(max_s: u64) -> Result<SweepSummary> {
    if max_s < 3 {
        return Err(Error::invalid("product inequality needs s >= 3"));
    }
    let t = LogTables::<R>::new(max_s);
    let mut sum = SweepSummary::new("product");
    for s in 3..=max_s {
        sum.push(product_with(s, &t.lnln_min_sum(s, s), t.lnln(s)));
    }
    Ok(sum)
}

/// Upper bound on Φ₂ with `c = e²/ε` over `2 ≤ k, s ≤ max`.
pub fn sweep_phi2_upper<R: Real>(max: u64, epsilons: &[f64]) -> Result<SweepSummary> {
    check_epsilons(epsilons)?;
    if max < 2 {
        return Err(Error::invalid("phi2-upper sweep needs max >= 2"));
    }
    let t = LogTables::<R>::new(max);
    let mut rows = Vec::new();
    for &eps in epsilons {
        let ln_eps = Ball::<R>::from_f64(eps).ln();
        let c = appendix_c::<R>(eps);
        let ln_c = c.ln();
        let part: Vec<SweepSummary> = (2..=max)
            .into_par_iter()
            .map(|k| {
                let mut sum = SweepSummary::new("phi2-upper");
                let row = t.ln_phi2_row(k, &ln_eps, max);
                for s in 2..=max {
                    sum.push(phi2_upper_with(
                        k,
                        s,
                        eps,
                        &c,
                        &row[s as usize],
                        &ln_c,
                        t.ln(k),
                        t.lnln(k.min(s)),
                        t.ln_fact(s),
                    ));
                }
                sum
            })
            .collect();
        rows.extend(part);
    }
    Ok(SweepSummary::from_rows("phi2-upper", rows))
}

/// Φ₂ recurrence over `2 ≤ k, s ≤ max`.
///
/// Each `ln Φ₂(s)` is the running sum of `ln p_i` from the definition, with
/// `ln p_i` taken as one log of the product `ε · ln min(i,k)`. The step
/// `ln(ks/p_s)` is assembled separately as `ln k + ln s − ln ε − ln ln
/// min(k,s)`, so the two sides share no intermediate beyond `ln t!` and
/// `ln k`.
pub fn sweep_phi2_recurrence<R: Real>(
    max: u64,
    epsilons: &[f64],
    tolerance: f64,
) -> Result<SweepSummary> {
    check_epsilons(epsilons)?;
    if max < 2 {
        return Err(Error::invalid("phi2-recurrence sweep needs max >= 2"));
    }
    let t = LogTables::<R>::new(max);
    let mut rows = Vec::new();
    for &eps in epsilons {
        let eps_b = Ball::<R>::from_f64(eps);
        let ln_eps = eps_b.ln();
        let ln_p: Vec<Ball<R>> = (0..=max)
            .into_par_iter()
            .map(|m| {
                if m < 2 {
                    ln_eps.clone()
                } else {
                    eps_b.mul(t.ln(m)).ln()
                }
            })
            .collect();
        let part: Vec<SweepSummary> = (2..=max)
            .into_par_iter()
            .map(|k| {
                let mut sum = SweepSummary::new("phi2-recurrence");
                let mut ln_prod = ln_p[1].clone();
                let mut prev = t.ln(k).sub(&ln_prod);
                for s in 2..=max {
                    ln_prod = ln_prod.add(&ln_p[k.min(s) as usize]);
                    let cur = t.ln(k).scale(s).add(t.ln_fact(s)).sub(&ln_prod);
                    let step = t.ln(k).add(t.ln(s)).sub(&ln_eps).sub(t.lnln(k.min(s)));
                    sum.push(recurrence_with(
                        k,
                        s,
                        eps,
                        tolerance,
                        &cur.sub(&prev),
                        &step,
                    ));
                    prev = cur;
                }
                sum
            })
            .collect();
        rows.extend(part);
    }
    Ok(SweepSummary::from_rows("phi2-recurrence", rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::checks::RECURRENCE_TOLERANCE;
    use crate::bounds::phi2;
    use crate::scalar::Hp;

    #[test]
    fn tables_match_direct_phi2() {
        let t = LogTables::<Hp>::new(40);
        let ln_eps = Ball::<Hp>::from_f64(0.05).ln();
        for k in [2, 7, 40] {
            let row = t.ln_phi2_row(k, &ln_eps, 40);
            for s in 1..=40u64 {
                let direct = phi2::<Hp>(k, s as i64, 0.05).unwrap();
                assert!(row[s as usize].sub(direct.ball().unwrap()).contains_zero());
            }
        }
    }

    #[test]
    fn js_sampling() {
        assert_eq!(stirling2_js(2), vec![1]);
        assert_eq!(stirling2_js(3), vec![1, 2]);
        assert_eq!(stirling2_js(10), vec![1, 5, 9]);
    }

    #[test]
    fn small_sweeps_hold() {
        assert!(sweep_stirling::<Hp>(200).unwrap().all_hold());
        assert!(sweep_binomial::<Hp>(40).unwrap().all_hold());
        assert!(sweep_stirling2::<Hp>(30, &DEFAULT_EPSILONS)
            .unwrap()
            .all_hold());
        assert!(sweep_product::<Hp>(300).unwrap().all_hold());
        assert!(sweep_phi2_upper::<Hp>(30, &DEFAULT_EPSILONS)
            .unwrap()
            .all_hold());
        let r = sweep_phi2_recurrence::<Hp>(30, &DEFAULT_EPSILONS, RECURRENCE_TOLERANCE).unwrap();
        assert!(r.all_hold(), "{:?}", r.failures.first());
        assert_eq!(r.checked, 3 * 29 * 29);
    }
}
