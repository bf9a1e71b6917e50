//! Randomized verification runs for the two curvature results.
//!
//! Each trial draws a parameter set, sweeps a grid, and checks:
//!
//! * the curvature sign (VES) or flatness (Kadiyala) observed through the
//!   autodiff pipeline against the predicted one,
//! * closed-form curvature against autodiff curvature,
//! * positivity of the closed-form denominators,
//! * agreement between the two algebraic forms of `Den_F` / `T2`.
//!
//! Violations are collected, never thrown, so one bad draw cannot hide
//! another.

use serde::Serialize;

use crate::curvature::{
    kadiyala_curvature_closed, kadiyala_deng_terms, kadiyala_is_developable, kadiyala_t2,
    kadiyala_t2_terms, ves_curvature_closed, ves_denf, ves_denf_grouped, ves_theorem1_verdict,
    DevelopabilityReason, DevelopabilityVerdict, ReturnsToScale, Theorem1Prediction,
};
use crate::harness::grid::GridSpec;
use crate::harness::sampling::ParamSampler;
use crate::models::{DomainMode, HeightField, KadiyalaParams, VesParams};
use crate::surface::{curvature_of, SignClass, DEFAULT_TOL_K};

/// `|K_closed − K_autodiff| ≤ CLOSED_FORM_RTOL · (1 + |K_autodiff|)`
pub const CLOSED_FORM_RTOL: f64 = 1e-7;
/// Agreement between two algebraic forms of the same denominator or factor.
pub const ALT_FORM_RTOL: f64 = 1e-10;
/// A non-flat surface must show `|K| > CONVERSE_FACTOR · tol` somewhere.
pub const CONVERSE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub grid: GridSpec,
    pub tol_k: f64,
}

impl VerifyConfig {
    pub fn new(trials: usize, seed: u64, grid: GridSpec) -> Self {
        Self {
            trials,
            seed,
            grid,
            tol_k: DEFAULT_TOL_K,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub stratum: &'static str,
    pub params: serde_json::Value,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumTally {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub theorem: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub points_checked: usize,
    /// Largest `|K_closed − K_autodiff| / (1 + |K_autodiff|)` seen.
    pub worst_closed_deviation: f64,
    /// Smallest closed-form denominator seen (`Den_F` or `Den_G`).
    pub min_denominator: Option<f64>,
    pub positivity_violations: usize,
    pub strata: Vec<StratumTally>,
    pub failures: Vec<TrialFailure>,
}

impl VerificationSummary {
    fn empty(theorem: &'static str, seed: u64) -> Self {
        Self {
            theorem,
            seed,
            trials: 0,
            passed: 0,
            failed: 0,
            points_checked: 0,
            worst_closed_deviation: 0.0,
            min_denominator: None,
            positivity_violations: 0,
            strata: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, stratum: &'static str, outcome: TrialOutcome, params: serde_json::Value) {
        let trial = self.trials;
        self.trials += 1;
        self.points_checked += outcome.points;
        self.worst_closed_deviation = self.worst_closed_deviation.max(outcome.worst_closed);
        if let Some(d) = outcome.min_den {
            self.min_denominator = Some(self.min_denominator.map_or(d, |m| m.min(d)));
        }
        self.positivity_violations += outcome.positivity_violations;
        let tally = match self.strata.iter_mut().find(|s| s.name == stratum) {
            Some(t) => t,
            None => {
                self.strata.push(StratumTally {
                    name: stratum,
                    trials: 0,
                    passed: 0,
                });
                self.strata.last_mut().unwrap()
            }
        };
        tally.trials += 1;
        if outcome.reasons.is_empty() {
            tally.passed += 1;
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(TrialFailure {
                trial,
                stratum,
                params,
                reasons: outcome.reasons,
            });
        }
    }
}

#[derive(Debug, Default)]
struct TrialOutcome {
    points: usize,
    worst_closed: f64,
    min_den: Option<f64>,
    positivity_violations: usize,
    reasons: Vec<String>,
}

impl TrialOutcome {
    fn fail(&mut self, reason: String) {
        // Cap per-trial detail; the counts still reflect every point.
        if self.reasons.len() < 8 {
            self.reasons.push(reason);
        }
    }

    fn saw_denominator(&mut self, d: f64) {
        self.min_den = Some(self.min_den.map_or(d, |m| m.min(d)));
    }

    fn check_closed(&mut self, u: f64, v: f64, k_auto: f64, k_closed: f64) {
        let dev = (k_closed - k_auto).abs() / (1.0 + k_auto.abs());
        self.worst_closed = self.worst_closed.max(dev);
        if !(dev <= CLOSED_FORM_RTOL) {
            self.fail(format!(
                "closed-form K {k_closed:e} vs autodiff {k_auto:e} at ({u}, {v})"
            ));
        }
    }
}

/// `T2` with every coefficient monomial replaced by its absolute value. The
/// β-polynomial coefficients cancel internally (to zero when `β1 + β2 = 1`),
/// so this bounds the rounding error of either algebraic form.
fn t2_magnitude(p: &KadiyalaParams, u: f64, v: f64) -> f64 {
    let (k1, k2, k3) = (p.k1(), p.k2(), p.k3());
    let (b1, b2) = (p.beta1().abs(), p.beta2().abs());
    let s = p.beta_sum();
    let c_uu = 2.0 * b2.powi(3) + 2.0 * b1 * b2 * b2 + 2.0 * b2 * b2 + 2.0 * b1 * b2;
    let c_uv = 4.0 * b1 * b2;
    let c_mix = b1.powi(3)
        + 3.0 * b2 * b1 * b1
        + b1 * b1
        + 3.0 * b2 * b2 * b1
        + 2.0 * b2 * b1
        + b2.powi(3)
        + b2 * b2;
    let c_vv = 2.0 * b1.powi(3) + 2.0 * b2 * b1 * b1 + 2.0 * b1 * b1 + 2.0 * b2 * b1;
    c_uu * k1 * k2 * u.powf(s)
        + c_uv * k2 * k2 * u.powf(p.beta1()) * v.powf(p.beta2())
        + c_mix * k1 * k3 * u.powf(p.beta2()) * v.powf(p.beta1())
        + c_vv * k2 * k3 * v.powf(s)
}

fn rel_gap(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------------------

fn ves_trial(
    p: &VesParams,
    points: &[(f64, f64)],
    tol_k: f64,
    predicted: Theorem1Prediction,
) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let mut ks = Vec::with_capacity(points.len());
    for &(u, v) in points {
        if !p.domain_valid(u, v, DomainMode::NonStrict).unwrap_or(false) {
            continue;
        }
        out.points += 1;
        let k_auto = match p.jet(u, v).and_then(|j| curvature_of(&j)) {
            Ok(k) => k,
            Err(e) => {
                out.fail(format!("autodiff failed at ({u}, {v}): {e}"));
                continue;
            }
        };
        ks.push((u, v, k_auto));
        match (ves_denf(p, u, v), ves_denf_grouped(p, u, v)) {
            (Ok(a), Ok(b)) => {
                out.saw_denominator(a.min(b));
                if !(a > 0.0 && b > 0.0) {
                    out.positivity_violations += 1;
                    out.fail(format!("Den_F not positive at ({u}, {v}): {a:e}, {b:e}"));
                }
                if !(rel_gap(a, b, a.abs().max(b.abs())) <= ALT_FORM_RTOL) {
                    out.fail(format!(
                        "Den_F forms disagree at ({u}, {v}): {a:e} vs {b:e}"
                    ));
                }
            }
            (Err(e), _) | (_, Err(e)) => out.fail(format!("Den_F failed at ({u}, {v}): {e}")),
        }
        match ves_curvature_closed(p, u, v) {
            Ok(kc) => out.check_closed(u, v, k_auto, kc),
            Err(e) => out.fail(format!("closed-form K failed at ({u}, {v}): {e}")),
        }
    }
    if out.points == 0 {
        out.fail("no grid point lies in the domain".into());
        return out;
    }
    let scale = ks.iter().fold(0.0f64, |m, &(_, _, k)| m.max(k.abs()));
    let zero_band = tol_k * (1.0 + scale);
    for &(u, v, k) in &ks {
        let ok = match predicted.sign {
            SignClass::Zero => k.abs() <= zero_band,
            sign => SignClass::of(k) == sign,
        };
        if !ok {
            out.fail(format!(
                "K = {k:e} at ({u}, {v}) but predicted {} ({:?} returns)",
                predicted.sign, predicted.regime
            ));
        }
    }
    out
}

fn stratum_name(regime: ReturnsToScale) -> &'static str {
    match regime {
        ReturnsToScale::Decreasing => "decreasing",
        ReturnsToScale::Constant => "constant",
        ReturnsToScale::Increasing => "increasing",
    }
}

/// VES: returns to scale versus curvature sign, with a caller-supplied
/// predictor. Trials cycle through decreasing, constant and increasing
/// returns.
pub fn run_verify_theorem1_with(
    cfg: &VerifyConfig,
    predict: impl Fn(&VesParams) -> Theorem1Prediction,
) -> VerificationSummary {
    let mut summary = VerificationSummary::empty("theorem1_ves", cfg.seed);
    let points = cfg.grid.points();
    let mut sampler = ParamSampler::new(cfg.seed);
    let strata = [
        ReturnsToScale::Decreasing,
        ReturnsToScale::Constant,
        ReturnsToScale::Increasing,
    ];
    for i in 0..cfg.trials {
        let regime = strata[i % 3];
        let p = sampler.ves(Some(regime));
        let outcome = ves_trial(&p, &points, cfg.tol_k, predict(&p));
        summary.record(
            stratum_name(regime),
            outcome,
            serde_json::to_value(p).unwrap(),
        );
    }
    summary
}

pub fn run_verify_theorem1(trials: usize, seed: u64, grid: &GridSpec) -> VerificationSummary {
    run_verify_theorem1_with(
        &VerifyConfig::new(trials, seed, *grid),
        ves_theorem1_verdict,
    )
}

// ---------------------------------------------------------------------------

fn kadiyala_trial(
    p: &KadiyalaParams,
    points: &[(f64, f64)],
    tol_k: f64,
    verdict: DevelopabilityVerdict,
) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let mut max_k = 0.0f64;
    let mut ks = Vec::with_capacity(points.len());
    for &(u, v) in points {
        if !p.in_domain(u, v) {
            continue;
        }
        out.points += 1;
        let k_auto = match p.jet(u, v).and_then(|j| curvature_of(&j)) {
            Ok(k) => k,
            Err(e) => {
                out.fail(format!("autodiff failed at ({u}, {v}): {e}"));
                continue;
            }
        };
        max_k = max_k.max(k_auto.abs());
        ks.push(k_auto);

        match kadiyala_deng_terms(p, u, v) {
            Ok(terms) => {
                let den: f64 = terms.iter().sum();
                out.saw_denominator(den);
                let bad_terms = terms.iter().filter(|a| !(**a >= 0.0)).count();
                if bad_terms > 0 || !(den > 0.0) {
                    out.positivity_violations += bad_terms.max(1);
                    out.fail(format!("Den_G terms {terms:?} at ({u}, {v})"));
                }
            }
            Err(e) => out.fail(format!("Den_G failed at ({u}, {v}): {e}")),
        }
        match (kadiyala_t2(p, u, v), kadiyala_t2_terms(p, u, v)) {
            (Ok(product), Ok(terms)) => {
                let collected: f64 = terms.iter().sum();
                let scale = t2_magnitude(p, u, v).max(product.abs());
                if !(rel_gap(product, collected, scale) <= ALT_FORM_RTOL) {
                    out.fail(format!(
                        "T2 forms disagree at ({u}, {v}): {product:e} vs {collected:e}"
                    ));
                }
            }
            (Err(e), _) | (_, Err(e)) => out.fail(format!("T2 failed at ({u}, {v}): {e}")),
        }
        match kadiyala_curvature_closed(p, u, v) {
            Ok(kc) => out.check_closed(u, v, k_auto, kc),
            Err(e) => out.fail(format!("closed-form K failed at ({u}, {v}): {e}")),
        }
    }
    if out.points == 0 {
        out.fail("no grid point lies in the domain".into());
        return out;
    }
    let band = tol_k * (1.0 + max_k);
    let flat = ks.iter().all(|k| k.abs() <= band);
    let curved = ks.iter().any(|k| k.abs() > CONVERSE_FACTOR * band);
    if verdict.developable && !flat {
        out.fail(format!(
            "predicted flat ({}) but max |K| = {max_k:e} exceeds {band:e}",
            verdict.reason.as_str()
        ));
    }
    if !verdict.developable && !curved {
        out.fail(format!(
            "predicted curved but no |K| exceeds {:e} (max |K| = {max_k:e})",
            CONVERSE_FACTOR * band
        ));
    }
    out
}

/// Kadiyala: `trials` forced draws for each of the three flat-surface
/// conditions, then `trials` generic draws for the converse, with a
/// caller-supplied developability predicate.
pub fn run_verify_theorem2_with(
    cfg: &VerifyConfig,
    decide: impl Fn(&KadiyalaParams) -> DevelopabilityVerdict,
) -> VerificationSummary {
    let mut summary = VerificationSummary::empty("theorem2_kadiyala", cfg.seed);
    let points = cfg.grid.points();
    let mut sampler = ParamSampler::new(cfg.seed);
    let categories = [
        Some(DevelopabilityReason::ConstantReturns),
        Some(DevelopabilityReason::K2ZeroUnitSum),
        Some(DevelopabilityReason::BetaOneRankOne),
        None,
    ];
    for force in categories {
        let stratum = force.map_or("generic", |r| r.as_str());
        for _ in 0..cfg.trials {
            let p = match force {
                Some(r) => sampler.kadiyala(Some(r)),
                None => sampler.kadiyala_generic(),
            };
            let mut outcome = kadiyala_trial(&p, &points, cfg.tol_k, decide(&p));
            let verdict = decide(&p);
            let expect_flat = force.is_some();
            if verdict.developable != expect_flat {
                outcome.fail(format!(
                    "predicate returned {} for a {stratum} draw",
                    verdict.reason.as_str()
                ));
            }
            summary.record(stratum, outcome, serde_json::to_value(p).unwrap());
        }
    }
    summary
}

pub fn run_verify_theorem2(trials: usize, seed: u64, grid: &GridSpec) -> VerificationSummary {
    run_verify_theorem2_with(
        &VerifyConfig::new(trials, seed, *grid),
        kadiyala_is_developable,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> GridSpec {
        GridSpec::new(
            (0.1, 10.0, 6),
            (0.1, 10.0, 6),
            crate::harness::grid::Spacing::Logarithmic,
        )
        .unwrap()
    }

    #[test]
    fn zero_trials_is_empty() {
        let s = run_verify_theorem1(0, 1, &small_grid());
        assert_eq!((s.trials, s.passed, s.failed), (0, 0, 0));
        assert!(s.failures.is_empty() && s.strata.is_empty());
        let s = run_verify_theorem2(0, 1, &small_grid());
        assert_eq!(s.trials, 0);
        assert!(s.all_passed());
    }

    #[test]
    fn small_runs_pass() {
        let s = run_verify_theorem1(30, 5, &small_grid());
        assert!(s.all_passed(), "{:#?}", s.failures);
        assert_eq!(s.strata.len(), 3);
        let s = run_verify_theorem2(10, 5, &small_grid());
        assert!(s.all_passed(), "{:#?}", s.failures);
        assert_eq!(s.trials, 40);
    }

    #[test]
    fn corrupted_sign_convention_is_caught() {
        let cfg = VerifyConfig::new(9, 2, small_grid());
        let flipped = |p: &VesParams| {
            let mut pred = ves_theorem1_verdict(p);
            pred.sign = match pred.sign {
                SignClass::Positive => SignClass::Negative,
                SignClass::Negative => SignClass::Positive,
                SignClass::Zero => SignClass::Zero,
            };
            pred
        };
        let s = run_verify_theorem1_with(&cfg, flipped);
        assert_eq!(s.failed, 6);
        assert!(s.failures.iter().all(|f| f.stratum != "constant"));
    }

    #[test]
    fn corrupted_condition_check_is_caught() {
        let cfg = VerifyConfig::new(5, 2, small_grid());
        // Forgets the rank-one condition.
        let sloppy = |p: &KadiyalaParams| {
            let v = kadiyala_is_developable(p);
            if v.reason == DevelopabilityReason::BetaOneRankOne {
                DevelopabilityVerdict {
                    developable: false,
                    reason: DevelopabilityReason::NotDevelopable,
                }
            } else {
                v
            }
        };
        let s = run_verify_theorem2_with(&cfg, sloppy);
        assert_eq!(s.failed, 5);
        assert!(s.failures.iter().all(|f| f.stratum == "beta_one_rank_one"));
    }
}
