//! The property suite run by `verify`: one [`CheckResult`] per property with
//! its worst observed margin and, on failure, a witness.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::fourier::{convolve_tilde, fourier_spans, idempotent_sum, plateau};
use super::norms::{b_norm_with, sigma_r_norm};
use super::psd::{certify_restricted_extendible, is_restricted_pd};
use super::wedderburn::{wedderburn_blocks_seeded, BlockDecomposition};
use crate::cfunction::CFunction;
use crate::error::Result;
use crate::groupoid::{
    build_associated_groupoid, check_groupoid, groupoid_coefficient, is_positive_definite_groupoid,
    left_regular_groupoid_rep, Groupoid, GroupoidRep,
};
use crate::linalg::{self, CMatrix};
use crate::random::{complex_vec, derive_seed, seeded, SeededRng};
use crate::representations::{
    check_restricted_rep, coefficient, direct_sum, fiber_bases, gns, groupoid_to_rep, rep_to_groupoid, section_of,
    tensor,
};
use crate::restricted::{build_restricted_semigroup, lambda_r, MatrixRep};
use crate::semigroup::{check_inverse_semigroup, idempotents, InverseSemigroup};
use crate::tolerance::Tolerance;
use crate::C64;

pub const REPORT_SCHEMA: &str = "rsalg-report/1";
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol: Tolerance,
    pub trials: usize,
    pub pool_size: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            tol: Tolerance::default(),
            trials: 100,
            pool_size: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Worst observed value of the checked quantity.
    pub margin: f64,
    /// Bound the margin is compared against.
    pub tolerance: f64,
    pub samples: usize,
    pub witness: Option<String>,
    pub details: serde_json::Value,
}

impl CheckResult {
    fn new(name: &str, margin: f64, tolerance: f64, samples: usize) -> Self {
        CheckResult {
            name: name.into(),
            status: if margin <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            margin,
            tolerance,
            samples,
            witness: None,
            details: serde_json::Value::Null,
        }
    }

    fn witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }

    fn details(mut self, d: serde_json::Value) -> Self {
        self.details = d;
        self
    }

    fn fail_if(mut self, failed: bool) -> Self {
        if failed {
            self.status = Status::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupReport {
    pub name: String,
    pub size: usize,
    pub checks: Vec<CheckResult>,
}

impl SemigroupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub seed: u64,
    pub tolerance: f64,
    pub passed: bool,
    pub semigroups: Vec<SemigroupReport>,
}

impl SuiteReport {
    /// Sorts by semigroup name so assembly order does not matter.
    pub fn assemble(config: &VerifyConfig, mut semigroups: Vec<SemigroupReport>) -> Self {
        semigroups.sort_by(|a, b| a.name.cmp(&b.name));
        SuiteReport {
            schema: REPORT_SCHEMA.into(),
            seed: config.seed,
            tolerance: config.tol.base,
            passed: semigroups.iter().all(SemigroupReport::passed),
            semigroups,
        }
    }
}

fn rng_for(config: &VerifyConfig, s: &InverseSemigroup, label: &str) -> SeededRng {
    seeded(derive_seed(config.seed, &format!("{}/{label}", s.name())))
}

fn random_fn(s: &InverseSemigroup, rng: &mut SeededRng) -> CFunction {
    CFunction::new(s.name(), complex_vec(rng, s.n()))
}

/// `u(x*) = conj u(x)`.
fn hermitian_symmetric(s: &InverseSemigroup, values: &[C64]) -> CFunction {
    let v = s
        .elements()
        .map(|x| (values[x] + values[s.star(x)].conj()) * 0.5)
        .collect();
    CFunction::new(s.name(), v)
}

/// Runs the full property suite on one semigroup.
pub fn verify_semigroup(s: &InverseSemigroup, config: &VerifyConfig) -> Result<SemigroupReport> {
    let blocks = wedderburn_blocks_seeded(s, derive_seed(config.seed, s.name()))?;
    let pool = positive_pool(s, config)?;
    let checks = vec![
        axioms_check(s),
        identity_value_check(s, &blocks, &pool, config)?,
        convolution_norm_bound(s, &blocks, config)?,
        fourier_check(s, config)?,
        peak_check(s)?,
        plateau_check(s, config)?,
        separation_check(s, config)?,
        gns_check(s, &pool, config)?,
        bundle_check(s, &pool, config)?,
        cone_identification(s, config)?,
        duality_check(s, &blocks, config)?,
        submultiplicativity_check(s, &blocks, config)?,
    ];
    Ok(SemigroupReport {
        name: s.name().into(),
        size: s.n(),
        checks,
    })
}

// ---------------------------------------------------------------------------
// Sample pool

#[derive(Debug, Clone)]
pub struct PoolMember {
    pub description: String,
    pub u: CFunction,
}

/// Restricted positive definite, extendible functions: regular coefficients,
/// plateaus over singletons and point masses at idempotents, each certified.
pub fn positive_pool(s: &InverseSemigroup, config: &VerifyConfig) -> Result<Vec<PoolMember>> {
    let mut rng = rng_for(config, s, "pool");
    let lambda = lambda_r(s);
    let mut candidates = Vec::new();
    for k in 0..config.pool_size {
        let v = complex_vec(&mut rng, s.n());
        candidates.push((format!("regular coefficient {k}"), coefficient(s, &lambda, &v, &v)?));
    }
    for x in s.elements() {
        candidates.push((format!("plateau {{{x}}}"), plateau(s, &[x], config.tol)?.u));
    }
    for e in idempotents(s).iter() {
        candidates.push((format!("point mass {e}"), CFunction::delta(s.name(), s.n(), e)));
    }
    let mut pool = Vec::new();
    for (description, u) in candidates {
        let (cert, ext) = certify_restricted_extendible(s, &u, config.tol)?;
        if cert.is_member() && ext.is_some_and(|e| e.extendible) {
            pool.push(PoolMember { description, u });
        }
    }
    Ok(pool)
}

// ---------------------------------------------------------------------------
// Checks

fn axioms_check(s: &InverseSemigroup) -> CheckResult {
    let sr = build_restricted_semigroup(s).sr;
    let sr_report = check_inverse_semigroup(&sr.to_raw());
    let sa = build_associated_groupoid(s);
    let sa_report = check_groupoid(&sa);
    let mut failures = Vec::new();
    match &sr_report {
        Ok(r) if r.valid => {}
        Ok(r) => failures.push(format!("restricted semigroup: {}", r.summary())),
        Err(e) => failures.push(format!("restricted semigroup: {e}")),
    }
    if sr.zero().is_none() {
        failures.push("restricted semigroup has no zero".into());
    }
    if !sa_report.valid {
        failures.push(format!("associated groupoid: {}", sa_report.summary()));
    }
    CheckResult::new("axioms", failures.len() as f64, 0.0, 2)
        .witness((!failures.is_empty()).then(|| failures.join("; ")))
        .details(json!({
            "restricted_size": sr.n(),
            "units": sa.units().len(),
        }))
}

/// The dual norm of a restricted positive definite extendible function
/// against its value at the identity. The value at the unit of the restricted
/// algebra (the sum over idempotents) is reported alongside.
fn identity_value_check(
    s: &InverseSemigroup,
    blocks: &BlockDecomposition,
    pool: &[PoolMember],
    config: &VerifyConfig,
) -> Result<CheckResult> {
    let Some(one) = s.identity() else {
        let mut r = CheckResult::new("dual_norm_equals_identity_value", 0.0, 1e-7, 0);
        r.status = Status::Skipped;
        return Ok(r.witness(Some("no identity element".into())));
    };
    let mut worst = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut witness = None;
    for m in pool {
        let norm = b_norm_with(s, blocks, &m.u)?.value;
        let at_one = m.u[one].re;
        let gap = (norm - at_one).abs() / at_one.max(1.0);
        let sum = idempotent_sum(s, &m.u).re;
        worst_sum = worst_sum.max((norm - sum).abs() / sum.max(1.0));
        if gap > worst {
            worst = gap;
            if gap > 1e-7 {
                witness = Some(format!(
                    "{}: norm {norm:.9}, value at identity {at_one:.9}",
                    m.description
                ));
            }
        }
    }
    let _ = config;
    Ok(
        CheckResult::new("dual_norm_equals_identity_value", worst, 1e-7, pool.len())
            .witness(witness)
            .details(json!({ "idempotent_sum_margin": worst_sum })),
    )
}

/// `||f . g~|| <= ||f||_2 ||g||_2` on random pairs, with equality at the
/// identity point mass and the zero case.
pub fn convolution_norm_bound(
    s: &InverseSemigroup,
    blocks: &BlockDecomposition,
    config: &VerifyConfig,
) -> Result<CheckResult> {
    let mut rng = rng_for(config, s, "convolution_bound");
    let mut max_ratio = 0.0f64;
    for _ in 0..config.trials {
        let f = random_fn(s, &mut rng);
        let g = random_fn(s, &mut rng);
        let norm = b_norm_with(s, blocks, &convolve_tilde(s, &f, &g)?)?.value;
        max_ratio = max_ratio.max(norm / (f.norm2() * g.norm2()));
    }
    let zero = CFunction::zeros(s.name(), s.n());
    let zero_norm = b_norm_with(s, blocks, &convolve_tilde(s, &zero, &random_fn(s, &mut rng))?)?.value;
    let (equality_gap, witness) = match s.identity() {
        Some(one) => {
            let d = CFunction::delta(s.name(), s.n(), one);
            let v = b_norm_with(s, blocks, &convolve_tilde(s, &d, &d)?)?.value;
            ((v - 1.0).abs(), None)
        }
        None => (0.0, Some("no identity element; equality case skipped".into())),
    };
    Ok(
        CheckResult::new("convolution_norm_bound", max_ratio - 1.0, 1e-7, config.trials)
            .fail_if(equality_gap > 1e-7 || zero_norm != 0.0)
            .witness(witness)
            .details(json!({
                "max_ratio": max_ratio,
                "identity_equality_gap": equality_gap,
                "zero_norm": zero_norm,
            })),
    )
}

fn fourier_check(s: &InverseSemigroup, config: &VerifyConfig) -> Result<CheckResult> {
    let seed = derive_seed(config.seed, &format!("{}/fourier", s.name()));
    let r = fourier_spans(s, seed, config.tol)?;
    let residual = r.spans.iter().map(|x| x.residual_to_first).fold(0.0, f64::max);
    let witness = r
        .outside_unrestricted
        .first()
        .map(|c| {
            format!(
                "{} of {} restricted samples fail the unrestricted test, e.g. {} (min eigenvalue {:.6})",
                r.outside_unrestricted.len(),
                r.cone_samples,
                c.description,
                c.unrestricted_min_eigenvalue
            )
        })
        .or_else(|| (!r.first_span_full).then(|| format!("rank of first family is {}", r.spans[0].rank)));
    Ok(CheckResult::new("fourier_spans", residual, 1e-9, r.cone_samples)
        .fail_if(!r.passed())
        .witness(witness)
        .details(serde_json::to_value(&r).expect("span report serializes")))
}

/// `(delta_{x*x} . delta_{x*}~)(x) = 1` for every `x`.
pub fn peak_values(s: &InverseSemigroup) -> Result<Vec<(usize, C64)>> {
    s.elements()
        .map(|x| {
            let a = CFunction::delta(s.name(), s.n(), s.source(x));
            let b = CFunction::delta(s.name(), s.n(), s.star(x));
            Ok((x, convolve_tilde(s, &a, &b)?[x]))
        })
        .collect()
}

fn peak_check(s: &InverseSemigroup) -> Result<CheckResult> {
    let values = peak_values(s)?;
    let misses: Vec<_> = values.iter().filter(|(_, v)| *v != C64::new(1.0, 0.0)).collect();
    let worst = values
        .iter()
        .map(|(_, v)| (v - C64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    let witness = (!misses.is_empty()).then(|| {
        let list: Vec<String> = misses.iter().map(|(x, v)| format!("{x} -> {}", v.re)).collect();
        format!("value at x differs from 1 for: {}", list.join(", "))
    });
    Ok(CheckResult::new("peak_functions", worst, 0.0, values.len()).witness(witness))
}

fn plateau_check(s: &InverseSemigroup, config: &VerifyConfig) -> Result<CheckResult> {
    let mut sets: Vec<Vec<usize>> = s.elements().map(|x| vec![x]).collect();
    if s.n() >= 2 {
        let mut rng = rng_for(config, s, "plateau");
        let a = rng.random_range(0..s.n());
        let b = (a + 1 + rng.random_range(0..s.n() - 1)) % s.n();
        sets.push(vec![a.min(b), a.max(b)]);
    }
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut reports = Vec::new();
    for k in &sets {
        let p = plateau(s, k, config.tol)?;
        worst = worst.max(p.indicator_deviation).max(p.deviation_on_k);
        if !p.passed() {
            failures.push(format!(
                "K={:?}: u={:?}, product set {:?}",
                p.k,
                p.u.values.iter().map(|v| v.re).collect::<Vec<_>>(),
                p.product_set
            ));
        }
        reports.push(json!({
            "k": p.k,
            "equals_indicator": p.equals_indicator,
            "one_on_k": p.one_on_k,
            "positive": p.certificate.is_member(),
        }));
    }
    Ok(CheckResult::new("plateaus", worst, 0.0, sets.len())
        .fail_if(!failures.is_empty())
        .witness(failures.first().cloned())
        .details(json!({ "failures": failures.len(), "sets": reports })))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub x: usize,
    pub y: usize,
    pub witness: String,
    pub positive: bool,
    pub at_x: C64,
    pub at_y: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub peaks: Vec<(usize, C64)>,
    pub pairs: Vec<SeparationWitness>,
    pub unseparated: Vec<(usize, usize)>,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.unseparated.is_empty()
    }
}

/// Finds, for every pair `x != y`, a function taking different values at
/// them: first among restricted positive definite functions (point masses at
/// idempotents, plateaus, squares of two-point sums), then among the
/// convolutions `delta_a . delta_b~`.
pub fn separation_suite(s: &InverseSemigroup, tol: Tolerance) -> Result<SeparationReport> {
    let n = s.n();
    let delta = |x| CFunction::delta(s.name(), n, x);
    let mut pool: Vec<(String, bool, CFunction)> = Vec::new();
    for e in idempotents(s).iter() {
        pool.push((format!("delta_{e}"), true, delta(e)));
    }
    for x in s.elements() {
        pool.push((format!("plateau {{{x}}}"), true, plateau(s, &[x], tol)?.u));
    }
    for a in s.elements() {
        for b in a + 1..n {
            let h = delta(a).add(&delta(b));
            pool.push((
                format!("h . h~ with h = delta_{a} + delta_{b}"),
                true,
                convolve_tilde(s, &h, &h)?,
            ));
        }
    }
    for a in s.elements() {
        for b in s.elements() {
            pool.push((
                format!("delta_{a} . delta_{b}~"),
                false,
                convolve_tilde(s, &delta(a), &delta(b))?,
            ));
        }
    }
    for (_, positive, u) in pool.iter_mut().filter(|p| p.1) {
        *positive = is_restricted_pd(s, u, tol)?.is_member();
    }
    let mut pairs = Vec::new();
    let mut unseparated = Vec::new();
    for x in s.elements() {
        for y in x + 1..n {
            match pool.iter().find(|(_, _, u)| (u[x] - u[y]).norm() > tol.base) {
                Some((name, positive, u)) => pairs.push(SeparationWitness {
                    x,
                    y,
                    witness: name.clone(),
                    positive: *positive,
                    at_x: u[x],
                    at_y: u[y],
                }),
                None => unseparated.push((x, y)),
            }
        }
    }
    Ok(SeparationReport {
        peaks: peak_values(s)?,
        pairs,
        unseparated,
    })
}

fn separation_check(s: &InverseSemigroup, config: &VerifyConfig) -> Result<CheckResult> {
    let r = separation_suite(s, config.tol)?;
    let positive = r.pairs.iter().filter(|p| p.positive).count();
    Ok(CheckResult::new(
        "point_separation",
        r.unseparated.len() as f64,
        0.0,
        r.pairs.len() + r.unseparated.len(),
    )
    .witness(
        r.unseparated
            .first()
            .map(|(x, y)| format!("no witness separates {x} and {y}")),
    )
    .details(json!({
        "pairs": r.pairs.len(),
        "positive_witnesses": positive,
        "witnesses": r.pairs,
    })))
}

fn gns_check(s: &InverseSemigroup, pool: &[PoolMember], config: &VerifyConfig) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    let mut worst_zero = 0.0f64;
    let mut worst_shift = 0.0f64;
    let mut witness = None;
    for m in pool {
        let g = gns(s, &m.u, config.tol)?;
        let scale = m.u.sup_norm().max(1.0);
        let rel = g.round_trip_error / scale;
        worst_zero = worst_zero.max(g.zero_residual / scale);
        worst_shift = worst_shift.max(g.unit_shift_error / scale);
        if rel > worst {
            worst = rel;
            witness = (rel > 1e-8).then(|| format!("{}: error {rel:.3e}", m.description));
        }
        let rep_ok = check_restricted_rep(s, &g.rep, Tolerance::new(1e-8))?.ok();
        if !rep_ok {
            witness = Some(format!(
                "{}: GNS output is not a restricted representation",
                m.description
            ));
            worst = f64::INFINITY;
        }
    }
    Ok(CheckResult::new("gns_round_trip", worst, 1e-8, pool.len())
        .fail_if(worst_zero > 1e-8)
        .witness(witness)
        .details(json!({
            "zero_residual": worst_zero,
            "unit_shift_error": worst_shift,
        })))
}

/// Coefficients of `pi` against those of the bundle read off from it and of
/// the representation rebuilt from that bundle.
pub fn forward_dictionary_error(
    s: &InverseSemigroup,
    g: &Groupoid,
    pi: &MatrixRep,
    xi: &[C64],
    eta: &[C64],
    tol: Tolerance,
) -> Result<f64> {
    let bases = fiber_bases(s, pi, tol)?;
    let bundle = rep_to_groupoid(s, pi, tol)?;
    let (sx, se) = (section_of(&bases, xi), section_of(&bases, eta));
    let original = coefficient(s, pi, xi, eta)?;
    let on_bundle = groupoid_coefficient(g, &bundle, &sx, &se)?;
    let rebuilt = coefficient(s, &groupoid_to_rep(s, &bundle)?, &sx, &se)?;
    Ok(original.max_abs_diff(&on_bundle).max(original.max_abs_diff(&rebuilt)))
}

/// Coefficients of a bundle against those of the bundle recovered from its
/// direct-sum representation.
pub fn backward_dictionary_error(
    s: &InverseSemigroup,
    g: &Groupoid,
    bundle: &GroupoidRep,
    xi: &[C64],
    eta: &[C64],
    tol: Tolerance,
) -> Result<f64> {
    let pi = groupoid_to_rep(s, bundle)?;
    let bases = fiber_bases(s, &pi, tol)?;
    let recovered = rep_to_groupoid(s, &pi, tol)?;
    let original = groupoid_coefficient(g, bundle, xi, eta)?;
    let back = groupoid_coefficient(g, &recovered, &section_of(&bases, xi), &section_of(&bases, eta))?;
    Ok(original.max_abs_diff(&back))
}

fn bundle_check(s: &InverseSemigroup, pool: &[PoolMember], config: &VerifyConfig) -> Result<CheckResult> {
    let g = build_associated_groupoid(s);
    let mut rng = rng_for(config, s, "bundle");
    let mut reps = vec![("regular".to_string(), lambda_r(s))];
    if let Some(m) = pool.first() {
        reps.push((format!("GNS of {}", m.description), gns(s, &m.u, config.tol)?.rep));
    }
    let mut worst = 0.0f64;
    let mut witness = None;
    let mut samples = 0;
    for (label, pi) in &reps {
        let xi = complex_vec(&mut rng, pi.dim);
        let eta = complex_vec(&mut rng, pi.dim);
        let scale = (linalg::vector(&xi).norm() * linalg::vector(&eta).norm()).max(1.0);
        let fwd = forward_dictionary_error(s, &g, pi, &xi, &eta, config.tol)? / scale;
        let bundle = rep_to_groupoid(s, pi, config.tol)?;
        let total = bundle.total_dim();
        let (bx, be) = (complex_vec(&mut rng, total), complex_vec(&mut rng, total));
        let bscale = (linalg::vector(&bx).norm() * linalg::vector(&be).norm()).max(1.0);
        let bwd = backward_dictionary_error(s, &g, &bundle, &bx, &be, config.tol)? / bscale;
        samples += 2;
        let e = fwd.max(bwd);
        if e > worst {
            worst = e;
            witness = (e > 1e-9).then(|| format!("{label}: error {e:.3e}"));
        }
    }
    let regular_bundle = left_regular_groupoid_rep(&g);
    let total = regular_bundle.total_dim();
    let (bx, be) = (complex_vec(&mut rng, total), complex_vec(&mut rng, total));
    let bscale = (linalg::vector(&bx).norm() * linalg::vector(&be).norm()).max(1.0);
    let e = backward_dictionary_error(s, &g, &regular_bundle, &bx, &be, config.tol)? / bscale;
    samples += 1;
    if e > worst {
        worst = e;
        witness = (e > 1e-9).then(|| format!("groupoid left regular: error {e:.3e}"));
    }
    Ok(CheckResult::new("bundle_dictionary", worst, 1e-9, samples).witness(witness))
}

/// Restricted positive definiteness on `S` against positive definiteness on
/// the associated groupoid for random Hermitian-symmetric functions. Half of
/// the samples are perturbations of regular coefficients so both verdicts
/// occur; marginal cases are rerun at a tenfold tighter tolerance.
pub fn cone_identification(s: &InverseSemigroup, config: &VerifyConfig) -> Result<CheckResult> {
    let g = build_associated_groupoid(s);
    let lambda = lambda_r(s);
    let mut rng = rng_for(config, s, "cones");
    let (mut disagreements, mut positives, mut reruns) = (Vec::new(), 0, 0);
    for k in 0..config.trials {
        let noise = complex_vec(&mut rng, s.n());
        let values: Vec<C64> = if k % 2 == 0 {
            noise
        } else {
            let v = complex_vec(&mut rng, s.n());
            let base = coefficient(s, &lambda, &v, &v)?;
            let t = (k as f64) / (config.trials as f64);
            base.values.iter().zip(&noise).map(|(b, e)| b + e * t).collect()
        };
        let u = hermitian_symmetric(s, &values);
        let mut tol = config.tol;
        let mut a = is_restricted_pd(s, &u, tol)?;
        let mut b = is_positive_definite_groupoid(&g, &u, tol)?;
        if a.marginal || b.marginal {
            reruns += 1;
            tol = tol.tighter(10.0);
            a = is_restricted_pd(s, &u, tol)?;
            b = is_positive_definite_groupoid(&g, &u, tol)?;
        }
        if a.is_member() {
            positives += 1;
        }
        if a.is_member() != b.positive {
            disagreements.push(format!(
                "sample {k}: restricted min eigenvalue {:.3e}, groupoid min eigenvalue {:.3e}",
                a.min_eigenvalue,
                b.min_eigenvalue()
            ));
        }
    }
    Ok(
        CheckResult::new("cone_identification", disagreements.len() as f64, 0.0, config.trials)
            .witness(disagreements.first().cloned())
            .details(json!({ "positive_verdicts": positives, "marginal_reruns": reruns })),
    )
}

fn unit_vector(rng: &mut SeededRng, dim: usize) -> Vec<C64> {
    let v = complex_vec(rng, dim);
    let norm = linalg::vector(&v).norm();
    v.into_iter().map(|z| z / norm).collect()
}

/// `|sum f u| <= ||f|| ||u||` on random pairs, coefficient bounds
/// `||<pi(.) xi, eta>|| <= ||xi|| ||eta||` for the regular representation, its
/// double and its tensor square, and the regular norm dominating the norm
/// under each of those representations.
pub fn duality_check(s: &InverseSemigroup, blocks: &BlockDecomposition, config: &VerifyConfig) -> Result<CheckResult> {
    let mut rng = rng_for(config, s, "duality");
    let mut worst_pairing = 0.0f64;
    for _ in 0..config.trials {
        let f = random_fn(s, &mut rng);
        let u = random_fn(s, &mut rng);
        let bound = sigma_r_norm(s, &f)?.value * b_norm_with(s, blocks, &u)?.value;
        worst_pairing = worst_pairing.max(f.pairing(&u).norm() / bound - 1.0);
    }
    let lambda = lambda_r(s);
    let reps = [
        ("regular", lambda.clone()),
        ("regular doubled", direct_sum(&lambda, &lambda)?),
        ("regular tensor square", tensor(&lambda, &lambda)?),
    ];
    let mut worst_coefficient = f64::NEG_INFINITY;
    let mut worst_domination = f64::NEG_INFINITY;
    let mut witness = None;
    for (label, pi) in &reps {
        if !check_restricted_rep(s, pi, Tolerance::new(1e-10))?.ok() {
            witness = Some(format!("{label} fails the representation check"));
            worst_coefficient = f64::INFINITY;
            continue;
        }
        for _ in 0..5 {
            let xi = unit_vector(&mut rng, pi.dim);
            let eta = unit_vector(&mut rng, pi.dim);
            let u = coefficient(s, pi, &xi, &eta)?;
            let excess = b_norm_with(s, blocks, &u)?.value - 1.0;
            if excess > worst_coefficient {
                worst_coefficient = excess;
                if excess > 1e-7 {
                    witness = Some(format!("{label}: coefficient norm exceeds 1 by {excess:.3e}"));
                }
            }
            let f = random_fn(s, &mut rng);
            let image: CMatrix = pi.integrate(&f)?;
            let ratio = linalg::operator_norm(&image) / sigma_r_norm(s, &f)?.value - 1.0;
            worst_domination = worst_domination.max(ratio);
        }
    }
    let margin = worst_coefficient.max(0.0);
    Ok(CheckResult::new("duality", margin, 1e-7, config.trials + 15)
        .fail_if(worst_pairing > 1e-7 || worst_domination > 1e-7)
        .witness(witness)
        .details(json!({
            "pairing_excess": worst_pairing,
            "coefficient_excess": worst_coefficient,
            "representation_norm_excess": worst_domination,
        })))
}

/// `||u v|| <= ||u|| ||v||` for the pointwise product.
pub fn submultiplicativity_check(
    s: &InverseSemigroup,
    blocks: &BlockDecomposition,
    config: &VerifyConfig,
) -> Result<CheckResult> {
    let mut rng = rng_for(config, s, "algebra");
    let trials = (config.trials / 5).max(1);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let u = random_fn(s, &mut rng);
        let v = random_fn(s, &mut rng);
        let uv = b_norm_with(s, blocks, &u.mul(&v))?.value;
        let bound = b_norm_with(s, blocks, &u)?.value * b_norm_with(s, blocks, &v)?.value;
        worst = worst.max(uv / bound - 1.0);
    }
    Ok(CheckResult::new("dual_norm_submultiplicative", worst, 1e-6, trials))
}
