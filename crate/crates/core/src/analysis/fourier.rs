//! Spans of the generating sets of the Fourier space and the plateau
//! functions built from finite sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::psd::{is_positive_definite_star, is_restricted_pd, PsdCertificate};
use crate::cfunction::CFunction;
use crate::error::Result;
use crate::linalg::{self, CMatrix};
use crate::random::{complex_vec, seeded};
use crate::representations::{coefficient, partial_action_rep};
use crate::restricted::{lambda_r, restricted_convolution, restricted_product, tilde};
use crate::semigroup::{idempotents, InverseSemigroup};
use crate::tolerance::Tolerance;
use crate::C64;

pub const MEMBERSHIP_RESIDUAL: f64 = 1e-9;
pub const RANDOM_SQUARES: usize = 20;
pub const RANDOM_PROJECTIONS: usize = 50;

/// `f . g~`.
pub fn convolve_tilde(s: &InverseSemigroup, f: &CFunction, g: &CFunction) -> Result<CFunction> {
    restricted_convolution(s, f, &tilde(s, g))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanReport {
    pub label: String,
    pub generators: usize,
    pub rank: usize,
    /// Largest relative distance of a generator from `span E1`.
    pub residual_to_first: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSample {
    pub description: String,
    pub restricted_min_eigenvalue: f64,
    pub unrestricted_min_eigenvalue: f64,
    pub unrestricted_member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSpans {
    pub n: usize,
    pub spans: Vec<SpanReport>,
    /// Cone samples that failed the restricted test and were dropped.
    pub uncertified: usize,
    /// Restricted cone samples that fail the unrestricted test.
    pub outside_unrestricted: Vec<ConeSample>,
    pub cone_samples: usize,
    pub first_span_full: bool,
    pub inclusions_hold: bool,
    pub all_full: bool,
}

impl FourierSpans {
    /// Every listed check, including restricted samples lying in the
    /// unrestricted cone.
    pub fn passed(&self) -> bool {
        self.first_span_full && self.inclusions_hold && self.all_full && self.outside_unrestricted.is_empty()
    }
}

fn stack(n: usize, gens: &[CFunction]) -> CMatrix {
    let mut m = CMatrix::zeros(n, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, v) in g.values.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

fn span_report(label: &str, n: usize, gens: &[CFunction], first: &CMatrix) -> SpanReport {
    let residual_to_first = gens
        .iter()
        .map(|g| {
            let b = linalg::vector(&g.values);
            let coeffs = linalg::least_squares(first, &b, 1e-12);
            (first * coeffs - &b).norm() / b.norm().max(1.0)
        })
        .fold(0.0, f64::max);
    SpanReport {
        label: label.into(),
        generators: gens.len(),
        rank: if gens.is_empty() {
            0
        } else {
            linalg::rank(&stack(n, gens), 1e-10)
        },
        residual_to_first,
    }
}

/// Builds the six generating families, their ranks, and the inclusion and
/// cone checks. The square-integrable families coincide with the finitely
/// supported ones on a finite carrier.
pub fn fourier_spans(s: &InverseSemigroup, seed: u64, tol: Tolerance) -> Result<FourierSpans> {
    let n = s.n();
    let name = s.name().to_string();
    let delta = |x| CFunction::delta(name.clone(), n, x);
    let mut rng = seeded(seed);

    let mut e1 = Vec::with_capacity(n * n);
    for x in s.elements() {
        for y in s.elements() {
            e1.push(convolve_tilde(s, &delta(x), &delta(y))?);
        }
    }

    let mut e2 = Vec::new();
    for x in s.elements() {
        e2.push(convolve_tilde(s, &delta(x), &delta(x))?);
    }
    for _ in 0..RANDOM_SQUARES {
        let h = CFunction::new(name.clone(), complex_vec(&mut rng, n));
        e2.push(convolve_tilde(s, &h, &h)?);
    }

    let mut candidates: Vec<(String, CFunction)> = Vec::new();
    for x in s.elements() {
        candidates.push((format!("plateau {{{x}}}"), plateau(s, &[x], tol)?.u));
    }
    for x in s.elements() {
        candidates.push((format!("square of delta {x}"), e2[x].clone()));
    }
    let lambda = lambda_r(s);
    for k in 0..RANDOM_PROJECTIONS {
        let rank = 1 + k % n.max(1);
        let basis = linalg::orthonormal_columns(
            &CMatrix::from_fn(n, rank, |_, _| crate::random::complex_normal(&mut rng)),
            1e-9,
        );
        let mut values = vec![C64::new(0.0, 0.0); n];
        for col in basis.column_iter() {
            let v: Vec<C64> = col.iter().copied().collect();
            let c = coefficient(s, &lambda, &v, &v)?;
            for (a, b) in values.iter_mut().zip(&c.values) {
                *a += b;
            }
        }
        candidates.push((
            format!("projection sample {k} (rank {rank})"),
            CFunction::new(name.clone(), values),
        ));
    }
    for k in 0..RANDOM_SQUARES {
        let v = complex_vec(&mut rng, n);
        candidates.push((format!("regular coefficient {k}"), coefficient(s, &lambda, &v, &v)?));
    }

    let mut e3 = Vec::new();
    let mut outside = Vec::new();
    let mut uncertified = 0;
    for (description, u) in candidates {
        let restricted = is_restricted_pd(s, &u, tol)?;
        if !restricted.is_member() {
            uncertified += 1;
            continue;
        }
        let full = is_positive_definite_star(s, &u, tol)?;
        if !full.is_member() {
            outside.push(ConeSample {
                description,
                restricted_min_eigenvalue: restricted.min_eigenvalue,
                unrestricted_min_eigenvalue: full.min_eigenvalue,
                unrestricted_member: false,
            });
        }
        e3.push(u);
    }

    let mut e4 = Vec::new();
    let partial = partial_action_rep(s);
    for _ in 0..RANDOM_SQUARES {
        let v = complex_vec(&mut rng, n);
        e4.push(coefficient(s, &partial, &v, &v)?);
    }
    e4.push(CFunction::constant(name.clone(), n, C64::new(1.0, 0.0)));
    for u in &e3 {
        if is_positive_definite_star(s, u, tol)?.is_member() {
            e4.push(u.clone());
        }
    }
    e4.retain(|u| {
        is_positive_definite_star(s, u, tol)
            .map(|c| c.is_member())
            .unwrap_or(false)
    });

    let first = stack(n, &e1);
    let spans = vec![
        span_report("E1", n, &e1, &first),
        span_report("E2", n, &e2, &first),
        span_report("E3", n, &e3, &first),
        span_report("E4", n, &e4, &first),
        span_report("E5", n, &e2, &first),
        span_report("E6", n, &e1, &first),
    ];
    let first_span_full = spans[0].rank == n;
    let inclusions_hold = spans.iter().all(|r| r.residual_to_first <= MEMBERSHIP_RESIDUAL);
    let all_full = spans.iter().all(|r| r.rank == n);
    Ok(FourierSpans {
        n,
        spans,
        uncertified,
        cone_samples: e3.len(),
        outside_unrestricted: outside,
        first_span_full,
        inclusions_hold,
        all_full,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateauReport {
    pub k: Vec<usize>,
    /// `F = K u K* u {x* x : x in K}`.
    pub f: Vec<usize>,
    /// Restricted products `F . F`.
    pub product_set: Vec<usize>,
    /// `chi_F . chi_F~`.
    pub u: CFunction,
    pub equals_indicator: bool,
    pub indicator_deviation: f64,
    pub one_on_k: bool,
    pub deviation_on_k: f64,
    pub certificate: PsdCertificate,
}

impl PlateauReport {
    pub fn passed(&self) -> bool {
        self.equals_indicator && self.one_on_k && self.certificate.is_member()
    }
}

pub fn plateau(s: &InverseSemigroup, k: &[usize], tol: Tolerance) -> Result<PlateauReport> {
    let n = s.n();
    for &x in k {
        if x >= n {
            return Err(crate::error::Error::Field {
                field: "K".into(),
                message: format!("element {x} outside carrier of size {n}"),
            });
        }
    }
    let mut f = BTreeSet::new();
    for &x in k {
        f.insert(x);
        f.insert(s.star(x));
        f.insert(s.source(x));
    }
    let mut product_set = BTreeSet::new();
    for &a in &f {
        for &b in &f {
            if let Some(ab) = restricted_product(s, a, b) {
                product_set.insert(ab);
            }
        }
    }
    let chi = CFunction::indicator(s.name(), n, f.iter().copied());
    let u = convolve_tilde(s, &chi, &chi)?;
    let indicator = CFunction::indicator(s.name(), n, product_set.iter().copied());
    let indicator_deviation = u.max_abs_diff(&indicator);
    let deviation_on_k = k
        .iter()
        .map(|&x| (u[x] - C64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    let certificate = is_restricted_pd(s, &u, tol)?;
    Ok(PlateauReport {
        k: k.to_vec(),
        f: f.into_iter().collect(),
        product_set: product_set.into_iter().collect(),
        equals_indicator: indicator_deviation == 0.0,
        indicator_deviation,
        one_on_k: deviation_on_k == 0.0,
        deviation_on_k,
        u,
        certificate,
    })
}

/// `Sum_{e in E} u(e)`, the value of `u` at the unit of the restricted algebra.
pub fn idempotent_sum(s: &InverseSemigroup, u: &CFunction) -> C64 {
    idempotents(s).iter().map(|e| u[e]).sum()
}
