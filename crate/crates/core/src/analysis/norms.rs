//! The restricted C*-norm of functions and its dual norm on functionals.

use serde::{Deserialize, Serialize};

use super::wedderburn::{wedderburn_blocks, BlockDecomposition};
use crate::cfunction::CFunction;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::random::{complex_vec, seeded};
use crate::restricted::{lambda_r, MatrixRep};
use crate::semigroup::InverseSemigroup;
use crate::C64;

/// Allowed gap between certified bounds, relative to `max(1, value)`.
pub const BOUND_GAP: f64 = 1e-7;
const RANDOM_PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    OperatorNorm,
    BlockDual,
    CertifiedBounds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub method: NormMethod,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

impl NormReport {
    fn zero() -> Self {
        NormReport {
            value: 0.0,
            method: NormMethod::CertifiedBounds,
            lower_bound: 0.0,
            upper_bound: 0.0,
        }
    }

    pub fn bounds_consistent(&self) -> bool {
        let slack = BOUND_GAP * self.value.max(1.0);
        self.lower_bound <= self.value + slack
            && self.value <= self.upper_bound + slack
            && self.upper_bound - self.lower_bound <= slack
    }
}

/// `lambda_r~(f) = sum_x f(x) lambda_r(x)`.
pub fn regular_image(s: &InverseSemigroup, f: &CFunction) -> Result<CMatrix> {
    lambda_r(s).integrate(f)
}

fn operator_norm_report(a: &CMatrix) -> NormReport {
    let value = linalg::operator_norm(a);
    // Independent route: square root of the top eigenvalue of A* A.
    let (eig, _) = linalg::hermitian_eigen(&(a.adjoint() * a));
    let alt = eig.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    NormReport {
        value,
        method: NormMethod::OperatorNorm,
        lower_bound: value.min(alt),
        upper_bound: value.max(alt),
    }
}

/// Operator norm of `lambda_r~(f)`; every C*-norm on the restricted algebra
/// agrees with it.
pub fn sigma_r_norm(s: &InverseSemigroup, f: &CFunction) -> Result<NormReport> {
    f.ensure_len(s.n())?;
    if f.sup_norm() == 0.0 {
        return Ok(NormReport::zero());
    }
    Ok(operator_norm_report(&regular_image(s, f)?))
}

/// Dual norm of `f -> sum_x f(x) u(x)`.
pub fn b_norm(s: &InverseSemigroup, u: &CFunction) -> Result<NormReport> {
    let blocks = wedderburn_blocks(s)?;
    b_norm_with(s, &blocks, u)
}

/// As [`b_norm`] with a precomputed decomposition.
pub fn b_norm_with(s: &InverseSemigroup, blocks: &BlockDecomposition, u: &CFunction) -> Result<NormReport> {
    u.ensure_len(s.n())?;
    if u.sup_norm() == 0.0 {
        return Ok(NormReport::zero());
    }
    let phi = blocks.functional_blocks(&u.values)?;
    let mut value = 0.0;
    let mut maximizer = Vec::with_capacity(phi.len());
    let mut factors = Vec::with_capacity(phi.len());
    for p in &phi {
        let svd = p.clone().svd(true, true);
        let (Some(w), Some(v_t)) = (svd.u, svd.v_t) else {
            return Err(Error::Numeric("SVD without singular vectors".into()));
        };
        value += svd.singular_values.sum();
        // tr(Phi V W*) = sum of singular values.
        maximizer.push(v_t.adjoint() * w.adjoint());
        factors.push((w, svd.singular_values.clone(), v_t.adjoint()));
    }

    let lambda = lambda_r(s);
    let lower = lower_bound(s, &lambda, blocks, &maximizer, u)?;
    let upper = upper_bound(&lambda, blocks, &factors, u)?;
    Ok(NormReport {
        value,
        method: NormMethod::BlockDual,
        lower_bound: lower,
        upper_bound: upper,
    })
}

fn pairing_ratio(lambda: &MatrixRep, f: &[C64], u: &CFunction) -> Result<f64> {
    let f = CFunction::new(u.carrier.clone(), f.to_vec());
    let norm = linalg::operator_norm(&lambda.integrate(&f)?);
    Ok(if norm > 0.0 { f.pairing(u).norm() / norm } else { 0.0 })
}

/// `|sum f u| / ||f||` for the block maximizer and a few random probes.
fn lower_bound(
    s: &InverseSemigroup,
    lambda: &MatrixRep,
    blocks: &BlockDecomposition,
    maximizer: &[CMatrix],
    u: &CFunction,
) -> Result<f64> {
    let f = blocks.element_from_blocks(maximizer)?;
    let mut best = pairing_ratio(lambda, &f, u)?;
    let mut rng = seeded(crate::random::derive_seed(s.n() as u64, "b_norm_probe"));
    for _ in 0..RANDOM_PROBES {
        best = best.max(pairing_ratio(lambda, &complex_vec(&mut rng, s.n()), u)?);
    }
    Ok(best)
}

/// `||xi|| ||eta||` for an explicit realization `u = <lambda_r(.) xi, eta>`
/// assembled from the singular vectors of each block.
fn upper_bound(
    lambda: &MatrixRep,
    blocks: &BlockDecomposition,
    factors: &[(CMatrix, nalgebra::DVector<f64>, CMatrix)],
    u: &CFunction,
) -> Result<f64> {
    let n = lambda.dim;
    let mut xi = linalg::vector(&vec![C64::new(0.0, 0.0); n]);
    let mut eta = xi.clone();
    for ((w, sigma, v), copies) in factors.iter().zip(&blocks.copies) {
        for (k, &sk) in sigma.iter().enumerate() {
            if sk == 0.0 {
                continue;
            }
            let root = C64::new(sk.sqrt(), 0.0);
            xi += &copies[k] * w.column(k) * root;
            eta += &copies[k] * v.column(k) * root;
        }
    }
    let scale = u.sup_norm().max(1.0);
    for (x, m) in lambda.mats.iter().enumerate() {
        let got = linalg::inner(&(m * &xi), &eta);
        if (got - u[x]).norm() > 1e-8 * scale {
            return Err(Error::Numeric(format!(
                "coefficient realization misses u at element {x} by {:.3e}",
                (got - u[x]).norm()
            )));
        }
    }
    Ok(xi.norm() * eta.norm())
}
