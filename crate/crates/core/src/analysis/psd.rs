//! Positive definite cone membership through Gram matrices.

use serde::{Deserialize, Serialize};

use crate::cfunction::CFunction;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::restricted::build_restricted_semigroup;
use crate::semigroup::InverseSemigroup;
use crate::tolerance::Tolerance;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsdVerdict {
    PositiveDefiniteConeMember,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdCertificate {
    pub matrix_size: usize,
    pub min_eigenvalue: f64,
    pub epsilon: f64,
    pub verdict: PsdVerdict,
    /// Negative but within `10 * epsilon` of the threshold region.
    pub marginal: bool,
    pub hermitian_residual: f64,
    /// Eigenvector of the smallest eigenvalue when rejected.
    pub witness: Option<Vec<C64>>,
}

impl PsdCertificate {
    pub fn is_member(&self) -> bool {
        self.verdict == PsdVerdict::PositiveDefiniteConeMember
    }
}

/// Decides `m >= 0` with threshold `epsilon = tol * max(1, max |m_ij|)`.
///
/// Minimum eigenvalues in `[-10 eps, -eps / 10]` are flagged marginal.
pub fn certify_matrix(m: &CMatrix, tol: Tolerance) -> PsdCertificate {
    let epsilon = tol.scaled(linalg::max_abs(m));
    let hermitian_residual = linalg::hermitian_residual(m);
    let (values, vectors) = linalg::hermitian_eigen(m);
    let min_eigenvalue = values.first().copied().unwrap_or(0.0);
    let hermitian = hermitian_residual <= epsilon;
    let member = hermitian && min_eigenvalue >= -epsilon;
    let marginal = hermitian && (-10.0 * epsilon..=-epsilon / 10.0).contains(&min_eigenvalue);
    let witness = (!member && !values.is_empty()).then(|| vectors.column(0).iter().copied().collect());
    PsdCertificate {
        matrix_size: m.nrows(),
        min_eigenvalue,
        epsilon,
        verdict: if member {
            PsdVerdict::PositiveDefiniteConeMember
        } else {
            PsdVerdict::Rejected
        },
        marginal,
        hermitian_residual,
        witness,
    }
}

/// `M[s][t] = u(s* t)` over all of `t`.
pub fn gram_matrix(t: &InverseSemigroup, u: &[C64]) -> CMatrix {
    let n = t.n();
    CMatrix::from_fn(n, n, |s, r| u[t.mul(t.star(s), r)])
}

/// Positive definiteness on `T` with the full product (the cone `P(T)`).
pub fn is_positive_definite_star(t: &InverseSemigroup, u: &CFunction, tol: Tolerance) -> Result<PsdCertificate> {
    u.ensure_len(t.n())?;
    Ok(certify_matrix(&gram_matrix(t, &u.values), tol))
}

/// Extension by zero to `S_r` (the adjoined zero is the last index).
pub fn zero_extension(s: &InverseSemigroup, u: &CFunction) -> Result<Vec<C64>> {
    u.ensure_len(s.n())?;
    let mut values = u.values.clone();
    values.push(C64::new(0.0, 0.0));
    Ok(values)
}

/// Restricted positive definiteness: the zero extension of `u` is positive
/// definite on `S_r`.
pub fn is_restricted_pd(s: &InverseSemigroup, u: &CFunction, tol: Tolerance) -> Result<PsdCertificate> {
    let values = zero_extension(s, u)?;
    let sr = build_restricted_semigroup(s).sr;
    Ok(certify_matrix(&gram_matrix(&sr, &values), tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extendibility {
    pub extendible: bool,
    /// Smallest admissible value at the adjoined unit.
    pub c_star: f64,
    pub range_residual: f64,
}

/// Relative eigenvalue cutoff used when splitting off the null space of a
/// Gram matrix.
pub const NULL_SPACE_CUTOFF: f64 = 1e-10;

/// Bordered-Gram test: `[[M, v], [v*, c]] >= 0` for some `c` iff
/// `v in range(M)`, with minimal `c* = v* M^+ v`, where `v_t = u(t*)`.
pub fn is_extendible(t: &InverseSemigroup, u: &CFunction, tol: Tolerance) -> Result<Extendibility> {
    u.ensure_len(t.n())?;
    extendibility_of(t, &u.values, tol)
}

pub(crate) fn extendibility_of(t: &InverseSemigroup, u: &[C64], tol: Tolerance) -> Result<Extendibility> {
    let m = gram_matrix(t, u);
    let cert = certify_matrix(&m, tol);
    if !cert.is_member() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: cert.min_eigenvalue,
        });
    }
    let v = CVector::from_iterator(t.n(), t.elements().map(|x| u[t.star(x)]));
    let (values, vectors) = linalg::hermitian_eigen(&m);
    let top = values.last().copied().unwrap_or(0.0);
    let cut = NULL_SPACE_CUTOFF * top;
    let mut projected = CVector::zeros(t.n());
    let mut c_star = 0.0;
    for (i, &lambda) in values.iter().enumerate() {
        if lambda > cut && lambda > 0.0 {
            let q = vectors.column(i);
            let coeff = q.dotc(&v);
            projected += q * coeff;
            c_star += coeff.norm_sqr() / lambda;
        }
    }
    let range_residual = (&v - &projected).norm();
    let extendible = range_residual <= tol.scaled(v.norm().max(linalg::max_abs(&m)));
    Ok(Extendibility {
        extendible,
        c_star,
        range_residual,
    })
}

/// Extendibility of the zero extension of `u` to `S_r`.
pub fn is_restricted_extendible(s: &InverseSemigroup, u: &CFunction, tol: Tolerance) -> Result<Extendibility> {
    let values = zero_extension(s, u)?;
    let sr = build_restricted_semigroup(s).sr;
    extendibility_of(&sr, &values, tol)
}

/// Membership in the restricted extendible cone: both certificates.
pub fn certify_restricted_extendible(
    s: &InverseSemigroup,
    u: &CFunction,
    tol: Tolerance,
) -> Result<(PsdCertificate, Option<Extendibility>)> {
    let cert = is_restricted_pd(s, u, tol)?;
    if !cert.is_member() {
        return Ok((cert, None));
    }
    let ext = is_restricted_extendible(s, u, tol)?;
    Ok((cert, Some(ext)))
}
