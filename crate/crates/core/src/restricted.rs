//! The restricted product, the restricted semigroup `S_r`, the restricted
//! convolution algebra and the restricted regular representations.

use serde::{Deserialize, Serialize};

use crate::cfunction::CFunction;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::semigroup::{InverseSemigroup, RawSemigroup};
use crate::tolerance::Tolerance;
use crate::C64;

/// `xy` when `x* x = y y*`, otherwise undefined.
#[inline]
pub fn restricted_product(s: &InverseSemigroup, x: usize, y: usize) -> Option<usize> {
    (s.source(x) == s.range(y)).then(|| s.mul(x, y))
}

/// `S` with the restricted product and a fresh zero absorbing every
/// undefined product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedSemigroup {
    pub sr: InverseSemigroup,
    /// `embed[x]` is the index of `x` in `sr`.
    pub embed: Vec<usize>,
    pub zero_index: usize,
}

pub fn build_restricted_semigroup(s: &InverseSemigroup) -> RestrictedSemigroup {
    let n = s.n();
    let zero = n;
    let mut table = vec![vec![zero; n + 1]; n + 1];
    for (x, row) in table.iter_mut().enumerate().take(n) {
        for (y, entry) in row.iter_mut().enumerate().take(n) {
            if let Some(xy) = restricted_product(s, x, y) {
                *entry = xy;
            }
        }
    }
    let mut star: Vec<usize> = s.stars().to_vec();
    star.push(zero);
    let raw = RawSemigroup {
        n: n + 1,
        table,
        star,
        identity: None,
        zero: Some(zero),
        name: Some(format!("{}_r", s.name())),
    };
    let sr = InverseSemigroup::new(raw).expect("restricted semigroup of an inverse semigroup is inverse");
    RestrictedSemigroup {
        sr,
        embed: (0..n).collect(),
        zero_index: zero,
    }
}

/// Restricted convolution `(f . g)(z) = sum f(x) g(y)` over `xy = z` with
/// `x* x = y y*`.
pub fn restricted_convolution(s: &InverseSemigroup, f: &CFunction, g: &CFunction) -> Result<CFunction> {
    f.ensure_len(s.n())?;
    f.ensure_same_carrier(g)?;
    let mut out = CFunction::zeros(f.carrier.clone(), s.n());
    for x in s.elements() {
        if f[x] == C64::new(0.0, 0.0) {
            continue;
        }
        for y in s.elements() {
            if let Some(z) = restricted_product(s, x, y) {
                out[z] += f[x] * g[y];
            }
        }
    }
    Ok(out)
}

/// `g~(x) = conj(g(x*))`.
pub fn tilde(s: &InverseSemigroup, g: &CFunction) -> CFunction {
    CFunction::new(g.carrier.clone(), s.elements().map(|x| g[s.star(x)].conj()).collect())
}

/// One `dim x dim` matrix per semigroup element.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRep {
    pub dim: usize,
    pub mats: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepDoc {
    dim: usize,
    mats: Vec<Vec<Vec<C64>>>,
}

pub(crate) fn matrix_rows(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

pub(crate) fn matrix_from_rows(rows: &[Vec<C64>], nrows: usize, ncols: usize) -> Result<CMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Structural(format!("expected a {nrows}x{ncols} matrix")));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |r, c| rows[r][c]))
}

impl MatrixRep {
    pub fn zero(n: usize, dim: usize) -> Self {
        MatrixRep {
            dim,
            mats: vec![CMatrix::zeros(dim, dim); n],
        }
    }

    /// Number of semigroup elements represented.
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn ensure_dims(&self, n: usize) -> Result<()> {
        if self.mats.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.mats.len(),
            });
        }
        for m in &self.mats {
            if m.nrows() != self.dim || m.ncols() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: m.nrows().max(m.ncols()),
                });
            }
        }
        Ok(())
    }

    /// The linear extension `sum_x f(x) pi(x)`.
    pub fn integrate(&self, f: &CFunction) -> Result<CMatrix> {
        f.ensure_len(self.mats.len())?;
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (m, &c) in self.mats.iter().zip(&f.values) {
            if c != C64::new(0.0, 0.0) {
                out += m * c;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let doc = MatrixRepDoc {
            dim: self.dim,
            mats: self.mats.iter().map(matrix_rows).collect(),
        };
        serde_json::to_string(&doc).expect("representation serializes")
    }

    pub fn from_json(document: &str) -> Result<MatrixRep> {
        let doc: MatrixRepDoc = serde_json::from_str(document).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mats = doc
            .mats
            .iter()
            .map(|rows| matrix_from_rows(rows, doc.dim, doc.dim))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixRep { dim: doc.dim, mats })
    }
}

/// `lambda_r(x) delta_y = delta_{xy}` if `x* x = y y*`, else `0`.
pub fn lambda_r(s: &InverseSemigroup) -> MatrixRep {
    let n = s.n();
    let mats = s
        .elements()
        .map(|x| {
            let mut m = CMatrix::zeros(n, n);
            for y in s.elements() {
                if let Some(xy) = restricted_product(s, x, y) {
                    m[(xy, y)] = C64::new(1.0, 0.0);
                }
            }
            m
        })
        .collect();
    MatrixRep { dim: n, mats }
}

/// `rho_r(x) delta_y = delta_{yx*}` if `y* y = x* x`, else `0`.
///
/// Right multiplication by `x*` keeps `rho_r` multiplicative; its span is
/// the commutant of the span of `lambda_r`.
pub fn rho_r(s: &InverseSemigroup) -> MatrixRep {
    let n = s.n();
    let mats = s
        .elements()
        .map(|x| {
            let mut m = CMatrix::zeros(n, n);
            for y in s.elements() {
                if let Some(yx) = restricted_product(s, y, s.star(x)) {
                    m[(yx, y)] = C64::new(1.0, 0.0);
                }
            }
            m
        })
        .collect();
    MatrixRep { dim: n, mats }
}

fn as_vector(f: &CFunction) -> CVector {
    linalg::vector(&f.values)
}

/// `u = f . g~`, checked against the independent evaluation
/// `u(y) = <lambda_r(y*) f, g>`.
pub fn coefficient_pair(s: &InverseSemigroup, f: &CFunction, g: &CFunction) -> Result<CFunction> {
    coefficient_pair_with(s, f, g, Tolerance::default())
}

pub fn coefficient_pair_with(s: &InverseSemigroup, f: &CFunction, g: &CFunction, tol: Tolerance) -> Result<CFunction> {
    f.ensure_same_carrier(g)?;
    let u = restricted_convolution(s, f, &tilde(s, g))?;
    let lambda = lambda_r(s);
    let (fv, gv) = (as_vector(f), as_vector(g));
    let bound = tol.scaled(f.norm2() * g.norm2());
    for y in s.elements() {
        let direct = linalg::inner(&(&lambda.mats[s.star(y)] * &fv), &gv);
        let gap = (direct - u[y]).norm();
        if gap > bound {
            return Err(Error::Falsified(format!(
                "convolution and regular coefficient disagree at element {y} by {gap:.3e}"
            )));
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{build_builtin, builtin_corpus, check_inverse_semigroup};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn group_products_are_always_defined() {
        let z2 = build_builtin("Z2").unwrap();
        assert_eq!(restricted_product(&z2, 1, 1), Some(0));
    }

    #[test]
    fn distinct_idempotents_do_not_compose() {
        let s = build_builtin("semilattice2").unwrap();
        assert_eq!(restricted_product(&s, 0, 1), None);
        assert_eq!(restricted_product(&s, 1, 1), Some(1));
    }

    #[test]
    fn x_times_star_is_always_defined() {
        let i2 = build_builtin("I2").unwrap();
        for x in i2.elements() {
            assert_eq!(restricted_product(&i2, x, i2.star(x)), Some(i2.range(x)));
        }
    }

    #[test]
    fn restricted_semigroups_are_inverse_with_zero() {
        for s in builtin_corpus() {
            let r = build_restricted_semigroup(&s);
            assert_eq!(r.sr.n(), s.n() + 1);
            assert_eq!(r.sr.zero(), Some(r.zero_index));
            assert!(check_inverse_semigroup(&r.sr.to_raw()).unwrap().valid);
        }
        let r = build_restricted_semigroup(&build_builtin("semilattice2").unwrap());
        assert_eq!(r.sr.mul(0, 1), r.zero_index);
        assert_eq!(r.sr.mul(0, 0), 0);
        assert_eq!(r.sr.mul(1, 1), 1);
    }

    #[test]
    fn convolution_on_point_masses() {
        let s = build_builtin("Z2").unwrap();
        let f = CFunction::from_real("Z2", &[1.0, 1.0]);
        let ff = restricted_convolution(&s, &f, &f).unwrap();
        assert_eq!(ff.values, vec![c(2.0, 0.0), c(2.0, 0.0)]);

        let l = build_builtin("semilattice2").unwrap();
        let d1 = CFunction::delta("semilattice2", 2, 0);
        let de = CFunction::delta("semilattice2", 2, 1);
        assert_eq!(
            restricted_convolution(&l, &d1, &de).unwrap(),
            CFunction::zeros("semilattice2", 2)
        );
    }

    #[test]
    fn convolution_rejects_foreign_functions() {
        let s = build_builtin("Z2").unwrap();
        let f = CFunction::zeros("Z2", 2);
        let g = CFunction::zeros("Z3", 2);
        assert!(restricted_convolution(&s, &f, &g).is_err());
    }

    #[test]
    fn tilde_examples() {
        let s = build_builtin("Z3").unwrap();
        let d1 = CFunction::delta("Z3", 3, 1);
        assert_eq!(tilde(&s, &d1), CFunction::delta("Z3", 3, 2));
        let z2 = build_builtin("Z2").unwrap();
        let g = CFunction::new("Z2", vec![c(0.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(tilde(&z2, &g).values, vec![c(0.0, 0.0), c(0.0, -1.0)]);
    }

    #[test]
    fn regular_representation_examples() {
        let z2 = build_builtin("Z2").unwrap();
        let l = lambda_r(&z2);
        let swap = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(l.mats[1], swap);

        let s = build_builtin("semilattice2").unwrap();
        let l = lambda_r(&s);
        assert_eq!(
            l.mats[0],
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]))
        );
        assert_eq!(
            l.mats[1],
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]))
        );
    }

    #[test]
    fn regular_representations_are_partial_isometries_with_adjoint_star() {
        for s in builtin_corpus() {
            for rep in [lambda_r(&s), rho_r(&s)] {
                for x in s.elements() {
                    let m = &rep.mats[x];
                    assert_eq!(&rep.mats[s.star(x)], &m.adjoint());
                    assert_eq!(&(m * &rep.mats[s.star(x)] * m), m);
                }
            }
        }
    }

    #[test]
    fn left_and_right_regular_representations_commute() {
        for s in builtin_corpus() {
            let (l, r) = (lambda_r(&s), rho_r(&s));
            for x in s.elements() {
                for y in s.elements() {
                    assert_eq!(&l.mats[x] * &r.mats[y], &r.mats[y] * &l.mats[x]);
                }
            }
        }
    }

    #[test]
    fn coefficient_pair_examples() {
        for s in builtin_corpus() {
            let n = s.n();
            for x in s.elements() {
                // delta_{x*x} . delta_{x*}~ peaks at x exactly when x*x = xx*
                let f = CFunction::delta(s.name(), n, s.source(x));
                let g = CFunction::delta(s.name(), n, s.star(x));
                let u = coefficient_pair(&s, &f, &g).unwrap();
                let normal = s.source(x) == s.range(x);
                assert_eq!(u[x], c(if normal { 1.0 } else { 0.0 }, 0.0));
                // the mirrored pair peaks at every x
                let f = CFunction::delta(s.name(), n, x);
                let g = CFunction::delta(s.name(), n, s.source(x));
                assert_eq!(coefficient_pair(&s, &f, &g).unwrap()[x], c(1.0, 0.0));
            }
            let one = s.identity().unwrap();
            let d = CFunction::delta(s.name(), n, one);
            assert_eq!(coefficient_pair(&s, &d, &d).unwrap(), d);
        }
    }

    #[test]
    fn representation_documents_round_trip() {
        let rep = lambda_r(&build_builtin("I2").unwrap());
        let doc = rep.to_json();
        assert_eq!(MatrixRep::from_json(&doc).unwrap(), rep);
    }
}
