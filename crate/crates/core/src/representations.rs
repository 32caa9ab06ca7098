//! Restricted representations as matrices: validation, coefficient
//! functions, direct sums and tensor products, the GNS construction, and the
//! dictionary with bundle representations of the associated groupoid.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::psd::{certify_matrix, certify_restricted_extendible, NULL_SPACE_CUTOFF};
use crate::cfunction::CFunction;
use crate::error::{Error, Result};
use crate::groupoid::GroupoidRep;
use crate::linalg::{self, CMatrix, CVector, MaxModulus};
use crate::restricted::{build_restricted_semigroup, restricted_product, MatrixRep};
use crate::semigroup::{idempotents, InverseSemigroup, Violation, ViolationLog};
use crate::tolerance::Tolerance;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedRepCheckReport {
    pub star_ok: bool,
    pub product_rule_ok: bool,
    pub contraction_ok: bool,
    pub witnesses: Vec<Violation>,
}

impl RestrictedRepCheckReport {
    pub fn ok(&self) -> bool {
        self.star_ok && self.product_rule_ok && self.contraction_ok
    }
}

/// Exhaustive check of `pi(x*) = pi(x)*`, the restricted product law and
/// `||pi(x)|| <= 1`.
pub fn check_restricted_rep(s: &InverseSemigroup, pi: &MatrixRep, tol: Tolerance) -> Result<RestrictedRepCheckReport> {
    pi.ensure_dims(s.n())?;
    let eps = tol.scaled(1.0);
    let mut log = ViolationLog::default();
    let (mut star_ok, mut product_rule_ok, mut contraction_ok) = (true, true, true);
    for x in s.elements() {
        if (&pi.mats[s.star(x)] - pi.mats[x].adjoint()).max_modulus() > eps {
            star_ok = false;
            log.push("star", &[x]);
        }
        if linalg::operator_norm(&pi.mats[x]) > 1.0 + eps {
            contraction_ok = false;
            log.push("contraction", &[x]);
        }
        for y in s.elements() {
            let lhs = &pi.mats[x] * &pi.mats[y];
            let gap = match restricted_product(s, x, y) {
                Some(xy) => (lhs - &pi.mats[xy]).max_modulus(),
                None => lhs.max_modulus(),
            };
            if gap > eps {
                product_rule_ok = false;
                log.push("product_rule", &[x, y]);
            }
        }
    }
    Ok(RestrictedRepCheckReport {
        star_ok,
        product_rule_ok,
        contraction_ok,
        witnesses: log.finish().violations,
    })
}

fn ensure_vector(pi: &MatrixRep, v: &[C64]) -> Result<()> {
    if v.len() != pi.dim {
        return Err(Error::DimensionMismatch {
            expected: pi.dim,
            found: v.len(),
        });
    }
    Ok(())
}

/// `u(x) = <pi(x) xi, eta>`.
pub fn coefficient(s: &InverseSemigroup, pi: &MatrixRep, xi: &[C64], eta: &[C64]) -> Result<CFunction> {
    pi.ensure_dims(s.n())?;
    ensure_vector(pi, xi)?;
    ensure_vector(pi, eta)?;
    let (xv, ev) = (linalg::vector(xi), linalg::vector(eta));
    let values = pi.mats.iter().map(|m| linalg::inner(&(m * &xv), &ev)).collect();
    Ok(CFunction::new(s.name(), values))
}

fn ensure_same_len(pi: &MatrixRep, sigma: &MatrixRep) -> Result<()> {
    if pi.len() != sigma.len() {
        return Err(Error::CarrierMismatch {
            expected: format!("{} elements", pi.len()),
            found: format!("{} elements", sigma.len()),
        });
    }
    Ok(())
}

pub fn direct_sum(pi: &MatrixRep, sigma: &MatrixRep) -> Result<MatrixRep> {
    ensure_same_len(pi, sigma)?;
    Ok(MatrixRep {
        dim: pi.dim + sigma.dim,
        mats: pi
            .mats
            .iter()
            .zip(&sigma.mats)
            .map(|(a, b)| linalg::block_diagonal(a, b))
            .collect(),
    })
}

pub fn tensor(pi: &MatrixRep, sigma: &MatrixRep) -> Result<MatrixRep> {
    ensure_same_len(pi, sigma)?;
    Ok(MatrixRep {
        dim: pi.dim * sigma.dim,
        mats: pi
            .mats
            .iter()
            .zip(&sigma.mats)
            .map(|(a, b)| linalg::kron(a, b))
            .collect(),
    })
}

/// `xi (x) xi'` matching the index order of [`tensor`].
pub fn tensor_vector(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// The unrestricted left regular representation by partial left
/// multiplication: `delta_y -> delta_{xy}` when `x* x y = y`, else `0`.
pub fn partial_action_rep(s: &InverseSemigroup) -> MatrixRep {
    let n = s.n();
    let mats = s
        .elements()
        .map(|x| {
            let mut m = CMatrix::zeros(n, n);
            for y in s.elements() {
                if s.mul(s.source(x), y) == y {
                    m[(s.mul(x, y), y)] = C64::new(1.0, 0.0);
                }
            }
            m
        })
        .collect();
    MatrixRep { dim: n, mats }
}

// ---------------------------------------------------------------------------
// GNS

#[derive(Debug, Clone, PartialEq)]
pub struct GnsResult {
    pub rep: MatrixRep,
    pub cyclic: Vec<C64>,
    /// Value used at the adjoined unit of `S_r`.
    pub ext_constant: f64,
    /// `||pi(0) xi||` inside the unitized construction.
    pub zero_residual: f64,
    /// `sup |<pi(.) xi, xi> - u|`.
    pub round_trip_error: f64,
    /// Coefficient difference after rebuilding with `ext_constant + 1`.
    pub unit_shift_error: f64,
}

/// Multiplication on `S_r` with an adjoined unit at index `n + 1`.
struct Unitization {
    table: Vec<Vec<usize>>,
    star: Vec<usize>,
    zero: usize,
    unit: usize,
}

impl Unitization {
    fn new(s: &InverseSemigroup) -> Self {
        let sr = build_restricted_semigroup(s).sr;
        let m = sr.n();
        let unit = m;
        let mut table = vec![vec![0; m + 1]; m + 1];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = match (a == unit, b == unit) {
                    (true, _) => b,
                    (false, true) => a,
                    _ => sr.mul(a, b),
                };
            }
        }
        let mut star = sr.stars().to_vec();
        star.push(unit);
        Unitization {
            table,
            star,
            zero: m - 1,
            unit,
        }
    }

    fn size(&self) -> usize {
        self.table.len()
    }
}

struct GnsSpace {
    rep: MatrixRep,
    cyclic: CVector,
    zero_image: CVector,
}

fn build_gns_space(s: &InverseSemigroup, u: &CFunction, corner: f64, unit: &Unitization) -> GnsSpace {
    let size = unit.size();
    let mut values = u.values.clone();
    values.push(C64::new(0.0, 0.0));
    values.push(C64::new(corner, 0.0));
    let gram = CMatrix::from_fn(size, size, |a, b| values[unit.table[unit.star[a]][b]]);
    let (eigenvalues, vectors) = linalg::hermitian_eigen(&gram);
    let top = eigenvalues.last().copied().unwrap_or(0.0);
    let kept: Vec<usize> = (0..size)
        .filter(|&i| top > 0.0 && eigenvalues[i] > NULL_SPACE_CUTOFF * top)
        .collect();
    let rank = kept.len();
    // J = D^{1/2} V*, with right inverse J^+ = V D^{-1/2}.
    let j = CMatrix::from_fn(rank, size, |r, c| {
        let i = kept[r];
        vectors[(c, i)].conj() * eigenvalues[i].sqrt()
    });
    let j_plus = CMatrix::from_fn(size, rank, |r, c| {
        let i = kept[c];
        vectors[(r, i)] / eigenvalues[i].sqrt()
    });
    let left = |x: usize| {
        let mut l = CMatrix::zeros(size, size);
        for t in 0..size {
            l[(unit.table[x][t], t)] = C64::new(1.0, 0.0);
        }
        l
    };
    let mats = s.elements().map(|x| &j * left(x) * &j_plus).collect();
    let cyclic = j.column(unit.unit).into_owned();
    let zero_image = &j * left(unit.zero) * &j_plus * &cyclic;
    GnsSpace {
        rep: MatrixRep { dim: rank, mats },
        cyclic,
        zero_image,
    }
}

/// Cyclic restricted representation with `u = <pi(.) xi, xi>`.
///
/// `u` must be restricted positive definite and extendible. The construction
/// runs on `S_r` with a unit adjoined, using the minimal admissible value at
/// the unit, and the null space is split off at a relative eigenvalue cutoff.
pub fn gns(s: &InverseSemigroup, u: &CFunction, tol: Tolerance) -> Result<GnsResult> {
    let (cert, ext) = certify_restricted_extendible(s, u, tol)?;
    if !cert.is_member() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: cert.min_eigenvalue,
        });
    }
    let ext = ext.expect("extendibility is computed for cone members");
    if !ext.extendible {
        return Err(Error::NotExtendible {
            residual: ext.range_residual,
        });
    }
    let unit = Unitization::new(s);
    let space = build_gns_space(s, u, ext.c_star, &unit);
    let cyclic: Vec<C64> = space.cyclic.iter().copied().collect();
    let reproduced = coefficient(s, &space.rep, &cyclic, &cyclic)?;
    let shifted = build_gns_space(s, u, ext.c_star + 1.0, &unit);
    let shifted_cyclic: Vec<C64> = shifted.cyclic.iter().copied().collect();
    let shifted_coeff = coefficient(s, &shifted.rep, &shifted_cyclic, &shifted_cyclic)?;
    Ok(GnsResult {
        round_trip_error: reproduced.max_abs_diff(u),
        unit_shift_error: reproduced.max_abs_diff(&shifted_coeff),
        zero_residual: space.zero_image.norm(),
        ext_constant: ext.c_star,
        cyclic,
        rep: space.rep,
    })
}

// ---------------------------------------------------------------------------
// Bundle dictionary

/// Orthonormal bases of `H_e = pi(e) H` for every idempotent `e`.
pub fn fiber_bases(s: &InverseSemigroup, pi: &MatrixRep, tol: Tolerance) -> Result<BTreeMap<usize, CMatrix>> {
    pi.ensure_dims(s.n())?;
    let mut bases = BTreeMap::new();
    for e in idempotents(s).iter() {
        let p = &pi.mats[e];
        let eps = tol.scaled(linalg::max_abs(p));
        let residual = linalg::hermitian_residual(p).max((p * p - p).max_modulus());
        if residual > eps {
            return Err(Error::NotProjection { element: e, residual });
        }
        let cert = certify_matrix(p, tol);
        if !cert.is_member() {
            return Err(Error::NotProjection {
                element: e,
                residual: -cert.min_eigenvalue,
            });
        }
        bases.insert(e, linalg::orthonormal_columns(p, 1e-6));
    }
    Ok(bases)
}

/// Fibers `H_e = pi(e) H` and `pi(x)` read as a map `H_{x*x} -> H_{xx*}`.
pub fn rep_to_groupoid(s: &InverseSemigroup, pi: &MatrixRep, tol: Tolerance) -> Result<GroupoidRep> {
    let bases = fiber_bases(s, pi, tol)?;
    Ok(bundle_from_bases(s, pi, &bases))
}

pub(crate) fn bundle_from_bases(s: &InverseSemigroup, pi: &MatrixRep, bases: &BTreeMap<usize, CMatrix>) -> GroupoidRep {
    let mats = s
        .elements()
        .map(|x| bases[&s.range(x)].adjoint() * &pi.mats[x] * &bases[&s.source(x)])
        .collect();
    GroupoidRep {
        fiber_dims: bases.iter().map(|(&e, b)| (e, b.ncols())).collect(),
        mats,
    }
}

/// Coordinates of `v` in the fibers, concatenated in unit order.
pub fn section_of(bases: &BTreeMap<usize, CMatrix>, v: &[C64]) -> Vec<C64> {
    let v = linalg::vector(v);
    bases
        .values()
        .flat_map(|b| (b.adjoint() * &v).iter().copied().collect::<Vec<_>>())
        .collect()
}

/// Direct sum of the fibers with `Pi(x)` placed from block `s(x)` to block
/// `r(x)` and zero elsewhere.
pub fn groupoid_to_rep(s: &InverseSemigroup, bundle: &GroupoidRep) -> Result<MatrixRep> {
    if bundle.mats.len() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: bundle.mats.len(),
        });
    }
    let offsets = bundle.offsets();
    let dim = bundle.total_dim();
    let mut mats = Vec::with_capacity(s.n());
    for x in s.elements() {
        let (r, src) = (s.range(x), s.source(x));
        let (Some(&ro), Some(&so)) = (offsets.get(&r), offsets.get(&src)) else {
            return Err(Error::Structural(format!("missing fiber for element {x}")));
        };
        let block = &bundle.mats[x];
        if block.shape() != (bundle.fiber_dims[&r], bundle.fiber_dims[&src]) {
            return Err(Error::DimensionMismatch {
                expected: bundle.fiber_dims[&r],
                found: block.nrows(),
            });
        }
        let mut m = CMatrix::zeros(dim, dim);
        m.view_mut((ro, so), block.shape()).copy_from(block);
        mats.push(m);
    }
    Ok(MatrixRep { dim, mats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::psd::is_restricted_pd;
    use crate::groupoid::{build_associated_groupoid, check_groupoid_rep, left_regular_groupoid_rep};
    use crate::random::{complex_vec, seeded};
    use crate::restricted::{lambda_r, rho_r};
    use crate::semigroup::{build_builtin, builtin_corpus};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn regular_representations_pass() {
        for s in builtin_corpus() {
            assert!(check_restricted_rep(&s, &lambda_r(&s), tol()).unwrap().ok());
            assert!(check_restricted_rep(&s, &rho_r(&s), tol()).unwrap().ok());
        }
    }

    #[test]
    fn unrestricted_action_violates_the_product_rule() {
        for name in ["semilattice2", "I2", "brandt2"] {
            let s = build_builtin(name).unwrap();
            let report = check_restricted_rep(&s, &partial_action_rep(&s), tol()).unwrap();
            assert!(report.star_ok && report.contraction_ok);
            assert!(!report.product_rule_ok, "{name}");
            let w = &report
                .witnesses
                .iter()
                .find(|w| w.axiom == "product_rule")
                .unwrap()
                .witness;
            assert_ne!(s.source(w[0]), s.range(w[1]));
        }
    }

    #[test]
    fn partial_action_is_an_ordinary_star_representation() {
        for s in builtin_corpus() {
            let pi = partial_action_rep(&s);
            for x in s.elements() {
                assert_eq!(pi.mats[s.star(x)], pi.mats[x].adjoint());
                for y in s.elements() {
                    assert_eq!(&pi.mats[x] * &pi.mats[y], pi.mats[s.mul(x, y)]);
                }
            }
        }
    }

    #[test]
    fn zero_representation_passes() {
        let s = build_builtin("I2").unwrap();
        assert!(check_restricted_rep(&s, &MatrixRep::zero(7, 3), tol()).unwrap().ok());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = build_builtin("I2").unwrap();
        assert!(check_restricted_rep(&s, &MatrixRep::zero(6, 3), tol()).is_err());
        let l = lambda_r(&s);
        assert!(coefficient(&s, &l, &[C64::new(1.0, 0.0)], &[C64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn peak_coefficient() {
        for s in builtin_corpus() {
            let l = lambda_r(&s);
            for x in s.elements() {
                let xi = CFunction::delta(s.name(), s.n(), s.source(x)).values;
                let eta = CFunction::delta(s.name(), s.n(), x).values;
                assert_eq!(coefficient(&s, &l, &xi, &eta).unwrap()[x], C64::new(1.0, 0.0));
            }
            let zero = vec![C64::new(0.0, 0.0); s.n()];
            let any = vec![C64::new(1.0, 0.0); s.n()];
            assert_eq!(
                coefficient(&s, &l, &zero, &any).unwrap(),
                CFunction::zeros(s.name(), s.n())
            );
        }
    }

    #[test]
    fn regular_coefficients_are_reflected_convolutions() {
        let mut rng = seeded(5);
        for s in builtin_corpus() {
            let n = s.n();
            let f = CFunction::new(s.name(), complex_vec(&mut rng, n));
            let g = CFunction::new(s.name(), complex_vec(&mut rng, n));
            let coeff = coefficient(&s, &lambda_r(&s), &f.values, &g.values).unwrap();
            let conv = crate::restricted::coefficient_pair(&s, &f, &g).unwrap();
            for y in s.elements() {
                assert!((coeff[y] - conv[s.star(y)]).norm() < 1e-10 * (1.0 + f.norm2() * g.norm2()));
            }
        }
    }

    #[test]
    fn sums_and_tensors() {
        let mut rng = seeded(11);
        for s in builtin_corpus() {
            let l = lambda_r(&s);
            let ll = direct_sum(&l, &l).unwrap();
            let lt = tensor(&l, &l).unwrap();
            assert!(check_restricted_rep(&s, &ll, tol()).unwrap().ok());
            assert!(check_restricted_rep(&s, &lt, tol()).unwrap().ok());

            let n = s.n();
            let (a, b, c, d) = (
                complex_vec(&mut rng, n),
                complex_vec(&mut rng, n),
                complex_vec(&mut rng, n),
                complex_vec(&mut rng, n),
            );
            let sum = coefficient(
                &s,
                &ll,
                &[a.clone(), c.clone()].concat(),
                &[b.clone(), d.clone()].concat(),
            )
            .unwrap();
            let expected = coefficient(&s, &l, &a, &b)
                .unwrap()
                .add(&coefficient(&s, &l, &c, &d).unwrap());
            assert!(sum.max_abs_diff(&expected) < 1e-10 * (1.0 + expected.sup_norm()));

            let prod = coefficient(&s, &lt, &tensor_vector(&a, &c), &tensor_vector(&b, &d)).unwrap();
            let expected = coefficient(&s, &l, &a, &b)
                .unwrap()
                .mul(&coefficient(&s, &l, &c, &d).unwrap());
            assert!(prod.max_abs_diff(&expected) < 1e-10 * (1.0 + expected.sup_norm()));

            let zero = MatrixRep::zero(n, 2);
            let t = tensor(&l, &zero).unwrap();
            assert!(t.mats.iter().all(|m| m.max_modulus() == 0.0));
        }
    }

    #[test]
    fn gns_reproduces_regular_coefficients() {
        for s in builtin_corpus() {
            let one = s.identity().unwrap();
            let d = CFunction::delta(s.name(), s.n(), one).values;
            let u = coefficient(&s, &lambda_r(&s), &d, &d).unwrap();
            let g = gns(&s, &u, tol()).unwrap();
            assert!(g.round_trip_error <= 1e-8, "{}: {}", s.name(), g.round_trip_error);
            assert!(g.zero_residual <= 1e-8);
            assert!(g.unit_shift_error <= 1e-8);
            assert!(check_restricted_rep(&s, &g.rep, Tolerance::new(1e-8)).unwrap().ok());
        }
    }

    #[test]
    fn gns_of_zero_is_zero_dimensional() {
        let s = build_builtin("brandt2").unwrap();
        let g = gns(&s, &CFunction::zeros("brandt2", 6), tol()).unwrap();
        assert_eq!(g.rep.dim, 0);
        assert_eq!(g.ext_constant, 0.0);
    }

    #[test]
    fn gns_of_trivial_character_is_one_dimensional() {
        let s = build_builtin("Z2").unwrap();
        let u = CFunction::from_real("Z2", &[1.0, 1.0]);
        let g = gns(&s, &u, tol()).unwrap();
        assert_eq!(g.rep.dim, 1);
        assert!((g.ext_constant - 1.0).abs() < 1e-12);
        assert!(g.round_trip_error < 1e-12);
    }

    #[test]
    fn gns_rejects_non_positive_input() {
        let s = build_builtin("Z2").unwrap();
        let u = CFunction::from_real("Z2", &[-1.0, 1.0]);
        assert!(is_restricted_pd(&s, &u, tol()).map(|c| !c.is_member()).unwrap());
        assert!(matches!(gns(&s, &u, tol()), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn bundle_examples() {
        let z2 = build_builtin("Z2").unwrap();
        let b = rep_to_groupoid(&z2, &lambda_r(&z2), tol()).unwrap();
        assert_eq!(b.fiber_dims.len(), 1);
        assert_eq!(b.fiber_dims[&0], 2);

        let sl = build_builtin("semilattice2").unwrap();
        let b = rep_to_groupoid(&sl, &lambda_r(&sl), tol()).unwrap();
        assert_eq!(b.fiber_dims.values().copied().collect::<Vec<_>>(), vec![1, 1]);

        for s in builtin_corpus() {
            let g = build_associated_groupoid(&s);
            let pulled = groupoid_to_rep(&s, &left_regular_groupoid_rep(&g)).unwrap();
            assert!(check_restricted_rep(&s, &pulled, tol()).unwrap().ok(), "{}", s.name());
            let b = rep_to_groupoid(&s, &lambda_r(&s), tol()).unwrap();
            assert!(check_groupoid_rep(&g, &b, Tolerance::new(1e-8)).unwrap().valid);
        }
    }

    #[test]
    fn non_projection_is_rejected() {
        let s = build_builtin("Z2").unwrap();
        let mut pi = lambda_r(&s);
        pi.mats[0] *= C64::new(2.0, 0.0);
        assert!(matches!(
            rep_to_groupoid(&s, &pi, tol()),
            Err(Error::NotProjection { element: 0, .. })
        ));
    }
}
