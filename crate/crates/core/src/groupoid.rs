//! Finite discrete groupoids, the associated groupoid `S_a` of an inverse
//! semigroup, and bundle representations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::psd::{certify_matrix, PsdCertificate};
use crate::cfunction::CFunction;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, MaxModulus};
use crate::restricted::{matrix_from_rows, matrix_rows, restricted_product};
use crate::semigroup::{idempotents, InverseSemigroup, ValidationReport, ViolationLog};
use crate::tolerance::Tolerance;
use crate::C64;

/// Partial multiplication table with inverse and unit space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    name: String,
    prod: Vec<Vec<Option<usize>>>,
    inv: Vec<usize>,
    units: Vec<usize>,
}

/// A range fiber `G^u` or source fiber `G_u`, members ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub unit: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidExport {
    pub name: String,
    pub elements: Vec<usize>,
    pub units: Vec<usize>,
    /// `(x, y, xy)` for every composable pair.
    pub arrows: Vec<[usize; 3]>,
    pub inverse: Vec<usize>,
}

impl Groupoid {
    /// Assembles a groupoid from its arrow table; only structure is checked
    /// here, the axioms are checked by [`check_groupoid`].
    pub fn from_parts(
        name: impl Into<String>,
        n: usize,
        arrows: &[[usize; 3]],
        inv: Vec<usize>,
        mut units: Vec<usize>,
    ) -> Result<Self> {
        if inv.len() != n {
            return Err(Error::Field {
                field: "inverse".into(),
                message: format!("expected {n} entries, found {}", inv.len()),
            });
        }
        let oob = |v: usize| v >= n;
        if inv.iter().copied().any(oob) || units.iter().copied().any(oob) {
            return Err(Error::Structural("index out of range in inverse or units".into()));
        }
        let mut prod = vec![vec![None; n]; n];
        for &[x, y, xy] in arrows {
            if oob(x) || oob(y) || oob(xy) {
                return Err(Error::Structural(format!("arrow ({x}, {y}, {xy}) out of range")));
            }
            if prod[x][y].is_some_and(|p| p != xy) {
                return Err(Error::Structural(format!("pair ({x}, {y}) has two products")));
            }
            prod[x][y] = Some(xy);
        }
        units.sort_unstable();
        units.dedup();
        Ok(Groupoid {
            name: name.into(),
            prod,
            inv,
            units,
        })
    }

    pub fn n(&self) -> usize {
        self.inv.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    #[inline]
    pub fn product(&self, x: usize, y: usize) -> Option<usize> {
        self.prod[x][y]
    }

    pub fn defined(&self, x: usize, y: usize) -> bool {
        self.prod[x][y].is_some()
    }

    #[inline]
    pub fn inverse(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    /// `x^{-1} x`. Panics on a groupoid that violates axiom (iii).
    pub fn source(&self, x: usize) -> usize {
        self.prod[self.inv[x]][x].expect("(x^-1, x) is composable")
    }

    /// `x x^{-1}`.
    pub fn range(&self, x: usize) -> usize {
        self.prod[x][self.inv[x]].expect("(x, x^-1) is composable")
    }

    pub fn range_fiber(&self, u: usize) -> Fiber {
        Fiber {
            unit: u,
            members: self.elements().filter(|&x| self.range(x) == u).collect(),
        }
    }

    pub fn source_fiber(&self, u: usize) -> Fiber {
        Fiber {
            unit: u,
            members: self.elements().filter(|&x| self.source(x) == u).collect(),
        }
    }

    /// The isotropy group `G_u^u`.
    pub fn isotropy(&self, u: usize) -> Vec<usize> {
        self.elements()
            .filter(|&x| self.range(x) == u && self.source(x) == u)
            .collect()
    }

    pub fn export(&self) -> GroupoidExport {
        let mut arrows = Vec::new();
        for x in self.elements() {
            for y in self.elements() {
                if let Some(xy) = self.prod[x][y] {
                    arrows.push([x, y, xy]);
                }
            }
        }
        GroupoidExport {
            name: self.name.clone(),
            elements: self.elements().collect(),
            units: self.units.clone(),
            arrows,
            inverse: self.inv.clone(),
        }
    }

    pub fn from_export(doc: &GroupoidExport) -> Result<Self> {
        Groupoid::from_parts(
            doc.name.clone(),
            doc.elements.len(),
            &doc.arrows,
            doc.inverse.clone(),
            doc.units.clone(),
        )
    }

    pub fn with_inverse(mut self, inv: Vec<usize>) -> Self {
        self.inv = inv;
        self
    }
}

/// `S_a`: the element set of `S` with the restricted product and `x^{-1} = x*`.
/// Shares the carrier name of `S`.
pub fn build_associated_groupoid(s: &InverseSemigroup) -> Groupoid {
    let n = s.n();
    let prod = (0..n)
        .map(|x| (0..n).map(|y| restricted_product(s, x, y)).collect())
        .collect();
    Groupoid {
        name: s.name().to_string(),
        prod,
        inv: s.stars().to_vec(),
        units: idempotents(s).members,
    }
}

/// Exhaustive scan of the four groupoid axioms, the unit space, and the
/// composability criterion `(x, y) in G^2 <=> s(x) = r(y)`.
pub fn check_groupoid(g: &Groupoid) -> ValidationReport {
    let n = g.n();
    let mut log = ViolationLog::default();
    for x in 0..n {
        if g.inv[g.inv[x]] != x {
            log.push("inverse_involutive", &[x]);
        }
    }
    for x in 0..n {
        for y in 0..n {
            let Some(xy) = g.prod[x][y] else { continue };
            for z in 0..n {
                let Some(yz) = g.prod[y][z] else { continue };
                match (g.prod[xy][z], g.prod[x][yz]) {
                    (Some(a), Some(b)) if a == b => {}
                    _ => log.push("associativity", &[x, y, z]),
                }
            }
        }
    }
    for x in 0..n {
        let xi = g.inv[x];
        if g.prod[xi][x].is_none() {
            log.push("left_inverse_composable", &[x]);
        }
        for y in 0..n {
            if let Some(xy) = g.prod[x][y] {
                if g.prod[xi][xy] != Some(y) {
                    log.push("left_cancellation", &[x, y]);
                }
            }
            if let Some(yx) = g.prod[y][x] {
                if g.prod[yx][xi] != Some(y) {
                    log.push("right_cancellation", &[y, x]);
                }
            }
        }
    }
    let mut report = log.finish();
    if !report.valid {
        return report;
    }
    let mut log = ViolationLog::default();
    let mut sources: Vec<usize> = g.elements().map(|x| g.source(x)).collect();
    let mut ranges: Vec<usize> = g.elements().map(|x| g.range(x)).collect();
    sources.sort_unstable();
    sources.dedup();
    ranges.sort_unstable();
    ranges.dedup();
    if sources != g.units || ranges != g.units {
        log.push("unit_space", &g.units);
    }
    for x in 0..n {
        for y in 0..n {
            if g.defined(x, y) != (g.source(x) == g.range(y)) {
                log.push("composability", &[x, y]);
            }
        }
    }
    report = log.finish();
    report
}

/// The I-norm and its two one-sided parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct INorm {
    pub value: f64,
    /// `sup_u sum_{x in G_u} |f(x)|`
    pub source_side: f64,
    /// `sup_u sum_{x in G^u} |f(x)|`
    pub range_side: f64,
}

pub fn i_norm(g: &Groupoid, f: &CFunction) -> Result<INorm> {
    f.ensure_len(g.n())?;
    let mut by_source: BTreeMap<usize, f64> = BTreeMap::new();
    let mut by_range: BTreeMap<usize, f64> = BTreeMap::new();
    for x in g.elements() {
        *by_source.entry(g.source(x)).or_default() += f[x].norm();
        *by_range.entry(g.range(x)).or_default() += f[x].norm();
    }
    let source_side = by_source.values().copied().fold(0.0, f64::max);
    let range_side = by_range.values().copied().fold(0.0, f64::max);
    Ok(INorm {
        value: source_side.max(range_side),
        source_side,
        range_side,
    })
}

/// `(f * g)(x) = sum f(y) g(z)` over composable `(y, z)` with `yz = x`.
pub fn groupoid_convolution(g: &Groupoid, f: &CFunction, h: &CFunction) -> Result<CFunction> {
    f.ensure_len(g.n())?;
    f.ensure_same_carrier(h)?;
    let mut out = CFunction::zeros(f.carrier.clone(), g.n());
    for y in g.elements() {
        for z in g.elements() {
            if let Some(x) = g.prod[y][z] {
                out[x] += f[y] * h[z];
            }
        }
    }
    Ok(out)
}

/// `f^(x) = f(x^{-1})`.
pub fn check_fn(g: &Groupoid, f: &CFunction) -> CFunction {
    CFunction::new(f.carrier.clone(), g.elements().map(|x| f[g.inv[x]]).collect())
}

/// `theta(f, g) = g * f^`.
pub fn theta(g: &Groupoid, f: &CFunction, h: &CFunction) -> Result<CFunction> {
    groupoid_convolution(g, h, &check_fn(g, f))
}

/// Values of `theta(f, g)` on the unit space.
pub fn theta_on_units(g: &Groupoid, f: &CFunction, h: &CFunction) -> Result<Vec<(usize, C64)>> {
    let full = theta(g, f, h)?;
    Ok(g.units.iter().map(|&u| (u, full[u])).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCertificate {
    pub unit: usize,
    pub certificate: PsdCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupoidPsdCertificate {
    pub positive: bool,
    pub marginal: bool,
    pub per_unit: Vec<UnitCertificate>,
}

impl GroupoidPsdCertificate {
    pub fn min_eigenvalue(&self) -> f64 {
        self.per_unit
            .iter()
            .map(|c| c.certificate.min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `M^u[y][x] = phi(y^{-1} x)` over `x, y in G^u`.
pub fn fiber_matrix(g: &Groupoid, phi: &CFunction, u: usize) -> CMatrix {
    let fiber = g.range_fiber(u).members;
    let k = fiber.len();
    CMatrix::from_fn(k, k, |i, j| {
        let (y, x) = (fiber[i], fiber[j]);
        let yx = g.prod[g.inv[y]][x].expect("y^-1 x is defined inside a range fiber");
        phi[yx]
    })
}

/// Positive definiteness via one Hermitian eigenvalue test per unit.
pub fn is_positive_definite_groupoid(g: &Groupoid, phi: &CFunction, tol: Tolerance) -> Result<GroupoidPsdCertificate> {
    phi.ensure_len(g.n())?;
    let per_unit: Vec<UnitCertificate> = g
        .units
        .iter()
        .map(|&u| UnitCertificate {
            unit: u,
            certificate: certify_matrix(&fiber_matrix(g, phi, u), tol),
        })
        .collect();
    Ok(GroupoidPsdCertificate {
        positive: per_unit.iter().all(|c| c.certificate.is_member()),
        marginal: per_unit.iter().any(|c| c.certificate.marginal),
        per_unit,
    })
}

// ---------------------------------------------------------------------------
// Bundle representations

/// `mats[x]` maps the fiber at `s(x)` onto the fiber at `r(x)`. Sections are
/// concatenations of per-fiber vectors in ascending unit order.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidRep {
    pub fiber_dims: BTreeMap<usize, usize>,
    pub mats: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct GroupoidRepDoc {
    fiber_dims: BTreeMap<usize, usize>,
    shapes: Vec<[usize; 2]>,
    mats: Vec<Vec<Vec<C64>>>,
}

impl GroupoidRep {
    pub fn total_dim(&self) -> usize {
        self.fiber_dims.values().sum()
    }

    /// Start of each fiber inside a concatenated section.
    pub fn offsets(&self) -> BTreeMap<usize, usize> {
        let mut acc = 0;
        self.fiber_dims
            .iter()
            .map(|(&u, &d)| {
                let start = acc;
                acc += d;
                (u, start)
            })
            .collect()
    }

    pub fn fiber_of<'a>(&self, section: &'a [C64], unit: usize) -> &'a [C64] {
        let start = self.offsets()[&unit];
        &section[start..start + self.fiber_dims[&unit]]
    }

    pub fn to_json(&self) -> String {
        let doc = GroupoidRepDoc {
            fiber_dims: self.fiber_dims.clone(),
            shapes: self.mats.iter().map(|m| [m.nrows(), m.ncols()]).collect(),
            mats: self.mats.iter().map(matrix_rows).collect(),
        };
        serde_json::to_string(&doc).expect("bundle representation serializes")
    }

    pub fn from_json(document: &str) -> Result<GroupoidRep> {
        let doc: GroupoidRepDoc = serde_json::from_str(document).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.shapes.len() != doc.mats.len() {
            return Err(Error::Structural("one shape per matrix expected".into()));
        }
        let mats = doc
            .mats
            .iter()
            .zip(&doc.shapes)
            .map(|(rows, &[nrows, ncols])| matrix_from_rows(rows, nrows, ncols))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupoidRep {
            fiber_dims: doc.fiber_dims,
            mats,
        })
    }
}

/// Checks shapes, unitarity between fibers, `pi(x^{-1}) = pi(x)*` and
/// multiplicativity on composable pairs.
pub fn check_groupoid_rep(g: &Groupoid, rep: &GroupoidRep, tol: Tolerance) -> Result<ValidationReport> {
    if rep.mats.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: rep.mats.len(),
        });
    }
    let dim = |u: usize| rep.fiber_dims.get(&u).copied();
    for x in g.elements() {
        let (Some(dr), Some(ds)) = (dim(g.range(x)), dim(g.source(x))) else {
            return Err(Error::Structural(format!("missing fiber for element {x}")));
        };
        if rep.mats[x].shape() != (dr, ds) {
            return Err(Error::DimensionMismatch {
                expected: dr,
                found: rep.mats[x].nrows(),
            });
        }
    }
    let mut log = ViolationLog::default();
    for x in g.elements() {
        let m = &rep.mats[x];
        let eps = tol.scaled(linalg::max_abs(m));
        let (dr, ds) = m.shape();
        let unitary = dr == ds
            && (m.adjoint() * m - CMatrix::identity(ds, ds)).max_modulus() <= eps
            && (m * m.adjoint() - CMatrix::identity(dr, dr)).max_modulus() <= eps;
        if !unitary {
            log.push("unitary", &[x]);
        }
        if (&rep.mats[g.inverse(x)] - m.adjoint()).max_modulus() > eps {
            log.push("inverse_adjoint", &[x]);
        }
        for y in g.elements() {
            if let Some(xy) = g.product(x, y) {
                if (&rep.mats[xy] - m * &rep.mats[y]).max_modulus() > eps {
                    log.push("multiplicative", &[x, y]);
                }
            }
        }
    }
    Ok(log.finish())
}

/// Fiber at `u` is `l2(G^u)` with basis the members of `G^u` in ascending
/// order; `(L_x xi)(y) = xi(x^{-1} y)` for `y in G^{r(x)}`.
pub fn left_regular_groupoid_rep(g: &Groupoid) -> GroupoidRep {
    let fibers: BTreeMap<usize, Vec<usize>> = g.units.iter().map(|&u| (u, g.range_fiber(u).members)).collect();
    let position = |u: usize, x: usize| fibers[&u].iter().position(|&y| y == x).expect("member of fiber");
    let mats = g
        .elements()
        .map(|x| {
            let (r, s) = (g.range(x), g.source(x));
            let mut m = CMatrix::zeros(fibers[&r].len(), fibers[&s].len());
            for (row, &y) in fibers[&r].iter().enumerate() {
                let xy = g.product(g.inverse(x), y).expect("x^-1 y defined for y in G^r(x)");
                m[(row, position(s, xy))] = C64::new(1.0, 0.0);
            }
            m
        })
        .collect();
    GroupoidRep {
        fiber_dims: fibers.iter().map(|(&u, f)| (u, f.len())).collect(),
        mats,
    }
}

/// `x -> <pi(x) xi(s(x)), eta(r(x))>` for concatenated sections.
pub fn groupoid_coefficient(g: &Groupoid, rep: &GroupoidRep, xi: &[C64], eta: &[C64]) -> Result<CFunction> {
    let total = rep.total_dim();
    for v in [xi, eta] {
        if v.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: v.len(),
            });
        }
    }
    let values = g
        .elements()
        .map(|x| {
            let a = linalg::vector(rep.fiber_of(xi, g.source(x)));
            let b = linalg::vector(rep.fiber_of(eta, g.range(x)));
            let image: CVector = &rep.mats[x] * a;
            linalg::inner(&image, &b)
        })
        .collect();
    Ok(CFunction::new(g.name(), values))
}
