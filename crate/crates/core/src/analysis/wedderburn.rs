//! Numerical Artin-Wedderburn decomposition of the *-algebra spanned by the
//! restricted left regular representation.
//!
//! The isotypic components are the eigenspaces of a random Hermitian central
//! element; each component is split into irreducible copies by a random
//! Hermitian element of the commutant (the span of `rho_r`), and the copies
//! are aligned with an intertwiner drawn from the commutant.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, MaxModulus};
use crate::random::{complex_vec, seeded, SeededRng};
use crate::restricted::{lambda_r, restricted_product, rho_r, MatrixRep};
use crate::semigroup::InverseSemigroup;
use crate::C64;

pub const DEFAULT_BLOCK_SEED: u64 = 0x5eed_b10c;
pub const MAX_ATTEMPTS: usize = 8;
/// Relative eigenvalue gap below which eigenvalues are merged.
pub const CLUSTER_THRESHOLD: f64 = 1e-7;
/// Gaps between the merge threshold and this relative size are ambiguous.
pub const AMBIGUITY_CEILING: f64 = 1e-4;
pub const BLOCK_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub size: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    /// Dimension of `span { lambda_r(x) }`.
    pub algebra_dim: usize,
    pub blocks: Vec<Block>,
    /// Unitary whose columns are the aligned bases of every irreducible copy,
    /// grouped by block.
    pub transform: CMatrix,
    /// `irreps[i].mats[x] = Q_i* lambda_r(x) Q_i` on the first copy of block `i`.
    pub irreps: Vec<MatrixRep>,
    /// Column bases of the copies of each block.
    pub copies: Vec<Vec<CMatrix>>,
    pub off_block_residual: f64,
    pub copy_residual: f64,
    pub attempts: usize,
    /// `pairing[x][k] = rho_i(x)[b][a]` for the k-th entry `(i, a, b)` of the
    /// block coordinates, so that `u(x) = sum_i tr(Phi_i rho_i(x))`.
    pub(crate) pairing: CMatrix,
}

#[derive(Debug)]
enum Attempt {
    Ambiguous(String),
    Done(Box<BlockDecomposition>),
}

pub fn wedderburn_blocks(s: &InverseSemigroup) -> Result<BlockDecomposition> {
    wedderburn_blocks_seeded(s, DEFAULT_BLOCK_SEED)
}

pub fn wedderburn_blocks_seeded(s: &InverseSemigroup, seed: u64) -> Result<BlockDecomposition> {
    let mut rng = seeded(seed);
    let lambda = lambda_r(s);
    let rho = rho_r(s);
    let center = center_basis(s);
    let algebra_dim = span_dimension(&lambda);
    let mut last = String::new();
    for attempt in 1..=MAX_ATTEMPTS {
        match try_decompose(&lambda, &rho, &center, algebra_dim, &mut rng)? {
            Attempt::Done(mut d) => {
                d.attempts = attempt;
                return Ok(*d);
            }
            Attempt::Ambiguous(why) => last = why,
        }
    }
    Err(Error::Decomposition(format!(
        "no unambiguous split after {MAX_ATTEMPTS} attempts: {last}"
    )))
}

/// Basis (as coefficient vectors) of the center of the restricted algebra,
/// computed from the structure constants.
fn center_basis(s: &InverseSemigroup) -> Vec<Vec<C64>> {
    let n = s.n();
    // Row (y, z) of the system: sum_x c_x ([xy = z] - [yx = z]) = 0.
    let mut a = CMatrix::zeros(n * n, n);
    for x in s.elements() {
        for y in s.elements() {
            if let Some(z) = restricted_product(s, x, y) {
                a[(y * n + z, x)] += C64::new(1.0, 0.0);
            }
            if let Some(z) = restricted_product(s, y, x) {
                a[(y * n + z, x)] -= C64::new(1.0, 0.0);
            }
        }
    }
    let normal = a.adjoint() * &a;
    let (values, vectors) = linalg::hermitian_eigen(&normal);
    let top = values.last().copied().unwrap_or(0.0).max(1.0);
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v <= 1e-9 * top)
        .map(|(i, _)| vectors.column(i).iter().copied().collect())
        .collect()
}

fn span_dimension(rep: &MatrixRep) -> usize {
    let d2 = rep.dim * rep.dim;
    let mut stacked = CMatrix::zeros(d2, rep.len());
    for (x, m) in rep.mats.iter().enumerate() {
        for (k, v) in m.iter().enumerate() {
            stacked[(k, x)] = *v;
        }
    }
    linalg::rank(&stacked, 1e-10)
}

/// Groups ascending eigenvalues; `None` if some gap is ambiguous.
fn cluster(values: &[f64]) -> Option<Vec<std::ops::Range<usize>>> {
    if values.is_empty() {
        return Some(Vec::new());
    }
    let spread = values[values.len() - 1] - values[0];
    let merge = CLUSTER_THRESHOLD * spread.max(1.0);
    let ceiling = AMBIGUITY_CEILING * spread.max(1.0);
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        let gap = values[i] - values[i - 1];
        if gap > merge {
            if gap < ceiling {
                return None;
            }
            groups.push(start..i);
            start = i;
        }
    }
    groups.push(start..values.len());
    Some(groups)
}

fn integrate(rep: &MatrixRep, coeffs: &[C64]) -> CMatrix {
    let mut out = CMatrix::zeros(rep.dim, rep.dim);
    for (m, &c) in rep.mats.iter().zip(coeffs) {
        out += m * c;
    }
    out
}

fn columns(m: &CMatrix, range: std::ops::Range<usize>) -> CMatrix {
    m.columns(range.start, range.len()).into_owned()
}

fn try_decompose(
    lambda: &MatrixRep,
    rho: &MatrixRep,
    center: &[Vec<C64>],
    algebra_dim: usize,
    rng: &mut SeededRng,
) -> Result<Attempt> {
    let n = lambda.dim;
    // Random Hermitian central element.
    let weights = complex_vec(rng, center.len());
    let mut z = vec![C64::new(0.0, 0.0); n];
    for (w, c) in weights.iter().zip(center) {
        for (zi, ci) in z.iter_mut().zip(c) {
            *zi += ci * *w;
        }
    }
    let central = integrate(lambda, &z);
    let h = &central + central.adjoint();
    let (values, vectors) = linalg::hermitian_eigen(&h);
    let Some(isotypic) = cluster(&values) else {
        return Ok(Attempt::Ambiguous("central eigenvalue gap".into()));
    };

    // Random Hermitian element of the commutant.
    let k = {
        let w = complex_vec(rng, rho.len());
        let m = integrate(rho, &w);
        &m + m.adjoint()
    };
    let mixer = integrate(rho, &complex_vec(rng, rho.len()));

    let mut blocks = Vec::new();
    let mut copies_all = Vec::new();
    for range in isotypic {
        let p = columns(&vectors, range);
        let restricted = p.adjoint() * &k * &p;
        let (kv, kvec) = linalg::hermitian_eigen(&restricted);
        let Some(groups) = cluster(&kv) else {
            return Ok(Attempt::Ambiguous("commutant eigenvalue gap".into()));
        };
        let size = groups[0].len();
        if groups.iter().any(|g| g.len() != size) {
            return Ok(Attempt::Ambiguous("unequal copy sizes".into()));
        }
        let mut copies: Vec<CMatrix> = groups.into_iter().map(|g| &p * columns(&kvec, g)).collect();
        let first = copies[0].clone();
        for copy in copies.iter_mut().skip(1) {
            let m = copy.adjoint() * &mixer * &first;
            if linalg::operator_norm(&m) < 1e-6 {
                return Ok(Attempt::Ambiguous("degenerate intertwiner".into()));
            }
            let svd = m.svd(true, true);
            let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
                return Err(Error::Numeric("SVD without singular vectors".into()));
            };
            *copy = &*copy * (u * v_t);
        }
        blocks.push(Block {
            size,
            multiplicity: copies.len(),
        });
        copies_all.push(copies);
    }

    let transform = CMatrix::from_columns(
        &copies_all
            .iter()
            .flatten()
            .flat_map(|c| c.column_iter().map(|col| col.into_owned()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    );
    let irreps: Vec<MatrixRep> = copies_all
        .iter()
        .zip(&blocks)
        .map(|(copies, b)| MatrixRep {
            dim: b.size,
            mats: lambda
                .mats
                .iter()
                .map(|m| copies[0].adjoint() * m * &copies[0])
                .collect(),
        })
        .collect();

    let (off_block_residual, copy_residual) = block_residuals(lambda, &transform, &blocks);
    let unitary_residual = (transform.adjoint() * &transform - CMatrix::identity(n, n)).max_modulus();
    let square_sum: usize = blocks.iter().map(|b| b.size * b.size).sum();
    if off_block_residual > BLOCK_RESIDUAL
        || copy_residual > BLOCK_RESIDUAL
        || unitary_residual > BLOCK_RESIDUAL
        || square_sum != algebra_dim
    {
        return Ok(Attempt::Ambiguous(format!(
            "validation failed: off-block {off_block_residual:.2e}, copies {copy_residual:.2e}, \
             unitary {unitary_residual:.2e}, sum d^2 = {square_sum} vs {algebra_dim}"
        )));
    }

    let mut pairing = CMatrix::zeros(lambda.len(), square_sum);
    for x in 0..lambda.len() {
        let mut col = 0;
        for irrep in &irreps {
            let d = irrep.dim;
            for a in 0..d {
                for b in 0..d {
                    pairing[(x, col)] = irrep.mats[x][(b, a)];
                    col += 1;
                }
            }
        }
    }

    Ok(Attempt::Done(Box::new(BlockDecomposition {
        algebra_dim,
        blocks,
        transform,
        irreps,
        copies: copies_all,
        off_block_residual,
        copy_residual,
        attempts: 0,
        pairing,
    })))
}

/// Largest entry outside the diagonal blocks, and largest difference between
/// a copy and the first copy of its block, over all conjugated generators.
fn block_residuals(lambda: &MatrixRep, transform: &CMatrix, blocks: &[Block]) -> (f64, f64) {
    let mut owner = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for copy in 0..b.multiplicity {
            owner.extend(std::iter::repeat_n((i, copy), b.size));
        }
    }
    let mut block_start = Vec::new();
    let mut acc = 0;
    for b in blocks {
        block_start.push(acc);
        acc += b.size * b.multiplicity;
    }
    let (mut off, mut rep) = (0.0f64, 0.0f64);
    for m in &lambda.mats {
        let c = transform.adjoint() * m * transform;
        for r in 0..c.nrows() {
            for col in 0..c.ncols() {
                if owner[r] != owner[col] {
                    off = off.max(c[(r, col)].norm());
                }
            }
        }
        for (i, b) in blocks.iter().enumerate() {
            let base = block_start[i];
            let first = c.view((base, base), (b.size, b.size));
            for copy in 1..b.multiplicity {
                let at = base + copy * b.size;
                let other = c.view((at, at), (b.size, b.size));
                rep = rep.max((other - first).max_modulus());
            }
        }
    }
    (off, rep)
}

impl BlockDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    /// Block matrices `Phi_i` with `u(x) = sum_i tr(Phi_i rho_i(x))`.
    pub fn functional_blocks(&self, u: &[C64]) -> Result<Vec<CMatrix>> {
        if u.len() != self.pairing.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.pairing.nrows(),
                found: u.len(),
            });
        }
        let coords = self
            .pairing
            .clone()
            .lu()
            .solve(&linalg::vector(u))
            .ok_or_else(|| Error::Numeric("block pairing is singular".into()))?;
        Ok(self.split(&coords.iter().copied().collect::<Vec<_>>()))
    }

    /// `f` with `sum_x f(x) rho_i(x) = a_i` for every block.
    pub fn element_from_blocks(&self, blocks: &[CMatrix]) -> Result<Vec<C64>> {
        let mut rhs = Vec::with_capacity(self.pairing.ncols());
        for (a, irrep) in blocks.iter().zip(&self.irreps) {
            for col in 0..irrep.dim {
                for row in 0..irrep.dim {
                    // pairing columns are ordered (a, b) -> rho[b][a]
                    rhs.push(a[(row, col)]);
                }
            }
        }
        let f = self
            .pairing
            .transpose()
            .lu()
            .solve(&linalg::vector(&rhs))
            .ok_or_else(|| Error::Numeric("block pairing is singular".into()))?;
        Ok(f.iter().copied().collect())
    }

    fn split(&self, coords: &[C64]) -> Vec<CMatrix> {
        let mut out = Vec::new();
        let mut at = 0;
        for irrep in &self.irreps {
            let d = irrep.dim;
            out.push(CMatrix::from_row_slice(d, d, &coords[at..at + d * d]));
            at += d * d;
        }
        out
    }
}

/// Draws a random Hermitian element of `span lambda_r` (for tests and samples).
pub fn random_hermitian_element<R: Rng>(lambda: &MatrixRep, rng: &mut R) -> CMatrix {
    let m = integrate(lambda, &complex_vec(rng, lambda.len()));
    &m + m.adjoint()
}
