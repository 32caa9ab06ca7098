//! Finite inverse semigroups presented by Cayley tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the number of elements accepted by constructors.
pub const DEFAULT_SIZE_CAP: usize = 64;

/// At most this many witnesses are kept per axiom.
pub const MAX_VIOLATIONS_PER_AXIOM: usize = 16;

pub const BUILTIN_NAMES: [&str; 6] = ["Z2", "Z3", "semilattice2", "semilattice3", "I2", "brandt2"];

/// Unchecked tables as they appear in a semigroup document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSemigroup {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
    pub star: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub(crate) fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn summary(&self) -> String {
        if self.valid {
            return "valid".to_string();
        }
        let mut out = String::new();
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{} at {:?}", v.axiom, v.witness);
        }
        out
    }

    pub fn violates(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

/// Collects witnesses with a per-axiom cap.
#[derive(Default)]
pub(crate) struct ViolationLog {
    violations: Vec<Violation>,
}

impl ViolationLog {
    pub(crate) fn push(&mut self, axiom: &str, witness: &[usize]) {
        let seen = self.violations.iter().filter(|v| v.axiom == axiom).count();
        if seen < MAX_VIOLATIONS_PER_AXIOM {
            self.violations.push(Violation {
                axiom: axiom.to_string(),
                witness: witness.to_vec(),
            });
        }
    }

    pub(crate) fn finish(self) -> ValidationReport {
        ValidationReport::from_violations(self.violations)
    }
}

/// A validated finite inverse semigroup. Elements are the indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    name: String,
    table: Vec<Vec<usize>>,
    star: Vec<usize>,
    identity: Option<usize>,
    zero: Option<usize>,
}

/// Idempotents in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentSet {
    pub members: Vec<usize>,
}

impl IdempotentSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }
}

fn check_structure(raw: &RawSemigroup) -> Result<()> {
    let n = raw.n;
    if n == 0 {
        return Err(Error::Structural("n must be positive".into()));
    }
    if raw.table.len() != n {
        return Err(Error::Field {
            field: "table".into(),
            message: format!("expected {n} rows, found {}", raw.table.len()),
        });
    }
    for (i, row) in raw.table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Field {
                field: format!("table[{i}]"),
                message: format!("expected {n} entries, found {}", row.len()),
            });
        }
        if let Some((j, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::Field {
                field: format!("table[{i}][{j}]"),
                message: format!("index {v} out of range for n = {n}"),
            });
        }
    }
    if raw.star.len() != n {
        return Err(Error::Field {
            field: "star".into(),
            message: format!("expected {n} entries, found {}", raw.star.len()),
        });
    }
    if let Some((i, &v)) = raw.star.iter().enumerate().find(|(_, &v)| v >= n) {
        return Err(Error::Field {
            field: format!("star[{i}]"),
            message: format!("index {v} out of range for n = {n}"),
        });
    }
    for (field, value) in [("identity", raw.identity), ("zero", raw.zero)] {
        if let Some(v) = value {
            if v >= n {
                return Err(Error::Field {
                    field: field.into(),
                    message: format!("index {v} out of range for n = {n}"),
                });
            }
        }
    }
    Ok(())
}

/// Scans every inverse-semigroup axiom exhaustively. Malformed tables are a
/// structural error rather than a violation.
pub fn check_inverse_semigroup(raw: &RawSemigroup) -> Result<ValidationReport> {
    check_structure(raw)?;
    let n = raw.n;
    let t = &raw.table;
    let s = &raw.star;
    let mut log = ViolationLog::default();

    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if t[t[x][y]][z] != t[x][t[y][z]] {
                    log.push("associativity", &[x, y, z]);
                }
            }
        }
    }
    for x in 0..n {
        if s[s[x]] != x {
            log.push("involution", &[x]);
        }
    }
    for x in 0..n {
        for y in 0..n {
            if s[t[x][y]] != t[s[y]][s[x]] {
                log.push("star_antihomomorphism", &[x, y]);
            }
        }
    }
    for x in 0..n {
        if t[t[x][s[x]]][x] != x {
            log.push("regularity", &[x]);
        }
    }
    let idem: Vec<usize> = (0..n).filter(|&e| t[e][e] == e).collect();
    for (i, &e) in idem.iter().enumerate() {
        for &f in &idem[i + 1..] {
            if t[e][f] != t[f][e] {
                log.push("idempotents_commute", &[e, f]);
            }
        }
    }
    if let Some(one) = raw.identity {
        for x in 0..n {
            if t[one][x] != x || t[x][one] != x {
                log.push("identity", &[x]);
            }
        }
    }
    if let Some(z) = raw.zero {
        if s[z] != z {
            log.push("zero", &[z]);
        }
        for x in 0..n {
            if t[z][x] != z || t[x][z] != z {
                log.push("zero", &[x]);
            }
        }
    }
    Ok(log.finish())
}

impl InverseSemigroup {
    /// Validates `raw`; records an absorbing self-adjoint element as the zero
    /// when none is declared.
    pub fn new(raw: RawSemigroup) -> Result<Self> {
        let report = check_inverse_semigroup(&raw)?;
        if !report.valid {
            return Err(Error::Axioms(report));
        }
        let zero = raw.zero.or_else(|| detect_zero(&raw.table, &raw.star));
        Ok(InverseSemigroup {
            name: raw.name.unwrap_or_else(|| format!("S{}", raw.n)),
            table: raw.table,
            star: raw.star,
            identity: raw.identity,
            zero,
        })
    }

    pub fn n(&self) -> usize {
        self.table.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    #[inline]
    pub fn star(&self, x: usize) -> usize {
        self.star[x]
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn unit(&self) -> Result<usize> {
        self.identity.ok_or(Error::NotUnital)
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn stars(&self) -> &[usize] {
        &self.star
    }

    /// `x* x`.
    #[inline]
    pub fn source(&self, x: usize) -> usize {
        self.mul(self.star(x), x)
    }

    /// `x x*`.
    #[inline]
    pub fn range(&self, x: usize) -> usize {
        self.mul(x, self.star(x))
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    pub fn to_raw(&self) -> RawSemigroup {
        RawSemigroup {
            n: self.n(),
            table: self.table.clone(),
            star: self.star.clone(),
            identity: self.identity,
            zero: self.zero,
            name: Some(self.name.clone()),
        }
    }
}

fn detect_zero(table: &[Vec<usize>], star: &[usize]) -> Option<usize> {
    let n = table.len();
    (0..n).find(|&z| star[z] == z && (0..n).all(|x| table[z][x] == z && table[x][z] == z))
}

/// `{x : xx = x}` in ascending order.
pub fn idempotents(s: &InverseSemigroup) -> IdempotentSet {
    IdempotentSet {
        members: s.elements().filter(|&x| s.is_idempotent(x)).collect(),
    }
}

/// `{s s* : s in S}` in ascending order; agrees with [`idempotents`].
pub fn range_idempotents(s: &InverseSemigroup) -> IdempotentSet {
    let mut members: Vec<usize> = s.elements().map(|x| s.range(x)).collect();
    members.sort_unstable();
    members.dedup();
    IdempotentSet { members }
}

// ---------------------------------------------------------------------------
// Standard constructions

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardKind {
    CyclicGroup(usize),
    SemilatticeChain(usize),
    SymmetricInverseMonoid(usize),
    /// `k x k` matrix units, a zero, and an adjoined identity.
    BrandtUnital(usize),
    DirectProduct(Box<StandardKind>, Box<StandardKind>),
}

impl StandardKind {
    pub fn size(&self) -> usize {
        match self {
            StandardKind::CyclicGroup(k) | StandardKind::SemilatticeChain(k) => *k,
            StandardKind::SymmetricInverseMonoid(k) => symmetric_inverse_monoid_order(*k),
            StandardKind::BrandtUnital(k) => k.saturating_mul(*k).saturating_add(2),
            StandardKind::DirectProduct(a, b) => a.size().saturating_mul(b.size()),
        }
    }
}

/// `sum_i C(k, i)^2 i!`, the number of partial injections of a k-set.
pub fn symmetric_inverse_monoid_order(k: usize) -> usize {
    let mut total: usize = 0;
    let mut binom: usize = 1;
    let mut fact: usize = 1;
    for i in 0..=k {
        if i > 0 {
            binom = binom.saturating_mul(k + 1 - i) / i;
            fact = fact.saturating_mul(i);
        }
        total = total.saturating_add(binom.saturating_mul(binom).saturating_mul(fact));
    }
    total
}

pub fn build_standard(kind: &StandardKind) -> Result<InverseSemigroup> {
    build_standard_capped(kind, DEFAULT_SIZE_CAP)
}

pub fn build_standard_capped(kind: &StandardKind, cap: usize) -> Result<InverseSemigroup> {
    let requested = kind.size();
    if requested > cap {
        return Err(Error::SizeCap { requested, cap });
    }
    if requested == 0 {
        return Err(Error::Structural("empty semigroup requested".into()));
    }
    let raw = match kind {
        StandardKind::CyclicGroup(k) => cyclic_group(*k),
        StandardKind::SemilatticeChain(k) => semilattice_chain(*k),
        StandardKind::SymmetricInverseMonoid(k) => symmetric_inverse_monoid(*k),
        StandardKind::BrandtUnital(k) => brandt_unital(*k),
        StandardKind::DirectProduct(a, b) => {
            let a = build_standard_capped(a, cap)?;
            let b = build_standard_capped(b, cap)?;
            direct_product(&a, &b)?
        }
    };
    InverseSemigroup::new(raw)
}

fn cyclic_group(k: usize) -> RawSemigroup {
    RawSemigroup {
        n: k,
        table: (0..k).map(|x| (0..k).map(|y| (x + y) % k).collect()).collect(),
        star: (0..k).map(|x| (k - x) % k).collect(),
        identity: Some(0),
        zero: None,
        name: Some(format!("Z{k}")),
    }
}

/// Index 0 is the top; the product of a chain is its lower element.
fn semilattice_chain(k: usize) -> RawSemigroup {
    RawSemigroup {
        n: k,
        table: (0..k).map(|x| (0..k).map(|y| x.max(y)).collect()).collect(),
        star: (0..k).collect(),
        identity: Some(0),
        zero: None,
        name: Some(format!("semilattice{k}")),
    }
}

/// All partial injections of `{0..k}`, identity first, product `(xy)(p) = x(y(p))`.
fn symmetric_inverse_monoid(k: usize) -> RawSemigroup {
    let mut maps: Vec<Vec<Option<usize>>> = Vec::new();
    let mut current = vec![None; k];
    let mut used = vec![false; k];
    enumerate_partial_injections(0, &mut current, &mut used, &mut maps);
    let identity: Vec<Option<usize>> = (0..k).map(Some).collect();
    let pos = maps
        .iter()
        .position(|m| *m == identity)
        .expect("identity map enumerated");
    let id = maps.remove(pos);
    maps.insert(0, id);

    let index_of = |m: &[Option<usize>]| maps.iter().position(|x| x.as_slice() == m).unwrap();
    let n = maps.len();
    let mut table = vec![vec![0; n]; n];
    for (x, mx) in maps.iter().enumerate() {
        for (y, my) in maps.iter().enumerate() {
            let composed: Vec<Option<usize>> = my.iter().map(|p| p.and_then(|q| mx[q])).collect();
            table[x][y] = index_of(&composed);
        }
    }
    let star = maps
        .iter()
        .map(|m| {
            let mut inv = vec![None; k];
            for (p, q) in m.iter().enumerate() {
                if let Some(q) = q {
                    inv[*q] = Some(p);
                }
            }
            index_of(&inv)
        })
        .collect();
    RawSemigroup {
        n,
        table,
        star,
        identity: Some(0),
        zero: None,
        name: Some(format!("I{k}")),
    }
}

fn enumerate_partial_injections(
    point: usize,
    current: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<Option<usize>>>,
) {
    let k = current.len();
    if point == k {
        out.push(current.clone());
        return;
    }
    current[point] = None;
    enumerate_partial_injections(point + 1, current, used, out);
    for image in 0..k {
        if !used[image] {
            used[image] = true;
            current[point] = Some(image);
            enumerate_partial_injections(point + 1, current, used, out);
            used[image] = false;
        }
    }
    current[point] = None;
}

/// Identity at 0, matrix units `e_ij` at `1 + i*k + j`, zero last.
fn brandt_unital(k: usize) -> RawSemigroup {
    let n = k * k + 2;
    let zero = n - 1;
    let unit = |i: usize, j: usize| 1 + i * k + j;
    let mut table = vec![vec![zero; n]; n];
    for x in 0..n {
        table[0][x] = x;
        table[x][0] = x;
    }
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                table[unit(i, j)][unit(j, l)] = unit(i, l);
            }
        }
    }
    let mut star = vec![0; n];
    star[zero] = zero;
    for i in 0..k {
        for j in 0..k {
            star[unit(i, j)] = unit(j, i);
        }
    }
    RawSemigroup {
        n,
        table,
        star,
        identity: Some(0),
        zero: Some(zero),
        name: Some(format!("brandt{k}")),
    }
}

/// Pairs `(a, b)` at index `a * |B| + b`.
pub fn direct_product(a: &InverseSemigroup, b: &InverseSemigroup) -> Result<RawSemigroup> {
    let nb = b.n();
    let n = a.n() * nb;
    let pair = |x: usize| (x / nb, x % nb);
    let mut table = vec![vec![0; n]; n];
    for (x, row) in table.iter_mut().enumerate() {
        let (xa, xb) = pair(x);
        for (y, entry) in row.iter_mut().enumerate() {
            let (ya, yb) = pair(y);
            *entry = a.mul(xa, ya) * nb + b.mul(xb, yb);
        }
    }
    let star = (0..n)
        .map(|x| {
            let (xa, xb) = pair(x);
            a.star(xa) * nb + b.star(xb)
        })
        .collect();
    let identity = match (a.identity(), b.identity()) {
        (Some(ia), Some(ib)) => Some(ia * nb + ib),
        _ => None,
    };
    Ok(RawSemigroup {
        n,
        table,
        star,
        identity,
        zero: None,
        name: Some(format!("{}x{}", a.name(), b.name())),
    })
}

pub fn builtin_kind(name: &str) -> Result<StandardKind> {
    Ok(match name {
        "Z2" => StandardKind::CyclicGroup(2),
        "Z3" => StandardKind::CyclicGroup(3),
        "semilattice2" => StandardKind::SemilatticeChain(2),
        "semilattice3" => StandardKind::SemilatticeChain(3),
        "I2" => StandardKind::SymmetricInverseMonoid(2),
        "brandt2" => StandardKind::BrandtUnital(2),
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    })
}

/// One of the named corpus members in [`BUILTIN_NAMES`].
pub fn build_builtin(name: &str) -> Result<InverseSemigroup> {
    Ok(build_standard(&builtin_kind(name)?)?.with_name(name))
}

pub fn builtin_corpus() -> Vec<InverseSemigroup> {
    BUILTIN_NAMES
        .iter()
        .map(|name| build_builtin(name).expect("builtin corpus is valid"))
        .collect()
}

// ---------------------------------------------------------------------------
// Documents

/// Reads a document without validating the axioms.
pub fn parse_raw_semigroup(document: &str) -> Result<RawSemigroup> {
    serde_json::from_str(document).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn parse_semigroup(document: &str) -> Result<InverseSemigroup> {
    InverseSemigroup::new(parse_raw_semigroup(document)?)
}

fn render_row(row: &[usize]) -> String {
    let cells: Vec<String> = row.iter().map(usize::to_string).collect();
    format!("[{}]", cells.join(", "))
}

/// Canonical document: fields in the order n, table, star, identity, zero, name.
pub fn render_semigroup(s: &InverseSemigroup) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"n\": {},", s.n());
    out.push_str("  \"table\": [\n");
    for (i, row) in s.table.iter().enumerate() {
        let sep = if i + 1 < s.n() { "," } else { "" };
        let _ = writeln!(out, "    {}{sep}", render_row(row));
    }
    out.push_str("  ],\n");
    let _ = write!(out, "  \"star\": {}", render_row(&s.star));
    if let Some(one) = s.identity {
        let _ = write!(out, ",\n  \"identity\": {one}");
    }
    if let Some(z) = s.zero {
        let _ = write!(out, ",\n  \"zero\": {z}");
    }
    let name = serde_json::to_string(&s.name).expect("string serializes");
    let _ = write!(out, ",\n  \"name\": {name}\n}}\n");
    out
}
