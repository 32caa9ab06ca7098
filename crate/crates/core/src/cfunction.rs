use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// A complex-valued function on the elements `0..n` of a named carrier
/// (a semigroup or its associated groupoid, which share an element set).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CFunction {
    pub carrier: String,
    pub values: Vec<C64>,
}

impl CFunction {
    pub fn new(carrier: impl Into<String>, values: Vec<C64>) -> Self {
        CFunction {
            carrier: carrier.into(),
            values,
        }
    }

    pub fn zeros(carrier: impl Into<String>, n: usize) -> Self {
        Self::new(carrier, vec![C64::new(0.0, 0.0); n])
    }

    pub fn constant(carrier: impl Into<String>, n: usize, value: C64) -> Self {
        Self::new(carrier, vec![value; n])
    }

    pub fn delta(carrier: impl Into<String>, n: usize, x: usize) -> Self {
        let mut f = Self::zeros(carrier, n);
        f.values[x] = C64::new(1.0, 0.0);
        f
    }

    pub fn indicator(carrier: impl Into<String>, n: usize, set: impl IntoIterator<Item = usize>) -> Self {
        let mut f = Self::zeros(carrier, n);
        for x in set {
            f.values[x] = C64::new(1.0, 0.0);
        }
        f
    }

    pub fn from_real(carrier: impl Into<String>, values: &[f64]) -> Self {
        Self::new(carrier, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ensure_same_carrier(&self, other: &CFunction) -> Result<()> {
        if self.carrier != other.carrier || self.len() != other.len() {
            return Err(Error::CarrierMismatch {
                expected: format!("{} ({} elements)", self.carrier, self.len()),
                found: format!("{} ({} elements)", other.carrier, other.len()),
            });
        }
        Ok(())
    }

    pub fn ensure_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::CarrierMismatch {
                expected: format!("{n} elements"),
                found: format!("{} ({} elements)", self.carrier, self.len()),
            });
        }
        Ok(())
    }

    pub fn norm1(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.values[x] != C64::new(0.0, 0.0))
            .collect()
    }

    pub fn scale(&self, c: C64) -> CFunction {
        CFunction::new(self.carrier.clone(), self.values.iter().map(|&v| v * c).collect())
    }

    pub fn add(&self, other: &CFunction) -> CFunction {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CFunction) -> CFunction {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &CFunction) -> CFunction {
        self.zip(other, |a, b| a * b)
    }

    fn zip(&self, other: &CFunction, op: impl Fn(C64, C64) -> C64) -> CFunction {
        debug_assert_eq!(self.len(), other.len());
        CFunction::new(
            self.carrier.clone(),
            self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        )
    }

    /// The bilinear pairing `sum_x f(x) g(x)`.
    pub fn pairing(&self, other: &CFunction) -> C64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs_diff(&self, other: &CFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function serializes")
    }

    pub fn from_json(document: &str) -> Result<CFunction> {
        serde_json::from_str(document).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

impl Index<usize> for CFunction {
    type Output = C64;

    fn index(&self, x: usize) -> &C64 {
        &self.values[x]
    }
}

impl IndexMut<usize> for CFunction {
    fn index_mut(&mut self, x: usize) -> &mut C64 {
        &mut self.values[x]
    }
}
