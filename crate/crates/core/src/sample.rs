use alloc::vec::Vec;

use crate::{Error, Result};

/// A finite sample of positive observations together with its sum and
/// order statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
    sum: f64,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSample("a sample needs at least one value"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidSample("every value must be positive and finite"));
        }
        let mut sorted = values.clone();
        // Stable; ties keep their input order.
        sorted.sort_by(f64::total_cmp);
        let sum = sorted.iter().sum();
        Ok(Sample {
            values,
            sorted,
            sum,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Ascending order statistics `x_{1:n} <= ... <= x_{n:n}`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The sufficient statistic `T`, summed in ascending order so that it does
    /// not depend on the input permutation.
    pub fn sum(&self) -> f64 {
        self.sum
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.len() as f64
    }
}
