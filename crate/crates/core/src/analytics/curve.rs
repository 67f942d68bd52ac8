use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Quadrature,
    MonteCarlo,
    DiscreteExact,
}

/// Sampled linear entropy `P(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCurve {
    times: Vec<f64>,
    values: Vec<f64>,
    provenance: Provenance,
    stderr: Option<Vec<f64>>,
}

const VALUE_SLACK: f64 = 1e-12;

impl EntropyCurve {
    pub fn new(times: Vec<f64>, values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid(
                "curve",
                format!("{} times but {} values", times.len(), values.len()),
            ));
        }
        if let Some(w) = times.windows(2).find(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::invalid(
                "times",
                format!("not strictly increasing at {} -> {}", w[0], w[1]),
            ));
        }
        if let Some(v) = values
            .iter()
            .find(|v| !(-VALUE_SLACK..=0.5 + VALUE_SLACK).contains(*v))
        {
            return Err(Error::invalid("curve", format!("entropy {v} outside [0, 1/2]")));
        }
        Ok(Self {
            times,
            values,
            provenance,
            stderr: None,
        })
    }

    pub fn with_stderr(mut self, stderr: Vec<f64>) -> Result<Self> {
        if stderr.len() != self.values.len() || stderr.iter().any(|s| s.is_nan() || *s < 0.0) {
            return Err(Error::invalid("stderr", "length mismatch or negative entry"));
        }
        self.stderr = Some(stderr);
        Ok(self)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn stderr(&self) -> Option<&[f64]> {
        self.stderr.as_deref()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_value(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }
}
