use crate::error::SystemError;
use crate::metric::Metric;

use super::DynamicalSystem;

/// A permutation of `{0, …, n-1}` with the discrete metric unless another
/// one is supplied.
#[derive(Debug, Clone)]
pub struct FiniteSystem {
    name: String,
    perm: Vec<usize>,
    inv: Vec<usize>,
    metric: Metric<usize>,
}

impl FiniteSystem {
    pub fn new(perm: Vec<usize>) -> Result<Self, SystemError> {
        let n = perm.len();
        let mut inv = vec![usize::MAX; n];
        for (i, &j) in perm.iter().enumerate() {
            if j >= n || inv[j] != usize::MAX {
                return Err(SystemError::BadPermutation);
            }
            inv[j] = i;
        }
        Ok(FiniteSystem {
            name: format!("permutation[{n}]"),
            perm,
            inv,
            metric: Metric::new("discrete", Some(1.0), |a: &usize, b: &usize| {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }),
        })
    }

    /// Disjoint cycles of the given lengths on consecutive labels.
    pub fn cycles(lengths: &[usize]) -> Self {
        let mut perm = Vec::new();
        let mut base = 0;
        for &l in lengths {
            for k in 0..l {
                perm.push(base + (k + 1) % l);
            }
            base += l;
        }
        Self::new(perm)
            .expect("cycle permutation")
            .named(&format!("cycles{lengths:?}"))
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn with_metric(mut self, metric: Metric<usize>) -> Self {
        self.metric = metric;
        self
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.perm.len()).collect()
    }

    /// Cycle decomposition, each cycle starting at its smallest label.
    pub fn cycle_decomposition(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for s in 0..self.perm.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.perm[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.perm[x];
            }
            out.push(c);
        }
        out
    }
}

impl DynamicalSystem for FiniteSystem {
    type Point = usize;

    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, p: &usize) -> usize {
        self.perm[*p]
    }

    fn backward(&self, p: &usize) -> usize {
        self.inv[*p]
    }

    fn metric(&self) -> &Metric<usize> {
        &self.metric
    }
}
