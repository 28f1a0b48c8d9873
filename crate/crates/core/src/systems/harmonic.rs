use std::sync::Arc;

use crate::metric::Metric;

use super::DynamicalSystem;

/// The points `x_n = 1 + 1/2 + … + 1/n` of the real line under the identity
/// map. Points are represented by their index `n ≥ 1`; partial sums are
/// tabulated up to a window and computed on demand beyond it.
#[derive(Debug, Clone)]
pub struct HarmonicPoints {
    sums: Arc<Vec<f64>>,
    metric: Metric<usize>,
}

fn partial_sum(table: &[f64], n: usize) -> f64 {
    if n < table.len() {
        return table[n];
    }
    let mut s = *table.last().unwrap_or(&0.0);
    for i in table.len()..=n {
        s += 1.0 / i as f64;
    }
    s
}

impl HarmonicPoints {
    pub fn new(window: usize) -> Self {
        let mut sums = Vec::with_capacity(window + 1);
        sums.push(0.0);
        let mut s = 0.0;
        for i in 1..=window {
            s += 1.0 / i as f64;
            sums.push(s);
        }
        let sums = Arc::new(sums);
        let table = sums.clone();
        let metric = Metric::new("real", None, move |a: &usize, b: &usize| {
            (partial_sum(&table, *a) - partial_sum(&table, *b)).abs()
        });
        HarmonicPoints { sums, metric }
    }

    /// Largest tabulated index.
    pub fn window(&self) -> usize {
        self.sums.len() - 1
    }

    pub fn value(&self, n: usize) -> f64 {
        partial_sum(&self.sums, n)
    }

    /// Indices `1..=window`.
    pub fn points(&self) -> Vec<usize> {
        (1..=self.window()).collect()
    }
}

impl DynamicalSystem for HarmonicPoints {
    type Point = usize;

    fn name(&self) -> &str {
        "harmonic"
    }

    fn forward(&self, p: &usize) -> usize {
        *p
    }

    fn backward(&self, p: &usize) -> usize {
        *p
    }

    fn metric(&self) -> &Metric<usize> {
        &self.metric
    }

    fn iterate(&self, p: &usize, _n: i64) -> usize {
        *p
    }
}
