//! Compensated (Neumaier) summation.
//!
//! Ensemble quantities are sums over entries whose order carries no meaning,
//! so they are accumulated with an error-free running compensation. The result
//! then agrees across permutations to within a few ulps of the total.

use nalgebra::DMatrix;

use super::matrix::C64;

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Entrywise compensated accumulator for complex matrices.
#[derive(Debug, Clone)]
pub struct MatrixSum {
    re: Vec<NeumaierSum>,
    im: Vec<NeumaierSum>,
    rows: usize,
    cols: usize,
}

impl MatrixSum {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            re: vec![NeumaierSum::new(); rows * cols],
            im: vec![NeumaierSum::new(); rows * cols],
            rows,
            cols,
        }
    }

    /// Adds `weight * m`.
    pub fn add_scaled(&mut self, weight: f64, m: &DMatrix<C64>) {
        debug_assert_eq!(m.shape(), (self.rows, self.cols));
        for (k, z) in m.iter().enumerate() {
            self.re[k].add(weight * z.re);
            self.im[k].add(weight * z.im);
        }
    }

    pub fn value(&self) -> DMatrix<C64> {
        DMatrix::from_iterator(
            self.rows,
            self.cols,
            self.re.iter().zip(&self.im).map(|(r, i)| C64::new(r.value(), i.value())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
        assert_eq!(neumaier_sum(xs), 2.0);
    }

    #[test]
    fn order_independent_on_small_terms() {
        let xs: Vec<f64> = (1..=1000).map(|k| 1.0 / k as f64).collect();
        let forward = neumaier_sum(xs.iter().copied());
        let backward = neumaier_sum(xs.iter().rev().copied());
        assert!((forward - backward).abs() <= 4.0 * f64::EPSILON * forward);
    }
}
