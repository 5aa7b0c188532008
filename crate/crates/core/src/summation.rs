//! Compensated accumulation for deterministic fixed-order reductions.
//!
//! All mode sums and quadrature reductions in this crate accumulate
//! through [`NeumaierSum`] in a fixed iteration order, so results are
//! bit-identical across runs and independent of any outer parallelism.

/// Kahan summation with Neumaier's improvement: the compensation term
/// also absorbs the case where the incoming value dominates the
/// running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<T: IntoIterator<Item = f64>>(&mut self, iter: T) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Sum an iterator with compensation, in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::new();
    acc.extend(values);
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_tail() {
        let mut s = NeumaierSum::new();
        for v in [1e200, 0.1, 0.2, 0.3, -1e200] {
            s.add(v);
        }
        assert!((s.total() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn matches_exact_small_sum() {
        let xs: Vec<f64> = (1..=1000).map(|i| 1.0 / i as f64).collect();
        let naive: f64 = xs.iter().sum();
        let comp = compensated_sum(xs.iter().copied());
        assert!((comp - naive).abs() < 1e-12);
    }
}
