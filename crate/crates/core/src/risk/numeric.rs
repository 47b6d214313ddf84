use statrs::function::factorial::ln_binomial;

/// `ln C(n, k)`; `-inf` when `k > n`.
///
/// Uses the running product `Π (n−j)/(j+1)` while it stays finite (relative
/// error a few ulps per factor) and falls back to log-gamma beyond that.
pub fn ln_choose(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let m = k.min(n - k);
    if m <= PRODUCT_LIMIT {
        let c = (0..m).fold(1.0f64, |acc, j| acc * (n - j) as f64 / (j + 1) as f64);
        if c.is_finite() {
            return c.ln();
        }
    }
    ln_binomial(n as u64, k as u64)
}

const PRODUCT_LIMIT: usize = 1100;

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
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

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
