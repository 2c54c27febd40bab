//! Compensated summation.

/// Kahan–Babuška (Neumaier variant) accumulator.
///
/// All node loops in this crate sum in ascending index order through this
/// accumulator, which keeps results reproducible across runs and removes
/// most cancellation noise from the alternating sine-integral kernel.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
