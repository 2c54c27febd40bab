//! Minimal double-double arithmetic.
//!
//! Only what the compensated Taylor sum in [`super::sine_integral`] needs:
//! addition, multiplication, and division by a small exact integer. The
//! Taylor terms of Si grow to ~1e14 before cancelling back to O(1), so the
//! term recurrence must carry ~30 extra bits or the cancellation destroys
//! the 1e-14 accuracy target.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    #[inline]
    pub fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    #[inline]
    pub fn from_square(v: f64) -> Self {
        let (hi, lo) = two_prod(v, v);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + rhs.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * rhs.lo + self.lo * rhs.hi);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, c: f64) -> Self {
        let (p, e) = two_prod(self.hi, c);
        let (hi, lo) = quick_two_sum(p, e + self.lo * c);
        Dd { hi, lo }
    }

    /// Division by an exactly representable f64 (small integers here).
    #[inline]
    pub fn div_f64(self, c: f64) -> Self {
        let q1 = self.hi / c;
        let (p, e) = two_prod(q1, c);
        let (r_hi, r_lo) = two_sum(self.hi, -p);
        let q2 = (r_hi + (r_lo + self.lo - e)) / c;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_error_term_captured() {
        let x = 1.0 + 2f64.powi(-30);
        let d = Dd::from_square(x);
        // (1+2^-30)^2 = 1 + 2^-29 + 2^-60; the 2^-60 tail lands in lo.
        assert_eq!(d.hi, 1.0 + 2f64.powi(-29));
        assert_eq!(d.lo, 2f64.powi(-60));
    }

    #[test]
    fn div_roundtrip() {
        let d = Dd::from_square(core::f64::consts::PI)
            .div_f64(7.0)
            .mul_f64(7.0);
        let exact = Dd::from_square(core::f64::consts::PI);
        assert!((d.hi - exact.hi).abs() <= f64::EPSILON * exact.hi);
        assert!((d.to_f64() - exact.to_f64()).abs() <= 1e-30);
    }
}
