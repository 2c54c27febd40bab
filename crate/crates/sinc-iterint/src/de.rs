//! The double-exponential change of variable onto a finite interval.
//!
//! `phi(t) = (b-a)/2 · tanh(½π sinh t) + (b+a)/2` maps the real line onto
//! `(a, b)`. Transformed integrands decay double-exponentially, which is what
//! makes the trapezoidal-type Sinc rules exponentially accurate. Everything
//! here is pure and immutable.

use crate::error::{Error, Result};
use crate::special::si;
use std::f64::consts::PI;

/// A finite interval `(a, b)` equipped with the DE transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeMap {
    a: f64,
    b: f64,
}

/// One Sinc abscissa pushed through the DE map.
///
/// `dist_a` and `dist_b` are the one-sided endpoint distances `x - a` and
/// `b - x`, each computed from its own closed form rather than by
/// subtraction, so integrands with endpoint singularities can be evaluated
/// without catastrophic cancellation even when `x` itself rounds to an
/// endpoint. `w` is the dimensionless weight; the map derivative is
/// `(b - a) * w`.
#[derive(Debug, Clone, Copy)]
pub struct DeNode {
    pub t: f64,
    pub x: f64,
    pub dist_a: f64,
    pub dist_b: f64,
    pub w: f64,
}

/// Dimensionless DE weight `π cosh(t) sech²(½π sinh t) / 4`.
///
/// `sech²(u)` is evaluated as `4e^{-2|u|}/(1+e^{-2|u|})²`; the naive
/// `cosh`-based form overflows long before the weight underflows.
fn weight(t: f64) -> f64 {
    let u = 0.5 * PI * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    0.25 * PI * t.cosh() * sech2
}

impl DeMap {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Domain(format!(
                "DeMap requires finite a < b, got ({a}, {b})"
            )));
        }
        Ok(DeMap { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// The raw map value. Saturates to exactly `a` or `b` for |t| beyond
    /// ~3.2 in double precision; use [`DeMap::node`] when the integrand
    /// needs genuine one-sided distances.
    pub fn phi(&self, t: f64) -> f64 {
        0.5 * (self.b - self.a) * (0.5 * PI * t.sinh()).tanh() + 0.5 * (self.b + self.a)
    }

    /// Map derivative `ψ'(t) = (b-a) π cosh(t) sech²(½π sinh t) / 4`.
    pub fn phi_deriv(&self, t: f64) -> f64 {
        (self.b - self.a) * weight(t)
    }

    /// Inverse map `t = arcsinh((2/π) artanh((2x-a-b)/(b-a)))` for `a < x < b`.
    pub fn phi_inverse(&self, x: f64) -> Result<f64> {
        if !(x > self.a && x < self.b) {
            return Err(Error::Domain(format!(
                "phi_inverse: x = {x} outside ({}, {})",
                self.a, self.b
            )));
        }
        Ok((2.0 / PI * ((2.0 * x - self.a - self.b) / (self.b - self.a)).atanh()).asinh())
    }

    /// Build the node at abscissa `t`, with exact one-sided distances
    ///
    ///   dist_a = (b-a) / (1 + e^{-π sinh t}),
    ///   dist_b = (b-a) / (1 + e^{+π sinh t}),
    ///
    /// both evaluated through `e^{-π|sinh t|}` so neither side can overflow.
    /// Fails once the near-side distance underflows to zero, which is the
    /// point where double precision can no longer separate the node from the
    /// endpoint.
    pub fn node(&self, t: f64) -> Result<DeNode> {
        let width = self.b - self.a;
        let s = t.sinh();
        let e = (-PI * s.abs()).exp();
        let near = width * e / (1.0 + e);
        let far = width / (1.0 + e);
        let (dist_a, dist_b) = if t >= 0.0 { (far, near) } else { (near, far) };
        if !(near.is_finite() && near > 0.0) {
            return Err(Error::MeshInfeasible(vec![format!(
                "node at t = {t} is not representable: endpoint distance underflows"
            )]));
        }
        Ok(DeNode {
            t,
            x: self.a + dist_a,
            dist_a,
            dist_b,
            w: weight(t),
        })
    }
}

/// The Sinc indefinite-integration kernel
/// `J(j,h)(ξ) = h { 1/2 + (1/π) Si[π(ξ/h - j)] }`.
///
/// Tends to `h` as ξ → +∞ and to `0` as ξ → -∞; the asymptotic branch of
/// [`crate::special::sine_integral`] supplies the limit plus its tail for
/// large arguments without evaluating the oscillatory integral.
pub fn j_kernel(j: i64, h: f64, xi: f64) -> f64 {
    h * (0.5 + si(PI * (xi / h - j as f64)) / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::sigma;
    use approx::assert_abs_diff_eq;

    // frozen from the extended-precision oracle
    const PHI_0_1_1: f64 = 0.9756839820363735;
    const DIST_B_0_1_2: f64 = 1.1261403769203567e-05;

    #[test]
    fn map_requires_ordered_finite_interval() {
        assert!(DeMap::new(1.0, 0.0).is_err());
        assert!(DeMap::new(0.0, f64::INFINITY).is_err());
        assert!(DeMap::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn phi_midpoint_and_symmetry() {
        let map = DeMap::new(0.0, 1.0).unwrap();
        assert_eq!(map.phi(0.0), 0.5);
        for t in [0.3, 0.9, 1.7, 2.5] {
            assert_abs_diff_eq!(map.phi(t) + map.phi(-t), 1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(map.phi(1.0), PHI_0_1_1, epsilon = 1e-15);
    }

    #[test]
    fn phi_deriv_center_and_evenness() {
        let map = DeMap::new(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(map.phi_deriv(0.0), PI / 4.0, epsilon = 1e-15);
        for t in [0.4, 1.1, 2.3, 3.0] {
            assert_eq!(map.phi_deriv(t), map.phi_deriv(-t));
        }
    }

    #[test]
    fn phi_deriv_matches_finite_differences() {
        // Central differences of the near-side endpoint distance (phi and the
        // distance differ by a constant, so the derivatives match up to sign).
        // Differencing phi directly would drown in its saturation plateau.
        let map = DeMap::new(0.0, 1.0).unwrap();
        let step = 1e-5;
        let mut worst: f64 = 0.0;
        for i in -30..=30 {
            let t = i as f64 * 0.1;
            let use_b = t >= 0.0;
            let dist = |tt: f64| {
                let nd = map.node(tt).unwrap();
                if use_b {
                    nd.dist_b
                } else {
                    nd.dist_a
                }
            };
            let sign = if use_b { 1.0 } else { -1.0 };
            let fd = -sign * (dist(t + step) - dist(t - step)) / (2.0 * step);
            let rel = (fd - map.phi_deriv(t)).abs() / map.phi_deriv(t);
            worst = worst.max(rel);
        }
        assert!(worst < 1e-7, "worst FD deviation {worst}");
        // spot check at t = 3 (tolerance measured by the pre-build run)
        let fd = -(map.node(3.0 + step).unwrap().dist_b - map.node(3.0 - step).unwrap().dist_b)
            / (2.0 * step);
        assert!((fd - map.phi_deriv(3.0)).abs() / map.phi_deriv(3.0) < 5e-8);
    }

    #[test]
    fn node_symmetric_at_origin() {
        let map = DeMap::new(0.0, 1.0).unwrap();
        let nd = map.node(0.0).unwrap();
        assert_eq!(nd.dist_a, nd.dist_b);
        assert_eq!(nd.dist_a, 0.5);
    }

    #[test]
    fn node_distances_sum_to_width() {
        let map = DeMap::new(0.3, 2.7).unwrap();
        for i in -80..=80 {
            let nd = map.node(i as f64 * 0.05).unwrap();
            assert_abs_diff_eq!(nd.dist_a + nd.dist_b, 2.4, epsilon = 1e-14 * 2.4);
            assert!(nd.dist_a > 0.0 && nd.dist_b > 0.0 && nd.w > 0.0);
        }
    }

    #[test]
    fn node_far_tail_distance_matches_oracle() {
        let map = DeMap::new(0.0, 1.0).unwrap();
        let nd = map.node(2.0).unwrap();
        assert_abs_diff_eq!(nd.dist_b, DIST_B_0_1_2, epsilon = 1e-19);
        // x itself saturates to b here while dist_b stays exact
        let deep = map.node(3.2).unwrap();
        assert_eq!(deep.x, 1.0);
        assert!(deep.dist_b > 0.0);
    }

    #[test]
    fn node_rejects_unrepresentable_abscissa() {
        let map = DeMap::new(0.0, 1.0).unwrap();
        assert!(matches!(map.node(7.0), Err(Error::MeshInfeasible(_))));
    }

    #[test]
    fn weight_consistent_with_deriv() {
        let map = DeMap::new(-2.0, 5.0).unwrap();
        for t in [-2.0, -0.5, 0.0, 1.3, 2.8] {
            let nd = map.node(t).unwrap();
            let rel = (map.width() * nd.w - map.phi_deriv(t)).abs() / map.phi_deriv(t);
            assert!(rel <= 1e-13);
        }
    }

    #[test]
    fn phi_inverse_round_trips() {
        let map = DeMap::new(0.0, 1.0).unwrap();
        assert_eq!(map.phi_inverse(0.5).unwrap(), 0.0);
        // t-side round trip: conditioning is 1/phi'(t), which blows past
        // 1e-10 once |t| exceeds ~2.3, so the tight check stops at 2
        for i in -20..=20 {
            let t = i as f64 * 0.1;
            let x = map.phi(t);
            assert_abs_diff_eq!(map.phi_inverse(x).unwrap(), t, epsilon = 1e-10);
        }
        // x-side round trip stays tight all the way into the tails
        for i in -30..=30 {
            let t = i as f64 * 0.1;
            let x = map.phi(t);
            if x > 0.0 && x < 1.0 {
                assert_abs_diff_eq!(map.phi(map.phi_inverse(x).unwrap()), x, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn phi_inverse_matches_bisection() {
        let map = DeMap::new(0.0, 1.0).unwrap();
        let target = 0.9;
        let (mut lo, mut hi) = (0.0, 4.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if map.phi(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_abs_diff_eq!(
            map.phi_inverse(target).unwrap(),
            0.5 * (lo + hi),
            epsilon = 1e-12
        );
    }

    #[test]
    fn phi_inverse_rejects_boundary_and_outside() {
        let map = DeMap::new(0.0, 1.0).unwrap();
        assert!(map.phi_inverse(0.0).is_err());
        assert!(map.phi_inverse(1.0).is_err());
        assert!(map.phi_inverse(-0.1).is_err());
        // phi saturates to exactly b for large t; the inverse must refuse it
        assert_eq!(map.phi(3.2), 1.0);
        assert!(map.phi_inverse(map.phi(3.2)).is_err());
    }

    #[test]
    fn j_kernel_center_and_limits() {
        // xi = j h gives Si(0) = 0, so exactly h/2
        assert_abs_diff_eq!(j_kernel(3, 0.7, 2.1), 0.35, epsilon = 1e-15);
        // far right limit: tail bound 1/(pi^2 * 1e6)
        assert_abs_diff_eq!(j_kernel(0, 1.0, 1e6), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(j_kernel(0, 1.0, -1e6), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn j_kernel_sigma_identity() {
        // xi/h - j = 3 lands on the sigma_3 constant
        assert_abs_diff_eq!(
            j_kernel(1, 0.5, 2.0),
            0.5 * (0.5 + sigma(3)),
            epsilon = 1e-15
        );
    }

    #[test]
    fn j_kernel_translation_and_point_symmetry() {
        for (j, h, xi) in [(2i64, 0.4, 1.3), (-5, 0.25, -0.7), (9, 0.8, 5.9)] {
            let a = j_kernel(j, h, xi);
            assert_abs_diff_eq!(a, j_kernel(0, h, xi - j as f64 * h), epsilon = 1e-15);
            assert_abs_diff_eq!(
                a + j_kernel(j, h, 2.0 * j as f64 * h - xi),
                h,
                epsilon = 1e-14
            );
        }
    }
}
