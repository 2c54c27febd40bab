//! One-dimensional DE-Sinc building blocks.
//!
//! Definite quadrature
//!   ∫ₐᵇ g ≈ h̃ Σ_{i=-M₋}^{M₊} g(ψ(ih̃)) ψ'(ih̃)
//! and indefinite integration
//!   ∫ₐˣ g ≈ Σ_{j=-N₋}^{N₊} g(ψ(jh)) ψ'(jh) J(j,h)(ψ⁻¹(x)),
//! both over a finite interval via the DE map. Mesh selection lives with the
//! iterated formulas; these are the raw rules.
//!
//! Integrands receive the full [`DeNode`] so endpoint-singular factors can be
//! built from the one-sided distances instead of the (possibly saturated)
//! node coordinate.

use crate::de::{j_kernel, DeMap, DeNode};
use crate::error::{Error, Result};
use crate::sum::KahanSum;

fn check_positive_step(name: &'static str, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!(
            "{name}: step must be positive, got {h}"
        )));
    }
    Ok(())
}

/// DE-Sinc quadrature of `g` over the map's interval.
///
/// Nodes run in ascending index order through a compensated accumulator;
/// `g` is called exactly once per node.
pub fn de_sinc_quadrature<G>(
    g: G,
    map: &DeMap,
    h_tilde: f64,
    m_minus: i64,
    m_plus: i64,
) -> Result<f64>
where
    G: Fn(&DeNode) -> f64,
{
    check_positive_step("de_sinc_quadrature", h_tilde)?;
    let mut acc = KahanSum::new();
    for i in -m_minus..=m_plus {
        let node = map.node(i as f64 * h_tilde)?;
        let v = g(&node);
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                what: "integrand",
                outer: Some(i),
                inner: None,
            });
        }
        acc.add(v * map.width() * node.w);
    }
    Ok(h_tilde * acc.total())
}

/// DE-Sinc indefinite integration of `g` from `a` to `x`, for `a < x < b`.
///
/// The node set does not depend on `x`; only the kernel values do.
pub fn de_sinc_indefinite<G>(
    g: G,
    map: &DeMap,
    h: f64,
    n_minus: i64,
    n_plus: i64,
    x: f64,
) -> Result<f64>
where
    G: Fn(&DeNode) -> f64,
{
    check_positive_step("de_sinc_indefinite", h)?;
    let xi = map.phi_inverse(x)?;
    let mut acc = KahanSum::new();
    for j in -n_minus..=n_plus {
        let node = map.node(j as f64 * h)?;
        let v = g(&node);
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                what: "integrand",
                outer: None,
                inner: Some(j),
            });
        }
        acc.add(v * map.width() * node.w * j_kernel(j, h, xi));
    }
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_map() -> DeMap {
        DeMap::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn quadrature_of_constant() {
        let v = de_sinc_quadrature(|_| 1.0, &unit_map(), 0.5, 6, 6).unwrap();
        // tolerance measured by the pre-build run (3.4e-6 at this mesh)
        assert!((v - 1.0).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn quadrature_of_odd_integrand_cancels() {
        let map = DeMap::new(-1.0, 1.0).unwrap();
        let v = de_sinc_quadrature(|nd| nd.x, &map, 0.5, 6, 6).unwrap();
        assert!(v.abs() < 1e-15, "got {v}");
    }

    #[test]
    fn quadrature_of_inverse_sqrt_singularity() {
        // ∫₀¹ x^{-1/2} dx = 2; the node's dist_a keeps the factor finite
        let v = de_sinc_quadrature(|nd| 1.0 / nd.dist_a.sqrt(), &unit_map(), 0.5, 8, 8).unwrap();
        assert!((v - 2.0).abs() < 1e-4, "got {v}");
    }

    #[test]
    fn quadrature_rejects_non_finite_integrand() {
        let err = de_sinc_quadrature(
            |nd| if nd.t == 0.0 { f64::NAN } else { 1.0 },
            &unit_map(),
            0.5,
            2,
            2,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::NonFiniteEvaluation { outer: Some(0), .. }
        ));
    }

    #[test]
    fn indefinite_of_constant_at_midpoint() {
        let v = de_sinc_indefinite(|_| 1.0, &unit_map(), 0.4, 8, 8, 0.5).unwrap();
        assert!((v - 0.5).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn indefinite_of_odd_shifted_integrand() {
        // ∫₀^{1/2} (s - 1/2) ds = -1/8; tolerance from the pre-build run (2.8e-4)
        let v = de_sinc_indefinite(|nd| nd.x - 0.5, &unit_map(), 0.4, 8, 8, 0.5).unwrap();
        assert!((v + 0.125).abs() < 1e-3, "got {v}");
    }

    #[test]
    fn indefinite_near_b_recovers_quadrature() {
        // as x -> b the kernel tends to h and the sum collapses onto DE-Sinc
        // quadrature at the matching (h, N, N) mesh
        let map = unit_map();
        let x = map.phi(3.0); // 1 - 2e-14, still strictly inside
        let full = de_sinc_indefinite(|_| 1.0, &map, 0.4, 8, 8, x).unwrap();
        let quad = de_sinc_quadrature(|_| 1.0, &map, 0.4, 8, 8).unwrap();
        assert!((full - quad).abs() < 1e-5, "diff {}", (full - quad).abs());
    }

    #[test]
    fn indefinite_rejects_x_outside_interval() {
        assert!(de_sinc_indefinite(|_| 1.0, &unit_map(), 0.4, 4, 4, 1.0).is_err());
        assert!(de_sinc_indefinite(|_| 1.0, &unit_map(), 0.4, 4, 4, -0.2).is_err());
    }

    #[test]
    fn rules_are_linear() {
        let map = unit_map();
        let g1 = |nd: &DeNode| nd.x * nd.x;
        let g2 = |nd: &DeNode| (1.0 + nd.x).ln();
        let (al, be) = (2.5, -1.25);
        let lhs = de_sinc_quadrature(|nd| al * g1(nd) + be * g2(nd), &map, 0.5, 6, 6).unwrap();
        let rhs = al * de_sinc_quadrature(g1, &map, 0.5, 6, 6).unwrap()
            + be * de_sinc_quadrature(g2, &map, 0.5, 6, 6).unwrap();
        assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0));

        let lhs = de_sinc_indefinite(|nd| al * g1(nd) + be * g2(nd), &map, 0.4, 6, 6, 0.7).unwrap();
        let rhs = al * de_sinc_indefinite(g1, &map, 0.4, 6, 6, 0.7).unwrap()
            + be * de_sinc_indefinite(g2, &map, 0.4, 6, 6, 0.7).unwrap();
        assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0));
    }

    #[test]
    fn quadrature_of_positive_integrand_is_positive() {
        let v = de_sinc_quadrature(|nd| 0.1 + nd.x * nd.x, &unit_map(), 0.4, 8, 8).unwrap();
        assert!(v > 0.0);
    }

    #[test]
    fn indefinite_monotone_for_nonnegative_integrand() {
        // g(x) = x, exact antiderivative x^2/2; approximations at increasing x
        // may deviate by at most twice the worst per-point error
        let map = unit_map();
        let xs: Vec<f64> = (1..10).map(|i| i as f64 * 0.1).collect();
        let approx: Vec<f64> = xs
            .iter()
            .map(|&x| de_sinc_indefinite(|nd| nd.x, &map, 0.4, 8, 8, x).unwrap())
            .collect();
        let worst = xs
            .iter()
            .zip(&approx)
            .map(|(&x, &v)| (v - 0.5 * x * x).abs())
            .fold(0.0f64, f64::max);
        for pair in approx.windows(2) {
            assert!(pair[1] >= pair[0] - 2.0 * worst);
        }
    }

    #[test]
    fn rejects_nonpositive_step() {
        assert!(de_sinc_quadrature(|_| 1.0, &unit_map(), 0.0, 3, 3).is_err());
        assert!(de_sinc_indefinite(|_| 1.0, &unit_map(), -0.5, 3, 3, 0.5).is_err());
    }
}
