//! Built-in catalog of worked integrals with closed-form values.
//!
//! All three live on the unit square or close to it and stress different
//! regularity regimes: a smooth case, a boundary-derivative singularity, and
//! a weakly singular integrand with a decreasing boundary. Boundary
//! functions are written in terms of the node's one-sided endpoint
//! distances, so the singular factors stay finite at every representable
//! node.

use crate::error::{Error, Result};
use crate::iterated::{Direction, Problem, Product, RegularityParams};

/// Closed form of example 1:
/// ∫₀^√2 ∫₀^{x²/2} dy dx / (x + y + 1/2)
///   = -(√2 + 1/2) ln(1 + 2√2) + 2(1 + √2) ln(1 + √2) - √2.
fn example1_exact() -> f64 {
    let s = 2f64.sqrt();
    -(s + 0.5) * (1.0 + 2.0 * s).ln() + 2.0 * (1.0 + s) * (1.0 + s).ln() - s
}

/// Returns one of the three catalog problems.
///
/// 1. Smooth integrand and boundary: f = 1/(x+y+1/2), q = x²/2 on (0, √2);
///    α = β = γ = δ = 1, d = 3/5, K = 16.6.
/// 2. Derivative singularity in boundary and integrand: f = √(1-y²),
///    q = √(1-(1-x)²) on (0, 1), product type with X ≡ 1; α = β = 1,
///    γ = 1/2, δ = 3, d = 1, K = 1.63; exact value 2/3.
/// 3. Weakly singular integrand, decreasing boundary: f = 1/√(xy),
///    q = 1 - x on (0, 1), product type; α = δ = 1/2, β = γ = 1, d = 4/3,
///    K = 1; exact value π.
pub fn builtin(id: u8) -> Result<Problem> {
    match id {
        1 => Ok(Problem {
            a: 0.0,
            b: 2f64.sqrt(),
            q: Box::new(|nd| 0.5 * nd.x * nd.x),
            q_prime: Box::new(|nd| nd.x),
            direction: Direction::Increasing,
            f: Box::new(|x, y| 1.0 / (x + y + 0.5)),
            product: None,
            params: RegularityParams::new(1.0, 1.0, 1.0, 1.0, 16.6, 0.6)?,
            exact: Some(example1_exact()),
        }),
        2 => Ok(Problem {
            a: 0.0,
            b: 1.0,
            // q(x) = sqrt(1-(1-x)^2) = sqrt(x(2-x)); x = dist_a, 2-x = 1+dist_b
            q: Box::new(|nd| (nd.dist_a * (1.0 + nd.dist_b)).sqrt()),
            // q'(x) = (1-x)/sqrt(x(2-x))
            q_prime: Box::new(|nd| nd.dist_b / (nd.dist_a * (1.0 + nd.dist_b)).sqrt()),
            direction: Direction::Increasing,
            // clamp absorbs the half-ulp overshoot of q at the far end
            f: Box::new(|_, y| ((1.0 - y) * (1.0 + y)).max(0.0).sqrt()),
            product: Some(Product {
                x_factor: Box::new(|_| 1.0),
                y_factor: Box::new(|y| ((1.0 - y) * (1.0 + y)).max(0.0).sqrt()),
            }),
            params: RegularityParams::new(1.0, 1.0, 0.5, 3.0, 1.63, 1.0)?,
            exact: Some(2.0 / 3.0),
        }),
        3 => Ok(Problem {
            a: 0.0,
            b: 1.0,
            // q(x) = 1 - x, exactly the distance to b
            q: Box::new(|nd| nd.dist_b),
            q_prime: Box::new(|_| -1.0),
            direction: Direction::Decreasing,
            f: Box::new(|x, y| 1.0 / (x * y).sqrt()),
            product: Some(Product {
                x_factor: Box::new(|x| 1.0 / x.sqrt()),
                y_factor: Box::new(|y| 1.0 / y.sqrt()),
            }),
            params: RegularityParams::new(0.5, 1.0, 1.0, 0.5, 1.0, 4.0 / 3.0)?,
            exact: Some(std::f64::consts::PI),
        }),
        other => Err(Error::Domain(format!(
            "unknown example id {other} (valid: 1, 2, 3)"
        ))),
    }
}
