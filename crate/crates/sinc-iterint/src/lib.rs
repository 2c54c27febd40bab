//! Verified numerical integration of two-dimensional iterated integrals
//!
//!   I = ∫ₐᵇ ( ∫_A^{q(x)} f(x, y) dy ) dx
//!
//! with a monotone boundary q and possible algebraic singularities of f or q
//! at the boundary of the enclosing rectangle. The inner integral is handled
//! by DE-Sinc indefinite integration (its node set is independent of the
//! upper limit), the outer one by DE-Sinc quadrature on a mesh of twice the
//! spacing, which collapses the kernel to precomputed sine-integral
//! constants. Every approximation is returned together with a fully
//! computable a-priori bound on its absolute error, so results are
//! certificates, not estimates.
//!
//! Entry points: [`problems::builtin`] for the catalog problems,
//! [`iterated::integrate`] for a planned-and-certified run at a given mesh
//! size, and the lower-level pieces ([`sinc`], [`de`], [`special`]) for the
//! one-dimensional rules and the machinery they stand on.
//!
//! All floating-point work is binary64; the accuracy statements on the
//! special functions and the certificate arithmetic are calibrated to it.

pub mod cli;
pub mod de;
mod error;
pub mod iterated;
pub mod problems;
pub mod sinc;
pub mod special;
pub mod sum;

pub use de::{j_kernel, DeMap, DeNode};
pub use error::{Error, Result};
pub use iterated::{
    error_bound_abs, error_bound_rel, integrate, modified_dec, modified_inc, modified_product,
    original_mm, plan_mesh, ApproxResult, Direction, ErrorBound, MeshPlan, Problem, Product,
    RegularityParams,
};
pub use problems::builtin;
pub use sinc::{de_sinc_indefinite, de_sinc_quadrature};
pub use special::{beta_fn, c_const, rho, sigma, sine_integral, SigmaTable};
