//! Iterated integration of I = ∫ₐᵇ (∫_A^{q(x)} f(x,y) dy) dx for monotone q.
//!
//! After the substitution y = q(s) the inner integral becomes an indefinite
//! integral over (a, b), approximated by the DE-Sinc indefinite rule on a
//! mesh of spacing h; the outer integral is handled by DE-Sinc quadrature on
//! the coarser mesh h̃ = 2h. Because the outer abscissas are the even inner
//! ones, the kernel values collapse to the precomputable constants
//! `1/2 ± σ_{2i-j}` and the whole approximation is two nested weighted sums.
//!
//! Every approximation carries a fully computable a-priori error bound, so a
//! result is a value plus a certificate rather than a bare number.

use crate::de::{DeMap, DeNode};
use crate::error::{Error, Result};
use crate::special::{beta_fn, c_const, rho, SigmaTable};
use crate::sum::KahanSum;
use std::f64::consts::PI;

/// Monotonicity of the boundary function q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// q'(x) ≥ 0 on (a, b)
    Increasing,
    /// q'(x) ≤ 0 on (a, b)
    Decreasing,
}

/// Boundary-side function evaluated at a DE node.
///
/// Taking the node rather than a bare coordinate lets catalog problems build
/// q and q' from the one-sided endpoint distances, which is what keeps
/// integrands with boundary singularities evaluable at the extreme nodes
/// (where `node.x` itself may round to an endpoint).
pub type BoundaryFn = Box<dyn Fn(&DeNode) -> f64 + Send + Sync>;
/// The integrand f(x, y).
pub type IntegrandFn = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// One factor of a product decomposition.
pub type FactorFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Product decomposition f(x, y) = X(x) · Y(y).
pub struct Product {
    pub x_factor: FactorFn,
    pub y_factor: FactorFn,
}

/// Regularity hypotheses under which the certificate holds: the boundary
/// exponents α, β (outer variable) and γ, δ (inner variable), the constant
/// K of |f(z,q(w)) q'(w)| ≤ K|z-a|^{α-1}|b-z|^{β-1}|w-a|^{γ-1}|b-w|^{δ-1},
/// and the analyticity strip half-width d. These are asserted by the
/// caller, not inferred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    k_bound: f64,
    d: f64,
}

impl RegularityParams {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        k_bound: f64,
        d: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && gamma > 0.0 && delta > 0.0) {
            return Err(Error::Domain(format!(
                "exponents must be positive, got ({alpha}, {beta}, {gamma}, {delta})"
            )));
        }
        if !(k_bound.is_finite() && k_bound > 0.0) {
            return Err(Error::Domain(format!("K must be positive, got {k_bound}")));
        }
        if !(d > 0.0 && d < PI / 2.0) {
            return Err(Error::Domain(format!("d must lie in (0, pi/2), got {d}")));
        }
        Ok(RegularityParams {
            alpha,
            beta,
            gamma,
            delta,
            k_bound,
            d,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn k_bound(&self) -> f64 {
        self.k_bound
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// With a different K; the bound is linear in K.
    pub fn with_k_bound(&self, k_bound: f64) -> Result<Self> {
        Self::new(
            self.alpha, self.beta, self.gamma, self.delta, k_bound, self.d,
        )
    }

    pub fn mu(&self) -> f64 {
        self.alpha.min(self.beta)
    }

    pub fn mu_bar(&self) -> f64 {
        self.alpha.max(self.beta)
    }

    pub fn nu(&self) -> f64 {
        self.gamma.min(self.delta)
    }

    pub fn nu_bar(&self) -> f64 {
        self.gamma.max(self.delta)
    }
}

/// One integral instance: interval, boundary function and derivative,
/// monotonicity, integrand, optional product decomposition, regularity
/// parameters, and the closed-form value when one is known.
pub struct Problem {
    pub a: f64,
    pub b: f64,
    pub q: BoundaryFn,
    pub q_prime: BoundaryFn,
    pub direction: Direction,
    pub f: IntegrandFn,
    pub product: Option<Product>,
    pub params: RegularityParams,
    pub exact: Option<f64>,
}

impl Problem {
    pub fn de_map(&self) -> Result<DeMap> {
        DeMap::new(self.a, self.b)
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

/// The mesh selected for one value of h: counts for the inner (N±, spacing h)
/// and outer (M±, spacing h̃ = 2h) sums, plus the feasibility verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshPlan {
    pub h: f64,
    pub h_tilde: f64,
    pub n: i64,
    pub m: i64,
    pub n_minus: i64,
    pub n_plus: i64,
    pub m_minus: i64,
    pub m_plus: i64,
    pub feasible: bool,
    pub infeasibility_reasons: Vec<String>,
    pub n_total_general: i64,
    pub n_total_product: i64,
}

// ceil/floor with a guard that snaps values within 1e-12 of an integer, so
// representation noise in the log expressions cannot shift a count by one.
fn ceil_guarded(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() < 1e-12 {
        r as i64
    } else {
        v.ceil() as i64
    }
}

fn floor_guarded(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() < 1e-12 {
        r as i64
    } else {
        v.floor() as i64
    }
}

/// Mesh selection for the modified formulas:
///
///   n  = ⌈(1/h) log(2d/(νh))⌉,
///   m  = ⌈½{n + (1/h) log(μ/ν)}⌉,
///   M₋ = m, M₊ = m - ⌊log(β/α)/h̃⌋   (μ = α branch; mirrored for μ = β),
///   N₋ = n, N₊ = n - ⌊log(δ/γ)/h⌋   (ν = γ branch; mirrored for ν = δ),
///
/// feasible iff all counts are positive and M₋h̃ ≥ ρ_α, M₊h̃ ≥ ρ_β,
/// N₋h ≥ ρ_γ, N₊h ≥ ρ_δ. On exponent ties the first branch is taken (the two
/// coincide). Infeasibility is reported in the plan, never as an error.
pub fn plan_mesh(params: &RegularityParams, h: f64) -> MeshPlan {
    let h_tilde = 2.0 * h;
    let mut plan = MeshPlan {
        h,
        h_tilde,
        n: 0,
        m: 0,
        n_minus: 0,
        n_plus: 0,
        m_minus: 0,
        m_plus: 0,
        feasible: false,
        infeasibility_reasons: Vec::new(),
        n_total_general: 0,
        n_total_product: 0,
    };
    if !(h > 0.0 && h.is_finite()) {
        plan.infeasibility_reasons
            .push(format!("h must be positive, got {h}"));
        return plan;
    }
    let arg = 2.0 * params.d() / (params.nu() * h);
    if arg <= 1.0 {
        plan.infeasibility_reasons
            .push("log argument nonpositive".to_string());
        return plan;
    }
    let n = ceil_guarded(arg.ln() / h);
    let m = ceil_guarded(0.5 * (n as f64 + (params.mu() / params.nu()).ln() / h));
    let (m_minus, m_plus) = if params.alpha() <= params.beta() {
        (
            m,
            m - floor_guarded((params.beta() / params.alpha()).ln() / h_tilde),
        )
    } else {
        (
            m - floor_guarded((params.alpha() / params.beta()).ln() / h_tilde),
            m,
        )
    };
    let (n_minus, n_plus) = if params.gamma() <= params.delta() {
        (
            n,
            n - floor_guarded((params.delta() / params.gamma()).ln() / h),
        )
    } else {
        (
            n - floor_guarded((params.gamma() / params.delta()).ln() / h),
            n,
        )
    };
    plan.n = n;
    plan.m = m;
    plan.n_minus = n_minus;
    plan.n_plus = n_plus;
    plan.m_minus = m_minus;
    plan.m_plus = m_plus;
    plan.n_total_general = (m_minus + m_plus + 1) * (n_minus + n_plus + 1);
    plan.n_total_product = (m_minus + m_plus + 1) + (n_minus + n_plus + 1);

    plan.feasible = true;
    for (name, v) in [
        ("n", n),
        ("m", m),
        ("N_minus", n_minus),
        ("N_plus", n_plus),
        ("M_minus", m_minus),
        ("M_plus", m_plus),
    ] {
        if v <= 0 {
            plan.feasible = false;
            plan.infeasibility_reasons
                .push(format!("{name} nonpositive"));
        }
    }
    if plan.feasible {
        // rho() only fails for nonpositive exponents, excluded by construction
        let checks = [
            (
                m_minus as f64 * h_tilde,
                rho(params.alpha()).unwrap(),
                "M_minus*h_tilde < rho_alpha",
            ),
            (
                m_plus as f64 * h_tilde,
                rho(params.beta()).unwrap(),
                "M_plus*h_tilde < rho_beta",
            ),
            (
                n_minus as f64 * h,
                rho(params.gamma()).unwrap(),
                "N_minus*h < rho_gamma",
            ),
            (
                n_plus as f64 * h,
                rho(params.delta()).unwrap(),
                "N_plus*h < rho_delta",
            ),
        ];
        for (lhs, threshold, name) in checks {
            if lhs < threshold {
                plan.feasible = false;
                plan.infeasibility_reasons.push(name.to_string());
            }
        }
    }
    plan
}

/// The certified error bound and its quadrature/indefinite components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBound {
    /// Certified bound on |I - approximation|.
    pub abs: f64,
    /// Outer-quadrature contribution (E₁).
    pub e1_component: f64,
    /// Inner indefinite-integration contribution (E₂).
    pub e2_component: f64,
    /// Certified relative bound, present only when |approx| > abs.
    pub rel: Option<f64>,
}

/// Evaluates the computable error bound
///
///   |I - I(h)| ≤ [ B(γ,δ) c_{γ,δ,d}/μ {e^{πμ̄/2} + 2c_{α,β,d}/(1-e^{-πd/h})}
///     + (1/ν) {B(α,β) + (4c_{α,β,d}/μ) e^{-πd/h}/(1-e^{-πd/h})}
///       {1.1 e^{πν̄/2} + h c_{γ,δ,d}/(d(1-e^{-2πd/h}))} ]
///     · 2K (b-a)^{α+β+γ+δ-2} e^{-πd/h},
///
/// with the two bracketed terms exposed as `e1_component`/`e2_component`.
/// `width` is the interval length b - a. Errors if the mesh plan for this h
/// is infeasible: the bound's derivation needs the ρ conditions.
pub fn error_bound_abs(params: &RegularityParams, width: f64, h: f64) -> Result<ErrorBound> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::Domain(format!(
            "width must be positive, got {width}"
        )));
    }
    let plan = plan_mesh(params, h);
    if !plan.feasible {
        return Err(Error::MeshInfeasible(plan.infeasibility_reasons));
    }
    let q = (-PI * params.d() / h).exp();
    let q2 = (-2.0 * PI * params.d() / h).exp();
    let c_ab = c_const(params.alpha(), params.beta(), params.d())?;
    let c_gd = c_const(params.gamma(), params.delta(), params.d())?;
    let e1_bracket = beta_fn(params.gamma(), params.delta())? * c_gd / params.mu()
        * ((PI * params.mu_bar() / 2.0).exp() + 2.0 * c_ab / (1.0 - q));
    let e2_bracket = (1.0 / params.nu())
        * (beta_fn(params.alpha(), params.beta())? + (4.0 * c_ab / params.mu()) * (q / (1.0 - q)))
        * (1.1 * (PI * params.nu_bar() / 2.0).exp() + h * c_gd / (params.d() * (1.0 - q2)));
    let prefactor = 2.0
        * params.k_bound()
        * width.powf(params.alpha() + params.beta() + params.gamma() + params.delta() - 2.0)
        * q;
    let e1 = e1_bracket * prefactor;
    let e2 = e2_bracket * prefactor;
    Ok(ErrorBound {
        abs: e1 + e2,
        e1_component: e1,
        e2_component: e2,
        rel: None,
    })
}

/// Relative-error certificate: bound_abs / ||approx| - bound_abs| when the
/// approximation dominates its own bound, absent otherwise.
pub fn error_bound_rel(bound_abs: f64, approx: f64) -> Option<f64> {
    if approx.abs() > bound_abs {
        Some(bound_abs / (approx.abs() - bound_abs).abs())
    } else {
        None
    }
}

/// An approximation together with its certificate and cost accounting.
#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub value: f64,
    pub plan: MeshPlan,
    /// Present for the modified formulas; the original formula carries none.
    pub bound: Option<ErrorBound>,
    /// Actual integrand (or factor) evaluations performed.
    pub eval_count: u64,
    pub used_product_path: bool,
}

struct InnerNode {
    j: i64,
    y: f64,
    /// (±q')(x_j) · w_j, sign chosen so the factor is nonnegative for
    /// monotone q of the expected direction.
    factor: f64,
}

fn inner_nodes(
    problem: &Problem,
    map: &DeMap,
    h: f64,
    n_minus: i64,
    n_plus: i64,
    sign: f64,
) -> Result<Vec<InnerNode>> {
    let mut nodes = Vec::with_capacity((n_minus + n_plus + 1) as usize);
    for j in -n_minus..=n_plus {
        let node = map.node(j as f64 * h)?;
        let y = (problem.q)(&node);
        let qp = (problem.q_prime)(&node);
        if !y.is_finite() || !qp.is_finite() {
            return Err(Error::NonFiniteEvaluation {
                what: "boundary function",
                outer: None,
                inner: Some(j),
            });
        }
        nodes.push(InnerNode {
            j,
            y,
            factor: sign * qp * node.w,
        });
    }
    Ok(nodes)
}

/// Shared double sum behind the modified and original formulas.
///
/// `ratio` is the outer-to-inner spacing ratio (2 for the modified formulas,
/// 1 for the original), so the kernel constant is `1/2 + kernel_sign ·
/// σ_{ratio·i - j}`. Returns the bracketed sum; callers apply the leading
/// `ratio · (b-a)² h²` factor.
#[allow(clippy::too_many_arguments)]
fn double_sum(
    problem: &Problem,
    map: &DeMap,
    h: f64,
    ratio: i64,
    kernel_sign: f64,
    m_minus: i64,
    m_plus: i64,
    inner: &[InnerNode],
    use_product: bool,
) -> Result<(f64, u64)> {
    let kmax = ratio * m_minus.max(m_plus) + inner.iter().map(|n| n.j.abs()).max().unwrap_or(0) + 2;
    let table = SigmaTable::new(kmax);
    let mut outer = KahanSum::new();
    let mut evals: u64 = 0;
    for i in -m_minus..=m_plus {
        let node = map.node((ratio * i) as f64 * h)?;
        let mut row = KahanSum::new();
        if use_product {
            let product = problem.product.as_ref().ok_or(Error::MissingProduct)?;
            for inn in inner {
                let y_val = (product.y_factor)(inn.y);
                if !y_val.is_finite() {
                    return Err(Error::NonFiniteEvaluation {
                        what: "product factor Y",
                        outer: Some(i),
                        inner: Some(inn.j),
                    });
                }
                row.add(y_val * inn.factor * (0.5 + kernel_sign * table.get(ratio * i - inn.j)));
            }
            let x_val = (product.x_factor)(node.x);
            if !x_val.is_finite() {
                return Err(Error::NonFiniteEvaluation {
                    what: "product factor X",
                    outer: Some(i),
                    inner: None,
                });
            }
            outer.add(x_val * node.w * row.total());
        } else {
            for inn in inner {
                let v = (problem.f)(node.x, inn.y);
                if !v.is_finite() {
                    return Err(Error::NonFiniteEvaluation {
                        what: "integrand",
                        outer: Some(i),
                        inner: Some(inn.j),
                    });
                }
                evals += 1;
                row.add(v * inn.factor * (0.5 + kernel_sign * table.get(ratio * i - inn.j)));
            }
            outer.add(node.w * row.total());
        }
    }
    Ok((outer.total(), evals))
}

fn require_feasible(plan: &MeshPlan) -> Result<()> {
    if !plan.feasible {
        return Err(Error::MeshInfeasible(plan.infeasibility_reasons.clone()));
    }
    Ok(())
}

fn run_modified(problem: &Problem, plan: &MeshPlan, use_product: bool) -> Result<ApproxResult> {
    require_feasible(plan)?;
    let map = problem.de_map()?;
    let (kernel_sign, q_sign) = match problem.direction {
        Direction::Increasing => (1.0, 1.0),
        Direction::Decreasing => (-1.0, -1.0),
    };
    let inner = inner_nodes(problem, &map, plan.h, plan.n_minus, plan.n_plus, q_sign)?;
    let (bracket, evals) = double_sum(
        problem,
        &map,
        plan.h,
        2,
        kernel_sign,
        plan.m_minus,
        plan.m_plus,
        &inner,
        use_product,
    )?;
    let width = map.width();
    let value = 2.0 * width * width * plan.h * plan.h * bracket;
    let mut bound = error_bound_abs(&problem.params, width, plan.h)?;
    bound.rel = error_bound_rel(bound.abs, value);
    Ok(ApproxResult {
        value,
        plan: plan.clone(),
        bound: Some(bound),
        eval_count: if use_product {
            plan.n_total_product as u64
        } else {
            evals
        },
        used_product_path: use_product,
    })
}

/// The modified formula for increasing q:
///
///   I ≈ 2(b-a)²h² Σ_{i=-M₋}^{M₊} w_{2i} Σ_{j=-N₋}^{N₊}
///         f(x_{2i}, q(x_j)) q'(x_j) w_j (1/2 + σ_{2i-j}).
///
/// Always takes the general O(M·N) evaluation path; [`integrate`] dispatches
/// to the product fast path when one is available.
pub fn modified_inc(problem: &Problem, plan: &MeshPlan) -> Result<ApproxResult> {
    if problem.direction != Direction::Increasing {
        return Err(Error::DirectionMismatch {
            expected: Direction::Increasing,
        });
    }
    run_modified(problem, plan, false)
}

/// The modified formula for decreasing q, with integrand factor `-q'(x_j)`
/// and kernel `1/2 - σ_{2i-j}`; the same certified bound applies.
pub fn modified_dec(problem: &Problem, plan: &MeshPlan) -> Result<ApproxResult> {
    if problem.direction != Direction::Decreasing {
        return Err(Error::DirectionMismatch {
            expected: Direction::Decreasing,
        });
    }
    run_modified(problem, plan, false)
}

/// Product fast path: with f(x,y) = X(x)Y(y) the factors are evaluated once
/// per node, U(i) = X(x_{2i}) w_{2i} and V(j) = Y(q(x_j)) (±q'(x_j)) w_j, and
/// only the cheap kernel pairing remains doubly indexed. Identical to the
/// general path in exact arithmetic; the evaluation count drops from
/// (M₋+M₊+1)(N₋+N₊+1) to (M₋+M₊+1)+(N₋+N₊+1).
pub fn modified_product(problem: &Problem, plan: &MeshPlan) -> Result<ApproxResult> {
    if problem.product.is_none() {
        return Err(Error::MissingProduct);
    }
    run_modified(problem, plan, true)
}

/// The original iterated formula (symmetric meshes, equal inner and outer
/// spacing):
///
///   I ≈ (b-a)²h² Σ_{i=-m}^{m} w_i Σ_{j=-n}^{n}
///         f(x_i, q(x_j)) q'(x_j) w_j (1/2 + σ_{i-j}),
///
/// with m = ⌈(1/h) log(4d/((ν-ε)h))⌉ and n = ⌈(1/h) log(2d/((ν-ε)h))⌉ for a
/// small ε ∈ (0, ν). Defined only for increasing q, takes the product
/// shortcut automatically when a decomposition is present, and attaches no
/// certificate: no computable bound is available for this formula.
pub fn original_mm(problem: &Problem, h: f64, epsilon: f64) -> Result<ApproxResult> {
    if problem.direction != Direction::Increasing {
        return Err(Error::Unsupported(
            "the original formula cannot be used when q is decreasing (it requires q'(x) >= 0)"
                .to_string(),
        ));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("h must be positive, got {h}")));
    }
    let nu = problem.params.nu();
    if !(epsilon > 0.0 && epsilon < nu) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, nu) = (0, {nu}), got {epsilon}"
        )));
    }
    let d = problem.params.d();
    let arg_n = 2.0 * d / ((nu - epsilon) * h);
    if arg_n <= 1.0 {
        return Err(Error::MeshInfeasible(vec![
            "log argument nonpositive".to_string()
        ]));
    }
    let m = ceil_guarded((2.0 * arg_n).ln() / h);
    let n = ceil_guarded(arg_n.ln() / h);
    if m <= 0 || n <= 0 {
        return Err(Error::MeshInfeasible(vec![
            "mesh counts nonpositive".to_string()
        ]));
    }
    let plan = MeshPlan {
        h,
        h_tilde: h,
        n,
        m,
        n_minus: n,
        n_plus: n,
        m_minus: m,
        m_plus: m,
        feasible: true,
        infeasibility_reasons: Vec::new(),
        n_total_general: (2 * m + 1) * (2 * n + 1),
        n_total_product: (2 * m + 1) + (2 * n + 1),
    };
    let map = problem.de_map()?;
    let use_product = problem.product.is_some();
    let inner = inner_nodes(problem, &map, h, n, n, 1.0)?;
    let (bracket, evals) = double_sum(problem, &map, h, 1, 1.0, m, m, &inner, use_product)?;
    let width = map.width();
    Ok(ApproxResult {
        value: width * width * h * h * bracket,
        eval_count: if use_product {
            plan.n_total_product as u64
        } else {
            evals
        },
        plan,
        bound: None,
        used_product_path: use_product,
    })
}

/// Plans the mesh for `h`, picks the formula matching the boundary
/// direction, takes the product fast path when a decomposition is present,
/// and attaches the certificate. Deterministic for fixed inputs.
pub fn integrate(problem: &Problem, h: f64) -> Result<ApproxResult> {
    let plan = plan_mesh(&problem.params, h);
    require_feasible(&plan)?;
    if problem.product.is_some() {
        modified_product(problem, &plan)
    } else {
        match problem.direction {
            Direction::Increasing => modified_inc(problem, &plan),
            Direction::Decreasing => modified_dec(problem, &plan),
        }
    }
}
