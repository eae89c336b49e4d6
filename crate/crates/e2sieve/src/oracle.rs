//! Independent numerical cross-checks of the integral formulas.
//!
//! Everything here evaluates the *defining* integrals directly — simplex
//! quadrature, nested `xi`-integrals, Monte Carlo — without touching the
//! closed-form machinery in [`crate::forms`] and [`crate::scalars`]. Matching
//! values from the two routes is the evidence that the exact formulas are
//! implemented correctly.
//!
//! Scope is deliberately desk-scale: deterministic rules up to `k = 4`,
//! Monte Carlo up to `k = 10`. Error bounds for deterministic rules are
//! a-posteriori two-mesh estimates; Monte Carlo reports a standard error.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::BasisTerm;
use crate::rational::to_f64;
use crate::scalars::{eval_interval, lambda_n, mu};
use crate::{Error, Result};

/// A symmetric polynomial `sum_i a_i (1-P1)^{b_i} P2^{c_i}` with float
/// coefficients, the oracle-side mirror of a coefficient vector.
#[derive(Debug, Clone)]
pub struct SymmetricPolynomialSpec {
    /// Exponent pairs.
    pub terms: Vec<BasisTerm>,
    /// Coefficients aligned with `terms`.
    pub coeffs: Vec<f64>,
}

impl SymmetricPolynomialSpec {
    /// Single term `(1-P1)^b P2^c` with coefficient one.
    pub fn unit(b: usize, c: usize) -> Self {
        SymmetricPolynomialSpec {
            terms: vec![BasisTerm { b, c }],
            coeffs: vec![1.0],
        }
    }

    /// Builds from matched term/coefficient lists.
    pub fn new(terms: &[BasisTerm], coeffs: &[f64]) -> Result<Self> {
        if terms.len() != coeffs.len() {
            return Err(Error::InvalidInput(format!(
                "{} terms against {} coefficients",
                terms.len(),
                coeffs.len()
            )));
        }
        Ok(SymmetricPolynomialSpec {
            terms: terms.to_vec(),
            coeffs: coeffs.to_vec(),
        })
    }

    /// Rounds a rational coefficient vector into oracle form.
    pub fn from_rationals(terms: &[BasisTerm], coeffs: &[BigRational]) -> Result<Self> {
        let floats = coeffs.iter().map(to_f64).collect::<Vec<_>>();
        Self::new(terms, &floats)
    }

    /// Largest total degree `b + 2c` across the terms.
    fn max_degree(&self) -> usize {
        self.terms.iter().map(|t| t.b + 2 * t.c).max().unwrap_or(0)
    }

    /// `P(x)` at a point.
    fn eval(&self, x: &[f64]) -> f64 {
        let p1: f64 = x.iter().sum();
        let p2: f64 = x.iter().map(|v| v * v).sum();
        let mut acc = 0.0;
        for (term, &a) in self.terms.iter().zip(&self.coeffs) {
            acc += a * (1.0 - p1).powi(term.b as i32) * p2.powi(term.c as i32);
        }
        acc
    }

    /// `int_0^upper P(u, x') du` exactly (per-monomial antiderivatives),
    /// where `p1p`/`p2p` are the power sums of the remaining coordinates.
    fn inner_integral(&self, p1p: f64, p2p: f64, upper: f64) -> f64 {
        let t_full = 1.0 - p1p;
        let mut acc = 0.0;
        for (term, &a) in self.terms.iter().zip(&self.coeffs) {
            let mut term_sum = 0.0;
            for j in 0..=term.c {
                let mut inner = 0.0;
                for l in 0..=term.b {
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    inner += sign * pascal(term.b, l) * t_full.powi((term.b - l) as i32)
                        * upper.powi((2 * j + l + 1) as i32)
                        / (2 * j + l + 1) as f64;
                }
                term_sum += pascal(term.c, j) * p2p.powi((term.c - j) as i32) * inner;
            }
            acc += a * term_sum;
        }
        acc
    }
}

/// Small binomial coefficients as floats.
fn pascal(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut v = 1.0;
    for i in 0..k.min(n - k) {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Outcome of one quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    /// The numeric value.
    pub estimate: f64,
    /// Two-mesh difference (deterministic) or standard error (Monte Carlo).
    pub error_bound: f64,
    /// Panels per dimension, or sample count.
    pub samples_or_depth: u64,
    /// RNG seed, present only for Monte Carlo runs.
    pub seed: Option<u64>,
}

/// Composite Simpson weights over `[0, 1]` with `panels` panels.
fn simpson_nodes(panels: usize) -> Vec<(f64, f64)> {
    assert!(panels >= 2 && panels % 2 == 0, "panels must be even");
    let h = 1.0 / panels as f64;
    (0..=panels)
        .map(|j| {
            let w = if j == 0 || j == panels {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (j as f64 * h, w * h / 3.0)
        })
        .collect()
}

/// Gauss-Legendre nodes and weights on `[0, 1]`, found by Newton iteration
/// on the Legendre recurrence. Exact for polynomials of degree `2n - 1`,
/// which covers every integrand the deterministic rules below see.
fn gauss_nodes(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let legendre = |x: f64| {
        // returns (P_n(x), P_n'(x))
        let (mut p0, mut p1) = (1.0, x);
        for j in 2..=n {
            let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = if n == 1 {
            1.0
        } else {
            n as f64 * (x * p1 - p0) / (x * x - 1.0)
        };
        (p1, dp)
    };
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre(x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 + x) / 2.0, w / 2.0));
    }
    out
}

/// Integrates `f` over the scaled simplex `{x >= 0, sum x <= budget}` in
/// `dim` variables by iterating a one-dimensional rule on the standard
/// triangular map `x_i = u_i * (budget - x_1 - ... - x_{i-1})`. The mapped
/// integrand stays polynomial whenever `f` is, so Gauss nodes of matching
/// degree integrate it exactly.
fn simplex_quadrature(
    dim: usize,
    budget: f64,
    nodes: &[(f64, f64)],
    f: &dyn Fn(&[f64]) -> f64,
) -> f64 {
    fn recurse(
        level: usize,
        remaining: f64,
        weight: f64,
        point: &mut Vec<f64>,
        nodes: &[(f64, f64)],
        f: &dyn Fn(&[f64]) -> f64,
        dim: usize,
    ) -> f64 {
        if level == dim {
            return weight * f(point);
        }
        let mut acc = 0.0;
        for &(u, w) in nodes {
            let x = remaining * u;
            point.push(x);
            acc += recurse(
                level + 1,
                remaining - x,
                weight * w * remaining,
                point,
                nodes,
                f,
                dim,
            );
            point.pop();
        }
        acc
    }
    if dim == 0 {
        return f(&[]);
    }
    let mut point = Vec::with_capacity(dim);
    recurse(0, budget, 1.0, &mut point, nodes, f, dim)
}

/// Which monomial family [`simplex_integral`] integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialMode {
    /// `(1 - P1)^b P2^c`.
    P1Complement,
    /// `P1^b P2^c`.
    P1Power,
}

impl std::str::FromStr for MonomialMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P1_complement" => Ok(MonomialMode::P1Complement),
            "P1_power" => Ok(MonomialMode::P1Power),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

fn check_monomial_caps(b: usize, c: usize, k: usize) -> Result<()> {
    if k == 0 || k > 4 {
        return Err(Error::QuadratureLimit(format!(
            "deterministic rule needs 1 <= k <= 4, got {k}"
        )));
    }
    if b > 3 || c > 2 {
        return Err(Error::QuadratureLimit(format!(
            "desk-scale caps are b <= 3, c <= 2, got b={b} c={c}"
        )));
    }
    Ok(())
}

fn monomial_integrand(b: usize, c: usize, mode: MonomialMode) -> impl Fn(&[f64]) -> f64 {
    move |x: &[f64]| {
        let p1: f64 = x.iter().sum();
        let p2: f64 = x.iter().map(|v| v * v).sum();
        let base = match mode {
            MonomialMode::P1Complement => 1.0 - p1,
            MonomialMode::P1Power => p1,
        };
        base.powi(b as i32) * p2.powi(c as i32)
    }
}

/// Deterministic `int_{R_k} (1-P1)^b P2^c` or `int_{R_k} P1^b P2^c`,
/// using Gauss nodes of polynomial-exact degree.
///
/// Desk-scale caps: `k <= 4`, `b <= 3`, `c <= 2`.
pub fn simplex_integral(
    b: usize,
    c: usize,
    k: usize,
    mode: MonomialMode,
) -> Result<QuadratureResult> {
    check_monomial_caps(b, c, k)?;
    let integrand = monomial_integrand(b, c, mode);
    let fine = simplex_quadrature(k, 1.0, &gauss_nodes(16), &integrand);
    let check = simplex_quadrature(k, 1.0, &gauss_nodes(12), &integrand);
    Ok(QuadratureResult {
        estimate: fine,
        error_bound: (fine - check).abs() + 1e-15 * fine.abs(),
        samples_or_depth: 16,
        seed: None,
    })
}

/// Same integral on a composite Simpson mesh, for convergence studies:
/// the fourth-order error shrinks by 16x per mesh halving.
pub fn simplex_integral_with_panels(
    b: usize,
    c: usize,
    k: usize,
    mode: MonomialMode,
    panels: usize,
) -> Result<QuadratureResult> {
    check_monomial_caps(b, c, k)?;
    let integrand = monomial_integrand(b, c, mode);
    let fine = simplex_quadrature(k, 1.0, &simpson_nodes(panels), &integrand);
    let coarse = simplex_quadrature(k, 1.0, &simpson_nodes((panels / 2).max(2)), &integrand);
    Ok(QuadratureResult {
        estimate: fine,
        error_bound: (fine - coarse).abs(),
        samples_or_depth: panels as u64,
        seed: None,
    })
}

/// Which of the two basic functionals [`integral_ij_direct`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichIJ {
    /// `int F^2` over the simplex.
    I,
    /// `int (int F dx_1)^2` over the one-lower simplex.
    J,
}

impl std::str::FromStr for WhichIJ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(WhichIJ::I),
            "J" => Ok(WhichIJ::J),
            other => Err(Error::Parse(format!("unknown functional {other:?}"))),
        }
    }
}

/// Direct evaluation of `I_k(F)` or `J_k(F)`: deterministic quadrature for
/// `k <= 4`, seeded Monte Carlo for `5 <= k <= 10`.
pub fn integral_ij_direct(
    spec: &SymmetricPolynomialSpec,
    k: usize,
    which: WhichIJ,
    samples: u64,
    seed: u64,
) -> Result<QuadratureResult> {
    if k == 0 {
        return Err(Error::QuadratureLimit("k must be positive".into()));
    }
    if k > 10 {
        return Err(Error::QuadratureLimit(format!(
            "Monte Carlo cap is k <= 10, got {k}"
        )));
    }
    if which == WhichIJ::J && k == 1 {
        return Err(Error::QuadratureLimit("J needs k >= 2".into()));
    }
    if k <= 4 {
        // Gauss nodes of exact degree for the squared polynomial
        let nodes = (spec.max_degree() + k + 3)
            .max(samples.clamp(8, 24) as usize)
            .min(32);
        let run = |n: usize| match which {
            WhichIJ::I => {
                let f = |x: &[f64]| {
                    let v = spec.eval(x);
                    v * v
                };
                simplex_quadrature(k, 1.0, &gauss_nodes(n), &f)
            }
            WhichIJ::J => {
                let f = |x: &[f64]| {
                    let p1p: f64 = x.iter().sum();
                    let p2p: f64 = x.iter().map(|v| v * v).sum();
                    let b = spec.inner_integral(p1p, p2p, 1.0 - p1p);
                    b * b
                };
                simplex_quadrature(k - 1, 1.0, &gauss_nodes(n), &f)
            }
        };
        let fine = run(nodes);
        let check = run(nodes - 2);
        return Ok(QuadratureResult {
            estimate: fine,
            error_bound: (fine - check).abs() + 1e-15 * fine.abs(),
            samples_or_depth: nodes as u64,
            seed: None,
        });
    }
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let dim = match which {
        WhichIJ::I => k,
        WhichIJ::J => k - 1,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut point = vec![0.0f64; dim];
    for _ in 0..samples {
        sample_simplex(&mut rng, &mut point);
        let v = match which {
            WhichIJ::I => {
                let p = spec.eval(&point);
                p * p
            }
            WhichIJ::J => {
                let p1p: f64 = point.iter().sum();
                let p2p: f64 = point.iter().map(|v| v * v).sum();
                let b = spec.inner_integral(p1p, p2p, 1.0 - p1p);
                b * b
            }
        };
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let volume = 1.0 / factorial_f64(dim);
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    Ok(QuadratureResult {
        estimate: mean * volume,
        error_bound: (variance / n).sqrt() * volume,
        samples_or_depth: samples,
        seed: Some(seed),
    })
}

/// Uniform point on the solid simplex via normalized exponential gaps.
fn sample_simplex(rng: &mut ChaCha8Rng, point: &mut [f64]) {
    let mut total = 0.0;
    for x in point.iter_mut() {
        let e = -(1.0 - rng.gen::<f64>()).ln();
        *x = e;
        total += e;
    }
    total += -(1.0 - rng.gen::<f64>()).ln();
    for x in point.iter_mut() {
        *x /= total;
    }
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Which of the `xi`-weighted functionals [`integral_lm_eta`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichLM {
    /// Weight `(theta/2 - xi) / (xi (1 - xi))`, bilinear inner factor.
    L,
    /// Weight `(theta/2 - xi)^2 / (xi (1 - xi))`, squared inner factor.
    M,
}

impl std::str::FromStr for WhichLM {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" => Ok(WhichLM::L),
            "M" => Ok(WhichLM::M),
            other => Err(Error::Parse(format!("unknown functional {other:?}"))),
        }
    }
}

/// Finite-`eta` value of `L_k(F)` or `M_k(F)` by nested quadrature:
///
/// ```text
///     int_eta^{theta/2} w(xi) int_{R'_{k-1}} (inner factors) dx' dxi
/// ```
///
/// with the shifted first coordinate `x~_1 = x_0 + (1 - x_0) x_1`,
/// `x_0 = 2 xi / theta`. The `xi`-integral is computed on a log grid
/// (`xi = eta exp(t)`), which removes the `1/xi` factor exactly; the inner
/// simplex integral uses Gauss nodes of polynomial-exact degree, with
/// `samples` as a floor on the node count.
pub fn integral_lm_eta(
    spec: &SymmetricPolynomialSpec,
    k: usize,
    theta: &BigRational,
    eta: f64,
    which: WhichLM,
    samples: u64,
) -> Result<QuadratureResult> {
    if k < 2 || k > 4 {
        return Err(Error::QuadratureLimit(format!(
            "nested rule needs 2 <= k <= 4, got {k}"
        )));
    }
    let th = to_f64(theta);
    if !(th > 0.0 && th <= 1.0) {
        return Err(Error::InvalidInput("theta must lie in (0, 1]".into()));
    }
    if !(eta > 0.0 && eta < th / 2.0) {
        return Err(Error::InvalidInput(format!(
            "eta must lie in (0, theta/2), got {eta}"
        )));
    }
    // Gauss nodes make the inner simplex integral exact; the only mesh
    // that matters is the t-grid for the xi-integral.
    let inner_nodes = (2 * spec.max_degree() + k + 4)
        .max(samples.clamp(8, 24) as usize)
        .min(32);
    let run = |gauss_n: usize, t_panels: usize| -> f64 {
        let nodes = gauss_nodes(gauss_n);
        let t_max = (th / (2.0 * eta)).ln();
        let mut total = 0.0;
        for (u, w) in simpson_nodes(t_panels) {
            let t = u * t_max;
            let xi = eta * t.exp();
            let slack = th / 2.0 - xi;
            if slack <= f64::EPSILON {
                continue;
            }
            let x0 = 2.0 * xi / th;
            let weight = match which {
                WhichLM::L => slack / (1.0 - xi),
                WhichLM::M => slack * slack / (1.0 - xi),
            };
            let g = |xp: &[f64]| {
                let p1p: f64 = xp.iter().sum();
                let p2p: f64 = xp.iter().map(|v| v * v).sum();
                let upper = 1.0 - p1p;
                let plain = spec.inner_integral(p1p, p2p, upper);
                let shifted = (plain - spec.inner_integral(p1p, p2p, x0)) / (1.0 - x0);
                match which {
                    WhichLM::L => shifted * plain,
                    WhichLM::M => shifted * shifted,
                }
            };
            let inner = simplex_quadrature(k - 1, 1.0 - x0, &nodes, &g);
            total += w * t_max * weight * inner;
        }
        total
    };
    let t_panels = 512;
    let fine = run(inner_nodes, t_panels);
    let coarse = run(inner_nodes, t_panels / 2);
    Ok(QuadratureResult {
        estimate: fine,
        error_bound: (fine - coarse).abs(),
        samples_or_depth: t_panels as u64,
        seed: None,
    })
}

/// One line of an x0-integral verification.
#[derive(Debug, Clone, Copy)]
pub struct CheckLine {
    /// Quadrature value.
    pub estimate: f64,
    /// Closed-form or limit target.
    pub target: f64,
    /// Absolute difference.
    pub error: f64,
    /// Whether the difference is within the justified tolerance.
    pub pass: bool,
}

/// The three x0-integral checks backing the scalar layer.
#[derive(Debug, Clone, Copy)]
pub struct X0Report {
    /// `int_a^1 x^{m-1} (1-x)^n / (2/theta - x) dx` against `mu_{m,n}`.
    pub mu_line: CheckLine,
    /// `int_a^1 dx / (x (2/theta - x))` against the closed log form.
    pub log_line: CheckLine,
    /// `int_a^1 ((1-x)^n - 1) / (x (2/theta - x)) dx` against `lambda_n`.
    pub lambda_line: CheckLine,
}

/// Simpson on `[lo, hi]`.
fn line_simpson(lo: f64, hi: f64, panels: usize, f: &dyn Fn(f64) -> f64) -> f64 {
    simpson_nodes(panels)
        .into_iter()
        .map(|(u, w)| w * (hi - lo) * f(lo + (hi - lo) * u))
        .sum()
}

/// Verifies the three x0-integral evaluations at a finite `eta`.
///
/// - The `mu` and `lambda` integrals converge to their targets as
///   `eta -> 0`; the pass tolerance includes the explicit tail bound
///   (`a^m / m` and `n a` respectively, `a = 2 eta / theta`).
/// - The log integral has an exact closed form at every `eta`.
///
/// `precision` is the interval precision for the reference values.
pub fn verify_x0_integrals(
    m: usize,
    n: usize,
    theta: &BigRational,
    eta: f64,
    precision: u32,
) -> Result<X0Report> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let th = to_f64(theta);
    if !(th > 0.0 && th <= 1.0) {
        return Err(Error::InvalidInput("theta must lie in (0, 1]".into()));
    }
    if !(eta > 0.0 && eta < th / 2.0) {
        return Err(Error::InvalidInput(format!(
            "eta must lie in (0, theta/2), got {eta}"
        )));
    }
    let a = 2.0 * eta / th;
    let c = 2.0 / th;
    let panels = 1024;
    let quad = |f: &dyn Fn(f64) -> f64| {
        let fine = line_simpson(a, 1.0, panels, f);
        let coarse = line_simpson(a, 1.0, panels / 2, f);
        (fine, (fine - coarse).abs())
    };

    // (a) the mu integral
    let mu_f = |x: f64| x.powi((m - 1) as i32) * (1.0 - x).powi(n as i32) / (c - x);
    let (mu_est, mu_quad_err) = quad(&mu_f);
    let mu_target = to_f64(
        &eval_interval(&mu(m, n, theta)?, theta, precision)?.midpoint(),
    );
    let mu_tail = a.powi(m as i32) / m as f64;
    let mu_err = (mu_est - mu_target).abs();
    let mu_line = CheckLine {
        estimate: mu_est,
        target: mu_target,
        error: mu_err,
        pass: mu_err <= 4.0 * (mu_quad_err + mu_tail) + 1e-9,
    };

    // (b) the log integral, exact at every eta
    let log_f = |x: f64| 1.0 / (x * (c - x));
    let (log_est, log_quad_err) = quad(&log_f);
    let log_target = (th / 2.0) * ((1.0 - eta) / (eta * (c - 1.0))).ln();
    let log_err = (log_est - log_target).abs();
    let log_line = CheckLine {
        estimate: log_est,
        target: log_target,
        error: log_err,
        pass: log_err <= 4.0 * log_quad_err + 1e-9,
    };

    // (c) the lambda integral; the scalar includes a theta/2 factor.
    // ((1-x)^n - 1)/x is the polynomial -sum_j C(n,j) (-1)^{j-1} x^{j-1};
    // evaluating it by Horner avoids the cancellation that a literal
    // (1-x)^n - 1 suffers at nodes near zero.
    let ratio_poly: Vec<f64> = {
        let mut coeffs = Vec::with_capacity(n);
        let mut binom = 1.0;
        for j in 1..=n {
            binom *= (n - j + 1) as f64 / j as f64;
            coeffs.push(if j % 2 == 1 { -binom } else { binom });
        }
        coeffs
    };
    let lam_f = |x: f64| {
        let mut q = 0.0;
        for &coef in ratio_poly.iter().rev() {
            q = q * x + coef;
        }
        q / (c - x)
    };
    let (lam_est, lam_quad_err) = quad(&lam_f);
    let lam_target = to_f64(
        &eval_interval(&lambda_n(n, theta)?, theta, precision)?.midpoint(),
    );
    let lam_tail = n as f64 * a;
    let lam_err = (lam_est - lam_target).abs();
    let lambda_line = CheckLine {
        estimate: lam_est,
        target: lam_target,
        error: lam_err,
        pass: lam_err <= 4.0 * (lam_quad_err + lam_tail) + 1e-9,
    };

    Ok(X0Report {
        mu_line,
        log_line,
        lambda_line,
    })
}

/// Exact check of the alternating-sum identity
/// `sum_{j=m}^n (-1)^j C(n,j) = (-1)^m C(n-1, n-m)` for `0 < m <= n`.
pub fn verify_binomial_identity(n: usize, m: usize) -> Result<bool> {
    if m == 0 || m > n {
        return Err(Error::InvalidInput(format!(
            "need 0 < m <= n, got m={m} n={n}"
        )));
    }
    use num_bigint::BigInt;
    use num_traits::Zero;
    let mut lhs = BigInt::zero();
    for j in m..=n {
        let term = crate::rational::binomial(n, j);
        if j % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let mut rhs = crate::rational::binomial(n - 1, n - m);
    if m % 2 == 1 {
        rhs = -rhs;
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::q_eval;
    use crate::forms::{build_i, build_j, build_tilde_pair};
    use crate::rational::{binomial, factorial, rat, ratio};
    use crate::scalars::log2theta_enclosure;
    use num_bigint::BigInt;
    use num_traits::One;

    fn term(b: usize, c: usize) -> BasisTerm {
        BasisTerm { b, c }
    }

    fn exact_complement(b: usize, c: usize, k: usize) -> f64 {
        // b! Q_c(k) / (k + 2c + b)!
        let v = BigRational::new(factorial(b), factorial(k + 2 * c + b)) * q_eval(c, k as i64);
        to_f64(&v)
    }

    fn exact_power(b: usize, c: usize, k: usize) -> f64 {
        // Q_c(k) / ((k + 2c - 1)! (k + 2c + b))
        let v = BigRational::new(
            BigInt::one(),
            factorial(k + 2 * c - 1) * BigInt::from(k + 2 * c + b),
        ) * q_eval(c, k as i64);
        to_f64(&v)
    }

    #[test]
    fn simplex_volume_and_closed_form_examples() {
        let vol = simplex_integral(0, 0, 3, MonomialMode::P1Complement).unwrap();
        assert!((vol.estimate - 1.0 / 6.0).abs() < 1e-9, "{}", vol.estimate);
        let e1 = simplex_integral(1, 0, 2, MonomialMode::P1Complement).unwrap();
        assert!((e1.estimate - 1.0 / 6.0).abs() < 1e-9);
        let e2 = simplex_integral(1, 1, 2, MonomialMode::P1Power).unwrap();
        assert!((e2.estimate - 2.0 / 15.0).abs() < 1e-8, "{}", e2.estimate);
    }

    #[test]
    fn simplex_integrals_match_closed_forms() {
        for k in 1..=3usize {
            for b in 0..=3usize {
                for c in 0..=2usize {
                    let comp = simplex_integral(b, c, k, MonomialMode::P1Complement).unwrap();
                    let target = exact_complement(b, c, k);
                    assert!(
                        (comp.estimate - target).abs() <= 1e-12,
                        "complement b={b} c={c} k={k}: {} vs {target}",
                        comp.estimate
                    );
                    let pow = simplex_integral(b, c, k, MonomialMode::P1Power).unwrap();
                    let target = exact_power(b, c, k);
                    assert!(
                        (pow.estimate - target).abs() <= 1e-12,
                        "power b={b} c={c} k={k}: {} vs {target}",
                        pow.estimate
                    );
                }
            }
        }
    }

    #[test]
    fn mesh_halving_tightens_the_convergence_rule() {
        // fourth-order rule: halving the mesh shrinks the error far more
        // than 2x; assert the conservative factor
        let exact = exact_complement(2, 1, 3);
        let coarse = simplex_integral_with_panels(2, 1, 3, MonomialMode::P1Complement, 8).unwrap();
        let fine = simplex_integral_with_panels(2, 1, 3, MonomialMode::P1Complement, 16).unwrap();
        let e_coarse = (coarse.estimate - exact).abs();
        let e_fine = (fine.estimate - exact).abs();
        assert!(
            e_fine * 2.0 <= e_coarse + 1e-15,
            "coarse {e_coarse} fine {e_fine}"
        );
    }

    #[test]
    fn caps_are_hard_errors() {
        assert!(simplex_integral(0, 0, 5, MonomialMode::P1Power).is_err());
        assert!(simplex_integral(4, 0, 2, MonomialMode::P1Power).is_err());
        assert!(simplex_integral(0, 3, 2, MonomialMode::P1Power).is_err());
        let spec = SymmetricPolynomialSpec::unit(0, 0);
        assert!(integral_ij_direct(&spec, 11, WhichIJ::I, 100, 1).is_err());
        assert!(integral_lm_eta(&spec, 5, &rat(1), 1e-3, WhichLM::L, 16).is_err());
        assert!(integral_lm_eta(&spec, 2, &rat(1), 0.7, WhichLM::L, 16).is_err());
        assert!(verify_x0_integrals(0, 0, &rat(1), 0.1, 64).is_err());
    }

    #[test]
    fn direct_ij_small_cases() {
        let unit = SymmetricPolynomialSpec::unit(0, 0);
        let i2 = integral_ij_direct(&unit, 2, WhichIJ::I, 32, 1).unwrap();
        assert!((i2.estimate - 0.5).abs() < 1e-9);
        let j2 = integral_ij_direct(&unit, 2, WhichIJ::J, 32, 1).unwrap();
        assert!((j2.estimate - 1.0 / 3.0).abs() < 1e-9);
        let spec10 = SymmetricPolynomialSpec::unit(1, 0);
        let i3 = integral_ij_direct(&spec10, 3, WhichIJ::I, 32, 1).unwrap();
        assert!((i3.estimate - 1.0 / 60.0).abs() < 1e-9, "{}", i3.estimate);
    }

    #[test]
    fn direct_ij_matches_forms_for_mixtures() {
        // two-term polynomial, deterministic k=3: quadrature vs exact forms
        let terms = [term(0, 0), term(1, 0), term(0, 1)];
        let coeffs_f = [0.7, -1.3, 0.4];
        let coeffs_q = [ratio(7, 10), ratio(-13, 10), ratio(2, 5)];
        let spec = SymmetricPolynomialSpec::new(&terms, &coeffs_f).unwrap();
        let a_i = build_i(3, &terms).unwrap();
        let a_j = build_j(3, &terms).unwrap();
        let i_exact = to_f64(&a_i.quad_value(&coeffs_q).unwrap().q0);
        let j_exact = to_f64(&a_j.quad_value(&coeffs_q).unwrap().q0);
        let i_est = integral_ij_direct(&spec, 3, WhichIJ::I, 48, 1).unwrap();
        let j_est = integral_ij_direct(&spec, 3, WhichIJ::J, 48, 1).unwrap();
        assert!(
            (i_est.estimate - i_exact).abs() < 1e-7 * i_exact.abs().max(1e-4),
            "I: {} vs {}",
            i_est.estimate,
            i_exact
        );
        assert!(
            (j_est.estimate - j_exact).abs() < 1e-7 * j_exact.abs().max(1e-4),
            "J: {} vs {}",
            j_est.estimate,
            j_exact
        );
    }

    #[test]
    fn monte_carlo_agrees_with_formulas() {
        // k = 6 with a two-term polynomial; 4-sigma agreement per seed
        let terms = [term(0, 0), term(1, 0)];
        let coeffs_q = [rat(1), rat(-2)];
        let spec =
            SymmetricPolynomialSpec::new(&terms, &[1.0, -2.0]).unwrap();
        let i_exact = to_f64(&build_i(6, &terms).unwrap().quad_value(&coeffs_q).unwrap().q0);
        let j_exact = to_f64(&build_j(6, &terms).unwrap().quad_value(&coeffs_q).unwrap().q0);
        let mut i_hits = 0;
        let mut j_hits = 0;
        let trials = 12;
        for seed in 1..=trials {
            let i_mc = integral_ij_direct(&spec, 6, WhichIJ::I, 60_000, seed).unwrap();
            assert_eq!(i_mc.seed, Some(seed));
            if (i_mc.estimate - i_exact).abs() <= 4.0 * i_mc.error_bound {
                i_hits += 1;
            }
            let j_mc = integral_ij_direct(&spec, 6, WhichIJ::J, 60_000, seed).unwrap();
            if (j_mc.estimate - j_exact).abs() <= 4.0 * j_mc.error_bound {
                j_hits += 1;
            }
        }
        assert!(i_hits >= trials - 1, "I hits {i_hits}/{trials}");
        assert!(j_hits >= trials - 1, "J hits {j_hits}/{trials}");
    }

    /// Formula-side finite-eta value: tilde + log-term * J.
    fn lm_formula_at_eta(
        k: usize,
        theta: &BigRational,
        terms: &[BasisTerm],
        coeffs: &[BigRational],
        eta: f64,
        which: WhichLM,
    ) -> f64 {
        let th = to_f64(theta);
        let (lt, mt) = build_tilde_pair(k, theta, terms).unwrap();
        let j = to_f64(&build_j(k, terms).unwrap().quad_value(coeffs).unwrap().q0);
        let log_term = ((1.0 - eta) / (eta * (2.0 / th - 1.0))).ln();
        match which {
            WhichLM::L => {
                let tilde = to_f64(
                    &eval_interval(&lt.quad_value(coeffs).unwrap(), theta, 192)
                        .unwrap()
                        .midpoint(),
                );
                tilde + (th / 2.0) * log_term * j
            }
            WhichLM::M => {
                let tilde = to_f64(
                    &eval_interval(&mt.quad_value(coeffs).unwrap(), theta, 192)
                        .unwrap()
                        .midpoint(),
                );
                tilde + (th * th / 4.0) * log_term * j
            }
        }
    }

    #[test]
    fn eta_route_matches_tilde_formulas_k2() {
        let theta = rat(1);
        let terms = [term(0, 0)];
        let coeffs = [rat(1)];
        let spec = SymmetricPolynomialSpec::new(&terms, &[1.0]).unwrap();
        // the headline case: L at eta = 1e-3 agrees to 1e-3 relative
        let eta = 1e-3;
        let est = integral_lm_eta(&spec, 2, &theta, eta, WhichLM::L, 64).unwrap();
        let target = lm_formula_at_eta(2, &theta, &terms, &coeffs, eta, WhichLM::L);
        assert!(
            (est.estimate - target).abs() <= 1e-3 * target.abs(),
            "L: {} vs {target}",
            est.estimate
        );
        // M drifts by O(eta) absolute; shrink eta to keep 1e-3 relative
        let eta = 1e-4;
        let est = integral_lm_eta(&spec, 2, &theta, eta, WhichLM::M, 64).unwrap();
        let target = lm_formula_at_eta(2, &theta, &terms, &coeffs, eta, WhichLM::M);
        assert!(
            (est.estimate - target).abs() <= 1e-3 * target.abs(),
            "M: {} vs {target}",
            est.estimate
        );
    }

    #[test]
    fn eta_route_matches_tilde_formulas_k3_mixture() {
        let theta = ratio(1, 2);
        let terms = [term(0, 0), term(1, 0), term(0, 1)];
        let coeffs_q = [rat(1), ratio(-1, 2), ratio(1, 4)];
        let spec = SymmetricPolynomialSpec::new(&terms, &[1.0, -0.5, 0.25]).unwrap();
        let eta = 2e-4;
        for which in [WhichLM::L, WhichLM::M] {
            let est = integral_lm_eta(&spec, 3, &theta, eta, which, 48).unwrap();
            let target = lm_formula_at_eta(3, &theta, &terms, &coeffs_q, eta, which);
            // finite-eta truth differs from the limit formula by O(eta)
            assert!(
                (est.estimate - target).abs() <= 4.0 * eta + 1e-4 * target.abs(),
                "{which:?}: {} vs {target}",
                est.estimate
            );
        }
    }

    #[test]
    fn eta_sequence_is_cauchy_toward_the_tilde_value() {
        // L(eta) - (theta/2) log((1-eta)/(eta(2/theta-1))) J settles as eta
        // shrinks, onto the L~ value
        let theta = rat(1);
        let terms = [term(0, 0)];
        let coeffs = [rat(1)];
        let spec = SymmetricPolynomialSpec::new(&terms, &[1.0]).unwrap();
        let j = to_f64(&build_j(2, &terms).unwrap().quad_value(&coeffs).unwrap().q0);
        let (lt, _) = build_tilde_pair(2, &theta, &terms).unwrap();
        let lt_val = to_f64(
            &eval_interval(&lt.quad_value(&coeffs).unwrap(), &theta, 192)
                .unwrap()
                .midpoint(),
        );
        let mut settled = Vec::new();
        for eta in [1e-2, 1e-3, 1e-4] {
            let est = integral_lm_eta(&spec, 2, &theta, eta, WhichLM::L, 64).unwrap();
            let log_term = ((1.0 - eta) / (eta * 1.0)).ln();
            settled.push(est.estimate - 0.5 * log_term * j);
        }
        let d1 = (settled[1] - settled[0]).abs();
        let d2 = (settled[2] - settled[1]).abs();
        assert!(d2 < d1, "differences {d1} then {d2}");
        assert!(
            (settled[2] - lt_val).abs() < 1e-3,
            "settled {} vs {}",
            settled[2],
            lt_val
        );
    }

    #[test]
    fn empty_xi_range_vanishes() {
        // eta -> theta/2: the integration range collapses
        let spec = SymmetricPolynomialSpec::unit(0, 0);
        let est = integral_lm_eta(&spec, 2, &rat(1), 0.4999999, WhichLM::L, 16).unwrap();
        assert!(est.estimate.abs() < 1e-5, "{}", est.estimate);
    }

    #[test]
    fn x0_integral_checks() {
        // (b) at theta=1, eta=1/4: (1/2) log 3
        let report = verify_x0_integrals(1, 0, &rat(1), 0.25, 128).unwrap();
        let target = 0.5 * 3.0f64.ln();
        assert!((report.log_line.estimate - target).abs() < 1e-10);
        assert!(report.log_line.pass);
        // (a) m=1, n=0, theta=1, small eta: close to log 2
        let report = verify_x0_integrals(1, 0, &rat(1), 1e-4, 128).unwrap();
        assert!((report.mu_line.estimate - std::f64::consts::LN_2).abs() < 1e-3);
        assert!(report.mu_line.pass);
        // (c) n=0 vanishes identically
        assert!(report.lambda_line.estimate.abs() < 1e-12);
        assert!(report.lambda_line.pass);
        // (c) n=2 at theta=1: the integral settles on lambda_2 = -1
        let report = verify_x0_integrals(1, 2, &rat(1), 1e-5, 128).unwrap();
        assert!(
            (report.lambda_line.estimate - (-1.0)).abs() < 1e-3,
            "{}",
            report.lambda_line.estimate
        );
        assert!(report.lambda_line.pass);
        // theta = 1/2 exercises the nontrivial 2/theta - 1 branch
        let report = verify_x0_integrals(2, 1, &ratio(1, 2), 1e-4, 128).unwrap();
        assert!(report.mu_line.pass);
        assert!(report.log_line.pass);
        assert!(report.lambda_line.pass);
        // sanity for the reference scalar at theta = 1/2: log 3
        let enc = log2theta_enclosure(&ratio(1, 2), 64).unwrap();
        let mid = to_f64(&enc.midpoint());
        assert!((mid - 3.0f64.ln()).abs() < 1e-12, "{mid}");
    }

    #[test]
    fn binomial_identity_is_exact() {
        for n in 1..=12usize {
            for m in 1..=n {
                assert!(verify_binomial_identity(n, m).unwrap(), "n={n} m={m}");
            }
        }
        assert!(verify_binomial_identity(5, 0).is_err());
        assert!(verify_binomial_identity(3, 4).is_err());
        // spot value: n=5, m=2: sum = +C(4,3) = 4
        let mut s = 0i64;
        for j in 2..=5 {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let b: i64 = binomial(5, j).try_into().unwrap();
            s += sign * b;
        }
        assert_eq!(s, 4);
    }
}
