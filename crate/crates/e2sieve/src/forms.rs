//! The five quadratic forms of the sieve ratio, assembled exactly.
//!
//! For a weight `F = sum_i a_i (1-P1)^{b_i} P2^{c_i}` on the simplex, the
//! functionals `I`, `J`, `L~`, `M~`, `J~` are quadratic in the coefficient
//! vector `a`, so each is stored as a symmetric matrix over
//! [`LogLinearScalar`]. `I` and `J` are purely rational; the regularised
//! limits `L~` and `M~` pick up the `mu`/`lambda` scalars; and
//!
//! ```text
//!     J~ = -theta k L~ + (theta^2/4) L2 k J + k M~,
//!     R  = (a' J~ a) / ((theta/2) a' I a),
//! ```
//!
//! with the certified claim being `R > nu`.
//!
//! Entry formulas (writing `d~ = b_i+b_j+2c_i+2c_j-2c_1'-2c_2'+2`,
//! `e~ = b_i-b_1'+b_j+2c_j-2c_2'+1`, `f~ = b_i+b_j-b_1'-b_2'`,
//! `N = k-1+2c_1'+2c_2'`):
//!
//! ```text
//!     I[i,j] = (b_i+b_j)! Q_{c_i+c_j}(k) / (k+b_i+b_j+2c_i+2c_j)!
//!     J[i,j] = sum_{c_1',c_2'} C(c_i,c_1') C(c_j,c_2') delta d~!
//!              Q_{c_1'+c_2'}(k-1) / (k+b_i+b_j+2c_i+2c_j+1)!
//!     L~[i,j] = sum_{c_1',c_2'} C C Q_{c_1'+c_2'}(k-1) [ D - E ]
//!     M~[i,j] = (theta/2) sum_{c_1',c_2'} C C Q_{c_1'+c_2'}(k-1) [ D - 2E + F ]
//! ```
//!
//! where `D`, `E`, `F` are alternating binomial sums against
//! `lambda_{N+d}/(N+d)` and `mu_{*, N+e}/(N+e)`; those inner sums depend on
//! the term pair only through small integers, so they are cached and reused
//! across all matrix entries. `E` is not symmetric in `(i, j)`; the stored
//! entry is the average of both orders, which leaves the quadratic form
//! unchanged.

use std::collections::HashMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{q_eval, validate_terms, BasisTerm};
use crate::rational::{binomial, factorial, format_rational, parse_rational};
use crate::scalars::{eval_interval, lambda_n, mu, Interval, LogLinearScalar};
use crate::{Error, Result};

/// One sieve instance: dimension, level of distribution, and target.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveConfig {
    /// Number of simplex variables (the tuple length).
    pub k: usize,
    /// Level of distribution, in `(0, 1]`.
    pub theta: BigRational,
    /// The integer the ratio must exceed.
    pub nu: u32,
}

impl SieveConfig {
    /// Checks the ranges every builder relies on.
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidInput(format!("k must be >= 2, got {}", self.k)));
        }
        if !self.theta.is_positive() || self.theta > BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "theta must lie in (0, 1], got {}",
                format_rational(&self.theta)
            )));
        }
        if self.nu == 0 {
            return Err(Error::InvalidInput("nu must be >= 1".into()));
        }
        Ok(())
    }
}

/// Symmetric matrix of exact scalars, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    dim: usize,
    entries: Vec<LogLinearScalar>,
}

impl QuadraticForm {
    fn zeros(dim: usize) -> Self {
        QuadraticForm {
            dim,
            entries: vec![LogLinearScalar::zero(); dim * dim],
        }
    }

    /// Builds from a row-major list; the list must be square and symmetric.
    pub fn from_entries(dim: usize, entries: Vec<LogLinearScalar>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let form = QuadraticForm { dim, entries };
        for i in 0..dim {
            for j in (i + 1)..dim {
                if form.entry(i, j) != form.entry(j, i) {
                    return Err(Error::InvalidInput(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(form)
    }

    fn set_symmetric(&mut self, i: usize, j: usize, value: LogLinearScalar) {
        self.entries[i * self.dim + j] = value.clone();
        self.entries[j * self.dim + i] = value;
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> &LogLinearScalar {
        &self.entries[i * self.dim + j]
    }

    /// Row-major view of all entries.
    pub fn entries(&self) -> &[LogLinearScalar] {
        &self.entries
    }

    /// True when every entry has vanishing log coefficients.
    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(|e| e.is_rational())
    }

    /// The rational entries, if the form is rational.
    pub fn rational_entries(&self) -> Option<Vec<BigRational>> {
        if !self.is_rational() {
            return None;
        }
        Some(self.entries.iter().map(|e| e.q0.clone()).collect())
    }

    /// `a' A a`, exactly.
    pub fn quad_value(&self, a: &[BigRational]) -> Result<LogLinearScalar> {
        if a.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "vector length {} against dimension {}",
                a.len(),
                self.dim
            )));
        }
        let mut acc = LogLinearScalar::zero();
        for i in 0..self.dim {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if a[j].is_zero() {
                    continue;
                }
                acc.add_scaled(&(&a[i] * &a[j]), self.entry(i, j));
            }
        }
        Ok(acc)
    }

    /// Leading principal minors of a rational positive definite form, by an
    /// exact `L D L'` sweep: `minor_m = d_0 d_1 ... d_{m-1}`.
    ///
    /// Fails with the 1-based index of the first non-positive pivot, which is
    /// exactly the first non-positive leading minor.
    pub fn leading_principal_minors(&self) -> Result<Vec<BigRational>> {
        let a = self.rational_entries().ok_or_else(|| {
            Error::InvalidInput("principal minors need a rational form".into())
        })?;
        let n = self.dim;
        let mut l = vec![vec![BigRational::zero(); n]; n];
        let mut d = Vec::with_capacity(n);
        let mut minors = Vec::with_capacity(n);
        let mut running = BigRational::one();
        for j in 0..n {
            let mut pivot = a[j * n + j].clone();
            for t in 0..j {
                pivot -= &l[j][t] * &l[j][t] * &d[t];
            }
            if !pivot.is_positive() {
                return Err(Error::NotPositiveDefinite {
                    index: j + 1,
                    sign: if pivot.is_zero() { 0 } else { -1 },
                });
            }
            for i in (j + 1)..n {
                let mut v = a[i * n + j].clone();
                for t in 0..j {
                    v -= &l[i][t] * &l[j][t] * &d[t];
                }
                l[i][j] = v / &pivot;
            }
            running *= &pivot;
            d.push(pivot);
            minors.push(running.clone());
        }
        Ok(minors)
    }
}

/// `I[i,j]`, rational.
fn i_entry(k: usize, s: BasisTerm, t: BasisTerm) -> BigRational {
    let b = s.b + t.b;
    let c = s.c + t.c;
    BigRational::new(factorial(b), factorial(k + b + 2 * c)) * q_eval(c, k as i64)
}

/// Builds `A_I` for the given terms.
pub fn build_i(k: usize, terms: &[BasisTerm]) -> Result<QuadraticForm> {
    validate_terms(terms)?;
    let mut form = QuadraticForm::zeros(terms.len());
    for (i, &s) in terms.iter().enumerate() {
        for (j, &t) in terms.iter().enumerate().skip(i) {
            let value = LogLinearScalar::from_rational(i_entry(k, s, t));
            form.set_symmetric(i, j, value);
        }
    }
    Ok(form)
}

/// `delta`: the fully symmetric rational weight shared by `J`, `L~`, `M~`.
fn delta(s: BasisTerm, t: BasisTerm, c1p: usize, c2p: usize) -> BigRational {
    BigRational::new(
        factorial(s.b) * factorial(t.b) * factorial(2 * (s.c - c1p)) * factorial(2 * (t.c - c2p)),
        factorial(s.b + 2 * (s.c - c1p) + 1) * factorial(t.b + 2 * (t.c - c2p) + 1),
    )
}

/// `J[i,j]`, rational.
fn j_entry(k: usize, s: BasisTerm, t: BasisTerm) -> BigRational {
    let mut sum = BigRational::zero();
    let denom = factorial(k + s.b + t.b + 2 * s.c + 2 * t.c + 1);
    for c1p in 0..=s.c {
        for c2p in 0..=t.c {
            let d_tilde = s.b + t.b + 2 * (s.c - c1p) + 2 * (t.c - c2p) + 2;
            let gamma = delta(s, t, c1p, c2p) * BigRational::from_integer(factorial(d_tilde));
            let weight = BigRational::from_integer(binomial(s.c, c1p) * binomial(t.c, c2p))
                * q_eval(c1p + c2p, k as i64 - 1);
            sum += weight * gamma;
        }
    }
    sum / BigRational::from_integer(denom)
}

/// Builds `A_J` for the given terms.
pub fn build_j(k: usize, terms: &[BasisTerm]) -> Result<QuadraticForm> {
    validate_terms(terms)?;
    let mut form = QuadraticForm::zeros(terms.len());
    for (i, &s) in terms.iter().enumerate() {
        for (j, &t) in terms.iter().enumerate().skip(i) {
            let value = LogLinearScalar::from_rational(j_entry(k, s, t));
            form.set_symmetric(i, j, value);
        }
    }
    Ok(form)
}

/// Assembler for the tilde forms, holding the inner-sum caches.
///
/// The alternating sums
///
/// ```text
///     Glam(N, T)  = sum_{d=0}^{T} (-1)^d C(T,d) lambda_{N+d} / (N+d)
///     Gmu(M,N,T)  = sum_{e=0}^{T} (-1)^e C(T,e) mu_{M,N+e} / (N+e)
/// ```
///
/// depend only on the displayed integers, so the handful of distinct triples
/// is computed once and shared by every entry of both matrices.
struct TildeAssembler {
    k: usize,
    theta: BigRational,
    glam: HashMap<(usize, usize), LogLinearScalar>,
    gmu: HashMap<(usize, usize, usize), LogLinearScalar>,
}

impl TildeAssembler {
    fn new(k: usize, theta: &BigRational) -> Self {
        TildeAssembler {
            k,
            theta: theta.clone(),
            glam: HashMap::new(),
            gmu: HashMap::new(),
        }
    }

    fn glam(&mut self, n0: usize, t: usize) -> Result<LogLinearScalar> {
        if let Some(hit) = self.glam.get(&(n0, t)) {
            return Ok(hit.clone());
        }
        let mut acc = LogLinearScalar::zero();
        for d in 0..=t {
            let lam = lambda_n(n0 + d, &self.theta)?;
            let mut coef = BigRational::new(binomial(t, d), BigInt::from(n0 + d));
            if d % 2 == 1 {
                coef = -coef;
            }
            acc.add_scaled(&coef, &lam);
        }
        self.glam.insert((n0, t), acc.clone());
        Ok(acc)
    }

    fn gmu(&mut self, m: usize, n0: usize, t: usize) -> Result<LogLinearScalar> {
        if let Some(hit) = self.gmu.get(&(m, n0, t)) {
            return Ok(hit.clone());
        }
        let mut acc = LogLinearScalar::zero();
        for e in 0..=t {
            let mu_val = mu(m, n0 + e, &self.theta)?;
            let mut coef = BigRational::new(binomial(t, e), BigInt::from(n0 + e));
            if e % 2 == 1 {
                coef = -coef;
            }
            acc.add_scaled(&coef, &mu_val);
        }
        self.gmu.insert((m, n0, t), acc.clone());
        Ok(acc)
    }

    /// Prefactor `C(c_i,c_1') C(c_j,c_2') Q_{c_1'+c_2'}(k-1) / (k+2c_1'+2c_2'-2)!`.
    fn prefactor(&self, s: BasisTerm, t: BasisTerm, c1p: usize, c2p: usize) -> BigRational {
        BigRational::new(
            binomial(s.c, c1p) * binomial(t.c, c2p),
            factorial(self.k + 2 * c1p + 2 * c2p - 2),
        ) * q_eval(c1p + c2p, self.k as i64 - 1)
    }

    /// The symmetric pieces: `(sum pre * delta * Glam, sum pre * F-sum)`.
    fn d_and_f(&mut self, s: BasisTerm, t: BasisTerm) -> Result<(LogLinearScalar, LogLinearScalar)> {
        let mut d_acc = LogLinearScalar::zero();
        let mut f_acc = LogLinearScalar::zero();
        for c1p in 0..=s.c {
            for c2p in 0..=t.c {
                let pre = self.prefactor(s, t, c1p, c2p);
                let n0 = self.k - 1 + 2 * c1p + 2 * c2p;
                let d_tilde = s.b + t.b + 2 * (s.c - c1p) + 2 * (t.c - c2p) + 2;
                let glam = self.glam(n0, d_tilde)?;
                d_acc.add_scaled(&(&pre * delta(s, t, c1p, c2p)), &glam);
                for b1p in 0..=s.b {
                    for b2p in 0..=t.b {
                        let f_tilde = s.b + t.b - b1p - b2p;
                        let m = 2 * (s.c - c1p) + 2 * (t.c - c2p) + b1p + b2p + 2;
                        let zeta = BigInt::from(b1p + 2 * (s.c - c1p) + 1)
                            * BigInt::from(b2p + 2 * (t.c - c2p) + 1);
                        let gmu = self.gmu(m, n0, f_tilde)?;
                        let mut coef =
                            BigRational::new(binomial(s.b, b1p) * binomial(t.b, b2p), zeta) * &pre;
                        if (b1p + b2p) % 2 == 1 {
                            coef = -coef;
                        }
                        f_acc.add_scaled(&coef, &gmu);
                    }
                }
            }
        }
        Ok((d_acc, f_acc))
    }

    /// The ordered piece `sum pre * E-sum`, with `s` in the first slot.
    fn e_term(&mut self, s: BasisTerm, t: BasisTerm) -> Result<LogLinearScalar> {
        let mut acc = LogLinearScalar::zero();
        for c1p in 0..=s.c {
            for c2p in 0..=t.c {
                let pre = self.prefactor(s, t, c1p, c2p);
                let n0 = self.k - 1 + 2 * c1p + 2 * c2p;
                for b1p in 0..=s.b {
                    let e_tilde = (s.b - b1p) + t.b + 2 * (t.c - c2p) + 1;
                    let m = b1p + 2 * (s.c - c1p) + 1;
                    let eps = BigRational::new(
                        factorial(t.b) * factorial(2 * (t.c - c2p)),
                        factorial(t.b + 2 * (t.c - c2p) + 1) * BigInt::from(m),
                    );
                    let gmu = self.gmu(m, n0, e_tilde)?;
                    let mut coef = BigRational::from_integer(binomial(s.b, b1p)) * eps * &pre;
                    if b1p % 2 == 1 {
                        coef = -coef;
                    }
                    acc.add_scaled(&coef, &gmu);
                }
            }
        }
        Ok(acc)
    }
}

/// Builds `A_L~` and `A_M~` together (they share every inner sum).
pub fn build_tilde_pair(
    k: usize,
    theta: &BigRational,
    terms: &[BasisTerm],
) -> Result<(QuadraticForm, QuadraticForm)> {
    validate_terms(terms)?;
    if k < 2 {
        return Err(Error::InvalidInput(format!("tilde forms need k >= 2, got {k}")));
    }
    let mut asm = TildeAssembler::new(k, theta);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let half_theta = theta * &half;
    let mut lt = QuadraticForm::zeros(terms.len());
    let mut mt = QuadraticForm::zeros(terms.len());
    for (i, &s) in terms.iter().enumerate() {
        for (j, &t) in terms.iter().enumerate().skip(i) {
            let (d_part, f_part) = asm.d_and_f(s, t)?;
            // average the two orders of the asymmetric piece; the quadratic
            // form is insensitive to this symmetrisation
            let e_sym = if i == j {
                asm.e_term(s, t)?
            } else {
                (&asm.e_term(s, t)? + &asm.e_term(t, s)?).scale(&half)
            };
            let lt_entry = &d_part - &e_sym;
            let mut mt_entry = &lt_entry - &e_sym; // D - 2E
            mt_entry += &f_part;
            mt.set_symmetric(i, j, mt_entry.scale(&half_theta));
            lt.set_symmetric(i, j, lt_entry);
        }
    }
    Ok((lt, mt))
}

/// Builds `A_L~` alone.
pub fn build_ltilde(k: usize, theta: &BigRational, terms: &[BasisTerm]) -> Result<QuadraticForm> {
    Ok(build_tilde_pair(k, theta, terms)?.0)
}

/// Builds `A_M~` alone.
pub fn build_mtilde(k: usize, theta: &BigRational, terms: &[BasisTerm]) -> Result<QuadraticForm> {
    Ok(build_tilde_pair(k, theta, terms)?.1)
}

/// All five forms for one configuration.
#[derive(Debug, Clone)]
pub struct SieveForms {
    /// Simplex dimension.
    pub k: usize,
    /// Level of distribution.
    pub theta: BigRational,
    /// Basis term list, in input order.
    pub terms: Vec<BasisTerm>,
    /// Denominator form `I`.
    pub a_i: QuadraticForm,
    /// The inner form `J`.
    pub a_j: QuadraticForm,
    /// Regularised limit `L~`.
    pub a_ltilde: QuadraticForm,
    /// Regularised limit `M~`.
    pub a_mtilde: QuadraticForm,
    /// Numerator form `J~`.
    pub a_jtilde: QuadraticForm,
}

impl SieveForms {
    /// Assembles everything for `(k, theta)` over the given terms.
    pub fn build(k: usize, theta: &BigRational, terms: &[BasisTerm]) -> Result<Self> {
        validate_terms(terms)?;
        if k < 2 {
            return Err(Error::InvalidInput(format!("forms need k >= 2, got {k}")));
        }
        let a_i = build_i(k, terms)?;
        let a_j = build_j(k, terms)?;
        let (a_ltilde, a_mtilde) = build_tilde_pair(k, theta, terms)?;
        // J~ = -theta k L~ + (theta^2/4) L2 k J + k M~; the middle term lands
        // on the L2 coordinate of the scalar, exactly
        let k_rat = BigRational::from_integer(BigInt::from(k));
        let minus_theta_k = -(theta * &k_rat);
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        let j_weight = theta * theta * quarter * &k_rat;
        let dim = terms.len();
        let mut jt_entries = Vec::with_capacity(dim * dim);
        for idx in 0..dim * dim {
            let mut e = a_ltilde.entries()[idx].scale(&minus_theta_k);
            e.add_scaled(&k_rat, &a_mtilde.entries()[idx]);
            e.q2 += &j_weight * &a_j.entries()[idx].q0;
            jt_entries.push(e);
        }
        let a_jtilde = QuadraticForm::from_entries(dim, jt_entries)?;
        Ok(SieveForms {
            k,
            theta: theta.clone(),
            terms: terms.to_vec(),
            a_i,
            a_j,
            a_ltilde,
            a_mtilde,
            a_jtilde,
        })
    }

    /// `a' J~ a - nu (theta/2) a' I a`: positive exactly when `R > nu`.
    pub fn margin(&self, a: &[BigRational], nu: u32) -> Result<LogLinearScalar> {
        let numerator = self.a_jtilde.quad_value(a)?;
        let denominator = self.denominator(a)?;
        let mut margin = numerator;
        margin.q0 -= BigRational::from_integer(BigInt::from(nu)) * denominator;
        Ok(margin)
    }

    /// `(theta/2) a' I a`, the positive denominator of the ratio.
    pub fn denominator(&self, a: &[BigRational]) -> Result<BigRational> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let quad = self.a_i.quad_value(a)?;
        debug_assert!(quad.is_rational());
        Ok(&self.theta * half * quad.q0)
    }

    /// `a' J~ a - k (theta^2/4) L2 (a' J a)`: nonnegative for every `a`, the
    /// structural floor that makes the `L2` contribution harmless.
    pub fn floor_margin(&self, a: &[BigRational]) -> Result<LogLinearScalar> {
        let mut gap = self.a_jtilde.quad_value(a)?;
        let j_val = self.a_j.quad_value(a)?;
        debug_assert!(j_val.is_rational());
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        let weight = &self.theta * &self.theta * quarter * BigRational::from_integer(BigInt::from(self.k));
        gap.q2 -= weight * j_val.q0;
        Ok(gap)
    }
}

/// Exact ratio evaluation for one coefficient vector.
#[derive(Debug, Clone)]
pub struct RatioEvaluation {
    /// `a' J~ a`, exactly.
    pub numerator: LogLinearScalar,
    /// `(theta/2) a' I a`, exactly; always positive.
    pub denominator: BigRational,
    /// Enclosure of the ratio at the requested precision.
    pub ratio: Interval,
}

/// Evaluates `R = (a' J~ a) / ((theta/2) a' I a)` with an enclosure of the
/// transcendental part at `bits` precision.
pub fn evaluate_ratio(forms: &SieveForms, a: &[BigRational], bits: u32) -> Result<RatioEvaluation> {
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let numerator = forms.a_jtilde.quad_value(a)?;
    let denominator = forms.denominator(a)?;
    if !denominator.is_positive() {
        return Err(Error::NotPositiveDefinite { index: 0, sign: -1 });
    }
    let ratio = eval_interval(&numerator, &forms.theta, bits)?.div_rational(&denominator);
    Ok(RatioEvaluation {
        numerator,
        denominator,
        ratio,
    })
}

/// On-disk coefficient file: everything needed to rebuild one weight.
///
/// ```json
/// {
///   "k": 10,
///   "theta": "1",
///   "terms": [[0, 0], [1, 0]],
///   "coeffs": ["-230/124720775", "1/2"]
/// }
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientSet {
    /// Tuple length.
    pub k: usize,
    /// Level of distribution as a `p/q` string.
    pub theta: String,
    /// Basis terms, each serialised as `[b, c]`.
    pub terms: Vec<BasisTerm>,
    /// Rational coefficients as `p/q` strings, aligned with `terms`.
    pub coeffs: Vec<String>,
}

impl CoefficientSet {
    /// Assembles from exact values.
    pub fn new(k: usize, theta: &BigRational, terms: &[BasisTerm], coeffs: &[BigRational]) -> Self {
        CoefficientSet {
            k,
            theta: format_rational(theta),
            terms: terms.to_vec(),
            coeffs: coeffs.iter().map(format_rational).collect(),
        }
    }

    /// Parsed level of distribution.
    pub fn theta(&self) -> Result<BigRational> {
        parse_rational(&self.theta)
    }

    /// Parsed coefficient vector.
    pub fn coefficients(&self) -> Result<Vec<BigRational>> {
        self.coeffs.iter().map(|s| parse_rational(s)).collect()
    }

    /// Structural checks: matching lengths, distinct terms, sane ranges.
    pub fn validate(&self) -> Result<()> {
        validate_terms(&self.terms)?;
        if self.terms.len() != self.coeffs.len() {
            return Err(Error::InvalidInput(format!(
                "{} terms against {} coefficients",
                self.terms.len(),
                self.coeffs.len()
            )));
        }
        if self.k < 2 {
            return Err(Error::InvalidInput(format!("k must be >= 2, got {}", self.k)));
        }
        let theta = self.theta()?;
        if !theta.is_positive() || theta > BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "theta must lie in (0, 1], got {}",
                self.theta
            )));
        }
        self.coefficients()?;
        Ok(())
    }

    /// Reads and validates a JSON coefficient file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        let set: CoefficientSet = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        set.validate()?;
        Ok(set)
    }

    /// Writes the JSON form.
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

/// Serialised matrix: configuration plus row-major `(q0, q1, q2)` triples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDump {
    /// Which functional the matrix belongs to (`"I"`, `"J"`, `"Ltilde"`, ...).
    pub matrix: String,
    /// Tuple length.
    pub k: usize,
    /// Level of distribution as a `p/q` string.
    pub theta: String,
    /// Basis terms.
    pub terms: Vec<BasisTerm>,
    /// Matrix dimension.
    pub dim: usize,
    /// Row-major entries as `(q0, q1, q2)` rational strings.
    pub entries: Vec<LogLinearScalar>,
}

impl MatrixDump {
    /// Captures one form.
    pub fn new(
        matrix: &str,
        k: usize,
        theta: &BigRational,
        terms: &[BasisTerm],
        form: &QuadraticForm,
    ) -> Self {
        MatrixDump {
            matrix: matrix.to_string(),
            k,
            theta: format_rational(theta),
            terms: terms.to_vec(),
            dim: form.dim(),
            entries: form.entries().to_vec(),
        }
    }

    /// Reconstructs the matrix, re-checking symmetry.
    pub fn to_form(&self) -> Result<QuadraticForm> {
        QuadraticForm::from_entries(self.dim, self.entries.clone())
    }
}
