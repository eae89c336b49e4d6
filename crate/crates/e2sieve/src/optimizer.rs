//! Coefficient search and exact certification.
//!
//! The pipeline has three stages with a strict division of labor:
//!
//! 1. [`max_rayleigh`] — plain floating point. The two forms are scaled into
//!    f64 range, the denominator form is Cholesky-whitened, and a Jacobi
//!    eigensolve returns the top generalized eigenvector: the coefficient
//!    vector maximizing `R = (a' J~ a) / ((theta/2) a' I a)`.
//! 2. [`rationalize`] — snaps that vector to exact rationals: the
//!    largest-magnitude coordinate is normalized to one and every coordinate
//!    is replaced by its best rational approximation with denominator within
//!    a bound.
//! 3. [`certify`] — exact arithmetic only. The margin
//!    `a' J~ a - nu (theta/2) a' I a` is assembled as an exact scalar and
//!    enclosed in an interval at escalating precision; the verdict depends
//!    solely on the enclosure's position relative to zero.
//!
//! Nothing from stage 1 or 2 is trusted by stage 3: a bad float vector can
//! only produce a `Fail` or `Inconclusive` verdict, never a wrong `Pass`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::BasisTerm;
use crate::forms::{evaluate_ratio, SieveConfig, SieveForms};
use crate::rational::{decimal_ceil, decimal_floor, format_rational, to_f64, to_f64_exp};
use crate::scalars::{eval_interval, Interval};
use crate::{Error, Result};

/// A symmetric matrix brought into floating-point range: the true entries
/// are `entries[i*dim+j] * 2^scale`. Needed because the exact entries carry
/// factorials of `k + degree`, far below the f64 underflow threshold for
/// large `k`.
#[derive(Debug, Clone)]
pub struct ScaledMatrix {
    /// Dimension.
    pub dim: usize,
    /// Row-major entries, all within f64 range.
    pub entries: Vec<f64>,
    /// Binary exponent factored out of every entry.
    pub scale: i64,
}

/// Evaluates a form's entries numerically and factors out one common power
/// of two.
pub fn scale_form(
    form: &crate::forms::QuadraticForm,
    theta: &BigRational,
    bits: u32,
) -> Result<ScaledMatrix> {
    let dim = form.dim();
    let mut mantissas = Vec::with_capacity(dim * dim);
    let mut max_exp = i64::MIN;
    for s in form.entries() {
        let mid = eval_interval(s, theta, bits)?.midpoint();
        let (m, e) = to_f64_exp(&mid);
        if m != 0.0 {
            max_exp = max_exp.max(e);
        }
        mantissas.push((m, e));
    }
    if max_exp == i64::MIN {
        return Err(Error::InvalidInput("form is identically zero".into()));
    }
    let entries = mantissas
        .into_iter()
        .map(|(m, e)| {
            let shift = e - max_exp;
            if shift < -1000 {
                0.0
            } else {
                m * (shift as f64).exp2()
            }
        })
        .collect();
    Ok(ScaledMatrix {
        dim,
        entries,
        scale: max_exp,
    })
}

/// Lower-triangular Cholesky factor of a symmetric positive definite
/// matrix, or `None` if a pivot fails.
fn cholesky(dim: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0f64; dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut s = a[i * dim + j];
            for t in 0..j {
                s -= l[i * dim + t] * l[j * dim + t];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * dim + i] = s.sqrt();
            } else {
                l[i * dim + j] = s / l[j * dim + j];
            }
        }
    }
    Some(l)
}

/// Solves `L x = b` for lower-triangular `L`, in place.
fn solve_lower(dim: usize, l: &[f64], b: &mut [f64]) {
    for i in 0..dim {
        let mut s = b[i];
        for t in 0..i {
            s -= l[i * dim + t] * b[t];
        }
        b[i] = s / l[i * dim + i];
    }
}

/// Solves `L' x = b` for the transpose of lower-triangular `L`, in place.
fn solve_upper_t(dim: usize, l: &[f64], b: &mut [f64]) {
    for i in (0..dim).rev() {
        let mut s = b[i];
        for t in i + 1..dim {
            s -= l[t * dim + i] * b[t];
        }
        b[i] = s / l[i * dim + i];
    }
}

/// Cyclic Jacobi eigensolve of a symmetric matrix. Returns eigenvalues and
/// the orthogonal matrix of eigenvectors (column `j` belongs to value `j`).
fn jacobi_eigen(dim: usize, a: &mut [f64]) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0f64; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    for _sweep in 0..120 {
        let mut off = 0.0f64;
        for i in 0..dim {
            for j in i + 1..dim {
                off += a[i * dim + j] * a[i * dim + j];
            }
        }
        if off.sqrt() < 1e-300_f64.max(1e-15 * frobenius(dim, a)) {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..dim {
                    let aip = a[i * dim + p];
                    let aiq = a[i * dim + q];
                    a[i * dim + p] = c * aip - s * aiq;
                    a[i * dim + q] = s * aip + c * aiq;
                }
                for j in 0..dim {
                    let apj = a[p * dim + j];
                    let aqj = a[q * dim + j];
                    a[p * dim + j] = c * apj - s * aqj;
                    a[q * dim + j] = s * apj + c * aqj;
                }
                for i in 0..dim {
                    let vip = v[i * dim + p];
                    let viq = v[i * dim + q];
                    v[i * dim + p] = c * vip - s * viq;
                    v[i * dim + q] = s * vip + c * viq;
                }
            }
        }
    }
    let values = (0..dim).map(|i| a[i * dim + i]).collect();
    (values, v)
}

fn frobenius(dim: usize, a: &[f64]) -> f64 {
    a.iter().take(dim * dim).map(|x| x * x).sum::<f64>().sqrt()
}

/// Result of the floating-point stage.
#[derive(Debug, Clone)]
pub struct RayleighOutcome {
    /// Estimated maximum of `R` over the coefficient space.
    pub r_estimate: f64,
    /// Maximizing vector, scaled so its largest-magnitude coordinate is one.
    pub a: Vec<f64>,
}

/// Maximizes the generalized Rayleigh quotient
/// `(a' J~ a) / ((theta/2) a' I a)` in floating point.
///
/// The denominator form is Cholesky-whitened and the resulting symmetric
/// problem is diagonalized by Jacobi rotations — adequate and robust at
/// the dimensions used here (a few dozen terms at most).
pub fn max_rayleigh(forms: &SieveForms) -> Result<RayleighOutcome> {
    let dim = forms.terms.len();
    let mi = scale_form(&forms.a_i, &forms.theta, 192)?;
    let mj = scale_form(&forms.a_jtilde, &forms.theta, 192)?;
    let l = cholesky(dim, &mi.entries).ok_or(Error::NotPositiveDefinite { index: 0, sign: -1 })?;
    // B = L^{-1} J~ L^{-T}, formed column by column
    let mut b = vec![0.0f64; dim * dim];
    for col in 0..dim {
        let mut y: Vec<f64> = (0..dim).map(|row| mj.entries[row * dim + col]).collect();
        solve_lower(dim, &l, &mut y);
        for row in 0..dim {
            b[row * dim + col] = y[row];
        }
    }
    // right-multiply by L^{-T}: solve along rows
    for row in 0..dim {
        let mut y: Vec<f64> = (0..dim).map(|col| b[row * dim + col]).collect();
        solve_lower(dim, &l, &mut y);
        for col in 0..dim {
            b[row * dim + col] = y[col];
        }
    }
    // symmetrize against rounding
    for i in 0..dim {
        for j in i + 1..dim {
            let m = 0.5 * (b[i * dim + j] + b[j * dim + i]);
            b[i * dim + j] = m;
            b[j * dim + i] = m;
        }
    }
    let (values, vectors) = jacobi_eigen(dim, &mut b);
    let (best_idx, &best_val) = values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
        .ok_or_else(|| Error::InvalidInput("empty eigenproblem".into()))?;
    let mut a: Vec<f64> = (0..dim).map(|i| vectors[i * dim + best_idx]).collect();
    solve_upper_t(dim, &l, &mut a);
    // normalize the largest-magnitude coordinate to exactly one
    let pivot = a
        .iter()
        .cloned()
        .max_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap())
        .unwrap();
    if pivot == 0.0 {
        return Err(Error::ZeroVector);
    }
    for x in a.iter_mut() {
        *x /= pivot;
    }
    // eigenvalue of the scaled problem -> ratio of the true problem
    let theta = to_f64(&forms.theta);
    let scale_back = ((mj.scale - mi.scale) as f64).exp2();
    let r_estimate = best_val * scale_back * 2.0 / theta;
    Ok(RayleighOutcome { r_estimate, a })
}

/// Best rational approximation to `x` with denominator at most `bound`,
/// by continued-fraction convergents and the final semiconvergent.
fn best_rational(x: f64, bound: &BigInt) -> BigRational {
    let exact = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    if exact.denom().magnitude() <= bound.magnitude() {
        return exact;
    }
    let neg = exact.is_negative();
    let mut target = exact.abs();
    // convergents p/q of the continued fraction of |x|
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (target.to_integer(), BigInt::one());
    target -= BigRational::from_integer(p1.clone());
    let mut best = BigRational::new(p1.clone(), q1.clone());
    while !target.is_zero() {
        target = target.recip();
        let a = target.to_integer();
        target -= BigRational::from_integer(a.clone());
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if &q2 > bound {
            // largest semiconvergent under the bound
            let room = (bound - &q0) / &q1;
            if room >= BigInt::one() {
                let ps = &room * &p1 + &p0;
                let qs = &room * &q1 + &q0;
                let semi = BigRational::new(ps, qs);
                let conv = BigRational::new(p1.clone(), q1.clone());
                let ex = BigRational::from_float(x.abs()).unwrap();
                best = if (&semi - &ex).abs() < (&conv - &ex).abs() {
                    semi
                } else {
                    conv
                };
            } else {
                best = BigRational::new(p1.clone(), q1.clone());
            }
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        best = BigRational::new(p1.clone(), q1.clone());
    }
    if neg {
        -best
    } else {
        best
    }
}

/// Snaps a float vector to exact rationals: divides through by the
/// largest-magnitude coordinate (making it exactly one) and replaces each
/// coordinate by its best rational approximation with denominator at most
/// `denominator_bound`.
///
/// With a bound of one the output is the sign pattern in `{-1, 0, 1}`.
/// The map is idempotent: feeding the (exactly represented) output back in
/// returns it unchanged.
pub fn rationalize(v: &[f64], denominator_bound: &BigInt) -> Result<Vec<BigRational>> {
    if v.is_empty() {
        return Err(Error::InvalidInput("empty vector".into()));
    }
    if denominator_bound < &BigInt::one() {
        return Err(Error::InvalidInput(
            "denominator bound must be at least one".into(),
        ));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("vector has non-finite entries".into()));
    }
    let pivot = v
        .iter()
        .cloned()
        .max_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap())
        .unwrap();
    if pivot == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| best_rational(x / pivot, denominator_bound)).collect())
}

/// Default cap on snapped denominators.
pub fn default_denominator_bound() -> BigInt {
    BigInt::from(10u64).pow(21)
}

/// Default precision-escalation schedule for certification.
pub const DEFAULT_PRECISION_SCHEDULE: [u32; 3] = [256, 512, 1024];

/// Outcome of an exact certification attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// The margin is certainly positive: `R > nu` holds.
    Pass,
    /// The margin is certainly nonpositive: this vector does not work.
    Fail,
    /// The enclosure still straddles zero at the maximum precision tried.
    Inconclusive,
}

/// An exact, self-contained record of one certification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    /// Number of simplex variables.
    pub k: usize,
    /// Level of distribution, as an exact rational string.
    pub theta: String,
    /// The integer the ratio must exceed.
    pub nu: u32,
    /// Basis exponent pairs.
    pub terms: Vec<BasisTerm>,
    /// Exact coefficient vector, as rational strings.
    pub coefficients: Vec<String>,
    /// The verdict.
    pub verdict: Verdict,
    /// Precision at which the verdict was reached.
    pub precision_bits: u32,
    /// Decimal lower bound on the excess `R - nu` (scale-free, unlike the
    /// raw form difference, whose magnitude shrinks factorially with `k`).
    pub margin_low: String,
    /// Decimal upper bound on the excess `R - nu`.
    pub margin_high: String,
    /// Decimal lower bound on the ratio `R` itself.
    pub ratio_low: String,
    /// Decimal upper bound on the ratio.
    pub ratio_high: String,
}

/// Certifies `R > nu` for an exact coefficient vector by enclosing the
/// exact margin at each precision in `schedule` until the enclosure clears
/// zero. `Pass` and `Fail` are definitive; `Inconclusive` means the
/// schedule was exhausted with the enclosure still straddling zero.
pub fn certify(
    forms: &SieveForms,
    nu: u32,
    a: &[BigRational],
    schedule: &[u32],
) -> Result<Certificate> {
    if schedule.is_empty() {
        return Err(Error::InvalidInput("empty precision schedule".into()));
    }
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let margin = forms.margin(a, nu)?;
    let mut verdict = Verdict::Inconclusive;
    let mut used_bits = *schedule.last().unwrap();
    let mut enclosure = None;
    for &bits in schedule {
        let itv = eval_interval(&margin, &forms.theta, bits)?;
        if itv.is_strictly_positive() {
            verdict = Verdict::Pass;
            used_bits = bits;
            enclosure = Some(itv);
            break;
        }
        if itv.is_nonpositive() {
            verdict = Verdict::Fail;
            used_bits = bits;
            enclosure = Some(itv);
            break;
        }
        enclosure = Some(itv);
    }
    debug_assert!(enclosure.is_some());
    let ratio = evaluate_ratio(forms, a, used_bits)?;
    let nu_point = Interval::point(BigRational::from_integer(BigInt::from(nu)), used_bits);
    let excess = ratio.ratio.sub(&nu_point);
    Ok(Certificate {
        k: forms.k,
        theta: format_rational(&forms.theta),
        nu,
        terms: forms.terms.clone(),
        coefficients: a.iter().map(format_rational).collect(),
        verdict,
        precision_bits: used_bits,
        margin_low: decimal_floor(excess.lo(), 40),
        margin_high: decimal_ceil(excess.hi(), 40),
        ratio_low: decimal_floor(ratio.ratio.lo(), 40),
        ratio_high: decimal_ceil(ratio.ratio.hi(), 40),
    })
}

/// End-to-end pipeline: build the forms for `config` on the first `nterms`
/// basis terms, maximize in floating point, snap to rationals, certify.
pub fn optimize_and_certify(
    config: &SieveConfig,
    nterms: usize,
    denominator_bound: &BigInt,
    schedule: &[u32],
) -> Result<(RayleighOutcome, Vec<BigRational>, Certificate)> {
    config.validate()?;
    let terms = crate::basis::basis_sequence(nterms);
    let forms = SieveForms::build(config.k, &config.theta, &terms)?;
    let outcome = max_rayleigh(&forms)?;
    let snapped = rationalize(&outcome.a, denominator_bound)?;
    let cert = certify(&forms, config.nu, &snapped, schedule)?;
    Ok((outcome, snapped, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::basis_sequence;
    use crate::rational::{rat, ratio};

    fn forms_for(k: usize, theta: BigRational, nterms: usize) -> SieveForms {
        SieveForms::build(k, &theta, &basis_sequence(nterms)).unwrap()
    }

    #[test]
    fn one_by_one_problem_is_the_entry_ratio() {
        // a single term: R = (2/theta) * Jt_00 / I_00 regardless of a
        let forms = forms_for(5, rat(1), 1);
        let out = max_rayleigh(&forms).unwrap();
        let i00 = to_f64(&forms.a_i.entry(0, 0).q0);
        let jt = eval_interval(forms.a_jtilde.entry(0, 0), &rat(1), 128).unwrap();
        let expected = 2.0 * to_f64(&jt.midpoint()) / i00;
        assert!(
            (out.r_estimate - expected).abs() < 1e-10 * expected.abs(),
            "{} vs {expected}",
            out.r_estimate
        );
        assert_eq!(out.a, vec![1.0]);
    }

    #[test]
    fn rayleigh_meets_known_targets() {
        // the two fast headline cases
        let out10 = max_rayleigh(&forms_for(10, rat(1), 2)).unwrap();
        assert!(out10.r_estimate >= 3.0353, "k=10: {}", out10.r_estimate);
        let out16 = max_rayleigh(&forms_for(16, rat(1), 4)).unwrap();
        assert!(out16.r_estimate >= 4.000399, "k=16: {}", out16.r_estimate);
    }

    #[test]
    fn rayleigh_estimate_is_attained_by_its_vector() {
        // the reported estimate must match the exact ratio of the returned
        // vector once snapped with a generous denominator bound
        let forms = forms_for(10, rat(1), 3);
        let out = max_rayleigh(&forms).unwrap();
        let snapped = rationalize(&out.a, &default_denominator_bound()).unwrap();
        let exact = evaluate_ratio(&forms, &snapped, 192).unwrap();
        let mid = to_f64(&exact.ratio.midpoint());
        assert!(
            (out.r_estimate - mid).abs() < 1e-9 * mid.abs(),
            "estimate {} vs exact {}",
            out.r_estimate,
            mid
        );
    }

    #[test]
    fn scaled_matrices_survive_huge_k() {
        // at k = 225 the raw entries underflow f64; the scaled path must not
        let forms = forms_for(225, ratio(1, 2), 4);
        let mi = scale_form(&forms.a_i, &forms.theta, 160).unwrap();
        assert!(mi.entries.iter().any(|&x| x != 0.0));
        assert!(mi.entries.iter().all(|x| x.is_finite()));
        assert!(mi.scale < -700, "scale {}", mi.scale);
        let out = max_rayleigh(&forms).unwrap();
        assert!(out.r_estimate > 4.0, "{}", out.r_estimate);
        assert!(out.a.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn rationalize_normalizes_and_bounds_denominators() {
        let v = [0.4, -2.0, 1.3];
        let snapped = rationalize(&v, &BigInt::from(100)).unwrap();
        // pivot is -2.0: coordinates become -0.2, 1, -0.65
        assert_eq!(snapped[1], rat(1));
        assert_eq!(snapped[0], ratio(-1, 5));
        assert_eq!(snapped[2], ratio(-13, 20));
        for s in &snapped {
            assert!(s.denom() <= &BigInt::from(100));
        }
    }

    #[test]
    fn rationalize_bound_one_gives_signs() {
        let v = [0.4, -2.0, 1.3, -0.2, 0.9];
        let snapped = rationalize(&v, &BigInt::one()).unwrap();
        let as_i: Vec<i64> = snapped
            .iter()
            .map(|r| {
                assert!(r.denom().is_one());
                let n: i64 = r.numer().try_into().unwrap();
                n
            })
            .collect();
        // divided by -2: [-0.2, 1, -0.65, 0.1, -0.45] -> rounds to sign set
        assert_eq!(as_i, vec![0, 1, -1, 0, 0]);
        for r in &snapped {
            assert!(r.abs() <= rat(1));
        }
    }

    #[test]
    fn rationalize_is_idempotent() {
        // with the default (huge) bound every float comes back exactly, so
        // a second pass reproduces the first
        let v = [0.37, -1.25, 0.003, 0.9999];
        let bound = default_denominator_bound();
        let first = rationalize(&v, &bound).unwrap();
        let as_floats: Vec<f64> = first.iter().map(to_f64).collect();
        let second = rationalize(&as_floats, &bound).unwrap();
        assert_eq!(first, second);
        // small bound, dyadic-exact inputs: also a fixed point
        let v = [0.5, -1.0, 0.75];
        let bound = BigInt::from(16);
        let first = rationalize(&v, &bound).unwrap();
        let as_floats: Vec<f64> = first.iter().map(to_f64).collect();
        let second = rationalize(&as_floats, &bound).unwrap();
        assert_eq!(first, second);
        assert_eq!(first, vec![ratio(-1, 2), rat(1), ratio(-3, 4)]);
    }

    #[test]
    fn best_rational_matches_classic_convergents() {
        // pi: 22/7 and 355/113 are the classic approximations
        let pi = std::f64::consts::PI;
        assert_eq!(best_rational(pi, &BigInt::from(10)), ratio(22, 7));
        assert_eq!(best_rational(pi, &BigInt::from(150)), ratio(355, 113));
        // exact dyadics come back exactly
        assert_eq!(best_rational(0.375, &BigInt::from(1000)), ratio(3, 8));
        assert_eq!(best_rational(-0.5, &BigInt::from(2)), ratio(-1, 2));
    }

    #[test]
    fn certify_small_case_passes_and_escalates_only_as_needed() {
        // k=10, nu=3 with two terms: known to clear the bar
        let config = SieveConfig {
            k: 10,
            theta: rat(1),
            nu: 3,
        };
        let (out, snapped, cert) = optimize_and_certify(
            &config,
            2,
            &default_denominator_bound(),
            &DEFAULT_PRECISION_SCHEDULE,
        )
        .unwrap();
        assert!(out.r_estimate > 3.0);
        assert_eq!(cert.verdict, Verdict::Pass);
        assert_eq!(cert.precision_bits, 256);
        assert_eq!(cert.coefficients.len(), snapped.len());
        // scale invariance: 7a certifies identically
        let forms = forms_for(10, rat(1), 2);
        let scaled: Vec<BigRational> = snapped.iter().map(|x| x * rat(7)).collect();
        let cert2 = certify(&forms, 3, &scaled, &DEFAULT_PRECISION_SCHEDULE).unwrap();
        assert_eq!(cert2.verdict, Verdict::Pass);
        // soundness at doubled precision
        let cert3 = certify(&forms, 3, &snapped, &[512]).unwrap();
        assert_eq!(cert3.verdict, Verdict::Pass);
    }

    #[test]
    fn certify_fails_an_unreachable_bar() {
        // k=10 with two terms cannot reach nu=4
        let forms = forms_for(10, rat(1), 2);
        let out = max_rayleigh(&forms).unwrap();
        let snapped = rationalize(&out.a, &default_denominator_bound()).unwrap();
        let cert = certify(&forms, 4, &snapped, &DEFAULT_PRECISION_SCHEDULE).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
    }

    #[test]
    fn certificate_serializes_round_trip() {
        let config = SieveConfig {
            k: 6,
            theta: rat(1),
            nu: 2,
        };
        let (_, _, cert) = optimize_and_certify(
            &config,
            2,
            &default_denominator_bound(),
            &DEFAULT_PRECISION_SCHEDULE,
        )
        .unwrap();
        let text = serde_json::to_string_pretty(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back.verdict, cert.verdict);
        assert_eq!(back.coefficients, cert.coefficients);
        assert!(text.contains("\"verdict\""));
    }
}
