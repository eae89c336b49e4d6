//! The symmetric polynomial basis used to parametrise sieve weights, and the
//! integer polynomials `Q_c` that integrate it over the simplex.
//!
//! Candidate weights live on the simplex `R_k = {x_i >= 0, sum x_i <= 1}` and
//! are rational-coefficient combinations of
//!
//! ```text
//!     (1 - P1)^b * P2^c,    P1 = x_1 + ... + x_k,   P2 = x_1^2 + ... + x_k^2.
//! ```
//!
//! Moments of `P2` over `R_k` are governed by a family of integer
//! polynomials: `Q_0 = 1` and, for `c >= 1`,
//!
//! ```text
//!     Q_c(x) = c! * sum_{r=1..c} C(x, r)
//!                  * sum_{c_1+...+c_r = c, c_i >= 1} prod_i (2 c_i)! / c_i!,
//! ```
//!
//! so that `integral_{R_k} (1 - P1)^b P2^c dx = b! Q_c(k) / (k + 2c + b)!`.
//! `Q_c` has degree `c`, leading coefficient `2^c`, zero constant term for
//! `c >= 1`, and nonnegative integer coefficients throughout.

use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::factorial;
use crate::{Error, Result};

/// Dense integer polynomial `Q_c`; `coefficients[r]` multiplies `x^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    /// The moment order `c` the polynomial belongs to.
    pub c: usize,
    /// Coefficients by ascending power, length `c + 1` (length 1 for `c = 0`).
    pub coefficients: Vec<BigInt>,
}

impl QPolynomial {
    /// Polynomial degree: `c` by construction.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Exact evaluation at an integer point (Horner over big integers).
    pub fn eval_int(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        let mut acc = BigInt::zero();
        for coefficient in self.coefficients.iter().rev() {
            acc = acc * &x + coefficient;
        }
        acc
    }
}

static Q_CACHE: LazyLock<RwLock<Vec<Arc<QPolynomial>>>> = LazyLock::new(|| {
    RwLock::new(vec![Arc::new(QPolynomial {
        c: 0,
        coefficients: vec![BigInt::one()],
    })])
});

/// `(2j)! / j!`, the weight a part of size `j` contributes to a composition.
fn part_weight(j: usize) -> BigInt {
    factorial(2 * j) / factorial(j)
}

/// Sum of `prod_i (2 c_i)!/c_i!` over compositions of `c` into `r` positive
/// parts, by dynamic programming on the number of parts.
fn composition_weight_sum(r: usize, c: usize) -> BigInt {
    let mut by_parts = vec![BigInt::zero(); c + 1];
    by_parts[0] = BigInt::one();
    for _ in 0..r {
        let mut next = vec![BigInt::zero(); c + 1];
        for total in 1..=c {
            for part in 1..=total {
                let tail = &by_parts[total - part];
                if !tail.is_zero() {
                    next[total] += part_weight(part) * tail;
                }
            }
        }
        by_parts = next;
    }
    by_parts[c].clone()
}

fn build_q_polynomial(c: usize) -> QPolynomial {
    // Accumulate c! * sum_r W(r, c) * C(x, r) over rationals, then certify
    // the result is an integer polynomial.
    let mut coeffs = vec![BigRational::zero(); c + 1];
    for r in 1..=c {
        let weight = BigRational::new(
            composition_weight_sum(r, c) * factorial(c),
            factorial(r),
        );
        // C(x, r) * r! = x (x-1) ... (x-r+1), built by repeated multiplication.
        let mut falling = vec![BigInt::zero(); r + 1];
        falling[0] = BigInt::one();
        for t in 0..r {
            // multiply by (x - t)
            let mut next = vec![BigInt::zero(); r + 1];
            for (power, coefficient) in falling.iter().enumerate() {
                if coefficient.is_zero() {
                    continue;
                }
                next[power + 1] += coefficient;
                next[power] -= coefficient * BigInt::from(t);
            }
            falling = next;
        }
        for (power, coefficient) in falling.iter().enumerate() {
            coeffs[power] += &weight * BigRational::from_integer(coefficient.clone());
        }
    }
    let coefficients = coeffs
        .into_iter()
        .map(|q| {
            assert!(q.is_integer(), "Q_{c} has a non-integer coefficient");
            assert!(!q.is_negative(), "Q_{c} has a negative coefficient");
            q.to_integer()
        })
        .collect();
    QPolynomial { c, coefficients }
}

/// The polynomial `Q_c`, memoised process-wide.
pub fn q_polynomial(c: usize) -> Arc<QPolynomial> {
    {
        let cache = Q_CACHE.read().unwrap();
        if c < cache.len() {
            return cache[c].clone();
        }
    }
    let mut cache = Q_CACHE.write().unwrap();
    while cache.len() <= c {
        let next = build_q_polynomial(cache.len());
        cache.push(Arc::new(next));
    }
    cache[c].clone()
}

/// `Q_c(k)` as a rational (always integer-valued at integer arguments).
pub fn q_eval(c: usize, k: i64) -> BigRational {
    BigRational::from_integer(q_polynomial(c).eval_int(k))
}

/// One basis exponent pair: the term `(1 - P1)^b * P2^c`.
///
/// Serialises as the two-element array `[b, c]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct BasisTerm {
    /// Exponent of `1 - P1`.
    pub b: usize,
    /// Exponent of `P2`.
    pub c: usize,
}

impl BasisTerm {
    /// Total degree `b + 2c`, the grading the canonical ordering follows.
    pub fn degree(&self) -> usize {
        self.b + 2 * self.c
    }
}

impl From<(usize, usize)> for BasisTerm {
    fn from((b, c): (usize, usize)) -> Self {
        BasisTerm { b, c }
    }
}

impl From<BasisTerm> for (usize, usize) {
    fn from(t: BasisTerm) -> Self {
        (t.b, t.c)
    }
}

/// First `m` terms of the canonical basis ordering: ascending total degree
/// `b + 2c`, and descending `b` within a degree.
pub fn basis_sequence(m: usize) -> Vec<BasisTerm> {
    let mut terms = Vec::with_capacity(m);
    let mut degree = 0;
    while terms.len() < m {
        let mut b = degree;
        loop {
            terms.push(BasisTerm {
                b,
                c: (degree - b) / 2,
            });
            if terms.len() == m || b < 2 {
                break;
            }
            b -= 2;
        }
        degree += 1;
    }
    terms
}

/// Validates a term list: nonempty and free of duplicates.
pub fn validate_terms(terms: &[BasisTerm]) -> Result<()> {
    if terms.is_empty() {
        return Err(Error::InvalidInput("empty basis term list".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for t in terms {
        if !seen.insert(*t) {
            return Err(Error::InvalidInput(format!(
                "duplicate basis term ({}, {})",
                t.b, t.c
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn coeffs(c: usize) -> Vec<i64> {
        q_polynomial(c)
            .coefficients
            .iter()
            .map(|z| i64::try_from(z).unwrap())
            .collect()
    }

    #[test]
    fn q_low_orders_match_hand_expansion() {
        assert_eq!(coeffs(0), vec![1]);
        assert_eq!(coeffs(1), vec![0, 2]);
        assert_eq!(coeffs(2), vec![0, 20, 4]);
        assert_eq!(coeffs(3), vec![0, 592, 120, 8]);
        assert_eq!(coeffs(4), vec![0, 33888, 5936, 480, 16]);
    }

    #[test]
    fn q_structure_up_to_order_eight() {
        for c in 0..=8 {
            let q = q_polynomial(c);
            assert_eq!(q.degree(), c, "degree of Q_{c}");
            assert_eq!(
                q.coefficients.last().unwrap(),
                &BigInt::from(2).pow(c as u32),
                "leading coefficient of Q_{c}"
            );
            if c >= 1 {
                assert!(q.coefficients[0].is_zero(), "Q_{c}(0) != 0");
            }
            assert!(
                q.coefficients.iter().all(|z| !z.is_negative()),
                "negative coefficient in Q_{c}"
            );
        }
    }

    #[test]
    fn q_eval_matches_polynomial() {
        // Q_2(x) = 4x^2 + 20x at a few points, and the degenerate orders.
        assert_eq!(q_eval(2, 3), rat(96));
        assert_eq!(q_eval(2, 10), rat(600));
        assert_eq!(q_eval(0, 57), rat(1));
        assert_eq!(q_eval(1, 0), rat(0));
    }

    #[test]
    fn basis_sequence_prefix() {
        let terms: Vec<(usize, usize)> = basis_sequence(9).into_iter().map(Into::into).collect();
        assert_eq!(
            terms,
            vec![
                (0, 0),
                (1, 0),
                (2, 0),
                (0, 1),
                (3, 0),
                (1, 1),
                (4, 0),
                (2, 1),
                (0, 2)
            ]
        );
    }

    #[test]
    fn basis_sequence_is_graded_and_duplicate_free() {
        let terms = basis_sequence(60);
        validate_terms(&terms).unwrap();
        for pair in terms.windows(2) {
            let (s, t) = (pair[0], pair[1]);
            assert!(
                s.degree() < t.degree() || (s.degree() == t.degree() && s.b > t.b),
                "ordering violated at ({}, {}) -> ({}, {})",
                s.b,
                s.c,
                t.b,
                t.c
            );
        }
    }

    #[test]
    fn validate_terms_rejects_bad_lists() {
        assert!(validate_terms(&[]).is_err());
        let dup = vec![BasisTerm { b: 1, c: 0 }, BasisTerm { b: 1, c: 0 }];
        assert!(validate_terms(&dup).is_err());
    }
}
