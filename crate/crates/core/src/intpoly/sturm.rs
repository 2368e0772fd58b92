//! Exact real-root counting with Sturm chains.
//!
//! The chain is computed over Z by pseudo-division with sign-corrected
//! multipliers and per-step primitive normalization, so coefficients stay
//! subresultant-sized and every sign query is an exact integer sign.
//! Counts are of *distinct* roots: every entry point takes the squarefree
//! part first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{sign_of, IntPoly};

/// An interval endpoint for root counting.
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl Endpoint {
    pub fn finite_i64(n: i64) -> Endpoint {
        Endpoint::Finite(BigRational::from_integer(BigInt::from(n)))
    }
}

/// The number of distinct real roots of a polynomial in a half-open
/// interval `(lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCount {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub count: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("polynomial has no real root")]
    NoRealRoot,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
}

/// Sturm chain of a squarefree polynomial: `S_0 = p`, `S_1 = p'`,
/// `S_{k+1} = -(S_{k-1} mod S_k)` up to positive scalar factors.
fn sturm_chain(p: &IntPoly) -> Vec<IntPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        if chain[n - 1].deg_or_zero() == 0 {
            return chain;
        }
        let (rem, mult_sign) = chain[n - 2].pseudo_rem(&chain[n - 1]);
        if rem.is_zero() {
            return chain;
        }
        let mut next = rem.primitive_part();
        if mult_sign > 0 {
            next = -&next;
        }
        chain.push(next);
    }
}

/// Sign of a chain element at an endpoint. At `±inf` this is the sign of
/// the leading coefficient times the parity of the degree.
fn sign_at(p: &IntPoly, at: &Endpoint) -> i8 {
    match at {
        Endpoint::PosInf => sign_of(&p.leading_coeff()),
        Endpoint::NegInf => {
            let s = sign_of(&p.leading_coeff());
            if p.deg_or_zero() % 2 == 1 {
                -s
            } else {
                s
            }
        }
        Endpoint::Finite(x) => {
            let (num, den) = (x.numer(), x.denom());
            p.sign_at_rational(num, den)
        }
    }
}

/// Sign variations of the chain at a point, zeros skipped. With zeros
/// skipped, `variations(lo) - variations(hi)` counts distinct roots in
/// the half-open interval `(lo, hi]` — a root exactly at `hi` is counted,
/// a root exactly at `lo` is not.
fn variations(chain: &[IntPoly], at: &Endpoint) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in chain {
        let s = sign_at(p, at);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Count the distinct real roots of `p` in `(lo, hi]` by exact Sturm
/// sign-variation counts on the squarefree part. `p` must be nonzero.
pub fn count_real_roots(p: &IntPoly, lo: Endpoint, hi: Endpoint) -> RootCount {
    assert!(!p.is_zero(), "count_real_roots requires a nonzero polynomial");
    let s = p.squarefree_part();
    let count = if s.deg_or_zero() == 0 {
        0
    } else {
        let chain = sturm_chain(&s);
        let va = variations(&chain, &lo);
        let vb = variations(&chain, &hi);
        va.saturating_sub(vb)
    };
    RootCount { lo, hi, count }
}

fn count_distinct_real_roots(s: &IntPoly) -> usize {
    count_real_roots(s, Endpoint::NegInf, Endpoint::PosInf).count
}

/// True iff every complex root of `p` is real with square at most `bound_sq`
/// (closed bound: a root with square exactly `bound_sq` is inside).
///
/// No irrational endpoints are needed: reality is `#distinct real roots ==
/// deg(squarefree part)`, and the bound is checked on the polynomial whose
/// roots are the squares of the roots of `p`, extracted from `p(x)p(-x)`.
pub fn is_totally_real_within_sq(p: &IntPoly, bound_sq: &BigRational) -> bool {
    assert!(!p.is_zero(), "is_totally_real_within_sq requires a nonzero polynomial");
    assert!(!bound_sq.is_negative(), "root-square bound must be nonnegative");
    let s = p.squarefree_part();
    let d = s.deg_or_zero();
    if d == 0 {
        return true;
    }
    if count_distinct_real_roots(&s) != d {
        return false;
    }
    // q(y) with q(x^2) = s(x) * s(-x); its roots are the root squares.
    let m = &s * &s.compose_neg_x();
    let q = m
        .even_part_in_x2()
        .expect("p(x)p(-x) is an even polynomial");
    let above = count_real_roots(&q, Endpoint::Finite(bound_sq.clone()), Endpoint::PosInf);
    above.count == 0
}

/// Cauchy bound: every real root of `p` has absolute value strictly less
/// than `1 + max|c_i| / |lc|`, returned as an integer.
fn cauchy_bound(p: &IntPoly) -> BigInt {
    let lc = p.leading_coeff().abs();
    let max = p
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    // ceil(max/lc) + 1
    (max + &lc - BigInt::one()) / &lc + BigInt::from(2)
}

/// Approximate the largest real root of `p` to within `eps` by
/// Sturm-guided bisection from the Cauchy bound.
pub fn max_real_root_approx(p: &IntPoly, eps: &BigRational) -> Result<BigRational, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    assert!(eps.is_positive(), "eps must be positive");
    let s = p.squarefree_part();
    if s.deg_or_zero() == 0 || count_distinct_real_roots(&s) == 0 {
        return Err(RootError::NoRealRoot);
    }
    let chain = sturm_chain(&s);
    let bound = cauchy_bound(&s);
    let mut lo = BigRational::from_integer(-&bound);
    let mut hi = BigRational::from_integer(bound);
    let two = BigRational::from_integer(BigInt::from(2));
    // Invariant: the largest root lies in (lo, hi].
    while &hi - &lo >= *eps {
        let mid = (&lo + &hi) / &two;
        let upper = variations(&chain, &Endpoint::Finite(mid.clone()))
            - variations(&chain, &Endpoint::PosInf);
        if upper >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((&lo + &hi) / &two)
}

/// Largest absolute value among the real roots of `p`, to within `eps`.
/// Used for the "max real root" columns, which report `max |root|`.
pub fn max_abs_root_approx(p: &IntPoly, eps: &BigRational) -> Result<BigRational, RootError> {
    let pos = max_real_root_approx(p, eps)?;
    let neg = max_real_root_approx(&p.compose_neg_x(), eps)?;
    Ok(pos.max(neg).abs())
}
