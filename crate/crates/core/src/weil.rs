//! Weil polynomials of abelian varieties over finite fields and their
//! trace ("real Weil") polynomials.
//!
//! A q-Weil polynomial is a monic `f` of degree `2g` over Z whose complex
//! roots all have absolute value `sqrt(q)`. Writing the root pairs as
//! `x^2 - a_i x + q` with real `a_i`, `|a_i| <= 2 sqrt(q)`, the trace
//! polynomial `h = prod (x - a_i)` has degree `g`, is totally real with
//! root squares at most `4q`, and determines `f` through
//! `f = sum_j h_j x^(g-j) (x^2+q)^j`. Real roots `x = +-sqrt(q)` of `f`
//! are absorbed by the closed root bound: they correspond to `a = +-2
//! sqrt(q)`, i.e. to the integer trace factors `y^2 - 4q` (and `y -+ 2
//! sqrt(q)` when `q` is a square).
//!
//! `f` is irreducible over Q iff `h` is, and the class is ordinary iff
//! `gcd(h(0), q) = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intpoly::{is_irreducible_q, is_totally_real_within_sq, IntPoly};

/// A validated prime power `q = p^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    q: u64,
    p: u64,
    r: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeilError {
    #[error("{0} is not a prime power >= 2")]
    NotPrimePower(u64),
    #[error("trace polynomial has a root with square exceeding 4q")]
    RootBoundViolation,
    #[error("polynomial is not of q-Weil shape (functional equation fails)")]
    NotWeilShape,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<PrimePower, WeilError> {
        if q < 2 {
            return Err(WeilError::NotPrimePower(q));
        }
        let f = crate::intpoly::integer::factorize(&BigInt::from(q));
        let powers = f.prime_powers();
        if powers.len() != 1 {
            return Err(WeilError::NotPrimePower(q));
        }
        use num_traits::ToPrimitive;
        let p = powers[0].0.to_u64().expect("prime fits u64");
        let r = powers[0].1;
        Ok(PrimePower { q, p, r })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }

    /// The closed root-square bound `4q` for trace polynomials.
    pub fn four_q(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(4 * self.q as u128))
    }
}

/// A q-Weil polynomial `f` of degree `2g`, tagged with `q` and `g`.
/// Construction always validates the functional equation and the root
/// bound, so a value of this type is a certified Weil polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPoly {
    f: IntPoly,
    q: PrimePower,
    g: usize,
}

impl WeilPoly {
    /// Validate an arbitrary monic integer polynomial as a q-Weil
    /// polynomial.
    pub fn new(f: IntPoly, q: PrimePower) -> Result<WeilPoly, WeilError> {
        let h = trace_poly(&f, q)?;
        if !is_totally_real_within_sq(&h, &q.four_q()) {
            return Err(WeilError::RootBoundViolation);
        }
        let g = h.deg_or_zero();
        Ok(WeilPoly { f, q, g })
    }

    pub fn f(&self) -> &IntPoly {
        &self.f
    }

    pub fn q(&self) -> PrimePower {
        self.q
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// The trace polynomial (exact, by triangular solve).
    pub fn trace(&self) -> IntPoly {
        trace_poly(&self.f, self.q).expect("validated at construction")
    }
}

/// A trace polynomial packaged with the residue case it serves and its
/// validity range: `h` is totally real with root squares at most
/// `max_root_sq_bound`, and `max_root_sq_bound <= 4 * min_q`, so the
/// expansion at any prime power `q >= min_q` (of the right case) is a
/// q-Weil polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RealWeil {
    h: IntPoly,
    case: crate::cyclicity::CaseClass,
    min_q: u64,
    max_root_sq_bound: BigRational,
}

impl RealWeil {
    pub fn new(
        h: IntPoly,
        case: crate::cyclicity::CaseClass,
        min_q: u64,
        max_root_sq_bound: BigRational,
    ) -> Result<RealWeil, WeilError> {
        let four_min_q = BigRational::from_integer(BigInt::from(4 * min_q as u128));
        if !h.is_monic()
            || max_root_sq_bound > four_min_q
            || !is_totally_real_within_sq(&h, &max_root_sq_bound)
        {
            return Err(WeilError::RootBoundViolation);
        }
        Ok(RealWeil { h, case, min_q, max_root_sq_bound })
    }

    pub fn h(&self) -> &IntPoly {
        &self.h
    }

    pub fn case(&self) -> crate::cyclicity::CaseClass {
        self.case
    }

    pub fn min_q(&self) -> u64 {
        self.min_q
    }

    pub fn max_root_sq_bound(&self) -> &BigRational {
        &self.max_root_sq_bound
    }

    /// Expand at a specific prime power, which must be at least `min_q`.
    pub fn expand_at(&self, q: PrimePower) -> Result<WeilPoly, WeilError> {
        if q.q() < self.min_q {
            return Err(WeilError::RootBoundViolation);
        }
        expand_h_to_f(&self.h, q)
    }
}

/// Expand a trace polynomial `h` into its q-Weil polynomial
/// `f = sum_j h_j x^(g-j) (x^2+q)^j`, after certifying that every root of
/// `h` is real with square at most `4q`.
pub fn expand_h_to_f(h: &IntPoly, q: PrimePower) -> Result<WeilPoly, WeilError> {
    if !is_totally_real_within_sq(h, &q.four_q()) {
        return Err(WeilError::RootBoundViolation);
    }
    let f = expand_h_to_f_unchecked(h, q);
    let g = h.deg_or_zero();
    Ok(WeilPoly { f, q, g })
}

/// The expansion map alone, without the root-bound certificate. The
/// result is a Weil polynomial only when `h` is totally real with root
/// squares at most `4q`; callers that skip the check (property tests,
/// congruence identities) own that risk.
pub fn expand_h_to_f_unchecked(h: &IntPoly, q: PrimePower) -> IntPoly {
    let g = h.deg_or_zero();
    let base = IntPoly::new(vec![q.q_big(), BigInt::zero(), BigInt::one()]); // x^2 + q
    let mut pows = Vec::with_capacity(g + 1);
    pows.push(IntPoly::one());
    for j in 1..=g {
        pows.push(&pows[j - 1] * &base);
    }
    let mut f = IntPoly::zero();
    for (j, c) in h.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        f = &f + &pows[j].mul_xpow(g - j).scale(c);
    }
    f
}

/// Recover the trace polynomial from a monic degree-2g polynomial by the
/// triangular solve in the basis `x^(g-j) (x^2+q)^j`. Fails with
/// `NotWeilShape` when the functional-equation structure does not hold
/// (nonzero residue after matching all coefficients).
pub fn trace_poly(f: &IntPoly, q: PrimePower) -> Result<IntPoly, WeilError> {
    let deg = f.degree().ok_or(WeilError::NotWeilShape)?;
    if deg % 2 != 0 || deg == 0 || !f.is_monic() {
        return Err(WeilError::NotWeilShape);
    }
    let g = deg / 2;
    let base = IntPoly::new(vec![q.q_big(), BigInt::zero(), BigInt::one()]);
    let mut pows = Vec::with_capacity(g + 1);
    pows.push(IntPoly::one());
    for j in 1..=g {
        pows.push(&pows[j - 1] * &base);
    }
    let mut residual = f.clone();
    let mut h_coeffs = vec![BigInt::zero(); g + 1];
    for j in (0..=g).rev() {
        let c = residual.coeff(g + j);
        if !c.is_zero() {
            residual = &residual - &pows[j].mul_xpow(g - j).scale(&c);
        }
        h_coeffs[j] = c;
    }
    if !residual.is_zero() {
        return Err(WeilError::NotWeilShape);
    }
    Ok(IntPoly::new(h_coeffs))
}

/// True iff `f` is a q-Weil polynomial: monic, the triangular solve
/// succeeds, and the trace polynomial is totally real with root squares
/// at most `4q` (closed bound).
pub fn is_weil(f: &IntPoly, q: PrimePower) -> bool {
    WeilPoly::new(f.clone(), q).is_ok()
}

/// Ordinariness in trace form: `gcd(h(0), q) = 1`.
pub fn is_ordinary(h: &IntPoly, q: PrimePower) -> bool {
    h.coeff(0).gcd(&q.q_big()).is_one()
}

/// The simple-ordinary predicate: `f` is a q-Weil polynomial, irreducible
/// over Q, and ordinary. For ordinary classes these are exactly the Weil
/// polynomials of simple ordinary isogeny classes (Honda-Tate).
pub fn is_simple_ordinary_class(f: &IntPoly, q: PrimePower) -> bool {
    let w = match WeilPoly::new(f.clone(), q) {
        Ok(w) => w,
        Err(_) => return false,
    };
    is_ordinary(&w.trace(), q) && is_irreducible_q(f)
}
