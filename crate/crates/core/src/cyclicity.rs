//! The point-group cyclicity criterion for isogeny classes.
//!
//! An isogeny class with Weil polynomial `f` is cyclic (every variety in
//! it has a cyclic group of rational points) iff `f'(1)` is coprime with
//! `f(1)/rad(f(1))`. Equivalently, a prime `l` witnesses non-cyclicity
//! iff `l | f'(1)` and `l^2 | f(1)`; both evaluations are at the point 1,
//! where `f(1) = #A(F_q)`. Both formulations are computed and
//! cross-checked on every call.
//!
//! The h-level sufficient conditions for witness 3 split on `q mod 3`:
//! `3 | h'(n)` and `9 | h(n)` at `n = 0` (`3 | q+1`), `n = 2`
//! (`3 | q-1`), or `n = 1` (`q = 3^r`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intpoly::integer::{radical_and_quotient, Factorization};
use crate::intpoly::IntPoly;
use crate::weil::{PrimePower, WeilPoly};

/// The residue of `q` mod 3 decides which evaluation point carries the
/// divisibility conditions on `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseClass {
    /// `3 | q + 1`, conditions at `n = 0`.
    QPlus,
    /// `3 | q - 1`, conditions at `n = 2`.
    QMinus,
    /// `q = 3^r`, conditions at `n = 1`.
    QThree,
}

impl CaseClass {
    /// The evaluation point `n` for this case.
    pub fn eval_point(self) -> i64 {
        match self {
            CaseClass::QPlus => 0,
            CaseClass::QMinus => 2,
            CaseClass::QThree => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseClass::QPlus => "3|q+1",
            CaseClass::QMinus => "3|q-1",
            CaseClass::QThree => "q=3^r",
        }
    }
}

/// Classify a prime power by its residue mod 3.
pub fn case_of(q: PrimePower) -> CaseClass {
    match q.q() % 3 {
        0 => CaseClass::QThree,
        1 => CaseClass::QMinus,
        _ => CaseClass::QPlus,
    }
}

/// The case divisibility pair: `3 | h'(n)` and `9 | h(n)` at the case's
/// evaluation point.
pub fn h_case_conditions(h: &IntPoly, case: CaseClass) -> bool {
    let n = case.eval_point();
    let d3: BigInt = BigInt::from(3);
    let d9: BigInt = BigInt::from(9);
    h.derivative().eval_i64(n).mod_floor(&d3).is_zero()
        && h.eval_i64(n).mod_floor(&d9).is_zero()
}

/// The full cyclicity analysis of a Weil polynomial: `f(1)`, `f'(1)`, the
/// factored radical of `f(1)`, the radical quotient, and the witness
/// primes `l` with `l | f'(1)` and `l^2 | f(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicityReport {
    pub f1: BigInt,
    pub fp1: BigInt,
    pub f1_factorization: Factorization,
    pub rad_f1: BigInt,
    pub hat_f1: BigInt,
    pub witnesses: Vec<BigInt>,
    pub is_cyclic: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclicityError {
    #[error("f(1) = 0: not a Weil polynomial for q >= 2")]
    DegenerateValue,
}

/// Compute the cyclicity report of a Weil polynomial. The two
/// formulations of the criterion (gcd with the radical quotient; witness
/// primes) are cross-asserted.
pub fn cyclicity_report(w: &WeilPoly) -> Result<CyclicityReport, CyclicityError> {
    let one = BigInt::one();
    let f1 = w.f().eval(&one);
    if f1.is_zero() {
        return Err(CyclicityError::DegenerateValue);
    }
    // f(1) = prod (1 + q - a_i) with every factor positive: an order of a
    // finite group.
    assert!(f1.is_positive(), "f(1) must be positive for a Weil polynomial");
    let fp1 = w.f().derivative().eval(&one);
    let (fact, rad, hat) = radical_and_quotient(&f1);
    let witnesses: Vec<BigInt> = fact
        .prime_powers()
        .iter()
        .filter(|(p, e)| *e >= 2 && fp1.mod_floor(p).is_zero())
        .map(|(p, _)| p.clone())
        .collect();
    let cyclic_by_gcd = fp1.gcd(&hat).is_one();
    let cyclic_by_witness = witnesses.is_empty();
    assert_eq!(
        cyclic_by_gcd, cyclic_by_witness,
        "criterion formulations disagree on f = {}",
        w.f()
    );
    Ok(CyclicityReport {
        f1,
        fp1,
        f1_factorization: fact,
        rad_f1: rad,
        hat_f1: hat,
        witnesses,
        is_cyclic: cyclic_by_gcd,
    })
}

impl CyclicityReport {
    pub fn has_witness(&self, l: u64) -> bool {
        let lb = BigInt::from(l);
        self.witnesses.contains(&lb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::expand_h_to_f;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn weil(f: &[i64], q: u64) -> WeilPoly {
        WeilPoly::new(IntPoly::from_i64(f), pp(q)).unwrap()
    }

    #[test]
    fn case_classification() {
        assert_eq!(case_of(pp(2)), CaseClass::QPlus);
        assert_eq!(case_of(pp(4)), CaseClass::QMinus);
        assert_eq!(case_of(pp(9)), CaseClass::QThree);
        assert_eq!(case_of(pp(3)), CaseClass::QThree);
        assert_eq!(case_of(pp(7)), CaseClass::QMinus);
        assert_eq!(case_of(pp(11)), CaseClass::QPlus);
    }

    #[test]
    fn exceptional_quartic_over_f2() {
        let w = weil(&[4, 0, -1, 0, 1], 2);
        let r = cyclicity_report(&w).unwrap();
        assert_eq!(r.f1, BigInt::from(4));
        assert_eq!(r.fp1, BigInt::from(2));
        assert_eq!(r.witnesses, vec![BigInt::from(2)]);
        assert!(!r.is_cyclic);
    }

    #[test]
    fn cyclic_elliptic_class() {
        let w = weil(&[2, -1, 1], 2);
        let r = cyclicity_report(&w).unwrap();
        assert_eq!(r.f1, BigInt::from(2));
        assert_eq!(r.fp1, BigInt::from(1));
        assert!(r.witnesses.is_empty());
        assert!(r.is_cyclic);
    }

    #[test]
    fn table_row_witness_three() {
        let h = IntPoly::from_i64(&[-18, 0, 1]);
        let w = expand_h_to_f(&h, pp(5)).unwrap();
        let r = cyclicity_report(&w).unwrap();
        assert_eq!(r.f1, BigInt::from(18));
        assert_eq!(r.fp1, BigInt::from(-12));
        assert_eq!(r.witnesses, vec![BigInt::from(3)]);
        assert!(!r.is_cyclic);
    }

    #[test]
    fn case_conditions_on_table_rows() {
        let h = IntPoly::from_i64(&[-18, 0, 1]);
        assert!(h_case_conditions(&h, CaseClass::QPlus));
        assert!(!h_case_conditions(&h, CaseClass::QMinus));
        let h = IntPoly::from_i64(&[-11, -1, 1]);
        assert!(h_case_conditions(&h, CaseClass::QMinus));
    }

    #[test]
    fn radical_quotient_identity() {
        let w = weil(&[4, 0, -1, 0, 1], 2);
        let r = cyclicity_report(&w).unwrap();
        assert_eq!(&r.rad_f1 * &r.hat_f1, r.f1);
    }
}
