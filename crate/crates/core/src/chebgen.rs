//! The scaled-Chebyshev construction of non-cyclic classes for `g >= 14`.
//!
//! `T_i(x) = 2^(1+i/2) C_i(x / 2^(3/2))` where `C_i(cos t) = cos(i t)`.
//! These satisfy `T_0 = 1` (basis convention; the recurrence value at
//! index 0 is 2), `T_1 = x`, `T_2 = x^2 - 4`, `T_{i+1} = x T_i - 2
//! T_{i-1}`, reduce to `x^i` mod 2, and have all roots real in
//! `[-2 sqrt(2), 2 sqrt(2)]`.
//!
//! The pipeline: find `a_s..a_g` in {0,1} (s = 4) whose GF(2) image
//! `x^g + a_s x^(g-s) + ... + a_g` is irreducible; shift `a_{g-1}`,
//! `a_{g-2}`, `a_g` by even amounts to force `3 | h'(n)` and `9 | h(n)`
//! at the case point `n`, keeping the mod-2 reduction fixed; shift `a_g`
//! by +-18 if `h(0)` shares a factor with `q`; certify the weighted
//! coefficient sum below 1, which pins every root square below 8 (also
//! re-verified directly by Sturm counts), and hand the trace polynomial
//! to the certificate builder.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::certificate::{build_from_trace, Certificate, CertifyError, ChebConstruction, Provenance};
use crate::cyclicity::{case_of, h_case_conditions, CaseClass};
use crate::intpoly::{is_irreducible_gf2, is_totally_real_within_sq, Gf2Poly, IntPoly};
use crate::weil::PrimePower;

/// The default number of leading coefficients pinned to zero (`a_1 ..
/// a_{s-1} = 0`); the weighted-sum bound is below 1 exactly for `s = 4`
/// and `g >= 14`.
pub const DEFAULT_S: usize = 4;

/// Scaled Chebyshev polynomial `T_i`.
pub fn cheb(i: usize) -> IntPoly {
    ChebBasis::up_to(i).polys[i].clone()
}

/// The basis `T_0 .. T_n`.
pub struct ChebBasis {
    pub polys: Vec<IntPoly>,
}

impl ChebBasis {
    pub fn up_to(n: usize) -> ChebBasis {
        // Recurrence runs on the analytic values (index 0 is 2); the
        // stored basis element T_0 is 1.
        let mut rec: Vec<IntPoly> = vec![IntPoly::constant(BigInt::from(2)), IntPoly::x()];
        for i in 2..=n.max(1) {
            let next = &(&IntPoly::x() * &rec[i - 1]) - &rec[i - 2].scale(&BigInt::from(2));
            rec.push(next);
        }
        rec[0] = IntPoly::one();
        rec.truncate(n + 1);
        ChebBasis { polys: rec }
    }
}

/// A candidate `T_g + a_s T_{g-s} + ... + a_g T_0`; `a[j]` holds
/// `a_{s+j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateForm {
    pub g: usize,
    pub s: usize,
    pub a: Vec<i64>,
}

impl CandidateForm {
    fn coeff(&self, j: usize) -> i64 {
        debug_assert!((self.s..=self.g).contains(&j));
        self.a[j - self.s]
    }

    fn coeff_mut(&mut self, j: usize) -> &mut i64 {
        debug_assert!((self.s..=self.g).contains(&j));
        let s = self.s;
        &mut self.a[j - s]
    }

    /// Assemble the integer polynomial in the Chebyshev basis.
    pub fn assemble(&self) -> IntPoly {
        let basis = ChebBasis::up_to(self.g);
        let mut h = basis.polys[self.g].clone();
        for j in self.s..=self.g {
            let c = self.coeff(j);
            if c != 0 {
                h = &h + &basis.polys[self.g - j].scale(&BigInt::from(c));
            }
        }
        h
    }
}

#[derive(Debug, Error)]
pub enum ChebError {
    #[error("construction requires g >= 14, got {0}")]
    DimensionTooSmall(usize),
    #[error("no irreducible GF(2) seed in the search space for g = {0}")]
    SeedNotFound(usize),
    #[error("construction failed at check: {0}")]
    ConstructionFailed(&'static str),
    #[error("construction replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Find the lexicographically first `(a_s, ..., a_{g-1})` in {0,1} (with
/// `a_g = 1`, forced by irreducibility) whose GF(2) image is irreducible.
/// Irreducibles of degree g have density about 1/g among these sparse
/// polynomials, so the first hit comes within a handful of candidates;
/// the cap below is a loud failure channel, not a tuning knob.
pub fn find_f2_seed(g: usize, s: usize) -> Result<CandidateForm, ChebError> {
    assert!(s >= 1 && s < g);
    let free = g - s; // a_s .. a_{g-1}
    let space: u64 = if free >= 63 { u64::MAX } else { 1u64 << free };
    let limit = space.min(1 << 24);
    for mask in 0u64..limit {
        let mut a = Vec::with_capacity(free + 1);
        for j in 0..free {
            // Lexicographic order with a_s the most significant position;
            // positions beyond the counter width stay zero.
            let shift = free - 1 - j;
            a.push(if shift < 64 { ((mask >> shift) & 1) as i64 } else { 0 });
        }
        a.push(1); // a_g
        let mut bits = Gf2Poly::zero();
        bits.set_bit(g);
        for (j, &c) in a.iter().enumerate() {
            if c == 1 {
                bits.set_bit(g - (s + j));
            }
        }
        if is_irreducible_gf2(&bits) {
            return Ok(CandidateForm { g, s, a });
        }
    }
    Err(ChebError::SeedNotFound(g))
}

/// The recorded coefficient shifts of an adjustment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AdjustDeltas {
    pub a_g_minus_1: i64,
    pub a_g_minus_2: i64,
    pub a_g: i64,
}

/// Deltas for `a_{g-1}` indexed by `h'(n) mod 3`.
const DELTA_GM1: [i64; 3] = [0, 2, -2];
/// Deltas for `a_g` indexed by `h(n) mod 9` (general case).
const DELTA_G: [i64; 9] = [0, 8, -2, 6, -4, 4, -6, 2, -8];
/// `(delta a_g, delta a_{g-2})` indexed by `(h(0) mod 3, h(1) mod 9)` for
/// `q = 3^r`; each entry restores `9 | h(1)` and leaves `3` not dividing
/// `h(0)`.
const QTHREE_TABLE: [[(i64, i64); 9]; 3] = [
    [(6, 2), (8, 0), (-2, 0), (-6, 2), (-4, 0), (4, 0), (0, 2), (2, 0), (-8, 0)],
    [(0, 0), (-4, 2), (-2, 0), (6, 0), (2, 2), (4, 0), (-6, 0), (8, 2), (-8, 0)],
    [(0, 0), (8, 0), (4, 2), (6, 0), (-4, 0), (-8, 2), (-6, 0), (2, 0), (-2, 2)],
];

fn residue(v: &BigInt, m: i64) -> usize {
    use num_traits::ToPrimitive;
    v.mod_floor(&BigInt::from(m)).to_usize().expect("small residue")
}

/// Force `3 | h'(n)` and `9 | h(n)` at the case's evaluation point by
/// even shifts of the trailing coefficients, preserving the mod-2 image.
/// For `q = 3^r` the pair table for `(a_g, a_{g-2})` also forces
/// `3` away from `h(0)`; because an `a_{g-2}` shift moves `h'(1)` by
/// twice the shift, the table is applied inside a fixpoint loop (at most
/// three rounds, by case analysis on the column-2 and column-5 entries).
pub fn adjust_for_case(cand: &CandidateForm, case: CaseClass) -> (CandidateForm, AdjustDeltas) {
    let mut cand = cand.clone();
    let mut deltas = AdjustDeltas::default();
    let g = cand.g;
    match case {
        CaseClass::QPlus | CaseClass::QMinus => {
            let n = case.eval_point();
            let h = cand.assemble();
            let d1 = DELTA_GM1[residue(&h.derivative().eval_i64(n), 3)];
            *cand.coeff_mut(g - 1) += d1;
            deltas.a_g_minus_1 += d1;
            let h = cand.assemble();
            let d0 = DELTA_G[residue(&h.eval_i64(n), 9)];
            *cand.coeff_mut(g) += d0;
            deltas.a_g += d0;
        }
        CaseClass::QThree => {
            let three = BigInt::from(3);
            let nine = BigInt::from(9);
            let mut rounds = 0;
            loop {
                rounds += 1;
                assert!(rounds <= 8, "q = 3^r adjustment failed to converge");
                let h = cand.assemble();
                let dp = h.derivative().eval_i64(1);
                if !dp.mod_floor(&three).is_zero() {
                    // Candidates for the needed residue, smallest shift
                    // first; the alternative keeps |a_{g-1}| <= 3 when
                    // the first would overflow.
                    let r = residue(&dp, 3);
                    let options: [i64; 2] = match r {
                        1 => [2, -4],
                        2 => [-2, 4],
                        _ => [0, 0],
                    };
                    let cur = cand.coeff(g - 1);
                    let d = if (cur + options[0]).abs() <= 3 {
                        options[0]
                    } else {
                        options[1]
                    };
                    *cand.coeff_mut(g - 1) += d;
                    deltas.a_g_minus_1 += d;
                }
                let h = cand.assemble();
                let h1 = h.eval_i64(1);
                let h0 = h.eval_i64(0);
                if h1.mod_floor(&nine).is_zero()
                    && !h0.mod_floor(&three).is_zero()
                    && h.derivative().eval_i64(1).mod_floor(&three).is_zero()
                {
                    break;
                }
                let (dg, dg2) = QTHREE_TABLE[residue(&h0, 3)][residue(&h1, 9)];
                *cand.coeff_mut(g) += dg;
                deltas.a_g += dg;
                *cand.coeff_mut(g - 2) += dg2;
                deltas.a_g_minus_2 += dg2;
                // Renormalize a_{g-2} into [-3, 3]; a step of 6 is
                // invisible to all three conditions and to the mod-2
                // image.
                if cand.coeff(g - 2) > 3 {
                    *cand.coeff_mut(g - 2) -= 6;
                    deltas.a_g_minus_2 -= 6;
                }
            }
        }
    }
    debug_assert!(cand.coeff(g - 1).abs() <= 3);
    debug_assert!(cand.coeff(g - 2).abs() <= 3);
    debug_assert!(cand.coeff(g).abs() <= 17);
    (cand, deltas)
}

/// Shift `a_g` by +-18 if `h(0)` shares a factor with `q`, choosing the
/// sign that keeps `|a_g| <= 17`. Returns the applied shift.
pub fn coprimality_fix(cand: &mut CandidateForm, q: PrimePower) -> i64 {
    let h = cand.assemble();
    if h.coeff(0).gcd(&q.q_big()).is_one() {
        return 0;
    }
    let g = cand.g;
    let shift = if cand.coeff(g) + 18 <= 17 { 18 } else { -18 };
    *cand.coeff_mut(g) += shift;
    shift
}

/// An exact certified evaluation of the weighted coefficient sum
/// `sum_{i=s}^{g-1} |a_i| / 2^(i/2) + |a_g| / (2 * 2^(g/2))`.
#[derive(Clone, Debug, PartialEq)]
pub struct HoweBound {
    /// A rational upper bound on the sum.
    pub upper: BigRational,
    /// Exact comparison of the sum against 1.
    pub less_than_one: bool,
}

/// Certify the weighted coefficient sum of a candidate against 1. The sum
/// is `A + B/sqrt(2)` with rational `A, B >= 0`; `A + B/sqrt(2) < 1` iff
/// `A < 1` and `B^2 < 2 (1-A)^2`, which is decided exactly. The reported
/// upper bound replaces `1/sqrt(2)` by `577/816` (which exceeds it).
pub fn howe_bound(cand: &CandidateForm) -> HoweBound {
    let mut a_part = BigRational::zero(); // rational terms
    let mut b_part = BigRational::zero(); // coefficient of 1/sqrt(2)
    let add = |acc: &mut BigRational, num: i64, pow: usize| {
        *acc += BigRational::new(BigInt::from(num.abs()), BigInt::one() << pow);
    };
    let g = cand.g;
    for j in cand.s..g {
        let c = cand.coeff(j);
        if c == 0 {
            continue;
        }
        if j % 2 == 0 {
            add(&mut a_part, c, j / 2);
        } else {
            add(&mut b_part, c, (j - 1) / 2);
        }
    }
    let ag = cand.coeff(g);
    if ag != 0 {
        if g.is_multiple_of(2) {
            add(&mut a_part, ag, g / 2 + 1);
        } else {
            add(&mut b_part, ag, g.div_ceil(2));
        }
    }
    let one = BigRational::one();
    let less_than_one = a_part < one && {
        let gap = &one - &a_part;
        &b_part * &b_part < BigRational::from_integer(BigInt::from(2)) * &gap * &gap
    };
    // 577/816 > 1/sqrt(2): 577^2 * 2 = 665858 > 665856 = 816^2.
    let inv_sqrt2_upper = BigRational::new(BigInt::from(577), BigInt::from(816));
    HoweBound {
        upper: a_part + b_part * inv_sqrt2_upper,
        less_than_one,
    }
}

/// Eight as a rational: the root-square bound for the Chebyshev basis.
fn eight() -> BigRational {
    BigRational::from_integer(BigInt::from(8))
}

/// Full construction for `g >= 14`: seed, adjust, fix coprimality, verify
/// every predicate independently, and certify. The weighted-sum bound
/// guarantees roots stay within `[-2 sqrt 2, 2 sqrt 2]`, which makes the
/// result valid for every `q >= 2`; reality is still re-verified by Sturm
/// counts rather than trusted.
///
/// ```
/// use noncyc_core::chebgen::construct_large_g;
/// use noncyc_core::PrimePower;
///
/// let cert = construct_large_g(14, PrimePower::new(2)?)?;
/// assert!(cert.cyclicity.witnesses.contains(&"3".to_string()));
/// noncyc_core::certificate::reverify(&cert)?;
/// # Ok::<(), Box<dyn std::error::Error>>(())
/// ```
pub fn construct_large_g(g: usize, q: PrimePower) -> Result<Certificate, ChebError> {
    if g < 14 {
        return Err(ChebError::DimensionTooSmall(g));
    }
    let case = case_of(q);
    let seed = find_f2_seed(g, DEFAULT_S)?;
    let seed_bits: Vec<u8> = seed.a.iter().map(|&c| c as u8).collect();
    let (mut cand, deltas) = adjust_for_case(&seed, case);
    let coprimality_shift = coprimality_fix(&mut cand, q);
    if case == CaseClass::QThree {
        assert_eq!(coprimality_shift, 0, "q = 3^r adjustment already forces coprimality");
    }
    let bound = howe_bound(&cand);
    if !bound.less_than_one {
        return Err(ChebError::ConstructionFailed("howe_bound_below_one"));
    }
    let h = cand.assemble();
    // The mod-2 image must still be the irreducible seed, so the mod-2
    // fast path of the rational irreducibility test fires.
    let h2 = Gf2Poly::from_intpoly(&h);
    let mut expected = Gf2Poly::zero();
    expected.set_bit(g);
    for (j, &c) in seed.a.iter().enumerate() {
        if c == 1 {
            expected.set_bit(g - (DEFAULT_S + j));
        }
    }
    if h2 != expected || !is_irreducible_gf2(&h2) {
        return Err(ChebError::ConstructionFailed("mod2_reduction_irreducible"));
    }
    if !is_totally_real_within_sq(&h, &eight()) {
        return Err(ChebError::ConstructionFailed("roots_within_8"));
    }
    if !h_case_conditions(&h, case) {
        return Err(ChebError::ConstructionFailed("case_conditions"));
    }
    if !h.coeff(0).gcd(&q.q_big()).is_one() {
        return Err(ChebError::ConstructionFailed("h0_coprime_q"));
    }
    let construction = ChebConstruction {
        s: DEFAULT_S,
        seed: seed_bits,
        delta_a_g_minus_1: deltas.a_g_minus_1,
        delta_a_g_minus_2: deltas.a_g_minus_2,
        delta_a_g: deltas.a_g + coprimality_shift,
        coprimality_shift,
        howe_bound_upper: bound.upper.to_string(),
        howe_bound_less_than_one: bound.less_than_one,
    };
    Ok(build_from_trace(&h, q, Provenance::Chebyshev, Some(construction))?)
}

/// Replay a recorded construction: rebuild the candidate from the seed
/// and deltas, and require it to reproduce `h`, an irreducible seed, the
/// preserved mod-2 image, and the recorded bound.
pub fn replay_construction(
    c: &ChebConstruction,
    g: usize,
    h: &IntPoly,
) -> Result<(), ChebError> {
    let mismatch = |m: &str| Err(ChebError::ReplayMismatch(m.to_string()));
    if c.s < 1 || c.s >= g || c.seed.len() != g - c.s + 1 {
        return mismatch("seed shape");
    }
    if c.seed.iter().any(|&b| b > 1) || *c.seed.last().unwrap() != 1 {
        return mismatch("seed bits");
    }
    let seed = CandidateForm {
        g,
        s: c.s,
        a: c.seed.iter().map(|&b| b as i64).collect(),
    };
    let mut bits = Gf2Poly::zero();
    bits.set_bit(g);
    for (j, &b) in c.seed.iter().enumerate() {
        if b == 1 {
            bits.set_bit(g - (c.s + j));
        }
    }
    if !is_irreducible_gf2(&bits) {
        return mismatch("seed not irreducible over GF(2)");
    }
    let mut cand = seed;
    *cand.coeff_mut(g - 1) += c.delta_a_g_minus_1;
    *cand.coeff_mut(g - 2) += c.delta_a_g_minus_2;
    *cand.coeff_mut(g) += c.delta_a_g;
    if [c.delta_a_g_minus_1, c.delta_a_g_minus_2, c.delta_a_g, c.coprimality_shift]
        .iter()
        .any(|d| d % 2 != 0)
    {
        return mismatch("deltas must be even");
    }
    if cand.coeff(g - 1).abs() > 3 || cand.coeff(g - 2).abs() > 3 || cand.coeff(g).abs() > 17 {
        return mismatch("coefficient extremes");
    }
    if &cand.assemble() != h {
        return mismatch("assembled polynomial");
    }
    if Gf2Poly::from_intpoly(h) != bits {
        return mismatch("mod-2 image");
    }
    let bound = howe_bound(&cand);
    if !bound.less_than_one || !c.howe_bound_less_than_one {
        return mismatch("weighted-sum bound not below 1");
    }
    if bound.upper.to_string() != c.howe_bound_upper {
        return mismatch("recorded bound value");
    }
    Ok(())
}
