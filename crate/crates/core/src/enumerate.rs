//! Exhaustive desk-scale enumeration of q-Weil polynomials.
//!
//! Enumeration runs on the trace side: all monic integer `h` of degree
//! `g` that are totally real with root squares at most `4q` (closed
//! bound, so the degenerate real-root Weil polynomials are included).
//! Coefficients are chosen from high degree down; the range of each is
//! pinned by power-sum bounds through Newton's identities, and every
//! prefix is pruned by a Sturm check on the derivative it determines
//! (Rolle: any derivative of a totally real polynomial is totally real,
//! with roots inside the same interval). The final level is the full
//! polynomial, so the filter is exact, not heuristic.
//!
//! Enumerated polynomials include non-squarefree `h` (isogeny classes of
//! products), so the classification sees every class, simple or not.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::certificate::Realizability;
use crate::cyclicity::{cyclicity_report, CyclicityReport};
use crate::intpoly::{is_irreducible_q, is_totally_real_within_sq, IntPoly};
use crate::weil::{expand_h_to_f, is_ordinary, PrimePower, WeilPoly};

/// Desk-scale guard for plain enumeration calls.
pub const MAX_G: usize = 4;
pub const MAX_Q: u64 = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumError {
    #[error("enumeration guard: g <= {MAX_G} and q <= {MAX_Q} (pass the override to exceed)")]
    ScaleGuard,
    #[error("classification guard: only the exceptional pairs run without the override")]
    ClassifyGuard,
}

/// All monic integer `h` of degree `g`, totally real with root squares at
/// most `4q`, in lexicographic coefficient order (descending degree,
/// ascending value).
pub fn enumerate_real_weil(g: usize, q: PrimePower) -> Result<Vec<IntPoly>, EnumError> {
    if g > MAX_G || q.q() > MAX_Q {
        return Err(EnumError::ScaleGuard);
    }
    Ok(enumerate_real_weil_unguarded(g, q))
}

/// The enumeration without the desk-scale guard.
pub fn enumerate_real_weil_unguarded(g: usize, q: PrimePower) -> Vec<IntPoly> {
    assert!(g >= 1);
    let four_q = BigInt::from(4 * q.q() as u128);
    let mut out = Vec::new();
    let mut coeffs = vec![BigInt::zero(); g + 1]; // a_0 .. a_g, a_g = 1
    coeffs[g] = BigInt::from(1);
    let mut power_sums = vec![BigInt::from(g as i64)]; // p_0 = g
    descend(g, q, &four_q, 1, &mut coeffs, &mut power_sums, &mut out);
    out
}

/// Integer square root floor of a nonnegative BigInt.
fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Choose `a_{g-k}` at level `k`, given `a_{g-1} .. a_{g-k+1}` and the
/// exact power sums `p_0 .. p_{k-1}` of any root multiset realizing them.
fn descend(
    g: usize,
    q: PrimePower,
    four_q: &BigInt,
    k: usize,
    coeffs: &mut Vec<BigInt>,
    power_sums: &mut Vec<BigInt>,
    out: &mut Vec<IntPoly>,
) {
    // Bounds on p_k for g roots in [-2 sqrt q, 2 sqrt q].
    let (p_lo, p_hi) = if k % 2 == 1 {
        // |p_k| <= 2 sqrt(q) * p_{k-1} (p_{k-1} is an even-power sum).
        let prev = &power_sums[k - 1];
        let hi = isqrt(&(four_q * prev * prev));
        (-hi.clone(), hi)
    } else {
        // 0 <= p_k <= 4q * p_{k-2}, and p_{k-2}^2 <= p_k * p_{k-4}
        // (Cauchy-Schwarz), with p_0 = g.
        let prev = &power_sums[k - 2];
        let hi = four_q * prev;
        let lo = if k >= 4 && !power_sums[k - 4].is_zero() {
            let num = prev * prev;
            let den = &power_sums[k - 4];
            // ceiling division of a nonnegative quotient
            (&num + den - 1) / den
        } else if k == 2 {
            // p_2 >= p_1^2 / g
            let p1 = &power_sums[1];
            let gg = BigInt::from(g as i64);
            (p1 * p1 + &gg - 1) / &gg
        } else {
            BigInt::zero()
        };
        (lo, hi)
    };
    // Newton: p_k + sum_{i=1}^{k-1} a_{g-i} p_{k-i} + k a_{g-k} = 0.
    let mixed: BigInt = (1..k).map(|i| &coeffs[g - i] * &power_sums[k - i]).sum();
    let kk = BigInt::from(k as i64);
    // a_{g-k} ranges over [-(p_hi + mixed)/k, -(p_lo + mixed)/k].
    let a_lo = div_ceil_big(&(-&p_hi - &mixed), &kk);
    let a_hi = div_floor_big(&(-&p_lo - &mixed), &kk);
    let mut a = a_lo;
    while a <= a_hi {
        coeffs[g - k] = a.clone();
        let p_k = -(&mixed + &kk * &a);
        power_sums.push(p_k);
        // Rolle prune: the (g-k)-th derivative is already determined.
        let w = prefix_derivative(coeffs, g, k);
        if is_totally_real_within_sq(&w, &crate::weil::PrimePower::four_q(&q)) {
            if k == g {
                out.push(IntPoly::new(coeffs.clone()));
            } else {
                descend(g, q, four_q, k + 1, coeffs, power_sums, out);
            }
        }
        power_sums.pop();
        a += 1;
    }
    coeffs[g - k] = BigInt::zero();
}

/// The `(g-k)`-th derivative of the final polynomial, which only involves
/// the already-chosen coefficients `a_{g-k} .. a_g`.
fn prefix_derivative(coeffs: &[BigInt], g: usize, k: usize) -> IntPoly {
    let d = g - k;
    let mut w = Vec::with_capacity(k + 1);
    for m in 0..=k {
        // coefficient of x^m comes from a_{m+d} * (m+d)!/m!
        let mut factor = BigInt::from(1);
        for t in m + 1..=m + d {
            factor *= BigInt::from(t as i64);
        }
        w.push(&coeffs[m + d] * factor);
    }
    IntPoly::new(w)
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_floor(b)
}

fn div_ceil_big(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_ceil(b)
}

/// The q-Weil polynomials of degree `2g`: the expansion of the real-Weil
/// enumeration.
pub fn enumerate_weil(g: usize, q: PrimePower) -> Result<Vec<WeilPoly>, EnumError> {
    let hs = enumerate_real_weil(g, q)?;
    Ok(expand_all(hs, q))
}

pub fn enumerate_weil_unguarded(g: usize, q: PrimePower) -> Vec<WeilPoly> {
    expand_all(enumerate_real_weil_unguarded(g, q), q)
}

fn expand_all(hs: Vec<IntPoly>, q: PrimePower) -> Vec<WeilPoly> {
    hs.iter()
        .map(|h| expand_h_to_f(h, q).expect("enumerated h satisfies the root bound"))
        .collect()
}

/// One non-cyclic class found by the classification.
#[derive(Clone, Debug)]
pub struct NoncyclicClass {
    pub weil: WeilPoly,
    pub report: CyclicityReport,
    pub irreducible: bool,
    pub ordinary: bool,
    pub realizability: Realizability,
}

/// The outcome of classifying every enumerated class for one `(g, q)`.
#[derive(Clone, Debug)]
pub struct EnumerationResult {
    pub g: usize,
    pub q: u64,
    pub total_weil: usize,
    pub noncyclic: Vec<NoncyclicClass>,
    /// How many non-cyclic classes each witness prime appears in.
    pub witness_prime_profile: BTreeMap<BigInt, usize>,
}

/// Run the cyclicity report over every enumerated Weil polynomial and
/// collect the non-cyclic ones. Plain calls are restricted to the three
/// exceptional pairs; `allow_large` lifts both guards.
pub fn classify_noncyclic(
    g: usize,
    q: PrimePower,
    allow_large: bool,
) -> Result<EnumerationResult, EnumError> {
    if !allow_large && !crate::hsearch::is_exceptional_pair(g, q.q()) {
        return Err(EnumError::ClassifyGuard);
    }
    if !allow_large && (g > MAX_G || q.q() > MAX_Q) {
        return Err(EnumError::ScaleGuard);
    }
    let all = enumerate_weil_unguarded(g, q);
    let total_weil = all.len();
    let noncyclic: Vec<NoncyclicClass> = all
        .into_par_iter()
        .filter_map(|w| {
            let report = cyclicity_report(&w).expect("enumerated Weil polynomial");
            if report.is_cyclic {
                return None;
            }
            let irreducible = is_irreducible_q(w.f());
            let ordinary = is_ordinary(&w.trace(), w.q());
            let realizability = if irreducible && ordinary {
                Realizability::HondaTateOrdinary
            } else {
                Realizability::Unverified
            };
            Some(NoncyclicClass {
                weil: w,
                report,
                irreducible,
                ordinary,
                realizability,
            })
        })
        .collect();
    let mut witness_prime_profile = BTreeMap::new();
    for c in &noncyclic {
        for w in &c.report.witnesses {
            *witness_prime_profile.entry(w.clone()).or_insert(0) += 1;
        }
    }
    Ok(EnumerationResult {
        g,
        q: q.q(),
        total_weil,
        noncyclic,
        witness_prime_profile,
    })
}
