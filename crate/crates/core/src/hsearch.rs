//! The built-in table of trace polynomials for `2 <= g <= 13`, its
//! verification, a bounded search for replacement polynomials, and
//! certificate construction for small dimensions including the three
//! exceptional pairs `(2, F_2)`, `(2, F_3)`, `(3, F_2)`.
//!
//! The table ships as a JSON resource. Rows marked `table` mirror the
//! published list; the one row marked `supplement` covers `g = 2` over
//! `q = 2^r >= 8` in the `3 | q+1` case, where the published row
//! `x^2 - 18` has an even constant term and so fails ordinariness.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::certificate::{build_exceptional, build_from_trace, Certificate, CertifyError, Provenance};
use crate::cyclicity::{case_of, h_case_conditions, CaseClass};
use crate::intpoly::sturm::max_abs_root_approx;
use crate::intpoly::{
    count_real_roots, is_irreducible_q, is_totally_real_within_sq, Endpoint, IntPoly,
};
use crate::weil::PrimePower;

/// Where a table row comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSource {
    /// Printed in the published tables.
    Table,
    /// Added here to close an ordinariness gap (see module docs).
    Supplement,
}

/// One row of the trace-polynomial table.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub g: usize,
    pub h: IntPoly,
    pub case: CaseClass,
    /// Printed maximum of |root| to three decimals, as an exact rational.
    pub claimed_max_root: BigRational,
    pub valid_from_q: u64,
    pub h0_primes: Vec<u64>,
    pub source: RowSource,
}

impl TableEntry {
    /// The row as a validated trace polynomial with its serving range.
    pub fn real_weil(&self) -> Result<crate::weil::RealWeil, crate::weil::WeilError> {
        crate::weil::RealWeil::new(
            self.h.clone(),
            self.case,
            self.valid_from_q,
            BigRational::from_integer(BigInt::from(4 * self.valid_from_q as u128)),
        )
    }
}

#[derive(Deserialize)]
struct RawRow {
    g: usize,
    h: Vec<String>,
    case: CaseClass,
    max_root: String,
    valid_from_q: u64,
    h0_primes: Vec<u64>,
    source: RowSource,
}

#[derive(Deserialize)]
struct RawTable {
    rows: Vec<RawRow>,
}

fn parse_decimal(s: &str) -> BigRational {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let digits: String = format!("{}{}", int_part, frac_part);
    let num: BigInt = digits.parse().expect("decimal digits");
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    BigRational::new(num, den)
}

/// The embedded table, parsed once.
pub fn h_table() -> &'static [TableEntry] {
    static TABLE: OnceLock<Vec<TableEntry>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let raw: RawTable =
            serde_json::from_str(include_str!("../resources/h_tables.json")).expect("table JSON");
        raw.rows
            .into_iter()
            .map(|r| {
                // `valid_from_q` must itself be a prime power of the
                // row's own case.
                let q = PrimePower::new(r.valid_from_q).expect("valid_from_q is a prime power");
                assert_eq!(case_of(q), r.case, "valid_from_q case for g = {}", r.g);
                TableEntry {
                    g: r.g,
                    h: IntPoly::from_dec_strings(&r.h).expect("table coefficients"),
                    case: r.case,
                    claimed_max_root: parse_decimal(&r.max_root),
                    valid_from_q: r.valid_from_q,
                    h0_primes: r.h0_primes,
                    source: r.source,
                }
            })
            .collect()
    })
}

/// The exceptional Weil polynomials, keyed by `(g, q)`.
pub fn exceptional_classes(g: usize, q: u64) -> Vec<IntPoly> {
    #[derive(Deserialize)]
    struct RawClass {
        g: usize,
        q: u64,
        f: Vec<String>,
    }
    #[derive(Deserialize)]
    struct RawClasses {
        classes: Vec<RawClass>,
    }
    static CLASSES: OnceLock<Vec<(usize, u64, IntPoly)>> = OnceLock::new();
    CLASSES
        .get_or_init(|| {
            let raw: RawClasses =
                serde_json::from_str(include_str!("../resources/exceptions.json"))
                    .expect("exceptions JSON");
            raw.classes
                .into_iter()
                .map(|c| {
                    (
                        c.g,
                        c.q,
                        IntPoly::from_dec_strings(&c.f).expect("class coefficients"),
                    )
                })
                .collect()
        })
        .iter()
        .filter(|(cg, cq, _)| *cg == g && *cq == q)
        .map(|(_, _, f)| f.clone())
        .collect()
}

/// The three `(g, q)` pairs with no non-3-cyclic simple class.
pub const EXCEPTIONAL_PAIRS: [(usize, u64); 3] = [(2, 2), (2, 3), (3, 2)];

pub fn is_exceptional_pair(g: usize, q: u64) -> bool {
    EXCEPTIONAL_PAIRS.contains(&(g, q))
}

/// Outcome of checking one table row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableVerification {
    pub degree_matches: bool,
    pub irreducible: bool,
    pub totally_real: bool,
    /// max |root| within 5e-4 of the printed value.
    pub max_root_matches: bool,
    /// printed value squared is at most `4 * valid_from_q`.
    pub root_bound_ok: bool,
    pub case_conditions: bool,
    pub h0_primes_match: bool,
}

impl TableVerification {
    pub fn all_pass(&self) -> bool {
        self.degree_matches
            && self.irreducible
            && self.totally_real
            && self.max_root_matches
            && self.root_bound_ok
            && self.case_conditions
            && self.h0_primes_match
    }
}

/// Re-derive every printed column of a table row.
pub fn verify_table_entry(e: &TableEntry) -> TableVerification {
    let degree_matches = e.h.degree() == Some(e.g);
    let irreducible = is_irreducible_q(&e.h);
    let distinct = count_real_roots(&e.h, Endpoint::NegInf, Endpoint::PosInf).count;
    let totally_real = distinct == e.h.squarefree_part().deg_or_zero();
    let eps = BigRational::new(BigInt::one(), BigInt::from(10_000_000));
    let max_root_matches = match max_abs_root_approx(&e.h, &eps) {
        Ok(m) => {
            let tol = BigRational::new(BigInt::from(5), BigInt::from(10_000));
            (m - &e.claimed_max_root).abs() <= tol
        }
        Err(_) => false,
    };
    let root_bound_ok = &e.claimed_max_root * &e.claimed_max_root
        <= BigRational::from_integer(BigInt::from(4 * e.valid_from_q as u128));
    let case_conditions = h_case_conditions(&e.h, e.case);
    let h0 = e.h.coeff(0);
    let h0_primes: Vec<u64> = if h0.abs().is_one() {
        Vec::new()
    } else {
        use num_traits::ToPrimitive;
        crate::intpoly::integer::factorize(&h0)
            .primes()
            .map(|p| p.to_u64().unwrap_or(u64::MAX))
            .collect()
    };
    let h0_primes_match = h0_primes == e.h0_primes;
    TableVerification {
        degree_matches,
        irreducible,
        totally_real,
        max_root_matches,
        root_bound_ok,
        case_conditions,
        h0_primes_match,
    }
}

#[derive(Debug, Error)]
pub enum HsearchError {
    #[error("dimension g = {0} is outside 2..=13")]
    DimensionOutOfRange(usize),
    #[error("({0}, F_{1}) is an exceptional pair; use the exceptional classes")]
    ExceptionalCase(usize, u64),
    #[error("({0}, F_{1}) is not an exceptional pair")]
    NotExceptional(usize, u64),
    #[error("no table row applies to (g = {0}, q = {1})")]
    NoValidEntry(usize, u64),
    #[error("bounded search exhausted without a valid polynomial")]
    NotFound,
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Search for a trace polynomial of degree `g` for the given case:
/// irreducible, totally real with root squares at most `4 * q_floor`,
/// satisfying the case divisibilities, with `h(0)` nonzero and coprime to
/// `q_floor`. Candidates come from {0,1}-perturbations of the scaled
/// Chebyshev basis and, for small `g`, bounded coefficient enumeration;
/// the result minimizes the maximum |root| (ties broken by coefficients).
pub fn find_h(
    g: usize,
    case: CaseClass,
    coeff_bound: i64,
    q_floor: u64,
) -> Result<IntPoly, HsearchError> {
    assert!(coeff_bound >= 1 && g >= 1);
    let bound_sq = BigRational::from_integer(BigInt::from(4 * q_floor as u128));
    let q_floor_big = BigInt::from(q_floor);
    let mut candidates: Vec<IntPoly> = Vec::new();
    let mut consider = |h: IntPoly| {
        if h.degree() != Some(g) {
            return;
        }
        let h0 = h.coeff(0);
        if h0.is_zero() || !h0.gcd(&q_floor_big).is_one() {
            return;
        }
        if !h_case_conditions(&h, case) {
            return;
        }
        if !is_totally_real_within_sq(&h, &bound_sq) {
            return;
        }
        if !is_irreducible_q(&h) {
            return;
        }
        candidates.push(h);
    };
    // Chebyshev perturbations: T_g + sum a_i T_{g-i}, a_i in {0,1}, then
    // the trailing-coefficient adjustment used by the large-g pipeline.
    if 4 * q_floor >= 8 && g > crate::chebgen::DEFAULT_S {
        if let Ok(seed) = crate::chebgen::find_f2_seed(g, crate::chebgen::DEFAULT_S) {
            let (adjusted, _) = crate::chebgen::adjust_for_case(&seed, case);
            consider(adjusted.assemble());
        }
    }
    // Bounded coefficient enumeration for small search spaces.
    let width = 2 * coeff_bound as u128 + 1;
    let space: u128 = width.checked_pow(g as u32).unwrap_or(u128::MAX);
    if space <= 5_000_000 {
        let mut coeffs = vec![-coeff_bound; g];
        loop {
            let mut v: Vec<i64> = coeffs.clone();
            v.push(1);
            consider(IntPoly::from_i64(&v));
            let mut i = 0;
            loop {
                if i == g {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] <= coeff_bound {
                    break;
                }
                coeffs[i] = -coeff_bound;
                i += 1;
            }
            if i == g {
                break;
            }
        }
    }
    if candidates.is_empty() {
        return Err(HsearchError::NotFound);
    }
    let eps = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
    candidates.sort_by_cached_key(|h| {
        let root = max_abs_root_approx(h, &eps).expect("candidate has real roots");
        (root, h.coeffs().to_vec())
    });
    Ok(candidates.swap_remove(0))
}

/// Select the table row for `(g, q)`: matching case, `valid_from_q <= q`,
/// `gcd(h(0), q) = 1`; smallest `valid_from_q` first, then smallest
/// printed root.
fn select_row(g: usize, q: PrimePower) -> Option<&'static TableEntry> {
    let case = case_of(q);
    let qb = q.q_big();
    h_table()
        .iter()
        .filter(|e| {
            e.g == g && e.case == case && e.valid_from_q <= q.q() && e.h.coeff(0).gcd(&qb).is_one()
        })
        .min_by(|a, b| {
            (a.valid_from_q, &a.claimed_max_root).cmp(&(b.valid_from_q, &b.claimed_max_root))
        })
}

/// Build a non-3-cyclic certificate for `2 <= g <= 13
/// from the embedded table. The three exceptional pairs are refused.
pub fn certify_small_g(g: usize, q: PrimePower) -> Result<Certificate, HsearchError> {
    if !(2..=13).contains(&g) {
        return Err(HsearchError::DimensionOutOfRange(g));
    }
    if is_exceptional_pair(g, q.q()) {
        return Err(HsearchError::ExceptionalCase(g, q.q()));
    }
    let row = select_row(g, q).ok_or(HsearchError::NoValidEntry(g, q.q()))?;
    let rw = row.real_weil().map_err(CertifyError::from)?;
    debug_assert!(rw.expand_at(q).is_ok());
    Ok(build_from_trace(rw.h(), q, Provenance::Table, None)?)
}

/// Certificates for one of the three exceptional pairs: each hard-coded
/// Weil polynomial is verified as a q-Weil polynomial, non-cyclic with
/// witness set exactly {2}.
pub fn certify_exceptional(g: usize, q: PrimePower) -> Result<Vec<Certificate>, HsearchError> {
    if !is_exceptional_pair(g, q.q()) {
        return Err(HsearchError::NotExceptional(g, q.q()));
    }
    let polys = exceptional_classes(g, q.q());
    assert!(!polys.is_empty(), "exceptional table is embedded");
    let mut out = Vec::with_capacity(polys.len());
    for f in &polys {
        out.push(build_exceptional(f, q)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    #[test]
    fn table_has_expected_shape() {
        let table = h_table();
        let published_rows = table.iter().filter(|e| e.source == RowSource::Table).count();
        assert_eq!(published_rows, 37, "published rows: 3 per dimension plus the g=2 alternate");
        assert_eq!(table.len(), 38, "plus the one supplement row");
        for g in 2..=13 {
            for case in [CaseClass::QPlus, CaseClass::QMinus, CaseClass::QThree] {
                assert!(
                    table.iter().any(|e| e.g == g && e.case == case),
                    "row for g={} {:?}",
                    g,
                    case
                );
            }
        }
    }

    #[test]
    fn spotcheck_row_verification() {
        let table = h_table();
        // g = 2 first row.
        let row = &table[0];
        assert_eq!(row.h, IntPoly::from_i64(&[-11, -1, 1]));
        assert!(verify_table_entry(row).all_pass());
        // g = 6 q_plus row.
        let row = table
            .iter()
            .find(|e| e.g == 6 && e.case == CaseClass::QPlus)
            .unwrap();
        assert!(verify_table_entry(row).all_pass());
    }

    #[test]
    fn cross_case_check_fails_as_expected() {
        // x^2 - 18 declared as a q_minus row: h(2) = -14 is not divisible
        // by 9, so the case conditions fail while everything else passes.
        let entry = TableEntry {
            g: 2,
            h: IntPoly::from_i64(&[-18, 0, 1]),
            case: CaseClass::QMinus,
            claimed_max_root: parse_decimal("4.243"),
            valid_from_q: 5,
            h0_primes: vec![2, 3],
            source: RowSource::Table,
        };
        let v = verify_table_entry(&entry);
        assert!(!v.case_conditions);
        assert!(v.irreducible && v.totally_real && v.max_root_matches && v.h0_primes_match);
    }

    #[test]
    fn certify_g2_q5_uses_x2_minus_18() {
        let cert = certify_small_g(2, pp(5)).unwrap();
        assert_eq!(cert.h, vec!["-18", "0", "1"]);
        assert_eq!(cert.f, vec!["25", "0", "-8", "0", "1"]);
        assert!(cert.cyclicity.witnesses.contains(&"3".to_string()));
    }

    #[test]
    fn certify_g2_q121_uses_alternate_row() {
        let cert = certify_small_g(2, pp(121)).unwrap();
        assert_eq!(cert.h, vec!["-17", "2", "1"]);
    }

    #[test]
    fn certify_g2_even_prime_powers_use_supplement() {
        // x^2 - 18 is not ordinary over q = 8, 32, 128.
        for q in [8u64, 32, 128] {
            let cert = certify_small_g(2, pp(q)).unwrap();
            assert_eq!(cert.h, vec!["-9", "-3", "1"], "q = {}", q);
            crate::certificate::reverify(&cert).unwrap();
        }
        // But q = 5 still selects the published row.
        assert_eq!(certify_small_g(2, pp(5)).unwrap().h[0], "-18");
    }

    #[test]
    fn exceptional_pairs_are_refused() {
        assert!(matches!(
            certify_small_g(2, pp(2)),
            Err(HsearchError::ExceptionalCase(2, 2))
        ));
        assert!(matches!(
            certify_small_g(2, pp(3)),
            Err(HsearchError::ExceptionalCase(2, 3))
        ));
        assert!(matches!(
            certify_small_g(3, pp(2)),
            Err(HsearchError::ExceptionalCase(3, 2))
        ));
    }

    #[test]
    fn exceptional_certificates() {
        let certs = certify_exceptional(2, pp(2)).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].f, vec!["4", "0", "-1", "0", "1"]);
        assert_eq!(certs[0].cyclicity.witnesses, vec!["2".to_string()]);

        let certs = certify_exceptional(2, pp(3)).unwrap();
        assert_eq!(certs.len(), 8, "published list after deduplication");
        assert!(certs
            .iter()
            .any(|c| c.f == vec!["9", "0", "-2", "0", "1"]));

        let certs = certify_exceptional(3, pp(2)).unwrap();
        assert_eq!(certs.len(), 4);
        assert!(certs
            .iter()
            .any(|c| c.f == vec!["8", "-4", "2", "-3", "1", "-1", "1"]));
    }

    #[test]
    fn find_h_reproduces_table_quality_quadratic() {
        let h = find_h(2, CaseClass::QPlus, 20, 5).unwrap();
        // Valid h with max root at most 2 sqrt(5).
        assert!(h_case_conditions(&h, CaseClass::QPlus));
        assert!(is_irreducible_q(&h));
        assert!(is_totally_real_within_sq(
            &h,
            &BigRational::from_integer(BigInt::from(20))
        ));
    }

    #[test]
    fn find_h_cubic_qthree() {
        let h = find_h(3, CaseClass::QThree, 20, 3).unwrap();
        assert!(h_case_conditions(&h, CaseClass::QThree));
        assert!(is_irreducible_q(&h));
        assert!(is_totally_real_within_sq(
            &h,
            &BigRational::from_integer(BigInt::from(12))
        ));
    }

    #[test]
    fn find_h_exhausted_space() {
        assert!(matches!(
            find_h(2, CaseClass::QPlus, 1, 2),
            Err(HsearchError::NotFound)
        ));
    }
}
