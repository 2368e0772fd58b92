//! Exact construction and certification of non-cyclic abelian-variety
//! isogeny classes over finite fields.
//!
//! For a prime power `q` and a dimension `g > 1`, this crate builds a
//! simple (and, outside three small exceptional pairs, ordinary) isogeny
//! class over `F_q` whose group of rational points is non-cyclic, and
//! emits a self-contained [`certificate::Certificate`] that an independent
//! verifier can replay predicate by predicate.
//!
//! Everything is computed with exact integer/rational arithmetic:
//!
//! * [`intpoly`] — dense unbounded-integer polynomials, Sturm-chain real
//!   root counting, complete irreducibility testing over Q and GF(2), and
//!   integer factorization (trial division + Brent's rho).
//! * [`weil`] — the correspondence between a degree-`2g` Weil polynomial
//!   `f` and its degree-`g` trace polynomial `h`, plus the ordinariness
//!   and simple-ordinary predicates.
//! * [`cyclicity`] — the point-group cyclicity criterion
//!   `gcd(f'(1), f(1)/rad f(1)) = 1`, its witness-prime form, and the
//!   per-case divisibility conditions on `h`.
//! * [`hsearch`] — the built-in table of trace polynomials for
//!   `2 <= g <= 13`, table verification, and certificate construction
//!   for small dimensions (including the three exceptional pairs).
//! * [`chebgen`] — the scaled-Chebyshev construction for `g >= 14`.
//! * [`enumerate`] — exhaustive desk-scale enumeration of Weil
//!   polynomials, used to re-derive the exceptional-case classification.
//! * [`certificate`] — the serializable certificate bundle and its
//!   independent re-verification.
//!
//! ```
//! use noncyc_core::{cyclicity_report, IntPoly, PrimePower};
//! use noncyc_core::weil::expand_h_to_f;
//!
//! // The trace polynomial x^2 - 18 over F_5 expands to x^4 - 8x^2 + 25,
//! // whose isogeny class has 18 rational points and witness prime 3.
//! let q = PrimePower::new(5)?;
//! let h = IntPoly::from_i64(&[-18, 0, 1]);
//! let w = expand_h_to_f(&h, q)?;
//! assert_eq!(w.f(), &IntPoly::from_i64(&[25, 0, -8, 0, 1]));
//! let report = cyclicity_report(&w)?;
//! assert!(!report.is_cyclic);
//! assert!(report.has_witness(3));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod certificate;
pub mod chebgen;
pub mod cyclicity;
pub mod enumerate;
pub mod hsearch;
pub mod intpoly;
pub mod weil;

pub use certificate::{Certificate, Provenance, Realizability};
pub use cyclicity::{case_of, cyclicity_report, CaseClass, CyclicityReport};
pub use intpoly::IntPoly;
pub use weil::{PrimePower, RealWeil, WeilPoly};
