//! Dense univariate polynomials with unbounded integer coefficients.
//!
//! `IntPoly` is the universal carrier for every polynomial in this crate:
//! Weil polynomials `f`, trace polynomials `h`, and the scaled Chebyshev
//! basis `T_i`. Coefficients are stored in ascending degree order with no
//! trailing zeros; the zero polynomial stores no coefficients at all.
//!
//! Submodules supply the exact algorithms layered on top:
//! Sturm-chain root counting ([`sturm`]), GF(2) polynomials ([`gf2`]),
//! complete irreducibility over Q ([`factor`]), and integer factorization
//! ([`integer`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub mod factor;
pub mod gf2;
pub mod integer;
pub mod sturm;

pub use factor::is_irreducible_q;
pub use gf2::{is_irreducible_gf2, Gf2Poly};
pub use integer::{radical_and_quotient, Factorization};
pub use sturm::{count_real_roots, is_totally_real_within_sq, max_real_root_approx, Endpoint, RootCount};

/// A univariate polynomial over Z, stored densely in ascending degree
/// order. Invariant: the last stored coefficient is nonzero (the zero
/// polynomial stores nothing).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Build from ascending coefficients, dropping trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// The monomial `c * x^d`.
    pub fn monomial(c: BigInt, d: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = c;
        IntPoly { coeffs }
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        IntPoly::monomial(BigInt::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial treated as degree 0.
    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// Sign of `den^deg * p(num/den)` for `den > 0`, i.e. the sign of
    /// `p` at the rational point `num/den` without leaving Z.
    pub fn sign_at_rational(&self, num: &BigInt, den: &BigInt) -> i8 {
        debug_assert!(den.is_positive());
        if self.is_zero() {
            return 0;
        }
        // Homogenized Horner: acc_j = sum_{k<=j} c_{deg-k} num^{j-k} den^k.
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for (j, c) in self.coeffs.iter().rev().enumerate() {
            if j == 0 {
                acc = c.clone();
            } else {
                den_pow *= den;
                acc = acc * num + c * &den_pow;
            }
        }
        sign_of(&acc)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPoly::new(coeffs)
    }

    /// n-th formal derivative.
    pub fn derivative_n(&self, n: usize) -> IntPoly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    /// `p(-x)`.
    pub fn compose_neg_x(&self) -> IntPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        IntPoly::new(coeffs)
    }

    /// For an even polynomial `m(x) = q(x^2)`, extract `q`. Returns
    /// `None` if any odd coefficient is nonzero.
    pub fn even_part_in_x2(&self) -> Option<IntPoly> {
        let mut even = Vec::with_capacity(self.coeffs.len() / 2 + 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                even.push(c.clone());
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(IntPoly::new(even))
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `self * x^k`.
    pub fn mul_xpow(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Content: the gcd of all coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the content; sign of the leading coefficient is kept.
    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        }
    }

    /// Divide every coefficient by `d` exactly (panics in debug builds on
    /// a non-exact division).
    pub fn div_scalar_exact(&self, d: &BigInt) -> IntPoly {
        debug_assert!(!d.is_zero());
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    debug_assert!(r.is_zero());
                    q
                })
                .collect(),
        }
    }

    /// Exact division over `Z[x]`: `Some(q)` with `self = q * divisor` when
    /// the divisor divides `self` in `Z[x]`, `None` otherwise.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let ddeg = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let ndeg = self.degree().unwrap();
        if ndeg < ddeg {
            return None;
        }
        let dlc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); ndeg - ddeg + 1];
        for k in (0..=ndeg - ddeg).rev() {
            let lead = rem[k + ddeg].clone();
            if lead.is_zero() {
                continue;
            }
            let (q, r) = lead.div_rem(&dlc);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let prod = dc * &q;
                rem[k + i] -= prod;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(quot))
    }

    /// Pseudo-remainder: computes `R` with `lc(d)^(deg n - deg d + 1) * n
    /// = Q*d + R`. Returns `(R, s)` where `s` is the sign of the
    /// multiplier, so that `R/s` has the sign behavior of the true
    /// remainder scaled by a positive constant.
    pub(crate) fn pseudo_rem(&self, d: &IntPoly) -> (IntPoly, i8) {
        let ddeg = d.degree().expect("pseudo_rem by zero");
        let ndeg = match self.degree() {
            Some(n) if n >= ddeg => n,
            _ => return (self.clone(), 1),
        };
        let dlc = d.leading_coeff();
        let steps = ndeg - ddeg + 1;
        let mult_sign = if dlc.is_negative() && steps % 2 == 1 { -1 } else { 1 };
        let mut rem = self.clone();
        for _ in 0..steps {
            let rdeg = match rem.degree() {
                Some(r) if r >= ddeg => r,
                _ => {
                    rem = rem.scale(&dlc); // keep the multiplier count exact
                    continue;
                }
            };
            let rlc = rem.leading_coeff();
            // rem = dlc*rem - rlc*x^(rdeg-ddeg)*d
            let shifted = d.mul_xpow(rdeg - ddeg).scale(&rlc);
            rem = &rem.scale(&dlc) - &shifted;
        }
        (rem, mult_sign)
    }

    /// Polynomial gcd over Z (primitive PRS), normalized to a positive
    /// leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b.abs_lc().scale(&content.max(BigInt::one()));
        }
        if b.is_zero() {
            return a.abs_lc().scale(&content.max(BigInt::one()));
        }
        if a.deg_or_zero() < b.deg_or_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (r, _) = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.abs_lc().scale(&content)
    }

    fn abs_lc(&self) -> IntPoly {
        if self.leading_coeff().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// The squarefree part `p / gcd(p, p')`, primitive with positive
    /// leading coefficient. Roots are preserved, multiplicities dropped.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        if self.deg_or_zero() == 0 {
            return IntPoly::one();
        }
        let p = self.primitive_part().abs_lc();
        let g = p.gcd(&p.derivative()).primitive_part().abs_lc();
        if g.deg_or_zero() == 0 {
            return p;
        }
        p.div_exact(&g)
            .expect("gcd divides the polynomial")
            .primitive_part()
            .abs_lc()
    }

    /// Serialize coefficients as decimal strings, ascending degree.
    pub fn to_dec_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Parse from decimal coefficient strings, ascending degree.
    pub fn from_dec_strings(strings: &[String]) -> Option<IntPoly> {
        let mut coeffs = Vec::with_capacity(strings.len());
        for s in strings {
            coeffs.push(s.trim().parse::<BigInt>().ok()?);
        }
        Some(IntPoly::new(coeffs))
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        IntPoly::new(coeffs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        IntPoly::new(coeffs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::new(coeffs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self)
    }
}

impl fmt::Display for IntPoly {
    /// Renders like `x^3 - 9*x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            if i > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "x")?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        Ok(())
    }
}
