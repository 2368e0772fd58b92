//! Polynomials over GF(2) as bitsets, with the standard irreducibility
//! test: `p` of degree `d` is irreducible iff `x^(2^d) = x (mod p)` and
//! `gcd(x^(2^(d/t)) - x, p) = 1` for every prime `t` dividing `d`.

use std::fmt;

use super::IntPoly;

/// A polynomial over GF(2); bit `i` of the bitset is the coefficient of
/// `x^i`. Invariant: no set bits above the degree (blocks are trimmed).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    bits: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Gf2Poly {
        Gf2Poly { bits: Vec::new() }
    }

    pub fn one() -> Gf2Poly {
        Gf2Poly { bits: vec![1] }
    }

    pub fn x() -> Gf2Poly {
        Gf2Poly { bits: vec![2] }
    }

    /// Build from the low 64 coefficients packed in a word.
    pub fn from_bits_u64(bits: u64) -> Gf2Poly {
        let mut p = Gf2Poly { bits: vec![bits] };
        p.trim();
        p
    }

    /// Reduce an integer polynomial mod 2.
    pub fn from_intpoly(p: &IntPoly) -> Gf2Poly {
        let mut out = Gf2Poly::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.bit(0) {
                out.set_bit(i);
            }
        }
        out
    }

    /// Lift back to `Z[x]` with coefficients in {0, 1}.
    pub fn to_intpoly(&self) -> IntPoly {
        let mut coeffs = Vec::new();
        for i in 0..=self.degree().unwrap_or(0) {
            coeffs.push(if self.bit(i) { 1 } else { 0 });
        }
        if self.is_zero() {
            coeffs.clear();
        }
        IntPoly::from_i64(&coeffs)
    }

    fn trim(&mut self) {
        while self.bits.last() == Some(&0) {
            self.bits.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let top = self.bits.last()?;
        Some((self.bits.len() - 1) * 64 + (63 - top.leading_zeros() as usize))
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set_bit(&mut self, i: usize) {
        let block = i / 64;
        if block >= self.bits.len() {
            self.bits.resize(block + 1, 0);
        }
        self.bits[block] |= 1 << (i % 64);
    }

    /// Addition = subtraction = XOR.
    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let n = self.bits.len().max(other.bits.len());
        let mut bits = vec![0u64; n];
        for (i, b) in bits.iter_mut().enumerate() {
            *b = self.bits.get(i).copied().unwrap_or(0) ^ other.bits.get(i).copied().unwrap_or(0);
        }
        let mut p = Gf2Poly { bits };
        p.trim();
        p
    }

    /// Carryless shift-and-xor multiplication.
    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        let deg = self.degree().unwrap() + other.degree().unwrap();
        let mut bits = vec![0u64; deg / 64 + 1];
        for i in 0..=self.degree().unwrap() {
            if !self.bit(i) {
                continue;
            }
            // xor in other << i
            let (blk, off) = (i / 64, i % 64);
            for (j, w) in other.bits.iter().enumerate() {
                bits[blk + j] ^= w << off;
                if off > 0 && blk + j + 1 < bits.len() {
                    bits[blk + j + 1] ^= w >> (64 - off);
                }
            }
        }
        let mut p = Gf2Poly { bits };
        p.trim();
        p
    }

    /// Remainder of `self` modulo `m`.
    pub fn rem(&self, m: &Gf2Poly) -> Gf2Poly {
        let md = m.degree().expect("reduction modulo zero");
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < md {
                break;
            }
            let shift = rd - md;
            // r ^= m << shift
            let (blk, off) = (shift / 64, shift % 64);
            let needed = blk + m.bits.len() + 1;
            if r.bits.len() < needed {
                r.bits.resize(needed, 0);
            }
            for (j, w) in m.bits.iter().enumerate() {
                r.bits[blk + j] ^= w << off;
                if off > 0 {
                    r.bits[blk + j + 1] ^= w >> (64 - off);
                }
            }
            r.trim();
        }
        r
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// `self^2 mod m` by bit spreading.
    fn sqr_mod(&self, m: &Gf2Poly) -> Gf2Poly {
        let mut sq = Gf2Poly::zero();
        if let Some(d) = self.degree() {
            for i in 0..=d {
                if self.bit(i) {
                    sq.set_bit(2 * i);
                }
            }
        }
        sq.rem(m)
    }
}

/// True iff `p` is irreducible over GF(2). Requires `deg p >= 1`.
pub fn is_irreducible_gf2(p: &Gf2Poly) -> bool {
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    // x must divide nothing: constant term 1 (otherwise x | p).
    if !p.bit(0) {
        return false;
    }
    let x = Gf2Poly::x();
    // x^(2^d) mod p by repeated squaring.
    let mut t = x.rem(p);
    for _ in 0..d {
        t = t.sqr_mod(p);
    }
    if t != x.rem(p) {
        return false;
    }
    // For each prime t | d: gcd(x^(2^(d/t)) - x, p) must be 1.
    for t_prime in prime_divisors(d) {
        let e = d / t_prime;
        let mut u = x.rem(p);
        for _ in 0..e {
            u = u.sqr_mod(p);
        }
        let diff = u.add(&x.rem(p));
        let g = diff.gcd(p);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "Gf2Poly(0)");
        }
        write!(f, "Gf2Poly(")?;
        let mut first = true;
        for i in (0..=self.degree().unwrap()).rev() {
            if self.bit(i) {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                match i {
                    0 => write!(f, "1")?,
                    1 => write!(f, "x")?,
                    _ => write!(f, "x^{}", i)?,
                }
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_irreducible_quadratic() {
        // x^2 + x + 1
        assert!(is_irreducible_gf2(&Gf2Poly::from_bits_u64(0b111)));
        // x^2 + 1 = (x + 1)^2
        assert!(!is_irreducible_gf2(&Gf2Poly::from_bits_u64(0b101)));
        // x^2 + x = x(x+1)
        assert!(!is_irreducible_gf2(&Gf2Poly::from_bits_u64(0b110)));
    }

    #[test]
    fn quartic_example() {
        // x^4 + x + 1 is irreducible
        assert!(is_irreducible_gf2(&Gf2Poly::from_bits_u64(0b10011)));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(!is_irreducible_gf2(&Gf2Poly::from_bits_u64(0b10101)));
    }

    #[test]
    fn brute_force_agreement_up_to_degree_10() {
        // Trial division over GF(2) as the independent oracle.
        fn reducible_by_trial(p: &Gf2Poly) -> bool {
            let d = p.degree().unwrap();
            for bits in 2u64..(1u64 << (d / 2 + 1)) {
                let cand = Gf2Poly::from_bits_u64(bits);
                if cand.degree().is_none_or(|cd| cd == 0 || cd > d / 2) {
                    continue;
                }
                if p.rem(&cand).is_zero() {
                    return true;
                }
            }
            false
        }
        let mut irreducible_counts = [0usize; 11];
        for bits in 2u64..(1 << 11) {
            let p = Gf2Poly::from_bits_u64(bits);
            let d = p.degree().unwrap();
            if d < 1 {
                continue;
            }
            let fast = is_irreducible_gf2(&p);
            let slow = !reducible_by_trial(&p);
            assert_eq!(fast, slow, "mismatch for {:?}", p);
            if fast {
                irreducible_counts[d] += 1;
            }
        }
        // Known counts of irreducible polynomials over GF(2) by degree.
        assert_eq!(&irreducible_counts[1..=8], &[2, 1, 2, 3, 6, 9, 18, 30]);
    }

    #[test]
    fn intpoly_reduction_mod_2() {
        let p = IntPoly::from_i64(&[17, -6, -3, 1]); // x^3 - 3x^2 - 6x + 17
        let g = Gf2Poly::from_intpoly(&p);
        // mod 2: x^3 + x^2 + 1
        assert_eq!(g, Gf2Poly::from_bits_u64(0b1101));
        assert!(is_irreducible_gf2(&g));
    }
}
