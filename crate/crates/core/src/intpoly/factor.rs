//! Complete irreducibility testing over Q.
//!
//! Layered strategy, each stage exact:
//!
//! 1. squarefreeness over Z (a repeated factor is an immediate "reducible");
//! 2. fast sufficient test: irreducible mod l for some small prime l not
//!    dividing the leading coefficient;
//! 3. factor-degree pruning: the multiset of factor degrees mod several
//!    primes; if no proper factor degree is achievable in every reduction,
//!    the polynomial is irreducible;
//! 4. complete Zassenhaus: Cantor-Zassenhaus factorization mod a good odd
//!    prime, linear Hensel lifting past the Landau-Mignotte coefficient
//!    bound, and subset recombination with exact trial division.
//!
//! Stage 4 alone is complete; stages 2-3 only exit early.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gf2::{is_irreducible_gf2, Gf2Poly};
use super::IntPoly;

/// True iff `p` is irreducible over Q. The content of `p` is removed
/// internally, so the question is about the primitive part. Degree-0
/// inputs are not irreducible.
pub fn is_irreducible_q(p: &IntPoly) -> bool {
    let p = p.primitive_part();
    let n = match p.degree() {
        Some(0) | None => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    // x divides p?
    if p.coeff(0).is_zero() {
        return false;
    }
    // Repeated factors.
    if p.gcd(&p.derivative()).deg_or_zero() > 0 {
        return false;
    }
    // Fast sufficient test mod small primes.
    let lc = p.leading_coeff();
    for &l in &[2u64, 3, 5, 7, 11, 13] {
        if (&lc % BigInt::from(l)).is_zero() {
            continue;
        }
        if l == 2 {
            let g = Gf2Poly::from_intpoly(&p);
            if g.degree() == Some(n) && is_irreducible_gf2(&g) {
                return true;
            }
        } else if let Some(m) = ModPoly::from_intpoly(&p, l) {
            if m.degree() == Some(n) && m.monic().is_irreducible() {
                return true;
            }
        }
    }
    // Degree-set pruning over several good odd primes, keeping the
    // factorization with the fewest factors for the complete stage.
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut allowed: u128 = !0;
    let mut usable = 0;
    for l in odd_prime_candidates() {
        let lb = BigInt::from(l);
        if (&lc % &lb).is_zero() {
            continue;
        }
        let m = match ModPoly::from_intpoly(&p, l) {
            Some(m) if m.degree() == Some(n) => m.monic(),
            _ => continue,
        };
        if !m.is_squarefree() {
            continue;
        }
        let factors = m.factor();
        if factors.len() == 1 {
            return true;
        }
        if n < 128 {
            allowed &= degree_sums(&factors);
            if allowed & proper_mask(n) == 0 {
                return true;
            }
        }
        if best.as_ref().is_none_or(|(_, f)| factors.len() < f.len()) {
            best = Some((l, factors));
        }
        usable += 1;
        if usable >= 5 {
            break;
        }
    }
    let (l, factors) = best.expect("a squarefree polynomial has squarefree reductions");
    !zassenhaus_has_proper_factor(&p, l, &factors, allowed)
}

/// Odd primes tried for modular factorization: a short preferred list,
/// then the full sieve for pathological inputs whose discriminant kills
/// every small prime.
fn odd_prime_candidates() -> impl Iterator<Item = u64> {
    super::integer::odd_primes_iter()
}

/// Bitset of achievable factor-degree subset sums (degree < 128).
fn degree_sums(factors: &[ModPoly]) -> u128 {
    let mut sums: u128 = 1;
    for f in factors {
        let d = f.degree().unwrap_or(0);
        if d < 128 {
            sums |= sums << d;
        }
    }
    sums
}

fn proper_mask(n: usize) -> u128 {
    // Bits 1..n-1.
    ((1u128 << n) - 1) & !1
}

/// Complete Zassenhaus recombination: does the primitive squarefree `p`
/// have a proper factor over Z? `factors` is its monic factorization mod
/// `l`, `allowed` the degree bitset surviving pruning.
fn zassenhaus_has_proper_factor(p: &IntPoly, l: u64, factors: &[ModPoly], allowed: u128) -> bool {
    let n = p.degree().unwrap();
    let lc = p.leading_coeff();
    // Landau-Mignotte style bound on coefficients of lc * (any factor).
    let norm2 = p
        .coeffs()
        .iter()
        .fold(BigInt::zero(), |acc, c| acc + c * c)
        .sqrt()
        + 1;
    let height = (BigInt::one() << n) * (norm2 + p.coeffs().iter().map(|c| c.abs()).max().unwrap())
        * lc.abs();
    let target = &height * 2 + 1;
    let mut modulus = BigInt::from(l);
    let mut k = 1usize;
    while modulus < target {
        modulus *= l;
        k += 1;
    }
    let lifted = hensel_lift(p, factors, l, k, &modulus);
    let r = lifted.len();
    let degs: Vec<usize> = lifted.iter().map(|f| f.deg_or_zero()).collect();
    let p0 = p.coeff(0);
    let lc_p0 = &lc * &p0;

    // Subsets by increasing cardinality; a subset and its complement give
    // the same split, so cardinality runs to r/2 with ties broken by
    // requiring index 0 in subsets of size exactly r/2.
    for size in 1..=r / 2 {
        let mut indices: Vec<usize> = (0..size).collect();
        loop {
            let skip_as_complement = 2 * size == r && indices[0] != 0;
            if !skip_as_complement {
                let deg_sum: usize = indices.iter().map(|&i| degs[i]).sum();
                let degree_allowed =
                    deg_sum < n && (deg_sum >= 128 || allowed & (1u128 << deg_sum) != 0);
                if degree_allowed
                    && subset_divides(p, &lc, &lc_p0, &lifted, &indices, &modulus)
                {
                    return true;
                }
            }
            if !next_combination(&mut indices, r) {
                break;
            }
        }
    }
    false
}

/// Advance to the next k-combination of `0..r` in lexicographic order.
fn next_combination(indices: &mut [usize], r: usize) -> bool {
    let k = indices.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if indices[i] < r - k + i {
            indices[i] += 1;
            for j in i + 1..k {
                indices[j] = indices[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn subset_divides(
    p: &IntPoly,
    lc: &BigInt,
    lc_p0: &BigInt,
    lifted: &[IntPoly],
    subset: &[usize],
    modulus: &BigInt,
) -> bool {
    // Constant-term pretest: the centered constant term of lc * prod must
    // divide lc * p(0).
    let mut c0 = lc.mod_floor(modulus);
    for &i in subset {
        c0 = (c0 * lifted[i].coeff(0)).mod_floor(modulus);
    }
    let c0 = center(&c0, modulus);
    if c0.is_zero() {
        return false; // p(0) != 0, so a genuine factor has nonzero constant term
    }
    if !(lc_p0 % &c0).is_zero() {
        return false;
    }
    // Full candidate.
    let mut cand = IntPoly::constant(lc.clone());
    for &i in subset {
        cand = mul_mod(&cand, &lifted[i], modulus);
    }
    let cand = center_poly(&cand, modulus).primitive_part();
    if cand.deg_or_zero() == 0 {
        return false;
    }
    p.div_exact(&cand).is_some()
}

fn center(x: &BigInt, modulus: &BigInt) -> BigInt {
    let half = modulus >> 1;
    if x > &half {
        x - modulus
    } else {
        x.clone()
    }
}

fn center_poly(p: &IntPoly, modulus: &BigInt) -> IntPoly {
    IntPoly::new(
        p.coeffs()
            .iter()
            .map(|c| center(&c.mod_floor(modulus), modulus))
            .collect(),
    )
}

fn mul_mod(a: &IntPoly, b: &IntPoly, modulus: &BigInt) -> IntPoly {
    let prod = a * b;
    IntPoly::new(
        prod.coeffs()
            .iter()
            .map(|c| c.mod_floor(modulus))
            .collect(),
    )
}

/// Lift the monic factorization of `p mod l` to a monic factorization mod
/// `l^k` (with the leading coefficient of `p` handled by the caller): the
/// returned polynomials are monic mod `l^k` and multiply to `p / lc` mod
/// `l^k`.
fn hensel_lift(p: &IntPoly, factors: &[ModPoly], l: u64, k: usize, modulus: &BigInt) -> Vec<IntPoly> {
    // Work with the monic image of p mod l^k.
    let lc_inv = modinv_big(&p.leading_coeff().mod_floor(modulus), modulus)
        .expect("leading coefficient invertible mod l^k");
    let monic_p = IntPoly::new(
        p.coeffs()
            .iter()
            .map(|c| (c * &lc_inv).mod_floor(modulus))
            .collect(),
    );
    lift_tree(&monic_p, factors, l, k, modulus)
}

fn lift_tree(p: &IntPoly, factors: &[ModPoly], l: u64, k: usize, modulus: &BigInt) -> Vec<IntPoly> {
    if factors.len() == 1 {
        return vec![center_poly(p, modulus)];
    }
    let mid = factors.len() / 2;
    let g0 = product_mod(&factors[..mid]);
    let h0 = product_mod(&factors[mid..]);
    let (g, h) = lift_pair(p, &g0, &h0, l, k, modulus);
    let mut left = lift_tree(&g, &factors[..mid], l, k, modulus);
    let mut right = lift_tree(&h, &factors[mid..], l, k, modulus);
    left.append(&mut right);
    left
}

fn product_mod(factors: &[ModPoly]) -> ModPoly {
    let p = factors[0].p;
    factors.iter().fold(ModPoly::one(p), |acc, f| acc.mul(f))
}

/// Linear Hensel lift of a coprime monic pair `p = g0*h0 (mod l)` to
/// `p = g*h (mod l^k)`.
fn lift_pair(
    p: &IntPoly,
    g0: &ModPoly,
    h0: &ModPoly,
    l: u64,
    k: usize,
    modulus: &BigInt,
) -> (IntPoly, IntPoly) {
    let (s, t) = g0.bezout(h0); // s*g0 + t*h0 = 1 mod l
    let mut g = g0.to_intpoly();
    let mut h = h0.to_intpoly();
    let lb = BigInt::from(l);
    let mut m = lb.clone();
    for _ in 1..k {
        // e = (p - g*h) / m, reduced mod l
        let e = &(p - &(&g * &h));
        let e_div = e.div_scalar_exact(&m);
        let e_mod = ModPoly::from_intpoly_reduced(&e_div, l);
        // dg = t*e mod g0, dh = s*e mod h0 (degrees stay below deg g, deg h)
        let dg = t.mul(&e_mod).rem(g0);
        let dh = s.mul(&e_mod).rem(h0);
        g = &g + &dg.to_intpoly().scale(&m);
        h = &h + &dh.to_intpoly().scale(&m);
        m *= &lb;
    }
    (center_poly(&g, modulus), center_poly(&h, modulus))
}

fn modinv_big(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(modulus);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(modulus))
    } else {
        None
    }
}

// ---- dense polynomials over GF(l), l an odd prime ----

/// A monic-friendly dense polynomial over GF(l) with word coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl ModPoly {
    fn new(mut coeffs: Vec<u64>, p: u64) -> ModPoly {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { coeffs, p }
    }

    fn zero(p: u64) -> ModPoly {
        ModPoly { coeffs: Vec::new(), p }
    }

    fn one(p: u64) -> ModPoly {
        ModPoly::new(vec![1], p)
    }

    fn x(p: u64) -> ModPoly {
        ModPoly::new(vec![0, 1], p)
    }

    /// Reduce an integer polynomial; `None` if it vanishes mod l.
    fn from_intpoly(q: &IntPoly, p: u64) -> Option<ModPoly> {
        let m = Self::from_intpoly_reduced(q, p);
        if m.is_zero() {
            None
        } else {
            Some(m)
        }
    }

    fn from_intpoly_reduced(q: &IntPoly, p: u64) -> ModPoly {
        use num_traits::ToPrimitive;
        let pb = BigInt::from(p);
        ModPoly::new(
            q.coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits u64"))
                .collect(),
            p,
        )
    }

    fn to_intpoly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    fn sub(&self, other: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0u64; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *c = (self.p + a - b % self.p) % self.p;
        }
        ModPoly::new(coeffs, self.p)
    }

    fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let v = (a as u128 * b as u128 + coeffs[i + j] as u128) % self.p as u128;
                coeffs[i + j] = v as u64;
            }
        }
        ModPoly::new(coeffs, self.p)
    }

    fn scale(&self, k: u64) -> ModPoly {
        ModPoly::new(
            self.coeffs
                .iter()
                .map(|&c| (c as u128 * k as u128 % self.p as u128) as u64)
                .collect(),
            self.p,
        )
    }

    fn monic(&self) -> ModPoly {
        let lc = self.leading();
        if lc <= 1 {
            return self.clone();
        }
        self.scale(modinv_u64(lc, self.p))
    }

    fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        let dd = d.degree().expect("division by zero");
        let inv = modinv_u64(d.leading(), self.p);
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n < dd + 1 {
            return (ModPoly::zero(self.p), self.clone());
        }
        let mut quot = vec![0u64; n - dd];
        for k in (0..n - dd).rev() {
            let lead = rem[k + dd] % self.p;
            if lead == 0 {
                continue;
            }
            let q = (lead as u128 * inv as u128 % self.p as u128) as u64;
            quot[k] = q;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                let sub = (q as u128 * dc as u128 % self.p as u128) as u64;
                rem[k + i] = (rem[k + i] + self.p - sub) % self.p;
            }
        }
        (ModPoly::new(quot, self.p), ModPoly::new(rem, self.p))
    }

    fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd for a coprime pair: returns `(s, t)` with
    /// `s*self + t*other = 1`.
    fn bezout(&self, other: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (ModPoly::one(p), ModPoly::zero(p));
        let (mut t0, mut t1) = (ModPoly::zero(p), ModPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = r1;
            r1 = r;
            let s2 = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s2;
            let t2 = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t2;
        }
        debug_assert_eq!(r0.degree(), Some(0), "bezout of non-coprime pair");
        let inv = modinv_u64(r0.leading(), p);
        (s0.scale(inv), t0.scale(inv))
    }

    fn derivative(&self) -> ModPoly {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.p);
        }
        ModPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (c as u128 * (i as u128 % self.p as u128) % self.p as u128) as u64)
                .collect(),
            self.p,
        )
    }

    fn is_squarefree(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).degree() == Some(0)
    }

    fn pow_mod(&self, mut e: u128, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// x^(p^j) mod m, by iterating the Frobenius j times.
    fn frobenius_power_x(m: &ModPoly, j: usize) -> ModPoly {
        let p = m.p;
        let mut t = ModPoly::x(p).rem(m);
        for _ in 0..j {
            t = t.pow_mod(p as u128, m);
        }
        t
    }

    /// Irreducibility over GF(p) for monic input of degree >= 1.
    fn is_irreducible(&self) -> bool {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        if d == 1 {
            return true;
        }
        let x = ModPoly::x(self.p).rem(self);
        let xq = Self::frobenius_power_x(self, d);
        if xq != x {
            return false;
        }
        let mut n = d;
        let mut primes = Vec::new();
        let mut t = 2;
        while t * t <= n {
            if n % t == 0 {
                primes.push(t);
                while n % t == 0 {
                    n /= t;
                }
            }
            t += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        for t in primes {
            let u = Self::frobenius_power_x(self, d / t);
            if u.sub(&x).gcd(self).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Complete factorization of a squarefree monic polynomial into monic
    /// irreducibles (distinct-degree then Cantor-Zassenhaus equal-degree).
    fn factor(&self) -> Vec<ModPoly> {
        let mut out = Vec::new();
        let mut f = self.monic();
        let mut d = 1usize;
        let mut h = ModPoly::x(self.p).rem(&f);
        while f.degree().is_some_and(|fd| fd >= 2 * d) {
            h = h.pow_mod(self.p as u128, &f);
            let g = h.sub(&ModPoly::x(self.p).rem(&f)).gcd(&f);
            if g.degree().is_some_and(|gd| gd > 0) {
                equal_degree_split(&g, d, &mut out);
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            d += 1;
        }
        if f.degree().is_some_and(|fd| fd > 0) {
            out.push(f);
        }
        out.sort_by(|a, b| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
        out
    }
}

/// Cantor-Zassenhaus equal-degree splitting for odd p; `g` is a monic
/// squarefree product of irreducibles all of degree `d`.
fn equal_degree_split(g: &ModPoly, d: usize, out: &mut Vec<ModPoly>) {
    let gd = g.degree().unwrap();
    if gd == d {
        out.push(g.clone());
        return;
    }
    let p = g.p;
    // (p^d - 1) / 2 as a u128 with big-exponent fallback.
    let mut rng = 0x9e3779b97f4a7c15u64 ^ (gd as u64) << 17 ^ (p << 1);
    loop {
        // Deterministic splitting attempts from a fixed xorshift stream.
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        let mut coeffs = Vec::with_capacity(gd);
        let mut s = rng;
        for _ in 0..gd {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            coeffs.push(s % p);
        }
        let a = ModPoly::new(coeffs, p);
        if a.degree().is_none_or(|ad| ad < 1) {
            continue;
        }
        let b = pow_pd_half(&a, p, d, g);
        let split = b.sub(&ModPoly::one(p)).gcd(g);
        if let Some(sd) = split.degree() {
            if sd > 0 && sd < gd {
                let other = g.div_rem(&split).0.monic();
                equal_degree_split(&split, d, out);
                equal_degree_split(&other, d, out);
                return;
            }
        }
    }
}

/// a^((p^d - 1)/2) mod g without materializing p^d: compute
/// b = a^(1 + p + ... + p^(d-1)) by Frobenius composition, then
/// b^((p-1)/2).
fn pow_pd_half(a: &ModPoly, p: u64, d: usize, g: &ModPoly) -> ModPoly {
    // norm = a^(1+p+...+p^(d-1)) mod g
    let mut acc = a.rem(g);
    let mut frob = a.rem(g);
    for _ in 1..d {
        frob = frob.pow_mod(p as u128, g);
        acc = acc.mul(&frob).rem(g);
    }
    acc.pow_mod((p as u128 - 1) / 2, g)
}

fn modinv_u64(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut e = p - 2;
    let mut base = a as u128 % p as u128;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}
