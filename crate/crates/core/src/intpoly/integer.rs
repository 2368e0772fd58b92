//! Integer factorization: trial division by all primes below 10^6, then
//! Brent-cycle Pollard rho on the surviving cofactor, with Miller-Rabin
//! primality testing. Exposes the radical/radical-quotient decomposition
//! used by the cyclicity criterion.
//!
//! Values at stake are of desk scale (f(1) stays below ~10^31 for every
//! certified case), so rho runs on a u128 Montgomery fast path; a plain
//! big-integer path covers anything larger.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (2..=n).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

/// All odd primes below 10^6, ascending. Used as modular-reduction
/// candidates by the irreducibility test.
pub(crate) fn odd_primes_iter() -> impl Iterator<Item = u64> {
    small_primes().iter().skip(1).map(|&p| p as u64)
}

/// A complete prime factorization of a positive integer, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn prime_powers(&self) -> &[(BigInt, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.pairs.iter().map(|(p, _)| p)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigInt {
        self.pairs
            .iter()
            .fold(BigInt::one(), |acc, (p, _)| acc * p)
    }

    pub fn value(&self) -> BigInt {
        self.pairs
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

/// Factor `|n|` completely. Panics on zero.
pub fn factorize(n: &BigInt) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut m = n.abs();
    let mut pairs: Vec<(BigInt, u32)> = Vec::new();
    if m.is_one() {
        return Factorization { pairs };
    }
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if (&pb * &pb) > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            pairs.push((pb, e));
        }
        if m.is_one() {
            break;
        }
    }
    if !m.is_one() {
        // The cofactor has no prime factor below 10^6; split recursively.
        let mut stack = vec![m];
        let mut found: Vec<BigInt> = Vec::new();
        while let Some(v) = stack.pop() {
            if v.is_one() {
                continue;
            }
            if is_probable_prime(&v) {
                found.push(v);
                continue;
            }
            let d = rho_split(&v);
            let q = &v / &d;
            stack.push(d);
            stack.push(q);
        }
        found.sort();
        let mut i = 0;
        while i < found.len() {
            let mut e = 1u32;
            while i + 1 < found.len() && found[i + 1] == found[i] {
                e += 1;
                found.remove(i + 1);
            }
            pairs.push((found[i].clone(), e));
            i += 1;
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    Factorization { pairs }
}

/// Radical and radical-quotient: for `n != 0` returns the factorization of
/// `|n|`, `rad(n)` (product of distinct primes), and `|n| / rad(n)`.
pub fn radical_and_quotient(n: &BigInt) -> (Factorization, BigInt, BigInt) {
    let f = factorize(n);
    let rad = f.radical();
    let quotient = n.abs() / &rad;
    (f, rad, quotient)
}

/// Miller-Rabin with the first 20 primes as bases: deterministic for all
/// inputs below 3.3 * 10^24, and with no known composite passing even the
/// 13-base subset above that.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n <= &BigInt::one() {
        return false;
    }
    const BASES: [u32; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    for &b in &BASES {
        if *n == BigInt::from(b) {
            return true;
        }
        if (n % BigInt::from(b)).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - BigInt::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in &BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2u8), n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Find a nontrivial divisor of an odd composite with no factor < 10^6.
fn rho_split(n: &BigInt) -> BigInt {
    if let Some(n128) = n.to_u128() {
        if n128 >> 126 == 0 {
            return BigInt::from(rho_split_u128(n128));
        }
    }
    rho_split_bigint(n)
}

// ---- u128 Montgomery arithmetic ----

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a_lo, a_hi) = (a as u64 as u128, a >> 64);
    let (b_lo, b_hi) = (b as u64 as u128, b >> 64);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh as u64 as u128) + (hl as u64 as u128);
    let lo = (ll as u64 as u128) | (mid << 64);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (hi, lo)
}

/// -n^-1 mod 2^128 for odd n, by Newton iteration.
fn neg_inv_mod_2_128(n: u128) -> u128 {
    let mut inv: u128 = 1; // inverse mod 2
    for _ in 0..7 {
        inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
    }
    inv.wrapping_neg()
}

struct Mont128 {
    n: u128,
    n_neg_inv: u128,
    r2: u128, // 2^256 mod n
}

impl Mont128 {
    fn new(n: u128) -> Mont128 {
        debug_assert!(n & 1 == 1 && n >> 126 == 0);
        // r = 2^128 mod n, r2 = r^2 mod n computed by doubling.
        let r = (u128::MAX % n + 1) % n;
        let mut r2 = r;
        for _ in 0..128 {
            r2 = add_mod(r2, r2, n);
        }
        Mont128 {
            n,
            n_neg_inv: neg_inv_mod_2_128(n),
            r2,
        }
    }

    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.n_neg_inv);
        let (mn_hi, mn_lo) = mul_wide(m, self.n);
        // lo + mn_lo is 0 mod 2^128; only its carry matters. hi and mn_hi
        // are both < n < 2^126, so the sum below cannot overflow.
        let (_, carry) = lo.overflowing_add(mn_lo);
        let mut t = hi + mn_hi + carry as u128;
        if t >= self.n {
            t -= self.n;
        }
        t
    }

    fn to_mont(&self, x: u128) -> u128 {
        let (hi, lo) = mul_wide(x % self.n, self.r2);
        self.redc(hi, lo)
    }

    fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }
}

fn add_mod(a: u128, b: u128, n: u128) -> u128 {
    // n < 2^127, so the sum cannot overflow u128.
    let s = a + b;
    if s >= n {
        s - n
    } else {
        s
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's variant of Pollard rho with batched gcds, on Montgomery form.
fn rho_split_u128(n: u128) -> u128 {
    debug_assert!(n & 1 == 1);
    let mont = Mont128::new(n);
    let mut c: u128 = 1;
    loop {
        let c_mont = mont.to_mont(c);
        if let Some(d) = rho_brent_once(n, &mont, c_mont) {
            return d;
        }
        c += 1;
    }
}

fn rho_brent_once(n: u128, mont: &Mont128, c: u128) -> Option<u128> {
    let mut y = mont.to_mont(2);
    let m = 128u64; // batch size
    let mut r = 1u64;
    let mut q = mont.to_mont(1);
    let mut x = y;
    let mut ys = y;
    let mut g: u128 = 1;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = add_mod(mont.mul(y, y), c, n);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let count = m.min(r - k);
            for _ in 0..count {
                y = add_mod(mont.mul(y, y), c, n);
                let diff = x.abs_diff(y);
                q = mont.mul(q, diff);
            }
            g = gcd_u128(q, n);
            k += m;
        }
        r *= 2;
        if r > 1 << 24 {
            return None; // restart with a different constant
        }
    }
    if g == n {
        // Backtrack one step at a time.
        loop {
            ys = add_mod(mont.mul(ys, ys), c, n);
            let diff = x.abs_diff(ys);
            g = gcd_u128(diff, n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

/// Big-integer rho fallback for inputs beyond the u128 fast path.
fn rho_split_bigint(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    let two = BigInt::from(2u8);
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = two.clone();
        let mut y = two.clone();
        let mut d = one.clone();
        let mut steps = 0u64;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
            steps += 1;
            if steps > 1 << 28 {
                break;
            }
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn radical_quotient_examples() {
        let (_, rad, quot) = radical_and_quotient(&big(4));
        assert_eq!((rad, quot), (big(2), big(2)));
        let (_, rad, quot) = radical_and_quotient(&big(18));
        assert_eq!((rad, quot), (big(6), big(3)));
        let (f, rad, quot) = radical_and_quotient(&big(1));
        assert_eq!((rad, quot), (big(1), big(1)));
        assert!(f.prime_powers().is_empty());
        // Sign is dropped.
        let (_, rad, quot) = radical_and_quotient(&big(-12));
        assert_eq!((rad, quot), (big(6), big(2)));
    }

    #[test]
    fn factorization_reassembles() {
        for n in [2i64, 97, 1024, 360360, 999983, 1000003, 1 << 40] {
            let f = factorize(&big(n));
            assert_eq!(f.value(), big(n));
        }
    }

    #[test]
    fn rho_splits_semiprimes_beyond_trial_division() {
        // Both factors above the 10^6 trial-division limit.
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        let f = factorize(&(&p * &q));
        let primes: Vec<_> = f.primes().cloned().collect();
        assert_eq!(primes, vec![p, q]);

        let p = BigInt::from(2_147_483_647u64); // 2^31 - 1
        let q = BigInt::from(2_305_843_009_213_693_951u128); // 2^61 - 1
        let f = factorize(&(&p * &q));
        assert_eq!(f.value(), &p * &q);
        assert_eq!(f.primes().count(), 2);
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let primes = small_primes();
        let mut idx = 0;
        for n in 2u32..2000 {
            let expect = primes[idx] == n;
            if expect {
                idx += 1;
            }
            assert_eq!(is_probable_prime(&BigInt::from(n)), expect, "n = {}", n);
        }
    }

    #[test]
    fn mersenne_and_carmichael() {
        assert!(is_probable_prime(&BigInt::from(2_305_843_009_213_693_951u128)));
        for c in [561u32, 1105, 1729, 2821, 6601, 8911] {
            assert!(!is_probable_prime(&BigInt::from(c)), "Carmichael {}", c);
        }
    }

    #[test]
    fn montgomery_mul_matches_bigint() {
        let n: u128 = 0x1fff_ffff_ffff_ffff_ffff_ffff_ffff_fff1; // odd, < 2^126
        let mont = Mont128::new(n);
        for (a, b) in [(3u128, 5u128), (u64::MAX as u128, 12345), (n - 1, n - 2)] {
            let am = mont.to_mont(a);
            let bm = mont.to_mont(b);
            let prod = mont.redc(0, mont.mul(am, bm));
            let expect = (BigInt::from(a) * BigInt::from(b)) % BigInt::from(n);
            assert_eq!(BigInt::from(prod), expect);
        }
    }
}
