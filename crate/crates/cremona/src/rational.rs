//! Exact rational scalars and small helpers shared by the geometry modules.
//!
//! `Rational` is an arbitrary-precision fraction kept reduced with a positive
//! denominator; `num_rational::BigRational` already guarantees both and its
//! string form (`"p/q"`, or `"p"` for integers) round-trips, so it is used
//! directly rather than wrapped.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub use num_bigint::BigInt as Int;
pub use num_rational::BigRational as Rational;

/// Parses a rational from `"p/q"` or `"p"` text.
pub fn parse_rational(s: &str) -> crate::Result<Rational> {
    let t = s.trim();
    t.parse::<Rational>()
        .map_err(|e| crate::EngineError::Parse(format!("bad rational {t:?}: {e}")))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is 1.
///
/// This is exactly `Display` for `BigRational`; the alias exists so the
/// serialization modules name the convention once.
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

/// Uniform random rational with numerator in `[-bound, bound]` and
/// denominator in `[1, bound]`.
///
/// The bound keeps coordinates small so that exact arithmetic downstream
/// stays cheap; callers pass seeded generators for reproducibility.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    debug_assert!(bound >= 1);
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Clears denominators and divides by the content, returning a primitive
/// integer vector with the same projective class and sign fixed so the first
/// nonzero entry is positive.
///
/// Returns `None` when every entry is zero.
pub fn primitive_integer_vector(v: &[Rational]) -> Option<Vec<Int>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if !gcd.is_one() {
        for x in &mut ints {
            *x /= &gcd;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -(x.clone());
            }
        }
    }
    Some(ints)
}

/// Balanced representative of `x` modulo `m`: the unique value in
/// `(-m/2, m/2]` congruent to `x`.
pub fn balanced_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let mut r = x.mod_floor(m);
    if &r * 2 > *m {
        r -= m;
    }
    r
}

/// Rational reconstruction of `value mod modulus` with numerator bound
/// `max_num` and denominator bound `max_den` (Wang's algorithm).
///
/// Returns the unique fraction `n/d` with `|n| <= max_num`, `0 < d <= max_den`,
/// `gcd(n, d) = 1` and `n == value * d (mod modulus)` if one exists.
pub fn rational_reconstruct(
    value: &BigInt,
    modulus: &BigInt,
    max_num: &BigInt,
    max_den: &BigInt,
) -> Option<Rational> {
    let v0 = value.mod_floor(modulus);
    let mut v = (modulus.clone(), BigInt::zero());
    let mut w = (v0, BigInt::one());
    while w.0.magnitude() > max_num.magnitude() {
        let q = v.0.div_floor(&w.0);
        let next = (&v.0 - &q * &w.0, &v.1 - &q * &w.1);
        v = w;
        w = next;
        if w.0.is_zero() {
            return None;
        }
    }
    let (mut n, mut d) = w;
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    if d.is_zero() || d > *max_den {
        return None;
    }
    if !n.gcd(&d).is_one() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Deterministic Miller-Rabin for `u64`; the chosen base set is a proven
/// complete witness set below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `(a * b) mod m` without overflow.
#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `(a + b) mod m` without overflow.
#[inline]
pub fn add_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    let (s, c) = a.overflowing_add(b);
    if c || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` modulo the prime `p`.
#[inline]
pub fn inv_mod_u64(a: u64, p: u64) -> u64 {
    pow_mod_u64(a, p - 2, p)
}

/// Reduction of a big integer into `Z/p`, mapping negatives correctly.
pub fn bigint_mod_u64(x: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = x.mod_floor(&m);
    let (sign, digits) = r.to_u64_digits();
    debug_assert_ne!(sign, Sign::Minus);
    digits.first().copied().unwrap_or(0)
}
