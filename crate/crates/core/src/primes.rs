//! Prime utilities: sieve, deterministic Miller–Rabin, Pollard rho
//! factorisation, exact integer square roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Primes up to `n` inclusive, by Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut is_comp = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !is_comp[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                is_comp[m] = true;
                m += p;
            }
        }
    }
    out
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    // m < 2^64 so the product fits in u128
    (a * b) % m
}

fn powmod(mut a: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1u128;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for u64 (witness set valid below 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'next: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a as u128, d as u128, n as u128);
        if x == 1 || x == (n - 1) as u128 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n as u128);
            if x == (n - 1) as u128 {
                continue 'next;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // n odd composite, not a prime power of small primes
    let mut c = 1u64;
    loop {
        let f = |x: u128| (mulmod(x, x, n as u128) + c as u128) % n as u128;
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = if x > y { x - y } else { y - x };
            d = gcd_u64(diff as u64, n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Factor `n` into (prime, exponent) pairs, ascending. Trial division by
/// small primes, then Pollard rho on the cofactor.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if n == 1 {
            break;
        }
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut rest: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            rest.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    rest.sort_unstable();
    let mut i = 0;
    while i < rest.len() {
        let p = rest[i];
        let mut e = 0;
        while i < rest.len() && rest[i] == p {
            e += 1;
            i += 1;
        }
        out.push((p, e));
    }
    out.sort_unstable();
    out
}

/// Factor a BigInt magnitude that fits desk scale (|n| < 2^63 after small
/// prime stripping is assumed by callers; larger inputs strip small primes
/// and rho the u64 cofactor).
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    if m <= BigInt::one() {
        return out;
    }
    for p in primes_up_to(1000) {
        let pb = BigInt::from(p);
        let mut e = 0;
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
            out.push((pb, e));
        }
        if m.is_one() {
            break;
        }
    }
    if !m.is_one() {
        let small = m
            .to_u64()
            .expect("cofactor exceeds u64 after trial division; out of desk scale");
        for (p, e) in factor_u64(small) {
            out.push((BigInt::from(p), e));
        }
    }
    out.sort();
    out
}

/// Floor of the integer square root.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128 + 2;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Exact square root of an i128 if it is a perfect square.
pub fn exact_sqrt_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt_u128(n as u128);
    if r * r == n as u128 {
        Some(r as i128)
    } else {
        None
    }
}

/// Floor square root for BigInt (n >= 0).
pub fn isqrt_bigint(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    if n.is_zero() {
        return BigInt::zero();
    }
    let mut x: BigInt = BigInt::one() << (n.bits() / 2 + 1);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            break;
        }
        x = y;
    }
    while &x * &x > *n {
        x -= 1;
    }
    x
}

/// Exact k-th root of a non-negative BigInt if it is a perfect power.
pub fn exact_root_bigint(n: &BigInt, k: u32) -> Option<BigInt> {
    assert!(k >= 1);
    if n.is_negative() {
        return None;
    }
    if n.is_zero() || n.is_one() || k == 1 {
        return Some(n.clone());
    }
    let bits = n.bits();
    let mut lo = BigInt::one();
    let mut hi: BigInt = BigInt::one() << (bits / k as u64 + 2);
    while lo < hi {
        let mid: BigInt = (&lo + &hi + 1) >> 1;
        if mid.pow(k) <= *n {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if lo.pow(k) == *n {
        Some(lo)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_and_mr_agree() {
        let sieved = primes_up_to(2000);
        for n in 0..=2000u64 {
            assert_eq!(is_prime_u64(n), sieved.binary_search(&n).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn factor_roundtrip() {
        for n in [2u64, 12, 97, 1024, 600851475143, 999999999989, 1_000_003 * 999_983] {
            let f = factor_u64(n);
            let back: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(back, n);
            for (p, _) in f {
                assert!(is_prime_u64(p));
            }
        }
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..1000u128 {
            let r = isqrt_u128(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(exact_sqrt_i128(144), Some(12));
        assert_eq!(exact_sqrt_i128(145), None);
        assert_eq!(exact_root_bigint(&BigInt::from(4096), 12), Some(BigInt::from(2)));
        assert_eq!(exact_root_bigint(&BigInt::from(4095), 12), None);
    }
}
