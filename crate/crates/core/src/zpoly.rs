//! Dense univariate polynomials over ℤ: resultants via the subresultant
//! pseudo-remainder sequence, discriminants, roots mod p, Hensel lifting,
//! local square tests, and exact real-root counting via Sturm chains.

use crate::primes::factor_bigint;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial with arbitrary-precision integer coefficients, ascending
/// degree. Canonical form: empty vector for zero, nonzero leading
/// coefficient otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> ZPoly {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i as u64 + 1))
                .collect(),
        )
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        ZPoly::new(out)
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Content: gcd of coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    fn divide_exact(&self, k: &BigInt) -> ZPoly {
        ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(k);
                    debug_assert!(r.is_zero());
                    q
                })
                .collect(),
        )
    }

    /// Pseudo-remainder: lc(d)^(deg n - deg d + 1) * n = q*d + r.
    fn prem(&self, d: &ZPoly) -> ZPoly {
        assert!(!d.is_zero());
        let mut r = self.clone();
        let dd = d.degree();
        let lc = d.leading();
        let e = (self.degree() - dd + 1).max(0);
        let mut steps = 0;
        while !r.is_zero() && r.degree() >= dd {
            let shift = (r.degree() - dd) as usize;
            let rl = r.leading();
            // r = lc*r - rl * x^shift * d
            let mut out = vec![BigInt::zero(); r.coeffs.len()];
            for (i, c) in r.coeffs.iter().enumerate() {
                out[i] = c * &lc;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                out[i + shift] -= c * &rl;
            }
            r = ZPoly::new(out);
            steps += 1;
        }
        // pad with lc factors so exactly e multiplications happened
        for _ in steps..e {
            r = r.scale(&lc);
        }
        r
    }
}

/// Resultant with the convention res(f, g) = lc(g)^deg(f) * prod f(beta)
/// over the roots beta of g; equivalently (-1)^(deg f * deg g) times the
/// other order. Subresultant PRS keeps intermediate coefficients small.
pub fn resultant(f: &ZPoly, g: &ZPoly) -> Result<BigInt> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    Ok(resultant_std(g, f))
}

/// res_std(a, b) = lc(a)^deg(b) * prod b(alpha) over roots alpha of a.
fn resultant_std(a: &ZPoly, b: &ZPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    if a.degree() == 0 {
        return a.leading().pow(b.degree() as u32);
    }
    if b.degree() == 0 {
        return b.leading().pow(a.degree() as u32);
    }
    // Cohen, Algorithm 3.3.7
    let (mut aa, mut bb) = (a.clone(), b.clone());
    let mut s = BigInt::one();
    if aa.degree() < bb.degree() {
        if aa.degree().is_odd() && bb.degree().is_odd() {
            s = -s;
        }
        std::mem::swap(&mut aa, &mut bb);
    }
    let ca = aa.content();
    let cb = bb.content();
    aa = aa.divide_exact(&ca);
    bb = bb.divide_exact(&cb);
    let t = ca.pow(bb.degree() as u32) * cb.pow(aa.degree() as u32);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = (aa.degree() - bb.degree()) as u32;
        if aa.degree().is_odd() && bb.degree().is_odd() {
            s = -s;
        }
        let r = aa.prem(&bb);
        aa = bb;
        let divisor = &g * h.pow(delta);
        bb = r.divide_exact(&divisor);
        g = aa.leading();
        // h = h^(1-delta) g^delta, exact in Z
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta);
            let den = h.pow(delta - 1);
            let (q, rem) = num.div_rem(&den);
            debug_assert!(rem.is_zero());
            q
        };
        if bb.is_zero() {
            return BigInt::zero();
        }
        if bb.degree() == 0 {
            // h = h^(1-deg aa) lc(bb)^(deg aa)
            let d = aa.degree() as u32;
            let num = bb.leading().pow(d);
            let den = h.pow(d.saturating_sub(1));
            let (q, rem) = num.div_rem(&den);
            debug_assert!(rem.is_zero());
            return s * t * q;
        }
    }
}

/// Discriminant (-1)^(d(d-1)/2) res(f, f')/lc(f), exact.
pub fn disc_univariate(f: &ZPoly) -> Result<BigInt> {
    let d = f.degree();
    if d < 1 {
        return Err(Error::ConstantPoly);
    }
    let r = resultant(f, &f.derivative())?;
    let lc = f.leading();
    let (q, rem) = r.div_rem(&lc);
    debug_assert!(rem.is_zero(), "res(f, f') must be divisible by lc(f)");
    let sign = if (d * (d - 1) / 2).is_odd() { -1 } else { 1 };
    Ok(q * BigInt::from(sign))
}

/// All residues x in [0, p) with f(x) = 0 mod p, ascending.
pub fn roots_mod_p(f: &ZPoly, p: u64) -> Result<Vec<u64>> {
    let pb = BigInt::from(p);
    let reduced: Vec<BigInt> = f.coeffs().iter().map(|c| c.mod_floor(&pb)).collect();
    if reduced.iter().all(|c| c.is_zero()) {
        return Err(Error::IdenticallyZero(p));
    }
    let mut out = Vec::new();
    for x in 0..p {
        let xb = BigInt::from(x);
        let mut acc = BigInt::zero();
        for c in reduced.iter().rev() {
            acc = (acc * &xb + c).mod_floor(&pb);
        }
        if acc.is_zero() {
            out.push(x);
        }
    }
    Ok(out)
}

/// Hensel lift of a simple root r of f mod p to a root mod p^k.
pub fn hensel_lift_root(f: &ZPoly, p: u64, r: u64, k: u32) -> Result<BigInt> {
    let pb = BigInt::from(p);
    let fr = f.eval(&BigInt::from(r)).mod_floor(&pb);
    if !fr.is_zero() {
        return Err(Error::BadInput(format!("{r} is not a root mod {p}")));
    }
    let fpr = f.derivative().eval(&BigInt::from(r)).mod_floor(&pb);
    if fpr.is_zero() {
        return Err(Error::HenselFails(p));
    }
    let mut s = BigInt::from(r);
    let mut modulus = pb.clone();
    for _ in 1..k {
        modulus *= &pb;
        // Newton step: s <- s - f(s) * f'(s)^{-1} mod modulus
        let fs = f.eval(&s).mod_floor(&modulus);
        let dfs = f.derivative().eval(&s).mod_floor(&modulus);
        let inv = modinv(&dfs, &modulus).expect("derivative is a unit");
        s = (&s - fs * inv).mod_floor(&modulus);
    }
    Ok(s)
}

/// Modular inverse when gcd(a, m) = 1.
pub fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// A place of Q: a finite prime or the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

/// Is the nonzero rational x a square in Q_p (or in R)?
///
/// Valuation parity plus a unit-part residue test; 1 + 8Z_2 at p = 2.
pub fn is_square_local(x: &BigRational, place: Place) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::Degenerate("square test of 0".into()));
    }
    match place {
        Place::Infinite => Ok(x.is_positive()),
        Place::Finite(p) => {
            let (v, unit_num, unit_den) = split_valuation(x, p);
            if v.is_odd() {
                return Ok(false);
            }
            let pb = BigInt::from(p);
            if p == 2 {
                let m = BigInt::from(8);
                let inv = modinv(&unit_den.mod_floor(&m), &m).unwrap();
                let u = (unit_num.mod_floor(&m) * inv).mod_floor(&m);
                Ok(u.is_one())
            } else {
                let inv = modinv(&unit_den.mod_floor(&pb), &pb).unwrap();
                let u = (unit_num.mod_floor(&pb) * inv).mod_floor(&pb);
                let e = (p - 1) / 2;
                Ok(powmod_big(&u, e, &pb).is_one())
            }
        }
    }
}

/// v_p(x) together with the numerator and denominator of the unit part.
pub fn split_valuation(x: &BigRational, p: u64) -> (i64, BigInt, BigInt) {
    let pb = BigInt::from(p);
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut v: i64 = 0;
    while !num.is_zero() && (&num % &pb).is_zero() {
        num /= &pb;
        v += 1;
    }
    while (&den % &pb).is_zero() {
        den /= &pb;
        v -= 1;
    }
    (v, num, den)
}

pub fn powmod_big(a: &BigInt, mut e: u64, m: &BigInt) -> BigInt {
    let mut base = a.mod_floor(m);
    let mut acc = BigInt::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).mod_floor(m);
        }
        base = (&base * &base).mod_floor(m);
        e >>= 1;
    }
    acc
}

/// v_p of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if r.is_zero() {
            m = q;
            v += 1;
        } else {
            return v;
        }
    }
}

/// Number of distinct real roots of f via a Sturm chain, exact.
pub fn count_real_roots(f: &ZPoly) -> usize {
    if f.degree() < 1 {
        return 0;
    }
    // Build the Sturm chain with pseudo-remainders, fixing signs so each
    // step is a positive multiple of the true remainder chain.
    let mut chain: Vec<ZPoly> = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.is_zero() {
            chain.pop();
            break;
        }
        if b.degree() == 0 {
            break;
        }
        let mut r = a.prem(b);
        // prem multiplies by lc(b)^e which may flip sign if lc(b) < 0 and
        // e is odd; normalise to a positive multiple of the remainder.
        let e = (a.degree() - b.degree() + 1) as u32;
        if b.leading().is_negative() && e.is_odd() {
            r = r.neg();
        }
        let c = r.content();
        let r = if c > BigInt::one() { r.divide_exact(&c) } else { r };
        chain.push(r.neg());
    }
    let sign_at_inf = |g: &ZPoly, plus: bool| -> i32 {
        if g.is_zero() {
            return 0;
        }
        let lc = g.leading();
        let s = if lc.is_positive() { 1 } else { -1 };
        if plus || g.degree().is_even() {
            s
        } else {
            -s
        }
    };
    let changes = |plus: bool| -> usize {
        let mut prev = 0;
        let mut n = 0;
        for g in &chain {
            let s = sign_at_inf(g, plus);
            if s != 0 {
                if prev != 0 && s != prev {
                    n += 1;
                }
                prev = s;
            }
        }
        n
    };
    changes(false) - changes(true)
}

/// Exact rational roots of an integer polynomial (via divisor search on
/// the reduced numerator/denominator candidates).
pub fn rational_roots(f: &ZPoly) -> Vec<BigRational> {
    let mut out = Vec::new();
    if f.is_zero() || f.degree() < 1 {
        return out;
    }
    // strip trailing zero coefficients: x | f
    let mut coeffs = f.coeffs().to_vec();
    let mut shift = 0;
    while coeffs[shift].is_zero() {
        shift += 1;
    }
    if shift > 0 {
        out.push(BigRational::zero());
        coeffs.drain(..shift);
    }
    let g = ZPoly::new(coeffs);
    if g.degree() < 1 {
        return out;
    }
    let a0 = g.coeff(0);
    let an = g.leading();
    let d0: Vec<BigInt> = divisors(&a0);
    let dn: Vec<BigInt> = divisors(&an);
    for num in &d0 {
        for den in &dn {
            if num.gcd(den).is_one() {
                for s in [1i32, -1] {
                    let cand = BigRational::new(num * BigInt::from(s), den.clone());
                    if g.eval_rational(&cand).is_zero() && !out.contains(&cand) {
                        out.push(cand);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let f = factor_bigint(n);
    let mut out = vec![BigInt::one()];
    for (p, e) in f {
        let mut next = Vec::new();
        for d in &out {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pe);
                pe *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn resultant_examples() {
        // res(x-1, x+1) = -2
        assert_eq!(resultant(&zp(&[-1, 1]), &zp(&[1, 1])).unwrap(), BigInt::from(-2));
        // res(x^2+1, x^2+1) = 0 (common factor)
        assert_eq!(resultant(&zp(&[1, 0, 1]), &zp(&[1, 0, 1])).unwrap(), BigInt::zero());
        // res(x^3-x, x^2-4) = f(2) f(-2) = 6 * -6 = -36
        assert_eq!(
            resultant(&zp(&[0, -1, 0, 1]), &zp(&[-4, 0, 1])).unwrap(),
            BigInt::from(-36)
        );
        assert!(resultant(&ZPoly::zero(), &ZPoly::zero()).is_err());
    }

    #[test]
    fn disc_examples() {
        assert_eq!(disc_univariate(&zp(&[0, -1, 0, 1])).unwrap(), BigInt::from(4));
        assert_eq!(disc_univariate(&zp(&[-1, 0, 1])).unwrap(), BigInt::from(4));
        // disc(x^4 + 1) = 256: the roots are the primitive 8th roots of
        // unity and the product of squared differences works out to
        // 2 * 4i * (-2) * (-2) * (-4i) * 2 = 256 (positive, as forced by
        // the two complex-conjugate pairs).
        assert_eq!(disc_univariate(&zp(&[1, 0, 0, 0, 1])).unwrap(), BigInt::from(256));
        assert!(disc_univariate(&zp(&[3])).is_err());
    }

    #[test]
    fn roots_mod_p_examples() {
        assert_eq!(roots_mod_p(&zp(&[1, 0, 1]), 5).unwrap(), vec![2, 3]);
        assert_eq!(roots_mod_p(&zp(&[1, 0, 1]), 7).unwrap(), Vec::<u64>::new());
        assert_eq!(roots_mod_p(&zp(&[0, -1, 0, 1]), 3).unwrap(), vec![0, 1, 2]);
        assert!(roots_mod_p(&zp(&[5, 10]), 5).is_err());
    }

    #[test]
    fn hensel_examples() {
        assert_eq!(hensel_lift_root(&zp(&[1, 0, 1]), 5, 2, 2).unwrap(), BigInt::from(7));
        assert_eq!(hensel_lift_root(&zp(&[-3, 1]), 7, 3, 4).unwrap(), BigInt::from(3));
        assert!(matches!(
            hensel_lift_root(&zp(&[0, 0, 1]), 2, 0, 2),
            Err(Error::HenselFails(2))
        ));
    }

    #[test]
    fn hensel_idempotent() {
        // lifting the lift mod p^(k-1) re-lifts to itself
        let f = zp(&[1, 0, 1]);
        let s3 = hensel_lift_root(&f, 5, 2, 3).unwrap();
        let s2 = hensel_lift_root(&f, 5, 2, 2).unwrap();
        assert_eq!(s3.mod_floor(&BigInt::from(25)), s2);
    }

    #[test]
    fn square_local_examples() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert!(!is_square_local(&q(-1, 1), Place::Infinite).unwrap());
        assert!(is_square_local(&q(17, 1), Place::Finite(2)).unwrap());
        assert!(!is_square_local(&q(5, 1), Place::Finite(5)).unwrap());
        assert!(is_square_local(&q(4, 9), Place::Finite(7)).unwrap());
        assert!(is_square_local_err_on_zero());
    }

    fn is_square_local_err_on_zero() -> bool {
        is_square_local(&BigRational::zero(), Place::Infinite).is_err()
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(count_real_roots(&zp(&[-1, 0, 1])), 2); // x^2-1
        assert_eq!(count_real_roots(&zp(&[1, 0, 1])), 0); // x^2+1
        assert_eq!(count_real_roots(&zp(&[0, -1, 0, 1])), 3); // x^3-x
        assert_eq!(count_real_roots(&zp(&[1, 0, 0, 0, 1])), 0); // x^4+1
        assert_eq!(count_real_roots(&zp(&[-1, 0, 0, 0, 1])), 2); // x^4-1
    }

    #[test]
    fn rational_roots_finds_integers() {
        // (x-2)(x+3)(2x-1) = 2x^3 + x^2 - 13x + 6
        let f = zp(&[6, -13, 1, 2]);
        let r = rational_roots(&f);
        assert_eq!(r.len(), 3);
        assert!(r.contains(&BigRational::new(BigInt::from(1), BigInt::from(2))));
    }

    #[test]
    fn resultant_antisymmetry_random() {
        // res(f,g) = (-1)^(deg f deg g) res(g,f) on a few hundred pairs
        let mut seed = 0x12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 19) as i64 - 9
        };
        for _ in 0..500 {
            let f = zp(&[rnd(), rnd(), rnd(), rnd()]);
            let g = zp(&[rnd(), rnd(), rnd()]);
            if f.is_zero() || g.is_zero() {
                continue;
            }
            let a = resultant(&f, &g).unwrap();
            let b = resultant(&g, &f).unwrap();
            let sign = if (f.degree() * g.degree()).is_odd() { -1 } else { 1 };
            assert_eq!(a, b * BigInt::from(sign));
        }
    }

    #[test]
    fn disc_shift_invariant() {
        let mut seed = 0x9876u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 15) as i64 - 7
        };
        for _ in 0..100 {
            let f = zp(&[rnd(), rnd(), rnd(), rnd(), 1]);
            let c = rnd();
            // f(x + c) by substitution
            let shifted = {
                let xpc = zp(&[c, 1]);
                let mut acc = ZPoly::zero();
                for k in (0..f.coeffs().len()).rev() {
                    acc = acc.mul(&xpc);
                    acc = acc.add(&ZPoly::new(vec![f.coeff(k)]));
                }
                acc
            };
            assert_eq!(disc_univariate(&f).unwrap(), disc_univariate(&shifted).unwrap());
        }
    }
}
