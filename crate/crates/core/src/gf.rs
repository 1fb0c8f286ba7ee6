//! Small finite fields GF(q) for prime powers q, with table-driven
//! arithmetic, and dense univariate polynomials over them. Elements are
//! indices 0..q; 0 and 1 are the additive and multiplicative identities.

use crate::{Error, Result};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::Arc;

#[derive(Debug)]
pub struct Gf {
    pub q: u32,
    pub p: u32,
    pub k: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

static FIELDS: Lazy<Mutex<HashMap<u32, Arc<Gf>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

impl Gf {
    /// The field with q elements; q = p^k with p prime, q <= 4096.
    pub fn field(q: u32) -> Result<Arc<Gf>> {
        if q < 2 || q > 4096 {
            return Err(Error::Unsupported(format!("field size {q}")));
        }
        if let Some(f) = FIELDS.lock().unwrap().get(&q) {
            return Ok(f.clone());
        }
        let (p, k) = prime_power(q).ok_or_else(|| Error::Unsupported(format!("{q} is not a prime power")))?;
        let f = Arc::new(Gf::build(p, k));
        FIELDS.lock().unwrap().insert(q, f.clone());
        Ok(f)
    }

    fn build(p: u32, k: u32) -> Gf {
        let q = p.pow(k);
        // Elements are base-p digit strings of length k, encoded as u32.
        // Multiplication mod a monic irreducible of degree k.
        let modulus = if k == 1 { vec![0, 1] } else { find_irreducible(p, k) };
        let enc = |digits: &[u32]| -> u32 {
            let mut v = 0;
            for i in (0..k as usize).rev() {
                v = v * p + digits[i];
            }
            v
        };
        let dec = |mut v: u32| -> Vec<u32> {
            let mut d = vec![0u32; k as usize];
            for di in d.iter_mut() {
                *di = v % p;
                v /= p;
            }
            d
        };
        let mut add = vec![0u16; (q * q) as usize];
        let mut mul = vec![0u16; (q * q) as usize];
        let mut neg = vec![0u16; q as usize];
        let mut inv = vec![0u16; q as usize];
        for a in 0..q {
            let da = dec(a);
            let na: Vec<u32> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = enc(&na) as u16;
            for b in 0..q {
                let db = dec(b);
                let ds: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = enc(&ds) as u16;
                // polynomial product reduced mod the irreducible
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for i in (k as usize..prod.len()).rev() {
                    let c = prod[i];
                    if c != 0 {
                        prod[i] = 0;
                        for (j, &m) in modulus.iter().enumerate().take(k as usize) {
                            let idx = i - k as usize + j;
                            prod[idx] = (prod[idx] + c * (p - m % p) % p) % p;
                        }
                    }
                }
                mul[(a * q + b) as usize] = enc(&prod[..k as usize]) as u16;
            }
        }
        for a in 1..q {
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                    break;
                }
            }
        }
        Gf { q, p, k, add, mul, neg, inv }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize] as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize] as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize] as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize] as u32
    }

    /// Image of an integer under Z -> GF(q) (lands in the prime field).
    pub fn from_int(&self, n: i64) -> u32 {
        let r = n.rem_euclid(self.p as i64) as u32;
        r
    }

    pub fn pow(&self, a: u32, e: u32) -> u32 {
        let mut acc = 1;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    for p in 2..=q {
        if q % p == 0 {
            let mut k = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
    }
    None
}

/// Monic irreducible of degree k over F_p, ascending coefficients, found
/// by trial division against all lower-degree monics.
fn find_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = p.pow(k);
    for tail in 0..total {
        let mut poly = vec![0u32; k as usize + 1];
        let mut v = tail;
        for item in poly.iter_mut().take(k as usize) {
            *item = v % p;
            v /= p;
        }
        poly[k as usize] = 1;
        if is_irreducible_fp(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducibles of every degree exist")
}

fn is_irreducible_fp(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    if k == 1 {
        return true;
    }
    // trial division by monic polynomials of degree 1..=k/2
    for d in 1..=k / 2 {
        let total = p.pow(d as u32);
        for tail in 0..total {
            let mut div = vec![0u32; d + 1];
            let mut v = tail;
            for item in div.iter_mut().take(d) {
                *item = v % p;
                v /= p;
            }
            div[d] = 1;
            if poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(n: &[u32], d: &[u32], p: u32) -> bool {
    let mut r: Vec<u32> = n.to_vec();
    let dd = d.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - dd;
            for (i, &c) in d.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + lead * (p - c % p)) % p;
            }
        }
        r.pop();
        while r.len() > dd && *r.last().unwrap() == 0 && r.len() > 1 {
            if *r.last().unwrap() == 0 && r.len() - 1 > dd {
                r.pop();
            } else {
                break;
            }
        }
    }
    r.iter().all(|&c| c == 0)
}

/// Dense polynomial over GF(q), ascending coefficients (canonical: no
/// trailing zeros). The zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqPoly {
    pub coeffs: Vec<u32>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn zero() -> Self {
        FqPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        FqPoly { coeffs: vec![1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 for zero.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> u32 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &FqPoly, f: &Gf) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u32; n];
        for (i, item) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *item = f.add(a, b);
        }
        FqPoly::new(out)
    }

    pub fn sub(&self, other: &FqPoly, f: &Gf) -> FqPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u32; n];
        for (i, item) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *item = f.sub(a, b);
        }
        FqPoly::new(out)
    }

    pub fn mul(&self, other: &FqPoly, f: &Gf) -> FqPoly {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        FqPoly::new(out)
    }

    pub fn scale(&self, c: u32, f: &Gf) -> FqPoly {
        FqPoly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// (quotient, remainder) with divisor nonzero.
    pub fn divrem(&self, d: &FqPoly, f: &Gf) -> (FqPoly, FqPoly) {
        assert!(!d.is_zero());
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        if r.len() <= dd {
            return (FqPoly::zero(), self.clone());
        }
        let mut q = vec![0u32; r.len() - dd];
        let lead_inv = f.inv(d.leading());
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], lead_inv);
            if c != 0 {
                q[i - dd] = c;
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, dc));
                }
            }
        }
        (FqPoly::new(q), FqPoly::new(r))
    }

    pub fn gcd(&self, other: &FqPoly, f: &Gf) -> FqPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, f);
            a = b;
            b = r;
        }
        if !a.is_zero() {
            let inv = f.inv(a.leading());
            a = a.scale(inv, f); // monic
        }
        a
    }

    pub fn derivative(&self, f: &Gf) -> FqPoly {
        if self.coeffs.len() <= 1 {
            return FqPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let mut m = 0u32;
            for _ in 0..(i as u32 % f.p) {
                m = f.add(m, c);
            }
            out.push(m);
        }
        FqPoly::new(out)
    }

    /// Squarefree: nonzero, and gcd(f, f') is constant with f' != 0 handled
    /// (f' = 0 with deg >= 1 means a p-th power). Nonzero constants count
    /// as squarefree.
    pub fn is_squarefree(&self, f: &Gf) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == 0 {
            return true;
        }
        let d = self.derivative(f);
        if d.is_zero() {
            return false;
        }
        self.gcd(&d, f).degree() == 0
    }

    /// v_pi(self): multiplicity of the monic irreducible pi in self.
    pub fn valuation_at(&self, pi: &FqPoly, f: &Gf) -> u32 {
        assert!(!self.is_zero());
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(pi, f);
            if r.is_zero() {
                cur = q;
                v += 1;
            } else {
                return v;
            }
        }
    }
}

/// All monic irreducible polynomials over GF(q) of degree in [1, dmax].
pub fn monic_irreducibles(f: &Gf, dmax: u32) -> Vec<FqPoly> {
    let q = f.q;
    let mut irr: Vec<FqPoly> = Vec::new();
    for d in 1..=dmax {
        let total = (q as u64).pow(d);
        'cand: for tail in 0..total {
            let mut coeffs = vec![0u32; d as usize + 1];
            let mut v = tail;
            for item in coeffs.iter_mut().take(d as usize) {
                *item = (v % q as u64) as u32;
                v /= q as u64;
            }
            coeffs[d as usize] = 1;
            let cand = FqPoly::new(coeffs);
            for p in &irr {
                if 2 * p.degree() > cand.degree() {
                    break;
                }
                let (_, r) = cand.divrem(p, f);
                if r.is_zero() {
                    continue 'cand;
                }
            }
            irr.push(cand);
        }
    }
    irr
}

/// Enumerate all polynomials over GF(q) of degree <= d (including zero,
/// encoded as d+1 base-q digits).
pub fn all_polys_up_to_degree(q: u32, d: i64) -> Vec<FqPoly> {
    if d < 0 {
        return vec![FqPoly::zero()];
    }
    let n = (d + 1) as u32;
    let total = (q as u64).pow(n);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut coeffs = vec![0u32; n as usize];
        let mut v = code;
        for item in coeffs.iter_mut() {
            *item = (v % q as u64) as u32;
            v /= q as u64;
        }
        out.push(FqPoly::new(coeffs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_is_a_field() {
        let f = Gf::field(4).unwrap();
        assert_eq!(f.p, 2);
        // every nonzero element has an inverse
        for a in 1..4u32 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        // characteristic 2: a + a = 0
        for a in 0..4u32 {
            assert_eq!(f.add(a, a), 0);
        }
        // multiplicative group has order 3
        for a in 2..4u32 {
            assert_eq!(f.pow(a, 3), 1);
        }
    }

    #[test]
    fn gf25_field() {
        let f = Gf::field(25).unwrap();
        for a in 1..25u32 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn not_a_prime_power() {
        assert!(Gf::field(6).is_err());
        assert!(Gf::field(12).is_err());
    }

    #[test]
    fn poly_arith_f3() {
        let f = Gf::field(3).unwrap();
        // (t+1)(t+2) = t^2 + 2 over F_3 (since 1*2=2, 1+2=0)
        let a = FqPoly::new(vec![1, 1]);
        let b = FqPoly::new(vec![2, 1]);
        assert_eq!(a.mul(&b, &f), FqPoly::new(vec![2, 0, 1]));
        let (q, r) = FqPoly::new(vec![2, 0, 1]).divrem(&a, &f);
        assert_eq!(q, b);
        assert!(r.is_zero());
    }

    #[test]
    fn squarefree_detects_squares() {
        let f = Gf::field(2).unwrap();
        let t = FqPoly::new(vec![0, 1]);
        let t2 = t.mul(&t, &f);
        assert!(t.is_squarefree(&f));
        assert!(!t2.is_squarefree(&f));
        // t^2 + t = t(t+1) squarefree
        assert!(FqPoly::new(vec![0, 1, 1]).is_squarefree(&f));
        // t^2 + 1 = (t+1)^2 over F_2
        assert!(!FqPoly::new(vec![1, 0, 1]).is_squarefree(&f));
    }

    #[test]
    fn count_irreducibles_f2() {
        let f = Gf::field(2).unwrap();
        let irr = monic_irreducibles(&f, 4);
        let by_deg = |d: i64| irr.iter().filter(|p| p.degree() == d).count();
        assert_eq!(by_deg(1), 2);
        assert_eq!(by_deg(2), 1);
        assert_eq!(by_deg(3), 2);
        assert_eq!(by_deg(4), 3);
    }
}
