//! Binary quartic forms: invariants I and J, the section iota_2, the
//! unimodular GL_2(Z)-action, coefficient reduction, equivalence testing,
//! and complete per-invariant class enumeration.

use crate::curve::InvariantPair;
use crate::primes::{exact_root_bigint, isqrt_bigint};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

/// a x^4 + b x^3 y + c x^2 y^2 + d x y^3 + e y^4 with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryQuartic {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
}

impl BinaryQuartic {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt, e: BigInt) -> Self {
        BinaryQuartic { a, b, c, d, e }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64, e: i64) -> Self {
        BinaryQuartic::new(
            BigInt::from(a),
            BigInt::from(b),
            BigInt::from(c),
            BigInt::from(d),
            BigInt::from(e),
        )
    }

    pub fn coeffs(&self) -> [BigInt; 5] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone(), self.e.clone()]
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let x2 = x * x;
        let y2 = y * y;
        &self.a * &x2 * &x2
            + &self.b * &x2 * x * y
            + &self.c * &x2 * &y2
            + &self.d * x * &y2 * y
            + &self.e * &y2 * &y2
    }

    /// I = 12ae - 3bd + c^2, J = 72ace + 9bcd - 27ad^2 - 27eb^2 - 2c^3;
    /// the unique normalisation with invariants(iota2(I, J)) = (I, J).
    pub fn invariants(&self) -> InvariantPair {
        let (a, b, c, d, e) = (&self.a, &self.b, &self.c, &self.d, &self.e);
        let i = BigInt::from(12) * a * e - BigInt::from(3) * b * d + c * c;
        let j = BigInt::from(72) * a * c * e + BigInt::from(9) * b * c * d
            - BigInt::from(27) * a * d * d
            - BigInt::from(27) * e * b * b
            - BigInt::from(2) * c.pow(3);
        InvariantPair::new(i, j)
    }

    pub fn disc(&self) -> BigRational {
        self.invariants().disc()
    }

    /// Dehomogenisation f(x, 1) as an integer polynomial.
    pub fn poly_x(&self) -> crate::zpoly::ZPoly {
        crate::zpoly::ZPoly::new(vec![
            self.e.clone(),
            self.d.clone(),
            self.c.clone(),
            self.b.clone(),
            self.a.clone(),
        ])
    }

    /// f(1, y).
    pub fn poly_y(&self) -> crate::zpoly::ZPoly {
        crate::zpoly::ZPoly::new(vec![
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.e.clone(),
        ])
    }
}

impl std::fmt::Display for BinaryQuartic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {}, {})", self.a, self.b, self.c, self.d, self.e)
    }
}

/// Rational-coefficient quartic, used by the algebraic section.
pub type QuarticQ = [BigRational; 5];

/// Invariants of a rational quartic, same formulas over Q.
pub fn invariants_rational(f: &QuarticQ) -> (BigRational, BigRational) {
    let r = |n: i64| BigRational::from(BigInt::from(n));
    let (a, b, c, d, e) = (&f[0], &f[1], &f[2], &f[3], &f[4]);
    let i = r(12) * a * e - r(3) * b * d + c * c;
    let j = r(72) * a * c * e + r(9) * b * c * d
        - r(27) * a * d * d
        - r(27) * e * b * b
        - r(2) * c * c * c;
    (i, j)
}

/// iota2(I, J) = x^3 y - (I/3) x y^3 - (J/27) y^4.
pub fn section_iota2(i: &BigRational, j: &BigRational) -> QuarticQ {
    let r = |n: i64| BigRational::from(BigInt::from(n));
    [
        BigRational::zero(),
        r(1),
        BigRational::zero(),
        -(i / r(3)),
        -(j / r(27)),
    ]
}

pub fn section_iota2_int(inv: &InvariantPair) -> QuarticQ {
    section_iota2(
        &BigRational::from(inv.i.clone()),
        &BigRational::from(inv.j.clone()),
    )
}

/// The twisted substitution action g.f = f((x, y) * g) / det(g)^2 for
/// g in GL_2(Z); integral and invariant-preserving since det = +-1.
pub fn gl2_action(g: &[[i64; 2]; 2], f: &BinaryQuartic) -> Result<BinaryQuartic> {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if det != 1 && det != -1 {
        return Err(Error::NotUnimodular);
    }
    // X = g11 x + g21 y, Y = g12 x + g22 y; expand a X^4 + ... + e Y^4.
    let xv = [BigInt::from(g[0][0]), BigInt::from(g[1][0])];
    let yv = [BigInt::from(g[0][1]), BigInt::from(g[1][1])];
    let mul = |p: &Vec<BigInt>, q: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
        for (i, pi) in p.iter().enumerate() {
            for (j, qj) in q.iter().enumerate() {
                out[i + j] += pi * qj;
            }
        }
        out
    };
    let one = vec![BigInt::one()];
    let mut acc = vec![BigInt::zero(); 5];
    let coeffs = f.coeffs();
    for (k, coef) in coeffs.iter().enumerate() {
        // term coef * X^(4-k) Y^k
        let mut term = one.clone();
        for _ in 0..(4 - k) {
            term = mul(&term, &xv);
        }
        for _ in 0..k {
            term = mul(&term, &yv);
        }
        for (i, t) in term.iter().enumerate() {
            acc[i] += coef * t;
        }
    }
    Ok(BinaryQuartic::new(
        acc[0].clone(),
        acc[1].clone(),
        acc[2].clone(),
        acc[3].clone(),
        acc[4].clone(),
    ))
}

fn norm_of(f: &BinaryQuartic) -> BigInt {
    f.coeffs().iter().map(|c| c * c).sum()
}

fn lex_key(f: &BinaryQuartic) -> [BigInt; 5] {
    f.coeffs()
}

/// Coefficient reduction by steepest descent over unimodular generator
/// moves (shears both ways, swap, sign), with a deterministic symmetry
/// canonicalisation at the end. Idempotent.
pub fn reduce_quartic(f: &BinaryQuartic) -> Result<BinaryQuartic> {
    if f.disc().is_zero() {
        return Err(Error::Degenerate("reduce_quartic needs nonzero discriminant".into()));
    }
    let mut cur = f.clone();
    let mut cur_norm = norm_of(&cur);
    loop {
        let mut best: Option<(BigInt, BinaryQuartic)> = None;
        let mut consider = |g: [[i64; 2]; 2], cur: &BinaryQuartic| {
            let cand = gl2_action(&g, cur).unwrap();
            let n = norm_of(&cand);
            if n < cur_norm || (n == cur_norm && lex_key(&cand) < lex_key(cur)) {
                match &best {
                    Some((bn, bf)) if (&n, &lex_key(&cand)) >= (bn, &lex_key(bf)) => {}
                    _ => best = Some((n, cand)),
                }
            }
        };
        let mut shear_candidates: Vec<i64> = vec![-1, 1];
        if !cur.a.is_zero() {
            // shear x -> x + k y changes b by 4ak; aim k at -b/(4a)
            let k0 = rounded_ratio(&-&cur.b, &(BigInt::from(4) * &cur.a));
            shear_candidates.extend([k0 - 1, k0, k0 + 1]);
        }
        for k in shear_candidates.clone() {
            if k != 0 {
                consider([[1, 0], [k, 1]], &cur);
            }
        }
        let mut dual_candidates: Vec<i64> = vec![-1, 1];
        if !cur.e.is_zero() {
            let m0 = rounded_ratio(&-&cur.d, &(BigInt::from(4) * &cur.e));
            dual_candidates.extend([m0 - 1, m0, m0 + 1]);
        }
        for m in dual_candidates {
            if m != 0 {
                consider([[1, m], [0, 1]], &cur);
            }
        }
        consider([[0, 1], [1, 0]], &cur);
        consider([[1, 0], [0, -1]], &cur);
        match best {
            Some((n, cand)) => {
                cur = cand;
                cur_norm = n;
            }
            None => break,
        }
    }
    // canonicalise within the swap/sign symmetry images of equal norm
    let syms: [[[i64; 2]; 2]; 4] = [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[1, 0], [0, -1]],
        [[0, 1], [-1, 0]],
    ];
    let mut bestf = cur.clone();
    for g in &syms {
        let cand = gl2_action(g, &cur).unwrap();
        if norm_of(&cand) == cur_norm && lex_key(&cand) < lex_key(&bestf) {
            bestf = cand;
        }
    }
    Ok(bestf)
}

fn rounded_ratio(num: &BigInt, den: &BigInt) -> i64 {
    if den.is_zero() {
        return 0;
    }
    let two_num = BigInt::from(2) * num;
    let q = two_num.div_floor(&(BigInt::from(2) * den));
    let r = &two_num - &q * BigInt::from(2) * den;
    let half = den.abs();
    let out = if r.abs() > half { &q + BigInt::one() } else { q };
    out.to_i64().unwrap_or(0)
}

/// All 2x2 integer matrices with |entries| <= n and determinant +-1.
pub fn unimodular_matrices(n: i64) -> Vec<[[i64; 2]; 2]> {
    let mut out = Vec::new();
    for p in -n..=n {
        for q in -n..=n {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            // solve p s - q r = det for det in {1, -1}
            let e = BigInt::from(p).extended_gcd(&BigInt::from(q));
            // p*x + q*y = 1  =>  p*x - q*(-y) = 1
            let (x, y) = (e.x.to_i64().unwrap(), e.y.to_i64().unwrap());
            for det in [1i64, -1] {
                let s0 = det * x;
                let r0 = -det * y;
                // family: s = s0 + t q, r = r0 + t p
                let ts: Vec<i64> = if p != 0 {
                    let lo = (-n - r0).div_euclid(p).min((n - r0).div_euclid(p)) - 2;
                    let hi = (-n - r0).div_euclid(p).max((n - r0).div_euclid(p)) + 2;
                    (lo..=hi).collect()
                } else {
                    let lo = (-n - s0).div_euclid(q).min((n - s0).div_euclid(q)) - 2;
                    let hi = (-n - s0).div_euclid(q).max((n - s0).div_euclid(q)) + 2;
                    (lo..=hi).collect()
                };
                for t in ts {
                    let s = s0 + t * q;
                    let r = r0 + t * p;
                    if s.abs() <= n && r.abs() <= n && p * s - q * r == det {
                        out.push([[p, q], [r, s]]);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

static UNIMODULAR_10: Lazy<Vec<[[i64; 2]; 2]>> = Lazy::new(|| unimodular_matrices(10));
static UNIMODULAR_50: Lazy<Vec<[[i64; 2]; 2]>> = Lazy::new(|| unimodular_matrices(50));

/// Outcome of an equivalence test, with the escalation audit flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivOutcome {
    pub equivalent: bool,
    pub escalated: bool,
}

pub fn is_equivalent_z_detail(f1: &BinaryQuartic, f2: &BinaryQuartic) -> Result<EquivOutcome> {
    if f1.invariants() != f2.invariants() {
        return Ok(EquivOutcome { equivalent: false, escalated: false });
    }
    let r1 = reduce_quartic(f1)?;
    let r2 = reduce_quartic(f2)?;
    if r1 == r2 {
        return Ok(EquivOutcome { equivalent: true, escalated: false });
    }
    for g in UNIMODULAR_10.iter() {
        if gl2_action(g, &r1)? == r2 {
            return Ok(EquivOutcome { equivalent: true, escalated: false });
        }
    }
    for g in UNIMODULAR_50.iter() {
        if gl2_action(g, &r1)? == r2 {
            return Ok(EquivOutcome { equivalent: true, escalated: true });
        }
    }
    Ok(EquivOutcome { equivalent: false, escalated: true })
}

/// GL_2(Z)-equivalence via reduction plus bounded unimodular search
/// (entry bound 10, escalated to 50 before declaring inequivalent).
pub fn is_equivalent_z(f1: &BinaryQuartic, f2: &BinaryQuartic) -> Result<bool> {
    Ok(is_equivalent_z_detail(f1, f2)?.equivalent)
}

/// Natural coefficient scale for invariants (I, J): both |I|^(1/2) and
/// |J|^(1/3), rounded up.
pub fn coefficient_scale(inv: &InvariantPair) -> i64 {
    let s1 = isqrt_bigint(&inv.i.abs()).to_i64().unwrap_or(i64::MAX / 4) + 1;
    let mut lo = 0i64;
    let mut hi = 1i64 << 22;
    let ja = inv.j.abs();
    while lo < hi {
        let mid = (lo + hi) / 2;
        if BigInt::from(mid).pow(3) >= ja {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    s1.max(lo + 1)
}

/// All integral quartics with the given invariants whose first three
/// coefficients lie in [-w, w]; d and e are solved exactly from (I, J).
/// Safe for i128 at desk scale; values are checked back in BigInt.
pub fn search_quartics_in_box(inv: &InvariantPair, w: i64) -> Vec<BinaryQuartic> {
    let i_t = inv.i.to_i128().expect("I fits i128");
    let j_t = inv.j.to_i128().expect("J fits i128");
    let mut hits: Vec<[i128; 5]> = Vec::new();
    for a in -(w as i128)..=(w as i128) {
        if a == 0 {
            continue;
        }
        for b in -(w as i128)..=(w as i128) {
            for c in -(w as i128)..=(w as i128) {
                // 324 a^2 d^2 - 81 b (4ac - b^2) d + R = 0 with
                // R = 12 a J - (72ac - 27 b^2)(I - c^2) + 24 a c^3
                let p2 = 324 * a * a;
                let q1 = -81 * b * (4 * a * c - b * b);
                let r0 = 12 * a * j_t - (72 * a * c - 27 * b * b) * (i_t - c * c)
                    + 24 * a * c * c * c;
                let disc = q1 * q1 - 4 * p2 * r0;
                if disc < 0 {
                    continue;
                }
                let s = match crate::primes::exact_sqrt_i128(disc) {
                    Some(s) => s,
                    None => continue,
                };
                for sign in [1i128, -1] {
                    if sign == -1 && s == 0 {
                        continue;
                    }
                    let num = -q1 + sign * s;
                    let den = 2 * p2;
                    if num % den != 0 {
                        continue;
                    }
                    let d = num / den;
                    let enum_ = i_t + 3 * b * d - c * c;
                    if enum_ % (12 * a) != 0 {
                        continue;
                    }
                    let e = enum_ / (12 * a);
                    hits.push([a, b, c, d, e]);
                }
            }
        }
    }
    // a = 0 branch: I = -3bd + c^2, J = 9bcd - 27 b^2 e - 2c^3
    for b in -(w as i128)..=(w as i128) {
        if b == 0 {
            continue;
        }
        for c in -(w as i128)..=(w as i128) {
            let dn = c * c - i_t;
            if dn % (3 * b) != 0 {
                continue;
            }
            let d = dn / (3 * b);
            let en = 9 * b * c * d - 2 * c * c * c - j_t;
            if en % (27 * b * b) != 0 {
                continue;
            }
            let e = en / (27 * b * b);
            hits.push([0, b, c, d, e]);
        }
    }
    hits.sort_unstable();
    hits.dedup();
    let mut out = Vec::new();
    for h in hits {
        let f = BinaryQuartic::new(
            BigInt::from(h[0]),
            BigInt::from(h[1]),
            BigInt::from(h[2]),
            BigInt::from(h[3]),
            BigInt::from(h[4]),
        );
        debug_assert_eq!(f.invariants(), *inv);
        if f.invariants() == *inv {
            out.push(f);
        }
    }
    out
}

/// A complete, duplicate-free list of GL_2(Z)-classes with the given
/// nonsingular invariants. The box is twice the natural coefficient scale
/// (cross-checked against brute force in the tests; any class must have a
/// reduced representative with small leading coefficients).
pub fn enumerate_quartics_with_invariants(inv: &InvariantPair) -> Result<Vec<BinaryQuartic>> {
    if inv.is_singular() {
        return Err(Error::SingularInvariants);
    }
    let w = (2 * coefficient_scale(inv)).max(5);
    let hits = search_quartics_in_box(inv, w);
    group_into_classes(&hits)
}

/// Reduce every form and keep one representative per GL_2(Z)-class,
/// sorted. Returns reduced representatives.
pub fn group_into_classes(forms: &[BinaryQuartic]) -> Result<Vec<BinaryQuartic>> {
    let mut reduced: Vec<BinaryQuartic> = Vec::new();
    for f in forms {
        let r = reduce_quartic(f)?;
        if reduced.contains(&r) {
            continue;
        }
        let mut dup = false;
        for known in &reduced {
            if is_equivalent_z(known, &r)? {
                dup = true;
                break;
            }
        }
        if !dup {
            reduced.push(r);
        }
    }
    reduced.sort();
    Ok(reduced)
}

/// Brute-force oracle: every integral quartic with all |coefficients| <= w
/// and the given invariants, grouped into classes.
pub fn brute_force_classes(inv: &InvariantPair, w: i64) -> Result<Vec<BinaryQuartic>> {
    let mut hits = Vec::new();
    let iw = w as i128;
    let (it, jt) = (inv.i.to_i128().unwrap(), inv.j.to_i128().unwrap());
    for a in -iw..=iw {
        for b in -iw..=iw {
            for c in -iw..=iw {
                for d in -iw..=iw {
                    // e determined when possible, else skip
                    // I = 12ae - 3bd + c^2
                    if a != 0 {
                        let num = it + 3 * b * d - c * c;
                        if num % (12 * a) != 0 {
                            continue;
                        }
                        let e = num / (12 * a);
                        if e.abs() > iw {
                            continue;
                        }
                        let j = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b
                            - 2 * c * c * c;
                        if j == jt {
                            hits.push(BinaryQuartic::from_i64(
                                a as i64, b as i64, c as i64, d as i64, e as i64,
                            ));
                        }
                    } else {
                        if -3 * b * d + c * c != it {
                            continue;
                        }
                        for e in -iw..=iw {
                            let j = 9 * b * c * d - 27 * e * b * b - 2 * c * c * c;
                            if j == jt {
                                hits.push(BinaryQuartic::from_i64(
                                    0, b as i64, c as i64, d as i64, e as i64,
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    group_into_classes(&hits)
}

/// Do two class lists represent the same set of GL_2(Z)-classes?
pub fn same_class_sets(xs: &[BinaryQuartic], ys: &[BinaryQuartic]) -> Result<bool> {
    if xs.len() != ys.len() {
        return Ok(false);
    }
    for x in xs {
        let mut found = false;
        for y in ys {
            if is_equivalent_z(x, y)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Integer quartic from a rational one when the denominators clear.
pub fn quartic_from_rational(f: &QuarticQ) -> Option<BinaryQuartic> {
    if f.iter().all(|c| c.is_integer()) {
        Some(BinaryQuartic::new(
            f[0].to_integer(),
            f[1].to_integer(),
            f[2].to_integer(),
            f[3].to_integer(),
            f[4].to_integer(),
        ))
    } else {
        None
    }
}

/// Does |J| admit an exact integer cube root etc.; helper for tests.
pub fn is_perfect_cube(n: &BigInt) -> bool {
    exact_root_bigint(&n.abs(), 3).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn invariant_examples() {
        // x^4 + y^4 -> (12, 0)
        let f = BinaryQuartic::from_i64(1, 0, 0, 0, 1);
        assert_eq!(f.invariants(), InvariantPair::from_i64(12, 0));
        // x^3 y - x y^3 -> (3, 0) = invariants of iota2(3, 0)
        let f = BinaryQuartic::from_i64(0, 1, 0, -1, 0);
        assert_eq!(f.invariants(), InvariantPair::from_i64(3, 0));
    }

    #[test]
    fn section_identity_examples() {
        let s = section_iota2(&q(3), &q(0));
        let (i, j) = invariants_rational(&s);
        assert_eq!((i, j), (q(3), q(0)));
        // iota2(0, 27) = x^3 y - y^4
        let s = section_iota2(&q(0), &q(27));
        assert_eq!(s[1], q(1));
        assert_eq!(s[4], q(-1));
        // degenerate: iota2(0,0) = x^3 y
        let s = section_iota2(&q(0), &q(0));
        assert!(s[3].is_zero() && s[4].is_zero());
    }

    #[test]
    fn section_identity_random() {
        let mut seed = 0xabcdu64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 2_000_001) as i64 - 1_000_000
        };
        for _ in 0..1000 {
            let (i, j) = (q(rnd()), q(rnd()));
            let s = section_iota2(&i, &j);
            assert_eq!(invariants_rational(&s), (i, j));
        }
    }

    #[test]
    fn gl2_action_examples() {
        let f = BinaryQuartic::from_i64(1, 2, 3, 4, 5);
        let id = [[1, 0], [0, 1]];
        assert_eq!(gl2_action(&id, &f).unwrap(), f);
        let swap = [[0, 1], [1, 0]];
        assert_eq!(gl2_action(&swap, &f).unwrap(), BinaryQuartic::from_i64(5, 4, 3, 2, 1));
        // shear x -> x + y applied to x^4: (x+y)^4
        let x4 = BinaryQuartic::from_i64(1, 0, 0, 0, 0);
        let shear = [[1, 0], [1, 1]];
        assert_eq!(gl2_action(&shear, &x4).unwrap(), BinaryQuartic::from_i64(1, 4, 6, 4, 1));
        assert!(gl2_action(&[[2, 0], [0, 1]], &f).is_err());
    }

    #[test]
    fn gl2_action_preserves_invariants() {
        let mats = unimodular_matrices(3);
        let mut seed = 0x77u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 21) as i64 - 10
        };
        for t in 0..1000 {
            let f = BinaryQuartic::from_i64(rnd(), rnd(), rnd(), rnd(), rnd());
            let g = mats[t % mats.len()];
            assert_eq!(gl2_action(&g, &f).unwrap().invariants(), f.invariants());
        }
    }

    #[test]
    fn reduce_fixes_small_forms_and_roundtrips() {
        let f = BinaryQuartic::from_i64(0, 1, 0, -1, 0);
        let r = reduce_quartic(&f).unwrap();
        assert_eq!(reduce_quartic(&r).unwrap(), r);
        assert_eq!(norm_of(&r), norm_of(&f)); // already minimal norm
        // scramble by a big shear and reduce back to the same class
        let g = [[1, 0], [9, 1]];
        let h = gl2_action(&g, &f).unwrap();
        let rh = reduce_quartic(&h).unwrap();
        assert!(is_equivalent_z(&rh, &f).unwrap());
        assert!(norm_of(&rh) <= norm_of(&h));
    }

    #[test]
    fn equivalence_by_construction() {
        let f = BinaryQuartic::from_i64(1, 0, 0, 0, 1);
        for g in unimodular_matrices(4).iter().step_by(7) {
            let h = gl2_action(g, &f).unwrap();
            assert!(is_equivalent_z(&f, &h).unwrap());
        }
        // invariant mismatch short-circuits to false
        let other = BinaryQuartic::from_i64(0, 1, 0, -4, 0);
        assert!(!is_equivalent_z(&f, &other).unwrap());
    }

    #[test]
    fn enumerate_contains_sections() {
        // (3, 0): contains the class of x^3 y - x y^3
        let cls = enumerate_quartics_with_invariants(&InvariantPair::from_i64(3, 0)).unwrap();
        let target = BinaryQuartic::from_i64(0, 1, 0, -1, 0);
        assert!(cls.iter().any(|f| is_equivalent_z(f, &target).unwrap()));
        // (0, 27): contains x^3 y - y^4
        let cls = enumerate_quartics_with_invariants(&InvariantPair::from_i64(0, 27)).unwrap();
        let target = BinaryQuartic::from_i64(0, 1, 0, 0, -1);
        assert!(cls.iter().any(|f| is_equivalent_z(f, &target).unwrap()));
        assert!(enumerate_quartics_with_invariants(&InvariantPair::from_i64(0, 0)).is_err());
    }

    #[test]
    fn enumerate_matches_brute_force_at_48_0() {
        let inv = InvariantPair::from_i64(48, 0);
        let fast = enumerate_quartics_with_invariants(&inv).unwrap();
        let brute = brute_force_classes(&inv, 20).unwrap();
        assert!(same_class_sets(&fast, &brute).unwrap(),
            "fast {:?} vs brute {:?}", fast, brute);
    }

    #[test]
    fn two_classes_with_equal_invariants_are_distinguished() {
        // At (3,0) there is more than one integral class; find two
        // inequivalent ones by enumeration and check is_equivalent_z.
        let cls = enumerate_quartics_with_invariants(&InvariantPair::from_i64(3, 0)).unwrap();
        if cls.len() >= 2 {
            assert!(!is_equivalent_z(&cls[0], &cls[1]).unwrap());
        }
    }

    #[test]
    fn unimodular_generation_is_complete_small() {
        // cross-check against the quadruple loop at n = 3
        let fast = unimodular_matrices(3);
        let mut slow = Vec::new();
        for p in -3i64..=3 {
            for q_ in -3i64..=3 {
                for r in -3i64..=3 {
                    for s in -3i64..=3 {
                        let det = p * s - q_ * r;
                        if det == 1 || det == -1 {
                            slow.push([[p, q_], [r, s]]);
                        }
                    }
                }
            }
        }
        slow.sort();
        slow.dedup();
        assert_eq!(fast, slow);
    }

    #[test]
    fn disc_vanishes_iff_repeated_root() {
        use crate::zpoly::disc_univariate;
        let mut seed = 0x31u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 9) as i64 - 4
        };
        let mut seen_zero = false;
        let mut seen_nonzero = false;
        for _ in 0..2000 {
            let f = BinaryQuartic::from_i64(rnd(), rnd(), rnd(), rnd(), rnd());
            let p = if f.a.is_zero() { f.poly_y() } else { f.poly_x() };
            if p.degree() < 1 {
                continue;
            }
            let du = disc_univariate(&p).unwrap();
            let dv = f.disc();
            if f.a.is_zero() && f.e.is_zero() {
                // both dehomogenisations drop degree; skip the comparison
                continue;
            }
            if f.a.is_zero() || f.e.is_zero() {
                // degree drops: form disc picks up extra root at infinity
                continue;
            }
            assert_eq!(du.is_zero(), dv.is_zero(), "f = {f}");
            if dv.is_zero() {
                seen_zero = true;
            } else {
                seen_nonzero = true;
            }
        }
        assert!(seen_zero && seen_nonzero);
    }
}
