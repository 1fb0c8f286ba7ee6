//! Weighted projective heights over ℚ and 𝔽_q(t), minimal representatives,
//! and bounded-height enumeration of the fundamental domain.
//!
//! A point (A_1, ..., A_n) with weights (w_1, ..., w_n) is minimal when no
//! prime π has π^{w_i} | A_i for every i; minimal points are exactly the
//! fundamental-domain representatives, and for them the height is
//! max_i |A_i|^{1/w_i} with no ideal factor.

use crate::gf::{all_polys_up_to_degree, monic_irreducibles, FqPoly, Gf};
use crate::primes::{exact_root_bigint, factor_bigint};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem(pub Vec<u32>);

impl WeightSystem {
    pub fn new(w: Vec<u32>) -> Self {
        assert!(!w.is_empty() && w.iter().all(|&x| x >= 1));
        WeightSystem(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lcm(&self) -> u32 {
        self.0.iter().fold(1u32, |a, &b| a.lcm(&b))
    }

    /// Any weight odd? (If not, -1 acts trivially and sign normalisation
    /// is vacuous.)
    pub fn has_odd(&self) -> bool {
        self.0.iter().any(|&w| w % 2 == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WpsPointQ {
    pub coords: Vec<BigInt>,
}

impl WpsPointQ {
    pub fn from_i64(coords: &[i64]) -> Self {
        WpsPointQ { coords: coords.iter().map(|&c| BigInt::from(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Exact height value m^(1/root) with m a non-negative integer; canonical
/// form uses the smallest possible root index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightQ {
    pub power: BigInt,
    pub root: u32,
}

impl HeightQ {
    fn canonical(power: BigInt, root: u32) -> Self {
        // reduce (power, root) so HeightQ is unique per real value
        let mut best = HeightQ { power: power.clone(), root };
        let mut d = root;
        while d > 1 {
            if root % d == 0 {
                if let Some(m) = exact_root_bigint(&power, d) {
                    best = HeightQ { power: m, root: root / d };
                    break;
                }
            }
            d -= 1;
        }
        best
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        if self.root == 1 {
            Some(self.power.clone())
        } else {
            None
        }
    }

    /// Compare against an integer bound X: self <= X?
    pub fn le_int(&self, x: &BigInt) -> bool {
        self.power <= x.pow(self.root)
    }
}

impl std::fmt::Display for HeightQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.root == 1 {
            write!(f, "{}", self.power)
        } else {
            write!(f, "{}^(1/{})", self.power, self.root)
        }
    }
}

/// Height of a minimal rational point: max_i |A_i|^{1/w_i}, exact. The
/// ideal norm factor is 1 precisely because the point is minimal;
/// non-minimal input is refused.
pub fn height_q(point: &WpsPointQ, weights: &WeightSystem) -> Result<HeightQ> {
    if point.is_zero() {
        return Err(Error::ZeroPoint);
    }
    if !is_minimal_q(point, weights)? {
        return Err(Error::NotMinimal);
    }
    height_infinity(point, weights)
}

/// The archimedean local height max_i |A_i|^{1/w_i}, defined for every
/// nonzero point (no ideal factor, so it is not scaling-invariant).
pub fn height_infinity(point: &WpsPointQ, weights: &WeightSystem) -> Result<HeightQ> {
    if point.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let l = weights.lcm();
    let mut best = BigInt::zero();
    for (a, &w) in point.coords.iter().zip(&weights.0) {
        let e = l / w;
        let v = a.abs().pow(e);
        if v > best {
            best = v;
        }
    }
    Ok(HeightQ::canonical(best, l))
}

/// Minimality: for every prime p, some coordinate has v_p(A_i) < w_i.
pub fn is_minimal_q(point: &WpsPointQ, weights: &WeightSystem) -> Result<bool> {
    if point.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let mut g = BigInt::zero();
    for a in &point.coords {
        g = g.gcd(a);
    }
    // Offending primes divide the gcd of the nonzero coordinates.
    for (p, _) in factor_bigint(&g) {
        let fails = point.coords.iter().zip(&weights.0).all(|(a, &w)| {
            a.is_zero() || (a % p.pow(w)).is_zero()
        });
        if fails {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique minimal representative of the G_m(Q)-class, sign-normalised:
/// when some weight is odd, the first nonzero coordinate among those of
/// smallest odd weight is made positive (the only residual unit action).
pub fn reduce_to_minimal_q(point: &WpsPointQ, weights: &WeightSystem) -> Result<WpsPointQ> {
    if point.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let mut g = BigInt::zero();
    for a in &point.coords {
        g = g.gcd(a);
    }
    let mut alpha = BigInt::one();
    for (p, _) in factor_bigint(&g) {
        // largest e with p^(e*w_i) | A_i for all i
        let mut e = u32::MAX;
        for (a, &w) in point.coords.iter().zip(&weights.0) {
            if a.is_zero() {
                continue;
            }
            let v = crate::zpoly::int_valuation(a, p.to_u64().unwrap());
            e = e.min(v / w);
        }
        if e != u32::MAX && e > 0 {
            alpha *= p.pow(e);
        }
    }
    let mut coords: Vec<BigInt> = point
        .coords
        .iter()
        .zip(&weights.0)
        .map(|(a, &w)| a / alpha.pow(w))
        .collect();
    if weights.has_odd() {
        let min_odd = weights.0.iter().filter(|&&w| w % 2 == 1).min().copied().unwrap();
        let lead = coords
            .iter()
            .zip(&weights.0)
            .find(|(a, &w)| w == min_odd && !a.is_zero())
            .map(|(a, _)| a.clone());
        if let Some(a) = lead {
            if a.is_negative() {
                for (c, &w) in coords.iter_mut().zip(&weights.0) {
                    if w % 2 == 1 {
                        *c = -c.clone();
                    }
                }
            }
        }
    }
    Ok(WpsPointQ { coords })
}

/// Is the point already the canonical sign-normalised representative?
fn is_sign_canonical(point: &WpsPointQ, weights: &WeightSystem) -> bool {
    if !weights.has_odd() {
        return true;
    }
    let min_odd = weights.0.iter().filter(|&&w| w % 2 == 1).min().copied().unwrap();
    for (a, &w) in point.coords.iter().zip(&weights.0) {
        if w == min_odd && !a.is_zero() {
            return a.is_positive();
        }
    }
    true
}

/// Every minimal point of height <= X, deterministic lexicographic order
/// (coordinates ascending, first coordinate outermost). X is an integer
/// bound; H <= X is equivalent to |A_i| <= X^{w_i} for all i.
pub fn enumerate_minimal(x: u64, weights: &WeightSystem) -> Vec<WpsPointQ> {
    let mut out = Vec::new();
    let bounds: Vec<i64> = weights
        .0
        .iter()
        .map(|&w| (BigInt::from(x).pow(w)).to_i64().expect("bound fits i64 at desk scale"))
        .collect();
    let n = weights.len();
    let mut cur = vec![0i64; n];
    enumerate_rec(0, n, &bounds, &mut cur, weights, &mut out);
    out
}

fn enumerate_rec(
    i: usize,
    n: usize,
    bounds: &[i64],
    cur: &mut Vec<i64>,
    weights: &WeightSystem,
    out: &mut Vec<WpsPointQ>,
) {
    if i == n {
        let p = WpsPointQ::from_i64(cur);
        if !p.is_zero()
            && is_sign_canonical(&p, weights)
            && is_minimal_q(&p, weights).unwrap_or(false)
        {
            out.push(p);
        }
        return;
    }
    for v in -bounds[i]..=bounds[i] {
        cur[i] = v;
        enumerate_rec(i + 1, n, bounds, cur, weights, out);
    }
    cur[i] = 0;
}

/// Partitioned enumeration: the slices of the full enumeration obtained by
/// splitting the range of the first coordinate into `parts` chunks. The
/// concatenation equals `enumerate_minimal(x, weights)` exactly.
pub fn enumerate_minimal_partitioned(
    x: u64,
    weights: &WeightSystem,
    parts: usize,
) -> Vec<Vec<WpsPointQ>> {
    use rayon::prelude::*;
    let bound0 = BigInt::from(x).pow(weights.0[0]).to_i64().unwrap();
    let total = 2 * bound0 + 1;
    let parts = parts.max(1).min(total as usize);
    let chunk = (total as usize).div_ceil(parts);
    let ranges: Vec<(i64, i64)> = (0..parts)
        .map(|k| {
            let lo = -bound0 + (k * chunk) as i64;
            let hi = (-bound0 + ((k + 1) * chunk) as i64 - 1).min(bound0);
            (lo, hi)
        })
        .collect();
    ranges
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut out = Vec::new();
            let n = weights.len();
            let bounds: Vec<i64> = weights
                .0
                .iter()
                .map(|&w| BigInt::from(x).pow(w).to_i64().unwrap())
                .collect();
            let mut cur = vec![0i64; n];
            for v in lo..=hi {
                cur[0] = v;
                enumerate_rec(1, n, &bounds, &mut cur, weights, &mut out);
            }
            out
        })
        .collect()
}

/// A point over F_q[t].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WpsPointFq {
    pub coords: Vec<FqPoly>,
    pub q: u32,
}

impl WpsPointFq {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// Exact function-field height q^(num/den).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightFq {
    pub q: u32,
    pub num: i64,
    pub den: u32,
}

impl std::fmt::Display for HeightFq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g = (self.num.unsigned_abs()).gcd(&(self.den as u64)).max(1);
        let (n, d) = (self.num / g as i64, self.den / g as u32);
        if d == 1 {
            write!(f, "{}^{}", self.q, n)
        } else {
            write!(f, "{}^({}/{})", self.q, n, d)
        }
    }
}

/// Height of a minimal F_q[t]-point: q^max(deg A_i / w_i), exact exponent.
pub fn height_fq(point: &WpsPointFq, weights: &WeightSystem) -> Result<HeightFq> {
    if point.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let f = Gf::field(point.q)?;
    if !is_minimal_fq(point, weights, &f)? {
        return Err(Error::NotMinimal);
    }
    let l = weights.lcm();
    let mut best_num: Option<i64> = None;
    for (a, &w) in point.coords.iter().zip(&weights.0) {
        if a.is_zero() {
            continue;
        }
        let scaled = a.degree() * (l / w) as i64;
        best_num = Some(best_num.map_or(scaled, |b: i64| b.max(scaled)));
    }
    Ok(HeightFq { q: point.q, num: best_num.unwrap(), den: l })
}

/// Minimality over F_q[t]: for each monic irreducible pi, some coordinate
/// has v_pi(A_i) < w_i.
pub fn is_minimal_fq(point: &WpsPointFq, weights: &WeightSystem, f: &Gf) -> Result<bool> {
    if point.is_zero() {
        return Err(Error::ZeroPoint);
    }
    // candidate irreducibles divide gcd of nonzero coords
    let mut g = FqPoly::zero();
    for a in &point.coords {
        if !a.is_zero() {
            g = if g.is_zero() { a.clone() } else { g.gcd(a, f) };
        }
    }
    if g.degree() < 1 {
        return Ok(true);
    }
    let dmax = g.degree() as u32;
    for pi in monic_irreducibles(f, dmax) {
        let (_, r) = g.divrem(&pi, f);
        if !r.is_zero() {
            continue;
        }
        let fails = point.coords.iter().zip(&weights.0).all(|(a, &w)| {
            a.is_zero() || a.valuation_at(&pi, f) >= w
        });
        if fails {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orbit of a point under the unit action alpha.(A_i) = (alpha^{w_i} A_i),
/// alpha in F_q^*; returns the lexicographically smallest member.
fn canonical_unit_rep(point: &WpsPointFq, weights: &WeightSystem, f: &Gf) -> WpsPointFq {
    let mut best = point.clone();
    for alpha in 2..f.q {
        let mapped: Vec<FqPoly> = point
            .coords
            .iter()
            .zip(&weights.0)
            .map(|(a, &w)| a.scale(f.pow(alpha, w), f))
            .collect();
        let cand = WpsPointFq { coords: mapped, q: point.q };
        if cand.coords < best.coords {
            best = cand;
        }
    }
    best
}

/// One representative per G_m(F_q(t))-class with deg A_i <= w_i * d:
/// minimal points, one per unit orbit (lexicographically least member),
/// in deterministic order.
pub fn enumerate_minimal_fq(q: u32, d: i64, weights: &WeightSystem) -> Result<Vec<WpsPointFq>> {
    if ![2u32, 3, 4, 5].contains(&q) {
        return Err(Error::Unsupported(format!("q = {q} (desk scale supports q in {{2,3,4,5}})")));
    }
    let f = Gf::field(q)?;
    let per_coord: Vec<Vec<FqPoly>> = weights
        .0
        .iter()
        .map(|&w| all_polys_up_to_degree(q, w as i64 * d))
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; weights.len()];
    loop {
        let coords: Vec<FqPoly> = idx.iter().zip(&per_coord).map(|(&i, v)| v[i].clone()).collect();
        let p = WpsPointFq { coords, q };
        if !p.is_zero()
            && is_minimal_fq(&p, weights, &f)?
            && canonical_unit_rep(&p, weights, &f) == p
        {
            out.push(p);
        }
        // odometer
        let mut k = weights.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_coord[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Independent brute-force class count: enumerate the same box, filter
/// minimal points, and count orbits of the unit action directly.
pub fn brute_force_fq_class_count(q: u32, d: i64, weights: &WeightSystem) -> Result<usize> {
    let f = Gf::field(q)?;
    let per_coord: Vec<Vec<FqPoly>> = weights
        .0
        .iter()
        .map(|&w| all_polys_up_to_degree(q, w as i64 * d))
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut count = 0usize;
    let mut idx = vec![0usize; weights.len()];
    loop {
        let coords: Vec<FqPoly> = idx.iter().zip(&per_coord).map(|(&i, v)| v[i].clone()).collect();
        let p = WpsPointFq { coords, q };
        if !p.is_zero() && is_minimal_fq(&p, weights, &f)? && !seen.contains(&p.coords) {
            count += 1;
            // mark the whole orbit
            for alpha in 1..f.q {
                let mapped: Vec<FqPoly> = p
                    .coords
                    .iter()
                    .zip(&weights.0)
                    .map(|(a, &w)| a.scale(f.pow(alpha, w), &f))
                    .collect();
                seen.insert(mapped);
            }
        }
        let mut k = weights.len();
        loop {
            if k == 0 {
                return Ok(count);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_coord[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w46() -> WeightSystem {
        WeightSystem::new(vec![4, 6])
    }

    #[test]
    fn height_examples() {
        let h = height_q(&WpsPointQ::from_i64(&[1, 1]), &w46()).unwrap();
        assert_eq!(h.as_integer(), Some(BigInt::one()));
        // (0, 64) = 2.(0, 1) is non-minimal; its archimedean local height
        // is 64^(1/6) = 2, while height_q refuses it.
        let h = height_infinity(&WpsPointQ::from_i64(&[0, 64]), &w46()).unwrap();
        assert_eq!(h.as_integer(), Some(BigInt::from(2)));
        assert!(matches!(
            height_q(&WpsPointQ::from_i64(&[0, 64]), &w46()),
            Err(Error::NotMinimal)
        ));
        let h = height_q(&WpsPointQ::from_i64(&[0, 1]), &w46()).unwrap();
        assert_eq!(h.as_integer(), Some(BigInt::one()));
        // non-minimal input refused
        assert!(matches!(
            height_q(&WpsPointQ::from_i64(&[16, 64]), &w46()),
            Err(Error::NotMinimal)
        ));
    }

    #[test]
    fn minimality_examples() {
        assert!(!is_minimal_q(&WpsPointQ::from_i64(&[16, 64]), &w46()).unwrap());
        assert!(is_minimal_q(&WpsPointQ::from_i64(&[16, 32]), &w46()).unwrap());
        assert!(is_minimal_q(&WpsPointQ::from_i64(&[0, 1]), &w46()).unwrap());
        assert!(is_minimal_q(&WpsPointQ::from_i64(&[7, 0]), &w46()).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_to_minimal_q(&WpsPointQ::from_i64(&[16, 64]), &w46()).unwrap();
        assert_eq!(r, WpsPointQ::from_i64(&[1, 1]));
        let r = reduce_to_minimal_q(&WpsPointQ::from_i64(&[81 * 16, 729 * 64]), &w46()).unwrap();
        assert_eq!(r, WpsPointQ::from_i64(&[1, 1]));
        // all weights even: -1 acts trivially, representative unchanged
        let w24 = WeightSystem::new(vec![2, 4]);
        let r = reduce_to_minimal_q(&WpsPointQ::from_i64(&[-1, 1]), &w24).unwrap();
        assert_eq!(r, WpsPointQ::from_i64(&[-1, 1]));
        // odd weight: sign-normalised
        let w13 = WeightSystem::new(vec![1, 3]);
        let r = reduce_to_minimal_q(&WpsPointQ::from_i64(&[-2, 5]), &w13).unwrap();
        assert_eq!(r, WpsPointQ::from_i64(&[2, -5]));
    }

    #[test]
    fn reduce_idempotent_and_height_class_function() {
        let pts = [
            WpsPointQ::from_i64(&[3, -7]),
            WpsPointQ::from_i64(&[0, 5]),
            WpsPointQ::from_i64(&[12, 18]),
        ];
        for p in &pts {
            let r = reduce_to_minimal_q(p, &w46()).unwrap();
            assert_eq!(reduce_to_minimal_q(&r, &w46()).unwrap(), r);
            assert!(is_minimal_q(&r, &w46()).unwrap());
            // scale by alpha^w and reduce back: same representative
            for alpha in [2i64, 3, 6] {
                let scaled = WpsPointQ {
                    coords: p
                        .coords
                        .iter()
                        .zip(&w46().0)
                        .map(|(a, &w)| a * BigInt::from(alpha).pow(w))
                        .collect(),
                };
                let r2 = reduce_to_minimal_q(&scaled, &w46()).unwrap();
                assert_eq!(r2, r);
                assert_eq!(height_q(&r2, &w46()).unwrap(), height_q(&r, &w46()).unwrap());
            }
        }
    }

    #[test]
    fn enumerate_height_one_has_eight_points() {
        let pts = enumerate_minimal(1, &w46());
        assert_eq!(pts.len(), 8);
    }

    #[test]
    fn enumerate_matches_brute_force_filter() {
        // brute force: loop |A| <= X^4, |B| <= X^6, keep minimal
        for x in 1..=4u64 {
            let pts = enumerate_minimal(x, &w46());
            let mut brute = 0usize;
            let (ba, bb) = (x.pow(4) as i64, x.pow(6) as i64);
            for a in -ba..=ba {
                for b in -bb..=bb {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let p = WpsPointQ::from_i64(&[a, b]);
                    if is_minimal_q(&p, &w46()).unwrap() {
                        brute += 1;
                    }
                }
            }
            assert_eq!(pts.len(), brute, "X = {x}");
        }
    }

    #[test]
    fn enumerate_single_weight_squarefull_free() {
        // weights (2,), X = 5: minimal means no p with p^2 | A
        let w = WeightSystem::new(vec![2]);
        let pts = enumerate_minimal(5, &w);
        let mut brute = 0;
        for a in -25i64..=25 {
            if a == 0 {
                continue;
            }
            let sf = (2..=5i64).all(|p| a % (p * p) != 0);
            if sf {
                brute += 1;
            }
        }
        assert_eq!(pts.len(), brute);
    }

    #[test]
    fn partitioned_enumeration_merges_to_sequential() {
        let seq = enumerate_minimal(2, &w46());
        let par: Vec<_> =
            enumerate_minimal_partitioned(2, &w46(), 7).into_iter().flatten().collect();
        assert_eq!(seq, par);
    }

    #[test]
    fn fq_heights_and_minimality() {
        let f = Gf::field(3).unwrap();
        // (t^4 + 1, 0) over F_3, weights (4,6): height 3^(4/4) = 3
        let p = WpsPointFq { coords: vec![FqPoly::new(vec![1, 0, 0, 0, 1]), FqPoly::zero()], q: 3 };
        assert!(is_minimal_fq(&p, &w46(), &f).unwrap());
        let h = height_fq(&p, &w46()).unwrap();
        assert_eq!(format!("{h}"), "3^1");
        // (t^4, 0) over F_2 is non-minimal (t divides everything enough)
        let f2 = Gf::field(2).unwrap();
        let p = WpsPointFq { coords: vec![FqPoly::new(vec![0, 0, 0, 0, 1]), FqPoly::zero()], q: 2 };
        assert!(!is_minimal_fq(&p, &w46(), &f2).unwrap());
    }

    #[test]
    fn fq_enumeration_counts() {
        // q=2, weights (4,6), d=0: nonzero constant pairs, trivial unit action
        let v = enumerate_minimal_fq(2, 0, &w46()).unwrap();
        assert_eq!(v.len(), 3);
        // q=3, d=0: alpha^4 = alpha^6 = 1 for alpha in F_3^*, so the unit
        // action is trivial and all 8 nonzero constant pairs are classes.
        // (Computed by the brute-force oracle; the action has no effect.)
        let v = enumerate_minimal_fq(3, 0, &w46()).unwrap();
        assert_eq!(v.len(), brute_force_fq_class_count(3, 0, &w46()).unwrap());
        assert_eq!(v.len(), 8);
        // q=2, weights (2,), d=1: brute force oracle
        let w2 = WeightSystem::new(vec![2]);
        let v = enumerate_minimal_fq(2, 1, &w2).unwrap();
        assert_eq!(v.len(), brute_force_fq_class_count(2, 1, &w2).unwrap());
        assert!(enumerate_minimal_fq(7, 0, &w46()).is_err());
    }
}
