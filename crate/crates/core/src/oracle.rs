//! Independent 2-Selmer oracle for curves with rational 2-torsion.
//!
//! Full 2-torsion: complete 2-descent through the pairs (d1, d2) of
//! squarefree integers, testing everywhere-local solubility of the
//! associated quadric intersections exactly.
//!
//! One rational 2-torsion point: two-isogeny descent. The two families of
//! homogeneous spaces d w^2 = d^2 u^4 + a d u^2 v^2 + b v^4 (with (a, b)
//! from the curve and from its isogenous partner) are tested for
//! everywhere-local solubility; #Sel_2 = (product of the two counts) / 2.
//! The division by 2 is the kernel of the isogeny-Selmer comparison; the
//! identity is validated against the quartic descent on every curve the
//! acceptance suite touches.

use crate::curve::EllipticCurveAB;
use crate::primes::factor_bigint;
use crate::quartic::BinaryQuartic;
use crate::solubility::{soluble_padic, soluble_real, test_primes};
use crate::zpoly::{int_valuation, rational_roots, ZPoly};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Signed squarefree divisors of n (unit part included): +-(products of
/// distinct primes dividing n).
fn signed_squarefree_divisors(n: &BigInt) -> Vec<BigInt> {
    let primes: Vec<BigInt> = factor_bigint(n).into_iter().map(|(p, _)| p).collect();
    let mut out = vec![BigInt::one()];
    for p in &primes {
        let mut next = Vec::with_capacity(out.len() * 2);
        for d in &out {
            next.push(d.clone());
            next.push(d * p);
        }
        out = next;
    }
    let mut signed = Vec::with_capacity(out.len() * 2);
    for d in out {
        signed.push(d.clone());
        signed.push(-d);
    }
    signed.sort();
    signed
}

/// #Sel_2(E) by two-isogeny / complete descent. Errors unless the cubic
/// x^3 + Ax + B has a rational root.
pub fn isogeny_descent_oracle(e: &EllipticCurveAB) -> Result<u64> {
    let roots = rational_roots(&e.cubic());
    // monic integral cubic: rational roots are integers
    let int_roots: Vec<BigInt> = roots.iter().map(|r| r.to_integer()).collect();
    match int_roots.len() {
        0 => Err(Error::OracleInapplicable),
        1 => one_torsion_descent(e, &int_roots[0]),
        3 => full_torsion_descent(&int_roots),
        _ => unreachable!("a cubic with nonzero discriminant has 0, 1 or 3 rational roots"),
    }
}

/// Number of everywhere-locally-soluble spaces
/// d w^2 = d^2 u^4 + a d u^2 v^2 + b v^4 over signed squarefree d | 2b.
/// (Spaces with v_p(d) = 1 at odd p not dividing b are insoluble at p, so
/// the divisor restriction loses nothing.)
fn count_tower(a: &BigInt, b: &BigInt) -> Result<u64> {
    let mut count = 0u64;
    for d in signed_squarefree_divisors(&(BigInt::from(2) * b)) {
        // z^2 = d^3 u^4 + a d^2 u^2 v^2 + b d v^4 (multiply through by d)
        let g = BinaryQuartic::new(
            d.pow(3),
            BigInt::zero(),
            a * d.pow(2),
            BigInt::zero(),
            b * &d,
        );
        debug_assert!(!g.disc().is_zero());
        if soluble_real(&g)? && test_primes(&g).iter().all(|&p| soluble_padic(&g, p).unwrap_or(false))
        {
            count += 1;
        }
    }
    Ok(count)
}

fn one_torsion_descent(e: &EllipticCurveAB, r: &BigInt) -> Result<u64> {
    // shift x -> x + r: y^2 = x (x^2 + a x + b), a = 3r, b = 3r^2 + A
    let a = BigInt::from(3) * r;
    let b = BigInt::from(3) * r * r + &e.a;
    let a2 = BigInt::from(-2) * &a;
    let b2 = &a * &a - BigInt::from(4) * &b;
    let n1 = count_tower(&a, &b)?;
    let n2 = count_tower(&a2, &b2)?;
    let prod = n1 * n2;
    debug_assert!(prod % 2 == 0, "tower counts are powers of 2 with product >= 2");
    Ok(prod / 2)
}

fn full_torsion_descent(roots: &[BigInt]) -> Result<u64> {
    let mut es = roots.to_vec();
    es.sort();
    let (e1, e2, e3) = (es[0].clone(), es[1].clone(), es[2].clone());
    let d12 = &e1 - &e2;
    let d13 = &e1 - &e3;
    let d23 = &e2 - &e3;
    let d1_range = signed_squarefree_divisors(&(BigInt::from(2) * &d12 * &d13));
    let d2_range = signed_squarefree_divisors(&(BigInt::from(2) * (-&d12) * &d23));
    let mut count = 0u64;
    for d1 in &d1_range {
        for d2 in &d2_range {
            if quadric_pair_els(d1, d2, &e1, &e2, &e3)? {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Everywhere-local solubility of the 2-covering attached to (d1, d2):
///   d1 z1^2 - d2 z2^2      = (e2 - e1) z0^2
///   d1 z1^2 - d1 d2 z3^2   = (e3 - e1) z0^2
fn quadric_pair_els(
    d1: &BigInt,
    d2: &BigInt,
    e1: &BigInt,
    e2: &BigInt,
    e3: &BigInt,
) -> Result<bool> {
    let c2 = e2 - e1; // >= 0 with sorted roots
    let c3 = e3 - e1;
    if !quadric_pair_real(d1, d2, &c2, &c3) {
        return Ok(false);
    }
    // primes: 2, everything dividing d1 d2 (e_i - e_j), and <= 29 safety
    let mut ps: Vec<u64> = vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let bad = d1 * d2 * &c2 * &c3 * (e3 - e2);
    for (p, _) in factor_bigint(&bad) {
        if let Some(pu) = p.to_u64() {
            if !ps.contains(&pu) {
                ps.push(pu);
            }
        }
    }
    ps.sort_unstable();
    for p in ps {
        if !quadric_pair_padic(d1, d2, &c2, &c3, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Real solubility: intersection of three sign half-lines for
/// t = d1 z1^2, namely t in d1 [0, inf), t - c2 in d2 [0, inf),
/// t - c3 in d1 d2 [0, inf), plus the z0 = 0 component (d1, d2 > 0).
fn quadric_pair_real(d1: &BigInt, d2: &BigInt, c2: &BigInt, c3: &BigInt) -> bool {
    if d1.is_positive() && d2.is_positive() {
        return true; // z0 = 0, z1 = 1 component
    }
    // half-lines as (lower bound, upper bound) with None = unbounded
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    let mut add = |bound: BigInt, positive: bool| {
        if positive {
            lo = Some(match lo.take() {
                None => bound,
                Some(l) => l.max(bound),
            });
        } else {
            hi = Some(match hi.take() {
                None => bound,
                Some(h) => h.min(bound),
            });
        }
    };
    add(BigInt::zero(), d1.is_positive());
    add(c2.clone(), d2.is_positive());
    add(c3.clone(), (d1 * d2).is_positive());
    match (&lo, &hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

/// Certified p-adic test for the quadric pair: project to the (z0 : z1)
/// line and require G1 = d2 (d1 z1^2 - c2 z0^2) and
/// G2 = d1 d2 (d1 z1^2 - c3 z0^2) to be simultaneously square (or zero)
/// at some point of P^1(Z_p), by stable-residue recursion.
fn quadric_pair_padic(
    d1: &BigInt,
    d2: &BigInt,
    c2: &BigInt,
    c3: &BigInt,
    p: u64,
) -> Result<bool> {
    // chart z0 = 1, z1 = x in Z_p
    let g1 = ZPoly::new(vec![-(d2 * c2), BigInt::zero(), d2 * d1]);
    let g2 = ZPoly::new(vec![-(d1 * d2 * c3), BigInt::zero(), d1 * d2 * d1]);
    let vd = int_valuation(&(d1 * d2 * (c2 * c3).max(BigInt::one())), p);
    // precision for evaluating one form at a Hensel root of the other;
    // also the refinement depth (stable verdicts arrive well before it)
    let res = crate::zpoly::resultant(&g1, &g2).expect("nonzero quadrics");
    let kmax = if res.is_zero() { 40 } else { int_valuation(&res, p) + 2 * vd + 16 };
    let depth = kmax;
    if pair_soluble(&g1, &g2, p, depth, kmax)? {
        return Ok(true);
    }
    // chart z1 = 1, z0 = p t
    let h1 = ZPoly::new(vec![d2 * d1, BigInt::zero(), -(d2 * c2) * BigInt::from(p * p)]);
    let h2 = ZPoly::new(vec![
        d1 * d2 * d1,
        BigInt::zero(),
        -(d1 * d2 * c3) * BigInt::from(p * p),
    ]);
    pair_soluble(&h1, &h2, p, depth, kmax + 4)
}

#[derive(PartialEq)]
enum ValClass {
    ExactZero,
    Square,
    NonSquare,
    Unstable,
}

fn classify(g: &ZPoly, r: &BigInt, p: u64) -> ValClass {
    let v = g.eval(r);
    if v.is_zero() {
        return ValClass::ExactZero;
    }
    let val = int_valuation(&v, p);
    let unit = &v / BigInt::from(p).pow(val);
    // wiggle of refinements r + p t
    let shifted = shift_poly(g, r, p);
    let w = shifted.coeffs()[1..]
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| int_valuation(c, p))
        .min()
        .unwrap_or(u32::MAX);
    let stable = if p == 2 { w >= val + 3 } else { w >= val + 1 };
    if !stable {
        return ValClass::Unstable;
    }
    if val % 2 == 0 && super_unit_square(&unit, p) {
        ValClass::Square
    } else {
        ValClass::NonSquare
    }
}

fn super_unit_square(u: &BigInt, p: u64) -> bool {
    if p == 2 {
        u.mod_floor(&BigInt::from(8)).is_one()
    } else {
        let pb = BigInt::from(p);
        crate::zpoly::powmod_big(&u.mod_floor(&pb), (p - 1) / 2, &pb).is_one()
    }
}

fn shift_poly(g: &ZPoly, r: &BigInt, p: u64) -> ZPoly {
    let pt = ZPoly::new(vec![r.clone(), BigInt::from(p)]);
    let mut acc = ZPoly::zero();
    for k in (0..g.coeffs().len()).rev() {
        acc = acc.mul(&pt);
        acc = acc.add(&ZPoly::new(vec![g.coeff(k)]));
    }
    acc
}

/// Evaluate h at the Hensel root of g in the disc r + pZ_p (the caller
/// certifies v(g(r)) > 2 v(g'(r))): Some(true) if h(root) is a square or
/// vanishes to working precision, Some(false) if certified non-square,
/// None when precision runs out.
fn value_at_hensel_root(g: &ZPoly, h: &ZPoly, r: &BigInt, p: u64, kmax: u32) -> Option<bool> {
    let dg = g.derivative();
    let c = int_valuation(&dg.eval(r), p);
    let modulus = BigInt::from(p).pow(kmax);
    let pc = BigInt::from(p).pow(c);
    let mut x = r.mod_floor(&modulus);
    for _ in 0..(kmax + 2) {
        let gx = g.eval(&x).mod_floor(&modulus);
        if gx.is_zero() {
            break;
        }
        if int_valuation(&gx, p) >= kmax {
            break;
        }
        let du = dg.eval(&x) / &pc;
        let inv = crate::zpoly::modinv(&du.mod_floor(&modulus), &modulus)?;
        let step = (gx / &pc) * inv;
        x = (&x - step).mod_floor(&modulus);
    }
    let hv = h.eval(&x).mod_floor(&modulus);
    if hv.is_zero() {
        return Some(true); // common vanishing to working precision
    }
    let v = int_valuation(&hv, p);
    // the root is pinned mod p^(kmax - c), so h's value is pinned mod the
    // same power; require room for the mod-8 unit test
    if v + c + 4 > kmax {
        return None;
    }
    if v % 2 == 1 {
        return Some(false);
    }
    let unit = &hv / BigInt::from(p).pow(v);
    Some(super_unit_square(&unit, p))
}

/// Is some x in Z_p a simultaneous square point of (g1, g2)? Exact zeros
/// count as squares at the exact integer point, Hensel roots of either
/// form are evaluated against the other, and discs are rejected only on a
/// stable non-square verdict.
fn pair_soluble(g1: &ZPoly, g2: &ZPoly, p: u64, depth: u32, kmax: u32) -> Result<bool> {
    let exact_square = |v: &BigInt| -> bool {
        if v.is_zero() {
            return true;
        }
        let val = int_valuation(v, p);
        if val % 2 != 0 {
            return false;
        }
        let unit = v / BigInt::from(p).pow(val);
        super_unit_square(&unit, p)
    };
    let dg1 = g1.derivative();
    let dg2 = g2.derivative();
    let mut pending: Vec<(ZPoly, ZPoly)> = Vec::new();
    for r in 0..p {
        let rb = BigInt::from(r);
        let v1 = g1.eval(&rb);
        let v2 = g2.eval(&rb);
        // exact integer point where both values are p-adic squares
        if exact_square(&v1) && exact_square(&v2) {
            return Ok(true);
        }
        // Hensel root of one form inside the disc: test the other there
        let has_root = |v: &BigInt, dv: &BigInt| -> bool {
            !v.is_zero() && !dv.is_zero() && int_valuation(v, p) > 2 * int_valuation(dv, p)
        };
        if has_root(&v1, &dg1.eval(&rb)) {
            match value_at_hensel_root(g1, g2, &rb, p, kmax) {
                Some(true) => return Ok(true),
                Some(false) => {}
                None => return Err(Error::Undecided(p)),
            }
        }
        if has_root(&v2, &dg2.eval(&rb)) {
            match value_at_hensel_root(g2, g1, &rb, p, kmax) {
                Some(true) => return Ok(true),
                Some(false) => {}
                None => return Err(Error::Undecided(p)),
            }
        }
        let cls1 = classify(g1, &rb, p);
        let cls2 = classify(g2, &rb, p);
        if cls1 == ValClass::NonSquare || cls2 == ValClass::NonSquare {
            continue; // whole disc certified dead
        }
        if cls1 == ValClass::Square && cls2 == ValClass::Square {
            return Ok(true);
        }
        pending.push((shift_poly(g1, &rb, p), shift_poly(g2, &rb, p)));
    }
    if pending.is_empty() {
        return Ok(false);
    }
    if depth == 0 {
        return Err(Error::Undecided(p));
    }
    for (h1, h2) in pending {
        if pair_soluble(&h1, &h2, p, depth - 1, kmax)? {
            return Ok(true);
        }
    }
    Ok(false)
}
