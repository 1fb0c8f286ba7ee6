//! Desk-scale geometry-of-numbers experiments: exact lattice counts in a
//! sheared expanding box against the volume-plus-projection error shape,
//! and congruence-restricted counts against the (L/m)^n + 1 bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Axis-aligned base box [x0, x1] x [y0, y1] with rational corners.
#[derive(Debug, Clone)]
pub struct BoxQ {
    pub x0: BigRational,
    pub x1: BigRational,
    pub y0: BigRational,
    pub y1: BigRational,
}

impl BoxQ {
    pub fn unit() -> Self {
        BoxQ {
            x0: BigRational::zero(),
            x1: BigRational::one(),
            y0: BigRational::zero(),
            y1: BigRational::one(),
        }
    }

    pub fn from_i64(x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        let r = |n: i64| BigRational::from(BigInt::from(n));
        BoxQ { x0: r(x0), x1: r(x1), y0: r(y0), y1: r(y1) }
    }
}

#[derive(Debug, Clone)]
pub struct DavenportReport {
    /// Exact number of Z^2 points in the closed image of the box under
    /// diag(t1, t2) * [[1, shear], [0, 1]].
    pub count: u64,
    /// Exact area of the image.
    pub volume: BigRational,
    /// Largest 1-dimensional coordinate projection length of the image.
    pub projection_bound: BigRational,
}

/// Count lattice points in the image of `bx` under the skewed dilation
/// (u, v) -> (t1 (u + s v), t2 v), by exact scanline over integer rows.
/// The region is closed, so axis boxes count (L+1)^2 points.
pub fn davenport_experiment(bx: &BoxQ, shear: &BigRational, t1: u64, t2: u64) -> DavenportReport {
    let t1r = BigRational::from(BigInt::from(t1));
    let t2r = BigRational::from(BigInt::from(t2));
    let volume = (&bx.x1 - &bx.x0) * (&bx.y1 - &bx.y0) * &t1r * &t2r;
    let x_extent = &t1r * ((&bx.x1 - &bx.x0) + shear.abs() * (&bx.y1 - &bx.y0));
    let y_extent = &t2r * (&bx.y1 - &bx.y0);
    let projection_bound = if x_extent > y_extent { x_extent } else { y_extent };

    // y = t2 v with v in [y0, y1]
    let ylo = (&bx.y0 * &t2r).ceil().to_integer();
    let yhi = (&bx.y1 * &t2r).floor().to_integer();
    let mut count = 0u64;
    let mut y = ylo;
    while y <= yhi {
        let v = BigRational::from(y.clone()) / &t2r;
        // x in t1*[x0 + s v, x1 + s v]
        let sv = shear * &v;
        let xlo = (&t1r * (&bx.x0 + &sv)).ceil().to_integer();
        let xhi = (&t1r * (&bx.x1 + &sv)).floor().to_integer();
        if xhi >= xlo {
            count += (xhi - &xlo + BigInt::one()).to_u64().unwrap();
        }
        y += 1;
    }
    DavenportReport { count, volume, projection_bound }
}

#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub count: u64,
    /// The bound value ((L/m)^n + 1) * #targets, exact.
    pub bound: BigRational,
}

/// Exact count of a in [0, L)^n with (a mod m) in `targets`, plus the
/// expected-shape bound.
pub fn congruence_count(l: u64, m: u64, targets: &[Vec<u64>], n: usize) -> CongruenceReport {
    assert!(l >= 1 && m >= 1);
    let mut count = 0u64;
    for t in targets {
        assert_eq!(t.len(), n);
        let mut prod = 1u64;
        for &r in t {
            let r = r % m;
            // #{0 <= a < L : a = r mod m}
            let c = if r < l { (l - 1 - r) / m + 1 } else { 0 };
            prod *= c;
        }
        count += prod;
    }
    let ratio = BigRational::new(BigInt::from(l).pow(n as u32), BigInt::from(m).pow(n as u32));
    let bound = (ratio + BigRational::one()) * BigRational::from(BigInt::from(targets.len() as u64));
    CongruenceReport { count, bound }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn axis_box_counts() {
        for l in [1u64, 4, 10] {
            let r = davenport_experiment(&BoxQ::unit(), &BigRational::zero(), l, l);
            assert_eq!(r.count, (l + 1) * (l + 1));
            assert_eq!(r.volume, q((l * l) as i64, 1));
        }
    }

    #[test]
    fn sheared_box_matches_brute_force() {
        // brute-force oracle: scan a superset grid and test membership
        let shear = q(1, 2);
        let (t1, t2) = (7u64, 5u64);
        let rep = davenport_experiment(&BoxQ::unit(), &shear, t1, t2);
        let mut brute = 0u64;
        for x in -20i64..=20 {
            for y in -20i64..=20 {
                // membership: v = y/t2 in [0,1], u = x/t1 - s v in [0,1]
                let v = q(y, t2 as i64);
                if v < BigRational::zero() || v > BigRational::one() {
                    continue;
                }
                let u = q(x, t1 as i64) - &shear * &v;
                if u >= BigRational::zero() && u <= BigRational::one() {
                    brute += 1;
                }
            }
        }
        assert_eq!(rep.count, brute);
    }

    #[test]
    fn davenport_error_shape() {
        // |count - volume| <= C (projection + 1) with one constant across
        // a grid of (t1, t2, shear)
        let mut worst = BigRational::zero();
        for &t1 in &[1u64, 3, 10, 50, 200] {
            for &t2 in &[1u64, 7, 40, 200] {
                for s in [q(-2, 1), q(-1, 3), q(0, 1), q(1, 2), q(2, 1)] {
                    let r = davenport_experiment(&BoxQ::unit(), &s, t1, t2);
                    let err = (BigRational::from(BigInt::from(r.count)) - &r.volume).abs();
                    let ratio = err / (&r.projection_bound + BigRational::one());
                    if ratio > worst {
                        worst = ratio;
                    }
                }
            }
        }
        assert!(worst <= q(8, 1), "fitted constant too large: {worst}");
    }

    #[test]
    fn congruence_examples() {
        let r = congruence_count(10, 5, &[vec![0, 0]], 2);
        assert_eq!(r.count, 4);
        assert_eq!(r.bound, q(5, 1));
        let r = congruence_count(6, 7, &[vec![1, 1]], 2);
        assert_eq!(r.count, 1);
        assert_eq!(r.bound, q(85, 49));
        // full residue set in one variable
        let all: Vec<Vec<u64>> = (0..5).map(|r| vec![r]).collect();
        let r = congruence_count(25, 5, &all, 1);
        assert_eq!(r.count, 25);
    }

    #[test]
    fn congruence_bound_holds_randomly() {
        let mut seed = 77u64;
        let mut rnd = |hi: u64| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) % hi
        };
        for _ in 0..200 {
            let l = 1 + rnd(40);
            let m = 1 + rnd(12);
            let n = 1 + rnd(2) as usize;
            let k = 1 + rnd(4) as usize;
            let mut targets = Vec::new();
            for _ in 0..k {
                targets.push((0..n).map(|_| rnd(m)).collect::<Vec<_>>());
            }
            targets.sort();
            targets.dedup();
            let r = congruence_count(l, m, &targets, n);
            let lhs = BigRational::from(BigInt::from(r.count));
            assert!(lhs <= q(2, 1) * &r.bound, "count {} bound {}", r.count, r.bound);
        }
    }
}
