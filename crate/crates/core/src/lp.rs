//! Dense exact-rational simplex with Bland's rule. Small by design: the
//! cusp checker's systems have at most a few dozen variables, and the
//! verdicts are mathematical claims, so no floating point appears here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// min c.x subject to A x = b, x >= 0.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<BigRational>, value: BigRational },
}

/// Inequality sense for the row builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// Convenience builder: min c.x s.t. rows (a_i . x <sense_i> b_i), x >= 0.
/// Slack variables are appended for the inequalities.
pub fn solve_with_slacks(
    rows: &[(Vec<BigRational>, Sense, BigRational)],
    c: &[BigRational],
) -> LpOutcome {
    let n = c.len();
    let slacks = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let mut a = Vec::with_capacity(rows.len());
    let mut b = Vec::with_capacity(rows.len());
    let mut slack_idx = 0usize;
    for (coefs, sense, rhs) in rows {
        assert_eq!(coefs.len(), n);
        let mut row = coefs.clone();
        row.resize(n + slacks, BigRational::zero());
        match sense {
            Sense::Le => {
                row[n + slack_idx] = BigRational::one();
                slack_idx += 1;
            }
            Sense::Ge => {
                row[n + slack_idx] = -BigRational::one();
                slack_idx += 1;
            }
            Sense::Eq => {}
        }
        a.push(row);
        b.push(rhs.clone());
    }
    let mut cost = c.to_vec();
    cost.resize(n + slacks, BigRational::zero());
    match solve(&LpProblem { a, b, c: cost }) {
        LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x: x[..n].to_vec(), value },
        other => other,
    }
}

/// Two-phase simplex, Bland's rule, exact arithmetic.
pub fn solve(p: &LpProblem) -> LpOutcome {
    let m = p.a.len();
    let n = if m == 0 { p.c.len() } else { p.a[0].len() };
    if m == 0 {
        if p.c.iter().any(|ci| ci.is_negative()) {
            return LpOutcome::Unbounded;
        }
        return LpOutcome::Optimal { x: vec![BigRational::zero(); n], value: BigRational::zero() };
    }
    // normalise b >= 0
    let mut a = p.a.clone();
    let mut b = p.b.clone();
    for i in 0..m {
        if b[i].is_negative() {
            b[i] = -b[i].clone();
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
        }
    }
    // phase 1 tableau with artificial basis
    let total = n + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = a[i].clone();
        row.resize(total, BigRational::zero());
        row[n + i] = BigRational::one();
        row.push(b[i].clone());
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let phase1_cost: Vec<BigRational> = (0..total)
        .map(|j| if j >= n { BigRational::one() } else { BigRational::zero() })
        .collect();
    let bounded = run_simplex(&mut t, &mut basis, &phase1_cost, total, total);
    debug_assert!(bounded, "phase 1 is bounded below by 0");
    let phase1_value: BigRational = basis
        .iter()
        .enumerate()
        .filter(|(_, &j)| j >= n)
        .map(|(i, _)| t[i][total].clone())
        .sum();
    if !phase1_value.is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive remaining artificials out of the basis where possible
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j, total);
            }
        }
    }
    // phase 2, artificial columns excluded from entering
    let mut phase2_cost = p.c.clone();
    phase2_cost.resize(total, BigRational::zero());
    if !run_simplex(&mut t, &mut basis, &phase2_cost, total, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][total].clone();
        }
    }
    let value: BigRational = (0..n).map(|j| &p.c[j] * &x[j]).sum();
    LpOutcome::Optimal { x, value }
}

fn reduced_cost(
    t: &[Vec<BigRational>],
    basis: &[usize],
    cost: &[BigRational],
    j: usize,
) -> BigRational {
    let mut r = cost[j].clone();
    for (i, &bi) in basis.iter().enumerate() {
        if !t[i][j].is_zero() {
            r -= &cost[bi] * &t[i][j];
        }
    }
    r
}

/// Bland's rule over the columns [0, allowed); false on unboundedness.
fn run_simplex(
    t: &mut Vec<Vec<BigRational>>,
    basis: &mut Vec<usize>,
    cost: &[BigRational],
    total: usize,
    allowed: usize,
) -> bool {
    loop {
        let mut entering = None;
        for j in 0..allowed {
            if basis.contains(&j) {
                continue;
            }
            if reduced_cost(t, basis, cost, j).is_negative() {
                entering = Some(j);
                break;
            }
        }
        let j = match entering {
            Some(j) => j,
            None => return true,
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..t.len() {
            if t[i][j].is_positive() {
                let ratio = &t[i][total] / &t[i][j];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let (i, _) = match leave {
            Some(x) => x,
            None => return false,
        };
        pivot(t, basis, i, j, total);
    }
}

fn pivot(t: &mut [Vec<BigRational>], basis: &mut [usize], i: usize, j: usize, total: usize) {
    let piv = t[i][j].clone();
    for v in t[i].iter_mut() {
        *v = &*v / &piv;
    }
    for r in 0..t.len() {
        if r != i && !t[r][j].is_zero() {
            let f = t[r][j].clone();
            for k in 0..=total {
                let delta = &f * &t[i][k];
                t[r][k] = &t[r][k] - delta;
            }
        }
    }
    basis[i] = j;
}

pub fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
