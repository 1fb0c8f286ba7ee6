//! Torus-character combinatorics behind the cusp-cutting verdicts: the
//! domination order on weights over the simple-root basis, saturated-set
//! enumeration via next-closure, and exact LP verification of the two
//! character-theoretic conditions (with re-verifiable witnesses).

use crate::lp::{solve_with_slacks, LpOutcome, Sense};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

pub type RootVector = Vec<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub label: String,
    pub vector: RootVector,
}

/// Torus-character dataset: occurring weights (with multiplicity, as
/// distinct labels), the Haar-measure character delta, and the subsets
/// whose vanishing forces non-genericity.
#[derive(Debug, Clone)]
pub struct RepDatum {
    pub name: String,
    pub rank: usize,
    pub u0: Vec<Character>,
    pub delta: RootVector,
    /// Index sets into u0, each sorted ascending.
    pub nongeneric_subsets: Vec<Vec<usize>>,
}

type BitSet = u64;

const ENUM_GUARD: usize = 40;
const SET_BUDGET: usize = 400_000;

impl RepDatum {
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.u0.iter().position(|c| c.label == label)
    }

    pub fn labels_to_bitset(&self, labels: &BTreeSet<String>) -> Result<BitSet> {
        let mut b = 0u64;
        for l in labels {
            let i = self
                .label_index(l)
                .ok_or_else(|| Error::BadInput(format!("unknown label {l}")))?;
            b |= 1 << i;
        }
        Ok(b)
    }

    pub fn bitset_to_labels(&self, b: BitSet) -> BTreeSet<String> {
        (0..self.u0.len())
            .filter(|i| b >> i & 1 == 1)
            .map(|i| self.u0[i].label.clone())
            .collect()
    }

    fn check_guard(&self) -> Result<()> {
        if self.u0.len() > ENUM_GUARD {
            return Err(Error::GuardExceeded(format!(
                "{} characters exceeds the saturation guard of {ENUM_GUARD}",
                self.u0.len()
            )));
        }
        Ok(())
    }

    /// Well-posedness: delta strictly negative in every coordinate.
    pub fn is_well_posed(&self) -> bool {
        self.delta.len() == self.rank
            && self.delta.iter().all(|d| d.is_negative())
            && self.u0.iter().all(|c| c.vector.len() == self.rank)
    }

    /// Sum of all occurring characters (with multiplicity).
    pub fn weight_sum(&self) -> RootVector {
        let mut acc = vec![BigRational::zero(); self.rank];
        for c in &self.u0 {
            for (a, v) in acc.iter_mut().zip(&c.vector) {
                *a += v;
            }
        }
        acc
    }
}

/// v1 >= v2 in the root order: componentwise difference non-negative.
pub fn dominates(v1: &RootVector, v2: &RootVector) -> Result<bool> {
    if v1.len() != v2.len() {
        return Err(Error::RankMismatch);
    }
    Ok(v1.iter().zip(v2).all(|(a, b)| a >= b))
}

/// Saturation context with a memo table for the domination LPs.
pub struct SaturationCtx<'a> {
    rep: &'a RepDatum,
    memo: RefCell<HashMap<(BitSet, usize), Option<Vec<BigRational>>>>,
}

impl<'a> SaturationCtx<'a> {
    pub fn new(rep: &'a RepDatum) -> Self {
        SaturationCtx { rep, memo: RefCell::new(HashMap::new()) }
    }

    /// Does U dominate chi: is there a degree-1 non-negative combination
    /// of U componentwise >= chi? Returns the witness coefficients
    /// (indexed like U's members) on success.
    pub fn set_dominates(&self, u: BitSet, chi: usize) -> Option<Vec<BigRational>> {
        if u == 0 {
            return None; // the empty set dominates nothing
        }
        if u >> chi & 1 == 1 {
            // chi itself: witness is the unit coefficient
            let members: Vec<usize> = self.members(u);
            let mut w = vec![BigRational::zero(); members.len()];
            let pos = members.iter().position(|&m| m == chi).unwrap();
            w[pos] = BigRational::one();
            return Some(w);
        }
        if let Some(hit) = self.memo.borrow().get(&(u, chi)) {
            return hit.clone();
        }
        let result = self.solve_domination(u, chi);
        self.memo.borrow_mut().insert((u, chi), result.clone());
        result
    }

    fn members(&self, u: BitSet) -> Vec<usize> {
        (0..self.rep.u0.len()).filter(|i| u >> i & 1 == 1).collect()
    }

    fn solve_domination(&self, u: BitSet, chi: usize) -> Option<Vec<BigRational>> {
        let rep = self.rep;
        let members = self.members(u);
        let target = &rep.u0[chi].vector;
        // cheap necessary condition: a convex combination cannot exceed
        // the componentwise maximum of U
        for k in 0..rep.rank {
            let mx = members.iter().map(|&m| &rep.u0[m].vector[k]).max().unwrap();
            if mx < &target[k] {
                return None;
            }
        }
        // LP feasibility: a >= 0, sum a = 1, sum a psi_k >= chi_k
        let n = members.len();
        let mut rows: Vec<(Vec<BigRational>, Sense, BigRational)> = Vec::new();
        rows.push((vec![BigRational::one(); n], Sense::Eq, BigRational::one()));
        for k in 0..rep.rank {
            let coefs: Vec<BigRational> =
                members.iter().map(|&m| rep.u0[m].vector[k].clone()).collect();
            rows.push((coefs, Sense::Ge, target[k].clone()));
        }
        match solve_with_slacks(&rows, &vec![BigRational::zero(); n]) {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    /// Least saturated superset: U plus every character it dominates,
    /// iterated to a fixpoint.
    pub fn saturate(&self, mut u: BitSet) -> BitSet {
        loop {
            let mut grew = false;
            for chi in 0..self.rep.u0.len() {
                if u >> chi & 1 == 0 && self.set_dominates(u, chi).is_some() {
                    u |= 1 << chi;
                    grew = true;
                }
            }
            if !grew {
                return u;
            }
        }
    }
}

/// Public label-level domination test with the witness map.
pub fn set_dominates_chi(
    rep: &RepDatum,
    u: &BTreeSet<String>,
    chi: &str,
) -> Result<Option<BTreeMap<String, BigRational>>> {
    let ctx = SaturationCtx::new(rep);
    let ub = rep.labels_to_bitset(u)?;
    let ci = rep
        .label_index(chi)
        .ok_or_else(|| Error::BadInput(format!("unknown label {chi}")))?;
    Ok(ctx.set_dominates(ub, ci).map(|w| {
        let members: Vec<usize> = (0..rep.u0.len()).filter(|i| ub >> i & 1 == 1).collect();
        members
            .iter()
            .zip(w)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&m, c)| (rep.u0[m].label.clone(), c))
            .collect()
    }))
}

/// Saturation closure of a label set.
pub fn saturate(rep: &RepDatum, u: &BTreeSet<String>) -> Result<BTreeSet<String>> {
    rep.check_guard()?;
    let ctx = SaturationCtx::new(rep);
    let ub = rep.labels_to_bitset(u)?;
    Ok(rep.bitset_to_labels(ctx.saturate(ub)))
}

/// All saturated subsets, by Ganter's next-closure over the saturation
/// operator, in lectic order. Guarded by the character cap and a set
/// budget so runs stay deterministic.
pub fn enumerate_saturated(rep: &RepDatum) -> Result<Vec<BTreeSet<String>>> {
    rep.check_guard()?;
    let ctx = SaturationCtx::new(rep);
    let n = rep.u0.len();
    let mut out: Vec<BitSet> = Vec::new();
    let mut cur = ctx.saturate(0);
    loop {
        out.push(cur);
        if out.len() > SET_BUDGET {
            return Err(Error::GuardExceeded(format!(
                "more than {SET_BUDGET} saturated sets"
            )));
        }
        let mut advanced = false;
        for i in (0..n).rev() {
            if cur >> i & 1 == 1 {
                continue;
            }
            let below: BitSet = (1 << i) - 1;
            let b = ctx.saturate((cur & below) | (1 << i));
            // lectic successor test: nothing new below position i
            if (b & below) & !cur == 0 {
                cur = b;
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok(out.into_iter().map(|b| rep.bitset_to_labels(b)).collect())
}

/// Saturated subsets containing none of the non-generic index sets,
/// explored from the empty set (admissibility is downward closed, so the
/// pruned search still reaches every admissible saturated set).
pub fn enumerate_admissible_saturated(rep: &RepDatum) -> Result<Vec<BTreeSet<String>>> {
    rep.check_guard()?;
    let ctx = SaturationCtx::new(rep);
    let nongeneric: Vec<BitSet> = rep
        .nongeneric_subsets
        .iter()
        .map(|s| s.iter().fold(0u64, |b, &i| b | 1 << i))
        .collect();
    let admissible = |u: BitSet| nongeneric.iter().all(|&g| u & g != g);
    let n = rep.u0.len();
    let root = ctx.saturate(0);
    if !admissible(root) {
        return Ok(vec![]);
    }
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut stack = vec![root];
    seen.insert(root);
    while let Some(u) = stack.pop() {
        if seen.len() > SET_BUDGET {
            return Err(Error::GuardExceeded(format!(
                "more than {SET_BUDGET} admissible saturated sets"
            )));
        }
        for i in 0..n {
            if u >> i & 1 == 1 {
                continue;
            }
            let v = ctx.saturate(u | (1 << i));
            if admissible(v) && !seen.contains(&v) {
                seen.insert(v);
                stack.push(v);
            }
        }
    }
    let mut sets: Vec<BitSet> = seen.into_iter().collect();
    sets.sort_by_key(|b| (b.count_ones(), *b));
    Ok(sets.into_iter().map(|b| rep.bitset_to_labels(b)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    Cond2,
    Cond3,
}

#[derive(Debug, Clone)]
pub enum CaseId {
    /// A saturated subset (condition 2).
    Subset(BTreeSet<String>),
    /// A simple root index (condition 3).
    Root(usize),
}

#[derive(Debug, Clone)]
pub struct LpCase {
    pub id: CaseId,
    pub feasible: bool,
    /// Witness coefficients: pi_U on U0 - U for condition 2 (non-negative,
    /// degree < #U), pi_alpha on U0 for condition 3 (non-positive).
    pub witness: BTreeMap<String, BigRational>,
    /// Strictness margin (> 0 on success for condition 2).
    pub margin: BigRational,
}

#[derive(Debug, Clone)]
pub struct LpReport {
    pub condition: Condition,
    pub cases: Vec<LpCase>,
    pub all_feasible: bool,
    /// Number of admissible saturated sets examined (condition 2).
    pub admissible_count: usize,
}

/// Condition 2: for every admissible saturated U there is a non-negative
/// pi_U on U0 - U of degree < #U with pi_U + delta + sum(U0 - U) strictly
/// negative. Strictness is encoded by margin maximisation with a unit cap.
pub fn check_condition2(rep: &RepDatum) -> Result<LpReport> {
    if !rep.is_well_posed() {
        return Err(Error::BadInput("rep datum is not well-posed".into()));
    }
    let sets = enumerate_admissible_saturated(rep)?;
    let mut cases = Vec::new();
    for labels in &sets {
        let case = condition2_case(rep, labels)?;
        debug_assert!(
            !case.feasible || verify_witness(rep, labels, &case.witness).unwrap_or(false),
            "feasible case must re-verify"
        );
        cases.push(case);
    }
    let all = cases.iter().all(|c| c.feasible);
    Ok(LpReport {
        condition: Condition::Cond2,
        admissible_count: cases.len(),
        all_feasible: all,
        cases,
    })
}

fn condition2_case(rep: &RepDatum, labels: &BTreeSet<String>) -> Result<LpCase> {
    let ub = rep.labels_to_bitset(labels)?;
    let complement: Vec<usize> =
        (0..rep.u0.len()).filter(|i| ub >> i & 1 == 0).collect();
    // tail = delta + sum over U0 - U
    let mut tail = rep.delta.clone();
    for &m in &complement {
        for (t, v) in tail.iter_mut().zip(&rep.u0[m].vector) {
            *t += v;
        }
    }
    if labels.is_empty() {
        // pi = 0; require tail strictly negative
        let margin = tail.iter().map(|t| -t.clone()).min().unwrap_or_else(BigRational::zero);
        return Ok(LpCase {
            id: CaseId::Subset(labels.clone()),
            feasible: margin.is_positive(),
            witness: BTreeMap::new(),
            margin,
        });
    }
    // maximise m subject to:
    //   sum_a a_chi chi_k + m <= -tail_k   for each coordinate k
    //   sum_a a_chi + m <= #U
    //   m <= 1, a >= 0, m >= 0
    let n = complement.len();
    let mut rows: Vec<(Vec<BigRational>, Sense, BigRational)> = Vec::new();
    for k in 0..rep.rank {
        let mut coefs: Vec<BigRational> =
            complement.iter().map(|&m| rep.u0[m].vector[k].clone()).collect();
        coefs.push(BigRational::one()); // m column
        rows.push((coefs, Sense::Le, -tail[k].clone()));
    }
    let mut deg_row = vec![BigRational::one(); n];
    deg_row.push(BigRational::one());
    rows.push((deg_row, Sense::Le, BigRational::from(BigInt::from(labels.len() as i64))));
    let mut cap_row = vec![BigRational::zero(); n];
    cap_row.push(BigRational::one());
    rows.push((cap_row, Sense::Le, BigRational::one()));
    let mut cost = vec![BigRational::zero(); n];
    cost.push(-BigRational::one()); // maximise m
    match solve_with_slacks(&rows, &cost) {
        LpOutcome::Optimal { x, value } => {
            let margin = -value;
            let witness: BTreeMap<String, BigRational> = complement
                .iter()
                .zip(&x[..n])
                .filter(|(_, c)| !c.is_zero())
                .map(|(&m, c)| (rep.u0[m].label.clone(), c.clone()))
                .collect();
            Ok(LpCase {
                id: CaseId::Subset(labels.clone()),
                feasible: margin.is_positive(),
                witness,
                margin,
            })
        }
        LpOutcome::Infeasible => Ok(LpCase {
            id: CaseId::Subset(labels.clone()),
            feasible: false,
            witness: BTreeMap::new(),
            margin: BigRational::zero(),
        }),
        LpOutcome::Unbounded => unreachable!("margin is capped"),
    }
}

/// Condition 3: each simple root alpha is dominated by some non-positive
/// combination pi_alpha of the occurring characters (alpha <= pi_alpha).
pub fn check_condition3(rep: &RepDatum) -> Result<LpReport> {
    if !rep.is_well_posed() {
        return Err(Error::BadInput("rep datum is not well-posed".into()));
    }
    let n = rep.u0.len();
    let mut cases = Vec::new();
    for k in 0..rep.rank {
        // a = -u with u >= 0: sum_u u_chi chi_j <= -delta_{jk}
        let mut rows: Vec<(Vec<BigRational>, Sense, BigRational)> = Vec::new();
        for j in 0..rep.rank {
            let coefs: Vec<BigRational> =
                (0..n).map(|m| rep.u0[m].vector[j].clone()).collect();
            let rhs = if j == k { -BigRational::one() } else { BigRational::zero() };
            rows.push((coefs, Sense::Le, rhs));
        }
        let feasible = match solve_with_slacks(&rows, &vec![BigRational::zero(); n]) {
            LpOutcome::Optimal { x, .. } => {
                let witness: BTreeMap<String, BigRational> = (0..n)
                    .filter(|&m| !x[m].is_zero())
                    .map(|m| (rep.u0[m].label.clone(), -x[m].clone()))
                    .collect();
                // verify: pi - alpha >= 0 componentwise
                debug_assert!({
                    let mut pi = vec![BigRational::zero(); rep.rank];
                    for (l, c) in &witness {
                        let i = rep.label_index(l).unwrap();
                        for (p, v) in pi.iter_mut().zip(&rep.u0[i].vector) {
                            *p += c * v;
                        }
                    }
                    let mut alpha = vec![BigRational::zero(); rep.rank];
                    alpha[k] = BigRational::one();
                    dominates(&pi, &alpha).unwrap()
                });
                Some(witness)
            }
            _ => None,
        };
        cases.push(LpCase {
            id: CaseId::Root(k),
            feasible: feasible.is_some(),
            witness: feasible.unwrap_or_default(),
            margin: BigRational::zero(),
        });
    }
    let all = cases.iter().all(|c| c.feasible);
    Ok(LpReport { condition: Condition::Cond3, admissible_count: 0, all_feasible: all, cases })
}

/// Direct substitution check of condition 2 for a hand-built witness:
/// support on U0 - U, non-negative coefficients, degree strictly below
/// #U, and strict negativity of pi + delta + sum(U0 - U). No LP involved.
pub fn verify_witness(
    rep: &RepDatum,
    u: &BTreeSet<String>,
    coeffs: &BTreeMap<String, BigRational>,
) -> Result<bool> {
    let ub = rep.labels_to_bitset(u)?;
    for l in coeffs.keys() {
        let i = rep
            .label_index(l)
            .ok_or_else(|| Error::SupportViolation(format!("unknown label {l}")))?;
        if ub >> i & 1 == 1 {
            return Err(Error::SupportViolation(format!("{l} lies in U")));
        }
    }
    if coeffs.values().any(|c| c.is_negative()) {
        return Ok(false);
    }
    let degree: BigRational = coeffs.values().cloned().sum();
    let size = BigRational::from(BigInt::from(u.len() as i64));
    // deg(0) = -infinity, so the zero witness passes the degree bound even
    // for U empty
    let nonzero = coeffs.values().any(|c| !c.is_zero());
    if nonzero && degree >= size {
        return Ok(false);
    }
    if !nonzero && !u.is_empty() && BigRational::zero() >= size {
        return Ok(false);
    }
    let mut total = rep.delta.clone();
    for (i, c) in rep.u0.iter().enumerate() {
        if ub >> i & 1 == 0 {
            for (t, v) in total.iter_mut().zip(&c.vector) {
                *t += v;
            }
        }
    }
    for (l, a) in coeffs {
        let i = rep.label_index(l).unwrap();
        for (t, v) in total.iter_mut().zip(&rep.u0[i].vector) {
            *t += a * v;
        }
    }
    Ok(total.iter().all(|t| t.is_negative()))
}

fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Built-in representation data.
///
/// `binary-quartic` and `ternary-cubic` carry the printed character lists;
/// `so-even` (rank n+1, 1 <= n <= 4) is generated from the torus exponents
/// b_ij -> s_i s_j and the simple-root change of basis, then checked
/// against the anchor values chi_{b(i, 2n+2-i)} = -alpha_i and
/// chi_{b(n+1, n+1)} = alpha_n - alpha_{n+1}.
pub fn builtin_rep(name: &str, n: Option<u32>) -> Result<RepDatum> {
    match name {
        "binary-quartic" => {
            let mk = |l: &str, v: i64| Character { label: l.into(), vector: vec![q(v)] };
            let u0 = vec![
                mk("x^4", -2),
                mk("x^3y", -1),
                mk("x^2y^2", 0),
                mk("xy^3", 1),
                mk("y^4", 2),
            ];
            Ok(RepDatum {
                name: name.into(),
                rank: 1,
                u0,
                delta: vec![q(-1)],
                nongeneric_subsets: vec![vec![0]],
            })
        }
        "ternary-cubic" => {
            let mk = |l: &str, a: i64, b: i64| Character { label: l.into(), vector: vec![q(a), q(b)] };
            let u0 = vec![
                mk("x^3", -2, -1),
                mk("x^2y", -1, -1),
                mk("x^2z", -1, 0),
                mk("xy^2", 0, -1),
                mk("xyz", 0, 0),
                mk("xz^2", 0, 1),
                mk("y^3", 1, -1),
                mk("y^2z", 1, 0),
                mk("yz^2", 1, 1),
                mk("z^3", 1, 2),
            ];
            // U1 = {x^3, x^2y, x^2z}, U2 = {x^3, x^2y, xy^2}
            Ok(RepDatum {
                name: name.into(),
                rank: 2,
                u0,
                delta: vec![q(-2), q(-2)],
                nongeneric_subsets: vec![vec![0, 1, 2], vec![0, 1, 3]],
            })
        }
        "so-even" => {
            let n = n.ok_or_else(|| Error::BadInput("so-even requires --n".into()))? as usize;
            if !(1..=4).contains(&n) {
                return Err(Error::BadInput("so-even supports 1 <= n <= 4".into()));
            }
            build_so_even(n)
        }
        other => Err(Error::UnknownRep(other.into())),
    }
}

fn build_so_even(n: usize) -> Result<RepDatum> {
    let rank = n + 1;
    let dim = 2 * n + 2;
    // t-exponent vectors of the diagonal entries s_1, ..., s_{2n+2}
    let s_exp = |i: usize| -> Vec<i64> {
        // 1-based index
        let mut v = vec![0i64; rank];
        if i <= n + 1 {
            v[i - 1] = -1;
        } else {
            v[2 * n + 3 - i - 1] = 1;
        }
        v
    };
    // alpha_i = t_i - t_{i+1} (i <= n), alpha_{n+1} = t_n + t_{n+1}
    let mut alpha_mat = vec![vec![q(0); rank]; rank]; // rows: t-coords, cols: alphas
    for i in 0..n {
        alpha_mat[i][i] = q(1);
        alpha_mat[i + 1][i] = q(-1);
    }
    alpha_mat[n - 1][n] = q(1);
    alpha_mat[n][n] = q(1);
    let to_alpha = |v: &[i64]| -> RootVector {
        // solve alpha_mat * x = v by Gaussian elimination (exact)
        let mut m: Vec<Vec<BigRational>> = (0..rank)
            .map(|r| {
                let mut row: Vec<BigRational> = alpha_mat[r].clone();
                row.push(q(v[r]));
                row
            })
            .collect();
        for col in 0..rank {
            let piv = (col..rank).find(|&r| !m[r][col].is_zero()).expect("alpha basis");
            m.swap(col, piv);
            let inv = m[col][col].clone();
            for j in col..=rank {
                m[col][j] = &m[col][j] / &inv;
            }
            for r in 0..rank {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for j in col..=rank {
                        m[r][j] = &m[r][j] - &f * &m[col][j];
                    }
                }
            }
        }
        (0..rank).map(|r| m[r][rank].clone()).collect()
    };
    let mut u0 = Vec::new();
    let mut slot_index: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 1..=dim {
        for j in i..=dim {
            let vi = s_exp(i);
            let vj = s_exp(j);
            let sum: Vec<i64> = vi.iter().zip(&vj).map(|(a, b)| a + b).collect();
            slot_index.insert((i, j), u0.len());
            u0.push(Character { label: format!("b{i}_{j}"), vector: to_alpha(&sum) });
        }
    }
    // anchors
    {
        let anchor = &u0[slot_index[&(1, 1)]].vector;
        let mut expect = vec![q(-2); rank];
        expect[n - 1] = q(-1);
        expect[n] = q(-1);
        if n == 1 {
            expect = vec![q(-1), q(-1)];
        }
        assert_eq!(anchor, &expect, "chi_b11 anchor");
        for i in 1..=n {
            let v = &u0[slot_index[&(i, 2 * n + 2 - i)]].vector;
            let mut e = vec![q(0); rank];
            e[i - 1] = q(-1);
            assert_eq!(v, &e, "chi_b(i,2n+2-i) = -alpha_i");
        }
        let v = &u0[slot_index[&(n + 1, n + 1)]].vector;
        let mut e = vec![q(0); rank];
        e[n - 1] = q(1);
        e[n] = q(-1);
        assert_eq!(v, &e, "chi_b(n+1,n+1) anchor");
    }
    // delta(n) = sum_{j<=n-1} j(j-2n-1) alpha_j - n(n+1)/2 (alpha_n + alpha_{n+1})
    let mut delta = vec![q(0); rank];
    for j in 1..=(n.saturating_sub(1)) {
        delta[j - 1] = q((j as i64) * (j as i64 - 2 * n as i64 - 1));
    }
    let half = BigRational::new(BigInt::from((n * (n + 1)) as i64), BigInt::from(2));
    delta[n - 1] = -half.clone();
    delta[n] = -half;
    // non-generic subsets
    let mut nongeneric: Vec<Vec<usize>> = Vec::new();
    let prefix: Vec<usize> = slot_index
        .iter()
        .filter(|(&(i, j), _)| i < n && i + j < 2 * n + 2 && i <= j)
        .map(|(_, &idx)| idx)
        .collect();
    let mut u_n0 = prefix.clone();
    u_n0.push(slot_index[&(n, n)]);
    u_n0.push(slot_index[&(n, n + 1)]);
    u_n0.sort_unstable();
    u_n0.dedup();
    let mut u_n1 = prefix;
    u_n1.push(slot_index[&(n, n)]);
    u_n1.push(slot_index[&(n, n + 2)]);
    u_n1.sort_unstable();
    u_n1.dedup();
    nongeneric.push(u_n0);
    nongeneric.push(u_n1);
    // U(n)_{I,J} for |I| + |J| = 2n + 2 (the minimal generators)
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        fn rec(start: usize, k: usize, dim: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for v in start..=dim {
                if dim - v + 1 + cur.len() < k {
                    break;
                }
                cur.push(v);
                rec(v + 1, k, dim, cur, out);
                cur.pop();
            }
        }
        rec(1, k, dim, &mut cur, &mut out);
        out
    };
    for ka in 1..=(2 * n + 1) {
        let kb = 2 * n + 2 - ka;
        if kb > dim {
            continue;
        }
        for i_set in subsets(ka) {
            for j_set in subsets(kb) {
                let mut slots: Vec<usize> = Vec::new();
                for &i in &i_set {
                    for &j in &j_set {
                        let key = if i <= j { (i, j) } else { (j, i) };
                        slots.push(slot_index[&key]);
                    }
                }
                slots.sort_unstable();
                slots.dedup();
                if seen.insert(slots.clone()) {
                    nongeneric.push(slots);
                }
            }
        }
    }
    Ok(RepDatum { name: format!("so-even-{n}"), rank, u0, delta, nongeneric_subsets: nongeneric })
}

/// JSON wire format for rep data; rationals are "p/q" strings.
#[derive(Debug, Serialize, Deserialize)]
pub struct RepDatumJson {
    pub name: String,
    pub rank: usize,
    pub characters: Vec<CharacterJson>,
    pub delta: Vec<String>,
    pub nongeneric_subsets: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CharacterJson {
    pub label: String,
    pub coords: Vec<String>,
}

pub fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rational_from_string(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim().parse::<BigInt>().map_err(|_| Error::BadInput(format!("bad rational {s}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::BadInput("zero denominator".into()));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
        None => Ok(BigRational::from(parse_int(s)?)),
    }
}

impl RepDatum {
    pub fn to_json(&self) -> RepDatumJson {
        RepDatumJson {
            name: self.name.clone(),
            rank: self.rank,
            characters: self
                .u0
                .iter()
                .map(|c| CharacterJson {
                    label: c.label.clone(),
                    coords: c.vector.iter().map(rational_to_string).collect(),
                })
                .collect(),
            delta: self.delta.iter().map(rational_to_string).collect(),
            nongeneric_subsets: self
                .nongeneric_subsets
                .iter()
                .map(|s| s.iter().map(|&i| self.u0[i].label.clone()).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &RepDatumJson) -> Result<Self> {
        let mut u0 = Vec::new();
        let mut labels = HashSet::new();
        for c in &j.characters {
            if !labels.insert(c.label.clone()) {
                return Err(Error::BadInput(format!("duplicate label {}", c.label)));
            }
            if c.coords.len() != j.rank {
                return Err(Error::RankMismatch);
            }
            u0.push(Character {
                label: c.label.clone(),
                vector: c.coords.iter().map(|s| rational_from_string(s)).collect::<Result<_>>()?,
            });
        }
        let delta: Vec<BigRational> =
            j.delta.iter().map(|s| rational_from_string(s)).collect::<Result<_>>()?;
        let rep = RepDatum {
            name: j.name.clone(),
            rank: j.rank,
            u0,
            delta,
            nongeneric_subsets: vec![],
        };
        let mut nongeneric = Vec::new();
        for s in &j.nongeneric_subsets {
            let mut idx = Vec::new();
            for l in s {
                idx.push(
                    rep.label_index(l)
                        .ok_or_else(|| Error::BadInput(format!("unknown label {l}")))?,
                );
            }
            idx.sort_unstable();
            nongeneric.push(idx);
        }
        Ok(RepDatum { nongeneric_subsets: nongeneric, ..rep })
    }
}
