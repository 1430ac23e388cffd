//! Rational points of `IG(k, E)` over `GF(q)`.
//!
//! [`rational_points`] walks the projective representatives of `ker B_f`
//! and keeps those satisfying every quadratic Plücker relation.
//! [`oracle_points`] instead lists every `k`-dimensional subspace of
//! `GF(q)^{2n}` in reduced echelon form, keeps the isotropic ones and takes
//! their Plücker coordinates. The two share only the index-tuple order and
//! the Gram matrix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{binomial, index_tuples, IndexTuple};
use crate::error::{Error, Result};
use crate::gf::{enumerate_projective, FieldVector, PrimeField};
use crate::plucker::{plucker_matrix, SymplecticForm};

/// Default cap on `p^d` for kernel enumeration and on the number of
/// subspaces visited by the oracle.
pub const DEFAULT_BUDGET: u128 = 1 << 25;

/// `Q_{α,β} = Σ_i (-1)^i X_{α β_i} X_{β \ β_i}`, `α ∈ I(k-1, 2n)`,
/// `β ∈ I(k+1, 2n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticRelation {
    pub alpha: IndexTuple,
    pub beta: IndexTuple,
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::domain(format!("need 2 <= k <= n, got n={n}, k={k}")));
    }
    Ok(())
}

pub fn quadratic_relations(n: usize, k: usize) -> Result<Vec<QuadraticRelation>> {
    check_nk(n, k)?;
    if k + 1 > 2 * n {
        return Err(Error::domain(format!("k + 1 = {} exceeds 2n = {}", k + 1, 2 * n)));
    }
    let alphas = index_tuples(k - 1, 2 * n)?;
    let betas = index_tuples(k + 1, 2 * n)?;
    Ok(alphas
        .iter()
        .flat_map(|a| {
            betas.iter().map(move |b| QuadraticRelation { alpha: a.clone(), beta: b.clone() })
        })
        .collect())
}

impl QuadraticRelation {
    /// True when the terms cancel and the polynomial is identically zero.
    pub fn is_trivial(&self) -> bool {
        CompiledRelation::new(self).terms.is_empty()
    }
}

/// Terms `c · X_a · X_b`, `a <= b`, collected by monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
struct CompiledRelation {
    terms: Vec<(u32, u32, i64)>,
}

impl CompiledRelation {
    fn new(rel: &QuadraticRelation) -> Self {
        let m = rel.beta.bound();
        let mut terms: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for (i, &b) in rel.beta.entries().iter().enumerate() {
            if rel.alpha.contains(b) {
                continue;
            }
            let above = rel.alpha.entries().iter().filter(|&&e| e > b).count();
            // (-1)^i with 1-based i, times the sign of sorting (α, b)
            let sign = if (i + 1 + above) % 2 == 1 { -1 } else { 1 };
            let mut left = rel.alpha.entries().to_vec();
            left.push(b);
            let left = IndexTuple::from_support(left, m).expect("distinct entries").rank() as u32;
            let mut right = rel.beta.entries().to_vec();
            right.remove(i);
            let right = IndexTuple::new(right, m).expect("sorted").rank() as u32;
            *terms.entry((left.min(right), left.max(right))).or_default() += sign;
        }
        CompiledRelation {
            terms: terms.into_iter().filter(|&(_, c)| c != 0).map(|((a, b), c)| (a, b, c)).collect(),
        }
    }

    fn eval(&self, field: PrimeField, w: &[u32]) -> u32 {
        self.terms.iter().fold(0, |acc, &(a, b, c)| {
            let t = field.mul(w[a as usize], w[b as usize]);
            field.add(acc, field.mul(field.reduce(c), t))
        })
    }
}

pub fn evaluate_relation(
    rel: &QuadraticRelation,
    w: &[u32],
    n: usize,
    k: usize,
    field: PrimeField,
) -> Result<u32> {
    let len = binomial(2 * n, k) as usize;
    if w.len() != len {
        return Err(Error::domain(format!("vector of length {} against C(2n, k) = {len}", w.len())));
    }
    if rel.alpha.len() + 1 != k || rel.beta.len() != k + 1 || rel.beta.bound() != 2 * n {
        return Err(Error::domain("relation does not belong to (n, k)"));
    }
    Ok(CompiledRelation::new(rel).eval(field, w))
}

/// Relations that do not cancel, fewest terms first.
fn compiled_relations(n: usize, k: usize) -> Result<Vec<CompiledRelation>> {
    let mut rels: Vec<CompiledRelation> = quadratic_relations(n, k)?
        .iter()
        .map(CompiledRelation::new)
        .filter(|r| !r.terms.is_empty())
        .collect();
    rels.sort_by_key(|r| r.terms.len());
    Ok(rels)
}

/// `∏_{i=0}^{k-1} (q^{2n-2i} - 1) / (q^{i+1} - 1)`.
pub fn expected_count(n: usize, k: usize, q: u64) -> Result<BigUint> {
    if k < 1 || k > n {
        return Err(Error::domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    PrimeField::new(q)?;
    let q = BigUint::from(q);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= q.pow((2 * n - 2 * i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    if &num % &den != BigUint::ZERO {
        return Err(Error::Internal(format!("point count {num}/{den} is not an integer")));
    }
    Ok(num / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Signed,
    Unsigned,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signed" => Ok(Mode::Signed),
            "unsigned" => Ok(Mode::Unsigned),
            _ => Err(Error::domain(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Signed => "signed",
            Mode::Unsigned => "unsigned",
        })
    }
}

/// Bookkeeping of one kernel enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub mode: Mode,
    pub kernel_dim: usize,
    /// Representatives examined.
    pub examined: u128,
    /// Representatives failing some relation.
    pub rejected: u128,
}

/// Normalized projective points of `IG(k, E)(GF(q))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    pub n: usize,
    pub k: usize,
    pub q: u64,
    pub points: BTreeSet<FieldVector>,
    /// Present for kernel enumeration, absent for the oracle.
    pub enumeration: Option<Enumeration>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// One point per line, residues separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            let line: Vec<String> = p.iter().map(u32::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

fn budget_error(what: &str, required: u128, budget: u128) -> Error {
    Error::Budget { what: what.to_string(), required, budget }
}

/// Kernel enumeration with relation filtering.
pub fn rational_points(n: usize, k: usize, q: u64, mode: Mode, budget: u128) -> Result<PointSet> {
    check_nk(n, k)?;
    let field = PrimeField::new(q)?;
    let b = plucker_matrix(n, k, mode == Mode::Signed)?.to_field(field);
    let basis = b.kernel_basis();
    let d = basis.len();
    let required = (q as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(budget_error(
            &format!("kernel of dimension {d} over GF({q})"),
            required,
            budget,
        ));
    }
    let relations = compiled_relations(n, k)?;
    let span = enumerate_projective(field, &basis);
    let total = span.len();
    let chunks = (rayon::current_num_threads() as u128 * 16).clamp(1, total.max(1));
    let step = total.div_ceil(chunks).max(1);

    let parts: Vec<(Vec<FieldVector>, u128, u128)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let (start, end) = (c * step, ((c + 1) * step).min(total));
            let mut kept = Vec::new();
            let (mut seen, mut rejected) = (0u128, 0u128);
            for v in span.range(start, end) {
                seen += 1;
                if relations.iter().all(|r| r.eval(field, &v) == 0) {
                    kept.push(v);
                } else {
                    rejected += 1;
                }
            }
            (kept, seen, rejected)
        })
        .collect();

    let mut points = BTreeSet::new();
    let (mut examined, mut rejected) = (0, 0);
    for (kept, seen, rej) in parts {
        examined += seen;
        rejected += rej;
        points.extend(kept);
    }
    Ok(PointSet {
        n,
        k,
        q,
        points,
        enumeration: Some(Enumeration { mode, kernel_dim: d, examined, rejected }),
    })
}

/// Number of `k`-subspaces of `GF(q)^m`, saturating.
fn subspace_count(m: usize, k: usize, q: u128) -> u128 {
    let mut total: u128 = 0;
    for pivots in index_tuples(k, m).expect("k <= m") {
        let free: u32 = pivots
            .entries()
            .iter()
            .enumerate()
            .map(|(i, &p)| (m - p - (k - 1 - i)) as u32)
            .sum();
        total = total.saturating_add(q.checked_pow(free).unwrap_or(u128::MAX));
    }
    total
}

fn inv_mod(a: i64, q: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (q, a.rem_euclid(q), 0i64, 1i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    s0.rem_euclid(q)
}

/// All permutations of `0..k` with their signs, by Heap's algorithm.
fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    let mut a: Vec<usize> = (0..k).collect();
    let mut c = vec![0; k];
    let mut sign = 1;
    let mut out = vec![(a.clone(), sign)];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Brute force over all `k`-subspaces of `GF(q)^{2n}`.
pub fn oracle_points(n: usize, k: usize, q: u64, budget: u128) -> Result<PointSet> {
    check_nk(n, k)?;
    PrimeField::new(q)?;
    let m = 2 * n;
    let required = subspace_count(m, k, q as u128);
    if required > budget {
        return Err(budget_error(&format!("{k}-subspaces of GF({q})^{m}"), required, budget));
    }
    let qi = q as i64;
    let gram = SymplecticForm::new(n)?;
    let gram = gram.gram();
    let minors_at: Vec<Vec<usize>> = index_tuples(k, m)?
        .iter()
        .map(|g| g.entries().iter().map(|&e| e - 1).collect())
        .collect();
    let perms = signed_permutations(k);

    let mut points = BTreeSet::new();
    for pivots in index_tuples(k, m)? {
        let piv: Vec<usize> = pivots.entries().iter().map(|&p| p - 1).collect();
        // free slots: (row, column) right of the row's pivot, off pivot columns
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let piv = &piv;
                (piv[i] + 1..m).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut vals = vec![0i64; slots.len()];
        loop {
            let mut w = vec![vec![0i64; m]; k];
            for (i, &p) in piv.iter().enumerate() {
                w[i][p] = 1;
            }
            for (&(i, c), &v) in slots.iter().zip(&vals) {
                w[i][c] = v;
            }
            let isotropic = (0..k).all(|i| {
                (i + 1..k).all(|j| {
                    let mut s = 0i64;
                    for a in 0..m {
                        for b in 0..m {
                            s += w[i][a] * gram[a][b] * w[j][b];
                        }
                    }
                    s.rem_euclid(qi) == 0
                })
            });
            if isotropic {
                let mut x: Vec<i64> = minors_at
                    .iter()
                    .map(|cols| {
                        perms
                            .iter()
                            .map(|(p, s)| {
                                (0..k).fold(*s, |acc, r| (acc * w[r][cols[p[r]]]).rem_euclid(qi))
                            })
                            .sum::<i64>()
                            .rem_euclid(qi)
                    })
                    .collect();
                if let Some(&lead) = x.iter().find(|&&v| v != 0) {
                    let inv = inv_mod(lead, qi);
                    for v in &mut x {
                        *v = (*v * inv).rem_euclid(qi);
                    }
                }
                points.insert(x.into_iter().map(|v| v as u32).collect());
            }
            // odometer over free entries
            let mut pos = 0;
            while pos < vals.len() {
                vals[pos] += 1;
                if vals[pos] < qi {
                    break;
                }
                vals[pos] = 0;
                pos += 1;
            }
            if pos == vals.len() {
                break;
            }
        }
    }
    Ok(PointSet { n, k, q, points, enumeration: None })
}
