//! Incidence configurations over the pair set `Σ_n`.
//!
//! Rows are pair tuples `P_α` with `|α| = t`, columns pair tuples `P_β` with
//! `|β| = t + 1`, and the entry is 1 when `supp α ⊂ supp β`. For even `k` the
//! configuration of `(n, k)` uses `t = (k-2)/2`; odd `k` uses the floor
//! parameters `t = ⌊(k-2)/2⌋`.
//!
//! In lexicographic row and column order this matrix is exactly
//! `A_{n-t}^{t+1}`: splitting on whether the label contains the pair `P_1`
//! reproduces the four-block recursion.

use std::collections::HashSet;

use serde::Serialize;

use crate::bitmatrix::{permutation_equivalent, BinaryMatrix, PermutationPair};
use crate::combinat::{binomial, index_tuples, IndexTuple, PairSet};
use crate::error::{Error, Result};
use crate::fractal::{fractal_matrix, FractalParams};
use crate::report::Report;

/// `P_β = (P_{β_1}, ..., P_{β_t})`, held by its pair indices `β ⊆ [n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairTuple(pub IndexTuple);

impl PairTuple {
    pub fn indices(&self) -> &IndexTuple {
        &self.0
    }

    /// The support of `P_β` in `[2n]`; always of size `2|β|`.
    pub fn expand(&self) -> IndexTuple {
        PairSet::new(self.0.bound())
            .expect("pair tuples have n >= 1")
            .expand(&self.0)
    }
}

impl std::fmt::Display for PairTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// Ground set `C_{t+1}(Σ_n)` and subsets `S_{P_α} = {P_β : supp α ⊂ supp β}`.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub n: usize,
    pub k: usize,
    pub ground: Vec<PairTuple>,
    /// `(label, positions in ground)`, labels in lexicographic order.
    pub subsets: Vec<(PairTuple, Vec<usize>)>,
}

/// Row-label length `⌊(k-2)/2⌋` for `2 <= k <= n`.
fn label_len(n: usize, k: usize) -> Result<usize> {
    if k < 2 || k > n {
        return Err(Error::domain(format!(
            "incidence configuration needs 2 <= k <= n, got n={n}, k={k}"
        )));
    }
    Ok((k - 2) / 2)
}

/// Fractal parameters `(n - ⌊(k-2)/2⌋, ⌊k/2⌋)` matching the configuration.
pub fn fractal_params(n: usize, k: usize) -> Result<FractalParams> {
    let t = label_len(n, k)?;
    FractalParams::new(n - t, t + 1)
}

pub fn configuration(n: usize, k: usize) -> Result<Configuration> {
    let t = label_len(n, k)?;
    let ground: Vec<PairTuple> = index_tuples(t + 1, n)?.into_iter().map(PairTuple).collect();
    let subsets = index_tuples(t, n)?
        .into_iter()
        .map(|alpha| {
            let members = ground
                .iter()
                .enumerate()
                .filter(|(_, b)| alpha.is_subset_of(&b.0))
                .map(|(i, _)| i)
                .collect();
            (PairTuple(alpha), members)
        })
        .collect();
    Ok(Configuration { n, k, ground, subsets })
}

/// Inclusion matrix of `t`-subsets against `(t+1)`-subsets of `[ground]`,
/// both in lexicographic order.
pub fn inclusion_matrix(ground: usize, t: usize) -> Result<BinaryMatrix> {
    if t + 1 > ground {
        return Err(Error::domain(format!(
            "no {}-subsets of a {ground}-set",
            t + 1
        )));
    }
    let rows = index_tuples(t, ground)?;
    let cols = index_tuples(t + 1, ground)?;
    let mut ones = Vec::with_capacity(cols.len() * (t + 1));
    for (c, beta) in cols.iter().enumerate() {
        // each t-subset of β is β with one entry removed
        for skip in 0..beta.len() {
            let mut sub = beta.entries().to_vec();
            sub.remove(skip);
            let r = IndexTuple::new(sub, ground)?.rank() as usize;
            ones.push((r, c));
        }
    }
    BinaryMatrix::from_coords(rows.len(), cols.len(), ones)
}

/// The incidence matrix of the configuration of `(n, k)`, of order
/// `C(n, ⌊(k-2)/2⌋) x C(n, ⌊k/2⌋)`.
pub fn incidence_matrix(n: usize, k: usize) -> Result<BinaryMatrix> {
    inclusion_matrix(n, label_len(n, k)?)
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Row and column weights, pairwise row intersections, row distinctness, the
/// neighbour criterion and density of the configuration matrix (even `k`).
pub fn verify_configuration(n: usize, k: usize) -> Result<Report> {
    if k % 2 != 0 {
        return Err(Error::domain(format!("configuration verification needs even k, got {k}")));
    }
    let t = label_len(n, k)?;
    let m = incidence_matrix(n, k)?;
    let labels = index_tuples(t, n)?;
    let mut report = Report::new(format!("configuration n={n} k={k}"));

    let row_w = n - t;
    report.check(
        "row weight",
        m.row_weights().iter().all(|&w| w == row_w),
        format!("expected {row_w}"),
    );
    report.check(
        "column weight",
        m.col_weights().iter().all(|&w| w == k / 2),
        format!("expected {}", k / 2),
    );

    let mut max_shared = 0;
    let mut distinct = true;
    let mut criterion = true;
    let mut neighbour_counts = vec![0usize; m.rows()];
    for i in 0..m.rows() {
        for j in i + 1..m.rows() {
            let shared = sorted_intersection_len(m.row(i), m.row(j));
            max_shared = max_shared.max(shared);
            distinct &= m.row(i) != m.row(j);
            let common = labels[i]
                .entries()
                .iter()
                .filter(|e| labels[j].contains(**e))
                .count();
            // rows meet iff the labels share all but one entry
            criterion &= (shared > 0) == (common + 1 == t);
            if shared > 0 {
                neighbour_counts[i] += 1;
                neighbour_counts[j] += 1;
            }
        }
    }
    report.check("rows share at most one column", max_shared <= 1, format!("max shared {max_shared}"));
    report.check("rows distinct", distinct, "");
    report.check("neighbour criterion |α ∩ ᾱ| = (k-4)/2", criterion, "");
    let predicted = t * (n - t);
    report.check(
        "neighbour count",
        neighbour_counts.iter().all(|&c| c == predicted),
        format!("each row meets {predicted} others"),
    );
    let density = m.density().unwrap_or(0.0);
    report.check(
        "density",
        density == m.nnz() as f64 / (m.rows() * m.cols()) as f64,
        format!("{density}"),
    );
    Ok(report)
}

fn check_even_order(m: usize, min: usize) -> Result<()> {
    if m % 2 != 0 || m < min {
        return Err(Error::domain(format!("need an even m >= {min}, got {m}")));
    }
    Ok(())
}

/// `C_{(m-2)/2}(Σ_m)` in triangle order.
///
/// Tuples are grouped into triangles `T_ᾱ`, one per prefix `ᾱ` of length
/// `(m-6)/2`, holding the tuples `(ᾱ, ε_1, ε_2)`; each triangle is listed row
/// by row (`ε_1` ascending, then `ε_2`). Triangles follow their families:
/// first entry of the prefix, then second entry, and so on. Tuples reached
/// again by a later family are skipped.
pub fn triangle_row_order(m: usize) -> Result<Vec<PairTuple>> {
    check_even_order(m, 8)?;
    let prefix_len = (m - 6) / 2;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(binomial(m, prefix_len + 2) as usize);
    for prefix in index_tuples(prefix_len, m)? {
        let start = prefix.entries().last().copied().unwrap_or(0) + 1;
        for e1 in start..=m {
            for e2 in e1 + 1..=m {
                let mut v = prefix.entries().to_vec();
                v.extend([e1, e2]);
                let tup = IndexTuple::new(v, m)?;
                if seen.insert(tup.clone()) {
                    out.push(PairTuple(tup));
                }
            }
        }
    }
    Ok(out)
}

/// Characteristic vector of `S_{P_α}` over `C_{m/2}(Σ_m)` in lexicographic
/// column order.
pub fn phi_row(m: usize, p: &PairTuple) -> Result<Vec<bool>> {
    check_even_order(m, 2)?;
    if p.0.bound() != m || p.0.len() != (m - 2) / 2 {
        return Err(Error::domain(format!(
            "{p} is not in C_{}(Σ_{m})",
            (m - 2) / 2
        )));
    }
    Ok(index_tuples(m / 2, m)?
        .iter()
        .map(|beta| p.0.is_subset_of(beta))
        .collect())
}

/// The matrix of `φ^m` rows taken in `order`.
pub fn phi_matrix(m: usize, order: &[PairTuple]) -> Result<BinaryMatrix> {
    let cols = binomial(m, m / 2) as usize;
    let mut ones = Vec::new();
    for (r, p) in order.iter().enumerate() {
        for (c, bit) in phi_row(m, p)?.into_iter().enumerate() {
            if bit {
                ones.push((r, c));
            }
        }
    }
    BinaryMatrix::from_coords(order.len(), cols, ones)
}

/// One incidence-versus-fractal comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Equivalence {
    pub n: usize,
    pub k: usize,
    pub fractal: FractalParams,
    pub rows: usize,
    pub cols: usize,
    pub bit_exact: bool,
    pub witness: Option<PermutationPair>,
}

impl Equivalence {
    pub fn passed(&self) -> bool {
        self.witness.is_some()
    }
}

/// Compares the configuration matrix of `(n, k)` with
/// `A_{n-⌊(k-2)/2⌋}^{⌊k/2⌋}`.
pub fn incidence_equivalence(n: usize, k: usize) -> Result<Equivalence> {
    let params = fractal_params(n, k)?;
    let inc = incidence_matrix(n, k)?;
    let frac = fractal_matrix(params.k, params.ell)?;
    let witness = permutation_equivalent(&inc, &frac);
    debug_assert!(witness.as_ref().is_none_or(|w| w.verify(&inc, &frac)));
    Ok(Equivalence {
        n,
        k,
        fractal: params,
        rows: inc.rows(),
        cols: inc.cols(),
        bit_exact: inc == *frac,
        witness,
    })
}

/// `ℒ_r` against `A_r^{r-1}` for `r = (m+2)/2`.
#[derive(Clone, Debug, Serialize)]
pub struct LagrangianCheck {
    pub m: usize,
    pub r: usize,
    /// `ℒ_r` in lexicographic order.
    pub lex: Equivalence,
    /// Rows of `φ^m` in triangle order.
    pub triangle_bit_exact: bool,
    pub triangle_witness: Option<PermutationPair>,
    /// All `φ^m` rows distinct.
    pub phi_injective: bool,
}

impl LagrangianCheck {
    pub fn passed(&self) -> bool {
        self.lex.passed() && self.triangle_witness.is_some() && self.phi_injective
    }
}

pub fn verify_l_equals_a(m: usize) -> Result<LagrangianCheck> {
    check_even_order(m, 8)?;
    if m > 12 {
        return Err(Error::domain(format!("m = {m} exceeds the supported maximum 12")));
    }
    let r = (m + 2) / 2;
    let lex = incidence_equivalence(m, m)?;
    debug_assert_eq!(lex.fractal, FractalParams::new(r, r - 1)?);
    let order = triangle_row_order(m)?;
    let tri = phi_matrix(m, &order)?;
    let target = fractal_matrix(r, r - 1)?;
    let distinct: HashSet<&[u32]> = (0..tri.rows()).map(|i| tri.row(i)).collect();
    Ok(LagrangianCheck {
        m,
        r,
        lex,
        triangle_bit_exact: tri == *target,
        triangle_witness: permutation_equivalent(&tri, &target),
        phi_injective: distinct.len() == tri.rows(),
    })
}
