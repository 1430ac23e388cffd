//! The Plücker matrix `B_f` of the isotropic Grassmannian `IG(k, E)`.
//!
//! `B_f` is the matrix of the contraction `f: ∧^k E → ∧^{k-2} E`. Rows are
//! indexed by `I(k-2, 2n)` and columns by `I(k, 2n)`, both lex. Entry
//! `(α, β)` is nonzero exactly when `β = α ∪ P_i` for a pair `P_i` disjoint
//! from `α`. In unsigned mode every nonzero coefficient is `+1`. In signed
//! mode it is the coefficient the contraction actually produces.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bitmatrix::{
    bipartite_components, permutation_equivalent, BinaryMatrix, PermutationPair, MATRIX_MARKET_HEADER,
};
use crate::combinat::{
    binomial, checked_binomial, index_tuples, insert_pair_with_sign, row_partition, IndexTuple,
    PairSet, Parity, Sign,
};
use crate::error::{Error, Result};
use crate::fractal::{fractal_matrix, FractalParams};
use crate::gf::{FieldMatrix, FieldVector, PrimeField};
use crate::report::Report;

/// The form `⟨e_i, e_{2n+1-i}⟩ = 1 = -⟨e_{2n+1-i}, e_i⟩` for `i <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
    gram: Vec<Vec<i64>>,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("symplectic form needs n >= 1"));
        }
        let d = 2 * n;
        let mut gram = vec![vec![0; d]; d];
        for i in 0..n {
            gram[i][d - 1 - i] = 1;
            gram[d - 1 - i][i] = -1;
        }
        Ok(SymplecticForm { n, gram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// `⟨e_i, e_j⟩`, 1-based.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.gram[i - 1][j - 1]
    }

    pub fn is_skew(&self) -> bool {
        let d = 2 * self.n;
        (0..d).all(|i| (0..d).all(|j| self.gram[i][j] == -self.gram[j][i]))
    }

    /// Full rank over `field`.
    pub fn is_nondegenerate(&self, field: PrimeField) -> bool {
        FieldMatrix::from_rows(field, &self.gram)
            .map(|m| m.rank() == 2 * self.n)
            .unwrap_or(false)
    }
}

#[derive(Clone, Debug)]
pub struct PluckerMatrix {
    pub n: usize,
    pub k: usize,
    pub signed: bool,
    pub support: BinaryMatrix,
    signs: HashMap<(usize, usize), Sign>,
}

/// `B_f` for `2 <= k <= n`.
pub fn plucker_matrix(n: usize, k: usize, signed: bool) -> Result<PluckerMatrix> {
    if k < 2 || k > n {
        return Err(Error::domain(format!("B_f needs 2 <= k <= n, got n={n}, k={k}")));
    }
    let rows = index_tuples(k - 2, 2 * n)?;
    let cols = binomial(2 * n, k) as usize;
    let mut ones = Vec::new();
    let mut signs = HashMap::new();
    for (r, alpha) in rows.iter().enumerate() {
        for i in 1..=n {
            if let Some((beta, sign)) = insert_pair_with_sign(alpha, i, n)? {
                let c = beta.rank() as usize;
                ones.push((r, c));
                signs.insert((r, c), if signed { sign } else { Sign::Plus });
            }
        }
    }
    Ok(PluckerMatrix {
        n,
        k,
        signed,
        support: BinaryMatrix::from_coords(rows.len(), cols, ones)?,
        signs,
    })
}

impl PluckerMatrix {
    /// Coefficient at `(r, c)`, `None` off the support.
    pub fn sign(&self, r: usize, c: usize) -> Option<Sign> {
        self.signs.get(&(r, c)).copied()
    }

    pub fn row_label(&self, r: usize) -> IndexTuple {
        IndexTuple::unrank(r as u64, self.k - 2, 2 * self.n).expect("row in range")
    }

    pub fn col_label(&self, c: usize) -> IndexTuple {
        IndexTuple::unrank(c as u64, self.k, 2 * self.n).expect("column in range")
    }

    pub fn to_field(&self, field: PrimeField) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(field, self.support.rows(), self.support.cols());
        for (r, c) in self.support.coords() {
            m.set(r, c, self.signs[&(r, c)].as_i64());
        }
        m
    }

    /// MatrixMarket coordinate file with the `±1` coefficients.
    pub fn to_matrix_market(&self) -> String {
        let mut out = format!(
            "{MATRIX_MARKET_HEADER}\n{} {} {}\n",
            self.support.rows(),
            self.support.cols(),
            self.support.nnz()
        );
        for (r, c) in self.support.coords() {
            out.push_str(&format!("{} {} {}\n", r + 1, c + 1, self.signs[&(r, c)].as_i64()));
        }
        out
    }

    /// `B_f · w` over `field`.
    pub fn apply(&self, field: PrimeField, w: &[u32]) -> Result<FieldVector> {
        if w.len() != self.support.cols() {
            return Err(Error::domain(format!(
                "vector of length {} against {} columns",
                w.len(),
                self.support.cols()
            )));
        }
        Ok((0..self.support.rows())
            .map(|r| {
                self.support.row(r).iter().fold(0, |acc, &c| {
                    let c = c as usize;
                    let term = field.mul(field.reduce(self.signs[&(r, c)].as_i64()), w[c]);
                    field.add(acc, term)
                })
            })
            .collect())
    }
}

/// The contraction `f(w)` computed from its definition on basis wedges:
/// `f(e_β) = Σ_{r<s} (-1)^{r+s-1} ⟨e_{β_r}, e_{β_s}⟩ e_{β without r, s}`.
pub fn contraction(n: usize, k: usize, field: PrimeField, w: &[u32]) -> Result<FieldVector> {
    if k < 2 || k > 2 * n {
        return Err(Error::domain(format!("contraction needs 2 <= k <= 2n, got n={n}, k={k}")));
    }
    let cols = index_tuples(k, 2 * n)?;
    if w.len() != cols.len() {
        return Err(Error::domain(format!(
            "vector of length {} against C(2n, k) = {}",
            w.len(),
            cols.len()
        )));
    }
    let form = SymplecticForm::new(n)?;
    let mut out = vec![0u32; binomial(2 * n, k - 2) as usize];
    for (beta, &x) in cols.iter().zip(w) {
        if x == 0 {
            continue;
        }
        let b = beta.entries();
        for r in 0..k {
            for s in r + 1..k {
                let g = form.pairing(b[r], b[s]);
                if g == 0 {
                    continue;
                }
                // positions are 1-based in the sign
                let sign = if (r + s + 1) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = b
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != r && i != s)
                    .map(|(_, &e)| e)
                    .collect();
                let row = IndexTuple::new(rest, 2 * n)?.rank() as usize;
                out[row] = field.add(out[row], field.mul(field.reduce(sign * g), x));
            }
        }
    }
    Ok(out)
}

fn params_as_pair<S: Serializer>(p: &FractalParams, s: S) -> std::result::Result<S::Ok, S::Error> {
    [p.k, p.ell].serialize(s)
}

/// One connected block of `B_f` and its fractal match.
#[derive(Clone, Debug, Serialize)]
pub struct Block {
    /// Row and column indices into `B_f`, ascending.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(serialize_with = "params_as_pair")]
    pub fractal: FractalParams,
    /// Pair-free part shared by the rows.
    pub label: String,
    /// Carries the block onto `A_a^b`.
    pub witness: PermutationPair,
}

/// Multiplicity of a block type for one label length.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BlockClass {
    pub label_len: usize,
    #[serde(serialize_with = "params_as_pair")]
    pub fractal: FractalParams,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub k: usize,
    pub blocks: Vec<Block>,
    pub zero_columns: Vec<usize>,
    pub zero_rows: Vec<usize>,
    /// Places where the direct-sum theorem, read literally, disagrees with
    /// the computed structure.
    pub flags: Vec<String>,
    /// Computed block multiset.
    pub classes: Vec<BlockClass>,
    /// Block multiset predicted by the theorem as stated.
    pub theorem_classes: Vec<BlockClass>,
    #[serde(rename = "checks")]
    pub consistency: Report,
}

impl DecompositionReport {
    /// Internal consistency; flags do not count against it.
    pub fn passed(&self) -> bool {
        self.consistency.passed()
    }

    pub fn count_of(&self, fractal: FractalParams) -> u64 {
        self.classes
            .iter()
            .filter(|c| c.fractal == fractal)
            .map(|c| c.count)
            .sum()
    }
}

/// All `(a, b)` with `A_a^b` of order `rows x cols`.
fn candidates(rows: usize, cols: usize) -> Vec<FractalParams> {
    let mut out = Vec::new();
    for m in 1..=rows.max(cols) {
        for b in 1..=m {
            let shape = (checked_binomial(m, b - 1), checked_binomial(m, b));
            if shape == (Some(rows as u64), Some(cols as u64)) {
                if let Ok(p) = FractalParams::new(m - b + 1, b) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Theorem-literal block multiset for `(n, k)`.
fn theorem_classes(n: usize, k: usize) -> Vec<BlockClass> {
    let labels = |t: usize| binomial(n, t) * (1u64 << t);
    let mut out = Vec::new();
    let mut push = |label_len: usize, a: isize, b: isize, count: u64| {
        if a >= 1 && b >= 1 {
            if let Ok(fractal) = FractalParams::new(a as usize, b as usize) {
                out.push(BlockClass { label_len, fractal, count });
            }
        }
    };
    let (n_, k_) = (n as isize, k as isize);
    if k % 2 == 0 {
        push(0, n_ - (k_ - 2) / 2, k_ / 2, 1);
        for l in 1..=(k_ - 2) / 2 {
            let t = 2 * l as usize;
            push(t, n_ - (k_ + 2 * (l - 1)) / 2, (k_ - 2 * l) / 2, labels(t));
        }
    } else {
        push(1, n_ - (k_ - 2) / 2, k_ / 2, n as u64);
        for l in 1..=(k_ - 3) / 2 {
            let t = 2 * l as usize + 1;
            push(
                t,
                (n_ - 1 - 2 * l) - ((k_ - 3) - 2 * l) / 2,
                ((k_ - 1) - 2 * l) / 2,
                labels(t),
            );
        }
    }
    out
}

/// Splits the support of `B_f` into connected blocks, matches each with a
/// fractal matrix, and compares the result with the direct-sum theorem.
pub fn decompose(n: usize, k: usize) -> Result<DecompositionReport> {
    if !(2 <= k && k <= n && n <= 7) {
        return Err(Error::domain(format!(
            "decompose needs 2 <= k <= n <= 7, got n={n}, k={k}"
        )));
    }
    let b = plucker_matrix(n, k, false)?;
    let support = &b.support;
    let comps = bipartite_components(support);
    let pairs = PairSet::new(n)?;
    let partition = row_partition(n, k)?;
    let row_labels = index_tuples(k - 2, 2 * n)?;
    let col_labels = index_tuples(k, 2 * n)?;
    let mut report = Report::new(format!("decompose n={n} k={k}"));

    let matched: Vec<(Vec<FractalParams>, Option<(FractalParams, PermutationPair)>)> = comps
        .components
        .par_iter()
        .map(|comp| {
            let sub = support.select(&comp.rows, &comp.cols);
            let mut hits = Vec::new();
            let mut first = None;
            for p in candidates(sub.rows(), sub.cols()) {
                let target = fractal_matrix(p.k, p.ell).expect("candidate is constructible");
                if let Some(w) = permutation_equivalent(&sub, &target) {
                    if w.verify(&sub, &target) {
                        hits.push(p);
                        first.get_or_insert((p, w));
                    }
                }
            }
            (hits, first)
        })
        .collect();

    let mut blocks = Vec::with_capacity(comps.components.len());
    let mut unmatched = 0;
    let mut ambiguous = 0;
    for (comp, (hits, first)) in comps.components.iter().zip(matched) {
        ambiguous += (hits.len() > 1) as usize;
        let Some((fractal, witness)) = first else {
            unmatched += 1;
            continue;
        };
        let label = pairs.pair_free_part(&row_labels[comp.rows[0]]);
        blocks.push(Block {
            rows: comp.rows.clone(),
            cols: comp.cols.clone(),
            fractal,
            label: label.to_string(),
            witness,
        });
    }
    report.check(
        "every block matches one fractal matrix",
        unmatched == 0 && ambiguous == 0,
        format!("{unmatched} unmatched, {ambiguous} ambiguous"),
    );

    // blocks against partition cells
    let mut cell_of: HashMap<&IndexTuple, usize> = HashMap::new();
    for (i, cell) in partition.cells.iter().enumerate() {
        for m in &cell.members {
            cell_of.insert(m, i);
        }
    }
    let mut cells_hit = vec![0usize; partition.cells.len()];
    let mut cells_ok = true;
    for comp in &comps.components {
        let cell = cell_of[&row_labels[comp.rows[0]]];
        cells_hit[cell] += 1;
        cells_ok &= partition.cells[cell].members.len() == comp.rows.len()
            && comp.rows.iter().all(|&r| cell_of[&row_labels[r]] == cell);
    }
    let zero_row_cells = comps
        .zero_rows
        .iter()
        .map(|&r| cell_of[&row_labels[r]])
        .collect::<Vec<_>>();
    cells_ok &= cells_hit.iter().enumerate().all(|(i, &h)| h == 1 || zero_row_cells.contains(&i));
    report.check("blocks are the partition cells", cells_ok, format!("{} cells", partition.cells.len()));

    let pair_free: Vec<usize> = col_labels
        .iter()
        .enumerate()
        .filter(|(_, beta)| pairs.whole_pairs(beta).is_empty())
        .map(|(c, _)| c)
        .collect();
    report.check(
        "zero columns are the pair-free tuples",
        pair_free == comps.zero_cols,
        format!("{} zero columns", comps.zero_cols.len()),
    );
    let formula = binomial(n, k) * (1u64 << k);
    report.check(
        "zero column count C(n,k)·2^k",
        comps.zero_cols.len() as u64 == formula,
        format!("formula {formula}"),
    );
    let row_sum: usize = blocks.iter().map(|b| b.rows.len()).sum::<usize>() + comps.zero_rows.len();
    let col_sum: usize = blocks.iter().map(|b| b.cols.len()).sum::<usize>() + comps.zero_cols.len();
    report.check(
        "rows accounted for",
        row_sum == support.rows(),
        format!("{row_sum} of {}", support.rows()),
    );
    report.check(
        "columns accounted for",
        col_sum == support.cols(),
        format!("{col_sum} of {}", support.cols()),
    );

    let mut tally: BTreeMap<(usize, FractalParams), u64> = BTreeMap::new();
    for b in &blocks {
        let len = pairs.pair_free_part(&row_labels[b.rows[0]]).len();
        *tally.entry((len, b.fractal)).or_default() += 1;
    }
    let classes: Vec<BlockClass> = tally
        .into_iter()
        .map(|((label_len, fractal), count)| BlockClass { label_len, fractal, count })
        .collect();
    let theorem = theorem_classes(n, k);

    let mut flags = Vec::new();
    for t in &theorem {
        let found: Vec<&BlockClass> = classes.iter().filter(|c| c.label_len == t.label_len).collect();
        let same = found.len() == 1 && *found[0] == *t;
        if !same {
            let got = found
                .iter()
                .map(|c| format!("{} x A_{}^{}", c.count, c.fractal.k, c.fractal.ell))
                .collect::<Vec<_>>()
                .join(", ");
            let mut flag = format!(
                "label length {}: theorem states {} x A_{}^{}, found {}",
                t.label_len, t.count, t.fractal.k, t.fractal.ell, got
            );
            if k % 2 == 1 && t.label_len == 1 {
                // the single-index block with the alternative odd-k parameters
                let alt = ((n - 1) - (k - 3) / 2, (k - 1) / 2);
                let fits = found.iter().any(|c| (c.fractal.k, c.fractal.ell) == alt);
                flag.push_str(&format!(
                    "; A_(n-1)-(k-3)/2^(k-1)/2 = A_{}^{} {}",
                    alt.0,
                    alt.1,
                    if fits { "fits" } else { "does not fit" }
                ));
            }
            flags.push(flag);
        }
    }
    for c in &classes {
        if !theorem.iter().any(|t| t.label_len == c.label_len) {
            flags.push(format!(
                "label length {}: {} x A_{}^{} not covered by the theorem",
                c.label_len, c.count, c.fractal.k, c.fractal.ell
            ));
        }
    }
    if (n, k) == (7, 7) {
        let l4 = classes
            .iter()
            .find(|c| c.fractal == FractalParams { k: 4, ell: 3 })
            .map_or(0, |c| c.count);
        if l4 != 7 {
            flags.push(format!("worked example lists 7 copies of L_4 (A_4^3), found {l4}"));
        }
    }
    if partition.parity == Parity::Odd && k < 5 {
        flags.push(format!("theorem is stated for odd k >= 5; k = {k} compared by extrapolation"));
    }

    Ok(DecompositionReport {
        n,
        k,
        blocks,
        zero_columns: comps.zero_cols,
        zero_rows: comps.zero_rows,
        flags,
        classes,
        theorem_classes: theorem,
        consistency: report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize], m: usize) -> IndexTuple {
        IndexTuple::new(v.to_vec(), m).unwrap()
    }

    #[test]
    fn gram_is_skew_and_nondegenerate() {
        let f = SymplecticForm::new(3).unwrap();
        assert!(f.is_skew());
        assert!(f.is_nondegenerate(PrimeField::new(2).unwrap()));
        assert!(f.is_nondegenerate(PrimeField::new(3).unwrap()));
        assert_eq!(f.pairing(1, 6), 1);
        assert_eq!(f.pairing(6, 1), -1);
        assert_eq!(f.pairing(4, 3), -1);
        assert_eq!(f.pairing(1, 2), 0);
    }

    #[test]
    fn two_two_row() {
        let b = plucker_matrix(2, 2, true).unwrap();
        assert_eq!(b.support, BinaryMatrix::from_dense_rows(&["001100"]).unwrap());
        assert_eq!(b.sign(0, 2), Some(Sign::Plus));
        assert_eq!(b.sign(0, 3), Some(Sign::Plus));
        assert_eq!(b.sign(0, 0), None);
    }

    #[test]
    fn three_three_shape() {
        let b = plucker_matrix(3, 3, false).unwrap();
        assert_eq!((b.support.rows(), b.support.cols()), (6, 20));
        assert!(b.support.row_weights().iter().all(|&w| w == 2));
        assert_eq!(b.support.nnz(), 12);
        assert_eq!(b.support.col_weights().iter().filter(|&&w| w == 0).count(), 8);
    }

    #[test]
    fn mixed_signs_in_row_one_eight() {
        let b = plucker_matrix(5, 4, true).unwrap();
        let r = t(&[1, 8], 10).rank() as usize;
        let got: Vec<(Vec<usize>, Sign)> = b
            .support
            .row(r)
            .iter()
            .map(|&c| (b.col_label(c as usize).entries().to_vec(), b.sign(r, c as usize).unwrap()))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![1, 2, 8, 9], Sign::Minus),
                (vec![1, 4, 7, 8], Sign::Plus),
                (vec![1, 5, 6, 8], Sign::Plus),
            ]
        );
        let unsigned = plucker_matrix(5, 4, false).unwrap();
        assert_eq!(unsigned.support, b.support);
        assert_eq!(unsigned.to_matrix_market(), unsigned.support.serialize(crate::Format::MatrixMarket));
        assert!(b.to_matrix_market().lines().any(|l| l.ends_with(" -1")));
        assert!(unsigned.support.coords().all(|(r, c)| unsigned.sign(r, c) == Some(Sign::Plus)));
    }

    #[test]
    fn contraction_examples() {
        let f = PrimeField::new(5).unwrap();
        let basis = |n: usize, k: usize, v: &[usize]| {
            let mut w = vec![0; binomial(2 * n, k) as usize];
            w[t(v, 2 * n).rank() as usize] = 1;
            w
        };
        assert_eq!(contraction(2, 2, f, &basis(2, 2, &[1, 2])).unwrap(), vec![0]);
        assert_eq!(contraction(2, 2, f, &basis(2, 2, &[1, 4])).unwrap(), vec![1]);
        let out = contraction(3, 4, f, &basis(3, 4, &[1, 2, 4, 5])).unwrap();
        let mut want = vec![0; 15];
        want[t(&[1, 4], 6).rank() as usize] = 4;
        assert_eq!(out, want);
        assert!(contraction(2, 2, f, &[0; 5]).is_err());
    }

    #[test]
    fn small_decompositions() {
        let d = decompose(2, 2).unwrap();
        assert!(d.passed(), "{:?}", d.consistency);
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].fractal, FractalParams { k: 2, ell: 1 });
        assert_eq!(d.zero_columns.len(), 4);
        assert!(d.flags.is_empty(), "{:?}", d.flags);

        let d = decompose(4, 4).unwrap();
        assert!(d.passed());
        assert_eq!(d.count_of(FractalParams { k: 3, ell: 2 }), 1);
        assert_eq!(d.count_of(FractalParams { k: 2, ell: 1 }), 24);
        assert_eq!(d.zero_columns.len(), 16);
        assert!(d.flags.is_empty(), "{:?}", d.flags);

        let d = decompose(3, 3).unwrap();
        assert!(d.passed());
        assert_eq!(d.count_of(FractalParams { k: 2, ell: 1 }), 6);
        assert!(!d.flags.is_empty());
        assert!(decompose(8, 8).is_err());
    }

    #[test]
    fn candidate_shapes() {
        assert_eq!(candidates(15, 20), vec![FractalParams { k: 4, ell: 3 }]);
        assert_eq!(candidates(1, 2), vec![FractalParams { k: 2, ell: 1 }]);
        assert_eq!(candidates(2, 1), vec![FractalParams { k: 1, ell: 2 }]);
    }
}
