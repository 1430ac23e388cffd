//! Strictly increasing index tuples, the pair set of a symplectic basis, and
//! the classification of `(k-2)`-tuples by their pair-free part.
//!
//! All tuples are 1-based and ordered lexicographically; that order fixes
//! every row and column index used elsewhere in the crate.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Binomial coefficient, or `None` when it does not fit in a `u64`.
pub fn checked_binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Binomial coefficient. Panics if the value overflows `u64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    checked_binomial(n, k).unwrap_or_else(|| panic!("C({n},{k}) overflows u64"))
}

/// A strictly increasing tuple `1 <= a_1 < ... < a_s <= m`.
///
/// Equality, hashing and ordering look only at the entries: two tuples are
/// the same exactly when their supports coincide.
#[derive(Clone, Debug)]
pub struct IndexTuple {
    entries: Vec<usize>,
    bound: usize,
}

impl IndexTuple {
    pub fn new(entries: Vec<usize>, bound: usize) -> Result<Self> {
        if let Some(&e) = entries.iter().find(|&&e| e == 0 || e > bound) {
            return Err(Error::domain(format!(
                "entry {e} outside [1, {bound}] in {entries:?}"
            )));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(format!(
                "entries {entries:?} are not strictly increasing"
            )));
        }
        Ok(IndexTuple { entries, bound })
    }

    /// Builds a tuple from an arbitrary list of distinct values by sorting.
    pub fn from_support(mut entries: Vec<usize>, bound: usize) -> Result<Self> {
        entries.sort_unstable();
        Self::new(entries, bound)
    }

    pub fn empty(bound: usize) -> Self {
        IndexTuple {
            entries: Vec::new(),
            bound,
        }
    }

    pub(crate) fn new_unchecked(entries: Vec<usize>, bound: usize) -> Self {
        debug_assert!(IndexTuple::new(entries.clone(), bound).is_ok());
        IndexTuple { entries, bound }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.entries.binary_search(&e).is_ok()
    }

    /// `supp(self) ⊆ supp(other)`.
    pub fn is_subset_of(&self, other: &IndexTuple) -> bool {
        let mut it = other.entries.iter();
        self.entries.iter().all(|e| it.any(|o| o == e))
    }

    /// Position in the lexicographic order of `I(len, bound)`.
    pub fn rank(&self) -> u64 {
        let s = self.entries.len();
        let m = self.bound;
        let mut r = 0u64;
        let mut prev = 0;
        for (i, &e) in self.entries.iter().enumerate() {
            for v in prev + 1..e {
                r += binomial(m - v, s - i - 1);
            }
            prev = e;
        }
        r
    }

    /// Inverse of [`IndexTuple::rank`].
    pub fn unrank(mut r: u64, s: usize, m: usize) -> Result<Self> {
        if s > m {
            return Err(Error::domain(format!("tuple length {s} exceeds bound {m}")));
        }
        let total = binomial(m, s);
        if r >= total {
            return Err(Error::domain(format!(
                "rank {r} out of range for I({s},{m}) of size {total}"
            )));
        }
        let mut entries = Vec::with_capacity(s);
        let mut v = 1;
        for i in 0..s {
            loop {
                let c = binomial(m - v, s - i - 1);
                if r < c {
                    break;
                }
                r -= c;
                v += 1;
            }
            entries.push(v);
            v += 1;
        }
        Ok(IndexTuple { entries, bound: m })
    }
}

impl PartialEq for IndexTuple {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for IndexTuple {}

impl Hash for IndexTuple {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl PartialOrd for IndexTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.cmp(&other.entries)
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All of `I(s, m)` in lexicographic order.
pub fn index_tuples(s: usize, m: usize) -> Result<Vec<IndexTuple>> {
    if s > m {
        return Err(Error::domain(format!("tuple length {s} exceeds bound {m}")));
    }
    let mut out = Vec::with_capacity(binomial(m, s) as usize);
    let mut cur: Vec<usize> = (1..=s).collect();
    loop {
        out.push(IndexTuple::new_unchecked(cur.clone(), m));
        // rightmost position that can still advance
        let Some(i) = (0..s).rev().find(|&i| cur[i] < m - (s - 1 - i)) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..s {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Ok(out)
}

/// Sign of a basis coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

/// The pairs `P_i = (i, 2n+1-i)`, `i = 1..n`, of the symplectic basis of a
/// `2n`-dimensional space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairSet {
    n: usize,
}

impl PairSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("pair set needs n >= 1"));
        }
        Ok(PairSet { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        assert!((1..=self.n).contains(&i), "pair index {i} outside [1, {}]", self.n);
        (i, 2 * self.n + 1 - i)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).map(|i| self.pair(i))
    }

    pub fn partner(&self, e: usize) -> usize {
        2 * self.n + 1 - e
    }

    /// Index `i` of the pair containing `e`.
    pub fn pair_of(&self, e: usize) -> usize {
        e.min(self.partner(e))
    }

    /// Entries of `t` whose partner is absent from `t`.
    pub fn pair_free_part(&self, t: &IndexTuple) -> IndexTuple {
        let entries = t
            .entries()
            .iter()
            .copied()
            .filter(|&e| !t.contains(self.partner(e)))
            .collect();
        IndexTuple::new_unchecked(entries, t.bound())
    }

    /// Indices `i` of the pairs `P_i` wholly contained in `t`, ascending.
    pub fn whole_pairs(&self, t: &IndexTuple) -> Vec<usize> {
        t.entries()
            .iter()
            .copied()
            .filter(|&e| e <= self.n && t.contains(self.partner(e)))
            .collect()
    }

    /// Expands pair indices `(b_1, ..., b_t)` into the sorted support of
    /// `P_b`, a tuple of length `2t` over `[2n]`.
    pub fn expand(&self, pair_indices: &IndexTuple) -> IndexTuple {
        let mut v: Vec<usize> = pair_indices
            .entries()
            .iter()
            .flat_map(|&i| {
                let (a, b) = self.pair(i);
                [a, b]
            })
            .collect();
        v.sort_unstable();
        IndexTuple::new_unchecked(v, self.dim())
    }
}

/// Inserts the pair `P_i` into `base` and returns the sorted tuple together
/// with the sign `(-1)^(a+b)`, where `a` and `b` count the entries of `base`
/// below `i` and below `2n+1-i`. Returns `None` when `P_i` meets `base`.
///
/// The sign is the coefficient with which the sorted wedge appears in the
/// contraction of `e_alpha`.
pub fn insert_pair_with_sign(
    base: &IndexTuple,
    i: usize,
    n: usize,
) -> Result<Option<(IndexTuple, Sign)>> {
    if i == 0 || i > n {
        return Err(Error::domain(format!("pair index {i} outside [1, {n}]")));
    }
    if base.bound() != 2 * n {
        return Err(Error::domain(format!(
            "tuple bound {} does not match 2n = {}",
            base.bound(),
            2 * n
        )));
    }
    let j = 2 * n + 1 - i;
    if base.contains(i) || base.contains(j) {
        return Ok(None);
    }
    let a = base.entries().iter().filter(|&&e| e < i).count();
    let b = base.entries().iter().filter(|&&e| e < j).count();
    let mut v = base.entries().to_vec();
    v.insert(a, i);
    v.insert(b + 1, j);
    Ok(Some((
        IndexTuple::new_unchecked(v, 2 * n),
        Sign::from_parity((a + b) % 2 == 1),
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// One cell of [`RowPartition`]: every member has pair-free part `label`,
/// the rest of its support being whole pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCell {
    pub label: IndexTuple,
    pub members: Vec<IndexTuple>,
}

/// Partition of `I(k-2, 2n)` by pair-free part.
#[derive(Clone, Debug)]
pub struct RowPartition {
    pub n: usize,
    pub k: usize,
    pub parity: Parity,
    /// Ordered by label length, then lexicographically by label.
    pub cells: Vec<PartitionCell>,
}

impl RowPartition {
    /// Cells whose label has exactly `t` entries.
    pub fn cells_with_label_len(&self, t: usize) -> impl Iterator<Item = &PartitionCell> {
        self.cells.iter().filter(move |c| c.label.len() == t)
    }

    pub fn total_members(&self) -> usize {
        self.cells.iter().map(|c| c.members.len()).sum()
    }
}

pub fn row_partition(n: usize, k: usize) -> Result<RowPartition> {
    if k < 2 || k > n {
        return Err(Error::domain(format!("row partition needs 2 <= k <= n, got n={n}, k={k}")));
    }
    let pairs = PairSet::new(n)?;
    let mut by_label: BTreeMap<(usize, IndexTuple), Vec<IndexTuple>> = BTreeMap::new();
    for t in index_tuples(k - 2, 2 * n)? {
        let label = pairs.pair_free_part(&t);
        by_label.entry((label.len(), label)).or_default().push(t);
    }
    let cells = by_label
        .into_iter()
        .map(|((_, label), members)| PartitionCell { label, members })
        .collect();
    Ok(RowPartition {
        n,
        k,
        parity: if k % 2 == 0 { Parity::Even } else { Parity::Odd },
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[usize], m: usize) -> IndexTuple {
        IndexTuple::new(v.to_vec(), m).unwrap()
    }

    #[test]
    fn lex_enumeration_of_pairs() {
        let got: Vec<Vec<usize>> = index_tuples(2, 4)
            .unwrap()
            .iter()
            .map(|t| t.entries().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
    }

    #[test]
    fn empty_tuple_is_the_only_zero_length_tuple() {
        let got = index_tuples(0, 5).unwrap();
        assert_eq!(got.len(), 1);
        assert!(got[0].is_empty());
        assert_eq!(got[0].rank(), 0);
    }

    #[test]
    fn triples_of_six_against_brute_force() {
        // brute force over all bitmasks, sorted lexicographically
        let mut brute: Vec<Vec<usize>> = (0u32..64)
            .filter(|m| m.count_ones() == 3)
            .map(|m| (1..=6).filter(|i| m & (1 << (i - 1)) != 0).collect())
            .collect();
        brute.sort();
        let got: Vec<Vec<usize>> = index_tuples(3, 6)
            .unwrap()
            .iter()
            .map(|t| t.entries().to_vec())
            .collect();
        assert_eq!(got.len(), 20);
        assert_eq!(got, brute);
        assert_eq!(got[0], vec![1, 2, 3]);
        assert_eq!(got[19], vec![4, 5, 6]);
    }

    #[test]
    fn length_exceeding_bound_is_rejected() {
        assert!(index_tuples(5, 4).is_err());
        assert!(IndexTuple::unrank(0, 5, 4).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(t(&[1, 2], 4).rank(), 0);
        assert_eq!(t(&[3, 4], 4).rank(), 5);
        assert_eq!(IndexTuple::unrank(2, 2, 4).unwrap(), t(&[1, 4], 4));
        assert!(IndexTuple::unrank(6, 2, 4).is_err());
    }

    #[test]
    fn invalid_tuples_are_rejected() {
        assert!(IndexTuple::new(vec![2, 2], 4).is_err());
        assert!(IndexTuple::new(vec![3, 1], 4).is_err());
        assert!(IndexTuple::new(vec![0, 1], 4).is_err());
        assert!(IndexTuple::new(vec![1, 5], 4).is_err());
    }

    #[test]
    fn insertion_sign_examples() {
        let (tup, s) = insert_pair_with_sign(&IndexTuple::empty(4), 1, 2).unwrap().unwrap();
        assert_eq!((tup.entries(), s), (&[1, 4][..], Sign::Plus));

        let (tup, s) = insert_pair_with_sign(&t(&[2, 9], 10), 3, 5).unwrap().unwrap();
        assert_eq!((tup.entries(), s), (&[2, 3, 8, 9][..], Sign::Plus));

        let (tup, s) = insert_pair_with_sign(&t(&[1, 8], 10), 2, 5).unwrap().unwrap();
        assert_eq!((tup.entries(), s), (&[1, 2, 8, 9][..], Sign::Minus));

        assert_eq!(insert_pair_with_sign(&t(&[1, 8], 10), 1, 5).unwrap(), None);
        assert_eq!(insert_pair_with_sign(&t(&[1, 8], 10), 3, 5).unwrap(), None);
        assert!(insert_pair_with_sign(&t(&[1, 8], 10), 6, 5).is_err());
    }

    #[test]
    fn pair_set_partitions_the_basis() {
        let p = PairSet::new(5).unwrap();
        let mut seen: Vec<usize> = p.pairs().flat_map(|(a, b)| [a, b]).collect();
        assert!(p.pairs().all(|(a, b)| a + b == 11 && a < b));
        seen.sort();
        assert_eq!(seen, (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn partition_small_cases() {
        let p = row_partition(2, 2).unwrap();
        assert_eq!(p.cells.len(), 1);
        assert!(p.cells[0].label.is_empty());
        assert_eq!(p.cells[0].members, vec![IndexTuple::empty(4)]);

        let p = row_partition(3, 3).unwrap();
        assert_eq!(p.parity, Parity::Odd);
        assert_eq!(p.cells.len(), 6);
        for (j, cell) in p.cells.iter().enumerate() {
            assert_eq!(cell.label, t(&[j + 1], 6));
            assert_eq!(cell.members, vec![t(&[j + 1], 6)]);
        }
    }

    #[test]
    fn partition_four_four() {
        let p = row_partition(4, 4).unwrap();
        assert_eq!(p.cells.len(), 25);
        let empty = &p.cells[0];
        assert!(empty.label.is_empty());
        let got: Vec<_> = empty.members.iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(got, vec![vec![1, 8], vec![2, 7], vec![3, 6], vec![4, 5]]);
        for cell in &p.cells[1..] {
            let l = cell.label.entries();
            assert_eq!(l.len(), 2);
            assert_ne!(l[0] + l[1], 9);
            assert_eq!(cell.members.len(), 1);
            assert_eq!(cell.members[0], cell.label);
        }
    }

    #[test]
    fn partition_rejects_bad_parameters() {
        assert!(row_partition(3, 1).is_err());
        assert!(row_partition(3, 4).is_err());
    }
}
