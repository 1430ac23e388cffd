//! The matrices `A_k^l`: `k` ones per row, `l` ones per column, of order
//! `C(k+l-1, l-1) x C(k+l-1, l)`.
//!
//! Two independent constructions are provided. [`fractal_matrix`] pastes
//! `O(A_k^{l-1}), O(A_{k-1}^{l-1}), ..., O(A_1^{l-1})` side by side, starting
//! from the all-ones row `A_k^1`. [`fractal_matrix_blockwise`] uses the
//! four-block recursion
//!
//! ```text
//! A_k^l = | A_k^{l-1}   0         |
//!         | I           A_{k-1}^l |
//! ```

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::bitmatrix::{direct_sum, paste_right, stack_identity_below, BinaryMatrix};
use crate::combinat::{binomial, checked_binomial};
use crate::error::{Error, Result};
use crate::report::Report;

/// Upper bound on the number of ones of a constructed matrix.
const MAX_ONES: u64 = 1 << 26;

/// Row weight `k` and column weight `ell` of `A_k^ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FractalParams {
    pub k: usize,
    pub ell: usize,
}

impl FractalParams {
    pub fn new(k: usize, ell: usize) -> Result<Self> {
        if k == 0 || ell == 0 {
            return Err(Error::domain(format!("A_k^l needs k, l >= 1, got k={k}, l={ell}")));
        }
        let p = FractalParams { k, ell };
        let (rows, cols) = p.checked_shape()?;
        if (cols as u64).saturating_mul(ell as u64) > MAX_ONES || rows > u32::MAX as usize {
            return Err(Error::domain(format!(
                "A_{k}^{ell} is {rows}x{cols}, too large to construct"
            )));
        }
        Ok(p)
    }

    fn checked_shape(&self) -> Result<(usize, usize)> {
        let n = self.k + self.ell - 1;
        match (checked_binomial(n, self.ell - 1), checked_binomial(n, self.ell)) {
            (Some(r), Some(c)) => Ok((r as usize, c as usize)),
            _ => Err(Error::domain(format!(
                "order of A_{}^{} overflows 64-bit arithmetic",
                self.k, self.ell
            ))),
        }
    }

    /// `(C(k+l-1, l-1), C(k+l-1, l))`.
    pub fn shape(&self) -> (usize, usize) {
        self.checked_shape().expect("validated at construction")
    }
}

fn memo() -> &'static Mutex<HashMap<(usize, usize), Arc<BinaryMatrix>>> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, usize), Arc<BinaryMatrix>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `A_k^ell` by repeated stack-and-paste. Results are memoized.
pub fn fractal_matrix(k: usize, ell: usize) -> Result<Arc<BinaryMatrix>> {
    FractalParams::new(k, ell)?;
    Ok(pasted(k, ell))
}

fn pasted(k: usize, ell: usize) -> Arc<BinaryMatrix> {
    if let Some(m) = memo().lock().unwrap().get(&(k, ell)) {
        return Arc::clone(m);
    }
    let m = if ell == 1 {
        BinaryMatrix::ones(1, k)
    } else {
        let parts: Vec<BinaryMatrix> = (1..=k)
            .rev()
            .map(|j| stack_identity_below(&pasted(j, ell - 1)).expect("A_j^l has columns"))
            .collect();
        paste_right(&parts).expect("heights decrease with j")
    };
    let m = Arc::new(m);
    memo()
        .lock()
        .unwrap()
        .entry((k, ell))
        .or_insert_with(|| Arc::clone(&m));
    m
}

/// `A_k^ell` by the four-block recursion, with `A_k^1` the ones row and
/// `A_1^ell` the ones column as bases.
pub fn fractal_matrix_blockwise(k: usize, ell: usize) -> Result<BinaryMatrix> {
    FractalParams::new(k, ell)?;
    let mut cache = HashMap::new();
    Ok(blockwise(k, ell, &mut cache))
}

fn blockwise(k: usize, ell: usize, cache: &mut HashMap<(usize, usize), BinaryMatrix>) -> BinaryMatrix {
    if let Some(m) = cache.get(&(k, ell)) {
        return m.clone();
    }
    let m = if ell == 1 {
        BinaryMatrix::ones(1, k)
    } else if k == 1 {
        BinaryMatrix::ones(ell, 1)
    } else {
        let top_left = blockwise(k, ell - 1, cache);
        let bottom_right = blockwise(k - 1, ell, cache);
        let id = binomial(k + ell - 2, ell - 1) as usize;
        debug_assert_eq!(top_left.cols(), id);
        debug_assert_eq!(bottom_right.rows(), id);
        // [[TL, 0], [I, BR]]: direct sum of TL and BR, then the identity
        // under TL.
        let skeleton = direct_sum(&[top_left.clone(), bottom_right]);
        let ones = skeleton
            .coords()
            .chain((0..id).map(|i| (top_left.rows() + i, i)));
        BinaryMatrix::from_coords(skeleton.rows(), skeleton.cols(), ones).expect("in range")
    };
    cache.insert((k, ell), m.clone());
    m
}

/// Outcome of checking one `A_k^ell`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractalEntry {
    pub k: usize,
    pub ell: usize,
    pub rows: usize,
    pub cols: usize,
    pub ones: usize,
    pub density: f64,
    pub routes_agree: bool,
    pub dimensions: bool,
    pub weights: bool,
    pub blocks: bool,
}

impl FractalEntry {
    pub fn passed(&self) -> bool {
        self.routes_agree && self.dimensions && self.weights && self.blocks
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractalVerification {
    pub entries: Vec<FractalEntry>,
}

impl FractalVerification {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(FractalEntry::passed)
    }

    pub fn get(&self, k: usize, ell: usize) -> Option<&FractalEntry> {
        self.entries.iter().find(|e| e.k == k && e.ell == ell)
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("fractal");
        for e in &self.entries {
            r.check(
                format!("A_{}^{}", e.k, e.ell),
                e.passed(),
                format!(
                    "{}x{}, {} ones; routes {}, dims {}, weights {}, blocks {}",
                    e.rows, e.cols, e.ones, e.routes_agree, e.dimensions, e.weights, e.blocks
                ),
            );
        }
        r
    }
}

/// The four blocks of `A_k^l` sit where the recursion puts them.
fn blocks_recoverable(m: &BinaryMatrix, k: usize, ell: usize) -> Result<bool> {
    if k < 2 || ell < 2 {
        return Ok(true);
    }
    let top_rows = binomial(k + ell - 2, ell - 2) as usize;
    let left_cols = binomial(k + ell - 2, ell - 1) as usize;
    let (rows, cols) = (m.rows(), m.cols());
    if rows != top_rows + left_cols {
        return Ok(false);
    }
    let top_left = m.block(0, 0, top_rows, left_cols);
    let top_right = m.block(0, left_cols, top_rows, cols - left_cols);
    let bottom_left = m.block(top_rows, 0, left_cols, left_cols);
    let bottom_right = m.block(top_rows, left_cols, left_cols, cols - left_cols);
    Ok(top_left == *fractal_matrix(k, ell - 1)?
        && top_right.nnz() == 0
        && bottom_left == BinaryMatrix::identity(left_cols)
        && bottom_right == *fractal_matrix(k - 1, ell)?)
}

/// Checks every `A_k^l` with `1 <= k <= k_max`, `1 <= l <= ell_max`.
pub fn verify_fractal(k_max: usize, ell_max: usize) -> Result<FractalVerification> {
    let mut entries = Vec::new();
    for k in 1..=k_max {
        for ell in 1..=ell_max {
            let pasted = fractal_matrix(k, ell)?;
            let block = fractal_matrix_blockwise(k, ell)?;
            let n = k + ell - 1;
            let want = (binomial(n, ell - 1) as usize, binomial(n, ell) as usize);
            let pascal = ell < 2
                || binomial(n - 1, ell - 2) + binomial(n - 1, ell - 1) == binomial(n, ell - 1);
            let weights = pasted.row_weights().iter().all(|&w| w == k)
                && pasted.col_weights().iter().all(|&w| w == ell);
            entries.push(FractalEntry {
                k,
                ell,
                rows: pasted.rows(),
                cols: pasted.cols(),
                ones: pasted.nnz(),
                density: pasted.density().unwrap_or(0.0),
                routes_agree: *pasted == block,
                dimensions: (pasted.rows(), pasted.cols()) == want && pascal,
                weights,
                blocks: blocks_recoverable(&pasted, k, ell)?,
            });
        }
    }
    Ok(FractalVerification { entries })
}
