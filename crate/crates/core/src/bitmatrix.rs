//! Sparse (0,1)-matrices.
//!
//! A [`BinaryMatrix`] stores its ones as sorted row adjacency lists with a
//! cached column view. Coordinates are 0-based here and 1-based in every file
//! format.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    row_ones: Vec<Vec<u32>>,
    col_ones: Vec<Vec<u32>>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows,
            cols,
            row_ones: vec![Vec::new(); rows],
            col_ones: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_row_lists(n, (0..n).map(|i| vec![i as u32]).collect())
    }

    /// The `rows x cols` matrix filled with ones.
    pub fn ones(rows: usize, cols: usize) -> Self {
        let row: Vec<u32> = (0..cols as u32).collect();
        Self::from_row_lists(cols, vec![row; rows])
    }

    /// Builds a matrix from its set of one-coordinates. Repeated coordinates
    /// collapse; out-of-range coordinates are an error.
    pub fn from_coords<I>(rows: usize, cols: usize, ones: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut row_ones = vec![Vec::new(); rows];
        for (r, c) in ones {
            if r >= rows || c >= cols {
                return Err(Error::domain(format!(
                    "coordinate ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            row_ones[r].push(c as u32);
        }
        for row in &mut row_ones {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self::from_row_lists(cols, row_ones))
    }

    /// Builds from sorted, duplicate-free, in-range row lists.
    fn from_row_lists(cols: usize, row_ones: Vec<Vec<u32>>) -> Self {
        let rows = row_ones.len();
        let mut col_ones = vec![Vec::new(); cols];
        for (r, row) in row_ones.iter().enumerate() {
            debug_assert!(row.windows(2).all(|w| w[0] < w[1]));
            for &c in row {
                col_ones[c as usize].push(r as u32);
            }
        }
        BinaryMatrix {
            rows,
            cols,
            row_ones,
            col_ones,
        }
    }

    /// Parses rows of `0`/`1` characters; `rows` must all have equal length.
    pub fn from_dense_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let text: String = rows.iter().map(|r| format!("{}\n", r.as_ref())).collect();
        Self::deserialize(&text, Format::Ascii)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_ones.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row_ones[r].binary_search(&(c as u32)).is_ok()
    }

    /// Sorted column indices of the ones in row `r`.
    pub fn row(&self, r: usize) -> &[u32] {
        &self.row_ones[r]
    }

    /// Sorted row indices of the ones in column `c`.
    pub fn col(&self, c: usize) -> &[u32] {
        &self.col_ones[c]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_ones[r].len()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.col_ones[c].len()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_ones.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        self.col_ones.iter().map(Vec::len).collect()
    }

    /// `nnz / (rows * cols)`, or `None` for an empty shape.
    pub fn density(&self) -> Option<f64> {
        let cells = self.rows * self.cols;
        (cells > 0).then(|| self.nnz() as f64 / cells as f64)
    }

    /// One-coordinates in row-major order.
    pub fn coords(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_ones
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&c| (r, c as usize)))
    }

    /// The submatrix on the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BinaryMatrix {
        let mut col_pos = vec![u32::MAX; self.cols];
        for (j, &c) in cols.iter().enumerate() {
            col_pos[c] = j as u32;
        }
        let lists = rows
            .iter()
            .map(|&r| {
                let mut v: Vec<u32> = self.row_ones[r]
                    .iter()
                    .map(|&c| col_pos[c as usize])
                    .filter(|&j| j != u32::MAX)
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        Self::from_row_lists(cols.len(), lists)
    }

    /// Contiguous block `[r0, r0+h) x [c0, c0+w)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> BinaryMatrix {
        let rows: Vec<usize> = (r0..r0 + h).collect();
        let cols: Vec<usize> = (c0..c0 + w).collect();
        self.select(&rows, &cols)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        BinaryMatrix {
            rows: self.cols,
            cols: self.rows,
            row_ones: self.col_ones.clone(),
            col_ones: self.row_ones.clone(),
        }
    }

    /// Moves row `r` to `row_perm[r]` and column `c` to `col_perm[c]`.
    pub fn permute(&self, p: &PermutationPair) -> Result<BinaryMatrix> {
        if !p.is_valid_for(self.rows, self.cols) {
            return Err(Error::domain("permutation does not match matrix shape"));
        }
        let ones = self
            .coords()
            .map(|(r, c)| (p.row_perm[r], p.col_perm[c]));
        BinaryMatrix::from_coords(self.rows, self.cols, ones)
    }

    pub fn to_ascii(&self) -> String {
        self.serialize(Format::Ascii)
    }
}

/// `O(M)`: `M` on top of the `cols x cols` identity.
pub fn stack_identity_below(m: &BinaryMatrix) -> Result<BinaryMatrix> {
    if m.cols == 0 {
        return Err(Error::domain("cannot stack an identity below a zero-column matrix"));
    }
    let mut lists = m.row_ones.clone();
    lists.extend((0..m.cols as u32).map(|c| vec![c]));
    Ok(BinaryMatrix::from_row_lists(m.cols, lists))
}

/// `P(M_1, ..., M_t)`: side-by-side concatenation with all parts aligned to
/// the bottom row. Heights must be non-increasing.
pub fn paste_right(parts: &[BinaryMatrix]) -> Result<BinaryMatrix> {
    let first = parts
        .first()
        .ok_or_else(|| Error::domain("paste_right needs at least one part"))?;
    let height = first.rows;
    let mut prev = height;
    for (i, p) in parts.iter().enumerate() {
        if p.rows > prev {
            return Err(Error::domain(format!(
                "part {i} has {} rows, more than the {prev} of the part before it",
                p.rows
            )));
        }
        prev = p.rows;
    }
    let cols: usize = parts.iter().map(|p| p.cols).sum();
    let mut lists = vec![Vec::new(); height];
    let mut offset = 0u32;
    for p in parts {
        let shift = height - p.rows;
        for (r, row) in p.row_ones.iter().enumerate() {
            lists[r + shift].extend(row.iter().map(|&c| c + offset));
        }
        offset += p.cols as u32;
    }
    Ok(BinaryMatrix::from_row_lists(cols, lists))
}

/// Block-diagonal assembly.
pub fn direct_sum(parts: &[BinaryMatrix]) -> BinaryMatrix {
    let cols: usize = parts.iter().map(|p| p.cols).sum();
    let mut lists = Vec::with_capacity(parts.iter().map(|p| p.rows).sum());
    let mut offset = 0u32;
    for p in parts {
        lists.extend(
            p.row_ones
                .iter()
                .map(|row| row.iter().map(|&c| c + offset).collect::<Vec<_>>()),
        );
        offset += p.cols as u32;
    }
    BinaryMatrix::from_row_lists(cols, lists)
}

/// A connected component of the row/column bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Component {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Components {
    /// Ordered by smallest row index.
    pub components: Vec<Component>,
    pub zero_rows: Vec<usize>,
    pub zero_cols: Vec<usize>,
}

pub fn bipartite_components(m: &BinaryMatrix) -> Components {
    let mut row_seen = vec![false; m.rows];
    let mut col_seen = vec![false; m.cols];
    let mut components = Vec::new();
    let mut zero_rows = Vec::new();
    for start in 0..m.rows {
        if row_seen[start] {
            continue;
        }
        if m.row_ones[start].is_empty() {
            row_seen[start] = true;
            zero_rows.push(start);
            continue;
        }
        let mut rows = vec![start];
        let mut cols = Vec::new();
        row_seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(r) = queue.pop_front() {
            for &c in &m.row_ones[r] {
                let c = c as usize;
                if col_seen[c] {
                    continue;
                }
                col_seen[c] = true;
                cols.push(c);
                for &r2 in &m.col_ones[c] {
                    let r2 = r2 as usize;
                    if !row_seen[r2] {
                        row_seen[r2] = true;
                        rows.push(r2);
                        queue.push_back(r2);
                    }
                }
            }
        }
        rows.sort_unstable();
        cols.sort_unstable();
        components.push(Component { rows, cols });
    }
    let zero_cols = (0..m.cols).filter(|&c| m.col_ones[c].is_empty()).collect();
    Components {
        components,
        zero_rows,
        zero_cols,
    }
}

/// Row and column bijections carrying one matrix onto another:
/// entry `(r, c)` of the source lands at `(row_perm[r], col_perm[c])`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PermutationPair {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

impl PermutationPair {
    pub fn identity(rows: usize, cols: usize) -> Self {
        PermutationPair {
            row_perm: (0..rows).collect(),
            col_perm: (0..cols).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.row_perm.iter().enumerate().all(|(i, &j)| i == j)
            && self.col_perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_valid_for(&self, rows: usize, cols: usize) -> bool {
        self.row_perm.len() == rows
            && self.col_perm.len() == cols
            && is_permutation(&self.row_perm)
            && is_permutation(&self.col_perm)
    }

    pub fn inverse(&self) -> Self {
        PermutationPair {
            row_perm: invert(&self.row_perm),
            col_perm: invert(&self.col_perm),
        }
    }

    /// Checks `self` carries `a` exactly onto `b`.
    pub fn verify(&self, a: &BinaryMatrix, b: &BinaryMatrix) -> bool {
        a.rows == b.rows
            && a.cols == b.cols
            && a.nnz() == b.nnz()
            && self.is_valid_for(a.rows, a.cols)
            && a.coords().all(|(r, c)| b.get(self.row_perm[r], self.col_perm[c]))
    }
}

/// Finds row and column permutations carrying `a` onto `b`, or proves none
/// exist.
///
/// Rows and columns are colour-refined in lockstep on both matrices (a
/// vertex's new colour is its old colour plus the sorted colours of its
/// neighbours, numbered canonically across both sides). When refinement
/// stabilises without being discrete, one vertex of the first non-singleton
/// class is individualised in `a` and matched in turn against every vertex of
/// the same class in `b`. The search is exhaustive.
pub fn permutation_equivalent(a: &BinaryMatrix, b: &BinaryMatrix) -> Option<PermutationPair> {
    if a.rows != b.rows || a.cols != b.cols || a.nnz() != b.nnz() {
        return None;
    }
    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    if sorted(a.row_weights()) != sorted(b.row_weights())
        || sorted(a.col_weights()) != sorted(b.col_weights())
    {
        return None;
    }
    let state = Coloring {
        a_rows: vec![0; a.rows],
        a_cols: vec![0; a.cols],
        b_rows: vec![0; b.rows],
        b_cols: vec![0; b.cols],
    };
    search(a, b, state)
}

#[derive(Clone)]
struct Coloring {
    a_rows: Vec<u32>,
    a_cols: Vec<u32>,
    b_rows: Vec<u32>,
    b_cols: Vec<u32>,
}

fn class_count(colors: &[u32]) -> usize {
    colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
}

/// Recolours one vertex kind from signatures on both sides. Returns `false`
/// when the colour histograms of `a` and `b` diverge.
fn recolor(
    a_self: &mut [u32],
    a_other: &[u32],
    a_adj: &[Vec<u32>],
    b_self: &mut [u32],
    b_other: &[u32],
    b_adj: &[Vec<u32>],
) -> bool {
    let sig = |own: u32, adj: &[u32], other: &[u32]| {
        let mut s: Vec<u32> = Vec::with_capacity(adj.len() + 1);
        s.push(own);
        let start = s.len();
        s.extend(adj.iter().map(|&j| other[j as usize]));
        s[start..].sort_unstable();
        s
    };
    let sa: Vec<Vec<u32>> = (0..a_self.len())
        .map(|i| sig(a_self[i], &a_adj[i], a_other))
        .collect();
    let sb: Vec<Vec<u32>> = (0..b_self.len())
        .map(|i| sig(b_self[i], &b_adj[i], b_other))
        .collect();
    let mut ids: BTreeMap<&[u32], (u32, i64)> = BTreeMap::new();
    for s in &sa {
        ids.entry(s.as_slice()).or_insert((0, 0)).1 += 1;
    }
    for s in &sb {
        ids.entry(s.as_slice()).or_insert((0, 0)).1 -= 1;
    }
    if ids.values().any(|&(_, balance)| balance != 0) {
        return false;
    }
    for (next, v) in ids.values_mut().enumerate() {
        v.0 = next as u32;
    }
    let new_a: Vec<u32> = sa.iter().map(|s| ids[s.as_slice()].0).collect();
    let new_b: Vec<u32> = sb.iter().map(|s| ids[s.as_slice()].0).collect();
    a_self.copy_from_slice(&new_a);
    b_self.copy_from_slice(&new_b);
    true
}

fn refine(a: &BinaryMatrix, b: &BinaryMatrix, st: &mut Coloring) -> bool {
    let mut classes = (class_count(&st.a_rows), class_count(&st.a_cols));
    loop {
        if !recolor(
            &mut st.a_rows,
            &st.a_cols,
            &a.row_ones,
            &mut st.b_rows,
            &st.b_cols,
            &b.row_ones,
        ) {
            return false;
        }
        if !recolor(
            &mut st.a_cols,
            &st.a_rows,
            &a.col_ones,
            &mut st.b_cols,
            &st.b_rows,
            &b.col_ones,
        ) {
            return false;
        }
        let now = (class_count(&st.a_rows), class_count(&st.a_cols));
        if now == classes {
            return true;
        }
        classes = now;
    }
}

/// First colour class with more than one member, preferring the smallest.
fn pick_class(colors: &[u32]) -> Option<u32> {
    let mut sizes = vec![0usize; class_count(colors)];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1)
        .min_by_key(|(_, &s)| s)
        .map(|(c, _)| c as u32)
}

fn search(a: &BinaryMatrix, b: &BinaryMatrix, mut st: Coloring) -> Option<PermutationPair> {
    if !refine(a, b, &mut st) {
        return None;
    }
    let (on_rows, class) = match pick_class(&st.a_rows) {
        Some(c) => (true, c),
        None => match pick_class(&st.a_cols) {
            Some(c) => (false, c),
            None => return discrete_witness(a, b, &st),
        },
    };
    let (a_colors, b_colors) = if on_rows {
        (&st.a_rows, &st.b_rows)
    } else {
        (&st.a_cols, &st.b_cols)
    };
    let fresh = class_count(a_colors) as u32;
    let v = a_colors.iter().position(|&c| c == class)?;
    let candidates: Vec<usize> = (0..b_colors.len()).filter(|&w| b_colors[w] == class).collect();
    for w in candidates {
        let mut next = st.clone();
        if on_rows {
            next.a_rows[v] = fresh;
            next.b_rows[w] = fresh;
        } else {
            next.a_cols[v] = fresh;
            next.b_cols[w] = fresh;
        }
        if let Some(found) = search(a, b, next) {
            return Some(found);
        }
    }
    None
}

fn discrete_witness(a: &BinaryMatrix, b: &BinaryMatrix, st: &Coloring) -> Option<PermutationPair> {
    let matching = |from: &[u32], to: &[u32]| {
        let mut where_in_b = vec![0usize; to.len()];
        for (j, &c) in to.iter().enumerate() {
            where_in_b[c as usize] = j;
        }
        from.iter().map(|&c| where_in_b[c as usize]).collect::<Vec<_>>()
    };
    let p = PermutationPair {
        row_perm: matching(&st.a_rows, &st.b_rows),
        col_perm: matching(&st.a_cols, &st.b_cols),
    };
    p.verify(a, b).then_some(p)
}

/// File formats for binary matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// MatrixMarket coordinate, integer field, general symmetry.
    MatrixMarket,
    /// LDPC alist.
    Alist,
    /// One line of `0`/`1` characters per row. A matrix with no rows reads
    /// back as `0 x 0`.
    Ascii,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matrixmarket" | "mtx" | "mm" => Ok(Format::MatrixMarket),
            "alist" => Ok(Format::Alist),
            "ascii" | "txt" => Ok(Format::Ascii),
            other => Err(Error::domain(format!("unknown matrix format '{other}'"))),
        }
    }
}

pub const MATRIX_MARKET_HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

impl BinaryMatrix {
    pub fn serialize(&self, format: Format) -> String {
        match format {
            Format::MatrixMarket => self.to_matrix_market(),
            Format::Alist => self.to_alist(),
            Format::Ascii => {
                let mut out = String::with_capacity(self.rows * (self.cols + 1));
                for row in &self.row_ones {
                    let mut line = vec![b'0'; self.cols];
                    for &c in row {
                        line[c as usize] = b'1';
                    }
                    out.push_str(std::str::from_utf8(&line).expect("ascii digits"));
                    out.push('\n');
                }
                out
            }
        }
    }

    pub fn deserialize(text: &str, format: Format) -> Result<BinaryMatrix> {
        match format {
            Format::MatrixMarket => parse_matrix_market(text),
            Format::Alist => parse_alist(text),
            Format::Ascii => parse_ascii(text),
        }
    }

    fn to_matrix_market(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{MATRIX_MARKET_HEADER}").unwrap();
        writeln!(out, "{} {} {}", self.rows, self.cols, self.nnz()).unwrap();
        for (r, c) in self.coords() {
            writeln!(out, "{} {} 1", r + 1, c + 1).unwrap();
        }
        out
    }

    fn to_alist(&self) -> String {
        let col_w = self.col_weights();
        let row_w = self.row_weights();
        let max_col = col_w.iter().copied().max().unwrap_or(0);
        let max_row = row_w.iter().copied().max().unwrap_or(0);
        let join = |v: &mut dyn Iterator<Item = usize>| {
            v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        writeln!(out, "{} {}", self.cols, self.rows).unwrap();
        writeln!(out, "{max_col} {max_row}").unwrap();
        writeln!(out, "{}", join(&mut col_w.iter().copied())).unwrap();
        writeln!(out, "{}", join(&mut row_w.iter().copied())).unwrap();
        let padded = |list: &[u32], width: usize| {
            let mut it = list
                .iter()
                .map(|&i| i as usize + 1)
                .chain(std::iter::repeat(0))
                .take(width);
            join(&mut it)
        };
        for col in &self.col_ones {
            writeln!(out, "{}", padded(col, max_col)).unwrap();
        }
        for row in &self.row_ones {
            writeln!(out, "{}", padded(row, max_row)).unwrap();
        }
        out
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("expected {what}, found '{tok}'")))
}

fn parse_matrix_market(text: &str) -> Result<BinaryMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty input, expected MatrixMarket header"))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" || words[2] != "coordinate"
    {
        return Err(Error::parse(1, format!("expected '{MATRIX_MARKET_HEADER}'")));
    }
    let pattern = match words[3].as_str() {
        "integer" => false,
        "pattern" => true,
        other => return Err(Error::parse(1, format!("unsupported field '{other}'"))),
    };
    if words[4] != "general" {
        return Err(Error::parse(1, format!("unsupported symmetry '{}'", words[4])));
    }
    let mut body = lines.filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| Error::parse(2, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(Error::parse(size_line, "size line must be 'rows cols nnz'"));
    }
    let rows = parse_usize(dims[0], size_line, "row count")?;
    let cols = parse_usize(dims[1], size_line, "column count")?;
    let nnz = parse_usize(dims[2], size_line, "entry count")?;
    let mut ones = Vec::with_capacity(nnz);
    let mut seen = std::collections::HashSet::with_capacity(nnz);
    let mut last_line = size_line;
    for (ln, l) in body {
        last_line = ln;
        let f: Vec<&str> = l.split_whitespace().collect();
        let want = if pattern { 2 } else { 3 };
        if f.len() != want {
            return Err(Error::parse(ln, format!("expected {want} fields, found {}", f.len())));
        }
        let r = parse_usize(f[0], ln, "row index")?;
        let c = parse_usize(f[1], ln, "column index")?;
        if !pattern && f[2] != "1" {
            return Err(Error::parse(ln, format!("entry value must be 1, found '{}'", f[2])));
        }
        if r == 0 || r > rows || c == 0 || c > cols {
            return Err(Error::parse(ln, format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        if !seen.insert((r, c)) {
            return Err(Error::parse(ln, format!("duplicate entry ({r}, {c})")));
        }
        ones.push((r - 1, c - 1));
    }
    if ones.len() != nnz {
        return Err(Error::parse(
            last_line,
            format!("size line announces {nnz} entries, found {}", ones.len()),
        ));
    }
    BinaryMatrix::from_coords(rows, cols, ones)
}

fn parse_alist(text: &str) -> Result<BinaryMatrix> {
    let mut toks = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
    let last_line = text.lines().count().max(1);
    let mut next = |what: &str| -> Result<(usize, usize)> {
        let (ln, t) = toks
            .next()
            .ok_or_else(|| Error::parse(last_line, format!("unexpected end of input, expected {what}")))?;
        Ok((ln, parse_usize(t, ln, what)?))
    };
    let cols = next("column count")?.1;
    let rows = next("row count")?.1;
    let (ln_max, max_col) = next("max column weight")?;
    let max_row = next("max row weight")?.1;
    let mut col_w = Vec::with_capacity(cols);
    for _ in 0..cols {
        let (ln, w) = next("column weight")?;
        if w > max_col {
            return Err(Error::parse(ln, format!("column weight {w} exceeds maximum {max_col}")));
        }
        col_w.push(w);
    }
    let mut row_w = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (ln, w) = next("row weight")?;
        if w > max_row {
            return Err(Error::parse(ln, format!("row weight {w} exceeds maximum {max_row}")));
        }
        row_w.push(w);
    }
    if col_w.iter().max().copied().unwrap_or(0) != max_col || row_w.iter().max().copied().unwrap_or(0) != max_row {
        return Err(Error::parse(ln_max, "maximum weights do not match the weight lists"));
    }
    let mut read_lists = |count: usize, width: usize, weights: &[usize], bound: usize, kind: &str| {
        let mut lists: Vec<Vec<usize>> = Vec::with_capacity(count);
        for (i, &w) in weights.iter().enumerate().take(count) {
            let mut list = Vec::with_capacity(w);
            for slot in 0..width {
                let (ln, v) = next("index")?;
                if slot < w {
                    if v == 0 || v > bound {
                        return Err(Error::parse(ln, format!("{kind} {} lists index {v} outside [1, {bound}]", i + 1)));
                    }
                    if list.last().is_some_and(|&p| p >= v) {
                        return Err(Error::parse(ln, format!("{kind} {} indices not increasing", i + 1)));
                    }
                    list.push(v);
                } else if v != 0 {
                    return Err(Error::parse(ln, format!("{kind} {} has more than {w} entries", i + 1)));
                }
            }
            lists.push(list);
        }
        Ok::<_, Error>(lists)
    };
    let col_lists = read_lists(cols, max_col, &col_w, rows, "column")?;
    let row_lists = read_lists(rows, max_row, &row_w, cols, "row")?;
    drop(read_lists);
    if let Some((ln, t)) = toks.next() {
        return Err(Error::parse(ln, format!("trailing token '{t}'")));
    }
    let from_rows = BinaryMatrix::from_coords(
        rows,
        cols,
        row_lists
            .iter()
            .enumerate()
            .flat_map(|(r, l)| l.iter().map(move |&c| (r, c - 1))),
    )?;
    let from_cols = BinaryMatrix::from_coords(
        rows,
        cols,
        col_lists
            .iter()
            .enumerate()
            .flat_map(|(c, l)| l.iter().map(move |&r| (r - 1, c))),
    )?;
    if from_rows != from_cols {
        return Err(Error::parse(last_line, "row lists and column lists disagree"));
    }
    Ok(from_rows)
}

fn parse_ascii(text: &str) -> Result<BinaryMatrix> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    let cols = lines.first().map_or(0, |l| l.trim_end_matches('\r').len());
    let mut row_lists = Vec::with_capacity(lines.len());
    for (i, raw) in lines.iter().enumerate() {
        let l = raw.trim_end_matches('\r');
        if l.len() != cols {
            return Err(Error::parse(i + 1, format!("row has {} characters, expected {cols}", l.len())));
        }
        let mut row = Vec::new();
        for (c, ch) in l.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => row.push(c as u32),
                other => {
                    return Err(Error::parse(
                        i + 1,
                        format!("invalid character '{}' at column {}", other as char, c + 1),
                    ))
                }
            }
        }
        row_lists.push(row);
    }
    Ok(BinaryMatrix::from_row_lists(cols, row_lists))
}
