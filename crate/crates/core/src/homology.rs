//! Exact linear algebra for chain complexes: GF(2) rank on bit-packed
//! rows, integer Smith normal form, and Betti/torsion extraction.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary composition is nonzero entering dimension {dim}: not a chain complex")]
    NotAComplex { dim: usize },
}

/// Sparse matrix in triplet form; `entries` hold (row, col, coefficient)
/// with rows indexing the lower-dimensional cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(u32, u32, i64)>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> SparseMat {
        SparseMat {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Column-major adjacency: entries of each column.
    pub fn columns(&self) -> Vec<Vec<(u32, i64)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(r, c, a) in &self.entries {
            cols[c as usize].push((r, a));
        }
        cols
    }
}

/// Anything with per-dimension cell counts and boundary matrices.
pub trait BoundaryComplex {
    fn top_dim(&self) -> usize;
    fn n_cells(&self, d: usize) -> usize;
    /// Boundary from d-chains to (d-1)-chains; `boundary(0)` is empty.
    fn boundary(&self, d: usize) -> &SparseMat;
}

/// Dense GF(2) matrix, rows packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn new(rows: usize, cols: usize) -> Gf2Matrix {
        let words = cols.div_ceil(64);
        Gf2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        let w = r * self.words + c / 64;
        let mask = 1u64 << (c % 64);
        if bit {
            self.data[w] |= mask;
        } else {
            self.data[w] &= !mask;
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    /// Odd coefficients become ones.
    pub fn from_entries(rows: usize, cols: usize, entries: &[(u32, u32, i64)]) -> Gf2Matrix {
        let mut m = Gf2Matrix::new(rows, cols);
        for &(r, c, a) in entries {
            if a.rem_euclid(2) == 1 {
                let prev = m.get(r as usize, c as usize);
                m.set(r as usize, c as usize, !prev);
            }
        }
        m
    }
}

/// Rank over GF(2) by forward elimination with word-parallel XOR.
/// Pivots are chosen deterministically: first nonzero column, lowest row.
pub fn gf2_rank(mat: &Gf2Matrix) -> usize {
    let words = mat.words;
    let mut owned: Vec<Vec<u64>> = mat
        .data
        .chunks(words.max(1))
        .take(mat.rows)
        .map(|ch| ch.to_vec())
        .collect();
    let mut rank = 0usize;
    for c in 0..mat.cols {
        let w = c / 64;
        let mask = 1u64 << (c % 64);
        let pivot = (rank..owned.len()).find(|&i| owned[i][w] & mask != 0);
        let Some(p) = pivot else { continue };
        owned.swap(rank, p);
        let (pivot_row, rest) = {
            let (a, b) = owned.split_at_mut(rank + 1);
            (&a[rank], b)
        };
        for row in rest.iter_mut() {
            if row[w] & mask != 0 {
                for k in w..words {
                    row[k] ^= pivot_row[k];
                }
            }
        }
        rank += 1;
        if rank == owned.len() {
            break;
        }
    }
    rank
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: &[(u32, u32, i64)]) -> IntMatrix {
        let mut m = IntMatrix::new(rows, cols);
        for &(r, c, a) in entries {
            m.data[r as usize][c as usize] += BigInt::from(a);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        IntMatrix {
            rows: r,
            cols: c,
            data: rows
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r][c]
    }
}

/// Invariant factors `d_1 | d_2 | ...` and the rank of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        let step = if (r.is_negative()) ^ (b.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        q + step
    } else {
        q
    }
}

/// Smith normal form by minimal-pivot elimination with exact integers.
/// Only the invariant factors are returned; no transforms are tracked.
pub fn smith_normal_form(mat: &IntMatrix) -> SnfResult {
    let rows = mat.rows;
    let cols = mat.cols;
    let mut a: Vec<Vec<BigInt>> = mat.data.clone();
    let mut factors: Vec<BigInt> = Vec::new();

    let swap_cols = |a: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        if x != y {
            for row in a.iter_mut() {
                row.swap(x, y);
            }
        }
    };

    for t in 0..rows.min(cols) {
        // Minimal nonzero entry of the trailing submatrix as pivot.
        let mut best: Option<(usize, usize)> = None;
        'scan: for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
                };
                if better {
                    best = Some((i, j));
                    if a[i][j].abs().is_one() {
                        break 'scan;
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);

        loop {
            let mut dirty = false;
            // Clear the pivot column.
            for i in (t + 1)..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[i][t], &a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        if !a[t][j].is_zero() {
                            let delta = &q * &a[t][j];
                            a[i][j] -= delta;
                        }
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(i, t);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Clear the pivot row.
            for j in (t + 1)..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[t][j], &a[t][t]);
                if !q.is_zero() {
                    for i in t..rows {
                        if !a[i][t].is_zero() {
                            let delta = &q * &a[i][t];
                            a[i][j] -= delta;
                        }
                    }
                }
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, j, t);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: the pivot must divide the trailing block.
            let p = a[t][t].clone();
            let mut fixed = false;
            'div: for i in (t + 1)..rows {
                for j in (t + 1)..cols {
                    if !(&a[i][j] % &p).is_zero() {
                        for jj in t..cols {
                            let add = a[i][jj].clone();
                            a[t][jj] += add;
                        }
                        fixed = true;
                        break 'div;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        factors.push(a[t][t].abs());
    }

    debug_assert!(factors
        .windows(2)
        .all(|w| (&w[1] % &w[0]).is_zero()));
    let rank = factors.len();
    SnfResult { factors, rank }
}

/// One homology group: free rank plus the torsion invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut runs: Vec<(&BigInt, usize)> = Vec::new();
        for t in &self.torsion {
            match runs.last_mut() {
                Some((v, c)) if *v == t => *c += 1,
                _ => runs.push((t, 1)),
            }
        }
        for (v, c) in runs {
            if c == 1 {
                parts.push(format!("Z{v}"));
            } else {
                parts.push(format!("Z{v}^{c}"));
            }
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Per-dimension homology of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomologySummary {
    /// Unreduced Z2 Betti numbers by dimension.
    Z2(Vec<usize>),
    /// Integral groups by dimension.
    Int(Vec<HomologyGroup>),
}

impl HomologySummary {
    pub fn z2_betti(&self) -> Option<&[usize]> {
        match self {
            HomologySummary::Z2(b) => Some(b),
            _ => None,
        }
    }

    pub fn groups(&self) -> Option<&[HomologyGroup]> {
        match self {
            HomologySummary::Int(g) => Some(g),
            _ => None,
        }
    }
}

/// Coefficient ring for homology computations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ring {
    Z2,
    Z,
}

/// Checks that consecutive boundaries compose to zero over the ring.
pub fn validate_dd_zero<C: BoundaryComplex>(cx: &C, ring: Ring) -> Result<(), HomologyError> {
    for d in 1..cx.top_dim() {
        let low = cx.boundary(d).columns();
        let high = cx.boundary(d + 1);
        for col in high.columns() {
            let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
            for (mid, a) in col {
                for &(r, b) in &low[mid as usize] {
                    *acc.entry(r).or_insert(0) += a * b;
                }
            }
            let bad = acc.values().any(|&x| match ring {
                Ring::Z2 => x.rem_euclid(2) != 0,
                Ring::Z => x != 0,
            });
            if bad {
                return Err(HomologyError::NotAComplex { dim: d + 1 });
            }
        }
    }
    Ok(())
}

/// Homology of a validated complex.
///
/// Over Z2, `beta_d = n_d - rank d_d - rank d_{d+1}` with GF(2) ranks.
/// Over Z the ranks come from Smith normal form and the torsion of `H_d`
/// is the set of invariant factors of `d_{d+1}` exceeding 1.
pub fn homology<C: BoundaryComplex>(
    cx: &C,
    ring: Ring,
) -> Result<HomologySummary, HomologyError> {
    validate_dd_zero(cx, ring)?;
    let top = cx.top_dim();
    match ring {
        Ring::Z2 => {
            let mut ranks = vec![0usize; top + 2];
            for d in 1..=top {
                let b = cx.boundary(d);
                ranks[d] = gf2_rank(&Gf2Matrix::from_entries(b.rows, b.cols, &b.entries));
            }
            let betti = (0..=top)
                .map(|d| cx.n_cells(d) - ranks[d] - ranks[d + 1])
                .collect();
            Ok(HomologySummary::Z2(betti))
        }
        Ring::Z => {
            let mut snfs: Vec<SnfResult> = Vec::with_capacity(top + 2);
            snfs.push(SnfResult {
                factors: vec![],
                rank: 0,
            });
            for d in 1..=top {
                let b = cx.boundary(d);
                snfs.push(smith_normal_form(&IntMatrix::from_entries(
                    b.rows, b.cols, &b.entries,
                )));
            }
            snfs.push(SnfResult {
                factors: vec![],
                rank: 0,
            });
            let groups = (0..=top)
                .map(|d| {
                    let free_rank = cx.n_cells(d) - snfs[d].rank - snfs[d + 1].rank;
                    let torsion: Vec<BigInt> = snfs[d + 1]
                        .factors
                        .iter()
                        .filter(|f| f.abs() > BigInt::one())
                        .cloned()
                        .collect();
                    HomologyGroup { free_rank, torsion }
                })
                .collect();
            Ok(HomologySummary::Int(groups))
        }
    }
}

/// Z2 Betti numbers predicted by the integral groups through universal
/// coefficients: free rank plus even torsion here plus even torsion one
/// dimension below.
pub fn z2_betti_from_integral(groups: &[HomologyGroup]) -> Vec<usize> {
    let even = |g: &HomologyGroup| {
        g.torsion
            .iter()
            .filter(|f| (*f % BigInt::from(2)).is_zero())
            .count()
    };
    (0..groups.len())
        .map(|d| {
            let below = if d > 0 { even(&groups[d - 1]) } else { 0 };
            groups[d].free_rank + even(&groups[d]) + below
        })
        .collect()
}
