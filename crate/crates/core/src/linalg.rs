//! Dense matrices over GF(2) with at most 64 columns.
//!
//! Vectors are `u64` bit masks; bit `j` is coordinate `j`. A matrix acts on
//! column vectors: `apply(x)` has bit `i` equal to the parity of `row_i & x`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<u64>,
    cols: usize,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            let s: String = (0..self.cols)
                .map(|j| if r >> j & 1 == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64, "at most 64 columns");
        BitMatrix {
            rows: vec![0; rows],
            cols,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim, dim);
        for i in 0..dim {
            m.rows[i] = 1 << i;
        }
        m
    }

    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Self {
        assert!(cols <= 64, "at most 64 columns");
        let mask = col_mask(cols);
        assert!(
            rows.iter().all(|r| r & !mask == 0),
            "row wider than column count"
        );
        BitMatrix { rows, cols }
    }

    /// Matrix of the linear map whose image of basis vector `e_j` is `images[j]`.
    pub fn from_columns(images: &[u64], rows: usize) -> Self {
        let mut m = Self::zero(rows, images.len());
        for (j, &img) in images.iter().enumerate() {
            for i in 0..rows {
                if img >> i & 1 == 1 {
                    m.rows[i] |= 1 << j;
                }
            }
        }
        m
    }

    /// Matrix of a linear map given as a function on `dim`-bit vectors.
    /// Linearity is not checked here.
    pub fn from_linear_fn(dim: usize, f: impl Fn(u64) -> u64) -> Self {
        let images: Vec<u64> = (0..dim).map(|j| f(1 << j)).collect();
        Self::from_columns(&images, dim)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.rows.iter().enumerate().fold(0, |acc, (i, r)| {
            acc | (((r & x).count_ones() as u64) & 1) << i
        })
    }

    /// Image of the `j`-th basis vector.
    pub fn column(&self, j: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | (r >> j & 1) << i)
    }

    pub fn transpose(&self) -> Self {
        let images: Vec<u64> = self.rows.clone();
        Self::from_columns(&images, self.cols)
    }

    pub fn mul(&self, other: &BitMatrix) -> Self {
        assert_eq!(self.cols, other.nrows(), "dimension mismatch");
        let images: Vec<u64> = (0..other.cols)
            .map(|j| self.apply(other.column(j)))
            .collect();
        Self::from_columns(&images, self.nrows())
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows() == self.cols && *self == self.transpose()
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let bit = 1u64 << col;
            let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.nrows() == self.cols && self.rank() == self.cols
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.cols;
        if self.nrows() != n {
            return None;
        }
        let mut a = self.rows.clone();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for col in 0..n {
            let bit = 1u64 << col;
            let p = (col..n).find(|&r| a[r] & bit != 0)?;
            a.swap(col, p);
            inv.swap(col, p);
            for r in 0..n {
                if r != col && a[r] & bit != 0 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Some(BitMatrix { rows: inv, cols: n })
    }
}

fn col_mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

/// Rank of a set of vectors over GF(2).
pub fn span_rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}
