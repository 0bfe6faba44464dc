//! Dense exact matrices over ℚ(√m) and Gaussian-elimination rank.

use crate::scalar::FieldScalar;
use std::fmt;

/// A dense rows × cols matrix with [`FieldScalar`] entries, all sharing one
/// radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    m: u32,
    data: Vec<FieldScalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, m: u32) -> Self {
        ExactMatrix {
            rows,
            cols,
            m,
            data: vec![FieldScalar::zero(m); rows * cols],
        }
    }

    pub fn identity(n: usize, m: u32) -> Self {
        let mut out = Self::zeros(n, n, m);
        for i in 0..n {
            out.set(i, i, FieldScalar::one(m));
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<FieldScalar>>, m: u32) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for e in row {
                assert_eq!(e.radicand(), m, "entry from a different field");
                data.push(e);
            }
        }
        ExactMatrix {
            rows: r,
            cols: c,
            m,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn radicand(&self) -> u32 {
        self.m
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldScalar) {
        assert_eq!(v.radicand(), self.m, "entry from a different field");
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.m);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        assert_eq!(self.m, other.m, "field mismatch");
        let mut out = Self::zeros(self.rows, other.cols, self.m);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).checked_add(&a.checked_mul(b).unwrap()).unwrap();
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let mut out = self.clone();
        for (d, o) in out.data.iter_mut().zip(other.data.iter()) {
            *d = d.checked_add(o).unwrap();
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch");
        assert_eq!(self.m, other.m, "field mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            m: self.m,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch");
        assert_eq!(self.m, other.m, "field mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols, self.m);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Rank over ℚ(√m) by exact Gaussian elimination with nonzero-pivot
    /// selection.
    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<FieldScalar>> = (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(rank, p);
            let pivot = work[rank][col].clone();
            for r in rank + 1..self.rows {
                if work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].checked_div(&pivot).unwrap();
                // Indexing both rows at once; iterators would need split_at_mut.
                #[allow(clippy::needless_range_loop)]
                for c in col..self.cols {
                    let delta = factor.checked_mul(&work[rank][c]).unwrap();
                    work[r][c] = work[r][c].checked_sub(&delta).unwrap();
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Solves self · x = rhs for square invertible self; `None` when the
    /// matrix is singular.
    pub fn solve(&self, rhs: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(rhs.len(), self.rows, "rhs length mismatch");
        let n = self.rows;
        let mut work: Vec<Vec<FieldScalar>> = (0..n)
            .map(|r| {
                let mut row = self.data[r * n..(r + 1) * n].to_vec();
                row.push(rhs[r].clone());
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !work[r][col].is_zero())?;
            work.swap(col, p);
            let pivot = work[col][col].clone();
            for r in 0..n {
                if r == col || work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].checked_div(&pivot).unwrap();
                #[allow(clippy::needless_range_loop)]
                for c in col..=n {
                    let delta = factor.checked_mul(&work[col][c]).unwrap();
                    work[r][c] = work[r][c].checked_sub(&delta).unwrap();
                }
            }
        }
        Some(
            (0..n)
                .map(|r| work[r][n].checked_div(&work[r][r]).unwrap())
                .collect(),
        )
    }
}

/// Rank over ℚ(√m); free-function form of [`ExactMatrix::rank`].
pub fn exact_rank(a: &ExactMatrix) -> usize {
    a.rank()
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
