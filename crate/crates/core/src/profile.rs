//! Row/column projection data and its canonical (descending, zero-free) form.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::image::BinaryImage;

/// Wire form of a profile: `{"rows":[...],"cols":[...]}` in the caller's order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Given row and column sums, sorted descending with zero lines stripped.
///
/// The caller's ordering is kept in `row_perm`/`col_perm`: entry `k` is the
/// original (0-based) index of canonical line `k`. Zero lines sort last, so the
/// first `m` (resp. `n`) entries of each permutation cover the nonzero lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ProfileSpec", into = "ProfileSpec")]
pub struct ProjectionProfile {
    raw_rows: Vec<usize>,
    raw_cols: Vec<usize>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    total: usize,
}

fn descending_perm(values: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..values.len()).collect();
    // stable: equal sums keep their input order
    perm.sort_by(|&a, &b| values[b].cmp(&values[a]));
    perm
}

impl ProjectionProfile {
    /// Sort both sequences descending, recording where every line came from.
    pub fn canonicalize(raw_rows: &[usize], raw_cols: &[usize]) -> Self {
        let row_perm = descending_perm(raw_rows);
        let col_perm = descending_perm(raw_cols);
        let row_sums: Vec<usize> = row_perm
            .iter()
            .map(|&i| raw_rows[i])
            .take_while(|&r| r > 0)
            .collect();
        let col_sums: Vec<usize> = col_perm
            .iter()
            .map(|&j| raw_cols[j])
            .take_while(|&c| c > 0)
            .collect();
        let total = row_sums.iter().sum();
        ProjectionProfile {
            raw_rows: raw_rows.to_vec(),
            raw_cols: raw_cols.to_vec(),
            row_sums,
            col_sums,
            row_perm,
            col_perm,
            total,
        }
    }

    /// Canonical nonzero row sums, non-increasing.
    pub fn rows(&self) -> &[usize] {
        &self.row_sums
    }

    /// Canonical nonzero column sums, non-increasing.
    pub fn cols(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn m(&self) -> usize {
        self.row_sums.len()
    }

    pub fn n(&self) -> usize {
        self.col_sums.len()
    }

    /// Total mass: the sum of the row sums.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn raw_rows(&self) -> &[usize] {
        &self.raw_rows
    }

    pub fn raw_cols(&self) -> &[usize] {
        &self.raw_cols
    }

    pub fn row_perm(&self) -> &[usize] {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &[usize] {
        &self.col_perm
    }

    /// Original index of canonical row `i`.
    pub fn original_row(&self, i: usize) -> usize {
        self.row_perm[i]
    }

    /// Original index of canonical column `j`.
    pub fn original_col(&self, j: usize) -> usize {
        self.col_perm[j]
    }

    pub fn spec(&self) -> ProfileSpec {
        ProfileSpec {
            rows: self.raw_rows.clone(),
            cols: self.raw_cols.clone(),
        }
    }

    /// Gale–Ryser: equal masses and, for every k, the k largest column sums
    /// fit into the rows truncated at k.
    pub fn is_consistent(&self) -> bool {
        let col_mass: usize = self.col_sums.iter().sum();
        if col_mass != self.total {
            return false;
        }
        let mut prefix = 0;
        for (k, &c) in self.col_sums.iter().enumerate() {
            prefix += c;
            let capacity: usize = self.row_sums.iter().map(|&r| r.min(k + 1)).sum();
            if prefix > capacity {
                return false;
            }
        }
        true
    }

    /// Place a canonical `m x n` image back into the caller's row/column order,
    /// reinstating zero lines as empty rows and columns.
    pub fn to_original(&self, img: &BinaryImage) -> Result<BinaryImage> {
        self.check_canonical_dims(img)?;
        let mut out = BinaryImage::new(self.raw_rows.len(), self.raw_cols.len());
        for (i, j) in img.ones() {
            out.set(self.row_perm[i], self.col_perm[j], true);
        }
        Ok(out)
    }

    /// Inverse of [`to_original`](Self::to_original). Cells in zero lines must be empty.
    pub fn from_original(&self, img: &BinaryImage) -> Result<BinaryImage> {
        if img.height() != self.raw_rows.len() || img.width() != self.raw_cols.len() {
            return Err(TomoError::DimensionMismatch {
                left_rows: img.height(),
                left_cols: img.width(),
                right_rows: self.raw_rows.len(),
                right_cols: self.raw_cols.len(),
            });
        }
        let mut row_rank = vec![usize::MAX; self.raw_rows.len()];
        for (k, &i) in self.row_perm.iter().enumerate().take(self.m()) {
            row_rank[i] = k;
        }
        let mut col_rank = vec![usize::MAX; self.raw_cols.len()];
        for (k, &j) in self.col_perm.iter().enumerate().take(self.n()) {
            col_rank[j] = k;
        }
        let mut out = BinaryImage::new(self.m(), self.n());
        for (i, j) in img.ones() {
            let (ci, cj) = (row_rank[i], col_rank[j]);
            if ci == usize::MAX || cj == usize::MAX {
                return Err(TomoError::Parse(format!(
                    "cell ({}, {}) lies in a line whose sum is zero",
                    i + 1,
                    j + 1
                )));
            }
            out.set(ci, cj, true);
        }
        Ok(out)
    }

    fn check_canonical_dims(&self, img: &BinaryImage) -> Result<()> {
        if img.height() != self.m() || img.width() != self.n() {
            return Err(TomoError::DimensionMismatch {
                left_rows: img.height(),
                left_cols: img.width(),
                right_rows: self.m(),
                right_cols: self.n(),
            });
        }
        Ok(())
    }

    /// True when `img` (canonical dimensions) has exactly these line sums.
    pub fn is_solution(&self, img: &BinaryImage) -> bool {
        img.height() == self.m()
            && img.width() == self.n()
            && img.row_sums() == self.row_sums
            && img.col_sums() == self.col_sums
    }
}

impl From<ProfileSpec> for ProjectionProfile {
    fn from(spec: ProfileSpec) -> Self {
        ProjectionProfile::canonicalize(&spec.rows, &spec.cols)
    }
}

impl From<ProjectionProfile> for ProfileSpec {
    fn from(p: ProjectionProfile) -> Self {
        ProfileSpec {
            rows: p.raw_rows,
            cols: p.raw_cols,
        }
    }
}

/// Free-function form of [`ProjectionProfile::canonicalize`].
pub fn canonicalize(raw_rows: &[usize], raw_cols: &[usize]) -> ProjectionProfile {
    ProjectionProfile::canonicalize(raw_rows, raw_cols)
}

pub fn is_consistent(p: &ProjectionProfile) -> bool {
    p.is_consistent()
}
