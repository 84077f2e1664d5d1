//! The uniquely determined neighbour of a profile and the ambiguity parameter alpha.
//!
//! For canonical row sums `r_1 >= ... >= r_m`, the neighbour has column sums
//! `v_j = #{l : r_l >= j}`. It is the left-justified image (row `i` filled in
//! columns `1..=r_i`), the one image with line sums `(R, V)`. Alpha is half the
//! L1 distance between the given column sums and `V`.

use serde::{Deserialize, Serialize};

use crate::image::BinaryImage;
use crate::profile::ProjectionProfile;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighbourAnalysis {
    /// Column sums of the neighbour, non-increasing.
    pub v: Vec<usize>,
    /// Canonical column sums the analysis was taken against.
    pub c: Vec<usize>,
    pub alpha: usize,
    /// Columns with `v_j > c_j`, ascending, each repeated `v_j - c_j` times.
    pub surplus_cols: Vec<usize>,
    /// Columns with `v_i < c_i`, ascending, each repeated `c_i - v_i` times.
    pub deficit_cols: Vec<usize>,
}

impl NeighbourAnalysis {
    /// Analysis over an explicit number of columns; `cols` is zero-padded up to `width`.
    pub fn with_width(rows: &[usize], cols: &[usize], width: usize) -> Self {
        let v: Vec<usize> = (1..=width)
            .map(|j| rows.iter().filter(|&&r| r >= j).count())
            .collect();
        let c: Vec<usize> = (0..width)
            .map(|j| cols.get(j).copied().unwrap_or(0))
            .collect();
        let mut surplus_cols = Vec::new();
        let mut deficit_cols = Vec::new();
        let mut l1 = 0;
        for (j, (&vj, &cj)) in v.iter().zip(&c).enumerate() {
            l1 += vj.abs_diff(cj);
            if vj > cj {
                surplus_cols.extend(std::iter::repeat_n(j, vj - cj));
            } else {
                deficit_cols.extend(std::iter::repeat_n(j, cj - vj));
            }
        }
        NeighbourAnalysis {
            v,
            c,
            alpha: l1 / 2,
            surplus_cols,
            deficit_cols,
        }
    }

    /// `sum |c_j - v_j|`; always even for a consistent profile.
    pub fn l1_distance(&self) -> usize {
        self.surplus_cols.len() + self.deficit_cols.len()
    }

    pub fn is_unique(&self) -> bool {
        self.alpha == 0
    }
}

pub fn neighbour_column_sums(p: &ProjectionProfile) -> NeighbourAnalysis {
    NeighbourAnalysis::with_width(p.rows(), p.cols(), p.n())
}

/// The left-justified image with the profile's row sums, in canonical `m x n`
/// coordinates. Rows longer than `n` (inconsistent input) are truncated.
pub fn build_neighbour(p: &ProjectionProfile) -> BinaryImage {
    let mut img = BinaryImage::new(p.m(), p.n());
    for (i, &r) in p.rows().iter().enumerate() {
        for j in 0..r.min(p.n()) {
            img.set(i, j, true);
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::canonicalize;

    #[test]
    fn worked_example_neighbour() {
        let p = canonicalize(&[5, 5, 5, 4, 4, 2, 1, 1], &[6, 6, 6, 3, 3, 3]);
        let na = neighbour_column_sums(&p);
        assert_eq!(na.v, vec![8, 6, 5, 5, 3, 0]);
        assert_eq!(na.alpha, 4);
        assert_eq!(na.surplus_cols, vec![0, 0, 3, 3]);
        assert_eq!(na.deficit_cols, vec![2, 5, 5, 5]);
        let f1 = build_neighbour(&p);
        assert_eq!(f1.col_sums(), vec![8, 6, 5, 5, 3, 0]);
        assert_eq!(f1.row_sums(), p.rows());
    }

    #[test]
    fn permutation_profile_has_alpha_one() {
        let na = neighbour_column_sums(&canonicalize(&[1, 1], &[1, 1]));
        assert_eq!(na.v, vec![2, 0]);
        assert_eq!(na.alpha, 1);
        let f1 = build_neighbour(&canonicalize(&[1, 1], &[1, 1]));
        assert_eq!(f1, BinaryImage::from_ones(2, 2, &[(0, 0), (1, 0)]));
    }

    #[test]
    fn unique_profile_has_alpha_zero() {
        let na = neighbour_column_sums(&canonicalize(&[3, 2], &[2, 2, 1]));
        assert_eq!(na.v, vec![2, 2, 1]);
        assert_eq!(na.alpha, 0);
        assert!(na.is_unique());
    }

    #[test]
    fn left_justified_rows() {
        let f1 = build_neighbour(&canonicalize(&[3, 1], &[2, 1, 1]));
        assert_eq!(f1.to_text(), "###\n#..\n");
        assert_eq!(f1.col_sums(), vec![2, 1, 1]);
    }

    #[test]
    fn zero_padding_keeps_alpha() {
        let p = canonicalize(&[5, 5, 5, 4, 4, 2, 1, 1], &[6, 6, 6, 3, 3, 3]);
        for extra in 0..4 {
            let na = NeighbourAnalysis::with_width(p.rows(), p.cols(), p.n() + extra);
            assert_eq!(na.v.len(), 6 + extra);
            assert_eq!(na.alpha, 4);
        }
    }
}
