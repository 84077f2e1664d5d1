//! Dense binary images, their text/PBM renderings, and symmetric differences.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};

/// An `height x width` grid of bits. Row indices grow downward, column indices
/// to the right. Line sums are always recomputed from the cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct BinaryImage {
    height: usize,
    width: usize,
    cells: Vec<bool>,
}

impl BinaryImage {
    pub fn new(height: usize, width: usize) -> Self {
        BinaryImage {
            height,
            width,
            cells: vec![false; height * width],
        }
    }

    /// Build from explicit rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != width) {
            return Err(TomoError::Parse(format!(
                "row {} has length {}, expected {}",
                bad + 1,
                rows[bad].len(),
                width
            )));
        }
        Ok(BinaryImage {
            height: rows.len(),
            width,
            cells: rows.concat(),
        })
    }

    /// Build from a list of (row, col) cells that are set.
    pub fn from_ones(height: usize, width: usize, ones: &[(usize, usize)]) -> Self {
        let mut img = BinaryImage::new(height, width);
        for &(i, j) in ones {
            img.set(i, j, true);
        }
        img
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(
            row < self.height && col < self.width,
            "cell ({row}, {col}) out of range"
        );
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(
            row < self.height && col < self.width,
            "cell ({row}, {col}) out of range"
        );
        self.cells[row * self.width + col] = value;
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.cells[row * self.width..(row + 1) * self.width]
    }

    /// Set cells in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(k, _)| (k / w, k % w))
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.height)
            .map(|i| self.row(i).iter().filter(|&&b| b).count())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.width];
        for (_, j) in self.ones() {
            sums[j] += 1;
        }
        sums
    }

    pub fn col_sum(&self, col: usize) -> usize {
        (0..self.height).filter(|&i| self.get(i, col)).count()
    }

    /// One line per row, `#` for a set cell and `.` for an empty one.
    pub fn to_text(&self) -> String {
        self.text_lines()
            .into_iter()
            .map(|mut line| {
                line.push('\n');
                line
            })
            .collect()
    }

    fn text_lines(&self) -> Vec<String> {
        (0..self.height)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&b| if b { '#' } else { '.' })
                    .collect()
            })
            .collect()
    }

    /// Parse the `#`/`.` grid. Blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(i, line)| {
                line.chars()
                    .map(|c| match c {
                        '#' => Ok(true),
                        '.' => Ok(false),
                        other => Err(TomoError::Parse(format!(
                            "unexpected character {other:?} in grid row {}",
                            i + 1
                        ))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BinaryImage::from_rows(&rows)
    }

    /// Plain (ASCII) PBM: `P1`, then `width height`, then rows of space-separated bits.
    pub fn to_pbm(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height);
        for i in 0..self.height {
            let row: Vec<&str> = self
                .row(i)
                .iter()
                .map(|&b| if b { "1" } else { "0" })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse plain PBM. Comments (`#` to end of line) and free whitespace are accepted.
    pub fn parse_pbm(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        if tokens.next() != Some("P1") {
            return Err(TomoError::Parse("PBM input must start with P1".into()));
        }
        let mut dim = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| TomoError::Parse(format!("missing PBM {what}")))?
                .parse()
                .map_err(|_| TomoError::Parse(format!("bad PBM {what}")))
        };
        let width = dim("width")?;
        let height = dim("height")?;
        // bits may also be packed without separators
        let bits: Vec<bool> = tokens
            .flat_map(str::chars)
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(TomoError::Parse(format!(
                    "unexpected PBM character {other:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        if bits.len() != width * height {
            return Err(TomoError::Parse(format!(
                "PBM body has {} bits, expected {}",
                bits.len(),
                width * height
            )));
        }
        Ok(BinaryImage {
            height,
            width,
            cells: bits,
        })
    }
}

impl fmt::Display for BinaryImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<BinaryImage> for Vec<String> {
    fn from(img: BinaryImage) -> Self {
        img.text_lines()
    }
}

impl TryFrom<Vec<String>> for BinaryImage {
    type Error = TomoError;

    fn try_from(lines: Vec<String>) -> Result<Self> {
        BinaryImage::parse_text(&lines.join("\n"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffSide {
    OnlyInFirst,
    OnlyInSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffCell {
    pub row: usize,
    pub col: usize,
    pub side: DiffSide,
}

/// Cellwise XOR of two images of equal dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricDifference {
    pub size: usize,
    pub cells: Vec<DiffCell>,
}

impl SymmetricDifference {
    pub fn count_side(&self, side: DiffSide) -> usize {
        self.cells.iter().filter(|c| c.side == side).count()
    }

    /// Number of differing cells in one column.
    pub fn in_column(&self, col: usize) -> usize {
        self.cells.iter().filter(|c| c.col == col).count()
    }
}

pub fn symmetric_difference(a: &BinaryImage, b: &BinaryImage) -> Result<SymmetricDifference> {
    if a.height != b.height || a.width != b.width {
        return Err(TomoError::DimensionMismatch {
            left_rows: a.height,
            left_cols: a.width,
            right_rows: b.height,
            right_cols: b.width,
        });
    }
    let cells: Vec<DiffCell> = a
        .cells
        .iter()
        .zip(&b.cells)
        .enumerate()
        .filter_map(|(k, (&x, &y))| {
            let side = match (x, y) {
                (true, false) => DiffSide::OnlyInFirst,
                (false, true) => DiffSide::OnlyInSecond,
                _ => return None,
            };
            Some(DiffCell {
                row: k / a.width,
                col: k % a.width,
                side,
            })
        })
        .collect();
    Ok(SymmetricDifference {
        size: cells.len(),
        cells,
    })
}
