//! Brute-force reference machinery for small profiles.
//!
//! Nothing here goes through the construction code: solutions are found by
//! exhaustive backtracking, and the bounds are checked against the exact
//! maximum pairwise symmetric difference.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::image::BinaryImage;
use crate::neighbour::neighbour_column_sums;
use crate::profile::ProjectionProfile;

pub const DEFAULT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    /// Solutions in canonical coordinates, in lexicographic row-major order of
    /// the chosen column sets.
    pub solutions: Vec<BinaryImage>,
    pub truncated: bool,
    pub cap: usize,
}

struct Search<'a> {
    rows: &'a [usize],
    width: usize,
    cap: usize,
    chosen: Vec<u64>,
    found: Vec<Vec<u64>>,
    truncated: bool,
}

impl Search<'_> {
    /// Residual column demands must stay realisable by the rows below `next`.
    fn residual_feasible(&self, residual: &[usize], next: usize) -> bool {
        let remaining = &self.rows[next..];
        if residual.iter().any(|&c| c > remaining.len()) {
            return false;
        }
        let mut demand: Vec<usize> = residual.to_vec();
        demand.sort_unstable_by(|a, b| b.cmp(a));
        let mut prefix = 0;
        for (k, &c) in demand.iter().enumerate() {
            prefix += c;
            let supply: usize = remaining.iter().map(|&r| r.min(k + 1)).sum();
            if prefix > supply {
                return false;
            }
        }
        demand.iter().sum::<usize>() == remaining.iter().sum::<usize>()
    }

    fn row(&mut self, i: usize, residual: &mut Vec<usize>) {
        if self.truncated {
            return;
        }
        if i == self.rows.len() {
            if self.found.len() == self.cap {
                self.truncated = true;
            } else {
                self.found.push(self.chosen.clone());
            }
            return;
        }
        self.place(i, 0, self.rows[i], 0, residual);
    }

    /// Choose `left` more columns for row `i` from `from..width`.
    fn place(&mut self, i: usize, from: usize, left: usize, mask: u64, residual: &mut Vec<usize>) {
        if self.truncated {
            return;
        }
        if left == 0 {
            if self.residual_feasible(residual, i + 1) {
                self.chosen[i] = mask;
                self.row(i + 1, residual);
            }
            return;
        }
        for j in from..=self.width.saturating_sub(left) {
            if residual[j] == 0 {
                continue;
            }
            residual[j] -= 1;
            self.place(i, j + 1, left - 1, mask | (1 << j), residual);
            residual[j] += 1;
        }
    }
}

/// Every image with the profile's canonical line sums, up to `cap` of them.
///
/// Fails with `Inconsistent` when the search finds no image at all.
pub fn enumerate_solutions(p: &ProjectionProfile, cap: usize) -> Result<Enumeration> {
    let (m, n) = (p.m(), p.n());
    assert!(n <= 64, "enumeration supports at most 64 columns");
    let mut search = Search {
        rows: p.rows(),
        width: n,
        cap,
        chosen: vec![0; m],
        found: Vec::new(),
        truncated: false,
    };
    if p.rows().iter().all(|&r| r <= n) {
        let mut residual = p.cols().to_vec();
        if search.residual_feasible(&residual, 0) {
            search.row(0, &mut residual);
        }
    }
    if search.found.is_empty() && !search.truncated {
        return Err(TomoError::Inconsistent);
    }
    let solutions = search
        .found
        .iter()
        .map(|masks| {
            let mut img = BinaryImage::new(m, n);
            for (i, &mask) in masks.iter().enumerate() {
                for j in 0..n {
                    if mask >> j & 1 == 1 {
                        img.set(i, j, true);
                    }
                }
            }
            img
        })
        .collect();
    Ok(Enumeration {
        solutions,
        truncated: search.truncated,
        cap,
    })
}

fn pack(img: &BinaryImage) -> Vec<u64> {
    let mut words = vec![0u64; (img.height() * img.width()).div_ceil(64)];
    for (i, j) in img.ones() {
        let k = i * img.width() + j;
        words[k / 64] |= 1 << (k % 64);
    }
    words
}

/// Largest symmetric difference over all unordered pairs; 0 for one solution.
pub fn max_pairwise_symdiff(solutions: &[BinaryImage]) -> usize {
    let packed: Vec<Vec<u64>> = solutions.iter().map(pack).collect();
    let mut best = 0;
    for (a, x) in packed.iter().enumerate() {
        for y in &packed[a + 1..] {
            let d: u32 = x.iter().zip(y).map(|(u, v)| (u ^ v).count_ones()).sum();
            best = best.max(d as usize);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// At least two solutions imply a pair differing in `2 alpha + 2` cells.
    Lower,
    /// `2 alpha sqrt(8N + 1) - 2 alpha`.
    UpperSqrt8N,
    /// `4 alpha sqrt(2N)`.
    UpperSqrt2N,
    /// Two images of mass N differ in at most `2N` cells.
    Mass,
    /// Exactly one solution iff alpha is zero.
    Uniqueness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub kind: BoundKind,
    /// The threshold compared against (for `Uniqueness`, alpha).
    pub bound: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub profile: ProjectionProfile,
    pub solution_count: usize,
    pub max_pairwise_symdiff: usize,
    pub alpha: usize,
    pub bound_checks: Vec<BoundCheck>,
    pub truncated: bool,
}

impl EnumerationReport {
    pub fn all_satisfied(&self) -> bool {
        self.bound_checks.iter().all(|c| c.satisfied)
    }

    pub fn violations(&self) -> Vec<BoundKind> {
        self.bound_checks
            .iter()
            .filter(|c| !c.satisfied)
            .map(|c| c.kind)
            .collect()
    }
}

/// Enumerate, then record count, exact diameter and alpha. Bounds are not yet checked.
pub fn enumeration_report(p: &ProjectionProfile, cap: usize) -> Result<EnumerationReport> {
    let en = enumerate_solutions(p, cap)?;
    Ok(EnumerationReport {
        profile: p.clone(),
        solution_count: en.solutions.len(),
        max_pairwise_symdiff: max_pairwise_symdiff(&en.solutions),
        alpha: neighbour_column_sums(p).alpha,
        bound_checks: Vec::new(),
        truncated: en.truncated,
    })
}

// slack for comparing an integer count against an irrational bound
const EPS: f64 = 1e-9;

pub fn audit_bounds(
    p: &ProjectionProfile,
    mut report: EnumerationReport,
) -> Result<EnumerationReport> {
    if report.truncated {
        return Err(TomoError::TruncatedEnumeration {
            cap: report.solution_count,
        });
    }
    let alpha = report.alpha as f64;
    let n = p.total() as f64;
    let max = report.max_pairwise_symdiff;
    let lower = 2.0 * alpha + 2.0;
    let upper_8n = 2.0 * alpha * (8.0 * n + 1.0).sqrt() - 2.0 * alpha;
    let upper_2n = 4.0 * alpha * (2.0 * n).sqrt();
    report.bound_checks = vec![
        BoundCheck {
            kind: BoundKind::Lower,
            bound: lower,
            satisfied: report.solution_count < 2 || max as f64 >= lower,
        },
        BoundCheck {
            kind: BoundKind::UpperSqrt8N,
            bound: upper_8n,
            satisfied: max as f64 <= upper_8n + EPS,
        },
        BoundCheck {
            kind: BoundKind::UpperSqrt2N,
            bound: upper_2n,
            satisfied: max as f64 <= upper_2n + EPS,
        },
        BoundCheck {
            kind: BoundKind::Mass,
            bound: 2.0 * n,
            satisfied: max <= 2 * p.total(),
        },
        BoundCheck {
            kind: BoundKind::Uniqueness,
            bound: alpha,
            satisfied: (report.solution_count == 1) == (report.alpha == 0),
        },
    ];
    Ok(report)
}

/// `enumeration_report` followed by `audit_bounds`.
pub fn audit(p: &ProjectionProfile, cap: usize) -> Result<EnumerationReport> {
    audit_bounds(p, enumeration_report(p, cap)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyTag {
    /// `(s+1) x (s+1)`, every line sum 1: the permutation matrices.
    SharpAllOnes { s: usize },
    /// `n x n`, every line sum `k` with `k <= n/2`.
    UniformK { n: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFamily {
    pub tag: FamilyTag,
    pub profile: ProjectionProfile,
    pub predicted_alpha: usize,
    /// Upper bound on the symmetric difference of any two solutions.
    pub predicted_max_symdiff: usize,
}

pub fn make_family(tag: FamilyTag) -> Result<InstanceFamily> {
    let (size, sum, alpha, max) = match tag {
        FamilyTag::SharpAllOnes { s } => {
            if s == 0 {
                return Err(TomoError::InvalidFamily("SharpAllOnes needs s >= 1".into()));
            }
            (s + 1, 1, s, 2 * s + 2)
        }
        FamilyTag::UniformK { n, k } => {
            if k == 0 || 2 * k > n {
                return Err(TomoError::InvalidFamily(format!(
                    "UniformK needs 1 <= k <= n/2, got n={n}, k={k}"
                )));
            }
            (n, k, k * (n - k), 2 * k * n)
        }
    };
    let sums = vec![sum; size];
    let profile = ProjectionProfile::canonicalize(&sums, &sums);
    let actual = neighbour_column_sums(&profile).alpha;
    if actual != alpha {
        return Err(TomoError::ConstructionInvariantViolated(format!(
            "family {tag:?}: predicted alpha {alpha}, computed {actual}"
        )));
    }
    Ok(InstanceFamily {
        tag,
        profile,
        predicted_alpha: alpha,
        predicted_max_symdiff: max,
    })
}

/// A random consistent profile: `m, n` in `2..=5`, row sums uniform in
/// `0..=n`, column sums read off a random image with those row sums.
/// Lines are left in generation order, so the profile is generally unsorted.
pub fn random_profile<R: Rng>(rng: &mut R) -> ProjectionProfile {
    let m = rng.gen_range(2..=5);
    let n = rng.gen_range(2..=5);
    let rows: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=n)).collect();
    let mut cols = vec![0; n];
    for &r in &rows {
        for j in sample(rng, n, r) {
            cols[j] += 1;
        }
    }
    ProjectionProfile::canonicalize(&rows, &cols)
}

/// `count` profiles from [`random_profile`] with a ChaCha8 stream seeded by `seed`.
pub fn random_corpus(seed: u64, count: usize) -> Vec<ProjectionProfile> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_profile(&mut rng)).collect()
}
