//! Construction of two solutions that differ in at least `2 alpha + 2` cells.
//!
//! Both images start from the left-justified neighbour `F1` and move one cell
//! per column pair from the source column to the target column within a row.
//! `F2` chooses rows freely. `F3` handles each group of `k` equal pairs at once
//! and picks its rows against `F2` so that the group's final column ends up
//! differing from `F2` in at least `2k` cells, while every column that occurs
//! in a single group without being final differs in at least 2 cells.
//!
//! All coordinates here are canonical and 0-based.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::image::{symmetric_difference, BinaryImage, SymmetricDifference};
use crate::neighbour::{build_neighbour, neighbour_column_sums};
use crate::pairs::{analyze_pairs, ColumnPair, Condition, PairAnalysis, PairSide};
use crate::profile::ProjectionProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub row: usize,
    pub source: usize,
    pub target: usize,
    /// Index of the pair group the move belongs to.
    pub batch: usize,
}

fn move_in_place(img: &mut BinaryImage, mv: &MoveRecord) -> Result<()> {
    if mv.row >= img.height() || mv.source >= img.width() || mv.target >= img.width() {
        return Err(TomoError::IllegalMove {
            row: mv.row,
            reason: "cell outside the image".into(),
        });
    }
    if !img.get(mv.row, mv.source) {
        return Err(TomoError::IllegalMove {
            row: mv.row,
            reason: format!("source column {} is empty", mv.source + 1),
        });
    }
    if img.get(mv.row, mv.target) {
        return Err(TomoError::IllegalMove {
            row: mv.row,
            reason: format!("target column {} is already set", mv.target + 1),
        });
    }
    img.set(mv.row, mv.source, false);
    img.set(mv.row, mv.target, true);
    Ok(())
}

/// Move the cell `(row, source)` to `(row, target)`. Row sums are unchanged.
pub fn apply_move(img: &BinaryImage, mv: &MoveRecord) -> Result<BinaryImage> {
    let mut out = img.clone();
    move_in_place(&mut out, mv)?;
    Ok(out)
}

/// Rows where a cell can move along `pair`: source set, target empty.
pub fn legal_rows(img: &BinaryImage, pair: ColumnPair) -> Vec<usize> {
    (0..img.height())
        .filter(|&l| img.get(l, pair.source) && !img.get(l, pair.target))
        .collect()
}

/// How `F2` picks a row among the legal ones for each pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum RowChoicePolicy {
    /// Smallest legal row index.
    #[default]
    Lowest,
    /// Uniform among legal rows, from a ChaCha8 stream with this seed.
    Seeded(u64),
    /// Explicit row per pair, in pair order; each must be legal.
    Scripted(Vec<usize>),
}

/// How `F3` orders candidate rows before taking `R`, `R'` and `R''` from the front.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BatchRowOrder {
    /// Ascending row index.
    #[default]
    Lowest,
    /// Per batch, rows to try first (in the listed order); remaining
    /// candidates follow ascending. Missing or non-candidate entries are ignored.
    Prioritized(Vec<Vec<usize>>),
}

impl BatchRowOrder {
    fn order(&self, batch: usize, candidates: &[usize]) -> Vec<usize> {
        let preferred: &[usize] = match self {
            BatchRowOrder::Lowest => &[],
            BatchRowOrder::Prioritized(lists) => lists.get(batch).map_or(&[], Vec::as_slice),
        };
        let mut ordered: Vec<usize> = Vec::with_capacity(candidates.len());
        for &l in preferred {
            if candidates.contains(&l) && !ordered.contains(&l) {
                ordered.push(l);
            }
        }
        for &l in candidates {
            if !ordered.contains(&l) {
                ordered.push(l);
            }
        }
        ordered
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub image: BinaryImage,
    pub moves: Vec<MoveRecord>,
}

fn group_of_each_pair(pa: &PairAnalysis) -> Vec<usize> {
    pa.groups
        .iter()
        .enumerate()
        .flat_map(|(h, g)| std::iter::repeat_n(h, g.multiplicity))
        .collect()
}

fn require_solution(p: &ProjectionProfile, img: &BinaryImage, what: &str) -> Result<()> {
    if p.is_solution(img) {
        Ok(())
    } else {
        Err(TomoError::ConstructionInvariantViolated(format!(
            "{what} does not have the requested line sums"
        )))
    }
}

/// Build `F2`: one move per pair, in order, rows chosen by `policy`.
pub fn construct_f2(
    p: &ProjectionProfile,
    pa: &PairAnalysis,
    policy: &RowChoicePolicy,
) -> Result<Construction> {
    if pa.alpha() == 0 {
        return Err(TomoError::NotAmbiguous);
    }
    let mut img = build_neighbour(p);
    let mut rng = match policy {
        RowChoicePolicy::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let batches = group_of_each_pair(pa);
    let mut moves = Vec::with_capacity(pa.alpha());
    for (t, (&pair, &batch)) in pa.ordered_pairs.iter().zip(&batches).enumerate() {
        let rows = legal_rows(&img, pair);
        if rows.len() < 2 {
            return Err(TomoError::ConstructionInvariantViolated(format!(
                "pair {} ({} -> {}) has {} legal rows, expected at least 2",
                t + 1,
                pair.source + 1,
                pair.target + 1,
                rows.len()
            )));
        }
        let row = match policy {
            RowChoicePolicy::Lowest => rows[0],
            RowChoicePolicy::Seeded(_) => *rows
                .choose(rng.as_mut().expect("seeded policy has an rng"))
                .expect("non-empty"),
            RowChoicePolicy::Scripted(script) => {
                *script.get(t).ok_or_else(|| TomoError::IllegalMove {
                    row: 0,
                    reason: format!("scripted policy has no row for pair {}", t + 1),
                })?
            }
        };
        let mv = MoveRecord {
            row,
            source: pair.source,
            target: pair.target,
            batch,
        };
        move_in_place(&mut img, &mv)?;
        moves.push(mv);
    }
    require_solution(p, &img, "F2")?;
    Ok(Construction { image: img, moves })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BatchCase {
    /// At least `k` rows of `R` let the final column diverge directly.
    Case1,
    /// At least `k + 1` rows of `R` do not; divergence comes from the rows left unmoved.
    Case2,
}

/// Everything decided while processing one group for `F3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchContext {
    pub batch: usize,
    pub pair: ColumnPair,
    pub multiplicity: usize,
    pub final_side: PairSide,
    pub final_column: usize,
    pub other_column: usize,
    pub condition: Condition,
    /// All legal rows at the start of the batch, ascending.
    pub candidates: Vec<usize>,
    /// The `2k` rows considered, ascending.
    pub r: Vec<usize>,
    pub case: BatchCase,
    /// `k + 1` rows of `R` (Case 2 only), ascending.
    pub r_prime: Vec<usize>,
    pub l0: Option<usize>,
    /// The `k` rows actually moved, ascending.
    pub r_double_prime: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct F3Construction {
    pub image: BinaryImage,
    pub batches: Vec<BatchContext>,
    pub moves: Vec<MoveRecord>,
}

fn sorted(mut rows: Vec<usize>) -> Vec<usize> {
    rows.sort_unstable();
    rows
}

/// Build `F3` against a finished `F2`, one group at a time.
pub fn construct_f3(
    p: &ProjectionProfile,
    pa: &PairAnalysis,
    f2: &BinaryImage,
    order: &BatchRowOrder,
) -> Result<F3Construction> {
    if pa.alpha() == 0 {
        return Err(TomoError::NotAmbiguous);
    }
    let mut img = build_neighbour(p);
    if f2.height() != img.height() || f2.width() != img.width() {
        return Err(TomoError::DimensionMismatch {
            left_rows: f2.height(),
            left_cols: f2.width(),
            right_rows: img.height(),
            right_cols: img.width(),
        });
    }
    let mut batches = Vec::with_capacity(pa.groups.len());
    let mut moves = Vec::with_capacity(pa.alpha());

    for (h, group) in pa.groups.iter().enumerate() {
        let pair = group.pair;
        let k = group.multiplicity;
        let final_side = group.final_side.ok_or_else(|| {
            TomoError::ConstructionInvariantViolated(format!("group {} has no final column", h + 1))
        })?;
        let final_column = pair.column(final_side);
        let other_column = pair.column(final_side.other());
        let condition = pa.condition(h)?;

        let (src_sum, tgt_sum) = (img.col_sum(pair.source), img.col_sum(pair.target));
        if src_sum < tgt_sum + 2 * k {
            return Err(TomoError::ConstructionInvariantViolated(format!(
                "batch {}: source column sum {src_sum} below target column sum {tgt_sum} + {}",
                h + 1,
                2 * k
            )));
        }
        let candidates = legal_rows(&img, pair);
        if candidates.len() < 2 * k {
            return Err(TomoError::ConstructionInvariantViolated(format!(
                "batch {}: {} candidate rows, expected at least {}",
                h + 1,
                candidates.len(),
                2 * k
            )));
        }
        let r: Vec<usize> = order
            .order(h, &candidates)
            .into_iter()
            .take(2 * k)
            .collect();

        // A row "diverges" when moving it makes F3 differ from F2 in the final
        // column: F2 lacks the target cell, or F2 kept the source cell.
        let diverges = |l: usize| f2.get(l, final_column) == (final_side == PairSide::Source);
        let hits: Vec<usize> = r.iter().copied().filter(|&l| diverges(l)).collect();

        let (case, r_prime, l0, moved) = if hits.len() >= k {
            (BatchCase::Case1, Vec::new(), None, hits[..k].to_vec())
        } else {
            let r_prime: Vec<usize> = r
                .iter()
                .copied()
                .filter(|&l| !diverges(l))
                .take(k + 1)
                .collect();
            if r_prime.len() < k + 1 {
                return Err(TomoError::ConstructionInvariantViolated(format!(
                    "batch {}: neither case applies",
                    h + 1
                )));
            }
            let l0 = match condition {
                Condition::A => r_prime[0],
                Condition::B => {
                    // Moving l0 out of (or into) the other column must make it differ from F2.
                    let other_is_source = final_side == PairSide::Target;
                    *r_prime
                        .iter()
                        .find(|&&l| f2.get(l, other_column) == other_is_source)
                        .ok_or_else(|| {
                            TomoError::ConstructionInvariantViolated(format!(
                                "batch {}: no admissible l0 in R'",
                                h + 1
                            ))
                        })?
                }
            };
            let mut moved = vec![l0];
            moved.extend(r.iter().copied().filter(|l| !r_prime.contains(l)));
            (BatchCase::Case2, r_prime, Some(l0), moved)
        };
        debug_assert_eq!(moved.len(), k);

        for &row in &moved {
            let mv = MoveRecord {
                row,
                source: pair.source,
                target: pair.target,
                batch: h,
            };
            move_in_place(&mut img, &mv)?;
            moves.push(mv);
        }
        batches.push(BatchContext {
            batch: h,
            pair,
            multiplicity: k,
            final_side,
            final_column,
            other_column,
            condition,
            candidates,
            r: sorted(r),
            case,
            r_prime: sorted(r_prime),
            l0,
            r_double_prime: sorted(moved),
        });
    }
    require_solution(p, &img, "F3")?;
    Ok(F3Construction {
        image: img,
        batches,
        moves,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnRole {
    /// Final column of group `group`, owed `2 * multiplicity` differing cells.
    Final { group: usize, multiplicity: usize },
    /// Non-final column occurring only in group `group`, owed 2 differing cells.
    SoleNonFinal { group: usize },
}

/// Differing cells between `F2` and `F3` in one pair column, against what it is owed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnAccount {
    pub column: usize,
    pub role: ColumnRole,
    pub difference: usize,
    pub required: usize,
}

/// Check the per-column guarantees of the construction and return the ledger.
///
/// Every pair column is classified by the last group it occurs in: either it
/// is that group's final column, or it is a non-final column of that group
/// alone. Fails if any column falls short or the owed total is below `2 alpha + 2`.
pub fn certify(
    pa: &PairAnalysis,
    f2: &BinaryImage,
    f3: &BinaryImage,
) -> Result<Vec<ColumnAccount>> {
    let diff = symmetric_difference(f2, f3)?;
    let mut ledger = Vec::with_capacity(pa.distinct_columns.len());
    for &column in &pa.distinct_columns {
        let h = pa
            .groups
            .iter()
            .rposition(|g| g.pair.contains(column))
            .expect("distinct columns come from groups");
        let group = &pa.groups[h];
        let role = if group.final_column() == Some(column) {
            ColumnRole::Final {
                group: h,
                multiplicity: group.multiplicity,
            }
        } else if pa.condition(h)? == Condition::B {
            ColumnRole::SoleNonFinal { group: h }
        } else {
            return Err(TomoError::ConstructionInvariantViolated(format!(
                "column {} is non-final in its last group {} yet recurs",
                column + 1,
                h + 1
            )));
        };
        let required = match role {
            ColumnRole::Final { multiplicity, .. } => 2 * multiplicity,
            ColumnRole::SoleNonFinal { .. } => 2,
        };
        let difference = diff.in_column(column);
        if difference < required {
            return Err(TomoError::ConstructionInvariantViolated(format!(
                "column {} differs in {difference} cells, expected at least {required}",
                column + 1
            )));
        }
        ledger.push(ColumnAccount {
            column,
            role,
            difference,
            required,
        });
    }
    let owed: usize = ledger.iter().map(|a| a.required).sum();
    if owed < 2 * pa.alpha() + 2 {
        return Err(TomoError::ConstructionInvariantViolated(format!(
            "owed differences total {owed}, below {}",
            2 * pa.alpha() + 2
        )));
    }
    Ok(ledger)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivergeOptions {
    pub f2_policy: RowChoicePolicy,
    pub f3_order: BatchRowOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergentPair {
    pub alpha: usize,
    pub guarantee: usize,
    pub pairs: PairAnalysis,
    pub f2: BinaryImage,
    pub f3: BinaryImage,
    pub diff: SymmetricDifference,
    pub f2_moves: Vec<MoveRecord>,
    pub f3_batches: Vec<BatchContext>,
    pub f3_moves: Vec<MoveRecord>,
    pub accounting: Vec<ColumnAccount>,
}

pub fn diverge(p: &ProjectionProfile) -> Result<DivergentPair> {
    diverge_with(p, &DivergeOptions::default())
}

pub fn diverge_with(p: &ProjectionProfile, opts: &DivergeOptions) -> Result<DivergentPair> {
    if !p.is_consistent() {
        return Err(TomoError::Inconsistent);
    }
    let na = neighbour_column_sums(p);
    if na.alpha == 0 {
        return Err(TomoError::NotAmbiguous);
    }
    let pa = analyze_pairs(&na)?;
    let f2 = construct_f2(p, &pa, &opts.f2_policy)?;
    let f3 = construct_f3(p, &pa, &f2.image, &opts.f3_order)?;
    let accounting = certify(&pa, &f2.image, &f3.image)?;
    let diff = symmetric_difference(&f2.image, &f3.image)?;
    let guarantee = 2 * na.alpha + 2;
    if diff.size < guarantee {
        return Err(TomoError::ConstructionInvariantViolated(format!(
            "symmetric difference {} below {guarantee}",
            diff.size
        )));
    }
    Ok(DivergentPair {
        alpha: na.alpha,
        guarantee,
        pairs: pa,
        f2: f2.image,
        f3: f3.image,
        diff,
        f2_moves: f2.moves,
        f3_batches: f3.batches,
        f3_moves: f3.moves,
        accounting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::canonicalize;

    fn worked_profile() -> ProjectionProfile {
        canonicalize(&[5, 5, 5, 4, 4, 2, 1, 1], &[6, 6, 6, 3, 3, 3])
    }

    fn pairs_of(p: &ProjectionProfile) -> PairAnalysis {
        analyze_pairs(&neighbour_column_sums(p)).unwrap()
    }

    #[test]
    fn first_step_of_worked_example() {
        let f1 = build_neighbour(&worked_profile());
        let mv = MoveRecord {
            row: 7,
            source: 0,
            target: 2,
            batch: 0,
        };
        let after = apply_move(&f1, &mv).unwrap();
        assert!(!after.get(7, 0) && after.get(7, 2));
        assert_eq!(after.row_sums(), f1.row_sums());
        assert_eq!(after.col_sums(), vec![7, 6, 6, 5, 3, 0]);
        assert_eq!(after.count(), 27);
    }

    #[test]
    fn illegal_moves_are_rejected() {
        let f1 = build_neighbour(&worked_profile());
        let empty_source = MoveRecord {
            row: 7,
            source: 5,
            target: 4,
            batch: 0,
        };
        assert!(matches!(
            apply_move(&f1, &empty_source),
            Err(TomoError::IllegalMove { .. })
        ));
        let full_target = MoveRecord {
            row: 0,
            source: 0,
            target: 1,
            batch: 0,
        };
        assert!(matches!(
            apply_move(&f1, &full_target),
            Err(TomoError::IllegalMove { .. })
        ));
    }

    #[test]
    fn scripted_f2_reproduces_worked_example() {
        let p = worked_profile();
        let f2 = construct_f2(
            &p,
            &pairs_of(&p),
            &RowChoicePolicy::Scripted(vec![6, 0, 1, 2]),
        )
        .unwrap();
        assert_eq!(
            f2.image.to_text(),
            ".#####\n###.##\n###.##\n####..\n####..\n##....\n..#...\n#.....\n"
        );
    }

    #[test]
    fn two_by_two_permutations() {
        let p = canonicalize(&[1, 1], &[1, 1]);
        let pa = pairs_of(&p);
        let f2 = construct_f2(&p, &pa, &RowChoicePolicy::Lowest).unwrap();
        assert_eq!(f2.image, BinaryImage::from_ones(2, 2, &[(0, 1), (1, 0)]));
        let f3 = construct_f3(&p, &pa, &f2.image, &BatchRowOrder::Lowest).unwrap();
        assert_eq!(f3.image, BinaryImage::from_ones(2, 2, &[(0, 0), (1, 1)]));
        assert_eq!(symmetric_difference(&f2.image, &f3.image).unwrap().size, 4);
    }

    #[test]
    fn diverge_meets_guarantee_on_worked_example() {
        let d = diverge(&worked_profile()).unwrap();
        assert_eq!(d.alpha, 4);
        assert_eq!(d.guarantee, 10);
        assert!(d.diff.size >= 10);
    }

    #[test]
    fn diverge_errors() {
        assert_eq!(
            diverge(&canonicalize(&[2, 1], &[2, 1])),
            Err(TomoError::NotAmbiguous)
        );
        assert_eq!(
            diverge(&canonicalize(&[2], &[1])),
            Err(TomoError::Inconsistent)
        );
    }

    #[test]
    fn seeded_policy_is_reproducible() {
        let p = worked_profile();
        let pa = pairs_of(&p);
        let a = construct_f2(&p, &pa, &RowChoicePolicy::Seeded(7)).unwrap();
        let b = construct_f2(&p, &pa, &RowChoicePolicy::Seeded(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scripted_policy_rejects_illegal_rows() {
        let p = worked_profile();
        let pa = pairs_of(&p);
        let err = construct_f2(&p, &pa, &RowChoicePolicy::Scripted(vec![0])).unwrap_err();
        assert!(matches!(err, TomoError::IllegalMove { .. }));
    }
}
