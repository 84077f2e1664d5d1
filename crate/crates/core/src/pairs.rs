//! Column pairs: matching surplus columns (where the neighbour has too many
//! cells) with deficit columns (too few), grouping equal pairs, and choosing
//! the final column of each group.
//!
//! A column is never both a surplus and a deficit column, and both index lists
//! are ascending, so every column occurs in one contiguous run of groups.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::neighbour::NeighbourAnalysis;

/// A unit of mass to move from `source` (surplus) to `target` (deficit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnPair {
    pub source: usize,
    pub target: usize,
}

impl ColumnPair {
    pub fn contains(&self, col: usize) -> bool {
        self.source == col || self.target == col
    }

    pub fn column(&self, side: PairSide) -> usize {
        match side {
            PairSide::Source => self.source,
            PairSide::Target => self.target,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSide {
    Source,
    Target,
}

impl PairSide {
    pub fn other(self) -> PairSide {
        match self {
            PairSide::Source => PairSide::Target,
            PairSide::Target => PairSide::Source,
        }
    }
}

/// Which designation rule picked the final column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalRule {
    /// One column recurs in the next group; the other is final.
    RecursLater,
    /// Neither recurs later; the one shared with the previous group is final.
    SharedWithPrevious,
    /// The pair shares no column with any other group; target chosen.
    Isolated,
}

/// What happens to the non-final column of a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// The non-final column recurs in the next group.
    A,
    /// The non-final column occurs in this group only.
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairGroup {
    pub pair: ColumnPair,
    pub multiplicity: usize,
    /// 0-based position in the group sequence.
    pub position: usize,
    pub final_side: Option<PairSide>,
    pub rule: Option<FinalRule>,
}

impl PairGroup {
    pub fn final_column(&self) -> Option<usize> {
        self.final_side.map(|s| self.pair.column(s))
    }

    pub fn other_column(&self) -> Option<usize> {
        self.final_side.map(|s| self.pair.column(s.other()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAnalysis {
    pub ordered_pairs: Vec<ColumnPair>,
    pub groups: Vec<PairGroup>,
    pub distinct_columns: BTreeSet<usize>,
}

impl PairAnalysis {
    pub fn alpha(&self) -> usize {
        self.ordered_pairs.len()
    }

    /// True once every group has a final column.
    pub fn is_designated(&self) -> bool {
        self.groups.iter().all(|g| g.final_side.is_some())
    }

    fn occurs_in(&self, h: Option<usize>, col: usize) -> bool {
        h.and_then(|h| self.groups.get(h))
            .is_some_and(|g| g.pair.contains(col))
    }

    /// Condition (A)/(B) for group `h`. Missing neighbours at either end act as
    /// sentinel pairs sharing no column with anything.
    pub fn condition(&self, h: usize) -> Result<Condition> {
        let other = self.groups[h].other_column().ok_or_else(|| {
            TomoError::ConstructionInvariantViolated(format!("group {} has no final column", h + 1))
        })?;
        if self.occurs_in(Some(h + 1), other) {
            Ok(Condition::A)
        } else if !self.occurs_in(h.checked_sub(1), other) {
            Ok(Condition::B)
        } else {
            Err(TomoError::ConstructionInvariantViolated(format!(
                "non-final column {} of group {} occurs in the previous group but not the next",
                other + 1,
                h + 1
            )))
        }
    }
}

/// Pair the t-th surplus column with the t-th deficit column.
pub fn column_pairs(na: &NeighbourAnalysis) -> Result<Vec<ColumnPair>> {
    if na.alpha == 0 {
        return Err(TomoError::EmptyAmbiguity);
    }
    if na.surplus_cols.len() != na.deficit_cols.len() {
        return Err(TomoError::Inconsistent);
    }
    let pairs: Vec<ColumnPair> = na
        .surplus_cols
        .iter()
        .zip(&na.deficit_cols)
        .map(|(&source, &target)| ColumnPair { source, target })
        .collect();
    if pairs.iter().any(|p| p.target <= p.source) {
        return Err(TomoError::Inconsistent);
    }
    Ok(pairs)
}

/// Collapse maximal runs of equal pairs. Final columns are left unset.
pub fn group_pairs(pairs: &[ColumnPair]) -> PairAnalysis {
    let mut groups: Vec<PairGroup> = Vec::new();
    for &pair in pairs {
        match groups.last_mut() {
            Some(g) if g.pair == pair => g.multiplicity += 1,
            _ => groups.push(PairGroup {
                pair,
                multiplicity: 1,
                position: groups.len(),
                final_side: None,
                rule: None,
            }),
        }
    }
    let distinct_columns = pairs.iter().flat_map(|p| [p.source, p.target]).collect();
    PairAnalysis {
        ordered_pairs: pairs.to_vec(),
        groups,
        distinct_columns,
    }
}

pub fn designate_final_columns(mut pa: PairAnalysis) -> PairAnalysis {
    let sides = [PairSide::Source, PairSide::Target];
    for h in 0..pa.groups.len() {
        let pair = pa.groups[h].pair;
        let later = |col: usize| pa.groups[h + 1..].iter().any(|g| g.pair.contains(col));
        let earlier = |col: usize| h > 0 && pa.groups[h - 1].pair.contains(col);
        let (side, rule) = if let Some(&s) = sides.iter().find(|&&s| later(pair.column(s))) {
            (s.other(), FinalRule::RecursLater)
        } else if let Some(&s) = sides.iter().find(|&&s| earlier(pair.column(s))) {
            (s, FinalRule::SharedWithPrevious)
        } else {
            (PairSide::Target, FinalRule::Isolated)
        };
        pa.groups[h].final_side = Some(side);
        pa.groups[h].rule = Some(rule);
    }
    pa
}

/// `column_pairs`, `group_pairs` and `designate_final_columns` in one call.
pub fn analyze_pairs(na: &NeighbourAnalysis) -> Result<PairAnalysis> {
    Ok(designate_final_columns(group_pairs(&column_pairs(na)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neighbour::neighbour_column_sums;
    use crate::profile::canonicalize;

    fn pair(source: usize, target: usize) -> ColumnPair {
        ColumnPair { source, target }
    }

    fn worked_example() -> PairAnalysis {
        let p = canonicalize(&[5, 5, 5, 4, 4, 2, 1, 1], &[6, 6, 6, 3, 3, 3]);
        analyze_pairs(&neighbour_column_sums(&p)).unwrap()
    }

    #[test]
    fn worked_example_pairs_and_groups() {
        let pa = worked_example();
        // 1-based: (1->3), (1->6), (4->6), (4->6)
        assert_eq!(
            pa.ordered_pairs,
            vec![pair(0, 2), pair(0, 5), pair(3, 5), pair(3, 5)]
        );
        let summary: Vec<_> = pa.groups.iter().map(|g| (g.pair, g.multiplicity)).collect();
        assert_eq!(
            summary,
            vec![(pair(0, 2), 1), (pair(0, 5), 1), (pair(3, 5), 2)]
        );
        assert_eq!(pa.distinct_columns.len(), 4);
    }

    #[test]
    fn worked_example_final_columns() {
        let pa = worked_example();
        let finals: Vec<_> = pa
            .groups
            .iter()
            .map(|g| g.final_column().unwrap())
            .collect();
        assert_eq!(finals, vec![2, 0, 5]);
        let rules: Vec<_> = pa.groups.iter().map(|g| g.rule.unwrap()).collect();
        assert_eq!(
            rules,
            vec![
                FinalRule::RecursLater,
                FinalRule::RecursLater,
                FinalRule::SharedWithPrevious
            ]
        );
        assert_eq!(pa.condition(0).unwrap(), Condition::A);
        assert_eq!(pa.condition(1).unwrap(), Condition::A);
        assert_eq!(pa.condition(2).unwrap(), Condition::B);
    }

    #[test]
    fn single_pair_and_unique_profile() {
        let na = neighbour_column_sums(&canonicalize(&[1, 1], &[1, 1]));
        assert_eq!(column_pairs(&na).unwrap(), vec![pair(0, 1)]);
        let na = neighbour_column_sums(&canonicalize(&[2, 1], &[2, 1]));
        assert_eq!(column_pairs(&na), Err(TomoError::EmptyAmbiguity));
    }

    #[test]
    fn run_length_grouping() {
        let pa = group_pairs(&[pair(0, 1); 3]);
        assert_eq!(pa.groups.len(), 1);
        assert_eq!(pa.groups[0].multiplicity, 3);
        let pa = designate_final_columns(group_pairs(&[pair(0, 1)]));
        assert_eq!(pa.groups[0].final_column(), Some(1));
        assert_eq!(pa.groups[0].rule, Some(FinalRule::Isolated));
    }

    #[test]
    fn isolated_groups_pick_targets() {
        let pa = designate_final_columns(group_pairs(&[pair(0, 2), pair(1, 3)]));
        let finals: Vec<_> = pa
            .groups
            .iter()
            .map(|g| g.final_column().unwrap())
            .collect();
        assert_eq!(finals, vec![2, 3]);
        assert_eq!(pa.condition(0).unwrap(), Condition::B);
        assert_eq!(pa.condition(1).unwrap(), Condition::B);
    }
}
