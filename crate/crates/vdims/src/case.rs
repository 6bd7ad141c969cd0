//! The lattice of theory variants: skeleton choice x R2/R3 treatment x R1
//! treatment, 18 cases in total.

use serde::{Deserialize, Serialize};

use crate::diagram::SkeletonKind;

/// Which R2/R3 moves (and hence which homogeneous relations) are imposed.
///
/// `Standard` imposes both 6T and XII, `BraidLike` imposes 6T only and
/// `R2Only` imposes XII only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum R23Mode {
    Standard,
    BraidLike,
    R2Only,
}

/// Whether R1 moves are modded out. FI is generated iff `ModR1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum R1Mode {
    ModR1,
    NoR1,
}

/// One of the 18 theory variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseSpec {
    pub kind: SkeletonKind,
    pub r23: R23Mode,
    pub r1: R1Mode,
}

impl R23Mode {
    pub const ALL: [R23Mode; 3] = [R23Mode::Standard, R23Mode::BraidLike, R23Mode::R2Only];

    pub fn imposes_6t(self) -> bool {
        matches!(self, R23Mode::Standard | R23Mode::BraidLike)
    }

    pub fn imposes_xii(self) -> bool {
        matches!(self, R23Mode::Standard | R23Mode::R2Only)
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            R23Mode::Standard => "standard",
            R23Mode::BraidLike => "braid",
            R23Mode::R2Only => "r2only",
        }
    }
}

impl R1Mode {
    pub const ALL: [R1Mode; 2] = [R1Mode::ModR1, R1Mode::NoR1];

    pub fn imposes_fi(self) -> bool {
        matches!(self, R1Mode::ModR1)
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            R1Mode::ModR1 => "mod",
            R1Mode::NoR1 => "no",
        }
    }
}

impl CaseSpec {
    pub fn new(kind: SkeletonKind, r23: R23Mode, r1: R1Mode) -> Self {
        CaseSpec { kind, r23, r1 }
    }

    /// All 18 cases, in a fixed deterministic order.
    pub fn all() -> Vec<CaseSpec> {
        let mut out = Vec::with_capacity(18);
        for kind in SkeletonKind::ALL {
            for r23 in R23Mode::ALL {
                for r1 in R1Mode::ALL {
                    out.push(CaseSpec::new(kind, r23, r1));
                }
            }
        }
        out
    }

    /// Short stable label, e.g. `long/standard/modR1`.
    pub fn label(&self) -> String {
        format!(
            "{}/{}/{}R1",
            self.kind.cli_name(),
            self.r23.cli_name(),
            self.r1.cli_name()
        )
    }
}

impl std::fmt::Display for CaseSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_18_distinct_cases() {
        let all = CaseSpec::all();
        assert_eq!(all.len(), 18);
        let set: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), 18);
    }

    #[test]
    fn relation_selection_per_mode() {
        assert!(R23Mode::Standard.imposes_6t() && R23Mode::Standard.imposes_xii());
        assert!(R23Mode::BraidLike.imposes_6t() && !R23Mode::BraidLike.imposes_xii());
        assert!(!R23Mode::R2Only.imposes_6t() && R23Mode::R2Only.imposes_xii());
        assert!(R1Mode::ModR1.imposes_fi() && !R1Mode::NoR1.imposes_fi());
    }
}
