//! Local Reidemeister-move templates as arrow data on one, two or three
//! skeleton arcs. Each move type expands to a fixed set of variants
//! (sign orders, arrow directions, strand height orders); the variant
//! tables below are the single source of truth for the V-side conventions.

use crate::case::CaseSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveId {
    R1Plus,
    R1Minus,
    R2b,
    R2c,
    R3b,
    R3c,
}

impl MoveId {
    pub fn label(self) -> &'static str {
        match self {
            MoveId::R1Plus => "R1+",
            MoveId::R1Minus => "R1-",
            MoveId::R2b => "R2b",
            MoveId::R2c => "R2c",
            MoveId::R3b => "R3b",
            MoveId::R3c => "R3c",
        }
    }

    pub fn is_r2(self) -> bool {
        matches!(self, MoveId::R2b | MoveId::R2c)
    }
}

/// Arrow content of one side of a move: per strand the ordered list of
/// `(local arrow id, is_head)` slots, plus the sign of each local arrow.
#[derive(Clone, Debug)]
pub struct LocalSide {
    pub strand_slots: Vec<Vec<(u8, bool)>>,
    pub negatives: Vec<bool>,
}

impl LocalSide {
    fn empty(strands: usize) -> Self {
        LocalSide { strand_slots: vec![Vec::new(); strands], negatives: Vec::new() }
    }

    pub fn arrow_count(&self) -> usize {
        self.negatives.len()
    }

    /// Endpoints of the arrows in `subset` (bitmask), flattened in
    /// (strand, slot order) sequence as `(site, arrow, is_head)`.
    pub fn subset_endpoints(&self, subset: u32) -> Vec<(u8, u8, bool)> {
        let mut out = Vec::with_capacity(2 * subset.count_ones() as usize);
        for (strand, slots) in self.strand_slots.iter().enumerate() {
            for &(arrow, head) in slots {
                if subset & (1 << arrow) != 0 {
                    out.push((strand as u8, arrow, head));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct TemplateVariant {
    pub strands: usize,
    pub a: LocalSide,
    pub b: LocalSide,
}

/// One move type with all of its concrete variants.
#[derive(Clone, Debug)]
pub struct MoveTemplate {
    pub id: MoveId,
    pub variants: Vec<TemplateVariant>,
}

fn r1_template(negative: bool) -> MoveTemplate {
    // a kink: one arrow with adjacent endpoints, in either direction
    let mut variants = Vec::new();
    for head_first in [false, true] {
        let slots = if head_first {
            vec![vec![(0u8, true), (0u8, false)]]
        } else {
            vec![vec![(0u8, false), (0u8, true)]]
        };
        variants.push(TemplateVariant {
            strands: 1,
            a: LocalSide { strand_slots: slots, negatives: vec![negative] },
            b: LocalSide::empty(1),
        });
    }
    MoveTemplate { id: if negative { MoveId::R1Minus } else { MoveId::R1Plus }, variants }
}

fn r2_template(crossed: bool) -> MoveTemplate {
    // two opposite-sign arrows from strand 0 to strand 1 that cancel; the
    // co-oriented move stacks them in parallel, the cyclic one crossed
    let mut variants = Vec::new();
    for first_negative in [false, true] {
        let strand1 = if crossed {
            vec![(1u8, true), (0u8, true)]
        } else {
            vec![(0u8, true), (1u8, true)]
        };
        variants.push(TemplateVariant {
            strands: 2,
            a: LocalSide {
                strand_slots: vec![vec![(0, false), (1, false)], strand1],
                negatives: vec![first_negative, !first_negative],
            },
            b: LocalSide::empty(2),
        });
    }
    MoveTemplate { id: if crossed { MoveId::R2c } else { MoveId::R2b }, variants }
}

const STRANDS: usize = 3;
// local arrows of an R3 move: 0 joins strands (0,1), 1 joins (0,2), 2 joins (1,2)
const R3_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn r3_template(cyclic: bool) -> MoveTemplate {
    let mut variants = Vec::new();
    // height order: heights[s] is the vertical position of strand s; at each
    // crossing the higher strand goes over, and the arrow points over -> under
    let mut perms: Vec<[u8; 3]> = Vec::new();
    for a in 0..3u8 {
        for b in 0..3u8 {
            for c in 0..3u8 {
                if a != b && b != c && a != c {
                    perms.push([a, b, c]);
                }
            }
        }
    }
    for heights in perms {
        let mut tail_strand = [0usize; 3];
        let mut negatives = vec![false; 3];
        for (aid, &(x, y)) in R3_PAIRS.iter().enumerate() {
            let over = if heights[x] > heights[y] { x } else { y };
            tail_strand[aid] = over;
            // co-oriented strand signs; crossings 0 (strands 0,1) and
            // 2 (strands 1,2) flip when strand 1 runs against the others
            let mut positive = over == x;
            if cyclic && aid != 1 {
                positive = !positive;
            }
            negatives[aid] = !positive;
        }
        // order in which each strand meets its two crossings, before the
        // move; the move swaps both entries on every strand
        let before: [[u8; 2]; 3] = if cyclic {
            [[0, 1], [2, 0], [1, 2]]
        } else {
            [[0, 1], [0, 2], [1, 2]]
        };
        let side = |orders: &[[u8; 2]; 3]| -> LocalSide {
            let strand_slots = (0..STRANDS)
                .map(|s| {
                    orders[s]
                        .iter()
                        .map(|&aid| (aid, tail_strand[aid as usize] != s))
                        .collect()
                })
                .collect();
            LocalSide { strand_slots, negatives: negatives.clone() }
        };
        let after: [[u8; 2]; 3] = [
            [before[0][1], before[0][0]],
            [before[1][1], before[1][0]],
            [before[2][1], before[2][0]],
        ];
        variants.push(TemplateVariant { strands: STRANDS, a: side(&before), b: side(&after) });
    }
    MoveTemplate { id: if cyclic { MoveId::R3c } else { MoveId::R3b }, variants }
}

/// The move set selected by a case: R2/R3 types per the R23 mode, plus the
/// two R1 kinds iff R1 is modded out.
pub fn move_templates(case: &CaseSpec) -> Vec<MoveTemplate> {
    use crate::case::R23Mode::*;
    let mut out = Vec::new();
    match case.r23 {
        Standard => {
            out.push(r2_template(false));
            out.push(r2_template(true));
            out.push(r3_template(false));
            out.push(r3_template(true));
        }
        BraidLike => {
            out.push(r2_template(false));
            out.push(r3_template(false));
        }
        R2Only => {
            out.push(r2_template(false));
            out.push(r2_template(true));
        }
    }
    if case.r1.imposes_fi() {
        out.push(r1_template(false));
        out.push(r1_template(true));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::{R1Mode, R23Mode};
    use crate::diagram::SkeletonKind;

    fn ids(case: &CaseSpec) -> Vec<MoveId> {
        move_templates(case).iter().map(|t| t.id).collect()
    }

    #[test]
    fn move_sets_per_case() {
        let case = |r23, r1| CaseSpec::new(SkeletonKind::Long, r23, r1);
        assert_eq!(
            ids(&case(R23Mode::R2Only, R1Mode::NoR1)),
            vec![MoveId::R2b, MoveId::R2c]
        );
        assert_eq!(
            ids(&case(R23Mode::BraidLike, R1Mode::NoR1)),
            vec![MoveId::R2b, MoveId::R3b]
        );
        let std_mod = ids(&case(R23Mode::Standard, R1Mode::ModR1));
        assert_eq!(std_mod.len(), 6);
        assert!(std_mod.contains(&MoveId::R1Plus) && std_mod.contains(&MoveId::R1Minus));
    }

    #[test]
    fn arity_invariants() {
        let case = CaseSpec::new(SkeletonKind::Long, R23Mode::Standard, R1Mode::ModR1);
        for t in move_templates(&case) {
            for v in &t.variants {
                match t.id {
                    MoveId::R1Plus | MoveId::R1Minus => {
                        assert_eq!(v.a.arrow_count(), 1);
                        assert_eq!(v.b.arrow_count(), 0);
                    }
                    MoveId::R2b | MoveId::R2c => {
                        assert_eq!(v.a.arrow_count(), 2);
                        assert_eq!(v.b.arrow_count(), 0);
                        assert_ne!(v.a.negatives[0], v.a.negatives[1]);
                    }
                    MoveId::R3b | MoveId::R3c => {
                        assert_eq!(v.a.arrow_count(), 3);
                        assert_eq!(v.b.arrow_count(), 3);
                        assert_eq!(v.a.negatives, v.b.negatives);
                    }
                }
            }
        }
    }

    #[test]
    fn r3_has_six_height_variants() {
        assert_eq!(r3_template(false).variants.len(), 6);
        assert_eq!(r3_template(true).variants.len(), 6);
    }
}
