//! Arrow diagrams on round, long and descending skeletons: canonical forms,
//! exhaustive enumeration and basis indexing.
//!
//! A diagram of degree `n` occupies `2n` slots along the skeleton, matched
//! into `n` directed arrows (tail -> head), optionally signed. Long and
//! descending diagrams are canonical as written; round diagrams are reduced
//! to the lexicographically least rotation of their slot encoding.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SkeletonKind {
    Round,
    Long,
    /// Long skeleton whose arrows all point along the skeleton orientation.
    Descending,
}

impl SkeletonKind {
    pub const ALL: [SkeletonKind; 3] = [
        SkeletonKind::Round,
        SkeletonKind::Long,
        SkeletonKind::Descending,
    ];

    pub fn is_round(self) -> bool {
        matches!(self, SkeletonKind::Round)
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            SkeletonKind::Round => "round",
            SkeletonKind::Long => "long",
            SkeletonKind::Descending => "descending",
        }
    }
}

/// One skeleton slot while a diagram is being assembled. `arrow` is an
/// arbitrary key; keys are renumbered by first appearance on
/// canonicalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub arrow: u32,
    pub head: bool,
    pub negative: bool,
}

impl Slot {
    pub fn new(arrow: u32, head: bool, negative: bool) -> Self {
        Slot { arrow, head, negative }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("arrow {arrow} has {tails} tail and {heads} head endpoints; need exactly one of each")]
    BadMatching { arrow: u32, tails: usize, heads: usize },
    #[error("arrow {0} carries different signs on its two endpoints")]
    InconsistentSign(u32),
    #[error("operation is defined on long skeletons only")]
    UnsupportedSkeleton,
    #[error("cannot parse diagram text: {0}")]
    Parse(String),
}

// Token packing: arrow number << 2 | head << 1 | negative.
#[inline]
fn pack(arrow: u8, head: bool, negative: bool) -> u8 {
    (arrow << 2) | ((head as u8) << 1) | (negative as u8)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token {
    pub arrow: u8,
    pub head: bool,
    pub negative: bool,
}

#[inline]
fn unpack(t: u8) -> Token {
    Token {
        arrow: t >> 2,
        head: t & 2 != 0,
        negative: t & 1 != 0,
    }
}

/// A canonical arrow diagram. Equality and ordering are on the canonical
/// slot encoding, so two diagrams compare equal iff they are the same basis
/// element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowDiagram {
    kind: SkeletonKind,
    code: Vec<u8>,
}

fn renumber_from(slots: &[Slot], start: usize, out: &mut Vec<u8>) {
    out.clear();
    let l = slots.len();
    let mut seen: Vec<u32> = Vec::with_capacity(l / 2);
    for i in 0..l {
        let s = slots[(start + i) % l];
        let num = match seen.iter().position(|&k| k == s.arrow) {
            Some(p) => p,
            None => {
                seen.push(s.arrow);
                seen.len() - 1
            }
        };
        out.push(pack(num as u8, s.head, s.negative));
    }
}

fn canonical_code(kind: SkeletonKind, slots: &[Slot]) -> Vec<u8> {
    let l = slots.len();
    let mut best = Vec::with_capacity(l);
    renumber_from(slots, 0, &mut best);
    if kind.is_round() && l > 0 {
        let mut cand = Vec::with_capacity(l);
        for r in 1..l {
            renumber_from(slots, r, &mut cand);
            if cand < best {
                std::mem::swap(&mut best, &mut cand);
            }
        }
    }
    best
}

pub(crate) fn code_is_descending(code: &[u8]) -> bool {
    let mut tails_seen = 0u64;
    for &t in code {
        let tok = unpack(t);
        if tok.head {
            if tails_seen & (1 << tok.arrow) == 0 {
                return false;
            }
        } else {
            tails_seen |= 1 << tok.arrow;
        }
    }
    true
}

impl ArrowDiagram {
    pub fn empty(kind: SkeletonKind) -> Self {
        ArrowDiagram { kind, code: Vec::new() }
    }

    /// Canonicalizing constructor. Validates that `slots` is a perfect
    /// directed matching with consistent signs, then renumbers arrows by
    /// first appearance and (for round skeletons) takes the lexicographic
    /// minimum over all rotations.
    pub fn from_slots(kind: SkeletonKind, slots: &[Slot]) -> Result<Self, DiagramError> {
        let mut info: HashMap<u32, (usize, usize, bool)> = HashMap::new();
        for s in slots {
            let e = info.entry(s.arrow).or_insert((0, 0, s.negative));
            if s.head {
                e.1 += 1;
            } else {
                e.0 += 1;
            }
            if e.2 != s.negative {
                return Err(DiagramError::InconsistentSign(s.arrow));
            }
        }
        for (&arrow, &(tails, heads, _)) in &info {
            if tails != 1 || heads != 1 {
                return Err(DiagramError::BadMatching { arrow, tails, heads });
            }
        }
        Ok(Self::from_raw(kind, slots))
    }

    /// Unchecked canonicalization for internal construction paths where the
    /// slot list is valid by construction.
    pub(crate) fn from_raw(kind: SkeletonKind, slots: &[Slot]) -> Self {
        ArrowDiagram { kind, code: canonical_code(kind, slots) }
    }

    pub fn kind(&self) -> SkeletonKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.code.len() / 2
    }

    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn tokens(&self) -> impl Iterator<Item = Token> + '_ {
        self.code.iter().map(|&t| unpack(t))
    }

    /// The canonical encoding as buildable slots.
    pub fn slots(&self) -> Vec<Slot> {
        self.tokens()
            .map(|t| Slot::new(t.arrow as u32, t.head, t.negative))
            .collect()
    }

    pub fn is_signed(&self) -> bool {
        self.tokens().any(|t| t.negative)
    }

    /// True iff every arrow points along the skeleton orientation.
    /// Round skeletons have no such notion.
    pub fn is_descending(&self) -> Result<bool, DiagramError> {
        if self.kind.is_round() {
            return Err(DiagramError::UnsupportedSkeleton);
        }
        Ok(code_is_descending(&self.code))
    }

    /// True iff some arrow has its two endpoints on adjacent slots with
    /// nothing between them (cyclically adjacent on a round skeleton).
    pub fn has_isolated_arrow(&self) -> bool {
        let l = self.code.len();
        if l < 2 {
            return false;
        }
        let last = if self.kind.is_round() { l } else { l - 1 };
        for i in 0..last {
            let a = unpack(self.code[i]).arrow;
            let b = unpack(self.code[(i + 1) % l]).arrow;
            if a == b {
                return true;
            }
        }
        false
    }

    /// Text form with a sign suffix on every token, regardless of content.
    pub fn to_signed_text(&self) -> String {
        use std::fmt::Write;
        let mut s = format!("{}:", self.degree());
        for t in self.tokens() {
            let _ = write!(
                s,
                " {}{}{}",
                if t.head { 'H' } else { 'T' },
                t.arrow + 1,
                if t.negative { '-' } else { '+' }
            );
        }
        s
    }

    /// Parse the diagram text format, e.g. `2: T1 T2 H1 H2` or with sign
    /// suffixes `1: T1- H1-`.
    pub fn parse(kind: SkeletonKind, text: &str) -> Result<Self, DiagramError> {
        let (deg_part, rest) = text
            .split_once(':')
            .ok_or_else(|| DiagramError::Parse("missing ':' after degree".into()))?;
        let degree: usize = deg_part
            .trim()
            .parse()
            .map_err(|_| DiagramError::Parse(format!("bad degree {deg_part:?}")))?;
        let mut slots = Vec::new();
        for tok in rest.split_whitespace() {
            let bytes = tok.as_bytes();
            let head = match bytes.first() {
                Some(b'T') => false,
                Some(b'H') => true,
                _ => return Err(DiagramError::Parse(format!("bad token {tok:?}"))),
            };
            let (num_part, negative) = match bytes.last() {
                Some(b'+') => (&tok[1..tok.len() - 1], false),
                Some(b'-') => (&tok[1..tok.len() - 1], true),
                _ => (&tok[1..], false),
            };
            let num: u32 = num_part
                .parse()
                .map_err(|_| DiagramError::Parse(format!("bad arrow number in {tok:?}")))?;
            if num == 0 {
                return Err(DiagramError::Parse("arrow numbers are 1-based".into()));
            }
            slots.push(Slot::new(num - 1, head, negative));
        }
        if slots.len() != 2 * degree {
            return Err(DiagramError::Parse(format!(
                "degree {} does not match {} slots",
                degree,
                slots.len()
            )));
        }
        Self::from_slots(kind, &slots)
    }
}

impl fmt::Display for ArrowDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.degree())?;
        let signed = self.is_signed();
        for t in self.tokens() {
            write!(f, " {}{}", if t.head { 'H' } else { 'T' }, t.arrow + 1)?;
            if signed {
                write!(f, "{}", if t.negative { '-' } else { '+' })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ArrowDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.cli_name(), self)
    }
}

/// Spec-level alias for the canonicalizing constructor.
pub fn canonicalize(kind: SkeletonKind, slots: &[Slot]) -> Result<ArrowDiagram, DiagramError> {
    ArrowDiagram::from_slots(kind, slots)
}

fn fill(
    kind: SkeletonKind,
    signed: bool,
    slots: &mut Vec<Option<Slot>>,
    next_arrow: u32,
    out: &mut Vec<Vec<u8>>,
) {
    let first = slots.iter().position(|s| s.is_none());
    let Some(i) = first else {
        let full: Vec<Slot> = slots.iter().map(|s| s.unwrap()).collect();
        out.push(canonical_code(kind, &full));
        return;
    };
    let signs: &[bool] = if signed { &[false, true] } else { &[false] };
    for j in i + 1..slots.len() {
        if slots[j].is_some() {
            continue;
        }
        for head_at_first in [false, true] {
            // The earlier endpoint of a descending arrow is always its tail.
            if head_at_first && kind == SkeletonKind::Descending {
                continue;
            }
            for &negative in signs {
                slots[i] = Some(Slot::new(next_arrow, head_at_first, negative));
                slots[j] = Some(Slot::new(next_arrow, !head_at_first, negative));
                fill(kind, signed, slots, next_arrow + 1, out);
            }
        }
        slots[j] = None;
    }
    slots[i] = None;
}

/// All distinct canonical diagrams of exactly `degree` arrows, in a
/// deterministic sorted order. In signed mode every sign assignment is
/// enumerated.
pub fn enumerate_diagrams(kind: SkeletonKind, degree: usize, signed: bool) -> Vec<ArrowDiagram> {
    if degree == 0 {
        return vec![ArrowDiagram::empty(kind)];
    }
    let n2 = 2 * degree;
    // Branch on the partner/direction/sign of slot 0, in parallel.
    let mut seeds = Vec::new();
    let signs: &[bool] = if signed { &[false, true] } else { &[false] };
    for mate in 1..n2 {
        for head_at_first in [false, true] {
            if head_at_first && kind == SkeletonKind::Descending {
                continue;
            }
            for &negative in signs {
                seeds.push((mate, head_at_first, negative));
            }
        }
    }
    let chunks = par::map_vec(seeds, |(mate, head_at_first, negative)| {
        let mut slots: Vec<Option<Slot>> = vec![None; n2];
        slots[0] = Some(Slot::new(0, head_at_first, negative));
        slots[mate] = Some(Slot::new(0, !head_at_first, negative));
        let mut out = Vec::new();
        fill(kind, signed, &mut slots, 1, &mut out);
        out
    });
    let mut codes: Vec<Vec<u8>> = chunks.into_iter().flatten().collect();
    codes.sort_unstable();
    codes.dedup();
    codes
        .into_iter()
        .map(|code| ArrowDiagram { kind, code })
        .collect()
}

/// Bijective table between the canonical diagrams of a fixed
/// `(kind, signed, degree)` basis and dense indices.
pub struct DiagramIndex {
    kind: SkeletonKind,
    degree: usize,
    signed: bool,
    diagrams: Vec<ArrowDiagram>,
    by_code: HashMap<Vec<u8>, u32>,
}

impl DiagramIndex {
    pub fn build(kind: SkeletonKind, degree: usize, signed: bool) -> Self {
        let diagrams = enumerate_diagrams(kind, degree, signed);
        let by_code = diagrams
            .iter()
            .enumerate()
            .map(|(i, d)| (d.code.clone(), i as u32))
            .collect();
        DiagramIndex { kind, degree, signed, diagrams, by_code }
    }

    pub fn kind(&self) -> SkeletonKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn signed(&self) -> bool {
        self.signed
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn get(&self, i: u32) -> &ArrowDiagram {
        &self.diagrams[i as usize]
    }

    pub fn diagrams(&self) -> &[ArrowDiagram] {
        &self.diagrams
    }

    pub fn index_of(&self, d: &ArrowDiagram) -> Option<u32> {
        self.by_code.get(&d.code).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slot(arrow: u32, head: bool) -> Slot {
        Slot::new(arrow, head, false)
    }

    #[test]
    fn long_counts_match_double_factorial_law() {
        // (2n-1)!! * 2^n
        for (n, want) in [(0, 1), (1, 2), (2, 12), (3, 120), (4, 1680)] {
            assert_eq!(enumerate_diagrams(SkeletonKind::Long, n, false).len(), want);
        }
    }

    #[test]
    fn descending_counts_match_double_factorial() {
        for (n, want) in [(0, 1), (1, 1), (2, 3), (3, 15), (4, 105)] {
            assert_eq!(
                enumerate_diagrams(SkeletonKind::Descending, n, false).len(),
                want
            );
        }
    }

    #[test]
    fn round_degree_one_has_single_diagram() {
        assert_eq!(enumerate_diagrams(SkeletonKind::Round, 1, false).len(), 1);
    }

    #[test]
    fn signed_degree_one_long_has_four() {
        assert_eq!(enumerate_diagrams(SkeletonKind::Long, 1, true).len(), 4);
    }

    #[test]
    fn round_rotated_encodings_canonicalize_equal() {
        let a = ArrowDiagram::from_slots(SkeletonKind::Round, &[slot(0, false), slot(0, true)])
            .unwrap();
        let b = ArrowDiagram::from_slots(SkeletonKind::Round, &[slot(0, true), slot(0, false)])
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn long_diagrams_are_fixed_by_canonicalization() {
        for d in enumerate_diagrams(SkeletonKind::Long, 3, false) {
            let again = ArrowDiagram::from_slots(SkeletonKind::Long, &d.slots()).unwrap();
            assert_eq!(d, again);
        }
    }

    #[test]
    fn descending_is_subset_of_long() {
        for n in 0..=4 {
            let long: std::collections::HashSet<_> =
                enumerate_diagrams(SkeletonKind::Long, n, false)
                    .into_iter()
                    .map(|d| d.code().to_vec())
                    .collect();
            for d in enumerate_diagrams(SkeletonKind::Descending, n, false) {
                assert!(long.contains(d.code()));
                assert!(d.is_descending().unwrap());
            }
        }
    }

    #[test]
    fn is_descending_examples() {
        let empty = ArrowDiagram::empty(SkeletonKind::Long);
        assert!(empty.is_descending().unwrap());
        let fwd = ArrowDiagram::from_slots(SkeletonKind::Long, &[slot(0, false), slot(0, true)])
            .unwrap();
        assert!(fwd.is_descending().unwrap());
        let bwd = ArrowDiagram::from_slots(SkeletonKind::Long, &[slot(0, true), slot(0, false)])
            .unwrap();
        assert!(!bwd.is_descending().unwrap());
        let round = ArrowDiagram::empty(SkeletonKind::Round);
        assert_eq!(round.is_descending(), Err(DiagramError::UnsupportedSkeleton));
    }

    #[test]
    fn bad_matchings_are_rejected() {
        let err = ArrowDiagram::from_slots(
            SkeletonKind::Long,
            &[slot(0, false), slot(0, false), slot(1, false), slot(1, true)],
        )
        .unwrap_err();
        assert!(matches!(err, DiagramError::BadMatching { arrow: 0, .. }));

        let err = ArrowDiagram::from_slots(
            SkeletonKind::Long,
            &[Slot::new(0, false, false), Slot::new(0, true, true)],
        )
        .unwrap_err();
        assert_eq!(err, DiagramError::InconsistentSign(0));
    }

    #[test]
    fn text_format_round_trips() {
        for kind in [SkeletonKind::Long, SkeletonKind::Round] {
            for signed in [false, true] {
                for d in enumerate_diagrams(kind, 2, signed) {
                    let text = d.to_string();
                    let back = ArrowDiagram::parse(kind, &text).unwrap();
                    assert_eq!(d, back, "text was {text}");
                }
            }
        }
        let d = ArrowDiagram::parse(SkeletonKind::Long, "2: T1 T2 H1 H2").unwrap();
        assert_eq!(d.to_string(), "2: T1 T2 H1 H2");
    }

    #[test]
    fn isolated_arrow_detection_wraps_on_round() {
        // T1 T2 H2 H1 linearly: arrow 2 isolated; arrow 1 only via the round wrap.
        let slots = [slot(0, false), slot(1, false), slot(1, true), slot(0, true)];
        let long = ArrowDiagram::from_slots(SkeletonKind::Long, &slots).unwrap();
        assert!(long.has_isolated_arrow());
        let crossed = [slot(0, false), slot(1, false), slot(0, true), slot(1, true)];
        let long = ArrowDiagram::from_slots(SkeletonKind::Long, &crossed).unwrap();
        assert!(!long.has_isolated_arrow());
        let round = ArrowDiagram::from_slots(SkeletonKind::Round, &crossed).unwrap();
        assert!(!round.has_isolated_arrow());
        // adjacency across the wrap point only
        let wrap = [
            slot(0, true),
            slot(1, false),
            slot(2, false),
            slot(1, true),
            slot(2, true),
            slot(0, false),
        ];
        assert!(!ArrowDiagram::from_slots(SkeletonKind::Long, &wrap)
            .unwrap()
            .has_isolated_arrow());
        assert!(ArrowDiagram::from_slots(SkeletonKind::Round, &wrap)
            .unwrap()
            .has_isolated_arrow());
    }
}
