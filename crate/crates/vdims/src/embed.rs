//! Embedding of relation templates into ambient diagrams.
//!
//! A template occupies a number of "sites" (short skeleton arcs). An
//! arrangement interleaves the site markers with the slots of an ambient
//! diagram in every possible way: several sites may fall into the same gap
//! between ambient slots, in either relative order, and nothing of the
//! ambient may separate two endpoints inserted at the same site.

use crate::diagram::{ArrowDiagram, SkeletonKind, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    /// Slot index into the ambient diagram.
    Ambient(u16),
    /// Site marker.
    Site(u8),
}

pub type Arrangement = Vec<Entry>;

/// All interleavings of `sites` distinguishable markers with the slot
/// sequence of an ambient diagram of `ambient_len` slots.
///
/// For round skeletons position 0 is pinned to the first ambient slot so
/// that each cyclic placement is produced once per rotation class of the
/// ambient encoding; on an empty round ambient all marker orders are
/// produced.
pub fn arrangements(kind: SkeletonKind, ambient_len: usize, sites: usize) -> Vec<Arrangement> {
    assert!((1..=3).contains(&sites));
    let total = ambient_len + sites;
    let first_allowed = if kind.is_round() && ambient_len > 0 { 1 } else { 0 };
    let mut out = Vec::new();
    let mut positions = [usize::MAX; 3];
    fn rec(
        site: usize,
        sites: usize,
        first_allowed: usize,
        total: usize,
        positions: &mut [usize; 3],
        out: &mut Vec<Arrangement>,
        ambient_len: usize,
    ) {
        if site == sites {
            let mut arr = Vec::with_capacity(total);
            let mut ai = 0u16;
            for t in 0..total {
                match positions[..sites].iter().position(|&p| p == t) {
                    Some(s) => arr.push(Entry::Site(s as u8)),
                    None => {
                        arr.push(Entry::Ambient(ai));
                        ai += 1;
                    }
                }
            }
            debug_assert_eq!(ai as usize, ambient_len);
            out.push(arr);
            return;
        }
        for p in first_allowed..total {
            if positions[..site].contains(&p) {
                continue;
            }
            positions[site] = p;
            rec(site + 1, sites, first_allowed, total, positions, out, ambient_len);
            positions[site] = usize::MAX;
        }
    }
    rec(0, sites, first_allowed, total, &mut positions, &mut out, ambient_len);
    out
}

/// True iff the site markers occur in increasing id order along the
/// skeleton. Used for the `i < j < k` restriction of descending relations.
pub fn sites_ascending(arr: &Arrangement) -> bool {
    let mut last = -1i32;
    for e in arr {
        if let Entry::Site(s) = e {
            if (*s as i32) < last {
                return false;
            }
            last = *s as i32;
        }
    }
    true
}

/// One endpoint to insert: `(site, local arrow id, is_head)`. Endpoints
/// sharing a site are inserted in list order.
pub type Endpoint = (u8, u8, bool);

/// Assemble the raw slot list for one relation term: ambient slots in
/// skeleton order with the given endpoints spliced in at their sites.
/// Local arrow ids are offset past the ambient arrows.
pub fn build_raw(
    ambient: &ArrowDiagram,
    arr: &Arrangement,
    endpoints: &[Endpoint],
    arrow_negative: &[bool],
) -> Vec<Slot> {
    let base = ambient.degree() as u32;
    let amb_slots = ambient.slots();
    let mut out = Vec::with_capacity(amb_slots.len() + endpoints.len());
    for e in arr {
        match *e {
            Entry::Ambient(i) => out.push(amb_slots[i as usize]),
            Entry::Site(s) => {
                for &(site, arrow, head) in endpoints {
                    if site == s {
                        out.push(Slot::new(
                            base + arrow as u32,
                            head,
                            arrow_negative[arrow as usize],
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Canonicalized version of [`build_raw`].
pub fn build_term(
    ambient: &ArrowDiagram,
    arr: &Arrangement,
    endpoints: &[Endpoint],
    arrow_negative: &[bool],
) -> ArrowDiagram {
    ArrowDiagram::from_raw(
        ambient.kind(),
        &build_raw(ambient, arr, endpoints, arrow_negative),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::enumerate_diagrams;

    #[test]
    fn bare_line_site_counts() {
        // inserting k markers into an empty line: k! orders
        assert_eq!(arrangements(SkeletonKind::Long, 0, 3).len(), 6);
        assert_eq!(arrangements(SkeletonKind::Long, 0, 2).len(), 2);
        // one marker into 2m slots: 2m + 1 gaps
        assert_eq!(arrangements(SkeletonKind::Long, 4, 1).len(), 5);
        // (2m+1)(2m+2)(2m+3) ordered triples
        assert_eq!(arrangements(SkeletonKind::Long, 2, 3).len(), 3 * 4 * 5);
    }

    #[test]
    fn round_arrangements_are_rooted() {
        // 2m slots on a circle leave 2m cyclic gaps for a single marker
        assert_eq!(arrangements(SkeletonKind::Round, 4, 1).len(), 4);
        // bare circle: all marker orders
        assert_eq!(arrangements(SkeletonKind::Round, 0, 2).len(), 2);
    }

    #[test]
    fn same_gap_interleavings_are_generated() {
        let arrs = arrangements(SkeletonKind::Long, 2, 2);
        // both orders of the two markers within the middle gap must appear
        let a = vec![
            Entry::Ambient(0),
            Entry::Site(0),
            Entry::Site(1),
            Entry::Ambient(1),
        ];
        let b = vec![
            Entry::Ambient(0),
            Entry::Site(1),
            Entry::Site(0),
            Entry::Ambient(1),
        ];
        assert!(arrs.contains(&a));
        assert!(arrs.contains(&b));
    }

    #[test]
    fn build_term_splices_endpoints_in_site_order() {
        let amb = &enumerate_diagrams(SkeletonKind::Long, 0, false)[0];
        let arr = vec![Entry::Site(0), Entry::Site(1)];
        // two arrows from site 0 to site 1, parallel
        let endpoints = [(0u8, 0u8, false), (0, 1, false), (1, 0, true), (1, 1, true)];
        let d = build_term(amb, &arr, &endpoints, &[false, false]);
        assert_eq!(d.to_string(), "2: T1 T2 H1 H2");
    }
}
