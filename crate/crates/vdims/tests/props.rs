//! Property tests for the structural invariants: canonicalization,
//! rank stability and format round trips.

use proptest::prelude::*;

use vdims::diagram::{ArrowDiagram, SkeletonKind, Slot};
use vdims::linalg::{io, rank_mod_p, SparseIntMatrix};

/// A random valid slot list of up to 5 arrows: a shuffled pairing with
/// random directions and signs (directions forced for descending).
fn arb_slots(kind: SkeletonKind) -> impl Strategy<Value = Vec<Slot>> {
    (0usize..=5, any::<u64>()).prop_map(move |(n, seed)| {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut positions: Vec<usize> = (0..2 * n).collect();
        // Fisher-Yates with the xorshift stream
        for i in (1..positions.len()).rev() {
            let j = (next() % (i as u64 + 1)) as usize;
            positions.swap(i, j);
        }
        let mut slots = vec![Slot::new(0, false, false); 2 * n];
        for a in 0..n {
            let (mut x, mut y) = (positions[2 * a], positions[2 * a + 1]);
            let flip = if kind == SkeletonKind::Descending {
                x > y
            } else {
                next() % 2 == 0
            };
            if flip {
                std::mem::swap(&mut x, &mut y);
            }
            let negative = kind != SkeletonKind::Descending && next() % 2 == 0;
            slots[x] = Slot::new(a as u32, false, negative);
            slots[y] = Slot::new(a as u32, true, negative);
        }
        slots
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Canonicalization is idempotent and rotation-invariant.
    #[test]
    fn canonicalize_idempotent(slots in arb_slots(SkeletonKind::Long)) {
        for k in [SkeletonKind::Round, SkeletonKind::Long] {
            let d = ArrowDiagram::from_slots(k, &slots).unwrap();
            let again = ArrowDiagram::from_slots(k, &d.slots()).unwrap();
            prop_assert_eq!(&d, &again);
            if k.is_round() && !slots.is_empty() {
                let mut rotated = slots.clone();
                rotated.rotate_left(1 + slots.len() / 3);
                let r = ArrowDiagram::from_slots(k, &rotated).unwrap();
                prop_assert_eq!(&d, &r);
            }
        }
    }
}

fn arb_matrix() -> impl Strategy<Value = SparseIntMatrix> {
    (1usize..12, 1usize..12, any::<u64>()).prop_map(|(nr, nc, seed)| {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut rows = Vec::new();
        for _ in 0..nr {
            let mut row = Vec::new();
            for c in 0..nc as u32 {
                if next() % 3 == 0 {
                    let v = (next() % 9) as i64 - 4;
                    row.push((c, v));
                }
            }
            rows.push(row);
        }
        SparseIntMatrix::with_rows(nc, rows)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Rank is invariant under row permutation and row duplication.
    #[test]
    fn rank_invariant_under_shuffle_and_duplication(m in arb_matrix(), seed in any::<u64>()) {
        let p = 999_983u64;
        let base = rank_mod_p(&m, p).unwrap();
        let mut rows: Vec<_> = m.rows().to_vec();
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for i in (1..rows.len()).rev() {
            let j = (next() % (i as u64 + 1)) as usize;
            rows.swap(i, j);
        }
        if let Some(first) = rows.first().cloned() {
            rows.push(first);
        }
        let shuffled = SparseIntMatrix::with_rows(m.ncols(), rows);
        prop_assert_eq!(rank_mod_p(&shuffled, p).unwrap(), base);
        prop_assert!(base <= m.nrows().min(m.ncols()));
    }

    /// Both interchange formats round-trip exactly.
    #[test]
    fn formats_round_trip(m in arb_matrix()) {
        let mut sms = Vec::new();
        io::export_sms(&m, &mut sms).unwrap();
        prop_assert_eq!(&io::import_sms(&sms[..]).unwrap(), &m);
        let mut mtx = Vec::new();
        io::export_matrix_market(&m, &mut mtx).unwrap();
        prop_assert_eq!(&io::import_matrix_market(&mtx[..]).unwrap(), &m);
    }
}
