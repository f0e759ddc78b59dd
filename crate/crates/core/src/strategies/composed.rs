//! The composed O(log log n) Claimer.
//!
//! Distances are grouped into dyadic buckets `D_1 = {1, 2}`,
//! `D_i = [2^(i-1) + 1, 2^i]`. The first distance Namer names from a bucket is
//! answered by the master strategy: the lazy rule played on a private copy of
//! one half of a random bipartition `[n] = A_0 ∪ B_0`. Every later distance from
//! the same bucket is answered by that bucket's three-colouring into blocks of
//! length `2^(i-1)`.
//!
//! Both sub-strategies work on sets that are `d`-free for the named `d`; the
//! claim is that set intersected with the live board, which stays legal.

use std::collections::BTreeMap;

use crate::cubes::random_partition;
use crate::error::Error;
use crate::game::{Claimer, Position};
use crate::pointset::{Distance, PointSet};

use super::basic::lazy_claimer_move;

/// The bucket containing `d`: 1 for `d <= 2`, else the `i` with `2^(i-1) < d <= 2^i`.
pub fn bucket_of(d: Distance) -> usize {
    bucket_of_raw(d.get())
}

pub(crate) fn bucket_of_raw(d: usize) -> usize {
    if d <= 2 {
        1
    } else {
        (usize::BITS - (d - 1).leading_zeros()) as usize
    }
}

/// Block class `j` of bucket `i` on `[n]`: the points whose block of length
/// `2^(i-1)` has index congruent to `j` mod 3. Every `d` in `D_i` is avoided.
pub fn block_class(i: usize, j: usize, n: usize) -> PointSet {
    assert!(i >= 1 && j < 3, "bucket {i}, class {j}");
    let block = 1usize << (i - 1);
    PointSet::from_fn(n, |x| ((x - 1) / block) % 3 == j)
}

/// `k = ceil(log2 log2 n + 2 log2 log2 log2 n)`, clamped below at 2.
pub fn cube_dimension(n: usize) -> usize {
    if n < 4 {
        return 2;
    }
    let ll = (n as f64).log2().log2();
    let k = (ll + 2.0 * ll.log2() - 1e-9).ceil();
    (k.max(2.0)) as usize
}

/// Worst-case game length of the composed Claimer: `(4k - 1) * 3 + 1`.
pub fn composed_round_bound(k: usize) -> usize {
    (4 * k - 1) * 3 + 1
}

/// Answers repeated distances from one bucket with its block classes.
#[derive(Default, Debug, Clone)]
pub struct BlockResponder {
    progress: BTreeMap<usize, u8>,
}

impl BlockResponder {
    /// Next block-class claim for bucket `i`; the first call claims class 0.
    fn respond(&mut self, i: usize, a: &PointSet) -> Result<PointSet, Error> {
        let p = self.progress.entry(i).or_insert(0);
        if *p >= 3 {
            return Err(Error::Invariant(format!(
                "bucket {i} already used all three block classes but {} points remain",
                a.len()
            )));
        }
        let claim = block_class(i, *p as usize, a.n()).intersection(a);
        *p += 1;
        Ok(claim)
    }

    pub fn progress(&self) -> &BTreeMap<usize, u8> {
        &self.progress
    }
}

impl Claimer for BlockResponder {
    fn claim(&mut self, pos: &Position<'_>, d: Distance) -> Result<PointSet, Error> {
        self.respond(bucket_of(d), pos.unclaimed)
    }
}

#[derive(Debug, Clone)]
struct LazySide {
    virtual_set: PointSet,
    moves: usize,
}

/// State of the composed Claimer for one game.
#[derive(Debug, Clone)]
pub struct ComposedClaimer {
    k: usize,
    partition: (PointSet, PointSet),
    sides: [LazySide; 2],
    seen: BTreeMap<usize, ()>,
    blocks: BlockResponder,
    master_moves: usize,
    bound_violated: bool,
}

impl ComposedClaimer {
    /// Automatic `k` from [`cube_dimension`], bipartition sampled from `seed`.
    pub fn new(n: usize, seed: u64) -> Self {
        Self::with_k(n, cube_dimension(n), seed)
    }

    pub fn with_k(n: usize, k: usize, seed: u64) -> Self {
        let mut parts = random_partition(n, 2, seed).into_iter();
        let a0 = parts.next().unwrap();
        let b0 = parts.next().unwrap();
        Self::with_partition(k, a0, b0)
    }

    /// Uses a caller-supplied bipartition, e.g. one certified cube-free.
    pub fn with_partition(k: usize, a0: PointSet, b0: PointSet) -> Self {
        assert_eq!(a0.n(), b0.n());
        assert!(a0.is_disjoint(&b0) && a0.union(&b0).len() == a0.n(), "not a bipartition");
        ComposedClaimer {
            k: k.max(1),
            sides: [
                LazySide { virtual_set: a0.clone(), moves: 0 },
                LazySide { virtual_set: b0.clone(), moves: 0 },
            ],
            partition: (a0, b0),
            seen: BTreeMap::new(),
            blocks: BlockResponder::default(),
            master_moves: 0,
            bound_violated: false,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn partition(&self) -> (&PointSet, &PointSet) {
        (&self.partition.0, &self.partition.1)
    }

    pub fn virtual_sets(&self) -> (&PointSet, &PointSet) {
        (&self.sides[0].virtual_set, &self.sides[1].virtual_set)
    }

    /// Moves routed to the master (lazy) strategy so far.
    pub fn master_moves(&self) -> usize {
        self.master_moves
    }

    /// Lazy moves played on the `A_0` side and the `B_0` side.
    pub fn side_moves(&self) -> (usize, usize) {
        (self.sides[0].moves, self.sides[1].moves)
    }

    pub fn bucket_progress(&self) -> &BTreeMap<usize, u8> {
        self.blocks.progress()
    }

    pub fn round_bound(&self) -> usize {
        composed_round_bound(self.k)
    }

    fn master_move(&mut self, a: &PointSet, d: usize) -> PointSet {
        self.master_moves += 1;
        let limit = 2 * self.k;
        // play on A_0's copy until nothing of A_0 is left on the board, then on B_0's
        let Some(side) = self
            .sides
            .iter_mut()
            .find(|s| !s.virtual_set.is_disjoint(a))
        else {
            return PointSet::empty(a.n());
        };
        let d = Distance::new(d, a.n()).expect("distance validated by the engine");
        let virtual_claim = lazy_claimer_move(&side.virtual_set, d);
        side.virtual_set.difference_with(&virtual_claim);
        side.moves += 1;
        if side.moves > limit {
            self.bound_violated = true;
        }
        virtual_claim.intersection(a)
    }
}

impl Claimer for ComposedClaimer {
    fn claim(&mut self, pos: &Position<'_>, d: Distance) -> Result<PointSet, Error> {
        let i = bucket_of(d);
        if self.seen.insert(i, ()).is_none() {
            Ok(self.master_move(pos.unclaimed, d.get()))
        } else {
            self.blocks.respond(i, pos.unclaimed)
        }
    }

    fn bound_violated(&self) -> bool {
        self.bound_violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{is_d_free, play_game, Namer};
    use crate::strategies::basic::{DoublingNamer, GreedyNamer, RandomNamer, RepeatNamer};
    use proptest::prelude::*;

    #[test]
    fn bucket_boundaries() {
        let b = |d| bucket_of_raw(d);
        assert_eq!((b(1), b(2)), (1, 1));
        assert_eq!((b(3), b(4), b(5)), (2, 2, 3));
        assert_eq!((b(8), b(9)), (3, 4));
        assert_eq!((b(16), b(17), b(1 << 20)), (4, 5, 20));
    }

    #[test]
    fn block_class_examples() {
        assert_eq!(block_class(1, 0, 10).to_vec(), vec![1, 4, 7, 10]);
        assert_eq!(block_class(2, 0, 14).to_vec(), vec![1, 2, 7, 8, 13, 14]);
        assert_eq!(block_class(2, 1, 14).to_vec(), vec![3, 4, 9, 10]);
    }

    #[test]
    fn block_classes_partition_and_avoid_their_bucket() {
        let n = 300;
        for i in 1..=9 {
            let classes: Vec<PointSet> = (0..3).map(|j| block_class(i, j, n)).collect();
            let total: usize = classes.iter().map(PointSet::len).sum();
            assert_eq!(total, n);
            assert_eq!(classes[0].union(&classes[1]).union(&classes[2]), PointSet::full(n));
            for d in 1..n {
                if bucket_of_raw(d) == i {
                    for c in &classes {
                        assert_eq!(c.count_distance(d), 0, "bucket {i} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(cube_dimension(1 << 16), 8);
        assert_eq!(cube_dimension(1 << 12), 8);
        assert_eq!(cube_dimension(1 << 20), 9);
        assert_eq!(cube_dimension(16), 4);
        assert_eq!(cube_dimension(5), 2);
        assert_eq!(cube_dimension(2), 2);
        // 2^32: ceil(5 + 2 log2 5) = 10, checked without building a board
        let ll = 32f64.log2();
        assert_eq!((ll + 2.0 * ll.log2()).ceil() as usize, 10);
        assert_eq!(composed_round_bound(9), 106);
        assert_eq!(composed_round_bound(8), 94);
    }

    #[test]
    fn first_move_is_lazy_on_the_first_half() {
        let n = 64;
        let mut c = ComposedClaimer::new(n, 3);
        let a0 = c.partition().0.clone();
        let board = PointSet::full(n);
        let pos = Position { n, unclaimed: &board, history: &[] };
        let d = Distance::new(5, n).unwrap();
        let claim = c.claim(&pos, d).unwrap();
        let expected = PointSet::from_fn(n, |x| a0.contains(x) && !a0.contains(x + 5));
        assert_eq!(claim, expected);
        assert_eq!(c.master_moves(), 1);
    }

    #[test]
    fn repeated_bucket_uses_block_class_zero() {
        let n = 64;
        let mut c = ComposedClaimer::new(n, 3);
        let board = PointSet::full(n);
        let pos = Position { n, unclaimed: &board, history: &[] };
        c.claim(&pos, Distance::new(5, n).unwrap()).unwrap();
        let after = c.claim(&pos, Distance::new(7, n).unwrap()).unwrap();
        assert_eq!(after, block_class(3, 0, n));
        assert_eq!(c.bucket_progress().get(&3), Some(&1));
    }

    #[test]
    fn repeat_namer_against_block_responder_ends_within_three_rounds() {
        for n in [2usize, 3, 10, 100, 1000] {
            for d in 1..n {
                let t = play_game(&mut RepeatNamer { d }, &mut BlockResponder::default(), n, 10).unwrap();
                assert!(t.terminal && t.len() <= 3, "n={n} d={d} took {}", t.len());
            }
        }
    }

    fn check_game(n: usize, namer: &mut dyn Namer, seed: u64) {
        let mut claimer = ComposedClaimer::new(n, seed);
        let bound = claimer.round_bound();
        let mut a = PointSet::full(n);
        for _ in 0..bound + 1 {
            if a.is_empty() {
                break;
            }
            let pos = Position { n, unclaimed: &a, history: &[] };
            let d = namer.name(&pos).unwrap();
            let claim = claimer.claim(&pos, d).unwrap();
            assert!(claim.is_subset(&a));
            assert!(is_d_free(&claim, d).unwrap());
            a.difference_with(&claim);
            let (va, vb) = claimer.virtual_sets();
            let (a0, b0) = claimer.partition();
            assert!(a.intersection(a0).is_subset(va));
            assert!(a.intersection(b0).is_subset(vb));
            assert!(claimer.bucket_progress().values().all(|&p| p <= 3));
        }
        assert!(a.is_empty(), "n={n} seed={seed} did not finish within {bound}");
        assert!(claimer.master_moves() <= 4 * claimer.k());
        assert!(!claimer.bound_violated());
    }

    #[test]
    fn composed_finishes_against_the_namer_suite() {
        for n in [16usize, 100, 1024] {
            for seed in 0..5 {
                check_game(n, &mut GreedyNamer::default(), seed);
                check_game(n, &mut DoublingNamer::default(), seed);
                check_game(n, &mut RandomNamer::new(seed), seed);
                check_game(n, &mut RepeatNamer { d: 1 + seed as usize }, seed);
            }
        }
    }

    proptest! {
        #[test]
        fn composed_claims_are_legal_against_random_names(
            n in 4usize..300, seed in any::<u64>(), names in proptest::collection::vec(any::<usize>(), 1..40)
        ) {
            let mut c = ComposedClaimer::new(n, seed);
            let mut a = PointSet::full(n);
            for raw in names {
                if a.is_empty() { break; }
                let d = Distance::new(1 + raw % (n - 1), n).unwrap();
                let pos = Position { n, unclaimed: &a, history: &[] };
                let claim = c.claim(&pos, d).unwrap();
                prop_assert!(claim.is_subset(&a));
                prop_assert!(is_d_free(&claim, d).unwrap());
                a.difference_with(&claim);
                prop_assert!(a.intersection(c.partition().0).is_subset(c.virtual_sets().0));
                prop_assert!(a.intersection(c.partition().1).is_subset(c.virtual_sets().1));
            }
        }
    }
}
