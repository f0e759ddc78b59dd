use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::autocorr::distance_counts;
use crate::error::Error;
use crate::game::{Claimer, Namer, Position};
use crate::pointset::{max_distance, Distance, PointSet};

/// A maximum independent set of `G_d[A]`: along each path, the smallest
/// element and then every second one.
pub fn greedy_claimer_move(a: &PointSet, d: Distance) -> PointSet {
    let d = d.get();
    let mut taken = PointSet::empty(a.n());
    for x in a.iter() {
        if x <= d || !taken.contains(x - d) {
            taken.insert(x);
        }
    }
    taken
}

/// `{x ∈ A : x + d ∉ A}`, the largest element of every path. Leaves `A ∩ (A - d)`.
pub fn lazy_claimer_move(a: &PointSet, d: Distance) -> PointSet {
    a.difference(&a.with_successor(d.get()))
}

/// The most frequent distance inside `A`, smallest on ties; `1` for a singleton.
pub fn greedy_namer_move(a: &PointSet) -> Result<Distance, Error> {
    greedy_namer_move_with(a, &mut FftPlanner::new())
}

fn greedy_namer_move_with(a: &PointSet, planner: &mut FftPlanner<f64>) -> Result<Distance, Error> {
    if a.is_empty() {
        return Err(Error::NoMove("greedy namer has no points to look at".into()));
    }
    let counts = distance_counts(a, planner);
    let mut best = (0u64, 1usize);
    for (d, &c) in counts.iter().enumerate().skip(1) {
        if c > best.0 {
            best = (c, d);
        }
    }
    Distance::new(best.1.min(max_distance(a.n())), a.n())
}

/// A random maximal independent set of `G_d[A]`: a coin decides each point
/// whose predecessor was not taken, then uncovered points are filled in.
pub fn random_claimer_move(a: &PointSet, d: Distance, rng: &mut impl Rng) -> PointSet {
    let d = d.get();
    let mut taken = PointSet::empty(a.n());
    for x in a.iter() {
        if !(x > d && taken.contains(x - d)) && rng.gen_bool(0.5) {
            taken.insert(x);
        }
    }
    for x in a.iter() {
        if !taken.contains(x) && !(x > d && taken.contains(x - d)) && !taken.contains(x + d) {
            taken.insert(x);
        }
    }
    taken
}

#[derive(Default)]
pub struct GreedyClaimer;

impl Claimer for GreedyClaimer {
    fn claim(&mut self, pos: &Position<'_>, d: Distance) -> Result<PointSet, Error> {
        Ok(greedy_claimer_move(pos.unclaimed, d))
    }
}

#[derive(Default)]
pub struct LazyClaimer;

impl Claimer for LazyClaimer {
    fn claim(&mut self, pos: &Position<'_>, d: Distance) -> Result<PointSet, Error> {
        Ok(lazy_claimer_move(pos.unclaimed, d))
    }
}

pub struct RandomClaimer {
    rng: ChaCha8Rng,
}

impl RandomClaimer {
    pub fn new(seed: u64) -> Self {
        RandomClaimer {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Claimer for RandomClaimer {
    fn claim(&mut self, pos: &Position<'_>, d: Distance) -> Result<PointSet, Error> {
        Ok(random_claimer_move(pos.unclaimed, d, &mut self.rng))
    }
}

pub struct GreedyNamer {
    planner: FftPlanner<f64>,
}

impl Default for GreedyNamer {
    fn default() -> Self {
        GreedyNamer {
            planner: FftPlanner::new(),
        }
    }
}

impl Namer for GreedyNamer {
    fn name(&mut self, pos: &Position<'_>) -> Result<Distance, Error> {
        greedy_namer_move_with(pos.unclaimed, &mut self.planner)
    }
}

/// Always names the same distance.
pub struct RepeatNamer {
    pub d: usize,
}

impl Namer for RepeatNamer {
    fn name(&mut self, pos: &Position<'_>) -> Result<Distance, Error> {
        Distance::new(self.d, pos.n)
    }
}

/// Names 1, 2, 4, 8, ... and then `n - 1` forever.
#[derive(Default)]
pub struct DoublingNamer {
    next: usize,
}

impl Namer for DoublingNamer {
    fn name(&mut self, pos: &Position<'_>) -> Result<Distance, Error> {
        let d = (1usize << self.next.min(62)).min(max_distance(pos.n));
        self.next += 1;
        Distance::new(d, pos.n)
    }
}

/// Names uniformly random valid distances.
pub struct RandomNamer {
    rng: ChaCha8Rng,
}

impl RandomNamer {
    pub fn new(seed: u64) -> Self {
        RandomNamer {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Namer for RandomNamer {
    fn name(&mut self, pos: &Position<'_>) -> Result<Distance, Error> {
        let d = self.rng.gen_range(1..=max_distance(pos.n));
        Distance::new(d, pos.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{is_d_free, path_components, play_game};
    use proptest::prelude::*;

    fn set(n: usize, pts: &[usize]) -> PointSet {
        PointSet::from_points(n, pts.iter().copied()).unwrap()
    }

    fn dist(d: usize) -> Distance {
        Distance::new(d, usize::MAX).unwrap()
    }

    /// Largest d-free subset by enumeration.
    fn max_free_size(a: &PointSet, d: usize) -> usize {
        let pts = a.to_vec();
        let mut best = 0;
        for mask in 0u32..(1 << pts.len()) {
            let chosen: Vec<usize> = (0..pts.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pts[i]).collect();
            if chosen.iter().all(|&x| !chosen.contains(&(x + d))) {
                best = best.max(chosen.len());
            }
        }
        best
    }

    #[test]
    fn greedy_claimer_examples() {
        assert_eq!(greedy_claimer_move(&PointSet::full(5), dist(1)).to_vec(), vec![1, 3, 5]);
        let a = set(5, &[1, 2, 4, 5]);
        let c = greedy_claimer_move(&a, dist(3));
        assert_eq!(c.to_vec(), vec![1, 2]);
        assert_eq!(c.len(), max_free_size(&a, 3));
        assert_eq!(greedy_claimer_move(&set(6, &[2, 4, 6]), dist(1)).to_vec(), vec![2, 4, 6]);
    }

    #[test]
    fn greedy_namer_examples() {
        assert_eq!(greedy_namer_move(&PointSet::full(40)).unwrap().get(), 1);
        assert_eq!(greedy_namer_move(&set(5, &[1, 3, 5])).unwrap().get(), 2);
        assert_eq!(greedy_namer_move(&set(5, &[1, 2, 4])).unwrap().get(), 1);
        assert_eq!(greedy_namer_move(&set(5, &[4])).unwrap().get(), 1);
        assert!(matches!(greedy_namer_move(&PointSet::empty(5)), Err(Error::NoMove(_))));
    }

    #[test]
    fn lazy_claimer_examples() {
        let a = set(5, &[1, 2, 3, 5]);
        let c = lazy_claimer_move(&a, dist(2));
        assert_eq!(c.to_vec(), vec![2, 5]);
        assert_eq!(a.difference(&c).to_vec(), vec![1, 3]);

        let c = lazy_claimer_move(&PointSet::full(6), dist(3));
        assert_eq!(c.to_vec(), vec![4, 5, 6]);

        let a = set(3, &[1, 3]);
        assert_eq!(lazy_claimer_move(&a, dist(1)), a);
    }

    #[test]
    fn lazy_against_repeat_one_on_four_points() {
        let t = play_game(&mut RepeatNamer { d: 1 }, &mut LazyClaimer, 4, 10).unwrap();
        assert!(t.terminal);
        let claims: Vec<Vec<usize>> = t.rounds.iter().map(|r| r.claimed.to_vec()).collect();
        assert_eq!(claims, vec![vec![4], vec![3], vec![2], vec![1]]);
    }

    #[test]
    fn greedy_pair_on_two_points() {
        let t = play_game(&mut GreedyNamer::default(), &mut GreedyClaimer, 2, 10).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.terminal);
    }

    #[test]
    fn doubling_names_powers_of_two_then_caps() {
        let mut namer = DoublingNamer::default();
        let a = PointSet::full(20);
        let pos = Position { n: 20, unclaimed: &a, history: &[] };
        let names: Vec<usize> = (0..7).map(|_| namer.name(&pos).unwrap().get()).collect();
        assert_eq!(names, vec![1, 2, 4, 8, 16, 19, 19]);
        assert!(names[..5].windows(2).all(|w| w[1] >= 2 * w[0]));
    }

    #[test]
    fn random_namer_is_reproducible() {
        let a = PointSet::full(1000);
        let pos = Position { n: 1000, unclaimed: &a, history: &[] };
        let run = |seed| {
            let mut namer = RandomNamer::new(seed);
            (0..20).map(|_| namer.name(&pos).unwrap().get()).collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6));
    }

    fn arb_set() -> impl Strategy<Value = PointSet> {
        (2usize..60).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n)
                .prop_map(move |bits| PointSet::from_fn(n, |x| bits[x - 1]))
        })
    }

    proptest! {
        #[test]
        fn greedy_claim_is_a_maximum_independent_set(a in arb_set(), d in 1usize..60) {
            let d = d.min(a.n() - 1).max(1);
            let c = greedy_claimer_move(&a, dist(d));
            prop_assert!(c.is_subset(&a));
            prop_assert!(is_d_free(&c, dist(d)).unwrap());
            let optimum: usize = path_components(&a, dist(d)).unwrap().iter().map(|p| p.len().div_ceil(2)).sum();
            prop_assert_eq!(c.len(), optimum);
            prop_assert!(c.len() >= a.len().div_ceil(2));
        }

        #[test]
        fn greedy_claim_matches_enumeration(bits in proptest::collection::vec(any::<bool>(), 2..14), d in 1usize..13) {
            let n = bits.len();
            let a = PointSet::from_fn(n, |x| bits[x - 1]);
            let d = d.min(n - 1);
            prop_assert_eq!(greedy_claimer_move(&a, dist(d)).len(), max_free_size(&a, d));
        }

        #[test]
        fn lazy_leaves_successor_set(a in arb_set(), d in 1usize..60) {
            let d = d.min(a.n() - 1).max(1);
            let c = lazy_claimer_move(&a, dist(d));
            prop_assert!(is_d_free(&c, dist(d)).unwrap());
            prop_assert_eq!(a.difference(&c), a.with_successor(d));
            // one claimed point per path: the largest
            let tops: Vec<usize> = path_components(&a, dist(d)).unwrap().iter().map(|p| *p.last().unwrap()).collect();
            let mut tops = tops;
            tops.sort();
            prop_assert_eq!(c.to_vec(), tops);
        }

        #[test]
        fn random_claim_is_maximal_independent(a in arb_set(), d in 1usize..60, seed in any::<u64>()) {
            let d = d.min(a.n() - 1).max(1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_claimer_move(&a, dist(d), &mut rng);
            prop_assert!(c.is_subset(&a));
            prop_assert!(is_d_free(&c, dist(d)).unwrap());
            for x in a.difference(&c).iter() {
                prop_assert!((x > d && c.contains(x - d)) || c.contains(x + d), "{} could be added", x);
            }
        }

        #[test]
        fn greedy_namer_picks_most_common_distance(a in arb_set()) {
            prop_assume!(!a.is_empty());
            let d = greedy_namer_move(&a).unwrap().get();
            let best = (1..a.n()).map(|e| a.count_distance(e)).max().unwrap_or(0);
            if a.len() >= 2 {
                prop_assert_eq!(a.count_distance(d), best);
                prop_assert!((1..d).all(|e| a.count_distance(e) < best));
            } else {
                prop_assert_eq!(d, 1);
            }
        }
    }
}
