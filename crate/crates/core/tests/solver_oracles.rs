use std::collections::HashMap;

use namer_claimer::game::{is_d_free, play_game};
use namer_claimer::solver::{OptimalClaimer, Solver, DEFAULT_STATE_CAP};
use namer_claimer::strategies::{DoublingNamer, GreedyClaimer, GreedyNamer, RandomNamer, RepeatNamer};
use namer_claimer::{Distance, Namer, PointSet};
use proptest::prelude::*;

fn from_mask(n: usize, mask: u32) -> PointSet {
    PointSet::from_fn(n, |x| mask >> (x - 1) & 1 == 1)
}

/// Game value with every distance on the board and every non-empty d-free claim.
fn unrestricted_value(n: usize, mask: u32, memo: &mut HashMap<u32, u32>) -> u32 {
    if mask == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let mut best = 0;
    for d in 1..=n.saturating_sub(1).max(1) {
        let d = Distance::new(d, n).unwrap();
        let mut worst = u32::MAX;
        // enumerate non-empty submasks of `mask`
        let mut c = mask;
        while c != 0 {
            if is_d_free(&from_mask(n, c), d).unwrap() {
                worst = worst.min(unrestricted_value(n, mask & !c, memo));
            }
            c = (c - 1) & mask;
        }
        best = best.max(1 + worst);
    }
    memo.insert(mask, best);
    best
}

#[test]
fn agrees_with_the_unrestricted_solver_up_to_eight() {
    for n in 1..=8 {
        let mut memo = HashMap::new();
        let mut solver = Solver::new(DEFAULT_STATE_CAP);
        for mask in 0..1u32 << n {
            let a = from_mask(n, mask);
            assert_eq!(solver.value_of(&a).unwrap(), unrestricted_value(n, mask, &mut memo), "n {n}, A = {a}");
        }
    }
}

#[test]
fn removing_a_point_never_lengthens_the_game() {
    let n = 10;
    let mut solver = Solver::new(DEFAULT_STATE_CAP);
    let values: Vec<u32> = (0..1u32 << n).map(|m| solver.value_of(&from_mask(n, m)).unwrap()).collect();
    for mask in 0..1u32 << n {
        for x in 0..n {
            if mask >> x & 1 == 1 {
                assert!(values[(mask & !(1 << x)) as usize] <= values[mask as usize]);
            }
        }
    }
}

#[test]
fn board_values_respect_the_halving_bound_and_grow_with_n() {
    let mut solver = Solver::new(DEFAULT_STATE_CAP);
    let mut prev = 0;
    for n in 1..=DEFAULT_STATE_CAP {
        let v = solver.value_of(&PointSet::full(n)).unwrap();
        assert!(v as f64 <= 1.0 + (n as f64).log2(), "n {n}: {v}");
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn optimal_value_sits_between_greedy_play_and_fixed_namers() {
    let mut solver = Solver::new(DEFAULT_STATE_CAP);
    for n in 2..=DEFAULT_STATE_CAP {
        let v = solver.value_of(&PointSet::full(n)).unwrap() as usize;
        let greedy = play_game(&mut GreedyNamer::default(), &mut GreedyClaimer, n, 64).unwrap();
        assert!(greedy.len() >= v);
        let namers: Vec<Box<dyn Namer>> = vec![
            Box::new(GreedyNamer::default()),
            Box::new(DoublingNamer::default()),
            Box::new(RepeatNamer { d: 1 }),
            Box::new(RandomNamer::new(n as u64)),
        ];
        for mut namer in namers {
            let mut claimer = OptimalClaimer::new(n, DEFAULT_STATE_CAP).unwrap();
            let t = play_game(namer.as_mut(), &mut claimer, n, 64).unwrap();
            assert!(t.terminal && t.len() <= v, "n {n}: {} > {v}", t.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn value_ignores_translation_and_reflection(
        (n, mask, shift) in (2usize..=14).prop_flat_map(|n| (Just(n), 0u32..1 << n, 0usize..6))
    ) {
        let a = from_mask(n, mask);
        let big = n + shift;
        let moved = PointSet::from_points(big, a.iter().map(|x| x + shift)).unwrap();
        let mirrored = PointSet::from_points(n, a.iter().map(|x| n + 1 - x)).unwrap();
        let mut solver = Solver::new(DEFAULT_STATE_CAP);
        let v = solver.value_of(&a).unwrap();
        prop_assert_eq!(solver.value_of(&moved).unwrap(), v);
        prop_assert_eq!(solver.value_of(&mirrored).unwrap(), v);
    }
}
