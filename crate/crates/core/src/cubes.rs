//! Hilbert cubes `H(x; d_1, ..., d_k) = { x + Σ_{i∈I} d_i : I ⊆ [k] }`.
//!
//! The central identity: after lazy rounds with distances `d_1..d_k` starting
//! from `A_0`, the unclaimed set is exactly the set of bases `x` whose cube
//! `H(x; d_1..d_k)` lies inside `A_0`. Searching for cubes is therefore the
//! same as iterating `T ← T ∩ (T - d)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::pointset::PointSet;

/// A cube given by its base point and side lengths (not necessarily distinct).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeSpec {
    pub x: usize,
    pub sides: Vec<usize>,
}

impl CubeSpec {
    pub fn new(x: usize, sides: impl Into<Vec<usize>>) -> Self {
        CubeSpec { x, sides: sides.into() }
    }

    pub fn dimension(&self) -> usize {
        self.sides.len()
    }

    /// Largest point of the cube.
    pub fn top(&self) -> usize {
        self.x + self.sides.iter().sum::<usize>()
    }
}

/// All subset sums of the cube, as points of `[n]`.
pub fn cube_points(c: &CubeSpec, n: usize) -> Result<PointSet, Error> {
    if c.x == 0 || c.top() > n {
        return Err(Error::PointOutOfRange {
            point: if c.x == 0 { 0 } else { c.top() },
            n,
        });
    }
    let mut pts = PointSet::empty(n);
    pts.insert(c.x);
    for &d in &c.sides {
        let shifted = pts.shift_up(d);
        pts.union_with(&shifted);
    }
    Ok(pts)
}

/// True iff all `2^k` subset sums of `sides` are distinct.
///
/// Sums are generated one side at a time and the first collision stops the
/// work, so degenerate side lists are usually rejected early.
pub fn sides_nondegenerate(sides: &[usize]) -> bool {
    let mut sums: Vec<u128> = vec![0];
    for &d in sides {
        if d == 0 {
            return false;
        }
        let d = d as u128;
        let mut merged = Vec::with_capacity(sums.len() * 2);
        let (mut i, mut j) = (0, 0);
        while i < sums.len() || j < sums.len() {
            let a = sums.get(i).copied();
            let b = sums.get(j).map(|s| s + d);
            match (a, b) {
                (Some(a), Some(b)) if a == b => return false,
                (Some(a), Some(b)) if a < b => {
                    merged.push(a);
                    i += 1;
                }
                (Some(a), None) => {
                    merged.push(a);
                    i += 1;
                }
                (_, Some(b)) => {
                    merged.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        sums = merged;
    }
    true
}

/// A cube is non-degenerate when it has the full `2^k` points; this depends on
/// the sides only.
pub fn is_nondegenerate(c: &CubeSpec) -> bool {
    sides_nondegenerate(&c.sides)
}

/// The set of bases `x` with `H(x; sides) ⊆ S`.
pub fn cube_bases(s: &PointSet, sides: &[usize]) -> PointSet {
    let mut t = s.clone();
    for &d in sides {
        if t.is_empty() {
            break;
        }
        t = t.with_successor(d);
    }
    t
}

/// The smallest base `x` with `H(x; sides) ⊆ S`, if any.
pub fn contains_cube(s: &PointSet, sides: &[usize]) -> Option<usize> {
    cube_bases(s, sides).min()
}

/// Result of a bounded cube search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(CubeSpec),
    /// The whole search space was explored.
    Absent,
    /// The node budget ran out first.
    Aborted,
}

/// Depth-first search for a non-degenerate cube of dimension `k`.
///
/// Sides are enumerated in increasing order (non-degenerate sides are
/// distinct). At every node the bases still possible form
/// `T = S ∩ (S - d_1) ∩ ...`, and a branch is cut when
///
/// * the new side collides with a subset sum of the earlier ones,
/// * `T` has fewer than `2^m` points, `m` the number of sides still to choose,
/// * the `m` remaining sides, each larger than the last, cannot fit in the span of `T`.
///
/// The first witness found has the lexicographically smallest side vector,
/// and its base is the smallest possible for those sides.
#[derive(Clone, Debug)]
pub struct CubeSearch {
    k: usize,
    node_limit: Option<u64>,
    nodes: u64,
}

impl CubeSearch {
    pub fn new(k: usize) -> Self {
        CubeSearch {
            k,
            node_limit: None,
            nodes: 0,
        }
    }

    pub fn node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    /// Nodes expanded by the last run.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn run(&mut self, s: &PointSet) -> SearchOutcome {
        self.nodes = 0;
        if self.k == 0 {
            return match s.min() {
                Some(x) => SearchOutcome::Found(CubeSpec::new(x, [])),
                None => SearchOutcome::Absent,
            };
        }
        if s.len() < 1 << self.k.min(62) {
            return SearchOutcome::Absent;
        }
        let mut sides = Vec::with_capacity(self.k);
        let span = s.max().unwrap_or(0) - s.min().unwrap_or(0);
        let cands: Vec<usize> = (1..=span).collect();
        match self.extend(s, &[0], &mut sides, &cands) {
            Ok(Some(x)) => SearchOutcome::Found(CubeSpec { x, sides }),
            Ok(None) => SearchOutcome::Absent,
            Err(()) => SearchOutcome::Aborted,
        }
    }

    /// `sums` holds the subset sums of the sides chosen so far, sorted.
    /// `cands` lists, in increasing order, the sides still worth trying: every
    /// side of a cube inside `t` occurs as a difference in `t` at least
    /// `2^(m-1)` times, and that stays true in every superset of `t`.
    fn extend(
        &mut self,
        t: &PointSet,
        sums: &[usize],
        sides: &mut Vec<usize>,
        cands: &[usize],
    ) -> Result<Option<usize>, ()> {
        let m = self.k - sides.len();
        let (Some(lo), Some(hi)) = (t.min(), t.max()) else {
            return Ok(None);
        };
        let span = hi - lo;
        if cands.len() < m || cands[..m].iter().sum::<usize>() > span {
            return Ok(None);
        }
        let need = 1usize << (m - 1).min(62);
        // the next side is the smallest of m distinct ones summing to at most span
        let d_max = (span - m * (m - 1) / 2) / m;
        let window = cands.partition_point(|&d| d <= d_max);
        if window == 0 {
            return Ok(None);
        }
        let counts = distance_histogram(t, cands[0], d_max, window);
        let mut live = Vec::with_capacity(cands.len());
        for &d in &cands[..window] {
            if counts.get(d) >= need
                && !sums.iter().any(|&a| sums.binary_search(&(a + d)).is_ok())
            {
                live.push(d);
            }
        }
        let branches = live.len();
        live.extend_from_slice(&cands[window..]);
        for i in 0..branches {
            let rest = &live[i..];
            if rest.len() < m || rest[..m].iter().sum::<usize>() > span {
                break;
            }
            let d = live[i];
            self.nodes += 1;
            if self.node_limit.is_some_and(|l| self.nodes > l) {
                return Err(());
            }
            let next = t.with_successor(d);
            sides.push(d);
            if m == 1 {
                return Ok(next.min());
            }
            let mut next_sums: Vec<usize> = sums.iter().flat_map(|&s| [s, s + d]).collect();
            next_sums.sort_unstable();
            if let Some(x) = self.extend(&next, &next_sums, sides, &live[i + 1..])? {
                return Ok(Some(x));
            }
            sides.pop();
        }
        Ok(None)
    }
}

/// Difference counts `|T ∩ (T - d)|`, computed either for a whole window of
/// distances or lazily for a handful of them.
enum Counts<'a> {
    Window { d_min: usize, counts: Vec<usize> },
    Lazy(&'a PointSet),
}

impl Counts<'_> {
    fn get(&self, d: usize) -> usize {
        match self {
            Counts::Window { d_min, counts } => counts[d - d_min],
            Counts::Lazy(t) => t.count_distance(d),
        }
    }
}

fn distance_histogram(t: &PointSet, d_min: usize, d_max: usize, queries: usize) -> Counts<'_> {
    let width = d_max - d_min + 1;
    let size = t.len();
    let words = t.words().len();
    // pairs are cheap for sparse sets; dense ones use word-parallel counting
    let span = t.max().unwrap_or(0) - t.min().unwrap_or(0) + 1;
    let pair_cost = size * (size * d_max / span).min(size) / 2;
    if pair_cost <= queries * words * 2 {
        let pts: Vec<u32> = t.iter().map(|x| x as u32).collect();
        let mut counts = vec![0usize; width];
        for (i, &x) in pts.iter().enumerate() {
            for &y in &pts[i + 1..] {
                let d = (y - x) as usize;
                if d > d_max {
                    break;
                }
                if d >= d_min {
                    counts[d - d_min] += 1;
                }
            }
        }
        Counts::Window { d_min, counts }
    } else {
        Counts::Lazy(t)
    }
}

/// Exhaustive search for a non-degenerate cube of dimension `k` inside `S`.
pub fn find_nondegenerate_cube(s: &PointSet, k: usize) -> Option<CubeSpec> {
    match CubeSearch::new(k).run(s) {
        SearchOutcome::Found(c) => Some(c),
        _ => None,
    }
}

/// Splits `[n]` into `r` classes, each point placed independently and
/// uniformly, reproducibly from `seed`.
pub fn random_partition(n: usize, r: usize, seed: u64) -> Vec<PointSet> {
    assert!(r >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes = vec![PointSet::empty(n); r];
    for x in 1..=n {
        classes[rng.gen_range(0..r)].insert(x);
    }
    classes
}

/// `log2` of the first-moment bound `n^(k+1) · 2^(-2^k)` on the expected number
/// of full-size dimension-`k` cubes in a uniformly random subset of `[n]`.
pub fn expected_cube_count_log2(n: usize, k: usize) -> f64 {
    (k as f64 + 1.0) * (n as f64).log2() - (k as f64).exp2()
}

pub fn expected_cube_count(n: usize, k: usize) -> f64 {
    expected_cube_count_log2(n, k).exp2()
}

/// A witness found in one class of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassWitness {
    pub class: usize,
    pub cube: CubeSpec,
}

/// Outcome of checking every class of a partition for non-degenerate cubes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub n: usize,
    pub k: usize,
    pub classes: Vec<PointSet>,
    /// True when every class was searched to completion and none holds a cube.
    pub exhaustive: bool,
    pub witness: Option<ClassWitness>,
}

impl PartitionCertificate {
    pub fn certified(&self) -> bool {
        self.exhaustive && self.witness.is_none()
    }

    pub fn report(&self) -> CertificateReport {
        CertificateReport {
            n: self.n,
            k: self.k,
            class: self.witness.as_ref().map(|w| w.class),
            witness: self.witness.as_ref().map(|w| w.cube.clone()),
            exhaustive: self.exhaustive,
        }
    }
}

/// JSON form of a certificate: `{"n", "k", "class", "witness", "exhaustive"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub n: usize,
    pub k: usize,
    pub class: Option<usize>,
    pub witness: Option<CubeSpec>,
    pub exhaustive: bool,
}

/// Searches every class for a non-degenerate cube of dimension `k`.
pub fn certify_partition(classes: &[PointSet], k: usize) -> Result<PartitionCertificate, Error> {
    certify_partition_bounded(classes, k, None)
}

/// As [`certify_partition`], giving up on a class after `node_limit` search nodes.
pub fn certify_partition_bounded(
    classes: &[PointSet],
    k: usize,
    node_limit: Option<u64>,
) -> Result<PartitionCertificate, Error> {
    let n = classes.first().map(PointSet::n).ok_or_else(|| Error::IllegalClaim("no classes".into()))?;
    let mut union = PointSet::empty(n);
    for c in classes {
        if c.n() != n || !c.is_disjoint(&union) {
            return Err(Error::IllegalClaim("classes do not partition the board".into()));
        }
        union.union_with(c);
    }
    if union.len() != n {
        return Err(Error::IllegalClaim("classes do not cover the board".into()));
    }
    let mut exhaustive = true;
    for (i, class) in classes.iter().enumerate() {
        let mut search = CubeSearch::new(k);
        if let Some(l) = node_limit {
            search = search.node_limit(l);
        }
        match search.run(class) {
            SearchOutcome::Found(cube) => {
                return Ok(PartitionCertificate {
                    n,
                    k,
                    classes: classes.to_vec(),
                    exhaustive: false,
                    witness: Some(ClassWitness { class: i, cube }),
                })
            }
            SearchOutcome::Absent => {}
            SearchOutcome::Aborted => exhaustive = false,
        }
    }
    Ok(PartitionCertificate {
        n,
        k,
        classes: classes.to_vec(),
        exhaustive,
        witness: None,
    })
}

/// True iff some cube of dimension `k` (degenerate allowed) inside `u` has
/// `top` as its largest point.
fn has_cube_with_top(u: &PointSet, top: usize, k: usize) -> bool {
    fn go(t: &PointSet, top: usize, remaining: usize, min_d: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        for d in min_d..top {
            // top must stay a top after adding side d
            if !t.contains(top - d) {
                continue;
            }
            let next = t.intersection(&t.shift_up(d));
            if next.contains(top) && go(&next, top, remaining - 1, d) {
                return true;
            }
        }
        false
    }
    u.contains(top) && go(u, top, k, 1)
}

/// The least `n` such that every `r`-colouring of `[n]` has a colour class
/// containing a dimension-`k` cube (degenerate cubes count), searched up to
/// `n_max`. `None` if some colouring of `[n_max]` avoids all such cubes.
///
/// Colourings are extended one point at a time; a new point can only create
/// cubes in which it is the largest element, so only those are checked.
/// Colours are introduced in order of first use.
pub fn hilbert_ramsey_number(k: usize, r: usize, n_max: usize) -> Option<usize> {
    if k == 0 || r == 0 {
        return Some(1);
    }
    struct Search {
        k: usize,
        r: usize,
        n_max: usize,
        classes: Vec<PointSet>,
        longest: usize,
    }
    impl Search {
        fn extend(&mut self, m: usize, used: usize) -> bool {
            self.longest = self.longest.max(m - 1);
            if m > self.n_max {
                return true;
            }
            for c in 0..(used + 1).min(self.r) {
                self.classes[c].insert(m);
                let free = !has_cube_with_top(&self.classes[c], m, self.k);
                if free && self.extend(m + 1, used.max(c + 1)) {
                    return true;
                }
                self.classes[c].remove(m);
            }
            false
        }
    }
    let mut s = Search {
        k,
        r,
        n_max,
        classes: vec![PointSet::empty(n_max.max(1)); r],
        longest: 0,
    };
    if s.extend(1, 0) {
        None
    } else {
        Some(s.longest + 1)
    }
}
