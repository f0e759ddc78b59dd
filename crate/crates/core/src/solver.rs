//! Exact game values for small boards by memoized minimax.
//!
//! `V(∅) = 0` and otherwise
//! `V(A) = 1 + max_d min_C V(A \ C)`, with `d` ranging over distances that
//! occur inside `A` and `C` over the maximal independent sets of `G_d[A]`.
//! Restricting Claimer to maximal sets is safe because `V` is monotone under
//! inclusion: claiming more never helps Namer.
//!
//! States are bitmasks; the memo key translates the set to start at bit 0 and
//! takes the smaller of the set and its mirror image.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::Error;
use crate::game::{Claimer, Namer, Position, Round, Transcript};
use crate::pointset::{max_distance, Distance, PointSet};

/// Largest board the solver accepts unless configured otherwise.
pub const DEFAULT_STATE_CAP: usize = 18;

/// Hard limit from the 64-bit state encoding.
pub const MAX_STATE_CAP: usize = 64;

/// Memoized minimax over unclaimed sets.
#[derive(Debug)]
pub struct Solver {
    cap: usize,
    memo: HashMap<u64, u8>,
    /// `path_mis[len]`: maximal independent sets of a path on `len` vertices,
    /// as masks over path positions.
    path_mis: Vec<Vec<u64>>,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(DEFAULT_STATE_CAP)
    }
}

fn canonical(mask: u64) -> u64 {
    if mask == 0 {
        return 0;
    }
    let m = mask >> mask.trailing_zeros();
    let width = 64 - m.leading_zeros();
    let mirrored = m.reverse_bits() >> (64 - width);
    m.min(mirrored)
}

/// Maximal independent sets of a path with `len` vertices, as position masks.
fn path_maximal_sets(len: usize) -> Vec<u64> {
    fn go(pos: usize, len: usize, acc: u64, out: &mut Vec<u64>) {
        let acc = acc | 1 << pos;
        if pos + 2 >= len {
            out.push(acc);
            return;
        }
        go(pos + 2, len, acc, out);
        if pos + 3 < len {
            go(pos + 3, len, acc, out);
        }
    }
    let mut out = Vec::new();
    match len {
        0 => out.push(0),
        1 => out.push(1),
        _ => {
            go(0, len, 0, &mut out);
            go(1, len, 0, &mut out);
        }
    }
    out
}

/// Paths of `G_d` restricted to `mask`, as lists of bit positions.
fn mask_paths(mask: u64, d: usize) -> Vec<Vec<u32>> {
    let mut paths = Vec::new();
    let mut rest = mask;
    while rest != 0 {
        let start = rest.trailing_zeros() as usize;
        let mut path = Vec::new();
        let mut p = start;
        while p < 64 && mask >> p & 1 == 1 {
            path.push(p as u32);
            rest &= !(1 << p);
            p += d;
        }
        paths.push(path);
    }
    paths
}

fn to_mask(a: &PointSet) -> u64 {
    a.iter().fold(0u64, |m, x| m | 1 << (x - 1))
}

fn from_mask(n: usize, mask: u64) -> PointSet {
    let mut s = PointSet::empty(n);
    let mut m = mask;
    while m != 0 {
        s.insert(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    s
}

impl Solver {
    pub fn new(cap: usize) -> Self {
        Solver {
            cap: cap.min(MAX_STATE_CAP),
            memo: HashMap::new(),
            path_mis: Vec::new(),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Distinct canonical states evaluated so far.
    pub fn states_visited(&self) -> usize {
        self.memo.len()
    }

    fn check(&self, a: &PointSet) -> Result<u64, Error> {
        if let (Some(lo), Some(hi)) = (a.min(), a.max()) {
            let span = hi - lo + 1;
            if span > self.cap {
                return Err(Error::Capacity(format!(
                    "set spans {span} points; the solver cap is {}",
                    self.cap
                )));
            }
            Ok(to_mask(&a.shift_down(lo - 1)))
        } else {
            Ok(0)
        }
    }

    /// Exact number of rounds from unclaimed set `a` under optimal play.
    pub fn value_of(&mut self, a: &PointSet) -> Result<u32, Error> {
        let mask = self.check(a)?;
        Ok(self.value(mask) as u32)
    }

    fn mis_of_path(&mut self, len: usize) -> &[u64] {
        while self.path_mis.len() <= len {
            let l = self.path_mis.len();
            self.path_mis.push(path_maximal_sets(l));
        }
        &self.path_mis[len]
    }

    /// Calls `f` with every maximal independent set of `G_d[mask]`.
    fn for_each_claim(&mut self, mask: u64, d: usize, f: &mut dyn FnMut(&mut Self, u64)) {
        let paths = mask_paths(mask, d);
        let options: Vec<Vec<u64>> = paths
            .iter()
            .map(|p| {
                self.mis_of_path(p.len())
                    .iter()
                    .map(|&pm| {
                        p.iter()
                            .enumerate()
                            .filter(|(i, _)| pm >> i & 1 == 1)
                            .fold(0u64, |m, (_, &bit)| m | 1 << bit)
                    })
                    .collect()
            })
            .collect();
        fn product(solver: &mut Solver, options: &[Vec<u64>], acc: u64, f: &mut dyn FnMut(&mut Solver, u64)) {
            match options.split_first() {
                None => f(solver, acc),
                Some((first, rest)) => {
                    for &c in first {
                        product(solver, rest, acc | c, f);
                    }
                }
            }
        }
        product(self, &options, 0, f);
    }

    fn value(&mut self, mask: u64) -> u8 {
        if mask == 0 {
            return 0;
        }
        if mask.count_ones() == 1 {
            return 1;
        }
        let key = canonical(mask);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.value_uncached(key);
        self.memo.insert(key, v);
        v
    }

    fn value_uncached(&mut self, mask: u64) -> u8 {
        let span = 64 - mask.leading_zeros() as usize;
        let mut best = 1u8;
        for d in 1..span {
            if mask & (mask >> d) == 0 {
                continue;
            }
            let v = 1 + self.claim_value(mask, d);
            best = best.max(v);
        }
        best
    }

    /// `min_C V(mask \ C)` over maximal independent sets `C` of `G_d[mask]`.
    fn claim_value(&mut self, mask: u64, d: usize) -> u8 {
        let mut worst = u8::MAX;
        self.for_each_claim(mask, d, &mut |s, c| {
            let v = s.value(mask & !c);
            worst = worst.min(v);
        });
        worst
    }

    /// A Namer move achieving the value: the smallest such distance.
    pub fn optimal_namer_move(&mut self, a: &PointSet) -> Result<Distance, Error> {
        if a.is_empty() {
            return Err(Error::NoMove("the board is already covered".into()));
        }
        let mask = self.check(a)?;
        let target = self.value(mask);
        let span = 64 - mask.leading_zeros() as usize;
        for d in 1..span {
            if mask & (mask >> d) != 0 && 1 + self.claim_value(mask, d) == target {
                return Distance::new(d, a.n());
            }
        }
        Distance::new(1.min(max_distance(a.n())), a.n())
    }

    /// A maximal independent set of `G_d[A]` minimizing the remaining value;
    /// the lexicographically smallest one (as a sorted point list) on ties.
    pub fn optimal_claimer_move(&mut self, a: &PointSet, d: Distance) -> Result<PointSet, Error> {
        let mask = self.check(a)?;
        let offset = a.min().unwrap_or(1) - 1;
        let dd = d.get();
        let mut best: Option<(u8, Vec<usize>)> = None;
        self.for_each_claim(mask, dd, &mut |s, c| {
            let v = s.value(mask & !c);
            let pts: Vec<usize> = (0..64).filter(|b| c >> b & 1 == 1).map(|b| b + 1 + offset).collect();
            let better = match &best {
                None => true,
                Some((bv, bp)) => v < *bv || (v == *bv && pts < *bp),
            };
            if better {
                best = Some((v, pts));
            }
        });
        let (_, pts) = best.expect("at least one maximal independent set");
        PointSet::from_points(a.n(), pts)
    }

    /// Maximal independent sets of `G_d[A]` (the cross product of the
    /// per-path choices).
    pub fn maximal_independent_sets(&mut self, a: &PointSet, d: Distance) -> Result<Vec<PointSet>, Error> {
        let mask = self.check(a)?;
        let offset = a.min().unwrap_or(1) - 1;
        let n = a.n();
        let mut out = Vec::new();
        self.for_each_claim(mask, d.get(), &mut |_, c| out.push(from_mask(n, c << offset)));
        Ok(out)
    }

    /// Replays optimal moves from `[n]` into a transcript.
    pub fn principal_line(&mut self, n: usize) -> Result<Transcript, Error> {
        let mut t = Transcript::new(n);
        let mut a = PointSet::full(n);
        while !a.is_empty() {
            let d = self.optimal_namer_move(&a)?;
            let c = self.optimal_claimer_move(&a, d)?;
            a.difference_with(&c);
            t.rounds.push(Round { d, claimed: c });
        }
        t.terminal = true;
        Ok(t)
    }
}

/// Maximal independent sets of `G_d[A]`, for sets within the solver cap.
pub fn maximal_independent_sets(a: &PointSet, d: Distance) -> Result<Vec<PointSet>, Error> {
    Solver::new(MAX_STATE_CAP).maximal_independent_sets(a, d)
}

/// Exact value and a principal line for `[n]`.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub n: usize,
    pub value: u32,
    pub principal_line: Transcript,
    pub states_visited: usize,
    pub elapsed_ms: f64,
}

/// Solves `[n]` with the given state cap.
pub fn solve(n: usize, cap: usize) -> Result<SolveReport, Error> {
    if n > cap.min(MAX_STATE_CAP) {
        return Err(Error::Capacity(format!("n = {n} exceeds the solver cap {}", cap.min(MAX_STATE_CAP))));
    }
    let start = Instant::now();
    let mut solver = Solver::new(cap);
    let value = solver.value_of(&PointSet::full(n))?;
    let principal_line = solver.principal_line(n)?;
    Ok(SolveReport {
        n,
        value,
        principal_line,
        states_visited: solver.states_visited(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

/// Namer playing the solver's moves.
#[derive(Debug)]
pub struct OptimalNamer {
    solver: Solver,
}

impl OptimalNamer {
    pub fn new(n: usize, cap: usize) -> Result<Self, Error> {
        if n > cap.min(MAX_STATE_CAP) {
            return Err(Error::Capacity(format!("optimal play needs n <= {cap}, got {n}")));
        }
        Ok(OptimalNamer { solver: Solver::new(cap) })
    }
}

impl Namer for OptimalNamer {
    fn name(&mut self, pos: &Position<'_>) -> Result<Distance, Error> {
        self.solver.optimal_namer_move(pos.unclaimed)
    }
}

/// Claimer playing the solver's moves.
#[derive(Debug)]
pub struct OptimalClaimer {
    solver: Solver,
}

impl OptimalClaimer {
    pub fn new(n: usize, cap: usize) -> Result<Self, Error> {
        if n > cap.min(MAX_STATE_CAP) {
            return Err(Error::Capacity(format!("optimal play needs n <= {cap}, got {n}")));
        }
        Ok(OptimalClaimer { solver: Solver::new(cap) })
    }
}

impl Claimer for OptimalClaimer {
    fn claim(&mut self, pos: &Position<'_>, d: Distance) -> Result<PointSet, Error> {
        self.solver.optimal_claimer_move(pos.unclaimed, d)
    }
}
