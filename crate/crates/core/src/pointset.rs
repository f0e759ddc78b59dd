//! Dense subsets of the board `[n] = {1, ..., n}`.
//!
//! Bit `i` of the backing words stores point `i + 1`, so every set operation
//! the game needs (shift by a distance, intersection, difference) is a
//! word-at-a-time pass over `ceil(n / 64)` words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

const WORD: usize = 64;

/// A subset of `[n]`, stored as a dense bit array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    words: Vec<u64>,
}

impl PointSet {
    /// The empty subset of `[n]`.
    pub fn empty(n: usize) -> Self {
        PointSet {
            n,
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    /// The whole board `[n]`.
    pub fn full(n: usize) -> Self {
        let mut s = PointSet {
            n,
            words: vec![u64::MAX; n.div_ceil(WORD)],
        };
        s.clear_tail();
        s
    }

    /// The interval `[lo, hi]` intersected with `[n]`.
    pub fn interval(n: usize, lo: usize, hi: usize) -> Self {
        let mut s = PointSet::empty(n);
        for x in lo.max(1)..=hi.min(n) {
            s.insert(x);
        }
        s
    }

    /// Builds a set from 1-indexed points; every point must lie in `[1, n]`.
    pub fn from_points<I: IntoIterator<Item = usize>>(n: usize, points: I) -> Result<Self, Error> {
        let mut s = PointSet::empty(n);
        for x in points {
            if x == 0 || x > n {
                return Err(Error::PointOutOfRange { point: x, n });
            }
            s.insert(x);
        }
        Ok(s)
    }

    /// Builds a set from a predicate evaluated on every point of `[n]`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut s = PointSet::empty(n);
        for x in 1..=n {
            if f(x) {
                s.insert(x);
            }
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        if x == 0 || x > self.n {
            return false;
        }
        let i = x - 1;
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Inserts `x`. Panics if `x` is outside `[1, n]`.
    #[inline]
    pub fn insert(&mut self, x: usize) {
        assert!(x >= 1 && x <= self.n, "point {x} outside [1, {}]", self.n);
        let i = x - 1;
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        if x >= 1 && x <= self.n {
            let i = x - 1;
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn min(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize + 1)
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + (WORD - 1 - w.leading_zeros() as usize) + 1)
    }

    /// Iterates the members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `{x - d : x in self, x - d >= 1}`, i.e. the set written `S - d`.
    ///
    /// `x` is in `S ∩ (S - d)` exactly when both `x` and `x + d` are in `S`.
    pub fn shift_down(&self, d: usize) -> PointSet {
        let mut out = PointSet::empty(self.n);
        let (ws, bs) = (d / WORD, d % WORD);
        let len = self.words.len();
        for w in 0..len {
            let src = w + ws;
            if src >= len {
                break;
            }
            let mut v = self.words[src] >> bs;
            if bs > 0 && src + 1 < len {
                v |= self.words[src + 1] << (WORD - bs);
            }
            out.words[w] = v;
        }
        out
    }

    /// `{x + d : x in self, x + d <= n}`.
    pub fn shift_up(&self, d: usize) -> PointSet {
        let mut out = PointSet::empty(self.n);
        let (ws, bs) = (d / WORD, d % WORD);
        let len = self.words.len();
        for w in ws..len {
            let src = w - ws;
            let mut v = self.words[src] << bs;
            if bs > 0 && src >= 1 {
                v |= self.words[src - 1] >> (WORD - bs);
            }
            out.words[w] = v;
        }
        out.clear_tail();
        out
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a | b)
    }

    /// `self \ other`.
    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.check_board(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.check_board(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        self.check_board(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.check_board(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.check_board(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// `S ∩ (S - d)`: the members whose `d`-successor is also a member.
    pub fn with_successor(&self, d: usize) -> PointSet {
        let mut s = self.shift_down(d);
        s.intersect_with(self);
        s
    }

    /// `|S ∩ (S - d)|`: how often the distance `d` occurs inside the set.
    pub fn count_distance(&self, d: usize) -> usize {
        let (ws, bs) = (d / WORD, d % WORD);
        let len = self.words.len();
        let mut total = 0;
        for w in 0..len.saturating_sub(ws) {
            let src = w + ws;
            let mut v = self.words[src] >> bs;
            if bs > 0 && src + 1 < len {
                v |= self.words[src + 1] << (WORD - bs);
            }
            total += (v & self.words[w]).count_ones() as usize;
        }
        total
    }

    fn zip_with(&self, other: &PointSet, f: impl Fn(u64, u64) -> u64) -> PointSet {
        self.check_board(other);
        PointSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn check_board(&self, other: &PointSet) {
        assert_eq!(self.n, other.n, "point sets live on different boards");
    }

    fn clear_tail(&mut self) {
        let rem = self.n % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet[n={}]", self.n)?;
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit + 1);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// A named distance. Valid distances on `[n]` lie in `[1, n - 1]`; the
/// one-point board accepts `d = 1` so that its single round can be played.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distance(usize);

impl Distance {
    pub fn new(d: usize, n: usize) -> Result<Distance, Error> {
        if d >= 1 && d <= max_distance(n) {
            Ok(Distance(d))
        } else {
            Err(Error::InvalidDistance { d, n })
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Largest legal distance on `[n]`.
pub fn max_distance(n: usize) -> usize {
    n.saturating_sub(1).max(1)
}
