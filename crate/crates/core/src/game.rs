//! Positions, moves and game execution.
//!
//! A game on `[n]` starts with every point unclaimed. Each round Namer names a
//! distance `d`, Claimer answers with a `d`-free subset of the unclaimed points,
//! and those points leave the board. The engine validates every move; it never
//! trusts a strategy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Role};
use crate::pointset::{max_distance, Distance, PointSet};

fn check_distance(s: &PointSet, d: Distance) -> Result<usize, Error> {
    let n = s.n();
    if d.get() > max_distance(n) {
        return Err(Error::InvalidDistance { d: d.get(), n });
    }
    Ok(d.get())
}

/// True iff no two members of `s` differ by `d`, i.e. `S ∩ (S - d) = ∅`.
pub fn is_d_free(s: &PointSet, d: Distance) -> Result<bool, Error> {
    let d = check_distance(s, d)?;
    Ok(s.count_distance(d) == 0)
}

/// The connected components of `G_d[A]`: maximal arithmetic progressions of
/// step `d` inside `A`, ordered by their smallest element.
pub fn path_components(a: &PointSet, d: Distance) -> Result<Vec<Vec<usize>>, Error> {
    let d = check_distance(a, d)?;
    let mut paths = Vec::new();
    for x in a.iter() {
        if x > d && a.contains(x - d) {
            continue;
        }
        let mut path = vec![x];
        let mut y = x + d;
        while a.contains(y) {
            path.push(y);
            y += d;
        }
        paths.push(path);
    }
    Ok(paths)
}

/// Checks that `claim` is a legal answer to `d` on the unclaimed set `a`.
pub fn check_claim(a: &PointSet, d: Distance, claim: &PointSet) -> Result<(), Error> {
    check_distance(a, d)?;
    if claim.n() != a.n() {
        return Err(Error::IllegalClaim(format!(
            "claim is on board [{}] but the game is on [{}]",
            claim.n(),
            a.n()
        )));
    }
    if !claim.is_subset(a) {
        let stray = claim.difference(a).min().unwrap_or(0);
        return Err(Error::IllegalClaim(format!("point {stray} is not unclaimed")));
    }
    let dd = d.get();
    if let Some(x) = claim.with_successor(dd).min() {
        return Err(Error::IllegalClaim(format!(
            "points {x} and {} differ by {dd}",
            x + dd
        )));
    }
    Ok(())
}

/// Plays one round: returns `A \ C` after checking that `C` is legal.
pub fn apply_round(a: &PointSet, d: Distance, claim: &PointSet) -> Result<PointSet, Error> {
    check_claim(a, d, claim)?;
    Ok(a.difference(claim))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub d: Distance,
    pub claimed: PointSet,
}

/// The full record of one game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TranscriptWire", try_from = "TranscriptWire")]
pub struct Transcript {
    pub n: usize,
    pub rounds: Vec<Round>,
    pub terminal: bool,
}

/// Why a transcript failed validation. `round` is the 0-based index of the
/// first offending round, or `None` when only the terminal flag is wrong.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid transcript at round {round:?}: {reason}")]
pub struct InvalidTranscript {
    pub round: Option<usize>,
    pub reason: String,
}

impl Transcript {
    pub fn new(n: usize) -> Self {
        Transcript {
            n,
            rounds: Vec::new(),
            terminal: false,
        }
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// The unclaimed set after every round has been applied.
    pub fn unclaimed(&self) -> PointSet {
        let mut a = PointSet::full(self.n);
        for r in &self.rounds {
            if r.claimed.n() == self.n {
                a.difference_with(&r.claimed);
            }
        }
        a
    }

    /// Replays the rounds against the running unclaimed set.
    pub fn validate(&self) -> Result<(), InvalidTranscript> {
        let mut a = PointSet::full(self.n);
        for (i, r) in self.rounds.iter().enumerate() {
            if a.is_empty() {
                return Err(InvalidTranscript {
                    round: Some(i),
                    reason: "round played after the board was covered".into(),
                });
            }
            a = apply_round(&a, r.d, &r.claimed).map_err(|e| InvalidTranscript {
                round: Some(i),
                reason: e.to_string(),
            })?;
        }
        if self.terminal != a.is_empty() {
            return Err(InvalidTranscript {
                round: None,
                reason: format!(
                    "terminal flag is {} but {} points remain unclaimed",
                    self.terminal,
                    a.len()
                ),
            });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Serialize, Deserialize)]
struct TranscriptWire {
    n: usize,
    rounds: Vec<RoundWire>,
    terminal: bool,
}

#[derive(Serialize, Deserialize)]
struct RoundWire {
    d: usize,
    claimed: Vec<usize>,
}

impl From<Transcript> for TranscriptWire {
    fn from(t: Transcript) -> Self {
        TranscriptWire {
            n: t.n,
            rounds: t
                .rounds
                .into_iter()
                .map(|r| RoundWire {
                    d: r.d.get(),
                    claimed: r.claimed.to_vec(),
                })
                .collect(),
            terminal: t.terminal,
        }
    }
}

impl TryFrom<TranscriptWire> for Transcript {
    type Error = Error;

    fn try_from(w: TranscriptWire) -> Result<Self, Error> {
        let rounds = w
            .rounds
            .into_iter()
            .map(|r| {
                Ok(Round {
                    d: Distance::new(r.d, w.n)?,
                    claimed: PointSet::from_points(w.n, r.claimed)?,
                })
            })
            .collect::<Result<_, Error>>()?;
        Ok(Transcript {
            n: w.n,
            rounds,
            terminal: w.terminal,
        })
    }
}

/// What a strategy sees when asked to move.
#[derive(Clone, Copy, Debug)]
pub struct Position<'a> {
    pub n: usize,
    pub unclaimed: &'a PointSet,
    pub history: &'a [Round],
}

pub trait Namer {
    fn name(&mut self, pos: &Position<'_>) -> Result<Distance, Error>;
}

pub trait Claimer {
    fn claim(&mut self, pos: &Position<'_>, d: Distance) -> Result<PointSet, Error>;

    /// Set when the strategy had to fall outside its proven round budget.
    fn bound_violated(&self) -> bool {
        false
    }
}

/// Default round cap: `4 * (floor(log2 n) + 2)`.
pub fn default_round_cap(n: usize) -> usize {
    4 * (n.max(1).ilog2() as usize + 2)
}

/// Runs a game until the board is covered or `round_cap` rounds have been played.
pub fn play_game(
    namer: &mut dyn Namer,
    claimer: &mut dyn Claimer,
    n: usize,
    round_cap: usize,
) -> Result<Transcript, Error> {
    play_game_observed(namer, claimer, n, round_cap, |_, _| {})
}

/// Like [`play_game`], calling `observe(round_index, unclaimed_after)` after each round.
pub fn play_game_observed(
    namer: &mut dyn Namer,
    claimer: &mut dyn Claimer,
    n: usize,
    round_cap: usize,
    mut observe: impl FnMut(usize, &PointSet),
) -> Result<Transcript, Error> {
    if round_cap == 0 {
        return Err(Error::Capacity("round cap must be at least 1".into()));
    }
    let mut t = Transcript::new(n);
    let mut a = PointSet::full(n);
    while !a.is_empty() && t.rounds.len() < round_cap {
        let round = t.rounds.len() + 1;
        let pos = Position {
            n,
            unclaimed: &a,
            history: &t.rounds,
        };
        let fault = |role, e: Error| Error::StrategyFault {
            role,
            round,
            reason: e.to_string(),
        };
        let d = namer.name(&pos).map_err(|e| fault(Role::Namer, e))?;
        Distance::new(d.get(), n).map_err(|e| fault(Role::Namer, e))?;
        let c = claimer.claim(&pos, d).map_err(|e| fault(Role::Claimer, e))?;
        a = apply_round(&a, d, &c).map_err(|e| fault(Role::Claimer, e))?;
        t.rounds.push(Round { d, claimed: c });
        observe(round - 1, &a);
    }
    t.terminal = a.is_empty();
    Ok(t)
}
