//! Namer and Claimer strategies, and the string specifiers that select them.

mod basic;
mod composed;

use std::fmt;
use std::str::FromStr;

pub use basic::{
    greedy_claimer_move, greedy_namer_move, lazy_claimer_move, random_claimer_move, DoublingNamer,
    GreedyClaimer, GreedyNamer, LazyClaimer, RandomClaimer, RandomNamer, RepeatNamer,
};
pub use composed::{
    block_class, bucket_of, composed_round_bound, cube_dimension, BlockResponder, ComposedClaimer,
};

use crate::error::{Error, Role};
use crate::game::{Claimer, Namer};
use crate::solver::{OptimalClaimer, OptimalNamer, DEFAULT_STATE_CAP};

/// A parsed strategy specifier such as `greedy`, `repeat:d=3` or
/// `composed:k=auto,seed=7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategySpec {
    Greedy,
    Lazy,
    /// `k = None` means the automatic dimension for the board.
    Composed { k: Option<usize>, seed: Option<u64> },
    Repeat { d: usize },
    Doubling,
    Random { seed: Option<u64> },
    /// The per-bucket three-colouring responder on its own.
    Block,
    Optimal,
    Human,
}

impl StrategySpec {
    /// Whether the strategy draws randomness, so that different seeds can
    /// produce different games.
    pub fn is_randomized(&self) -> bool {
        matches!(
            self,
            StrategySpec::Composed { seed: None, .. } | StrategySpec::Random { seed: None }
        )
    }

    pub fn plays(&self, role: Role) -> bool {
        use StrategySpec::*;
        match role {
            Role::Namer => matches!(self, Greedy | Repeat { .. } | Doubling | Random { .. } | Optimal | Human),
            Role::Claimer => matches!(self, Greedy | Lazy | Composed { .. } | Random { .. } | Block | Optimal | Human),
        }
    }

    fn refuse(&self, role: Role) -> Error {
        Error::BadSpec {
            spec: self.to_string(),
            reason: match self {
                StrategySpec::Human => "human play is only available through the play service".into(),
                _ => format!("not a {role} strategy"),
            },
        }
    }

    /// Builds a Namer for a game on `[n]`. `seed` is used when the spec does not fix one.
    pub fn namer(&self, n: usize, seed: u64) -> Result<Box<dyn Namer + Send>, Error> {
        Ok(match *self {
            StrategySpec::Greedy => Box::new(GreedyNamer::default()),
            StrategySpec::Repeat { d } => Box::new(RepeatNamer { d }),
            StrategySpec::Doubling => Box::new(DoublingNamer::default()),
            StrategySpec::Random { seed: s } => Box::new(RandomNamer::new(s.unwrap_or(seed))),
            StrategySpec::Optimal => Box::new(OptimalNamer::new(n, DEFAULT_STATE_CAP)?),
            _ => return Err(self.refuse(Role::Namer)),
        })
    }

    /// Builds a Claimer for a game on `[n]`. `seed` is used when the spec does not fix one.
    pub fn claimer(&self, n: usize, seed: u64) -> Result<Box<dyn Claimer + Send>, Error> {
        Ok(match *self {
            StrategySpec::Greedy => Box::new(GreedyClaimer),
            StrategySpec::Lazy => Box::new(LazyClaimer),
            StrategySpec::Composed { k, seed: s } => {
                let seed = s.unwrap_or(seed);
                Box::new(match k {
                    Some(k) => ComposedClaimer::with_k(n, k, seed),
                    None => ComposedClaimer::new(n, seed),
                })
            }
            StrategySpec::Random { seed: s } => Box::new(RandomClaimer::new(s.unwrap_or(seed))),
            StrategySpec::Block => Box::new(BlockResponder::default()),
            StrategySpec::Optimal => Box::new(OptimalClaimer::new(n, DEFAULT_STATE_CAP)?),
            _ => return Err(self.refuse(Role::Claimer)),
        })
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategySpec::Greedy => f.write_str("greedy"),
            StrategySpec::Lazy => f.write_str("lazy"),
            StrategySpec::Composed { k, seed } => {
                write!(f, "composed:k=")?;
                match k {
                    Some(k) => write!(f, "{k}")?,
                    None => f.write_str("auto")?,
                }
                if let Some(s) = seed {
                    write!(f, ",seed={s}")?;
                }
                Ok(())
            }
            StrategySpec::Repeat { d } => write!(f, "repeat:d={d}"),
            StrategySpec::Doubling => f.write_str("doubling"),
            StrategySpec::Random { seed: Some(s) } => write!(f, "random:seed={s}"),
            StrategySpec::Random { seed: None } => f.write_str("random"),
            StrategySpec::Block => f.write_str("block"),
            StrategySpec::Optimal => f.write_str("optimal"),
            StrategySpec::Human => f.write_str("human"),
        }
    }
}

impl FromStr for StrategySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |reason: &str| Error::BadSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let (name, args) = match s.split_once(':') {
            Some((name, args)) => (name.trim(), args.trim()),
            None => (s.trim(), ""),
        };
        let mut params = Vec::new();
        for part in args.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad("parameters are written key=value"))?;
            params.push((k.trim(), v.trim()));
        }
        let allow = |keys: &[&str]| -> Result<(), Error> {
            match params.iter().find(|(k, _)| !keys.contains(k)) {
                Some((k, _)) => Err(bad(&format!("unknown parameter {k:?}"))),
                None => Ok(()),
            }
        };
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let seed = || -> Result<Option<u64>, Error> {
            get("seed")
                .map(|v| v.parse().map_err(|_| bad("seed must be a non-negative integer")))
                .transpose()
        };
        let spec = match name {
            "greedy" | "lazy" | "doubling" | "block" | "optimal" | "human" => {
                allow(&[])?;
                match name {
                    "greedy" => StrategySpec::Greedy,
                    "lazy" => StrategySpec::Lazy,
                    "doubling" => StrategySpec::Doubling,
                    "block" => StrategySpec::Block,
                    "optimal" => StrategySpec::Optimal,
                    _ => StrategySpec::Human,
                }
            }
            "composed" => {
                allow(&["k", "seed"])?;
                let k = match get("k") {
                    None | Some("auto") => None,
                    Some(v) => Some(
                        v.parse::<usize>()
                            .ok()
                            .filter(|&k| k >= 1)
                            .ok_or_else(|| bad("k must be auto or a positive integer"))?,
                    ),
                };
                StrategySpec::Composed { k, seed: seed()? }
            }
            "repeat" => {
                allow(&["d"])?;
                let d = get("d")
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| bad("repeat needs d=<positive integer>"))?;
                StrategySpec::Repeat { d }
            }
            "random" => {
                allow(&["seed"])?;
                StrategySpec::Random { seed: seed()? }
            }
            _ => return Err(bad("unknown strategy")),
        };
        Ok(spec)
    }
}
