//! The Namer–Claimer game on `[n]`.
//!
//! Each round Namer names a distance `d`; Claimer claims a set of unclaimed
//! points containing no two points at distance `d`. Claimer wins once all of
//! `[n]` is claimed, and wants to do so in as few rounds as possible. Optimal
//! play lasts `Θ(log log n)` rounds.
//!
//! The crate provides:
//!
//! * [`game`]: legality checks, transcripts, and a validating game loop;
//! * [`strategies`]: greedy, lazy, block-colouring and the composed
//!   `O(log log n)` Claimer, plus a handful of Namers;
//! * [`cubes`]: Hilbert cubes, cube search, partition certification and tiny
//!   Hilbert-cube Ramsey numbers;
//! * [`solver`]: exact game values for small boards;
//! * [`experiments`]: batch simulation and bound checking;
//! * [`session`]: the message-level state machine behind live play.
//!
//! ```
//! use namer_claimer::{solver, PointSet};
//!
//! let report = solver::solve(8, solver::DEFAULT_STATE_CAP).unwrap();
//! assert_eq!(report.value, 3);
//! assert!(report.principal_line.is_valid());
//! # let _ = PointSet::full(8);
//! ```

mod autocorr;
pub mod cubes;
pub mod error;
pub mod experiments;
pub mod game;
pub mod pointset;
pub mod session;
pub mod solver;
pub mod strategies;

pub use error::{Error, Role};
pub use game::{play_game, Claimer, Namer, Position, Round, Transcript};
pub use pointset::{Distance, PointSet};
pub use strategies::StrategySpec;
