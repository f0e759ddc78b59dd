//! Live games between a human and an engine strategy, driven by JSON messages.
//!
//! A [`Session`] is transport-agnostic: feed it a [`ClientMsg`] and send back
//! the [`ServerMsg`]s it returns. Illegal moves produce an error message and
//! leave the session untouched.
//!
//! ```
//! use namer_claimer::session::{ClientMsg, ServerMsg, Session};
//! use namer_claimer::Role;
//!
//! let (mut s, _) = Session::create("demo".into(), 8, Role::Namer, None, Some(0)).unwrap();
//! let out = s.handle(ClientMsg::Name { d: 1 });
//! assert_eq!(out[0], ServerMsg::Claimed { points: vec![1, 3, 5, 8] });
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Role};
use crate::game::{apply_round, check_claim, default_round_cap, Claimer, Namer, Position, Round, Transcript};
use crate::pointset::{Distance, PointSet};
use crate::solver::DEFAULT_STATE_CAP;
use crate::strategies::StrategySpec;

/// Largest board offered for live play.
pub const MAX_LIVE_BOARD: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ClientMsg {
    Create {
        n: i64,
        role: Role,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        engine: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Name {
        d: i64,
    },
    Claim {
        points: Vec<i64>,
    },
    /// Reattach to a session held by the server.
    Resume {
        id: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    AwaitingName,
    AwaitingClaim,
    Finished,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundView {
    pub d: usize,
    pub claimed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ServerMsg {
    State {
        id: String,
        n: usize,
        role: Role,
        engine: String,
        unclaimed: Vec<usize>,
        history: Vec<RoundView>,
        phase: Phase,
        /// The distance the human must answer while awaiting a claim.
        #[serde(skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
    },
    Named {
        d: usize,
    },
    Claimed {
        points: Vec<usize>,
    },
    End {
        rounds: usize,
    },
    Error {
        code: String,
        detail: String,
    },
}

impl ServerMsg {
    pub fn error(code: &str, detail: impl Into<String>) -> Self {
        ServerMsg::Error {
            code: code.into(),
            detail: detail.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self, ServerMsg::Error { .. })
    }
}

enum Engine {
    Namer(Box<dyn Namer + Send>),
    Claimer(Box<dyn Claimer + Send>),
}

/// Engine used when the client does not pick one.
pub fn default_engine(n: usize, engine_role: Role) -> StrategySpec {
    match engine_role {
        _ if n <= DEFAULT_STATE_CAP => StrategySpec::Optimal,
        Role::Namer => StrategySpec::Greedy,
        Role::Claimer => StrategySpec::Composed { k: None, seed: None },
    }
}

/// Round cap for live play. An empty claim is legal, so a human Claimer
/// could otherwise stall forever.
pub fn live_round_cap(n: usize) -> usize {
    n + default_round_cap(n)
}

pub struct Session {
    id: String,
    human: Role,
    engine_spec: StrategySpec,
    engine: Engine,
    unclaimed: PointSet,
    history: Transcript,
    phase: Phase,
    pending: Option<Distance>,
}

impl Session {
    /// Opens a session and returns it with the opening messages.
    /// On bad parameters the error message to send back is returned instead.
    pub fn create(
        id: String,
        n: i64,
        human: Role,
        engine: Option<&str>,
        seed: Option<u64>,
    ) -> Result<(Session, Vec<ServerMsg>), ServerMsg> {
        if !(1..=MAX_LIVE_BOARD as i64).contains(&n) {
            return Err(ServerMsg::error(
                "bad_request",
                format!("board size must be between 1 and {MAX_LIVE_BOARD}, got {n}"),
            ));
        }
        let n = n as usize;
        let engine_role = match human {
            Role::Namer => Role::Claimer,
            Role::Claimer => Role::Namer,
        };
        let spec = match engine {
            Some(text) => text
                .parse::<StrategySpec>()
                .map_err(|e| ServerMsg::error("bad_request", e.to_string()))?,
            None => default_engine(n, engine_role),
        };
        let seed = seed.unwrap_or_else(rand::random);
        let built = match engine_role {
            Role::Namer => spec.namer(n, seed).map(Engine::Namer),
            Role::Claimer => spec.claimer(n, seed).map(Engine::Claimer),
        };
        let engine = built.map_err(|e| ServerMsg::error("bad_request", e.to_string()))?;
        let mut s = Session {
            id,
            human,
            engine_spec: spec,
            engine,
            unclaimed: PointSet::full(n),
            history: Transcript::new(n),
            phase: Phase::AwaitingName,
            pending: None,
        };
        let mut out = Vec::new();
        if human == Role::Claimer {
            s.engine_names(&mut out)?;
        }
        out.push(s.state());
        Ok((s, out))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn n(&self) -> usize {
        self.history.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn human_role(&self) -> Role {
        self.human
    }

    pub fn engine_spec(&self) -> &StrategySpec {
        &self.engine_spec
    }

    pub fn unclaimed(&self) -> &PointSet {
        &self.unclaimed
    }

    pub fn transcript(&self) -> &Transcript {
        &self.history
    }

    pub fn state(&self) -> ServerMsg {
        ServerMsg::State {
            id: self.id.clone(),
            n: self.n(),
            role: self.human,
            engine: self.engine_spec.to_string(),
            unclaimed: self.unclaimed.to_vec(),
            history: self
                .history
                .rounds
                .iter()
                .map(|r| RoundView {
                    d: r.d.get(),
                    claimed: r.claimed.to_vec(),
                })
                .collect(),
            phase: self.phase,
            d: self.pending.map(Distance::get),
        }
    }

    /// Processes one client move. `create` and `resume` belong to the
    /// connection layer and are answered with `wrong_phase` here.
    pub fn handle(&mut self, msg: ClientMsg) -> Vec<ServerMsg> {
        let result = match msg {
            ClientMsg::Name { d } => self.human_names(d),
            ClientMsg::Claim { points } => self.human_claims(&points),
            ClientMsg::Create { .. } | ClientMsg::Resume { .. } => Err(ServerMsg::error(
                "wrong_phase",
                "this connection already has a session",
            )),
        };
        result.unwrap_or_else(|e| vec![e])
    }

    fn expect_phase(&self, want: Phase, what: &str) -> Result<(), ServerMsg> {
        if self.phase == want {
            return Ok(());
        }
        let why = match self.phase {
            Phase::Finished => "the game is over".to_string(),
            _ if self.human == Role::Namer => "you play Namer; send a name message".to_string(),
            _ => "you play Claimer; send a claim message".to_string(),
        };
        Err(ServerMsg::error("wrong_phase", format!("cannot {what}: {why}")))
    }

    fn human_names(&mut self, d: i64) -> Result<Vec<ServerMsg>, ServerMsg> {
        self.expect_phase(Phase::AwaitingName, "name a distance")?;
        let d = usize::try_from(d)
            .ok()
            .and_then(|d| Distance::new(d, self.n()).ok())
            .ok_or_else(|| {
                ServerMsg::error(
                    "illegal_distance",
                    format!("d must be between 1 and {}, got {d}", crate::pointset::max_distance(self.n())),
                )
            })?;
        let Engine::Claimer(claimer) = &mut self.engine else {
            unreachable!("human Namer faces an engine Claimer");
        };
        let pos = Position {
            n: self.history.n,
            unclaimed: &self.unclaimed,
            history: &self.history.rounds,
        };
        let claim = claimer
            .claim(&pos, d)
            .and_then(|c| apply_round(&self.unclaimed, d, &c).map(|a| (c, a)))
            .map_err(|e| engine_fault(Role::Claimer, e))?;
        let mut out = vec![ServerMsg::Claimed { points: claim.0.to_vec() }];
        self.record(d, claim.0, claim.1);
        self.close_or_continue(&mut out)?;
        Ok(out)
    }

    fn human_claims(&mut self, points: &[i64]) -> Result<Vec<ServerMsg>, ServerMsg> {
        self.expect_phase(Phase::AwaitingClaim, "claim")?;
        let d = self.pending.expect("a distance is pending while awaiting a claim");
        let illegal = |detail: String| ServerMsg::error("illegal_claim", detail);
        let mut claim = PointSet::empty(self.n());
        for &p in points {
            let x = usize::try_from(p)
                .ok()
                .filter(|x| (1..=self.n()).contains(x))
                .ok_or_else(|| illegal(format!("{p} is not a point of the board")))?;
            claim.insert(x);
        }
        check_claim(&self.unclaimed, d, &claim).map_err(|e| illegal(e.to_string()))?;
        let next = self.unclaimed.difference(&claim);
        self.record(d, claim, next);
        let mut out = Vec::new();
        self.close_or_continue(&mut out)?;
        Ok(out)
    }

    fn record(&mut self, d: Distance, claimed: PointSet, next: PointSet) {
        self.history.rounds.push(Round { d, claimed });
        self.unclaimed = next;
        self.pending = None;
    }

    fn close_or_continue(&mut self, out: &mut Vec<ServerMsg>) -> Result<(), ServerMsg> {
        let capped = self.history.len() >= live_round_cap(self.n());
        if self.unclaimed.is_empty() || capped {
            self.phase = Phase::Finished;
            self.history.terminal = self.unclaimed.is_empty();
            out.push(self.state());
            out.push(ServerMsg::End { rounds: self.history.len() });
            return Ok(());
        }
        match self.human {
            Role::Namer => self.phase = Phase::AwaitingName,
            Role::Claimer => self.engine_names(out)?,
        }
        out.push(self.state());
        Ok(())
    }

    fn engine_names(&mut self, out: &mut Vec<ServerMsg>) -> Result<(), ServerMsg> {
        let Engine::Namer(namer) = &mut self.engine else {
            unreachable!("human Claimer faces an engine Namer");
        };
        let pos = Position {
            n: self.history.n,
            unclaimed: &self.unclaimed,
            history: &self.history.rounds,
        };
        let d = namer
            .name(&pos)
            .and_then(|d| Distance::new(d.get(), pos.n))
            .map_err(|e| engine_fault(Role::Namer, e))?;
        self.pending = Some(d);
        self.phase = Phase::AwaitingClaim;
        out.push(ServerMsg::Named { d: d.get() });
        Ok(())
    }
}

fn engine_fault(role: Role, e: Error) -> ServerMsg {
    ServerMsg::error("engine_fault", format!("engine {role} failed: {e}"))
}

/// Parses a client text frame, mapping malformed input to a `bad_message` error.
pub fn parse_client(text: &str) -> Result<ClientMsg, ServerMsg> {
    serde_json::from_str(text).map_err(|e| ServerMsg::error("bad_message", e.to_string()))
}
