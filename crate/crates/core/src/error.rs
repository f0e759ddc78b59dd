use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("distance {d} is not in [1, {}] for n = {n}", crate::pointset::max_distance(*n))]
    InvalidDistance { d: usize, n: usize },

    #[error("point {point} is outside the board [1, {n}]")]
    PointOutOfRange { point: usize, n: usize },

    #[error("illegal claim: {0}")]
    IllegalClaim(String),

    #[error("{role} strategy fault in round {round}: {reason}")]
    StrategyFault {
        role: Role,
        round: usize,
        reason: String,
    },

    #[error("no move available: {0}")]
    NoMove(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("strategy invariant violated: {0}")]
    Invariant(String),

    #[error("invalid strategy spec {spec:?}: {reason}")]
    BadSpec { spec: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Namer,
    Claimer,
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Role::Namer => "namer",
            Role::Claimer => "claimer",
        })
    }
}
