use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("base s must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("vertex ({level}, {index}) is not on the tree for s = {base}")]
    InvalidVertex { base: u32, level: u32, index: u64 },

    #[error("cannot lift a depth-{depth} cylinder function to depth {target}")]
    LiftBelowDepth { depth: u32, target: u32 },

    #[error("table of length {got} does not match s^depth = {expected}")]
    TableSize { expected: usize, got: usize },

    #[error("functions are defined over different bases ({0} vs {1})")]
    BaseMismatch(u32, u32),

    #[error("operators live on different spaces")]
    SpaceMismatch,

    #[error("level {level} is outside the truncation depth {depth}")]
    LevelOutOfRange { level: u32, depth: u32 },

    #[error("{what}: index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: u64,
        limit: u64,
    },

    #[error("sequence prefix of length {len} exceeds truncation depth {depth}")]
    PrefixTooLong { len: usize, depth: u32 },

    #[error("operation not defined for shift {0}")]
    UnsupportedShift(char),

    #[error("power iteration did not converge; last bracket [{lower}, {upper}]")]
    NormNotConverged { lower: f64, upper: f64 },

    #[error("line window [{lo}, {hi}] does not cover the tree embedding (needs hi >= {needed})")]
    WindowTooSmall { lo: i64, hi: i64, needed: i64 },

    #[error("line window overflow: requested exact column e_{0} leaves the window")]
    WindowOverflow(i64),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("infeasible parameters for `{check}`: {reason}")]
    Infeasible { check: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("cannot parse operator spec: {0}")]
    OpSpec(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
