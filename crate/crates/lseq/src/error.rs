use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters L={l}, S={s}: need L >= 1 and L + S >= 2")]
    InvalidParams { l: u32, s: u32 },

    #[error("operands belong to different parameter sets: ({0}, {1}) vs ({2}, {3})")]
    ParamsMismatch(u32, u32, u32, u32),

    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },

    #[error("psi_{index} argument {value} lies outside the branch domain")]
    PsiDomain { index: u32, value: f64 },

    #[error("forbidden digit pair ({lower}, {upper})")]
    ForbiddenPair { lower: u32, upper: u32 },

    #[error("{n} is not admissible in base {base}")]
    Inadmissible { n: u128, base: u32 },

    #[error("refinement template must be a nontrivial partition")]
    TrivialTemplate,

    #[error("interval lengths must be positive and sum to 1")]
    InvalidPartition,

    #[error("point {0} lies outside [0, 1)")]
    PointOutOfRange(f64),

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("grid resolution {0} too coarse (need >= 1000)")]
    GridTooCoarse(u32),

    #[error("max depth {0} too small for a regime fit (need >= 5)")]
    DepthTooSmall(u32),

    #[error("cannot parse {input:?} as an exact value: {reason}")]
    Parse { input: String, reason: String },

    #[error("generator cannot produce {requested} points (has {available})")]
    NotEnoughPoints { requested: usize, available: usize },
}
