use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("subgroup enumeration too large: group order {order} exceeds cap {cap}")]
    EnumerationTooLarge { order: usize, cap: usize },

    #[error("truncation level {level} is inadmissible for fold {fold} (need 2*{fold} | {level})")]
    InadmissibleLevel { fold: usize, level: usize },

    #[error("truncation instability: {0}; retry with a larger base level")]
    Instability(String),

    #[error("class escape: product produced classes outside the working set: {}", .0.join(", "))]
    ClassEscape(Vec<String>),

    #[error("inconsistent degree data at class {class}: {numerator} is not divisible by |W| = {weyl}")]
    InconsistentDegree { class: String, numerator: i64, weyl: i64 },

    #[error("incomplete isotropy lattice: {0}")]
    IncompleteLattice(String),

    #[error("sign not certifiable at working precision: {0}")]
    Precision(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("unsupported group shape: {0}")]
    UnsupportedGroup(String),

    #[error("gradient singular at the origin: {0}")]
    Singularity(String),

    #[error("(eta5) violated: vanishing gradient on the boundary at theta = {0}")]
    VanishingGradient(f64),

    #[error("domain is not star-shaped along theta = {0}")]
    NotStarShaped(f64),

    #[error("configuration invalid:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),
}
