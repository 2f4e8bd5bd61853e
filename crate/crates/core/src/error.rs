use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order {0} is invalid: circulant graphs need n >= 3")]
    OrderTooSmall(u64),

    #[error("order {n} exceeds the configured limit {max}")]
    OrderTooLarge { n: u64, max: u64 },

    #[error("jump {jump} reduces to 0 mod {n} (self-loop)")]
    SelfLoop { jump: i64, n: u64 },

    #[error("jump {jump} is outside [1, {half}] for order {n}")]
    JumpOutOfRange { jump: u64, n: u64, half: u64 },

    #[error("{x} is not a unit mod {n}")]
    NotAUnit { x: u64, n: u64 },

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: u64, right: u64 },

    #[error("m = {m} is not a valid theta modulus for n = {n} (need m > 1 and m^3 | n)")]
    InvalidThetaModulus { n: u64, m: u64 },

    #[error("shift t = {t} is outside [0, {max}]")]
    ShiftOutOfRange { t: u64, max: u64 },

    #[error("scale factor must be positive")]
    ZeroScale,

    #[error("invalid extension set: {0}")]
    InvalidExtension(String),

    #[error("pair is not Type-2 w.r.t. m = {m}")]
    NotType2 { m: u64 },

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("order {n} is above the brute-force oracle bound {bound}")]
    OracleBound { n: usize, bound: usize },

    #[error("subset scan needs floor(n/2) <= 63, got n = {0}")]
    ScanTooLarge(u64),

    #[error("{0} vertices vs {1} vertices")]
    VertexCountMismatch(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {count} malformed line(s): {details}")]
    Fixture {
        path: String,
        count: usize,
        details: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
