use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("F_{0} is too large for table arithmetic")]
    FieldTooLarge(u32),
    #[error("degree {sub} does not divide degree {ext}")]
    DegreeMismatch { sub: u32, ext: u32 },
    #[error("only {available} monic irreducibles of degree {degree} exist, {requested} requested")]
    NotEnoughIrreducibles { degree: u32, available: u64, requested: u64 },
    #[error("polynomial is not irreducible")]
    Reducible,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("map is not surjective: rank {rank} < {target}")]
    NotSurjective { rank: usize, target: usize },
    #[error("map is not injective: rank {rank} < {cols}")]
    NotInjective { rank: usize, cols: usize },
    #[error("characteristic 2 is not supported here")]
    CharacteristicTwo,
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("base field mismatch: {0}")]
    BaseMismatch(String),
    #[error("map is not an algebra morphism on basis pair ({0}, {1})")]
    NotMorphism(usize, usize),
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
    #[error("pole order violated: valuation {valuation} < -{shift}")]
    PoleOrder { valuation: i64, shift: i64 },
    #[error("point is not on the curve")]
    OffCurve,
    #[error("singular Weierstrass equation")]
    Singular,
    #[error("no curve over F_{q} with trace {t}")]
    NoCurve { q: u32, t: i64 },
    #[error("no closed point of degree {0} found")]
    NoPoint(u32),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("not enough points: {0}")]
    InsufficientPoints(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
