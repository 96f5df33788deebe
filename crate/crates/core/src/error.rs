use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix has rank {rank}, expected full row rank {rows}")]
    NotFullRank { rank: usize, rows: usize },
    #[error("gcd of maximal minors is {0}, lattice is not saturated")]
    NonPrimitive(String),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("sample system has rank {rank} but {needed} monomials")]
    RankDeficient { rank: usize, needed: usize },
    #[error("samples are not values of a homogeneous polynomial of degree {0}")]
    Inconsistent(usize),
    #[error("polyhedron is empty")]
    InfeasibleSlice,
    #[error("degree vector is not generic: {0}")]
    NonGenericTheta(String),
    #[error("psi is degenerate: {0}")]
    DegeneratePsi(String),
    #[error("negative Betti number b_{index} = {value}")]
    NegativeBetti { index: usize, value: i64 },
    #[error("region is unbounded")]
    UnboundedRegion,
    #[error("direction vector is not generic: {0}")]
    NonGenericDirection(String),
    #[error("row {0} of B is zero (a_{0} is a coloop direction); hyperkähler data requires loop-free B")]
    LoopPresent(usize),
    #[error("edge {0} is a self-loop (a_{0} = 0, a coloop of the row matroid of B)")]
    ColoopEdge(usize),
    #[error("volume samples left the chamber for region {0}")]
    ChamberCrossed(usize),
    #[error("annihilator mismatch in degree {degree}: {detail}")]
    AnnihilatorMismatch { degree: usize, detail: String },
    #[error("polynomial is not annihilated by the circuit forms")]
    NotInImage,
    #[error("multiplication map into degree {degree} is not injective")]
    NotInjective { degree: usize, witness: Vec<String> },
    #[error("Lefschetz class is not generic")]
    NonGenericD,
    #[error("edge set is not a spanning tree")]
    NotASpanningTree,
    #[error("quiver is disconnected")]
    Disconnected,
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unimodularity criteria disagree: A-minors say {a_side}, B-minors say {b_side}")]
    CriterionMismatch { a_side: bool, b_side: bool },
}

pub type Result<T> = std::result::Result<T, Error>;
