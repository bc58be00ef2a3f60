use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown mode label `{0}`")]
    UnknownMode(String),
    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),
    #[error("a mode basis needs at least one label")]
    EmptyBasis,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("cannot normalize the zero vector")]
    ZeroNorm,
    #[error("states live in different bases")]
    BasisMismatch,
    #[error("projector groups do not partition the basis: {0}")]
    NotPartition(String),
    #[error("mixture weights must be non-negative and sum to 1 (sum = {0})")]
    WeightSum(f64),
    #[error("basis is not a declared tensor product")]
    NotProductBasis,
    #[error("subsystem index {index} out of range for {count} factors")]
    SubsystemIndex { index: usize, count: usize },
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("density matrix violates {0}")]
    InvalidDensity(&'static str),
    #[error("element `{0}` needs two distinct modes")]
    IdenticalModes(String),
    #[error("missing polarization rail `{0}`")]
    MissingPolarization(String),
    #[error("mode map is not injective at `{0}`")]
    NonInjective(String),
    #[error("state has weight {0:e} outside the wave/particle sector")]
    NotExpressible(f64),
    #[error("photon count {0} outside 1..={max}", max = crate::entangle::MAX_PHOTONS)]
    PhotonCount(usize),
    #[error("distribution is not normalized (sum = {0})")]
    Unnormalized(f64),
    #[error("distribution has a negative entry ({0})")]
    NegativeProbability(f64),
    #[error("shot count must be positive")]
    ZeroShots,
    #[error("witness needs {needed} outcomes, table has {got}")]
    WitnessOutcomes { needed: usize, got: usize },
    #[error("β = {0} rad is not a validated measurement setting")]
    UnvalidatedBeta(f64),
    #[error("noise parameter `{0}` must lie in [0, 1]")]
    NoiseRange(&'static str),
    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
