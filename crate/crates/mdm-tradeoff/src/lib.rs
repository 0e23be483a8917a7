//! Optimal trade-off between information gain and state disturbance for
//! partial measurements on `N` identical copies of a pure `d`-level state.
//!
//! A measurement on `N` copies that outputs a single approximate copy plus a
//! classical guess is scored by two mean fidelities: the output fidelity `F`
//! (how little the surviving copy was disturbed) and the estimation fidelity
//! `G` (how good the guess is). Quantum mechanics bounds the achievable
//! region by a trade-off curve; the maps saturating it are the minimal
//! disturbance measurements.
//!
//! The optimal covariant map is encoded by a Choi vector on the symmetric
//! subspace of the `N` inputs tensored with one output qudit. It is the top
//! eigenvector of `R_p = p R_F + (1-p) R_G`, where `R_F` is the partially
//! transposed symmetric projector on `N+1` qudits and `R_G` is its
//! estimation-side reduction. Sweeping the weight `p` traces the curve.
//!
//! Module map:
//!
//! - [`sym_basis`] — occupation-number basis of the symmetric subspace,
//!   branching from `N+1` to `N` copies, explicit tensor-space embedding.
//! - [`operators`] — dense construction of the projector, `R_F`, `R_G`, `R_p`.
//! - [`solver`] — dominant eigenpair extraction, Choi normalization,
//!   fidelity evaluation, trade-off sweeps.
//! - [`analytic`] — closed forms: the qubit trade-off curve, the qudit
//!   conjecture, qubit block spectra, parametric optimal maps.
//! - [`haar_mc`] — Monte Carlo oracle over Haar-random states and unitaries.
//! - [`cli`] — command runner producing CSV/JSON/SVG artifacts.
//!
//! Run `cargo run --example qubit_tradeoff` for a quick tour, or use the
//! `mdm-tradeoff` binary (`--command sweep|verify-qubit|verify-qudit|mc-check|figure`).

pub mod analytic;
pub mod cli;
pub mod haar_mc;
pub mod operators;
pub mod solver;
pub mod sym_basis;

pub use operators::SymOperator;
pub use solver::{ChoiVector, TradeoffPoint};
pub use sym_basis::{OccupationVector, SymBasis};

/// Errors across basis construction, operator assembly, solving and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("local dimension must be at least 2 (got {0})")]
    LevelsTooSmall(usize),

    #[error("need at least {min} copies (got {got})")]
    TooFewCopies { min: usize, got: usize },

    #[error("integer overflow computing a dimension for {copies} copies, {levels} levels")]
    DimensionOverflow { copies: usize, levels: usize },

    #[error("dense operator of side {dim} exceeds the construction limit {limit}")]
    SizeLimit { dim: usize, limit: usize },

    #[error("full tensor space of size {dim} exceeds the embedding limit {limit}")]
    EmbedLimit { dim: u128, limit: u128 },

    #[error("occupation vector with zero total cannot branch")]
    EmptyBranch,

    #[error("mixing weight p={0} outside [0,1]")]
    WeightOutOfRange(f64),

    #[error("estimation fidelity G={g} outside [{lo}, {hi}] for {copies} copies, {levels} levels")]
    FidelityDomain {
        g: f64,
        lo: f64,
        hi: f64,
        copies: usize,
        levels: usize,
    },

    #[error("alpha={0} outside [0,1]")]
    AlphaOutOfRange(f64),

    #[error("ansatz parameters violate alpha^2 + beta^2 = 1 (got {0})")]
    NotNormalized(f64),

    #[error("block index k={k} outside 1..={max}")]
    BlockIndex { k: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver did not converge within {0} iterations")]
    EigenConvergence(usize),

    #[error("degenerate top eigenvalue at interior p={p} (gap {gap:.3e})")]
    DegenerateSweepPoint { p: f64, gap: f64 },

    #[error("p grid must be sorted ascending and lie strictly inside (0,1)")]
    InvalidGrid,

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
