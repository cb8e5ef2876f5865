//! Exact computations for sum-product problems on finite sets.
//!
//! Sets of rationals or of residues modulo a prime are built in [`setops`];
//! energies, moment sums and `T_k` live in [`energy`]; collinear-triple
//! counts on Cartesian grids in [`incidence`]; the eigenvalue machinery in
//! [`spectral`]; multiplicative subgroups of `F_p^*` in [`subgroups`]; test
//! families in [`families`]; and the inequality checks plus reports in
//! [`harness`].
//!
//! Everything that counts is exact. Floating point only enters through
//! `E_{3/2}`, character sums, eigenvalues and reported ratios.

pub mod energy;
pub mod families;
pub mod ground;
pub mod harness;
pub mod incidence;
pub mod setops;
pub mod spectral;
pub mod subgroups;

pub use ground::{Ground, GroundElement, GroundError, ModP, Rational, Universe};
pub use setops::{AnySet, CountTable, GSet};

/// A set of exact rationals.
pub type RationalSet = GSet<Rational>;
/// A set of residues modulo a prime.
pub type ResidueSet = GSet<ModP>;
/// Dense matrices of the spectral argument in double precision.
pub type EnergyMatrices = spectral::EnergyMatrices<f64>;
/// Spectral chain evaluated in double precision.
pub type SpectralChain = spectral::SpectralChain<f64>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("operands live in different universes ({0} vs {1})")]
    MixedKinds(Universe, Universe),
    #[error("sets may not contain 0")]
    ContainsZero,
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("{what}: size {size} exceeds guard {limit}")]
    TooLarge { what: &'static str, size: u128, limit: u128 },
    #[error("restricting set is not contained in A-A")]
    RestrictNotSubset,
    #[error("line coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("power iteration did not converge in {0} steps")]
    NoConvergence(usize),
    #[error("{t} does not divide {modulus_minus_one}")]
    OrderDoesNotDivide { t: u64, modulus_minus_one: u64 },
    #[error("cross-check mismatch in {what}: {left} vs {right}")]
    CrossCheckMismatch { what: &'static str, left: String, right: String },
    #[error("bad family spec: {0}")]
    BadSpec(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("input too small: {0}")]
    DegenerateInput(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by a size guard rather than bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: &'static str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::TooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

/// Serde adapter writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
