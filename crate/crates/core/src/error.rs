//! Error type shared by all modules of the crate.

/// Unified error type for every fallible operation in the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Matrix inversion requested for a (near-)singular matrix.
    #[error("matrix is singular (det = {det:e})")]
    Singular { det: f64 },

    /// Eigendecomposition requested for a matrix that is not symmetric.
    #[error("matrix is not symmetric (asymmetry {asymmetry:e} exceeds 1e-10)")]
    NotSymmetric { asymmetry: f64 },

    /// A scalar parameter is outside its admissible range.
    #[error("parameter {name} out of range (got {value})")]
    BadParams { name: &'static str, value: f64 },

    /// A variant index outside 1..=6, or indices that must differ coincide.
    #[error("invalid variant index {index}; expected 1..=6, pairwise distinct")]
    BadVariantIndex { index: u8 },

    /// The twinning equation has no solution for the given pair of wells.
    #[error("variant pair admits no twin (middle eigenvalue of C is {mid_eig}, not 1)")]
    NoTwin { mid_eig: f64 },

    /// The two wells coincide; the twinning equation degenerates.
    #[error("wells coincide; twinning equation is degenerate")]
    Degenerate,

    /// No 180-degree rotation of the point group relates the two variants.
    #[error("variants are not related by a 180-degree rotation of the point group")]
    NotTwinRelated,

    /// A pair expected to admit a Type-II twin solution does not.
    #[error("variant pair ({i}, {j}) admits no Type-II twin solution")]
    NoTypeII { i: u8, j: u8 },

    /// A pair expected to be compound-related is not.
    #[error("variant pair ({i}, {j}) is not compound-related")]
    NotCompound { i: u8, j: u8 },

    /// No compound counterpart assignment exists for the given Type-II pair.
    #[error("no compound counterpart pair found for ({a}, {b})")]
    NoCounterpart { a: u8, b: u8 },

    /// No combination of compound solutions shares a twin-plane normal.
    #[error("no compound solution combination shares a twin-plane normal")]
    NoSharedNormal,

    /// Rank-one connection requested for a non-invertible gradient.
    #[error("deformation gradient is not invertible (det = {det})")]
    NotInvertible { det: f64 },

    /// Rank-one connection requested for a pure rotation.
    #[error("deformation gradient is a rotation; no interface normal exists")]
    IsRotation,

    /// The classical austenite-martensite interface does not exist.
    #[error("no classical interface: {reason}")]
    NoClassical { reason: &'static str },

    /// No selection of twin solutions satisfies the parallelogram
    /// compatibility condition.
    #[error("parallelogram assembly incompatible (best residual {residual:e})")]
    Incompatible { residual: f64 },

    /// The branch-equation denominator vanishes at the given compound fraction.
    #[error("branch denominator vanishes at Lambda = {capital_lambda}")]
    DenominatorVanishes { capital_lambda: f64 },

    /// A certified branch point unexpectedly lost its rank-one connection.
    #[error(
        "no rank-one connection at branch point (lambda = {lambda}, Lambda = {capital_lambda})"
    )]
    NoInterface { lambda: f64, capital_lambda: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
