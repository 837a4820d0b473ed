use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped by the module that raises them; `kind()` gives a
/// stable machine-readable name used in JSON error objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // scalars
    #[error("division by zero")]
    DivisionByZero,
    #[error("field descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("field too large to enumerate: {size} elements exceeds cap {cap}")]
    FieldTooLarge { size: u128, cap: u128 },
    #[error("element is not algebraic with a supported relation: {0}")]
    NotAlgebraic(String),
    #[error("no primitive {order}-th root of unity in {field}")]
    RootOfUnityMissing { order: u64, field: String },
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    // lattice
    #[error("matrix is not invertible over Z")]
    NotUnimodular,
    #[error("invalid modulus {0}; must be at least 2")]
    InvalidModulus(String),
    #[error("group closure exceeded cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    // torus
    #[error("coset is not invariant under the group action")]
    NotInvariant,
    #[error("torus is not anisotropic")]
    NotAnisotropic,
    #[error("element has order {actual}, expected {expected}")]
    OrderMismatch { expected: String, actual: String },
    #[error("group must have at least two elements")]
    TrivialGroup,
    #[error("permutation generators do not define a regular action: {0}")]
    NotRegular(String),
    #[error("characteristic {p} divides {d}")]
    CharDividesOrder { p: u64, d: u64 },

    // pairing
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("group of order {order} exceeds enumeration cap {cap}")]
    GroupTooLarge { order: u128, cap: u128 },
    #[error("commutator is not a scalar: {0}")]
    CommutatorNotScalar(String),

    // csa
    #[error("algebra spec mismatch")]
    SpecMismatch,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("prime {0} too large for explicit matrix verification")]
    PrimeTooLarge(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,

    // quadform
    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("operation requires characteristic different from 2")]
    CharTwo,
    #[error("wrong characteristic: {0}")]
    WrongCharacteristic(String),
    #[error("isometry does not have order p: {0}")]
    NotOrderP(String),
    #[error("matrix is not an isometry: {0}")]
    NotIsometry(String),
    #[error("element is not diagonalizable over the base field")]
    NotDiagonalizable,
    #[error("order exceeds bound: {0}")]
    OrderExceedsBound(String),
    #[error("parameter k = {k} out of range: {reason}")]
    KOutOfRange { k: usize, reason: String },
    #[error("candidate point is identically zero")]
    AllZeroCandidate,
    #[error("internal consistency alarm: {0}")]
    ConsistencyAlarm(String),

    // bounds
    #[error("unknown Dynkin type {0}")]
    UnknownType(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    // replay / io
    #[error("unknown example id `{0}`")]
    UnknownExampleId(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::DescriptorMismatch { .. } => "DescriptorMismatch",
            Error::InvalidDescriptor(_) => "InvalidDescriptor",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::NotAlgebraic(_) => "NotAlgebraic",
            Error::RootOfUnityMissing { .. } => "RootOfUnityMissing",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::NotUnimodular => "NotUnimodular",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::ClosureCapExceeded { .. } => "ClosureCapExceeded",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotInvariant => "NotInvariant",
            Error::NotAnisotropic => "NotAnisotropic",
            Error::OrderMismatch { .. } => "OrderMismatch",
            Error::TrivialGroup => "TrivialGroup",
            Error::NotRegular(_) => "NotRegular",
            Error::CharDividesOrder { .. } => "CharDividesOrder",
            Error::InvalidPairing(_) => "InvalidPairing",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::CommutatorNotScalar(_) => "CommutatorNotScalar",
            Error::SpecMismatch => "SpecMismatch",
            Error::NotInvertible => "NotInvertible",
            Error::PrimeTooLarge(_) => "PrimeTooLarge",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::DegenerateForm => "DegenerateForm",
            Error::CharTwo => "CharTwo",
            Error::WrongCharacteristic(_) => "WrongCharacteristic",
            Error::NotOrderP(_) => "NotOrderP",
            Error::NotIsometry(_) => "NotIsometry",
            Error::NotDiagonalizable => "NotDiagonalizable",
            Error::OrderExceedsBound(_) => "OrderExceedsBound",
            Error::KOutOfRange { .. } => "KOutOfRange",
            Error::AllZeroCandidate => "AllZeroCandidate",
            Error::ConsistencyAlarm(_) => "ConsistencyAlarm",
            Error::UnknownType(_) => "UnknownType",
            Error::MissingParameter(_) => "MissingParameter",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::UnknownExampleId(_) => "UnknownExampleId",
            Error::Schema { .. } => "SchemaError",
        }
    }

    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { path: path.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
