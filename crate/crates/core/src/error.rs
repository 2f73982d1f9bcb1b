use thiserror::Error;

use crate::grid::GridWitness;
use crate::mode::Mode;
use crate::scalar::Rational;
use crate::subset::{SubsetMask, SubsetWitness};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid number `{0}` (expected an integer, decimal or p/q rational)")]
    InvalidNumber(String),

    #[error("ground set size {d} out of range (at most {max})")]
    DimensionOutOfRange { d: usize, max: usize },

    #[error("mask {bits:#b} has bits outside the ground set [{d}]")]
    MaskOutOfRange { bits: u64, d: usize },

    #[error("element {element} is not in the ground set [{d}]")]
    ElementOutOfRange { element: usize, d: usize },

    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("value at index {index} is not finite")]
    NonFiniteValue { index: usize },

    #[error("difference set {alpha} overlaps base point {gamma}")]
    Overlap {
        alpha: SubsetMask,
        gamma: SubsetMask,
    },

    #[error("order k = {k} out of range 1..={max}")]
    OrderOutOfRange { k: usize, max: usize },

    #[error("no fully {k}-monotone table on [{d}] found within {attempts} attempts")]
    RejectionBudgetExhausted { d: usize, k: usize, attempts: usize },

    #[error("univariate map is undefined at table value {value}")]
    UndefinedComposition { value: String },

    #[error("scale factor c[{index}] = {value} is outside [0, 1]")]
    ScaleOutOfRange { index: usize, value: String },

    #[error("axis {axis}: {reason}")]
    InvalidAxis { axis: usize, reason: &'static str },

    #[error("grid dimension {dim} out of range 1..={max}")]
    GridDimension { dim: usize, max: usize },

    #[error("multi-index component n[{index}] = {value} exceeds cap {max}")]
    MultiIndexTooLarge {
        index: usize,
        value: usize,
        max: usize,
    },

    #[error("multi-index must be nonzero")]
    ZeroMultiIndex,

    #[error("step component h[{index}] is negative")]
    NegativeStep { index: usize },

    #[error("evaluation point for q = {q:?} is off the grid: {point:?}")]
    OffGrid { q: Vec<usize>, point: Vec<String> },

    #[error("point {point:?} is not on the grid")]
    PointOffGrid { point: Vec<String> },

    #[error("not a distribution function: {0}")]
    NotDistributionFunction(Box<GridWitness<String>>),

    #[error("normalization value is zero")]
    ZeroNormalization,

    #[error("function {function} takes value {value} outside [0, 1] at grid index {index}")]
    ValueOutsideUnitInterval {
        function: usize,
        index: usize,
        value: String,
    },

    #[error("function {function} is not defined on the shared grid")]
    GridMismatch { function: usize },

    #[error("expected {expected} component functions, found {found}")]
    FunctionCount { expected: usize, found: usize },

    #[error("index set must be nonempty")]
    EmptyIndexSet,

    #[error("vector {index} has length {found}, expected {expected}")]
    VectorLengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("certificate refused, table is not fully k-increasing: {0}")]
    CertificateRefused(Box<SubsetWitness<Rational>>),

    #[error("{what} = {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("mode {0} is not supported here")]
    UnsupportedMode(Mode),

    #[error("closure violated in trial {trial} (reproduce with seed {seed}): {witness}")]
    ClosureViolation {
        trial: usize,
        seed: u64,
        witness: String,
    },

    #[error("field `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
