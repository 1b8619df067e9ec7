use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("exponent exceeds {max} in {context}")]
    ExponentOverflow { max: u32, context: String },

    #[error("degree overflow")]
    DegreeOverflow,

    #[error("ring has {count} generators, at most {max} are supported")]
    TooManyGenerators { count: usize, max: usize },

    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("not divisible: remainder {remainder}")]
    NotDivisible { remainder: String },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("input is not symmetric; residue {residue}")]
    NotSymmetric { residue: String },

    #[error("term budget of {limit} exceeded while computing {what}")]
    BudgetExceeded { what: String, limit: usize },

    #[error("linear system is inconsistent: {detail}")]
    Inconsistent { detail: String },

    #[error("linear system is underdetermined; free unknowns: {}", free.join(", "))]
    Underdetermined { free: Vec<String> },

    #[error("{what} disagrees with the reference value\n  expected: {expected}\n  computed: {computed}")]
    ReferenceMismatch {
        what: String,
        expected: String,
        computed: String,
    },

    #[error("class w_{degree} is not known for {table}")]
    MissingClass { table: String, degree: u32 },

    #[error("homomorphism {name} is not well defined: relation {relation} maps to {image}")]
    NotWellDefined {
        name: String,
        relation: String,
        image: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),
}
