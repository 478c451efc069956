use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bracket [b{i}, b{j}] leaves the span of the basis")]
    NotClosed { i: usize, j: usize },

    #[error("basis matrices are linearly dependent (rank {rank} < {dim})")]
    DependentBasis { rank: usize, dim: usize },

    #[error("matrix of size {rows}x{cols} is not square or does not match the basis size")]
    ShapeMismatch { rows: usize, cols: usize },

    #[error("structure constants violate {0}")]
    InvalidStructure(&'static str),

    #[error("restriction of the bilinear form to the subalgebra is degenerate")]
    DegenerateRestriction,

    #[error("form degree {0} exceeds the coframe rank {1}")]
    DegreeOverflow(usize, usize),

    #[error("value spaces differ: {0} vs {1}")]
    AlgebraMismatch(String, String),

    #[error(
        "[θ⊥, θ⊥] has a component outside the subalgebra on coframe pair ({i}, {j}), ambient basis element {component}"
    )]
    PreconditionViolated {
        i: usize,
        j: usize,
        component: usize,
    },

    #[error("map does not take values in the declared group: {0}")]
    NotInGroup(String),

    #[error("linear system is singular")]
    SingularSystem,

    #[error("metric is not orthonormalizable over the chosen scalars: {0}")]
    NotOrthonormalizable(String),

    #[error("Chern-Simons form has non-constant coefficients")]
    NotInvariant,

    #[error("grid refinement did not converge: last difference {last:e} exceeds previous {previous:e}")]
    NonConvergent { last: f64, previous: f64 },

    #[error("cannot evaluate integrand: {0}")]
    Evaluation(String),

    #[error("unknown Lie algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("`{0}` is out of scope")]
    OutOfScope(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
