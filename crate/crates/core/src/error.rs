use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{op}: argument {value} is outside the domain")]
    Domain { op: &'static str, value: f64 },

    #[error("{op} produced a non-finite result")]
    NonFinite { op: &'static str },

    #[error("non-finite input")]
    NonFiniteInput,

    #[error("constraint violated: {0}")]
    ConstraintViolation(&'static str),

    #[error("inputs must be positive, got u={u}, v={v}")]
    NonPositiveInput { u: f64, v: f64 },

    #[error("elasticity is undefined at this point (vanishing denominator)")]
    SingularPoint,

    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),

    #[error("stencil point ({u}, {v}) leaves the model domain")]
    StencilOutOfDomain { u: f64, v: f64 },
}
