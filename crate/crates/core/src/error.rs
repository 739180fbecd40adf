use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{function} is singular at x = {x}")]
    Domain { function: &'static str, x: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("potential is not regular at the origin (r^2 V(r) does not vanish)")]
    IrregularPotential,

    #[error("weight r^{r_power} e^({harmonic} i phi) is not a polynomial and cannot be reduced")]
    UnreducibleWeight { r_power: u32, harmonic: i32 },

    #[error("probe provides derivatives to order {available}, {needed} required")]
    InsufficientDerivativeOrder { needed: u32, available: u32 },

    #[error(
        "epsilon extrapolation did not settle: dispersion {dispersion:e} > tolerance {tolerance:e}"
    )]
    NonConvergent { dispersion: f64, tolerance: f64 },

    #[error("probe basis is ill-conditioned (condition number {condition:e})")]
    IllConditionedBasis { condition: f64 },

    #[error("ODE step size underflow at r = {r:e}")]
    StiffnessFailure { r: f64 },

    #[error("no energy bracket for level {level} below {ceiling:e}")]
    NoBracket { level: usize, ceiling: f64 },
}
