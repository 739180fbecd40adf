use std::fmt;

use radial_gate_core::Error as CoreError;

/// Exit codes, also listed in `--help`.
pub const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  I/O failure (reading a table, writing output)
  2  invalid arguments or problem parameters
  3  potential not regular at the origin (r^2 V does not vanish)
  4  epsilon extrapolation did not converge
  5  verification finished but a result is outside tolerance
  6  no energy bracket for a requested level
  7  ODE step size underflow
  8  ill-conditioned probe basis
  9  other numerical failure

Errors are reported on standard error as a single JSON line:
  {\"error\":{\"code\":N,\"kind\":\"...\",\"message\":\"...\"}}

Environment:
  RADIAL_GATE_THREADS  maximum worker threads (default: all cores)";

#[derive(Debug)]
pub enum CliError {
    Args(String),
    Io(String),
    Core(CoreError),
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Args(_) => 2,
            CliError::Verification(_) => 5,
            CliError::Core(e) => match e {
                CoreError::InvalidProblem(_)
                | CoreError::InvalidPotential(_)
                | CoreError::UnreducibleWeight { .. }
                | CoreError::InsufficientDerivativeOrder { .. } => 2,
                CoreError::IrregularPotential => 3,
                CoreError::NonConvergent { .. } => 4,
                CoreError::NoBracket { .. } => 6,
                CoreError::StiffnessFailure { .. } => 7,
                CoreError::IllConditionedBasis { .. } => 8,
                CoreError::Domain { .. } => 9,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.code() {
            1 => "io",
            2 => "invalid_arguments",
            3 => "irregular_potential",
            4 => "non_convergent",
            5 => "verification_failed",
            6 => "no_bracket",
            7 => "stiffness_failure",
            8 => "ill_conditioned_basis",
            _ => "numerical_failure",
        }
    }

    /// The one-line JSON report for standard error.
    pub fn report(&self) -> String {
        let message = self.to_string().replace(['\n', '\r'], " ");
        serde_json::json!({ "error": { "code": self.code(), "kind": self.kind(), "message": message } })
            .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Args(m) | CliError::Io(m) | CliError::Verification(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}
