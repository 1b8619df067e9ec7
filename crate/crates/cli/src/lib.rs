//! Command line front end for `swcalc-core`: subcommands, the persistent
//! result cache and the verification suites.

pub mod cache;
pub mod commands;
pub mod verify;

pub use cache::Cache;
pub use commands::{execute, run, Format, Globals, Request, SqRing, SwTarget};
pub use verify::{Suite, VerifyReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] swcalc_core::Error),

    #[error("{0}")]
    Usage(String),

    /// The report is still printed; the run exits with status 1.
    #[error("{failed} check(s) failed")]
    Verification { failed: usize, report: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 usage error, 3 resource budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => commands::classify(e),
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Verification { .. } => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use swcalc_core::Error;

    #[test]
    fn exit_code_classes() {
        let mismatch = Error::ReferenceMismatch {
            what: "x".into(),
            expected: "1".into(),
            computed: "0".into(),
        };
        assert_eq!(CliError::from(mismatch).exit_code(), 1);
        assert_eq!(CliError::from(Error::Underdetermined { free: vec![] }).exit_code(), 1);
        let budget = Error::BudgetExceeded {
            what: "x".into(),
            limit: 1,
        };
        assert_eq!(CliError::from(budget).exit_code(), 3);
        assert_eq!(CliError::from(Error::NotHomogeneous).exit_code(), 2);
        assert_eq!(CliError::Usage("bad".into()).exit_code(), 2);
        assert_eq!(
            CliError::Verification {
                failed: 1,
                report: String::new()
            }
            .exit_code(),
            1
        );
    }
}
