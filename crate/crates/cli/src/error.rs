//! Exit-code classification of failures.

use inthull::census::CensusError;
use inthull::families::FamilyError;
use inthull::hull::HullError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bound violation: {0}")]
    Violation(String),
    #[error("{0}")]
    Input(String),
    #[error("resource cap: {0}")]
    Cap(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl From<HullError> for CliError {
    fn from(e: HullError) -> Self {
        match e {
            HullError::CapExceeded { .. } | HullError::Unstable { .. } | HullError::CoordinateOverflow => {
                CliError::Cap(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Hull(h) => h.into(),
            FamilyError::EnsembleTooLarge { .. } => CliError::Cap(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Family(f) => f.into(),
            CensusError::Hull(h) => h.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}
