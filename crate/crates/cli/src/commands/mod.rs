pub mod evolve;
pub mod f0;
pub mod hardy;
pub mod profile;
pub mod shoot;
pub mod smooth;
pub mod spectrum;
pub mod verify;

use crate::CliError;

pub(crate) fn run_err(e: impl std::fmt::Display) -> CliError {
    CliError::Run(e.to_string())
}
