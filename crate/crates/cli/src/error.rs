use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error(transparent)]
    Simulation(treeanneal::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<treeanneal::Error> for CliError {
    fn from(e: treeanneal::Error) -> Self {
        match e {
            treeanneal::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Simulation(other),
        }
    }
}

impl CliError {
    /// 2 for configuration errors, 3 for exceeded qubit budgets, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
