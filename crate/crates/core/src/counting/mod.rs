//! Exact polynomial counts over `F_q`.

mod consistency;
mod irreducible;
mod oracle;
mod smooth;

pub use consistency::{oracle_consistency, OracleCheck};
pub use irreducible::{irreducible_count, irreducible_count_bounds, IrreducibleCountTable};
pub use oracle::{
    oracle_enumerate, oracle_enumerate_with_budget, FactorRecord, OracleFactorTable,
    DEFAULT_ORACLE_BUDGET, ORACLE_MAX_DEGREE, ORACLE_MAX_Q,
};
pub use smooth::{smooth_count, SmoothCountTable};
