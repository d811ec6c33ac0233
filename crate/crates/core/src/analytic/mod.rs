//! Mordell sums, Mertens products and the Erdős sums built from them.

mod fkq;
mod irreducible_sum;
mod mertens;
mod mordell;

pub use fkq::{fkq, head_sum, tail_estimate, FkqEngine, SumResult};
pub use irreducible_sum::{erdos_sum_irreducibles, irreducible_head};
pub(crate) use mertens::mertens_log;
pub use mertens::{mertens_coefficient, mertens_product, MertensCoefficient};
pub use mordell::{
    mordell, mordell_base_exact, mordell_closed_form, MordellCache, MordellKey, MordellTable,
    MordellValue,
};
