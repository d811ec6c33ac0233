//! Certified Erdős sums over `F_q[x]`.
//!
//! Exact counts of irreducible and `k`-factor monic polynomials, interval
//! enclosures of the sums `sum 1/(deg f * q^deg f)` over those sets, and the
//! closed-form bounds and claim checkers built on top of them.

pub mod analytic;
pub mod bounds;
pub mod counting;
pub mod error;
pub mod exact;
pub mod numerics;

pub use analytic::{
    erdos_sum_irreducibles, fkq, head_sum, mertens_coefficient, mertens_product, mordell,
    tail_estimate, FkqEngine, MordellCache, MordellKey, MordellValue, SumResult,
};
pub use bounds::{Comparison, Verdict};
pub use counting::{irreducible_count, smooth_count, IrreducibleCountTable, SmoothCountTable};
pub use error::{Error, Limit, Result};
pub use exact::{binomial_shifted, divisors, harmonic, moebius, validate_field_order, FieldOrder};
pub use numerics::{
    dilog, enclosure_arith, euler_gamma, zeta_int, Enclosure, EnclosureOp, PrecisionConfig,
};
