use rug::Integer;

use crate::error::{Error, Result};
use crate::exact::FieldOrder;
use crate::numerics::{dilog, zeta_int, Enclosure, PrecisionConfig};

/// `sqrt(q) / (q - 1)`.
pub(crate) fn root_ratio(q: u64, prec: u32) -> Result<Enclosure> {
    Enclosure::from_u64(q, prec).sqrt()?.div_u64(q - 1)
}

/// `log(q / (q - 1)) = -log(1 - 1/q)`.
pub(crate) fn log_ratio(q: u64, prec: u32) -> Result<Enclosure> {
    Ok(
        Enclosure::from_ratio(&Integer::from(-1), &Integer::from(q), prec)?
            .ln_1p()?
            .neg(),
    )
}

/// `(zeta(2) - q/(q-1) Li_2(q^{-1/2}), zeta(2))`, the bracket on `F(I_q)`.
pub fn irreducible_sum_bounds(
    q: FieldOrder,
    cfg: &PrecisionConfig,
) -> Result<(Enclosure, Enclosure)> {
    Ok((irreducible_lower(q.q(), cfg)?, zeta_int(2, cfg)?))
}

pub(crate) fn irreducible_lower(q: u64, cfg: &PrecisionConfig) -> Result<Enclosure> {
    let prec = cfg.bits();
    let x = Enclosure::from_u64(q, prec).sqrt()?.recip()?;
    let li = dilog(&x, cfg)?
        .mul_integer(&Integer::from(q))
        .div_u64(q - 1)?;
    Ok(zeta_int(2, cfg)?.sub(&li))
}

pub(crate) fn k2_upper(q: u64, cfg: &PrecisionConfig) -> Result<Enclosure> {
    let x = Enclosure::from_ratio(&Integer::from(1), &Integer::from(q), cfg.bits())?;
    Ok(zeta_int(3, cfg)?.add(&dilog(&x, cfg)?.div_u64(2)?))
}

/// Upper bound on `F(I_{k,q})`: `zeta(3) + Li_2(1/q)/2` for `k = 2`,
/// `zeta(k+1) + log(q/(q-1)) zeta(k-1)` for `k >= 3`.
pub fn fkq_upper_bound(q: FieldOrder, k: u32, cfg: &PrecisionConfig) -> Result<Enclosure> {
    let prec = cfg.bits();
    match k {
        0 | 1 => Err(Error::Domain(format!(
            "the upper bound needs k >= 2, got {k}; use irreducible_sum_bounds for k = 1"
        ))),
        2 => k2_upper(q.q(), cfg),
        _ => Ok(zeta_int(k + 1, cfg)?.add(&log_ratio(q.q(), prec)?.mul(&zeta_int(k - 1, cfg)?))),
    }
}

/// Lower bound `max(0, 1 - sqrt(q)/(q-1))^k zeta(k+1)` on `F(I_{k,q})`.
///
/// Only `q = 2` has a negative base; the bound is then `0`.
pub fn fkq_lower_bound(q: FieldOrder, k: u32, cfg: &PrecisionConfig) -> Result<Enclosure> {
    if k == 0 {
        return Err(Error::Zero {
            what: "number of factors k",
        });
    }
    let prec = cfg.bits();
    let base = Enclosure::one(prec)
        .sub(&root_ratio(q.q(), prec)?)
        .clamp_nonneg();
    Ok(base.pow_i(k as i32)?.mul(&zeta_int(k + 1, cfg)?))
}
