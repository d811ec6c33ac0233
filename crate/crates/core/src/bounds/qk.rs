use rug::{Integer, Rational};

use super::closed_form::{irreducible_lower, k2_upper, log_ratio, root_ratio};
use super::Verdict;
use crate::error::{Error, Result};
use crate::numerics::{zeta_int, Enclosure, PrecisionConfig};

/// How large `q` must be for `F(I_1) > F(I_2) > ... > F(I_k)` to follow
/// from the closed-form bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct QkBoundResult {
    pub k: u32,
    /// `2^{k+1} zeta(k-1) + 1`; `None` for `k = 2`.
    pub a: Option<Enclosure>,
    /// `(k-1) 2^{k+1} zeta(k)`; `None` for `k = 2`.
    pub b: Option<Enclosure>,
    /// `a / b^2` at `k = 4`.
    pub eta: Enclosure,
    /// `2 (1 + 2 eta + sqrt(1 + 4 eta))`, just below 4.03.
    pub constant: Enclosure,
    /// `(sqrt(4 a b^2 + b^4) + 2a + b^2) / 2`; from `k = 3` on.
    pub quadratic_threshold: Option<Enclosure>,
    /// `4.03 (k-1)^2 4^k zeta(k)^2`; from `k = 4` on.
    pub bound: Option<Enclosure>,
    /// The explicit `q` quoted for the small cases: 11 for `k = 2`, 413 for `k = 3`.
    pub reference_q: Option<u64>,
}

fn ab(k: u32, cfg: &PrecisionConfig) -> Result<(Enclosure, Enclosure)> {
    let pow = Integer::from(1) << (k + 1);
    let a = zeta_int(k - 1, cfg)?
        .mul_integer(&pow)
        .add(&Enclosure::one(cfg.bits()));
    let b = zeta_int(k, cfg)?.mul_integer(&(pow * (k - 1)));
    Ok((a, b))
}

pub fn qk_bound(k: u32, cfg: &PrecisionConfig) -> Result<QkBoundResult> {
    if k < 2 {
        return Err(Error::Domain(format!("q_k is defined for k >= 2, got {k}")));
    }
    let prec = cfg.bits();
    let (a4, b4) = ab(4, cfg)?;
    let eta = a4.div(&b4.pow_i(2)?)?;
    let one = Enclosure::one(prec);
    let root = one.add(&eta.mul_integer(&Integer::from(4))).sqrt()?;
    let constant = one
        .add(&eta.mul_integer(&Integer::from(2)))
        .add(&root)
        .mul_integer(&Integer::from(2));
    let mut out = QkBoundResult {
        k,
        a: None,
        b: None,
        eta,
        constant,
        quadratic_threshold: None,
        bound: None,
        reference_q: match k {
            2 => Some(11),
            3 => Some(413),
            _ => None,
        },
    };
    if k >= 3 {
        let (a, b) = ab(k, cfg)?;
        let b2 = b.pow_i(2)?;
        let disc = a
            .mul(&b2)
            .mul_integer(&Integer::from(4))
            .add(&b2.pow_i(2)?)
            .sqrt()?;
        out.quadratic_threshold = Some(
            disc.add(&a.mul_integer(&Integer::from(2)))
                .add(&b2)
                .div_u64(2)?,
        );
        out.a = Some(a);
        out.b = Some(b);
    }
    if k >= 4 {
        let scale = Integer::from(k - 1).square() * (Integer::from(1) << (2 * k));
        let c = Enclosure::from_rational(&Rational::from((403, 100)), prec);
        out.bound = Some(zeta_int(k, cfg)?.pow_i(2)?.mul_integer(&scale).mul(&c));
    }
    Ok(out)
}

/// `F(I_1,q) > F(I_2,q)` from the bounds alone:
/// `zeta(2) - q/(q-1) Li_2(q^{-1/2}) > zeta(3) + Li_2(1/q)/2`.
///
/// `q` is any integer `>= 2` here, not necessarily a field order.
pub fn k2_condition(q: u64, cfg: &PrecisionConfig) -> Result<Verdict> {
    if q < 2 {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    Ok(Verdict::less(
        &k2_upper(q, cfg)?,
        &irreducible_lower(q, cfg)?,
    ))
}

/// `F(I_{k-1},q) > F(I_k,q)` from the bounds alone, `k >= 3`:
/// `(1 - sqrt(q)/(q-1))^{k-1} zeta(k) > zeta(k+1) + log(q/(q-1)) zeta(k-1)`.
pub fn chain_condition(q: u64, k: u32, cfg: &PrecisionConfig) -> Result<Verdict> {
    if q < 2 {
        return Err(Error::Domain(format!("q must be at least 2, got {q}")));
    }
    if k < 3 {
        return Err(Error::Domain(format!(
            "the chain condition needs k >= 3, got {k}"
        )));
    }
    let prec = cfg.bits();
    let base = Enclosure::one(prec)
        .sub(&root_ratio(q, prec)?)
        .clamp_nonneg();
    let lhs = base.pow_i(k as i32 - 1)?.mul(&zeta_int(k, cfg)?);
    let rhs = zeta_int(k + 1, cfg)?.add(&log_ratio(q, prec)?.mul(&zeta_int(k - 1, cfg)?));
    Ok(Verdict::less(&rhs, &lhs))
}
