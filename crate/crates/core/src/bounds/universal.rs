use rug::{Integer, Rational};

use super::Verdict;
use crate::counting::IrreducibleCountTable;
use crate::error::{Error, Result};
use crate::exact::{power_harmonic, FieldOrder};
use crate::numerics::{euler_gamma, zeta_int, Enclosure, PrecisionConfig};

/// `B(q)` and how it compares with `e^gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalBound {
    pub q: FieldOrder,
    pub tail_cutoff: u32,
    pub bound: Enclosure,
    pub e_gamma: Enclosure,
    /// `B(q) < e^gamma`.
    pub verdict: Verdict,
}

/// `B(q) = 1 + e^gamma (1 - 1/q)^q + sum_{n>=2} pi(n) / (n (n+1) q^n)`.
///
/// Degrees above `N` are bounded by `sum_{n>N} 1/(n^2 (n+1))`, which
/// telescopes to `zeta(2) - H^{(2)}_N - 1/(N+1)`.
pub fn universal_bound_check(
    q: FieldOrder,
    tail_cutoff: u32,
    cfg: &PrecisionConfig,
) -> Result<UniversalBound> {
    if q.q() == 2 {
        return Err(Error::Domain(
            "q = 2 has its own constant 1 + e^gamma/2".into(),
        ));
    }
    if tail_cutoff < 2 {
        return Err(Error::Domain(format!(
            "tail cutoff must be at least 2, got {tail_cutoff}"
        )));
    }
    let prec = cfg.bits();
    let n_max = tail_cutoff;
    let pi = IrreducibleCountTable::new(q, n_max)?;
    let mut head = Rational::new();
    for n in 2..=n_max {
        head += Rational::from((
            pi.get(n).expect("in range").clone(),
            q.pow(n) * (n * (n + 1)),
        ));
    }
    let tail_exact = -power_harmonic(n_max as u64, 2) - Rational::from((1, n_max + 1));
    let tail = zeta_int(2, cfg)?
        .add(&Enclosure::from_rational(&tail_exact, prec))
        .clamp_nonneg();
    let e_gamma = euler_gamma(cfg).exp();
    let qq = Integer::from(q.q());
    let factor = Rational::from((Integer::from(&qq - 1u32), qq));
    let weight = Enclosure::from_rational(&factor, prec).pow_i(q.q() as i32)?;
    let fixed = Enclosure::one(prec)
        .add(&e_gamma.mul(&weight))
        .add(&Enclosure::from_rational(&head, prec));
    let bound = Enclosure::new(fixed.lo().clone(), fixed.add(&tail).hi().clone())?;
    let verdict = Verdict::less(&bound, &e_gamma);
    Ok(UniversalBound {
        q,
        tail_cutoff,
        bound,
        e_gamma,
        verdict,
    })
}

/// `1 + e^{gamma-1} + (pi^2 - 9)/6`, the bound for every `q > 19`.
pub fn limit_constant(cfg: &PrecisionConfig) -> Enclosure {
    let prec = cfg.bits();
    let z2 = zeta_int(2, cfg).expect("s = 2 is valid");
    let e = euler_gamma(cfg).sub(&Enclosure::one(prec)).exp();
    let three_halves = Enclosure::from_rational(&Rational::from((3, 2)), prec);
    Enclosure::one(prec).add(&e).add(&z2).sub(&three_halves)
}

/// `1 + e^gamma / 2`, the bound for `q = 2`.
pub fn q2_constant(cfg: &PrecisionConfig) -> Enclosure {
    let half = euler_gamma(cfg).exp().div_u64(2).expect("nonzero divisor");
    Enclosure::one(cfg.bits()).add(&half)
}
