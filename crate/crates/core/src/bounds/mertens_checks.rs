use rug::{Integer, Rational};

use super::Verdict;
use crate::analytic::{mertens_log, mertens_product};
use crate::counting::IrreducibleCountTable;
use crate::error::Result;
use crate::exact::{harmonic, FieldOrder};
use crate::numerics::{euler_gamma, Enclosure, PrecisionConfig};

/// The product `P_n` against `1/(e^gamma (n+1)) < P_n <= 1/(e^gamma n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MertensCheck {
    pub q: FieldOrder,
    pub n: u32,
    pub product: Enclosure,
    pub lower: Enclosure,
    pub upper: Enclosure,
    pub upper_verdict: Verdict,
    pub lower_verdict: Verdict,
}

impl MertensCheck {
    /// `(q, n) = (2, 1)` is the one case where the lower bound is known to
    /// fail: `1/4 < 1/(2 e^gamma)`.
    pub fn is_known_exception(&self) -> bool {
        self.q.q() == 2 && self.n == 1
    }

    /// Both bounds, with the lower one expected to fail at the exception.
    pub fn verdict(&self) -> Verdict {
        let lower = if self.is_known_exception() {
            match self.lower_verdict {
                Verdict::Fails => Verdict::Holds,
                Verdict::Holds => Verdict::Fails,
                Verdict::Undecided => Verdict::Undecided,
            }
        } else {
            self.lower_verdict
        };
        self.upper_verdict.and(lower)
    }
}

pub fn mertens_bounds_check(q: FieldOrder, n: u32, cfg: &PrecisionConfig) -> Result<MertensCheck> {
    let product = mertens_product(q, n, cfg)?;
    let eg = euler_gamma(cfg).exp();
    let upper = eg.mul_integer(&Integer::from(n)).recip()?;
    let lower = eg.mul_integer(&Integer::from(n + 1)).recip()?;
    Ok(MertensCheck {
        q,
        n,
        upper_verdict: Verdict::less_eq(&product, &upper),
        lower_verdict: Verdict::less(&lower, &product),
        product,
        lower,
        upper,
    })
}

/// `|log P_n|` against `[(1 - eps) H_n, (1 + eps) H_n]` with
/// `eps = 1 / (2 (q-1) q^{floor(n/2)})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaBracketCheck {
    pub q: FieldOrder,
    pub n: u32,
    pub log_product: Enclosure,
    pub lower: Enclosure,
    pub upper: Enclosure,
    pub verdict: Verdict,
}

pub fn lemma_bracket_check(
    q: FieldOrder,
    n: u32,
    cfg: &PrecisionConfig,
) -> Result<LemmaBracketCheck> {
    let prec = cfg.bits();
    let pi = IrreducibleCountTable::new(q, n)?;
    let log_product = mertens_log(q, &pi, n, prec + 32)?.neg();
    let h = harmonic(n as u64)?;
    let eps = Rational::from((1, Integer::from(2 * (q.q() - 1)) * q.pow(n / 2)));
    let one = Rational::from(1);
    let lower = Enclosure::from_rational(&(Rational::from(&one - &eps) * &h), prec);
    let upper = Enclosure::from_rational(&(Rational::from(&one + &eps) * &h), prec);
    let verdict =
        Verdict::less_eq(&lower, &log_product).and(Verdict::less_eq(&log_product, &upper));
    Ok(LemmaBracketCheck {
        q,
        n,
        log_product,
        lower,
        upper,
        verdict,
    })
}
