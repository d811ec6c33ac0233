use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::counting::IrreducibleCountTable;
use crate::error::{Error, Result};
use crate::exact::{divisors, moebius, FieldOrder};
use crate::numerics::{Enclosure, PrecisionConfig};

/// Above this many bits in the exact product's denominator we switch to
/// `exp(sum pi(i) log(1 - q^-i))`.
const EXACT_PRODUCT_BITS: f64 = 4096.0;

/// `prod_{deg P <= n} (1 - 1/|P|) = prod_{i<=n} (1 - q^-i)^{pi(i)}`.
pub fn mertens_product(q: FieldOrder, n: u32, cfg: &PrecisionConfig) -> Result<Enclosure> {
    if n == 0 {
        return Err(Error::Zero {
            what: "degree cutoff",
        });
    }
    let pi = IrreducibleCountTable::new(q, n)?;
    let qf = q.q() as f64;
    let size: f64 = (1..=n)
        .map(|i| pi.get(i).expect("in range").to_f64() * i as f64 * qf.log2())
        .sum();
    if size <= EXACT_PRODUCT_BITS {
        let mut num = Integer::from(1);
        let mut den = Integer::from(1);
        for i in 1..=n {
            let e = pi
                .get(i)
                .expect("in range")
                .to_u32()
                .expect("small by the size check");
            let qi = q.pow(i);
            num *= Integer::from(&qi - 1u32).pow(e);
            den *= qi.pow(e);
        }
        return Ok(Enclosure::from_rational(
            &Rational::from((num, den)),
            cfg.bits(),
        ));
    }
    Ok(mertens_log(q, &pi, n, cfg.bits() + 32)?.exp())
}

/// `sum_{i<=n} pi(i) log(1 - q^-i)`, a negative number.
pub(crate) fn mertens_log(
    q: FieldOrder,
    pi: &IrreducibleCountTable,
    n: u32,
    prec: u32,
) -> Result<Enclosure> {
    let mut acc = Enclosure::zero(prec);
    for i in 1..=n {
        let x = Enclosure::from_ratio(&Integer::from(-1), &q.pow(i), prec)?;
        let c = pi
            .get(i)
            .ok_or_else(|| Error::MissingTable(format!("pi_{q}({i})")))?;
        acc = acc.add(&x.ln_1p()?.mul_integer(c));
    }
    Ok(acc)
}

/// `c_j(n)`, the coefficient of `q^-j` in `-sum_{i<=n} pi(i) log(1 - q^-i)`
/// when written as a power series in `1/q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MertensCoefficient {
    pub n: u32,
    pub j: u64,
    pub value: Rational,
}

impl MertensCoefficient {
    pub fn new(n: u32, j: u64) -> Result<Self> {
        Ok(MertensCoefficient {
            n,
            j,
            value: mertens_coefficient(n, j)?,
        })
    }
}

/// `c_j = sum_{d<=n} 1/(j+d) sum_{r | (j+d)/d, r <= n/d} mu(r)`, where only
/// `d | j` contributes.
pub fn mertens_coefficient(n: u32, j: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Zero {
            what: "degree cutoff",
        });
    }
    let mut c = Rational::new();
    for d in 1..=n as u64 {
        if j % d != 0 {
            continue;
        }
        let m = j / d + 1;
        let mut s: i64 = 0;
        for r in divisors(m)? {
            if r > n as u64 / d {
                break;
            }
            s += moebius(r)? as i64;
        }
        if s != 0 {
            c += Rational::from((s, j + d));
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::harmonic;
    use crate::numerics::euler_gamma;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::new(128).unwrap()
    }

    #[test]
    fn small_products() {
        let q2 = FieldOrder::new(2).unwrap();
        let p = mertens_product(q2, 1, &cfg()).unwrap();
        assert!(p.contains_rational(&Rational::from((1, 4))) && p.is_point());
        // degree <= 2 over F_2: x, x+1, x^2+x+1
        let p = mertens_product(q2, 2, &cfg()).unwrap();
        assert!(p.contains_rational(&Rational::from((3, 16))));
    }

    #[test]
    fn exact_and_log_paths_agree() {
        let q = FieldOrder::new(3).unwrap();
        let pi = IrreducibleCountTable::new(q, 6).unwrap();
        let exact = mertens_product(q, 6, &cfg()).unwrap();
        let via_log = mertens_log(q, &pi, 6, 160).unwrap().exp();
        assert!(exact.overlaps(&via_log));
        assert!(via_log.width() < 1e-40);
    }

    #[test]
    fn between_mertens_bounds() {
        let eg = euler_gamma(&cfg()).exp();
        for q in [2u64, 3, 4, 5, 7] {
            let fq = FieldOrder::new(q).unwrap();
            for n in [3u32, 10, 25] {
                let p = mertens_product(fq, n, &cfg()).unwrap();
                let upper = eg.mul_integer(&Integer::from(n)).recip().unwrap();
                let lower = eg.mul_integer(&Integer::from(n + 1)).recip().unwrap();
                assert!(
                    lower.strictly_less(&p) && p.strictly_less(&upper),
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn coefficients() {
        assert_eq!(mertens_coefficient(6, 0).unwrap(), Rational::from((49, 20)));
        for j in 1..=3 {
            assert_eq!(mertens_coefficient(6, j).unwrap(), 0);
        }
        assert_ne!(mertens_coefficient(6, 4).unwrap(), 0);
        for n in 1..=20u32 {
            let half = harmonic(n as u64).unwrap() / 2u32;
            for j in 0..=3 * n as u64 {
                let c = mertens_coefficient(n, j).unwrap();
                assert!(Rational::from(c.abs_ref()) <= half || j == 0, "n={n} j={j}");
            }
        }
        assert!(mertens_coefficient(0, 1).is_err());
    }

    #[test]
    fn coefficient_series_reproduces_log() {
        // -log prod = sum_j c_j q^-j; truncate at J and bound the rest by
        // H_n/2 * q^-J / (q-1)
        let q = FieldOrder::new(4).unwrap();
        let n = 5;
        let pi = IrreducibleCountTable::new(q, n).unwrap();
        let target = mertens_log(q, &pi, n, 128).unwrap().neg();
        let mut s = Rational::new();
        for j in 0..60u64 {
            s += mertens_coefficient(n, j).unwrap() / q.pow(j as u32);
        }
        let tail = harmonic(n as u64).unwrap() / 2u32 / q.pow(60) / 3u32;
        let lo = Enclosure::from_rational(&Rational::from(&s - &tail), 128);
        let hi = Enclosure::from_rational(&Rational::from(&s + &tail), 128);
        assert!(lo.hull(&hi).overlaps(&target));
    }
}
