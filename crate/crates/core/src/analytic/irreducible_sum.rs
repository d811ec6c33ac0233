use rug::{Integer, Rational};

use crate::counting::IrreducibleCountTable;
use crate::error::{Error, Result};
use crate::exact::{power_harmonic, FieldOrder};
use crate::numerics::{zeta_int, Enclosure, PrecisionConfig};

/// `sum_{n<=N} pi(n) / (n q^n)` as one exact rational.
pub fn irreducible_head(pi: &IrreducibleCountTable, n_max: u32) -> Result<Rational> {
    if pi.max_degree() < n_max {
        return Err(Error::MissingTable(format!(
            "pi_{}(n) up to n = {n_max}",
            pi.q()
        )));
    }
    let q = pi.q();
    let top = q.pow(n_max);
    let mut num = Integer::new();
    let mut lcm = Integer::from(1);
    for n in 1..=n_max {
        lcm.lcm_u_mut(n);
    }
    for n in 1..=n_max {
        let scale = Integer::from(&lcm / n) * (&top / q.pow(n));
        num += scale * pi.get(n).expect("checked");
    }
    Ok(Rational::from((num, lcm * top)))
}

/// `F(I_q) = sum_P 1/(deg P |P|)` over monic irreducibles.
///
/// Degrees above `N` contribute at most `sum_{n>N} 1/n^2` (from
/// `pi(n) <= q^n/n`) and at least that minus `5 q^{-N/2} / N^2`.
pub fn erdos_sum_irreducibles(q: FieldOrder, n: u32, cfg: &PrecisionConfig) -> Result<Enclosure> {
    if n == 0 {
        return Err(Error::Zero {
            what: "degree cutoff",
        });
    }
    let prec = cfg.bits();
    let pi = IrreducibleCountTable::new(q, n)?;
    let head = irreducible_head(&pi, n)?;
    let upper = zeta_int(2, cfg)?.sub(&Enclosure::from_rational(
        &power_harmonic(n as u64, 2),
        prec,
    ));
    let est = Enclosure::from_rational(&head, prec).add(&upper);
    let sqrt_q = Enclosure::from_u64(q.q(), prec).sqrt()?;
    let slack = sqrt_q
        .pow_i(n as i32)?
        .mul_integer(&Integer::from(n).square())
        .recip()?
        .mul_integer(&Integer::from(5));
    Enclosure::new(est.sub(&slack).lo().clone(), est.hi().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::dilog;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::new(256).unwrap()
    }

    #[test]
    fn reference_values() {
        let v = erdos_sum_irreducibles(FieldOrder::new(2).unwrap(), 200, &cfg()).unwrap();
        assert_eq!(v.truncated_decimal(19).unwrap(), "1.4676602238442289268");
        let v = erdos_sum_irreducibles(FieldOrder::new(3).unwrap(), 150, &cfg()).unwrap();
        assert_eq!(v.truncated_decimal(19).unwrap(), "1.5402654962770992783");
    }

    #[test]
    fn head_against_direct_sum() {
        let q = FieldOrder::new(3).unwrap();
        let pi = IrreducibleCountTable::new(q, 12).unwrap();
        let mut direct = Rational::new();
        for n in 1..=12u32 {
            direct += Rational::from((pi.get(n).unwrap().clone(), q.pow(n) * n));
        }
        assert_eq!(irreducible_head(&pi, 12).unwrap(), direct);
    }

    #[test]
    fn above_dilog_lower_bound() {
        let c = PrecisionConfig::new(128).unwrap();
        let z2 = zeta_int(2, &c).unwrap();
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 32, 49, 64] {
            let fq = FieldOrder::new(q).unwrap();
            let v = erdos_sum_irreducibles(fq, 60, &c).unwrap();
            let x = Enclosure::from_u64(q, 128).sqrt().unwrap().recip().unwrap();
            let li = dilog(&x, &c).unwrap();
            let lower = z2.sub(&li.mul_integer(&Integer::from(q)).div_u64(q - 1).unwrap());
            assert!(lower.strictly_less(&v), "q = {q}");
            assert!(v.strictly_less(&z2), "q = {q}");
        }
    }

    #[test]
    fn nested_in_n() {
        let q = FieldOrder::new(2).unwrap();
        let coarse = erdos_sum_irreducibles(q, 40, &cfg()).unwrap();
        let fine = erdos_sum_irreducibles(q, 120, &cfg()).unwrap();
        assert!(coarse.contains(&fine));
    }
}
