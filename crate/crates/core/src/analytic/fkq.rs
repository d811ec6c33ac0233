use rug::ops::Pow;
use rug::{Integer, Rational};

use super::mordell::MordellTable;
use crate::counting::SmoothCountTable;
use crate::error::{Error, Limit, Result};
use crate::exact::{factorial, FieldOrder};
use crate::numerics::{Enclosure, PrecisionConfig};

/// A certified enclosure of `F(I_{k,q})` together with its ingredients.
///
/// `value = [S + R - lower_defect.hi, S + R + upper_defect.hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumResult {
    pub q: FieldOrder,
    pub k: u32,
    pub degree_bound: u32,
    pub s: Enclosure,
    pub r: Enclosure,
    pub lower_defect: Enclosure,
    pub upper_defect: Enclosure,
    pub value: Enclosure,
}

impl SumResult {
    fn assemble(
        q: FieldOrder,
        k: u32,
        degree_bound: u32,
        s: Enclosure,
        r: Enclosure,
        lower: Enclosure,
        upper: Enclosure,
    ) -> Result<Self> {
        let est = s.add(&r);
        let lo = est.sub(&Enclosure::point(lower.hi().clone())?);
        let hi = est.add(&Enclosure::point(upper.hi().clone())?);
        let value = Enclosure::new(lo.lo().clone(), hi.hi().clone())?;
        Ok(SumResult {
            q,
            k,
            degree_bound,
            s,
            r,
            lower_defect: lower,
            upper_defect: upper,
            value,
        })
    }

    pub fn certified_digits(&self) -> usize {
        self.value.certified_digits().unwrap_or(0)
    }

    /// The largest contribution to the width of `value`.
    pub fn limiting_factor(&self) -> Limit {
        let rounding = self.s.add(&self.r).width();
        let lower = self.lower_defect.hi().clone();
        let upper = self.upper_defect.hi().clone();
        if rounding >= lower && rounding >= upper {
            Limit::Rounding
        } else if lower >= upper {
            Limit::LowerDefect
        } else {
            Limit::UpperDefect
        }
    }

    /// `digits` decimals after the point, truncated; errors naming the
    /// limiting term when the enclosure cannot certify that many.
    pub fn truncated(&self, digits: usize) -> Result<String> {
        let certified = self.certified_digits();
        if digits > certified {
            return Err(Error::InsufficientPrecision {
                requested: digits,
                certified,
                limit: self.limiting_factor(),
            });
        }
        self.value.truncated_decimal(digits)
    }
}

/// Shared tables for every `F(I_{k,q})` with `k <= k_max` at one degree
/// bound `N`: smooth counts `Psi'_k(n, N)` and the Mordell sums
/// `M(i, N+1, a)`.
#[derive(Debug, Clone)]
pub struct FkqEngine {
    q: FieldOrder,
    degree_bound: u32,
    cfg: PrecisionConfig,
    smooth: SmoothCountTable,
    mordell: MordellTable,
    work: PrecisionConfig,
}

impl FkqEngine {
    pub fn new(
        q: FieldOrder,
        k_max: u32,
        degree_bound: u32,
        cfg: &PrecisionConfig,
    ) -> Result<Self> {
        let smooth = SmoothCountTable::build(q, k_max, degree_bound)?;
        Self::with_smooth_table(smooth, cfg)
    }

    /// Uses an existing table; its smoothness is the degree bound.
    pub fn with_smooth_table(smooth: SmoothCountTable, cfg: &PrecisionConfig) -> Result<Self> {
        let k_max = smooth.k_max();
        if k_max == 0 {
            return Err(Error::Zero { what: "k_max" });
        }
        let degree_bound = smooth.smoothness();
        // the recurrence cancels roughly (e log N)^k; see the tests for the
        // observed loss
        let guard = 32 + k_max * (2 + (degree_bound as f64).log2().ceil() as u32) / 2;
        let work = PrecisionConfig::new(cfg.bits() + guard)?;
        let mordell = MordellTable::build(k_max, degree_bound + 1, degree_bound, &work)?;
        Ok(FkqEngine {
            q: smooth.q(),
            degree_bound,
            cfg: *cfg,
            smooth,
            mordell,
            work,
        })
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn k_max(&self) -> u32 {
        self.smooth.k_max()
    }

    pub fn smooth_table(&self) -> &SmoothCountTable {
        &self.smooth
    }

    pub fn working_bits(&self) -> u32 {
        self.work.bits()
    }

    fn check_k(&self, k: u32) -> Result<()> {
        if k == 0 {
            return Err(Error::Zero {
                what: "number of factors k",
            });
        }
        if k > self.k_max() {
            return Err(Error::MissingTable(format!(
                "k = {k} exceeds the engine's k_max = {}",
                self.k_max()
            )));
        }
        Ok(())
    }

    /// `S = sum_{k<=n<=kN} Psi'_k(n, N) / (n q^n)` exactly.
    pub fn head_exact(&self, k: u32) -> Result<Rational> {
        if k == 0 {
            return Ok(Rational::new());
        }
        self.check_k(k)?;
        let top = k * self.degree_bound;
        let row = self.smooth.row(k).expect("checked");
        let mut lcm = Integer::from(1);
        for n in k..=top {
            lcm.lcm_u_mut(n);
        }
        let q = Integer::from(self.q.q());
        let mut num = Integer::new();
        // Horner in q: num = sum_n Psi(n) (L/n) q^{top-n}
        for n in k..=top {
            num *= &q;
            if row[n as usize] != 0 {
                num += Integer::from(&lcm / n) * &row[n as usize];
            }
        }
        Ok(Rational::from((num, lcm * self.q.pow(top))))
    }

    pub fn head_sum(&self, k: u32) -> Result<Enclosure> {
        Ok(Enclosure::from_rational(
            &self.head_exact(k)?,
            self.work.bits(),
        ))
    }

    /// `T_i = sum_{n<=(k-i)N} Psi'_{k-i}(n, N) M(i, N+1, n) / q^n` for
    /// `i = 1..=k`.
    fn tail_terms(&self, k: u32) -> Result<Vec<Enclosure>> {
        let prec = self.work.bits();
        let n_max = self.degree_bound;
        (1..=k)
            .map(|i| {
                let row = self.smooth.row(k - i).expect("checked");
                let mut acc = Enclosure::zero(prec);
                for n in (k - i)..=(k - i) * n_max {
                    let count = &row[n as usize];
                    if *count == 0 {
                        continue;
                    }
                    let w = Enclosure::from_ratio(count, &self.q.pow(n), prec)?;
                    let m = self.mordell.get(i, n as u64).ok_or_else(|| {
                        Error::MissingTable(format!("M({i}, {}, {n})", n_max + 1))
                    })?;
                    acc = acc.add(&w.mul(m));
                }
                Ok(acc)
            })
            .collect()
    }

    /// `(R, lower_defect, upper_defect)`.
    pub fn tail_estimate(&self, k: u32) -> Result<(Enclosure, Enclosure, Enclosure)> {
        self.check_k(k)?;
        let prec = self.work.bits();
        let terms = self.tail_terms(k)?;
        let mut r = Enclosure::zero(prec);
        let mut d = Enclosure::zero(prec);
        for (idx, t) in terms.iter().enumerate() {
            let i = idx as u32 + 1;
            r = r.add(&t.div_integer(&factorial(i))?);
            d = d.add(&t.div_integer(&factorial(i - 1))?);
        }
        let lower = d.mul(&self.lower_weight()?);
        let n = self.degree_bound;
        let upper = Enclosure::from_ratio(&Integer::from(2), &(self.q.pow(n) * n), prec)?;
        Ok((r, lower, upper))
    }

    /// `q^{1 - N/2} / (q - 1)`.
    fn lower_weight(&self) -> Result<Enclosure> {
        let prec = self.work.bits();
        let q = Integer::from(self.q.q());
        let twice = 2 - self.degree_bound as i64;
        let half = twice.div_euclid(2);
        let base = if half >= 0 {
            Rational::from(q.clone().pow(half as u32))
        } else {
            Rational::from((1, q.clone().pow((-half) as u32)))
        };
        let mut w = Enclosure::from_rational(&(base / Integer::from(&q - 1u32)), prec);
        if twice.rem_euclid(2) == 1 {
            w = w.mul(&Enclosure::from_integer(&q, prec).sqrt()?);
        }
        Ok(w)
    }

    pub fn sum(&self, k: u32) -> Result<SumResult> {
        self.check_k(k)?;
        let s = self.head_sum(k)?;
        let (r, lower, upper) = self.tail_estimate(k)?;
        SumResult::assemble(self.q, k, self.degree_bound, s, r, lower, upper)
    }

    pub fn precision(&self) -> &PrecisionConfig {
        &self.cfg
    }
}

/// `S_{k,N,q}` as an enclosure.
pub fn head_sum(
    q: FieldOrder,
    k: u32,
    degree_bound: u32,
    cfg: &PrecisionConfig,
) -> Result<Enclosure> {
    if k == 0 {
        return Ok(Enclosure::zero(cfg.bits()));
    }
    let smooth = SmoothCountTable::build(q, k, degree_bound)?;
    let engine = HeadOnly { smooth: &smooth, q };
    Ok(Enclosure::from_rational(&engine.exact(k)?, cfg.bits()))
}

struct HeadOnly<'a> {
    smooth: &'a SmoothCountTable,
    q: FieldOrder,
}

impl HeadOnly<'_> {
    fn exact(&self, k: u32) -> Result<Rational> {
        let row = self
            .smooth
            .row(k)
            .ok_or_else(|| Error::MissingTable(format!("Psi'_{k}")))?;
        let mut s = Rational::new();
        for (n, c) in row.iter().enumerate().skip(k as usize) {
            if *c != 0 {
                s += Rational::from((c.clone(), self.q.pow(n as u32) * n as u32));
            }
        }
        Ok(s)
    }
}

/// `(R, lower_defect, upper_defect)` for one cell.
pub fn tail_estimate(
    q: FieldOrder,
    k: u32,
    degree_bound: u32,
    cfg: &PrecisionConfig,
) -> Result<(Enclosure, Enclosure, Enclosure)> {
    FkqEngine::new(q, k, degree_bound, cfg)?.tail_estimate(k)
}

/// Certified `F(I_{k,q})` with degree bound `N`.
pub fn fkq(q: FieldOrder, k: u32, degree_bound: u32, cfg: &PrecisionConfig) -> Result<SumResult> {
    if k == 0 {
        return Err(Error::Zero {
            what: "number of factors k",
        });
    }
    FkqEngine::new(q, k, degree_bound, cfg)?.sum(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{erdos_sum_irreducibles, mordell, MordellCache, MordellKey};

    fn fo(q: u64) -> FieldOrder {
        FieldOrder::new(q).unwrap()
    }

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::new(256).unwrap()
    }

    #[test]
    fn head_paths_agree() {
        let e = FkqEngine::new(fo(3), 4, 9, &cfg()).unwrap();
        for k in 1..=4 {
            let smooth = e.smooth_table();
            let direct = HeadOnly { smooth, q: fo(3) }.exact(k).unwrap();
            assert_eq!(e.head_exact(k).unwrap(), direct);
        }
        assert_eq!(head_sum(fo(3), 0, 5, &cfg()).unwrap(), Enclosure::zero(256));
    }

    #[test]
    fn single_factor_tail_is_mordell() {
        let e = FkqEngine::new(fo(2), 1, 12, &cfg()).unwrap();
        let (r, _, _) = e.tail_estimate(1).unwrap();
        let mut cache = MordellCache::new();
        let m = mordell(MordellKey::new(1, 13, 0).unwrap(), &cfg(), &mut cache).unwrap();
        assert!(r.overlaps(&m.to_enclosure(256)));
    }

    #[test]
    fn k1_matches_irreducible_sum() {
        let f = fkq(fo(3), 1, 60, &cfg()).unwrap();
        let g = erdos_sum_irreducibles(fo(3), 60, &cfg()).unwrap();
        assert!(f.value.overlaps(&g));
    }

    #[test]
    fn reference_cells() {
        let f = fkq(fo(2), 4, 200, &cfg()).unwrap();
        assert_eq!(f.truncated(19).unwrap(), "0.9562373433151932108");
        let f = fkq(fo(5), 2, 110, &cfg()).unwrap();
        assert_eq!(f.truncated(19).unwrap(), "1.1668343411440889017");
    }

    #[test]
    fn defects() {
        let e = FkqEngine::new(fo(2), 3, 50, &cfg()).unwrap();
        let (_, lower, upper) = e.tail_estimate(3).unwrap();
        let bound =
            Enclosure::from_ratio(&Integer::from(2), &(fo(2).pow(50) * 50u32), 256).unwrap();
        assert!(upper.overlaps(&bound));
        let e2 = FkqEngine::new(fo(2), 3, 51, &cfg()).unwrap();
        let (_, lower2, _) = e2.tail_estimate(3).unwrap();
        assert!(lower2.strictly_less(&lower));
    }

    #[test]
    fn too_many_digits_names_the_limit() {
        let f = fkq(fo(2), 2, 20, &cfg()).unwrap();
        match f.truncated(40) {
            Err(Error::InsufficientPrecision { limit, .. }) => {
                assert_eq!(limit, Limit::LowerDefect)
            }
            other => panic!("{other:?}"),
        }
    }
}
