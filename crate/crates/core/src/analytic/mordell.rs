//! Mordell sums `M(k, N, a) = sum_{n_1..n_k >= N} 1/(n_1...n_k (n_1+...+n_k+a))`.
//!
//! At `N = 1` the sum is `int_0^1 x^{a-1} (-log(1-x))^k dx`. For integer
//! `a >= 1` that equals `(1/a) Y_k(x_1, .., x_k)` with `x_r = (r-1)! H_a^{(r)}`
//! and `Y_k` the complete Bell polynomial. Every term is positive, unlike
//! Mordell's alternating closed form, which is kept only as a test oracle.
//!
//! Larger `N` follow from inclusion-exclusion on the coordinates equal to
//! `N-1`:
//!
//! `M(k, N, a) = sum_i (-1)^i C(k, i) M(k-i, N-1, a + i(N-1)) / (N-1)^i`.

use std::collections::HashMap;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{binomial_shifted, factorial, power_harmonic};
use crate::numerics::{zeta_int, Enclosure, PrecisionConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MordellKey {
    k: u32,
    n: u32,
    a: u64,
}

impl MordellKey {
    /// `n` is the smallest allowed summand. `(k, a) = (0, 0)` diverges.
    pub fn new(k: u32, n: u32, a: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero {
                what: "smallest Mordell summand",
            });
        }
        if k == 0 && a == 0 {
            return Err(Error::Domain("M(0, N, 0) = 1/0 diverges".into()));
        }
        Ok(MordellKey { k, n, a })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> u64 {
        self.a
    }
}

/// A Mordell sum, exact when every input along the recursion was.
#[derive(Debug, Clone, PartialEq)]
pub enum MordellValue {
    Exact(Rational),
    Approx(Enclosure),
}

impl MordellValue {
    pub fn to_enclosure(&self, prec: u32) -> Enclosure {
        match self {
            MordellValue::Exact(r) => Enclosure::from_rational(r, prec),
            MordellValue::Approx(e) => e.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            MordellValue::Exact(r) => Some(r),
            MordellValue::Approx(_) => None,
        }
    }
}

/// Memo for [`mordell`]. Approximate entries depend on the precision, so the
/// cache empties itself when asked for a different one.
#[derive(Debug, Default, Clone)]
pub struct MordellCache {
    bits: Option<u32>,
    values: HashMap<MordellKey, MordellValue>,
}

impl MordellCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, key: &MordellKey) -> Option<&MordellValue> {
        self.values.get(key)
    }

    fn align(&mut self, bits: u32) {
        if self.bits != Some(bits) {
            self.values.clear();
            self.bits = Some(bits);
        }
    }
}

/// Exact values are kept while `lcm(1..a)^k` stays below this many bits.
const EXACT_BASE_BITS: f64 = 65_536.0;

fn exact_base_fits(k: u32, a: u64) -> bool {
    (a as f64) * (k as f64) * std::f64::consts::LOG2_E <= EXACT_BASE_BITS
}

/// Complete Bell polynomials `Y_0..=Y_k` at `x_1..x_k` over any ring-like
/// type, via `Y_{m+1} = sum_{i<=m} C(m, i) x_{i+1} Y_{m-i}`.
fn bell<T: Clone>(
    x: &[T],
    k: usize,
    one: T,
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
    scale: impl Fn(&T, &Integer) -> T,
) -> Vec<T> {
    let mut y = Vec::with_capacity(k + 1);
    y.push(one);
    for m in 0..k {
        let mut acc: Option<T> = None;
        for i in 0..=m {
            let c = Integer::from(Integer::binomial_u(m as u32, i as u32));
            let term = scale(&mul(&x[i], &y[m - i]), &c);
            acc = Some(match acc {
                Some(s) => add(&s, &term),
                None => term,
            });
        }
        y.push(acc.expect("m >= 0 gives one term"));
    }
    y
}

/// `M(k, 1, a)` for `a >= 1` as an exact rational, via Bell polynomials.
pub fn mordell_base_exact(k: u32, a: u64) -> Result<Rational> {
    if a == 0 {
        return Err(Error::Domain(
            "M(k, 1, 0) = k! zeta(k+1) is irrational".into(),
        ));
    }
    let x: Vec<Rational> = (1..=k)
        .map(|r| power_harmonic(a, r) * factorial(r - 1))
        .collect();
    let y = bell(
        &x,
        k as usize,
        Rational::from(1),
        |p, q| Rational::from(p * q),
        |p, q| Rational::from(p + q),
        |p, c| Rational::from(p * c),
    );
    Ok(y[k as usize].clone() / Integer::from(a))
}

/// Mordell's closed form `k! sum_{i<a} (-1)^i C(a-1, i) / (i+1)^{k+1}` for
/// `a >= 1`. Alternating and badly cancelling; meant for cross-checks.
pub fn mordell_closed_form(k: u32, a: u64) -> Result<Rational> {
    if a == 0 {
        return Err(Error::Domain(
            "the closed form is an infinite series at a = 0".into(),
        ));
    }
    let mut sum = Rational::new();
    for i in 0..a {
        let c = binomial_shifted(a as i64, i as i64)?;
        let term = Rational::from((c, Integer::from(i + 1).pow(k + 1)));
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum * factorial(k))
}

fn base_value(k: u32, a: u64, cfg: &PrecisionConfig) -> Result<MordellValue> {
    if k == 0 {
        return Ok(MordellValue::Exact(Rational::from((1, a))));
    }
    if a == 0 {
        let z = zeta_int(k + 1, cfg)?;
        return Ok(MordellValue::Approx(z.mul_integer(&factorial(k))));
    }
    if exact_base_fits(k, a) {
        return Ok(MordellValue::Exact(mordell_base_exact(k, a)?));
    }
    Ok(MordellValue::Approx(
        base_row_enclosures(k, a, a, cfg.bits())?
            .pop()
            .expect("one entry"),
    ))
}

/// `M(k, 1, a)` for `a` in `lo..=hi` (all `>= 1`) as enclosures.
fn base_row_enclosures(k: u32, lo: u64, hi: u64, prec: u32) -> Result<Vec<Enclosure>> {
    let table = BaseTable::new(k, hi, prec);
    Ok((lo..=hi).map(|a| table.get(k, a).clone()).collect())
}

/// `M(k', 1, a)` for all `k' <= k`, `1 <= a <= a_max`.
struct BaseTable {
    rows: Vec<Vec<Enclosure>>,
}

impl BaseTable {
    fn new(k: u32, a_max: u64, prec: u32) -> Self {
        let k = k as usize;
        let mut harmonic: Vec<Enclosure> = vec![Enclosure::zero(prec); k];
        let mut rows: Vec<Vec<Enclosure>> = vec![Vec::with_capacity(a_max as usize); k + 1];
        let mut fact = vec![Integer::from(1)];
        for r in 1..k {
            let next = Integer::from(&fact[r - 1] * r as u32);
            fact.push(next);
        }
        for a in 1..=a_max {
            let a_int = Integer::from(a);
            let mut power = a_int.clone();
            for h in harmonic.iter_mut() {
                let inv = Enclosure::from_ratio(&Integer::from(1), &power, prec).expect("a >= 1");
                *h = h.add(&inv);
                power *= &a_int;
            }
            let x: Vec<Enclosure> = harmonic
                .iter()
                .zip(&fact)
                .map(|(h, f)| h.mul_integer(f))
                .collect();
            let y = bell(
                &x,
                k,
                Enclosure::one(prec),
                Enclosure::mul,
                Enclosure::add,
                Enclosure::mul_integer,
            );
            for (kp, yk) in y.into_iter().enumerate() {
                rows[kp].push(yk.div_integer(&a_int).expect("a >= 1"));
            }
        }
        BaseTable { rows }
    }

    fn get(&self, k: u32, a: u64) -> &Enclosure {
        &self.rows[k as usize][a as usize - 1]
    }
}

/// Memoized top-down evaluation of `M(k, N, a)` through the recurrence.
///
/// Values with `a >= 1` stay exact (until the base case gets too large to
/// keep as a rational); `a = 0` brings in `zeta(k+1)`. The number of keys
/// grows like `k N^2`, so large `N` should go through [`MordellTable`].
pub fn mordell(
    key: MordellKey,
    cfg: &PrecisionConfig,
    cache: &mut MordellCache,
) -> Result<MordellValue> {
    cache.align(cfg.bits());
    if let Some(v) = cache.values.get(&key) {
        return Ok(v.clone());
    }
    let value = if key.k == 0 || key.n == 1 {
        base_value(key.k, key.a, cfg)?
    } else {
        let m = key.n - 1;
        let mut exact = Rational::new();
        let mut approx: Option<Enclosure> = None;
        for i in 0..=key.k {
            let sub = MordellKey::new(key.k - i, m, key.a + i as u64 * m as u64)?;
            let coeff = Rational::from((
                Integer::from(Integer::binomial_u(key.k, i)),
                Integer::from(m).pow(i),
            ));
            let coeff = if i % 2 == 1 { -coeff } else { coeff };
            match mordell(sub, cfg, cache)? {
                MordellValue::Exact(r) => exact += r * coeff,
                MordellValue::Approx(e) => {
                    let term = e.mul(&Enclosure::from_rational(&coeff, cfg.bits()));
                    approx = Some(match approx {
                        Some(s) => s.add(&term),
                        None => term,
                    });
                }
            }
        }
        match approx {
            None => MordellValue::Exact(exact),
            Some(e) => MordellValue::Approx(e.add(&Enclosure::from_rational(&exact, cfg.bits()))),
        }
    };
    cache.values.insert(key, value.clone());
    Ok(value)
}

/// `M(k, L, a)` for every `k <= k_max` and `0 <= a <= (k_max - k) * span`,
/// at a single level `L`, built bottom-up from `L = 1`.
///
/// Those ranges are closed under the recurrence as long as `L - 1 <= span`,
/// so each level only needs the previous one.
#[derive(Debug, Clone)]
pub struct MordellTable {
    level: u32,
    span: u32,
    rows: Vec<Vec<Enclosure>>,
}

impl MordellTable {
    pub fn build(k_max: u32, level: u32, span: u32, cfg: &PrecisionConfig) -> Result<Self> {
        if level == 0 {
            return Err(Error::Zero {
                what: "Mordell level",
            });
        }
        if level - 1 > span {
            return Err(Error::Domain(format!(
                "level {level} needs span >= {}, got {span}",
                level - 1
            )));
        }
        let prec = cfg.bits();
        let width = |k: u32| (k_max - k) as u64 * span as u64;
        let a_max = width(0).max(1);
        let base = BaseTable::new(k_max, a_max, prec);
        let mut rows: Vec<Vec<Enclosure>> = Vec::with_capacity(k_max as usize + 1);
        for k in 0..=k_max {
            let mut row = Vec::with_capacity(width(k) as usize + 1);
            for a in 0..=width(k) {
                row.push(match (k, a) {
                    // never read: M(0, ., 0) only appears with a shift >= 1
                    (0, 0) => Enclosure::zero(prec),
                    (_, 0) => zeta_int(k + 1, cfg)?.mul_integer(&factorial(k)),
                    _ => base.get(k, a).clone(),
                });
            }
            rows.push(row);
        }
        for l in 2..=level {
            let m = (l - 1) as u64;
            let next: Vec<Vec<Enclosure>> = (0..=k_max)
                .into_par_iter()
                .map(|k| {
                    if k == 0 {
                        return rows[0].clone();
                    }
                    let coeffs: Vec<Enclosure> = (0..=k)
                        .map(|i| {
                            let c = Rational::from((
                                Integer::from(Integer::binomial_u(k, i)),
                                Integer::from(m).pow(i),
                            ));
                            Enclosure::from_rational(&c, prec)
                        })
                        .collect();
                    (0..=width(k))
                        .map(|a| {
                            let mut plus = rows[k as usize][a as usize].clone();
                            let mut minus: Option<Enclosure> = None;
                            for i in 1..=k {
                                let src = &rows[(k - i) as usize][(a + i as u64 * m) as usize];
                                let term = coeffs[i as usize].mul(src);
                                if i % 2 == 0 {
                                    plus = plus.add(&term);
                                } else {
                                    minus = Some(match minus {
                                        Some(s) => s.add(&term),
                                        None => term,
                                    });
                                }
                            }
                            match minus {
                                Some(s) => plus.sub(&s),
                                None => plus,
                            }
                        })
                        .collect()
                })
                .collect();
            rows = next;
        }
        Ok(MordellTable { level, span, rows })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn k_max(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    /// `M(k, level, a)`, if `(k, a)` is inside the table and not `(0, 0)`.
    pub fn get(&self, k: u32, a: u64) -> Option<&Enclosure> {
        if k == 0 && a == 0 {
            return None;
        }
        self.rows.get(k as usize)?.get(a as usize)
    }

    pub fn row(&self, k: u32) -> Option<&[Enclosure]> {
        self.rows.get(k as usize).map(Vec::as_slice)
    }

    pub fn span(&self) -> u32 {
        self.span
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::new(192).unwrap()
    }

    fn eval(k: u32, n: u32, a: u64, cache: &mut MordellCache) -> MordellValue {
        mordell(MordellKey::new(k, n, a).unwrap(), &cfg(), cache).unwrap()
    }

    #[test]
    fn spec_examples() {
        let mut cache = MordellCache::new();
        let z2 = zeta_int(2, &cfg()).unwrap();
        let m110 = eval(1, 1, 0, &mut cache).to_enclosure(192);
        assert!(m110.overlaps(&z2) && m110.width() < 1e-50);
        assert_eq!(
            eval(1, 1, 1, &mut cache),
            MordellValue::Exact(Rational::from(1))
        );
        let m120 = eval(1, 2, 0, &mut cache).to_enclosure(192);
        assert!(m120.overlaps(&z2.sub(&Enclosure::one(192))));
        assert_eq!(
            eval(1, 2, 1, &mut cache),
            MordellValue::Exact(Rational::from((1, 2)))
        );
        assert_eq!(
            eval(1, 1, 2, &mut cache),
            MordellValue::Exact(Rational::from((3, 4)))
        );
        assert!(MordellKey::new(0, 3, 0).is_err());
        assert!(MordellKey::new(2, 0, 1).is_err());
    }

    #[test]
    fn bell_form_matches_closed_form() {
        for k in 0..=8 {
            for a in 1..=30 {
                assert_eq!(
                    mordell_base_exact(k, a).unwrap(),
                    mordell_closed_form(k, a).unwrap(),
                    "k={k} a={a}"
                );
            }
        }
    }

    #[test]
    fn binomial_factor_in_recurrence() {
        // M(2, 2, 0) = 2 zeta(3) - 2 M(1, 1, 1) + M(0, 1, 2) = 2 zeta(3) - 3/2
        let mut cache = MordellCache::new();
        let v = eval(2, 2, 0, &mut cache).to_enclosure(192);
        let expect = zeta_int(3, &cfg())
            .unwrap()
            .mul_integer(&Integer::from(2))
            .sub(&Enclosure::from_rational(&Rational::from((3, 2)), 192));
        assert!(v.overlaps(&expect));
    }

    #[test]
    fn table_matches_top_down() {
        let c = cfg();
        let (k_max, span) = (5u32, 6u32);
        let mut cache = MordellCache::new();
        for level in 1..=span + 1 {
            let t = MordellTable::build(k_max, level, span, &c).unwrap();
            for k in 0..=k_max {
                for a in 0..=((k_max - k) * span) as u64 {
                    let Some(e) = t.get(k, a) else { continue };
                    let v = eval(k, level, a, &mut cache);
                    match &v {
                        MordellValue::Exact(r) => {
                            assert!(e.contains_rational(r), "k={k} L={level} a={a}")
                        }
                        MordellValue::Approx(x) => assert!(e.overlaps(x), "k={k} L={level} a={a}"),
                    }
                }
            }
        }
    }

    #[test]
    fn base_enclosures_contain_exact() {
        let t = BaseTable::new(6, 40, 128);
        for k in 0..=6 {
            for a in 1..=40 {
                assert!(t
                    .get(k, a)
                    .contains_rational(&mordell_base_exact(k, a).unwrap()));
            }
        }
    }

    #[test]
    fn cache_resets_on_precision_change() {
        let mut cache = MordellCache::new();
        let key = MordellKey::new(1, 1, 0).unwrap();
        mordell(key, &cfg(), &mut cache).unwrap();
        assert_eq!(cache.len(), 1);
        let v = mordell(key, &PrecisionConfig::new(64).unwrap(), &mut cache).unwrap();
        assert_eq!(v.to_enclosure(64).precision_bits(), 64);
    }
}
