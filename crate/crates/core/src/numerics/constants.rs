use std::sync::Mutex;

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{Enclosure, PrecisionConfig};
use crate::error::{Error, Result};
use crate::exact::power_harmonic;

/// The first 120 fractional digits of Euler's constant, truncated.
pub const EULER_GAMMA_DIGITS: &str = "0.\
577215664901532860606512090082402431042159335939923598805767234884867726777664670936947063291746749514631447249807082480";

/// Euler's constant. The embedded literal is truncated, so the true value
/// lies in `[literal, literal + 10^-120]`; above roughly 400 bits that
/// literal width dominates the interval.
pub fn euler_gamma(cfg: &PrecisionConfig) -> Enclosure {
    let digits = &EULER_GAMMA_DIGITS[2..];
    let num: Integer = digits.parse().expect("literal is all digits");
    let den = Integer::from(10).pow(digits.len() as u32);
    let lo = Rational::from((num.clone(), den.clone()));
    let hi = Rational::from((num + 1u32, den));
    let p = cfg.bits();
    let lo = Float::with_val_round(p, &lo, Round::Down).0;
    let hi = Float::with_val_round(p, &hi, Round::Up).0;
    Enclosure::new(lo, hi).expect("ordered literal bounds")
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// The Bernoulli number `B_n` (with `B_1 = -1/2`), memoized process-wide.
pub fn bernoulli(n: usize) -> Rational {
    let mut table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= n {
        let m = table.len();
        // sum_{j<=m} C(m+1, j) B_j = 0
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            acc += Rational::from(b * Integer::from(Integer::binomial_u(m as u32 + 1, j as u32)));
        }
        table.push(-acc / Integer::from(m + 1));
    }
    table[n].clone()
}

fn pochhammer(s: u64, m: u64) -> Integer {
    (0..m).fold(Integer::from(1), |acc, i| acc * (s + i))
}

/// `zeta(s)` for an integer `s >= 2`.
///
/// Sums the first `N-1` terms exactly, then applies Euler-Maclaurin with
/// `M` Bernoulli corrections, all in exact rationals. Only the remainder is
/// bounded, by `4 (s)_{2M} / (2 pi)^{2M} * N^{1-s-2M} / (s+2M-1)` with
/// `pi > 3`, which keeps `N` near `bits/4` instead of the `2^{bits}` terms
/// the plain integral tail would need.
pub fn zeta_int(s: u32, cfg: &PrecisionConfig) -> Result<Enclosure> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta(s) needs s >= 2, got {s}")));
    }
    let tol = Rational::from_f64(cfg.tail_tolerance()).expect("finite tolerance");
    let s64 = s as u64;
    let mut n = 10 + cfg.bits() as u64 / 4;
    let (n, m, remainder) = 'search: loop {
        let mut prev: Option<Rational> = None;
        for m in 1..=4 * n {
            let num = Integer::from(4) * pochhammer(s64, 2 * m);
            let den = Integer::from(6).pow(2 * m as u32)
                * Integer::from(n).pow((s64 + 2 * m - 1) as u32)
                * (s64 + 2 * m - 1);
            let bound = Rational::from((num, den));
            if bound <= tol {
                break 'search (n, m, bound);
            }
            if prev.as_ref().is_some_and(|p| bound >= *p) {
                break;
            }
            prev = Some(bound);
        }
        n *= 2;
    };

    let mut sum = power_harmonic(n - 1, s);
    let n_int = Integer::from(n);
    sum += Rational::from((Integer::from(1), n_int.clone().pow(s - 1) * (s - 1)));
    sum += Rational::from((Integer::from(1), n_int.clone().pow(s) * 2u32));
    for j in 1..=m {
        let b = bernoulli(2 * j as usize);
        let coeff = Rational::from((
            pochhammer(s64, 2 * j - 1),
            Integer::from(Integer::factorial(2 * j as u32)),
        ));
        let power = n_int.clone().pow((s64 + 2 * j - 1) as u32);
        sum += b * coeff / power;
    }
    let p = cfg.bits();
    let lo = Float::with_val_round(p, &(Rational::from(&sum - &remainder)), Round::Down).0;
    let hi = Float::with_val_round(p, &(sum + remainder), Round::Up).0;
    Enclosure::new(lo, hi)
}

const DILOG_MAX_TERMS: u64 = 50_000_000;

/// `Li2(x) = sum_{k>=1} x^k/k^2` for `0 <= x < 1`.
///
/// The series is increasing in `x`, so the lower endpoint is a rounded-down
/// partial sum at `x.lo` and the upper one a rounded-up partial sum at
/// `x.hi` plus `x^{T+1}/((T+1)^2 (1-x))`.
pub fn dilog(x: &Enclosure, cfg: &PrecisionConfig) -> Result<Enclosure> {
    if x.lo().is_sign_negative() && *x.lo() != 0 {
        return Err(Error::Domain("dilog needs x >= 0".into()));
    }
    if *x.hi() >= 1 {
        return Err(Error::Domain("dilog needs x < 1".into()));
    }
    let p = cfg.bits().max(x.precision_bits());
    let wp = p + 16;
    let tol = Float::with_val(wp, cfg.tail_tolerance());

    let t = x.hi();
    let one_minus = Float::with_val_round(wp, 1u32 - t, Round::Down).0;
    let mut power = Float::with_val(wp, 1u32);
    let mut hi = Float::new(wp);
    let mut terms = 0u64;
    loop {
        let k = terms + 1;
        power = Float::with_val_round(wp, &power * t, Round::Up).0;
        let kk = Integer::from(k) * k;
        hi = Float::with_val_round(
            wp,
            &hi + Float::with_val_round(wp, &power / &kk, Round::Up).0,
            Round::Up,
        )
        .0;
        terms = k;
        let next = Float::with_val_round(wp, &power * t, Round::Up).0;
        let k1 = Integer::from(k + 1) * (k + 1);
        let denom = Float::with_val_round(wp, &one_minus * &k1, Round::Down).0;
        let tail = Float::with_val_round(wp, &next / &denom, Round::Up).0;
        if tail <= tol || next == 0 {
            hi = Float::with_val_round(wp, &hi + &tail, Round::Up).0;
            break;
        }
        if terms >= DILOG_MAX_TERMS {
            return Err(Error::Budget(format!(
                "dilog series needs more than {DILOG_MAX_TERMS} terms"
            )));
        }
    }

    let t = x.lo();
    let mut power = Float::with_val(wp, 1u32);
    let mut lo = Float::new(wp);
    for k in 1..=terms {
        power = Float::with_val_round(wp, &power * t, Round::Down).0;
        if power == 0 {
            break;
        }
        let kk = Integer::from(k) * k;
        lo = Float::with_val_round(
            wp,
            &lo + Float::with_val_round(wp, &power / &kk, Round::Down).0,
            Round::Down,
        )
        .0;
    }
    Enclosure::new(
        Float::with_val_round(p, &lo, Round::Down).0,
        Float::with_val_round(p, &hi, Round::Up).0,
    )
}

#[cfg(test)]
mod tests {
    use rug::float::Constant;

    use super::*;

    fn cfg(bits: u32) -> PrecisionConfig {
        PrecisionConfig::new(bits).unwrap()
    }

    #[test]
    fn gamma_matches_mpfr() {
        let g = euler_gamma(&cfg(256));
        let reference = Float::with_val(1000, Constant::Euler);
        assert!(g.contains_float(&reference));
        assert!(g.width() < Float::with_val(64, Float::i_exp(1, -248)));
        assert!(g.width() < 1e-60);
        assert!(g.truncated_decimal(6).unwrap() == "0.577215");
        assert_eq!(&g.truncated_decimal(15).unwrap(), &EULER_GAMMA_DIGITS[..17]);
        assert_eq!(g.exp().truncated_decimal(6).unwrap(), "1.781072");
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(20), Rational::from((-174611, 330)));
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = zeta_int(2, &cfg(256)).unwrap();
        let pi = Float::with_val(1024, Constant::Pi);
        let exact = Float::with_val(1024, pi.square_ref()) / 6u32;
        assert!(z.contains_float(&exact));
        assert!(z.width() < Float::with_val(64, Float::i_exp(1, -250)));
        assert_eq!(z.truncated_decimal(10).unwrap(), "1.6449340668");
    }

    #[test]
    fn zeta_against_partial_sums_with_integral_tail() {
        // sum_{n<=T} n^-s + [0, T^{1-s}/(s-1)] brackets zeta(s)
        let t = 2000u64;
        for s in 2..=12u32 {
            let z = zeta_int(s, &cfg(128)).unwrap();
            let head = power_harmonic(t, s);
            let tail = Rational::from((Integer::from(1), Integer::from(t).pow(s - 1) * (s - 1)));
            let lo = Float::with_val_round(128, &head, Round::Down).0;
            let hi = Float::with_val_round(128, &(head + tail), Round::Up).0;
            let oracle = Enclosure::new(lo, hi).unwrap();
            assert!(z.overlaps(&oracle), "s = {s}");
            assert!(z.width() <= oracle.width(), "s = {s}");
        }
    }

    #[test]
    fn zeta_against_mpfr() {
        for s in [3u32, 4, 5, 7, 11, 31, 64] {
            let z = zeta_int(s, &cfg(200)).unwrap();
            let down = Float::with_val_round(400, Float::zeta_u(s), Round::Down).0;
            let up = Float::with_val_round(400, Float::zeta_u(s), Round::Up).0;
            assert!(z.contains_float(&down) && z.contains_float(&up), "s = {s}");
        }
    }

    #[test]
    fn zeta_large_s_near_one() {
        for s in [40u32, 100, 300] {
            let z = zeta_int(s, &cfg(512)).unwrap();
            assert!(*z.lo() > 1u32);
            let bound =
                Rational::from(1) + Rational::from((Integer::from(2), Integer::from(1) << s));
            assert!(*z.hi() <= bound);
        }
        assert!(zeta_int(1, &cfg(64)).is_err());
    }

    #[test]
    fn dilog_half_closed_form() {
        let half = Enclosure::from_rational(&Rational::from((1, 2)), 256);
        let li = dilog(&half, &cfg(256)).unwrap();
        let pi = Float::with_val(1024, Constant::Pi);
        let ln2 = Float::with_val(1024, Constant::Log2);
        let exact = Float::with_val(1024, pi.square_ref()) / 12u32
            - Float::with_val(1024, ln2.square_ref()) / 2u32;
        assert!(li.contains_float(&exact));
        assert!(li.width() < 1e-70);
    }

    #[test]
    fn dilog_edges() {
        let zero = Enclosure::zero(128);
        let li = dilog(&zero, &cfg(128)).unwrap();
        assert!(li.is_point() && *li.lo() == 0);
        assert!(dilog(&Enclosure::one(128), &cfg(128)).is_err());
        assert!(dilog(&Enclosure::from_i64(-1, 128), &cfg(128)).is_err());
        // Li2(x) -> 0 as x -> 0 along x = 1/sqrt(q)
        let mut prev: Option<Enclosure> = None;
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 64, 1024] {
            let x = Enclosure::from_u64(q, 128).sqrt().unwrap().recip().unwrap();
            let li = dilog(&x, &cfg(128)).unwrap();
            if let Some(p) = prev {
                assert!(li.strictly_less(&p));
            }
            prev = Some(li);
        }
    }
}
