use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Limit, Result};

/// A closed interval `[lo, hi]` known to contain some exact real.
///
/// Every operation rounds its lower endpoint toward `-inf` and its upper
/// endpoint toward `+inf`, so containment survives any composition. Results
/// carry the larger of the operand precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    lo: Float,
    hi: Float,
}

macro_rules! down {
    ($prec:expr, $val:expr) => {
        Float::with_val_round($prec, $val, Round::Down).0
    };
}

macro_rules! up {
    ($prec:expr, $val:expr) => {
        Float::with_val_round($prec, $val, Round::Up).0
    };
}

impl Enclosure {
    /// Builds `[lo, hi]` from explicit endpoints.
    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain("enclosure endpoints must be finite".into()));
        }
        if lo > hi {
            return Err(Error::Domain(format!(
                "enclosure endpoints out of order: {lo} > {hi}"
            )));
        }
        Ok(Enclosure { lo, hi })
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_u64(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_u64(1, prec)
    }

    pub fn from_u64(x: u64, prec: u32) -> Self {
        Enclosure {
            lo: down!(prec, x),
            hi: up!(prec, x),
        }
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Enclosure {
            lo: down!(prec, x),
            hi: up!(prec, x),
        }
    }

    pub fn from_integer(x: &Integer, prec: u32) -> Self {
        Enclosure {
            lo: down!(prec, x),
            hi: up!(prec, x),
        }
    }

    pub fn from_rational(x: &Rational, prec: u32) -> Self {
        Enclosure {
            lo: down!(prec, x),
            hi: up!(prec, x),
        }
    }

    /// `num / den` rounded outward.
    pub fn from_ratio(num: &Integer, den: &Integer, prec: u32) -> Result<Self> {
        if den.cmp0() == Ordering::Equal {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_rational(
            &Rational::from((num.clone(), den.clone())),
            prec,
        ))
    }

    /// A degenerate interval at a finite float, kept exactly.
    pub fn point(x: Float) -> Result<Self> {
        Self::new(x.clone(), x)
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// `hi - lo`, rounded up.
    pub fn width(&self) -> Float {
        up!(self.precision_bits(), &self.hi - &self.lo)
    }

    pub fn midpoint(&self) -> Float {
        let prec = self.precision_bits() + 1;
        let sum = Float::with_val(prec + 1, &self.hi + &self.lo);
        Float::with_val(prec, sum / 2u32)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Whether `x` lies in `[lo, hi]`, compared exactly.
    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.cmp0() != Some(Ordering::Greater) && self.hi.cmp0() != Some(Ordering::Less)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.cmp0() == Some(Ordering::Greater)
    }

    /// Every point of `self` is below every point of `other`.
    pub fn strictly_less(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    /// Certified order of the two represented values, or `None` when the
    /// intervals overlap (and are not the same point).
    pub fn compare(&self, other: &Enclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    fn prec2(&self, other: &Enclosure) -> u32 {
        self.precision_bits().max(other.precision_bits())
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec2(other);
        Enclosure {
            lo: down!(p, &self.lo + &other.lo),
            hi: up!(p, &self.hi + &other.hi),
        }
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec2(other);
        Enclosure {
            lo: down!(p, &self.lo - &other.hi),
            hi: up!(p, &self.hi - &other.lo),
        }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let p = self.prec2(other);
        let nonneg = |e: &Enclosure| e.lo.cmp0() != Some(Ordering::Less);
        if nonneg(self) && nonneg(other) {
            return Enclosure {
                lo: down!(p, &self.lo * &other.lo),
                hi: up!(p, &self.hi * &other.hi),
            };
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = down!(p, a * b);
            let u = up!(p, a * b);
            if lo.as_ref().map_or(true, |l| d < *l) {
                lo = Some(d);
            }
            if hi.as_ref().map_or(true, |h| u > *h) {
                hi = Some(u);
            }
        }
        Enclosure {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    pub fn recip(&self) -> Result<Enclosure> {
        if self.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.precision_bits();
        Ok(Enclosure {
            lo: down!(p, 1u32 / &self.hi),
            hi: up!(p, 1u32 / &self.lo),
        })
    }

    pub fn div(&self, other: &Enclosure) -> Result<Enclosure> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec2(other);
        let quads = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in quads {
            let d = down!(p, a / b);
            let u = up!(p, a / b);
            if lo.as_ref().map_or(true, |l| d < *l) {
                lo = Some(d);
            }
            if hi.as_ref().map_or(true, |h| u > *h) {
                hi = Some(u);
            }
        }
        Ok(Enclosure {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    pub fn mul_integer(&self, k: &Integer) -> Enclosure {
        let p = self.precision_bits();
        if k.cmp0() == Ordering::Less {
            Enclosure {
                lo: down!(p, &self.hi * k),
                hi: up!(p, &self.lo * k),
            }
        } else {
            Enclosure {
                lo: down!(p, &self.lo * k),
                hi: up!(p, &self.hi * k),
            }
        }
    }

    pub fn div_integer(&self, k: &Integer) -> Result<Enclosure> {
        let p = self.precision_bits();
        match k.cmp0() {
            Ordering::Equal => Err(Error::DivisionByZero),
            Ordering::Less => Ok(Enclosure {
                lo: down!(p, &self.hi / k),
                hi: up!(p, &self.lo / k),
            }),
            Ordering::Greater => Ok(Enclosure {
                lo: down!(p, &self.lo / k),
                hi: up!(p, &self.hi / k),
            }),
        }
    }

    pub fn div_u64(&self, k: u64) -> Result<Enclosure> {
        self.div_integer(&Integer::from(k))
    }

    pub fn exp(&self) -> Enclosure {
        let p = self.precision_bits();
        Enclosure {
            lo: down!(p, self.lo.exp_ref()),
            hi: up!(p, self.hi.exp_ref()),
        }
    }

    pub fn ln(&self) -> Result<Enclosure> {
        if !self.is_positive() {
            return Err(Error::LogNonPositive);
        }
        let p = self.precision_bits();
        Ok(Enclosure {
            lo: down!(p, self.lo.ln_ref()),
            hi: up!(p, self.hi.ln_ref()),
        })
    }

    /// `ln(1 + x)`, accurate for tiny `x`.
    pub fn ln_1p(&self) -> Result<Enclosure> {
        if self.lo <= -1i32 {
            return Err(Error::LogNonPositive);
        }
        let p = self.precision_bits();
        Ok(Enclosure {
            lo: down!(p, self.lo.ln_1p_ref()),
            hi: up!(p, self.hi.ln_1p_ref()),
        })
    }

    pub fn sqrt(&self) -> Result<Enclosure> {
        if self.lo.cmp0() == Some(Ordering::Less) {
            return Err(Error::Domain(
                "square root of an interval with negative points".into(),
            ));
        }
        let p = self.precision_bits();
        Ok(Enclosure {
            lo: down!(p, self.lo.sqrt_ref()),
            hi: up!(p, self.hi.sqrt_ref()),
        })
    }

    /// `x^n` for an integer exponent; negative bases are fine, a negative
    /// exponent needs `0` outside the interval.
    pub fn pow_i(&self, n: i32) -> Result<Enclosure> {
        if n < 0 {
            return self
                .pow_i(
                    n.checked_neg()
                        .ok_or_else(|| Error::Domain("exponent overflow".into()))?,
                )?
                .recip();
        }
        let p = self.precision_bits();
        if n == 0 {
            return Ok(Enclosure::one(p));
        }
        let pw = |x: &Float, r: Round| Float::with_val_round(p, x.pow(n), r).0;
        let (lo_neg, hi_neg) = (
            self.lo.cmp0() == Some(Ordering::Less),
            self.hi.cmp0() == Some(Ordering::Less),
        );
        if n % 2 == 1 || !lo_neg {
            return Ok(Enclosure {
                lo: pw(&self.lo, Round::Down),
                hi: pw(&self.hi, Round::Up),
            });
        }
        if hi_neg {
            return Ok(Enclosure {
                lo: pw(&self.hi, Round::Down),
                hi: pw(&self.lo, Round::Up),
            });
        }
        let m = if Float::with_val(p, -&self.lo) > self.hi {
            Float::with_val(p, -&self.lo)
        } else {
            self.hi.clone()
        };
        Ok(Enclosure {
            lo: Float::new(p),
            hi: pw(&m, Round::Up),
        })
    }

    /// `x^y`. Integer point exponents go through [`Enclosure::pow_i`];
    /// anything else is `exp(y ln x)` and needs `x > 0`.
    pub fn pow(&self, y: &Enclosure) -> Result<Enclosure> {
        if y.is_point() && y.lo.is_integer() {
            if let Some(n) = y.lo.to_i32_saturating() {
                if n != i32::MIN && n != i32::MAX {
                    return self.pow_i(n);
                }
            }
        }
        Ok(y.mul(&self.ln()?).exp())
    }

    pub fn pow_rational(&self, r: &Rational) -> Result<Enclosure> {
        let y = Enclosure::from_rational(r, self.precision_bits());
        self.pow(&y)
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        let lo = if self.lo <= other.lo {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if self.hi >= other.hi {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        Enclosure { lo, hi }
    }

    /// The image under `x -> max(x, 0)`.
    pub fn clamp_nonneg(&self) -> Enclosure {
        let p = self.precision_bits();
        let zero = Float::new(p);
        let lo = if self.lo.cmp0() == Some(Ordering::Less) {
            zero.clone()
        } else {
            self.lo.clone()
        };
        let hi = if self.hi.cmp0() == Some(Ordering::Less) {
            zero
        } else {
            self.hi.clone()
        };
        Enclosure { lo, hi }
    }

    /// Number of fractional decimal digits on which both endpoints agree
    /// after truncation toward zero, or `None` if the sign or integer part is
    /// already ambiguous. Capped a few digits past the working precision.
    pub fn certified_digits(&self) -> Option<usize> {
        let lo = self.lo.to_rational()?;
        let hi = self.hi.to_rational()?;
        if lo.cmp0() == Ordering::Less && hi.cmp0() == Ordering::Greater {
            return None;
        }
        let cap = (self.precision_bits() as f64 * std::f64::consts::LOG10_2) as usize + 4;
        if trunc_scaled(&lo, 0) != trunc_scaled(&hi, 0) {
            return None;
        }
        let mut p = 0;
        while p < cap && trunc_scaled(&lo, p + 1) == trunc_scaled(&hi, p + 1) {
            p += 1;
        }
        Some(p)
    }

    /// The value truncated to `digits` fractional digits, if every one of
    /// them is certified.
    pub fn truncated_decimal(&self, digits: usize) -> Result<String> {
        let certified = self.certified_digits();
        if certified.map_or(true, |c| c < digits) {
            return Err(Error::InsufficientPrecision {
                requested: digits,
                certified: certified.unwrap_or(0),
                limit: Limit::Rounding,
            });
        }
        let lo = self.lo.to_rational().expect("finite endpoint");
        let negative = lo.cmp0() == Ordering::Less || self.hi.cmp0() == Some(Ordering::Less);
        Ok(format_scaled(&trunc_scaled(&lo, digits), digits, negative))
    }

    /// The longest certified truncation, or `None` if not even the integer
    /// part is certified.
    pub fn certified_decimal(&self) -> Option<String> {
        let d = self.certified_digits()?;
        self.truncated_decimal(d).ok()
    }

    /// `(lo, hi)` as fixed-point decimals with `digits` fractional digits,
    /// rounded outward so the printed pair still encloses the value.
    pub fn bounds_fixed(&self, digits: usize) -> (String, String) {
        let lo = self.lo.to_rational().expect("finite endpoint");
        let hi = self.hi.to_rational().expect("finite endpoint");
        let scale = Integer::from(10).pow(digits as u32);
        let lo_s = Rational::from(&lo * &scale).floor();
        let hi_s = Rational::from(&hi * &scale).ceil();
        let lo_i = lo_s.numer().clone();
        let hi_i = hi_s.numer().clone();
        (
            format_scaled(&lo_i, digits, lo_i.cmp0() == Ordering::Less),
            format_scaled(&hi_i, digits, hi_i.cmp0() == Ordering::Less),
        )
    }

    /// Upper endpoint in scientific notation with `sig` significant digits,
    /// rounded up. Used for tiny error terms.
    pub fn hi_scientific(&self, sig: usize) -> String {
        self.hi.to_string_radix_round(10, Some(sig), Round::Up)
    }

    pub fn lo_scientific(&self, sig: usize) -> String {
        self.lo.to_string_radix_round(10, Some(sig), Round::Down)
    }
}

fn trunc_scaled(x: &Rational, digits: usize) -> Integer {
    let num = x.numer() * Integer::from(10).pow(digits as u32);
    num / x.denom()
}

fn format_scaled(t: &Integer, digits: usize, negative: bool) -> String {
    let mut s = Integer::from(t.abs_ref()).to_string();
    if s.len() < digits + 1 {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    if digits > 0 {
        s.insert(s.len() - digits, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo_scientific(25),
            self.hi_scientific(25)
        )
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure::add(self, rhs)
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure::sub(self, rhs)
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: &Enclosure) -> Enclosure {
        Enclosure::mul(self, rhs)
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure::neg(self)
    }
}

/// The operations exposed through [`enclosure_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnclosureOp {
    Add,
    Sub,
    Mul,
    Div,
    Exp,
    Log,
    Pow,
    Neg,
}

impl EnclosureOp {
    pub fn arity(self) -> usize {
        match self {
            EnclosureOp::Exp | EnclosureOp::Log | EnclosureOp::Neg => 1,
            _ => 2,
        }
    }
}

/// Applies `op` to `args`, which must match its arity.
pub fn enclosure_arith(op: EnclosureOp, args: &[Enclosure]) -> Result<Enclosure> {
    if args.len() != op.arity() {
        return Err(Error::Domain(format!(
            "{op:?} takes {} operands, got {}",
            op.arity(),
            args.len()
        )));
    }
    let a = &args[0];
    Ok(match op {
        EnclosureOp::Add => a.add(&args[1]),
        EnclosureOp::Sub => a.sub(&args[1]),
        EnclosureOp::Mul => a.mul(&args[1]),
        EnclosureOp::Div => a.div(&args[1])?,
        EnclosureOp::Pow => a.pow(&args[1])?,
        EnclosureOp::Exp => a.exp(),
        EnclosureOp::Log => a.ln()?,
        EnclosureOp::Neg => a.neg(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> Enclosure {
        Enclosure::from_i64(x, 128)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn add_is_tight() {
        let s = enclosure_arith(EnclosureOp::Add, &[int(1), int(2)]).unwrap();
        assert!(s.contains_rational(&rat(3, 1)));
        assert!(s.width() <= Float::with_val(128, Float::i_exp(1, -126)));
    }

    #[test]
    fn third_is_strictly_inside() {
        let t = enclosure_arith(EnclosureOp::Div, &[int(1), int(3)]).unwrap();
        assert!(*t.lo() < rat(1, 3) && rat(1, 3) < *t.hi());
    }

    #[test]
    fn exp_log_round_trip() {
        let l = enclosure_arith(EnclosureOp::Log, &[int(5)]).unwrap();
        let e = enclosure_arith(EnclosureOp::Exp, &[l]).unwrap();
        assert!(e.contains_rational(&rat(5, 1)));
    }

    #[test]
    fn domain_errors() {
        let straddle = Enclosure::new(Float::with_val(64, -1), Float::with_val(64, 1)).unwrap();
        assert_eq!(int(1).div(&straddle), Err(Error::DivisionByZero));
        assert_eq!(straddle.ln(), Err(Error::LogNonPositive));
        assert_eq!(int(0).ln(), Err(Error::LogNonPositive));
        assert!(straddle.sqrt().is_err());
        assert!(enclosure_arith(EnclosureOp::Add, &[int(1)]).is_err());
        assert!(Enclosure::new(Float::with_val(64, 2), Float::with_val(64, 1)).is_err());
    }

    #[test]
    fn mixed_sign_products() {
        let a = Enclosure::new(Float::with_val(64, -2), Float::with_val(64, 3)).unwrap();
        let b = Enclosure::new(Float::with_val(64, -5), Float::with_val(64, 1)).unwrap();
        let c = a.mul(&b);
        assert_eq!((c.lo().to_f64(), c.hi().to_f64()), (-15.0, 10.0));
        let d = int(-7)
            .div(&Enclosure::new(Float::with_val(64, 2), Float::with_val(64, 4)).unwrap())
            .unwrap();
        assert_eq!((d.lo().to_f64(), d.hi().to_f64()), (-3.5, -1.75));
    }

    #[test]
    fn integer_powers() {
        let a = Enclosure::new(Float::with_val(64, -3), Float::with_val(64, 2)).unwrap();
        let sq = a.pow_i(2).unwrap();
        assert_eq!((sq.lo().to_f64(), sq.hi().to_f64()), (0.0, 9.0));
        let cube = a.pow_i(3).unwrap();
        assert_eq!((cube.lo().to_f64(), cube.hi().to_f64()), (-27.0, 8.0));
        assert!(a.pow_i(-2).is_err());
        let r = int(2).pow_i(-3).unwrap();
        assert!(r.contains_rational(&rat(1, 8)));
        let neg = int(-2).pow(&int(3)).unwrap();
        assert!(neg.contains_rational(&rat(-8, 1)));
    }

    #[test]
    fn rational_power() {
        let r = int(8).pow_rational(&rat(1, 3)).unwrap();
        assert!(r.contains_rational(&rat(2, 1)));
        assert!(r.width() < 1e-30);
    }

    #[test]
    fn certified_digits_truncate() {
        let x = Enclosure::from_rational(&rat(2, 3), 128);
        let s = x.truncated_decimal(5).unwrap();
        assert_eq!(s, "0.66666");
        let y = Enclosure::new(Float::with_val(128, 1.2345), Float::with_val(128, 1.2349)).unwrap();
        assert_eq!(y.certified_digits(), Some(3));
        assert_eq!(y.certified_decimal().unwrap(), "1.234");
        assert!(matches!(
            y.truncated_decimal(4),
            Err(Error::InsufficientPrecision { certified: 3, .. })
        ));
        let z = Enclosure::new(Float::with_val(128, -0.5), Float::with_val(128, 0.5)).unwrap();
        assert_eq!(z.certified_digits(), None);
        let n = Enclosure::from_rational(&rat(-7, 4), 128);
        assert_eq!(n.truncated_decimal(1).unwrap(), "-1.7");
        assert_eq!(
            Enclosure::from_rational(&rat(1, 4), 128)
                .truncated_decimal(2)
                .unwrap(),
            "0.25"
        );
        assert_eq!(
            Enclosure::from_rational(&rat(3, 256), 128)
                .truncated_decimal(3)
                .unwrap(),
            "0.011"
        );
        // 1/100 is not dyadic, so its outward rounding straddles 0.01
        assert_eq!(
            Enclosure::from_rational(&rat(1, 100), 128).certified_digits(),
            Some(1)
        );
    }

    #[test]
    fn fixed_bounds_are_outward() {
        let x = Enclosure::from_rational(&rat(2, 3), 128);
        assert_eq!(
            x.bounds_fixed(3),
            ("0.666".to_string(), "0.667".to_string())
        );
        let y = Enclosure::from_rational(&rat(-2, 3), 128);
        assert_eq!(
            y.bounds_fixed(3),
            ("-0.667".to_string(), "-0.666".to_string())
        );
    }

    #[test]
    fn hull_and_clamp() {
        let h = int(1).hull(&int(4));
        assert!(h.contains(&int(2)) && !h.contains(&int(5)));
        let c = Enclosure::new(Float::with_val(64, -1), Float::with_val(64, 2))
            .unwrap()
            .clamp_nonneg();
        assert_eq!(c.lo().to_f64(), 0.0);
        assert_eq!(int(-3).clamp_nonneg().hi().to_f64(), 0.0);
        assert_eq!(int(1).compare(&int(2)), Some(Ordering::Less));
        assert_eq!(int(2).compare(&int(2)), Some(Ordering::Equal));
        assert_eq!(h.compare(&int(2)), None);
    }
}
