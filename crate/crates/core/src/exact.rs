//! Exact integer and rational primitives.
//!
//! Everything here is a pure function over arbitrary-size integers
//! ([`rug::Integer`]) or normalized rationals ([`rug::Rational`]); no rounding
//! happens anywhere in this module.

use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// The order `q = p^e` of a finite field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldOrder {
    q: u64,
    p: u64,
    e: u32,
}

impl FieldOrder {
    pub fn new(q: u64) -> Result<Self> {
        validate_field_order(q)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The characteristic.
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `q^n` as an exact integer.
    pub fn pow(&self, n: u32) -> Integer {
        Integer::from(self.q).pow(n)
    }
}

impl fmt::Display for FieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Validates that `q` is a prime power and splits it as `p^e`.
pub fn validate_field_order(q: u64) -> Result<FieldOrder> {
    if q < 2 {
        return Err(Error::FieldOrderTooSmall(q));
    }
    let max_exp = 63 - q.leading_zeros();
    for e in (1..=max_exp.max(1)).rev() {
        let root = Integer::from(q).root(e);
        let Some(p) = root.to_u64() else { continue };
        if Integer::from(p).pow(e) == q && is_prime(p) {
            return Ok(FieldOrder { q, p, e });
        }
    }
    Err(Error::NotPrimePower(q))
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for &w in &WITNESSES {
        let mut x = pow(w, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn moebius(m: u64) -> Result<i8> {
    if m == 0 {
        return Err(Error::Zero {
            what: "moebius argument",
        });
    }
    let factors = factorize(m);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if factors.len() % 2 == 0 { 1 } else { -1 })
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Zero {
            what: "divisors argument",
        });
    }
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let current = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..current {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// The binomial `C(a-1, i)`, extended to `a = 0` as `C(-1, i) = (-1)^i`.
///
/// This is the coefficient in Mordell's closed form for the sum
/// `M(k, 1, a)`; the `a = 0` extension turns that series into `k! zeta(k+1)`.
pub fn binomial_shifted(a: i64, i: i64) -> Result<Integer> {
    if a < 0 {
        return Err(Error::Negative {
            what: "binomial_shifted a",
            value: a,
        });
    }
    if i < 0 {
        return Err(Error::Negative {
            what: "binomial_shifted i",
            value: i,
        });
    }
    if a == 0 {
        return Ok(if i % 2 == 0 {
            Integer::from(1)
        } else {
            Integer::from(-1)
        });
    }
    let top = (a - 1) as u64;
    let i = i as u64;
    if i > top {
        return Ok(Integer::new());
    }
    Ok(Integer::from(Integer::binomial_u(top as u32, i as u32)))
}

/// The harmonic number `H_n` as an exact rational.
pub fn harmonic(n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Zero {
            what: "harmonic index",
        });
    }
    Ok(power_harmonic(n, 1))
}

/// `sum_{d=1}^{n} 1/d^r` exactly; zero for `n = 0`.
///
/// Accumulates over the common denominator `lcm(1..n)^r` and normalizes once.
pub fn power_harmonic(n: u64, r: u32) -> Rational {
    if n == 0 {
        return Rational::new();
    }
    let mut lcm = Integer::from(1);
    for d in 2..=n {
        lcm.lcm_u_mut(d as u32);
    }
    let den = Integer::from((&lcm).pow(r));
    let mut num = Integer::new();
    for d in 1..=n {
        let share = Integer::from(&lcm / d as u32);
        num += share.pow(r);
    }
    Rational::from((num, den))
}

/// `n!` exactly.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}
