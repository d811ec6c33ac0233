//! Exhaustive factorization of every monic polynomial of small degree over a
//! small field. Slow by design; it exists to check the formulas.

use crate::error::{Error, Result};
use crate::exact::FieldOrder;

pub const ORACLE_MAX_Q: u64 = 9;
pub const ORACLE_MAX_DEGREE: u32 = 15;
/// Default cap on the total number of polynomials enumerated.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 22;

/// Addition and multiplication tables for `F_q`, `q <= 9`.
///
/// Elements of `F_{p^e}` are written base `p` as coefficient vectors of
/// polynomials modulo a fixed irreducible of degree `e`.
#[derive(Debug, Clone)]
struct Field {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

impl Field {
    fn new(order: FieldOrder) -> Self {
        let (q, p, e) = (order.q() as usize, order.p() as usize, order.e() as usize);
        let digits = |mut x: usize| {
            let mut d = vec![0usize; e];
            for slot in d.iter_mut() {
                *slot = x % p;
                x /= p;
            }
            d
        };
        let undigits = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &c| acc * p + c);
        // A monic degree-e polynomial over F_p without roots; irreducible
        // because e <= 3. Any linear one works for prime fields.
        let modulus: Vec<usize> = (0..p.pow(e as u32))
            .map(|low| {
                let mut m = digits(low);
                m.push(1);
                m
            })
            .find(|m| {
                e == 1 || (0..p).all(|x| m.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) != 0)
            })
            .expect("an irreducible of degree <= 3 exists");
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum) as u8;
                let mut prod = vec![0usize; 2 * e];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for top in (e..2 * e).rev() {
                    let c = prod[top];
                    if c != 0 {
                        for (t, mc) in modulus.iter().enumerate() {
                            let idx = top - e + t;
                            prod[idx] = (prod[idx] + p * p - c * mc % p) % p;
                        }
                    }
                }
                mul[a * q + b] = undigits(&prod[..e]) as u8;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
            .collect();
        Field { q, add, mul, neg }
    }

    fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    /// Monic polynomial of degree `d` with low coefficients from `index`.
    fn poly(&self, d: u32, mut index: u64) -> Vec<u8> {
        let mut c = Vec::with_capacity(d as usize + 1);
        for _ in 0..d {
            c.push((index % self.q as u64) as u8);
            index /= self.q as u64;
        }
        c.push(1);
        c
    }

    fn index(&self, poly: &[u8]) -> u64 {
        poly[..poly.len() - 1]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.q as u64 + c as u64)
    }

    fn poly_mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        out
    }

    /// `h / f` for monic `f`, if the division is exact.
    fn poly_div_exact(&self, h: &[u8], f: &[u8]) -> Option<Vec<u8>> {
        if f.len() > h.len() {
            return None;
        }
        let df = f.len() - 1;
        let mut rem = h.to_vec();
        let mut quot = vec![0u8; h.len() - df];
        for i in (0..quot.len()).rev() {
            let c = rem[i + df];
            if c == 0 {
                continue;
            }
            quot[i] = c;
            for (t, &fc) in f.iter().enumerate() {
                rem[i + t] = self.sub(rem[i + t], self.mul(c, fc));
            }
        }
        rem[..df].iter().all(|&c| c == 0).then_some(quot)
    }
}

/// Factor-type summary of one monic polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorRecord {
    /// Irreducible factors counted with multiplicity.
    pub factors: u8,
    /// Largest degree among the irreducible factors; `0` for the constant 1.
    pub max_factor_degree: u8,
    pub squarefree: bool,
}

/// Every monic polynomial of degree `<= D` over `F_q`, factored.
#[derive(Debug, Clone)]
pub struct OracleFactorTable {
    q: FieldOrder,
    field: Field,
    max_degree: u32,
    irreducibles: Vec<Vec<u64>>,
    records: Vec<Vec<FactorRecord>>,
    pi_k: Vec<Vec<u64>>,
    pi_star_k: Vec<Vec<u64>>,
    // by_max[k][n][d]: k factors, degree n, largest factor degree exactly d
    by_max: Vec<Vec<Vec<u64>>>,
}

pub fn oracle_enumerate(q: FieldOrder, max_degree: u32) -> Result<OracleFactorTable> {
    oracle_enumerate_with_budget(q, max_degree, DEFAULT_ORACLE_BUDGET)
}

/// As [`oracle_enumerate`], refusing to visit more than `budget` polynomials.
pub fn oracle_enumerate_with_budget(
    q: FieldOrder,
    max_degree: u32,
    budget: u64,
) -> Result<OracleFactorTable> {
    if q.q() > ORACLE_MAX_Q {
        return Err(Error::Domain(format!(
            "the enumeration oracle supports q <= {ORACLE_MAX_Q}, got {q}"
        )));
    }
    if max_degree > ORACLE_MAX_DEGREE {
        return Err(Error::Domain(format!(
            "the enumeration oracle supports degree <= {ORACLE_MAX_DEGREE}, got {max_degree}"
        )));
    }
    let mut total = 0u64;
    for n in 0..=max_degree {
        total = total.saturating_add(q.q().saturating_pow(n));
    }
    if total > budget {
        return Err(Error::Budget(format!(
            "enumerating degree <= {max_degree} over F_{q} visits {total} polynomials, budget is {budget}"
        )));
    }

    let field = Field::new(q);
    let qq = q.q();
    let d_max = max_degree as usize;

    // Sieve: mark every product f*g with f irreducible, deg f <= deg g.
    let mut irreducibles: Vec<Vec<u64>> = vec![Vec::new(); d_max + 1];
    for n in 1..=max_degree {
        let count = qq.pow(n) as usize;
        let mut reducible = vec![false; count];
        for a in 1..=n / 2 {
            for &fi in &irreducibles[a as usize] {
                let f = field.poly(a, fi);
                for gi in 0..qq.pow(n - a) {
                    let g = field.poly(n - a, gi);
                    reducible[field.index(&field.poly_mul(&f, &g)) as usize] = true;
                }
            }
        }
        irreducibles[n as usize] = (0..count as u64)
            .filter(|&i| !reducible[i as usize])
            .collect();
    }

    let mut table = OracleFactorTable {
        q,
        field,
        max_degree,
        irreducibles,
        records: Vec::with_capacity(d_max + 1),
        pi_k: vec![vec![0; d_max + 1]; d_max + 1],
        pi_star_k: vec![vec![0; d_max + 1]; d_max + 1],
        by_max: vec![vec![vec![0; d_max + 1]; d_max + 1]; d_max + 1],
    };
    for n in 0..=max_degree {
        let mut row = Vec::with_capacity(qq.pow(n) as usize);
        for idx in 0..qq.pow(n) {
            let factors = table.factorization(n, idx).expect("index in range");
            let omega: u32 = factors.iter().map(|f| f.2).sum();
            let max_deg = factors.iter().map(|f| f.0).max().unwrap_or(0);
            let squarefree = factors.iter().all(|f| f.2 == 1);
            let rec = FactorRecord {
                factors: omega as u8,
                max_factor_degree: max_deg as u8,
                squarefree,
            };
            let (k, nn, d) = (omega as usize, n as usize, max_deg as usize);
            table.pi_k[k][nn] += 1;
            if squarefree {
                table.pi_star_k[k][nn] += 1;
            }
            table.by_max[k][nn][d] += 1;
            row.push(rec);
        }
        table.records.push(row);
    }
    Ok(table)
}

impl OracleFactorTable {
    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Irreducibles of degree `n` found by the sieve.
    pub fn irreducible_count(&self, n: u32) -> u64 {
        self.irreducibles
            .get(n as usize)
            .map_or(0, |v| v.len() as u64)
    }

    /// Monic degree-`n` polynomials with exactly `k` irreducible factors.
    pub fn pi_k(&self, k: u32, n: u32) -> u64 {
        self.pi_k
            .get(k as usize)
            .and_then(|r| r.get(n as usize))
            .copied()
            .unwrap_or(0)
    }

    /// The squarefree ones among [`OracleFactorTable::pi_k`].
    pub fn pi_star_k(&self, k: u32, n: u32) -> u64 {
        self.pi_star_k
            .get(k as usize)
            .and_then(|r| r.get(n as usize))
            .copied()
            .unwrap_or(0)
    }

    /// Those among [`OracleFactorTable::pi_k`] whose factors all have degree
    /// `<= m`.
    pub fn psi(&self, k: u32, n: u32, m: u32) -> u64 {
        let Some(cell) = self.by_max.get(k as usize).and_then(|r| r.get(n as usize)) else {
            return 0;
        };
        cell.iter().take(m as usize + 1).sum()
    }

    pub fn record(&self, n: u32, index: u64) -> Option<FactorRecord> {
        self.records.get(n as usize)?.get(index as usize).copied()
    }

    /// Trial division of the monic polynomial `(n, index)` by the sieved
    /// irreducibles in increasing degree. Returns `(degree, index,
    /// multiplicity)` triples.
    pub fn factorization(&self, n: u32, index: u64) -> Option<Vec<(u32, u64, u32)>> {
        if n > self.max_degree || index >= self.q.q().pow(n) {
            return None;
        }
        let mut h = self.field.poly(n, index);
        let mut out = Vec::new();
        let mut a = 1u32;
        while 2 * a < h.len() as u32 {
            for &fi in &self.irreducibles[a as usize] {
                let f = self.field.poly(a, fi);
                let mut mult = 0;
                while let Some(quot) = self.field.poly_div_exact(&h, &f) {
                    h = quot;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((a, fi, mult));
                }
            }
            a += 1;
        }
        if h.len() > 1 {
            let d = h.len() as u32 - 1;
            match out
                .iter_mut()
                .find(|f| f.0 == d && f.1 == self.field.index(&h))
            {
                Some(f) => f.2 += 1,
                None => out.push((d, self.field.index(&h), 1)),
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fo(q: u64) -> FieldOrder {
        FieldOrder::new(q).unwrap()
    }

    #[test]
    fn field_axioms() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(fo(q));
            for a in 0..q as u8 {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert!(
                        (0..q as u8).any(|b| f.mul(a, b) == 1),
                        "q={q} a={a} has no inverse"
                    );
                }
                for b in 0..q as u8 {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q as u8 {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn cubics_over_f2() {
        let t = oracle_enumerate(fo(2), 4).unwrap();
        assert_eq!(t.irreducible_count(3), 2);
        // x^3 + x + 1 and x^3 + x^2 + 1, low coefficients (1,1,0) and (1,0,1)
        assert_eq!(t.irreducibles[3], vec![0b011, 0b101]);
        assert_eq!(t.irreducible_count(4), 3);
    }

    #[test]
    fn totals_and_degree_zero() {
        let t = oracle_enumerate(fo(4), 5).unwrap();
        for n in 0..=5u32 {
            let total: u64 = (0..=n).map(|k| t.pi_k(k, n)).sum();
            assert_eq!(total, 4u64.pow(n));
            for k in 0..=n {
                assert!(t.pi_star_k(k, n) <= t.pi_k(k, n));
            }
        }
        assert_eq!(t.pi_k(0, 0), 1);
        assert_eq!(
            t.record(0, 0).unwrap(),
            FactorRecord {
                factors: 0,
                max_factor_degree: 0,
                squarefree: true
            }
        );
    }

    #[test]
    fn factorization_multiplies_back() {
        let t = oracle_enumerate(fo(3), 6).unwrap();
        for idx in 0..3u64.pow(6) {
            let mut prod = vec![1u8];
            for (d, i, m) in t.factorization(6, idx).unwrap() {
                for _ in 0..m {
                    prod = t.field.poly_mul(&prod, &t.field.poly(d, i));
                }
            }
            assert_eq!(prod, t.field.poly(6, idx));
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(oracle_enumerate(fo(11), 2), Err(Error::Domain(_))));
        assert!(matches!(oracle_enumerate(fo(2), 16), Err(Error::Domain(_))));
        assert!(matches!(oracle_enumerate(fo(9), 15), Err(Error::Budget(_))));
        assert!(matches!(
            oracle_enumerate_with_budget(fo(2), 10, 100),
            Err(Error::Budget(_))
        ));
    }
}
