use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{divisors, moebius, FieldOrder};

/// Number of monic irreducibles of degree `n` over `F_q`, by Gauss's formula
/// `(1/n) sum_{d|n} mu(n/d) q^d`.
///
/// # Panics
///
/// If the Möbius sum is not divisible by `n`, which can only mean an
/// arithmetic bug.
pub fn irreducible_count(q: &FieldOrder, n: u32) -> Result<Integer> {
    if n == 0 {
        return Err(Error::Zero { what: "degree" });
    }
    let mut sum = Integer::new();
    for d in divisors(n as u64)? {
        match moebius(n as u64 / d)? {
            1 => sum += q.pow(d as u32),
            -1 => sum -= q.pow(d as u32),
            _ => {}
        }
    }
    assert!(
        sum.is_divisible_u(n),
        "Gauss sum for q = {q}, n = {n} is not divisible by n"
    );
    sum.div_exact_u_mut(n);
    Ok(sum)
}

/// Two-sided bounds `q^n/n - (q/(q-1)) q^{n/2}/n <= pi(n) <= q^n/n`.
///
/// For odd `n` the `q^{n/2}` is replaced by `q^{(n+1)/2}`, which only lowers
/// the lower bound and keeps everything rational.
pub fn irreducible_count_bounds(q: &FieldOrder, n: u32) -> Result<(Rational, Rational)> {
    if n == 0 {
        return Err(Error::Zero { what: "degree" });
    }
    let upper = Rational::from((q.pow(n), Integer::from(n)));
    let half = q.pow(n.div_ceil(2));
    let correction = Rational::from((half * q.q(), Integer::from(q.q() - 1) * n));
    Ok((Rational::from(&upper - &correction), upper))
}

/// `pi_q(n)` for every `1 <= n <= N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibleCountTable {
    q: FieldOrder,
    counts: Vec<Integer>,
}

impl IrreducibleCountTable {
    pub fn new(q: FieldOrder, max_degree: u32) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::Zero { what: "max degree" });
        }
        let powers: Vec<Integer> = (0..=max_degree).map(|d| q.pow(d)).collect();
        let mu: Vec<i8> = (1..=max_degree as u64)
            .map(|m| moebius(m).expect("m >= 1"))
            .collect();
        let mut counts = Vec::with_capacity(max_degree as usize);
        for n in 1..=max_degree {
            let mut sum = Integer::new();
            for d in divisors(n as u64)? {
                match mu[(n as u64 / d) as usize - 1] {
                    1 => sum += &powers[d as usize],
                    -1 => sum -= &powers[d as usize],
                    _ => {}
                }
            }
            assert!(
                sum.is_divisible_u(n),
                "Gauss sum for q = {q}, n = {n} is not divisible by n"
            );
            sum.div_exact_u_mut(n);
            counts.push(sum);
        }
        Ok(IrreducibleCountTable { q, counts })
    }

    /// Wraps externally supplied counts (`counts[n-1] = pi(n)`) after
    /// checking the necklace identity at every degree.
    pub fn from_counts(q: FieldOrder, counts: Vec<Integer>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Zero { what: "max degree" });
        }
        let table = IrreducibleCountTable { q, counts };
        for n in 1..=table.max_degree() {
            if !table.necklace_holds(n) {
                return Err(Error::Domain(format!(
                    "counts for q = {q} violate the necklace identity at n = {n}"
                )));
            }
        }
        Ok(table)
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn max_degree(&self) -> u32 {
        self.counts.len() as u32
    }

    /// `pi(n)`, or `None` outside `1..=N`.
    pub fn get(&self, n: u32) -> Option<&Integer> {
        if n == 0 {
            return None;
        }
        self.counts.get(n as usize - 1)
    }

    /// Counts indexed from degree 1.
    pub fn counts(&self) -> &[Integer] {
        &self.counts
    }

    /// `sum_{d|n} d pi(d) == q^n`.
    pub fn necklace_holds(&self, n: u32) -> bool {
        if n == 0 || n > self.max_degree() {
            return false;
        }
        let mut sum = Integer::new();
        for d in divisors(n as u64).expect("n >= 1") {
            sum += Integer::from(&self.counts[d as usize - 1] * d);
        }
        sum == self.q.pow(n)
    }

    /// `sum_{j_1 + ... + j_k = n, j_i >= 1} prod pi(j_i)`: ordered k-tuples of
    /// irreducibles (repeats allowed) with total degree `n`.
    pub fn ordered_tuples(&self, k: u32, n: u32) -> Result<Integer> {
        let n = n as usize;
        let mut row = vec![Integer::new(); n + 1];
        row[0] = Integer::from(1);
        for _ in 0..k {
            let mut next = vec![Integer::new(); n + 1];
            for (total, slot) in next.iter_mut().enumerate().skip(1) {
                for j in 1..=total {
                    let Some(p) = self.get(j as u32) else {
                        return Err(Error::MissingTable(format!(
                            "pi_{}({j}) beyond degree {}",
                            self.q,
                            self.max_degree()
                        )));
                    };
                    if row[total - j].cmp0() != std::cmp::Ordering::Equal {
                        *slot += Integer::from(p * &row[total - j]);
                    }
                }
            }
            row = next;
        }
        Ok(row.swap_remove(n))
    }
}
