use std::cmp::Ordering;

use rug::Integer;

use super::IrreducibleCountTable;
use crate::error::{Error, Result};
use crate::exact::FieldOrder;

/// `Psi_k(n, m)`: monic degree-`n` polynomials with exactly `k` irreducible
/// factors (with multiplicity), all of degree at most `m`.
///
/// Rows run over `0 <= k <= k_max`; row `k` stores `n = 0..=k*m`, outside of
/// which the count is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothCountTable {
    q: FieldOrder,
    m: u32,
    pi: Vec<Integer>,
    rows: Vec<Vec<Integer>>,
}

impl SmoothCountTable {
    /// Runs the degree-by-degree DP. After processing degrees `1..=j`,
    ///
    /// `Psi_k(n) = sum_l C(l + pi(j) - 1, l) Psi'_{k-l}(n - j l)`
    ///
    /// where `Psi'` is the table for degrees `< j`. Rows are updated in place
    /// from the top down so every read still sees `Psi'`.
    pub fn new(pi: &IrreducibleCountTable, k_max: u32, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Zero {
                what: "smoothness bound",
            });
        }
        if pi.max_degree() < m {
            return Err(Error::MissingTable(format!(
                "smooth counts need pi_{}(n) for n <= {m}, table stops at {}",
                pi.q(),
                pi.max_degree()
            )));
        }
        let km = k_max as usize;
        let mu = m as usize;
        let mut rows: Vec<Vec<Integer>> =
            (0..=km).map(|k| vec![Integer::new(); k * mu + 1]).collect();
        rows[0][0] = Integer::from(1);
        for j in 1..=mu {
            let p = pi.get(j as u32).expect("checked above");
            let mut c = Vec::with_capacity(km + 1);
            c.push(Integer::from(1));
            for l in 1..=km {
                let mut next = &c[l - 1] * Integer::from(p + (l as u64 - 1));
                next.div_exact_u_mut(l as u32);
                c.push(next);
            }
            for kp in (1..=km).rev() {
                let (lower, upper) = rows.split_at_mut(kp);
                let row = &mut upper[0];
                for n in kp..=kp * j {
                    let slot = &mut row[n];
                    for (l, cl) in c.iter().enumerate().take(kp + 1).skip(1) {
                        if j * l > n {
                            break;
                        }
                        let (sk, sn) = (kp - l, n - j * l);
                        let in_support = if sk == 0 {
                            sn == 0
                        } else {
                            sk <= sn && sn <= sk * (j - 1)
                        };
                        if in_support {
                            *slot += cl * &lower[sk][sn];
                        }
                    }
                }
            }
        }
        Ok(SmoothCountTable {
            q: pi.q(),
            m,
            pi: pi.counts()[..mu].to_vec(),
            rows,
        })
    }

    /// Builds the irreducible counts and the DP in one go.
    pub fn build(q: FieldOrder, k_max: u32, m: u32) -> Result<Self> {
        let pi = IrreducibleCountTable::new(q, m.max(1))?;
        Self::new(&pi, k_max, m)
    }

    /// Wraps externally supplied rows (`rows[k][n]`, `n <= k*m`) after
    /// structural checks, comparing row 1 with Gauss's formula and sampling the
    /// log-derivative identity.
    pub fn from_rows(q: FieldOrder, m: u32, rows: Vec<Vec<Integer>>) -> Result<Self> {
        let bad = |why: String| {
            Err(Error::Domain(format!(
                "smooth table for q = {q}, m = {m}: {why}"
            )))
        };
        if m == 0 || rows.is_empty() {
            return bad("empty".into());
        }
        for (k, row) in rows.iter().enumerate() {
            if row.len() != k * m as usize + 1 {
                return bad(format!("row {k} has {} entries", row.len()));
            }
            if row.iter().any(|x| x.cmp0() == Ordering::Less) {
                return bad(format!("row {k} has a negative entry"));
            }
            if row.iter().take(k).any(|x| x.cmp0() != Ordering::Equal) {
                return bad(format!("row {k} is nonzero below degree {k}"));
            }
        }
        if rows[0][0] != 1 {
            return bad("row 0 must be [1]".into());
        }
        let pi = IrreducibleCountTable::new(q, m)?;
        let table = SmoothCountTable {
            q,
            m,
            pi: pi.counts().to_vec(),
            rows,
        };
        if let Some(row1) = table.rows.get(1) {
            if row1[0] != 0 || row1[1..] != *pi.counts() {
                return bad("row 1 disagrees with Gauss's formula".into());
            }
        }
        let k_max = table.k_max();
        for k in 2..=k_max {
            let top = k * m;
            let stride = (top / 7).max(1);
            let mut n = k;
            while n <= top {
                if !table.log_derivative_holds(k, n) {
                    return bad(format!("log-derivative identity fails at k = {k}, n = {n}"));
                }
                n += stride;
            }
            if !table.log_derivative_holds(k, top) {
                return bad(format!(
                    "log-derivative identity fails at k = {k}, n = {top}"
                ));
            }
        }
        Ok(table)
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn smoothness(&self) -> u32 {
        self.m
    }

    pub fn k_max(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    /// Row `k`, indexed by degree `0..=k*m`.
    pub fn row(&self, k: u32) -> Option<&[Integer]> {
        self.rows.get(k as usize).map(Vec::as_slice)
    }

    pub fn rows(&self) -> &[Vec<Integer>] {
        &self.rows
    }

    /// `Psi_k(n, m)`; zero outside the support, `None` if `k > k_max`.
    pub fn get(&self, k: u32, n: u32) -> Option<Integer> {
        let row = self.rows.get(k as usize)?;
        Some(row.get(n as usize).cloned().unwrap_or_default())
    }

    /// Checks `k Psi_k(n) = sum_{r>=1} sum_{j<=m} pi(j) Psi_{k-r}(n - j r)`,
    /// which follows from differentiating the log of the generating
    /// function. It shares no code path with the DP.
    pub fn log_derivative_holds(&self, k: u32, n: u32) -> bool {
        if k == 0 || k > self.k_max() {
            return false;
        }
        let mut rhs = Integer::new();
        for r in 1..=k {
            let row = &self.rows[(k - r) as usize];
            for j in 1..=self.m {
                let shift = j * r;
                if shift > n {
                    break;
                }
                if let Some(v) = row.get((n - shift) as usize) {
                    rhs += &self.pi[j as usize - 1] * v;
                }
            }
        }
        let lhs = self.rows[k as usize]
            .get(n as usize)
            .map_or(Integer::new(), Clone::clone)
            * k;
        lhs == rhs
    }
}

/// `Psi_k(n, m)` for a single cell.
pub fn smooth_count(q: FieldOrder, k: u32, n: u32, m: u32) -> Result<Integer> {
    if m == 0 {
        return Err(Error::Zero {
            what: "smoothness bound",
        });
    }
    if k == 0 || n < k || n > k.saturating_mul(m) {
        return Ok(Integer::from(u32::from(k == 0 && n == 0)));
    }
    let m = m.min(n);
    Ok(SmoothCountTable::build(q, k, m)?
        .get(k, n)
        .unwrap_or_default())
}
