use rug::Integer;

use super::{irreducible_count, oracle_enumerate, IrreducibleCountTable, SmoothCountTable};
use crate::error::Result;
use crate::exact::{factorial, FieldOrder};

/// Brute-force enumeration compared against the formula-based counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCheck {
    pub q: FieldOrder,
    pub max_degree: u32,
    /// Number of individual equalities and inequalities evaluated.
    pub checks: u64,
    /// One line per violated check; empty when everything agrees.
    pub failures: Vec<String>,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Enumerates every monic polynomial of degree `<= max_degree` and checks:
///
/// * the sieved irreducible counts against Gauss's formula,
/// * `Psi'_k(n, m)` from the DP against the enumeration, for all `k, n, m`,
/// * `k! pi*_k(n) <= sum_{j_1+..+j_k=n} pi(j_1)..pi(j_k) <= k! pi_k(n)`,
/// * `sum_k pi_k(n) = q^n`.
pub fn oracle_consistency(q: FieldOrder, max_degree: u32) -> Result<OracleCheck> {
    let oracle = oracle_enumerate(q, max_degree)?;
    let d = max_degree;
    let mut checks = 0u64;
    let mut failures = Vec::new();
    let mut expect = |ok: bool, what: String| {
        checks += 1;
        if !ok {
            failures.push(what);
        }
    };

    for n in 1..=d {
        let gauss = irreducible_count(&q, n)?;
        let seen = oracle.irreducible_count(n);
        expect(
            gauss == seen,
            format!("pi({n}): formula {gauss}, enumeration {seen}"),
        );
    }
    if d == 0 {
        return Ok(OracleCheck {
            q,
            max_degree,
            checks,
            failures,
        });
    }

    let pi = IrreducibleCountTable::new(q, d)?;
    for m in 1..=d {
        let table = SmoothCountTable::new(&pi, d, m)?;
        for k in 0..=d {
            for n in 0..=d {
                let dp = table.get(k, n).unwrap_or_default();
                let seen = oracle.psi(k, n, m);
                expect(
                    dp == seen,
                    format!("Psi'_{k}({n}, {m}): DP {dp}, enumeration {seen}"),
                );
            }
        }
    }

    for n in 0..=d {
        let total: u64 = (0..=n).map(|k| oracle.pi_k(k, n)).sum();
        expect(
            q.pow(n) == total,
            format!("sum_k pi_k({n}) = {total}, expected {}", q.pow(n)),
        );
        for k in 1..=n {
            let tuples = pi.ordered_tuples(k, n)?;
            let f = factorial(k);
            let all = Integer::from(oracle.pi_k(k, n)) * &f;
            let sqf = Integer::from(oracle.pi_star_k(k, n)) * &f;
            expect(
                tuples <= all,
                format!("k! pi_{k}({n}) = {all} is below the tuple sum {tuples}"),
            );
            expect(
                sqf <= tuples,
                format!("k! pi*_{k}({n}) = {sqf} exceeds the tuple sum {tuples}"),
            );
        }
    }
    Ok(OracleCheck {
        q,
        max_degree,
        checks,
        failures,
    })
}
