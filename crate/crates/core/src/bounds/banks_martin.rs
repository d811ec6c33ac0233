use rayon::prelude::*;

use super::Comparison;
use crate::analytic::{FkqEngine, SumResult};
use crate::error::{Error, Result};
use crate::exact::FieldOrder;
use crate::numerics::{Enclosure, PrecisionConfig};

/// Certified values of `F(I_{k,q})` for `k = 1..=k_max` and how they order.
#[derive(Debug, Clone, PartialEq)]
pub struct BanksMartinReport {
    pub q: FieldOrder,
    pub k_max: u32,
    pub degree_bound: u32,
    /// `cells[k - 1]` is `F(I_{k,q})`.
    pub cells: Vec<SumResult>,
    /// `steps[k - 1]` compares `F(I_k)` with `F(I_{k+1})`.
    pub steps: Vec<Comparison>,
    /// `vs_one[k - 1]` compares `F(I_k)` with 1.
    pub vs_one: Vec<Comparison>,
    /// `k` with certified `F(I_{k-1}) > F(I_k) < F(I_{k+1})`.
    pub local_minima: Vec<u32>,
}

impl BanksMartinReport {
    pub fn value(&self, k: u32) -> Option<&Enclosure> {
        self.cells.get(k.checked_sub(1)? as usize).map(|c| &c.value)
    }

    /// Every step is a certified `>`.
    pub fn strictly_decreasing(&self) -> bool {
        self.steps.iter().all(|&c| c == Comparison::Greater)
    }

    pub fn all_above_one(&self) -> bool {
        self.vs_one.iter().all(|&c| c == Comparison::Greater)
    }

    /// `k` with certified `F(I_k) < F(I_{k+1})`.
    pub fn chain_failures(&self) -> Vec<u32> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == Comparison::Less)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    /// `k` where the comparison with `F(I_{k+1})` could not be decided.
    pub fn undecided(&self) -> Vec<u32> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == Comparison::Undecided)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }
}

pub fn banks_martin_scan(
    q: FieldOrder,
    k_max: u32,
    degree_bound: u32,
    cfg: &PrecisionConfig,
) -> Result<BanksMartinReport> {
    if k_max < 2 {
        return Err(Error::Domain(format!(
            "a scan needs k_max >= 2, got {k_max}"
        )));
    }
    let engine = FkqEngine::new(q, k_max, degree_bound, cfg)?;
    scan_engine(&engine)
}

/// The same scan over an engine that is already built.
pub fn scan_engine(engine: &FkqEngine) -> Result<BanksMartinReport> {
    let k_max = engine.k_max();
    let cells: Vec<SumResult> = (1..=k_max)
        .into_par_iter()
        .map(|k| engine.sum(k))
        .collect::<Result<_>>()?;
    let steps: Vec<Comparison> = cells
        .windows(2)
        .map(|w| Comparison::of(&w[0].value, &w[1].value))
        .collect();
    let one = Enclosure::one(engine.precision().bits());
    let vs_one = cells
        .iter()
        .map(|c| Comparison::of(&c.value, &one))
        .collect();
    let local_minima = (2..k_max)
        .filter(|&k| {
            steps[k as usize - 2] == Comparison::Greater
                && steps[k as usize - 1] == Comparison::Less
        })
        .collect();
    Ok(BanksMartinReport {
        q: engine.q(),
        k_max,
        degree_bound: engine.degree_bound(),
        cells,
        steps,
        vs_one,
        local_minima,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q2_minimum_at_four() {
        let cfg = PrecisionConfig::new(128).unwrap();
        let r = banks_martin_scan(FieldOrder::new(2).unwrap(), 7, 60, &cfg).unwrap();
        assert_eq!(r.local_minima, vec![4]);
        assert_eq!(r.chain_failures(), vec![4, 5, 6]);
        assert!(r.undecided().is_empty());
        assert_eq!(
            r.value(4).unwrap().truncated_decimal(6).unwrap(),
            "0.956237"
        );
        assert!(!r.all_above_one());
        assert!(banks_martin_scan(FieldOrder::new(2).unwrap(), 1, 60, &cfg).is_err());
    }
}
