//! Closed-form bounds on the Erdős sums and checkers for the numeric claims
//! built on them. Every checker answers with a three-valued [`Verdict`].

mod banks_martin;
mod closed_form;
mod mertens_checks;
mod qk;
mod universal;

use std::fmt;

use crate::numerics::Enclosure;

pub use banks_martin::{banks_martin_scan, scan_engine, BanksMartinReport};
pub use closed_form::{fkq_lower_bound, fkq_upper_bound, irreducible_sum_bounds};
pub use mertens_checks::{
    lemma_bracket_check, mertens_bounds_check, LemmaBracketCheck, MertensCheck,
};
pub use qk::{chain_condition, k2_condition, qk_bound, QkBoundResult};
pub use universal::{limit_constant, q2_constant, universal_bound_check, UniversalBound};

/// Outcome of checking a strict inequality with intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    /// `a < b`: holds when `a.hi < b.lo`, fails when `a.lo >= b.hi`.
    pub fn less(a: &Enclosure, b: &Enclosure) -> Verdict {
        if a.hi() < b.lo() {
            Verdict::Holds
        } else if a.lo() >= b.hi() {
            Verdict::Fails
        } else {
            Verdict::Undecided
        }
    }

    /// `a <= b`: holds when `a.hi <= b.lo`, fails when `a.lo > b.hi`.
    pub fn less_eq(a: &Enclosure, b: &Enclosure) -> Verdict {
        if a.hi() <= b.lo() {
            Verdict::Holds
        } else if a.lo() > b.hi() {
            Verdict::Fails
        } else {
            Verdict::Undecided
        }
    }

    /// Fails beats undecided beats holds.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            _ => Verdict::Holds,
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Certified order of two enclosures; equal values are never certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Greater,
    Less,
    Undecided,
}

impl Comparison {
    pub fn of(a: &Enclosure, b: &Enclosure) -> Comparison {
        if a.lo() > b.hi() {
            Comparison::Greater
        } else if a.hi() < b.lo() {
            Comparison::Less
        } else {
            Comparison::Undecided
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Greater => ">",
            Comparison::Less => "<",
            Comparison::Undecided => "?",
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let p = 64;
        let a = Enclosure::from_ratio(&1.into(), &3.into(), p).unwrap();
        let b = Enclosure::from_ratio(&1.into(), &2.into(), p).unwrap();
        assert_eq!(Verdict::less(&a, &b), Verdict::Holds);
        assert_eq!(Verdict::less(&b, &a), Verdict::Fails);
        assert_eq!(Verdict::less(&a, &a), Verdict::Undecided);
        let one = Enclosure::one(p);
        assert_eq!(Verdict::less_eq(&one, &one), Verdict::Holds);
        assert_eq!(Verdict::Holds.and(Verdict::Undecided), Verdict::Undecided);
        assert_eq!(Verdict::Undecided.and(Verdict::Fails), Verdict::Fails);
        assert_eq!(Comparison::of(&b, &a), Comparison::Greater);
        assert_eq!(Comparison::of(&a, &a.hull(&b)), Comparison::Undecided);
    }
}
