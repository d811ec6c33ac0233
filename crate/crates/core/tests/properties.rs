use ffsum_core::analytic::{mertens_coefficient, MordellTable};
use ffsum_core::bounds::{
    banks_martin_scan, fkq_lower_bound, fkq_upper_bound, lemma_bracket_check, Comparison, Verdict,
};
use ffsum_core::counting::IrreducibleCountTable;
use ffsum_core::exact::{divisors, harmonic, moebius, power_harmonic};
use ffsum_core::{
    enclosure_arith, erdos_sum_irreducibles, mordell, Enclosure, EnclosureOp, FieldOrder,
    FkqEngine, MordellCache, MordellKey, MordellValue, PrecisionConfig,
};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

fn fo(q: u64) -> FieldOrder {
    FieldOrder::new(q).unwrap()
}

fn prime_powers(hi: u64) -> Vec<u64> {
    (2..=hi).filter(|&q| FieldOrder::new(q).is_ok()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moebius_divisor_sum(n in 1u64..2_000_000) {
        let s: i64 = divisors(n).unwrap().into_iter().map(|d| moebius(d).unwrap() as i64).sum();
        prop_assert_eq!(s, i64::from(n == 1));
    }

    #[test]
    fn necklace_identity(qi in 0usize..18, n in 1u32..=80) {
        let q = prime_powers(64)[qi];
        let t = IrreducibleCountTable::new(fo(q), n).unwrap();
        prop_assert!(t.necklace_holds(n));
        let total: Integer = divisors(n as u64).unwrap().into_iter()
            .map(|d| Integer::from(t.get(d as u32).unwrap() * d as u32)).sum();
        prop_assert_eq!(total, fo(q).pow(n));
    }

    #[test]
    fn mordell_one_step(k in 0u32..=5, n in 2u32..=6, a in 0u64..=10) {
        prop_assume!(!(k == 0 && a == 0));
        let cfg = PrecisionConfig::new(160).unwrap();
        let mut cache = MordellCache::new();
        let lhs = mordell(MordellKey::new(k, n, a).unwrap(), &cfg, &mut cache).unwrap();
        // evaluate the right side with a fresh cache, term by term
        let mut fresh = MordellCache::new();
        let m = n - 1;
        let mut exact = Rational::new();
        let mut approx = Enclosure::zero(160);
        let mut all_exact = true;
        for i in 0..=k {
            let sub = mordell(MordellKey::new(k - i, m, a + (i * m) as u64).unwrap(), &cfg, &mut fresh).unwrap();
            let c = Rational::from((Integer::from(Integer::binomial_u(k, i)), Integer::from(m).pow(i)));
            let c = if i % 2 == 1 { -c } else { c };
            match sub {
                MordellValue::Exact(r) => exact += r * &c,
                MordellValue::Approx(e) => {
                    all_exact = false;
                    approx = approx.add(&e.mul(&Enclosure::from_rational(&c, 160)));
                }
            }
        }
        let rhs = approx.add(&Enclosure::from_rational(&exact, 160));
        if a >= 1 {
            prop_assert!(all_exact);
            prop_assert_eq!(lhs.as_exact().unwrap(), &exact);
        } else {
            prop_assert!(lhs.to_enclosure(160).overlaps(&rhs));
        }
        let table = MordellTable::build(7, n, 6, &cfg).unwrap();
        prop_assert!(table.get(k, a).unwrap().overlaps(&lhs.to_enclosure(160)));
    }

    #[test]
    fn mordell_k1_closed_form(n in 1u32..=40, a in 1u64..=40) {
        // sum_{m>=N} 1/(m(m+a)) = (H_{N+a-1} - H_{N-1}) / a
        let cfg = PrecisionConfig::new(128).unwrap();
        let mut cache = MordellCache::new();
        let v = mordell(MordellKey::new(1, n, a).unwrap(), &cfg, &mut cache).unwrap();
        let want = (harmonic(n as u64 + a - 1).unwrap() - power_harmonic(n as u64 - 1, 1)) / Integer::from(a);
        prop_assert_eq!(v.as_exact().unwrap(), &want);
    }

    #[test]
    fn enclosure_nesting_under_doubling(
        a in -1000i64..1000, b in 1i64..1000, c in 1i64..1000, d in 1i64..1000, bits in 64u32..400,
    ) {
        let x = Rational::from((a, b));
        let y = Rational::from((c, d));
        for op in [EnclosureOp::Add, EnclosureOp::Sub, EnclosureOp::Mul, EnclosureOp::Div] {
            let exact = match op {
                EnclosureOp::Add => Rational::from(&x + &y),
                EnclosureOp::Sub => Rational::from(&x - &y),
                EnclosureOp::Mul => Rational::from(&x * &y),
                _ => Rational::from(&x / &y),
            };
            let at = |p: u32| {
                let args = [Enclosure::from_rational(&x, p), Enclosure::from_rational(&y, p)];
                enclosure_arith(op, &args).unwrap()
            };
            let coarse = at(bits);
            let fine = at(2 * bits);
            prop_assert!(coarse.contains_rational(&exact) && fine.contains_rational(&exact));
            prop_assert!(fine.width() <= coarse.width());
            prop_assert!(coarse.overlaps(&fine));
        }
        let e = Enclosure::from_rational(&y, bits);
        let le = e.ln().unwrap().exp();
        let le2 = Enclosure::from_rational(&y, 2 * bits).ln().unwrap().exp();
        prop_assert!(le.contains_rational(&y) && le2.contains_rational(&y) && le2.width() <= le.width());
    }

    #[test]
    fn coefficient_size(n in 1u32..=40, j in 0u64..=120) {
        let c = mertens_coefficient(n, j).unwrap();
        let half = harmonic(n as u64).unwrap() / 2u32;
        prop_assert!(j == 0 || Rational::from(c.abs_ref()) <= half);
    }
}

#[test]
fn coefficients_vanish() {
    for n in 1..=60u32 {
        assert_eq!(
            mertens_coefficient(n, 0).unwrap(),
            harmonic(n as u64).unwrap()
        );
        for j in 1..=(n / 2) as u64 {
            assert_eq!(mertens_coefficient(n, j).unwrap(), 0, "n={n} j={j}");
        }
    }
}

#[test]
fn lemma_bracket() {
    let cfg = PrecisionConfig::new(256).unwrap();
    for q in 2..=9u64 {
        let Ok(fq) = FieldOrder::new(q) else { continue };
        for n in 1..=40 {
            assert_eq!(
                lemma_bracket_check(fq, n, &cfg).unwrap().verdict,
                Verdict::Holds,
                "q={q} n={n}"
            );
        }
    }
}

#[test]
fn irreducible_sum_increases_with_q() {
    let cfg = PrecisionConfig::new(128).unwrap();
    let values: Vec<Enclosure> = prime_powers(64)
        .into_iter()
        .map(|q| erdos_sum_irreducibles(fo(q), 80, &cfg).unwrap())
        .collect();
    for w in values.windows(2) {
        assert!(w[0].hi() < w[1].lo());
    }
}

#[test]
fn fkq_nests_in_degree_bound() {
    let cfg = PrecisionConfig::new(192).unwrap();
    for q in [2u64, 3, 5] {
        let coarse = FkqEngine::new(fo(q), 4, 20, &cfg).unwrap();
        let fine = FkqEngine::new(fo(q), 4, 45, &cfg).unwrap();
        for k in 1..=4 {
            let c = coarse.sum(k).unwrap();
            let f = fine.sum(k).unwrap();
            assert!(c.value.overlaps(&f.value), "q={q} k={k}");
            let d = c.certified_digits().min(f.certified_digits());
            assert_eq!(
                c.value.truncated_decimal(d).unwrap(),
                f.value.truncated_decimal(d).unwrap()
            );
            assert!(f.value.width() < c.value.width());
        }
    }
}

#[test]
fn sandwich_between_closed_form_bounds() {
    let cfg = PrecisionConfig::new(128).unwrap();
    for q in prime_powers(16) {
        let e = FkqEngine::new(fo(q), 10, 30, &cfg).unwrap();
        for k in 2..=10 {
            let v = e.sum(k).unwrap().value;
            let lo = fkq_lower_bound(fo(q), k, &cfg).unwrap();
            let hi = fkq_upper_bound(fo(q), k, &cfg).unwrap();
            assert!(lo.lo() <= v.hi() && v.lo() <= hi.hi(), "q={q} k={k}");
        }
    }
}

#[test]
fn gap_to_one_halves_for_q2() {
    let cfg = PrecisionConfig::new(256).unwrap();
    let e = FkqEngine::new(fo(2), 31, 64, &cfg).unwrap();
    let one = Enclosure::one(256);
    let gaps: Vec<Enclosure> = (10..=30)
        .map(|k| one.sub(&e.sum(k).unwrap().value))
        .collect();
    for (i, w) in gaps.windows(2).enumerate() {
        let ratio = w[0].div(&w[1]).unwrap();
        assert!(
            ratio.lo().to_f64() > 1.5 && ratio.hi().to_f64() < 3.0,
            "k = {}",
            i + 10
        );
    }
}

#[test]
fn comparisons_stable_under_doubling() {
    let q = fo(3);
    let base = banks_martin_scan(q, 8, 40, &PrecisionConfig::new(128).unwrap()).unwrap();
    let doubled = banks_martin_scan(q, 8, 40, &PrecisionConfig::new(256).unwrap()).unwrap();
    for (a, b) in base.steps.iter().zip(&doubled.steps) {
        if *a != Comparison::Undecided {
            assert_eq!(a, b);
        }
    }
    assert_eq!(base.local_minima, doubled.local_minima);
}
