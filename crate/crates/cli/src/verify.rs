use ffsum_core::analytic::{erdos_sum_irreducibles, mertens_coefficient, FkqEngine};
use ffsum_core::bounds::{
    banks_martin_scan, chain_condition, fkq_lower_bound, fkq_upper_bound, irreducible_sum_bounds,
    k2_condition, lemma_bracket_check, limit_constant, mertens_bounds_check, q2_constant, qk_bound,
    universal_bound_check,
};
use ffsum_core::counting::oracle_consistency;
use ffsum_core::exact::harmonic;
use ffsum_core::{euler_gamma, Comparison, Enclosure, FieldOrder, PrecisionConfig, Verdict};
use rug::Rational;

use crate::{default_degree_bound, field, precision, Failure, Status, Suite, VerifyArgs};

/// Local minima of `k -> F(I_{k,q})` for the fields where the chain breaks.
const KNOWN_MINIMA: [(u64, u32, &str); 3] =
    [(2, 4, "0.956237"), (3, 6, "0.994968"), (4, 9, "0.999781")];

#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(Verdict, String)>,
    /// What to raise when something is undecided.
    hint: String,
}

impl Report {
    fn claim(&mut self, v: Verdict, text: impl Into<String>) {
        self.lines.push((v, text.into()));
    }

    fn count(&self, v: Verdict) -> usize {
        self.lines.iter().filter(|l| l.0 == v).count()
    }

    pub fn status(&self) -> Status {
        if self.count(Verdict::Fails) > 0 {
            Status::Failed
        } else if self.count(Verdict::Undecided) > 0 {
            Status::Undecided
        } else {
            Status::Ok
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (v, text) in &self.lines {
            out.push_str(&format!("{:<10} {text}\n", v.to_string()));
        }
        out.push_str(&format!(
            "summary: {} holds, {} fails, {} undecided\n",
            self.count(Verdict::Holds),
            self.count(Verdict::Fails),
            self.count(Verdict::Undecided)
        ));
        if self.count(Verdict::Undecided) > 0 {
            out.push_str(&format!("undecided results are limited by {}\n", self.hint));
        }
        out
    }
}

fn prime_powers(lo: u64, hi: u64) -> Vec<FieldOrder> {
    (lo..=hi).filter_map(|q| FieldOrder::new(q).ok()).collect()
}

fn all(it: impl IntoIterator<Item = Verdict>) -> Verdict {
    it.into_iter().fold(Verdict::Holds, Verdict::and)
}

pub fn verify(args: &VerifyArgs) -> Result<Status, Failure> {
    let cfg = precision(args.bits)?;
    let report = match args.suite {
        Suite::Mertens => mertens(args.qmax.unwrap_or(16), args.nmax.unwrap_or(40), &cfg)?,
        Suite::Lemma32 => coefficients(args.qmax.unwrap_or(9), args.nmax.unwrap_or(60), &cfg)?,
        Suite::BanksMartin => {
            let q = field(args.q.unwrap_or(2))?;
            let n = args
                .degree_bound
                .unwrap_or_else(|| default_degree_bound(q.q()));
            banks_martin(q, args.kmax.unwrap_or(10), n, &cfg)?
        }
        Suite::Bounds => bounds(
            args.qmax.unwrap_or(16),
            args.kmax.unwrap_or(10),
            args.degree_bound.unwrap_or(40),
            &cfg,
        )?,
        Suite::Universal => universal(
            args.qmax.unwrap_or(19),
            args.degree_bound.unwrap_or(60),
            &cfg,
        )?,
        Suite::Oracle => oracle(field(args.q.unwrap_or(2))?, args.maxdeg.unwrap_or(12))?,
    };
    print!("{}", report.render());
    Ok(report.status())
}

pub fn mertens(qmax: u64, nmax: u32, cfg: &PrecisionConfig) -> Result<Report, Failure> {
    let mut r = Report {
        hint: "--bits".into(),
        ..Default::default()
    };
    if nmax == 0 {
        return Err(Failure::usage("--nmax must be positive"));
    }
    for q in prime_powers(2, qmax) {
        let checks = (1..=nmax)
            .map(|n| mertens_bounds_check(q, n, cfg))
            .collect::<Result<Vec<_>, _>>()?;
        let upper = all(checks.iter().map(|c| c.upper_verdict));
        r.claim(
            upper,
            format!("Mertens upper bound P_n <= 1/(e^gamma n), q = {q}, 1 <= n <= {nmax}"),
        );
        let lower = all(checks
            .iter()
            .filter(|c| !c.is_known_exception())
            .map(|c| c.lower_verdict));
        r.claim(lower, format!("Mertens lower bound P_n > 1/(e^gamma (n+1)), q = {q}, 1 <= n <= {nmax}, except (2, 1)"));
        if let Some(c) = checks.iter().find(|c| c.is_known_exception()) {
            let v = match c.lower_verdict {
                Verdict::Fails => Verdict::Holds,
                Verdict::Holds => Verdict::Fails,
                Verdict::Undecided => Verdict::Undecided,
            };
            r.claim(
                v,
                "Mertens lower bound fails at the exceptional case q = 2, n = 1 (P_1 = 1/4)",
            );
        }
    }
    Ok(r)
}

pub fn coefficients(qmax: u64, nmax: u32, cfg: &PrecisionConfig) -> Result<Report, Failure> {
    let mut r = Report {
        hint: "--bits".into(),
        ..Default::default()
    };
    if nmax == 0 {
        return Err(Failure::usage("--nmax must be positive"));
    }
    let mut vanish = Verdict::Holds;
    let mut c0 = Verdict::Holds;
    let mut size = Verdict::Holds;
    for n in 1..=nmax {
        let h = harmonic(n as u64)?;
        if mertens_coefficient(n, 0)? != h {
            c0 = Verdict::Fails;
        }
        for j in 1..=(n / 2) as u64 {
            if mertens_coefficient(n, j)? != 0 {
                vanish = Verdict::Fails;
            }
        }
        let half = Rational::from(&h / 2u32);
        for j in 1..=3 * n as u64 {
            if Rational::from(mertens_coefficient(n, j)?.abs_ref()) > half {
                size = Verdict::Fails;
            }
        }
    }
    r.claim(c0, format!("c_0(n) = H_n exactly, n <= {nmax}"));
    r.claim(
        vanish,
        format!("c_j(n) = 0 exactly for 1 <= j <= floor(n/2), n <= {nmax}"),
    );
    r.claim(
        size,
        format!("|c_j(n)| <= H_n / 2 for 1 <= j <= 3n, n <= {nmax}"),
    );
    for q in prime_powers(2, qmax) {
        let v = all((1..=nmax)
            .map(|n| lemma_bracket_check(q, n, cfg).map(|c| c.verdict))
            .collect::<Result<Vec<_>, _>>()?);
        r.claim(v, format!("|log P_n| within (1 +- eps) H_n, eps = 1/(2(q-1)q^floor(n/2)), q = {q}, n <= {nmax}"));
    }
    Ok(r)
}

pub fn banks_martin(
    q: FieldOrder,
    k_max: u32,
    n: u32,
    cfg: &PrecisionConfig,
) -> Result<Report, Failure> {
    let mut r = Report {
        hint: "--degree-bound or --bits".into(),
        ..Default::default()
    };
    let scan = banks_martin_scan(q, k_max, n, cfg)?;
    for (i, cell) in scan.cells.iter().enumerate() {
        let next = scan.steps.get(i).map_or(String::new(), |c| {
            format!("  F(I_{}) {c} F(I_{})", i + 1, i + 2)
        });
        let digits = cell.certified_digits().min(19);
        let shown = cell
            .value
            .truncated_decimal(digits)
            .unwrap_or_else(|_| "undecided".into());
        println!("k = {:>3}  {shown}{next}", i + 1);
    }
    println!("local minima: {:?}", scan.local_minima);
    match KNOWN_MINIMA.iter().find(|m| m.0 == q.q()) {
        Some(&(_, k0, prefix)) => {
            let v = if k_max <= k0 {
                Verdict::Undecided
            } else {
                let decreasing = scan.steps[..k0 as usize - 1]
                    .iter()
                    .all(|&c| c == Comparison::Greater);
                let turn = scan.steps[k0 as usize - 1] == Comparison::Less;
                let value_ok = scan
                    .value(k0)
                    .and_then(|v| v.truncated_decimal(6).ok())
                    .is_some_and(|s| s == prefix);
                if scan.steps[..k0 as usize].contains(&Comparison::Undecided) {
                    Verdict::Undecided
                } else if decreasing && turn && value_ok {
                    Verdict::Holds
                } else {
                    Verdict::Fails
                }
            };
            r.claim(v, format!("F(I_k,{q}) decreases strictly up to a local minimum at k = {k0} with value {prefix}..."));
        }
        None => {
            let steps = all(scan.steps.iter().map(|&c| match c {
                Comparison::Greater => Verdict::Holds,
                Comparison::Less => Verdict::Fails,
                Comparison::Undecided => Verdict::Undecided,
            }));
            r.claim(
                steps,
                format!("F(I_1,{q}) > F(I_2,{q}) > ... > F(I_{k_max},{q})"),
            );
            let above = all(scan.vs_one.iter().map(|&c| match c {
                Comparison::Greater => Verdict::Holds,
                Comparison::Less => Verdict::Fails,
                Comparison::Undecided => Verdict::Undecided,
            }));
            r.claim(above, format!("F(I_k,{q}) > 1 for all k <= {k_max}"));
        }
    }
    Ok(r)
}

pub fn bounds(qmax: u64, k_max: u32, n: u32, cfg: &PrecisionConfig) -> Result<Report, Failure> {
    let mut r = Report {
        hint: "--degree-bound or --bits".into(),
        ..Default::default()
    };
    if k_max < 2 {
        return Err(Failure::usage("--kmax must be at least 2"));
    }
    let fields = prime_powers(2, qmax);
    let mut previous: Option<(FieldOrder, Enclosure)> = None;
    for &q in &fields {
        let f1 = erdos_sum_irreducibles(q, n, cfg)?;
        let (lo, hi) = irreducible_sum_bounds(q, cfg)?;
        r.claim(
            Verdict::less_eq(&lo, &f1).and(Verdict::less_eq(&f1, &hi)),
            format!("zeta(2) - q/(q-1) Li_2(q^-1/2) <= F(I_{q}) <= zeta(2)"),
        );
        if let Some((p, fp)) = &previous {
            r.claim(Verdict::less(fp, &f1), format!("F(I_{p}) < F(I_{q})"));
        }
        previous = Some((q, f1));
        let engine = FkqEngine::new(q, k_max, n, cfg)?;
        let mut sandwich = Verdict::Holds;
        for k in 2..=k_max {
            let v = engine.sum(k)?.value;
            sandwich = sandwich
                .and(Verdict::less_eq(&fkq_lower_bound(q, k, cfg)?, &v))
                .and(Verdict::less_eq(&v, &fkq_upper_bound(q, k, cfg)?));
        }
        r.claim(
            sandwich,
            format!("closed-form lower <= F(I_k,{q}) <= closed-form upper, 2 <= k <= {k_max}"),
        );
    }
    r.claim(
        k2_condition(11, cfg)?,
        "bounds alone give F(I_1,q) > F(I_2,q) at q = 11",
    );
    r.claim(
        chain_condition(413, 3, cfg)?,
        "bounds alone give F(I_2,q) > F(I_3,q) at q = 413",
    );
    for k in [4u32, 5] {
        let b = qk_bound(k, cfg)?;
        let bound = b.bound.expect("k >= 4");
        let threshold = b.quadratic_threshold.expect("k >= 4");
        r.claim(
            Verdict::less_eq(&threshold, &bound),
            format!("quadratic threshold <= 4.03 (k-1)^2 4^k zeta(k)^2 at k = {k}"),
        );
        let start = bound.hi().to_f64().ceil() as u64;
        let q = (start..)
            .find_map(|q| FieldOrder::new(q).ok())
            .expect("prime powers are unbounded");
        let mut chain = k2_condition(q.q(), cfg)?;
        for kp in 3..=k {
            chain = chain.and(chain_condition(q.q(), kp, cfg)?);
        }
        r.claim(
            chain,
            format!("bounds alone give F(I_1,q) > ... > F(I_{k},q) at q = {q}"),
        );
        let engine = FkqEngine::new(q, k, 12, cfg)?;
        let values = (1..=k)
            .map(|j| engine.sum(j).map(|s| s.value))
            .collect::<Result<Vec<_>, _>>()?;
        let certified = all(values.windows(2).map(|w| Verdict::less(&w[1], &w[0])));
        r.claim(
            certified,
            format!("certified F(I_1,q) > ... > F(I_{k},q) at q = {q}"),
        );
    }
    Ok(r)
}

pub fn universal(qmax: u64, tail_cutoff: u32, cfg: &PrecisionConfig) -> Result<Report, Failure> {
    let mut r = Report {
        hint: "--degree-bound or --bits".into(),
        ..Default::default()
    };
    for q in prime_powers(3, qmax) {
        let b = universal_bound_check(q, tail_cutoff, cfg)?;
        r.claim(
            b.verdict,
            format!(
                "B({q}) < e^gamma  (B in [{}, {}])",
                b.bound.lo_scientific(10),
                b.bound.hi_scientific(10)
            ),
        );
    }
    let prefix = |e: &Enclosure, want: &str| {
        if e.truncated_decimal(6).is_ok_and(|s| s == want) {
            Verdict::Holds
        } else if e.certified_digits().unwrap_or(0) >= 6 {
            Verdict::Fails
        } else {
            Verdict::Undecided
        }
    };
    r.claim(
        prefix(&euler_gamma(cfg).exp(), "1.781072"),
        "e^gamma = 1.781072...",
    );
    r.claim(
        prefix(&limit_constant(cfg), "1.800153"),
        "1 + e^(gamma-1) + (pi^2-9)/6 = 1.800153...",
    );
    r.claim(
        prefix(&q2_constant(cfg), "1.890536"),
        "1 + e^gamma/2 = 1.890536...",
    );
    Ok(r)
}

pub fn oracle(q: FieldOrder, max_degree: u32) -> Result<Report, Failure> {
    let mut r = Report {
        hint: "--maxdeg".into(),
        ..Default::default()
    };
    let check = oracle_consistency(q, max_degree)?;
    for f in &check.failures {
        r.claim(Verdict::Fails, f.clone());
    }
    if check.passed() {
        r.claim(
            Verdict::Holds,
            format!(
                "enumeration over F_{q} up to degree {max_degree} matches Gauss's formula and the smooth-count DP, \
                 and k! pi*_k(n) <= sum pi(j_1)..pi(j_k) <= k! pi_k(n) ({} checks)",
                check.checks
            ),
        );
    }
    Ok(r)
}
