use std::collections::BTreeSet;
use std::fmt::Write as _;

use ffsum_core::{FieldOrder, FkqEngine, Limit, PrecisionConfig, SumResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{CacheDir, Fetch};
use crate::{
    default_degree_bound, field, precision, ComputeArgs, Failure, Format, Status, TableArgs,
};

/// Extra digits beyond the certified ones in the printed `lo`/`hi`.
const BOUND_EXTRA_DIGITS: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub k: u32,
    pub q: u64,
    pub degree_bound: u32,
    pub bits: u32,
    /// Truncated certified digits, or "undecided".
    pub value: String,
    pub certified_digits: usize,
    pub lo: String,
    pub hi: String,
    pub defect_lo: String,
    pub defect_hi: String,
    pub limit: &'static str,
}

fn limit_name(l: Limit) -> &'static str {
    match l {
        Limit::LowerDefect => "lower-defect",
        Limit::UpperDefect => "upper-defect",
        Limit::Rounding => "rounding",
    }
}

impl Cell {
    fn new(r: &SumResult, bits: u32, digits: Option<usize>) -> Self {
        let certified = r.certified_digits();
        let value = match digits {
            Some(d) if d > certified => "undecided".to_string(),
            Some(d) => r
                .value
                .truncated_decimal(d)
                .unwrap_or_else(|_| "undecided".into()),
            None if r.value.certified_digits().is_none() => "undecided".to_string(),
            None => r
                .value
                .truncated_decimal(certified)
                .unwrap_or_else(|_| "undecided".into()),
        };
        let (lo, hi) = r.value.bounds_fixed(certified + BOUND_EXTRA_DIGITS);
        Cell {
            k: r.k,
            q: r.q.q(),
            degree_bound: r.degree_bound,
            bits,
            value,
            certified_digits: certified,
            lo,
            hi,
            defect_lo: r.lower_defect.hi_scientific(6),
            defect_hi: r.upper_defect.hi_scientific(6),
            limit: limit_name(r.limiting_factor()),
        }
    }
}

fn engine(
    q: FieldOrder,
    k_max: u32,
    n: u32,
    cfg: &PrecisionConfig,
    cache: Option<&CacheDir>,
) -> Result<FkqEngine, Failure> {
    if n == 0 {
        return Err(Failure::usage("--degree-bound must be positive"));
    }
    match cache {
        None => Ok(FkqEngine::new(q, k_max, n, cfg)?),
        Some(c) => {
            let (table, how) = c.smooth(q, k_max, n).map_err(Failure::usage)?;
            if let Fetch::Rebuilt(why) = how {
                eprintln!("warning: cached table for q = {q} was invalid ({why}); rebuilt");
            }
            Ok(FkqEngine::with_smooth_table(table, cfg)?)
        }
    }
}

pub fn compute(args: &ComputeArgs, cache: Option<&CacheDir>) -> Result<Status, Failure> {
    let q = field(args.q)?;
    if args.k == 0 {
        return Err(Failure::usage("--k must be at least 1"));
    }
    let cfg = precision(args.bits)?;
    let n = args
        .degree_bound
        .unwrap_or_else(|| default_degree_bound(args.q));
    let result = engine(q, args.k, n, &cfg, cache)?.sum(args.k)?;
    let cell = Cell::new(&result, args.bits, args.digits);
    let json = serde_json::to_string_pretty(&cell).expect("plain data");
    if let Some(path) = &args.json {
        std::fs::write(path, format!("{json}\n"))
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    let printed = match args.digits {
        Some(d) => result.truncated(d)?,
        None => result.value.certified_decimal().ok_or_else(|| Failure {
            status: Status::Undecided,
            message: format!(
                "no certified digits; limited by {}",
                result.limiting_factor()
            ),
        })?,
    };
    match args.format {
        Format::Json => println!("{json}"),
        Format::Text | Format::Csv => println!("{printed}"),
    }
    Ok(Status::Ok)
}

/// `K`, `A..B` (inclusive) or `A,B,C`.
pub fn parse_k_range(s: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::usage(format!("invalid k range {s:?}; use K, A..B or A,B,C"));
    let mut out = BTreeSet::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.insert(part.parse::<u32>().map_err(|_| bad())?);
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    Ok(out.into_iter().collect())
}

pub fn table_cells(args: &TableArgs, cache: Option<&CacheDir>) -> Result<Vec<Cell>, Failure> {
    let ks = parse_k_range(&args.k)?;
    let k_max = *ks.last().expect("nonempty");
    let cfg = precision(args.bits)?;
    let mut qs: Vec<u64> = args.q.clone();
    qs.sort_unstable();
    qs.dedup();
    let fields = qs
        .iter()
        .map(|&q| field(q))
        .collect::<Result<Vec<_>, _>>()?;
    let run = || -> Result<Vec<Cell>, Failure> {
        let per_q: Vec<Vec<Cell>> = fields
            .par_iter()
            .map(|&q| {
                let n = args
                    .degree_bound
                    .unwrap_or_else(|| default_degree_bound(q.q()));
                let e = engine(q, k_max, n, &cfg, cache)?;
                ks.par_iter()
                    .map(|&k| Ok(Cell::new(&e.sum(k)?, args.bits, args.digits)))
                    .collect()
            })
            .collect::<Result<_, Failure>>()?;
        let mut cells: Vec<Cell> = per_q.into_iter().flatten().collect();
        cells.sort_by_key(|c| (c.k, c.q));
        Ok(cells)
    };
    match args.jobs {
        Some(0) => Err(Failure::usage("--jobs must be positive")),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Failure::usage(e.to_string()))?
            .install(run),
        None => run(),
    }
}

pub fn render_csv(cells: &[Cell]) -> String {
    let mut out = String::from("k,q,value,lo,hi,defect_lo,defect_hi\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.k, c.q, c.value, c.lo, c.hi, c.defect_lo, c.defect_hi
        );
    }
    out
}

pub fn table(args: &TableArgs, cache: Option<&CacheDir>) -> Result<Status, Failure> {
    let cells = table_cells(args, cache)?;
    match args.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&cells).expect("plain data")
        ),
        Format::Csv | Format::Text => print!("{}", render_csv(&cells)),
    }
    Ok(if cells.iter().any(|c| c.value == "undecided") {
        Status::Undecided
    } else {
        Status::Ok
    })
}
