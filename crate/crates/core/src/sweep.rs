//! Batch evaluation over parameter ranges.

use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::case_classify;
use crate::conditions::{check_conditions, ConditionId, TheoremCase};
use crate::error::{Error, Result};
use crate::params::EmbeddingParams;
use crate::planner::{plan, verify_plan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub m: RangeInclusive<u64>,
    /// `None` means `m + 1 ..= n_max` for each `m`.
    pub n_min: Option<u64>,
    pub n_max: u64,
    pub r: RangeInclusive<u64>,
    pub s: RangeInclusive<u64>,
    pub lambda: RangeInclusive<u64>,
    /// Skip tuples where either triple is inadmissible.
    pub admissible_only: bool,
    /// Keep only tuples with one of these theorem cases; empty keeps all.
    pub theorem_cases: Vec<TheoremCase>,
    /// Try to plan tuples that pass every condition.
    pub plan: bool,
    /// Worker threads; 0 uses the default pool.
    pub threads: usize,
}

impl SweepSpec {
    pub fn new(m: RangeInclusive<u64>, n_max: u64) -> Self {
        SweepSpec {
            m,
            n_min: None,
            n_max,
            r: 1..=1,
            s: 1..=1,
            lambda: 1..=1,
            admissible_only: true,
            theorem_cases: Vec::new(),
            plan: true,
            threads: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, r) in [
            ("m", &self.m),
            ("r", &self.r),
            ("s", &self.s),
            ("lambda", &self.lambda),
        ] {
            if r.is_empty() {
                return Err(Error::Precondition(format!("empty range for {name}")));
            }
        }
        if *self.m.start() < 4
            || *self.r.start() == 0
            || *self.s.start() == 0
            || *self.lambda.start() == 0
        {
            return Err(Error::Precondition(
                "need m >= 4 and r, s, lambda >= 1".into(),
            ));
        }
        if self.n_max <= *self.m.start() {
            return Err(Error::Precondition("n range is empty".into()));
        }
        Ok(())
    }

    /// All tuples in range, in lexicographic order, that pass construction
    /// and the admissibility filter.
    pub fn tuples(&self) -> Result<Vec<EmbeddingParams>> {
        self.validate()?;
        let mut out = Vec::new();
        for m in self.m.clone() {
            let n_lo = self.n_min.unwrap_or(m + 1).max(m + 1);
            for n in n_lo..=self.n_max {
                for r in self.r.clone() {
                    for s in self.s.clone() {
                        for lambda in self.lambda.clone() {
                            let Ok(p) = EmbeddingParams::new(m, n, r, s, lambda) else {
                                continue;
                            };
                            if self.admissible_only
                                && !(p.inner_admissible() && p.outer_admissible())
                            {
                                continue;
                            }
                            out.push(p);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One CSV row. Columns, in order: [`SWEEP_COLUMNS`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub params: EmbeddingParams,
    pub q: Option<u64>,
    pub k: Option<u64>,
    /// N1..N8, eq2..eq5.
    pub verdicts: Vec<bool>,
    pub all_hold: bool,
    pub theorem_case: TheoremCase,
    pub case: Option<u8>,
    pub subcase: Option<String>,
    pub plan_found: Option<bool>,
    pub plan_source: Option<String>,
    pub plan_micros: Option<u128>,
}

pub const SWEEP_COLUMNS: &[&str] = &[
    "m",
    "n",
    "r",
    "s",
    "lambda",
    "q",
    "k",
    "N1",
    "N2",
    "N3",
    "N4",
    "N5",
    "N6",
    "N7",
    "N8",
    "eq2",
    "eq3",
    "eq4",
    "eq5",
    "all_hold",
    "theorem_case",
    "case",
    "subcase",
    "plan_found",
    "plan_source",
    "plan_micros",
];

pub fn evaluate(p: &EmbeddingParams, try_plan: bool) -> SweepRow {
    let report = check_conditions(p);
    let (q, k) = p
        .color_counts()
        .map_or((None, None), |(q, k)| (Some(q), Some(k)));
    let in_scope = report.theorem_case != TheoremCase::OutOfScope;
    let all_hold = report.all_hold();
    let case = if all_hold && in_scope {
        case_classify(p).ok().map(|c| c.number())
    } else {
        None
    };
    let mut row = SweepRow {
        params: *p,
        q,
        k,
        verdicts: ConditionId::ALL
            .iter()
            .map(|&id| report.holds(id))
            .collect(),
        all_hold,
        theorem_case: report.theorem_case,
        case,
        subcase: None,
        plan_found: None,
        plan_source: None,
        plan_micros: None,
    };
    if try_plan && all_hold && in_scope {
        let start = Instant::now();
        let result = plan(p);
        row.plan_micros = Some(start.elapsed().as_micros());
        match result {
            Ok(pl) => {
                row.plan_found = Some(verify_plan(p, &pl));
                row.subcase = pl.subcase.map(|s| s.to_string());
                row.plan_source = Some(pl.source.to_string());
            }
            Err(_) => row.plan_found = Some(false),
        }
    }
    row
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let tuples = spec.tuples()?;
    let keep = |row: &SweepRow| {
        spec.theorem_cases.is_empty() || spec.theorem_cases.contains(&row.theorem_case)
    };
    let work = || -> Vec<SweepRow> {
        tuples
            .par_iter()
            .map(|p| evaluate(p, spec.plan))
            .filter(keep)
            .collect()
    };
    if spec.threads == 0 {
        Ok(work())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?;
        Ok(pool.install(work))
    }
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let p = &self.params;
        let opt = |x: Option<String>| x.unwrap_or_default();
        let flag = |b: bool| if b { "1" } else { "0" }.to_string();
        let mut cols = vec![
            p.m.to_string(),
            p.n.to_string(),
            p.r.to_string(),
            p.s.to_string(),
            p.lambda.to_string(),
            opt(self.q.map(|x| x.to_string())),
            opt(self.k.map(|x| x.to_string())),
        ];
        cols.extend(self.verdicts.iter().map(|&b| flag(b)));
        cols.push(flag(self.all_hold));
        cols.push(self.theorem_case.to_string());
        cols.push(opt(self.case.map(|c| c.to_string())));
        cols.push(opt(self.subcase.clone()));
        cols.push(opt(self.plan_found.map(flag)));
        cols.push(opt(self.plan_source.clone()));
        cols.push(opt(self.plan_micros.map(|t| t.to_string())));
        cols.join(",")
    }
}

pub fn csv_header() -> String {
    SWEEP_COLUMNS.join(",")
}

/// Parses `a..b` (inclusive), `a`, or `..b` with the given default start.
pub fn parse_range(text: &str, default_start: u64) -> Result<RangeInclusive<u64>> {
    let bad = || Error::Precondition(format!("bad range `{text}`; expected a..b, ..b or a"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let range = match text.split_once("..") {
        None => num(text)?..=num(text)?,
        Some(("", hi)) => default_start..=num(hi.trim_start_matches('='))?,
        Some((lo, hi)) => num(lo)?..=num(hi.trim_start_matches('='))?,
    };
    if range.is_empty() {
        return Err(bad());
    }
    Ok(range)
}
