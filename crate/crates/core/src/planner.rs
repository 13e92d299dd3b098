//! Colored amalgamation: how many edges of each shape `u^3 v`, `u^2 v^2`,
//! `u v^3`, `v^4` every color receives.
//!
//! Colors are kept as blocks of consecutive colors with identical counts;
//! old colors come first, so color `j` (1-based) is old iff `j <= q`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bounds::{case_classify, per_color_bounds, CaseTag, Thresholds};
use crate::conditions::{check_conditions, require_all, theorem_case, TheoremCase};
use crate::error::{Error, Result};
use crate::exact::{binomial, ceil, floor, integral, rat, rat_of, to_i64, ExactInt, ExactRat};
use crate::interval::{IntervalRun, IntervalSystem};
use crate::params::{EmbeddingParams, Tier};
use crate::sporadic;

/// Which of the three e-intervals fired in the two cases that split further.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subcase {
    /// `e` at most the sum of floored thresholds.
    Low,
    /// `e` at least the sum of ceiled thresholds.
    High,
    /// Strictly between the two.
    Straddle,
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcase::Low => "i",
            Subcase::High => "ii",
            Subcase::Straddle => "iii",
        })
    }
}

impl FromStr for Subcase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "i" => Ok(Subcase::Low),
            "ii" => Ok(Subcase::High),
            "iii" => Ok(Subcase::Straddle),
            other => Err(format!("unknown subcase `{other}`")),
        }
    }
}

/// Where a plan's `e_j` distribution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanSource {
    Cases,
    Sporadic,
    Search,
    /// Read off an explicit factorization.
    Amalgamated,
}

impl fmt::Display for PlanSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanSource::Cases => "cases",
            PlanSource::Sporadic => "sporadic",
            PlanSource::Search => "search",
            PlanSource::Amalgamated => "amalgamated",
        })
    }
}

impl FromStr for PlanSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "cases" => Ok(PlanSource::Cases),
            "sporadic" => Ok(PlanSource::Sporadic),
            "search" => Ok(PlanSource::Search),
            "amalgamated" => Ok(PlanSource::Amalgamated),
            other => Err(format!("unknown plan source `{other}`")),
        }
    }
}

/// Edge totals of the amalgamation by shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Totals {
    /// `u^3 v`
    pub e: ExactInt,
    /// `u^2 v^2`
    pub f: ExactInt,
    /// `u v^3`
    pub g: ExactInt,
    /// `v^4`
    pub h: ExactInt,
}

pub fn totals(p: &EmbeddingParams) -> Totals {
    let d = p.n - p.m;
    let lambda = ExactInt::from(p.lambda);
    Totals {
        e: &lambda * ExactInt::from(d) * binomial(p.m, 3),
        f: &lambda * binomial(p.m, 2) * binomial(d, 2),
        g: &lambda * ExactInt::from(p.m) * binomial(d, 3),
        h: lambda * binomial(d, 4),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EBlock {
    pub tier: Tier,
    pub count: u64,
    pub e: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FBlock {
    pub tier: Tier,
    pub count: u64,
    pub e: i64,
    pub f: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorBlock {
    pub tier: Tier,
    pub count: u64,
    pub e: i64,
    pub f: i64,
    pub g: i64,
    pub h: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPlan {
    pub case: CaseTag,
    pub subcase: Option<Subcase>,
    pub blocks: Vec<EBlock>,
}

type Interval = (ExactInt, ExactRat);

/// The e-interval for each tier, and the subcase that selected it.
pub fn e_intervals(p: &EmbeddingParams, case: CaseTag) -> Result<(Option<Subcase>, [Interval; 2])> {
    let (q, k) = p.color_counts()?;
    let t = Thresholds::new(p);
    let e = totals(p).e;
    let zero = || ExactInt::zero();
    let iota = |i: usize| floor(&t.iota[i]);
    let rho = |i: usize| t.rho[i].clone();
    let rhop = |i: usize| t.rho_prime[i].clone();
    let fl = |i: usize| floor(&t.rho_prime[i]);
    let ce = |i: usize| ceil(&t.rho_prime[i]);
    let (qi, ki) = (ExactInt::from(q), ExactInt::from(k - q));
    Ok(match case {
        CaseTag::BothThresholdsNegative => (None, [(zero(), rho(0)), (zero(), rho(1))]),
        CaseTag::AllNonnegative => (None, [(iota(0), rhop(0)), (iota(1), rhop(1))]),
        CaseTag::OldLowerNegative => (None, [(zero(), rhop(0)), (iota(1), rhop(1))]),
        CaseTag::OldThresholdNegative => (None, [(zero(), rat(0, 1)), (iota(1), rhop(1))]),
        CaseTag::LowersNegative => {
            if e <= &qi * fl(0) + &ki * fl(1) {
                (Some(Subcase::Low), [(zero(), rhop(0)), (zero(), rhop(1))])
            } else if e >= &qi * ce(0) + &ki * ce(1) {
                (Some(Subcase::High), [(ce(0), rho(0)), (ce(1), rho(1))])
            } else {
                (
                    Some(Subcase::Straddle),
                    [(fl(0), rat_of(&ce(0))), (fl(1), rat_of(&ce(1)))],
                )
            }
        }
        CaseTag::OnlyNewThreshold => {
            if e <= &ki * fl(1) {
                (Some(Subcase::Low), [(zero(), rat(0, 1)), (zero(), rhop(1))])
            } else if e >= &ki * ce(1) {
                (Some(Subcase::High), [(zero(), rho(0)), (ce(1), rho(1))])
            } else {
                (
                    Some(Subcase::Straddle),
                    [(zero(), rat(0, 1)), (fl(1), rat_of(&ce(1)))],
                )
            }
        }
    })
}

/// Distributes the `u^3 v` edges over the colors following the case split.
pub fn plan_e(p: &EmbeddingParams) -> Result<EPlan> {
    let (q, k) = p.color_counts()?;
    let case = case_classify(p)?;
    let (subcase, [old, new]) = e_intervals(p, case)?;
    let mut runs = vec![IntervalRun::new(old.0, old.1, q)];
    if k > q {
        runs.push(IntervalRun::new(new.0, new.1, k - q));
    }
    let sys = IntervalSystem::new(runs, totals(p).e)?;
    let sol = sys
        .solve()
        .ok_or_else(|| Error::PlanNotFound(format!("e-system infeasible in case {case}")))?;
    let mut blocks = Vec::new();
    for (i, pieces) in sol.runs.iter().enumerate() {
        let tier = if i == 0 { Tier::Old } else { Tier::New };
        for (v, count) in pieces {
            blocks.push(EBlock {
                tier,
                count: *count,
                e: to_i64(v)?,
            });
        }
    }
    Ok(EPlan {
        case,
        subcase,
        blocks,
    })
}

/// The `u^2 v^2` system: one interval `[iota_ij, rho_ij]` per color.
pub fn f_system(p: &EmbeddingParams, blocks: &[EBlock]) -> Result<IntervalSystem> {
    let runs = blocks
        .iter()
        .map(|b| {
            let pc = per_color_bounds(p, b.tier, b.e)?;
            Ok(IntervalRun::new(pc.iota_j, pc.rho_j, b.count))
        })
        .collect::<Result<Vec<_>>>()?;
    IntervalSystem::new(runs, totals(p).f)
}

pub fn plan_f(p: &EmbeddingParams, blocks: &[EBlock]) -> Result<Vec<FBlock>> {
    let sys = f_system(p, blocks)?;
    let sol = sys.solve().ok_or_else(|| {
        Error::PlanNotFound(format!(
            "f-system infeasible: need {} <= {} <= {}",
            sys.lower_sum(),
            sys.target,
            sys.upper_sum()
        ))
    })?;
    let mut out = Vec::new();
    for (b, pieces) in blocks.iter().zip(&sol.runs) {
        for (v, count) in pieces {
            out.push(FBlock {
                tier: b.tier,
                count: *count,
                e: b.e,
                f: to_i64(v)?,
            });
        }
    }
    Ok(out)
}

/// Fills in `u v^3` and `v^4` counts, which are forced once `e_j` and `f_j`
/// are known.
pub fn extend_plan(p: &EmbeddingParams, blocks: &[FBlock]) -> Result<Vec<ColorBlock>> {
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let pc = per_color_bounds(p, b.tier, b.e)?;
        let f = ExactInt::from(b.f);
        let g = integral(&(rat(2, 1) * (&pc.rho_j - rat_of(&f)))).ok_or_else(|| {
            Error::Invariant(format!("u v^3 count for e={} f={} is fractional", b.e, b.f))
        })?;
        let h = &f - &pc.iota_j;
        let block = ColorBlock {
            tier: b.tier,
            count: b.count,
            e: b.e,
            f: b.f,
            g: to_i64(&g)?,
            h: to_i64(&h)?,
        };
        if block.g < 0 || block.h < 0 {
            return Err(Error::Invariant(format!("negative count in {block:?}")));
        }
        out.push(block);
    }
    if let Some(msg) = plan_violation(p, &out) {
        return Err(Error::Invariant(msg));
    }
    Ok(out)
}

/// First violated degree law or total, if any.
fn plan_violation(p: &EmbeddingParams, blocks: &[ColorBlock]) -> Option<String> {
    let (q, k) = match p.color_counts() {
        Ok(v) => v,
        Err(e) => return Some(e.to_string()),
    };
    let (m, n, r, s) = (p.m as i128, p.n as i128, p.r as i128, p.s as i128);
    let mut seen = [0u64; 2];
    let mut sums = [0i128; 4];
    for b in blocks {
        if b.count == 0 {
            continue;
        }
        if [b.e, b.f, b.g, b.h].iter().any(|x| *x < 0) {
            return Some(format!("negative count in {b:?}"));
        }
        let (idx, old_degree) = match b.tier {
            Tier::Old => (0, m * (s - r)),
            Tier::New => (1, s * m),
        };
        if b.tier == Tier::New && seen[0] != q {
            return Some("new colors appear before all old colors".into());
        }
        seen[idx] += b.count;
        let (e, f, g, h) = (b.e as i128, b.f as i128, b.g as i128, b.h as i128);
        if 3 * e + 2 * f + g != old_degree {
            return Some(format!("old-point degree fails for {b:?}"));
        }
        if e + 2 * f + 3 * g + 4 * h != s * (n - m) {
            return Some(format!("new-point degree fails for {b:?}"));
        }
        let c = b.count as i128;
        for (acc, x) in sums.iter_mut().zip([e, f, g, h]) {
            *acc += c * x;
        }
    }
    if seen != [q, k - q] {
        return Some(format!("color counts {seen:?}, expected [{q}, {}]", k - q));
    }
    let t = totals(p);
    let want = [t.e, t.f, t.g, t.h];
    for (i, (got, want)) in sums.iter().zip(want).enumerate() {
        if ExactInt::from(*got) != want {
            return Some(format!("total of shape {i} is {got}, expected {want}"));
        }
    }
    None
}

/// Checks both degree laws for every color and all four shape totals.
pub fn verify_plan(p: &EmbeddingParams, plan: &AmalgamPlan) -> bool {
    plan.params == *p && plan_violation(p, &plan.blocks).is_none()
}

/// Builds a full plan from a given `e_j` distribution, as `(value, count)`
/// pairs per tier.
pub fn plan_from_distribution(
    p: &EmbeddingParams,
    old: &[(i64, u64)],
    new: &[(i64, u64)],
) -> Result<Vec<ColorBlock>> {
    let (q, k) = p.color_counts()?;
    let t = Thresholds::new(p);
    let mut blocks = Vec::new();
    for (tier, list, want, i) in [(Tier::Old, old, q, 0), (Tier::New, new, k - q, 1)] {
        let got: u64 = list.iter().map(|(_, c)| c).sum();
        if got != want {
            return Err(Error::PlanNotFound(format!(
                "{tier} distribution covers {got} colors, expected {want}"
            )));
        }
        for &(e, count) in list {
            let v = rat(e, 1);
            if count > 0 && (e < 0 || v < t.iota[i] || v > t.rho[i]) {
                return Err(Error::PlanNotFound(format!(
                    "{tier} value {e} outside its interval"
                )));
            }
            blocks.push(EBlock { tier, count, e });
        }
    }
    let sum: ExactInt = blocks.iter().map(|b| ExactInt::from(b.e) * b.count).sum();
    if sum != totals(p).e {
        return Err(Error::PlanNotFound(format!("distribution sums to {sum}")));
    }
    extend_plan(p, &plan_f(p, &blocks)?)
}

struct TierSearch {
    tier: Tier,
    count: u64,
    /// Old-point degree per color.
    c: i64,
    /// `iota_ij` at `e_j = 0`.
    alpha: i64,
}

impl TierSearch {
    fn lo(&self, v: i64) -> i64 {
        (self.alpha - 2 * v).max(0)
    }

    fn odd(&self, v: i64) -> i64 {
        (self.c - 3 * v).rem_euclid(2)
    }
}

struct DistributionSearch {
    tiers: Vec<TierSearch>,
    items: Vec<(usize, i64)>,
    /// Per tier and position: min value, max value, min parity defect of the
    /// items from that position on; `None` if the tier has none left.
    suffix: Vec<Vec<Option<(i64, i64, i64)>>>,
    f: i64,
    slack: i64,
    nodes: u64,
    budget: u64,
    chosen: Vec<(usize, i64, u64)>,
}

impl DistributionSearch {
    fn dfs(&mut self, i: usize, rem: &mut [u64], rem_e: i64, lower: i64, odd: i64) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        if i == self.items.len() {
            return Some(rem.iter().all(|&c| c == 0) && rem_e == 0);
        }
        let (mut emin, mut emax, mut alpha_sum, mut odd_min) = (0i64, 0i64, 0i64, 0i64);
        for (t, tier) in self.tiers.iter().enumerate() {
            let left = rem[t] as i64;
            if left == 0 {
                continue;
            }
            let Some((vmin, vmax, omin)) = self.suffix[t][i] else {
                return Some(false);
            };
            emin += left * vmin;
            emax += left * vmax;
            alpha_sum += left * tier.alpha;
            odd_min += left * omin;
        }
        if rem_e < emin || rem_e > emax {
            return Some(false);
        }
        if lower + (alpha_sum - 2 * rem_e).max(0) > self.f || odd + odd_min > self.slack {
            return Some(false);
        }
        let (t, v) = self.items[i];
        let last = self.suffix[t].get(i + 1).is_none_or(|s| s.is_none());
        let mut hi = rem[t];
        if v > 0 {
            hi = hi.min((rem_e / v) as u64);
        }
        let lo_count = if last { rem[t] } else { 0 };
        if lo_count > hi {
            return Some(false);
        }
        let (lo_v, odd_v) = (self.tiers[t].lo(v), self.tiers[t].odd(v));
        for cnt in (lo_count..=hi).rev() {
            let c = cnt as i64;
            rem[t] -= cnt;
            self.chosen.push((t, v, cnt));
            let found = self.dfs(i + 1, rem, rem_e - c * v, lower + c * lo_v, odd + c * odd_v);
            rem[t] += cnt;
            match found {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {
                    self.chosen.pop();
                }
            }
        }
        Some(false)
    }
}

/// Searches all `e_j` distributions whose values lie in
/// `[max(iota_i, 0), rho_i]` for one whose f-system is feasible.
pub fn search_distribution(p: &EmbeddingParams, node_budget: u64) -> Result<Vec<ColorBlock>> {
    let (q, k) = p.color_counts()?;
    let t = Thresholds::new(p);
    let tot = totals(p);
    let e = to_i64(&tot.e)?;
    let f = to_i64(&tot.f)?;
    let (m, r, s) = (p.m as i64, p.r as i64, p.s as i64);
    let mut tiers = Vec::new();
    let mut items = Vec::new();
    for (i, tier, count, c) in [(0, Tier::Old, q, m * (s - r)), (1, Tier::New, k - q, s * m)] {
        if count == 0 {
            continue;
        }
        let alpha = to_i64(&per_color_bounds(p, tier, 0)?.iota_j)?;
        let ts = TierSearch {
            tier,
            count,
            c,
            alpha,
        };
        let lo = to_i64(&floor(&t.iota[i]))?.max(0);
        let hi = to_i64(&floor(&t.rho[i]))?;
        // Good parity first, then closest to the average e_j.
        let mut values: Vec<i64> = (lo..=hi).collect();
        values.sort_by_key(|v| (ts.odd(*v), (*v as i128 * k as i128 - e as i128).abs()));
        let idx = tiers.len();
        items.extend(values.into_iter().map(|v| (idx, v)));
        tiers.push(ts);
    }
    let mut suffix: Vec<Vec<Option<(i64, i64, i64)>>> =
        vec![vec![None; items.len() + 1]; tiers.len()];
    for i in (0..items.len()).rev() {
        for row in suffix.iter_mut() {
            row[i] = row[i + 1];
        }
        let (tix, v) = items[i];
        let o = tiers[tix].odd(v);
        suffix[tix][i] = Some(match suffix[tix][i + 1] {
            None => (v, v, o),
            Some((a, b, c)) => (a.min(v), b.max(v), c.min(o)),
        });
    }
    let slack: i64 = tiers.iter().map(|t| t.count as i64 * t.c).sum::<i64>() - 3 * e - 2 * f;
    let mut search = DistributionSearch {
        tiers,
        items,
        suffix,
        f,
        slack,
        nodes: 0,
        budget: node_budget,
        chosen: Vec::new(),
    };
    let mut rem: Vec<u64> = search.tiers.iter().map(|t| t.count).collect();
    match search.dfs(0, &mut rem, e, 0, 0) {
        None => Err(Error::SearchExhausted {
            nodes: search.nodes,
            reason: "e_j distribution search".into(),
        }),
        Some(false) => Err(Error::PlanNotFound(
            "no e_j distribution admits a feasible f-system".into(),
        )),
        Some(true) => {
            let mut old = Vec::new();
            let mut new = Vec::new();
            for &(tix, v, cnt) in &search.chosen {
                if cnt == 0 {
                    continue;
                }
                match search.tiers[tix].tier {
                    Tier::Old => old.push((v, cnt)),
                    Tier::New => new.push((v, cnt)),
                }
            }
            old.sort();
            new.sort();
            plan_from_distribution(p, &old, &new)
        }
    }
}

/// Node budget for the fallback distribution search.
pub const DISTRIBUTION_BUDGET: u64 = 2_000_000;

/// Runs the case analysis, then the table of hand-computed distributions,
/// then an exhaustive search.
pub fn plan(p: &EmbeddingParams) -> Result<AmalgamPlan> {
    require_all(&check_conditions(p))?;
    if theorem_case(p) == TheoremCase::OutOfScope {
        return Err(Error::OutOfScope(p.to_string()));
    }
    let (q, k) = p.color_counts()?;
    let case = case_classify(p)?;
    let make =
        |blocks, subcase, source| AmalgamPlan::new(*p, q, k, Some(case), subcase, source, blocks);
    let by_cases = plan_e(p).and_then(|ep| {
        let blocks = extend_plan(p, &plan_f(p, &ep.blocks)?)?;
        Ok((ep.subcase, blocks))
    });
    if let Ok((subcase, blocks)) = by_cases {
        return Ok(make(blocks, subcase, PlanSource::Cases));
    }
    if p.lambda == 1 {
        if let Some(entry) = sporadic::lookup(p.m, p.n, p.r, p.s) {
            if let Ok(blocks) = plan_from_distribution(p, &entry.old, &entry.new) {
                return Ok(make(blocks, entry.subcase, PlanSource::Sporadic));
            }
        }
    }
    let blocks = search_distribution(p, DISTRIBUTION_BUDGET)?;
    Ok(make(blocks, None, PlanSource::Search))
}

/// Plans without the case analysis, for tuples that satisfy every
/// necessary condition but lie outside the region it covers. Falls back to
/// [`plan`] for tuples inside it.
pub fn plan_unguided(p: &EmbeddingParams) -> Result<AmalgamPlan> {
    require_all(&check_conditions(p))?;
    if theorem_case(p) != TheoremCase::OutOfScope {
        return plan(p);
    }
    let (q, k) = p.color_counts()?;
    let blocks = search_distribution(p, DISTRIBUTION_BUDGET)?;
    Ok(AmalgamPlan::new(
        *p,
        q,
        k,
        None,
        None,
        PlanSource::Search,
        blocks,
    ))
}

/// Per-color counts of the four edge shapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamPlan {
    pub params: EmbeddingParams,
    pub q: u64,
    pub k: u64,
    pub case: Option<CaseTag>,
    pub subcase: Option<Subcase>,
    pub source: PlanSource,
    pub blocks: Vec<ColorBlock>,
}

impl AmalgamPlan {
    /// Merges adjacent identical blocks and drops empty ones.
    pub fn new(
        params: EmbeddingParams,
        q: u64,
        k: u64,
        case: Option<CaseTag>,
        subcase: Option<Subcase>,
        source: PlanSource,
        blocks: Vec<ColorBlock>,
    ) -> Self {
        let mut merged: Vec<ColorBlock> = Vec::new();
        for b in blocks.into_iter().filter(|b| b.count > 0) {
            match merged.last_mut() {
                Some(last)
                    if (last.tier, last.e, last.f, last.g, last.h)
                        == (b.tier, b.e, b.f, b.g, b.h) =>
                {
                    last.count += b.count;
                }
                _ => merged.push(b),
            }
        }
        AmalgamPlan {
            params,
            q,
            k,
            case,
            subcase,
            source,
            blocks: merged,
        }
    }

    /// One entry per color, in color order.
    pub fn colors(&self) -> impl Iterator<Item = ColorBlock> + '_ {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(ColorBlock { count: 1, ..*b }, b.count as usize))
    }

    /// Counts for color `j`, 1-based.
    pub fn color(&self, j: u64) -> Option<ColorBlock> {
        let mut start = 1;
        for b in &self.blocks {
            if j < start + b.count {
                return (j >= start).then_some(ColorBlock { count: 1, ..*b });
            }
            start += b.count;
        }
        None
    }

    /// `e_j` values of the given tier as sorted `(value, count)` pairs.
    pub fn e_multiset(&self, tier: Tier) -> Vec<(i64, u64)> {
        let mut acc = std::collections::BTreeMap::new();
        for b in self.blocks.iter().filter(|b| b.tier == tier) {
            *acc.entry(b.e).or_insert(0) += b.count;
        }
        acc.into_iter().collect()
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        let mut out = String::from("# m n r s lambda q k case subcase source\n");
        out += &format!(
            "{} {} {} {} {} {} {} {} {} {}\n# j tier e f g h\n",
            p.m,
            p.n,
            p.r,
            p.s,
            p.lambda,
            self.q,
            self.k,
            opt(self.case.map(|c| c.number().to_string())),
            opt(self.subcase.map(|s| s.to_string())),
            self.source,
        );
        for (j, c) in self.colors().enumerate() {
            out += &format!("{} {} {} {} {} {}\n", j + 1, c.tier, c.e, c.f, c.g, c.h);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let err = |line: usize, message: String| Error::Parse { line, message };
        let (hl, header) = lines
            .next()
            .ok_or_else(|| err(0, "missing header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 10 {
            return Err(err(
                hl,
                format!("header needs 10 fields, found {}", h.len()),
            ));
        }
        let num = |i: usize| {
            h[i].parse::<u64>()
                .map_err(|_| err(hl, format!("bad number `{}`", h[i])))
        };
        let params = EmbeddingParams::new(num(0)?, num(1)?, num(2)?, num(3)?, num(4)?)
            .map_err(|e| err(hl, e.to_string()))?;
        let (q, k) = (num(5)?, num(6)?);
        let case = match h[7] {
            "-" => None,
            c => Some(
                c.parse::<u8>()
                    .ok()
                    .and_then(CaseTag::from_number)
                    .ok_or_else(|| err(hl, format!("bad case `{c}`")))?,
            ),
        };
        let subcase = match h[8] {
            "-" => None,
            s => Some(s.parse::<Subcase>().map_err(|e| err(hl, e))?),
        };
        let source = h[9].parse::<PlanSource>().map_err(|e| err(hl, e))?;
        let mut blocks = Vec::new();
        let mut expected = 1u64;
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 6 {
                return Err(err(ln, format!("row needs 6 fields, found {}", f.len())));
            }
            let j: u64 = f[0]
                .parse()
                .map_err(|_| err(ln, format!("bad color `{}`", f[0])))?;
            if j != expected {
                return Err(err(ln, format!("expected color {expected}, found {j}")));
            }
            expected += 1;
            let tier: Tier = f[1].parse().map_err(|e| err(ln, e))?;
            let val = |i: usize| {
                f[i].parse::<i64>()
                    .map_err(|_| err(ln, format!("bad count `{}`", f[i])))
            };
            blocks.push(ColorBlock {
                tier,
                count: 1,
                e: val(2)?,
                f: val(3)?,
                g: val(4)?,
                h: val(5)?,
            });
        }
        if expected - 1 != k {
            return Err(err(
                0,
                format!("plan lists {} colors, header says {k}", expected - 1),
            ));
        }
        Ok(AmalgamPlan::new(
            params, q, k, case, subcase, source, blocks,
        ))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(value.clone()).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })
    }
}
