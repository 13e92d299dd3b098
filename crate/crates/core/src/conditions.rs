//! Necessary conditions for extending an `r`-factorization of `lambda K_m^4`
//! to an `s`-factorization of `lambda K_n^4`.
//!
//! Conditions `N1`..`N8` are evaluated independently of the four combined
//! conditions `eq2`..`eq5` so the two groupings can be cross-checked.
//! Every comparison is done on exact rationals.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, fmt_rat, rat, rat_of, ExactInt, ExactRat};
use crate::params::{is_admissible, EmbeddingParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionId {
    N1,
    N2,
    N3,
    N4,
    N5,
    N6,
    N7,
    N8,
    /// Divisibility of both triples together with `1 <= s/r <= C(n-1,3)/C(m-1,3)`.
    Eq2,
    /// `n >= 2m` when `s = r`, `n >= 4m/3` when `s > r`.
    Eq3,
    /// Crossing-edge count against the new-color deficit, half weight.
    Eq4,
    /// Crossing-edge count against the new-color deficit, quarter weight.
    Eq5,
}

impl ConditionId {
    pub const ALL: [ConditionId; 12] = [
        ConditionId::N1,
        ConditionId::N2,
        ConditionId::N3,
        ConditionId::N4,
        ConditionId::N5,
        ConditionId::N6,
        ConditionId::N7,
        ConditionId::N8,
        ConditionId::Eq2,
        ConditionId::Eq3,
        ConditionId::Eq4,
        ConditionId::Eq5,
    ];

    pub const NECESSARY: [ConditionId; 8] = [
        ConditionId::N1,
        ConditionId::N2,
        ConditionId::N3,
        ConditionId::N4,
        ConditionId::N5,
        ConditionId::N6,
        ConditionId::N7,
        ConditionId::N8,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ConditionId::N1 => "N1",
            ConditionId::N2 => "N2",
            ConditionId::N3 => "N3",
            ConditionId::N4 => "N4",
            ConditionId::N5 => "N5",
            ConditionId::N6 => "N6",
            ConditionId::N7 => "N7",
            ConditionId::N8 => "N8",
            ConditionId::Eq2 => "eq2",
            ConditionId::Eq3 => "eq3",
            ConditionId::Eq4 => "eq4",
            ConditionId::Eq5 => "eq5",
        }
    }

    /// N4 and N8 follow from the others but are still reported.
    pub fn derivable(self) -> bool {
        matches!(self, ConditionId::N4 | ConditionId::N8)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome of one condition with the two sides that were compared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub lhs: ExactRat,
    pub rhs: ExactRat,
    /// The condition's hypothesis does not apply, so it holds trivially.
    pub vacuous: bool,
}

impl Verdict {
    fn at_least(lhs: ExactRat, rhs: ExactRat) -> Self {
        Verdict {
            holds: lhs >= rhs,
            lhs,
            rhs,
            vacuous: false,
        }
    }

    fn at_most(lhs: ExactRat, rhs: ExactRat) -> Self {
        Verdict {
            holds: lhs <= rhs,
            lhs,
            rhs,
            vacuous: false,
        }
    }

    fn vacuous(lhs: ExactRat, rhs: ExactRat) -> Self {
        Verdict {
            holds: true,
            lhs,
            rhs,
            vacuous: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremCase {
    /// `r C(n-1,3) > s C(m-1,3)`: conditions N1..N8 decide.
    StrictRatio,
    /// `r C(n-1,3) = s C(m-1,3)` and `n >= 4m/3`: divisibility decides.
    EqualRatio,
    OutOfScope,
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremCase::StrictRatio => "strict-ratio",
            TheoremCase::EqualRatio => "equal-ratio",
            TheoremCase::OutOfScope => "out-of-scope",
        })
    }
}

pub fn theorem_case(p: &EmbeddingParams) -> TheoremCase {
    match p.ratio_cmp() {
        Ordering::Less => TheoremCase::OutOfScope,
        _ if p.s > p.r && !p.n_at_least_four_thirds_m() => TheoremCase::OutOfScope,
        Ordering::Greater => TheoremCase::StrictRatio,
        Ordering::Equal => TheoremCase::EqualRatio,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub params: EmbeddingParams,
    pub verdicts: Vec<(ConditionId, Verdict)>,
    pub theorem_case: TheoremCase,
}

/// Quantities shared by several conditions.
struct Common {
    m: ExactRat,
    n: ExactRat,
    s_over_r: ExactRat,
    /// `C(n-1,3) / C(m-1,3)`.
    ratio: ExactRat,
    /// `C(n-1,3) - (s/r) C(m-1,3)`, proportional to the number of new colors.
    deficit: ExactRat,
    cm3: ExactInt,
    cm2: ExactInt,
    cd2: ExactInt,
    cd3: ExactInt,
}

impl Common {
    fn new(p: &EmbeddingParams) -> Self {
        let d = p.n - p.m;
        let cn1 = binomial(p.n - 1, 3);
        let cm1 = binomial(p.m - 1, 3);
        let s_over_r = rat(p.s as i64, p.r as i64);
        let deficit = rat_of(&cn1) - &s_over_r * rat_of(&cm1);
        Common {
            m: rat(p.m as i64, 1),
            n: rat(p.n as i64, 1),
            ratio: ExactRat::new(cn1, cm1),
            s_over_r,
            deficit,
            cm3: binomial(p.m, 3),
            cm2: binomial(p.m, 2),
            cd2: binomial(d, 2),
            cd3: binomial(d, 3),
        }
    }
}

fn divisibility_count(p: &EmbeddingParams) -> i64 {
    let lam = ExactInt::from(p.lambda);
    let zero = ExactInt::from(0);
    [
        (p.r * p.m).is_multiple_of(4),
        (p.s * p.n).is_multiple_of(4),
        (&lam * binomial(p.m - 1, 3)) % p.r == zero,
        (&lam * binomial(p.n - 1, 3)) % p.s == zero,
    ]
    .iter()
    .filter(|ok| **ok)
    .count() as i64
}

fn verdict(p: &EmbeddingParams, c: &Common, id: ConditionId) -> Verdict {
    let one = rat(1, 1);
    match id {
        ConditionId::N1 => {
            let both = is_admissible(p.m, p.r, p.lambda).unwrap_or(false)
                && is_admissible(p.n, p.s, p.lambda).unwrap_or(false);
            Verdict {
                holds: both,
                lhs: rat(divisibility_count(p), 1),
                rhs: rat(4, 1),
                vacuous: false,
            }
        }
        ConditionId::N2 => Verdict {
            holds: c.s_over_r >= one && c.s_over_r <= c.ratio,
            lhs: c.s_over_r.clone(),
            rhs: c.ratio.clone(),
            vacuous: false,
        },
        ConditionId::N3 => {
            let rhs = &c.m * rat(2, 1);
            if p.s == p.r {
                Verdict::at_least(c.n.clone(), rhs)
            } else {
                Verdict::vacuous(c.n.clone(), rhs)
            }
        }
        ConditionId::N4 => {
            let rhs = &c.m / rat(3, 1) * (rat(4, 1) - rat(p.r as i64, p.s as i64));
            Verdict::at_least(c.n.clone(), rhs)
        }
        ConditionId::N5 => {
            let rhs = &c.m * rat(4, 3);
            if c.s_over_r > one && c.s_over_r < c.ratio {
                Verdict::at_least(c.n.clone(), rhs)
            } else {
                Verdict::vacuous(c.n.clone(), rhs)
            }
        }
        ConditionId::N6 | ConditionId::Eq4 => {
            let lhs = rat(p.n as i64 - p.m as i64, 1) * rat_of(&c.cm3);
            let rhs = (&c.m - &c.n / rat(2, 1)) * &c.deficit;
            Verdict::at_least(lhs, rhs)
        }
        ConditionId::N7 | ConditionId::Eq5 => {
            let lhs =
                rat(2 * (p.n as i64 - p.m as i64), 1) * rat_of(&c.cm3) + rat_of(&(&c.cm2 * &c.cd2));
            let rhs = (&c.m - &c.n / rat(4, 1)) * &c.deficit;
            Verdict::at_least(lhs, rhs)
        }
        ConditionId::N8 => {
            let lhs = rat_of(&binomial(p.n - 1, 3)) / rat(p.s as i64, 1);
            let base = rat_of(&(&c.cm2 * &c.cd2));
            let residue = (p.m as i128 * (p.s as i128 - p.r as i128)).rem_euclid(3);
            let rhs = match residue {
                1 => base + rat_of(&(ExactInt::from(p.m) * &c.cd3)),
                2 => base + rat(p.m as i64, 2) * rat_of(&c.cd3),
                _ => base,
            };
            if c.s_over_r == c.ratio && residue != 0 {
                Verdict::at_most(lhs, rhs)
            } else {
                Verdict::vacuous(lhs, rhs)
            }
        }
        ConditionId::Eq2 => {
            let divisible = divisibility_count(p) == 4;
            Verdict {
                holds: divisible && one <= c.s_over_r && c.s_over_r <= c.ratio,
                lhs: c.s_over_r.clone(),
                rhs: c.ratio.clone(),
                vacuous: false,
            }
        }
        ConditionId::Eq3 => match p.s.cmp(&p.r) {
            Ordering::Equal => Verdict::at_least(c.n.clone(), &c.m * rat(2, 1)),
            Ordering::Greater => Verdict::at_least(c.n.clone(), &c.m * rat(4, 3)),
            Ordering::Less => Verdict::vacuous(c.n.clone(), &c.m * rat(4, 3)),
        },
    }
}

/// Evaluates every condition for `p` exactly.
pub fn check_conditions(p: &EmbeddingParams) -> ConditionReport {
    let common = Common::new(p);
    let verdicts = ConditionId::ALL
        .iter()
        .map(|&id| (id, verdict(p, &common, id)))
        .collect();
    ConditionReport {
        params: *p,
        verdicts,
        theorem_case: theorem_case(p),
    }
}

/// Evaluates a single condition.
pub fn check_condition(p: &EmbeddingParams, id: ConditionId) -> Verdict {
    verdict(p, &Common::new(p), id)
}

impl ConditionReport {
    pub fn get(&self, id: ConditionId) -> &Verdict {
        &self
            .verdicts
            .iter()
            .find(|(cid, _)| *cid == id)
            .expect("every condition is evaluated")
            .1
    }

    pub fn holds(&self, id: ConditionId) -> bool {
        self.get(id).holds
    }

    /// N1 through N8 all hold.
    pub fn all_hold(&self) -> bool {
        ConditionId::NECESSARY.iter().all(|&id| self.holds(id))
    }

    pub fn failing(&self) -> Vec<ConditionId> {
        ConditionId::NECESSARY
            .iter()
            .copied()
            .filter(|&id| !self.holds(id))
            .collect()
    }

    /// The two groupings agree: `eq2 = N1 & N2`, `eq4 = N6`, `eq5 = N7`,
    /// and `eq3 = N3 & N5` whenever `r C(n-1,3) > s C(m-1,3)`.
    pub fn is_cross_consistent(&self) -> bool {
        let h = |id| self.holds(id);
        let mut ok = h(ConditionId::Eq2) == (h(ConditionId::N1) && h(ConditionId::N2))
            && h(ConditionId::Eq4) == h(ConditionId::N6)
            && h(ConditionId::Eq5) == h(ConditionId::N7);
        if self.params.ratio_cmp() == Ordering::Greater {
            ok &= h(ConditionId::Eq3) == (h(ConditionId::N3) && h(ConditionId::N5));
        }
        ok
    }

    /// Line-oriented text form, one condition per line.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = format!(
            "# m={} n={} r={} s={} lambda={} theorem={} all_hold={}\n",
            p.m,
            p.n,
            p.r,
            p.s,
            p.lambda,
            self.theorem_case,
            self.all_hold()
        );
        for (id, v) in &self.verdicts {
            let mut flags = Vec::new();
            if v.vacuous {
                flags.push("vacuous");
            }
            if id.derivable() {
                flags.push("derivable");
            }
            out.push_str(&format!(
                "{} {} lhs={} rhs={}{}\n",
                id,
                if v.holds { "PASS" } else { "FAIL" },
                fmt_rat(&v.lhs),
                fmt_rat(&v.rhs),
                if flags.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", flags.join(","))
                }
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .verdicts
            .iter()
            .map(|(id, v)| {
                serde_json::json!({
                    "id": id.label(),
                    "holds": v.holds,
                    "vacuous": v.vacuous,
                    "derivable": id.derivable(),
                    "lhs": fmt_rat(&v.lhs),
                    "rhs": fmt_rat(&v.rhs),
                })
            })
            .collect();
        serde_json::json!({
            "params": self.params,
            "theorem_case": self.theorem_case.to_string(),
            "all_hold": self.all_hold(),
            "conditions": rows,
        })
    }
}

/// Facts that hold whenever `k = q`: a residue `m(s-r) != 0 (mod 3)` forces
/// `n >= m + 2`, and `n = m + 2` forces `s >= r + 2`. Returns `false` only on
/// a counterexample. Tuples with `k != q` are vacuously fine.
pub fn check_structural_facts(p: &EmbeddingParams) -> bool {
    if p.ratio_cmp() != Ordering::Equal {
        return true;
    }
    let residue = (p.m as i128 * (p.s as i128 - p.r as i128)).rem_euclid(3);
    let first = residue == 0 || p.n >= p.m + 2;
    let second = p.n != p.m + 2 || p.s >= p.r + 2;
    first && second
}

/// Fails with [`Error::ConditionsFail`] unless N1..N8 all hold.
pub fn require_all(report: &ConditionReport) -> Result<()> {
    if report.all_hold() {
        Ok(())
    } else {
        let failing: Vec<_> = report.failing().iter().map(|c| c.label()).collect();
        Err(Error::ConditionsFail(failing.join(",")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: u64, n: u64, r: u64, s: u64, l: u64) -> EmbeddingParams {
        EmbeddingParams::new(m, n, r, s, l).unwrap()
    }

    #[test]
    fn n6_unique_failure() {
        let rep = check_conditions(&params(7, 10, 4, 6, 1));
        assert_eq!(rep.failing(), vec![ConditionId::N6]);
        let v = rep.get(ConditionId::N6);
        assert_eq!(v.lhs, rat(105, 1));
        assert_eq!(v.rhs, rat(108, 1));
        assert!(rep.is_cross_consistent());
    }

    #[test]
    fn n7_unique_failure() {
        let rep = check_conditions(&params(10, 16, 6, 7, 1));
        assert_eq!(rep.failing(), vec![ConditionId::N7]);
        let v = rep.get(ConditionId::N7);
        assert_eq!(v.lhs, rat(2115, 1));
        assert_eq!(v.rhs, rat(2142, 1));
    }

    #[test]
    fn figure_example_passes() {
        let rep = check_conditions(&params(6, 8, 2, 5, 1));
        assert!(rep.all_hold());
        assert_eq!(rep.theorem_case, TheoremCase::StrictRatio);
        assert!(rep.is_cross_consistent());
    }

    #[test]
    fn equal_ratio_cases() {
        let p = params(5, 7, 4, 20, 1);
        let rep = check_conditions(&p);
        assert_eq!(rep.theorem_case, TheoremCase::EqualRatio);
        assert!(rep.all_hold());
        // m(s-r) = 80 = 2 mod 3, so N8 is live here
        assert!(!rep.get(ConditionId::N8).vacuous);
        assert!(check_structural_facts(&p));
    }

    #[test]
    fn out_of_scope_regions() {
        // ratio exceeded
        let rep = check_conditions(&params(6, 7, 1, 5, 1));
        assert_eq!(rep.theorem_case, TheoremCase::OutOfScope);
        assert!(!rep.holds(ConditionId::N2));
        // n < 4m/3 with s > r
        assert_eq!(
            theorem_case(&params(12, 15, 1, 2, 1)),
            TheoremCase::OutOfScope
        );
    }

    #[test]
    fn n3_binds_only_when_s_equals_r() {
        let rep = check_conditions(&params(8, 12, 1, 1, 1));
        assert!(!rep.holds(ConditionId::N3));
        let rep = check_conditions(&params(8, 16, 1, 1, 1));
        assert!(rep.all_hold());
    }

    #[test]
    fn text_report_lists_every_condition() {
        let rep = check_conditions(&params(7, 10, 4, 6, 1));
        let text = rep.to_text();
        assert_eq!(text.lines().count(), 13);
        assert!(text.contains("N6 FAIL lhs=105 rhs=108"));
        assert!(text.contains("N4 PASS"));
        let json = rep.to_json();
        assert_eq!(json["all_hold"], false);
        assert_eq!(json["conditions"][5]["rhs"], "108");
    }

    #[test]
    fn require_all_names_failures() {
        let rep = check_conditions(&params(10, 16, 6, 7, 1));
        assert_eq!(require_all(&rep), Err(Error::ConditionsFail("N7".into())));
    }
}
