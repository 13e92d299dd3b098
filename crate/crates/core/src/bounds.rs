//! Global and per-color bounds on how many `u^3 v` and `u^2 v^2` edges of
//! the two-point amalgamation a color class may take, and the six-way case
//! split driven by their signs.
//!
//! Notation follows the amalgamation: `u` stands for the `m` old points,
//! `v` for the `n - m` new points. For a color `j` with `e_j` edges of shape
//! `u^3 v`:
//!
//! | bound      | old colors                    | new colors          |
//! |------------|-------------------------------|---------------------|
//! | `iota_i`   | `sm - sn/2 - rm/2`            | `sm - sn/2`         |
//! | `rho_i`    | `(sm - rm)/3`                 | `sm/3`              |
//! | `rho'_i`   | `sm/2 - sn/8 - 3rm/8`         | `sm/2 - sn/8`       |
//! | `iota_ij`  | `sm - sn/4 - 2e_j - 3rm/4`    | `sm - sn/4 - 2e_j`  |
//! | `rho_ij`   | `sm/2 - 3e_j/2 - rm/2`        | `sm/2 - 3e_j/2`     |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conditions::{theorem_case, TheoremCase};
use crate::error::{Error, Result};
use crate::exact::{fmt_rat, integral, rat, ExactInt, ExactRat};
use crate::params::{EmbeddingParams, Tier};

/// Formula values for both tiers, computed whether or not new colors exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thresholds {
    pub iota: [ExactRat; 2],
    pub rho: [ExactRat; 2],
    pub rho_prime: [ExactRat; 2],
}

impl Thresholds {
    pub fn new(p: &EmbeddingParams) -> Self {
        let (m, n, r, s) = (p.m as i64, p.n as i64, p.r as i64, p.s as i64);
        let sm = rat(s * m, 1);
        let half_sn = rat(s * n, 2);
        let iota2 = &sm - &half_sn;
        let rho2 = rat(s * m, 3);
        let rhop2 = rat(s * m, 2) - rat(s * n, 8);
        Thresholds {
            iota: [&iota2 - rat(r * m, 2), iota2],
            rho: [&rho2 - rat(r * m, 3), rho2],
            rho_prime: [&rhop2 - rat(3 * r * m, 8), rhop2],
        }
    }

    fn idx(tier: Tier) -> usize {
        match tier {
            Tier::Old => 0,
            Tier::New => 1,
        }
    }

    pub fn iota(&self, tier: Tier) -> &ExactRat {
        &self.iota[Self::idx(tier)]
    }

    pub fn rho(&self, tier: Tier) -> &ExactRat {
        &self.rho[Self::idx(tier)]
    }

    pub fn rho_prime(&self, tier: Tier) -> &ExactRat {
        &self.rho_prime[Self::idx(tier)]
    }
}

/// Global bounds. The new-color entries are absent when `k = q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSet {
    pub iota1: ExactInt,
    pub iota2: Option<ExactInt>,
    pub rho1: ExactRat,
    pub rho2: Option<ExactRat>,
    pub rhop1: ExactRat,
    pub rhop2: Option<ExactRat>,
    pub q: u64,
    pub k: u64,
}

pub fn global_bounds(p: &EmbeddingParams) -> Result<BoundSet> {
    let (q, k) = p.color_counts()?;
    let t = Thresholds::new(p);
    let as_int = |x: &ExactRat, what: &str| {
        integral(x)
            .ok_or_else(|| Error::Invariant(format!("{what} = {} is not integral", fmt_rat(x))))
    };
    let iota1 = as_int(&t.iota[0], "iota1")?;
    let iota2 = as_int(&t.iota[1], "iota2")?;
    let new = k > q;
    Ok(BoundSet {
        iota1,
        iota2: new.then_some(iota2),
        rho1: t.rho[0].clone(),
        rho2: new.then(|| t.rho[1].clone()),
        rhop1: t.rho_prime[0].clone(),
        rhop2: new.then(|| t.rho_prime[1].clone()),
        q,
        k,
    })
}

impl BoundSet {
    pub fn has_new_colors(&self) -> bool {
        self.k > self.q
    }

    /// Invariants that hold once N1..N8 hold; returns the broken ones.
    pub fn invariant_violations(&self) -> Vec<String> {
        let zero = rat(0, 1);
        let iota1 = ExactRat::from_integer(self.iota1.clone());
        let mut bad = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                bad.push(what.to_string());
            }
        };
        check(self.rho1 >= zero, "rho1 >= 0");
        check(iota1 <= self.rhop1, "iota1 <= rho'1");
        check(self.rhop1 <= self.rho1, "rho'1 <= rho1");
        if let (Some(iota2), Some(rho2), Some(rhop2)) = (&self.iota2, &self.rho2, &self.rhop2) {
            let iota2 = ExactRat::from_integer(iota2.clone());
            check(iota2 > iota1, "iota2 > iota1");
            check(*rho2 > self.rho1, "rho2 > rho1");
            check(*rhop2 > self.rhop1, "rho'2 > rho'1");
            check(iota2 <= *rhop2, "iota2 <= rho'2");
            check(rhop2 <= rho2, "rho'2 <= rho2");
        }
        bad
    }

    pub fn to_text(&self) -> String {
        let opt_int = |x: &Option<ExactInt>| x.as_ref().map_or("NA".to_string(), |v| v.to_string());
        let opt_rat = |x: &Option<ExactRat>| x.as_ref().map_or("NA".to_string(), fmt_rat);
        format!(
            "q={} k={}\niota1={} rho'1={} rho1={}\niota2={} rho'2={} rho2={}\n",
            self.q,
            self.k,
            self.iota1,
            fmt_rat(&self.rhop1),
            fmt_rat(&self.rho1),
            opt_int(&self.iota2),
            opt_rat(&self.rhop2),
            opt_rat(&self.rho2),
        )
    }
}

/// Bounds on `f_j` once `e_j` is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerColorBounds {
    pub tier: Tier,
    pub iota_j: ExactInt,
    pub rho_j: ExactRat,
}

pub fn per_color_bounds(p: &EmbeddingParams, tier: Tier, e_j: i64) -> Result<PerColorBounds> {
    if e_j < 0 {
        return Err(Error::Precondition(format!(
            "e_j must be nonnegative, got {e_j}"
        )));
    }
    let (m, n, r, s) = (p.m as i64, p.n as i64, p.r as i64, p.s as i64);
    let rm = match tier {
        Tier::Old => r * m,
        Tier::New => 0,
    };
    let iota = rat(s * m, 1) - rat(s * n, 4) - rat(2 * e_j, 1) - rat(3 * rm, 4);
    let rho_j = rat(s * m, 2) - rat(3 * e_j, 2) - rat(rm, 2);
    let iota_j = integral(&iota)
        .ok_or_else(|| Error::Invariant(format!("iota_j = {} is not integral", fmt_rat(&iota))))?;
    Ok(PerColorBounds {
        tier,
        iota_j,
        rho_j,
    })
}

/// The six sign patterns of `(iota1, iota2, rho'1, rho'2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// `iota1 < iota2 <= 0`, `rho'1 < rho'2 < 0`; `n > 4m`.
    BothThresholdsNegative,
    /// `0 <= iota1 < iota2`, `0 <= rho'1 < rho'2`; `n <= (2 - r/s) m`.
    AllNonnegative,
    /// `iota1 < 0 <= iota2`, `0 <= rho'1 < rho'2`.
    OldLowerNegative,
    /// `iota1 < 0 < iota2`, `rho'1 < 0 <= rho'2`; forces `s < 3r/2`.
    OldThresholdNegative,
    /// `iota1 < iota2 < 0`, `0 <= rho'1 < rho'2`; forces `s > 3r/2`.
    LowersNegative,
    /// `iota1 < iota2 <= 0`, `rho'1 < 0 <= rho'2`.
    OnlyNewThreshold,
}

impl CaseTag {
    pub const ALL: [CaseTag; 6] = [
        CaseTag::BothThresholdsNegative,
        CaseTag::AllNonnegative,
        CaseTag::OldLowerNegative,
        CaseTag::OldThresholdNegative,
        CaseTag::LowersNegative,
        CaseTag::OnlyNewThreshold,
    ];

    /// Position 1..=6 in the case table.
    pub fn number(self) -> u8 {
        CaseTag::ALL.iter().position(|c| *c == self).unwrap() as u8 + 1
    }

    pub fn from_number(k: u8) -> Option<CaseTag> {
        CaseTag::ALL.get((k as usize).checked_sub(1)?).copied()
    }

    /// Does the sign pattern of `t` match this case?
    pub fn matches(self, t: &Thresholds) -> bool {
        let zero = rat(0, 1);
        let [i1, i2] = &t.iota;
        let [p1, p2] = &t.rho_prime;
        match self {
            CaseTag::BothThresholdsNegative => *i2 <= zero && *p2 < zero,
            CaseTag::AllNonnegative => *i1 >= zero,
            CaseTag::OldLowerNegative => *i1 < zero && *i2 >= zero && *p1 >= zero,
            CaseTag::OldThresholdNegative => *i1 < zero && *i2 > zero && *p1 < zero && *p2 >= zero,
            CaseTag::LowersNegative => *i2 < zero && *p1 >= zero,
            CaseTag::OnlyNewThreshold => *i2 <= zero && *p1 < zero && *p2 >= zero,
        }
    }

    /// The range of `n` this case corresponds to. The lower end of the last
    /// case is taken as `n >= 2m` (not strict) so that `n = 2m`, `r = s`
    /// lands somewhere.
    pub fn n_range_holds(self, p: &EmbeddingParams) -> bool {
        // Compare n against (a - b r/s) m by clearing the denominator s.
        let (m, n, r, s) = (p.m as i128, p.n as i128, p.r as i128, p.s as i128);
        let ns = n * s;
        let two_minus = (2 * s - r) * m; // (2 - r/s) m, times s
        let four_minus = (4 * s - 3 * r) * m; // (4 - 3r/s) m, times s
        match self {
            CaseTag::BothThresholdsNegative => n > 4 * m,
            CaseTag::AllNonnegative => ns <= two_minus,
            CaseTag::OldLowerNegative => two_minus < ns && n <= 2 * m && ns <= four_minus,
            CaseTag::OldThresholdNegative => four_minus < ns && n < 2 * m && 2 * s < 3 * r,
            CaseTag::LowersNegative => 2 * m < n && ns <= four_minus && 2 * s > 3 * r,
            CaseTag::OnlyNewThreshold => n >= 2 * m && ns > four_minus && n <= 4 * m,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Classifies `p` into exactly one of the six cases.
pub fn case_classify(p: &EmbeddingParams) -> Result<CaseTag> {
    p.color_counts()?;
    if theorem_case(p) == TheoremCase::OutOfScope {
        return Err(Error::OutOfScope(p.to_string()));
    }
    let t = Thresholds::new(p);
    let mut hits = CaseTag::ALL.iter().copied().filter(|c| c.matches(&t));
    match (hits.next(), hits.next()) {
        (Some(c), None) => Ok(c),
        (None, _) => Err(Error::Invariant(format!("no sign pattern matches {p}"))),
        (Some(a), Some(b)) => Err(Error::Invariant(format!(
            "cases {a} and {b} both match {p}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{floor, int};

    fn params(m: u64, n: u64, r: u64, s: u64) -> EmbeddingParams {
        EmbeddingParams::new(m, n, r, s, 1).unwrap()
    }

    fn floors(b: &BoundSet) -> [i64; 6] {
        let f = |x: &ExactRat| i64::try_from(floor(x)).unwrap();
        [
            i64::try_from(&b.iota1).unwrap(),
            f(&b.rhop1),
            f(&b.rho1),
            i64::try_from(b.iota2.as_ref().unwrap()).unwrap(),
            f(b.rhop2.as_ref().unwrap()),
            f(b.rho2.as_ref().unwrap()),
        ]
    }

    #[test]
    fn global_bound_rows() {
        assert_eq!(
            floors(&global_bounds(&params(6, 8, 2, 5)).unwrap()),
            [4, 5, 6, 10, 10, 10]
        );
        assert_eq!(
            floors(&global_bounds(&params(8, 16, 1, 1)).unwrap()),
            [-4, -1, 0, 0, 2, 2]
        );
        assert_eq!(
            floors(&global_bounds(&params(9, 12, 4, 11)).unwrap()),
            [15, 19, 21, 33, 33, 33]
        );
    }

    #[test]
    fn new_color_bounds_absent_when_k_equals_q() {
        let b = global_bounds(&params(6, 8, 2, 7)).unwrap();
        assert_eq!(b.q, b.k);
        assert!(b.iota2.is_none() && b.rho2.is_none() && b.rhop2.is_none());
        assert!(b.invariant_violations().is_empty());
        assert!(b.to_text().contains("iota2=NA"));
    }

    #[test]
    fn inadmissible_input_is_rejected() {
        assert!(global_bounds(&params(5, 8, 2, 5)).is_err());
    }

    #[test]
    fn per_color_examples() {
        let b = per_color_bounds(&params(6, 8, 2, 5), Tier::Old, 4).unwrap();
        assert_eq!((b.iota_j, b.rho_j), (int(3), rat(3, 1)));
        let p = params(6, 9, 2, 4);
        let b = per_color_bounds(&p, Tier::Old, 4).unwrap();
        assert_eq!((b.iota_j, b.rho_j), (int(-2), rat(0, 1)));
        let b = per_color_bounds(&p, Tier::New, 6).unwrap();
        assert_eq!((b.iota_j, b.rho_j), (int(3), rat(3, 1)));
        assert!(per_color_bounds(&p, Tier::New, -1).is_err());
    }

    #[test]
    fn case_examples() {
        assert_eq!(
            case_classify(&params(6, 8, 2, 5)).unwrap(),
            CaseTag::AllNonnegative
        );
        assert_eq!(
            case_classify(&params(5, 8, 4, 5)).unwrap(),
            CaseTag::OldLowerNegative
        );
        assert_eq!(
            case_classify(&params(8, 16, 1, 1)).unwrap(),
            CaseTag::OnlyNewThreshold
        );
        for c in CaseTag::ALL {
            assert_eq!(CaseTag::from_number(c.number()), Some(c));
        }
        assert_eq!(CaseTag::from_number(0), None);
    }

    #[test]
    fn classify_rejects_out_of_scope() {
        assert!(matches!(
            case_classify(&params(8, 10, 1, 2)),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn n_range_matches_examples() {
        for (m, n, r, s) in [(6, 8, 2, 5), (5, 8, 4, 5), (8, 16, 1, 1), (14, 20, 2, 3)] {
            let p = params(m, n, r, s);
            assert!(case_classify(&p).unwrap().n_range_holds(&p), "{p}");
        }
    }
}
