//! Nonnegative integer points of `a_i <= x_i <= b_i`, `sum x_i = c`.
//!
//! Entries come in runs of identical intervals, since the systems built by
//! the planner have one entry per color and hundreds of thousands of colors
//! sharing a handful of distinct bounds.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{floor, fmt_rat, rat_of, ExactInt, ExactRat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalRun {
    pub lower: ExactInt,
    pub upper: ExactRat,
    pub count: u64,
}

impl IntervalRun {
    pub fn new(lower: ExactInt, upper: ExactRat, count: u64) -> Self {
        IntervalRun {
            lower,
            upper,
            count,
        }
    }

    fn lowest(&self) -> ExactInt {
        if self.lower.is_negative() {
            ExactInt::zero()
        } else {
            self.lower.clone()
        }
    }

    fn highest(&self) -> ExactInt {
        floor(&self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSystem {
    pub runs: Vec<IntervalRun>,
    pub target: ExactInt,
}

/// One assignment per input run, itself run-length encoded as
/// `(value, how many entries take it)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSolution {
    pub runs: Vec<Vec<(ExactInt, u64)>>,
}

impl IntervalSolution {
    pub fn expand(&self) -> Vec<ExactInt> {
        self.runs
            .iter()
            .flatten()
            .flat_map(|(v, c)| std::iter::repeat_n(v.clone(), *c as usize))
            .collect()
    }

    pub fn total(&self) -> ExactInt {
        self.runs
            .iter()
            .flatten()
            .map(|(v, c)| v * ExactInt::from(*c))
            .sum()
    }
}

impl IntervalSystem {
    /// Builds and validates a system; each run needs `upper >= 0` and
    /// `lower <= upper`.
    pub fn new(runs: Vec<IntervalRun>, target: ExactInt) -> Result<Self> {
        for (i, run) in runs.iter().enumerate() {
            if run.upper.is_negative() {
                return Err(Error::InvalidSystem(format!(
                    "run {i}: upper bound {} is negative",
                    fmt_rat(&run.upper)
                )));
            }
            if rat_of(&run.lower) > run.upper {
                return Err(Error::InvalidSystem(format!(
                    "run {i}: lower bound {} exceeds upper bound {}",
                    run.lower,
                    fmt_rat(&run.upper)
                )));
            }
        }
        Ok(IntervalSystem { runs, target })
    }

    /// One run per entry.
    pub fn from_entries(entries: Vec<(ExactInt, ExactRat)>, target: ExactInt) -> Result<Self> {
        let runs = entries
            .into_iter()
            .map(|(a, b)| IntervalRun::new(a, b, 1))
            .collect();
        Self::new(runs, target)
    }

    pub fn len(&self) -> u64 {
        self.runs.iter().map(|r| r.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sum of the nonnegative lower bounds.
    pub fn lower_sum(&self) -> ExactInt {
        self.runs
            .iter()
            .map(|r| r.lowest() * ExactInt::from(r.count))
            .sum()
    }

    /// Sum of the floored upper bounds.
    pub fn upper_sum(&self) -> ExactInt {
        self.runs
            .iter()
            .map(|r| r.highest() * ExactInt::from(r.count))
            .sum()
    }

    pub fn feasible(&self) -> bool {
        self.lower_sum() <= self.target && self.target <= self.upper_sum()
    }

    /// Starts every entry at its lowest value and raises entries in order
    /// until the target is met.
    pub fn solve(&self) -> Option<IntervalSolution> {
        if !self.feasible() {
            return None;
        }
        let mut left = &self.target - self.lower_sum();
        let mut out = Vec::with_capacity(self.runs.len());
        for run in &self.runs {
            let lo = run.lowest();
            let gap = run.highest() - &lo;
            let mut pieces = Vec::new();
            if run.count == 0 {
                out.push(pieces);
                continue;
            }
            let count = ExactInt::from(run.count);
            if left.is_zero() || gap.is_zero() {
                pieces.push((lo, run.count));
            } else if left >= &gap * &count {
                left -= &gap * &count;
                pieces.push((lo + &gap, run.count));
            } else {
                let full = u64::try_from(&left / &gap).expect("bounded by count");
                let rest = &left % &gap;
                left = ExactInt::zero();
                if full > 0 {
                    pieces.push((&lo + &gap, full));
                }
                let mut used = full;
                if !rest.is_zero() {
                    pieces.push((&lo + rest, 1));
                    used += 1;
                }
                if run.count > used {
                    pieces.push((lo, run.count - used));
                }
            }
            out.push(pieces);
        }
        debug_assert!(left.is_zero());
        Some(IntervalSolution { runs: out })
    }

    /// Does `x` satisfy every interval and the sum?
    pub fn accepts(&self, x: &[ExactInt]) -> bool {
        let mut it = x.iter();
        for run in &self.runs {
            for _ in 0..run.count {
                match it.next() {
                    Some(v) if !v.is_negative() && *v >= run.lower && rat_of(v) <= run.upper => {}
                    _ => return false,
                }
            }
        }
        it.next().is_none() && x.iter().sum::<ExactInt>() == self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn system(entries: &[(i64, i64, i64)], c: i64) -> IntervalSystem {
        IntervalSystem::from_entries(
            entries
                .iter()
                .map(|&(a, bn, bd)| (int(a), rat(bn, bd)))
                .collect(),
            int(c),
        )
        .unwrap()
    }

    /// Exhaustive search over all integer points.
    fn brute_force(entries: &[(i64, i64, i64)], c: i64) -> bool {
        fn go(entries: &[(i64, i64, i64)], c: i64) -> bool {
            match entries.split_first() {
                None => c == 0,
                Some((&(a, bn, bd), rest)) => {
                    let hi = bn.div_euclid(bd);
                    (a.max(0)..=hi).any(|x| x <= c && go(rest, c - x))
                }
            }
        }
        go(entries, c)
    }

    #[test]
    fn colour_count_system_is_feasible() {
        let mut runs = vec![IntervalRun::new(int(0), rat(4, 1), 5)];
        runs.push(IntervalRun::new(int(6), rat(8, 1), 9));
        let sys = IntervalSystem::new(runs, int(60)).unwrap();
        assert!(sys.feasible());
        let sol = sys.solve().unwrap();
        assert!(sys.accepts(&sol.expand()));
        assert_eq!(sol.total(), int(60));
    }

    #[test]
    fn lower_sum_can_exceed_target() {
        let mut entries = vec![(-2, 0, 1)];
        entries.extend([(6, 6, 1); 4]);
        entries.push((-1, 0, 1));
        entries.extend([(3, 3, 1); 8]);
        let sys = system(&entries, 45);
        assert_eq!(sys.lower_sum(), int(48));
        assert!(!sys.feasible());
        assert!(sys.solve().is_none());
    }

    #[test]
    fn fractional_upper_bounds_are_floored() {
        let sys = system(&[(0, 7, 2), (1, 5, 2)], 5);
        assert_eq!(sys.upper_sum(), int(5));
        assert_eq!(sys.solve().unwrap().expand(), vec![int(3), int(2)]);
        assert!(!system(&[(0, 7, 2), (1, 5, 2)], 6).feasible());
    }

    #[test]
    fn invalid_systems_are_rejected() {
        let bad = IntervalSystem::from_entries(vec![(int(0), rat(-1, 2))], int(0));
        assert!(matches!(bad, Err(Error::InvalidSystem(_))));
        let bad = IntervalSystem::from_entries(vec![(int(3), rat(5, 2))], int(0));
        assert!(matches!(bad, Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn partial_run_is_split() {
        let sys =
            IntervalSystem::new(vec![IntervalRun::new(int(1), rat(4, 1), 10)], int(20)).unwrap();
        let sol = sys.solve().unwrap();
        assert_eq!(sol.runs[0], vec![(int(4), 3), (int(2), 1), (int(1), 6)]);
        assert!(sys.accepts(&sol.expand()));
    }

    #[test]
    fn huge_runs_stay_cheap() {
        let runs = vec![
            IntervalRun::new(int(-3), rat(9, 2), 1_000_000_000),
            IntervalRun::new(int(2), rat(2, 1), 7),
        ];
        let sys = IntervalSystem::new(runs, int(1_234_567_891)).unwrap();
        let sol = sys.solve().unwrap();
        assert_eq!(sol.total(), int(1_234_567_891));
    }

    #[test]
    fn agrees_with_brute_force_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut feasible = 0;
        for _ in 0..1000 {
            let len = rng.gen_range(0..=6);
            let entries: Vec<(i64, i64, i64)> = (0..len)
                .map(|_| {
                    let bd: i64 = rng.gen_range(1..=3);
                    let bn = rng.gen_range(0..=10 * bd);
                    let a = rng.gen_range(-10..=bn.div_euclid(bd));
                    (a, bn, bd)
                })
                .collect();
            let c = rng.gen_range(0..=30);
            let sys = system(&entries, c);
            let expected = brute_force(&entries, c);
            assert_eq!(sys.feasible(), expected, "{entries:?} c={c}");
            if let Some(sol) = sys.solve() {
                assert!(sys.accepts(&sol.expand()));
                feasible += 1;
            }
        }
        assert!(feasible > 100);
    }

    proptest! {
        #[test]
        fn widening_keeps_feasibility(
            raw in prop::collection::vec((-3i64..5, 0i64..8, 0i64..3, 0i64..3), 1..6),
            c in 0i64..30,
        ) {
            let narrow: Vec<_> = raw.iter().map(|&(a, w, _, _)| (a, a.max(0) + w, 1)).collect();
            let wide: Vec<_> = raw
                .iter()
                .map(|&(a, w, dl, du)| (a - dl, a.max(0) + w + du, 1))
                .collect();
            if system(&narrow, c).feasible() {
                prop_assert!(system(&wide, c).feasible());
            }
        }
    }
}
