//! Parameter tuples and admissibility.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, to_i64, ExactInt};

/// The tuple `(m, n, r, s, lambda)`: an `r`-factorization of `lambda K_m^4`
/// to be extended to an `s`-factorization of `lambda K_n^4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EmbeddingParams {
    pub m: u64,
    pub n: u64,
    pub r: u64,
    pub s: u64,
    pub lambda: u64,
}

/// Which side of the embedding a color belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Colors of the inner factorization, `1..=q`.
    Old,
    /// Colors used only on edges touching a new point, `q+1..=k`.
    New,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Old => "old",
            Tier::New => "new",
        })
    }
}

impl std::str::FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "old" => Ok(Tier::Old),
            "new" => Ok(Tier::New),
            other => Err(format!("unknown tier `{other}`")),
        }
    }
}

/// `4 | r m` and `r | lambda C(m-1, 3)`.
pub fn is_admissible(m: u64, r: u64, lambda: u64) -> Result<bool> {
    if m < 4 || r == 0 || lambda == 0 {
        return Err(Error::Precondition(format!(
            "admissibility needs m >= 4, r >= 1, lambda >= 1 (got m={m}, r={r}, lambda={lambda})"
        )));
    }
    let degree = ExactInt::from(lambda) * binomial(m - 1, 3);
    Ok((r * m).is_multiple_of(4) && (degree % r) == ExactInt::from(0))
}

/// Number of classes in an `r`-factorization of `lambda K_m^4`.
pub fn class_count(m: u64, r: u64, lambda: u64) -> Result<u64> {
    if !is_admissible(m, r, lambda)? {
        return Err(Error::Inadmissible { m, r, lambda });
    }
    let q = ExactInt::from(lambda) * binomial(m - 1, 3) / r;
    Ok(to_i64(&q)? as u64)
}

/// Rejects `lambda K_4^4` factorizations with `lambda = 1` or `r = 1`, which
/// are trivial.
pub fn check_small_ground(m: u64, r: u64, lambda: u64) -> Result<()> {
    if m == 4 && (lambda < 2 || r < 2) {
        return Err(Error::Precondition(format!(
            "m = 4 requires lambda >= 2 and r >= 2 (got lambda={lambda}, r={r})"
        )));
    }
    Ok(())
}

impl EmbeddingParams {
    /// Validates `n > m >= 4`, positive `r, s, lambda`, and the `m = 4`
    /// exclusion. Admissibility is not required here; see
    /// [`EmbeddingParams::color_counts`].
    pub fn new(m: u64, n: u64, r: u64, s: u64, lambda: u64) -> Result<Self> {
        if m < 4 || n <= m {
            return Err(Error::Precondition(format!(
                "need n > m >= 4 (got m={m}, n={n})"
            )));
        }
        if r == 0 || s == 0 || lambda == 0 {
            return Err(Error::Precondition(format!(
                "r, s, lambda must be positive (got r={r}, s={s}, lambda={lambda})"
            )));
        }
        check_small_ground(m, r, lambda)?;
        Ok(EmbeddingParams { m, n, r, s, lambda })
    }

    pub fn inner_admissible(&self) -> bool {
        is_admissible(self.m, self.r, self.lambda).unwrap_or(false)
    }

    pub fn outer_admissible(&self) -> bool {
        is_admissible(self.n, self.s, self.lambda).unwrap_or(false)
    }

    /// `(q, k)`: class counts of the inner and outer factorizations.
    pub fn color_counts(&self) -> Result<(u64, u64)> {
        Ok((
            class_count(self.m, self.r, self.lambda)?,
            class_count(self.n, self.s, self.lambda)?,
        ))
    }

    /// Compares `r C(n-1,3)` with `s C(m-1,3)`; `Equal` means `k = q`.
    pub fn ratio_cmp(&self) -> Ordering {
        let lhs = ExactInt::from(self.r) * binomial(self.n - 1, 3);
        let rhs = ExactInt::from(self.s) * binomial(self.m - 1, 3);
        lhs.cmp(&rhs)
    }

    /// `3n >= 4m`.
    pub fn n_at_least_four_thirds_m(&self) -> bool {
        3 * self.n >= 4 * self.m
    }

    pub fn tier_of(&self, q: u64, color: u64) -> Tier {
        if color < q {
            Tier::Old
        } else {
            Tier::New
        }
    }
}

impl fmt::Display for EmbeddingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} n={} r={} s={} lambda={}",
            self.m, self.n, self.r, self.s, self.lambda
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(6, 2, 1).unwrap());
        assert!(is_admissible(5, 4, 1).unwrap());
        assert!(!is_admissible(5, 2, 1).unwrap());
        assert!(is_admissible(3, 1, 1).is_err());
    }

    #[test]
    fn color_count_examples() {
        let p = EmbeddingParams::new(6, 8, 2, 5, 1).unwrap();
        assert_eq!(p.color_counts().unwrap(), (5, 7));
        let p = EmbeddingParams::new(8, 16, 1, 1, 1).unwrap();
        assert_eq!(p.color_counts().unwrap(), (35, 455));
        assert_eq!(class_count(4, 4, 4).unwrap(), 1);
    }

    #[test]
    fn non_integral_counts_are_errors() {
        let p = EmbeddingParams::new(5, 8, 2, 5, 1).unwrap();
        assert!(matches!(
            p.color_counts(),
            Err(Error::Inadmissible { m: 5, r: 2, .. })
        ));
    }

    #[test]
    fn small_ground_exclusion() {
        assert!(EmbeddingParams::new(4, 5, 1, 1, 1).is_err());
        assert!(EmbeddingParams::new(4, 5, 2, 2, 1).is_err());
        assert!(EmbeddingParams::new(4, 5, 2, 2, 2).is_ok());
        assert!(EmbeddingParams::new(6, 6, 2, 2, 1).is_err());
    }

    #[test]
    fn equal_ratio_detection() {
        // 4 * C(6,3) = 80 = 20 * C(4,3)
        let p = EmbeddingParams::new(5, 7, 4, 20, 1).unwrap();
        assert_eq!(p.ratio_cmp(), Ordering::Equal);
        assert_eq!(p.color_counts().unwrap(), (1, 1));
    }
}
