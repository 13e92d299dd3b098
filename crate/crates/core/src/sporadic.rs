//! Hand-computed `e_j` distributions for tuples the case analysis is known
//! to be tight on. Used only as a fallback when the general machinery fails.

use crate::bounds::CaseTag;
use crate::error::{Error, Result};
use crate::planner::Subcase;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SporadicEntry {
    pub m: u64,
    pub n: u64,
    pub r: u64,
    pub s: u64,
    pub case: CaseTag,
    pub subcase: Option<Subcase>,
    /// `(value, count)` pairs for the old colors.
    pub old: Vec<(i64, u64)>,
    /// `(value, count)` pairs for the new colors; empty when `k = q`.
    pub new: Vec<(i64, u64)>,
}

/// `(m, n, r, s, case, subcase, old, new)`, all with `lambda = 1`.
type Row = (
    u64,
    u64,
    u64,
    u64,
    u8,
    Option<Subcase>,
    &'static str,
    &'static str,
);

const ROWS: &[Row] = &[
    (5, 8, 4, 5, 3, None, "0^1", "5^6"),
    (6, 8, 2, 5, 2, None, "4^5", "10^2"),
    (6, 9, 2, 4, 2, None, "0^2,2^3", "6^9"),
    (6, 9, 2, 8, 2, None, "6^2,8^3", "12^2"),
    (8, 12, 1, 3, 2, None, "2^18,4^17", "6^20"),
    (8, 16, 1, 1, 6, Some(Subcase::Low), "0^35", "0^196,2^224"),
    (8, 11, 5, 8, 2, None, "0^3,2^4", "20^8"),
    (8, 11, 5, 12, 2, None, "10^3,12^4", "30^3"),
    (8, 11, 7, 12, 2, None, "2^1,4^4", "30^5"),
    (9, 12, 4, 11, 2, None, "15^11,18^3", "33^1"),
    (9, 12, 8, 15, 2, None, "9^6,18^1", "45^4"),
    (12, 18, 1, 2, 2, None, "0^43,2^121,3^1", "6^150,7^25"),
    (12, 16, 3, 5, 2, None, "2^30,4^25", "20^36"),
    (12, 16, 3, 7, 2, None, "10^30,12^25", "28^10"),
    (14, 19, 2, 4, 2, None, "4^68,6^75", "18^61"),
    (14, 20, 2, 3, 3, None, "0^131,2^12", "12^180"),
    (16, 22, 1, 2, 2, None, "2^280,4^175", "10^210"),
    (28, 38, 1, 2, 2, None, "4^1035,6^1890", "18^960"),
    (5, 7, 4, 20, 2, None, "20^1", "NA"),
    (6, 8, 2, 7, 2, None, "8^5", "NA"),
    (6, 8, 10, 35, 2, None, "40^1", "NA"),
];

/// Parses `v^c,v^c,...` (or `NA` for an empty list).
pub fn parse_exponent_list(text: &str) -> Result<Vec<(i64, u64)>> {
    let text = text.trim();
    if text == "NA" || text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            let bad = || Error::Parse {
                line: 0,
                message: format!("bad multiset entry `{item}`"),
            };
            let (v, c) = item.trim().split_once('^').ok_or_else(bad)?;
            Ok((
                v.trim().parse().map_err(|_| bad())?,
                c.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

pub fn registry() -> Vec<SporadicEntry> {
    ROWS.iter()
        .map(|&(m, n, r, s, case, subcase, old, new)| SporadicEntry {
            m,
            n,
            r,
            s,
            case: CaseTag::from_number(case).expect("valid case number"),
            subcase,
            old: parse_exponent_list(old).expect("static table"),
            new: parse_exponent_list(new).expect("static table"),
        })
        .collect()
}

pub fn lookup(m: u64, n: u64, r: u64, s: u64) -> Option<SporadicEntry> {
    registry()
        .into_iter()
        .find(|e| (e.m, e.n, e.r, e.s) == (m, n, r, s))
}
