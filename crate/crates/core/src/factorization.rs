//! Colored multisets of 4-subsets and their line-oriented text form.
//!
//! A block looks like
//!
//! ```text
//! 6 1 2 5
//! 1: 1 2 3 5, 1 2 4 6, 3 4 5 6
//! 2: 1 2 3 4, 1 3 5 6, 2 4 5 6
//! ...
//! ```
//!
//! The header is `ground lambda regularity classes`; each class line starts
//! with its 1-based index. Vertices are 1-based.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A 4-subset with strictly increasing 1-based labels.
pub type Quad = [u16; 4];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub ground: u16,
    pub lambda: u64,
    pub regularity: u64,
    pub classes: Vec<Vec<Quad>>,
}

pub fn is_quad(q: &Quad, ground: u16) -> bool {
    q[0] >= 1 && q[0] < q[1] && q[1] < q[2] && q[2] < q[3] && q[3] <= ground
}

/// All 4-subsets of `{1..ground}` in lexicographic order.
pub fn all_quads(ground: u16) -> Vec<Quad> {
    let mut out = Vec::new();
    for a in 1..=ground {
        for b in a + 1..=ground {
            for c in b + 1..=ground {
                for d in c + 1..=ground {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

impl Factorization {
    pub fn new(ground: u16, lambda: u64, regularity: u64, classes: Vec<Vec<Quad>>) -> Result<Self> {
        for (i, class) in classes.iter().enumerate() {
            if let Some(q) = class.iter().find(|q| !is_quad(q, ground)) {
                return Err(Error::Precondition(format!(
                    "class {}: {q:?} is not a sorted 4-subset of 1..{ground}",
                    i + 1
                )));
            }
        }
        Ok(Factorization {
            ground,
            lambda,
            regularity,
            classes,
        })
    }

    /// `degrees[class][vertex - 1]`.
    pub fn degrees(&self) -> Vec<Vec<u64>> {
        self.classes
            .iter()
            .map(|class| {
                let mut d = vec![0u64; self.ground as usize];
                for q in class {
                    for &v in q {
                        d[v as usize - 1] += 1;
                    }
                }
                d
            })
            .collect()
    }

    pub fn is_regular(&self) -> bool {
        self.degrees()
            .iter()
            .flatten()
            .all(|&d| d == self.regularity)
    }

    /// Every 4-subset of the ground set appears exactly `lambda` times over
    /// all classes.
    pub fn is_complete(&self) -> bool {
        let mut count: HashMap<Quad, u64> = HashMap::new();
        for q in self.classes.iter().flatten() {
            *count.entry(*q).or_insert(0) += 1;
        }
        let expected = all_quads(self.ground);
        count.len() == expected.len() && expected.iter().all(|q| count.get(q) == Some(&self.lambda))
    }

    /// Human-readable reasons this is not a complete regular factorization.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.is_complete() {
            out.push(format!(
                "not every 4-subset of 1..{} appears {} times",
                self.ground, self.lambda
            ));
        }
        for (j, row) in self.degrees().iter().enumerate() {
            if let Some(v) = row.iter().position(|&d| d != self.regularity) {
                out.push(format!(
                    "class {}: vertex {} has degree {}, expected {}",
                    j + 1,
                    v + 1,
                    row[v],
                    self.regularity
                ));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Quads of class `j` lying inside `{1..m}`, sorted.
    pub fn restricted_class(&self, j: usize, m: u16) -> Vec<Quad> {
        let mut out: Vec<Quad> = self.classes[j]
            .iter()
            .copied()
            .filter(|q| q[3] <= m)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn render_into(&self, out: &mut String) {
        writeln!(
            out,
            "{} {} {} {}",
            self.ground,
            self.lambda,
            self.regularity,
            self.classes.len()
        )
        .unwrap();
        for (j, class) in self.classes.iter().enumerate() {
            let sets: Vec<String> = class
                .iter()
                .map(|q| format!("{} {} {} {}", q[0], q[1], q[2], q[3]))
                .collect();
            if sets.is_empty() {
                writeln!(out, "{}:", j + 1).unwrap();
            } else {
                writeln!(out, "{}: {}", j + 1, sets.join(", ")).unwrap();
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    /// Parses a single block.
    pub fn parse(text: &str) -> Result<Self> {
        let lines = content_lines(text);
        let mut it = lines.iter().peekable();
        let f = parse_block(&mut it)?.0;
        if let Some((line, _)) = it.next() {
            return Err(Error::Parse {
                line: *line,
                message: "trailing content after the last class".into(),
            });
        }
        Ok(f)
    }
}

pub(crate) type Lines<'a> = std::iter::Peekable<std::slice::Iter<'a, (usize, &'a str)>>;

/// Non-empty, non-comment lines with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a header, an optional `map:` line, and the class lines. Returns
/// the block and its map (1-based targets, as written).
pub(crate) fn parse_block(it: &mut Lines<'_>) -> Result<(Factorization, Option<Vec<usize>>)> {
    let &(hl, header) = it.next().ok_or_else(|| parse_err(0, "missing header"))?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| parse_err(hl, format!("bad header field `{t}`")))
        })
        .collect::<Result<_>>()?;
    let [ground, lambda, regularity, count] = nums[..] else {
        return Err(parse_err(
            hl,
            format!("header needs 4 fields, found {}", nums.len()),
        ));
    };
    let ground = u16::try_from(ground).map_err(|_| parse_err(hl, "ground set too large"))?;
    let mut map = None;
    if let Some(&&(ml, line)) = it.peek() {
        if let Some(rest) = line.strip_prefix("map:") {
            it.next();
            let targets = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| parse_err(ml, format!("bad map entry `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            map = Some(targets);
        }
    }
    let mut classes = Vec::new();
    for idx in 1..=count {
        let &(ln, line) = it
            .next()
            .ok_or_else(|| parse_err(hl, format!("expected {count} classes, found {}", idx - 1)))?;
        let (label, body) = line
            .split_once(':')
            .ok_or_else(|| parse_err(ln, "class line needs `index:`"))?;
        if label.trim().parse::<u64>() != Ok(idx) {
            return Err(parse_err(
                ln,
                format!("expected class {idx}, found `{}`", label.trim()),
            ));
        }
        let mut class = Vec::new();
        for set in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let v: Vec<u16> = set
                .split_whitespace()
                .map(|t| {
                    t.parse::<u16>()
                        .map_err(|_| parse_err(ln, format!("bad vertex `{t}`")))
                })
                .collect::<Result<_>>()?;
            let q: Quad = v[..]
                .try_into()
                .map_err(|_| parse_err(ln, format!("`{set}` does not have 4 vertices")))?;
            if !is_quad(&q, ground) {
                return Err(parse_err(
                    ln,
                    format!("`{set}` is not a sorted 4-subset of 1..{ground}"),
                ));
            }
            class.push(q);
        }
        classes.push(class);
    }
    Ok((
        Factorization {
            ground,
            lambda,
            regularity,
            classes,
        },
        map,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k6() -> Factorization {
        Factorization::parse(
            "6 1 2 5\n\
             1: 1 2 3 5, 1 2 4 6, 3 4 5 6\n\
             2: 1 2 3 4, 1 3 5 6, 2 4 5 6\n\
             3: 1 2 4 5, 1 3 4 6, 2 3 5 6\n\
             4: 1 2 5 6, 1 3 4 5, 2 3 4 6\n\
             5: 1 2 3 6, 1 4 5 6, 2 3 4 5\n",
        )
        .unwrap()
    }

    #[test]
    fn small_factorization_is_valid() {
        let f = k6();
        assert!(f.is_complete());
        assert!(f.is_regular());
        assert!(f.violations().is_empty());
        assert_eq!(all_quads(6).len(), 15);
    }

    #[test]
    fn swapped_sets_break_regularity() {
        let mut f = k6();
        let a = f.classes[0][0];
        f.classes[0][0] = f.classes[1][0];
        f.classes[1][0] = a;
        assert!(f.is_complete());
        assert!(!f.is_regular());
    }

    #[test]
    fn round_trip() {
        let f = k6();
        let text = f.render();
        assert_eq!(Factorization::parse(&text).unwrap(), f);
        assert_eq!(Factorization::parse(&text).unwrap().render(), text);
    }

    #[test]
    fn parse_errors() {
        let bad = |t: &str| match Factorization::parse(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(bad("6 1 2\n"), 1);
        assert_eq!(bad("6 1 2 1\n1: 1 2 3\n"), 2);
        assert_eq!(bad("6 1 2 1\n1: 2 1 3 4\n"), 2);
        assert_eq!(bad("6 1 2 2\n1: 1 2 3 4\n# note\n3: 1 2 3 5\n"), 4);
        assert_eq!(bad("6 1 2 1\n1: 1 2 3 7\n"), 2);
    }

    #[test]
    fn construction_rejects_bad_quads() {
        assert!(Factorization::new(5, 1, 4, vec![vec![[1, 2, 3, 6]]]).is_err());
        assert!(Factorization::new(5, 1, 4, vec![vec![[1, 2, 3, 4]]]).is_ok());
    }
}
