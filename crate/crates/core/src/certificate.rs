//! Chains of nested factorizations, each extending the previous one.
//!
//! A certificate file is a sequence of factorization blocks, innermost
//! first. A block after the first may carry a `map:` line right after its
//! header listing, for each class of the previous block, the class of this
//! block that extends it. Without it the map is the identity.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factorization::{content_lines, parse_block, Factorization, Quad};
use crate::params::{EmbeddingParams, Tier};
use crate::planner::{AmalgamPlan, ColorBlock, PlanSource};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingCertificate {
    pub levels: Vec<Factorization>,
    /// `maps[i][c]` is the class of `levels[i + 1]` extending class `c` of
    /// `levels[i]`, 0-based.
    pub maps: Vec<Vec<usize>>,
}

impl EmbeddingCertificate {
    pub fn pair(inner: Factorization, outer: Factorization) -> Self {
        let map = (0..inner.classes.len()).collect();
        EmbeddingCertificate {
            levels: vec![inner, outer],
            maps: vec![map],
        }
    }

    pub fn single(f: Factorization) -> Self {
        EmbeddingCertificate {
            levels: vec![f],
            maps: Vec::new(),
        }
    }

    pub fn inner(&self) -> &Factorization {
        &self.levels[self.levels.len().saturating_sub(2)]
    }

    pub fn outer(&self) -> &Factorization {
        self.levels.last().expect("at least one level")
    }

    /// The tuple `(m, n, r, s, lambda)` of the outermost step.
    pub fn params(&self) -> Result<EmbeddingParams> {
        let (i, o) = (self.inner(), self.outer());
        EmbeddingParams::new(
            i.ground as u64,
            o.ground as u64,
            i.regularity,
            o.regularity,
            o.lambda,
        )
    }

    /// Every reason the chain fails to be a valid nested embedding.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.levels.is_empty() {
            out.push("no factorization levels".into());
            return out;
        }
        if self.maps.len() + 1 != self.levels.len() {
            out.push(format!(
                "{} levels but {} maps",
                self.levels.len(),
                self.maps.len()
            ));
            return out;
        }
        for (i, level) in self.levels.iter().enumerate() {
            out.extend(
                level
                    .violations()
                    .into_iter()
                    .map(|v| format!("level {}: {v}", i + 1)),
            );
        }
        for (i, map) in self.maps.iter().enumerate() {
            let (inner, outer) = (&self.levels[i], &self.levels[i + 1]);
            let tag = format!("levels {}-{}", i + 1, i + 2);
            if inner.ground >= outer.ground || inner.lambda != outer.lambda {
                out.push(format!(
                    "{tag}: outer level must have a larger ground set and the same lambda"
                ));
                continue;
            }
            if map.len() != inner.classes.len() {
                out.push(format!(
                    "{tag}: map has {} entries for {} classes",
                    map.len(),
                    inner.classes.len()
                ));
                continue;
            }
            let mut hit = vec![false; outer.classes.len()];
            for (c, &t) in map.iter().enumerate() {
                if t >= outer.classes.len() || hit[t] {
                    out.push(format!(
                        "{tag}: map entry {} is out of range or repeated",
                        c + 1
                    ));
                    continue;
                }
                hit[t] = true;
                let mut want = inner.classes[c].clone();
                want.sort_unstable();
                if outer.restricted_class(t, inner.ground) != want {
                    out.push(format!(
                        "{tag}: class {} does not restrict to class {}",
                        t + 1,
                        c + 1
                    ));
                }
            }
            for (t, _) in hit.iter().enumerate().filter(|(_, h)| !**h) {
                if !outer.restricted_class(t, inner.ground).is_empty() {
                    out.push(format!(
                        "{tag}: unmapped class {} meets the inner ground set",
                        t + 1
                    ));
                }
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, level) in self.levels.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let mut block = String::new();
            level.render_into(&mut block);
            if let Some(map) = i.checked_sub(1).map(|j| &self.maps[j]) {
                if map.iter().enumerate().any(|(c, &t)| c != t) {
                    let targets: Vec<String> = map.iter().map(|t| (t + 1).to_string()).collect();
                    let (head, rest) = block.split_once('\n').expect("header line");
                    block = format!("{head}\nmap: {}\n{rest}", targets.join(" "));
                }
            }
            out += &block;
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines = content_lines(text);
        let mut it = lines.iter().peekable();
        let mut levels: Vec<Factorization> = Vec::new();
        let mut maps = Vec::new();
        while let Some(&&(line, _)) = it.peek() {
            let (f, map) = parse_block(&mut it)?;
            match (levels.last(), map) {
                (None, Some(_)) => {
                    return Err(Error::Parse {
                        line,
                        message: "the first block cannot carry a map".into(),
                    })
                }
                (None, None) => {}
                (Some(prev), None) => maps.push((0..prev.classes.len()).collect()),
                (Some(_), Some(m)) => {
                    if m.contains(&0) {
                        return Err(Error::Parse {
                            line,
                            message: "map entries are 1-based".into(),
                        });
                    }
                    maps.push(m.into_iter().map(|t| t - 1).collect());
                }
            }
            levels.push(f);
        }
        if levels.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no factorization blocks".into(),
            });
        }
        Ok(EmbeddingCertificate { levels, maps })
    }
}

/// Recomputes completeness, regularity and the restriction property of
/// every level from the raw sets.
pub fn verify_certificate(cert: &EmbeddingCertificate) -> bool {
    cert.violations().is_empty()
}

/// Number of points of `q` outside `{1..m}`.
pub fn new_points(q: &Quad, m: u16) -> usize {
    q.iter().filter(|&&v| v > m).count()
}

/// Collapses the outermost step to the two-point amalgamation and reads off
/// per-color shape counts. Old colors are the images of the inner classes,
/// listed in inner order; the remaining outer classes follow in order.
pub fn amalgamate(cert: &EmbeddingCertificate) -> Result<AmalgamPlan> {
    if cert.levels.len() < 2 {
        return Err(Error::Precondition(
            "amalgamation needs an inner and an outer level".into(),
        ));
    }
    let p = cert.params()?;
    let (inner, outer) = (cert.inner(), cert.outer());
    let map = cert.maps.last().expect("maps match levels");
    let mut order: Vec<(Tier, usize)> = map.iter().map(|&t| (Tier::Old, t)).collect();
    order.extend(
        (0..outer.classes.len())
            .filter(|t| !map.contains(t))
            .map(|t| (Tier::New, t)),
    );
    let blocks = order
        .into_iter()
        .map(|(tier, t)| {
            let mut shape = BTreeMap::new();
            for q in &outer.classes[t] {
                *shape.entry(new_points(q, inner.ground)).or_insert(0i64) += 1;
            }
            let get = |i| shape.get(&i).copied().unwrap_or(0);
            ColorBlock {
                tier,
                count: 1,
                e: get(1),
                f: get(2),
                g: get(3),
                h: get(4),
            }
        })
        .collect();
    Ok(AmalgamPlan::new(
        p,
        inner.classes.len() as u64,
        outer.classes.len() as u64,
        None,
        None,
        PlanSource::Amalgamated,
        blocks,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "\
5 1 4 1
1: 1 2 3 4

6 1 2 1
map: 1
1: 1 2 3 4, 1 2 5 6, 3 4 5 6
";

    #[test]
    fn map_is_parsed_and_rendered() {
        let cert = EmbeddingCertificate::parse(TINY).unwrap();
        assert_eq!(cert.levels.len(), 2);
        assert_eq!(cert.maps, vec![vec![0]]);
        // Identity maps are not written back.
        assert!(!cert.render().contains("map:"));
        let moved = EmbeddingCertificate {
            maps: vec![vec![2]],
            ..cert.clone()
        };
        let text = moved.render();
        assert!(text.contains("map: 3"));
        assert_eq!(EmbeddingCertificate::parse(&text).unwrap(), moved);
    }

    #[test]
    fn broken_chain_is_reported() {
        let cert = EmbeddingCertificate::parse(TINY).unwrap();
        assert!(!verify_certificate(&cert));
        assert!(!cert.violations().is_empty());
    }

    #[test]
    fn parse_rejects_bad_maps() {
        assert!(EmbeddingCertificate::parse("5 1 4 1\nmap: 1\n1: 1 2 3 4\n").is_err());
        let zero = TINY.replace("map: 1", "map: 0");
        assert!(EmbeddingCertificate::parse(&zero).is_err());
        assert!(EmbeddingCertificate::parse("# nothing\n").is_err());
    }
}
