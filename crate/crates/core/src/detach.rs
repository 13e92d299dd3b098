//! Splitting the amalgamated points back into distinct points: given a
//! plan, find explicit 4-subsets with the planned shape counts per color
//! such that every color is regular on the larger ground set.
//!
//! The search assigns (subset, color) pairs depth first. Each node picks
//! the (color, point) pair with the least room between the degree it still
//! needs and the capacity of the subsets still usable for it, then tries
//! the usable subset through that point with the fewest usable colors. On
//! failure the subset is forbidden for that color, together with its images
//! under permutations of untouched points and of untouched colors that are
//! indistinguishable from it.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{verify_certificate, EmbeddingCertificate};
use crate::error::{Error, Result};
use crate::factorization::{all_quads, Factorization, Quad};
use crate::params::{check_small_ground, class_count, EmbeddingParams};
use crate::planner::{plan_unguided, verify_plan, AmalgamPlan};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Largest ground set the search accepts.
pub const MAX_GROUND: u16 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetachConfig {
    pub node_budget: u64,
    /// Seeds the tie-breaking order among equally constrained subsets.
    pub seed: u64,
}

impl Default for DetachConfig {
    fn default() -> Self {
        DetachConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            seed: 0,
        }
    }
}

/// An exact-cover style instance: place every subset (with multiplicity)
/// into some color so that every color meets its per-point degrees and
/// per-shape counts.
struct Problem {
    vertices: usize,
    quads: Vec<[u8; 4]>,
    /// Shape index 0..=4 of each subset.
    shape: Vec<u8>,
    /// Points with equal class are interchangeable.
    vclass: Vec<u8>,
    colors: usize,
    mult: u32,
    need: Vec<i32>,
    shape_quota: Vec<i32>,
    /// Colors with equal keys are interchangeable.
    color_key: Vec<u32>,
}

enum Step {
    Done,
    Dead,
    Branch(usize, usize),
}

struct Engine {
    p: Problem,
    by_vertex: Vec<Vec<u32>>,
    index: HashMap<[u8; 4], u32>,
    mult_left: Vec<u32>,
    need: Vec<i32>,
    shape_left: Vec<i32>,
    forbidden: Vec<bool>,
    touched_v: Vec<u32>,
    touched_c: Vec<u32>,
    assigned: Vec<(u32, u32)>,
    forbid_trail: Vec<usize>,
    priority: Vec<u64>,
    nodes: u64,
    budget: u64,
    // Scratch buffers reused by every node.
    cap_shape: Vec<i64>,
    cand: Vec<i64>,
    qcolors: Vec<u32>,
}

impl Engine {
    fn new(p: Problem, config: DetachConfig) -> Self {
        let (nq, nc, nv) = (p.quads.len(), p.colors, p.vertices);
        let mut by_vertex = vec![Vec::new(); nv];
        let mut index = HashMap::with_capacity(nq);
        for (i, q) in p.quads.iter().enumerate() {
            for &v in q {
                by_vertex[v as usize].push(i as u32);
            }
            index.insert(*q, i as u32);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let priority = (0..nq).map(|_| rng.next_u64()).collect();
        Engine {
            by_vertex,
            index,
            mult_left: vec![p.mult; nq],
            need: p.need.clone(),
            shape_left: p.shape_quota.clone(),
            forbidden: vec![false; nq * nc],
            touched_v: vec![0; nv],
            touched_c: vec![0; nc],
            assigned: Vec::new(),
            forbid_trail: Vec::new(),
            priority,
            nodes: 0,
            budget: config.node_budget,
            cap_shape: vec![0; nc * 5],
            cand: vec![0; nc * nv * 5],
            qcolors: vec![0; nq],
            p,
        }
    }

    fn usable(&self, qi: usize, j: usize) -> bool {
        let nv = self.p.vertices;
        self.mult_left[qi] > 0
            && !self.forbidden[qi * self.p.colors + j]
            && self.shape_left[j * 5 + self.p.shape[qi] as usize] > 0
            && self.p.quads[qi]
                .iter()
                .all(|&v| self.need[j * nv + v as usize] > 0)
    }

    fn step(&mut self) -> Step {
        let (nq, nc, nv) = (self.p.quads.len(), self.p.colors, self.p.vertices);
        self.cap_shape.iter_mut().for_each(|x| *x = 0);
        self.cand.iter_mut().for_each(|x| *x = 0);
        let mut open = false;
        for qi in 0..nq {
            self.qcolors[qi] = 0;
            if self.mult_left[qi] == 0 {
                continue;
            }
            open = true;
            let t = self.p.shape[qi] as usize;
            let m = self.mult_left[qi] as i64;
            for j in 0..nc {
                if self.usable(qi, j) {
                    self.qcolors[qi] += 1;
                    self.cap_shape[j * 5 + t] += m;
                    for &v in &self.p.quads[qi] {
                        self.cand[(j * nv + v as usize) * 5 + t] += m;
                    }
                }
            }
            if self.qcolors[qi] == 0 {
                return Step::Dead;
            }
        }
        if !open {
            let finished =
                self.need.iter().all(|&x| x == 0) && self.shape_left.iter().all(|&x| x == 0);
            return if finished { Step::Done } else { Step::Dead };
        }
        for i in 0..nc * 5 {
            if self.shape_left[i] as i64 > self.cap_shape[i] {
                return Step::Dead;
            }
        }
        let mut best: Option<(i64, usize, usize)> = None;
        for j in 0..nc {
            for v in 0..nv {
                let need = self.need[j * nv + v] as i64;
                if need == 0 {
                    continue;
                }
                let base = (j * nv + v) * 5;
                let cap: i64 = (0..5)
                    .map(|t| self.cand[base + t].min(self.shape_left[j * 5 + t] as i64))
                    .sum();
                if cap < need {
                    return Step::Dead;
                }
                if best.is_none_or(|(s, _, _)| cap - need < s) {
                    best = Some((cap - need, j, v));
                }
            }
        }
        let Some((_, j, v)) = best else {
            return Step::Dead;
        };
        let pick = self.by_vertex[v]
            .iter()
            .map(|&qi| qi as usize)
            .filter(|&qi| self.usable(qi, j))
            .min_by_key(|&qi| (self.qcolors[qi], self.priority[qi]));
        match pick {
            Some(qi) => Step::Branch(qi, j),
            None => Step::Dead,
        }
    }

    fn assign(&mut self, qi: usize, j: usize) {
        let nv = self.p.vertices;
        self.mult_left[qi] -= 1;
        self.shape_left[j * 5 + self.p.shape[qi] as usize] -= 1;
        for &v in &self.p.quads[qi] {
            self.need[j * nv + v as usize] -= 1;
            self.touched_v[v as usize] += 1;
        }
        self.touched_c[j] += 1;
        self.assigned.push((qi as u32, j as u32));
    }

    fn unassign(&mut self) {
        let nv = self.p.vertices;
        let (qi, j) = self.assigned.pop().expect("assignment to undo");
        let (qi, j) = (qi as usize, j as usize);
        self.mult_left[qi] += 1;
        self.shape_left[j * 5 + self.p.shape[qi] as usize] += 1;
        for &v in &self.p.quads[qi] {
            self.need[j * nv + v as usize] += 1;
            self.touched_v[v as usize] -= 1;
        }
        self.touched_c[j] -= 1;
    }

    /// Forbids `qi` for color `j` and for every image of the pair under the
    /// symmetries the current state still has.
    fn forbid_orbit(&mut self, qi: usize, j: usize) {
        let nc = self.p.colors;
        let colors: Vec<usize> = if self.touched_c[j] == 0 {
            (0..nc)
                .filter(|&c| self.touched_c[c] == 0 && self.p.color_key[c] == self.p.color_key[j])
                .collect()
        } else {
            vec![j]
        };
        let quad = self.p.quads[qi];
        let is_free = |v: u8| self.touched_v[v as usize] == 0;
        let fixed: Vec<u8> = quad.iter().copied().filter(|&v| !is_free(v)).collect();
        let mut pools: Vec<(Vec<u8>, usize)> = Vec::new();
        for class in quad
            .iter()
            .filter(|&&v| is_free(v))
            .map(|&v| self.p.vclass[v as usize])
        {
            if pools
                .iter()
                .any(|(pool, _)| self.p.vclass[pool[0] as usize] == class)
            {
                continue;
            }
            let pool: Vec<u8> = (0..self.p.vertices as u8)
                .filter(|&v| is_free(v) && self.p.vclass[v as usize] == class)
                .collect();
            let k = quad
                .iter()
                .filter(|&&v| is_free(v) && self.p.vclass[v as usize] == class)
                .count();
            pools.push((pool, k));
        }
        let mut images: Vec<Vec<u8>> = vec![fixed];
        for (pool, k) in &pools {
            let picks = combinations(pool, *k);
            images = images
                .iter()
                .flat_map(|base| {
                    picks.iter().map(move |pick| {
                        let mut q = base.clone();
                        q.extend_from_slice(pick);
                        q
                    })
                })
                .collect();
        }
        for mut image in images {
            image.sort_unstable();
            let key: [u8; 4] = image[..].try_into().expect("four points");
            let Some(&target) = self.index.get(&key) else {
                continue;
            };
            for &c in &colors {
                let slot = target as usize * nc + c;
                if !self.forbidden[slot] {
                    self.forbidden[slot] = true;
                    self.forbid_trail.push(slot);
                }
            }
        }
    }

    /// `None` once the node budget runs out.
    fn search(&mut self) -> Option<bool> {
        let mark = self.forbid_trail.len();
        let result = loop {
            self.nodes += 1;
            if self.nodes > self.budget {
                break None;
            }
            match self.step() {
                Step::Done => return Some(true),
                Step::Dead => break Some(false),
                Step::Branch(qi, j) => {
                    self.assign(qi, j);
                    match self.search() {
                        Some(true) => return Some(true),
                        None => break None,
                        Some(false) => self.unassign(),
                    }
                    self.forbid_orbit(qi, j);
                }
            }
        };
        while self.forbid_trail.len() > mark {
            let slot = self.forbid_trail.pop().expect("trail entry");
            self.forbidden[slot] = false;
        }
        result
    }

    /// Runs the search; returns the subsets of each color, 1-based.
    fn solve(mut self, what: &str) -> Result<(Vec<Vec<Quad>>, u64)> {
        match self.search() {
            Some(true) => {
                let mut classes = vec![Vec::new(); self.p.colors];
                for &(qi, j) in &self.assigned {
                    let q = self.p.quads[qi as usize];
                    classes[j as usize].push(q.map(|v| v as u16 + 1));
                }
                classes.iter_mut().for_each(|c| c.sort_unstable());
                Ok((classes, self.nodes))
            }
            Some(false) => Err(Error::SearchExhausted {
                nodes: self.nodes,
                reason: format!("{what}: search space exhausted without a solution"),
            }),
            None => Err(Error::SearchExhausted {
                nodes: self.budget,
                reason: format!("{what}: node budget spent"),
            }),
        }
    }
}

fn combinations(pool: &[u8], k: usize) -> Vec<Vec<u8>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if pool.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &v) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[i + 1..], k - 1) {
            rest.insert(0, v);
            out.push(rest);
        }
    }
    out
}

fn zero_based(q: &Quad) -> [u8; 4] {
    q.map(|v| (v - 1) as u8)
}

fn check_ground(ground: u64) -> Result<u16> {
    match u16::try_from(ground) {
        Ok(g) if g <= MAX_GROUND => Ok(g),
        _ => Err(Error::Precondition(format!(
            "ground set {ground} is beyond desk scale (max {MAX_GROUND})"
        ))),
    }
}

/// Searches for an `r`-factorization of `lambda K_m^4`.
pub fn generate_base(m: u64, r: u64, lambda: u64, config: DetachConfig) -> Result<Factorization> {
    generate_base_counted(m, r, lambda, config).map(|(f, _)| f)
}

pub fn generate_base_counted(
    m: u64,
    r: u64,
    lambda: u64,
    config: DetachConfig,
) -> Result<(Factorization, u64)> {
    check_small_ground(m, r, lambda)?;
    let q = class_count(m, r, lambda)? as usize;
    let ground = check_ground(m)?;
    let quads: Vec<[u8; 4]> = all_quads(ground).iter().map(zero_based).collect();
    let nv = m as usize;
    let mult = u32::try_from(lambda).map_err(|_| Error::Overflow(lambda.to_string()))?;
    let mut shape_quota = vec![0; q * 5];
    for j in 0..q {
        shape_quota[j * 5] = (r * m / 4) as i32;
    }
    let problem = Problem {
        vertices: nv,
        shape: vec![0; quads.len()],
        quads,
        vclass: vec![0; nv],
        colors: q,
        mult,
        need: vec![r as i32; q * nv],
        shape_quota,
        color_key: vec![0; q],
    };
    let (classes, nodes) = Engine::new(problem, config).solve("base factorization")?;
    let f = Factorization::new(ground, lambda, r, classes)?;
    if !f.is_valid() {
        return Err(Error::Invariant(format!(
            "generated base is invalid: {:?}",
            f.violations()
        )));
    }
    Ok((f, nodes))
}

/// Extends `base` to an `s`-factorization of `lambda K_n^4` whose colors
/// carry exactly the shape counts in `plan`.
pub fn detach(
    p: &EmbeddingParams,
    base: &Factorization,
    plan: &AmalgamPlan,
    config: DetachConfig,
) -> Result<EmbeddingCertificate> {
    detach_counted(p, base, plan, config).map(|(c, _)| c)
}

pub fn detach_counted(
    p: &EmbeddingParams,
    base: &Factorization,
    plan: &AmalgamPlan,
    config: DetachConfig,
) -> Result<(EmbeddingCertificate, u64)> {
    if !verify_plan(p, plan) {
        return Err(Error::Precondition(
            "plan fails its degree laws or totals".into(),
        ));
    }
    let (q, k) = p.color_counts()?;
    if base.ground as u64 != p.m
        || base.lambda != p.lambda
        || base.regularity != p.r
        || base.classes.len() as u64 != q
    {
        return Err(Error::Precondition(format!(
            "base must be a {}-factorization of {} K_{}^4 with {q} classes",
            p.r, p.lambda, p.m
        )));
    }
    if !base.is_valid() {
        return Err(Error::Precondition(format!(
            "base is not a factorization: {:?}",
            base.violations()
        )));
    }
    let ground = check_ground(p.n)?;
    let m = p.m as u8;
    let quads: Vec<[u8; 4]> = all_quads(ground)
        .iter()
        .filter(|q| q[3] > p.m as u16)
        .map(zero_based)
        .collect();
    let shape = quads
        .iter()
        .map(|q| q.iter().filter(|&&v| v >= m).count() as u8)
        .collect();
    let (nv, nc) = (p.n as usize, k as usize);
    let (s, r) = (p.s as i32, p.r as i32);
    let mut need = vec![s; nc * nv];
    for j in 0..q as usize {
        for v in 0..p.m as usize {
            need[j * nv + v] = s - r;
        }
    }
    let mut shape_quota = vec![0; nc * 5];
    let mut keys: Vec<(crate::params::Tier, i64, i64, i64, i64)> = Vec::new();
    let mut color_key = Vec::with_capacity(nc);
    for (j, c) in plan.colors().enumerate() {
        shape_quota[j * 5 + 1] = c.e as i32;
        shape_quota[j * 5 + 2] = c.f as i32;
        shape_quota[j * 5 + 3] = c.g as i32;
        shape_quota[j * 5 + 4] = c.h as i32;
        let key = (c.tier, c.e, c.f, c.g, c.h);
        let id = keys.iter().position(|k| *k == key).unwrap_or_else(|| {
            keys.push(key);
            keys.len() - 1
        });
        color_key.push(id as u32);
    }
    let problem = Problem {
        vertices: nv,
        quads,
        shape,
        vclass: (0..nv).map(|v| u8::from(v >= p.m as usize)).collect(),
        colors: nc,
        mult: u32::try_from(p.lambda).map_err(|_| Error::Overflow(p.lambda.to_string()))?,
        need,
        shape_quota,
        color_key,
    };
    let (found, nodes) = Engine::new(problem, config).solve("detachment")?;
    let classes = found
        .into_iter()
        .enumerate()
        .map(|(j, new)| {
            let mut class = base.classes.get(j).cloned().unwrap_or_default();
            class.extend(new);
            class
        })
        .collect();
    let outer = Factorization::new(ground, p.lambda, p.s, classes)?;
    let cert = EmbeddingCertificate::pair(base.clone(), outer);
    if !verify_certificate(&cert) {
        return Err(Error::Invariant(format!(
            "detachment produced an invalid certificate: {:?}",
            cert.violations()
        )));
    }
    Ok((cert, nodes))
}

/// Plans, builds or takes a base, and detaches.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub plan: AmalgamPlan,
    pub certificate: EmbeddingCertificate,
    pub nodes: u64,
}

pub fn embed(
    p: &EmbeddingParams,
    base: Option<Factorization>,
    config: DetachConfig,
) -> Result<Embedding> {
    let plan = plan_unguided(p)?;
    let (base, base_nodes) = match base {
        Some(b) => (b, 0),
        None => generate_base_counted(p.m, p.r, p.lambda, config)?,
    };
    let (certificate, nodes) = detach_counted(p, &base, &plan, config)?;
    Ok(Embedding {
        plan,
        certificate,
        nodes: base_nodes + nodes,
    })
}
