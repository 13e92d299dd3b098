//! Helpers shared by the integration tests. Bounds are recomputed here in
//! plain scaled integer arithmetic, independently of the library.

#![allow(dead_code)]

use quadembed::EmbeddingParams;

pub fn binom(a: i128, b: i128) -> i128 {
    if b < 0 || a < b {
        return 0;
    }
    let mut acc = 1i128;
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

pub fn admissible(m: u64, r: u64, lambda: u64) -> bool {
    let (m, r, l) = (m as i128, r as i128, lambda as i128);
    (r * m) % 4 == 0 && (l * binom(m - 1, 3)) % r == 0
}

/// Global bounds multiplied by 24, indexed by tier (0 old, 1 new).
#[derive(Debug, Clone, Copy)]
pub struct Scaled {
    pub iota: [i128; 2],
    pub rho: [i128; 2],
    pub rhop: [i128; 2],
}

pub fn scaled(p: &EmbeddingParams) -> Scaled {
    let (m, n, r, s) = (p.m as i128, p.n as i128, p.r as i128, p.s as i128);
    Scaled {
        iota: [
            24 * s * m - 12 * s * n - 12 * r * m,
            24 * s * m - 12 * s * n,
        ],
        rho: [8 * (s * m - r * m), 8 * s * m],
        rhop: [12 * s * m - 3 * s * n - 9 * r * m, 12 * s * m - 3 * s * n],
    }
}

pub fn fl(x24: i128) -> i128 {
    x24.div_euclid(24)
}

pub fn ce(x24: i128) -> i128 {
    -(-x24).div_euclid(24)
}

/// `iota_ij` and `rho_ij`, times 24, for a color of tier `t` with `e_j`.
pub fn per_color(p: &EmbeddingParams, t: usize, e_j: i128) -> (i128, i128) {
    let (m, n, r, s) = (p.m as i128, p.n as i128, p.r as i128, p.s as i128);
    let rm = if t == 0 { r * m } else { 0 };
    (
        24 * s * m - 6 * s * n - 48 * e_j - 18 * rm,
        12 * s * m - 36 * e_j - 12 * rm,
    )
}

/// `(q, k, e, f)` by direct counting formulas.
pub fn counts(p: &EmbeddingParams) -> (i128, i128, i128, i128) {
    let (m, n, r, s, l) = (
        p.m as i128,
        p.n as i128,
        p.r as i128,
        p.s as i128,
        p.lambda as i128,
    );
    (
        l * binom(m - 1, 3) / r,
        l * binom(n - 1, 3) / s,
        l * (n - m) * binom(m, 3),
        l * binom(m, 2) * binom(n - m, 2),
    )
}

/// Admissible tuples `4 <= m < n <= n_max`, `r, s <= rs_max`,
/// `lambda <= lambda_max`, minus the excluded small ground sets.
pub fn sweep(n_max: u64, rs_max: u64, lambda_max: u64) -> Vec<EmbeddingParams> {
    let mut out = Vec::new();
    for m in 4..n_max {
        for n in m + 1..=n_max {
            for r in 1..=rs_max {
                for s in 1..=rs_max {
                    for l in 1..=lambda_max {
                        if m == 4 && (l < 2 || r < 2) {
                            continue;
                        }
                        if admissible(m, r, l) && admissible(n, s, l) {
                            out.push(EmbeddingParams::new(m, n, r, s, l).unwrap());
                        }
                    }
                }
            }
        }
    }
    out
}

/// Degree laws and totals checked from scratch.
pub fn plan_is_consistent(p: &EmbeddingParams, plan: &quadembed::AmalgamPlan) -> bool {
    let (m, n, r, s, l) = (
        p.m as i128,
        p.n as i128,
        p.r as i128,
        p.s as i128,
        p.lambda as i128,
    );
    let (q, k, e, f) = counts(p);
    let mut tot = [0i128; 4];
    let mut colors = 0i128;
    for (j, c) in plan.colors().enumerate() {
        let old = (j as i128) < q;
        let (ce_, cf, cg, ch) = (c.e as i128, c.f as i128, c.g as i128, c.h as i128);
        if ce_ < 0 || cf < 0 || cg < 0 || ch < 0 {
            return false;
        }
        let u = if old { m * (s - r) } else { s * m };
        if 3 * ce_ + 2 * cf + cg != u || ce_ + 2 * cf + 3 * cg + 4 * ch != s * (n - m) {
            return false;
        }
        tot[0] += ce_;
        tot[1] += cf;
        tot[2] += cg;
        tot[3] += ch;
        colors += 1;
    }
    colors == k && tot == [e, f, l * m * binom(n - m, 3), l * binom(n - m, 4)]
}
