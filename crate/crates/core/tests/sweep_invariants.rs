mod common;

use std::sync::OnceLock;

use common::{ce, fl, per_color, scaled, sweep};
use proptest::prelude::*;
use quadembed::bounds::Thresholds;
use quadembed::exact::{floor, rat, to_i64};
use quadembed::{
    amalgamate, case_classify, check_conditions, embed, global_bounds, per_color_bounds, plan,
    verify_certificate, verify_plan, AmalgamPlan, CaseTag, DetachConfig, EmbeddingCertificate,
    EmbeddingParams, TheoremCase, Tier,
};
use rayon::prelude::*;

/// Sweep tuples passing N1..N8.
fn passing() -> &'static [EmbeddingParams] {
    static CELL: OnceLock<Vec<EmbeddingParams>> = OnceLock::new();
    CELL.get_or_init(|| {
        sweep(60, 20, 3)
            .into_par_iter()
            .filter(|p| check_conditions(p).all_hold())
            .collect()
    })
}

fn in_scope() -> &'static [EmbeddingParams] {
    static CELL: OnceLock<Vec<EmbeddingParams>> = OnceLock::new();
    CELL.get_or_init(|| {
        passing()
            .iter()
            .copied()
            .filter(|p| check_conditions(p).theorem_case != TheoremCase::OutOfScope)
            .collect()
    })
}

fn sign(x: i128) -> i128 {
    x.signum()
}

#[test]
fn bound_invariants_hold_on_passing_tuples() {
    passing().par_iter().for_each(|p| {
        let b = global_bounds(p).unwrap();
        assert!(
            b.invariant_violations().is_empty(),
            "{p:?}: {:?}",
            b.invariant_violations()
        );
        let t = scaled(p);
        assert_eq!(24 * to_i64(&b.iota1).unwrap() as i128, t.iota[0], "{p:?}");
        assert_eq!(b.rho1, rat(t.rho[0] as i64, 24), "{p:?}");
        assert_eq!(b.rhop1, rat(t.rhop[0] as i64, 24), "{p:?}");
        assert_eq!(b.iota2.is_some(), b.k > b.q);

        // Sign equivalences, as inequalities in n scaled by s.
        let (m, n, r, s) = (p.m as i128, p.n as i128, p.r as i128, p.s as i128);
        assert_eq!(t.iota[0] >= 0, s * n <= (2 * s - r) * m, "{p:?}");
        assert_eq!(t.iota[1] >= 0, n <= 2 * m, "{p:?}");
        assert_eq!(t.rhop[0] >= 0, s * n <= (4 * s - 3 * r) * m, "{p:?}");
        assert_eq!(t.rhop[1] >= 0, n <= 4 * m, "{p:?}");

        if r == s {
            assert_eq!(t.rho[0], 0, "{p:?}");
            assert!(t.rhop[0] < 0, "{p:?}");
            for e in 0..=4 {
                let pc = per_color_bounds(p, Tier::Old, e).unwrap();
                assert!(to_i64(&pc.iota_j).unwrap() < 0, "{p:?} e={e}");
                assert!(pc.rho_j <= rat(0, 1), "{p:?} e={e}");
                assert_eq!(pc.rho_j == rat(0, 1), e == 0, "{p:?} e={e}");
            }
        }
    });
}

#[test]
fn sign_patterns_are_exclusive_and_exhaustive() {
    in_scope().par_iter().for_each(|p| {
        let t = Thresholds::new(p);
        let hits: Vec<CaseTag> = CaseTag::ALL
            .iter()
            .copied()
            .filter(|c| c.matches(&t))
            .collect();
        assert_eq!(hits.len(), 1, "{p:?}: {hits:?}");
        assert_eq!(case_classify(p).unwrap(), hits[0], "{p:?}");

        // The same split from scratch.
        let s = scaled(p);
        let local = if s.iota[0] >= 0 {
            2
        } else if s.iota[1] < 0 && s.rhop[0] >= 0 {
            5
        } else if s.iota[1] >= 0 && s.rhop[0] >= 0 {
            3
        } else if s.rhop[1] < 0 {
            1
        } else if s.iota[1] > 0 {
            4
        } else {
            6
        };
        assert_eq!(hits[0].number(), local, "{p:?}");
    });
}

#[test]
fn condition_groupings_agree() {
    sweep(60, 20, 3).par_iter().for_each(|p| {
        let report = check_conditions(p);
        assert!(report.is_cross_consistent(), "{p:?}");
        assert_eq!(report, check_conditions(p));
    });
}

#[test]
fn every_in_scope_tuple_plans() {
    let failures: Vec<String> = in_scope()
        .par_iter()
        .filter_map(|p| match plan(p) {
            Ok(pl) if verify_plan(p, &pl) => None,
            Ok(_) => Some(format!("{p:?}: unverified plan")),
            Err(e) => Some(format!("{p:?}: {e}")),
        })
        .collect();
    assert!(
        failures.is_empty(),
        "{} failures: {:?}",
        failures.len(),
        &failures[..failures.len().min(5)]
    );
}

fn passing_index() -> impl Strategy<Value = EmbeddingParams> {
    (0..passing().len()).prop_map(|i| passing()[i])
}

fn in_scope_index(limit: u64) -> impl Strategy<Value = EmbeddingParams> {
    let small: Vec<EmbeddingParams> = in_scope()
        .iter()
        .copied()
        .filter(|p| p.n <= limit)
        .collect();
    (0..small.len()).prop_map(move |i| small[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn per_color_equivalences(p in passing_index(), old in any::<bool>(), frac in 0u64..=1000) {
        let (tier, i) = if old { (Tier::Old, 0) } else { (Tier::New, 1) };
        let t = scaled(&p);
        let top = fl(t.rho[i]).max(0);
        let e = (top * frac as i128 / 1000) as i64;
        let pc = per_color_bounds(&p, tier, e).unwrap();
        let (iota24, rho24) = per_color(&p, i, e as i128);
        prop_assert_eq!(24 * to_i64(&pc.iota_j).unwrap() as i128, iota24);
        prop_assert_eq!(pc.rho_j.clone(), rat(rho24 as i64, 24));
        let e24 = 24 * e as i128;
        prop_assert_eq!(rho24 >= 0, e24 <= t.rho[i]);
        prop_assert_eq!(iota24 >= 0, e24 <= t.rhop[i]);
        prop_assert_eq!(rho24 >= iota24, e24 >= t.iota[i]);
        prop_assert_eq!(sign(iota24), sign(2 * (t.rhop[i] - e24)));
    }

    #[test]
    fn plan_text_and_json_round_trip(p in in_scope_index(40)) {
        let pl = plan(&p).unwrap();
        prop_assert!(verify_plan(&p, &pl));
        let text = pl.to_text();
        let back = AmalgamPlan::from_text(&text).unwrap();
        prop_assert_eq!(&back, &pl);
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(AmalgamPlan::from_json(&pl.to_json()).unwrap(), pl.clone());
        let (q, k) = p.color_counts().unwrap();
        let e_total: i64 = pl.colors().map(|c| c.e).sum();
        prop_assert_eq!(pl.colors().count() as u64, k);
        prop_assert_eq!(pl.e_multiset(Tier::Old).iter().map(|v| v.1).sum::<u64>(), q);
        prop_assert!(e_total >= 0);
    }

    #[test]
    fn global_floors_match_scaled_formulas(p in passing_index()) {
        let b = global_bounds(&p).unwrap();
        let t = scaled(&p);
        prop_assert_eq!(to_i64(&floor(&b.rho1)).unwrap() as i128, fl(t.rho[0]));
        prop_assert!(ce(t.iota[0]) == fl(t.iota[0]));
    }
}

#[test]
fn certificates_round_trip_and_amalgamate_to_their_plan() {
    let fixture = include_str!("../../../fixtures/intro_9.txt");
    let cert = EmbeddingCertificate::parse(fixture).unwrap();
    let text = cert.render();
    assert_eq!(EmbeddingCertificate::parse(&text).unwrap(), cert);
    assert_eq!(EmbeddingCertificate::parse(&text).unwrap().render(), text);

    for (m, n, r, s) in [
        (6, 8, 2, 5),
        (5, 8, 4, 5),
        (8, 9, 5, 8),
        (6, 9, 2, 4),
        (7, 8, 4, 5),
    ] {
        let Ok(p) = EmbeddingParams::new(m, n, r, s, 1) else {
            continue;
        };
        if !check_conditions(&p).all_hold() {
            continue;
        }
        let found = embed(&p, None, DetachConfig::default()).unwrap();
        let cert = &found.certificate;
        assert!(verify_certificate(cert));
        let outer = cert.outer();
        let total: usize = outer.classes.iter().map(Vec::len).sum();
        assert_eq!(total as u128, common::binom(n as i128, 4) as u128);
        assert!(outer.classes.iter().all(|c| c.len() as u64 == s * n / 4));
        let amalgam = amalgamate(cert).unwrap();
        assert!(verify_plan(&p, &amalgam));
        let got: Vec<_> = amalgam
            .colors()
            .map(|c| (c.tier, c.e, c.f, c.g, c.h))
            .collect();
        let want: Vec<_> = found
            .plan
            .colors()
            .map(|c| (c.tier, c.e, c.f, c.g, c.h))
            .collect();
        assert_eq!(got, want, "({m},{n},{r},{s})");
        let back = EmbeddingCertificate::parse(&cert.render()).unwrap();
        assert_eq!(&back, cert);
    }
}
