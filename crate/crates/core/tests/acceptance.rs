//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS line with the checked quantities (visible with `--nocapture`).
//!
//! Every tolerance here is pinned in code: the combinatorial identities are
//! exact rational equalities with zero tolerance; the only floating-point
//! values in the library are the closed-form bounds, which this suite does
//! not need.

use std::collections::BTreeSet;

use num::One;

use prgames::conditioning::{
    build_hitting_distribution, certify_named, verify_certificate, verify_hitting, Certificate,
    DoublingStep, HitMode, NamedCertificate, Step,
};
use prgames::cycles::{check_lemma, LemmaKind};
use prgames::games::{
    all_strings, build_game_gs, dhj_coeff, equidistributed_set, find_good_vector, game_value,
    gs_canonical_acceptance, has_combinatorial_line, hj_coeff, lift_strategy, random_game,
    repeat_game, repeated_question_id, sperner_ratio, Game, StringSet, DEFAULT_BUDGET,
};
use prgames::hypergraph::{
    enumerate_homomorphisms, is_isomorphic, NamedHypergraph, PartiteHypergraph, SideSubset,
};
use prgames::spgraph::{certify_sp, random_sp_tree};
use prgames::{ratio, Ratio};

/// Appendix reproduction: all three checks return SUCCESS at V = 12.
#[test]
fn criterion_appendix_reproduction_v12() {
    let workers = 4;
    for kind in [
        LemmaKind::NonEmptyAd,
        LemmaKind::NaturalCollapse,
        LemmaKind::NonEmptyB,
    ] {
        let run = check_lemma(kind, 12, workers).expect("check runs");
        assert!(
            run.succeeded(),
            "{} must print SUCCESS, got {:?}",
            run.kind.header(12),
            run.outcome
        );
        println!(
            "[PASS] {}: SUCCESS ({} partitions, {} collapse searches)",
            run.kind.header(12),
            run.stats.partitions,
            run.stats.collapse_searches
        );
    }
}

/// Stretch: the same three checks at V = 14.
#[test]
fn criterion_appendix_stretch_v14() {
    for kind in [
        LemmaKind::NonEmptyAd,
        LemmaKind::NonEmptyB,
        LemmaKind::NaturalCollapse,
    ] {
        let run = check_lemma(kind, 14, 4).expect("check runs");
        assert!(run.succeeded(), "{}", run.kind.header(14));
        println!("[PASS] {}: SUCCESS", run.kind.header(14));
    }
}

/// Homomorphism census: |Hom(Q̄_3, Q̄_3)| = 4 and |Hom(Q̄_4, Q̄_4)| = 5.
#[test]
fn criterion_homomorphism_census() {
    for (r, expect) in [(3usize, 4usize), (4, 5)] {
        let q = NamedHypergraph::Qr(r).build().unwrap();
        let homs = enumerate_homomorphisms(&q, &q, None).unwrap();
        assert_eq!(homs.len(), expect, "|Hom(Q̄_{r}, Q̄_{r})|");
        println!("[PASS] |Hom(Q̄_{r}, Q̄_{r})| = {expect}");
    }
}

/// Density line-free coefficients at desk scale.
#[test]
fn criterion_dhj_desk_scale() {
    for n in 1..=4usize {
        let (v, witness) = dhj_coeff(2, n, 1 << 30).unwrap();
        assert_eq!(v, sperner_ratio(n), "two-symbol coefficient at n = {n}");
        assert!(has_combinatorial_line(&witness).is_none());
        println!("[PASS] dhj_coeff(2, {n}) = {} matches the antichain count", v);
    }
    let (v, _) = dhj_coeff(3, 1, 1 << 20).unwrap();
    assert_eq!(v, ratio(2, 3));
    println!("[PASS] dhj_coeff(3, 1) = 2/3");
    let equi = equidistributed_set(3, 3).unwrap();
    assert!(has_combinatorial_line(&equi).is_none());
    assert_eq!(equi.measure(), ratio(2, 9));
    println!("[PASS] equidistributed(3,3) is line-free with measure 2/9");
}

fn all_subsets_of_3_2() -> impl Iterator<Item = StringSet> {
    let universe = all_strings(3, 2);
    (0u32..(1 << 9)).map(move |mask| {
        let strings: Vec<Vec<u8>> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| s.clone())
            .collect();
        StringSet::new(3, 2, strings).unwrap()
    })
}

/// Value-1 ⟺ combinatorial line, over all 512 subsets of [3]^2; otherwise
/// the value is at most 2/3, exactly.
#[test]
fn criterion_gs_equivalence_sweep() {
    let two_thirds = ratio(2, 3);
    let mut trivial = 0usize;
    for s in all_subsets_of_3_2() {
        let g = build_game_gs(3, 2, &s).unwrap();
        let (v, _) = game_value(&g, DEFAULT_BUDGET).unwrap();
        let has_line = has_combinatorial_line(&s).is_some();
        assert_eq!(v.is_one(), has_line, "set {:?}", s.strings);
        if has_line {
            trivial += 1;
        } else {
            assert!(v <= two_thirds, "set {:?} has value {v}", s.strings);
        }
    }
    println!("[PASS] 512 subsets of [3]^2 swept; {trivial} trivial, rest ≤ 2/3");
}

/// Canonical strategy on the repeated line-set game accepts with
/// probability exactly μ(S), for every S ⊆ [3]^2 at n = 2.
#[test]
fn criterion_repetition_lower_bound() {
    for s in all_subsets_of_3_2() {
        let acc = gs_canonical_acceptance(3, 2, &s).unwrap();
        assert_eq!(acc, s.measure(), "set {:?}", s.strings);
    }
    println!("[PASS] canonical acceptance equals μ(S) for all 512 sets at n = 2");
}

/// Certificate budgets for the named families.
#[test]
fn criterion_certificate_budgets() {
    for (r, k) in [(2usize, 1u32), (2, 2), (3, 1)] {
        let sizes = vec![1usize << k; r];
        let cert = certify_named(&NamedCertificate::Complete(sizes.clone())).unwrap();
        assert!(
            cert.doubling_count() as u32 <= r as u32 * k,
            "complete (r={r}, k={k}) used {} doublings",
            cert.doubling_count()
        );
        let replay = verify_certificate(&cert).unwrap();
        let target = NamedHypergraph::Complete(sizes).build().unwrap();
        assert!(is_isomorphic(&replay.graph, &target));
        println!(
            "[PASS] complete hypergraph (r={r}, sides 2^{k}): {} ≤ {} doublings, isomorphic",
            cert.doubling_count(),
            r as u32 * k
        );
    }
    for k in 1..=5usize {
        let cert = certify_named(&NamedCertificate::SetGraph(k)).unwrap();
        assert_eq!(cert.doubling_count(), 2 * (k - 1), "set graph k = {k}");
        let replay = verify_certificate(&cert).unwrap();
        let target = NamedHypergraph::SetGraph(k).build().unwrap();
        assert!(is_isomorphic(&replay.graph, &target), "set graph k = {k}");
        println!("[PASS] set graph k={k}: exactly {} doublings, isomorphic", 2 * (k - 1));
    }
}

/// 100 seeded series-parallel graphs with at most 10 vertices: every
/// certificate replays to an isomorphic graph and every doubling step
/// doubles a contiguous segment of the spine.
#[test]
fn criterion_sp_synthesis_corpus() {
    let mut checked = 0;
    for seed in 0..100u64 {
        let t = random_sp_tree(seed, 10);
        let g = t.flatten();
        let sc = certify_sp(&t).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let replay = verify_certificate(&sc.certificate).unwrap();
        assert!(is_isomorphic(&replay.graph, &g), "seed {seed}");
        for step in &sc.certificate.steps {
            let Step::Double(d) = step else { continue };
            let hits: Vec<bool> = sc
                .spine
                .iter()
                .map(|&(side, id)| d.doubled.contains(side, id))
                .collect();
            let first = hits.iter().position(|&h| h);
            let last = hits.iter().rposition(|&h| h);
            if let (Some(a), Some(b)) = (first, last) {
                assert!(
                    hits[a..=b].iter().all(|&h| h),
                    "seed {seed}: non-contiguous doubling {hits:?}"
                );
            }
        }
        checked += 1;
    }
    assert!(checked >= 100);
    println!("[PASS] {checked} series-parallel graphs certified, isomorphic, contiguous");
}

/// Hitting distributions for certificates with k ≤ 2 doublings against
/// targets with at most 4 edges: the minimum support probability is at
/// least 1/M^(2^k) and the hitting inequality holds for every subset at
/// n = 1. Exact rationals throughout.
#[test]
fn criterion_hitting_distribution() {
    let full = |arity: usize| {
        let mut s = SideSubset::empty(arity);
        s.insert(0, 0);
        s.insert(1, 0);
        s
    };
    // certificates with k = 0, 1, 2 doublings (the last also has a collapse)
    let certs: Vec<(String, Certificate)> = vec![
        (
            "edge (k=0)".into(),
            Certificate { arity: 2, initial: vec![0, 0], steps: vec![] },
        ),
        (
            "doubled edge (k=1)".into(),
            Certificate {
                arity: 2,
                initial: vec![0, 0],
                steps: vec![Step::Double(DoublingStep { doubled: full(2) })],
            },
        ),
        (
            "doubled twice (k=2)".into(),
            Certificate {
                arity: 2,
                initial: vec![0, 0],
                steps: vec![
                    Step::Double(DoublingStep { doubled: full(2) }),
                    Step::Double(DoublingStep {
                        doubled: SideSubset::from_sets(vec![
                            [0, 1].into_iter().collect(),
                            [0, 1].into_iter().collect(),
                        ]),
                    }),
                ],
            },
        ),
        ("set graph k=2 (2 doublings)".into(), certify_named(&NamedCertificate::SetGraph(2)).unwrap()),
    ];
    let targets: Vec<(String, PartiteHypergraph)> = vec![
        ("single edge (M=1)".into(), PartiteHypergraph::single_edge(2, vec![0, 0]).unwrap()),
        ("two-question set (M=2)".into(), NamedHypergraph::Qr(2).build().unwrap()),
        ("complete 2x2 (M=4)".into(), NamedHypergraph::Complete(vec![2, 2]).build().unwrap()),
        ("path (M=2)".into(), {
            PartiteHypergraph::new(
                2,
                vec![[0, 1].into_iter().collect(), [0].into_iter().collect()],
                [vec![0, 0], vec![1, 0]].into_iter().collect(),
            )
            .unwrap()
        }),
        ("triangle-free 3-edge set (M=3)".into(), {
            PartiteHypergraph::new(
                2,
                vec![[0, 1].into_iter().collect(), [0, 1].into_iter().collect()],
                [vec![0, 0], vec![0, 1], vec![1, 1]].into_iter().collect(),
            )
            .unwrap()
        }),
    ];
    let mut combos = 0;
    for (cname, cert) in &certs {
        for (tname, target) in &targets {
            let dist = build_hitting_distribution(cert, target).unwrap();
            assert!(dist.total().is_one());
            assert!(
                dist.min_probability() >= dist.min_probability_bound(),
                "{cname} over {tname}: min probability below 1/M^C"
            );
            let report = verify_hitting(&dist, 1, HitMode::Exhaustive).unwrap();
            assert!(
                report.all_hold(),
                "{cname} over {tname}: hitting failures {:?}",
                report.failures
            );
            combos += 1;
        }
    }
    println!("[PASS] hitting distribution bounds hold exactly on {combos} certificate/target pairs");
}

/// Supermultiplicativity on a seeded corpus, plus perfect lifts through
/// certified good vectors.
#[test]
fn criterion_property_suite() {
    // val(G^n) ≥ val(G)^n for n ∈ {1, 2} on 50 seeded games
    let shapes = [((2, 2), (2, 2)), ((2, 3), (2, 2)), ((3, 2), (2, 2)), ((2, 2), (3, 2)), ((2, 2), (2, 3))];
    let mut count = 0;
    for seed in 0..50u64 {
        let (q, a) = shapes[(seed % 5) as usize];
        let g = random_game(seed, q, a).unwrap();
        let (v1, _) = game_value(&g, DEFAULT_BUDGET).unwrap();
        let g1 = repeat_game(&g, 1, DEFAULT_BUDGET).unwrap();
        let (v1r, _) = game_value(&g1, DEFAULT_BUDGET).unwrap();
        assert!(v1r >= v1, "seed {seed}, n = 1");
        let g2 = repeat_game(&g, 2, DEFAULT_BUDGET).unwrap();
        let (v2, _) = game_value(&g2, DEFAULT_BUDGET).unwrap();
        assert!(v2 >= v1.clone() * v1.clone(), "seed {seed}, n = 2");
        count += 1;
    }
    assert!(count >= 50);
    println!("[PASS] val(G^n) ≥ val(G)^n on {count} seeded games, n ∈ {{1, 2}}");

    // lifted strategies from certified good vectors win everywhere
    let mut lifted_checked = 0;
    for seed in 0..40u64 {
        let g = random_game(seed, (2, 2), (2, 2)).unwrap();
        let g2 = repeat_game(&g, 2, DEFAULT_BUDGET).unwrap();
        let (_, opt2) = game_value(&g2, DEFAULT_BUDGET).unwrap();
        let winning = winning_set(&g, 2, &opt2);
        if let Some(gv) = find_good_vector(&g.questions, 2, &winning, DEFAULT_BUDGET).unwrap() {
            let lifted = lift_strategy(&g, &opt2, 2, &gv, &winning).unwrap();
            let value = prgames::games::evaluate_strategy(&g, &lifted).unwrap();
            assert!(value.is_one(), "seed {seed}: lifted value {value}");
            lifted_checked += 1;
        }
    }
    assert!(lifted_checked > 0, "the corpus must exercise at least one lift");
    println!("[PASS] {lifted_checked} certified good vectors lifted to value exactly 1");
}

/// Chromatic coefficients at desk scale.
#[test]
fn criterion_hj_desk_scale() {
    let (c, _) = hj_coeff(2, 1, DEFAULT_BUDGET).unwrap();
    assert_eq!(c, 2);
    let (c, _) = hj_coeff(2, 2, DEFAULT_BUDGET).unwrap();
    assert_eq!(c, 3);
    println!("[PASS] chromatic coefficients: (2,1) -> 2, (2,2) -> 3");
}

/// Edge-index vectors on which a repeated strategy wins every coordinate.
fn winning_set(g: &Game, n: usize, s: &prgames::games::Strategy) -> BTreeSet<Vec<usize>> {
    let edges = g.edge_list().to_vec();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut answers_by_coord: Vec<Vec<u32>> = vec![Vec::new(); n];
        for j in 0..g.arity() {
            let qs: Vec<u32> = idx.iter().map(|&i| edges[i][j]).collect();
            let rep_q = repeated_question_id(g, j, &qs);
            let rep_a = s.answer(j, rep_q).expect("total strategy");
            for (i, coord) in answers_by_coord.iter_mut().enumerate() {
                let div = g.answer_counts[j].pow((n - 1 - i) as u32);
                coord.push((rep_a / div) % g.answer_counts[j]);
            }
        }
        if idx
            .iter()
            .enumerate()
            .all(|(i, &e)| g.accepts(e, &answers_by_coord[i]))
        {
            out.insert(idx.clone());
        }
        let mut j = n;
        let done = loop {
            if j == 0 {
                break true;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < edges.len() {
                break false;
            }
            idx[j] = 0;
        };
        if done {
            break;
        }
    }
    out
}

/// The exact-rational identities above rely on `Ratio` equality; pin that
/// the type normalizes as expected.
#[test]
fn ratio_normalization_sanity() {
    assert_eq!(ratio(2, 4), ratio(1, 2));
    assert_eq!(format!("{}", ratio(6, 16)), "3/8");
    let one: Ratio = ratio(3, 3);
    assert!(one.is_one());
}
