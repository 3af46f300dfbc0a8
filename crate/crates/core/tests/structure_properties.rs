use std::collections::{BTreeMap, BTreeSet};

use codesparse::cayley::{generator_code, laplacian_matrix, laplacian_spectrum, sparsify_cayley, verify_spectrum, CayleySpec};
use codesparse::code::weight;
use codesparse::corpus;
use codesparse::csp::{affine_csp_to_code, ternary_classify, CspInstance, Predicate, TernaryClassification};
use codesparse::graphs::{count_cuts_at_most, cut_code, peel_small_cuts, sparsify_graph_via_code, verify_cut_sparsifier, Graph};
use codesparse::hypergraphs::{distinct_cut_sizes, hyperedge_row, hypergraph_code, Hypergraph};
use codesparse::numeric::{int, rat, Rational};
use codesparse::sparsify::SparsifyParams;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn bits(mask: u64, n: usize) -> Vec<u32> {
    (0..n).map(|i| (mask >> i & 1) as u32).collect()
}

fn sides(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u64..4), 1..3 * n).prop_map(move |raw| {
            let pairs: Vec<(usize, usize, u64)> = raw.into_iter().filter(|(u, v, _)| u != v).collect();
            let edges = pairs.iter().map(|&(u, v, w)| codesparse::graphs::Edge { u, v, weight: int(w) }).collect();
            Graph::new(n, edges).unwrap()
        })
    })
}

fn hypergraph_strategy() -> impl Strategy<Value = Hypergraph> {
    (2usize..=7).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n, 2..=n.min(4)), 1..12).prop_map(move |sets| {
            let sets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
            Hypergraph::unweighted(n, &sets).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cut_code_weight_is_cut_value(g in graph_strategy(8)) {
        let (code, w) = cut_code(&g);
        for mask in 0..1u64 << g.n() {
            let c = code.encode(&bits(mask, g.n())).unwrap();
            prop_assert_eq!(weight(&c, Some(&w)).unwrap(), g.cut_value(&sides(mask, g.n())));
        }
    }

    #[test]
    fn peeling_removes_at_most_n_minus_one_per_unit(g in graph_strategy(8), t in 0u64..5) {
        let r = peel_small_cuts(&g, &int(t));
        prop_assert!(r.removed.len() as u64 <= (g.n() as u64 - 1) * t);
        prop_assert_eq!(r.removed.len() + r.residual_edges.len(), g.m());
    }

    #[test]
    fn hypergraph_code_weight_is_cut_value(h in hypergraph_strategy()) {
        let (code, _) = hypergraph_code(&h).unwrap();
        let w = codesparse::CoordinateWeights::unit(h.m());
        for mask in 0..1u64 << h.n() {
            let c = code.encode(&bits(mask, h.n())).unwrap();
            prop_assert_eq!(weight(&c, Some(&w)).unwrap(), h.cut_value(&sides(mask, h.n())));
        }
    }

    #[test]
    fn hyperedge_partial_sums_never_vanish(size in 1usize..=12, extra in 0usize..6) {
        let n = size + extra;
        let q = codesparse::field::smallest_prime_at_least(n.max(2) as u64) as u32;
        let vertices: Vec<usize> = (extra..n).collect();
        let row = hyperedge_row(&vertices, n, q).unwrap();
        for mask in 1..(1u64 << size) - 1 {
            let s: u64 = (0..size).filter(|i| mask >> i & 1 == 1).map(|i| row[vertices[i]] as u64).sum();
            prop_assert_ne!(s % q as u64, 0);
        }
        prop_assert_eq!(row.iter().map(|&x| x as u64).sum::<u64>() % q as u64, 0);
    }

    #[test]
    fn distinct_cuts_are_deduplicated_by_edge_set(h in hypergraph_strategy()) {
        let mut seen: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for mask in 0..1u64 << h.n() {
            let side = sides(mask, h.n());
            let cut: Vec<usize> = (0..h.m()).filter(|&e| {
                let vs = &h.edges()[e].vertices;
                vs.iter().any(|&v| side[v] != side[vs[0]])
            }).collect();
            if !cut.is_empty() {
                seen.insert(cut.clone(), cut.len() as u64);
            }
        }
        let mut expected: Vec<u64> = seen.into_values().collect();
        expected.sort_unstable();
        let mut got = distinct_cut_sizes(&h).unwrap();
        got.sort_unstable();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn eigenvalue_formulas_agree(k in 1usize..=8, m in 1usize..12, seed in any::<u64>()) {
        let m = m.min((1 << k) - 1);
        let spec = corpus::random_cayley(k, m, 9, seed).unwrap();
        let spectrum = laplacian_spectrum(&spec).unwrap();
        let (code, w) = generator_code(&spec);
        for (x, lambda) in spectrum.iter().enumerate() {
            let c = code.encode(&bits(x as u64, k)).unwrap();
            prop_assert_eq!(lambda, &(int(2) * weight(&c, Some(&w)).unwrap()));
        }
    }

    #[test]
    fn characters_are_eigenvectors(k in 1usize..=4, m in 1usize..8, seed in any::<u64>()) {
        let m = m.min((1 << k) - 1);
        let spec = corpus::random_cayley(k, m, 5, seed).unwrap();
        let l = laplacian_matrix(&spec).unwrap();
        let spectrum = laplacian_spectrum(&spec).unwrap();
        for x in 0..1usize << k {
            let chi: Vec<Rational> = (0..1usize << k).map(|v| if (x & v).count_ones() % 2 == 0 { Rational::one() } else { -Rational::one() }).collect();
            for (row, c) in l.iter().zip(&chi) {
                let lhs: Rational = row.iter().zip(&chi).map(|(a, b)| a * b).sum();
                prop_assert_eq!(lhs, &spectrum[x] * c);
            }
        }
    }

    #[test]
    fn affine_reduction_matches_satisfied_weight(k in 1usize..=8, m in 1usize..20, arity in 1usize..=3, seed in any::<u64>()) {
        let instance = corpus::random_xor_csp(k, m, arity.min(k), seed).unwrap();
        let (code, w) = affine_csp_to_code(&instance).unwrap();
        for mask in 0..1u64 << k {
            let mut message = vec![1u32];
            message.extend(bits(mask, k));
            let c = code.encode(&message).unwrap();
            prop_assert_eq!(weight(&c, Some(&w)).unwrap(), instance.satisfied_weight(&sides(mask, k)));
        }
    }
}

#[test]
fn cut_identity_on_twelve_vertices() {
    let g = corpus::gnp(12, &rat(1, 2), 21).unwrap();
    let (code, w) = cut_code(&g);
    for mask in 0..1u64 << 12 {
        let c = code.encode(&bits(mask, 12)).unwrap();
        assert_eq!(weight(&c, Some(&w)).unwrap(), g.cut_value(&sides(mask, 12)));
    }
}

#[test]
fn cut_counts_match_brute_force() {
    for (i, n) in [6usize, 9, 12, 14].into_iter().enumerate() {
        let g = corpus::connected_gnp(n, &rat(2, 5), 70 + i as u64).unwrap();
        let c = g.min_cut().unwrap().0;
        let mut cuts: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mask in 1..1u64 << (n - 1) {
            let side = sides(mask, n);
            cuts.insert((0..g.m()).filter(|&e| side[g.edges()[e].u] != side[g.edges()[e].v]).collect());
        }
        for alpha in 1..=3u64 {
            let brute = cuts.iter().filter(|s| s.len() as u64 <= alpha * c).count() as u64;
            assert_eq!(count_cuts_at_most(&g, alpha * c).unwrap(), brute);
            assert!(brute as u128 <= (n as u128).pow(2 * alpha as u32));
        }
    }
}

#[test]
fn code_route_gives_cut_sparsifiers() {
    let g = corpus::gnp(10, &rat(3, 5), 5).unwrap();
    let passes = (0..10)
        .filter(|&seed| {
            let h = sparsify_graph_via_code(&g, &SparsifyParams::aggressive(rat(1, 2), seed).unwrap()).unwrap();
            verify_cut_sparsifier(&g, &h, &rat(1, 2)).unwrap().pass
        })
        .count();
    assert!(passes >= 9, "{passes}/10");
}

#[test]
fn verified_cayley_sparsifiers_keep_spectrum_and_rank() {
    let spec = CayleySpec::complete(5).unwrap();
    let eps = rat(1, 2);
    let exact = laplacian_spectrum(&spec).unwrap();
    for seed in 0..10 {
        let sparse = sparsify_cayley(&spec, &SparsifyParams::aggressive(eps.clone(), seed).unwrap()).unwrap();
        if !verify_spectrum(&spec, &sparse, &eps).unwrap().pass {
            continue;
        }
        let approx = laplacian_spectrum(&sparse).unwrap();
        for (l, a) in exact.iter().zip(&approx) {
            if !l.is_zero() {
                assert!((a / l - Rational::one()).abs() <= eps);
            }
        }
        assert_eq!(generator_code(&sparse).0.rank(), 5);
    }
}

fn verdict_kind(p: &Predicate) -> bool {
    matches!(ternary_classify(p).unwrap(), TernaryClassification::SparsifiableLinear(_))
}

#[test]
fn verdicts_are_closed_under_symmetries() {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for t in 0..256usize {
        let p = Predicate::new(3, (0..8).map(|i| t >> i & 1 == 1).collect()).unwrap();
        let base = verdict_kind(&p);
        for perm in PERMS {
            for mask in 0..8u64 {
                let q = p.permuted(&perm).negated_inputs(&sides(mask, 3));
                assert_eq!(verdict_kind(&q), base, "table {t:08b}");
            }
        }
        match p.satisfying_count() {
            0 | 6 | 7 | 8 => assert!(base),
            1..=3 => assert!(!base),
            _ => {}
        }
    }
}

#[test]
fn complete_xor_instance_has_expected_weights() {
    let inst = CspInstance::xor2_complete(6);
    for mask in 0..64u64 {
        let ones = mask.count_ones() as u64;
        assert_eq!(inst.satisfied_weight(&sides(mask, 6)), int(ones * (6 - ones)));
    }
}
