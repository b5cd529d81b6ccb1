//! Cross-checks against brute-force oracles written independently of the
//! library code paths.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

use common::*;
use zerosum_core::algebra::{FieldContext, GroupElement, GroupSpec};
use zerosum_core::hypergraph::{delta_l, independence_number, matching_number, RGraph};
use zerosum_core::solver::{solve_beta_r, solve_s_r, verify_certificate, Budget, Symmetry, Witness};
use zerosum_core::turan::{build_witness, certify_witness, witness_codegree};
use zerosum_core::zerosum::{find_zero_sum_subsequence, GSequence};

#[test]
fn field_axioms_exhaustive_small_degrees() {
    for k in 1..=4 {
        field_axioms_hold(k).unwrap();
    }
}

#[test]
fn reducible_moduli_rejected() {
    for k in 1..=8u32 {
        for p in (1u64 << k)..(1u64 << (k + 1)) {
            let has_factor = (2u64..(1 << (k / 2 + 1))).any(|q| {
                let dq = 63 - q.leading_zeros();
                dq >= 1 && dq <= k / 2 && poly_mod(p, q) == 0
            });
            assert_eq!(FieldContext::with_modulus(k, p).is_ok(), !has_factor, "k={k} p={p:#x}");
        }
    }
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = 63 - m.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= dm {
        a ^= m << (63 - a.leading_zeros() - dm);
    }
    a
}

// ---------- zero-sum detection ----------

#[test]
fn detector_equals_brute_force_z2_squared() {
    assert!(detector_matches_brute_force(&group("Z2^2"), 10, 10).unwrap() > 1000);
}

#[test]
fn detector_equals_brute_force_z3() {
    assert!(detector_matches_brute_force(&group("Z3"), 10, 10).unwrap() > 100);
}

#[test]
fn detector_equals_brute_force_capped_families() {
    detector_matches_brute_force(&group("Z4"), 4, 10).unwrap();
    detector_matches_brute_force(&group("Z2xZ4"), 2, 8).unwrap();
    detector_matches_brute_force(&group("Z2^3"), 2, 10).unwrap();
}

// ---------- solver ----------

fn brute_beta(spec: &GroupSpec, r: u32) -> usize {
    let elems: Vec<GroupElement> = spec.elements().unwrap().collect();
    let n = elems.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let items: Vec<(GroupElement, u32)> =
            (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| (elems[i].clone(), 1)).collect();
        if !brute_zero_sum(spec, &items, r) {
            best = size;
        }
    }
    best
}

fn brute_s(spec: &GroupSpec, r: u32) -> u64 {
    let elems: Vec<GroupElement> = spec.elements().unwrap().collect();
    let mut best = 0u64;
    // a zero-sum-free sequence never repeats an element r times
    for_each_multiset(elems.len(), r - 1, u32::MAX, &mut |m| {
        let len: u64 = m.iter().map(|&c| c as u64).sum();
        if len <= best {
            return;
        }
        let items: Vec<(GroupElement, u32)> =
            elems.iter().cloned().zip(m.iter().copied()).filter(|(_, c)| *c > 0).collect();
        if !brute_zero_sum(spec, &items, r) {
            best = len;
        }
    });
    best + 1
}

#[test]
fn beta_matches_brute_force() {
    for (g, r) in [("Z2", 2), ("Z2^2", 2), ("Z2^2", 4), ("Z2^3", 4), ("Z2^4", 4), ("Z3", 3), ("Z3^2", 3), ("Z4", 4), ("Z2xZ4", 4), ("Z6", 6)] {
        let spec = group(g);
        let res = solve_beta_r(&spec, r, &Budget::default()).unwrap();
        assert!(res.exhaustive);
        assert_eq!(res.value as usize, brute_beta(&spec, r as u32), "beta_{r}({g})");
        assert!(verify_certificate(&res).unwrap().valid);
    }
}

#[test]
fn s_r_matches_brute_force() {
    for (g, r) in [("Z2", 2), ("Z2", 4), ("Z2^2", 2), ("Z2^2", 4), ("Z2^3", 2), ("Z3", 3), ("Z3", 6), ("Z4", 4), ("Z3^2", 3), ("Z2^3", 4)] {
        let spec = group(g);
        let res = solve_s_r(&spec, r, &Budget::default()).unwrap();
        assert!(res.exhaustive);
        assert_eq!(res.value, brute_s(&spec, r as u32), "s_{r}({g})");
        assert!(verify_certificate(&res).unwrap().valid);
    }
}

#[test]
fn symmetry_and_threads_do_not_change_results() {
    for (g, r) in [("Z2^3", 4), ("Z3^2", 3), ("Z2^4", 4)] {
        let spec = group(g);
        let base = solve_s_r(&spec, r, &Budget::default().with_symmetry(Symmetry::None)).unwrap();
        for sym in [Symmetry::Translation, Symmetry::Full] {
            for threads in [1, 4] {
                let b = Budget::default().with_symmetry(sym).with_threads(threads);
                let got = solve_s_r(&spec, r, &b).unwrap();
                assert_eq!(got.value, base.value);
                let (Witness::Sequence(a), Witness::Sequence(b)) = (&got.witness, &base.witness) else {
                    panic!("sequence witnesses expected");
                };
                assert_eq!(a, b, "{g} {sym:?} threads={threads}");
            }
        }
    }
}

// ---------- hypergraphs ----------

fn brute_delta(h: &RGraph, l: u32) -> u64 {
    let edges = edges_of(h);
    let mut best = 0;
    zerosum_core::hypergraph::for_each_subset(h.n(), l, |a| {
        let d = edges.iter().filter(|e| a.iter().all(|v| e.contains(v))).count() as u64;
        best = best.max(d);
    });
    best
}

fn brute_alpha(h: &RGraph) -> u32 {
    let edges: Vec<u32> = edges_of(h).iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
    (0u32..1 << h.n())
        .filter(|&s| edges.iter().all(|&e| e & s != e))
        .map(|s| s.count_ones())
        .max()
        .unwrap()
}

fn brute_nu(edges: &[u32], used: u32) -> u32 {
    match edges.split_first() {
        None => 0,
        Some((&e, rest)) => {
            let skip = brute_nu(rest, used);
            if e & used == 0 {
                skip.max(1 + brute_nu(rest, used | e))
            } else {
                skip
            }
        }
    }
}

#[test]
fn hypergraph_statistics_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let r = rng.random_range(2..=4);
        let n = rng.random_range(r..=12);
        let p = rng.random_range(0.05..0.6);
        let h = random_graph(&mut rng, n, r, p);
        for l in 0..=r {
            let want = if l == r { u64::from(!edges_of(&h).is_empty()) } else { brute_delta(&h, l) };
            assert_eq!(delta_l(&h, l).unwrap(), want);
        }
        let a = independence_number(&h).unwrap();
        assert_eq!(a.size, brute_alpha(&h));
        assert_eq!(a.vertices.len() as u32, a.size);
        let masks: Vec<u32> = edges_of(&h).iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
        let nu = matching_number(&h).unwrap();
        assert_eq!(nu.size, brute_nu(&masks, 0));
    }
}

#[test]
fn chain_lemma_and_ekr_hold_on_random_corpora() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    hypergraph_suite(&mut rng, 500).unwrap();
}

// ---------- basket witnesses ----------

#[test]
fn witness_codegrees_match_enumeration_and_delta() {
    // `full`: some (r-1)-set avoids the basket its edges close into, so the
    // maximum codegree is a whole basket
    for (g, r, full) in
        [("Z2^2", 4, true), ("Z3", 3, true), ("Z2", 4, false), ("Z4", 4, true), ("Z2^3", 4, true), ("Z3", 6, false)]
    {
        let spec = group(g);
        let order = spec.order() as u32;
        for n in [r, order + 1, 2 * order, 2 * order + 3].into_iter().filter(|&n| n >= r && n <= 16) {
            let w = build_witness(&spec, r, n).unwrap();
            let c = certify_witness(&w, 1000).unwrap();
            assert_eq!(c.closed_form_matches_enumeration, Some(true));
            assert_eq!(c.max_codegree, delta_l(&w.graph(), r - 1).unwrap(), "{g} r={r} n={n}");
            let floor = n / order;
            assert!(c.min_codegree + (r as u64 - 1) >= floor as u64);
            if full && n >= 2 * order {
                assert_eq!(c.max_codegree, n.div_ceil(order) as u64, "{g} r={r} n={n}");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..50 {
                let mut s: Vec<u32> = Vec::new();
                while s.len() < r as usize - 1 {
                    let v = rng.random_range(0..n);
                    if !s.contains(&v) {
                        s.push(v);
                    }
                }
                let closed = witness_codegree(&w, &s).unwrap();
                let direct = (0..n)
                    .filter(|v| !s.contains(v))
                    .filter(|&v| {
                        let mut e = s.clone();
                        e.push(v);
                        e.sort_unstable();
                        w.graph().is_edge(&e)
                    })
                    .count() as u64;
                assert_eq!(closed, direct);
            }
        }
    }
}

#[test]
fn witness_verdicts_for_solved_pairs() {
    for (g, r) in [("Z2", 2), ("Z3", 3), ("Z4", 4), ("Z2", 4), ("Z2^2", 4), ("Z2^3", 4), ("Z3^2", 3)] {
        let spec = group(g);
        let s = solve_s_r(&spec, r as u64, &Budget::default()).unwrap();
        assert!(s.exhaustive);
        let order = spec.order() as u32;
        for n in [2 * order, 3 * order] {
            if n < r {
                continue;
            }
            let w = build_witness(&spec, r, n).unwrap();
            let c = certify_witness(&w, s.value).unwrap();
            assert_eq!(c.verdict, Some(true), "{g} r={r} n={n}");
            // the alpha witness labels form a zero-sum-free sequence
            let labels: Vec<GroupElement> = c.alpha_witness.unwrap().iter().map(|&v| w.label(v)).collect();
            let mut counts: BTreeMap<GroupElement, u32> = BTreeMap::new();
            for x in labels {
                *counts.entry(x).or_default() += 1;
            }
            let seq = GSequence::from_counts(spec.clone(), counts).unwrap();
            assert!(find_zero_sum_subsequence(&seq, r as u64).unwrap().is_none());
        }
    }
}

// Several minutes even with all cores.
#[test]
#[ignore]
fn cap_in_dimension_four_is_twenty() {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let res = zerosum_core::solver::solve_cap(4, &Budget::default().with_threads(threads)).unwrap();
    assert!(res.exhaustive);
    assert_eq!(res.value, 20);
    assert!(verify_certificate(&res).unwrap().valid);
}
