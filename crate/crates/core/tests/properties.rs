use proptest::prelude::*;

use zerosum_core::algebra::{FieldContext, GroupElement, GroupSpec};
use zerosum_core::hypergraph::{for_each_subset, RGraph};
use zerosum_core::io::{parse_hypergraph, parse_sequence, write_hypergraph, write_sequence};
use zerosum_core::turan::{replay, BaseFact, BoundFact, Ledger, SourceClass, Step};
use zerosum_core::zerosum::{find_zero_sum_subsequence, is_sidon_set, GSequence};

fn group_and_elements(count: usize) -> impl Strategy<Value = (GroupSpec, Vec<GroupElement>)> {
    prop::collection::vec(2u32..7, 1..4).prop_flat_map(move |moduli| {
        let spec = GroupSpec::new(moduli.clone()).unwrap();
        let coords = moduli.iter().map(|&m| 0..m).collect::<Vec<_>>();
        prop::collection::vec(coords, count).prop_map(move |vs| {
            let els = vs.into_iter().map(|c| spec.element(c).unwrap()).collect();
            (spec.clone(), els)
        })
    })
}

fn small_sequence() -> impl Strategy<Value = GSequence> {
    prop_oneof![Just("Z2^2"), Just("Z3"), Just("Z4"), Just("Z2^3"), Just("Z2xZ4"), Just("Z3^2")]
        .prop_flat_map(|g| {
            let spec: GroupSpec = g.parse().unwrap();
            let order = spec.order() as u64;
            prop::collection::vec((0..order, 1u32..4), 0..8).prop_map(move |picks| {
                let mut seq = GSequence::new(spec.clone());
                for (i, c) in picks {
                    seq.push(spec.element_at(i).unwrap(), c).unwrap();
                }
                seq
            })
        })
}

proptest! {
    #[test]
    fn group_axioms((spec, els) in group_and_elements(3)) {
        let (a, b, c) = (&els[0], &els[1], &els[2]);
        prop_assert_eq!(spec.add(a, b), spec.add(b, a));
        prop_assert_eq!(spec.add(&spec.add(a, b), c), spec.add(a, &spec.add(b, c)));
        prop_assert_eq!(spec.add(a, &spec.identity()), a.clone());
        prop_assert_eq!(spec.add(a, &spec.neg(a)), spec.identity());
        prop_assert_eq!(spec.scale(a, spec.exponent()), spec.identity());
        prop_assert_eq!(spec.element_at(spec.index_of(a)).unwrap(), a.clone());
        let round: GroupSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(round, spec.clone());
    }

    #[test]
    fn field_laws(k in 1u32..=16, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = FieldContext::new(k).unwrap();
        let mask = (1u64 << k) - 1;
        let (a, b, c) = (f.element(a & mask).unwrap(), f.element(b & mask).unwrap(), f.element(c & mask).unwrap());
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.square(a), f.mul(a, a));
        // Frobenius: a^(2^k) = a
        prop_assert_eq!(f.pow(a, 1 << k), a);
        if let Some(inv) = f.inv(a) {
            prop_assert_eq!(f.mul(a, inv), f.element(1).unwrap());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn zero_sum_witnesses_validate(seq in small_sequence(), r in 1u64..8) {
        if let Some(w) = find_zero_sum_subsequence(&seq, r).unwrap() {
            prop_assert!(w.validates_against(&seq));
            // a longer sequence keeps the same witness
            let mut more = seq.clone();
            more.push(seq.spec().identity(), 1).unwrap();
            prop_assert!(find_zero_sum_subsequence(&more, r).unwrap().is_some());
        }
    }

    #[test]
    fn sequence_text_round_trip(seq in small_sequence()) {
        let text = write_sequence(&seq);
        prop_assert_eq!(parse_sequence(&text, None).unwrap(), seq);
    }

    #[test]
    fn sidon_matches_pair_sums((spec, els) in group_and_elements(5)) {
        let mut set = els.clone();
        set.sort();
        set.dedup();
        let mut sums = Vec::new();
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                sums.push(spec.add(&set[i], &set[j]));
            }
        }
        let n = sums.len();
        sums.sort();
        sums.dedup();
        prop_assert_eq!(is_sidon_set(&spec, &set), sums.len() == n);
    }

    #[test]
    fn hypergraph_text_round_trip(n in 3u32..9, r in 1u32..4, seed in any::<u64>()) {
        let mut edges = Vec::new();
        let mut bit = 0;
        for_each_subset(n, r.min(n), |s| {
            if seed >> (bit % 64) & 1 == 1 {
                edges.push(s.to_vec());
            }
            bit += 1;
        });
        let h = RGraph::explicit(n, r.min(n), edges).unwrap();
        let text = write_hypergraph(&h).unwrap();
        prop_assert_eq!(write_hypergraph(&parse_hypergraph(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn ledger_chains_replay(d in 1usize..5, r_mult in 1u32..4, extra in 1u64..6, shift in 0u32..6, raise in 0u32..4) {
        let spec = GroupSpec::power(2, d).unwrap();
        let r = 2 * r_mult;
        let s = r as u64 + extra;
        let base = BaseFact::new(spec.clone(), r, s, SourceClass::ClosedForm, "");
        let mut chain = vec![Step::Base { group: base.group.clone(), r, s, source: base.source }];
        if shift > 0 {
            chain.push(Step::Shift { by: shift });
        }
        if raise > 0 {
            chain.push(Step::RaiseK { to: s as u32 + shift + raise });
        }
        let (k, rr, bound) = replay(&chain).unwrap();
        prop_assert_eq!(rr, r + shift);
        prop_assert_eq!(k, s as u32 + shift + raise);
        prop_assert_eq!(*bound.denom(), 1u64 << d);

        let mut ledger = Ledger::new();
        ledger.insert_chain(chain).unwrap();
        let json = serde_json::to_string(&ledger.facts().collect::<Vec<_>>()).unwrap();
        let back: Vec<BoundFact> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        for f in &back {
            prop_assert_eq!(replay(&f.provenance).unwrap(), (f.k, f.r, f.bound));
        }
    }
}
