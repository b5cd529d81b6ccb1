#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use zerosum_core::algebra::{is_irreducible, FieldContext, GroupElement, GroupSpec};
use zerosum_core::hypergraph::{
    check_ekr_bound, check_lemma_bound, check_monotonicity_chain, for_each_subset, Caps, RGraph,
};
use zerosum_core::zerosum::{find_zero_sum_subsequence, GSequence};

pub fn group(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

/// Shift-and-add multiplication, reduced by cancelling the top bit with a
/// shifted modulus until the degree drops below `k`.
pub fn slow_mul(a: u64, b: u64, modulus: u64, k: u32) -> u64 {
    let mut prod = 0u128;
    for i in 0..64 {
        if b >> i & 1 == 1 {
            prod ^= (a as u128) << i;
        }
    }
    for deg in (k..128).rev() {
        if prod >> deg & 1 == 1 {
            prod ^= (modulus as u128) << (deg - k);
        }
    }
    prod as u64
}

/// Every field axiom over every element triple, for every irreducible
/// modulus of degree `k`.
pub fn field_axioms_hold(k: u32) -> Result<usize, String> {
    let moduli: Vec<u64> = ((1u64 << k)..(1u64 << (k + 1))).filter(|&p| is_irreducible(p)).collect();
    if moduli.is_empty() {
        return Err(format!("no irreducible modulus of degree {k}"));
    }
    let mut checked = 0;
    for m in moduli {
        let f = FieldContext::with_modulus(k, m).map_err(|e| e.to_string())?;
        let els: Vec<_> = f.elements().collect();
        let one = f.element(1).unwrap();
        let fail = |what: &str| Err(format!("k={k} modulus={m:#x}: {what}"));
        if els.len() as u64 != 1 << k {
            return fail("wrong element count");
        }
        for &a in &els {
            if f.mul(a, one) != a || f.pow(a, 0) != one {
                return fail("identity");
            }
            match f.inv(a) {
                None if a.is_zero() => {}
                Some(inv) if !a.is_zero() && f.mul(a, inv) == one => {}
                _ => return fail("inverse"),
            }
            let mut acc = one;
            for e in 0..10 {
                if f.pow(a, e) != acc {
                    return fail("pow");
                }
                acc = f.mul(acc, a);
            }
            for &b in &els {
                let ab = f.mul(a, b);
                if ab.bits() != slow_mul(a.bits(), b.bits(), m, k) || ab != f.mul(b, a) {
                    return fail("product");
                }
                for &c in &els {
                    if f.mul(ab, c) != f.mul(a, f.mul(b, c)) || f.mul(a, f.add(b, c)) != f.add(ab, f.mul(a, c)) {
                        return fail("associativity or distributivity");
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// All count vectors `c <= mults` with `sum c = r`, searched directly.
pub fn brute_zero_sum(spec: &GroupSpec, items: &[(GroupElement, u32)], r: u32) -> bool {
    fn go(spec: &GroupSpec, items: &[(GroupElement, u32)], i: usize, left: u32, acc: &GroupElement) -> bool {
        if left == 0 {
            return *acc == spec.identity();
        }
        if i == items.len() {
            return false;
        }
        let (x, m) = &items[i];
        let mut acc = acc.clone();
        for c in 0..=(*m).min(left) {
            if go(spec, items, i + 1, left - c, &acc) {
                return true;
            }
            acc = spec.add(&acc, x);
        }
        false
    }
    go(spec, items, 0, r, &spec.identity())
}

/// Calls `f` on every multiplicity vector over `n` elements with entries
/// `<= cap` and total `<= max_len`.
pub fn for_each_multiset(n: usize, cap: u32, max_len: u32, f: &mut impl FnMut(&[u32])) {
    fn go(m: &mut Vec<u32>, n: usize, cap: u32, left: u32, f: &mut impl FnMut(&[u32])) {
        if m.len() == n {
            f(m);
            return;
        }
        for c in 0..=cap.min(left) {
            m.push(c);
            go(m, n, cap, left - c, f);
            m.pop();
        }
    }
    go(&mut Vec::new(), n, cap, max_len, f);
}

/// Compares the DP detector with [`brute_zero_sum`] on every sequence in
/// the family, for every target length. Returns the number of comparisons.
pub fn detector_matches_brute_force(spec: &GroupSpec, cap: u32, max_len: u32) -> Result<usize, String> {
    let elems: Vec<GroupElement> = spec.elements().unwrap().collect();
    let mut checked = 0;
    let mut failure = None;
    for_each_multiset(elems.len(), cap, max_len, &mut |m| {
        if failure.is_some() {
            return;
        }
        let items: Vec<(GroupElement, u32)> =
            elems.iter().cloned().zip(m.iter().copied()).filter(|(_, c)| *c > 0).collect();
        let seq = GSequence::from_counts(spec.clone(), items.clone()).unwrap();
        for r in 1..=seq.len() as u32 {
            let got = find_zero_sum_subsequence(&seq, r as u64).unwrap();
            let valid = got.as_ref().is_none_or(|w| w.validates_against(&seq));
            if got.is_some() != brute_zero_sum(spec, &items, r) || !valid {
                failure = Some(format!("{spec} multiplicities {m:?} r={r}"));
                return;
            }
            checked += 1;
        }
    });
    failure.map_or(Ok(checked), Err)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: u32, r: u32, p: f64) -> RGraph {
    let mut edges = Vec::new();
    for_each_subset(n, r, |s| {
        if rng.random_bool(p) {
            edges.push(s.to_vec());
        }
    });
    RGraph::explicit(n, r, edges).unwrap()
}

pub fn edges_of(h: &RGraph) -> Vec<Vec<u32>> {
    h.edge_list(&Caps::default()).unwrap()
}

/// Random intersecting `r`-graph: edges drawn at random and kept when they
/// meet every edge kept so far.
pub fn random_intersecting(rng: &mut ChaCha8Rng, n: u32, r: u32) -> RGraph {
    let mut all = Vec::new();
    for_each_subset(n, r, |s| all.push(s.to_vec()));
    let mut kept: Vec<Vec<u32>> = Vec::new();
    for _ in 0..all.len() {
        let e = all[rng.random_range(0..all.len())].clone();
        if !kept.contains(&e) && kept.iter().all(|f| f.iter().any(|v| e.contains(v))) {
            kept.push(e);
        }
    }
    RGraph::explicit(n, r, kept).unwrap()
}

/// Degree chain, matching lemma and intersecting-family bound on `count`
/// random 3-graphs each (`n <= 10`).
pub fn hypergraph_suite(rng: &mut ChaCha8Rng, count: usize) -> Result<(), String> {
    for i in 0..count {
        let n = rng.random_range(3..=10);
        let p = rng.random_range(0.02..0.7);
        let h = random_graph(rng, n, 3, p);
        if !check_monotonicity_chain(&h).map_err(|e| e.to_string())?.holds {
            return Err(format!("degree chain fails on graph {i}"));
        }
        if !edges_of(&h).is_empty() && !check_lemma_bound(&h).map_err(|e| e.to_string())?.holds {
            return Err(format!("matching lemma fails on graph {i}"));
        }
        if !check_ekr_bound(&h).map_err(|e| e.to_string())?.holds {
            return Err(format!("intersecting bound fails on graph {i}"));
        }
    }
    for i in 0..count {
        let n = rng.random_range(6..=10);
        let h = random_intersecting(rng, n, 3);
        let c = check_ekr_bound(&h).map_err(|e| e.to_string())?;
        if !c.intersecting || !c.holds {
            return Err(format!("intersecting family {i}: {c:?}"));
        }
    }
    Ok(())
}
