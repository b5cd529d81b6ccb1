use std::sync::Arc;

use serde::Serialize;

use super::TuranError;
use crate::algebra::{GroupElement, GroupSpec, IndexArith, DEFAULT_ELEMENT_CAP};
use crate::hypergraph::{self, for_each_subset, Caps, EdgeOracle, RGraph};

/// Vertices `0..n` split into `|G|` baskets round-robin; `r` vertices form
/// an edge when their labels sum to the identity.
#[derive(Debug, Clone)]
pub struct BasketWitness {
    spec: GroupSpec,
    r: u32,
    n: u32,
    arith: IndexArith,
    /// Element index of each vertex.
    labels: Vec<usize>,
    basket_sizes: Vec<u32>,
}

/// Largest `n` for which codegrees are cross-checked by enumeration.
pub const CROSS_CHECK_MAX_N: u32 = 16;

/// Most `(r-1)`-subsets visited when computing codegree extremes.
pub const CODEGREE_SUBSET_CAP: u128 = 50_000_000;

pub fn build_witness(spec: &GroupSpec, r: u32, n: u32) -> Result<BasketWitness, TuranError> {
    if r < 2 || !(r as u64).is_multiple_of(spec.exponent()) {
        return Err(TuranError::Uniformity { r, exponent: spec.exponent() });
    }
    if n < r {
        return Err(TuranError::TooFewVertices { n, r });
    }
    let arith = IndexArith::new(spec, DEFAULT_ELEMENT_CAP)?;
    let order = arith.order();
    let labels: Vec<usize> = (0..n as usize).map(|v| v % order).collect();
    let mut basket_sizes = vec![0u32; order];
    for &l in &labels {
        basket_sizes[l] += 1;
    }
    Ok(BasketWitness { spec: spec.clone(), r, n, arith, labels, basket_sizes })
}

struct BasketOracle(BasketWitness);

impl EdgeOracle for BasketOracle {
    fn is_edge(&self, vertices: &[u32]) -> bool {
        self.0.label_sum(vertices) == 0
    }
}

impl BasketWitness {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn label_index(&self, v: u32) -> usize {
        self.labels[v as usize]
    }

    pub fn label(&self, v: u32) -> GroupElement {
        self.spec.element_at(self.labels[v as usize] as u64).expect("label in range")
    }

    /// Basket sizes indexed by element index.
    pub fn basket_sizes(&self) -> &[u32] {
        &self.basket_sizes
    }

    pub fn basket(&self, element: usize) -> Vec<u32> {
        (0..self.n).filter(|&v| self.labels[v as usize] == element).collect()
    }

    fn label_sum(&self, vertices: &[u32]) -> usize {
        vertices.iter().fold(0, |acc, &v| self.arith.add(acc, self.labels[v as usize]))
    }

    pub fn is_edge(&self, vertices: &[u32]) -> bool {
        vertices.len() == self.r as usize && self.label_sum(vertices) == 0
    }

    pub fn graph(&self) -> RGraph {
        RGraph::implicit(self.n, self.r, Arc::new(BasketOracle(self.clone()))).expect("r >= 2")
    }
}

/// Number of edges through the `(r-1)`-set `s`:
/// `|basket(t)| - |s ∩ basket(t)|` with `t = -(sum of labels of s)`.
pub fn witness_codegree(w: &BasketWitness, s: &[u32]) -> Result<u64, TuranError> {
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if s.len() + 1 != w.r as usize || sorted.len() != s.len() || sorted.iter().any(|&v| v >= w.n) {
        return Err(TuranError::BadSubset(s.to_vec()));
    }
    Ok(codegree_unchecked(w, s))
}

fn codegree_unchecked(w: &BasketWitness, s: &[u32]) -> u64 {
    let t = w.arith.neg(w.label_sum(s));
    let inside = s.iter().filter(|&&v| w.labels[v as usize] == t).count() as u64;
    w.basket_sizes[t] as u64 - inside
}

fn codegree_by_enumeration(w: &BasketWitness, s: &[u32]) -> u64 {
    let mut buf = Vec::with_capacity(s.len() + 1);
    (0..w.n)
        .filter(|v| !s.contains(v))
        .filter(|&v| {
            buf.clear();
            buf.extend_from_slice(s);
            buf.push(v);
            w.is_edge(&buf)
        })
        .count() as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCertificate {
    pub group: GroupSpec,
    pub r: u32,
    pub n: u32,
    pub s: u64,
    pub basket_sizes: Vec<u32>,
    pub min_codegree: u64,
    pub min_codegree_subset: Vec<u32>,
    pub max_codegree: u64,
    /// `None` when `n` is above [`CROSS_CHECK_MAX_N`].
    pub closed_form_matches_enumeration: Option<bool>,
    /// `None` when `n` exceeds the exact independence search cap.
    pub alpha: Option<u32>,
    pub alpha_witness: Option<Vec<u32>>,
    pub alpha_omitted: bool,
    /// `alpha < s`, or `None` if alpha was omitted.
    pub verdict: Option<bool>,
}

impl WitnessCertificate {
    pub fn is_complete(&self) -> bool {
        !self.alpha_omitted
    }
}

/// Exact codegree extremes, an independence number with witness, and the
/// verdict `alpha < s`.
pub fn certify_witness(w: &BasketWitness, s: u64) -> Result<WitnessCertificate, TuranError> {
    certify_witness_capped(w, s, &Caps::default())
}

pub fn certify_witness_capped(w: &BasketWitness, s: u64, caps: &Caps) -> Result<WitnessCertificate, TuranError> {
    let k = w.r - 1;
    let work = num_integer::binomial(w.n as u128, k as u128);
    if work > CODEGREE_SUBSET_CAP {
        return Err(TuranError::TooLarge { what: "codegree enumeration", work, cap: CODEGREE_SUBSET_CAP });
    }
    let cross_check = w.n <= CROSS_CHECK_MAX_N;
    let mut min = (u64::MAX, Vec::new());
    let mut max = 0u64;
    let mut agree = true;
    for_each_subset(w.n, k, |sub| {
        let c = codegree_unchecked(w, sub);
        if c < min.0 {
            min = (c, sub.to_vec());
        }
        max = max.max(c);
        if cross_check && agree && c != codegree_by_enumeration(w, sub) {
            agree = false;
        }
    });

    let (alpha, alpha_witness, omitted) = match hypergraph::independence_number_capped(&w.graph(), caps) {
        Ok(set) => {
            let independent = subsets_free_of_edges(w, &set.vertices);
            if !independent {
                return Err(TuranError::Internal("independent set contains an edge".into()));
            }
            (Some(set.size), Some(set.vertices), false)
        }
        Err(hypergraph::HypergraphError::TooLarge { .. }) => (None, None, true),
        Err(e) => return Err(e.into()),
    };
    Ok(WitnessCertificate {
        group: w.spec.clone(),
        r: w.r,
        n: w.n,
        s,
        basket_sizes: w.basket_sizes.clone(),
        min_codegree: min.0,
        min_codegree_subset: min.1,
        max_codegree: max,
        closed_form_matches_enumeration: cross_check.then_some(agree),
        verdict: alpha.map(|a| (a as u64) < s),
        alpha,
        alpha_witness,
        alpha_omitted: omitted,
    })
}

fn subsets_free_of_edges(w: &BasketWitness, vertices: &[u32]) -> bool {
    if vertices.len() < w.r as usize {
        return true;
    }
    let mut found = false;
    for_each_subset(vertices.len() as u32, w.r, |pos| {
        if !found {
            let e: Vec<u32> = pos.iter().map(|&p| vertices[p as usize]).collect();
            found = w.is_edge(&e);
        }
    });
    !found
}
