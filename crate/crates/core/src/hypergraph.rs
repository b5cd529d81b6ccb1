//! Uniform hypergraphs (`r`-graphs) and exact statistics on them: maximum
//! `l`-degrees, independence number and matching number.
//!
//! Graphs are either explicit edge lists or implicit membership oracles.
//! Implicit graphs are never materialized unless a statistic needs every
//! edge, and then only under [`Caps::enumeration`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_integer::binomial;
use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("edge {0:?} is not a strictly increasing tuple of the right size within range")]
    BadEdge(Vec<u32>),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<u32>),
    #[error("l = {l} is outside 0..={r}")]
    Level { l: u32, r: u32 },
    #[error("{what} needs {work} steps, above the cap of {cap}")]
    TooLarge { what: &'static str, work: u128, cap: u128 },
    #[error("uniformity must be at least 1")]
    Uniformity,
}

/// Membership test for an implicit `r`-graph. Vertices are passed sorted.
pub trait EdgeOracle: Send + Sync {
    fn is_edge(&self, vertices: &[u32]) -> bool;
}

#[derive(Clone)]
pub enum EdgeSet {
    Explicit { edges: Vec<Vec<u32>>, lookup: HashSet<Vec<u32>> },
    Implicit(Arc<dyn EdgeOracle>),
}

#[derive(Clone)]
pub struct RGraph {
    n: u32,
    r: u32,
    edges: EdgeSet,
}

impl fmt::Debug for RGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.edges {
            EdgeSet::Explicit { edges, .. } => format!("{} explicit edges", edges.len()),
            EdgeSet::Implicit(_) => "implicit".to_string(),
        };
        write!(f, "RGraph(n={}, r={}, {kind})", self.n, self.r)
    }
}

/// Work limits for exhaustive computations.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Maximum number of vertex subsets to enumerate.
    pub enumeration: u128,
    /// Maximum vertex count for independence search.
    pub independence_vertices: u32,
    /// Maximum vertex count for matching search.
    pub matching_vertices: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { enumeration: 100_000_000, independence_vertices: 40, matching_vertices: 64 }
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: u32, k: u32, mut f: impl FnMut(&[u32])) {
    if k > n {
        return;
    }
    let mut idx: Vec<u32> = (0..k).collect();
    let k = k as usize;
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - (k - i + 1) as u32 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Calls `f` on every `k`-subset of `items` (positions in order).
fn for_each_combination<T: Copy>(items: &[T], k: usize, buf: &mut Vec<T>, f: &mut impl FnMut(&[T]) -> bool) -> bool {
    if buf.len() == k {
        return f(buf);
    }
    let need = k - buf.len();
    for i in 0..items.len() {
        if items.len() - i < need {
            break;
        }
        buf.push(items[i]);
        let go_on = for_each_combination(&items[i + 1..], k, buf, f);
        buf.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn choose(n: u32, k: u32) -> u128 {
    if k > n {
        0
    } else {
        binomial(n as u128, k as u128)
    }
}

impl RGraph {
    pub fn explicit(n: u32, r: u32, edges: Vec<Vec<u32>>) -> Result<Self, HypergraphError> {
        if r == 0 {
            return Err(HypergraphError::Uniformity);
        }
        let mut lookup = HashSet::with_capacity(edges.len());
        for e in &edges {
            let ok = e.len() == r as usize && e.windows(2).all(|w| w[0] < w[1]) && e.iter().all(|&v| v < n);
            if !ok {
                return Err(HypergraphError::BadEdge(e.clone()));
            }
            if !lookup.insert(e.clone()) {
                return Err(HypergraphError::DuplicateEdge(e.clone()));
            }
        }
        let mut edges = edges;
        edges.sort();
        Ok(RGraph { n, r, edges: EdgeSet::Explicit { edges, lookup } })
    }

    pub fn implicit(n: u32, r: u32, oracle: Arc<dyn EdgeOracle>) -> Result<Self, HypergraphError> {
        if r == 0 {
            return Err(HypergraphError::Uniformity);
        }
        Ok(RGraph { n, r, edges: EdgeSet::Implicit(oracle) })
    }

    pub fn empty(n: u32, r: u32) -> Result<Self, HypergraphError> {
        Self::explicit(n, r, Vec::new())
    }

    pub fn complete(n: u32, r: u32) -> Result<Self, HypergraphError> {
        let mut edges = Vec::new();
        for_each_subset(n, r, |s| edges.push(s.to_vec()));
        Self::explicit(n, r, edges)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.edges, EdgeSet::Explicit { .. })
    }

    /// `vertices` must be sorted.
    pub fn is_edge(&self, vertices: &[u32]) -> bool {
        match &self.edges {
            EdgeSet::Explicit { lookup, .. } => lookup.contains(vertices),
            EdgeSet::Implicit(o) => vertices.len() == self.r as usize && o.is_edge(vertices),
        }
    }

    /// All edges, enumerating an implicit graph if necessary.
    pub fn edge_list(&self, caps: &Caps) -> Result<Vec<Vec<u32>>, HypergraphError> {
        match &self.edges {
            EdgeSet::Explicit { edges, .. } => Ok(edges.clone()),
            EdgeSet::Implicit(o) => {
                let work = choose(self.n, self.r);
                if work > caps.enumeration {
                    return Err(HypergraphError::TooLarge { what: "edge enumeration", work, cap: caps.enumeration });
                }
                let mut out = Vec::new();
                for_each_subset(self.n, self.r, |s| {
                    if o.is_edge(s) {
                        out.push(s.to_vec());
                    }
                });
                Ok(out)
            }
        }
    }

    pub fn edge_count(&self, caps: &Caps) -> Result<u64, HypergraphError> {
        Ok(self.edge_list(caps)?.len() as u64)
    }

    /// Serializes as the exchange format: `n r` then one edge per line.
    pub fn to_text(&self, caps: &Caps) -> Result<String, HypergraphError> {
        let mut out = format!("{} {}\n", self.n, self.r);
        for e in self.edge_list(caps)? {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        Ok(out)
    }
}

/// Maximum number of edges containing a common `l`-subset. `l = r` gives 1
/// if there is any edge.
pub fn delta_l(h: &RGraph, l: u32) -> Result<u64, HypergraphError> {
    delta_l_capped(h, l, &Caps::default())
}

pub fn delta_l_capped(h: &RGraph, l: u32, caps: &Caps) -> Result<u64, HypergraphError> {
    if l > h.r {
        return Err(HypergraphError::Level { l, r: h.r });
    }
    let edges = h.edge_list(caps)?;
    if edges.is_empty() {
        return Ok(0);
    }
    if l == 0 {
        return Ok(edges.len() as u64);
    }
    let per_edge = choose(h.r, l);
    let work = per_edge * edges.len() as u128;
    if work > caps.enumeration {
        return Err(HypergraphError::TooLarge { what: "l-degree table", work, cap: caps.enumeration });
    }
    let mut degree: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut buf = Vec::with_capacity(l as usize);
    for e in &edges {
        for_each_combination(e, l as usize, &mut buf, &mut |s| {
            *degree.entry(s.to_vec()).or_insert(0) += 1;
            true
        });
    }
    Ok(degree.values().copied().max().unwrap_or(0))
}

/// A maximum independent set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSet {
    pub size: u32,
    pub vertices: Vec<u32>,
}

struct IndependenceSearch<'a> {
    h: &'a RGraph,
    chosen: Vec<u32>,
    best: Vec<u32>,
    adjacency: Option<Vec<u64>>,
}

impl IndependenceSearch<'_> {
    /// Whether adding `u` to `chosen` (whose last member was just added)
    /// completes an edge through that last member.
    fn closes_edge(&self, u: u32) -> bool {
        let r = self.h.r as usize;
        let Some((&v, rest)) = self.chosen.split_last() else {
            return false;
        };
        if r == 1 {
            return false;
        }
        if let Some(adj) = &self.adjacency {
            return adj[v as usize] >> u & 1 == 1;
        }
        let mut buf = Vec::with_capacity(r);
        let mut hit = false;
        for_each_combination(rest, r - 2, &mut Vec::with_capacity(r), &mut |t| {
            buf.clear();
            buf.extend_from_slice(t);
            buf.push(v);
            buf.push(u);
            buf.sort_unstable();
            hit = self.h.is_edge(&buf);
            !hit
        });
        hit
    }

    /// Greedy clique cover of the candidates (ordinary graphs only).
    fn clique_cover_bound(&self, cands: &[u32]) -> usize {
        let Some(adj) = &self.adjacency else {
            return cands.len();
        };
        let mut cliques: Vec<u64> = Vec::new();
        'outer: for &v in cands {
            for c in cliques.iter_mut() {
                if *c & !adj[v as usize] == 0 {
                    *c |= 1 << v;
                    continue 'outer;
                }
            }
            cliques.push(1 << v);
        }
        cliques.len()
    }

    fn dfs(&mut self, cands: &[u32]) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if self.chosen.len() + cands.len() <= self.best.len() {
            return;
        }
        if self.chosen.len() + self.clique_cover_bound(cands) <= self.best.len() {
            return;
        }
        for (i, &v) in cands.iter().enumerate() {
            if self.chosen.len() + cands.len() - i <= self.best.len() {
                return;
            }
            self.chosen.push(v);
            let next: Vec<u32> = cands[i + 1..].iter().copied().filter(|&u| !self.closes_edge(u)).collect();
            self.dfs(&next);
            self.chosen.pop();
        }
    }
}

/// Exact independence number by branch and bound, vertices tried in order
/// of decreasing degree.
pub fn independence_number(h: &RGraph) -> Result<IndependentSet, HypergraphError> {
    independence_number_capped(h, &Caps::default())
}

pub fn independence_number_capped(h: &RGraph, caps: &Caps) -> Result<IndependentSet, HypergraphError> {
    if h.n > caps.independence_vertices {
        return Err(HypergraphError::TooLarge {
            what: "independence search",
            work: h.n as u128,
            cap: caps.independence_vertices as u128,
        });
    }
    let mut order: Vec<u32> = (0..h.n).collect();
    let mut adjacency = None;
    if let Ok(edges) = h.edge_list(caps) {
        let mut deg = vec![0u64; h.n as usize];
        for e in &edges {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
        order.sort_by_key(|&v| (std::cmp::Reverse(deg[v as usize]), v));
        if h.r == 2 && h.n <= 64 {
            let mut adj = vec![0u64; h.n as usize];
            for e in &edges {
                adj[e[0] as usize] |= 1 << e[1];
                adj[e[1] as usize] |= 1 << e[0];
            }
            adjacency = Some(adj);
        }
    }
    if h.r == 1 {
        order.retain(|&v| !h.is_edge(&[v]));
    }
    let mut search = IndependenceSearch { h, chosen: Vec::new(), best: Vec::new(), adjacency };
    search.dfs(&order);
    let mut vertices = search.best;
    vertices.sort_unstable();
    Ok(IndependentSet { size: vertices.len() as u32, vertices })
}

/// A maximum set of pairwise disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub size: u32,
    pub edges: Vec<Vec<u32>>,
}

struct MatchingSearch<'a> {
    r: u32,
    by_min: Vec<Vec<(u64, usize)>>,
    edges: &'a [Vec<u32>],
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl MatchingSearch<'_> {
    fn dfs(&mut self, free: u64, from: u32) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let n = self.by_min.len() as u32;
        let mut v = from;
        while v < n && free >> v & 1 == 0 {
            v += 1;
        }
        if v >= n {
            return;
        }
        let remaining = (free >> v).count_ones();
        if self.chosen.len() as u32 + remaining / self.r <= self.best.len() as u32 {
            return;
        }
        // v matched by an edge whose least vertex is v
        for i in 0..self.by_min[v as usize].len() {
            let (mask, e) = self.by_min[v as usize][i];
            if mask & !free == 0 {
                self.chosen.push(e);
                self.dfs(free & !mask, v + 1);
                self.chosen.pop();
            }
        }
        // v left unmatched
        self.dfs(free & !(1 << v), v + 1);
    }
}

/// Exact matching number.
pub fn matching_number(h: &RGraph) -> Result<Matching, HypergraphError> {
    matching_number_capped(h, &Caps::default())
}

pub fn matching_number_capped(h: &RGraph, caps: &Caps) -> Result<Matching, HypergraphError> {
    if h.n > caps.matching_vertices.min(64) {
        return Err(HypergraphError::TooLarge {
            what: "matching search",
            work: h.n as u128,
            cap: caps.matching_vertices.min(64) as u128,
        });
    }
    let edges = h.edge_list(caps)?;
    let mut by_min = vec![Vec::new(); h.n as usize];
    for (i, e) in edges.iter().enumerate() {
        let mask = e.iter().fold(0u64, |m, &v| m | 1 << v);
        by_min[e[0] as usize].push((mask, i));
    }
    let mut search = MatchingSearch { r: h.r, by_min, edges: &edges, chosen: Vec::new(), best: Vec::new() };
    let all = if h.n == 64 { u64::MAX } else { (1u64 << h.n) - 1 };
    search.dfs(all, 0);
    let chosen: Vec<Vec<u32>> = search.best.iter().map(|&i| search.edges[i].clone()).collect();
    Ok(Matching { size: chosen.len() as u32, edges: chosen })
}

/// The normalized degree chain `Delta_l / C(n - l, r - l)` for
/// `l = 0..r-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCheck {
    pub holds: bool,
    pub values: Vec<Ratio<u128>>,
}

pub fn check_monotonicity_chain(h: &RGraph) -> Result<ChainCheck, HypergraphError> {
    if h.n < h.r {
        return Ok(ChainCheck { holds: true, values: Vec::new() });
    }
    let mut values = Vec::with_capacity(h.r as usize);
    for l in 0..h.r {
        let d = delta_l(h, l)? as u128;
        values.push(Ratio::new(d, choose(h.n - l, h.r - l)));
    }
    let holds = values.windows(2).all(|w| w[0] <= w[1]);
    Ok(ChainCheck { holds, values })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    pub holds: bool,
    pub edges: u64,
    pub matching: u32,
    pub max_degree: u64,
    /// `matching * (1 + r (max_degree - 1))`
    pub bound: u64,
}

/// `e(H) <= nu(H) * (1 + r (Delta_1(H) - 1))` for a graph with an edge.
pub fn check_lemma_bound(h: &RGraph) -> Result<LemmaCheck, HypergraphError> {
    let edges = h.edge_count(&Caps::default())?;
    let matching = matching_number(h)?.size;
    let max_degree = delta_l(h, 1)?;
    let bound = matching as u64 * (1 + h.r as u64 * max_degree.saturating_sub(1));
    Ok(LemmaCheck { holds: edges <= bound, edges, matching, max_degree, bound })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EkrCheck {
    pub holds: bool,
    pub intersecting: bool,
    pub edges: u64,
    /// `C(n - 1, r - 1)`
    pub bound: u64,
}

/// Intersecting families on `n >= 2r` vertices have at most `C(n-1, r-1)`
/// edges; vacuous for non-intersecting `H`.
pub fn check_ekr_bound(h: &RGraph) -> Result<EkrCheck, HypergraphError> {
    let edges = h.edge_count(&Caps::default())?;
    let intersecting = matching_number(h)?.size <= 1;
    let bound = choose(h.n.saturating_sub(1), h.r - 1) as u64;
    let applies = intersecting && h.n >= 2 * h.r;
    Ok(EkrCheck { holds: !applies || edges <= bound, intersecting, edges, bound })
}
