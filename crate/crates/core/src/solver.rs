//! Certificate-producing exhaustive search for `s_r(G)`, `beta_r(G)`,
//! `g(G)` and cap sizes.
//!
//! Both searches extend a candidate object one element at a time in
//! enumeration order, so the search tree is the trie of sorted tuples and
//! the first extremal object met in preorder is the lexicographically least
//! one. Branches are pruned when even taking every remaining candidate
//! cannot beat the incumbent.
//!
//! Symmetry reduction is sound for any `r` that is a multiple of `exp(G)`:
//! translating every element by `t` changes an `r`-fold sum by `r*t = 0`, so
//! the lexicographically least extremal object always contains the zero
//! element first. With [`Symmetry::Full`] the first nonzero element must
//! also have non-decreasing coordinates (the least point of its orbit under
//! coordinate permutations). Neither reduction can remove the
//! lexicographically least witness, so results do not depend on the setting.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, GroupElement, GroupSpec, IndexArith, DEFAULT_ELEMENT_CAP};
use crate::zerosum::{find_zero_sum_subsequence, is_zero_free_set, GSequence, ZeroSumError};

/// Largest `d` accepted by [`solve_cap`] unless raised in the budget.
pub const DEFAULT_CAP_DIMENSION_LIMIT: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    ZeroSum(#[from] ZeroSumError),
    #[error("r = {r} is not a positive multiple of exp({group}) = {exponent}")]
    NotMultipleOfExponent { group: String, r: u64, exponent: u64 },
    #[error("cap search in dimension {d} exceeds the configured limit {limit}")]
    CapDimension { d: usize, limit: usize },
    #[error("could not build worker pool: {0}")]
    Pool(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    None,
    #[default]
    Translation,
    /// Translation plus coordinate permutations (only for `Z_m^d`; other
    /// groups fall back to translation).
    Full,
}

#[derive(Debug, Clone)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    pub threads: usize,
    pub symmetry: Symmetry,
    pub element_cap: u64,
    pub cap_dimension_limit: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: None,
            max_time: None,
            threads: 1,
            symmetry: Symmetry::default(),
            element_cap: DEFAULT_ELEMENT_CAP,
            cap_dimension_limit: DEFAULT_CAP_DIMENSION_LIMIT,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn with_max_nodes(mut self, nodes: u64) -> Self {
        self.max_nodes = Some(nodes);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstantKind {
    #[serde(rename = "s_r")]
    SR,
    #[serde(rename = "beta_r")]
    BetaR,
    #[serde(rename = "g")]
    Harborth,
    #[serde(rename = "cap")]
    Cap,
}

impl ConstantKind {
    pub fn name(self) -> &'static str {
        match self {
            ConstantKind::SR => "s_r",
            ConstantKind::BetaR => "beta_r",
            ConstantKind::Harborth => "g",
            ConstantKind::Cap => "cap",
        }
    }
}

/// The extremal object behind a result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A sequence with no zero-sum subsequence of length `r`.
    Sequence(GSequence),
    /// A zero-free set of rank `r`.
    Set(Vec<GroupElement>),
}

impl Witness {
    pub fn size(&self) -> u64 {
        match self {
            Witness::Sequence(s) => s.len(),
            Witness::Set(v) => v.len() as u64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub constant: ConstantKind,
    pub spec: GroupSpec,
    pub r: u64,
    /// The constant when `exhaustive`; otherwise only a lower bound.
    pub value: u64,
    pub witness: Witness,
    pub exhaustive: bool,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    /// Per-element multiplicity cap used by the sequence search.
    pub multiplicity_cap: Option<u32>,
    pub symmetry: Symmetry,
}

impl SearchResult {
    /// Size the witness must have for this result to be consistent.
    pub fn expected_witness_size(&self) -> u64 {
        match self.constant {
            ConstantKind::SR | ConstantKind::Harborth => self.value - 1,
            ConstantKind::BetaR | ConstantKind::Cap => self.value,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.exhaustive {
            "exact"
        } else {
            "lower bound"
        }
    }
}

struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    best: AtomicUsize,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Shared {
    fn new(budget: &Budget, start: Instant) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            abort: AtomicBool::new(false),
            best: AtomicUsize::new(0),
            max_nodes: budget.max_nodes,
            deadline: budget.max_time.map(|t| start + t),
        }
    }

    /// Counts one node; false once the budget is spent.
    fn tick(&self) -> bool {
        if self.abort.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.max_nodes.is_some_and(|m| n > m);
        let over_time = n.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.abort.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn offer(&self, size: usize) {
        self.best.fetch_max(size, Ordering::Relaxed);
    }

    fn global(&self) -> usize {
        self.best.load(Ordering::Relaxed)
    }
}

fn check_multiple(spec: &GroupSpec, r: u64) -> Result<(), SolverError> {
    if r == 0 || !r.is_multiple_of(spec.exponent()) {
        return Err(SolverError::NotMultipleOfExponent {
            group: spec.to_string(),
            r,
            exponent: spec.exponent(),
        });
    }
    Ok(())
}

fn effective_symmetry(spec: &GroupSpec, s: Symmetry) -> Symmetry {
    match s {
        Symmetry::Full if !spec.has_uniform_moduli() => Symmetry::Translation,
        other => other,
    }
}

/// Admissible first elements and whether the first nonzero one must have
/// sorted coordinates.
fn root_policy(n: usize, symmetry: Symmetry) -> (Vec<usize>, bool) {
    match symmetry {
        Symmetry::None => ((0..n).collect(), false),
        Symmetry::Translation => (vec![0], false),
        Symmetry::Full => (vec![0], true),
    }
}

/// Runs each prefix task, possibly on a pool, and keeps the longest result,
/// ties broken by lexicographic order.
fn fan_out<T, F>(tasks: Vec<T>, threads: usize, run: F) -> Result<Vec<usize>, SolverError>
where
    T: Send + Sync,
    F: Fn(&T) -> Vec<usize> + Send + Sync,
{
    let results: Vec<Vec<usize>> = if threads <= 1 {
        tasks.iter().map(&run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| SolverError::Pool(e.to_string()))?;
        pool.install(|| tasks.par_iter().map(&run).collect())
    };
    Ok(pick_best(results))
}

fn pick_best(results: Vec<Vec<usize>>) -> Vec<usize> {
    results
        .into_iter()
        .min_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)))
        .unwrap_or_default()
}

// ---------------------------------------------------------------------------
// Zero-free sets

/// DFS state for zero-free sets of rank `r`. `counts[j][g]` is the number of
/// `j`-subsets of the current set with sum `g`, for `j < r`.
struct SetSearch<'a> {
    arith: &'a IndexArith,
    shared: &'a Shared,
    r: usize,
    sort_first_nonzero: bool,
    counts: Vec<Vec<u32>>,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl<'a> SetSearch<'a> {
    fn new(arith: &'a IndexArith, shared: &'a Shared, r: usize, sort_first_nonzero: bool) -> Self {
        let n = arith.order();
        let mut counts = vec![vec![0u32; n]; r];
        counts[0][0] = 1;
        SetSearch { arith, shared, r, sort_first_nonzero, counts, chosen: Vec::new(), best: Vec::new() }
    }

    fn push(&mut self, x: usize) {
        let n = self.arith.order();
        for j in (1..self.r).rev() {
            let (lower, upper) = self.counts.split_at_mut(j);
            let src = &lower[j - 1];
            let dst = &mut upper[0];
            for g in 0..n {
                if src[g] > 0 {
                    dst[self.arith.add(g, x)] += src[g];
                }
            }
        }
        self.chosen.push(x);
    }

    fn pop(&mut self) {
        let x = self.chosen.pop().expect("pop on empty set");
        let n = self.arith.order();
        for j in 1..self.r {
            let (lower, upper) = self.counts.split_at_mut(j);
            let src = &lower[j - 1];
            let dst = &mut upper[0];
            for g in 0..n {
                if src[g] > 0 {
                    dst[self.arith.add(g, x)] -= src[g];
                }
            }
        }
    }

    fn extendable(&self, y: usize) -> bool {
        self.counts[self.r - 1][self.arith.neg(y)] == 0
    }

    fn admissible(&self, x: usize) -> bool {
        !(self.sort_first_nonzero
            && x != 0
            && self.chosen.iter().all(|&c| c == 0)
            && !self.arith.is_sorted_coords(x))
    }

    fn record(&mut self) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
            self.shared.offer(self.best.len());
        }
    }

    fn dfs(&mut self, cands: &[usize]) {
        if !self.shared.tick() {
            return;
        }
        self.record();
        for (i, &x) in cands.iter().enumerate() {
            let reach = self.chosen.len() + cands.len() - i;
            if reach <= self.best.len() || reach < self.shared.global() {
                break;
            }
            if !self.admissible(x) {
                continue;
            }
            self.push(x);
            let next: Vec<usize> = cands[i + 1..].iter().copied().filter(|&y| self.extendable(y)).collect();
            self.dfs(&next);
            self.pop();
            if self.shared.abort.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

struct RawOutcome {
    best: Vec<usize>,
    exhaustive: bool,
    nodes: u64,
    elapsed: Duration,
}

fn search_sets(arith: &IndexArith, r: usize, budget: &Budget, symmetry: Symmetry) -> Result<RawOutcome, SolverError> {
    let start = Instant::now();
    let shared = Shared::new(budget, start);
    let n = arith.order();
    let (roots, sort_first) = root_policy(n, symmetry);

    // Depth-two prefixes become independent tasks.
    let mut tasks: Vec<(usize, usize)> = Vec::new();
    let mut shallow: Vec<Vec<usize>> = Vec::new();
    {
        let mut probe = SetSearch::new(arith, &shared, r, sort_first);
        for &a in &roots {
            if !probe.extendable(a) {
                continue;
            }
            shallow.push(vec![a]);
            probe.push(a);
            for b in a + 1..n {
                if probe.extendable(b) && probe.admissible(b) {
                    tasks.push((a, b));
                }
            }
            probe.pop();
        }
    }
    if let Some(s) = shallow.first() {
        shared.offer(s.len());
    }
    let run = |&(a, b): &(usize, usize)| {
        let mut s = SetSearch::new(arith, &shared, r, sort_first);
        s.push(a);
        s.push(b);
        let cands: Vec<usize> = (b + 1..n).filter(|&y| s.extendable(y)).collect();
        s.dfs(&cands);
        s.best
    };
    let mut best = fan_out(tasks, budget.threads, run)?;
    for s in shallow {
        best = pick_best(vec![best, s]);
    }
    Ok(RawOutcome {
        best,
        exhaustive: !shared.abort.load(Ordering::Relaxed),
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}

// ---------------------------------------------------------------------------
// Zero-sum-free sequences

/// DFS state for sequences without a zero-sum subsequence of length `r`.
/// `reach[j]` holds the sums of `j`-item subsequences, for `j < r`.
struct SeqSearch<'a> {
    arith: &'a IndexArith,
    shared: &'a Shared,
    r: usize,
    mult_cap: u32,
    sort_first_nonzero: bool,
    reach: Vec<FixedBitSet>,
    saved: Vec<Vec<FixedBitSet>>,
    mult: Vec<u32>,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl<'a> SeqSearch<'a> {
    fn new(arith: &'a IndexArith, shared: &'a Shared, r: usize, sort_first_nonzero: bool) -> Self {
        let n = arith.order();
        let mut reach = vec![FixedBitSet::with_capacity(n); r];
        reach[0].insert(0);
        SeqSearch {
            arith,
            shared,
            r,
            mult_cap: (r - 1) as u32,
            sort_first_nonzero,
            reach,
            saved: Vec::new(),
            mult: vec![0; n],
            chosen: Vec::new(),
            best: Vec::new(),
        }
    }

    fn push(&mut self, x: usize) {
        self.saved.push(self.reach.clone());
        for j in (1..self.r).rev() {
            let (lower, upper) = self.reach.split_at_mut(j);
            for g in lower[j - 1].ones() {
                upper[0].insert(self.arith.add(g, x));
            }
        }
        self.mult[x] += 1;
        self.chosen.push(x);
    }

    fn pop(&mut self) {
        let x = self.chosen.pop().expect("pop on empty sequence");
        self.mult[x] -= 1;
        self.reach = self.saved.pop().expect("unbalanced push/pop");
    }

    fn extendable(&self, y: usize) -> bool {
        self.mult[y] < self.mult_cap && !self.reach[self.r - 1].contains(self.arith.neg(y))
    }

    fn admissible(&self, x: usize) -> bool {
        !(self.sort_first_nonzero
            && x != 0
            && self.chosen.iter().all(|&c| c == 0)
            && !self.arith.is_sorted_coords(x))
    }

    fn record(&mut self) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
            self.shared.offer(self.best.len());
        }
    }

    fn dfs(&mut self, cands: &[usize]) {
        if !self.shared.tick() {
            return;
        }
        self.record();
        // suffix[i]: copies still available from cands[i..]
        let mut suffix = vec![0usize; cands.len() + 1];
        for i in (0..cands.len()).rev() {
            suffix[i] = suffix[i + 1] + (self.mult_cap - self.mult[cands[i]]) as usize;
        }
        for (i, &x) in cands.iter().enumerate() {
            let reach = self.chosen.len() + suffix[i];
            if reach <= self.best.len() || reach < self.shared.global() {
                break;
            }
            if !self.admissible(x) {
                continue;
            }
            self.push(x);
            let next: Vec<usize> = cands[i..].iter().copied().filter(|&y| self.extendable(y)).collect();
            self.dfs(&next);
            self.pop();
            if self.shared.abort.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

fn search_sequences(arith: &IndexArith, r: usize, budget: &Budget, symmetry: Symmetry) -> Result<RawOutcome, SolverError> {
    let start = Instant::now();
    let shared = Shared::new(budget, start);
    let n = arith.order();
    let (roots, sort_first) = root_policy(n, symmetry);

    let mut tasks: Vec<(usize, usize)> = Vec::new();
    let mut shallow: Vec<Vec<usize>> = Vec::new();
    {
        let mut probe = SeqSearch::new(arith, &shared, r, sort_first);
        for &a in &roots {
            if !probe.extendable(a) {
                continue;
            }
            shallow.push(vec![a]);
            probe.push(a);
            for b in a..n {
                if probe.extendable(b) && probe.admissible(b) {
                    tasks.push((a, b));
                }
            }
            probe.pop();
        }
    }
    if let Some(s) = shallow.first() {
        shared.offer(s.len());
    }
    let run = |&(a, b): &(usize, usize)| {
        let mut s = SeqSearch::new(arith, &shared, r, sort_first);
        s.push(a);
        s.push(b);
        let cands: Vec<usize> = (b..n).filter(|&y| s.extendable(y)).collect();
        s.dfs(&cands);
        s.best
    };
    let mut best = fan_out(tasks, budget.threads, run)?;
    for s in shallow {
        best = pick_best(vec![best, s]);
    }
    Ok(RawOutcome {
        best,
        exhaustive: !shared.abort.load(Ordering::Relaxed),
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}

// ---------------------------------------------------------------------------
// Public entry points

fn elements_of(spec: &GroupSpec, idx: &[usize]) -> Result<Vec<GroupElement>, SolverError> {
    idx.iter().map(|&i| spec.element_at(i as u64).map_err(SolverError::from)).collect()
}

/// Largest zero-free set of rank `r`.
pub fn solve_beta_r(spec: &GroupSpec, r: u64, budget: &Budget) -> Result<SearchResult, SolverError> {
    check_multiple(spec, r)?;
    let arith = IndexArith::new(spec, budget.element_cap)?;
    let symmetry = effective_symmetry(spec, budget.symmetry);
    let out = search_sets(&arith, r as usize, budget, symmetry)?;
    Ok(SearchResult {
        constant: ConstantKind::BetaR,
        spec: spec.clone(),
        r,
        value: out.best.len() as u64,
        witness: Witness::Set(elements_of(spec, &out.best)?),
        exhaustive: out.exhaustive,
        nodes_explored: out.nodes,
        wall_time: out.elapsed,
        multiplicity_cap: None,
        symmetry,
    })
}

/// Smallest `s` such that every length-`s` sequence has a zero-sum
/// subsequence of length `r`: one more than the longest sequence without.
pub fn solve_s_r(spec: &GroupSpec, r: u64, budget: &Budget) -> Result<SearchResult, SolverError> {
    check_multiple(spec, r)?;
    let arith = IndexArith::new(spec, budget.element_cap)?;
    let symmetry = effective_symmetry(spec, budget.symmetry);
    let out = search_sequences(&arith, r as usize, budget, symmetry)?;
    let seq = GSequence::from_elements(spec.clone(), elements_of(spec, &out.best)?)?;
    Ok(SearchResult {
        constant: ConstantKind::SR,
        spec: spec.clone(),
        r,
        value: out.best.len() as u64 + 1,
        witness: Witness::Sequence(seq),
        exhaustive: out.exhaustive,
        nodes_explored: out.nodes,
        wall_time: out.elapsed,
        multiplicity_cap: Some((r - 1) as u32),
        symmetry,
    })
}

/// Harborth constant `g(G) = beta_exp(G)(G) + 1`.
pub fn solve_harborth(spec: &GroupSpec, budget: &Budget) -> Result<SearchResult, SolverError> {
    let mut res = solve_beta_r(spec, spec.exponent(), budget)?;
    res.constant = ConstantKind::Harborth;
    res.value += 1;
    Ok(res)
}

/// Maximum cap size in `AG(d, 3)`, as `beta_3(Z3^d)`.
pub fn solve_cap(d: usize, budget: &Budget) -> Result<SearchResult, SolverError> {
    if d > budget.cap_dimension_limit {
        return Err(SolverError::CapDimension { d, limit: budget.cap_dimension_limit });
    }
    let spec = GroupSpec::power(3, d)?;
    let mut res = solve_beta_r(&spec, 3, budget)?;
    res.constant = ConstantKind::Cap;
    Ok(res)
}

/// What a certificate check established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub valid: bool,
    /// A zero-sum subsequence (or zero-sum subset) contradicting the witness.
    pub violation: Option<Vec<GroupElement>>,
    /// The witness proves the lower-bound half of the result.
    pub lower_bound_certified: bool,
    /// The search behind the result was exhaustive (upper-bound half).
    pub upper_bound_exhaustive: bool,
}

impl CertificateReport {
    pub fn describe(&self) -> String {
        match (self.valid, self.upper_bound_exhaustive) {
            (false, _) => "witness INVALID".to_string(),
            (true, true) => "lower bound certified by witness; upper bound by exhaustive search".to_string(),
            (true, false) => "lower bound certified by witness only (search not exhaustive)".to_string(),
        }
    }
}

/// Re-validates a result's witness through the zero-sum module, without
/// trusting the search that produced it.
pub fn verify_certificate(result: &SearchResult) -> Result<CertificateReport, SolverError> {
    let spec = &result.spec;
    let expected = result.expected_witness_size();
    if result.witness.size() != expected {
        return Err(SolverError::Malformed(format!(
            "witness has size {}, expected {expected}",
            result.witness.size()
        )));
    }
    let violation = match (&result.witness, result.constant) {
        (Witness::Sequence(seq), ConstantKind::SR) => {
            if seq.spec() != spec {
                return Err(SolverError::Malformed("witness sequence over a different group".into()));
            }
            find_zero_sum_subsequence(seq, result.r)?.map(|w| w.items().cloned().collect::<Vec<_>>())
        }
        (Witness::Set(set), ConstantKind::BetaR | ConstantKind::Harborth | ConstantKind::Cap) => {
            for x in set {
                if !spec.contains(x) {
                    return Err(SolverError::Malformed(format!("element {x} is not in {spec}")));
                }
            }
            let check = is_zero_free_set(spec, set, result.r).map_err(|e| match e {
                ZeroSumError::Duplicate(x) => SolverError::Malformed(format!("duplicate element {x}")),
                other => other.into(),
            })?;
            check.violation
        }
        _ => return Err(SolverError::Malformed("witness kind does not match the constant".into())),
    };
    let valid = violation.is_none();
    Ok(CertificateReport {
        valid,
        violation,
        lower_bound_certified: valid,
        upper_bound_exhaustive: valid && result.exhaustive,
    })
}
