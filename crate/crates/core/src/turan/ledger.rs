use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::TuranError;
use crate::algebra::GroupSpec;
use crate::construct as bounds;
use crate::solver::{ConstantKind, SearchResult};

/// Where the `s_r(G)` value of a base fact comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceClass {
    /// Certified by an exhaustive solver run.
    Solved,
    /// A published value that is not re-derived here.
    PublishedTable,
    /// An upper bound on `s_r(G)` evaluated in closed form.
    ClosedForm,
    /// A result imported from outside this crate.
    External,
}

impl fmt::Display for SourceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceClass::Solved => "solved",
            SourceClass::PublishedTable => "published-table",
            SourceClass::ClosedForm => "closed-form",
            SourceClass::External => "external",
        })
    }
}

/// `s_r(G) <= s` (or `= s`), the input to the basket witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFact {
    pub group: GroupSpec,
    pub r: u32,
    pub s: u64,
    pub source: SourceClass,
    #[serde(default)]
    pub note: String,
}

impl BaseFact {
    pub fn new(group: GroupSpec, r: u32, s: u64, source: SourceClass, note: impl Into<String>) -> Self {
        BaseFact { group, r, s, source, note: note.into() }
    }

    /// A base fact backed by an exhaustive `s_r` search.
    pub fn from_result(res: &SearchResult) -> Result<Self, TuranError> {
        if res.constant != ConstantKind::SR || !res.exhaustive {
            return Err(TuranError::Base(format!(
                "{} search on {} is not an exhaustive s_r result",
                res.constant.name(), res.spec
            )));
        }
        let r = u32::try_from(res.r).map_err(|_| TuranError::Base(format!("r = {} too large", res.r)))?;
        Ok(BaseFact::new(res.spec.clone(), r, res.value, SourceClass::Solved, "exhaustive search"))
    }
}

/// One derivation step. A provenance chain starts with a seed step (`Base`,
/// `Classical` or `External`) followed by any number of `Shift` and
/// `RaiseK` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum Step {
    /// `tau(s, r) <= 1/|G|` from the basket witness on `G`.
    Base { group: GroupSpec, r: u32, s: u64, source: SourceClass },
    /// `tau(k, r) <= tau(k - j, r - j)`, applied `j = by` times.
    Shift { by: u32 },
    /// `tau(k', r) <= tau(k, r)` for `k' >= k`.
    RaiseK { to: u32 },
    /// Turán's theorem, `t(k, 2) = 1/(k - 1)`.
    Classical { k: u32 },
    /// `s_{2m}(Z2^d) = 2m + d` for `2m > d`, giving
    /// `tau(2m + d, 2m) <= 2^-d`.
    External { d: u32, r: u32 },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Base { group, r, s, source } => write!(f, "{source} s_{r}({group})={s}"),
            Step::Shift { by } => write!(f, "shift+{by}"),
            Step::RaiseK { to } => write!(f, "raise-k to {to}"),
            Step::Classical { k } => write!(f, "classical t({k};2)=1/{}", k - 1),
            Step::External { d, r } => write!(f, "external s_{r}(Z2^{d})={}", r + d),
        }
    }
}

/// `tau(k, r) <= bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundFact {
    pub k: u32,
    pub r: u32,
    pub bound: Ratio<u64>,
    pub provenance: Vec<Step>,
    /// Other chains reaching the same `(k, r)` with an equal or weaker bound.
    #[serde(default)]
    pub alternatives: Vec<Alternative>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub bound: Ratio<u64>,
    pub provenance: Vec<Step>,
}

pub fn provenance_string(chain: &[Step]) -> String {
    chain.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" > ")
}

impl BoundFact {
    pub fn provenance_string(&self) -> String {
        provenance_string(&self.provenance)
    }

    /// The source class of the seed step.
    pub fn seed_class(&self) -> &'static str {
        match self.provenance.first() {
            Some(Step::Base { source, .. }) => match source {
                SourceClass::Solved => "solved",
                SourceClass::PublishedTable => "published-table",
                SourceClass::ClosedForm => "closed-form",
                SourceClass::External => "external",
            },
            Some(Step::Classical { .. }) => "classical",
            Some(Step::External { .. }) => "external",
            _ => "invalid",
        }
    }
}

fn order_as_u64(group: &GroupSpec) -> Result<u64, TuranError> {
    u64::try_from(group.order()).map_err(|_| TuranError::Replay(format!("|{group}| does not fit in u64")))
}

/// Recomputes `(k, r, bound)` from a provenance chain, checking every
/// step's preconditions.
pub fn replay(chain: &[Step]) -> Result<(u32, u32, Ratio<u64>), TuranError> {
    let (seed, rest) = chain.split_first().ok_or_else(|| TuranError::Replay("empty chain".into()))?;
    let (mut k, mut r, bound) = match seed {
        Step::Base { group, r, s, .. } => {
            if *r < 2 || !(*r as u64).is_multiple_of(group.exponent()) {
                return Err(TuranError::Replay(format!("r = {r} is not a multiple of exp({group})")));
            }
            if *s <= *r as u64 || *s > u32::MAX as u64 {
                return Err(TuranError::Replay(format!("s = {s} must exceed r = {r}")));
            }
            (*s as u32, *r, Ratio::new(1, order_as_u64(group)?))
        }
        Step::Classical { k } => {
            if *k < 3 {
                return Err(TuranError::Replay(format!("classical fact needs k >= 3, got {k}")));
            }
            (*k, 2, Ratio::new(1, *k as u64 - 1))
        }
        Step::External { d, r } => {
            if *d == 0 || *d > 63 || *r % 2 != 0 || *r <= *d {
                return Err(TuranError::Replay(format!("external fact needs even r > d, got d = {d}, r = {r}")));
            }
            (r + d, *r, Ratio::new(1, 1u64 << d))
        }
        other => return Err(TuranError::Replay(format!("chain cannot start with {other}"))),
    };
    for step in rest {
        match step {
            Step::Shift { by } => {
                k = k.checked_add(*by).ok_or_else(|| TuranError::Replay("k overflow".into()))?;
                r = r.checked_add(*by).ok_or_else(|| TuranError::Replay("r overflow".into()))?;
            }
            Step::RaiseK { to } => {
                if *to < k {
                    return Err(TuranError::Replay(format!("cannot lower k from {k} to {to}")));
                }
                k = *to;
            }
            other => return Err(TuranError::Replay(format!("{other} can only start a chain"))),
        }
    }
    Ok((k, r, bound))
}

/// Checks that a fact's chain reproduces its `(k, r, bound)`, and that
/// every alternative chain reaches the same `(k, r)` with its recorded bound.
pub fn replay_fact(fact: &BoundFact) -> Result<(), TuranError> {
    let got = replay(&fact.provenance)?;
    if got != (fact.k, fact.r, fact.bound) {
        return Err(TuranError::Replay(format!(
            "chain gives tau({},{}) <= {}, fact states tau({},{}) <= {}",
            got.0, got.1, got.2, fact.k, fact.r, fact.bound
        )));
    }
    for alt in &fact.alternatives {
        let got = replay(&alt.provenance)?;
        if got != (fact.k, fact.r, alt.bound) || alt.bound < fact.bound {
            return Err(TuranError::Replay(format!("alternative {} does not replay", provenance_string(&alt.provenance))));
        }
    }
    Ok(())
}

/// Strongest known bound per `(k, r)`, keeping every provenance seen.
#[derive(Debug, Clone, Default)]
pub struct Ledger {
    facts: BTreeMap<(u32, u32), BoundFact>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    /// Adds the fact derived by `chain`. Returns whether it became the
    /// strongest bound at its `(k, r)`.
    pub fn insert_chain(&mut self, chain: Vec<Step>) -> Result<bool, TuranError> {
        let (k, r, bound) = replay(&chain)?;
        if k <= r || r < 2 {
            return Err(TuranError::Replay(format!("derived tau({k},{r}) needs k > r >= 2")));
        }
        match self.facts.get_mut(&(k, r)) {
            None => {
                self.facts.insert((k, r), BoundFact { k, r, bound, provenance: chain, alternatives: Vec::new() });
                Ok(true)
            }
            Some(f) if bound < f.bound => {
                let old = Alternative { bound: f.bound, provenance: std::mem::replace(&mut f.provenance, chain) };
                f.bound = bound;
                f.alternatives.insert(0, old);
                Ok(true)
            }
            Some(f) => {
                if !f.alternatives.iter().any(|a| a.provenance == chain) && f.provenance != chain {
                    f.alternatives.push(Alternative { bound, provenance: chain });
                }
                Ok(false)
            }
        }
    }

    /// `tau(k', r) <= tau(k, r)` for `k' >= k`: fills in or improves every
    /// `(k', r)` with `k' <= max_k` from the best fact at a smaller `k`.
    pub fn close_monotone_k(&mut self, max_k: u32) {
        let rs: Vec<u32> = self.facts.keys().map(|&(_, r)| r).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        for r in rs {
            let mut best: Option<BoundFact> = None;
            let ks: Vec<u32> = self.facts.range((0, r)..).filter(|((_, rr), _)| *rr == r).map(|(&(k, _), _)| k).collect();
            let Some(&k0) = ks.iter().min() else { continue };
            for k in k0..=max_k.max(k0) {
                if let Some(f) = self.facts.get(&(k, r)) {
                    if best.as_ref().is_none_or(|b| f.bound <= b.bound) {
                        best = Some(f.clone());
                        continue;
                    }
                }
                let b = best.as_ref().expect("k0 has a fact");
                let mut chain = b.provenance.clone();
                if let Some(Step::RaiseK { .. }) = chain.last() {
                    chain.pop();
                }
                chain.push(Step::RaiseK { to: k });
                self.insert_chain(chain).expect("raising k keeps a valid chain");
            }
        }
    }

    pub fn get(&self, k: u32, r: u32) -> Option<&BoundFact> {
        self.facts.get(&(k, r))
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Facts ordered by `(k, r)`.
    pub fn facts(&self) -> impl Iterator<Item = &BoundFact> {
        self.facts.values()
    }

    pub fn into_facts(self) -> Vec<BoundFact> {
        self.facts.into_values().collect()
    }
}

/// `tau(s + j, r + j) <= 1/|G|` for every base fact and `j` in `shifts`,
/// keeping the strongest bound per `(k, r)`.
pub fn derive_bounds(bases: &[BaseFact], shifts: RangeInclusive<u32>) -> Result<Vec<BoundFact>, TuranError> {
    let mut ledger = Ledger::new();
    add_bases(&mut ledger, bases, shifts)?;
    Ok(ledger.into_facts())
}

pub fn add_bases(ledger: &mut Ledger, bases: &[BaseFact], shifts: RangeInclusive<u32>) -> Result<(), TuranError> {
    for b in bases {
        if b.s <= b.r as u64 {
            return Err(TuranError::Base(format!("s_{}({}) = {} would give k <= r", b.r, b.group, b.s)));
        }
        let seed = Step::Base { group: b.group.clone(), r: b.r, s: b.s, source: b.source };
        for j in shifts.clone() {
            let mut chain = vec![seed.clone()];
            if j > 0 {
                chain.push(Step::Shift { by: j });
            }
            ledger.insert_chain(chain)?;
        }
    }
    Ok(())
}

/// Seed facts: `t(k, 2) = 1/(k - 1)` for `3 <= k <= max_k`, and the
/// external `tau(r + d, r) <= 2^-d` for `r >= 2 floor(d/2) + 2`, `r <= max_r`,
/// each shifted up to `r <= max_r`.
pub fn reference_facts_up_to(max_k: u32, max_r: u32) -> Vec<BoundFact> {
    let mut ledger = Ledger::new();
    add_reference(&mut ledger, max_k, max_r);
    ledger.into_facts()
}

pub fn reference_facts() -> Vec<BoundFact> {
    reference_facts_up_to(DEFAULT_MAX_K, DEFAULT_MAX_R)
}

pub const DEFAULT_MAX_K: u32 = 12;
pub const DEFAULT_MAX_R: u32 = 12;

pub fn add_reference(ledger: &mut Ledger, max_k: u32, max_r: u32) {
    for k in 3..=max_k {
        for j in 0..=max_r.saturating_sub(2) {
            let mut chain = vec![Step::Classical { k }];
            if j > 0 {
                chain.push(Step::Shift { by: j });
            }
            ledger.insert_chain(chain).expect("classical chains replay");
        }
    }
    for d in 1..=max_k.min(62) {
        let r0 = 2 * (d / 2) + 2;
        for r in r0..=max_r {
            let mut chain = vec![Step::External { d, r: r0 }];
            if r > r0 {
                chain.push(Step::Shift { by: r - r0 });
            }
            ledger.insert_chain(chain).expect("external chains replay");
        }
    }
}

/// Asymptotic statements that carry no desk-scale numbers.
pub fn annotations() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "codegree-asymptotics",
            "for each fixed r >= 3, tau(k, r) lies between two constant multiples of ln(k) / k^(r-1) as k grows; no explicit constants",
        ),
        (
            "general-l-shifting",
            "the shifting inequality holds for every l-degree density t_l; only the codegree case l = r-1 is tracked",
        ),
        (
            "classical-open",
            "no value of t(k, r) with k > r > 2 is known; the ledger stores none",
        ),
    ]
}

/// Base facts shipped with the crate. `Solved` entries are values the
/// solver certifies exhaustively; the rest are table or closed-form inputs.
pub fn default_bases() -> Vec<BaseFact> {
    let g = |s: &str| s.parse::<GroupSpec>().expect("valid group");
    let mut out = vec![
        BaseFact::new(g("Z2"), 2, 3, SourceClass::Solved, "exhaustive search"),
        BaseFact::new(g("Z3"), 3, 5, SourceClass::Solved, "exhaustive search"),
        BaseFact::new(g("Z4"), 4, 7, SourceClass::Solved, "exhaustive search"),
        BaseFact::new(g("Z3^2"), 3, 9, SourceClass::Solved, "exhaustive search"),
    ];
    for (d, s) in [(1, 5), (2, 6), (3, 7), (4, 9)] {
        out.push(BaseFact::new(g(&format!("Z2^{d}")), 4, s, SourceClass::Solved, "exhaustive search"));
    }
    for (d, a) in CAP_TABLE {
        out.push(BaseFact::new(
            g(&format!("Z3^{d}")),
            3,
            2 * a + 1,
            SourceClass::PublishedTable,
            format!("maximum cap size a_{d} = {a}"),
        ));
    }
    for d in 1..=12 {
        let s = bounds::s4_upper_bound(d).expect("d in range");
        out.push(BaseFact::new(g(&format!("Z2^{d}")), 4, s, SourceClass::ClosedForm, format!("b_{d} + 4")));
    }
    out
}

/// Known maximum cap sizes in `AG(d, 3)`.
pub const CAP_TABLE: [(u32, u64); 6] = [(1, 2), (2, 4), (3, 9), (4, 20), (5, 45), (6, 112)];

/// Bases, their shifts up to `max_shift`, and optionally the reference
/// facts, in one ledger.
pub fn build_ledger(bases: &[BaseFact], max_shift: u32, with_reference: bool) -> Result<Ledger, TuranError> {
    let mut ledger = Ledger::new();
    add_bases(&mut ledger, bases, 0..=max_shift)?;
    if with_reference {
        let max_r = bases.iter().map(|b| b.r + max_shift).max().unwrap_or(DEFAULT_MAX_R);
        let max_k = bases.iter().map(|b| (b.s as u32).saturating_add(max_shift)).max().unwrap_or(DEFAULT_MAX_K);
        add_reference(&mut ledger, max_k.min(64), max_r.min(64));
    }
    Ok(ledger)
}

/// CSV with columns `k,r,bound_num,bound_den,provenance`.
pub fn to_csv<'a>(facts: impl IntoIterator<Item = &'a BoundFact>) -> String {
    let mut out = String::from("k,r,bound_num,bound_den,provenance\n");
    for f in facts {
        let prov = f.provenance_string().replace('"', "\"\"");
        out.push_str(&format!("{},{},{},{},\"{}\"\n", f.k, f.r, f.bound.numer(), f.bound.denom(), prov));
    }
    out
}
