//! Text exchange formats.
//!
//! Sets and sequences: one element per line as comma-separated
//! coordinates, optionally followed by `× m` (or `x m`, `* m`) for a
//! multiplicity. `#` starts a comment; a `# group Z2^4` line names the group.
//!
//! Hypergraphs: a header line `n r`, then one edge per line as
//! space-separated vertex indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, GroupElement, GroupSpec};
use crate::hypergraph::{Caps, HypergraphError, RGraph};
use crate::zerosum::{GSequence, ZeroSumError, ZeroSumWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("no group given: pass one or add a '# group ...' line")]
    MissingGroup,
    #[error("file declares group {found} but {expected} was requested")]
    GroupMismatch { expected: String, found: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    ZeroSum(#[from] ZeroSumError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Parsed contents of a set or sequence file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementList {
    pub spec: GroupSpec,
    pub items: Vec<(GroupElement, u32)>,
}

impl ElementList {
    pub fn into_sequence(self) -> Result<GSequence, FormatError> {
        Ok(GSequence::from_counts(self.spec, self.items)?)
    }

    /// Elements of a set; any multiplicity other than 1 is an error.
    pub fn into_set(self) -> Result<(GroupSpec, Vec<GroupElement>), FormatError> {
        let mut out = Vec::with_capacity(self.items.len());
        for (x, c) in self.items {
            if c != 1 {
                return Err(ZeroSumError::Duplicate(x.to_string()).into());
            }
            out.push(x);
        }
        Ok((self.spec, out))
    }
}

fn split_multiplicity(body: &str) -> (&str, Option<&str>) {
    for sep in ['×', 'x', 'X', '*'] {
        if let Some((a, b)) = body.split_once(sep) {
            return (a, Some(b));
        }
    }
    (body, None)
}

/// Parses a set or sequence file. `spec` overrides or must agree with the
/// header.
pub fn parse_elements(text: &str, spec: Option<&GroupSpec>) -> Result<ElementList, FormatError> {
    let mut declared: Option<GroupSpec> = None;
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let (body, comment) = match line.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (line, None),
        };
        if let Some(c) = comment {
            if let Some(g) = c.trim().strip_prefix("group") {
                let g: GroupSpec = g.trim().parse().map_err(|e: AlgebraError| syntax(lineno, e.to_string()))?;
                declared = Some(g);
            }
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let (coords, mult) = split_multiplicity(body);
        let coords: Vec<u32> = coords
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| syntax(lineno, format!("bad coordinates {coords:?}")))?;
        let mult = match mult {
            Some(m) => m.trim().parse::<u32>().map_err(|_| syntax(lineno, format!("bad multiplicity {m:?}")))?,
            None => 1,
        };
        if mult == 0 {
            return Err(syntax(lineno, "multiplicity must be positive"));
        }
        raw.push((lineno, coords, mult));
    }
    let spec = match (spec, declared) {
        (Some(s), Some(d)) if *s != d => {
            return Err(FormatError::GroupMismatch { expected: s.to_string(), found: d.to_string() })
        }
        (Some(s), _) => s.clone(),
        (None, Some(d)) => d,
        (None, None) => return Err(FormatError::MissingGroup),
    };
    let mut items = Vec::with_capacity(raw.len());
    for (lineno, coords, mult) in raw {
        let x = spec.element(coords).map_err(|e| syntax(lineno, e.to_string()))?;
        items.push((x, mult));
    }
    Ok(ElementList { spec, items })
}

pub fn parse_set(text: &str, spec: Option<&GroupSpec>) -> Result<(GroupSpec, Vec<GroupElement>), FormatError> {
    parse_elements(text, spec)?.into_set()
}

pub fn parse_sequence(text: &str, spec: Option<&GroupSpec>) -> Result<GSequence, FormatError> {
    parse_elements(text, spec)?.into_sequence()
}

pub fn write_set(spec: &GroupSpec, set: &[GroupElement]) -> String {
    let mut out = format!("# group {spec}\n");
    for x in set {
        out.push_str(&format!("{x}\n"));
    }
    out
}

pub fn write_sequence(seq: &GSequence) -> String {
    let mut out = format!("# group {}\n", seq.spec());
    for (x, &c) in seq.mults() {
        if c == 1 {
            out.push_str(&format!("{x}\n"));
        } else {
            out.push_str(&format!("{x} x {c}\n"));
        }
    }
    out
}

/// JSON form of a zero-sum witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEnvelope {
    pub group: GroupSpec,
    pub target_r: u64,
    /// Always `"identity"`: the picked items sum to the group identity.
    pub sum_check: String,
    /// `(coordinates, copies)` pairs.
    pub picks: Vec<(Vec<u32>, u32)>,
}

impl WitnessEnvelope {
    pub fn new(spec: &GroupSpec, w: &ZeroSumWitness) -> Self {
        WitnessEnvelope {
            group: spec.clone(),
            target_r: w.target_r,
            sum_check: "identity".into(),
            picks: w.picks.iter().map(|(x, &c)| (x.coords().to_vec(), c)).collect(),
        }
    }

    pub fn to_witness(&self) -> Result<ZeroSumWitness, FormatError> {
        let mut picks = BTreeMap::new();
        for (coords, c) in &self.picks {
            picks.insert(self.group.element(coords.clone())?, *c);
        }
        Ok(ZeroSumWitness { target_r: self.target_r, picks })
    }
}

pub fn parse_hypergraph(text: &str) -> Result<RGraph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing 'n r' header"))?;
    let nums: Vec<u32> = header
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()
        .map_err(|_| syntax(hl, "bad header"))?;
    let [n, r] = nums[..] else {
        return Err(syntax(hl, "header must be 'n r'"));
    };
    let mut edges = Vec::new();
    for (lineno, l) in lines {
        let mut e: Vec<u32> = l
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| syntax(lineno, format!("bad edge {l:?}")))?;
        e.sort_unstable();
        edges.push(e);
    }
    Ok(RGraph::explicit(n, r, edges)?)
}

pub fn write_hypergraph(h: &RGraph) -> Result<String, FormatError> {
    Ok(h.to_text(&Caps::default())?)
}
