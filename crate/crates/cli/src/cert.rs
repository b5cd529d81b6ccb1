//! Stored solver certificates: the extremal witness of a search together
//! with the value it certifies.

use std::time::Duration;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use zerosum_core::io::parse_elements;
use zerosum_core::solver::{
    solve_beta_r, solve_cap, solve_harborth, solve_s_r, verify_certificate, Budget, ConstantKind, SearchResult,
    Symmetry, Witness,
};
use zerosum_core::GroupSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub constant: ConstantKind,
    pub group: GroupSpec,
    pub r: u64,
    pub value: u64,
    pub exhaustive: bool,
    pub nodes: u64,
    /// The witness in the set/sequence text format, one element per line.
    pub witness: Vec<String>,
}

/// Outcome of checking a certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CertCheck {
    pub witness_valid: bool,
    pub violation: Option<Vec<String>>,
    /// Value and exhaustiveness of a fresh search, when one was run.
    pub rerun_value: Option<u64>,
    pub rerun_exhaustive: Option<bool>,
    pub ok: bool,
}

fn witness_lines(w: &Witness) -> Vec<String> {
    match w {
        Witness::Set(set) => set.iter().map(|x| x.to_string()).collect(),
        Witness::Sequence(seq) => seq
            .mults()
            .iter()
            .map(|(x, &c)| if c == 1 { x.to_string() } else { format!("{x} x {c}") })
            .collect(),
    }
}

impl Certificate {
    pub fn from_result(res: &SearchResult) -> Self {
        Certificate {
            schema: 1,
            constant: res.constant,
            group: res.spec.clone(),
            r: res.r,
            value: res.value,
            exhaustive: res.exhaustive,
            nodes: res.nodes_explored,
            witness: witness_lines(&res.witness),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cert: Certificate = serde_json::from_str(text).context("malformed certificate JSON")?;
        if cert.schema != 1 {
            bail!("unsupported certificate schema {}", cert.schema);
        }
        Ok(cert)
    }

    /// Rebuilds the search result the certificate records.
    pub fn to_result(&self) -> Result<SearchResult> {
        let list = parse_elements(&self.witness.join("\n"), Some(&self.group))?;
        let witness = match self.constant {
            ConstantKind::SR => Witness::Sequence(list.into_sequence()?),
            _ => Witness::Set(list.into_set()?.1),
        };
        Ok(SearchResult {
            constant: self.constant,
            spec: self.group.clone(),
            r: self.r,
            value: self.value,
            witness,
            exhaustive: self.exhaustive,
            nodes_explored: self.nodes,
            wall_time: Duration::ZERO,
            multiplicity_cap: None,
            symmetry: Symmetry::default(),
        })
    }

    /// Re-validates the witness and, with `rerun`, repeats the search.
    pub fn check(&self, rerun: Option<&Budget>) -> Result<CertCheck> {
        let res = self.to_result()?;
        let report = verify_certificate(&res)?;
        let violation = report.violation.map(|v| v.iter().map(|x| x.to_string()).collect());
        let (rerun_value, rerun_exhaustive) = match rerun {
            None => (None, None),
            Some(budget) => {
                let fresh = self.solve(budget)?;
                (Some(fresh.value), Some(fresh.exhaustive))
            }
        };
        let ok = report.valid
            && rerun_value.is_none_or(|v| v == self.value)
            && rerun_exhaustive.is_none_or(|e| e || !self.exhaustive);
        Ok(CertCheck { witness_valid: report.valid, violation, rerun_value, rerun_exhaustive, ok })
    }

    pub fn solve(&self, budget: &Budget) -> Result<SearchResult> {
        Ok(match self.constant {
            ConstantKind::SR => solve_s_r(&self.group, self.r, budget)?,
            ConstantKind::BetaR => solve_beta_r(&self.group, self.r, budget)?,
            ConstantKind::Harborth => solve_harborth(&self.group, budget)?,
            ConstantKind::Cap => solve_cap(self.group.rank(), budget)?,
        })
    }
}
