//! Reference values for small groups, each with its provenance.

use serde::Serialize;

use crate::cert::Certificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Exhaustively searched here; a certificate is bundled.
    Solved,
    /// Taken from the literature.
    Published,
    /// Follows from an external theorem or conjecture-level result.
    External,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    /// `beta`, `s`, `cap` or `g`.
    pub constant: &'static str,
    /// Cyclic factor of `Z_m^d`.
    pub family: u32,
    pub d: u32,
    pub r: u64,
    pub value: u64,
    pub provenance: Provenance,
    pub citation: &'static str,
    #[serde(skip)]
    pub cert: Option<&'static str>,
}

impl Entry {
    pub fn group(&self) -> String {
        if self.d == 1 {
            format!("Z{}", self.family)
        } else {
            format!("Z{}^{}", self.family, self.d)
        }
    }

    pub fn certificate(&self) -> Option<anyhow::Result<Certificate>> {
        self.cert.map(Certificate::parse)
    }
}

macro_rules! cert {
    ($name:literal) => {
        Some(include_str!(concat!("../data/certs/", $name, ".json")))
    };
}

const SEARCH: &str = "exhaustive search, certificate bundled";
const CAPS: &str = "maximum caps in AG(d,3): Pellegrino (d=4), Edel-Ferret-Landjev-Storme (d=5), Potechin (d=6)";
const CAP_EGZ: &str = "s(Z3^d) = 2 a_d + 1 with a_d the maximum cap size";
const KEMNITZ: &str = "Kemnitz's conjecture s(Z_p^2) = 4p - 3, proved by Reiher";
const GAO_KM: &str = "Gao: s_km(Z_k^d) = km + (k-1)d when m >= k^(d-1)";
const GAO_2M: &str = "Gao: s_2m(Z2^d) = 2m + d for 2m > d";

fn e(
    (constant, family, d, r): (&'static str, u32, u32, u64),
    value: u64,
    provenance: Provenance,
    citation: &'static str,
    cert: Option<&'static str>,
) -> Entry {
    Entry { constant, family, d, r, value, provenance, citation, cert }
}

/// The full table, ordered by constant, family and dimension.
pub fn entries() -> Vec<Entry> {
    use Provenance::*;
    vec![
        e(("beta", 2, 1, 4), 2, Solved, SEARCH, cert!("beta4-z2-1")),
        e(("beta", 2, 2, 4), 3, Solved, SEARCH, cert!("beta4-z2-2")),
        e(("beta", 2, 3, 4), 4, Solved, SEARCH, cert!("beta4-z2-3")),
        e(("beta", 2, 4, 4), 6, Solved, SEARCH, cert!("beta4-z2-4")),
        e(("cap", 3, 1, 3), 2, Solved, SEARCH, cert!("cap-1")),
        e(("cap", 3, 2, 3), 4, Solved, SEARCH, cert!("cap-2")),
        e(("cap", 3, 3, 3), 9, Solved, SEARCH, cert!("cap-3")),
        e(("cap", 3, 4, 3), 20, Published, CAPS, None),
        e(("cap", 3, 5, 3), 45, Published, CAPS, None),
        e(("cap", 3, 6, 3), 112, Published, CAPS, None),
        e(("g", 3, 2, 3), 5, Solved, SEARCH, cert!("g-z3-2")),
        e(("s", 2, 1, 2), 3, Solved, SEARCH, cert!("s2-z2-1")),
        e(("s", 2, 1, 4), 5, Solved, SEARCH, cert!("s4-z2-1")),
        e(("s", 2, 2, 4), 6, Solved, SEARCH, cert!("s4-z2-2")),
        e(("s", 2, 3, 4), 7, Solved, SEARCH, cert!("s4-z2-3")),
        e(("s", 2, 4, 4), 9, Solved, SEARCH, cert!("s4-z2-4")),
        e(("s", 2, 3, 6), 9, External, GAO_2M, None),
        e(("s", 2, 5, 6), 11, External, GAO_2M, None),
        e(("s", 2, 3, 8), 11, Published, GAO_KM, None),
        e(("s", 3, 1, 3), 5, Solved, SEARCH, cert!("s3-z3-1")),
        e(("s", 3, 2, 3), 9, Solved, SEARCH, cert!("s3-z3-2")),
        e(("s", 3, 3, 3), 19, Published, CAP_EGZ, None),
        e(("s", 3, 4, 3), 41, Published, CAP_EGZ, None),
        e(("s", 4, 1, 4), 7, Solved, SEARCH, cert!("s4-z4-1")),
        e(("s", 5, 2, 5), 17, Published, KEMNITZ, None),
    ]
}

/// Entries matching the optional constant and family filters.
pub fn select(constant: Option<&str>, family: Option<u32>) -> Vec<Entry> {
    entries()
        .into_iter()
        .filter(|e| constant.is_none_or(|c| c == e.constant))
        .filter(|e| family.is_none_or(|f| f == e.family))
        .collect()
}

/// The tabulated `s_r(G)`, if any.
pub fn lookup_s(group: &str, r: u64) -> Option<Entry> {
    entries().into_iter().find(|e| e.constant == "s" && e.r == r && e.group() == group)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_certificates_match_entries() {
        for entry in entries() {
            assert_eq!(entry.cert.is_some(), entry.provenance == Provenance::Solved, "{}", entry.group());
            let Some(cert) = entry.certificate() else { continue };
            let cert = cert.unwrap();
            assert_eq!(cert.value, entry.value, "{} {}", entry.constant, entry.group());
            assert_eq!(cert.r, entry.r);
            assert_eq!(cert.group.to_string(), entry.group());
            assert!(cert.exhaustive);
            assert!(cert.check(None).unwrap().ok);
        }
    }

    #[test]
    fn cap_and_sequence_entries_agree() {
        // s(Z3^d) = 2 a_d + 1
        for cap in select(Some("cap"), Some(3)) {
            if let Some(s) = lookup_s(&cap.group(), 3) {
                assert_eq!(s.value, 2 * cap.value + 1);
            }
        }
    }

    #[test]
    fn z2_beta_rows() {
        let rows: Vec<(u32, u64)> = select(Some("beta"), Some(2)).iter().map(|e| (e.d, e.value)).collect();
        assert_eq!(rows, vec![(1, 2), (2, 3), (3, 4), (4, 6)]);
    }
}
