use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::dieudonne::SigmaTwist;
use crate::error::Result;
use crate::homology::{FinAbGroup, Homology, IntMatrix, Tower, TowerLimit};
use crate::specseq::DegenerationCertificate;

/// A named assertion evaluated during a computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

/// One degree's tower: the groups at each level and its limit (or why the
/// limit was not reached).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerData {
    /// What the levels are indexed by ("N" for coefficient truncation, "n"
    /// for the group tower).
    pub index: String,
    pub levels: Vec<FinAbGroup>,
    pub limit: Option<TowerLimit>,
    pub error: Option<String>,
}

impl TowerData {
    pub fn from_tower(index: &str, t: &Tower) -> Self {
        let levels = (0..t.len()).map(|k| t.level(k)).collect();
        let (limit, error) = match t.limit() {
            Ok(l) => (Some(l), None),
            Err(e) => (None, Some(e.to_string())),
        };
        TowerData {
            index: index.to_string(),
            levels,
            limit,
            error,
        }
    }
}

/// H^i_crys(BG) at a coefficient truncation, with towers and limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackCohomologyResult {
    pub kind: String,
    pub p: u64,
    pub truncation: usize,
    /// H^i(BG; W_N).
    pub groups: BTreeMap<i64, FinAbGroup>,
    pub towers: BTreeMap<i64, TowerData>,
    /// Limits of the towers.
    pub stable: BTreeMap<i64, FinAbGroup>,
    pub sigma_twist: Option<SigmaTwist>,
    pub certificate: Option<DegenerationCertificate>,
    pub checks: Vec<Check>,
}

impl StackCohomologyResult {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        let groups: Map<String, Value> = self
            .groups
            .iter()
            .map(|(n, g)| (n.to_string(), group_json(g)))
            .collect();
        let stable: Map<String, Value> = self
            .stable
            .iter()
            .map(|(n, g)| (n.to_string(), group_json(g)))
            .collect();
        let towers: Map<String, Value> = self
            .towers
            .iter()
            .map(|(n, t)| {
                (
                    n.to_string(),
                    json!({
                        "index": t.index,
                        "levels": t.levels.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                        "limit": t.limit.as_ref().map(|l| json!({
                            "group": l.limit.to_string(),
                            "lim1": l.lim1.to_string(),
                            "lim1_reason": l.lim1_reason,
                            "stable_from": l.stable_from,
                        })),
                        "error": t.error,
                    }),
                )
            })
            .collect();
        json!({
            "kind": self.kind,
            "p": self.p,
            "N": self.truncation,
            "groups": groups,
            "stable": stable,
            "towers": towers,
            "sigma_twist": self.sigma_twist,
            "certificate": self.certificate,
            "checks": self.checks,
            "pass": self.pass(),
        })
    }
}

pub(crate) fn group_json(g: &FinAbGroup) -> Value {
    json!({
        "group": g.to_string(),
        "free_rank": g.free_rank,
        "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    })
}

/// Tower of H^n over a sequence of homologies (level k+1 maps to level k
/// through `maps[k]`, a chain map in original coordinates).
pub(crate) fn homology_tower(levels: &[Homology], maps: &[IntMatrix], n: i64) -> Result<Tower> {
    let orders = levels.iter().map(|h| h.at(n).orders).collect();
    let mut ms = Vec::with_capacity(maps.len());
    for k in 0..maps.len() {
        ms.push(crate::homology::induced_map(&levels[k + 1], &levels[k], &maps[k], n)?);
    }
    Tower::new(orders, ms)
}
