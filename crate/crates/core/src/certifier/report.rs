use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckResult {
    pub fn new(name: &str, passed: bool, witness: Value) -> Self {
        CheckResult {
            name: name.to_string(),
            status: if passed { Status::Pass } else { Status::Fail },
            reason: None,
            witness: Some(witness),
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        CheckResult { name: name.to_string(), status: Status::Skipped, reason: Some(reason.into()), witness: None }
    }

    pub fn failed(name: &str, reason: impl Into<String>) -> Self {
        CheckResult { name: name.to_string(), status: Status::Fail, reason: Some(reason.into()), witness: None }
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Which certified function the report is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `F_h` with `p = 1 mod 4`: `chi` enters on `Gamma_2(p)`.
    #[serde(rename = "F-chi")]
    FChi,
    /// `F_h` with `p = 7 mod 12`.
    #[serde(rename = "F-psi")]
    FPsi,
    /// `G_h` for `p = 11 mod 12`.
    #[serde(rename = "G")]
    G,
    /// `p = 2, 3`: the square map on the multiplicative group.
    #[serde(rename = "small-p")]
    SmallP,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::FChi => "F-chi",
            Branch::FPsi => "F-psi",
            Branch::G => "G",
            Branch::SmallP => "small-p",
        })
    }
}

/// One cusp of `X_2(p)` (`X_1(p)` on the `G` branch) with the order of the
/// certified function there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRow {
    pub a: i64,
    pub c: i64,
    pub width: u64,
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub p: u64,
    pub g: u64,
    pub k: u64,
    pub ell: u64,
    #[serde(rename = "Np")]
    pub np: u64,
    pub degree: u64,
    pub branch: Branch,
    pub checks: Vec<CheckResult>,
    pub cusps: Vec<CuspRow>,
    pub overall: bool,
}

impl CertReport {
    /// True iff no check failed.
    pub fn verdict(checks: &[CheckResult]) -> bool {
        checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
