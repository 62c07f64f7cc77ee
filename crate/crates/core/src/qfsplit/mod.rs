//! Decision procedures for F-splitting and n-quasi-F-splitting.

mod artinian;
pub mod cubic;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::FpMatrix;

pub use artinian::{height_artinian, is_f_split, is_quasi_f_split, lift_witness, validate_f_split, validate_quasi_f_split};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitKind {
    FSplit,
    QuasiFSplit,
}

/// A retraction φ of F: A → F_*W̄_n(A) (or F_*A for kind `FSplit`),
/// as a matrix from W̄_n-coordinates to A-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingWitness {
    pub kind: SplitKind,
    pub n: usize,
    pub phi: FpMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum NonSplitCertificate {
    /// x ≠ 0 with F(x) = [x^p] = 0 in W̄_n.
    FrobeniusKernel {
        n: usize,
        x: Vec<u32>,
        x_display: String,
    },
    /// The affine system for φ has no solution.
    LinearSystemInconsistent {
        n: usize,
        unknowns: usize,
        equations: usize,
        rank: usize,
        augmented_rank: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Decision {
    Split { witness: SplittingWitness },
    NotSplit { certificate: NonSplitCertificate },
}

impl Decision {
    pub fn is_split(&self) -> bool {
        matches!(self, Decision::Split { .. })
    }

    pub fn witness(&self) -> Option<&SplittingWitness> {
        match self {
            Decision::Split { witness } => Some(witness),
            Decision::NotSplit { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&NonSplitCertificate> {
        match self {
            Decision::Split { .. } => None,
            Decision::NotSplit { certificate } => Some(certificate),
        }
    }
}

/// Quasi-F-split height: a level, "above the search bound", or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Height {
    Finite(u32),
    Above(u32),
    Infinite,
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Above(h) => write!(f, ">{h}"),
            Height::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Height {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "inf" || s == "∞" || s == "infinity" {
            return Ok(Height::Infinite);
        }
        if let Some(r) = s.strip_prefix('>') {
            return r.parse().map(Height::Above).map_err(|_| format!("bad height `{s}`"));
        }
        s.parse().map(Height::Finite).map_err(|_| format!("bad height `{s}`"))
    }
}

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Height::Finite(h) => s.serialize_u32(*h),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Height {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(h) => Ok(Height::Finite(h)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ArtinianDecision,
    CechWitt,
    PRankFormula,
    AmOracle,
}

/// Verdict at one level of a height search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelVerdict {
    pub n: usize,
    pub split: bool,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightReport {
    pub subject: String,
    pub method: Method,
    pub height: Height,
    pub n_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SplittingWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<NonSplitCertificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_serialization() {
        for (h, s) in [
            (Height::Finite(2), "2"),
            (Height::Above(3), "\">3\""),
            (Height::Infinite, "\"inf\""),
        ] {
            assert_eq!(serde_json::to_string(&h).unwrap(), s);
            assert_eq!(serde_json::from_str::<Height>(s).unwrap(), h);
        }
        assert_eq!("∞".parse::<Height>().unwrap(), Height::Infinite);
    }
}
