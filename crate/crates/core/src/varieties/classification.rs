//! Catalogued (non)examples relating F-splitting and quasi-F-splitting to
//! ordinarity and Hodge–Witt-ness. Data, not computation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tristate {
    Yes,
    No,
    Depends,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "condition", rename_all = "kebab-case")]
pub enum QfsStatus {
    FSplit,
    QuasiFSplit,
    NotQuasiFSplit,
    Iff(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub subject: String,
    /// `None` when the row holds for every p in its range.
    pub p: Option<u32>,
    pub ordinary: Tristate,
    pub hodge_witt: Tristate,
    pub qfs_status: QfsStatus,
    pub source: String,
}

pub const SUBJECTS: &[&str] = &[
    "K3",
    "abelian-variety",
    "Enriques",
    "Enriques-classical",
    "Enriques-singular",
    "Enriques-supersingular",
    "rational-threefold-AZ",
    "rational-fourfold-blowup",
];

fn row(subject: &str, p: Option<u32>, ordinary: Tristate, hw: Tristate, qfs: QfsStatus, source: &str) -> ClassificationRow {
    ClassificationRow {
        subject: subject.into(),
        p,
        ordinary,
        hodge_witt: hw,
        qfs_status: qfs,
        source: source.into(),
    }
}

pub fn classification_lookup(subject: &str, p: u32) -> Result<ClassificationRow> {
    use Tristate::*;
    let s = subject.trim();
    let r = match (s, p) {
        ("K3", _) => row(
            "K3",
            None,
            Depends,
            Depends,
            QfsStatus::Iff("quasi-F-split iff Hodge-Witt iff finite Artin-Mazur height".into()),
            "Illusie 1979; finite Artin-Mazur height criterion for Calabi-Yau varieties",
        ),
        ("abelian-variety", _) => row(
            "abelian-variety",
            None,
            Depends,
            Depends,
            QfsStatus::Iff("quasi-F-split iff Hodge-Witt iff p-rank >= g - 1; F-split iff ordinary".into()),
            "Illusie 1979; Ekedahl 1986",
        ),
        ("Enriques", p) if p > 2 => row(
            "Enriques",
            None,
            Yes,
            Yes,
            QfsStatus::Iff("quasi-F-split iff the K3 cover is not supersingular".into()),
            "Illusie 1979; quasi-F-split heights of Enriques surfaces",
        ),
        ("Enriques-classical", 2) => row(s, Some(2), Yes, Yes, QfsStatus::NotQuasiFSplit, "Bombieri-Mumford types; quasi-F-split heights of Enriques surfaces"),
        ("Enriques-singular", 2) => row(s, Some(2), Yes, Yes, QfsStatus::FSplit, "Bombieri-Mumford types; quasi-F-split heights of Enriques surfaces"),
        ("Enriques-supersingular", 2) => row(s, Some(2), No, Yes, QfsStatus::NotQuasiFSplit, "Bombieri-Mumford types; quasi-F-split heights of Enriques surfaces"),
        ("rational-threefold-AZ", _) => row(
            "rational-threefold-AZ",
            None,
            Yes,
            Yes,
            QfsStatus::NotQuasiFSplit,
            "Achinger-Zdanowicz 2017: blowup of P^3 in P^3(F_p), then the strict transforms of the F_p-lines",
        ),
        ("rational-fourfold-blowup", _) => row(
            "rational-fourfold-blowup",
            None,
            No,
            No,
            QfsStatus::FSplit,
            "Joshi-Rajan 2003: blowup of P^4 along a supersingular K3 quartic in a hyperplane",
        ),
        _ => return Err(Error::Uncatalogued(format!("{s} at p = {p}"))),
    };
    Ok(r)
}
