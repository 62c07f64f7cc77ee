//! Curve scans: every smooth cubic is run through the Čech–Witt height, the
//! Artin–Mazur oracle and the p-rank formula.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::poly::{var_names, Monomial, Polynomial};
use crate::qfsplit::cubic::cubic_height;
use crate::qfsplit::Height;
use crate::varieties::{abelian_height, am_height_cy, p_rank_elliptic, PlaneCurve};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub curve: String,
    pub p: u32,
    pub n1: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n2: Option<u64>,
    pub trace: i64,
    pub hasse: u32,
    pub p_rank: u32,
    pub height_cech: Height,
    pub height_am: Height,
    pub height_formula: Height,
    pub bound: Option<u32>,
    pub agree: bool,
}

pub fn curve_record(curve: &PlaneCurve, n_max: usize, pole_bound: u32) -> Result<CurveRecord> {
    let pr = p_rank_elliptic(curve)?;
    let (report, _) = cubic_height(curve, n_max, pole_bound)?;
    let am = am_height_cy(&curve.f, 4)?;
    let formula = abelian_height(1, pr.p_rank)?;
    let agree = report.height == am.height
        && report.height == formula
        && matches!(report.height, Height::Finite(1 | 2))
        && am.hasse_nonzero == (pr.hasse != 0);
    Ok(CurveRecord {
        curve: curve.name.clone(),
        p: curve.p,
        n1: pr.n1,
        n2: pr.n2,
        trace: pr.trace,
        hasse: pr.hasse,
        p_rank: pr.p_rank,
        height_cech: report.height,
        height_am: am.height,
        height_formula: formula,
        bound: report.bound,
        agree,
    })
}

fn cubic_monomials() -> Vec<Monomial> {
    (0..=3u32)
        .rev()
        .flat_map(|a| (0..=3 - a).rev().map(move |b| vec![a, b, 3 - a - b]))
        .collect()
}

/// `count` distinct smooth cubics over F_p with random coefficients.
pub fn random_smooth_cubics(p: u32, count: usize, seed: u64) -> Result<Vec<PlaneCurve>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p as u64);
    let vars = var_names(&["x", "y", "z"]);
    let monos = cubic_monomials();
    let mut out: Vec<PlaneCurve> = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count {
        attempts += 1;
        let terms: Vec<(Monomial, u32)> = monos.iter().map(|m| (m.clone(), rng.gen_range(0..p))).collect();
        let f = Polynomial::from_terms(p, &vars, terms);
        let Ok(c) = PlaneCurve::new(format!("{f}"), f) else {
            continue;
        };
        if out.iter().any(|o| o.f == c.f) || !c.is_smooth()? {
            continue;
        }
        out.push(c);
    }
    Ok(out)
}
