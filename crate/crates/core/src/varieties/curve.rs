//! Plane cubics (and quartic curves) over F_p: smoothness, point counts,
//! Hasse invariants and p-ranks.

use serde::{Deserialize, Serialize};

use super::gf::Gf;
use crate::error::{cap, Error, Result};
use crate::field;
use crate::poly::{var_names, Monomial, Polynomial};

/// Cap on q^2 for enumerating the projective plane over F_q.
pub const MAX_PLANE_POINTS: u64 = 100_000_000;
/// Extension degrees searched for singular points.
pub const SMOOTHNESS_SEARCH: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    pub name: String,
    pub p: u32,
    pub f: Polynomial,
}

impl PlaneCurve {
    pub fn new(name: impl Into<String>, f: Polynomial) -> Result<Self> {
        let p = f.p;
        field::check_prime(p)?;
        if f.nvars() != 3 || f.is_zero() || !f.is_homogeneous() || !(3..=4).contains(&f.total_degree()) {
            return Err(Error::Parse("expected a nonzero homogeneous cubic or quartic in x, y, z".into()));
        }
        Ok(Self { name: name.into(), p, f })
    }

    pub fn parse(src: &str, p: u32) -> Result<Self> {
        let f = Polynomial::parse(src, &var_names(&["x", "y", "z"]), p)?;
        Self::new(src.trim(), f)
    }

    /// y^2z + a1xyz + a3yz^2 = x^3 + a2x^2z + a4xz^2 + a6z^3.
    pub fn weierstrass(p: u32, a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(|c| field::from_i64(c, p));
        let terms: Vec<(Monomial, u32)> = vec![
            (vec![0, 2, 1], 1),
            (vec![1, 1, 1], a1),
            (vec![0, 1, 2], a3),
            (vec![3, 0, 0], field::neg(1, p)),
            (vec![2, 0, 1], field::neg(a2, p)),
            (vec![1, 0, 2], field::neg(a4, p)),
            (vec![0, 0, 3], field::neg(a6, p)),
        ];
        let f = Polynomial::from_terms(p, &var_names(&["x", "y", "z"]), terms);
        let name = format!("{f}");
        Self::new(name, f)
    }

    pub fn degree(&self) -> u32 {
        self.f.total_degree()
    }

    /// A common zero of f and its partials over F_{p^m}, m ≤ 3.
    pub fn singular_point(&self) -> Result<Option<(u32, [u32; 3])>> {
        let partials: Vec<Polynomial> = (0..3).map(|i| self.f.derivative(i)).collect();
        for m in 1..=SMOOTHNESS_SEARCH {
            let gf = Gf::new(self.p, m)?;
            let evals: Vec<Evaluator> = std::iter::once(&self.f)
                .chain(&partials)
                .map(|g| Evaluator::new(g, &gf))
                .collect();
            let found = projective_points(&gf)?.find(|pt| evals.iter().all(|e| e.eval(&gf, pt) == 0));
            if let Some(pt) = found {
                return Ok(Some((m, pt)));
            }
        }
        Ok(None)
    }

    pub fn is_smooth(&self) -> Result<bool> {
        Ok(self.singular_point()?.is_none())
    }

    /// Number of points over F_{p^m}.
    pub fn count_points(&self, m: u32) -> Result<u64> {
        let gf = Gf::new(self.p, m)?;
        let e = Evaluator::new(&self.f, &gf);
        Ok(projective_points(&gf)?.filter(|pt| e.eval(&gf, pt) == 0).count() as u64)
    }
}

struct Evaluator {
    terms: Vec<(u32, Monomial)>,
}

impl Evaluator {
    fn new(f: &Polynomial, gf: &Gf) -> Self {
        Self {
            terms: f.terms().map(|(m, c)| (gf.embed(c), m.clone())).collect(),
        }
    }

    fn eval(&self, gf: &Gf, pt: &[u32; 3]) -> u32 {
        self.terms.iter().fold(0, |acc, (c, m)| {
            let t = (0..3).fold(*c, |t, i| gf.mul(t, gf.pow(pt[i], m[i] as u64)));
            gf.add(acc, t)
        })
    }
}

fn projective_points(gf: &Gf) -> Result<impl Iterator<Item = [u32; 3]>> {
    let q = gf.size();
    cap("projective plane points", (q as u64) * (q as u64), MAX_PLANE_POINTS)?;
    let affine = (0..q).flat_map(move |x| (0..q).map(move |y| [x, y, 1]));
    let line = (0..q).map(|x| [x, 1, 0]);
    Ok(affine.chain(line).chain(std::iter::once([1, 0, 0])))
}

/// Coefficient of (x_0⋯x_n)^{p−1} in f^{p−1}, for f of degree n + 1.
pub fn hasse_invariant(f: &Polynomial) -> u32 {
    let p = f.p;
    let target: Monomial = vec![p - 1; f.nvars()];
    f.pow(p - 1).coeff(&target)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PRankRecord {
    pub curve: String,
    pub p: u32,
    pub n1: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n2: Option<u64>,
    pub trace: i64,
    pub hasse: u32,
    pub p_rank: u32,
}

fn within_hasse_bound(n: u64, q: u64) -> bool {
    let d = n as i128 - q as i128 - 1;
    d * d <= 4 * q as i128
}

/// 1 for ordinary, 0 for supersingular; trace and Hasse invariant must agree.
pub fn p_rank_elliptic(curve: &PlaneCurve) -> Result<PRankRecord> {
    let p = curve.p;
    if curve.degree() != 3 || !curve.is_smooth()? {
        return Err(Error::NotSmooth {
            p,
            degree: curve.degree(),
        });
    }
    let n1 = curve.count_points(1)?;
    let q = p as u64;
    if !within_hasse_bound(n1, q) {
        return Err(Error::MethodDisagreement(format!("{} points violate the Hasse bound", n1)));
    }
    let trace = q as i64 + 1 - n1 as i64;
    let mut n2 = None;
    if p <= 3 {
        // #E(F_{p^2}) = p^2 + 1 − (a^2 − 2p)
        let count = curve.count_points(2)?;
        let predicted = (q * q + 1) as i64 - (trace * trace - 2 * q as i64);
        if count as i64 != predicted || !within_hasse_bound(count, q * q) {
            return Err(Error::MethodDisagreement(format!(
                "{}: #E(F_{}) = {count}, trace predicts {predicted}",
                curve.name,
                q * q
            )));
        }
        n2 = Some(count);
    }
    let ordinary = trace.rem_euclid(p as i64) != 0;
    let hasse = hasse_invariant(&curve.f);
    if ordinary != (hasse != 0) {
        return Err(Error::MethodDisagreement(format!(
            "{}: trace {trace} but Hasse invariant {hasse}",
            curve.name
        )));
    }
    Ok(PRankRecord {
        curve: curve.name.clone(),
        p,
        n1,
        n2,
        trace,
        hasse,
        p_rank: ordinary as u32,
    })
}
