//! Quasi-F-split heights of smooth plane cubics by Čech–Witt cohomology.
//!
//! After a linear change of coordinates with f(0, 0, 1) ≠ 0 the curve is
//! covered by U_0 = {x ≠ 0} and U_1 = {y ≠ 0}. In the chart x = 1,
//! O(U_01) = F_p[y, 1/y][z]/(f(1, y, z)) has basis y^β z^b (b < 3); O(U_0)
//! is spanned by β ≥ 0 and O(U_1) by β ≤ −b. The only basis monomial in
//! neither is η = z²/y, which generates H^1(O_X).
//!
//! W̄_n(R) is F_p on the generators V^j[e] modulo digits(V^{j+1}[e^p]).
//! Relations coming from monomials of O(U_0) or O(U_1) stay inside those
//! subrings, so H^1(W̄_n O_X) = F_p^n / span π(digits(V^{j+1}[η^p])), where π
//! reads off the V^j[η] digits. X is n-quasi-F-split iff π(digits([η^p]))
//! is nonzero there.

use serde::{Deserialize, Serialize};

use super::{Height, HeightReport, LevelVerdict, Method};
use crate::error::{Error, Result};
use crate::field;
use crate::linalg::Echelon;
use crate::poly::{Monomial, Polynomial};
use crate::varieties::PlaneCurve;
use crate::witt::{BasedRing, CoeffRing, WittRing, WittVector};

pub const DEFAULT_POLE_BOUND: u32 = 6;
pub const MAX_POLE_BOUND: u32 = 24;
pub const MAX_LEVEL: usize = 3;
const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Monomial y^β z^b.
pub type Key = (i32, u8);

/// Laurent element Σ c[i][b] y^{lo+i} z^b, trimmed at both ends.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LElem {
    lo: i32,
    c: Vec<[u32; 3]>,
}

impl LElem {
    fn trimmed(mut lo: i32, mut c: Vec<[u32; 3]>) -> Self {
        while c.last().is_some_and(|r| *r == [0; 3]) {
            c.pop();
        }
        let lead = c.iter().take_while(|r| **r == [0; 3]).count();
        if lead == c.len() {
            return Self::default();
        }
        c.drain(..lead);
        lo += lead as i32;
        Self { lo, c }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Key, u32)> + '_ {
        self.c.iter().enumerate().flat_map(move |(i, r)| {
            (0..3u8)
                .filter(move |&b| r[b as usize] != 0)
                .map(move |b| ((self.lo + i as i32, b), r[b as usize]))
        })
    }
}

/// O(U_01) for f(1, y, z) = c3 z^3 + g2 z^2 + g1 z + g0.
#[derive(Clone, Debug)]
pub struct CubicChart {
    p: u32,
    neg_c3_inv: u32,
    /// g[k][i]: coefficient of y^i z^k.
    g: [Vec<u32>; 3],
}

impl CubicChart {
    pub fn new(f: &Polynomial) -> Result<Self> {
        let p = f.p;
        let c3 = f.coeff(&[0, 0, 3]);
        if c3 == 0 {
            return Err(Error::Invalid("chart needs f(0, 0, 1) ≠ 0".into()));
        }
        let mut g: [Vec<u32>; 3] = [vec![0; 4], vec![0; 4], vec![0; 4]];
        for (m, c) in f.terms() {
            if m[2] < 3 {
                g[m[2] as usize][m[1] as usize] = c;
            }
        }
        Ok(Self {
            p,
            neg_c3_inv: field::neg(field::inv(c3, p), p),
            g,
        })
    }

    pub fn monomial(&self, key: Key) -> LElem {
        let mut r = [0; 3];
        r[key.1 as usize] = 1;
        LElem { lo: key.0, c: vec![r] }
    }

    pub fn eta(&self) -> Key {
        (-1, 2)
    }

    pub fn in_r0(key: Key) -> bool {
        key.0 >= 0
    }

    pub fn in_r1(key: Key) -> bool {
        key.0 <= -(key.1 as i32)
    }

    fn combine(&self, a: &LElem, b: &LElem, sign: bool) -> LElem {
        if a.c.is_empty() {
            return if sign { b.clone() } else { self.scale(b, self.p - 1) };
        }
        if b.c.is_empty() {
            return a.clone();
        }
        let lo = a.lo.min(b.lo);
        let hi = (a.lo + a.c.len() as i32).max(b.lo + b.c.len() as i32);
        let mut c = vec![[0u32; 3]; (hi - lo) as usize];
        for (i, r) in a.c.iter().enumerate() {
            c[(a.lo - lo) as usize + i] = *r;
        }
        for (i, r) in b.c.iter().enumerate() {
            let row = &mut c[(b.lo - lo) as usize + i];
            for k in 0..3 {
                row[k] = if sign {
                    field::add(row[k], r[k], self.p)
                } else {
                    field::sub(row[k], r[k], self.p)
                };
            }
        }
        LElem::trimmed(lo, c)
    }
}

impl CoeffRing for CubicChart {
    type Elem = LElem;

    fn char_p(&self) -> u32 {
        self.p
    }
    fn zero(&self) -> LElem {
        LElem::default()
    }
    fn one(&self) -> LElem {
        self.monomial((0, 0))
    }
    fn add(&self, a: &LElem, b: &LElem) -> LElem {
        self.combine(a, b, true)
    }
    fn sub(&self, a: &LElem, b: &LElem) -> LElem {
        self.combine(a, b, false)
    }
    fn mul(&self, a: &LElem, b: &LElem) -> LElem {
        if a.c.is_empty() || b.c.is_empty() {
            return LElem::default();
        }
        let p = self.p as u64;
        // rows up to z^4, with headroom for the reduction
        let len = a.c.len() + b.c.len() + 8;
        let mut t = vec![[0u64; 5]; len];
        for (i, ra) in a.c.iter().enumerate() {
            for (j, rb) in b.c.iter().enumerate() {
                let row = &mut t[i + j];
                for (x, &u) in ra.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (y, &v) in rb.iter().enumerate() {
                        row[x + y] += u as u64 * v as u64;
                    }
                }
            }
        }
        // z^k = −c3^{-1}(g2 z^{k−1} + g1 z^{k−2} + g0 z^{k−3}) for k = 4, 3
        let nc = self.neg_c3_inv as u64;
        for k in (3..5).rev() {
            for i in 0..len {
                let top = t[i][k] % p;
                if top == 0 {
                    continue;
                }
                t[i][k] = 0;
                let s = top * nc % p;
                for (deg, gk) in self.g.iter().enumerate() {
                    for (e, &gc) in gk.iter().enumerate() {
                        if gc != 0 {
                            t[i + e][k - 3 + deg] += s * gc as u64 % p;
                        }
                    }
                }
            }
        }
        let c: Vec<[u32; 3]> = t
            .iter()
            .map(|r| [(r[0] % p) as u32, (r[1] % p) as u32, (r[2] % p) as u32])
            .collect();
        LElem::trimmed(a.lo + b.lo, c)
    }
    fn scale(&self, a: &LElem, c: u32) -> LElem {
        let c = c % self.p;
        LElem::trimmed(
            a.lo,
            a.c.iter().map(|r| r.map(|x| field::mul(x, c, self.p))).collect(),
        )
    }
    fn is_zero(&self, a: &LElem) -> bool {
        a.c.is_empty()
    }
}

impl BasedRing for CubicChart {
    type Key = Key;

    fn support(&self, a: &LElem) -> Vec<(Key, u32)> {
        a.terms().collect()
    }
    fn basis_element(&self, k: &Key) -> LElem {
        self.monomial(*k)
    }
}

/// f(Mv) with M·(0, 0, 1) = P for some P ∉ X(F_p); returns the new cubic and M.
pub fn normalize_chart(f: &Polynomial) -> Result<(Polynomial, [[u32; 3]; 3])> {
    let p = f.p;
    let mut point = None;
    'search: for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                let pt = [c, b, a];
                if pt != [0, 0, 0] && f.eval(&pt) != 0 {
                    point = Some(pt);
                    break 'search;
                }
            }
        }
    }
    let pt = point.ok_or_else(|| Error::Invalid("cubic vanishes on all of P^2(F_p)".into()))?;
    let k = (0..3).rev().find(|&i| pt[i] != 0).expect("nonzero point");
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let mut m = [[0u32; 3]; 3];
    m[others[0]][0] = 1;
    m[others[1]][1] = 1;
    for i in 0..3 {
        m[i][2] = pt[i];
    }
    Ok((substitute(f, &m), m))
}

/// f(Mv).
pub fn substitute(f: &Polynomial, m: &[[u32; 3]; 3]) -> Polynomial {
    let p = f.p;
    let images: Vec<Polynomial> = (0..3)
        .map(|i| {
            let terms: Vec<(Monomial, u32)> = (0..3)
                .filter(|&j| m[i][j] != 0)
                .map(|j| {
                    let mut e = vec![0; 3];
                    e[j] = 1;
                    (e, m[i][j])
                })
                .collect();
            Polynomial::from_terms(p, &f.variables, terms)
        })
        .collect();
    f.compose(&images)
}

type SignedDigits = Vec<Vec<(Key, i64)>>;

/// Witness that F(η) is a coboundary at level n: [η^p] = w0 − w1 + p·y with
/// w0 ∈ W_n(O(U_0)), w1 ∈ W_n(O(U_1)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coboundary {
    pub w0: Vec<Vec<(Key, u32)>>,
    pub w1: Vec<Vec<(Key, u32)>>,
    pub y: Vec<Vec<(Key, u32)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum LevelClass {
    /// π(F η) ∉ span of the relation projections.
    Nonzero {
        class: Vec<u32>,
        relation_rank: usize,
        augmented_rank: usize,
    },
    Zero { combination: Vec<u32>, coboundary: Coboundary },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicLevel {
    pub n: usize,
    pub bound: u32,
    pub class: LevelClass,
}

/// Čech–Witt data for one cubic in normalized coordinates.
pub struct CechWitt {
    chart: CubicChart,
}

/// Least B with every digit at slot j of size |β| + b ≤ B·p^j.
fn needed_bound(d: &[Vec<(Key, u32)>], p: u32) -> u32 {
    d.iter()
        .enumerate()
        .flat_map(|(j, level)| {
            let scale = (p as i64).pow(j as u32);
            level
                .iter()
                .map(move |((beta, b), _)| (beta.abs() as i64 + *b as i64 + scale - 1) / scale)
        })
        .max()
        .unwrap_or(0) as u32
}

impl CechWitt {
    pub fn new(normalized: &Polynomial) -> Result<Self> {
        Ok(Self {
            chart: CubicChart::new(normalized)?,
        })
    }

    pub fn chart(&self) -> &CubicChart {
        &self.chart
    }

    fn project(&self, d: &[Vec<(Key, u32)>], n: usize) -> Vec<u32> {
        let eta = self.chart.eta();
        (0..n)
            .map(|j| {
                d.get(j)
                    .and_then(|lvl| lvl.iter().find(|(k, _)| *k == eta).map(|(_, c)| *c))
                    .unwrap_or(0)
            })
            .collect()
    }

    /// Decide the class of F(η) in H^1(W̄_n O_X); errors with
    /// `BoundInconclusive` if some digit exceeds the pole bound B·p^j.
    pub fn level(&self, n: usize, bound: u32) -> Result<CubicLevel> {
        let ch = &self.chart;
        let p = ch.p;
        let ring = WittRing::new(ch, n)?;
        let eta_p = ch.pow(&ch.monomial(ch.eta()), p as u64);
        let t = ring.teichmuller(&eta_p);
        let fd = ring.digits(&t);
        let rels: Vec<_> = (0..n.saturating_sub(1))
            .map(|j| Ok(ring.digits(&ring.v_pow(&t, j + 1)?)))
            .collect::<Result<_>>()?;
        let needed = std::iter::once(&fd).chain(&rels).map(|d| needed_bound(d, p)).max().unwrap_or(0);
        if needed > bound {
            return Err(Error::BoundInconclusive { bound, level: n, needed });
        }
        let class = self.project(&fd, n);
        let mut ech = Echelon::new(p, n);
        let mut basis_rows = Vec::new();
        for d in &rels {
            let v = self.project(d, n);
            if ech.insert(v.clone()) {
                basis_rows.push(v);
            }
        }
        let relation_rank = ech.rank();
        let Some(combo) = express_in(&basis_rows, &rels.iter().map(|d| self.project(d, n)).collect::<Vec<_>>(), &class, p) else {
            return Ok(CubicLevel {
                n,
                bound,
                class: LevelClass::Nonzero {
                    class,
                    relation_rank,
                    augmented_rank: relation_rank + 1,
                },
            });
        };
        let coboundary = self.coboundary(&ring, &t, &fd, &rels, &combo)?;
        Ok(CubicLevel {
            n,
            bound,
            class: LevelClass::Zero {
                combination: combo,
                coboundary,
            },
        })
    }

    fn coboundary(
        &self,
        ring: &WittRing<'_, CubicChart>,
        t: &WittVector<LElem>,
        fd: &[Vec<(Key, u32)>],
        rels: &[Vec<Vec<(Key, u32)>>],
        combo: &[u32],
    ) -> Result<Coboundary> {
        let ch = &self.chart;
        let p = ch.p as i64;
        let n = ring.n();
        // c' = digits([η^p]) − Σ λ_j digits(V^{j+1}[η^p]) as integers
        let mut cp: SignedDigits = vec![Vec::new(); n];
        let mut push = |lvl: usize, k: Key, c: i64| {
            if let Some(e) = cp[lvl].iter_mut().find(|(kk, _)| *kk == k) {
                e.1 += c;
            } else {
                cp[lvl].push((k, c));
            }
        };
        for (j, level) in fd.iter().enumerate() {
            for (k, c) in level {
                push(j, *k, *c as i64);
            }
        }
        for (lambda, d) in combo.iter().zip(rels) {
            for (j, level) in d.iter().enumerate() {
                for (k, c) in level {
                    push(j, *k, -(*lambda as i64) * *c as i64);
                }
            }
        }
        let eta = ch.eta();
        let mut w0 = ring.zero();
        let mut big_w1 = ring.zero();
        let mut y = ring.zero();
        for (j, level) in cp.iter().enumerate() {
            for (k, c) in level {
                if *c == 0 {
                    continue;
                }
                let term = ring.v_pow(&ring.int_mul(&ring.teichmuller(&ch.monomial(*k)), *c), j)?;
                if *k == eta {
                    debug_assert_eq!(c.rem_euclid(p), 0);
                    let m = ring.v_pow(&ring.int_mul(&ring.teichmuller(&ch.monomial(eta)), c / p), j)?;
                    y = ring.add(&y, &m)?;
                } else if CubicChart::in_r0(*k) {
                    w0 = ring.add(&w0, &term)?;
                } else {
                    debug_assert!(CubicChart::in_r1(*k));
                    big_w1 = ring.add(&big_w1, &term)?;
                }
            }
        }
        for (j, lambda) in combo.iter().enumerate() {
            let m = ring.v_pow(&ring.int_mul(&ring.teichmuller(&ch.monomial(eta)), *lambda as i64), j)?;
            y = ring.add(&y, &m)?;
        }
        let w1 = ring.neg(&big_w1);
        let cob = Coboundary {
            w0: w0.coords.iter().map(|c| ch.support(c)).collect(),
            w1: w1.coords.iter().map(|c| ch.support(c)).collect(),
            y: y.coords.iter().map(|c| ch.support(c)).collect(),
        };
        if !self.verify_coboundary(ring, t, &cob)? {
            return Err(Error::WitnessInvalid("coboundary does not replay".into()));
        }
        Ok(cob)
    }

    /// [η^p] = w0 − w1 + p·y with w0 over O(U_0), w1 over O(U_1).
    pub fn verify_coboundary(&self, ring: &WittRing<'_, CubicChart>, t: &WittVector<LElem>, cob: &Coboundary) -> Result<bool> {
        let ch = &self.chart;
        let build = |c: &[Vec<(Key, u32)>]| -> WittVector<LElem> {
            WittVector {
                coords: c
                    .iter()
                    .map(|lvl| {
                        lvl.iter()
                            .fold(ch.zero(), |acc, (k, v)| ch.add(&acc, &ch.scale(&ch.monomial(*k), *v)))
                    })
                    .collect(),
            }
        };
        let supported = |c: &[Vec<(Key, u32)>], pred: fn(Key) -> bool| c.iter().flatten().all(|(k, _)| pred(*k));
        if !supported(&cob.w0, CubicChart::in_r0) || !supported(&cob.w1, CubicChart::in_r1) {
            return Ok(false);
        }
        let (w0, w1, y) = (build(&cob.w0), build(&cob.w1), build(&cob.y));
        let rhs = ring.add(&ring.sub(&w0, &w1)?, &ring.p_times(&y))?;
        Ok(&rhs == t)
    }
}

// coefficients λ with Σ λ_j rels[j] = target, if any
fn express_in(_basis: &[Vec<u32>], rels: &[Vec<u32>], target: &[u32], p: u32) -> Option<Vec<u32>> {
    let n = target.len();
    if target.iter().all(|&x| x == 0) {
        return Some(vec![0; rels.len()]);
    }
    if rels.is_empty() {
        return None;
    }
    let m = crate::linalg::FpMatrix::from_columns(p, rels, n);
    crate::linalg::solve_linear(&m, target)
}

fn check_input(curve: &PlaneCurve, n_max: usize) -> Result<()> {
    if !SUPPORTED_PRIMES.contains(&curve.p) {
        return Err(Error::InvalidPrime(curve.p));
    }
    if n_max == 0 || n_max > MAX_LEVEL {
        return Err(Error::CapExceeded {
            what: "cubic height level",
            value: n_max as u64,
            cap: MAX_LEVEL as u64,
        });
    }
    if curve.degree() != 3 || !curve.is_smooth()? {
        return Err(Error::NotSmooth {
            p: curve.p,
            degree: curve.degree(),
        });
    }
    Ok(())
}

/// One level with the pole-bound schedule B, 2B, … ≤ 24.
pub fn cubic_level(cw: &CechWitt, n: usize, pole_bound: u32) -> Result<CubicLevel> {
    let mut bound = pole_bound.max(1);
    loop {
        match cw.level(n, bound) {
            Err(Error::BoundInconclusive { .. }) if bound * 2 <= MAX_POLE_BOUND => bound *= 2,
            other => return other,
        }
    }
}

/// Least n ≤ n_max at which F(η) stays nonzero in H^1(W̄_n O_X).
pub fn cubic_height(curve: &PlaneCurve, n_max: usize, pole_bound: u32) -> Result<(HeightReport, Vec<CubicLevel>)> {
    check_input(curve, n_max)?;
    let (g, m) = normalize_chart(&curve.f)?;
    let cw = CechWitt::new(&g)?;
    let mut report = HeightReport {
        subject: curve.name.clone(),
        method: Method::CechWitt,
        height: Height::Above(n_max as u32),
        n_max,
        bound: None,
        witness: None,
        certificate: None,
        levels: Vec::new(),
        notes: vec![format!("chart transform {m:?}")],
    };
    let mut details = Vec::new();
    for n in 1..=n_max {
        let lvl = cubic_level(&cw, n, pole_bound)?;
        report.bound = Some(lvl.bound);
        let (split, evidence) = match &lvl.class {
            LevelClass::Nonzero {
                relation_rank,
                augmented_rank,
                ..
            } => (
                true,
                format!("F(eta) nonzero: relation rank {relation_rank}, augmented {augmented_rank}"),
            ),
            LevelClass::Zero { .. } => (false, "F(eta) zero: explicit coboundary verified".to_string()),
        };
        report.levels.push(LevelVerdict { n, split, evidence });
        details.push(lvl);
        if split {
            report.height = Height::Finite(n as u32);
            break;
        }
    }
    Ok((report, details))
}
