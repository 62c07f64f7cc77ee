//! Finite abelian p-groups ⊕ Z/p^{e_i} and quotients via Smith normal form
//! over Z/p^K.

use serde::{Deserialize, Serialize};

use crate::error::{cap, Error, Result};

/// Largest exponent allowed in an invariant factor.
pub const MAX_EXPONENT: u32 = 6;

pub type GElem = Vec<i128>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PGroup {
    pub p: u32,
    /// Exponents e_i of the cyclic factors Z/p^{e_i}.
    pub exps: Vec<u32>,
}

fn ipow(p: u32, e: u32) -> i128 {
    (p as i128).pow(e)
}

/// p-adic valuation of a nonzero residue.
fn valuation(mut x: i128, p: u32) -> u32 {
    let p = p as i128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not a unit");
    s0.rem_euclid(m)
}

impl PGroup {
    pub fn new(p: u32, exps: Vec<u32>) -> Result<Self> {
        for &e in &exps {
            cap("invariant factor exponent", e as u64, MAX_EXPONENT as u64)?;
        }
        Ok(Self { p, exps })
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    /// log_p of the order.
    pub fn log_order(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn max_exp(&self) -> u32 {
        self.exps.iter().copied().max().unwrap_or(0)
    }

    pub fn modulus(&self, i: usize) -> i128 {
        ipow(self.p, self.exps[i])
    }

    pub fn zero(&self) -> GElem {
        vec![0; self.rank()]
    }

    pub fn basis(&self, i: usize) -> GElem {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn reduce(&self, x: &[i128]) -> GElem {
        x.iter().enumerate().map(|(i, &v)| v.rem_euclid(self.modulus(i))).collect()
    }

    pub fn add(&self, x: &[i128], y: &[i128]) -> GElem {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    pub fn sub(&self, x: &[i128], y: &[i128]) -> GElem {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>())
    }

    pub fn scale(&self, x: &[i128], c: i128) -> GElem {
        self.reduce(&x.iter().map(|a| a * c).collect::<Vec<_>>())
    }

    pub fn is_zero(&self, x: &[i128]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }

    /// Order of an element as a power of p.
    pub fn element_log_order(&self, x: &[i128]) -> u32 {
        let x = self.reduce(x);
        x.iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| self.exps[i] - valuation(v, self.p))
            .max()
            .unwrap_or(0)
    }

    /// Every element, for small groups.
    pub fn elements(&self) -> Vec<GElem> {
        let mut out = vec![Vec::new()];
        for i in 0..self.rank() {
            let m = self.modulus(i);
            out = out
                .into_iter()
                .flat_map(|v: Vec<i128>| {
                    (0..m).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// x·M for a homomorphism given by the images of the generators (rows).
    pub fn apply(&self, target: &PGroup, m: &[GElem], x: &[i128]) -> GElem {
        let mut out = vec![0i128; target.rank()];
        for (xi, row) in x.iter().zip(m) {
            if *xi == 0 {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                *o += xi * r;
            }
        }
        target.reduce(&out)
    }

    /// Check that the rows define a homomorphism into `target`.
    pub fn is_hom(&self, target: &PGroup, m: &[GElem]) -> bool {
        m.len() == self.rank()
            && m.iter()
                .enumerate()
                .all(|(i, row)| row.len() == target.rank() && target.is_zero(&target.scale(row, self.modulus(i))))
    }
}

/// G / ⟨rels⟩ with the projection and a set-theoretic section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: PGroup,
    /// Rows: image of each generator of G in the quotient.
    pub proj: Vec<GElem>,
    /// Rows: a preimage in G of each generator of the quotient.
    pub lift: Vec<GElem>,
}

impl Quotient {
    pub fn project(&self, source: &PGroup, x: &[i128]) -> GElem {
        source.apply(&self.group, &self.proj, x)
    }
}

/// Invariant-factor form of G/⟨rels⟩, generators sorted by increasing order.
pub fn quotient(g: &PGroup, rels: &[GElem]) -> Result<Quotient> {
    let p = g.p;
    let r = g.rank();
    let k = g.max_exp();
    if r == 0 || k == 0 {
        return Ok(Quotient {
            group: PGroup { p, exps: vec![] },
            proj: vec![vec![]; r],
            lift: vec![],
        });
    }
    let modk = ipow(p, k);
    let mut mat: Vec<Vec<i128>> = rels.iter().map(|v| v.iter().map(|x| x.rem_euclid(modk)).collect()).collect();
    for i in 0..r {
        if g.exps[i] < k {
            let mut row = vec![0; r];
            row[i] = g.modulus(i);
            mat.push(row);
        }
    }
    // q: columns transform coordinates; qi = q^{-1}
    let mut q: Vec<Vec<i128>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i128).collect()).collect();
    let mut qi = q.clone();
    let rows = mat.len();
    let mut diag: Vec<u32> = Vec::new();
    for t in 0..r.min(rows) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in mat.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 {
                    let val = valuation(v, p);
                    if best.is_none_or(|b| val < b.0) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((val, bi, bj)) = best else { break };
        mat.swap(t, bi);
        if bj != t {
            for row in mat.iter_mut() {
                row.swap(t, bj);
            }
            for row in q.iter_mut() {
                row.swap(t, bj);
            }
            qi.swap(t, bj);
        }
        let unit = mat[t][t] / ipow(p, val);
        let w = inv_mod(unit, modk);
        for row in mat.iter_mut() {
            row[t] = (row[t] * w).rem_euclid(modk);
        }
        for row in q.iter_mut() {
            row[t] = (row[t] * w).rem_euclid(modk);
        }
        for x in qi[t].iter_mut() {
            *x = (*x * unit).rem_euclid(modk);
        }
        let piv = ipow(p, val);
        debug_assert_eq!(mat[t][t], piv);
        let pivot_row = mat[t].clone();
        for row in mat.iter_mut().skip(t + 1) {
            if row[t] != 0 {
                let c = row[t] / piv;
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x - c * y).rem_euclid(modk);
                }
            }
        }
        for j in t + 1..r {
            let v = mat[t][j];
            if v != 0 {
                let c = v / piv;
                for row in mat.iter_mut() {
                    row[j] = (row[j] - c * row[t]).rem_euclid(modk);
                }
                for row in q.iter_mut() {
                    row[j] = (row[j] - c * row[t]).rem_euclid(modk);
                }
                let rj = qi[j].clone();
                for (x, y) in qi[t].iter_mut().zip(&rj) {
                    *x = (*x + c * y).rem_euclid(modk);
                }
            }
        }
        diag.push(val);
    }
    let exps_all: Vec<u32> = (0..r).map(|j| diag.get(j).copied().unwrap_or(k).min(k)).collect();
    let mut keep: Vec<usize> = (0..r).filter(|&j| exps_all[j] > 0).collect();
    keep.sort_by_key(|&j| exps_all[j]);
    let group = PGroup {
        p,
        exps: keep.iter().map(|&j| exps_all[j]).collect(),
    };
    let proj: Vec<GElem> = (0..r)
        .map(|i| group.reduce(&keep.iter().map(|&j| q[i][j]).collect::<Vec<_>>()))
        .collect();
    let lift: Vec<GElem> = keep.iter().map(|&j| g.reduce(&qi[j])).collect();
    let out = Quotient { group, proj, lift };
    debug_assert!(rels.iter().all(|v| out.group.is_zero(&out.project(g, v))));
    debug_assert!((0..out.group.rank()).all(|j| out.project(g, &out.lift[j]) == out.group.basis(j)));
    Ok(out)
}

/// Subgroup of `g` generated by `gens`, as its log-order.
pub fn subgroup_log_order(g: &PGroup, gens: &[GElem]) -> Result<u32> {
    let q = quotient(g, gens)?;
    Ok(g.log_order() - q.group.log_order())
}

/// Invariant-factor form of an arbitrary ⊕ Z/p^{e_i}.
pub fn normal_form(g: &PGroup) -> Result<PGroup> {
    Ok(quotient(g, &[])?.group)
}

pub(crate) fn check_same_prime(a: &PGroup, b: &PGroup) -> Result<()> {
    if a.p != b.p {
        return Err(Error::RingMismatch(format!("primes {} and {}", a.p, b.p)));
    }
    Ok(())
}
