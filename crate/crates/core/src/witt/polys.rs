//! Witt structure polynomials from the ghost recursion over the integers.
//!
//! Variables are x_0..x_{n-1}, y_0..y_{n-1}; index `i` is x_i and `n + i` is y_i.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{cap, Error, Result};
use crate::field;

pub const MAX_N: usize = 5;
pub const MAX_P: u32 = 13;
const MAX_VARS: usize = 2 * MAX_N;
const MAX_TERMS: usize = 2_000_000;

pub type Mon = [u16; MAX_VARS];

/// Sparse polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    terms: HashMap<Mon, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0u16; MAX_VARS];
        m[i] = 1;
        Self::term(m, BigInt::one())
    }

    pub fn term(m: Mon, c: BigInt) -> Self {
        let mut terms = HashMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mon, &BigInt)> {
        self.terms.iter()
    }

    /// Terms in a canonical order.
    pub fn sorted_terms(&self) -> Vec<(Mon, BigInt)> {
        let mut v: Vec<(Mon, BigInt)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        v.sort_by_key(|t| t.0);
        v
    }

    fn add_term(&mut self, m: Mon, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &IntPoly, k: &BigInt) {
        for (m, c) in &other.terms {
            self.add_term(*m, c * k);
        }
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly> {
        let mut out: HashMap<Mon, BigInt> = HashMap::with_capacity(self.len().max(other.len()) * 2);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut m = *a;
                for (x, y) in m.iter_mut().zip(b) {
                    *x += y;
                }
                *out.entry(m).or_default() += ca * cb;
            }
            cap("structure polynomial terms", out.len() as u64, MAX_TERMS as u64)?;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(IntPoly { terms: out })
    }

    /// f^e by repeated multiplication with the (small) base.
    pub fn pow(&self, e: u64) -> Result<IntPoly> {
        let mut r = IntPoly::term([0; MAX_VARS], BigInt::one());
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    /// Exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut terms = HashMap::with_capacity(self.len());
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(*m, q);
        }
        Some(IntPoly { terms })
    }

    pub fn reduce_mod(&self, p: u32) -> ModPoly {
        let pb = BigInt::from(p);
        let mut terms: Vec<ModTerm> = self
            .sorted_terms()
            .into_iter()
            .filter_map(|(m, c)| {
                let r = c.mod_floor(&pb).to_u32().unwrap();
                (r != 0).then(|| ModTerm {
                    coeff: r,
                    factors: m
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(v, &e)| (v as u8, e as u32))
                        .collect(),
                })
            })
            .collect();
        terms.sort_by(|a, b| a.factors.cmp(&b.factors));
        ModPoly { p, terms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModTerm {
    pub coeff: u32,
    pub factors: Vec<(u8, u32)>,
}

/// A structure polynomial reduced mod p, ready for evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModPoly {
    pub p: u32,
    pub terms: Vec<ModTerm>,
}

impl ModPoly {
    /// Drop the terms that are exactly the given variables with coefficient one.
    pub fn without_linear(&self, vars: &[usize]) -> ModPoly {
        let terms = self
            .terms
            .iter()
            .filter(|t| {
                !(t.coeff == 1
                    && t.factors.len() == 1
                    && t.factors[0].1 == 1
                    && vars.contains(&(t.factors[0].0 as usize)))
            })
            .cloned()
            .collect();
        ModPoly { p: self.p, terms }
    }

    /// Evaluate at small integer points mod p (x then y, each of length n).
    pub fn eval_fp(&self, vals: &[u32]) -> u32 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, t| {
            let v = t
                .factors
                .iter()
                .fold(t.coeff, |a, &(i, e)| field::mul(a, field::pow(vals[i as usize], e as u64, p), p));
            field::add(acc, v, p)
        })
    }
}

/// S_0..S_{n-1} and P_0..P_{n-1}, over the integers and mod p.
#[derive(Clone, Debug)]
pub struct WittStructurePolys {
    pub p: u32,
    pub n: usize,
    pub sum_int: Vec<IntPoly>,
    pub prod_int: Vec<IntPoly>,
    pub sum_mod: Vec<ModPoly>,
    pub prod_mod: Vec<ModPoly>,
    /// S_i - x_i - y_i mod p; depends only on coordinates below i.
    pub carry_mod: Vec<ModPoly>,
}

fn x(i: usize) -> usize {
    i
}

fn y(n: usize, i: usize) -> usize {
    n + i
}

/// Ghost component w_i of the vector whose j-th coordinate is variable `var(j)`.
pub fn ghost(p: u32, i: usize, var: impl Fn(usize) -> usize) -> Result<IntPoly> {
    let mut out = IntPoly::zero();
    let pb = BigInt::from(p);
    for j in 0..=i {
        let e = (p as u64).pow((i - j) as u32);
        let mut m = [0u16; MAX_VARS];
        m[var(j)] = e.try_into().map_err(|_| Error::CapExceeded {
            what: "structure polynomial exponent",
            value: e,
            cap: u16::MAX as u64,
        })?;
        out.add_term(m, pb.pow(j as u32));
    }
    Ok(out)
}

/// Table of Q^{p^k}, extended on demand by multiplying with the base.
#[derive(Default)]
pub struct PowerTable {
    rows: Vec<Vec<IntPoly>>,
}

impl PowerTable {
    /// Q_j^{p^k}, where `q` is the sequence being raised.
    pub fn get(&mut self, p: u32, q: &[IntPoly], j: usize, k: usize) -> Result<&IntPoly> {
        while self.rows.len() <= j {
            let idx = self.rows.len();
            self.rows.push(vec![q[idx].clone()]);
        }
        let row = &mut self.rows[j];
        while row.len() <= k {
            let have = (p as u64).pow(row.len() as u32 - 1);
            let mut r = row.last().unwrap().clone();
            for _ in have..have * p as u64 {
                r = r.mul(&q[j])?;
            }
            row.push(r);
        }
        Ok(&self.rows[j][k])
    }
}

/// Σ_{j≤i} p^j Q_j^{p^{i-j}} for an already computed sequence Q.
pub fn ghost_of(p: u32, i: usize, q: &[IntPoly], powers: &mut PowerTable) -> Result<IntPoly> {
    let pb = BigInt::from(p);
    let mut out = IntPoly::zero();
    for j in 0..=i {
        out.add_assign_scaled(powers.get(p, q, j, i - j)?, &pb.pow(j as u32));
    }
    Ok(out)
}

fn recursion(p: u32, n: usize, target: impl Fn(usize) -> Result<IntPoly>) -> Result<Vec<IntPoly>> {
    let pb = BigInt::from(p);
    let mut out: Vec<IntPoly> = Vec::with_capacity(n);
    let mut powers = PowerTable::default();
    for i in 0..n {
        let mut t = target(i)?;
        for j in 0..i {
            let neg = -pb.pow(j as u32);
            t.add_assign_scaled(powers.get(p, &out, j, i - j)?, &neg);
        }
        let d = pb.pow(i as u32);
        out.push(t.div_exact(&d).ok_or(Error::InexactDivision(i))?);
    }
    Ok(out)
}

impl WittStructurePolys {
    /// Compute from scratch (no cache).
    pub fn compute(p: u32, n: usize) -> Result<Self> {
        field::check_prime(p)?;
        cap("Witt length", n as u64, MAX_N as u64)?;
        cap("Witt prime", p as u64, MAX_P as u64)?;
        if n == 0 {
            return Err(Error::Invalid("Witt length must be positive".into()));
        }
        let sum_int = recursion(p, n, |i| {
            let mut t = ghost(p, i, x)?;
            t.add_assign_scaled(&ghost(p, i, |j| y(n, j))?, &BigInt::one());
            Ok(t)
        })?;
        let prod_int = recursion(p, n, |i| ghost(p, i, x)?.mul(&ghost(p, i, |j| y(n, j))?))?;
        Ok(Self::from_int(p, n, sum_int, prod_int))
    }

    pub(crate) fn from_int(p: u32, n: usize, sum_int: Vec<IntPoly>, prod_int: Vec<IntPoly>) -> Self {
        let sum_mod: Vec<ModPoly> = sum_int.iter().map(|f| f.reduce_mod(p)).collect();
        let prod_mod = prod_int.iter().map(|f| f.reduce_mod(p)).collect();
        let carry_mod = sum_mod
            .iter()
            .enumerate()
            .map(|(i, f)| f.without_linear(&[x(i), y(n, i)]))
            .collect();
        Self {
            p,
            n,
            sum_int,
            prod_int,
            sum_mod,
            prod_mod,
            carry_mod,
        }
    }

    /// Symbolic check of w_i(S) = w_i(x) + w_i(y) and w_i(P) = w_i(x) w_i(y).
    pub fn verify_ghost(&self) -> Result<bool> {
        let (p, n) = (self.p, self.n);
        let mut sp = PowerTable::default();
        let mut pp = PowerTable::default();
        for i in 0..n {
            let lhs = ghost_of(p, i, &self.sum_int, &mut sp)?;
            let mut rhs = ghost(p, i, x)?;
            rhs.add_assign_scaled(&ghost(p, i, |j| y(n, j))?, &BigInt::one());
            if lhs != rhs {
                return Ok(false);
            }
            let lhs = ghost_of(p, i, &self.prod_int, &mut pp)?;
            let rhs = ghost(p, i, x)?.mul(&ghost(p, i, |j| y(n, j))?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Largest absolute coefficient over all stored integer polynomials.
    pub fn max_coefficient_bits(&self) -> u64 {
        self.sum_int
            .iter()
            .chain(&self.prod_int)
            .flat_map(|f| f.terms().map(|(_, c)| c.abs().bits()))
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expect(p: u32, n: usize, src: &[(u32, &[(u8, u32)])]) -> ModPoly {
        let _ = n;
        let mut terms: Vec<ModTerm> = src
            .iter()
            .map(|(c, f)| ModTerm {
                coeff: *c,
                factors: f.to_vec(),
            })
            .collect();
        terms.sort_by(|a, b| a.factors.cmp(&b.factors));
        ModPoly { p, terms }
    }

    #[test]
    fn length_one() {
        for p in [2, 3, 5] {
            let w = WittStructurePolys::compute(p, 1).unwrap();
            assert_eq!(w.sum_mod[0], expect(p, 1, &[(1, &[(0, 1)]), (1, &[(1, 1)])]));
            assert_eq!(w.prod_mod[0], expect(p, 1, &[(1, &[(0, 1), (1, 1)])]));
        }
    }

    #[test]
    fn s1_at_two() {
        // x0=0 x1=1 y0=2 y1=3
        let w = WittStructurePolys::compute(2, 2).unwrap();
        let want = expect(2, 2, &[(1, &[(1, 1)]), (1, &[(3, 1)]), (1, &[(0, 1), (2, 1)])]);
        assert_eq!(w.sum_mod[1], want);
    }

    #[test]
    fn s1_at_three() {
        let w = WittStructurePolys::compute(3, 2).unwrap();
        let want = expect(
            3,
            2,
            &[
                (1, &[(1, 1)]),
                (1, &[(3, 1)]),
                (2, &[(0, 2), (2, 1)]),
                (2, &[(0, 1), (2, 2)]),
            ],
        );
        assert_eq!(w.sum_mod[1], want);
    }

    #[test]
    fn ghost_identity_small() {
        for (p, n) in [(2, 3), (3, 3), (5, 2)] {
            assert!(WittStructurePolys::compute(p, n).unwrap().verify_ghost().unwrap());
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(
            WittStructurePolys::compute(17, 2),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            WittStructurePolys::compute(2, 6),
            Err(Error::CapExceeded { .. })
        ));
    }
}
