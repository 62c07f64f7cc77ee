//! Sparse multivariate polynomials over F_p.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field;

pub type Monomial = Vec<u32>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    // smaller exponent in the last differing variable wins
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub p: u32,
    pub variables: Vec<String>,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(p: u32, variables: &[String]) -> Self {
        Self {
            p,
            variables: variables.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u32, variables: &[String], c: i64) -> Self {
        let mut f = Self::zero(p, variables);
        f.add_term(vec![0; variables.len()], field::from_i64(c, p));
        f
    }

    pub fn monomial(p: u32, variables: &[String], exps: Monomial, c: u32) -> Self {
        let mut f = Self::zero(p, variables);
        f.add_term(exps, c % p);
        f
    }

    pub fn var(p: u32, variables: &[String], i: usize) -> Self {
        let mut e = vec![0; variables.len()];
        e[i] = 1;
        Self::monomial(p, variables, e, 1)
    }

    pub fn from_terms(p: u32, variables: &[String], terms: impl IntoIterator<Item = (Monomial, u32)>) -> Self {
        let mut f = Self::zero(p, variables);
        for (m, c) in terms {
            f.add_term(m, c % p);
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        debug_assert_eq!(m.len(), self.nvars());
        if c == 0 {
            return;
        }
        let p = self.p;
        let old = self.terms.get(&m).copied().unwrap_or(0);
        let new = field::add(old, c, p);
        if new == 0 {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, new);
        }
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, u32)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, &c)| (m, c))
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        Self::from_terms(p, &self.variables, self.terms().map(|(m, v)| (m.clone(), field::mul(v, c, p))))
    }

    pub fn mul_monomial(&self, m: &[u32], c: u32) -> Self {
        let p = self.p;
        Self::from_terms(
            p,
            &self.variables,
            self.terms().map(|(e, v)| {
                (e.iter().zip(m).map(|(a, b)| a + b).collect(), field::mul(v, c, p))
            }),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), field::neg(c, p));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p;
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(m).or_insert(0) += ca as u64 * cb as u64;
            }
        }
        Self {
            p,
            variables: self.variables.clone(),
            terms: acc
                .into_iter()
                .map(|(m, c)| (m, (c % p as u64) as u32))
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::constant(self.p, &self.variables, 1);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Substitute polynomials for the variables.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars());
        let target_vars = &images[0].variables;
        let mut out = Polynomial::zero(self.p, target_vars);
        for (m, c) in self.terms() {
            let mut t = Polynomial::constant(self.p, target_vars, c as i64);
            for (img, &e) in images.iter().zip(m) {
                t = t.mul(&img.pow(e));
            }
            out = out.add(&t);
        }
        out
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let p = self.p;
        Self::from_terms(
            p,
            &self.variables,
            self.terms().filter(|(m, _)| m[var] > 0).map(|(m, c)| {
                let mut e = m.clone();
                e[var] -= 1;
                (e, field::mul(c, m[var] % p, p))
            }),
        )
    }

    /// Evaluate at points of F_p.
    pub fn eval(&self, point: &[u32]) -> u32 {
        let p = self.p;
        self.terms().fold(0, |acc, (m, c)| {
            let v = m
                .iter()
                .zip(point)
                .fold(c, |a, (&e, &x)| field::mul(a, field::pow(x, e as u64, p), p));
            field::add(acc, v, p)
        })
    }

    /// Parse a polynomial such as `y^2*z + x*y*z - x^3 - 2*z^3`.
    pub fn parse(src: &str, variables: &[String], p: u32) -> Result<Self> {
        let err = |msg: String| Error::Parse(format!("{msg} in `{src}`"));
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty polynomial".into()));
        }
        let mut out = Self::zero(p, variables);
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                chunks.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        chunks.push((negative, cur));
        for (neg, term) in chunks {
            if term.is_empty() {
                return Err(err("dangling sign".into()));
            }
            let mut coeff: i64 = 1;
            let mut exps = vec![0u32; variables.len()];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor".into()));
                }
                if let Ok(c) = factor.parse::<i64>() {
                    coeff = coeff
                        .checked_mul(c)
                        .ok_or_else(|| err("coefficient overflow".into()))?;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| err(format!("bad exponent `{e}`")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = variables
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| err(format!("unknown variable `{name}`")))?;
                exps[idx] += e;
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(exps, field::from_i64(coeff, p));
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b.0, a.0));
        for (m, c) in terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .zip(&self.variables)
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

pub fn var_names(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}
