//! Finite-dimensional commutative F_p-algebras given by a monomial basis and
//! a multiplication table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{cap, Error, Result};
use crate::field;
use crate::groebner::{groebner_basis, normal_form, staircase};
use crate::linalg::FpMatrix;
use crate::poly::{Monomial, MonomialOrder, Polynomial};

/// Elements are coordinate vectors in the monomial basis.
pub type Elem = Vec<u32>;

pub const MAX_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub variables: Vec<String>,
    pub relations: Vec<String>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    p: u32,
    name: String,
    variables: Vec<String>,
    basis: Vec<Monomial>,
    // mult[(i * d + j) * d + k] = coefficient of e_k in e_i * e_j
    mult: Vec<u32>,
    unit: Elem,
    generators: Vec<Elem>,
    presentation: Presentation,
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAlgebra({}, dim {})", self.name, self.dim())
    }
}

impl FiniteAlgebra {
    /// F_p[vars]/(relations).
    pub fn from_presentation(variables: &[&str], relations: &[&str], p: u32) -> Result<Self> {
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|r| Polynomial::parse(r, &vars, p))
            .collect::<Result<Vec<_>>>()?;
        Self::from_polynomials(&vars, &rels, p)
    }

    pub fn from_polynomials(variables: &[String], relations: &[Polynomial], p: u32) -> Result<Self> {
        field::check_prime(p)?;
        let order = MonomialOrder::Grevlex;
        let gb = groebner_basis(relations, order)?;
        if gb.iter().any(|g| g.total_degree() == 0) {
            return Err(Error::ZeroAlgebra);
        }
        let basis = staircase(&gb, variables.len(), order)
            .map_err(|v| Error::NotFiniteDimensional(variables[v].clone()))?;
        cap("algebra dimension", basis.len() as u64, MAX_DIM as u64)?;
        let d = basis.len();
        let index = |m: &Monomial| basis.iter().position(|b| b == m);
        let to_elem = |f: &Polynomial| -> Elem {
            let mut v = vec![0; d];
            for (m, c) in f.terms() {
                v[index(m).expect("normal form outside staircase")] = c;
            }
            v
        };
        let mut mult = vec![0u32; d * d * d];
        for i in 0..d {
            for j in i..d {
                let m: Monomial = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                let nf = normal_form(&Polynomial::monomial(p, variables, m, 1), &gb, order);
                let v = to_elem(&nf);
                for k in 0..d {
                    mult[(i * d + j) * d + k] = v[k];
                    mult[(j * d + i) * d + k] = v[k];
                }
            }
        }
        let unit = to_elem(&Polynomial::constant(p, variables, 1));
        let generators = (0..variables.len())
            .map(|v| to_elem(&normal_form(&Polynomial::var(p, variables, v), &gb, order)))
            .collect();
        let presentation = Presentation {
            variables: variables.to_vec(),
            relations: relations.iter().map(|r| r.to_string()).collect(),
        };
        let name = if variables.is_empty() {
            format!("F_{p}")
        } else {
            format!(
                "F_{p}[{}]/({})",
                variables.join(","),
                presentation.relations.join(", ")
            )
        };
        let alg = Self {
            p,
            name,
            variables: variables.to_vec(),
            basis,
            mult,
            unit,
            generators,
            presentation,
        };
        alg.check_table()?;
        Ok(alg)
    }

    /// The prime field as a one-dimensional algebra.
    pub fn prime_field(p: u32) -> Result<Self> {
        Self::from_polynomials(&[], &[], p)
    }

    /// F_{p^e} as F_p[t]/(g) with g the first monic irreducible of degree e
    /// in lexicographic coefficient order.
    pub fn finite_field(p: u32, e: u32) -> Result<Self> {
        field::check_prime(p)?;
        if e == 1 {
            return Self::prime_field(p);
        }
        cap("field size", (p as u64).pow(e), MAX_DIM as u64)?;
        let vars = vec!["t".to_string()];
        let total = (p as u64).pow(e);
        for code in 0..total {
            let mut g = Polynomial::monomial(p, &vars, vec![e], 1);
            let mut c = code;
            for k in 0..e {
                g.add_term(vec![k], (c % p as u64) as u32);
                c /= p as u64;
            }
            let alg = Self::from_polynomials(&vars, &[g], p)?;
            if alg.is_field() {
                let q = total;
                return Ok(alg.with_name(format!("F_{q}")));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Parse `F_q` or `F_p[x, y]/(r1, r2)`; the spec string becomes the name.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("algebra spec `{spec}`: expected F_q or F_p[vars]/(relations)"));
        let rest = s.strip_prefix("F_").ok_or_else(bad)?;
        let digits_end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let q: u32 = rest[..digits_end].parse().map_err(|_| bad())?;
        let tail = &rest[digits_end..];
        if tail.is_empty() {
            let p = (2..=q).find(|&d| q.is_multiple_of(d)).ok_or_else(bad)?;
            let mut e = 0;
            let mut r = q;
            while r.is_multiple_of(p) {
                r /= p;
                e += 1;
            }
            if r != 1 {
                return Err(Error::Parse(format!("{q} is not a prime power")));
            }
            return Ok(Self::finite_field(p, e)?.with_name(s.clone()));
        }
        let inner = tail.strip_prefix('[').ok_or_else(bad)?;
        let (vars, after) = inner.split_once(']').ok_or_else(bad)?;
        let rels = after
            .strip_prefix("/(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let vars: Vec<&str> = vars.split(',').filter(|v| !v.is_empty()).collect();
        let rels: Vec<&str> = rels.split(',').filter(|r| !r.is_empty()).collect();
        Ok(Self::from_presentation(&vars, &rels, q)?.with_name(s.clone()))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    fn check_table(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            let e = self.basis_elem(i);
            if self.mul(&self.unit, &e) != e {
                return Err(Error::Invalid(format!("unit fails on basis element {i}")));
            }
            for j in 0..d {
                let f = self.basis_elem(j);
                if self.mul(&e, &f) != self.mul(&f, &e) {
                    return Err(Error::Invalid("multiplication not commutative".into()));
                }
                if d <= 16 {
                    for k in 0..d {
                        let g = self.basis_elem(k);
                        if self.mul(&self.mul(&e, &f), &g) != self.mul(&e, &self.mul(&f, &g)) {
                            return Err(Error::Invalid("multiplication not associative".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Images of the presentation variables; together they generate A.
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> Elem {
        self.unit.clone()
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn scalar(&self, c: u32) -> Elem {
        self.scale(&self.unit, c)
    }

    pub fn is_zero(&self, a: &[u32]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Elem {
        a.iter().zip(b).map(|(&x, &y)| field::add(x, y, self.p)).collect()
    }

    pub fn sub(&self, a: &[u32], b: &[u32]) -> Elem {
        a.iter().zip(b).map(|(&x, &y)| field::sub(x, y, self.p)).collect()
    }

    pub fn neg(&self, a: &[u32]) -> Elem {
        a.iter().map(|&x| field::neg(x, self.p)).collect()
    }

    pub fn scale(&self, a: &[u32], c: u32) -> Elem {
        a.iter().map(|&x| field::mul(x, c, self.p)).collect()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Elem {
        let d = self.dim();
        let p = self.p as u64;
        let mut acc = vec![0u64; d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = x as u64 * y as u64 % p;
                let row = &self.mult[(i * d + j) * d..(i * d + j + 1) * d];
                for (s, &c) in acc.iter_mut().zip(row) {
                    if c != 0 {
                        *s += xy * c as u64;
                    }
                }
            }
            for s in acc.iter_mut() {
                *s %= p;
            }
        }
        acc.into_iter().map(|s| (s % p) as u32).collect()
    }

    pub fn pow(&self, a: &[u32], mut e: u64) -> Elem {
        let mut r = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// The absolute Frobenius a ↦ a^p.
    pub fn frobenius(&self, a: &[u32]) -> Elem {
        self.pow(a, self.p as u64)
    }

    /// Matrix of the F_p-linear map a ↦ a^p (columns = images of basis).
    pub fn frobenius_matrix(&self) -> FpMatrix {
        let cols: Vec<Elem> = (0..self.dim()).map(|i| self.frobenius(&self.basis_elem(i))).collect();
        FpMatrix::from_columns(self.p, &cols, self.dim())
    }

    /// Matrix of multiplication by `a`.
    pub fn mul_matrix(&self, a: &[u32]) -> FpMatrix {
        let cols: Vec<Elem> = (0..self.dim()).map(|i| self.mul(a, &self.basis_elem(i))).collect();
        FpMatrix::from_columns(self.p, &cols, self.dim())
    }

    /// Basis of {x : x^p = 0}; empty iff A is reduced.
    pub fn frobenius_kernel(&self) -> Vec<Elem> {
        self.frobenius_matrix().kernel()
    }

    /// A finite F_p-algebra is reduced iff its Frobenius is injective.
    pub fn is_reduced(&self) -> bool {
        self.frobenius_matrix().rank() == self.dim()
    }

    /// Number of factors in A_red as a product of fields (Berlekamp count:
    /// dimension of the Frobenius-fixed subspace).
    pub fn field_factor_count(&self) -> usize {
        let mut m = self.frobenius_matrix();
        for i in 0..self.dim() {
            let v = m.get(i, i);
            m.set(i, i, field::sub(v, 1, self.p));
        }
        m.kernel().len()
    }

    pub fn is_field(&self) -> bool {
        self.is_reduced() && self.field_factor_count() == 1
    }

    /// Inverse of a unit, by solving a·x = 1.
    pub fn inverse(&self, a: &[u32]) -> Option<Elem> {
        crate::linalg::solve_linear(&self.mul_matrix(a), &self.unit)
    }

    /// A ⊗_{F_p} B with basis the pairs of basis monomials.
    pub fn tensor(a: &Self, b: &Self) -> Result<Self> {
        if a.p != b.p {
            return Err(Error::RingMismatch(format!("characteristics {} and {}", a.p, b.p)));
        }
        let (da, db) = (a.dim(), b.dim());
        cap("algebra dimension", (da * db) as u64, MAX_DIM as u64)?;
        let d = da * db;
        let mut variables = a.variables.clone();
        let renamed: Vec<String> = b
            .variables
            .iter()
            .map(|v| {
                let mut name = v.clone();
                while variables.contains(&name) {
                    name.push('_');
                }
                variables.push(name.clone());
                name
            })
            .collect();
        let basis: Vec<Monomial> = (0..d)
            .map(|k| {
                let mut m = a.basis[k / db].clone();
                m.extend(&b.basis[k % db]);
                m
            })
            .collect();
        let mut mult = vec![0u32; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let x = a.mul(&a.basis_elem(i / db), &a.basis_elem(j / db));
                let y = b.mul(&b.basis_elem(i % db), &b.basis_elem(j % db));
                let z = Self::tensor_elems(&x, &y, a.p);
                mult[(i * d + j) * d..(i * d + j + 1) * d].copy_from_slice(&z);
            }
        }
        let unit = Self::tensor_elems(&a.unit, &b.unit, a.p);
        let mut generators: Vec<Elem> = a
            .generators
            .iter()
            .map(|g| Self::tensor_elems(g, &b.unit, a.p))
            .collect();
        generators.extend(b.generators.iter().map(|g| Self::tensor_elems(&a.unit, g, a.p)));
        let mut relations = Vec::new();
        for r in &a.presentation.relations {
            relations.push(r.clone());
        }
        for r in &b.presentation.relations {
            let mut s = r.clone();
            for (old, new) in b.variables.iter().zip(&renamed) {
                if old != new {
                    s = rename_var(&s, old, new);
                }
            }
            relations.push(s);
        }
        let alg = Self {
            p: a.p,
            name: format!("{} ⊗ {}", a.name, b.name),
            variables: variables.clone(),
            basis,
            mult,
            unit,
            generators,
            presentation: Presentation { variables, relations },
        };
        alg.check_table()?;
        Ok(alg)
    }

    /// x ⊗ y in the tensor basis (row-major: index = i_A * dim B + i_B).
    pub fn tensor_elems(x: &[u32], y: &[u32], p: u32) -> Elem {
        let mut out = Vec::with_capacity(x.len() * y.len());
        for &a in x {
            for &b in y {
                out.push(field::mul(a, b, p));
            }
        }
        out
    }

    /// Render an element as a polynomial in the presentation variables.
    pub fn format_elem(&self, a: &[u32]) -> String {
        let mut f = Polynomial::zero(self.p, &self.variables);
        for (m, &c) in self.basis.iter().zip(a) {
            f.add_term(m.clone(), c);
        }
        f.to_string()
    }

    /// Parse an element written in the presentation variables.
    pub fn parse_elem(&self, src: &str) -> Result<Elem> {
        let f = Polynomial::parse(src, &self.variables, self.p)?;
        let mut acc = self.zero();
        for (m, c) in f.terms() {
            let mut t = self.scalar(c);
            for (g, &e) in self.generators.iter().zip(m) {
                t = self.mul(&t, &self.pow(g, e as u64));
            }
            acc = self.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Every element of A, in lexicographic coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let d = self.dim();
        let p = self.p;
        let total = (p as u64).pow(d as u32);
        (0..total).map(move |mut code| {
            let mut v = vec![0; d];
            for x in v.iter_mut() {
                *x = (code % p as u64) as u32;
                code /= p as u64;
            }
            v
        })
    }
}

fn rename_var(src: &str, old: &str, new: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let is_ident = |c: char| c.is_alphanumeric() || c == '_';
    while i < chars.len() {
        if is_ident(chars[i]) && (i == 0 || !is_ident(chars[i - 1])) {
            let mut j = i;
            while j < chars.len() && is_ident(chars[j]) {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            out.push_str(if word == old { new } else { &word });
            i = j;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    out
}
