//! Truncated Witt vectors over a characteristic-p coefficient ring.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::cache::structure_polys;
use super::polys::{ModPoly, WittStructurePolys};
use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// A commutative ring of characteristic p.
pub trait CoeffRing {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn char_p(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiply by an integer residue mod p.
    fn scale(&self, a: &Self::Elem, c: u32) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_element(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }
}

/// A coefficient ring with a distinguished F_p-basis.
pub trait BasedRing: CoeffRing {
    type Key: Clone + Ord + fmt::Debug;

    /// Nonzero coordinates of `a`.
    fn support(&self, a: &Self::Elem) -> Vec<(Self::Key, u32)>;
    fn basis_element(&self, k: &Self::Key) -> Self::Elem;
}

impl CoeffRing for FiniteAlgebra {
    type Elem = Elem;

    fn char_p(&self) -> u32 {
        self.p()
    }
    fn zero(&self) -> Elem {
        FiniteAlgebra::zero(self)
    }
    fn one(&self) -> Elem {
        FiniteAlgebra::one(self)
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteAlgebra::add(self, a, b)
    }
    fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteAlgebra::sub(self, a, b)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        FiniteAlgebra::mul(self, a, b)
    }
    fn scale(&self, a: &Elem, c: u32) -> Elem {
        FiniteAlgebra::scale(self, a, c)
    }
    fn is_zero(&self, a: &Elem) -> bool {
        FiniteAlgebra::is_zero(self, a)
    }
    fn is_element(&self, a: &Elem) -> bool {
        a.len() == self.dim() && a.iter().all(|&x| x < self.p())
    }
    fn pow(&self, a: &Elem, e: u64) -> Elem {
        FiniteAlgebra::pow(self, a, e)
    }
}

impl BasedRing for FiniteAlgebra {
    type Key = usize;

    fn support(&self, a: &Elem) -> Vec<(usize, u32)> {
        a.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect()
    }
    fn basis_element(&self, k: &usize) -> Elem {
        FiniteAlgebra::basis_elem(self, *k)
    }
}

/// Coordinates (a_0, ..., a_{m-1}) of a Witt vector of length m.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WittVector<E> {
    pub coords: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Integer digits of a Witt vector: level j lists (basis key, c) with
/// x = Σ_j Σ c·V^j[e_key] and 0 < c < p.
pub type Digits<K> = Vec<Vec<(K, u32)>>;

/// W_m(R) for every m ≤ n, sharing one set of structure polynomials.
pub struct WittRing<'a, R: CoeffRing> {
    base: &'a R,
    n: usize,
    polys: Arc<WittStructurePolys>,
}

impl<R: CoeffRing> Clone for WittRing<'_, R> {
    fn clone(&self) -> Self {
        Self {
            base: self.base,
            n: self.n,
            polys: self.polys.clone(),
        }
    }
}

struct Eval<'r, R: CoeffRing> {
    ring: &'r R,
    n: usize,
    vals: Vec<Option<R::Elem>>,
    cache: HashMap<(u8, u32), R::Elem>,
}

impl<'r, R: CoeffRing> Eval<'r, R> {
    fn new(ring: &'r R, n: usize, x: &[R::Elem], y: &[R::Elem]) -> Self {
        let mut vals = vec![None; 2 * n];
        for (i, v) in x.iter().enumerate() {
            vals[i] = (!ring.is_zero(v)).then(|| v.clone());
        }
        for (i, v) in y.iter().enumerate() {
            vals[n + i] = (!ring.is_zero(v)).then(|| v.clone());
        }
        Self {
            ring,
            n,
            vals,
            cache: HashMap::new(),
        }
    }

    fn set_x(&mut self, i: usize, v: &R::Elem) {
        self.vals[i] = (!self.ring.is_zero(v)).then(|| v.clone());
    }

    fn eval(&mut self, f: &ModPoly) -> R::Elem {
        let ring = self.ring;
        let mut acc = ring.zero();
        'terms: for t in &f.terms {
            for &(v, _) in &t.factors {
                if self.vals[v as usize].is_none() {
                    continue 'terms;
                }
            }
            let mut prod: Option<R::Elem> = None;
            for &(v, e) in &t.factors {
                let pw = match self.cache.get(&(v, e)) {
                    Some(pw) => pw.clone(),
                    None => {
                        let base = self.vals[v as usize].as_ref().unwrap();
                        let pw = ring.pow(base, e as u64);
                        self.cache.insert((v, e), pw.clone());
                        pw
                    }
                };
                prod = Some(match prod {
                    None => pw,
                    Some(q) => ring.mul(&q, &pw),
                });
            }
            let term = match prod {
                None => ring.scale(&ring.one(), t.coeff),
                Some(q) => ring.scale(&q, t.coeff),
            };
            acc = ring.add(&acc, &term);
        }
        debug_assert!(self.n > 0);
        acc
    }
}

impl<'a, R: CoeffRing> WittRing<'a, R> {
    pub fn new(base: &'a R, n: usize) -> Result<Self> {
        let polys = structure_polys(base.char_p(), n)?;
        Ok(Self { base, n, polys })
    }

    pub fn base(&self) -> &'a R {
        self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.polys.p
    }

    pub fn polys(&self) -> &WittStructurePolys {
        &self.polys
    }

    pub fn from_coords(&self, coords: Vec<R::Elem>) -> Result<WittVector<R::Elem>> {
        if coords.is_empty() || coords.len() > self.n {
            return Err(Error::RingMismatch(format!(
                "length {} outside 1..={}",
                coords.len(),
                self.n
            )));
        }
        if let Some(bad) = coords.iter().position(|c| !self.base.is_element(c)) {
            return Err(Error::RingMismatch(format!("coordinate {bad} is not in the base ring")));
        }
        Ok(WittVector { coords })
    }

    pub fn zero(&self) -> WittVector<R::Elem> {
        self.zero_len(self.n)
    }

    pub fn zero_len(&self, m: usize) -> WittVector<R::Elem> {
        WittVector {
            coords: vec![self.base.zero(); m],
        }
    }

    pub fn one(&self) -> WittVector<R::Elem> {
        self.teichmuller(&self.base.one())
    }

    /// [a] = (a, 0, ..., 0).
    pub fn teichmuller(&self, a: &R::Elem) -> WittVector<R::Elem> {
        self.teichmuller_len(a, self.n)
    }

    pub fn teichmuller_len(&self, a: &R::Elem, m: usize) -> WittVector<R::Elem> {
        let mut v = self.zero_len(m);
        v.coords[0] = a.clone();
        v
    }

    pub fn is_zero(&self, x: &WittVector<R::Elem>) -> bool {
        x.coords.iter().all(|c| self.base.is_zero(c))
    }

    fn check_pair(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<usize> {
        if x.len() != y.len() || x.len() > self.n || x.is_empty() {
            return Err(Error::RingMismatch(format!(
                "lengths {} and {} in W_{}",
                x.len(),
                y.len(),
                self.n
            )));
        }
        Ok(x.len())
    }

    pub fn add(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let m = self.check_pair(x, y)?;
        let mut ev = Eval::new(self.base, self.n, &x.coords, &y.coords);
        let coords = (0..m).map(|i| ev.eval(&self.polys.sum_mod[i])).collect();
        Ok(WittVector { coords })
    }

    pub fn mul(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let m = self.check_pair(x, y)?;
        let mut ev = Eval::new(self.base, self.n, &x.coords, &y.coords);
        let coords = (0..m).map(|i| ev.eval(&self.polys.prod_mod[i])).collect();
        Ok(WittVector { coords })
    }

    /// x - y: the unique z with S(z, y) = x, solved one coordinate at a
    /// time using S_i = z_i + y_i + (terms in lower coordinates).
    pub fn sub(&self, x: &WittVector<R::Elem>, y: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let m = self.check_pair(x, y)?;
        let ring = self.base;
        let mut ev = Eval::new(ring, self.n, &[], &y.coords);
        let mut z = Vec::with_capacity(m);
        for i in 0..m {
            let carry = ev.eval(&self.polys.carry_mod[i]);
            let zi = ring.sub(&ring.sub(&x.coords[i], &y.coords[i]), &carry);
            ev.set_x(i, &zi);
            z.push(zi);
        }
        Ok(WittVector { coords: z })
    }

    pub fn neg(&self, x: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.sub(&self.zero_len(x.len()), x).expect("same length")
    }

    /// k·x for an integer k.
    pub fn int_mul(&self, x: &WittVector<R::Elem>, k: i64) -> WittVector<R::Elem> {
        let mut acc = self.zero_len(x.len());
        let mut base = x.clone();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base).expect("same length");
            }
            e >>= 1;
            if e > 0 {
                base = self.add(&base, &base).expect("same length");
            }
        }
        if k < 0 {
            self.neg(&acc)
        } else {
            acc
        }
    }

    /// p·x = V(F(x)).
    pub fn p_times(&self, x: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.verschiebung(&self.frobenius(x))
    }

    /// Coordinatewise p-th power.
    pub fn frobenius(&self, x: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        let p = self.p() as u64;
        WittVector {
            coords: x.coords.iter().map(|c| self.base.pow(c, p)).collect(),
        }
    }

    /// V(a_0, ..., a_{m-1}) = (0, a_0, ..., a_{m-2}) in W_m.
    pub fn verschiebung(&self, x: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        let mut coords = Vec::with_capacity(x.len());
        coords.push(self.base.zero());
        coords.extend(x.coords[..x.len() - 1].iter().cloned());
        WittVector { coords }
    }

    /// V: W_{m-1} → W_m without truncation.
    pub fn verschiebung_extend(&self, x: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        if x.len() + 1 > self.n {
            return Err(Error::TruncationOverflow {
                shift: 1,
                n: self.n,
            });
        }
        let mut coords = vec![self.base.zero()];
        coords.extend(x.coords.iter().cloned());
        Ok(WittVector { coords })
    }

    /// V^k in W_m; shifts by k ≤ m are allowed (V^m = 0).
    pub fn v_pow(&self, x: &WittVector<R::Elem>, k: usize) -> Result<WittVector<R::Elem>> {
        let m = x.len();
        if k > m {
            return Err(Error::TruncationOverflow { shift: k, n: m });
        }
        let mut coords = vec![self.base.zero(); k];
        coords.extend(x.coords[..m - k].iter().cloned());
        Ok(WittVector { coords })
    }

    /// R^{m-k}: keep the first k coordinates.
    pub fn restriction(&self, x: &WittVector<R::Elem>, k: usize) -> Result<WittVector<R::Elem>> {
        if k == 0 || k > x.len() {
            return Err(Error::TruncationOverflow { shift: k, n: x.len() });
        }
        Ok(WittVector {
            coords: x.coords[..k].to_vec(),
        })
    }

    /// All elements of W_m(R) as a product of the finite base sets.
    pub fn elements_from(&self, base_elems: &[R::Elem], m: usize) -> Vec<WittVector<R::Elem>> {
        let mut out: Vec<Vec<R::Elem>> = vec![Vec::new()];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|v| {
                    base_elems.iter().map(move |a| {
                        let mut w = v.clone();
                        w.push(a.clone());
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(|coords| WittVector { coords }).collect()
    }
}

impl<R: BasedRing> WittRing<'_, R> {
    /// Integer digit expansion x = Σ_j V^j(Σ_k c_{j,k} [e_k]) with 0 ≤ c < p.
    pub fn digits(&self, x: &WittVector<R::Elem>) -> Digits<R::Key> {
        let mut cur = x.clone();
        let mut out = Vec::with_capacity(x.len());
        while !cur.is_empty() {
            let m = cur.len();
            let support = self.base.support(&cur.coords[0]);
            let mut s = self.zero_len(m);
            for (k, c) in &support {
                let t = self.int_mul(&self.teichmuller_len(&self.base.basis_element(k), m), *c as i64);
                s = self.add(&s, &t).expect("same length");
            }
            let r = self.sub(&cur, &s).expect("same length");
            debug_assert!(self.base.is_zero(&r.coords[0]));
            out.push(support);
            cur = WittVector {
                coords: r.coords[1..].to_vec(),
            };
        }
        out
    }

    /// Inverse of `digits`, producing a vector of length m.
    pub fn from_digits(&self, digits: &Digits<R::Key>, m: usize) -> WittVector<R::Elem> {
        let mut acc = self.zero_len(m);
        for (j, level) in digits.iter().enumerate().take(m) {
            let mut s = self.zero_len(m - j);
            for (k, c) in level {
                let t = self.int_mul(&self.teichmuller_len(&self.base.basis_element(k), m - j), *c as i64);
                s = self.add(&s, &t).expect("same length");
            }
            let shifted = self.v_pow(&pad(self, s, m), j).expect("shift within length");
            acc = self.add(&acc, &shifted).expect("same length");
        }
        acc
    }
}

// extend a shorter vector with zero coordinates (used before shifting)
fn pad<R: CoeffRing>(w: &WittRing<'_, R>, mut x: WittVector<R::Elem>, m: usize) -> WittVector<R::Elem> {
    while x.len() < m {
        x.coords.push(w.base.zero());
    }
    x
}
