//! W̄_n(A) = W_n(A)/p as a coordinatized F_p-vector space.
//!
//! Every x ∈ W_n(A) has an integer digit expansion Σ c_{j,k} V^j[e_k]
//! (0 ≤ c < p), so the generators g_{j,k} = V^j[e_k] present W_n(A) as
//! Z^{nd} modulo the rows p·e_g − digits(p·g). Since p·V^j[e_k] =
//! V^{j+1}[e_k^p] only involves higher levels, the relation matrix is
//! triangular with determinant p^{nd} = |W_n(A)|, so these rows generate
//! all relations. Reducing mod p gives W̄_n(A) = F_p^{nd} / span(D mod p).

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{cap, Result};
use crate::linalg::{Echelon, FpMatrix};

use super::ring::{WittRing, WittVector};

/// Upper bound on n·dim A (number of digit generators).
pub const MAX_GENERATORS: usize = 256;

pub struct WbarSpace<'a> {
    ring: WittRing<'a, FiniteAlgebra>,
    n: usize,
    relations: Echelon,
    free: Vec<usize>,
    reps: Vec<WittVector<Elem>>,
}

impl<'a> WbarSpace<'a> {
    pub fn new(a: &'a FiniteAlgebra, n: usize) -> Result<Self> {
        let d = a.dim();
        cap("Witt generators n·dim A", (n * d) as u64, MAX_GENERATORS as u64)?;
        let ring = WittRing::new(a, n)?;
        let p = a.p();
        let mut relations = Echelon::new(p, n * d);
        for j in 0..n {
            for k in 0..d {
                // p·V^j[e_k] = V^{j+1}[e_k^p]
                let t = ring.teichmuller(&a.frobenius(&a.basis_elem(k)));
                let pg = ring.v_pow(&t, j + 1)?;
                let row = flatten(&ring.digits(&pg), d, n);
                relations.insert(row);
            }
        }
        let pivots = relations.pivots().to_vec();
        let free: Vec<usize> = (0..n * d).filter(|c| !pivots.contains(c)).collect();
        let reps = free
            .iter()
            .map(|&c| ring.v_pow(&ring.teichmuller(&a.basis_elem(c % d)), c / d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ring,
            n,
            relations,
            free,
            reps,
        })
    }

    pub fn algebra(&self) -> &'a FiniteAlgebra {
        self.ring.base()
    }

    pub fn ring(&self) -> &WittRing<'a, FiniteAlgebra> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Witt representative of the i-th basis vector.
    pub fn rep(&self, i: usize) -> &WittVector<Elem> {
        &self.reps[i]
    }

    /// (level, basis index) of the generator V^j[e_k] behind basis vector i.
    pub fn rep_generator(&self, i: usize) -> (usize, usize) {
        let d = self.algebra().dim();
        (self.free[i] / d, self.free[i] % d)
    }

    /// Coordinates of the class of x in W̄_n(A).
    pub fn coord(&self, x: &WittVector<Elem>) -> Vec<u32> {
        let d = self.algebra().dim();
        let r = self.relations.reduce(&flatten(&self.ring.digits(x), d, self.n));
        self.free.iter().map(|&c| r[c]).collect()
    }

    /// Witt vector representing a coordinate vector.
    pub fn lift(&self, v: &[u32]) -> WittVector<Elem> {
        let mut acc = self.ring.zero();
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                let t = self.ring.int_mul(&self.reps[i], c as i64);
                acc = self.ring.add(&acc, &t).expect("same length");
            }
        }
        acc
    }

    /// F: A → W̄_n(A), x ↦ [x]^p = [x^p] mod p.
    pub fn frobenius_of(&self, x: &[u32]) -> Vec<u32> {
        let a = self.algebra();
        self.coord(&self.ring.teichmuller(&a.frobenius(x)))
    }

    /// Matrix of F: A → W̄_n(A) (columns = images of the basis of A).
    pub fn frobenius_matrix(&self) -> FpMatrix {
        let a = self.algebra();
        let cols: Vec<Vec<u32>> = (0..a.dim()).map(|k| self.frobenius_of(&a.basis_elem(k))).collect();
        FpMatrix::from_columns(self.p(), &cols, self.dim())
    }

    /// Kernel of F: A → W̄_n(A).
    pub fn frobenius_kernel(&self) -> Vec<Elem> {
        self.frobenius_matrix().kernel()
    }

    /// Matrix of the module action m ↦ [a^p]·m on W̄_n(A).
    pub fn action_matrix(&self, a_elem: &[u32]) -> FpMatrix {
        let a = self.algebra();
        let t = self.ring.teichmuller(&a.frobenius(a_elem));
        let cols: Vec<Vec<u32>> = self
            .reps
            .iter()
            .map(|r| self.coord(&self.ring.mul(&t, r).expect("same length")))
            .collect();
        FpMatrix::from_columns(self.p(), &cols, self.dim())
    }

    /// Product in the ring W̄_n(A).
    pub fn mul(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        self.coord(&self.ring.mul(&self.lift(u), &self.lift(v)).expect("same length"))
    }

    /// R^{n-1}: W̄_n(A) → A, the first coordinate.
    pub fn restriction_matrix(&self) -> FpMatrix {
        let cols: Vec<Vec<u32>> = self.reps.iter().map(|r| r.coords[0].clone()).collect();
        FpMatrix::from_columns(self.p(), &cols, self.algebra().dim())
    }

    /// The map W̄_n(A) → W̄_{n-1}(A) induced by restriction R.
    pub fn truncation_matrix(&self, lower: &WbarSpace<'_>) -> Result<FpMatrix> {
        let cols = self
            .reps
            .iter()
            .map(|r| Ok(lower.coord(&self.ring.restriction(r, lower.n)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FpMatrix::from_columns(self.p(), &cols, lower.dim()))
    }

    /// The map W̄_{n-1}(A) → W̄_n(A) induced by V.
    pub fn verschiebung_matrix(&self, lower: &WbarSpace<'_>) -> Result<FpMatrix> {
        let cols = (0..lower.dim())
            .map(|i| {
                let v = self.ring.verschiebung_extend(lower.rep(i))?;
                Ok(self.coord(&v))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FpMatrix::from_columns(self.p(), &cols, self.dim()))
    }
}

fn flatten(digits: &[Vec<(usize, u32)>], d: usize, n: usize) -> Vec<u32> {
    let mut v = vec![0; n * d];
    for (j, level) in digits.iter().enumerate() {
        for &(k, c) in level {
            v[j * d + k] = c;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_fields_have_constant_dimension() {
        for (p, e) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
            let f = FiniteAlgebra::finite_field(p, e).unwrap();
            for n in 1..=3 {
                let w = WbarSpace::new(&f, n).unwrap();
                assert_eq!(w.dim(), e as usize, "F_{p}^{e}, n = {n}");
            }
        }
    }

    #[test]
    fn nilpotent_in_frobenius_kernel() {
        let a = FiniteAlgebra::from_presentation(&["x"], &["x^2"], 2).unwrap();
        let w = WbarSpace::new(&a, 2).unwrap();
        let x = a.generators()[0].clone();
        assert!(w.frobenius_of(&x).iter().all(|&c| c == 0));
        assert_eq!(w.frobenius_kernel(), vec![x]);
    }

    #[test]
    fn p_multiples_vanish() {
        let a = FiniteAlgebra::from_presentation(&["x"], &["x^2"], 3).unwrap();
        let w = WbarSpace::new(&a, 3).unwrap();
        let elems: Vec<Elem> = a.elements().collect();
        for x in w.ring().elements_from(&elems, 3).iter().step_by(53) {
            let px = w.ring().p_times(x);
            assert!(w.coord(&px).iter().all(|&c| c == 0));
        }
    }
}
