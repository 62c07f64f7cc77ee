//! Cartier modules: finite abelian p-groups with F and V satisfying FV = p.

use serde::{Deserialize, Serialize};

use super::pgroup::{quotient, GElem, PGroup, Quotient};
use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{cap, Error, Result};
use crate::witt::{WittRing, WittVector};

/// Upper bound on log_p of module orders handled by the constructions.
pub const MAX_LOG_ORDER: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierModule {
    pub group: PGroup,
    /// Rows: F applied to each generator.
    pub f: Vec<GElem>,
    /// Rows: V applied to each generator.
    pub v: Vec<GElem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierCheck {
    pub f_additive: bool,
    pub v_additive: bool,
    pub fv_is_p: bool,
    pub vf_is_p: bool,
}

impl CartierCheck {
    pub fn ok(&self) -> bool {
        self.f_additive && self.v_additive && self.fv_is_p && self.vf_is_p
    }
}

impl CartierModule {
    pub fn new(group: PGroup, f: Vec<GElem>, v: Vec<GElem>) -> Result<Self> {
        let m = Self { group, f, v };
        if !m.group.is_hom(&m.group, &m.f) || !m.group.is_hom(&m.group, &m.v) {
            return Err(Error::Invalid("F or V is not a homomorphism".into()));
        }
        Ok(m)
    }

    pub fn p(&self) -> u32 {
        self.group.p
    }

    pub fn orders(&self) -> &[u32] {
        &self.group.exps
    }

    pub fn apply_f(&self, x: &[i128]) -> GElem {
        self.group.apply(&self.group, &self.f, x)
    }

    pub fn apply_v(&self, x: &[i128]) -> GElem {
        self.group.apply(&self.group, &self.v, x)
    }

    /// FV = p and VF = p as matrix identities.
    pub fn check(&self) -> CartierCheck {
        let g = &self.group;
        let p = self.p() as i128;
        let fv = (0..g.rank()).all(|i| self.apply_f(&self.apply_v(&g.basis(i))) == g.scale(&g.basis(i), p));
        let vf = (0..g.rank()).all(|i| self.apply_v(&self.apply_f(&g.basis(i))) == g.scale(&g.basis(i), p));
        CartierCheck {
            f_additive: g.is_hom(g, &self.f),
            v_additive: g.is_hom(g, &self.v),
            fv_is_p: fv,
            vf_is_p: vf,
        }
    }

    /// The induced structure on M/⟨rels⟩; fails if rels are not F, V-stable.
    pub fn quotient_by(&self, rels: &[GElem]) -> Result<(CartierModule, Quotient)> {
        let q = quotient(&self.group, rels)?;
        for r in rels {
            if !q.group.is_zero(&q.project(&self.group, &self.apply_f(r)))
                || !q.group.is_zero(&q.project(&self.group, &self.apply_v(r)))
            {
                return Err(Error::Invalid("relations are not stable under F and V".into()));
            }
        }
        let induced = |m: &[GElem]| -> Vec<GElem> {
            q.lift
                .iter()
                .map(|l| q.project(&self.group, &self.group.apply(&self.group, m, l)))
                .collect()
        };
        let f = induced(&self.f);
        let v = induced(&self.v);
        Ok((CartierModule::new(q.group.clone(), f, v)?, q))
    }

    /// Close `rels` under F and V (the sub-Cartier module they generate).
    pub fn close_relations(&self, rels: &[GElem]) -> Result<Vec<GElem>> {
        let mut all: Vec<GElem> = rels.to_vec();
        let mut frontier: Vec<GElem> = rels.to_vec();
        while !frontier.is_empty() {
            let q = quotient(&self.group, &all)?;
            let mut next = Vec::new();
            for r in &frontier {
                for image in [self.apply_f(r), self.apply_v(r)] {
                    if !q.group.is_zero(&q.project(&self.group, &image)) {
                        next.push(image);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(all)
    }
}

/// W_n(A) as a Cartier module, with Witt representatives of its generators.
pub struct WittCartier<'a> {
    pub module: CartierModule,
    pub ring: WittRing<'a, FiniteAlgebra>,
    /// Witt vector for each group generator.
    pub reps: Vec<WittVector<Elem>>,
    digits_quotient: Quotient,
    digits_group: PGroup,
}

impl WittCartier<'_> {
    /// Group coordinates of a Witt vector.
    pub fn to_group(&self, x: &WittVector<Elem>) -> GElem {
        let d = self.ring.base().dim();
        let n = self.ring.n();
        let mut v = vec![0i128; n * d];
        for (j, level) in self.ring.digits(x).iter().enumerate() {
            for &(k, c) in level {
                v[j * d + k] = c as i128;
            }
        }
        self.digits_quotient.project(&self.digits_group, &v)
    }

    /// Witt vector of a group element.
    pub fn to_witt(&self, x: &[i128]) -> WittVector<Elem> {
        let mut acc = self.ring.zero();
        for (c, r) in x.iter().zip(&self.reps) {
            if *c != 0 {
                acc = self.ring.add(&acc, &self.ring.int_mul(r, *c as i64)).expect("same length");
            }
        }
        acc
    }
}

/// The additive group of W_n(A) with F and V, in invariant-factor form.
pub fn witt_as_cartier(a: &FiniteAlgebra, n: usize) -> Result<WittCartier<'_>> {
    let d = a.dim();
    cap("log_p |W_n(A)|", (n * d) as u64, MAX_LOG_ORDER as u64)?;
    let ring = WittRing::new(a, n)?;
    let p = a.p();
    // generators V^j[e_k] at index j·d + k; relations p·g − digits(p·g)
    let free = PGroup::new(p, vec![n as u32; n * d])?;
    let mut rels = Vec::new();
    for j in 0..n {
        for k in 0..d {
            let g = j * d + k;
            let pg = ring.v_pow(&ring.teichmuller(&a.frobenius(&a.basis_elem(k))), j + 1)?;
            let mut row = vec![0i128; n * d];
            row[g] += p as i128;
            for (jj, level) in ring.digits(&pg).iter().enumerate() {
                for &(kk, c) in level {
                    row[jj * d + kk] -= c as i128;
                }
            }
            rels.push(row);
        }
    }
    let q = quotient(&free, &rels)?;
    if q.group.log_order() != (n * d) as u32 {
        return Err(Error::ComparisonFailed(format!(
            "digit presentation of W_{n}({}) has order p^{} instead of p^{}",
            a.name(),
            q.group.log_order(),
            n * d
        )));
    }
    let gen_witt = |idx: usize| -> Result<WittVector<Elem>> {
        ring.v_pow(&ring.teichmuller(&a.basis_elem(idx % d)), idx / d)
    };
    let mut reps = Vec::with_capacity(q.group.rank());
    for l in &q.lift {
        let mut acc = ring.zero();
        for (idx, &c) in l.iter().enumerate() {
            if c != 0 {
                acc = ring.add(&acc, &ring.int_mul(&gen_witt(idx)?, c as i64))?;
            }
        }
        reps.push(acc);
    }
    let mut wc = WittCartier {
        module: CartierModule {
            group: q.group.clone(),
            f: vec![],
            v: vec![],
        },
        ring,
        reps,
        digits_quotient: q,
        digits_group: free,
    };
    let f: Vec<GElem> = wc.reps.iter().map(|r| wc.to_group(&wc.ring.frobenius(r))).collect();
    let v: Vec<GElem> = wc.reps.iter().map(|r| wc.to_group(&wc.ring.verschiebung(r))).collect();
    wc.module = CartierModule::new(wc.module.group.clone(), f, v)?;
    Ok(wc)
}

/// M[V] truncated at V^N: the quotient of ⊕_{i≥0} M·V^i by the
/// sub-Cartier module generated by V^N, so that component i is M/p^{N−i}M.
#[derive(Clone, Debug)]
pub struct MVExtension {
    pub truncation: usize,
    pub module: CartierModule,
    /// Block layout before normalization: generator (i, s) ↦ index i·r + s.
    pub components: Vec<PGroup>,
}

/// F(m V^0) = F_M(m), F(m V^i) = p·m V^{i−1}, V shifts.
pub fn mv_extend(m: &PGroup, f_m: &[GElem], truncation: usize) -> Result<MVExtension> {
    if truncation == 0 || truncation > 6 {
        return Err(Error::CapExceeded {
            what: "M[V] truncation",
            value: truncation as u64,
            cap: 6,
        });
    }
    if !m.is_hom(m, f_m) {
        return Err(Error::Invalid("F is not a homomorphism of M".into()));
    }
    let r = m.rank();
    let nt = truncation;
    let p = m.p as i128;
    let components: Vec<PGroup> = (0..nt)
        .map(|i| PGroup {
            p: m.p,
            exps: m.exps.iter().map(|&e| e.min((nt - i) as u32)).collect(),
        })
        .collect();
    let big = PGroup {
        p: m.p,
        exps: components.iter().flat_map(|c| c.exps.iter().copied()).collect(),
    };
    let mut f = vec![vec![0i128; nt * r]; nt * r];
    let mut v = vec![vec![0i128; nt * r]; nt * r];
    for i in 0..nt {
        for s in 0..r {
            let g = i * r + s;
            if i == 0 {
                for (t, &c) in f_m[s].iter().enumerate() {
                    f[g][t] = c;
                }
            } else {
                f[g][(i - 1) * r + s] = p;
            }
            if i + 1 < nt {
                v[g][(i + 1) * r + s] = 1;
            }
        }
    }
    let f = f.iter().map(|row| big.reduce(row)).collect();
    let v = v.iter().map(|row| big.reduce(row)).collect();
    let raw = CartierModule::new(big, f, v)?;
    let (module, _) = raw.quotient_by(&[])?;
    Ok(MVExtension {
        truncation,
        module,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_of_prime_field() {
        for (p, n) in [(2, 3), (3, 2), (5, 2)] {
            let k = FiniteAlgebra::prime_field(p).unwrap();
            let wc = witt_as_cartier(&k, n).unwrap();
            assert_eq!(wc.module.orders(), &[n as u32]);
            // F = id, V = p
            assert_eq!(wc.module.apply_f(&[1]), vec![1]);
            assert_eq!(wc.module.apply_v(&[1]), vec![p as i128]);
            assert!(wc.module.check().ok());
        }
    }

    #[test]
    fn witt_of_dual_numbers() {
        let a = FiniteAlgebra::from_presentation(&["x"], &["x^2"], 2).unwrap();
        let wc = witt_as_cartier(&a, 2).unwrap();
        assert_eq!(wc.module.group.log_order(), 4);
        assert!(wc.module.check().ok());
        for x in wc.module.group.elements() {
            assert_eq!(wc.to_group(&wc.to_witt(&x)), x);
        }
    }

    #[test]
    fn witt_of_f4_is_galois_ring() {
        let f4 = FiniteAlgebra::finite_field(2, 2).unwrap();
        let wc = witt_as_cartier(&f4, 2).unwrap();
        assert_eq!(wc.module.orders(), &[2, 2]);
        let g = &wc.module.group;
        // F has order two and is not the identity
        let f2: Vec<GElem> = (0..2).map(|i| wc.module.apply_f(&wc.module.apply_f(&g.basis(i)))).collect();
        assert_eq!(f2, vec![g.basis(0), g.basis(1)]);
        assert!((0..2).any(|i| wc.module.apply_f(&g.basis(i)) != g.basis(i)));
        assert!(wc.module.check().ok());
    }

    #[test]
    fn mv_examples() {
        let zp = PGroup::new(3, vec![1]).unwrap();
        let e = mv_extend(&zp, &[vec![0]], 2).unwrap();
        assert_eq!(e.module.group.log_order(), 2);
        assert!(e.module.check().fv_is_p);
        let z4 = PGroup::new(2, vec![2]).unwrap();
        let e = mv_extend(&z4, &[vec![1]], 3).unwrap();
        assert_eq!(e.module.group.log_order(), 2 + 2 + 1);
        let c = e.module.check();
        assert!(c.fv_is_p);
        // VF(1·V^0) = V^1 while 2·V^0 is a different element
        assert!(!c.vf_is_p);
    }
}
