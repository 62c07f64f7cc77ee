//! M ⊠ N = (M ⊗ N)[V] / ∼ truncated at V^{N_V}, and its comparison with
//! W_n(A ⊗ B).

use serde::{Deserialize, Serialize};

use super::module::{witt_as_cartier, CartierCheck, CartierModule, MAX_LOG_ORDER};
use super::pgroup::{check_same_prime, quotient, GElem, PGroup, Quotient};
use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{cap, Error, Result};
use crate::witt::WittVector;

const MAX_GENERATORS: usize = 1024;

pub struct BoxProduct {
    pub truncation: usize,
    pub left: CartierModule,
    pub right: CartierModule,
    /// (M ⊗ N)[V] before imposing the relations.
    pub raw: CartierModule,
    /// Relation vectors closed under F and V.
    pub relations: Vec<GElem>,
    pub quotient: Quotient,
    pub module: CartierModule,
}

impl BoxProduct {
    /// Index of the generator (e_s ⊗ f_t)V^k.
    pub fn generator(&self, k: usize, s: usize, t: usize) -> usize {
        let (rm, rn) = (self.left.group.rank(), self.right.group.rank());
        k * rm * rn + s * rn + t
    }

    /// (x ⊗ y)V^k as an element of the raw group (zero for k ≥ N_V).
    pub fn tensor_at(&self, x: &[i128], y: &[i128], k: usize) -> GElem {
        tensor_at(&self.raw.group, self.left.group.rank(), self.right.group.rank(), x, y, k)
    }

    /// Image in the quotient.
    pub fn project(&self, raw: &[i128]) -> GElem {
        self.quotient.project(&self.raw.group, raw)
    }
}

fn tensor_at(raw: &PGroup, rm: usize, rn: usize, x: &[i128], y: &[i128], k: usize) -> GElem {
    let mut out = raw.zero();
    if k * rm * rn >= raw.rank() {
        return out;
    }
    for (s, &a) in x.iter().enumerate() {
        for (t, &b) in y.iter().enumerate() {
            out[k * rm * rn + s * rn + t] += a * b;
        }
    }
    raw.reduce(&out)
}

pub fn box_product(m: &CartierModule, n: &CartierModule, truncation: usize) -> Result<BoxProduct> {
    check_same_prime(&m.group, &n.group)?;
    let p = m.p();
    let (rm, rn) = (m.group.rank(), n.group.rank());
    cap("box product generators", (rm * rn * truncation) as u64, MAX_GENERATORS as u64)?;
    let nt = truncation as u32;
    let mut exps = Vec::with_capacity(rm * rn * truncation);
    for k in 0..truncation as u32 {
        for &a in &m.group.exps {
            for &b in &n.group.exps {
                exps.push(a.min(b).min(nt - k));
            }
        }
    }
    let raw_group = PGroup::new(p, exps)?;
    cap("log_p |(M ⊗ N)[V]|", raw_group.log_order() as u64, 4 * MAX_LOG_ORDER as u64)?;
    let gen = |k: usize, s: usize, t: usize| k * rm * rn + s * rn + t;
    let mut f = vec![raw_group.zero(); raw_group.rank()];
    let mut v = vec![raw_group.zero(); raw_group.rank()];
    for k in 0..truncation {
        for s in 0..rm {
            for t in 0..rn {
                let g = gen(k, s, t);
                f[g] = if k == 0 {
                    let fx = m.apply_f(&m.group.basis(s));
                    let fy = n.apply_f(&n.group.basis(t));
                    tensor_at(&raw_group, rm, rn, &fx, &fy, 0)
                } else {
                    let mut e = raw_group.zero();
                    e[gen(k - 1, s, t)] = p as i128;
                    raw_group.reduce(&e)
                };
                if k + 1 < truncation {
                    v[g][gen(k + 1, s, t)] = 1;
                }
            }
        }
    }
    let raw = CartierModule::new(raw_group, f, v)?;
    let mut rels = Vec::new();
    for k in 0..truncation {
        for s in 0..rm {
            for t in 0..rn {
                let es = m.group.basis(s);
                let ft = n.group.basis(t);
                // (m ⊗ Vn)V^k − (Fm ⊗ n)V^{k+1}
                let a = tensor_at(&raw.group, rm, rn, &es, &n.apply_v(&ft), k);
                let b = tensor_at(&raw.group, rm, rn, &m.apply_f(&es), &ft, k + 1);
                rels.push(raw.group.sub(&a, &b));
                // (Vm ⊗ n)V^k − (m ⊗ Fn)V^{k+1}
                let a = tensor_at(&raw.group, rm, rn, &m.apply_v(&es), &ft, k);
                let b = tensor_at(&raw.group, rm, rn, &es, &n.apply_f(&ft), k + 1);
                rels.push(raw.group.sub(&a, &b));
            }
        }
    }
    rels.retain(|r| !raw.group.is_zero(r));
    let relations = raw.close_relations(&rels)?;
    let (module, quotient) = raw.quotient_by(&relations)?;
    Ok(BoxProduct {
        truncation,
        left: m.clone(),
        right: n.clone(),
        raw,
        relations,
        quotient,
        module,
    })
}

/// Two Cartier modules are isomorphic if some isomorphism of groups
/// intertwines F and V; here we only compare invariants that such an
/// isomorphism must preserve (orders, and the orders of ker/im of F, V).
pub fn cartier_invariants(m: &CartierModule) -> Result<Vec<Vec<u32>>> {
    let g = &m.group;
    let image = |rows: &[GElem]| -> Result<Vec<u32>> { Ok(quotient(g, rows)?.group.exps) };
    Ok(vec![g.exps.clone(), image(&m.f)?, image(&m.v)?])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxComparison {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub n: usize,
    pub orders_lhs: Vec<u32>,
    pub orders_rhs: Vec<u32>,
    pub isomorphism: bool,
    pub equivariance: bool,
    pub relations_vanish: bool,
    pub surjective: bool,
    pub generators_hit: bool,
    pub projection_formula: bool,
    pub lhs_check: CartierCheck,
    pub rhs_check: CartierCheck,
}

impl BoxComparison {
    pub fn passed(&self) -> bool {
        self.isomorphism
            && self.equivariance
            && self.relations_vanish
            && self.surjective
            && self.generators_hit
            && self.projection_formula
            && self.lhs_check.ok()
            && self.rhs_check.ok()
    }
}

/// Compare W_n(A) ⊠ W_n(B) (truncated at V^n) with W_n(A ⊗ B) via
/// μ((a ⊗ b)V^k) = V^k(ι_A(a)·ι_B(b)).
pub fn compare_box_with_witt(a: &FiniteAlgebra, b: &FiniteAlgebra, n: usize) -> Result<BoxComparison> {
    if n == 0 || n > 3 {
        return Err(Error::CapExceeded {
            what: "comparison truncation",
            value: n as u64,
            cap: 3,
        });
    }
    let c = FiniteAlgebra::tensor(a, b)?;
    let wa = witt_as_cartier(a, n)?;
    let wb = witt_as_cartier(b, n)?;
    let wc = witt_as_cartier(&c, n)?;
    let bx = box_product(&wa.module, &wb.module, n)?;
    let ring = &wc.ring;
    let p = a.p();
    let iota = |x: &WittVector<Elem>, left: bool| -> WittVector<Elem> {
        WittVector {
            coords: x
                .coords
                .iter()
                .map(|e| {
                    if left {
                        FiniteAlgebra::tensor_elems(e, &b.one(), p)
                    } else {
                        FiniteAlgebra::tensor_elems(&a.one(), e, p)
                    }
                })
                .collect(),
        }
    };
    let (rm, rn) = (wa.module.group.rank(), wb.module.group.rank());
    let mut mu: Vec<GElem> = Vec::with_capacity(bx.raw.group.rank());
    for k in 0..n {
        for s in 0..rm {
            for t in 0..rn {
                let prod = ring.mul(&iota(&wa.reps[s], true), &iota(&wb.reps[t], false))?;
                mu.push(wc.to_group(&ring.v_pow(&prod, k)?));
            }
        }
    }
    let target = &wc.module.group;
    let mu_ok = bx.raw.group.is_hom(target, &mu);
    let apply_mu = |x: &[i128]| bx.raw.group.apply(target, &mu, x);
    let relations_vanish = mu_ok && bx.relations.iter().all(|r| target.is_zero(&apply_mu(r)));
    let mu_q: Vec<GElem> = bx.quotient.lift.iter().map(|l| apply_mu(l)).collect();
    let image = quotient(target, &mu_q)?;
    let surjective = image.group.log_order() == 0;
    let orders_lhs = bx.module.group.exps.clone();
    let orders_rhs = wc.module.group.exps.clone();
    let isomorphism = relations_vanish && surjective && orders_lhs == orders_rhs;
    let q = &bx.module;
    let equivariance = (0..q.group.rank()).all(|j| {
        let e = q.group.basis(j);
        let via_f = q.group.apply(target, &mu_q, &q.apply_f(&e));
        let via_v = q.group.apply(target, &mu_q, &q.apply_v(&e));
        via_f == wc.module.apply_f(&mu_q[j]) && via_v == wc.module.apply_v(&mu_q[j])
    });
    // V^i[m ⊗ m'] = μ(([m] ⊗ [m'])V^i) on the generating set of W_n(A ⊗ B)
    let mut generators_hit = true;
    'outer: for i in 0..n {
        for ka in 0..a.dim() {
            for kb in 0..b.dim() {
                let ta = wa.to_group(&wa.ring.teichmuller(&a.basis_elem(ka)));
                let tb = wb.to_group(&wb.ring.teichmuller(&b.basis_elem(kb)));
                let lhs = apply_mu(&bx.tensor_at(&ta, &tb, i));
                let m = FiniteAlgebra::tensor_elems(&a.basis_elem(ka), &b.basis_elem(kb), p);
                let rhs = wc.to_group(&ring.v_pow(&ring.teichmuller(&m), i)?);
                if lhs != rhs {
                    generators_hit = false;
                    break 'outer;
                }
            }
        }
    }
    let projection_formula = projection_formula_holds(&wc, 64)?;
    Ok(BoxComparison {
        a: a.name().to_string(),
        b: b.name().to_string(),
        n,
        orders_lhs,
        orders_rhs,
        isomorphism,
        equivariance,
        relations_vanish,
        surjective,
        generators_hit,
        projection_formula,
        lhs_check: bx.module.check(),
        rhs_check: wc.module.check(),
    })
}

// x·V(y) = V(F(x)·y) on pairs of module generators and a few sums
fn projection_formula_holds(wc: &super::module::WittCartier<'_>, limit: usize) -> Result<bool> {
    let ring = &wc.ring;
    let reps = &wc.reps;
    let mut count = 0;
    for x in reps {
        for y in reps {
            let lhs = ring.mul(x, &ring.verschiebung(y))?;
            let rhs = ring.verschiebung(&ring.mul(&ring.frobenius(x), y)?);
            if lhs != rhs {
                return Ok(false);
            }
            count += 1;
            if count >= limit {
                return Ok(true);
            }
        }
    }
    Ok(true)
}

/// The box product at N_V = n maps onto the one at N_V = n − 1 by killing
/// level n − 1; checks the map is well defined and surjective.
pub fn truncation_coherent(m: &CartierModule, n: &CartierModule, nv: usize) -> Result<bool> {
    if nv < 2 {
        return Ok(true);
    }
    let hi = box_product(m, n, nv)?;
    let lo = box_product(m, n, nv - 1)?;
    let per_level = m.group.rank() * n.group.rank();
    let map: Vec<GElem> = (0..hi.raw.group.rank())
        .map(|g| {
            let mut e = lo.raw.group.zero();
            if g < lo.raw.group.rank() {
                e[g] = 1;
            }
            lo.project(&lo.raw.group.reduce(&e))
        })
        .collect();
    debug_assert_eq!(lo.raw.group.rank(), per_level * (nv - 1));
    let well_defined = hi.raw.group.is_hom(&lo.module.group, &map)
        && hi
            .relations
            .iter()
            .all(|r| lo.module.group.is_zero(&hi.raw.group.apply(&lo.module.group, &map, r)));
    let images: Vec<GElem> = hi
        .quotient
        .lift
        .iter()
        .map(|l| hi.raw.group.apply(&lo.module.group, &map, l))
        .collect();
    let surjective = quotient(&lo.module.group, &images)?.group.log_order() == 0;
    Ok(well_defined && surjective)
}
