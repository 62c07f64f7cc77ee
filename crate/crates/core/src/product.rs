//! Quasi-F-splittings of A ⊗ B built from splittings of the factors, and
//! certificates that a tensor product of two non-F-split algebras is not
//! quasi-F-split.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::qfsplit::{
    is_f_split, is_quasi_f_split, validate_f_split, validate_quasi_f_split, Decision, NonSplitCertificate, SplitKind,
    SplittingWitness,
};
use crate::witt::{WbarSpace, WittVector};

/// Random generator instances checked per construction.
pub const RELATION_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaChecks {
    pub instances: usize,
    /// σ((a ⊗ Vb)V^k) = σ((Fa ⊗ b)V^{k+1}) and σ((Va ⊗ b)V^k) = σ((a ⊗ Fb)V^{k+1}).
    pub relations: bool,
    /// σ((a ⊗ b)V^m) = 0 for m ≥ n.
    pub annihilation: bool,
    /// The generator formula agrees with the linear map on W̄_n(A ⊗ B).
    pub linear_extension: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaConstruction {
    pub a: String,
    pub b: String,
    pub n: usize,
    pub sigma_a: SplittingWitness,
    pub sigma_b: SplittingWitness,
    /// σ: W̄_n(A ⊗ B) → A ⊗ B in coordinates.
    pub sigma: FpMatrix,
    pub checks: SigmaChecks,
}

impl SigmaConstruction {
    pub fn witness(&self) -> SplittingWitness {
        SplittingWitness {
            kind: SplitKind::QuasiFSplit,
            n: self.n,
            phi: self.sigma.clone(),
        }
    }
}

struct Factors<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    n: usize,
    sigma_a: &'a FpMatrix,
    sigma_b: &'a FpMatrix,
    wb: WbarSpace<'a>,
}

impl Factors<'_> {
    fn sigma_a_iter(&self, x: &[u32], times: usize) -> Elem {
        let mut x = x.to_vec();
        for _ in 0..times {
            x = self.sigma_a.apply(&x);
        }
        x
    }

    /// σ_A^{k+1}(Ra) ⊗ σ_B(V^k b), zero for k ≥ n.
    fn formula(&self, x: &WittVector<Elem>, y: &WittVector<Elem>, k: usize) -> Result<Elem> {
        if k >= self.n {
            return Ok(vec![0; self.a.dim() * self.b.dim()]);
        }
        let sa = self.sigma_a_iter(&x.coords[0], k + 1);
        let vb = self.wb.ring().v_pow(y, k)?;
        let sb = self.sigma_b.apply(&self.wb.coord(&vb));
        Ok(FiniteAlgebra::tensor_elems(&sa, &sb, self.a.p()))
    }
}

fn random_witt(alg: &FiniteAlgebra, n: usize, rng: &mut ChaCha8Rng) -> WittVector<Elem> {
    let p = alg.p();
    WittVector {
        coords: (0..n)
            .map(|_| (0..alg.dim()).map(|_| rng.gen_range(0..p)).collect())
            .collect(),
    }
}

fn embed(x: &WittVector<Elem>, other: &Elem, left: bool, p: u32) -> WittVector<Elem> {
    WittVector {
        coords: x
            .coords
            .iter()
            .map(|e| {
                if left {
                    FiniteAlgebra::tensor_elems(e, other, p)
                } else {
                    FiniteAlgebra::tensor_elems(other, e, p)
                }
            })
            .collect(),
    }
}

/// σ((a ⊗ b)V^k) := σ_A^{k+1}(Ra) ⊗ σ_B(V^k b) on W̄_n(A ⊗ B).
pub fn build_product_splitting(
    a: &FiniteAlgebra,
    sigma_a: &SplittingWitness,
    b: &FiniteAlgebra,
    sigma_b: &SplittingWitness,
    n: usize,
) -> Result<SigmaConstruction> {
    if a.p() != b.p() {
        return Err(Error::RingMismatch(format!("primes {} and {}", a.p(), b.p())));
    }
    validate_f_split(sigma_a, a)?;
    let wb = WbarSpace::new(b, n)?;
    if sigma_b.n != n {
        return Err(Error::WitnessInvalid(format!("σ_B is a level-{} witness, need {n}", sigma_b.n)));
    }
    validate_quasi_f_split(sigma_b, &wb)?;
    let c = FiniteAlgebra::tensor(a, b)?;
    let wc = WbarSpace::new(&c, n)?;
    let p = a.p();
    let f = Factors {
        a,
        b,
        n,
        sigma_a: &sigma_a.phi,
        sigma_b: &sigma_b.phi,
        wb,
    };
    let ra = crate::witt::WittRing::new(a, n)?;
    let rb = f.wb.ring();
    let rc = wc.ring();
    // basis vector i of W̄_n(A ⊗ B) is V^j[e_s ⊗ f_t] = μ(([e_s] ⊗ [f_t])V^j)
    let db = b.dim();
    let mut columns = Vec::with_capacity(wc.dim());
    for i in 0..wc.dim() {
        let (j, k) = wc.rep_generator(i);
        let (s, t) = (k / db, k % db);
        debug_assert_eq!(
            FiniteAlgebra::tensor_elems(&a.basis_elem(s), &b.basis_elem(t), p),
            c.basis_elem(k)
        );
        let x = ra.teichmuller(&a.basis_elem(s));
        let y = rb.teichmuller(&b.basis_elem(t));
        columns.push(f.formula(&x, &y, j)?);
    }
    let sigma = FpMatrix::from_columns(p, &columns, c.dim());

    let mut rng = ChaCha8Rng::seed_from_u64(0x5167_6d61);
    let mut relations = true;
    let mut linear_extension = true;
    let mut annihilation = true;
    for _ in 0..RELATION_SAMPLES {
        let x = random_witt(a, n, &mut rng);
        let y = random_witt(b, n, &mut rng);
        let k = rng.gen_range(0..n);
        let r1 = f.formula(&x, &rb.verschiebung(&y), k)? == f.formula(&ra.frobenius(&x), &y, k + 1)?;
        let r2 = f.formula(&ra.verschiebung(&x), &y, k)? == f.formula(&x, &rb.frobenius(&y), k + 1)?;
        relations &= r1 && r2;
        let prod = rc.mul(&embed(&x, &b.one(), true, p), &embed(&y, &a.one(), false, p))?;
        let lin = sigma.apply(&wc.coord(&rc.v_pow(&prod, k)?));
        linear_extension &= lin == f.formula(&x, &y, k)?;
        let top = rc.v_pow(&prod, n)?;
        annihilation &= rc.is_zero(&top) && c.is_zero(&f.formula(&x, &y, n)?);
    }
    let checks = SigmaChecks {
        instances: RELATION_SAMPLES,
        relations,
        annihilation,
        linear_extension,
        verified: relations && annihilation && linear_extension,
    };
    let out = SigmaConstruction {
        a: a.name().to_string(),
        b: b.name().to_string(),
        n,
        sigma_a: sigma_a.clone(),
        sigma_b: sigma_b.clone(),
        sigma,
        checks,
    };
    if !out.checks.verified {
        return Err(Error::WitnessInvalid(format!("σ construction checks failed: {:?}", out.checks)));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiSplitVerification {
    pub n: usize,
    /// σ(F(1)) = 1.
    pub unit: bool,
    /// σ([g^p]·m) = g·σ(m) on generators g and basis vectors m.
    pub linear: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SplittingWitness>,
}

pub fn verify_quasi_splitting(sigma: &FpMatrix, c: &FiniteAlgebra, n: usize) -> Result<QuasiSplitVerification> {
    let w = WbarSpace::new(c, n)?;
    let shape_ok = sigma.rows == c.dim() && sigma.cols == w.dim();
    let unit = shape_ok && sigma.apply(&w.frobenius_of(&c.one())) == c.one();
    let witness = SplittingWitness {
        kind: SplitKind::QuasiFSplit,
        n,
        phi: sigma.clone(),
    };
    let linear = shape_ok && validate_linear(&witness, &w)?;
    let passed = unit && linear;
    Ok(QuasiSplitVerification {
        n,
        unit,
        linear,
        passed,
        witness: passed.then_some(witness),
    })
}

fn validate_linear(wit: &SplittingWitness, w: &WbarSpace<'_>) -> Result<bool> {
    let a = w.algebra();
    let ring = w.ring();
    for g in a.generators() {
        let t = ring.teichmuller(&a.frobenius(g));
        for i in 0..w.dim() {
            let moved = w.coord(&ring.mul(&t, w.rep(i))?);
            let mut e = vec![0; w.dim()];
            e[i] = 1;
            if wit.phi.apply(&moved) != a.mul(g, &wit.phi.apply(&e)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// V(ι a)·V(ι b) in W_n(A ⊗ B) against p·V(a ⊗ b).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossTerm {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    /// Witt coordinates of V([a] ⊗ 1)·V(1 ⊗ [b]).
    pub product: Vec<Vec<u32>>,
    pub equals_p_v_ab: bool,
    pub zero_mod_p: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCertificate {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub n: usize,
    pub p: u32,
    pub x_a: Vec<u32>,
    pub x_a_display: String,
    pub y_b: Vec<u32>,
    pub y_b_display: String,
    /// F(x_A) = [x_A^p] = 0, so the V-expansion of F(x_A) is empty.
    pub expansion_a: Vec<Vec<Vec<u32>>>,
    pub expansion_b: Vec<Vec<Vec<u32>>>,
    /// Coordinates of F(x_A ⊗ y_B) in W̄_n(A ⊗ B).
    pub frobenius_image: Vec<u32>,
    pub cross_terms: Vec<CrossTerm>,
    pub vanishing_verified: bool,
    pub independent: NonSplitCertificate,
    pub concurs: bool,
}

/// Certificate that A ⊗ B is not n-quasi-F-split when neither factor is F-split.
pub fn nonsplit_tensor_certificate(a: &FiniteAlgebra, b: &FiniteAlgebra, n: usize) -> Result<VanishingCertificate> {
    if a.p() != b.p() {
        return Err(Error::RingMismatch(format!("primes {} and {}", a.p(), b.p())));
    }
    for alg in [a, b] {
        if is_f_split(alg)?.is_split() {
            return Err(Error::FactorIsSplit(alg.name().to_string()));
        }
    }
    let p = a.p();
    let pick = |alg: &FiniteAlgebra| -> Result<Elem> {
        alg.frobenius_kernel()
            .into_iter()
            .next()
            .ok_or_else(|| Error::Invalid(format!("{} is not F-split but has no p-nilpotent", alg.name())))
    };
    let x = pick(a)?;
    let y = pick(b)?;
    let c = FiniteAlgebra::tensor(a, b)?;
    let wc = WbarSpace::new(&c, n)?;
    let rc = wc.ring();
    let xy = FiniteAlgebra::tensor_elems(&x, &y, p);
    let frobenius_image = wc.frobenius_of(&xy);

    let mut cross_terms = Vec::new();
    if n >= 2 {
        for s in 0..a.dim() {
            for t in 0..b.dim() {
                let ea = a.basis_elem(s);
                let eb = b.basis_elem(t);
                let va = rc.verschiebung(&rc.teichmuller(&FiniteAlgebra::tensor_elems(&ea, &b.one(), p)));
                let vb = rc.verschiebung(&rc.teichmuller(&FiniteAlgebra::tensor_elems(&a.one(), &eb, p)));
                let prod = rc.mul(&va, &vb)?;
                let vab = rc.verschiebung(&rc.teichmuller(&FiniteAlgebra::tensor_elems(&ea, &eb, p)));
                let equals_p_v_ab = prod == rc.p_times(&vab);
                let zero_mod_p = wc.coord(&prod).iter().all(|&v| v == 0);
                cross_terms.push(CrossTerm {
                    a: ea,
                    b: eb,
                    product: prod.coords.clone(),
                    equals_p_v_ab,
                    zero_mod_p,
                });
            }
        }
    }
    let vanishing_verified = frobenius_image.iter().all(|&v| v == 0)
        && !c.is_zero(&xy)
        && a.is_zero(&a.frobenius(&x))
        && b.is_zero(&b.frobenius(&y))
        && cross_terms.iter().all(|t| t.equals_p_v_ab && t.zero_mod_p);
    let decision = is_quasi_f_split(&c, n)?;
    let (independent, concurs) = match decision {
        Decision::NotSplit { certificate } => (certificate, true),
        Decision::Split { .. } => {
            return Err(Error::MethodDisagreement(format!(
                "{} ⊗ {} decided {n}-quasi-F-split",
                a.name(),
                b.name()
            )))
        }
    };
    Ok(VanishingCertificate {
        a: a.name().to_string(),
        b: b.name().to_string(),
        n,
        p,
        x_a_display: a.format_elem(&x),
        x_a: x,
        y_b_display: b.format_elem(&y),
        y_b: y,
        expansion_a: Vec::new(),
        expansion_b: Vec::new(),
        frobenius_image,
        cross_terms,
        vanishing_verified,
        independent,
        concurs,
    })
}

/// If A ⊗ B is n-quasi-F-split then one factor is F-split and the other
/// n-quasi-F-split. Returns (product split, implication holds).
pub fn converse_consistent(a: &FiniteAlgebra, b: &FiniteAlgebra, n: usize) -> Result<(bool, bool)> {
    let c = FiniteAlgebra::tensor(a, b)?;
    let split = is_quasi_f_split(&c, n)?.is_split();
    if !split {
        return Ok((false, true));
    }
    let fa = is_f_split(a)?.is_split();
    let fb = is_f_split(b)?.is_split();
    let qa = is_quasi_f_split(a, n)?.is_split();
    let qb = is_quasi_f_split(b, n)?.is_split();
    Ok((true, (fa && qb) || (fb && qa)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witnesses(a: &FiniteAlgebra, b: &FiniteAlgebra, n: usize) -> (SplittingWitness, SplittingWitness) {
        let sa = is_f_split(a).unwrap().witness().unwrap().clone();
        let sb = is_quasi_f_split(b, n).unwrap().witness().unwrap().clone();
        (sa, sb)
    }

    #[test]
    fn prime_field_product() {
        let k = FiniteAlgebra::prime_field(3).unwrap();
        for n in 1..=2 {
            let (sa, sb) = witnesses(&k, &k, n);
            let s = build_product_splitting(&k, &sa, &k, &sb, n).unwrap();
            let c = FiniteAlgebra::tensor(&k, &k).unwrap();
            assert!(verify_quasi_splitting(&s.sigma, &c, n).unwrap().passed);
        }
    }

    #[test]
    fn f4_with_cyclic() {
        let f4 = FiniteAlgebra::finite_field(2, 2).unwrap();
        let b = FiniteAlgebra::from_presentation(&["t"], &["t^3 - 1"], 2).unwrap();
        let (sa, sb) = witnesses(&f4, &b, 2);
        let s = build_product_splitting(&f4, &sa, &b, &sb, 2).unwrap();
        assert!(s.checks.verified);
        let c = FiniteAlgebra::tensor(&f4, &b).unwrap();
        assert!(verify_quasi_splitting(&s.sigma, &c, 2).unwrap().passed);
    }

    #[test]
    fn zero_map_fails() {
        let k = FiniteAlgebra::prime_field(2).unwrap();
        let w = WbarSpace::new(&k, 2).unwrap();
        let zero = FpMatrix::zeros(2, 1, w.dim());
        let r = verify_quasi_splitting(&zero, &k, 2).unwrap();
        assert!(!r.unit && !r.passed);
    }

    #[test]
    fn dual_numbers_certificate() {
        for (p, n) in [(2, 1), (2, 2), (2, 3), (3, 2)] {
            let a = FiniteAlgebra::from_presentation(&["x"], &["x^2"], p).unwrap();
            let cert = nonsplit_tensor_certificate(&a, &a, n).unwrap();
            assert!(cert.vanishing_verified && cert.concurs, "{cert:?}");
        }
    }

    #[test]
    fn split_factor_rejected() {
        let a = FiniteAlgebra::from_presentation(&["x"], &["x^2"], 2).unwrap();
        let f4 = FiniteAlgebra::finite_field(2, 2).unwrap();
        assert!(matches!(
            nonsplit_tensor_certificate(&a, &f4, 2),
            Err(Error::FactorIsSplit(_))
        ));
    }
}
