//! The Witt-vector identity suite: ring axioms, FV = VF = p, F[a] = [a]^p,
//! x·V(y) = V(F(x)y), V(x)V(y) = pV(xy), and additivity of F mod p.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ring::{WittRing, WittVector};
use super::wbar::WbarSpace;
use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::Result;

/// Ring axioms are checked on all triples, via Cayley tables, when |W|^3 is
/// at most this.
pub const EXHAUSTIVE_TRIPLES: u64 = 1 << 24;
/// Pairs are enumerated exhaustively when |W|^2 is at most this.
pub const EXHAUSTIVE_PAIRS: u64 = 1 << 16;
pub const RANDOM_SAMPLES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub instances: u64,
    pub exhaustive: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub algebra: String,
    pub p: u32,
    pub n: usize,
    pub log_p_order: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type W = WittVector<Elem>;

struct Sampler<'a> {
    a: &'a FiniteAlgebra,
    n: usize,
    rng: ChaCha8Rng,
    all: Option<Vec<W>>,
    size: u64,
}

impl Sampler<'_> {
    fn random(&mut self) -> W {
        let p = self.a.p();
        WittVector {
            coords: (0..self.n)
                .map(|_| (0..self.a.dim()).map(|_| self.rng.gen_range(0..p)).collect())
                .collect(),
        }
    }

    fn tuples(&mut self, arity: u32) -> (Vec<Vec<W>>, bool) {
        let limit = if arity >= 3 { EXHAUSTIVE_TRIPLES } else { EXHAUSTIVE_PAIRS };
        if let Some(all) = &self.all {
            if self.size.checked_pow(arity).is_some_and(|t| t <= limit) {
                let mut out: Vec<Vec<W>> = vec![Vec::new()];
                for _ in 0..arity {
                    out = out
                        .into_iter()
                        .flat_map(|t| {
                            all.iter().map(move |x| {
                                let mut t = t.clone();
                                t.push(x.clone());
                                t
                            })
                        })
                        .collect();
                }
                return (out, true);
            }
        }
        let out = (0..RANDOM_SAMPLES)
            .map(|_| (0..arity).map(|_| self.random()).collect())
            .collect();
        (out, false)
    }
}

/// All triples at once: every sum and product is computed once with the ring
/// operations, then associativity and distributivity are read off the tables.
fn ring_axioms_by_tables(r: &WittRing<'_, FiniteAlgebra>, all: &[W]) -> Result<bool> {
    let index: HashMap<&W, usize> = all.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let m = all.len();
    let lookup = |w: &W| index.get(w).copied();
    let mut add = vec![0usize; m * m];
    let mut mul = vec![0usize; m * m];
    for (i, x) in all.iter().enumerate() {
        for (j, y) in all.iter().enumerate() {
            let (Some(s), Some(t)) = (lookup(&r.add(x, y)?), lookup(&r.mul(x, y)?)) else {
                return Ok(false);
            };
            add[i * m + j] = s;
            mul[i * m + j] = t;
        }
    }
    let (Some(zero), Some(one)) = (lookup(&r.zero()), lookup(&r.one())) else {
        return Ok(false);
    };
    for x in 0..m {
        if add[x * m + zero] != x || mul[x * m + one] != x || !(0..m).any(|y| add[x * m + y] == zero) {
            return Ok(false);
        }
        for y in 0..m {
            if add[x * m + y] != add[y * m + x] || mul[x * m + y] != mul[y * m + x] {
                return Ok(false);
            }
            let (sxy, pxy) = (add[x * m + y], mul[x * m + y]);
            for z in 0..m {
                let assoc_add = add[sxy * m + z] == add[x * m + add[y * m + z]];
                let assoc_mul = mul[pxy * m + z] == mul[x * m + mul[y * m + z]];
                let dist = mul[x * m + add[y * m + z]] == add[pxy * m + mul[x * m + z]];
                if !(assoc_add && assoc_mul && dist) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn check(name: &str, tuples: &[Vec<W>], exhaustive: bool, f: impl Fn(&[W]) -> Result<bool>) -> Result<IdentityCheck> {
    let mut passed = true;
    for t in tuples {
        if !f(t)? {
            passed = false;
            break;
        }
    }
    Ok(IdentityCheck {
        name: name.into(),
        instances: tuples.len() as u64,
        exhaustive,
        passed,
    })
}

pub fn run_identity_suite(a: &FiniteAlgebra, n: usize, seed: u64) -> Result<IdentityReport> {
    let ring = WittRing::new(a, n)?;
    let p = a.p();
    let log_order = n * a.dim();
    let size = (p as u64).checked_pow(log_order as u32).unwrap_or(u64::MAX);
    let all = (size <= 1 << 12).then(|| ring.elements_from(&a.elements().collect::<Vec<_>>(), n));
    let mut s = Sampler {
        a,
        n,
        rng: ChaCha8Rng::seed_from_u64(seed),
        all,
        size,
    };
    let r = &ring;
    let mut checks = Vec::new();

    let exhaustive_triples = s.all.as_ref().filter(|_| s.size.checked_pow(3).is_some_and(|t| t <= EXHAUSTIVE_TRIPLES));
    if let Some(all) = exhaustive_triples {
        checks.push(IdentityCheck {
            name: "ring axioms".into(),
            instances: s.size.pow(3),
            exhaustive: true,
            passed: ring_axioms_by_tables(r, all)?,
        });
    } else {
        let (triples, ex3) = s.tuples(3);
        checks.push(check("ring axioms", &triples, ex3, |t| {
            let (x, y, z) = (&t[0], &t[1], &t[2]);
            let assoc_add = r.add(&r.add(x, y)?, z)? == r.add(x, &r.add(y, z)?)?;
            let assoc_mul = r.mul(&r.mul(x, y)?, z)? == r.mul(x, &r.mul(y, z)?)?;
            let comm = r.add(x, y)? == r.add(y, x)? && r.mul(x, y)? == r.mul(y, x)?;
            let dist = r.mul(x, &r.add(y, z)?)? == r.add(&r.mul(x, y)?, &r.mul(x, z)?)?;
            let units = r.add(x, &r.zero())? == *x && r.mul(x, &r.one())? == *x && r.is_zero(&r.add(x, &r.neg(x))?);
            Ok(assoc_add && assoc_mul && comm && dist && units)
        })?);
    }

    let (pairs, ex2) = s.tuples(2);
    checks.push(check("FV = VF = p", &pairs, ex2, |t| {
        let x = &t[0];
        let px = r.p_times(x);
        let by_addition = (1..p).try_fold(x.clone(), |acc, _| r.add(&acc, x))?;
        Ok(r.frobenius(&r.verschiebung(x)) == px && r.verschiebung(&r.frobenius(x)) == px && by_addition == px)
    })?);
    checks.push(check("F, V and R are additive; F multiplicative", &pairs, ex2, |t| {
        let (x, y) = (&t[0], &t[1]);
        let f_add = r.frobenius(&r.add(x, y)?) == r.add(&r.frobenius(x), &r.frobenius(y))?;
        let f_mul = r.frobenius(&r.mul(x, y)?) == r.mul(&r.frobenius(x), &r.frobenius(y))?;
        let v_add = r.verschiebung(&r.add(x, y)?) == r.add(&r.verschiebung(x), &r.verschiebung(y))?;
        let mut r_ok = true;
        for k in 1..n {
            let (rx, ry) = (r.restriction(x, k)?, r.restriction(y, k)?);
            r_ok &= r.restriction(&r.add(x, y)?, k)? == r.add(&rx, &ry)?;
            r_ok &= r.restriction(&r.mul(x, y)?, k)? == r.mul(&rx, &ry)?;
        }
        Ok(f_add && f_mul && v_add && r_ok)
    })?);
    checks.push(check("projection formula x·V(y) = V(F(x)y)", &pairs, ex2, |t| {
        let (x, y) = (&t[0], &t[1]);
        Ok(r.mul(x, &r.verschiebung(y))? == r.verschiebung(&r.mul(&r.frobenius(x), y)?))
    })?);
    checks.push(check("V(x)V(y) = pV(xy)", &pairs, ex2, |t| {
        let (x, y) = (&t[0], &t[1]);
        Ok(r.mul(&r.verschiebung(x), &r.verschiebung(y))? == r.p_times(&r.verschiebung(&r.mul(x, y)?)))
    })?);

    let base: Vec<Elem> = if a.dim() as u32 * p.ilog2() <= 12 {
        a.elements().collect()
    } else {
        (0..RANDOM_SAMPLES).map(|_| s.random().coords[0].clone()).collect()
    };
    let exhaustive_base = base.len() as u64 == (p as u64).pow(a.dim() as u32);
    let mut tp = true;
    for x in &base {
        for y in base.iter().take(16) {
            let t = r.teichmuller(x);
            tp &= r.frobenius(&t) == r.teichmuller(&a.pow(x, p as u64));
            tp &= r.frobenius(&t) == (1..p).try_fold(t.clone(), |acc, _| r.mul(&acc, &t))?;
            tp &= r.mul(&t, &r.teichmuller(y))? == r.teichmuller(&a.mul(x, y));
        }
    }
    checks.push(IdentityCheck {
        name: "F([a]) = [a]^p = [a^p], [a][b] = [ab]".into(),
        instances: base.len() as u64,
        exhaustive: exhaustive_base,
        passed: tp,
    });

    // additive order of 1 is p^n
    let mut acc = r.one();
    let mut order = 1u64;
    while !r.is_zero(&acc) && order <= (p as u64).pow(n as u32) {
        acc = r.add(&acc, &r.one())?;
        order += 1;
    }
    checks.push(IdentityCheck {
        name: "additive order of [1] is p^n".into(),
        instances: 1,
        exhaustive: true,
        passed: order == (p as u64).pow(n as u32),
    });

    let w = WbarSpace::new(a, n)?;
    let mut fadd = true;
    for _ in 0..200 {
        let x = s.random().coords[0].clone();
        let y = s.random().coords[0].clone();
        let lhs = w.frobenius_of(&a.add(&x, &y));
        let rhs: Vec<u32> = w
            .frobenius_of(&x)
            .iter()
            .zip(w.frobenius_of(&y))
            .map(|(u, v)| (u + v) % p)
            .collect();
        fadd &= lhs == rhs;
    }
    checks.push(IdentityCheck {
        name: "F: A → W̄_n(A) additive".into(),
        instances: 200,
        exhaustive: false,
        passed: fadd,
    });

    Ok(IdentityReport {
        algebra: a.name().to_string(),
        p,
        n,
        log_p_order: log_order,
        checks,
    })
}
