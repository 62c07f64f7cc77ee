//! Heights of abelian products and the Artin–Mazur oracle for Calabi–Yau
//! hypersurfaces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::curve::{p_rank_elliptic, PRankRecord, PlaneCurve};
use crate::error::{cap, Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::qfsplit::{Height, HeightReport, Method};

pub const MAX_AM_HEIGHT: u32 = 4;
/// Cap on the monomials kept while expanding powers.
const MAX_EXPANSION_TERMS: u64 = 2_000_000;

/// 1 if f = g, 2 if f = g − 1, ∞ if f ≤ g − 2.
pub fn abelian_height(g: u32, p_rank: u32) -> Result<Height> {
    if g == 0 || p_rank > g {
        return Err(Error::InvalidRank { g, p_rank });
    }
    Ok(match g - p_rank {
        0 => Height::Finite(1),
        1 => Height::Finite(2),
        _ => Height::Infinite,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductConsistency {
    pub g: u32,
    pub p_rank: u32,
    pub supersingular_factors: u32,
    /// Height 1: no supersingular factor; 2: exactly one; ∞: at least two.
    pub product_theorems_agree: bool,
}

/// p-ranks are additive over products.
pub fn product_height_report(factors: &[PlaneCurve]) -> Result<(HeightReport, ProductConsistency, Vec<PRankRecord>)> {
    if factors.is_empty() {
        return Err(Error::InvalidRank { g: 0, p_rank: 0 });
    }
    let p = factors[0].p;
    if factors.iter().any(|c| c.p != p) {
        return Err(Error::RingMismatch("factors over different primes".into()));
    }
    let records = factors.iter().map(p_rank_elliptic).collect::<Result<Vec<_>>>()?;
    let g = factors.len() as u32;
    let p_rank: u32 = records.iter().map(|r| r.p_rank).sum();
    let height = abelian_height(g, p_rank)?;
    let ss = g - p_rank;
    let agree = match height {
        Height::Finite(1) => ss == 0,
        Height::Finite(2) => ss == 1,
        Height::Infinite => ss >= 2,
        _ => false,
    };
    let subject = factors.iter().map(|c| format!("({})", c.name)).collect::<Vec<_>>().join(" x ");
    let report = HeightReport {
        subject,
        method: Method::PRankFormula,
        height,
        n_max: 0,
        bound: None,
        witness: None,
        certificate: None,
        levels: Vec::new(),
        notes: vec![format!("g = {g}, p-rank = {p_rank}")],
    };
    let consistency = ProductConsistency {
        g,
        p_rank,
        supersingular_factors: ss,
        product_theorems_agree: agree,
    };
    Ok((report, consistency, records))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmHeight {
    pub height: Height,
    /// a_{p^h} mod p^h for h = 1, 2, …
    pub coefficients: Vec<u64>,
    /// a_p ≠ 0 mod p, which should coincide with height 1.
    pub hasse_nonzero: bool,
}

/// a_m = coefficient of (x_0⋯x_n)^{m−1} in f^{m−1}; the height is the least
/// h with v_p(a_{p^h}) < h, searched up to h_max.
pub fn am_height_cy(f: &Polynomial, h_max: u32) -> Result<AmHeight> {
    cap("Artin–Mazur search height", h_max as u64, MAX_AM_HEIGHT as u64)?;
    let nv = f.nvars();
    if !f.is_homogeneous() || f.total_degree() as usize != nv {
        return Err(Error::Invalid("Calabi–Yau hypersurface needs degree = number of variables".into()));
    }
    let p = f.p as u64;
    let mut coefficients = Vec::new();
    let mut height = Height::Above(h_max);
    for h in 1..=h_max {
        let modulus = p.pow(h);
        let n = p.pow(h) - 1;
        let a = diagonal_coefficient(f, n, modulus)?;
        coefficients.push(a);
        if a != 0 {
            height = Height::Finite(h);
            break;
        }
    }
    let hasse_nonzero = coefficients[0] != 0;
    Ok(AmHeight {
        height,
        coefficients,
        hasse_nonzero,
    })
}

/// Coefficient of (x_0⋯x_n)^e in f^e over Z/modulus, lifting the F_p
/// coefficients of f to 0..p−1.
fn diagonal_coefficient(f: &Polynomial, e: u64, modulus: u64) -> Result<u64> {
    let nv = f.nvars();
    let terms: Vec<(Monomial, u64)> = f.terms().map(|(m, c)| (m.clone(), c as u64)).collect();
    let bound = e as u32;
    // f^⌈e/2⌉ and f^⌊e/2⌋, then pair complementary monomials
    let half = e.div_ceil(2);
    let mut powers: Vec<HashMap<Monomial, u64>> = Vec::new();
    let mut cur: HashMap<Monomial, u64> = HashMap::from([(vec![0; nv], 1 % modulus)]);
    powers.push(cur.clone());
    for _ in 0..half {
        let mut next: HashMap<Monomial, u64> = HashMap::with_capacity(cur.len() * 2);
        for (m, c) in &cur {
            for (t, d) in &terms {
                let prod: Monomial = m.iter().zip(t).map(|(a, b)| a + b).collect();
                if prod.iter().any(|&x| x > bound) {
                    continue;
                }
                let v = next.entry(prod).or_insert(0);
                *v = (*v + c * d) % modulus;
            }
        }
        next.retain(|_, v| *v != 0);
        cap("expansion terms", next.len() as u64, MAX_EXPANSION_TERMS)?;
        cur = next;
        powers.push(cur.clone());
    }
    let lo = &powers[(e - half) as usize];
    let hi = &powers[half as usize];
    let mut acc = 0u64;
    for (m, c) in hi {
        let comp: Monomial = m.iter().map(|&x| bound - x).collect();
        if let Some(d) = lo.get(&comp) {
            acc = (acc + c * d) % modulus;
        }
    }
    Ok(acc)
}
