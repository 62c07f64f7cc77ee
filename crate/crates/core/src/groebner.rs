//! Buchberger's algorithm for small zero-dimensional ideals.

use crate::error::{cap, Error, Result};
use crate::field;
use crate::poly::{divides, lcm, Monomial, MonomialOrder, Polynomial};

pub const MAX_VARS: usize = 6;
pub const MAX_DEGREE: u32 = 12;
const MAX_PAIRS: u64 = 20_000;

/// Remainder of `f` on division by `basis`.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let p = f.p;
    let leads: Vec<(Monomial, u32)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading(order).expect("zero polynomial in basis");
            (m.clone(), c)
        })
        .collect();
    let mut rem = Polynomial::zero(p, &f.variables);
    let mut work = f.clone();
    while let Some((lm, lc)) = work.leading(order).map(|(m, c)| (m.clone(), c)) {
        let hit = leads.iter().position(|(m, _)| divides(m, &lm));
        match hit {
            Some(i) => {
                let (gm, gc) = &leads[i];
                let q: Monomial = lm.iter().zip(gm).map(|(a, b)| a - b).collect();
                let c = field::mul(lc, field::inv(*gc, p), p);
                work = work.sub(&basis[i].mul_monomial(&q, c));
            }
            None => {
                rem.add_term(lm.clone(), lc);
                work.add_term(lm, field::neg(lc, p));
            }
        }
    }
    rem
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let p = f.p;
    let (fm, fc) = f.leading(order).unwrap();
    let (gm, gc) = g.leading(order).unwrap();
    let l = lcm(fm, gm);
    let qf: Monomial = l.iter().zip(fm).map(|(a, b)| a - b).collect();
    let qg: Monomial = l.iter().zip(gm).map(|(a, b)| a - b).collect();
    f.mul_monomial(&qf, field::inv(fc, p))
        .sub(&g.mul_monomial(&qg, field::inv(gc, p)))
}

fn monic(f: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (_, c) = f.leading(order).unwrap();
    f.scale(field::inv(c, f.p))
}

/// Reduced Gröbner basis of the ideal generated by `generators`.
pub fn groebner_basis(generators: &[Polynomial], order: MonomialOrder) -> Result<Vec<Polynomial>> {
    let Some(first) = generators.first() else {
        return Ok(Vec::new());
    };
    cap("variables", first.nvars() as u64, MAX_VARS as u64)?;
    for g in generators {
        if g.variables != first.variables || g.p != first.p {
            return Err(Error::RingMismatch("generators over different rings".into()));
        }
        cap("generator degree", g.total_degree() as u64, MAX_DEGREE as u64)?;
    }
    let mut basis: Vec<Polynomial> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| monic(g, order))
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let mut processed: u64 = 0;
    while let Some((i, j)) = pairs.pop() {
        processed += 1;
        cap("S-polynomial pairs", processed, MAX_PAIRS)?;
        let (mi, _) = basis[i].leading(order).unwrap();
        let (mj, _) = basis[j].leading(order).unwrap();
        // coprime leading monomials reduce to zero
        if mi.iter().zip(mj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = lcm(mi, mj);
        cap("S-polynomial degree", l.iter().sum::<u32>() as u64, MAX_DEGREE as u64)?;
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = normal_form(&s, &basis, order);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(monic(&r, order));
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    Ok(reduce_basis(basis, order))
}

fn reduce_basis(mut basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Polynomial> = Vec::new();
    basis.sort_by(|a, b| order.cmp(a.leading(order).unwrap().0, b.leading(order).unwrap().0));
    for g in basis {
        let lm = g.leading(order).unwrap().0.clone();
        if keep.iter().any(|h| divides(h.leading(order).unwrap().0, &lm)) {
            continue;
        }
        keep.retain(|h| !divides(&lm, h.leading(order).unwrap().0));
        keep.push(g);
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Polynomial> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let lead = keep[i].leading(order).unwrap();
        let lead_poly = Polynomial::monomial(keep[i].p, &keep[i].variables, lead.0.clone(), lead.1);
        let tail = keep[i].sub(&lead_poly);
        out.push(lead_poly.add(&normal_form(&tail, &others, order)));
    }
    out.sort_by(|a, b| order.cmp(a.leading(order).unwrap().0, b.leading(order).unwrap().0));
    out
}

/// Standard monomials of a zero-dimensional ideal, or the first variable
/// lacking a pure-power leading term.
pub fn staircase(basis: &[Polynomial], nvars: usize, order: MonomialOrder) -> std::result::Result<Vec<Monomial>, usize> {
    let leads: Vec<Monomial> = basis.iter().map(|g| g.leading(order).unwrap().0.clone()).collect();
    let mut bounds = vec![0u32; nvars];
    for (v, b) in bounds.iter_mut().enumerate() {
        let pure = leads
            .iter()
            .filter(|m| m.iter().enumerate().all(|(i, &e)| i == v || e == 0) && m[v] > 0)
            .map(|m| m[v])
            .min();
        match pure {
            Some(e) => *b = e,
            None => return Err(v),
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        if !leads.iter().any(|m| divides(m, &cur)) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == nvars {
                out.sort_by(|a, b| order.cmp(a, b));
                return Ok(out);
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::var_names;

    fn parse_all(src: &[&str], v: &[String], p: u32) -> Vec<Polynomial> {
        src.iter().map(|s| Polynomial::parse(s, v, p).unwrap()).collect()
    }

    #[test]
    fn single_monomial() {
        let v = var_names(&["x"]);
        let g = groebner_basis(&parse_all(&["x^2"], &v, 2), MonomialOrder::Lex).unwrap();
        assert_eq!(g, parse_all(&["x^2"], &v, 2));
    }

    #[test]
    fn buchberger_criterion_holds() {
        let v = var_names(&["x", "y"]);
        let o = MonomialOrder::Grevlex;
        let g = groebner_basis(&parse_all(&["y^2 - x^3", "x^4"], &v, 5), o).unwrap();
        let x4 = Polynomial::parse("x^4", &v, 5).unwrap();
        assert!(normal_form(&x4, &g, o).is_zero());
        let f = Polynomial::parse("y^2 - x^3", &v, 5).unwrap();
        assert!(normal_form(&f, &g, o).is_zero());
        for i in 0..g.len() {
            for j in 0..i {
                assert!(normal_form(&s_polynomial(&g[i], &g[j], o), &g, o).is_zero());
            }
        }
        assert_eq!(groebner_basis(&g, o).unwrap(), g);
    }

    #[test]
    fn char_two_collapse() {
        let v = var_names(&["x", "y"]);
        let g = groebner_basis(&parse_all(&["x+y", "x-y"], &v, 2), MonomialOrder::Lex).unwrap();
        assert_eq!(g, parse_all(&["x+y"], &v, 2));
    }

    #[test]
    fn staircase_detects_infinite() {
        let v = var_names(&["x", "y"]);
        let g = groebner_basis(&parse_all(&["x^2"], &v, 3), MonomialOrder::Grevlex).unwrap();
        assert_eq!(staircase(&g, 2, MonomialOrder::Grevlex), Err(1));
    }

    #[test]
    fn degree_cap() {
        let v = var_names(&["x"]);
        let r = groebner_basis(&parse_all(&["x^13"], &v, 3), MonomialOrder::Grevlex);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }
}
